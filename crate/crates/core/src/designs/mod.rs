//! Providers for the uniform ingredients: `C_l`-factorizations of `K_v*`
//! and of complete multipartite graphs `K_t[z]`, and their expansions.
//!
//! None of these is attempted in full generality. Each provider tries a
//! fixed cascade of constructions and refuses, with the list of what it
//! tried, when the request is outside their reach.

pub mod latin;
pub mod shift;
pub mod store;
pub mod walecki;

pub use latin::{c3_fact_k3n, orthogonal_pair, MolsSquare};
pub use store::{design_store, DesignStore};
pub use shift::shift_invariant_search;
pub use walecki::walecki;

use crate::assembly::{block_matching, matching_to_standard, merge_blocks, relabel_factors};
use crate::certify::{Certificate, Claim};
use crate::error::{impossible, invalid, unsupported, HwpError, Refusal, Result};
use crate::graph::{additive_order, GraphSpec};
use crate::lex::{lex_expand, LexSkeleton};
use crate::matrix::{expand_matrix, Block, DiffMatrix};
use crate::oracle::{exhaustive_factorize, OracleConfig, OracleOutcome};

/// `(l, t, z)` for which `K_t[z]` has no `C_l`-factorization although the
/// divisibility conditions hold.
pub const LIU_EXCEPTIONS: [(usize, usize, usize); 4] = [(3, 3, 2), (3, 6, 2), (3, 3, 6), (6, 2, 6)];

/// Node budget for the exhaustive fallbacks inside the cascades.
const CASCADE_NODE_LIMIT: u64 = 5_000_000;

/// Node budget for the shift-invariant search.
const SHIFT_NODE_LIMIT: u64 = 2_000_000;

fn cascade_search(graph: GraphSpec, claim: Claim, trace: &mut Vec<String>) -> Result<Option<Certificate>> {
    let cfg = OracleConfig {
        node_limit: CASCADE_NODE_LIMIT,
        ..OracleConfig::default()
    };
    let name = graph.describe();
    match exhaustive_factorize(&graph, claim, &cfg)? {
        OracleOutcome::Found(mut cert) => {
            cert.trace = vec![format!("{name}: exhaustive search")];
            Ok(Some(cert))
        }
        OracleOutcome::ProvablyNone => impossible(format!("exhaustive search shows {name} has no C_{}-factorization", claim.m)),
        OracleOutcome::LimitExceeded { nodes } => {
            trace.push(format!("{name}: exhaustive search gave up after {nodes} nodes"));
            Ok(None)
        }
    }
}

/// Folds a refusal of a sub-request into `trace`; other errors pass through.
fn absorb(result: Result<Certificate>, trace: &mut Vec<String>) -> Result<Option<Certificate>> {
    match result {
        Ok(c) => Ok(Some(c)),
        Err(HwpError::Refused(r)) => {
            match r {
                Refusal::Unsupported { trace: inner } => trace.extend(inner),
                other => trace.push(other.to_string()),
            }
            Ok(None)
        }
        Err(HwpError::Budget(what)) => {
            trace.push(format!("search budget exhausted for {what}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// A `C_l`-factorization of `K_v*`.
pub fn uniform_op(v: usize, l: usize) -> Result<Certificate> {
    uniform_inner(v, l, l)
}

/// Splits only through blocks of order `w >= min_block`.
fn uniform_inner(v: usize, l: usize, min_block: usize) -> Result<Certificate> {
    if l < 3 || v % l != 0 {
        return invalid(format!("a C_{l}-factorization of K_{v}* needs l >= 3 and l | v"));
    }
    if l == 3 && (v == 6 || v == 12) {
        return impossible(format!("no C_3-factorization of K_{v}*"));
    }
    if l == v {
        return walecki(v);
    }
    if let Some((name, cert)) = design_store()?.uniform(v, l) {
        let mut cert = cert.clone();
        cert.trace = vec![format!("stored design {name}")];
        return Ok(cert);
    }
    let mut trace = vec![format!("C_{l}-factorization of K_{v}*: no stored design")];
    for w in (min_block..v).rev().filter(|w| v % w == 0 && w % l == 0) {
        let t = v / w;
        if (t - 1) * w % 2 == 1 {
            continue;
        }
        let Some(blocks) = absorb(uniform_op(w, l), &mut trace)? else {
            continue;
        };
        let Some(cross) = absorb(kt_z_fact(t, w, l), &mut trace)? else {
            continue;
        };
        let mut factors = merge_blocks(&vec![&blocks; t], w)?;
        factors.extend(cross.factors.iter().cloned());
        if v % 2 == 0 {
            let perm = matching_to_standard(v, &block_matching(t, w))?;
            factors = relabel_factors(&factors, &perm);
        }
        let mut steps = vec![format!("K_{v}* = {t} K_{w}* + K_{t}[{w}]")];
        steps.extend(blocks.trace.iter().cloned());
        steps.extend(cross.trace.iter().cloned());
        let count = factors.len();
        return Certificate::verified(GraphSpec::complete_star(v), Claim::uniform(l, count), factors, steps);
    }
    if v <= OracleConfig::default().bound {
        let claim = Claim::uniform(l, (v - 1) / 2);
        if let Some(cert) = cascade_search(GraphSpec::complete_star(v), claim, &mut trace)? {
            return Ok(cert);
        }
    }
    trace.push(format!("C_{l}-factorization of K_{v}*: no strategy applies"));
    unsupported(trace)
}

/// A `C_l`-factorization of the complete multipartite graph `K_t[z]`.
pub fn kt_z_fact(t: usize, z: usize, l: usize) -> Result<Certificate> {
    if l < 3 || t < 2 || z == 0 {
        return invalid(format!("K_{t}[{z}] with C_{l}: need l >= 3, t >= 2, z >= 1"));
    }
    if (t * z) % l != 0 {
        return invalid(format!("K_{t}[{z}] with C_{l}: l must divide tz"));
    }
    if (t - 1) * z % 2 != 0 {
        return invalid(format!("K_{t}[{z}] with C_{l}: (t-1)z must be even"));
    }
    if t == 2 && l % 2 == 1 {
        return invalid(format!("K_2[{z}] is bipartite, so l must be even"));
    }
    if LIU_EXCEPTIONS.contains(&(l, t, z)) {
        return impossible(format!("no C_{l}-factorization of K_{t}[{z}]"));
    }
    if l == 3 && t == 3 {
        return c3_fact_k3n(z);
    }
    let mut trace = Vec::new();
    if l == 3 && z == 3 && t % 2 == 1 {
        if let Some(cert) = absorb(kts_without_class(t), &mut trace)? {
            return Ok(cert);
        }
    }
    if t % 2 == 1 && l % t == 0 && z % (l / t) == 0 {
        if let Some(cert) = absorb(walecki_expansion(t, z, l / t), &mut trace)? {
            return Ok(cert);
        }
    }
    if let Some(cert) = shift_invariant_search(t, z, l, SHIFT_NODE_LIMIT)? {
        return Ok(cert);
    }
    trace.push(format!("K_{t}[{z}]: no shift-invariant factorization within {SHIFT_NODE_LIMIT} nodes"));
    if t * z <= OracleConfig::default().bound {
        let claim = Claim::uniform(l, (t - 1) * z / 2);
        if let Some(cert) = cascade_search(GraphSpec::multipartite(t, z), claim, &mut trace)? {
            return Ok(cert);
        }
    }
    trace.push(format!("C_{l}-factorization of K_{t}[{z}]: no strategy applies"));
    unsupported(trace)
}

/// `K_t[3]` from a Kirkman triple system on `3t` points: one parallel class
/// is relabeled onto the groups and dropped.
fn kts_without_class(t: usize) -> Result<Certificate> {
    // blocks of order 3 would lead straight back here
    let kts = uniform_inner(3 * t, 3, 9)?;
    let mut perm = vec![0; 3 * t];
    for (p, tri) in kts.factors[0].iter().enumerate() {
        for (i, &x) in tri.iter().enumerate() {
            perm[x] = 3 * p + i;
        }
    }
    let factors = relabel_factors(&kts.factors[1..], &perm);
    let mut trace = vec![format!("K_{t}[3]: a KTS({}) minus one parallel class", 3 * t)];
    trace.extend(kts.trace.iter().cloned());
    let count = factors.len();
    Certificate::verified(GraphSpec::multipartite(t, 3), Claim::uniform(3, count), factors, trace)
}

/// `K_t[z]` for odd `t` as the expansion of Walecki's cycles of `K_t`, each
/// `C_t[z]` factored into cycles of length `t * g` by a difference matrix.
fn walecki_expansion(t: usize, z: usize, g: usize) -> Result<Certificate> {
    let Some(rows) = order_g_matrix(z, g) else {
        return unsupported(vec![format!("no difference matrix over Z_{z} with all row sums of order {g}")]);
    };
    let matrix = DiffMatrix::over_zn(z, &rows)?;
    let inner_factors = expand_matrix(&matrix, t)?;
    let inner = Certificate::verified(GraphSpec::cm_n(t, z), Claim::uniform(t * g, z), inner_factors, vec![])?;
    let skeleton = lex_expand(&walecki(t)?, z)?;
    let filled = skeleton.fill_uniform(&inner)?;
    let trace = vec![format!(
        "K_{t}[{z}]: Walecki cycles of K_{t} expanded by {z}, each C_{t}[{z}] cut into {}-cycles",
        t * g
    )];
    Certificate::verified(GraphSpec::multipartite(t, z), filled.claim, filled.factors, trace)
}

/// Three-column matrix over `Z_z` whose columns are permutations and whose
/// row sums all have order `g`.
pub fn order_g_matrix(z: usize, g: usize) -> Option<Block> {
    if g == 0 || z % g != 0 {
        return None;
    }
    let zi = z as i64;
    if z % 2 == 1 {
        // rows [x/2, x/2, c - x] with c = z/g
        let half = (zi + 1) / 2;
        let c = (z / g) as i64;
        return Some((0..zi).map(|x| vec![x * half % zi, x * half % zi, c - x]).collect());
    }
    let targets: Vec<usize> = (0..z).filter(|&s| additive_order(s as u64, z as u64) as usize == g).collect();
    let mut b = vec![usize::MAX; z];
    let mut c = vec![usize::MAX; z];
    let (mut used_b, mut used_c) = (vec![false; z], vec![false; z]);
    let mut nodes = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn place(
        x: usize,
        z: usize,
        targets: &[usize],
        b: &mut [usize],
        c: &mut [usize],
        used_b: &mut [bool],
        used_c: &mut [bool],
        nodes: &mut u64,
    ) -> bool {
        if x == z {
            return true;
        }
        *nodes += 1;
        if *nodes > 200_000 {
            return false;
        }
        for bv in 0..z {
            if used_b[bv] {
                continue;
            }
            for &s in targets {
                let cv = (s + 2 * z - x - bv) % z;
                if used_c[cv] {
                    continue;
                }
                used_b[bv] = true;
                used_c[cv] = true;
                b[x] = bv;
                c[x] = cv;
                if place(x + 1, z, targets, b, c, used_b, used_c, nodes) {
                    return true;
                }
                used_b[bv] = false;
                used_c[cv] = false;
            }
        }
        false
    }
    place(0, z, &targets, &mut b, &mut c, &mut used_b, &mut used_c, &mut nodes)
        .then(|| (0..z).map(|x| vec![x as i64, b[x] as i64, c[x] as i64]).collect())
}

/// `C_l[n]`-factorization of `K_t[zn]`: a `C_l`-factorization of `K_t[z]`
/// with every point expanded `n` times.
pub fn liu_gen(l: usize, t: usize, z: usize, n: usize) -> Result<LexSkeleton> {
    let base = kt_z_fact(t, z, l)?;
    lex_expand(&base, n)
}
