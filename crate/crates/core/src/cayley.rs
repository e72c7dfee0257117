//! Hamiltonian factorizations of the small Cayley graphs `C_M[S]` that the
//! `C_M[n]` constructions split off.
//!
//! `C_M[2]` is handled by explicit patterns. The 4- and 6-regular graphs
//! `C_M[{d, d+1}]` and `C_M[{n/2-1, n/2, n/2+1}]` are known to have
//! Hamiltonian factorizations, but the proofs are not constructive in a
//! usable form, so they are found by a seeded local search and verified.
//! Results are memoized in memory and optionally in a JSON file named by
//! `HWP_CACHE`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::{Certificate, Claim, Cycle};
use crate::error::{invalid, HwpError, Result};
use crate::graph::{enumerate_edges, is_connected_cayley, CayleySpec, GraphSpec};
use crate::matrix::{expand_matrix, DiffMatrix};

/// Largest `M * n` handed to the search.
pub const SEARCH_ENVELOPE: usize = 120;

const MAX_RESTARTS: u64 = 200;

/// Hamiltonian factorization of `C_M[{0, 1}]`.
pub fn ham_fact_cm2(m: usize) -> Result<Certificate> {
    if m < 3 {
        return invalid(format!("C_M[2] needs M >= 3, got {m}"));
    }
    let graph = GraphSpec::cm_n(m, 2);
    let claim = Claim::new(m, 2 * m, 0, 2);
    if m % 2 == 0 {
        // every column is a permutation of Z_2 and both rows sum to 1
        let mut up = vec![0i64; m];
        up[m - 1] = 1;
        let down: Vec<i64> = up.iter().map(|&e| 1 - e).collect();
        let mat = DiffMatrix::over_zn(2, &vec![up, down])?;
        let factors = expand_matrix(&mat, m)?;
        return Certificate::verified(graph, claim, factors, vec![format!("C_{m}[2]: rows (0..0,1), (1..1,0)")]);
    }
    // Odd M: a pattern on three levels, stretched by inserting pairs of
    // levels between levels 0 and 1.
    let v = |level: usize, x: usize| level * 2 + x;
    let top = m - 2;
    let last = m - 1;
    let mut a: Cycle = (0..=top).map(|l| v(l, 0)).collect();
    a.push(v(last, 0));
    a.extend((0..=top).rev().map(|l| v(l, 1)));
    a.push(v(last, 1));
    let mut b: Cycle = (0..=top).map(|l| v(l, l % 2)).collect();
    b.push(v(last, 1));
    b.extend((0..=top).rev().map(|l| v(l, (top - l) % 2)));
    b.push(v(last, 0));
    Certificate::verified(
        graph,
        claim,
        vec![vec![a], vec![b]],
        vec![format!("C_{m}[2]: stretched three-level pattern")],
    )
}

/// Hamiltonian factorization of the connected 4-regular `C_M[{d, d+1}]`.
pub fn ham_fact_4reg(m: usize, n: usize, s: [usize; 2]) -> Result<Certificate> {
    let mut s = [s[0] % n, s[1] % n];
    s.sort_unstable();
    if m < 3 || s[0] == s[1] {
        return invalid(format!("C_{m}[{s:?}] is not a 4-regular cycle graph"));
    }
    let spec = CayleySpec::from_cycle_lex(m, n, &s)?;
    if !is_connected_cayley(&spec) {
        return invalid(format!("C_{m}[{s:?}] over Z_{n} is disconnected"));
    }
    if n == 2 {
        return ham_fact_cm2(m);
    }
    searched(m, n, &s)
}

/// Hamiltonian factorization of `C_M[{n/2-1, n/2, n/2+1}]`.
pub fn ham_fact_6reg(m: usize, n: usize) -> Result<Certificate> {
    if m < 3 || n < 4 || n % 2 != 0 || (m * n) % 4 != 0 {
        return invalid(format!("the 6-regular split needs n >= 4 even and Mn = 0 mod 4, got M = {m}, n = {n}"));
    }
    let s = [n / 2 - 1, n / 2, n / 2 + 1];
    let index = CayleySpec::from_cycle_lex(m, n, &s)?.index_of((1, n / 2));
    let diagnostic = format!("index of <(1,{})> in Z_{m} x Z_{n} is {index}", n / 2);
    if m % 2 == 1 && n == 4 {
        // C_M[{1}] is a single cycle since (1,1) has order 4M
        let single = DiffMatrix::new(4, [1], &vec![vec![1; m]])?;
        let mut factors = expand_matrix(&single, m)?;
        let rest = ham_fact_4reg(m, 4, [2, 3])?;
        factors.extend(rest.factors);
        let trace = vec![format!("C_{m}[{{1,2,3}}] = C_{m}[{{1}}] + C_{m}[{{2,3}}]"), diagnostic];
        return Certificate::verified(GraphSpec::cycle_lex(m, n, s), Claim::new(m, m * n, 0, 3), factors, trace);
    }
    let mut cert = searched(m, n, &s)?;
    cert.trace.push(diagnostic);
    Ok(cert)
}

fn cache_key(m: usize, n: usize, s: &[usize]) -> String {
    format!("({m},{n},{s:?})")
}

fn cache() -> &'static RwLock<HashMap<String, Certificate>> {
    static CACHE: OnceLock<RwLock<HashMap<String, Certificate>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(load_disk_cache()))
}

fn load_disk_cache() -> HashMap<String, Certificate> {
    let Some(path) = std::env::var_os("HWP_CACHE") else {
        return HashMap::new();
    };
    let Ok(text) = std::fs::read_to_string(path) else {
        return HashMap::new();
    };
    let entries: HashMap<String, Certificate> = serde_json::from_str(&text).unwrap_or_default();
    // a stale or edited cache must not smuggle in a bad certificate
    entries.into_iter().filter(|(_, c)| c.verify().ok).collect()
}

fn store_disk_cache(map: &HashMap<String, Certificate>) {
    if let Some(path) = std::env::var_os("HWP_CACHE") {
        if let Ok(text) = serde_json::to_string(map) {
            let _ = std::fs::write(path, text);
        }
    }
}

fn searched(m: usize, n: usize, s: &[usize]) -> Result<Certificate> {
    let key = cache_key(m, n, s);
    if let Some(hit) = cache().read().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    if m * n > SEARCH_ENVELOPE {
        return Err(HwpError::Budget(format!(
            "Hamiltonian factorization of C_{m}[{s:?}] over Z_{n}: M*n = {} exceeds the search envelope {SEARCH_ENVELOPE}",
            m * n
        )));
    }
    let graph = GraphSpec::cycle_lex(m, n, s.iter().copied());
    let cycles = local_search(m, n, s).ok_or_else(|| {
        HwpError::Budget(format!("Hamiltonian factorization of C_{m}[{s:?}] over Z_{n}"))
    })?;
    let factors = cycles.into_iter().map(|c| vec![c]).collect();
    let trace = vec![format!("C_{m}[{s:?}] over Z_{n}: Hamiltonian factorization by local search")];
    let cert = Certificate::verified(graph, Claim::new(m, m * n, 0, s.len()), factors, trace)?;
    let mut map = cache().write().expect("cache lock");
    map.insert(key, cert.clone());
    store_disk_cache(&map);
    Ok(cert)
}

/// Recolors alternating 4-cycles until every color class is one cycle.
///
/// The start coloring gives difference `s[c]` to color `c`, so each class
/// is already a 2-factor; a switch on a 4-cycle whose edges alternate
/// between two colors keeps every class 2-regular.
fn local_search(m: usize, n: usize, s: &[usize]) -> Option<Vec<Cycle>> {
    let k = s.len();
    let graph = GraphSpec::cycle_lex(m, n, s.iter().copied());
    let edges = enumerate_edges(&graph).ok()?;
    let order = m * n;
    let index: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));

    let mut start = vec![0u8; edges.len()];
    for (c, &d) in s.iter().enumerate() {
        for lvl in 0..m {
            for x in 0..n {
                let e = key(lvl * n + x, ((lvl + 1) % m) * n + (x + d) % n);
                start[index[&e]] = c as u8;
            }
        }
    }

    let mut adj = vec![Vec::new(); order];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    // 4-cycles as edge quadruples in cyclic order
    let mut squares = Vec::new();
    for v in 0..order {
        for &(u, e1) in adj[v].iter().filter(|&&(u, _)| u > v) {
            for &(w, e4) in adj[v].iter().filter(|&&(w, _)| w > u) {
                for &(x, e2) in adj[u].iter().filter(|&&(x, _)| x > v && x != w) {
                    if let Some(&e3) = index.get(&key(x, w)) {
                        squares.push([e1, e2, e3, e4]);
                    }
                }
            }
        }
    }
    squares.sort_unstable();
    squares.dedup();
    if squares.is_empty() {
        return None;
    }

    let seed = (m as u64) << 40 ^ (n as u64) << 20 ^ s.iter().fold(0u64, |h, &d| h.wrapping_mul(131) + d as u64);
    let steps = 4000 * order as u64;
    for restart in 0..MAX_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart));
        let mut color = start.clone();
        let mut comps: Vec<usize> = (0..k).map(|c| components(&edges, &color, c as u8, order)).collect();
        // scramble so restarts explore different regions
        for _ in 0..order * 4 {
            let sq = squares[rng.gen_range(0..squares.len())];
            if let Some((c1, c2)) = alternating(&color, sq) {
                switch(&mut color, sq, c1, c2);
            }
        }
        for c in 0..k {
            comps[c] = components(&edges, &color, c as u8, order);
        }
        for _ in 0..steps {
            if comps.iter().all(|&c| c == 1) {
                return Some((0..k).map(|c| trace_cycle(&edges, &color, c as u8, order)).collect());
            }
            let sq = squares[rng.gen_range(0..squares.len())];
            let Some((c1, c2)) = alternating(&color, sq) else {
                continue;
            };
            switch(&mut color, sq, c1, c2);
            let n1 = components(&edges, &color, c1, order);
            let n2 = components(&edges, &color, c2, order);
            let delta = (n1 + n2) as i64 - (comps[c1 as usize] + comps[c2 as usize]) as i64;
            if delta <= 0 || rng.gen_bool(0.05 / delta as f64) {
                comps[c1 as usize] = n1;
                comps[c2 as usize] = n2;
            } else {
                switch(&mut color, sq, c2, c1);
            }
        }
    }
    None
}

fn alternating(color: &[u8], sq: [usize; 4]) -> Option<(u8, u8)> {
    let (c1, c2) = (color[sq[0]], color[sq[1]]);
    (c1 != c2 && color[sq[2]] == c1 && color[sq[3]] == c2).then_some((c1, c2))
}

fn switch(color: &mut [u8], sq: [usize; 4], c1: u8, c2: u8) {
    color[sq[0]] = c2;
    color[sq[2]] = c2;
    color[sq[1]] = c1;
    color[sq[3]] = c1;
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn components(edges: &[(usize, usize)], color: &[u8], c: u8, order: usize) -> usize {
    let mut parent: Vec<usize> = (0..order).collect();
    let mut count = order;
    for (i, &(a, b)) in edges.iter().enumerate() {
        if color[i] == c {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                count -= 1;
            }
        }
    }
    count
}

fn trace_cycle(edges: &[(usize, usize)], color: &[u8], c: u8, order: usize) -> Cycle {
    let mut nbrs = vec![Vec::with_capacity(2); order];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if color[i] == c {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
    }
    let mut cycle = vec![0, nbrs[0][0]];
    while cycle.len() < order {
        let (prev, cur) = (cycle[cycle.len() - 2], cycle[cycle.len() - 1]);
        let next = if nbrs[cur][0] == prev { nbrs[cur][1] } else { nbrs[cur][0] };
        cycle.push(next);
    }
    cycle
}
