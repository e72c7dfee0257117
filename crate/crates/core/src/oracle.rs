//! Exhaustive search for a 2-factorization with a prescribed cycle-length
//! profile. Used as an independent check on small instances.
//!
//! Factors are unordered, so each new factor is forced to contain the
//! smallest remaining edge at vertex 0. Within a factor, cycles are started
//! at the smallest uncovered vertex and oriented so that the second vertex
//! is smaller than the last one. Every decomposition is thus visited at
//! most once, which is what makes a `ProvablyNone` answer meaningful.

use crate::certify::{Certificate, Claim, Cycle, Factor};
use crate::error::{invalid, Result};
use crate::graph::{enumerate_edges, GraphSpec};

pub const DEFAULT_BOUND: usize = 18;
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest vertex count accepted.
    pub bound: usize,
    /// Search nodes allowed before giving up with `LimitExceeded`.
    pub node_limit: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            bound: DEFAULT_BOUND,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Found(Certificate),
    ProvablyNone,
    LimitExceeded { nodes: u64 },
}

impl OracleOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            OracleOutcome::Found(_) => "found",
            OracleOutcome::ProvablyNone => "provably_none",
            OracleOutcome::LimitExceeded { .. } => "limit_exceeded",
        }
    }
}

pub fn exhaustive_factorize(spec: &GraphSpec, claim: Claim, cfg: &OracleConfig) -> Result<OracleOutcome> {
    spec.validate()?;
    let order = spec.vertex_count();
    if order > cfg.bound.min(64) {
        return invalid(format!(
            "{} has {order} vertices, over the exhaustive bound {}",
            spec.describe(),
            cfg.bound.min(64)
        ));
    }
    if claim.m < 3 || claim.n < 3 {
        return invalid("cycle lengths must be at least 3");
    }
    let edges = enumerate_edges(spec)?;
    let factor_count = claim.alpha + claim.beta;
    let lengths_fit = (claim.alpha == 0 || order % claim.m == 0) && (claim.beta == 0 || order % claim.n == 0);
    if !lengths_fit || factor_count * order != edges.len() {
        return Ok(OracleOutcome::ProvablyNone);
    }
    let mut adj = vec![0u64; order];
    for &(a, b) in &edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    if adj.iter().any(|&a| a.count_ones() as usize != 2 * factor_count) {
        return Ok(OracleOutcome::ProvablyNone);
    }
    let mut search = Search {
        full: if order == 64 { u64::MAX } else { (1u64 << order) - 1 },
        adj,
        lens: [claim.m, claim.n],
        left: [claim.alpha, claim.beta],
        nodes: 0,
        limit: cfg.node_limit,
        factors: Vec::new(),
        current: Vec::new(),
    };
    Ok(match search.next_factor() {
        Step::Found => {
            let trace = vec![format!("exhaustive search, {} nodes", search.nodes)];
            OracleOutcome::Found(Certificate::verified(spec.clone(), claim, search.factors, trace)?)
        }
        Step::Exhausted => OracleOutcome::ProvablyNone,
        Step::Limit => OracleOutcome::LimitExceeded { nodes: search.nodes },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Found,
    Exhausted,
    Limit,
}

struct Search {
    full: u64,
    adj: Vec<u64>,
    lens: [usize; 2],
    left: [usize; 2],
    nodes: u64,
    limit: u64,
    factors: Vec<Factor>,
    current: Factor,
}

fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            return None;
        }
        let b = x.trailing_zeros() as usize;
        x &= x - 1;
        Some(b)
    })
}

impl Search {
    fn next_factor(&mut self) -> Step {
        if self.left == [0, 0] {
            return Step::Found;
        }
        for kind in 0..2 {
            if self.left[kind] == 0 || (kind == 1 && self.left[0] > 0 && self.lens[0] == self.lens[1]) {
                continue;
            }
            self.left[kind] -= 1;
            let step = self.next_cycle(0, self.lens[kind]);
            self.left[kind] += 1;
            if step != Step::Exhausted {
                return step;
            }
        }
        Step::Exhausted
    }

    fn next_cycle(&mut self, covered: u64, len: usize) -> Step {
        if covered == self.full {
            let factor = std::mem::take(&mut self.current);
            self.factors.push(factor);
            let step = self.next_factor();
            if step == Step::Found {
                return step;
            }
            self.current = self.factors.pop().expect("pushed above");
            return step;
        }
        let start = (!covered).trailing_zeros() as usize;
        let mut path = vec![start];
        self.extend(&mut path, 1 << start, covered, len)
    }

    fn extend(&mut self, path: &mut Cycle, in_path: u64, covered: u64, len: usize) -> Step {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Step::Limit;
        }
        let start = path[0];
        let last = *path.last().expect("non-empty path");
        if path.len() == len {
            if self.adj[last] & (1 << start) == 0 || path[1] > last {
                return Step::Exhausted;
            }
            return self.close(path, in_path, covered, len);
        }
        let mut candidates = self.adj[last] & !covered & !in_path;
        if path.len() == 1 && covered == 0 {
            // the new factor takes vertex 0's smallest remaining edge
            candidates &= self.adj[0] & self.adj[0].wrapping_neg();
        }
        if path.len() == len - 1 {
            candidates &= self.adj[start];
        }
        for x in bits(candidates) {
            let next_in_path = in_path | (1 << x);
            if !self.feasible(covered | next_in_path, start, x) {
                continue;
            }
            path.push(x);
            let step = self.extend(path, next_in_path, covered, len);
            path.pop();
            if step != Step::Exhausted {
                return step;
            }
        }
        Step::Exhausted
    }

    fn close(&mut self, path: &mut Cycle, in_path: u64, covered: u64, len: usize) -> Step {
        let edges: Vec<(usize, usize)> = (0..len).map(|i| (path[i], path[(i + 1) % len])).collect();
        for &(a, b) in &edges {
            self.adj[a] &= !(1 << b);
            self.adj[b] &= !(1 << a);
        }
        self.current.push(path.clone());
        let step = self.next_cycle(covered | in_path, len);
        if step == Step::Found {
            return step;
        }
        self.current.pop();
        for &(a, b) in &edges {
            self.adj[a] |= 1 << b;
            self.adj[b] |= 1 << a;
        }
        step
    }

    /// Every vertex not yet placed in this factor still needs two usable
    /// neighbours.
    fn feasible(&self, blocked: u64, start: usize, end: usize) -> bool {
        let free = self.full & !blocked;
        let usable = free | (1 << start) | (1 << end);
        bits(free).all(|v| (self.adj[v] & usable).count_ones() >= 2)
    }
}
