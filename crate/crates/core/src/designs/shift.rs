//! Search for `C_l`-factorizations of `K_t[z]` that are invariant under a
//! cyclic shift inside the groups.
//!
//! Vertex `(p, x)` is `p*z + x` with `x` in `Z_z`. The shift by `g = z/d`
//! maps `(p, x)` to `(p, x + g)` and has order `d`. Its edge orbits all have
//! size `d`, so a shift-invariant factorization is `k = (t-1)z/(2d)` base
//! factors whose `d` translates are taken together. The base factors must
//! use every edge orbit exactly once, which is what the search enforces.

use crate::certify::{Certificate, Claim, Cycle, Factor};
use crate::error::Result;
use crate::graph::GraphSpec;

/// Largest `d | z` such that the factor count `(t-1)z/2` is a multiple of `d`.
fn shift_order(t: usize, z: usize) -> usize {
    let count = (t - 1) * z / 2;
    (1..=z).rev().find(|d| z % d == 0 && count % d == 0).unwrap_or(1)
}

struct Search {
    t: usize,
    z: usize,
    g: usize,
    l: usize,
    order: usize,
    used: Vec<bool>,
    covered: Vec<bool>,
    bases: Vec<Factor>,
    current: Factor,
    wanted: usize,
    nodes: u64,
    limit: u64,
}

#[derive(PartialEq, Eq)]
enum Step {
    Found,
    Exhausted,
    Limit,
}

impl Search {
    fn class(&self, a: usize, b: usize) -> Option<usize> {
        let (pa, pb) = (a / self.z, b / self.z);
        if pa == pb {
            return None;
        }
        let (a, b) = if pa < pb { (a, b) } else { (b, a) };
        let (p, q, x, y) = (a / self.z, b / self.z, a % self.z, b % self.z);
        let pair = p * self.t + q;
        let diff = (y + self.z - x) % self.z;
        Some((pair * self.g + x % self.g) * self.z + diff)
    }

    fn free(&self, a: usize, b: usize) -> Option<usize> {
        self.class(a, b).filter(|&c| !self.used[c])
    }

    fn next_factor(&mut self) -> Step {
        if self.bases.len() == self.wanted {
            return Step::Found;
        }
        self.covered.iter_mut().for_each(|c| *c = false);
        self.next_cycle()
    }

    fn next_cycle(&mut self) -> Step {
        let Some(start) = self.covered.iter().position(|&c| !c) else {
            let factor = std::mem::take(&mut self.current);
            self.bases.push(factor);
            let saved = self.covered.clone();
            let step = self.next_factor();
            if step != Step::Found {
                self.covered = saved;
                self.current = self.bases.pop().expect("pushed above");
            }
            return step;
        };
        self.covered[start] = true;
        let mut path = vec![start];
        let step = self.extend(&mut path);
        if step != Step::Found {
            self.covered[start] = false;
        }
        step
    }

    fn extend(&mut self, path: &mut Cycle) -> Step {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Step::Limit;
        }
        let start = path[0];
        let last = *path.last().expect("non-empty");
        if path.len() == self.l {
            if path[1] > last {
                return Step::Exhausted;
            }
            let Some(c) = self.free(last, start) else {
                return Step::Exhausted;
            };
            self.used[c] = true;
            self.current.push(path.clone());
            let step = self.next_cycle();
            if step == Step::Found {
                return step;
            }
            self.current.pop();
            self.used[c] = false;
            return step;
        }
        for x in 0..self.order {
            if self.covered[x] {
                continue;
            }
            let Some(c) = self.free(last, x) else { continue };
            self.used[c] = true;
            self.covered[x] = true;
            path.push(x);
            let step = if self.feasible(start, x) { self.extend(path) } else { Step::Exhausted };
            if step == Step::Found {
                return step;
            }
            path.pop();
            self.covered[x] = false;
            self.used[c] = false;
            if step == Step::Limit {
                return step;
            }
        }
        Step::Exhausted
    }

    /// Every vertex still outside the factor needs two usable edges.
    fn feasible(&self, start: usize, end: usize) -> bool {
        (0..self.order).filter(|&v| !self.covered[v]).all(|v| {
            (0..self.order)
                .filter(|&u| (!self.covered[u] || u == start || u == end) && u != v)
                .filter(|&u| self.free(v, u).is_some())
                .nth(1)
                .is_some()
        })
    }
}

/// `Ok(None)` when the node budget runs out or no invariant solution exists.
pub fn shift_invariant_search(t: usize, z: usize, l: usize, node_limit: u64) -> Result<Option<Certificate>> {
    let d = shift_order(t, z);
    if d == 1 {
        return Ok(None);
    }
    let g = z / d;
    let order = t * z;
    let mut search = Search {
        t,
        z,
        g,
        l,
        order,
        used: vec![false; t * t * g * z],
        covered: vec![false; order],
        bases: Vec::new(),
        current: Vec::new(),
        wanted: (t - 1) * z / (2 * d),
        nodes: 0,
        limit: node_limit,
    };
    if search.next_factor() != Step::Found {
        return Ok(None);
    }
    let shift = |v: usize, c: usize| (v / z) * z + (v % z + c * g) % z;
    let factors: Vec<Factor> = search
        .bases
        .iter()
        .flat_map(|base| {
            (0..d).map(move |c| base.iter().map(|cy| cy.iter().map(|&v| shift(v, c)).collect()).collect())
        })
        .collect();
    let count = factors.len();
    let trace = vec![format!("K_{t}[{z}]: {} base factors developed under a shift of order {d}", search.bases.len())];
    Certificate::verified(GraphSpec::multipartite(t, z), Claim::uniform(l, count), factors, trace).map(Some)
}
