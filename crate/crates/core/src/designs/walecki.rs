//! Walecki's Hamiltonian decompositions of `K_v` (odd `v`) and `K_v - I`
//! (even `v`).

use crate::assembly::{matching_to_standard, relabel_factors};
use crate::certify::{Certificate, Claim, Cycle};
use crate::error::{invalid, Result};
use crate::graph::GraphSpec;

/// Zigzag Hamiltonian path `i, i+1, i-1, i+2, i-2, ..., i+k` of `K_{2k}`.
/// The paths for `i = 0..k` partition the edges of `K_{2k}`.
fn zigzag(i: usize, k: usize) -> Cycle {
    let m = 2 * k;
    let mut path = vec![i];
    for step in 1..m {
        let half = (step + 1) / 2;
        let next = if step % 2 == 1 { i + half } else { i + m - half };
        path.push(next % m);
    }
    path
}

pub fn walecki(v: usize) -> Result<Certificate> {
    if v < 3 {
        return invalid(format!("no Hamiltonian decomposition of K_{v}"));
    }
    let k = (v - 1) / 2;
    let inf = 2 * k;
    let mut cycles: Vec<Cycle> = (0..k)
        .map(|i| {
            let mut c = vec![inf];
            c.extend(zigzag(i, k));
            c
        })
        .collect();
    let trace = vec![format!("Walecki decomposition of K_{v}")];
    if v % 2 == 1 {
        let factors = cycles.into_iter().map(|c| vec![c]).collect();
        return Certificate::verified(GraphSpec::complete_star(v), Claim::uniform(v, k), factors, trace);
    }
    // Even v: route the difference-k edge of every path through a new
    // vertex; the edges left over form a perfect matching.
    let k = (v - 2) / 2;
    let extra = v - 1;
    cycles.truncate(k);
    let mut leftover = vec![(2 * k, extra)];
    for c in &mut cycles {
        let pos = (1..c.len() - 1)
            .find(|&p| (c[p] + k) % (2 * k) == c[p + 1])
            .expect("every zigzag path has one edge of difference k");
        leftover.push((c[pos], c[pos + 1]));
        c.insert(pos + 1, extra);
    }
    let perm = matching_to_standard(v, &leftover)?;
    let factors = relabel_factors(&cycles.into_iter().map(|c| vec![c]).collect::<Vec<_>>(), &perm);
    Certificate::verified(GraphSpec::complete_star(v), Claim::uniform(v, k), factors, trace)
}
