//! Gluing factorizations of pieces into a factorization of the whole.

use crate::certify::{Certificate, Factor};
use crate::error::{invalid, Result};
use crate::graph::{Edge, Vertex};

/// Places `blocks[g]` on vertices `g*w .. (g+1)*w` and merges the `k`-th
/// factors of all blocks into one factor.
pub fn merge_blocks(blocks: &[&Certificate], w: usize) -> Result<Vec<Factor>> {
    let Some(first) = blocks.first() else {
        return Ok(Vec::new());
    };
    let count = first.factors.len();
    if blocks.iter().any(|b| b.factors.len() != count || b.graph.vertex_count() != w) {
        return invalid("blocks must have equal order and factor count");
    }
    Ok((0..count)
        .map(|k| {
            blocks
                .iter()
                .enumerate()
                .flat_map(|(g, b)| b.factors[k].iter().map(move |c| c.iter().map(|&x| g * w + x).collect()))
                .collect()
        })
        .collect())
}

/// Union of the standard 1-factors of `t` blocks of even order `w`.
pub fn block_matching(t: usize, w: usize) -> Vec<Edge> {
    (0..t)
        .flat_map(|g| (0..w / 2).map(move |j| (g * w + j, g * w + j + w / 2)))
        .collect()
}

/// A vertex map sending the perfect matching `matching` on `0..v` to the
/// standard 1-factor `{i, i + v/2}`: pair `j` goes to `{j, j + v/2}`.
pub fn matching_to_standard(v: usize, matching: &[Edge]) -> Result<Vec<Vertex>> {
    if v % 2 != 0 || matching.len() != v / 2 {
        return invalid(format!("{} edges are not a perfect matching on {v} vertices", matching.len()));
    }
    let mut perm = vec![usize::MAX; v];
    for (j, &(a, b)) in matching.iter().enumerate() {
        let (a, b) = (a.min(b), a.max(b));
        if b >= v || perm[a] != usize::MAX || perm[b] != usize::MAX {
            return invalid("matching is not perfect");
        }
        perm[a] = j;
        perm[b] = j + v / 2;
    }
    Ok(perm)
}

pub fn relabel_factors(factors: &[Factor], perm: &[Vertex]) -> Vec<Factor> {
    factors
        .iter()
        .map(|f| f.iter().map(|c| c.iter().map(|&x| perm[x]).collect()).collect())
        .collect()
}
