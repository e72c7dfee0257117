//! Latin squares with an orthogonal mate, and the triangle factorizations
//! of `K_3[n]` they encode.
//!
//! If `P` is orthogonal to `L`, each symbol class of `P` is a transversal
//! of `L`, and the triangles `{(0,a), (1,b), (2,L(a,b))}` over one class
//! form a `C_3`-factor of `K_3[n]`.

use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, Claim, Factor};
use crate::error::{impossible, invalid, unsupported, Result};
use crate::graph::GraphSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MolsSquare {
    pub order: usize,
    pub square: Vec<Vec<usize>>,
    /// Orthogonal mate; its symbol classes are the transversals.
    pub mate: Vec<Vec<usize>>,
}

fn is_latin(sq: &[Vec<usize>], n: usize) -> bool {
    if sq.len() != n || sq.iter().any(|r| r.len() != n) {
        return false;
    }
    let perm = |items: Vec<usize>| {
        let mut seen = vec![false; n];
        items.into_iter().all(|s| s < n && !std::mem::replace(&mut seen[s], true))
    };
    (0..n).all(|i| perm(sq[i].clone()) && perm((0..n).map(|r| sq[r][i]).collect()))
}

impl MolsSquare {
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        if !is_latin(&self.square, n) || !is_latin(&self.mate, n) {
            return invalid(format!("order-{n} pair is not a pair of Latin squares"));
        }
        let mut seen = vec![false; n * n];
        for r in 0..n {
            for c in 0..n {
                let key = self.square[r][c] * n + self.mate[r][c];
                if std::mem::replace(&mut seen[key], true) {
                    return invalid(format!("order-{n} squares are not orthogonal"));
                }
            }
        }
        Ok(())
    }

    /// Cells of each transversal, in row order.
    pub fn transversals(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.order;
        let mut out = vec![Vec::with_capacity(n); n];
        for r in 0..n {
            for c in 0..n {
                out[self.mate[r][c]].push((r, c));
            }
        }
        out
    }

    pub fn product(&self, other: &MolsSquare) -> MolsSquare {
        let (n1, n2) = (self.order, other.order);
        let n = n1 * n2;
        let build = |a: &Vec<Vec<usize>>, b: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            (0..n)
                .map(|r| (0..n).map(|c| a[r / n2][c / n2] * n2 + b[r % n2][c % n2]).collect())
                .collect()
        };
        MolsSquare {
            order: n,
            square: build(&self.square, &other.square),
            mate: build(&self.mate, &other.mate),
        }
    }
}

/// `L(a,b) = a + b`, `P(a,b) = a - b` over `Z_n`, `n` odd.
fn cyclic_pair(n: usize) -> MolsSquare {
    MolsSquare {
        order: n,
        square: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        mate: (0..n).map(|a| (0..n).map(|b| (a + n - b) % n).collect()).collect(),
    }
}

/// Reduction polynomials for `GF(2^k)`, indexed by `k`.
const GF2_MODULI: [u32; 8] = [0, 0, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10000011];

fn gf2_mul(mut a: usize, mut b: usize, k: usize) -> usize {
    let modulus = GF2_MODULI[k] as usize;
    let mut acc = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> k & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

/// `L(a,b) = a + b`, `P(a,b) = x*a + b` over `GF(2^k)`.
fn binary_field_pair(k: usize) -> MolsSquare {
    let n = 1 << k;
    MolsSquare {
        order: n,
        square: (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect(),
        mate: (0..n).map(|a| (0..n).map(|b| gf2_mul(2, a, k) ^ b).collect()).collect(),
    }
}

/// A Latin square of order `n` with an orthogonal mate.
pub fn orthogonal_pair(n: usize) -> Result<MolsSquare> {
    if n == 2 || n == 6 {
        return impossible(format!("no pair of orthogonal Latin squares of order {n}"));
    }
    if n == 0 {
        return invalid("order must be positive");
    }
    let twos = n.trailing_zeros() as usize;
    let odd = n >> twos;
    let pair = match twos {
        0 => cyclic_pair(n),
        1 => match super::store::stored_mols(n)? {
            Some(p) => p,
            None => {
                return unsupported(vec![format!(
                    "orthogonal Latin squares of order {n}: no stored pair for n = 2 mod 4"
                )])
            }
        },
        k if k < GF2_MODULI.len() => {
            let field = binary_field_pair(k);
            if odd == 1 {
                field
            } else {
                field.product(&cyclic_pair(odd))
            }
        }
        _ => return unsupported(vec![format!("orthogonal Latin squares of order {n}: 2-part too large")]),
    };
    pair.validate()?;
    Ok(pair)
}

/// `C_3`-factorization of `K_3[n]`: `n` factors of `n` triangles each.
pub fn c3_fact_k3n(n: usize) -> Result<Certificate> {
    if n == 2 || n == 6 {
        return impossible(format!("no C_3-factorization of K_3[{n}]"));
    }
    let pair = orthogonal_pair(n)?;
    let factors: Vec<Factor> = pair
        .transversals()
        .into_iter()
        .map(|cells| {
            cells
                .into_iter()
                .map(|(a, b)| vec![a, n + b, 2 * n + pair.square[a][b]])
                .collect()
        })
        .collect();
    let trace = vec![format!("K_3[{n}] from an orthogonal pair of Latin squares of order {n}")];
    Certificate::verified(GraphSpec::multipartite(3, n), Claim::uniform(3, n), factors, trace)
}
