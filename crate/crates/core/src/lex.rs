//! Lexicographic expansion `G[n]` of a cycle factorization of `G`.
//!
//! Each `l`-cycle `(u_0, ..., u_{l-1})` of `G` becomes a copy of `C_l[n]` in
//! `G[n]`, with vertex `(i, x)` of `C_l[n]` sent to `u_i * n + x`. A factor
//! of `G` thus becomes a spanning collection of `C_l[n]` components, and
//! any 2-factorization of `C_l[n]` can be pasted into all of them at once.

use crate::certify::{Certificate, Claim, Cycle, Factor};
use crate::error::{invalid, Result};
use crate::graph::GraphSpec;

/// A factorization of `G[n]` into `C_l[n]`-factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexSkeleton {
    pub base: GraphSpec,
    pub n: usize,
    pub cycle_len: usize,
    /// The base cycles, one list per factor.
    pub factors: Vec<Factor>,
    pub trace: Vec<String>,
}

pub fn lex_expand(cert: &Certificate, n: usize) -> Result<LexSkeleton> {
    if n == 0 {
        return invalid("expansion factor must be positive");
    }
    let verdict = cert.verify();
    if !verdict.ok {
        return invalid(format!("base certificate does not verify: {:?}", verdict.failures));
    }
    let cycle_len = cert.factors[0][0].len();
    if cert.factors.iter().flatten().any(|c| c.len() != cycle_len) {
        return invalid("base certificate is not a uniform cycle factorization");
    }
    let mut trace = cert.trace.clone();
    if n > 1 {
        trace.push(format!("expand every point of {} into {n} points", cert.graph.describe()));
    }
    Ok(LexSkeleton {
        base: cert.graph.clone(),
        n,
        cycle_len,
        factors: cert.factors.clone(),
        trace,
    })
}

impl LexSkeleton {
    pub fn graph(&self) -> GraphSpec {
        if self.n == 1 {
            self.base.clone()
        } else {
            GraphSpec::lex_expand(self.base.clone(), self.n)
        }
    }

    /// The graph every component is a copy of.
    pub fn component(&self) -> GraphSpec {
        GraphSpec::cm_n(self.cycle_len, self.n)
    }

    /// Copies a factorization of `C_l[n]` into every component of factor
    /// `index`, returning the resulting factors of `G[n]` in the same order.
    pub fn fill(&self, index: usize, inner: &Certificate) -> Result<Vec<Factor>> {
        if inner.graph != self.component() {
            return invalid(format!(
                "filling needs a certificate over {}, got {}",
                self.component().describe(),
                inner.graph.describe()
            ));
        }
        let n = self.n;
        Ok(inner
            .factors
            .iter()
            .map(|inner_factor| {
                self.factors[index]
                    .iter()
                    .flat_map(|base| {
                        inner_factor.iter().map(move |c| -> Cycle {
                            c.iter().map(|&v| base[v / n] * n + v % n).collect()
                        })
                    })
                    .collect()
            })
            .collect())
    }

    /// Fills every factor with the same inner certificate and verifies the
    /// outcome.
    pub fn fill_uniform(&self, inner: &Certificate) -> Result<Certificate> {
        let mut factors = Vec::new();
        for i in 0..self.factors.len() {
            factors.extend(self.fill(i, inner)?);
        }
        let claim = Claim {
            alpha: inner.claim.alpha * self.factors.len(),
            beta: inner.claim.beta * self.factors.len(),
            ..inner.claim
        };
        let mut trace = self.trace.clone();
        trace.extend(inner.trace.iter().cloned());
        Certificate::verified(self.graph(), claim, factors, trace)
    }

    /// Only meaningful without expansion, where the skeleton is already a
    /// cycle factorization.
    pub fn into_certificate(self) -> Result<Certificate> {
        if self.n != 1 {
            return invalid("a skeleton with n > 1 still needs its components filled");
        }
        let count = self.factors.len();
        Certificate::verified(self.base, Claim::uniform(self.cycle_len, count), self.factors, self.trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{expand_matrix, DiffMatrix};

    fn k5() -> Certificate {
        Certificate::verified(
            GraphSpec::complete_star(5),
            Claim::uniform(5, 2),
            vec![vec![vec![0, 1, 2, 3, 4]], vec![vec![0, 2, 4, 1, 3]]],
            vec![],
        )
        .unwrap()
    }

    fn k333() -> Certificate {
        // rows of a Latin square of order 3 read as triangles
        let factors = (0..3)
            .map(|s| (0..3).map(|a| vec![a, 3 + (a + s) % 3, 6 + (2 * a + s) % 3]).collect())
            .collect();
        Certificate::verified(GraphSpec::multipartite(3, 3), Claim::uniform(3, 3), factors, vec![]).unwrap()
    }

    fn triangles_of_c3(n: usize) -> Certificate {
        let rows: Vec<Vec<i64>> = (0..n as i64).map(|r| vec![r, r, -2 * r]).collect();
        let m = DiffMatrix::over_zn(n, &rows).unwrap();
        let f = expand_matrix(&m, 3).unwrap();
        Certificate::verified(GraphSpec::cm_n(3, n), Claim::uniform(3, n), f, vec![]).unwrap()
    }

    #[test]
    fn identity_expansion() {
        let cert = k5();
        let sk = lex_expand(&cert, 1).unwrap();
        assert_eq!(sk.clone().into_certificate().unwrap(), cert);
        assert!(lex_expand(&cert, 2).unwrap().into_certificate().is_err());
    }

    #[test]
    fn k5_doubled() {
        let sk = lex_expand(&k5(), 2).unwrap();
        assert_eq!(sk.factors.len(), 2);
        assert_eq!(sk.component(), GraphSpec::cm_n(5, 2));
        let oracle = crate::oracle::exhaustive_factorize(
            &GraphSpec::cm_n(5, 2),
            Claim::new(5, 10, 0, 2),
            &Default::default(),
        )
        .unwrap();
        let crate::oracle::OracleOutcome::Found(inner) = oracle else { panic!() };
        let full = sk.fill_uniform(&inner).unwrap();
        assert_eq!(full.factors.len(), 4);
        assert_eq!(full.graph.vertex_count(), 10);
    }

    #[test]
    fn k3_3_to_k3_9() {
        let sk = lex_expand(&k333(), 3).unwrap();
        let full = sk.fill_uniform(&triangles_of_c3(3)).unwrap();
        assert_eq!(full.factors.len(), 9);
        // the same edge set as K_3[9]
        let relabeled = Certificate::verified(GraphSpec::multipartite(3, 9), full.claim, full.factors.clone(), vec![]);
        assert!(relabeled.is_ok());
    }

    #[test]
    fn rejects_mixed_lengths() {
        let m = DiffMatrix::over_zn(3, &vec![vec![0, 0, 0], vec![1, 1, 2], vec![2, 2, 1]]).unwrap();
        let f = expand_matrix(&m, 3).unwrap();
        let c = Certificate::verified(GraphSpec::cm_n(3, 3), Claim::new(3, 9, 1, 2), f, vec![]).unwrap();
        assert!(lex_expand(&c, 2).is_err());
    }

    #[test]
    fn wrong_component_is_refused() {
        let sk = lex_expand(&k5(), 3).unwrap();
        assert!(sk.fill(0, &triangles_of_c3(3)).is_err());
    }
}
