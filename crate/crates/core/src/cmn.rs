//! Factorizations of `C_M[n]` into `alpha` `C_M`-factors and `beta`
//! Hamiltonian (`C_{Mn}`) factors, `alpha + beta = n`.
//!
//! Almost everything goes through difference matrices: a row summing to 0
//! yields a `C_M`-factor and a row whose sum is a unit of `Z_n` yields a
//! Hamiltonian one. When `n` is even and the parity of `beta` is wrong for
//! a full matrix, a 4- or 6-regular Cayley subgraph around `n/2` is split
//! off and factored separately.

use crate::cayley::{ham_fact_4reg, ham_fact_6reg, ham_fact_cm2};
use crate::certify::{Certificate, Claim, Factor};
use crate::designs::c3_fact_k3n;
use crate::error::{exception, impossible, invalid, unsupported, Result};
use crate::graph::{gcd, normalize, GraphSpec};
use crate::matrix::{
    build_a, build_b, build_c, expand_matrix, halve_column, negate, skolem_substitute, Block, CBlock,
    DiffMatrix, SkolemMap,
};
use crate::skolem::build_skolem;

/// Which construction handles `(M, n, beta)`, or why none does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmnRoute {
    /// `n` odd: one matrix over `Z_n`.
    OddModulus,
    /// `beta = 0`, `n` even.
    AllShort,
    /// `n` even, `beta = Mn/2 (mod 2)`: one matrix over `Z_n`.
    FullMatrix,
    /// `n` even, `beta = Mn/2 + 1 (mod 2)`: a matrix plus a Cayley piece.
    SplitCayley,
    /// Excluded parameters; the string is the clause.
    Excluded(&'static str),
    /// No factorization exists.
    Impossible,
}

pub fn cmn_route(m: usize, n: usize, beta: usize) -> CmnRoute {
    let m_odd = m % 2 == 1;
    if beta == 1 && !(n == 2 && m_odd) {
        return CmnRoute::Excluded("beta = 1");
    }
    if n % 2 == 1 {
        return CmnRoute::OddModulus;
    }
    if beta == 0 {
        return match (m_odd, n) {
            (true, 2) => CmnRoute::Impossible,
            (true, 6) => CmnRoute::Excluded("beta = 0, n = 6, M odd"),
            _ => CmnRoute::AllShort,
        };
    }
    if beta == 2 && n > 2 && n % 4 == 2 && m_odd {
        return CmnRoute::Excluded("beta = 2 < n = 2 mod 4, M odd");
    }
    if beta % 2 == (m * n / 2) % 2 {
        CmnRoute::FullMatrix
    } else {
        CmnRoute::SplitCayley
    }
}

/// What a construction is made of: a difference matrix (expanded to `M`
/// columns when used) and factors of the rest of the graph.
struct Construction {
    matrix: Option<DiffMatrix>,
    extra: Vec<Factor>,
    trace: String,
}

fn construct(m: usize, n: usize, alpha: usize, beta: usize) -> Result<Construction> {
    if m < 3 || n < 2 || alpha + beta != n {
        return invalid(format!("C_{m}[{n}] needs M >= 3, n >= 2 and alpha + beta = n, got ({alpha}, {beta})"));
    }
    match cmn_route(m, n, beta) {
        CmnRoute::Excluded(tag) => exception(tag),
        CmnRoute::Impossible => impossible(format!("no C_{m}-factorization of C_{m}[2]")),
        CmnRoute::OddModulus => Ok(Construction {
            matrix: Some(odd_modulus(m, n, alpha)?),
            extra: Vec::new(),
            trace: format!("C_{m}[{n}], n odd: zero rows and +-1, 2 rows"),
        }),
        CmnRoute::AllShort => all_short(m, n),
        CmnRoute::FullMatrix => full_matrix(m, n, beta),
        CmnRoute::SplitCayley => split_cayley(m, n, beta),
    }
}

/// `(n - beta, beta)` in HWP(`C_M[n]`; `M`, `Mn`).
pub fn solve_cmn(m: usize, n: usize, alpha: usize, beta: usize) -> Result<Certificate> {
    let c = construct(m, n, alpha, beta)?;
    let mut factors = match &c.matrix {
        Some(mat) => expand_matrix(mat, m)?,
        None => Vec::new(),
    };
    factors.extend(c.extra);
    factors.sort_by_key(|f| f[0].len());
    Certificate::verified(GraphSpec::cm_n(m, n), Claim::new(m, m * n, alpha, beta), factors, vec![c.trace])
}

/// The difference matrix behind `solve_cmn(m, n, alpha, beta)`, before
/// padding to `M` columns. `None` when the construction uses no matrix.
pub fn cmn_matrix(m: usize, n: usize, alpha: usize, beta: usize) -> Result<Option<DiffMatrix>> {
    Ok(construct(m, n, alpha, beta)?.matrix)
}

fn stack(blocks: impl IntoIterator<Item = Block>) -> Block {
    blocks.into_iter().flatten().collect()
}

fn all_residues(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn matrix(n: usize, support: &[usize], rows: &Block) -> Result<DiffMatrix> {
    DiffMatrix::new(n, support.iter().copied(), rows)
}

/// Two-column rows for even `M`; otherwise the same rows with a third column.
fn widen_odd(m: usize, rows: Block, widen: impl FnOnce(&Block) -> Result<Block>) -> Result<Block> {
    if m % 2 == 0 {
        Ok(rows)
    } else {
        widen(&rows)
    }
}

fn odd_modulus(m: usize, n: usize, alpha: usize) -> Result<DiffMatrix> {
    let rows = stack([build_a(1, alpha as i64), build_b(alpha as i64 + 1, n as i64)?]);
    let rows = widen_odd(m, rows, |r| halve_column(r, n))?;
    matrix(n, &all_residues(n), &rows)
}

fn all_short(m: usize, n: usize) -> Result<Construction> {
    if m % 2 == 0 {
        let a = build_a(1, n as i64);
        let rows: Block = a.iter().map(|r| r.iter().copied().cycle().take(m).collect()).collect();
        return Ok(Construction {
            matrix: Some(matrix(n, &all_residues(n), &rows)?),
            extra: Vec::new(),
            trace: format!("C_{m}[{n}], beta = 0, M even: rows [k, -k, ..., k, -k]"),
        });
    }
    // Stretch a triangle factorization of C_3[n]: triangle j of factor i
    // ends at (2, j), and the path from level 2 back to level 0 runs through
    // (h, j + i) for odd h and (h, j) for even h.
    let base = c3_fact_k3n(n)?;
    let factors = base
        .factors
        .iter()
        .enumerate()
        .map(|(i, factor)| {
            factor
                .iter()
                .map(|tri| {
                    let mut tri = tri.clone();
                    tri.sort_unstable();
                    let j = tri[2] - 2 * n;
                    let mut cycle = tri;
                    for h in 3..m {
                        let x = if h % 2 == 1 { (j + i) % n } else { j };
                        cycle.push(h * n + x);
                    }
                    cycle
                })
                .collect()
        })
        .collect();
    Ok(Construction {
        matrix: None,
        extra: factors,
        trace: format!("C_{m}[{n}], beta = 0, M odd: stretched triangle factorization of C_3[{n}]"),
    })
}

fn full_matrix(m: usize, n: usize, beta: usize) -> Result<Construction> {
    let (b, h) = (beta as i64, (n / 2) as i64);
    let m_odd = m % 2 == 1;
    let trace = format!("C_{m}[{n}], beta = Mn/2 (mod 2): one matrix over Z_{n}");
    let rows = if n == 2 {
        if m_odd {
            vec![vec![0, 0, 0], vec![1, 1, 1]]
        } else {
            vec![vec![0, 1], vec![1, 0]]
        }
    } else if n % 4 == 2 {
        let two_col = if !m_odd && beta == 2 {
            let a = build_a(3, h - 1);
            stack([a.clone(), negate(&a), build_c(CBlock::TwoModFourEven(2), n)?])
        } else {
            let i: i64 = if m_odd {
                if b % 4 == 3 { 3 } else { 5 }
            } else if b % 4 == 0 {
                4
            } else {
                6
            };
            let a = build_a((b - i) / 2 + 3, h - 1);
            let bb = build_b(3, (b - i) / 2 + 2)?;
            let c = if m_odd { CBlock::TwoModFourOdd(i as u8) } else { CBlock::TwoModFourEven(i as u8) };
            stack([a.clone(), negate(&a), bb.clone(), negate(&bb), build_c(c, n)?])
        };
        widen_odd(m, two_col, |r| {
            skolem_substitute(r, 0, &build_skolem(n / 2 - 1, 1), SkolemMap::Full, n)
        })?
    } else {
        let i: i64 = if b % 4 == 2 { 2 } else { 4 };
        let a = build_a((b - i) / 2 + 2, h - 1);
        let bb = build_b(2, (b - i) / 2 + 1)?;
        let two_col = stack([a.clone(), negate(&a), bb.clone(), negate(&bb), build_c(CBlock::ZeroModFour(i as u8), n)?]);
        widen_odd(m, two_col, |r| {
            skolem_substitute(r, 0, &build_skolem(n / 2 - 1, 1), SkolemMap::Full, n)
        })?
    };
    Ok(Construction {
        matrix: Some(matrix(n, &all_residues(n), &rows)?),
        extra: Vec::new(),
        trace,
    })
}

fn split_cayley(m: usize, n: usize, beta: usize) -> Result<Construction> {
    let alpha = (n - beta) as i64;
    let h = (n / 2) as i64;
    if (m * n) % 4 == 0 {
        // Z_n minus {n/2 - 1, n/2, n/2 + 1}, plus the 6-regular remainder
        let support: Vec<usize> = (0..n).filter(|&x| x + 1 < n / 2 || x > n / 2 + 1).collect();
        let rows = stack([build_a(-h + 2, -h + 1 + alpha), build_b(-h + 2 + alpha, h - 2)?]);
        let rows = widen_odd(m, rows, |r| {
            let k = n / 2 - 2;
            skolem_substitute(r, 0, &build_skolem(k, -(k as i64)), SkolemMap::Trimmed, n)
        })?;
        return Ok(Construction {
            matrix: Some(matrix(n, &support, &rows)?),
            extra: ham_fact_6reg(m, n)?.factors,
            trace: format!("C_{m}[{n}]: matrix over Z_{n} minus {{n/2, n/2 +- 1}} and a 6-regular Hamiltonian piece"),
        });
    }
    // M odd, n = 2 mod 4
    if n == 2 {
        return Ok(Construction {
            matrix: None,
            extra: ham_fact_cm2(m)?.factors,
            trace: format!("C_{m}[2]: Hamiltonian factorization"),
        });
    }
    let support: Vec<usize> = (0..n).filter(|&x| x + 1 != n / 2 && x != n / 2).collect();
    let t1 = stack([build_a(-h + 3, -h + alpha + 2), build_b(-h + alpha + 3, h - 2)?]);
    let t2 = vec![vec![-h + 1, h - 2], vec![-h + 2, -h + 1]];
    let k = n / 2 - 2;
    let rows = skolem_substitute(&stack([t1, t2]), 1, &build_skolem(k, -(k as i64)), SkolemMap::TrimmedCorner, n)?;
    let rows = pad_with_fixed_point(rows, m, n)?;
    Ok(Construction {
        matrix: Some(matrix(n, &support, &rows)?),
        extra: ham_fact_4reg(m, n, [n / 2 - 1, n / 2])?.factors,
        trace: format!("C_{m}[{n}]: matrix over Z_{n} minus {{n/2 - 1, n/2}} and a 4-regular Hamiltonian piece"),
    })
}

/// Widens three-column rows over `T = Z_n \ {n/2 - 1, n/2}` to `M` columns.
///
/// `T` is not closed under negation, so the usual padding pairs `[c, -c]`
/// are not available. Each pair used here is `[P, s(P)]` where `P` is a
/// permutation of `T` and `s` negates everything except the fixed point
/// `n/2 + 1`. Such a pair adds 0 to every row except the one where `P`
/// takes the value `n/2 + 1`, which gains 2. The extra 2s are placed on
/// rows whose sums stay units of `Z_n`.
fn pad_with_fixed_point(rows: Block, m: usize, n: usize) -> Result<Block> {
    if m == 3 {
        return Ok(rows);
    }
    let pairs = (m - 3) / 2;
    let fixed = (n / 2 + 1) as i64;
    let nn = n as u64;
    let sums: Vec<u64> = rows.iter().map(|r| normalize(r.iter().sum(), nn)).collect();
    let unit = |s: u64| gcd(s, nn) == 1;

    // can[r][k]: the last rows from r onward can absorb exactly k extra 2s
    let count = rows.len();
    let mut can = vec![vec![false; pairs + 1]; count + 1];
    can[count][0] = true;
    for r in (0..count).rev() {
        for k in 0..=pairs {
            can[r][k] = (0..=k).any(|take| {
                let ok = if take == 0 { true } else { unit(sums[r]) && unit((sums[r] + 2 * take as u64) % nn) };
                ok && can[r + 1][k - take]
            });
        }
    }
    if !can[0][pairs] {
        return unsupported(vec![format!(
            "C_{m}[{n}]: no placement of {pairs} padding defects keeps the Hamiltonian rows Hamiltonian"
        )]);
    }
    let mut targets = Vec::with_capacity(pairs);
    let mut left = pairs;
    for r in 0..count {
        let take = (0..=left)
            .rev()
            .find(|&take| {
                let ok = take == 0 || (unit(sums[r]) && unit((sums[r] + 2 * take as u64) % nn));
                ok && can[r + 1][left - take]
            })
            .expect("feasible by construction");
        targets.extend(std::iter::repeat(r).take(take));
        left -= take;
    }

    let signed = |x: i64| crate::graph::signed_rep(normalize(x, nn), nn);
    let base: Vec<i64> = rows.iter().map(|r| signed(r[0])).collect();
    let holder = base.iter().position(|&x| x == signed(fixed)).expect("n/2 + 1 lies in T");
    let mut out = rows;
    for &target in &targets {
        let mut column = base.clone();
        column.swap(holder, target);
        for (r, row) in out.iter_mut().enumerate() {
            let p = column[r];
            row.push(p);
            row.push(if p == signed(fixed) { p } else { -p });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::{HwpError, Refusal};

    fn check(m: usize, n: usize, beta: usize) {
        let c = solve_cmn(m, n, n - beta, beta).unwrap_or_else(|e| panic!("C_{m}[{n}] beta={beta}: {e}"));
        let short = c.factors.iter().filter(|f| f[0].len() == m).count();
        let long = c.factors.iter().filter(|f| f[0].len() == m * n).count();
        assert_eq!((short, long), (n - beta, beta), "C_{m}[{n}] beta={beta}");
    }

    #[test]
    fn spec_examples() {
        check(3, 5, 2);
        assert!(matches!(solve_cmn(3, 2, 2, 0), Err(HwpError::Refused(Refusal::KnownImpossible { .. }))));
        let c = solve_cmn(3, 2, 1, 1).unwrap();
        assert_eq!(c.factors.len(), 2);
    }

    #[test]
    fn exceptions() {
        for (m, n, beta) in [(3, 5, 1), (4, 4, 1), (3, 6, 2), (5, 10, 2), (3, 6, 0)] {
            assert!(
                matches!(solve_cmn(m, n, n - beta, beta), Err(HwpError::Refused(Refusal::PaperException { .. }))),
                "C_{m}[{n}] beta={beta}"
            );
        }
        check(3, 2, 1);
        check(4, 6, 2);
        check(3, 4, 2);
    }

    #[test]
    fn grid() {
        for m in 3..=8 {
            for n in 2..=10 {
                for beta in 0..=n {
                    if matches!(cmn_route(m, n, beta), CmnRoute::Excluded(_) | CmnRoute::Impossible) {
                        continue;
                    }
                    check(m, n, beta);
                }
            }
        }
    }

    #[test]
    fn fixed_point_padding_wide() {
        for m in [5usize, 7, 9, 11, 13] {
            for n in [6usize, 10, 14, 18] {
                if m * n > crate::cayley::SEARCH_ENVELOPE {
                    continue;
                }
                for beta in (4..=n).step_by(2) {
                    check(m, n, beta);
                }
            }
        }
    }

    #[test]
    fn matrix_of_the_small_example() {
        let mat = cmn_matrix(3, 2, 1, 1).unwrap().unwrap();
        assert_eq!(mat.rows(), &[vec![0, 0, 0], vec![1, 1, 1]]);
        assert!(cmn_matrix(3, 2, 0, 2).unwrap().is_none());
        let mat = cmn_matrix(3, 5, 3, 2).unwrap().unwrap();
        assert_eq!(mat.row_orders().iter().filter(|&&o| o == 1).count(), 3);
    }

    #[test]
    fn route_parity() {
        assert_eq!(cmn_route(3, 4, 2), CmnRoute::FullMatrix);
        assert_eq!(cmn_route(3, 4, 3), CmnRoute::SplitCayley);
        assert_eq!(cmn_route(3, 6, 3), CmnRoute::FullMatrix);
        assert_eq!(cmn_route(3, 6, 4), CmnRoute::SplitCayley);
        assert_eq!(cmn_route(3, 2, 2), CmnRoute::SplitCayley);
        assert_eq!(cmn_route(4, 2, 2), CmnRoute::FullMatrix);
    }
}
