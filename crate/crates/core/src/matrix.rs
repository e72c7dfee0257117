//! Difference matrices over `Z_n` and their expansion into 2-factors of
//! `C_m[T]`.
//!
//! A matrix with `|T|` rows whose columns are permutations of `T` yields one
//! 2-factor per row: row `r` is walked as
//! `(0, x) -> (1, x + a_r1) -> (2, x + a_r1 + a_r2) -> ...`, column `j`
//! supplying the edges between levels `j - 1` and `j` (mod the cycle
//! length). A row whose sum has order `g` closes into cycles of length
//! `m * g`.
//!
//! Blocks are kept as signed integer rows, exactly as they are written in
//! the constructions; [`DiffMatrix`] reduces them mod `n`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::certify::{check_partition, Cycle, Factor};
use crate::error::{invalid, HwpError, Result};
use crate::graph::{additive_order, gcd, normalize, signed_rep, GraphSpec};
use crate::skolem::SkolemSeq;

/// Rows of signed entries.
pub type Block = Vec<Vec<i64>>;

/// `A(x, y)`: rows `[x+k, -(x+k)]`, `k = 0..=y-x`; empty when `y < x`.
pub fn build_a(x: i64, y: i64) -> Block {
    (x..=y).map(|k| vec![k, -k]).collect()
}

/// `B(x, y)`, defined for `y > x`. Consecutive entries are paired so that
/// rows sum to `-1, +1, -1, ...`; when `y - x` is even the last three rows
/// are `[y-2, -(y-1)], [y-1, -y], [y, -(y-2)]` and the final row sums to 2.
pub fn build_b(x: i64, y: i64) -> Result<Block> {
    if y < x {
        return Ok(Vec::new());
    }
    if y == x {
        return invalid(format!("B({x},{y}) is undefined when y = x"));
    }
    let len = y - x;
    let paired_up_to = if len % 2 == 1 { y } else { y - 3 };
    let mut rows = Vec::with_capacity((len + 1) as usize);
    let mut k = x;
    while k < paired_up_to {
        rows.push(vec![k, -(k + 1)]);
        rows.push(vec![k + 1, -k]);
        k += 2;
    }
    if len % 2 == 0 {
        rows.push(vec![y - 2, -(y - 1)]);
        rows.push(vec![y - 1, -y]);
        rows.push(vec![y, -(y - 2)]);
    }
    Ok(rows)
}

pub fn negate(block: &Block) -> Block {
    block.iter().map(|r| r.iter().map(|&e| -e).collect()).collect()
}

/// The small corner blocks that finish off the stacked matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CBlock {
    /// `n = 2 mod 4`, two-column family `C_2, C_4, C_6` (6 rows).
    TwoModFourEven(u8),
    /// `n = 2 mod 4`, family `C_3, C_5` whose last row sums to `n/2 + 1`.
    TwoModFourOdd(u8),
    /// `n = 0 mod 4`, family `C_0, C_2, C_4` (4 rows).
    ZeroModFour(u8),
}

pub fn build_c(variant: CBlock, n: usize) -> Result<Block> {
    let h = (n / 2) as i64;
    let needs = |residue: usize, min: usize| -> Result<()> {
        if n % 4 != residue || n < min {
            return invalid(format!("{variant:?} needs n = {residue} mod 4 and n >= {min}, got {n}"));
        }
        Ok(())
    };
    let rows: Vec<[i64; 2]> = match variant {
        CBlock::TwoModFourEven(i) => {
            needs(2, 6)?;
            match i {
                2 => vec![[-1, 1], [0, 0], [1, -1], [h, 2], [2, -2], [-2, h]],
                4 => vec![[0, 1], [1, -1], [-1, 0], [h, 2], [2, -2], [-2, h]],
                6 => vec![[0, 1], [2, -1], [-1, 0], [h, 2], [1, -2], [-2, h]],
                _ => return invalid(format!("no C_{i} in the n = 2 mod 4 two-column family")),
            }
        }
        CBlock::TwoModFourOdd(i) => {
            needs(2, 6)?;
            match i {
                3 => vec![[-1, 2], [-2, h], [0, 0], [1, -1], [2, -2], [h, 1]],
                5 => vec![[-1, 2], [0, -1], [1, 0], [-2, h], [2, -2], [h, 1]],
                _ => return invalid(format!("no C_{i} in the n = 2 mod 4 odd family")),
            }
        }
        CBlock::ZeroModFour(i) => {
            needs(0, 4)?;
            match i {
                0 => vec![[0, 0], [1, -1], [-1, 1], [h, h]],
                2 => vec![[0, 0], [1, -1], [h, 1], [-1, h]],
                4 => vec![[0, 1], [1, 0], [h, -1], [-1, h]],
                _ => return invalid(format!("no C_{i} in the n = 0 mod 4 family")),
            }
        }
    };
    Ok(rows.into_iter().map(|r| r.to_vec()).collect())
}

/// The three ways an entry `i` is split into a pair `(x_i, y_i)` using a
/// Skolem sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkolemMap {
    /// Entries in `[-n/2+1, n/2]`; sequence covers `[1, n-1]`;
    /// `n/2 -> (0, 0)`.
    Full,
    /// Entries in `[-n/2+2, n/2-2]`; sequence covers that interval.
    Trimmed,
    /// Entries in `[-n/2+1, n/2-2]`; sequence covers `[-n/2+2, n/2-2]`;
    /// `-n/2+1 -> (-n/2+1, -n/2+1)`.
    TrimmedCorner,
}

impl SkolemMap {
    fn pair(self, i: i64, n: usize, seq: &SkolemSeq) -> Result<(i64, i64)> {
        let h = (n / 2) as i64;
        let (lo, hi) = match self {
            SkolemMap::Full => (-h + 1, h),
            SkolemMap::Trimmed => (-h + 2, h - 2),
            SkolemMap::TrimmedCorner => (-h + 1, h - 2),
        };
        if i < lo || i > hi {
            return invalid(format!("entry {i} outside the substitution domain [{lo}, {hi}]"));
        }
        if self == SkolemMap::Full && i == h {
            return Ok((0, 0));
        }
        if self == SkolemMap::TrimmedCorner && i == -h + 1 {
            return Ok((-h + 1, -h + 1));
        }
        let k = i.unsigned_abs() as usize;
        if k > seq.order {
            return invalid(format!("entry {i} needs a Skolem pair of difference {k}"));
        }
        Ok(if i >= 0 {
            (seq.b(k), -seq.a(k))
        } else {
            (seq.a(k), -seq.b(k))
        })
    }

    /// The interval the Skolem sequence must cover.
    pub fn interval(self, n: usize) -> (i64, i64) {
        let h = (n / 2) as i64;
        match self {
            SkolemMap::Full => (1, n as i64 - 1),
            SkolemMap::Trimmed | SkolemMap::TrimmedCorner => (-h + 2, h - 2),
        }
    }
}

/// Replaces the entry in `column` of every row by its Skolem pair, turning
/// a two-column block into a three-column one.
pub fn skolem_substitute(
    block: &Block,
    column: usize,
    seq: &SkolemSeq,
    map: SkolemMap,
    n: usize,
) -> Result<Block> {
    if seq.covers() != map.interval(n) {
        return invalid(format!(
            "Skolem sequence covers {:?}, substitution needs {:?}",
            seq.covers(),
            map.interval(n)
        ));
    }
    block
        .iter()
        .map(|row| {
            if column >= row.len() {
                return invalid(format!("row {row:?} has no column {column}"));
            }
            let (x, y) = map.pair(row[column], n, seq)?;
            let mut out = row.clone();
            out.splice(column..=column, [x, y]);
            Ok(out)
        })
        .collect()
}

/// `[m1, m2] -> [m1/2, m1/2, m2]` over odd `n`.
pub fn halve_column(block: &Block, n: usize) -> Result<Block> {
    if n % 2 == 0 {
        return invalid(format!("halving needs an odd modulus, got {n}"));
    }
    let half = (n as i64 + 1) / 2;
    block
        .iter()
        .map(|row| {
            let [m1, m2] = row[..] else {
                return invalid(format!("halving needs two-column rows, got {row:?}"));
            };
            let h = signed_rep(normalize(m1 * half, n as u64), n as u64);
            Ok(vec![h, h, m2])
        })
        .collect()
}

/// A `|T| x width` matrix over `Z_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffMatrix {
    n: usize,
    support: Vec<usize>,
    rows: Vec<Vec<usize>>,
}

impl DiffMatrix {
    pub fn new(n: usize, support: impl IntoIterator<Item = usize>, block: &Block) -> Result<Self> {
        if n == 0 {
            return invalid("modulus must be positive");
        }
        let support: BTreeSet<usize> = support.into_iter().map(|t| t % n).collect();
        let width = block.first().map_or(0, Vec::len);
        if block.iter().any(|r| r.len() != width) || width == 0 {
            return invalid("matrix rows must be non-empty and of equal width");
        }
        if block.len() != support.len() {
            return invalid(format!(
                "matrix has {} rows but |T| = {}",
                block.len(),
                support.len()
            ));
        }
        let rows = block
            .iter()
            .map(|r| r.iter().map(|&e| normalize(e, n as u64) as usize).collect())
            .collect();
        Ok(DiffMatrix {
            n,
            support: support.into_iter().collect(),
            rows,
        })
    }

    /// Matrix with `T = Z_n`.
    pub fn over_zn(n: usize, block: &Block) -> Result<Self> {
        DiffMatrix::new(n, 0..n, block)
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row_sum(&self, r: usize) -> usize {
        self.rows[r].iter().sum::<usize>() % self.n
    }

    pub fn row_order(&self, r: usize) -> usize {
        additive_order(self.row_sum(r) as u64, self.n as u64) as usize
    }

    pub fn row_orders(&self) -> Vec<usize> {
        (0..self.rows.len()).map(|r| self.row_order(r)).collect()
    }

    pub fn signed_rows(&self) -> Block {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&e| signed_rep(e as u64, self.n as u64)).collect())
            .collect()
    }

    pub fn columns_are_permutations(&self) -> bool {
        (0..self.width()).all(|j| {
            let mut col: Vec<usize> = self.rows.iter().map(|r| r[j]).collect();
            col.sort_unstable();
            col == self.support
        })
    }

    pub fn support_closed_under_negation(&self) -> bool {
        self.support
            .iter()
            .all(|&t| self.support.binary_search(&((self.n - t) % self.n)).is_ok())
    }

    pub fn dump(&self) -> MatrixDump {
        MatrixDump {
            n: self.n,
            support: self.support.clone(),
            width: self.width(),
            rows: self.signed_rows(),
            row_sums: (0..self.rows.len())
                .map(|r| signed_rep(self.row_sum(r) as u64, self.n as u64))
                .collect(),
            row_orders: self.row_orders(),
        }
    }
}

/// Serializable view of a matrix with entries in `(-n/2, n/2]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub n: usize,
    pub support: Vec<usize>,
    pub width: usize,
    pub rows: Block,
    pub row_sums: Vec<i64>,
    pub row_orders: Vec<usize>,
}

/// Columns permute `T`, exactly `alpha` rows have sum of order `g` and the
/// rest have sum of order `g2`.
pub fn validate_matrix(m: &DiffMatrix, alpha: usize, g: usize, g2: usize) -> bool {
    if !m.columns_are_permutations() {
        return false;
    }
    let orders = m.row_orders();
    let with_g = orders.iter().filter(|&&o| o == g).count();
    let with_g2 = orders.iter().filter(|&&o| o == g2).count();
    if g == g2 {
        with_g == orders.len() && (alpha == orders.len() || alpha == 0)
    } else {
        with_g == alpha && with_g2 == orders.len() - alpha
    }
}

/// One 2-factor of `C_{m_target}[T]` per row. When `m_target` exceeds the
/// width, pairs of columns `[c_1, -c_1]` are appended, which needs `T = -T`.
pub fn expand_matrix(m: &DiffMatrix, m_target: usize) -> Result<Vec<Factor>> {
    let width = m.width();
    if !m.columns_are_permutations() {
        return invalid("matrix columns are not permutations of T");
    }
    if m_target < width.max(3) || (m_target - width) % 2 != 0 {
        return invalid(format!(
            "cannot expand a width-{width} matrix to cycle length {m_target}"
        ));
    }
    if m_target > width && !m.support_closed_under_negation() {
        return invalid("padding needs T closed under negation");
    }
    let n = m.n;
    let factors: Vec<Factor> = m
        .rows
        .iter()
        .map(|row| {
            let mut full = row.clone();
            while full.len() < m_target {
                full.push(row[0]);
                full.push((n - row[0]) % n);
            }
            walk_row(&full, n)
        })
        .collect();

    let graph = GraphSpec::cycle_lex(m_target, n, m.support.iter().copied());
    let (failures, lengths) = check_partition(&graph, &factors);
    if !failures.is_empty() {
        return Err(HwpError::Unverified(failures));
    }
    for (r, len) in lengths.iter().enumerate() {
        if *len != Some(m_target * m.row_order(r)) {
            return invalid(format!("row {r} produced cycles of length {len:?}"));
        }
    }
    Ok(factors)
}

/// Cycles traced by one row; vertex `(level, x)` is `level * n + x`.
pub(crate) fn walk_row(row: &[usize], n: usize) -> Factor {
    let levels = row.len();
    let shift = row.iter().sum::<usize>() % n;
    let cycle_count = gcd(shift as u64, n as u64) as usize;
    let mut out = Vec::with_capacity(cycle_count);
    for start in 0..cycle_count {
        // level-0 residues start, start + shift, ... form one coset of <shift>
        let mut cycle: Cycle = Vec::with_capacity(levels * n / cycle_count);
        let mut x = start;
        loop {
            let mut y = x;
            cycle.push(y);
            for (level, &a) in row.iter().enumerate().take(levels - 1) {
                y = (y + a) % n;
                cycle.push((level + 1) * n + y);
            }
            x = (y + row[levels - 1]) % n;
            if x == start {
                break;
            }
        }
        out.push(cycle);
    }
    out
}
