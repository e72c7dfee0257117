//! Modular arithmetic, vertex labels and the graph families used by the
//! constructions: `K_v*`, `K_t[w]`, `C_m[S]`, disjoint unions and
//! lexicographic blow-ups.
//!
//! Every family has a fixed flat labeling of its vertices by `0..order`:
//!
//! * `CompleteStar(v)`: vertices `0..v`; for even `v` the 1-factor
//!   `{i, i + v/2}` is removed.
//! * `CompleteMultipartite(t, w)`: part `p`, index `j` is `p*w + j`.
//! * `CycleLex(m, n, S)`: level `i`, residue `x` is `i*n + x`.
//! * `LexExpand(G, n)`: base vertex `u`, residue `x` is `u*n + x`.
//! * `DisjointUnion`: component `g` is shifted by the total order of the
//!   components before it.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type Vertex = usize;
/// Undirected edge, stored with the smaller endpoint first.
pub type Edge = (Vertex, Vertex);

pub fn edge(a: Vertex, b: Vertex) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Reduce a signed integer into `[0, n)`.
pub fn normalize(x: i64, n: u64) -> u64 {
    x.rem_euclid(n as i64) as u64
}

/// Representative of `x mod n` in `(-n/2, n/2]`.
pub fn signed_rep(x: u64, n: u64) -> i64 {
    let x = (x % n) as i64;
    let n = n as i64;
    if 2 * x > n {
        x - n
    } else {
        x
    }
}

/// Additive order of `x` in `Z_n`.
pub fn additive_order(x: u64, n: u64) -> u64 {
    n / gcd(x % n, n)
}

/// An element of `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Residue {
            value: normalize(value, modulus),
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn signed(self) -> i64 {
        signed_rep(self.value, self.modulus)
    }

    pub fn order(self) -> u64 {
        additive_order(self.value, self.modulus)
    }

    /// Multiplicative inverse, when `value` is a unit.
    pub fn inverse(self) -> Option<Residue> {
        let n = self.modulus as i64;
        let (mut r0, mut r1) = (n, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1 || self.modulus == 1).then(|| Residue::new(t0, self.modulus))
    }

    fn check(self, other: Residue) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul<i64> for Residue {
    type Output = Residue;
    fn mul(self, k: i64) -> Residue {
        let k = normalize(k, self.modulus) as u128;
        Residue {
            value: ((self.value as u128 * k) % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed())
    }
}

/// Vertex `(level, residue)` of `C_m[S]` or of a blow-up `G[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledVertex {
    pub level: usize,
    pub residue: usize,
}

impl LabeledVertex {
    pub fn new(level: usize, residue: i64, n: usize) -> Self {
        LabeledVertex {
            level,
            residue: normalize(residue, n as u64) as usize,
        }
    }

    pub fn flat(self, n: usize) -> Vertex {
        self.level * n + self.residue
    }

    pub fn from_flat(id: Vertex, n: usize) -> Self {
        LabeledVertex {
            level: id / n,
            residue: id % n,
        }
    }
}

/// Declarative description of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    /// `K_v` for odd `v`, `K_v - I` for even `v`.
    CompleteStar { v: usize },
    /// `K_t[w]`: `t` parts of size `w`.
    CompleteMultipartite { t: usize, w: usize },
    /// `C_m[S]` over `Z_m x Z_n`.
    CycleLex { m: usize, n: usize, s: Vec<usize> },
    DisjointUnion { parts: Vec<GraphSpec> },
    /// `G[n]`.
    LexExpand { inner: Box<GraphSpec>, n: usize },
}

impl GraphSpec {
    pub fn complete_star(v: usize) -> Self {
        GraphSpec::CompleteStar { v }
    }

    pub fn multipartite(t: usize, w: usize) -> Self {
        GraphSpec::CompleteMultipartite { t, w }
    }

    pub fn cycle_lex(m: usize, n: usize, s: impl IntoIterator<Item = usize>) -> Self {
        let s: BTreeSet<usize> = s.into_iter().collect();
        GraphSpec::CycleLex {
            m,
            n,
            s: s.into_iter().collect(),
        }
    }

    /// `C_m[n] = C_m[Z_n]`.
    pub fn cm_n(m: usize, n: usize) -> Self {
        GraphSpec::cycle_lex(m, n, 0..n)
    }

    pub fn lex_expand(inner: GraphSpec, n: usize) -> Self {
        GraphSpec::LexExpand {
            inner: Box::new(inner),
            n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GraphSpec::CompleteStar { v } => {
                if *v == 0 {
                    return invalid("complete graph needs at least one vertex");
                }
            }
            GraphSpec::CompleteMultipartite { t, w } => {
                if *t == 0 || *w == 0 {
                    return invalid("multipartite graph needs t, w > 0");
                }
            }
            GraphSpec::CycleLex { m, n, s } => {
                if *m < 3 {
                    return invalid(format!("C_m[S] needs m >= 3, got m = {m}"));
                }
                if *n == 0 {
                    return invalid("C_m[S] needs a positive modulus");
                }
                if s.is_empty() {
                    return invalid("C_m[S] needs a non-empty difference set");
                }
                if s.iter().any(|&d| d >= *n) {
                    return invalid(format!("difference set {s:?} not reduced mod {n}"));
                }
                if s.windows(2).any(|w| w[0] >= w[1]) {
                    return invalid(format!("difference set {s:?} must be sorted and distinct"));
                }
            }
            GraphSpec::DisjointUnion { parts } => {
                for p in parts {
                    p.validate()?;
                }
            }
            GraphSpec::LexExpand { inner, n } => {
                if *n == 0 {
                    return invalid("blow-up factor must be positive");
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            GraphSpec::CompleteStar { v } => *v,
            GraphSpec::CompleteMultipartite { t, w } => t * w,
            GraphSpec::CycleLex { m, n, .. } => m * n,
            GraphSpec::DisjointUnion { parts } => parts.iter().map(GraphSpec::vertex_count).sum(),
            GraphSpec::LexExpand { inner, n } => inner.vertex_count() * n,
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            GraphSpec::CompleteStar { v } => v * (v - 1) / 2 - if v % 2 == 0 { v / 2 } else { 0 },
            GraphSpec::CompleteMultipartite { t, w } => t * (t - 1) / 2 * w * w,
            GraphSpec::CycleLex { m, n, s } => m * n * s.len(),
            GraphSpec::DisjointUnion { parts } => parts.iter().map(GraphSpec::edge_count).sum(),
            GraphSpec::LexExpand { inner, n } => inner.edge_count() * n * n,
        }
    }

    /// Common degree, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        match self {
            GraphSpec::CompleteStar { v } => Some(2 * ((v - 1) / 2)),
            GraphSpec::CompleteMultipartite { t, w } => Some((t - 1) * w),
            GraphSpec::CycleLex { s, .. } => Some(2 * s.len()),
            GraphSpec::DisjointUnion { parts } => {
                let mut degs = parts.iter().map(GraphSpec::regular_degree);
                let first = degs.next()??;
                degs.all(|d| d == Some(first)).then_some(first)
            }
            GraphSpec::LexExpand { inner, n } => inner.regular_degree().map(|d| d * n),
        }
    }

    /// Short human-readable name, e.g. `K_9*` or `C_3[{0,1}] over Z_2`.
    pub fn describe(&self) -> String {
        match self {
            GraphSpec::CompleteStar { v } => format!("K_{v}*"),
            GraphSpec::CompleteMultipartite { t, w } => format!("K_{t}[{w}]"),
            GraphSpec::CycleLex { m, n, s } => format!("C_{m}[{s:?}] over Z_{n}"),
            GraphSpec::DisjointUnion { parts } => {
                let names: Vec<String> = parts.iter().map(GraphSpec::describe).collect();
                names.join(" + ")
            }
            GraphSpec::LexExpand { inner, n } => format!("({})[{n}]", inner.describe()),
        }
    }
}

/// The removed 1-factor `{i, i + v/2}` of `K_v*` for even `v`; empty for odd `v`.
pub fn standard_matching(v: usize) -> Vec<Edge> {
    if v % 2 == 1 {
        return Vec::new();
    }
    (0..v / 2).map(|i| (i, i + v / 2)).collect()
}

/// Sorted edge list of `spec`; every edge appears once, with `a < b`.
pub fn enumerate_edges(spec: &GraphSpec) -> Result<Vec<Edge>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.edge_count());
    push_edges(spec, 0, &mut out);
    out.sort_unstable();
    debug_assert!(out.windows(2).all(|w| w[0] != w[1]), "duplicate edge in {spec:?}");
    Ok(out)
}

fn push_edges(spec: &GraphSpec, offset: usize, out: &mut Vec<Edge>) {
    match spec {
        GraphSpec::CompleteStar { v } => {
            let v = *v;
            for a in 0..v {
                for b in a + 1..v {
                    if v % 2 == 0 && b == a + v / 2 {
                        continue;
                    }
                    out.push((offset + a, offset + b));
                }
            }
        }
        GraphSpec::CompleteMultipartite { t, w } => {
            let n = t * w;
            for a in 0..n {
                for b in a + 1..n {
                    if a / w != b / w {
                        out.push((offset + a, offset + b));
                    }
                }
            }
        }
        GraphSpec::CycleLex { m, n, s } => {
            for i in 0..*m {
                let j = (i + 1) % m;
                for x in 0..*n {
                    for &d in s {
                        let a = i * n + x;
                        let b = j * n + (x + d) % n;
                        let (a, b) = edge(a, b);
                        out.push((offset + a, offset + b));
                    }
                }
            }
        }
        GraphSpec::DisjointUnion { parts } => {
            let mut shift = offset;
            for p in parts {
                push_edges(p, shift, out);
                shift += p.vertex_count();
            }
        }
        GraphSpec::LexExpand { inner, n } => {
            let mut base = Vec::new();
            push_edges(inner, 0, &mut base);
            for (u, w) in base {
                for x in 0..*n {
                    for y in 0..*n {
                        let (a, b) = edge(u * n + x, w * n + y);
                        out.push((offset + a, offset + b));
                    }
                }
            }
        }
    }
}

/// Cayley graph on `Z_M x Z_n` with a connection set of group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleySpec {
    pub m: usize,
    pub n: usize,
    pub connection: Vec<(usize, usize)>,
}

impl CayleySpec {
    pub fn new(m: usize, n: usize, connection: Vec<(usize, usize)>) -> Result<Self> {
        if m == 0 || n == 0 {
            return invalid("Cayley group Z_M x Z_n needs M, n > 0");
        }
        for &(a, b) in &connection {
            if a >= m || b >= n {
                return invalid(format!("element ({a},{b}) not reduced in Z_{m} x Z_{n}"));
            }
            if a == 0 && b == 0 {
                return invalid("connection set may not contain the identity");
            }
        }
        Ok(CayleySpec { m, n, connection })
    }

    /// `C_M[S]` viewed as `cay(Z_M x Z_n, {1} x S)`.
    pub fn from_cycle_lex(m: usize, n: usize, s: &[usize]) -> Result<Self> {
        CayleySpec::new(m, n, s.iter().map(|&d| (1 % m, d % n)).collect())
    }

    /// Edge count of `cay(Z_M x Z_n, +-S)`.
    pub fn edge_count(&self) -> usize {
        let order = self.m * self.n;
        let mut classes = BTreeSet::new();
        let mut involutions = 0;
        for &(a, b) in &self.connection {
            let neg = ((self.m - a) % self.m, (self.n - b) % self.n);
            if neg == (a, b) {
                if classes.insert((a, b)) {
                    involutions += 1;
                }
            } else {
                classes.insert((a, b).min(neg));
            }
        }
        (classes.len() - involutions) * order + involutions * order / 2
    }

    /// Order of the subgroup generated by the connection set.
    pub fn generated_order(&self) -> usize {
        subgroup_order(self.m, self.n, &self.connection)
    }

    /// Index of `<e>` in `Z_M x Z_n`.
    pub fn index_of(&self, e: (usize, usize)) -> usize {
        self.m * self.n / subgroup_order(self.m, self.n, &[e])
    }
}

fn subgroup_order(m: usize, n: usize, gens: &[(usize, usize)]) -> usize {
    let mut seen = vec![false; m * n];
    let mut stack = vec![(0usize, 0usize)];
    seen[0] = true;
    let mut count = 1;
    while let Some((a, b)) = stack.pop() {
        for &(ga, gb) in gens {
            let next = ((a + ga) % m, (b + gb) % n);
            let id = next.0 * n + next.1;
            if !seen[id] {
                seen[id] = true;
                count += 1;
                stack.push(next);
            }
        }
    }
    count
}

/// True iff the connection set generates `Z_M x Z_n`.
pub fn is_connected_cayley(spec: &CayleySpec) -> bool {
    spec.generated_order() == spec.m * spec.n
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn degrees(spec: &GraphSpec) -> Vec<usize> {
        let mut deg = vec![0; spec.vertex_count()];
        for (a, b) in enumerate_edges(spec).unwrap() {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    #[test]
    fn complete_star_counts() {
        assert_eq!(enumerate_edges(&GraphSpec::complete_star(5)).unwrap().len(), 10);
        let k6 = enumerate_edges(&GraphSpec::complete_star(6)).unwrap();
        assert_eq!(k6.len(), 12);
        for e in [(0, 3), (1, 4), (2, 5)] {
            assert!(!k6.contains(&e));
        }
    }

    #[test]
    fn cycle_lex_small() {
        let g = GraphSpec::cycle_lex(3, 2, [0, 1]);
        let edges = enumerate_edges(&g).unwrap();
        assert_eq!(edges.len(), 12);
        assert!(degrees(&g).iter().all(|&d| d == 4));
        assert_eq!(g.regular_degree(), Some(4));
    }

    #[test]
    fn rejects_malformed() {
        assert!(enumerate_edges(&GraphSpec::cycle_lex(3, 4, [1, 4])).is_err());
        assert!(enumerate_edges(&GraphSpec::cycle_lex(2, 4, [1])).is_err());
        assert!(CayleySpec::new(3, 4, vec![(0, 0)]).is_err());
    }

    #[test]
    fn cayley_connectivity() {
        let s = CayleySpec::new(3, 4, vec![(1, 1), (1, 2), (1, 3)]).unwrap();
        assert!(is_connected_cayley(&s));
        let s = CayleySpec::new(3, 4, vec![(0, 2)]).unwrap();
        assert!(!is_connected_cayley(&s));
        let s = CayleySpec::new(5, 6, vec![(1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(is_connected_cayley(&s));
    }

    #[test]
    fn e2_index_matches_parity_rule() {
        for (m, n) in [(3, 4), (5, 8), (4, 4), (6, 6), (3, 12)] {
            let s = CayleySpec::from_cycle_lex(m, n, &[n / 2 - 1, n / 2, n / 2 + 1]).unwrap();
            let expected = if m % 2 == 0 { n } else { n / 2 };
            assert_eq!(s.index_of((1, n / 2)), expected);
        }
    }

    #[test]
    fn cayley_edge_count_matches_cycle_lex() {
        let s = CayleySpec::from_cycle_lex(4, 6, &[2, 3, 4]).unwrap();
        assert_eq!(s.edge_count(), GraphSpec::cycle_lex(4, 6, [2, 3, 4]).edge_count());
        // (0,3) is an involution in Z_3 x Z_6
        let s = CayleySpec::new(3, 6, vec![(0, 3)]).unwrap();
        assert_eq!(s.edge_count(), 9);
    }

    #[test]
    fn residue_arithmetic() {
        let a = Residue::new(-3, 7);
        assert_eq!(a.value(), 4);
        assert_eq!((a + Residue::new(5, 7)).value(), 2);
        assert_eq!((-a).value(), 3);
        assert_eq!((a * 3).value(), 5);
        assert_eq!(Residue::new(2, 9).inverse().unwrap().value(), 5);
        assert!(Residue::new(3, 9).inverse().is_none());
        assert_eq!(Residue::new(6, 8).signed(), -2);
        assert_eq!(Residue::new(4, 8).signed(), 4);
        assert_eq!(Residue::new(4, 12).order(), 3);
    }

    #[test]
    fn multipartite_is_regular() {
        let g = GraphSpec::multipartite(4, 3);
        assert!(degrees(&g).iter().all(|&d| d == 9));
        let g = GraphSpec::lex_expand(GraphSpec::complete_star(5), 2);
        assert!(degrees(&g).iter().all(|&d| d == 8));
    }

    fn small_spec() -> impl Strategy<Value = GraphSpec> {
        let leaf = prop_oneof![
            (1usize..9).prop_map(GraphSpec::complete_star),
            (1usize..4, 1usize..4).prop_map(|(t, w)| GraphSpec::multipartite(t, w)),
            (3usize..6, 1usize..6, proptest::collection::vec(0usize..6, 1..4)).prop_map(
                |(m, n, s)| GraphSpec::cycle_lex(m, n, s.into_iter().map(|d| d % n))
            ),
        ];
        leaf.prop_recursive(2, 8, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 1..3)
                    .prop_map(|parts| GraphSpec::DisjointUnion { parts }),
                (inner, 1usize..3).prop_map(|(g, n)| GraphSpec::lex_expand(g, n)),
            ]
        })
    }

    proptest! {
        #[test]
        fn degree_sum_is_twice_edge_count(spec in small_spec()) {
            let edges = enumerate_edges(&spec).unwrap();
            prop_assert_eq!(edges.len(), spec.edge_count());
            let deg = degrees(&spec);
            prop_assert_eq!(deg.iter().sum::<usize>(), 2 * edges.len());
            if let Some(d) = spec.regular_degree() {
                prop_assert!(deg.iter().all(|&x| x == d));
            }
            prop_assert!(edges.iter().all(|&(a, b)| a < b));
        }

        #[test]
        fn cycle_lex_splits_over_difference_sets(m in 3usize..6, n in 1usize..8, mask in 1u32..256) {
            let all: Vec<usize> = (0..n).filter(|d| mask & (1 << d) != 0).collect();
            prop_assume!(all.len() >= 2);
            let (s1, s2) = all.split_at(all.len() / 2);
            let e1 = enumerate_edges(&GraphSpec::cycle_lex(m, n, s1.to_vec())).unwrap();
            let e2 = enumerate_edges(&GraphSpec::cycle_lex(m, n, s2.to_vec())).unwrap();
            let whole = enumerate_edges(&GraphSpec::cycle_lex(m, n, all.clone())).unwrap();
            let a: BTreeSet<_> = e1.iter().collect();
            prop_assert!(e2.iter().all(|e| !a.contains(e)));
            let mut union = e1.clone();
            union.extend(e2);
            union.sort_unstable();
            prop_assert_eq!(union, whole);
        }

        #[test]
        fn flat_ids_round_trip(level in 0usize..50, residue in -100i64..100, n in 1usize..40) {
            let v = LabeledVertex::new(level, residue, n);
            prop_assert_eq!(LabeledVertex::from_flat(v.flat(n), n), v);
        }
    }
}
