//! Certificates of 2-factorizations and the verifier every construction
//! passes through before it is handed to a caller.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HwpError, Result};
use crate::graph::{edge, enumerate_edges, Edge, GraphSpec, Vertex};

pub type Cycle = Vec<Vertex>;
pub type Factor = Vec<Cycle>;

pub const FORMAT_VERSION: u32 = 1;

/// What a certificate claims: `alpha` factors of `m`-cycles and `beta`
/// factors of `n`-cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Claim {
    pub m: usize,
    pub n: usize,
    pub alpha: usize,
    pub beta: usize,
}

impl Claim {
    pub fn new(m: usize, n: usize, alpha: usize, beta: usize) -> Self {
        Claim { m, n, alpha, beta }
    }

    /// All factors are `len`-cycle factors.
    pub fn uniform(len: usize, count: usize) -> Self {
        Claim {
            m: len,
            n: len,
            alpha: count,
            beta: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub format_version: u32,
    pub graph: GraphSpec,
    pub claim: Claim,
    /// Strategy trace of the generator; informational only.
    #[serde(default)]
    pub trace: Vec<String>,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum Failure {
    /// A cycle is shorter than 3 or names a vertex outside the graph.
    MalformedCycle { factor: usize, cycle: usize },
    /// Some vertex is not covered by the factor.
    NotSpanning { factor: usize, vertex: Vertex },
    /// Some vertex appears more than once in the factor.
    NotTwoRegular { factor: usize, vertex: Vertex },
    /// The factor mixes cycle lengths or uses a length outside the claim.
    WrongCycleLength { factor: usize, found: usize },
    EdgeMissing { edge: Edge },
    EdgeRepeated { edge: Edge },
    EdgeNotInGraph { edge: Edge },
    CountMismatch { expected: (usize, usize), found: (usize, usize) },
    /// The graph description itself is malformed.
    BadGraph { reason: String },
}

impl Failure {
    pub fn tag(&self) -> &'static str {
        match self {
            Failure::MalformedCycle { .. } => "MalformedCycle",
            Failure::NotSpanning { .. } => "NotSpanning",
            Failure::NotTwoRegular { .. } => "NotTwoRegular",
            Failure::WrongCycleLength { .. } => "WrongCycleLength",
            Failure::EdgeMissing { .. } => "EdgeMissing",
            Failure::EdgeRepeated { .. } => "EdgeRepeated",
            Failure::EdgeNotInGraph { .. } => "EdgeNotInGraph",
            Failure::CountMismatch { .. } => "CountMismatch",
            Failure::BadGraph { .. } => "BadGraph",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::MalformedCycle { factor, cycle } => {
                write!(f, "factor {factor}: cycle {cycle} is malformed")
            }
            Failure::NotSpanning { factor, vertex } => {
                write!(f, "factor {factor} misses vertex {vertex}")
            }
            Failure::NotTwoRegular { factor, vertex } => {
                write!(f, "factor {factor} visits vertex {vertex} more than once")
            }
            Failure::WrongCycleLength { factor, found } => {
                write!(f, "factor {factor} has a cycle of length {found}")
            }
            Failure::EdgeMissing { edge } => write!(f, "edge {edge:?} is not covered"),
            Failure::EdgeRepeated { edge } => write!(f, "edge {edge:?} is covered twice"),
            Failure::EdgeNotInGraph { edge } => write!(f, "{edge:?} is not an edge of the graph"),
            Failure::CountMismatch { expected, found } => write!(
                f,
                "expected {} M-factors and {} N-factors, found {} and {}",
                expected.0, expected.1, found.0, found.1
            ),
            Failure::BadGraph { reason } => write!(f, "bad graph: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub ok: bool,
    pub failures: Vec<Failure>,
}

impl Verdict {
    fn from_failures(failures: Vec<Failure>) -> Self {
        Verdict {
            ok: failures.is_empty(),
            failures,
        }
    }

    pub fn has(&self, tag: &str) -> bool {
        self.failures.iter().any(|f| f.tag() == tag)
    }
}

/// Rotate to the minimum vertex and orient towards its smaller neighbour.
pub fn canonical_cycle(cycle: &[Vertex]) -> Cycle {
    let len = cycle.len();
    if len == 0 {
        return Vec::new();
    }
    let start = (0..len).min_by_key(|&i| cycle[i]).unwrap();
    let next = cycle[(start + 1) % len];
    let prev = cycle[(start + len - 1) % len];
    if next <= prev {
        (0..len).map(|k| cycle[(start + k) % len]).collect()
    } else {
        (0..len).map(|k| cycle[(start + len - k) % len]).collect()
    }
}

pub fn canonical_factor(factor: &[Cycle]) -> Factor {
    let mut out: Factor = factor.iter().map(|c| canonical_cycle(c)).collect();
    out.sort();
    out
}

fn cycle_edges(cycle: &[Vertex]) -> impl Iterator<Item = Edge> + '_ {
    let len = cycle.len();
    (0..len).map(move |i| edge(cycle[i], cycle[(i + 1) % len]))
}

/// Checks that every factor is a spanning 2-regular subgraph and that the
/// factors partition the edges of `graph` exactly. Returns the failures and
/// the cycle length of each factor (`None` for mixed factors).
pub fn check_partition(graph: &GraphSpec, factors: &[Factor]) -> (Vec<Failure>, Vec<Option<usize>>) {
    let mut failures = Vec::new();
    let edges = match enumerate_edges(graph) {
        Ok(e) => e,
        Err(e) => {
            return (
                vec![Failure::BadGraph {
                    reason: e.to_string(),
                }],
                vec![None; factors.len()],
            )
        }
    };
    let order = graph.vertex_count();
    let mut lengths = Vec::with_capacity(factors.len());
    let mut uses: HashMap<Edge, u32> = edges.iter().map(|&e| (e, 0)).collect();
    let mut seen = vec![usize::MAX; order];

    for (fi, factor) in factors.iter().enumerate() {
        let mut len: Option<Option<usize>> = None;
        for (ci, cycle) in factor.iter().enumerate() {
            if cycle.len() < 3 || cycle.iter().any(|&v| v >= order) {
                failures.push(Failure::MalformedCycle { factor: fi, cycle: ci });
                len = Some(None);
                continue;
            }
            len = match len {
                None => Some(Some(cycle.len())),
                Some(Some(l)) if l == cycle.len() => Some(Some(l)),
                _ => Some(None),
            };
            for &v in cycle {
                if seen[v] == fi {
                    failures.push(Failure::NotTwoRegular { factor: fi, vertex: v });
                }
                seen[v] = fi;
            }
            for e in cycle_edges(cycle) {
                match uses.get_mut(&e) {
                    Some(count) => {
                        *count += 1;
                        if *count == 2 {
                            failures.push(Failure::EdgeRepeated { edge: e });
                        }
                    }
                    None => failures.push(Failure::EdgeNotInGraph { edge: e }),
                }
            }
        }
        for (v, &s) in seen.iter().enumerate() {
            if s != fi {
                failures.push(Failure::NotSpanning { factor: fi, vertex: v });
                break;
            }
        }
        lengths.push(len.flatten());
    }
    for e in edges {
        if uses[&e] == 0 {
            failures.push(Failure::EdgeMissing { edge: e });
        }
    }
    (failures, lengths)
}

/// Full check of a certificate against its claim.
pub fn verify(cert: &Certificate) -> Verdict {
    let (mut failures, lengths) = check_partition(&cert.graph, &cert.factors);
    let claim = cert.claim;
    let (mut m_count, mut n_count) = (0, 0);
    for (fi, len) in lengths.iter().enumerate() {
        match *len {
            Some(l) if l == claim.m && claim.alpha > 0 => m_count += 1,
            Some(l) if l == claim.n && claim.beta > 0 => n_count += 1,
            Some(l) => failures.push(Failure::WrongCycleLength { factor: fi, found: l }),
            None => {
                let found = cert.factors[fi]
                    .iter()
                    .map(Vec::len)
                    .find(|&l| l != claim.m && l != claim.n)
                    .unwrap_or(0);
                failures.push(Failure::WrongCycleLength { factor: fi, found });
            }
        }
    }
    if claim.m == claim.n && claim.alpha > 0 && claim.beta > 0 {
        // indistinguishable classes: only the total is checkable
        let total = m_count + n_count;
        if total != claim.alpha + claim.beta || cert.factors.len() != total {
            failures.push(Failure::CountMismatch {
                expected: (claim.alpha, claim.beta),
                found: (m_count, n_count),
            });
        }
    } else if (m_count, n_count) != (claim.alpha, claim.beta) {
        failures.push(Failure::CountMismatch {
            expected: (claim.alpha, claim.beta),
            found: (m_count, n_count),
        });
    }
    Verdict::from_failures(failures)
}

impl Certificate {
    /// Builds a canonicalized certificate and refuses to return it unless it verifies.
    pub fn verified(
        graph: GraphSpec,
        claim: Claim,
        factors: Vec<Factor>,
        trace: Vec<String>,
    ) -> Result<Certificate> {
        let cert = Certificate {
            format_version: FORMAT_VERSION,
            graph,
            claim,
            trace,
            factors: factors.iter().map(|f| canonical_factor(f)).collect(),
        };
        let verdict = verify(&cert);
        if verdict.ok {
            Ok(cert)
        } else {
            Err(HwpError::Unverified(verdict.failures))
        }
    }

    pub fn canonicalize(&mut self) {
        for f in &mut self.factors {
            *f = canonical_factor(f);
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.factors.iter().all(|f| *f == canonical_factor(f))
    }

    pub fn verify(&self) -> Verdict {
        verify(self)
    }

    /// Applies the vertex map `perm` (old id -> new id) and re-verifies
    /// against `graph`.
    pub fn relabel(&self, perm: &[Vertex], graph: GraphSpec) -> Result<Certificate> {
        let factors = self
            .factors
            .iter()
            .map(|f| f.iter().map(|c| c.iter().map(|&v| perm[v]).collect()).collect())
            .collect();
        Certificate::verified(graph, self.claim, factors, self.trace.clone())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The two Hamiltonian cycles of K_5, written out by hand.
    fn k5() -> Certificate {
        Certificate::verified(
            GraphSpec::complete_star(5),
            Claim::uniform(5, 2),
            vec![vec![vec![0, 1, 2, 3, 4]], vec![vec![0, 2, 4, 1, 3]]],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn hand_checked_k5_verifies() {
        let c = k5();
        assert!(c.verify().ok);
        let total: usize = c.factors.iter().flatten().map(Vec::len).sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn duplicated_vertex_is_caught() {
        let mut c = k5();
        c.factors[0][0][2] = 1;
        let v = c.verify();
        assert!(!v.ok);
        assert!(v.has("NotTwoRegular"));
    }

    #[test]
    fn c4_2_hamiltonian_pair() {
        // C_4[2]: vertex (i, x) is 2i + x
        let f1 = vec![vec![0, 2, 4, 6, 1, 3, 5, 7]];
        let f2 = vec![vec![0, 3, 4, 7, 1, 2, 5, 6]];
        let c = Certificate {
            format_version: FORMAT_VERSION,
            graph: GraphSpec::cycle_lex(4, 2, [0, 1]),
            claim: Claim::new(4, 8, 0, 2),
            trace: vec![],
            factors: vec![f1, f2],
        };
        assert!(c.verify().ok, "{:?}", c.verify());
    }

    #[test]
    fn canonical_form() {
        assert_eq!(canonical_cycle(&[3, 1, 4, 2]), vec![1, 3, 2, 4]);
        assert_eq!(canonical_cycle(&[2, 0, 1]), vec![0, 1, 2]);
        let c = k5();
        assert!(c.is_canonical());
        let again = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(again.to_json(), c.to_json());
    }

    #[test]
    fn count_mismatch_reported() {
        let mut c = k5();
        c.claim = Claim::new(5, 7, 1, 1);
        assert!(c.verify().has("CountMismatch"));
    }

    #[test]
    fn missing_cycle_reported() {
        let mut c = k5();
        c.factors[1].clear();
        let v = c.verify();
        assert!(v.has("NotSpanning") && v.has("EdgeMissing"));
    }
}
