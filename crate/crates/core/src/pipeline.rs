//! `HWP(v; M, N; alpha, beta)` for `M` an odd divisor of `N`.
//!
//! With `n = N/M` and `v = Mns`, the complete graph splits as
//! `K_v* = t K_w* + K_t[w]`, where `t = s` for odd `s` and `t = s/2`
//! otherwise, and `w = v/t`. The `t` copies of `K_w*` are filled with
//! uniform factorizations (all `C_M` or all `C_N`). `K_t[w]` is cut into
//! `C_M[n]`-factors, and each of those is factored with the `C_M[n]`
//! solver according to a split plan.

use serde::Serialize;

use crate::assembly::{block_matching, matching_to_standard, merge_blocks, relabel_factors};
use crate::certify::{Certificate, Claim, Factor};
use crate::cmn::solve_cmn;
use crate::designs::{liu_gen, uniform_op};
use crate::error::{exception, invalid, unsupported, HwpError, Refusal, Result};
use crate::graph::GraphSpec;
use crate::lex::LexSkeleton;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PipelineParams {
    pub v: usize,
    pub m: usize,
    pub big_n: usize,
    pub alpha: usize,
    pub beta: usize,
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub w: usize,
    pub gamma: usize,
    /// What the `t` copies of `K_w*` contribute.
    pub alpha0: usize,
    pub beta0: usize,
}

impl PipelineParams {
    /// Derived quantities; assumes `classify` found the parameters eligible.
    pub fn derive(v: usize, m: usize, big_n: usize, alpha: usize, beta: usize) -> Self {
        let n = big_n / m;
        let s = v / big_n;
        let t = if s % 2 == 1 { s } else { s / 2 };
        let w = v / t;
        let gamma = (w - 1) / 2;
        let (alpha0, beta0) = if beta < gamma + 3 { (gamma, 0) } else { (0, gamma) };
        PipelineParams { v, m, big_n, alpha, beta, n, s, t, w, gamma, alpha0, beta0 }
    }

    /// `z` with `K_t[w] = K_t[z][n]`.
    pub fn z(&self) -> usize {
        self.m * self.s / self.t
    }

    /// Number of `C_M[n]`-factors of `K_t[w]`.
    pub fn r(&self) -> usize {
        (self.t - 1) * self.z() / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "clause", rename_all = "snake_case")]
pub enum FeasibilityVerdict {
    Eligible,
    NecessaryFail(String),
    PaperException(String),
}

impl FeasibilityVerdict {
    pub fn refusal(&self) -> Option<Refusal> {
        match self {
            FeasibilityVerdict::Eligible => None,
            FeasibilityVerdict::NecessaryFail(c) => Some(Refusal::NecessaryFail { clause: c.clone() }),
            FeasibilityVerdict::PaperException(t) => Some(Refusal::PaperException { tag: t.clone() }),
        }
    }
}

pub fn classify(v: usize, m: usize, big_n: usize, alpha: usize, beta: usize) -> FeasibilityVerdict {
    use FeasibilityVerdict::*;
    if m < 3 || m % 2 == 0 || big_n <= m || big_n % m != 0 {
        return NecessaryFail("M must be an odd divisor of N with N > M >= 3".into());
    }
    if v == 0 || v % big_n != 0 {
        return NecessaryFail("N must divide v".into());
    }
    if alpha + beta != (v - 1) / 2 {
        return NecessaryFail(format!("alpha + beta must equal floor((v-1)/2) = {}", (v - 1) / 2));
    }
    if alpha == 0 || beta == 0 {
        return NecessaryFail("alpha, beta >= 1 (the uniform case is delegated to a single factorization)".into());
    }
    let n = big_n / m;
    if beta == 1 {
        return PaperException("beta = 1".into());
    }
    if beta == 2 && n % 4 == 2 {
        return PaperException("beta = 2 with N = 2M (mod 4M)".into());
    }
    if n == 2 || n == 6 {
        return PaperException("N in {2M, 6M}".into());
    }
    if [1, 2, 4].contains(&(v / big_n)) {
        return PaperException("v in {N, 2N, 4N}".into());
    }
    if m == 3 && v == 6 * big_n {
        return PaperException("(M, v) = (3, 6N)".into());
    }
    Eligible
}

/// How the `r` `C_M[n]`-factors of a graph are split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionPlan {
    pub r: usize,
    pub m: usize,
    pub n: usize,
    /// `(alpha_i, beta_i)` per factor, in factor order.
    pub splits: Vec<(usize, usize)>,
    pub bookkeeping: String,
}

/// The clause of the composition exceptions hit by `beta`, if any.
pub fn compose_exception(r: usize, m: usize, n: usize, beta: usize) -> Option<&'static str> {
    let m_odd = m % 2 == 1;
    if beta == 1 {
        Some("beta = 1")
    } else if beta == 2 && n > 2 && n % 4 == 2 && m_odd {
        Some("beta = 2 < n = 2 (mod 4), M odd")
    } else if n == 2 && !m_odd && beta % 2 == 1 {
        Some("n = 2, M even, beta odd")
    } else if n == 2 && m_odd && beta < r {
        Some("n = 2, M odd, beta < r")
    } else if n == 6 && m_odd && beta < 3 * r {
        Some("n = 6, M odd, beta < 3r")
    } else {
        None
    }
}

pub fn plan_compose(r: usize, m: usize, n: usize, alpha: usize, beta: usize) -> Result<CompositionPlan> {
    if r < 2 || n < 2 || alpha + beta != r * n {
        return invalid(format!("composition needs r >= 2 and alpha + beta = rn, got r = {r}, n = {n}, ({alpha}, {beta})"));
    }
    if let Some(tag) = compose_exception(r, m, n, beta) {
        return exception(tag);
    }
    let mut splits = Vec::with_capacity(r);
    let bookkeeping;
    if (n == 2 || n == 6) && m % 2 == 1 {
        let (x, y) = (beta / r, beta % r);
        bookkeeping = format!("beta = x'r + y' with (x', y') = ({x}, {y})");
        if y > 0 {
            splits.extend(std::iter::repeat((n - x - 1, x + 1)).take(y));
        }
        splits.extend(std::iter::repeat((n - x, x)).take(r - y));
    } else {
        let (x, y) = (beta / n, beta % n);
        bookkeeping = format!("beta = xn + y with (x, y) = ({x}, {y})");
        if x == r {
            splits.extend(std::iter::repeat((0, n)).take(r));
        } else if y == 1 && n == 6 {
            // M even here
            splits.extend(std::iter::repeat((0, n)).take(x - 1));
            splits.push((1, n - 1));
            splits.push((n - 2, 2));
        } else if (y == 1 || y == 2) && x > 0 && n != 2 && n != 6 {
            splits.extend(std::iter::repeat((0, n)).take(x - 1));
            if n >= 4 {
                splits.push((2, n - 2));
                splits.push((n - y - 2, y + 2));
            } else if y == 1 {
                splits.extend([(1, 2), (1, 2)]);
            } else {
                splits.extend([(0, 3), (1, 2)]);
            }
        } else {
            splits.extend(std::iter::repeat((0, n)).take(x));
            splits.push((n - y, y));
        }
        let filled = splits.len();
        splits.extend(std::iter::repeat((n, 0)).take(r - filled));
    }
    debug_assert_eq!(splits.iter().map(|s| s.1).sum::<usize>(), beta);
    Ok(CompositionPlan { r, m, n, splits, bookkeeping })
}

/// Fills the `C_M[n]`-factors of `skeleton` according to the split plan.
pub fn compose(skeleton: &LexSkeleton, alpha: usize, beta: usize) -> Result<(Vec<Factor>, CompositionPlan)> {
    let (m, n) = (skeleton.cycle_len, skeleton.n);
    let plan = plan_compose(skeleton.factors.len(), m, n, alpha, beta)?;
    let mut cache: Vec<((usize, usize), Certificate)> = Vec::new();
    let mut factors = Vec::with_capacity(alpha + beta);
    for (i, &split) in plan.splits.iter().enumerate() {
        let idx = match cache.iter().position(|(s, _)| *s == split) {
            Some(idx) => idx,
            None => {
                let inner = solve_cmn(m, n, split.0, split.1).map_err(|e| with_context(e, format!("C_{m}[{n}] with split {split:?}")))?;
                cache.push((split, inner));
                cache.len() - 1
            }
        };
        factors.extend(skeleton.fill(i, &cache[idx].1)?);
    }
    Ok((factors, plan))
}

fn with_context(err: HwpError, context: String) -> HwpError {
    match err {
        HwpError::Refused(Refusal::Unsupported { trace }) => {
            let mut full = vec![context];
            full.extend(trace);
            HwpError::Refused(Refusal::Unsupported { trace: full })
        }
        HwpError::Refused(other) => HwpError::Refused(Refusal::Unsupported { trace: vec![context, other.to_string()] }),
        HwpError::Budget(what) => {
            HwpError::Refused(Refusal::Unsupported { trace: vec![context, format!("search budget exhausted for {what}")] })
        }
        other => other,
    }
}

/// A verified certificate for `HWP(v; M, N; alpha, beta)`, or a refusal.
pub fn solve(v: usize, m: usize, big_n: usize, alpha: usize, beta: usize) -> Result<Certificate> {
    let verdict = classify(v, m, big_n, alpha, beta);
    let necessary_ok = matches!(&verdict, FeasibilityVerdict::Eligible)
        || ((alpha == 0 || beta == 0) && matches!(&verdict, FeasibilityVerdict::NecessaryFail(c) if c.starts_with("alpha, beta")));
    if !necessary_ok {
        return Err(HwpError::Refused(verdict.refusal().expect("not eligible")));
    }
    let claim = Claim::new(m, big_n, alpha, beta);
    let graph = GraphSpec::complete_star(v);

    if alpha == 0 || beta == 0 {
        let l = if beta == 0 { m } else { big_n };
        let cert = uniform_op(v, l).map_err(|e| with_context(e, format!("C_{l}-factorization of K_{v}*")))?;
        let mut trace = vec![format!("uniform case: one C_{l}-factorization of K_{v}*")];
        trace.extend(cert.trace);
        return Certificate::verified(graph, claim, cert.factors, trace);
    }

    let p = PipelineParams::derive(v, m, big_n, alpha, beta);
    let mut trace = vec![format!(
        "K_{v}* = {t} K_{w}* + K_{t}[{w}], n = {n}, s = {s}, gamma = {g}, (alpha_0, beta_0) = ({a0}, {b0})",
        t = p.t,
        w = p.w,
        n = p.n,
        s = p.s,
        g = p.gamma,
        a0 = p.alpha0,
        b0 = p.beta0
    )];

    let fill_len = if p.alpha0 > 0 { m } else { big_n };
    if fill_len == 3 && p.w == 12 {
        trace.push(format!("beta < gamma + 3 = {} asks for C_3-factors on every K_12*", p.gamma + 3));
        trace.push("no C_3-factorization of K_12* exists, and no other fill of the K_12* blocks is attempted".into());
        return unsupported(trace);
    }
    let block = uniform_op(p.w, fill_len).map_err(|e| with_context(e, format!("C_{fill_len}-factorization of K_{}*", p.w)))?;
    trace.extend(block.trace.iter().cloned());
    let mut factors = merge_blocks(&vec![&block; p.t], p.w)?;

    let skeleton = liu_gen(m, p.t, p.z(), p.n)
        .map_err(|e| with_context(e, format!("C_{m}-factorization of K_{}[{}]", p.t, p.z())))?;
    trace.extend(skeleton.trace.iter().cloned());
    let (cross, plan) = compose(&skeleton, alpha - p.alpha0, beta - p.beta0)?;
    trace.push(format!("{} C_{m}[{}]-factors split as {:?} ({})", plan.r, p.n, plan.splits, plan.bookkeeping));
    factors.extend(cross);

    if v % 2 == 0 {
        let perm = matching_to_standard(v, &block_matching(p.t, p.w))?;
        factors = relabel_factors(&factors, &perm);
    }
    Certificate::verified(graph, claim, factors, trace)
}
