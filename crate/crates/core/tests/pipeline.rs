use hwp_core::designs::uniform_op;
use hwp_core::pipeline::{classify, solve, FeasibilityVerdict};
use hwp_core::{Certificate, GraphSpec, HwpError, Refusal};

fn short_and_long(c: &Certificate) -> (usize, usize) {
    let short = c.factors.iter().filter(|f| f[0].len() == c.claim.m).count();
    (short, c.factors.len() - short)
}

fn assert_solves(v: usize, m: usize, big_n: usize, beta: usize) {
    let alpha = (v - 1) / 2 - beta;
    let cert = solve(v, m, big_n, alpha, beta).unwrap_or_else(|e| panic!("({v}, {m}, {big_n}) beta={beta}: {e}"));
    assert_eq!(cert.graph, GraphSpec::complete_star(v));
    assert!(cert.verify().ok);
    assert_eq!(short_and_long(&cert), (alpha, beta));
    let back = Certificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(back, cert);
}

#[test]
fn odd_orders_across_the_admissible_range() {
    for (v, m, big_n) in [(27, 3, 9), (45, 5, 15), (63, 3, 9), (75, 5, 15)] {
        let total = (v - 1) / 2;
        for beta in 2..total {
            if classify(v, m, big_n, total - beta, beta) == FeasibilityVerdict::Eligible {
                assert_solves(v, m, big_n, beta);
            }
        }
    }
}

#[test]
fn even_orders_above_the_gap() {
    for (v, big_n) in [(36, 12), (60, 12)] {
        for beta in 8..(v - 2) / 2 {
            assert_solves(v, 3, big_n, beta);
        }
    }
}

#[test]
fn refusals_carry_their_reason() {
    let refusal = |v, m, n, a, b| match solve(v, m, n, a, b) {
        Err(HwpError::Refused(r)) => r,
        other => panic!("expected a refusal, got {other:?}"),
    };
    assert!(matches!(refusal(27, 3, 9, 12, 1), Refusal::PaperException { .. }));
    assert!(matches!(refusal(25, 3, 9, 10, 2), Refusal::NecessaryFail { .. }));
    assert!(matches!(refusal(27, 3, 9, 5, 5), Refusal::NecessaryFail { .. }));
    let Refusal::Unsupported { trace } = refusal(60, 3, 12, 25, 4) else { panic!() };
    assert!(trace.iter().any(|l| l.contains("K_12*")), "{trace:?}");
}

#[test]
fn uniform_ends_delegate() {
    let cert = solve(27, 3, 9, 13, 0).unwrap();
    assert_eq!(short_and_long(&cert), (13, 0));
    assert_eq!(uniform_op(21, 3).unwrap().factors.len(), 10);
}
