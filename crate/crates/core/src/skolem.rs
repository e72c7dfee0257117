//! Generalized Skolem sequences: pairs `(a_i, b_i)`, `i = 0..=order`, with
//! `b_i - a_i = i`, whose entries cover an interval `[x, x + 2*order]`.
//!
//! The pair of difference 0 contributes its single element `a_0`, so the
//! cover has exactly `2*order + 1` entries.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkolemSeq {
    pub order: usize,
    pub start: i64,
    /// `pairs[i] = (a_i, b_i)`.
    pub pairs: Vec<(i64, i64)>,
}

impl SkolemSeq {
    pub fn a(&self, i: usize) -> i64 {
        self.pairs[i].0
    }

    pub fn b(&self, i: usize) -> i64 {
        self.pairs[i].1
    }

    pub fn shifted(&self, t: i64) -> SkolemSeq {
        SkolemSeq {
            order: self.order,
            start: self.start + t,
            pairs: self.pairs.iter().map(|&(a, b)| (a + t, b + t)).collect(),
        }
    }

    pub fn covers(&self) -> (i64, i64) {
        (self.start, self.start + 2 * self.order as i64)
    }
}

/// Builds a sequence of order `order` covering `[start, start + 2*order]`.
///
/// Even differences are nested around the zero pair and odd differences
/// are nested in the block that follows:
///
/// ```text
///   [start, start+2E]            pairs (c-j, c+j), j = 1..=E, a_0 = c
///   [start+2E+1, start+2*order]  pairs (d-j, d+j+1), j = 0..O
/// ```
///
/// with `E = order/2` even differences and `O = order - E` odd ones.
pub fn build_skolem(order: usize, start: i64) -> SkolemSeq {
    let evens = (order / 2) as i64;
    let odds = order as i64 - evens;
    let centre = start + evens;
    // odd block occupies [start + 2E + 1, start + 2E + 2O]
    let odd_mid = start + 2 * evens + odds;
    let mut pairs = vec![(0, 0); order + 1];
    pairs[0] = (centre, centre);
    for j in 1..=evens {
        pairs[2 * j as usize] = (centre - j, centre + j);
    }
    for j in 0..odds {
        pairs[(2 * j + 1) as usize] = (odd_mid - j, odd_mid + j + 1);
    }
    SkolemSeq { order, start, pairs }
}

pub fn validate_skolem(s: &SkolemSeq) -> bool {
    if s.pairs.len() != s.order + 1 {
        return false;
    }
    if s.pairs.iter().enumerate().any(|(i, &(a, b))| b - a != i as i64) {
        return false;
    }
    let len = 2 * s.order + 1;
    let mut hit = vec![false; len];
    let mut mark = |x: i64| -> bool {
        let off = x - s.start;
        if off < 0 || off >= len as i64 || hit[off as usize] {
            return false;
        }
        hit[off as usize] = true;
        true
    };
    if !mark(s.a(0)) {
        return false;
    }
    for &(a, b) in &s.pairs[1..] {
        if !mark(a) || !mark(b) {
            return false;
        }
    }
    true
}

/// Backtracking search, largest difference first, smallest free position
/// first. Exponential; used as an independent oracle in tests.
pub fn search_skolem(order: usize, start: i64) -> Option<SkolemSeq> {
    fn place(d: usize, free: &mut [bool], pairs: &mut [(i64, i64)]) -> bool {
        if d == 0 {
            let pos = free.iter().position(|&f| f);
            return match pos {
                Some(p) => {
                    pairs[0] = (p as i64, p as i64);
                    true
                }
                None => false,
            };
        }
        for p in 0..free.len().saturating_sub(d) {
            if free[p] && free[p + d] {
                free[p] = false;
                free[p + d] = false;
                pairs[d] = (p as i64, (p + d) as i64);
                if place(d - 1, free, pairs) {
                    return true;
                }
                free[p] = true;
                free[p + d] = true;
            }
        }
        false
    }
    let mut free = vec![true; 2 * order + 1];
    let mut pairs = vec![(0, 0); order + 1];
    place(order, &mut free, &mut pairs).then(|| {
        SkolemSeq {
            order,
            start: 0,
            pairs,
        }
        .shifted(start)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_zero() {
        let s = build_skolem(0, 5);
        assert_eq!(s.pairs, vec![(5, 5)]);
        assert!(validate_skolem(&s));
    }

    #[test]
    fn hand_examples() {
        let s = SkolemSeq {
            order: 1,
            start: 1,
            pairs: vec![(3, 3), (1, 2)],
        };
        assert!(validate_skolem(&s));
        let bad = SkolemSeq {
            order: 1,
            start: 1,
            pairs: vec![(3, 3), (1, 3)],
        };
        assert!(!validate_skolem(&bad));
        let pure = SkolemSeq {
            order: 4,
            start: 1,
            pairs: vec![(9, 9), (1, 2), (5, 7), (3, 6), (4, 8)],
        };
        assert!(validate_skolem(&pure));
    }

    #[test]
    fn build_matches_small_cases() {
        assert!(validate_skolem(&build_skolem(1, 1)));
        assert_eq!(build_skolem(1, 1).covers(), (1, 3));
        assert!(validate_skolem(&build_skolem(4, 1)));
    }

    #[test]
    fn oracle_finds_sequences_wherever_builder_does() {
        for order in 0..9 {
            let found = search_skolem(order, 1).expect("exists for every order");
            assert!(validate_skolem(&found));
            assert!(validate_skolem(&build_skolem(order, 1)));
        }
    }

    #[test]
    fn rejects_wrong_length_and_out_of_range() {
        let mut s = build_skolem(3, 0);
        s.pairs.pop();
        assert!(!validate_skolem(&s));
        let mut s = build_skolem(3, 0);
        s.start = 1;
        assert!(!validate_skolem(&s));
    }

    #[test]
    fn all_orders_up_to_500() {
        for order in 0..=500 {
            for x in [-(order as i64), 0, 1] {
                let s = build_skolem(order, x);
                assert!(validate_skolem(&s), "order {order}, start {x}");
            }
        }
    }

    proptest! {
        #[test]
        fn translation_equivariant(order in 0usize..200, t in -1000i64..1000) {
            let base = build_skolem(order, 0);
            prop_assert_eq!(build_skolem(order, t), base.shifted(t));
            prop_assert!(validate_skolem(&base.shifted(t)));
        }
    }
}
