//! Property tests for the structural invariants that hold on arbitrary
//! small inputs.

use num::{BigUint, Integer, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

use linext::lexsum::{chain_substituted_poset, floor_theorem_l_minus, ChainSizesQuery};
use linext::linearization::{
    enumerate_linearizations, group_ring_l, group_ring_l_ideal_dp, naive_group_ring_l,
};
use linext::orderchrom::{count_maps, order_chromatic_polynomial};
use linext::polynomials::Rational;
use linext::poset::{ConstraintSystem, Poset};

/// A poset on `n` elements from a bag of upward edge bits.
fn poset_from_bits(n: usize, bits: &[bool]) -> Poset {
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut relation = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if bits[k % bits.len().max(1)] {
                relation.push((labels[i].clone(), labels[j].clone()));
            }
            k += 1;
        }
    }
    Poset::from_covers(&labels, &relation).unwrap()
}

fn arb_poset(max_n: usize) -> impl Strategy<Value = Poset> {
    (0..=max_n, vec(any::<bool>(), 1..=32))
        .prop_map(|(n, bits)| poset_from_bits(n, &bits))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_transitive_and_reduction_covers(p in arb_poset(6)) {
        let n = p.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if p.lt(i, j) && p.lt(j, k) {
                        prop_assert!(p.lt(i, k));
                    }
                }
                prop_assert!(!(p.lt(i, j) && p.lt(j, i)));
            }
        }
        // rebuilding from the covers reproduces the order
        let q = Poset::from_covers(p.elements(), &p.cover_labels()).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(p.lt(i, j), q.lt(i, j));
            }
        }
    }

    #[test]
    fn counting_paths_agree(p in arb_poset(6)) {
        let backtracking = group_ring_l(&p).unwrap();
        prop_assert_eq!(&backtracking, &naive_group_ring_l(&p));
        prop_assert_eq!(&backtracking, &group_ring_l_ideal_dp(&p));
    }

    #[test]
    fn image_condition(p in arb_poset(6)) {
        // L₊ and L₋ share parity, and |L₋| never exceeds L₊.
        let l = group_ring_l_ideal_dp(&p);
        prop_assert!(l.image_condition_holds());
        let plus = l.l_plus();
        let minus = l.l_minus();
        prop_assert!(minus.magnitude() <= &plus);
        prop_assert!((num::BigInt::from(plus) - minus).is_even());
    }

    #[test]
    fn linearizations_are_isotone_and_distinct(p in arb_poset(5)) {
        let all = enumerate_linearizations(&p, None).unwrap();
        for l in &all {
            for (a, x) in l.order.iter().enumerate() {
                for y in &l.order[a + 1..] {
                    prop_assert!(!p.leq(y, x).unwrap() || x == y);
                }
            }
        }
        let mut seen: Vec<_> = all.iter().map(|l| l.order.clone()).collect();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen.len(), all.len());
    }

    #[test]
    fn floor_rule_matches_enumeration(
        p in arb_poset(3),
        sizes in vec(0u64..=3, 3),
    ) {
        let q = ChainSizesQuery::new(p.clone(), sizes[..p.len()].to_vec()).unwrap();
        if let Some(value) = floor_theorem_l_minus(&q).unwrap() {
            let oracle = group_ring_l_ideal_dp(&chain_substituted_poset(&q).unwrap());
            prop_assert_eq!(oracle.l_minus(), value);
        }
    }

    #[test]
    fn chromatic_polynomial_extrapolates(
        p in arb_poset(4),
        edge_bits in vec(any::<bool>(), 1..=8),
    ) {
        let n = p.len();
        let mut pairs = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if edge_bits[k % edge_bits.len()] {
                    pairs.push((i, j));
                }
                k += 1;
            }
        }
        let s = ConstraintSystem::from_index_pairs(p, pairs);
        let result = order_chromatic_polynomial(&s).unwrap();
        for v in 0..=(n as u64 + 4) {
            prop_assert_eq!(
                result.polynomial.eval_int(v as i64),
                Rational::from_integer(count_maps(&s, v).unwrap())
            );
        }
        prop_assert!(result.denominator_prime_set.iter().all(|&q| q <= result.bound));
    }

    #[test]
    fn counts_are_monotone_in_n(sizes in vec(0u64..=2, 0..=4)) {
        // weakly increasing maps only grow with more available values
        let labels: Vec<String> = (0..sizes.len()).map(|i| format!("e{i}")).collect();
        let p = Poset::from_covers(&labels, &[]).unwrap();
        let s = ConstraintSystem::from_index_pairs(p, Vec::new());
        let mut last = BigUint::zero();
        for v in 0..5u64 {
            let c = count_maps(&s, v).unwrap();
            let c = c.magnitude().clone();
            prop_assert!(c >= last);
            last = c;
        }
    }
}
