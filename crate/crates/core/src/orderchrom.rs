//! Counts isotone maps into {1..n} that avoid equality on a set of forbidden
//! pairs, interpolates the counting polynomial, and checks the denominator
//! bound and p-divisibility guarantees that come with it.

use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

use crate::polynomials::{denominator_primes, interpolate, PolyError, Rational, UniPoly};
use crate::poset::ConstraintSystem;

pub const DEFAULT_MAP_BUDGET: u64 = 200_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum ChromError {
    #[error("search space {space:e} exceeds budget {budget}")]
    Budget { space: f64, budget: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {prime} must exceed the denominator bound {bound}")]
    PrimeTooSmall { prime: u64, bound: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The counting polynomial together with the data of its denominator bound.
#[derive(Clone, Debug)]
pub struct OrderChromResult {
    pub polynomial: UniPoly,
    /// Number of connected components of the underlying poset.
    pub component_count: usize,
    /// |S| − c + 1: no denominator prime may exceed this.
    pub bound: u64,
    pub denominator_prime_set: Vec<u64>,
}

/// Number of maps φ: S → {1..n} with φ weakly increasing along ≼ and
/// φ(x) ≠ φ(y) for every forbidden pair {x,y}.
pub fn count_maps(s: &ConstraintSystem, n: u64) -> Result<BigInt, ChromError> {
    count_maps_with_budget(s, n, DEFAULT_MAP_BUDGET)
}

pub fn count_maps_with_budget(
    s: &ConstraintSystem,
    n: u64,
    budget: u64,
) -> Result<BigInt, ChromError> {
    let m = s.poset.len();
    if m == 0 {
        return Ok(BigInt::one());
    }
    if n == 0 {
        return Ok(BigInt::zero());
    }
    let space = (n as f64).powi(m as i32);
    if space > budget as f64 {
        return Err(ChromError::Budget { space, budget });
    }

    // Assign values in a topological order so every strict predecessor of an
    // element is placed first and imposes its value as a lower bound.
    let order = topological_order(s);
    let mut position = vec![0usize; m];
    for (pos, &e) in order.iter().enumerate() {
        position[e] = pos;
    }
    // For each element, the predecessors (by ≼) and forbidden partners that
    // appear earlier in the assignment order.
    let mut earlier_preds: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut earlier_forbidden: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &e in &order {
        for f in 0..m {
            if f != e && s.poset.leq_idx(f, e) && position[f] < position[e] {
                earlier_preds[e].push(f);
            }
        }
    }
    for &(i, j) in &s.forbidden_equal {
        let (early, late) = if position[i] < position[j] { (i, j) } else { (j, i) };
        earlier_forbidden[late].push(early);
    }

    let mut values = vec![0u64; m];
    let mut count = BigInt::zero();
    let mut stack: Vec<(usize, u64)> = vec![(0, 0)]; // (depth, next value to try)
    while let Some((depth, tried)) = stack.pop() {
        if depth == m {
            count += 1;
            continue;
        }
        let e = order[depth];
        let lb = earlier_preds[e]
            .iter()
            .map(|&f| values[f])
            .max()
            .unwrap_or(1);
        let mut v = tried.max(lb);
        while v <= n {
            if earlier_forbidden[e].iter().any(|&f| values[f] == v) {
                v += 1;
                continue;
            }
            values[e] = v;
            stack.push((depth, v + 1));
            stack.push((depth + 1, 0));
            break;
        }
    }
    Ok(count)
}

fn topological_order(s: &ConstraintSystem) -> Vec<usize> {
    let m = s.poset.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&e| (0..m).filter(|&f| s.poset.lt(f, e)).count());
    order
}

/// Interpolates `count_maps` at n = 0..|S|, verifies two surplus points, and
/// packages the component count and denominator prime data.
pub fn order_chromatic_polynomial(s: &ConstraintSystem) -> Result<OrderChromResult, ChromError> {
    let m = s.poset.len();
    let mut samples = Vec::with_capacity(m + 3);
    for n in 0..=(m as u64 + 2) {
        samples.push((
            BigInt::from(n),
            Rational::from_integer(count_maps(s, n)?),
        ));
    }
    let polynomial = interpolate(&samples, m)?;
    let component_count = s.poset.connected_components().len();
    let bound = (m + 1 - component_count.min(m)) as u64;
    let denominator_prime_set = denominator_primes(&polynomial);
    Ok(OrderChromResult {
        polynomial,
        component_count,
        bound,
        denominator_prime_set,
    })
}

/// Least n ≥ 1 admitting a proper coloring of the graph (|S|, E); 0 for the
/// empty vertex set.
pub fn chromatic_number(s: &ConstraintSystem) -> u64 {
    let m = s.poset.len();
    if m == 0 {
        return 0;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(i, j) in &s.forbidden_equal {
        adj[i].push(j);
        adj[j].push(i);
    }
    for n in 1..=m as u64 {
        if colorable(&adj, n) {
            return n;
        }
    }
    m as u64
}

fn colorable(adj: &[Vec<usize>], n: u64) -> bool {
    let m = adj.len();
    let mut colors = vec![0u64; m];
    fn go(adj: &[Vec<usize>], colors: &mut [u64], v: usize, n: u64) -> bool {
        if v == colors.len() {
            return true;
        }
        for c in 1..=n {
            if adj[v].iter().all(|&w| colors[w] != c) {
                colors[v] = c;
                if go(adj, colors, v + 1, n) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }
    go(adj, &mut colors, 0, n)
}

#[derive(Clone, Debug)]
pub struct DivisibilityCheck {
    pub n: u64,
    pub count: BigInt,
    pub divisible: bool,
}

#[derive(Clone, Debug)]
pub struct DivisibilityReport {
    pub prime: u64,
    pub chromatic_number: u64,
    /// One entry per qualifying n (residue mod p below the chromatic number).
    pub checks: Vec<DivisibilityCheck>,
}

impl DivisibilityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.divisible)
    }
}

/// For each n with n mod p < chromatic number, checks p | C(S,n).
pub fn verify_divisibility(
    s: &ConstraintSystem,
    p: u64,
    n_values: &[u64],
) -> Result<DivisibilityReport, ChromError> {
    if !is_prime(p) {
        return Err(ChromError::NotPrime(p));
    }
    let bound = order_chromatic_polynomial(s)?.bound;
    if p <= bound {
        return Err(ChromError::PrimeTooSmall { prime: p, bound });
    }
    let chrom = chromatic_number(s);
    let mut checks = Vec::new();
    for &n in n_values {
        if n % p >= chrom {
            continue;
        }
        let count = count_maps(s, n)?;
        let divisible = (&count % BigInt::from(p)).is_zero();
        checks.push(DivisibilityCheck { n, count, divisible });
    }
    Ok(DivisibilityReport {
        prime: p,
        chromatic_number: chrom,
        checks,
    })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{rat, rat_frac};
    use crate::poset::{antichain, chain, ConstraintSystem, Poset};

    fn sys(p: Poset, pairs: &[(usize, usize)]) -> ConstraintSystem {
        ConstraintSystem::from_index_pairs(p, pairs.to_vec())
    }

    #[test]
    fn complete_graph_falling_factorial() {
        let s = sys(antichain(&["a", "b", "c"]), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(count_maps(&s, 3).unwrap(), BigInt::from(6));
        assert_eq!(count_maps(&s, 5).unwrap(), BigInt::from(5 * 4 * 3));
    }

    #[test]
    fn two_chain_weakly_increasing() {
        let s = sys(chain(&["a", "b"]), &[]);
        assert_eq!(count_maps(&s, 3).unwrap(), BigInt::from(6));
        assert_eq!(count_maps(&s, 0).unwrap(), BigInt::zero());
    }

    #[test]
    fn empty_system() {
        let s = sys(antichain(&[]), &[]);
        assert_eq!(count_maps(&s, 0).unwrap(), BigInt::one());
        let r = order_chromatic_polynomial(&s).unwrap();
        assert_eq!(r.polynomial.coeffs(), &[rat(1)]);
        assert_eq!(chromatic_number(&s), 0);
    }

    #[test]
    fn two_chain_polynomial() {
        let s = sys(chain(&["a", "b"]), &[]);
        let r = order_chromatic_polynomial(&s).unwrap();
        assert_eq!(r.polynomial.coeffs(), &[rat(0), rat_frac(1, 2), rat_frac(1, 2)]);
        assert_eq!(r.component_count, 1);
        assert_eq!(r.bound, 2);
        assert_eq!(r.denominator_prime_set, vec![2]);
    }

    #[test]
    fn antichain_complete_graph_polynomial_is_integral() {
        let s = sys(antichain(&["a", "b", "c"]), &[(0, 1), (0, 2), (1, 2)]);
        let r = order_chromatic_polynomial(&s).unwrap();
        assert!(r.denominator_prime_set.is_empty());
        assert_eq!(r.bound, 1);
        // n(n-1)(n-2)
        assert_eq!(r.polynomial.eval_int(7), rat(7 * 6 * 5));
    }

    #[test]
    fn chromatic_numbers() {
        let s = sys(antichain(&["a", "b", "c"]), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(chromatic_number(&s), 3);
        let s = sys(antichain(&["a", "b", "c", "d"]), &[]);
        assert_eq!(chromatic_number(&s), 1);
        let s = sys(antichain(&["a", "b"]), &[(0, 1)]);
        assert_eq!(chromatic_number(&s), 2);
    }

    #[test]
    fn divisibility_two_disjoint_chains() {
        // Two 2-chains: four elements in two components, bound 3.
        let p = Poset::from_covers(
            &["a1", "a2", "b1", "b2"],
            &[("a1", "a2"), ("b1", "b2")],
        )
        .unwrap();
        let s = sys(p, &[(0, 2)]);
        let report = verify_divisibility(&s, 5, &[5, 10, 6]).unwrap();
        assert!(report.passed());
        assert!(report.checks.iter().any(|c| c.n == 5));
        let c5 = report.checks.iter().find(|c| c.n == 5).unwrap();
        assert!((&c5.count % BigInt::from(5)).is_zero());
    }

    #[test]
    fn divisibility_preconditions() {
        let s = sys(chain(&["a", "b"]), &[]);
        assert_eq!(
            verify_divisibility(&s, 4, &[4]).unwrap_err(),
            ChromError::NotPrime(4)
        );
        assert_eq!(
            verify_divisibility(&s, 2, &[2]).unwrap_err(),
            ChromError::PrimeTooSmall { prime: 2, bound: 2 }
        );
    }

    #[test]
    fn empty_system_divisibility_is_vacuous() {
        let s = sys(antichain(&[]), &[]);
        let report = verify_divisibility(&s, 3, &[0, 3, 6]).unwrap();
        assert!(report.checks.is_empty());
        assert!(report.passed());
    }

    #[test]
    fn polynomial_matches_counts_on_mixed_system() {
        let p = Poset::from_covers(&["a", "b", "c"], &[("a", "b")]).unwrap();
        let s = sys(p, &[(1, 2)]);
        let r = order_chromatic_polynomial(&s).unwrap();
        for n in 0..=7u64 {
            assert_eq!(
                r.polynomial.eval_int(n as i64),
                rat(i64::try_from(count_maps(&s, n).unwrap()).unwrap()),
            );
        }
    }

    #[test]
    fn budget_guard() {
        let s = sys(antichain(&["a", "b", "c", "d", "e"]), &[]);
        assert!(matches!(
            count_maps_with_budget(&s, 100, 1000).unwrap_err(),
            ChromError::Budget { .. }
        ));
    }
}
