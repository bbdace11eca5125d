//! Expands (ar)^{p-1}a in the free setting where A is commutative and
//! ad_r maps A into A, verifies that the residual after removing the two
//! extreme strata has all coefficients divisible by p, and bridges each
//! coefficient to an order-chromatic count.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{BigUint, One, Zero};
use thiserror::Error;

use crate::orderchrom::{count_maps, is_prime, ChromError};
use crate::poset::{ConstraintSystem, Poset};

/// Raw expansion sizes reach p! terms; beyond this they stop being instant.
pub const MAX_P: u64 = 11;

#[derive(Debug, Error, PartialEq)]
pub enum HochschildError {
    #[error("p = {0} exceeds the expansion budget {MAX_P}")]
    Budget(u64),
    #[error("p must be at least 2, got {0}")]
    TooSmall(u64),
    #[error("{0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Chrom(#[from] ChromError),
}

/// A product ad_r^{m₁}(a)·…·ad_r^{m_p}(a)·r^q with the commutative A-part
/// stored as a descending exponent list, zeros included.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FreeMonomial {
    pub a_exponents: Vec<u32>,
    pub r_power: u32,
}

impl FreeMonomial {
    pub fn new(mut a_exponents: Vec<u32>, r_power: u32) -> Self {
        a_exponents.sort_unstable_by(|a, b| b.cmp(a));
        FreeMonomial {
            a_exponents,
            r_power,
        }
    }

    pub fn exponent_sum(&self) -> u32 {
        self.a_exponents.iter().sum()
    }
}

impl fmt::Display for FreeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces = Vec::new();
        let mut plain = 0u32;
        for &m in &self.a_exponents {
            if m == 0 {
                plain += 1;
            } else {
                pieces.push(format!("ad^{m}(a)"));
            }
        }
        match plain {
            0 => {}
            1 => pieces.push("a".to_string()),
            k => pieces.push(format!("a^{k}")),
        }
        match self.r_power {
            0 => {}
            1 => pieces.push("r".to_string()),
            q => pieces.push(format!("r^{q}")),
        }
        if pieces.is_empty() {
            pieces.push("1".to_string());
        }
        write!(f, "{}", pieces.join("·"))
    }
}

/// Integer combination of monomials; no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeExpression {
    pub terms: BTreeMap<FreeMonomial, BigInt>,
}

impl FreeExpression {
    pub fn add_term(&mut self, m: FreeMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coefficient(&self, m: &FreeMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn subtract(&mut self, other: &FreeExpression) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

/// A collected expansion, remembering how many raw terms it came from.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub expression: FreeExpression,
    pub raw_terms: u64,
}

fn check_p(p: u64) -> Result<usize, HochschildError> {
    if p < 2 {
        return Err(HochschildError::TooSmall(p));
    }
    if p > MAX_P {
        return Err(HochschildError::Budget(p));
    }
    Ok(p as usize)
}

/// Full expansion of (ar)^{p-1}a. Each of the p−1 interior r's is pushed to
/// the right past the A-factors, either acting on one of them (raising its
/// ad-exponent) or passing them all to join the trailing r power. The r's
/// are resolved rightmost first; resolving the k-th from the right offers
/// k+1 choices, for p! raw terms in total.
pub fn expand_ar_power(p: u64) -> Result<Expansion, HochschildError> {
    let p = check_p(p)?;
    let mut out = Expansion {
        expression: FreeExpression::default(),
        raw_terms: 0,
    };
    let mut exps = vec![0u32; p];
    resolve_r(p - 1, &mut exps, 0, p, &mut out);
    Ok(out)
}

fn resolve_r(i: usize, exps: &mut Vec<u32>, r_power: u32, p: usize, out: &mut Expansion) {
    if i == 0 {
        out.raw_terms += 1;
        out.expression
            .add_term(FreeMonomial::new(exps.clone(), r_power), BigInt::one());
        return;
    }
    // the r sitting after the i-th A-factor: act on factor i+1..p, or pass
    for target in i..p {
        exps[target] += 1;
        resolve_r(i - 1, exps, r_power, p, out);
        exps[target] -= 1;
    }
    resolve_r(i - 1, exps, r_power + 1, p, out);
}

/// ad_{ar}^{p-1}(a). Since ad_{ar}(x) = a·ad_r(x) on the commutative part,
/// this is the nest a·ad_r(a·ad_r(…(a·ad_r(a))…)), expanded by the Leibniz
/// rule; (p−1)! raw terms, every r consumed.
pub fn ad_ar_power(p: u64) -> Result<Expansion, HochschildError> {
    let p = check_p(p)?;
    // raw monomials as unsorted exponent lists
    let mut raw: Vec<Vec<u32>> = vec![vec![0]];
    for _ in 1..p {
        let mut next = Vec::new();
        for word in &raw {
            for j in 0..word.len() {
                let mut w = word.clone();
                w[j] += 1;
                w.push(0);
                next.push(w);
            }
        }
        raw = next;
    }
    let mut expression = FreeExpression::default();
    let raw_terms = raw.len() as u64;
    for w in raw {
        expression.add_term(FreeMonomial::new(w, 0), BigInt::one());
    }
    Ok(Expansion {
        expression,
        raw_terms,
    })
}

/// (ar)^{p-1}a − a^p·r^{p-1} − ad_{ar}^{p-1}(a). The subtractions remove the
/// strata Σm = 0 and Σm = p−1 exactly.
pub fn hochschild_residual(p: u64) -> Result<FreeExpression, HochschildError> {
    let pu = check_p(p)?;
    let mut expr = expand_ar_power(p)?.expression;
    expr.add_term(
        FreeMonomial::new(vec![0; pu], (pu - 1) as u32),
        -BigInt::one(),
    );
    expr.subtract(&ad_ar_power(p)?.expression);
    Ok(expr)
}

#[derive(Clone, Debug)]
pub struct GphEntry {
    pub monomial: FreeMonomial,
    pub coefficient: BigInt,
    /// coefficient / p when divisible.
    pub quotient: Option<BigInt>,
}

#[derive(Clone, Debug)]
pub struct GphReport {
    pub p: u64,
    pub p_is_prime: bool,
    pub entries: Vec<GphEntry>,
}

impl GphReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.quotient.is_some())
    }
}

/// Checks that every residual coefficient is divisible by p. Non-prime p is
/// allowed for exploration; the report flags it and failures are expected.
pub fn verify_lemma_gph(p: u64) -> Result<GphReport, HochschildError> {
    let residual = hochschild_residual(p)?;
    let big_p = BigInt::from(p);
    let entries = residual
        .terms
        .into_iter()
        .map(|(monomial, coefficient)| {
            let quotient = if (&coefficient % &big_p).is_zero() {
                Some(&coefficient / &big_p)
            } else {
                None
            };
            GphEntry {
                monomial,
                coefficient,
                quotient,
            }
        })
        .collect();
    Ok(GphReport {
        p,
        p_is_prime: is_prime(p),
        entries,
    })
}

/// The constraint system whose order-chromatic count at p reproduces a
/// residual coefficient: one chain of length mᵢ+1 per nonzero exponent, with
/// every pair of elements forbidden to fall together except a maximal
/// element of one chain with a nonmaximal element of another.
pub fn bridge_constraint_system(nonzero_exponents: &[u32]) -> ConstraintSystem {
    let mut labels = Vec::new();
    let mut covers = Vec::new();
    let mut component = Vec::new(); // (component id, is maximal)
    for (ci, &m) in nonzero_exponents.iter().enumerate() {
        let size = m as usize + 1;
        for k in 0..size {
            labels.push(format!("c{ci}e{k}"));
            component.push((ci, k + 1 == size));
            if k > 0 {
                covers.push((format!("c{ci}e{}", k - 1), format!("c{ci}e{k}")));
            }
        }
    }
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let cover_refs: Vec<(&str, &str)> = covers
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let poset = Poset::from_covers(&label_refs, &cover_refs).unwrap();
    let n = poset.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (ci, i_max) = component[i];
            let (cj, j_max) = component[j];
            let exempt = ci != cj && ((i_max && !j_max) || (j_max && !i_max));
            if !exempt {
                pairs.push((i, j));
            }
        }
    }
    ConstraintSystem::from_index_pairs(poset, pairs)
}

#[derive(Clone, Debug)]
pub struct CrossCheckReport {
    pub p: u64,
    pub exponents: Vec<u32>,
    pub chromatic_count: BigInt,
    pub multiplicity_divisor: BigUint,
    pub predicted: BigInt,
    pub coefficient: BigInt,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.predicted == self.coefficient
    }
}

/// Compares the coefficient of the monomial with the given nonzero exponents
/// (zeros padded, r_power = p−1−Σm) in expand_ar_power(p) against
/// C(S,p)/∏_m h_m!, where h_m counts repeats among the nonzero exponents.
pub fn coefficient_cross_check(
    p: u64,
    nonzero_exponents: &[u32],
) -> Result<CrossCheckReport, HochschildError> {
    let pu = check_p(p)?;
    if nonzero_exponents.iter().any(|&m| m == 0) {
        return Err(HochschildError::PreconditionViolated(
            "exponent list must contain only nonzero entries".into(),
        ));
    }
    let total: u32 = nonzero_exponents.iter().sum();
    if total == 0 || total as usize >= pu - 1 {
        return Err(HochschildError::PreconditionViolated(format!(
            "exponent sum {total} must lie strictly between 0 and {}",
            pu - 1
        )));
    }
    if nonzero_exponents.len() > pu {
        return Err(HochschildError::PreconditionViolated(
            "more factors than a-positions".into(),
        ));
    }
    let s = bridge_constraint_system(nonzero_exponents);
    let chromatic_count = count_maps(&s, p)?;
    let mut multiplicity: BTreeMap<u32, u64> = BTreeMap::new();
    for &m in nonzero_exponents {
        *multiplicity.entry(m).or_insert(0) += 1;
    }
    let mut divisor = BigUint::one();
    for h in multiplicity.values() {
        divisor *= crate::lexsum::factorial(*h);
    }
    let predicted = &chromatic_count / BigInt::from(divisor.clone());
    let mut exps = nonzero_exponents.to_vec();
    exps.resize(pu, 0);
    let monomial = FreeMonomial::new(exps, (pu - 1) as u32 - total);
    let coefficient = expand_ar_power(p)?.expression.coefficient(&monomial);
    Ok(CrossCheckReport {
        p,
        exponents: nonzero_exponents.to_vec(),
        chromatic_count,
        multiplicity_divisor: divisor,
        predicted,
        coefficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_expansion() {
        let e = expand_ar_power(2).unwrap();
        assert_eq!(e.raw_terms, 2);
        assert_eq!(
            e.expression.coefficient(&FreeMonomial::new(vec![0, 0], 1)),
            BigInt::one()
        );
        assert_eq!(
            e.expression.coefficient(&FreeMonomial::new(vec![1, 0], 0)),
            BigInt::one()
        );
        assert_eq!(e.expression.terms.len(), 2);
    }

    #[test]
    fn p3_raw_counts() {
        assert_eq!(expand_ar_power(3).unwrap().raw_terms, 6);
        let ad = ad_ar_power(3).unwrap();
        assert_eq!(ad.raw_terms, 2);
        let keys: Vec<_> = ad.expression.terms.keys().cloned().collect();
        assert_eq!(keys.len(), 2);
        assert!(keys.contains(&FreeMonomial::new(vec![2, 0, 0], 0)));
        assert!(keys.contains(&FreeMonomial::new(vec![1, 1, 0], 0)));
    }

    #[test]
    fn conservation() {
        for p in 2..=5u64 {
            let e = expand_ar_power(p).unwrap();
            for m in e.expression.terms.keys() {
                assert_eq!(m.a_exponents.len(), p as usize);
                assert_eq!(m.exponent_sum() + m.r_power, p as u32 - 1);
            }
        }
    }

    #[test]
    fn ad_power_absorbs_every_r() {
        for p in 2..=6u64 {
            let e = ad_ar_power(p).unwrap();
            assert_eq!(e.raw_terms, u64::try_from(crate::lexsum::factorial(p - 1)).unwrap());
            for m in e.expression.terms.keys() {
                assert_eq!(m.r_power, 0);
                assert_eq!(u64::from(m.exponent_sum()), p - 1);
            }
        }
    }

    #[test]
    fn residual_p2_is_zero() {
        assert!(hochschild_residual(2).unwrap().is_zero());
    }

    #[test]
    fn residual_strata() {
        for p in 3..=6u64 {
            let r = hochschild_residual(p).unwrap();
            for m in r.terms.keys() {
                let s = m.exponent_sum();
                assert!(0 < s && u64::from(s) < p - 1, "stratum {s} survived at p={p}");
            }
        }
    }

    #[test]
    fn lemma_holds_for_small_primes() {
        for p in [2u64, 3, 5] {
            let report = verify_lemma_gph(p).unwrap();
            assert!(report.p_is_prime);
            assert!(report.passed(), "divisibility failed at p={p}");
        }
    }

    #[test]
    fn composite_p_flagged() {
        let report = verify_lemma_gph(4).unwrap();
        assert!(!report.p_is_prime);
    }

    #[test]
    fn cross_check_p5() {
        let r = coefficient_cross_check(5, &[1]).unwrap();
        assert!(r.passed(), "predicted {} vs coefficient {}", r.predicted, r.coefficient);
        let r = coefficient_cross_check(5, &[1, 1]).unwrap();
        assert_eq!(r.multiplicity_divisor, BigUint::from(2u32));
        assert!(r.passed());
    }

    #[test]
    fn cross_check_p3() {
        let r = coefficient_cross_check(3, &[1]).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn cross_check_preconditions() {
        assert!(matches!(
            coefficient_cross_check(3, &[2]),
            Err(HochschildError::PreconditionViolated(_))
        ));
        assert!(matches!(
            coefficient_cross_check(5, &[0, 1]),
            Err(HochschildError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn rendering() {
        let m = FreeMonomial::new(vec![2, 1, 0, 0, 0], 2);
        assert_eq!(m.to_string(), "ad^2(a)·ad^1(a)·a^3·r^2");
        let m = FreeMonomial::new(vec![0, 0], 1);
        assert_eq!(m.to_string(), "a^2·r");
    }
}
