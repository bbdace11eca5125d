//! Exact rational polynomial arithmetic: Newton interpolation, parity-split
//! fitting, denominator prime analysis, and grid-based multivariate fits.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, Integer, One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(BigInt),
    #[error("not enough samples: need {need}, got {got}")]
    NotEnoughSamples { need: usize, got: usize },
    #[error("samples are not polynomial of the given degree; witness at {witness:?}")]
    NonPolynomial { witness: Vec<BigInt> },
}

/// Univariate polynomial with exact rational coefficients, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients in ascending degree; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&Rational::from_integer(BigInt::from(x)))
    }

    fn scale(&self, k: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UniPoly::new(out)
    }

    fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

/// Unique polynomial of degree ≤ `degree_bound` through the first
/// `degree_bound + 1` samples, Newton divided-difference form. Any surplus
/// sample that disagrees yields `NonPolynomial` with that sample as witness.
pub fn interpolate(
    samples: &[(BigInt, Rational)],
    degree_bound: usize,
) -> Result<UniPoly, PolyError> {
    let need = degree_bound + 1;
    if samples.len() < need {
        return Err(PolyError::NotEnoughSamples {
            need,
            got: samples.len(),
        });
    }
    for (i, (x, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(x2, _)| x2 == x) {
            return Err(PolyError::DuplicateAbscissa(x.clone()));
        }
    }
    let nodes: Vec<Rational> = samples[..need]
        .iter()
        .map(|(x, _)| Rational::from_integer(x.clone()))
        .collect();
    // divided differences
    let mut table: Vec<Rational> = samples[..need].iter().map(|(_, y)| y.clone()).collect();
    let mut newton = vec![table[0].clone()];
    for order in 1..need {
        for i in 0..(need - order) {
            let num = &table[i + 1] - &table[i];
            let den = &nodes[i + order] - &nodes[i];
            table[i] = num / den;
        }
        newton.push(table[0].clone());
    }
    // expand to monomial basis
    let mut poly = UniPoly::zero();
    let mut basis = UniPoly::new(vec![Rational::one()]);
    for (k, c) in newton.iter().enumerate() {
        poly = poly.add(&basis.scale(c));
        if k + 1 < need {
            let factor = UniPoly::new(vec![-nodes[k].clone(), Rational::one()]);
            basis = basis.mul(&factor);
        }
    }
    // verify surplus samples
    for (x, y) in &samples[need..] {
        if &poly.eval(&Rational::from_integer(x.clone())) != y {
            return Err(PolyError::NonPolynomial {
                witness: vec![x.clone()],
            });
        }
    }
    Ok(poly)
}

/// Interpolates even- and odd-abscissa subsequences separately.
pub fn parity_split_fit(
    samples: &[(BigInt, Rational)],
    degree_bound: usize,
) -> Result<(UniPoly, UniPoly), PolyError> {
    let even: Vec<_> = samples
        .iter()
        .filter(|(x, _)| x.is_even())
        .cloned()
        .collect();
    let odd: Vec<_> = samples
        .iter()
        .filter(|(x, _)| x.is_odd())
        .cloned()
        .collect();
    Ok((
        interpolate(&even, degree_bound)?,
        interpolate(&odd, degree_bound)?,
    ))
}

/// Prime factors of the lcm of the reduced-coefficient denominators.
pub fn denominator_primes(p: &UniPoly) -> Vec<u64> {
    let mut lcm = BigUint::one();
    for c in p.coeffs() {
        let den = c.denom().magnitude();
        lcm = num::Integer::lcm(&lcm, den);
    }
    prime_factors(&lcm)
}

pub fn prime_factors(n: &BigUint) -> Vec<u64> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigUint::from(d) * BigUint::from(d) <= n {
        if (&n % d).is_zero() {
            out.push(d);
            while (&n % d).is_zero() {
                n /= d;
            }
        }
        d += 1;
    }
    if n > BigUint::one() {
        out.push(u64::try_from(&n).expect("factor fits u64 at desk scale"));
    }
    out
}

/// Multivariate polynomial as a map from exponent vectors to coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    terms: BTreeMap<Vec<u32>, Rational>,
    num_vars: usize,
}

impl MultiPoly {
    pub fn constant(c: Rational, num_vars: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; num_vars], c);
        }
        MultiPoly { terms, num_vars }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, point: &[i64]) -> Rational {
        assert_eq!(point.len(), self.num_vars);
        let mut acc = Rational::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (e, &x) in exps.iter().zip(point) {
                for _ in 0..*e {
                    term *= Rational::from_integer(BigInt::from(x));
                }
            }
            acc += term;
        }
        acc
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            // look up again to remove; key is gone from our hands
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

/// Fits a polynomial on the grid {0..degree_bound}^num_vars by iterated
/// univariate Lagrange interpolation, then spot-checks `verify_extra`
/// deterministic pseudo-random points inside {0..degree_bound+2}^num_vars.
pub fn multi_fit<F>(
    evaluator: F,
    num_vars: usize,
    degree_bound: usize,
    verify_extra: usize,
) -> Result<MultiPoly, PolyError>
where
    F: Fn(&[i64]) -> BigInt,
{
    let poly = fit_grid(&evaluator, num_vars, degree_bound, &mut Vec::new());
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b97f4a7c15);
    let hi = (degree_bound + 2) as i64;
    for _ in 0..verify_extra {
        let point: Vec<i64> = (0..num_vars).map(|_| rng.gen_range(0..=hi)).collect();
        let expected = Rational::from_integer(evaluator(&point));
        if poly.eval(&point) != expected {
            return Err(PolyError::NonPolynomial {
                witness: point.iter().map(|&x| BigInt::from(x)).collect(),
            });
        }
    }
    Ok(poly)
}

/// Recursive tensor fit: interpolate in the first remaining variable, with
/// coefficients obtained by fitting the rest at each node.
fn fit_grid<F>(
    evaluator: &F,
    num_vars: usize,
    degree_bound: usize,
    prefix: &mut Vec<i64>,
) -> MultiPoly
where
    F: Fn(&[i64]) -> BigInt,
{
    let depth = prefix.len();
    if depth == num_vars {
        return MultiPoly::constant(Rational::from_integer(evaluator(prefix)), 0);
    }
    let d = degree_bound;
    // sub-fit per node value of this variable
    let mut subs = Vec::with_capacity(d + 1);
    for t in 0..=d as i64 {
        prefix.push(t);
        subs.push(fit_grid(evaluator, num_vars, degree_bound, prefix));
        prefix.pop();
    }
    // Lagrange basis over nodes 0..=d in this variable
    let mut out = MultiPoly {
        terms: BTreeMap::new(),
        num_vars: num_vars - depth,
    };
    for (t, sub) in subs.iter().enumerate() {
        let basis = lagrange_basis(d, t);
        for (bexp, bc) in basis.coeffs().iter().enumerate() {
            if bc.is_zero() {
                continue;
            }
            for (sexp, sc) in sub.terms() {
                let mut exps = Vec::with_capacity(num_vars - depth);
                exps.push(bexp as u32);
                exps.extend_from_slice(sexp);
                out.add_term(exps, bc * sc);
            }
        }
    }
    out
}

/// The Lagrange basis polynomial for node `t` over nodes 0..=d.
fn lagrange_basis(d: usize, t: usize) -> UniPoly {
    let mut poly = UniPoly::new(vec![Rational::one()]);
    let mut denom = Rational::one();
    for s in 0..=d {
        if s == t {
            continue;
        }
        let factor = UniPoly::new(vec![
            Rational::from_integer(BigInt::from(-(s as i64))),
            Rational::one(),
        ]);
        poly = poly.mul(&factor);
        denom *= Rational::from_integer(BigInt::from(t as i64 - s as i64));
    }
    poly.scale(&denom.recip())
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
