//! Lexicographic sums of posets, the factorization of L over them, closed
//! forms for chain and antichain bases, the floor rule for sign-imbalance,
//! and series-parallel evaluation.

use num::bigint::BigInt;
use num::{BigUint, One, Zero};
use thiserror::Error;

use crate::linearization::{
    group_ring_l_ideal_dp, group_ring_l_with_limit, GroupRingElement, Overflow, DEFAULT_LIMIT,
};
use crate::poset::{Poset, PosetError};

#[derive(Debug, Error)]
pub enum LexSumError {
    #[error("parts length {parts} does not match base size {base}")]
    PartCountMismatch { base: usize, parts: usize },
    #[error("label collision after namespacing: {0}")]
    LabelCollision(String),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

/// A base poset together with one poset per base element (possibly empty).
#[derive(Clone, Debug)]
pub struct LexSumSpec {
    pub base: Poset,
    pub parts: Vec<Poset>,
}

impl LexSumSpec {
    pub fn new(base: Poset, parts: Vec<Poset>) -> Result<Self, LexSumError> {
        if parts.len() != base.len() {
            return Err(LexSumError::PartCountMismatch {
                base: base.len(),
                parts: parts.len(),
            });
        }
        Ok(LexSumSpec { base, parts })
    }

    pub fn part_sizes(&self) -> Vec<u64> {
        self.parts.iter().map(|p| p.len() as u64).collect()
    }
}

/// A base poset with a chain size per base element.
#[derive(Clone, Debug)]
pub struct ChainSizesQuery {
    pub base: Poset,
    pub sizes: Vec<u64>,
}

impl ChainSizesQuery {
    pub fn new(base: Poset, sizes: Vec<u64>) -> Result<Self, LexSumError> {
        if sizes.len() != base.len() {
            return Err(LexSumError::PartCountMismatch {
                base: base.len(),
                parts: sizes.len(),
            });
        }
        Ok(ChainSizesQuery { base, sizes })
    }
}

/// Replaces each base element by its part. Part elements are namespaced as
/// `base_label/part_label`; the reference order lists the parts in base
/// reference order, each part in its own reference order.
pub fn lex_sum(spec: &LexSumSpec) -> Result<Poset, LexSumError> {
    let mut labels = Vec::new();
    let mut owner = Vec::new(); // base index per summed element
    let mut offset = Vec::new(); // index within its part
    for (i, part) in spec.parts.iter().enumerate() {
        for (j, lab) in part.elements().iter().enumerate() {
            labels.push(format!("{}/{}", spec.base.label(i), lab));
            owner.push(i);
            offset.push(j);
        }
    }
    let n = labels.len();
    let mut strict = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            strict[a * n + b] = if owner[a] == owner[b] {
                spec.parts[owner[a]].lt(offset[a], offset[b])
            } else {
                spec.base.lt(owner[a], owner[b])
            };
        }
    }
    Poset::from_strict_matrix(labels, strict).map_err(|e| match e {
        PosetError::DuplicateElement(l) => LexSumError::LabelCollision(l),
        other => panic!("lexicographic sum produced invalid order: {other}"),
    })
}

fn chain_poset(base_label: &str, m: u64) -> Poset {
    let labels: Vec<String> = (1..=m).map(|j| format!("{base_label}.{j}")).collect();
    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let rel: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
    Poset::from_covers(&refs, &rel).unwrap()
}

/// The chain-substituted sum P₀ * (C₁, …, C_{m₀}) as a poset.
pub fn chain_substituted_poset(q: &ChainSizesQuery) -> Result<Poset, LexSumError> {
    let parts: Vec<Poset> = q
        .sizes
        .iter()
        .enumerate()
        .map(|(i, &m)| chain_poset(q.base.label(i), m))
        .collect();
    lex_sum(&LexSumSpec::new(q.base.clone(), parts)?)
}

/// L(P₀ * (C₁..C_{m₀})) by direct enumeration — the oracle path.
pub fn l_chain_substitution(q: &ChainSizesQuery) -> Result<GroupRingElement, LexSumError> {
    l_chain_substitution_with_limit(q, DEFAULT_LIMIT)
}

pub fn l_chain_substitution_with_limit(
    q: &ChainSizesQuery,
    limit: u64,
) -> Result<GroupRingElement, LexSumError> {
    let p = chain_substituted_poset(q)?;
    Ok(group_ring_l_with_limit(&p, limit)?)
}

/// The factorization ∏ᵢ L(Pᵢ) · L(P₀; |P₁|, …, |P_{m₀}|).
pub fn factor_l(spec: &LexSumSpec) -> Result<GroupRingElement, LexSumError> {
    let mut acc = GroupRingElement::one();
    for part in &spec.parts {
        acc = acc.multiply(&group_ring_l_with_limit(part, DEFAULT_LIMIT)?);
    }
    let q = ChainSizesQuery::new(spec.base.clone(), spec.part_sizes())?;
    Ok(acc.multiply(&l_chain_substitution(&q)?))
}

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

fn multinomial(sizes: &[u64]) -> BigUint {
    let total: u64 = sizes.iter().sum();
    let mut acc = factorial(total);
    for &m in sizes {
        acc /= factorial(m);
    }
    acc
}

/// L₊ for an antichain base: the multinomial coefficient (Σmᵢ)!/∏mᵢ!.
pub fn antichain_l_plus(sizes: &[u64]) -> BigUint {
    multinomial(sizes)
}

/// L₋ for an antichain base: 0 when two or more sizes are odd, otherwise the
/// multinomial of the halved (floored) sizes.
pub fn antichain_l_minus(sizes: &[u64]) -> BigUint {
    let odd = sizes.iter().filter(|&&m| m % 2 == 1).count();
    if odd > 1 {
        return BigUint::zero();
    }
    let floors: Vec<u64> = sizes.iter().map(|&m| m / 2).collect();
    multinomial(&floors)
}

/// Combines L₊ and a nonnegative L₋ into the group-ring element.
pub fn from_plus_minus(plus: &BigUint, minus: &BigInt) -> GroupRingElement {
    let plus = BigInt::from(plus.clone());
    let even: BigInt = (&plus + minus) / 2;
    let odd: BigInt = (&plus - minus) / 2;
    GroupRingElement {
        even: even.magnitude().clone(),
        odd: odd.magnitude().clone(),
    }
}

/// Sign-imbalance of a chain-substituted sum via the floor rule, when it
/// applies. `None` means neither case covers this input and the value must
/// come from enumeration.
pub fn floor_theorem_l_minus(q: &ChainSizesQuery) -> Result<Option<BigInt>, LexSumError> {
    let base = &q.base;
    let odd_set: Vec<usize> = (0..base.len()).filter(|&i| q.sizes[i] % 2 == 1).collect();
    // Zero case: two incomparable odd-size elements whose strict upper and
    // lower sets both coincide. Swapping the interleaving of their two chains
    // pairs linearizations off with the signed binomial of two odd sizes,
    // which vanishes.
    for (ai, &a) in odd_set.iter().enumerate() {
        for &b in &odd_set[ai + 1..] {
            if !base.incomparable(a, b) {
                continue;
            }
            let same_up = (0..base.len()).all(|z| base.lt(a, z) == base.lt(b, z));
            let same_down = (0..base.len()).all(|z| base.lt(z, a) == base.lt(z, b));
            if same_up && same_down {
                return Ok(Some(BigInt::zero()));
            }
        }
    }
    // Chain case: the odd-size elements form a chain, and no occupied chain
    // sits beside a comparable odd pair. Without the proviso the domino
    // cancellation breaks down: for the base x₁≼x₂ with x₃ isolated and
    // sizes (1,1,2) the halved-size count gives 1 while the true
    // sign-imbalance is 2.
    let comparable_pairs_shielded = odd_set.iter().all(|&x| {
        odd_set.iter().all(|&y| {
            !base.lt(x, y)
                || (0..base.len()).all(|z| {
                    q.sizes[z] == 0 || (!base.incomparable(x, z) && !base.incomparable(y, z))
                })
        })
    });
    if base.is_chain(&odd_set) && comparable_pairs_shielded {
        let floors: Vec<u64> = q.sizes.iter().map(|&m| m / 2).collect();
        let sub = ChainSizesQuery::new(base.clone(), floors)?;
        let plus = group_ring_l_ideal_dp(&chain_substituted_poset(&sub)?).l_plus();
        // Sign: parity of the permutation sorting the reference-ordered odd
        // set into base order. Even (sign +) exactly when the reference order
        // is isotone on that set.
        let mut by_order = odd_set.clone();
        by_order.sort_by(|&a, &b| {
            if base.lt(a, b) {
                std::cmp::Ordering::Less
            } else if base.lt(b, a) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        let perm: Vec<usize> = by_order
            .iter()
            .map(|x| odd_set.iter().position(|y| y == x).unwrap())
            .collect();
        let sign = if crate::linearization::permutation_parity(&perm) == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        return Ok(Some(sign * BigInt::from(plus)));
    }
    Ok(None)
}

/// A series-parallel shape: chains and antichains combined by iterated
/// lexicographic sums, with bare sizes at the leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpExpression {
    Leaf(u64),
    /// Ordered children summed over a chain base.
    ChainSum(Vec<SpExpression>),
    /// Children summed over an antichain base (order kept for determinism).
    AntichainSum(Vec<SpExpression>),
}

impl SpExpression {
    pub fn total_size(&self) -> u64 {
        match self {
            SpExpression::Leaf(n) => *n,
            SpExpression::ChainSum(cs) | SpExpression::AntichainSum(cs) => {
                cs.iter().map(|c| c.total_size()).sum()
            }
        }
    }

    /// Expands the expression into an explicit poset (oracle side).
    pub fn to_poset(&self) -> Poset {
        fn build(expr: &SpExpression, prefix: &str) -> Poset {
            match expr {
                SpExpression::Leaf(n) => chain_poset(prefix, *n),
                SpExpression::ChainSum(cs) | SpExpression::AntichainSum(cs) => {
                    let is_chain = matches!(expr, SpExpression::ChainSum(_));
                    let labels: Vec<String> =
                        (0..cs.len()).map(|i| format!("{prefix}{i}")).collect();
                    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
                    let rel: Vec<(&str, &str)> = if is_chain {
                        refs.windows(2).map(|w| (w[0], w[1])).collect()
                    } else {
                        Vec::new()
                    };
                    let base = Poset::from_covers(&refs, &rel).unwrap();
                    let parts: Vec<Poset> = cs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| build(c, &format!("{prefix}{i}")))
                        .collect();
                    lex_sum(&LexSumSpec::new(base, parts).unwrap()).unwrap()
                }
            }
        }
        build(self, "n")
    }

    /// L via the closed forms: chains contribute factor 1, antichains the
    /// multinomial closed forms on their children's total sizes.
    pub fn evaluate(&self) -> GroupRingElement {
        match self {
            SpExpression::Leaf(_) => GroupRingElement::one(),
            SpExpression::ChainSum(cs) => {
                let mut acc = GroupRingElement::one();
                for c in cs {
                    acc = acc.multiply(&c.evaluate());
                }
                acc
            }
            SpExpression::AntichainSum(cs) => {
                let mut acc = GroupRingElement::one();
                for c in cs {
                    acc = acc.multiply(&c.evaluate());
                }
                let sizes: Vec<u64> = cs.iter().map(|c| c.total_size()).collect();
                let plus = antichain_l_plus(&sizes);
                let minus = BigInt::from(antichain_l_minus(&sizes));
                acc.multiply(&from_plus_minus(&plus, &minus))
            }
        }
    }
}

pub fn sp_evaluate(expr: &SpExpression) -> GroupRingElement {
    expr.evaluate()
}

/// True iff the poset has no induced copy of the 4-element N-poset
/// (a≼b, c≼b, c≼d with all other pairs incomparable).
pub fn is_series_parallel(p: &Poset) -> bool {
    let n = p.len();
    // ordered 4-tuples of distinct indices; small n only
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    if p.lt(a, b)
                        && p.lt(c, b)
                        && p.lt(c, d)
                        && p.incomparable(a, c)
                        && p.incomparable(a, d)
                        && p.incomparable(b, d)
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Rows 0..=max_row of the L₊ and L₋ triangles for a 2-antichain base.
/// L₊ is Pascal's triangle; L₋ follows the alternating sum/difference rule:
/// entries an even number of steps from the left edge are the sum of the two
/// entries above, odd-step entries the left-above minus the right-above.
pub fn pascal_arrays(max_row: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut plus: Vec<Vec<BigInt>> = Vec::with_capacity(max_row + 1);
    let mut minus: Vec<Vec<BigInt>> = Vec::with_capacity(max_row + 1);
    for row in 0..=max_row {
        let mut prow = Vec::with_capacity(row + 1);
        let mut mrow = Vec::with_capacity(row + 1);
        for k in 0..=row {
            if row == 0 {
                prow.push(BigInt::one());
                mrow.push(BigInt::one());
                continue;
            }
            let above = |arr: &Vec<Vec<BigInt>>, j: isize| -> BigInt {
                if j < 0 || j as usize > row - 1 {
                    BigInt::zero()
                } else {
                    arr[row - 1][j as usize].clone()
                }
            };
            let left = above(&plus, k as isize - 1);
            let right = above(&plus, k as isize);
            prow.push(left + right);
            let left = above(&minus, k as isize - 1);
            let right = above(&minus, k as isize);
            mrow.push(if k % 2 == 0 { left + right } else { left - right });
        }
        plus.push(prow);
        minus.push(mrow);
    }
    (plus, minus)
}
