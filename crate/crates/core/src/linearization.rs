//! Linear extensions of a poset, their signs relative to the reference
//! order, and the invariant L(P) in the group ring with ζ² = 1.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::{BigUint, Zero};
use thiserror::Error;

use crate::poset::{Bicoloring, Poset};

/// Default cap on the number of linearizations visited in one enumeration.
pub const DEFAULT_LIMIT: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("linearization count exceeds limit of {limit}")]
pub struct Overflow {
    pub limit: u64,
}

/// The element L₀ + L₁ζ of ℕ{1,ζ}: counts of even and odd linearizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    pub even: BigUint,
    pub odd: BigUint,
}

impl GroupRingElement {
    pub fn new(even: impl Into<BigUint>, odd: impl Into<BigUint>) -> Self {
        GroupRingElement {
            even: even.into(),
            odd: odd.into(),
        }
    }

    pub fn one() -> Self {
        GroupRingElement::new(1u32, 0u32)
    }

    /// L₊ = L₀ + L₁, the linearization count.
    pub fn l_plus(&self) -> BigUint {
        &self.even + &self.odd
    }

    /// L₋ = L₀ − L₁, the sign-imbalance (well-defined up to global sign).
    pub fn l_minus(&self) -> BigInt {
        BigInt::from(self.even.clone()) - BigInt::from(self.odd.clone())
    }

    /// Product in ℤ{1,ζ}, using ζ² = 1.
    pub fn multiply(&self, other: &GroupRingElement) -> GroupRingElement {
        GroupRingElement {
            even: &self.even * &other.even + &self.odd * &other.odd,
            odd: &self.even * &other.odd + &self.odd * &other.even,
        }
    }

    /// The image condition in ℤ×ℤ: matching parities and |L₋| ≤ L₊.
    pub fn image_condition_holds(&self) -> bool {
        let plus = BigInt::from(self.l_plus());
        let minus = self.l_minus();
        (&plus - &minus) % 2 == BigInt::zero() && minus.magnitude() <= plus.magnitude()
    }
}

/// One linear extension together with its sign relative to the poset's
/// reference order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linearization {
    pub order: Vec<String>,
    pub sign: i8,
}

struct Backtracker<'a> {
    poset: &'a Poset,
    /// number of unplaced strict lower bounds per element
    missing: Vec<u32>,
    placed: Vec<bool>,
    sequence: Vec<usize>,
    parity: u8,
    visited: u64,
    limit: u64,
}

impl<'a> Backtracker<'a> {
    fn new(poset: &'a Poset, limit: u64) -> Self {
        let n = poset.len();
        let mut missing = vec![0u32; n];
        for j in 0..n {
            missing[j] = (0..n).filter(|&i| poset.lt(i, j)).count() as u32;
        }
        Backtracker {
            poset,
            missing,
            placed: vec![false; n],
            sequence: Vec::with_capacity(n),
            parity: 0,
            visited: 0,
            limit,
        }
    }

    /// Number of unplaced elements with reference index below `e`: the
    /// inversions created by placing `e` next.
    fn jumps(&self, e: usize) -> u32 {
        (0..e).filter(|&i| !self.placed[i]).count() as u32
    }

    fn run<F>(&mut self, f: &mut F) -> Result<(), Overflow>
    where
        F: FnMut(&[usize], i8),
    {
        let n = self.poset.len();
        if self.sequence.len() == n {
            self.visited += 1;
            if self.visited > self.limit {
                return Err(Overflow { limit: self.limit });
            }
            let sign = if self.parity == 0 { 1 } else { -1 };
            f(&self.sequence, sign);
            return Ok(());
        }
        for e in 0..n {
            if self.placed[e] || self.missing[e] > 0 {
                continue;
            }
            let delta = (self.jumps(e) % 2) as u8;
            self.placed[e] = true;
            self.parity ^= delta;
            self.sequence.push(e);
            for j in 0..n {
                if self.poset.lt(e, j) {
                    self.missing[j] -= 1;
                }
            }
            self.run(f)?;
            for j in 0..n {
                if self.poset.lt(e, j) {
                    self.missing[j] += 1;
                }
            }
            self.sequence.pop();
            self.parity ^= delta;
            self.placed[e] = false;
        }
        Ok(())
    }
}

/// Visits every linear extension exactly once, bottom-up backtracking over
/// currently-minimal elements. The callback receives the sequence as element
/// indices plus the sign. Fails with `Overflow` past `limit` visits.
pub fn for_each_linearization<F>(p: &Poset, limit: u64, mut f: F) -> Result<u64, Overflow>
where
    F: FnMut(&[usize], i8),
{
    let mut bt = Backtracker::new(p, limit);
    bt.run(&mut f)?;
    Ok(bt.visited)
}

/// Collects all linearizations with their signs. `limit` defaults to
/// [`DEFAULT_LIMIT`] when `None`.
pub fn enumerate_linearizations(
    p: &Poset,
    limit: Option<u64>,
) -> Result<Vec<Linearization>, Overflow> {
    let mut out = Vec::new();
    for_each_linearization(p, limit.unwrap_or(DEFAULT_LIMIT), |seq, sign| {
        out.push(Linearization {
            order: seq.iter().map(|&i| p.label(i).to_owned()).collect(),
            sign,
        });
    })?;
    Ok(out)
}

/// L(P) = L₀ + L₁ζ by direct enumeration.
pub fn group_ring_l(p: &Poset) -> Result<GroupRingElement, Overflow> {
    group_ring_l_with_limit(p, DEFAULT_LIMIT)
}

pub fn group_ring_l_with_limit(p: &Poset, limit: u64) -> Result<GroupRingElement, Overflow> {
    let mut even = 0u64;
    let mut odd = 0u64;
    for_each_linearization(p, limit, |_, sign| {
        if sign > 0 {
            even += 1;
        } else {
            odd += 1;
        }
    })?;
    Ok(GroupRingElement::new(even, odd))
}

/// L(P) by dynamic programming over order ideals. Exact and much faster than
/// enumeration when the count is large; memory is bounded by the number of
/// ideals (≤ 2^|P|). Posets are capped at 63 elements for the bitmask.
pub fn group_ring_l_ideal_dp(p: &Poset) -> GroupRingElement {
    let n = p.len();
    assert!(n < 64, "ideal DP supports at most 63 elements");
    let mut memo: HashMap<u64, GroupRingElement> = HashMap::new();
    memo.insert(0, GroupRingElement::one());

    fn go(p: &Poset, ideal: u64, memo: &mut HashMap<u64, GroupRingElement>) -> GroupRingElement {
        if let Some(v) = memo.get(&ideal) {
            return v.clone();
        }
        let n = p.len();
        let mut even = BigUint::zero();
        let mut odd = BigUint::zero();
        for e in 0..n {
            if ideal & (1 << e) == 0 {
                continue;
            }
            // e must be maximal within the ideal
            if (0..n).any(|j| ideal & (1 << j) != 0 && p.lt(e, j)) {
                continue;
            }
            // inversions contributed by e sitting on top of ideal∖e: elements
            // of the ideal with larger reference index
            let above = ((e + 1)..n).filter(|&j| ideal & (1 << j) != 0).count();
            let sub = go(p, ideal & !(1 << e), memo);
            if above % 2 == 0 {
                even += &sub.even;
                odd += &sub.odd;
            } else {
                even += &sub.odd;
                odd += &sub.even;
            }
        }
        let result = GroupRingElement { even, odd };
        memo.insert(ideal, result.clone());
        result
    }

    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    go(p, full, &mut memo)
}

/// Signed count over only the linearizations in which consecutive elements
/// always have opposite colors. Equal to L₋(p) for any valid bicoloring.
pub fn imbalance_via_bicoloring(p: &Poset, b: &Bicoloring) -> BigInt {
    assert!(p.is_valid_bicoloring(b), "bicoloring is not valid for poset");
    let n = p.len();
    let mut missing = vec![0u32; n];
    for j in 0..n {
        missing[j] = (0..n).filter(|&i| p.lt(i, j)).count() as u32;
    }
    let mut placed = vec![false; n];
    let mut total = BigInt::zero();

    fn go(
        p: &Poset,
        b: &Bicoloring,
        missing: &mut [u32],
        placed: &mut [bool],
        depth: usize,
        last_color: Option<u8>,
        parity: u8,
        total: &mut BigInt,
    ) {
        let n = p.len();
        if depth == n {
            *total += if parity == 0 { 1 } else { -1 };
            return;
        }
        for e in 0..n {
            if placed[e] || missing[e] > 0 {
                continue;
            }
            if let Some(c) = last_color {
                if b.colors[e] == c {
                    continue;
                }
            }
            let jumps = (0..e).filter(|&i| !placed[i]).count() as u8;
            placed[e] = true;
            for j in 0..n {
                if p.lt(e, j) {
                    missing[j] -= 1;
                }
            }
            go(
                p,
                b,
                missing,
                placed,
                depth + 1,
                Some(b.colors[e]),
                parity ^ (jumps % 2),
                total,
            );
            for j in 0..n {
                if p.lt(e, j) {
                    missing[j] += 1;
                }
            }
            placed[e] = false;
        }
    }

    go(p, b, &mut missing, &mut placed, 0, None, 0, &mut total);
    total
}

/// True iff all maximal chains share one cardinality parity and that parity
/// is opposite to the parity of |P|. When true, L₋(p) = 0.
pub fn stanley_balance_test(p: &Poset) -> bool {
    let chains = p.maximal_chains();
    let Some(first) = chains.first() else {
        return false; // empty poset: no maximal chains to compare
    };
    let parity = first.len() % 2;
    chains.iter().all(|c| c.len() % 2 == parity) && parity != p.len() % 2
}

/// Test-friendly naive oracle: filter all |P|! permutations for isotonicity.
/// Kept independent of the backtracking path.
pub fn naive_group_ring_l(p: &Poset) -> GroupRingElement {
    let n = p.len();
    let mut even = BigUint::zero();
    let mut odd = BigUint::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |perm| {
        // isotone: no later element strictly below an earlier one
        for a in 0..n {
            for b in (a + 1)..n {
                if p.lt(perm[b], perm[a]) {
                    return;
                }
            }
        }
        if permutation_parity(perm) == 0 {
            even += 1u32;
        } else {
            odd += 1u32;
        }
    });
    GroupRingElement { even, odd }
}

fn permute<F: FnMut(&[usize])>(perm: &mut Vec<usize>, k: usize, f: &mut F) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

pub fn permutation_parity(perm: &[usize]) -> u8 {
    let mut inv = 0usize;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    (inv % 2) as u8
}
