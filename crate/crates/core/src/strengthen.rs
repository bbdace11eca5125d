//! Strengthens a partial order so that the complement of a chosen chain S
//! becomes a chain, while every element that was incomparable with part of S
//! stays incomparable with part of S. One pairwise step, a criterion for
//! which direction of a step is safe, and two full constructions.

use thiserror::Error;

use crate::poset::Poset;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrengthenError {
    #[error("elements {0} and {1} are comparable")]
    NotIncomparable(String, String),
    #[error("the selected subset is not a chain")]
    NotAChain,
    #[error("{0}")]
    PreconditionViolated(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Iterative,
    Felsner,
}

#[derive(Clone, Debug)]
pub struct StrengtheningResult {
    pub order: Poset,
    pub method: Method,
    /// Strict relations present in the output but not the input, by label.
    pub added: Vec<(String, String)>,
}

/// The order ≼_{x,y}: w ≼' z iff w ≼ z, or both w ≼ x and y ≼ z. It is the
/// smallest partial order containing ≼ with x below y.
pub fn strengthen_pair(p: &Poset, x: usize, y: usize) -> Result<Poset, StrengthenError> {
    if !p.incomparable(x, y) {
        return Err(StrengthenError::NotIncomparable(
            p.label(x).to_string(),
            p.label(y).to_string(),
        ));
    }
    let n = p.len();
    let mut strict = vec![false; n * n];
    for w in 0..n {
        for z in 0..n {
            if w == z {
                continue;
            }
            strict[w * n + z] = p.lt(w, z) || (p.leq_idx(w, x) && p.leq_idx(y, z));
        }
    }
    Ok(Poset::from_strict_matrix(p.elements().to_vec(), strict)
        .expect("adding one relation between incomparable elements keeps a partial order"))
}

/// True when the direction ≼_{x,y} is unsafe: imposing x ≼ y would leave some
/// element comparable with all of S although it was not before. Concretely,
/// (↓x ∩ S) ∪ (↑y ∩ S) = S while (↓y ∩ S) ∪ (↑x ∩ S) ≠ S.
pub fn criterion_c(
    p: &Poset,
    chain_s: &[usize],
    x: usize,
    y: usize,
) -> Result<bool, StrengthenError> {
    if !p.is_chain(chain_s) {
        return Err(StrengthenError::NotAChain);
    }
    if chain_s.contains(&x) || chain_s.contains(&y) {
        return Err(StrengthenError::PreconditionViolated(
            "x and y must lie outside the chain".into(),
        ));
    }
    if !p.incomparable(x, y) {
        return Err(StrengthenError::NotIncomparable(
            p.label(x).to_string(),
            p.label(y).to_string(),
        ));
    }
    let covered = |a: usize, b: usize| chain_s.iter().all(|&s| p.leq_idx(s, a) || p.leq_idx(b, s));
    Ok(covered(x, y) && !covered(y, x))
}

/// Repeatedly imposes a direction on the lexicographically least incomparable
/// pair outside S, always in a direction that `criterion_c` does not forbid.
pub fn strengthen_iterative(
    p: &Poset,
    chain_s: &[usize],
) -> Result<StrengtheningResult, StrengthenError> {
    if !p.is_chain(chain_s) {
        return Err(StrengthenError::NotAChain);
    }
    let n = p.len();
    let outside: Vec<usize> = (0..n).filter(|i| !chain_s.contains(i)).collect();
    let mut current = p.clone();
    loop {
        let mut pair = None;
        'scan: for (a, &i) in outside.iter().enumerate() {
            for &j in &outside[a + 1..] {
                if current.incomparable(i, j) {
                    pair = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = pair else { break };
        let forward = !criterion_c(&current, chain_s, i, j)?;
        current = if forward {
            strengthen_pair(&current, i, j)?
        } else {
            strengthen_pair(&current, j, i)?
        };
    }
    let added = added_relations(p, &current);
    Ok(StrengtheningResult {
        order: current,
        method: Method::Iterative,
        added,
    })
}

/// Direct construction: partition |P|−S into blocks T₁..T_{2r+1} by position
/// relative to the chain s₁ ≼ … ≼ s_r, stack the blocks into a chain, and
/// place each block between the appropriate chain elements.
pub fn strengthen_felsner(
    p: &Poset,
    chain_s: &[usize],
) -> Result<StrengtheningResult, StrengthenError> {
    if !p.is_chain(chain_s) {
        return Err(StrengthenError::NotAChain);
    }
    let n = p.len();
    let mut s_sorted = chain_s.to_vec();
    s_sorted.sort_by(|&a, &b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if p.lt(a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let r = s_sorted.len();

    // Block index 1..=2r+1 and, for even blocks, the witness chain position.
    let mut block = vec![0usize; n];
    let mut witness = vec![usize::MAX; n];
    for e in 0..n {
        if chain_s.contains(&e) {
            continue;
        }
        let incomp: Vec<usize> = (0..r).filter(|&k| p.incomparable(e, s_sorted[k])).collect();
        if let Some(&k) = incomp.last() {
            block[e] = 2 * (k + 1);
            witness[e] = k;
        } else {
            let below = (0..r).filter(|&k| p.leq_idx(s_sorted[k], e)).count();
            block[e] = 2 * below + 1;
        }
    }

    // Chain the blocks: list block members in a linearization of the induced
    // order, preferring smaller reference indices, then concatenate.
    let mut sequence = Vec::new();
    for b in 1..=(2 * r + 1) {
        let members: Vec<usize> = (0..n).filter(|&e| block[e] == b).collect();
        sequence.extend(linearize_preferring_index(p, &members));
    }

    let mut strict: Vec<bool> = (0..n * n)
        .map(|idx| p.lt(idx / n, idx % n))
        .collect();
    for (a, &e) in sequence.iter().enumerate() {
        for &f in &sequence[a + 1..] {
            strict[e * n + f] = true;
        }
    }
    for &e in &sequence {
        if witness[e] == usize::MAX {
            continue;
        }
        let k = witness[e];
        for j in 0..k {
            strict[s_sorted[j] * n + e] = true;
        }
        for j in (k + 1)..r {
            strict[e * n + s_sorted[j]] = true;
        }
    }
    crate::poset::transitive_close(&mut strict, n);
    for e in 0..n {
        assert!(!strict[e * n + e], "block stacking produced a cycle");
    }
    let order = Poset::from_strict_matrix(p.elements().to_vec(), strict)
        .expect("acyclicity checked above");
    let added = added_relations(p, &order);
    Ok(StrengtheningResult {
        order,
        method: Method::Felsner,
        added,
    })
}

fn linearize_preferring_index(p: &Poset, members: &[usize]) -> Vec<usize> {
    let mut remaining: Vec<usize> = members.to_vec();
    let mut out = Vec::with_capacity(members.len());
    while !remaining.is_empty() {
        let pos = remaining
            .iter()
            .position(|&e| remaining.iter().all(|&f| f == e || !p.lt(f, e)))
            .expect("finite poset has a minimal element");
        out.push(remaining.remove(pos));
    }
    out
}

fn added_relations(old: &Poset, new: &Poset) -> Vec<(String, String)> {
    let n = old.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if new.lt(i, j) && !old.lt(i, j) {
                out.push((old.label(i).to_string(), old.label(j).to_string()));
            }
        }
    }
    out
}

/// The three invariants every strengthening must satisfy.
pub fn check_strengthening(p: &Poset, chain_s: &[usize], result: &Poset) -> bool {
    let n = p.len();
    for i in 0..n {
        for j in 0..n {
            if p.lt(i, j) && !result.lt(i, j) {
                return false;
            }
        }
    }
    let outside: Vec<usize> = (0..n).filter(|i| !chain_s.contains(i)).collect();
    if !result.is_chain(&outside) {
        return false;
    }
    for &e in &outside {
        let had = chain_s.iter().any(|&s| p.incomparable(e, s));
        let has = chain_s.iter().any(|&s| result.incomparable(e, s));
        if had && !has {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{antichain, Poset};

    fn n_poset() -> Poset {
        Poset::from_covers(&["a", "b", "c", "d"], &[("a", "b"), ("c", "b"), ("c", "d")])
            .unwrap()
    }

    #[test]
    fn pair_on_antichain_gives_chain() {
        let p = antichain(&["x", "y"]);
        let q = strengthen_pair(&p, 0, 1).unwrap();
        assert!(q.lt(0, 1));
        assert!(!q.lt(1, 0));
    }

    #[test]
    fn pair_on_n_poset() {
        let p = n_poset();
        let (a, b, c, d) = (0, 1, 2, 3);
        let q = strengthen_pair(&p, a, d).unwrap();
        assert!(q.lt(a, b) && q.lt(a, d));
        assert!(q.incomparable(a, c));
        assert!(q.lt(c, b) && q.lt(c, d));
        assert!(q.incomparable(b, d));
    }

    #[test]
    fn pair_rejects_comparable() {
        let p = n_poset();
        assert!(matches!(
            strengthen_pair(&p, 0, 1),
            Err(StrengthenError::NotIncomparable(_, _))
        ));
    }

    #[test]
    fn pair_matches_naive_edge_closure() {
        // Validate the one-line characterization against "add x<y, close".
        let p = n_poset();
        let n = p.len();
        for x in 0..n {
            for y in 0..n {
                if !p.incomparable(x, y) {
                    continue;
                }
                let q = strengthen_pair(&p, x, y).unwrap();
                let mut strict: Vec<bool> =
                    (0..n * n).map(|i| p.lt(i / n, i % n)).collect();
                strict[x * n + y] = true;
                crate::poset::transitive_close(&mut strict, n);
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(q.lt(i, j), strict[i * n + j]);
                    }
                }
            }
        }
    }

    #[test]
    fn criterion_on_n_poset_middle_chain() {
        let p = n_poset();
        let s = vec![2, 1]; // the chain c ≼ b
        assert!(!criterion_c(&p, &s, 0, 3).unwrap());
        assert!(criterion_c(&p, &s, 3, 0).unwrap());
    }

    #[test]
    fn criterion_with_empty_chain_is_false() {
        let p = antichain(&["x", "y"]);
        assert!(!criterion_c(&p, &[], 0, 1).unwrap());
        assert!(!criterion_c(&p, &[], 1, 0).unwrap());
    }

    #[test]
    fn criterion_requires_chain() {
        let p = Poset::from_covers(
            &["s1", "s2", "x", "y"],
            &[("x", "s1"), ("y", "s2")],
        )
        .unwrap();
        assert_eq!(
            criterion_c(&p, &[0, 1], 2, 3).unwrap_err(),
            StrengthenError::NotAChain
        );
    }

    #[test]
    fn iterative_no_op_when_complement_is_chain() {
        let p = Poset::from_covers(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        let s = vec![0, 1]; // complement {c, d} is already a chain
        let r = strengthen_iterative(&p, &s).unwrap();
        assert!(r.added.is_empty());
        assert!(check_strengthening(&p, &s, &r.order));
    }

    #[test]
    fn iterative_on_n_poset() {
        let p = n_poset();
        let s = vec![2, 1];
        let r = strengthen_iterative(&p, &s).unwrap();
        assert!(check_strengthening(&p, &s, &r.order));
        assert!(r.order.incomparable(0, 2) || r.order.incomparable(0, 1));
        assert!(r.order.incomparable(3, 1) || r.order.incomparable(3, 2));
    }

    #[test]
    fn felsner_s_equals_p() {
        let p = n_poset();
        let s = vec![0, 1, 2, 3];
        assert_eq!(
            strengthen_felsner(&p, &s).unwrap_err(),
            StrengthenError::NotAChain
        );
        let chain_p = crate::poset::chain(&["a", "b", "c"]);
        let r = strengthen_felsner(&chain_p, &[0, 1, 2]).unwrap();
        assert!(r.added.is_empty());
    }

    #[test]
    fn felsner_empty_s_linearizes() {
        let p = n_poset();
        let r = strengthen_felsner(&p, &[]).unwrap();
        assert!(r.order.is_chain(&[0, 1, 2, 3]));
        assert!(check_strengthening(&p, &[], &r.order));
    }

    #[test]
    fn felsner_on_n_poset() {
        let p = n_poset();
        let s = vec![2, 1];
        let r = strengthen_felsner(&p, &s).unwrap();
        assert!(check_strengthening(&p, &s, &r.order));
    }

    #[test]
    fn directions_never_both_forbidden() {
        let p = n_poset();
        let n = p.len();
        for s in [vec![], vec![1], vec![2, 1]] {
            for x in 0..n {
                for y in 0..n {
                    if x == y || s.contains(&x) || s.contains(&y) || !p.incomparable(x, y) {
                        continue;
                    }
                    let fwd = criterion_c(&p, &s, x, y).unwrap();
                    let bwd = criterion_c(&p, &s, y, x).unwrap();
                    assert!(!(fwd && bwd));
                }
            }
        }
    }
}
