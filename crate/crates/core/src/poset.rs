//! Finite posets stored by their cover relation (Hasse diagram), with the
//! order-theoretic queries the rest of the crate builds on.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element label `{0}`")]
    DuplicateElement(String),
    #[error("relation contains a directed cycle through `{0}`")]
    Cycle(String),
}

/// A finite poset. Elements keep their input order, which doubles as the
/// reference order for sign computations. The strict order is stored as a
/// closure matrix computed once at construction; `covers` is its transitive
/// reduction.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    /// `strict[i * n + j]` iff element i is strictly below element j.
    strict: Vec<bool>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.elements)
            .field(
                "covers",
                &self
                    .covers
                    .iter()
                    .map(|&(a, b)| (&self.elements[a], &self.elements[b]))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl Poset {
    /// Builds a poset from an arbitrary acyclic relation given by label pairs
    /// `(lower, upper)`. The input need not be transitively reduced; redundant
    /// pairs are dropped.
    pub fn from_covers<S: AsRef<str>>(
        elements: &[S],
        relation: &[(S, S)],
    ) -> Result<Poset, PosetError> {
        let elements: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::new();
        for (i, label) in elements.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(label.clone()));
            }
        }
        let n = elements.len();
        let mut strict = vec![false; n * n];
        for (lo, hi) in relation {
            let i = *index
                .get(lo.as_ref())
                .ok_or_else(|| PosetError::UnknownElement(lo.as_ref().to_owned()))?;
            let j = *index
                .get(hi.as_ref())
                .ok_or_else(|| PosetError::UnknownElement(hi.as_ref().to_owned()))?;
            strict[i * n + j] = true;
        }
        transitive_close(&mut strict, n);
        for i in 0..n {
            if strict[i * n + i] {
                return Err(PosetError::Cycle(elements[i].clone()));
            }
        }
        Ok(Self::from_closed_strict(elements, index, strict))
    }

    /// Internal constructor from an already-transitive irreflexive matrix.
    pub(crate) fn from_strict_matrix(
        elements: Vec<String>,
        mut strict: Vec<bool>,
    ) -> Result<Poset, PosetError> {
        let n = elements.len();
        assert_eq!(strict.len(), n * n);
        let mut index = HashMap::new();
        for (i, label) in elements.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(label.clone()));
            }
        }
        transitive_close(&mut strict, n);
        for i in 0..n {
            if strict[i * n + i] {
                return Err(PosetError::Cycle(elements[i].clone()));
            }
        }
        Ok(Self::from_closed_strict(elements, index, strict))
    }

    fn from_closed_strict(
        elements: Vec<String>,
        index: HashMap<String, usize>,
        strict: Vec<bool>,
    ) -> Poset {
        let n = elements.len();
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if strict[i * n + j]
                    && !(0..n).any(|k| strict[i * n + k] && strict[k * n + j])
                {
                    covers.push((i, j));
                }
            }
        }
        covers.sort_unstable();
        Poset {
            elements,
            index,
            covers,
            strict,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Element labels in reference order.
    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, PosetError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| PosetError::UnknownElement(label.to_owned()))
    }

    /// Cover pairs `(lower, upper)` as element indices.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn cover_labels(&self) -> Vec<(String, String)> {
        self.covers
            .iter()
            .map(|&(a, b)| (self.elements[a].clone(), self.elements[b].clone()))
            .collect()
    }

    /// Strict comparability by index.
    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.strict[i * self.len() + j]
    }

    /// Reflexive `≼` by index.
    #[inline]
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        i == j || self.lt(i, j)
    }

    pub fn incomparable(&self, i: usize, j: usize) -> bool {
        i != j && !self.lt(i, j) && !self.lt(j, i)
    }

    /// Reflexive `≼` by label.
    pub fn leq(&self, x: &str, y: &str) -> Result<bool, PosetError> {
        let i = self.index_of(x)?;
        let j = self.index_of(y)?;
        Ok(self.leq_idx(i, j))
    }

    /// Indices whose set forms a chain under `≼`.
    pub fn is_chain(&self, set: &[usize]) -> bool {
        set.iter().all(|&a| {
            set.iter()
                .all(|&b| a == b || self.lt(a, b) || self.lt(b, a))
        })
    }

    /// Splits the poset along the connected components of its undirected
    /// Hasse graph. Components inherit the reference order.
    pub fn connected_components(&self) -> Vec<Poset> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(v) = stack.pop() {
                for &(a, b) in &self.covers {
                    let w = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (0..count)
            .map(|c| {
                let members: Vec<usize> = (0..n).filter(|&i| comp[i] == c).collect();
                self.induced(&members)
            })
            .collect()
    }

    /// Induced subposet on the given indices, keeping their relative
    /// reference order.
    pub fn induced(&self, members: &[usize]) -> Poset {
        let mut members = members.to_vec();
        members.sort_unstable();
        let m = members.len();
        let labels: Vec<String> = members.iter().map(|&i| self.elements[i].clone()).collect();
        let mut strict = vec![false; m * m];
        for (a, &i) in members.iter().enumerate() {
            for (b, &j) in members.iter().enumerate() {
                strict[a * m + b] = self.lt(i, j);
            }
        }
        Poset::from_strict_matrix(labels, strict).expect("induced order is valid")
    }

    /// All maximal (non-extendable) chains, bottom to top. A maximal chain is
    /// a maximal path in the Hasse diagram starting at a minimal element.
    pub fn maximal_chains(&self) -> Vec<Vec<String>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut uppers: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut has_lower = vec![false; n];
        for &(a, b) in &self.covers {
            uppers[a].push(b);
            has_lower[b] = true;
        }
        fn walk(
            v: usize,
            uppers: &[Vec<usize>],
            path: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            path.push(v);
            if uppers[v].is_empty() {
                out.push(path.clone());
            } else {
                for &w in &uppers[v] {
                    walk(w, uppers, path, out);
                }
            }
            path.pop();
        }
        let mut paths = Vec::new();
        for v in 0..n {
            if !has_lower[v] {
                walk(v, &uppers, &mut Vec::new(), &mut paths);
            }
        }
        for path in paths {
            out.push(path.iter().map(|&i| self.elements[i].clone()).collect());
        }
        out
    }

    /// All proper 2-colorings of the Hasse graph. Empty iff some Hasse cycle
    /// is odd. The empty poset has exactly one (empty) bicoloring.
    pub fn bicolorings(&self) -> Vec<Bicoloring> {
        let n = self.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.covers {
            adj[a].push(b);
            adj[b].push(a);
        }
        // 2-color each component; each bicolorable component contributes a
        // free color swap.
        let mut base = vec![u8::MAX; n];
        let mut roots = Vec::new();
        for start in 0..n {
            if base[start] != u8::MAX {
                continue;
            }
            roots.push(start);
            base[start] = 0;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if base[w] == u8::MAX {
                        base[w] = 1 - base[v];
                        stack.push(w);
                    } else if base[w] == base[v] {
                        return Vec::new();
                    }
                }
            }
        }
        // Component id per element, for applying swaps.
        let mut comp = vec![usize::MAX; n];
        for (c, &start) in roots.iter().enumerate() {
            let mut stack = vec![start];
            comp[start] = c;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
        }
        let c = roots.len();
        let mut out = Vec::with_capacity(1 << c);
        for mask in 0u64..(1u64 << c) {
            let colors = (0..n)
                .map(|i| base[i] ^ ((mask >> comp[i]) & 1) as u8)
                .collect();
            out.push(Bicoloring { colors });
        }
        out
    }

    /// Checks that `b` assigns opposite colors across every cover pair.
    pub fn is_valid_bicoloring(&self, b: &Bicoloring) -> bool {
        b.colors.len() == self.len()
            && self
                .covers
                .iter()
                .all(|&(x, y)| b.colors[x] != b.colors[y])
    }
}

/// A proper 2-coloring of the Hasse graph, indexed by element position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicoloring {
    pub colors: Vec<u8>,
}

/// The triple (ground set, partial order, forbidden-equality edges).
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub poset: Poset,
    /// Unordered pairs by index, stored with the smaller index first.
    pub forbidden_equal: Vec<(usize, usize)>,
}

impl ConstraintSystem {
    pub fn new(poset: Poset, pairs: &[(String, String)]) -> Result<Self, PosetError> {
        let mut forbidden_equal = Vec::new();
        for (a, b) in pairs {
            let i = poset.index_of(a)?;
            let j = poset.index_of(b)?;
            if i == j {
                return Err(PosetError::DuplicateElement(a.clone()));
            }
            forbidden_equal.push((i.min(j), i.max(j)));
        }
        forbidden_equal.sort_unstable();
        forbidden_equal.dedup();
        Ok(ConstraintSystem {
            poset,
            forbidden_equal,
        })
    }

    pub fn from_index_pairs(poset: Poset, pairs: Vec<(usize, usize)>) -> Self {
        let mut forbidden_equal: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(i, j)| (i.min(j), i.max(j)))
            .collect();
        forbidden_equal.sort_unstable();
        forbidden_equal.dedup();
        ConstraintSystem {
            poset,
            forbidden_equal,
        }
    }
}

pub(crate) fn transitive_close(rel: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if rel[i * n + k] {
                for j in 0..n {
                    if rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
    }
}

/// Convenience constructors used across the crate and its tests.
pub fn chain(labels: &[&str]) -> Poset {
    let rel: Vec<(&str, &str)> = labels.windows(2).map(|w| (w[0], w[1])).collect();
    Poset::from_covers(labels, &rel).unwrap()
}

pub fn antichain(labels: &[&str]) -> Poset {
    Poset::from_covers::<&str>(labels, &[]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_antichain() {
        let p = Poset::from_covers(&["a"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.covers().is_empty());
    }

    #[test]
    fn transitive_reduction_of_chain() {
        let p = Poset::from_covers(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")])
            .unwrap();
        assert_eq!(p.cover_labels(), vec![
            ("a".to_owned(), "b".to_owned()),
            ("b".to_owned(), "c".to_owned())
        ]);
    }

    #[test]
    fn two_cycle_rejected() {
        let err = Poset::from_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, PosetError::Cycle(_)));
    }

    #[test]
    fn unknown_element_rejected() {
        let err = Poset::from_covers(&["a"], &[("a", "z")]).unwrap_err();
        assert_eq!(err, PosetError::UnknownElement("z".to_owned()));
    }

    #[test]
    fn leq_queries() {
        let p = chain(&["a", "b", "c"]);
        assert!(p.leq("a", "c").unwrap());
        assert!(p.leq("a", "a").unwrap());
        assert!(!p.leq("c", "a").unwrap());
        let q = antichain(&["a", "b"]);
        assert!(!q.leq("a", "b").unwrap());
    }

    #[test]
    fn components() {
        let empty = antichain(&[]);
        assert!(empty.connected_components().is_empty());

        let p = Poset::from_covers(&["a", "b", "c"], &[("a", "b")]).unwrap();
        let comps = p.connected_components();
        let mut sizes: Vec<usize> = comps.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2]);

        let m = antichain(&["a", "b", "c", "d"]);
        assert_eq!(m.connected_components().len(), 4);
    }

    #[test]
    fn maximal_chains_examples() {
        let c = chain(&["a", "b", "c"]);
        assert_eq!(c.maximal_chains(), vec![vec!["a", "b", "c"]]);

        let v = Poset::from_covers(&["b", "t1", "t2"], &[("b", "t1"), ("b", "t2")]).unwrap();
        let chains = v.maximal_chains();
        assert_eq!(chains.len(), 2);
        assert!(chains.iter().all(|ch| ch.len() == 2));

        let a = antichain(&["a", "b"]);
        assert_eq!(a.maximal_chains().len(), 2);
    }

    #[test]
    fn bicoloring_counts() {
        assert_eq!(chain(&["a", "b"]).bicolorings().len(), 2);
        assert_eq!(antichain(&["a", "b"]).bicolorings().len(), 4);
        // Diamond: two bottoms under two tops, 4-cycle Hasse graph.
        let d = Poset::from_covers(
            &["a", "b", "c", "d"],
            &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
        )
        .unwrap();
        assert_eq!(d.bicolorings().len(), 2);
        // Empty poset: the single empty coloring.
        assert_eq!(antichain(&[]).bicolorings().len(), 1);
    }

    #[test]
    fn bicolorings_match_exhaustive_search() {
        let posets = [
            chain(&["a", "b", "c"]),
            antichain(&["a", "b", "c"]),
            Poset::from_covers(
                &["a", "b", "c", "d"],
                &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
            )
            .unwrap(),
            Poset::from_covers(&["a", "b", "c", "d"], &[("a", "b"), ("c", "b"), ("c", "d")])
                .unwrap(),
        ];
        for p in &posets {
            let n = p.len();
            let mut expected = 0;
            for mask in 0u32..(1 << n) {
                let colors: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
                if p.is_valid_bicoloring(&Bicoloring { colors }) {
                    expected += 1;
                }
            }
            assert_eq!(p.bicolorings().len(), expected);
        }
    }

    #[test]
    fn maximal_chains_are_maximal() {
        let p = Poset::from_covers(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("a", "c"), ("c", "d")],
        )
        .unwrap();
        for ch in p.maximal_chains() {
            let idx: Vec<usize> = ch.iter().map(|l| p.index_of(l).unwrap()).collect();
            for w in idx.windows(2) {
                assert!(p.lt(w[0], w[1]));
            }
            // not extendable by any element
            for e in 0..p.len() {
                if idx.contains(&e) {
                    continue;
                }
                let extends = idx.iter().all(|&x| p.lt(x, e) || p.lt(e, x));
                assert!(!extends, "chain {:?} extendable by {}", ch, p.label(e));
            }
        }
    }
}
