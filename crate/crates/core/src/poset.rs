//! Finite posets: construction, validation and elementary topology.
//!
//! Elements carry string labels but every computation works with indices in
//! input order. Reordering (e.g. along a linear extension) is always explicit.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("relations contain a cycle through `{0}`")]
    CycleDetected(String),
    #[error("posets must have at least one element")]
    EmptyPoset,
    #[error("edge probability {0} is not in [0, 1]")]
    BadProbability(String),
    #[error("relation matrix is not a partial order: {0}")]
    NotPartialOrder(String),
}

/// A finite partially ordered set with its full order relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<bool>,
}

/// Cover relations `(i, j)`: `i < j` with nothing strictly between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseDiagram {
    pub covers: Vec<(usize, usize)>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of the given strict relations.
    pub fn from_relations<S: AsRef<str>>(
        labels: &[S],
        relations: &[(S, S)],
    ) -> Result<Self, PosetError> {
        if labels.is_empty() {
            return Err(PosetError::EmptyPoset);
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.as_ref().to_string(), i).is_some() {
                return Err(PosetError::DuplicateLabel(l.as_ref().to_string()));
            }
        }
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| PosetError::UnknownLabel(s.as_ref().to_string()))
        };
        let mut pairs = Vec::with_capacity(relations.len());
        for (a, b) in relations {
            pairs.push((lookup(a)?, lookup(b)?));
        }
        let labels = labels.iter().map(|l| l.as_ref().to_string()).collect();
        Self::from_index_relations(labels, &pairs)
    }

    /// As [`Poset::from_relations`] with relations given by index.
    pub fn from_index_relations(
        labels: Vec<String>,
        relations: &[(usize, usize)],
    ) -> Result<Self, PosetError> {
        let n = labels.len();
        if n == 0 {
            return Err(PosetError::EmptyPoset);
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in relations {
            leq[a * n + b] = true;
        }
        transitive_closure(&mut leq, n);
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(PosetError::CycleDetected(labels[i].clone()));
                }
            }
        }
        Ok(Self { labels, leq })
    }

    /// Wraps a full relation matrix, checking the partial-order axioms.
    pub fn from_leq_matrix(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let n = labels.len();
        if n == 0 {
            return Err(PosetError::EmptyPoset);
        }
        let mut seen = HashMap::new();
        for l in &labels {
            if seen.insert(l.as_str(), ()).is_some() {
                return Err(PosetError::DuplicateLabel(l.clone()));
            }
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(PosetError::NotPartialOrder("matrix shape".into()));
        }
        let p = Self {
            labels,
            leq: leq.into_iter().flatten().collect(),
        };
        p.check_axioms().map_err(PosetError::NotPartialOrder)?;
        Ok(p)
    }

    /// Verifies reflexivity, antisymmetry and transitivity.
    pub fn check_axioms(&self) -> Result<(), String> {
        let n = self.len();
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(format!("not reflexive at {}", self.labels[i]));
            }
            for j in 0..n {
                if i != j && self.leq(i, j) && self.leq(j, i) {
                    return Err(format!(
                        "not antisymmetric: {} and {}",
                        self.labels[i], self.labels[j]
                    ));
                }
                if !self.leq(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.leq(j, k) && !self.leq(i, k) {
                        return Err(format!(
                            "not transitive: {} <= {} <= {}",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: empty posets cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n).map(|i| self.leq[i * n..(i + 1) * n].to_vec()).collect()
    }

    /// Number of pairs `i <= j`, the dimension of the incidence algebra.
    pub fn relation_count(&self) -> usize {
        self.leq.iter().filter(|&&b| b).count()
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self, PosetError> {
        assert_eq!(labels.len(), self.len());
        Self::from_leq_matrix(labels, self.leq_matrix())
    }

    /// Transitive reduction, lexicographic by index pair.
    pub fn covers(&self) -> HasseDiagram {
        let n = self.len();
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt(i, j) && !(0..n).any(|k| self.lt(i, k) && self.lt(k, j)) {
                    covers.push((i, j));
                }
            }
        }
        HasseDiagram { covers }
    }

    /// Elements covered by `j` (its lower covers).
    pub fn lower_covers(&self, j: usize) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&i| self.lt(i, j) && !(0..n).any(|k| self.lt(i, k) && self.lt(k, j)))
            .collect()
    }

    /// Topological order: repeatedly emit the remaining minimal element with
    /// the smallest input index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n)
                .find(|&j| !placed[j] && (0..n).all(|i| placed[i] || !self.lt(i, j)))
                .expect("a finite poset always has a minimal element");
            placed[next] = true;
            order.push(next);
        }
        order
    }

    pub fn opposite(&self) -> Self {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = self.leq(j, i);
            }
        }
        Self {
            labels: self.labels.clone(),
            leq,
        }
    }

    /// Componentwise order on pairs, labelled `(x,y)`; element `(i, j)` sits at
    /// index `i * |other| + j`.
    pub fn product(&self, other: &Self) -> Self {
        let (n, m) = (self.len(), other.len());
        let nm = n * m;
        let labels = (0..n)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| format!("({},{})", self.labels[i], other.labels[j]))
            .collect();
        let mut leq = vec![false; nm * nm];
        for a in 0..nm {
            for b in 0..nm {
                leq[a * nm + b] = self.leq(a / m, b / m) && other.leq(a % m, b % m);
            }
        }
        Self { labels, leq }
    }

    /// Disjoint union. Labels must not collide; callers relabel first if needed.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, PosetError> {
        let (n, m) = (self.len(), other.len());
        let total = n + m;
        let labels: Vec<String> = self.labels.iter().chain(&other.labels).cloned().collect();
        let mut leq = vec![vec![false; total]; total];
        for i in 0..n {
            for j in 0..n {
                leq[i][j] = self.leq(i, j);
            }
        }
        for i in 0..m {
            for j in 0..m {
                leq[n + i][n + j] = other.leq(i, j);
            }
        }
        Self::from_leq_matrix(labels, leq)
    }

    /// Classes of the comparability graph, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in 0..n {
                    if comp[w] == usize::MAX && self.comparable(v, w) {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Length of the longest chain ending at each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.len()];
        for &j in &self.linear_extension() {
            h[j] = (0..self.len())
                .filter(|&i| self.lt(i, j))
                .map(|i| h[i] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// The dimension: maximal length of a chain.
    pub fn longest_chain(&self) -> usize {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// Whether `subset` is downward closed.
    pub fn is_closed(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        for &s in subset {
            member[s] = true;
        }
        subset
            .iter()
            .all(|&y| (0..self.len()).all(|z| !self.leq(z, y) || member[z]))
    }

    pub fn is_open(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        for &s in subset {
            member[s] = true;
        }
        let complement: Vec<usize> = (0..self.len()).filter(|&i| !member[i]).collect();
        self.is_closed(&complement)
    }

    /// `U_x = {x' >= x}` and `{x}^- = {x' <= x}`.
    pub fn principal_sets(&self, x: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.len();
        let up = (0..n).filter(|&y| self.leq(x, y)).collect();
        let down = (0..n).filter(|&y| self.leq(y, x)).collect();
        (up, down)
    }

    /// Per-element `(|up set|, |down set|, height)`, invariant under isomorphism.
    pub fn signatures(&self) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        let h = self.heights();
        (0..n)
            .map(|x| {
                let up = (0..n).filter(|&y| self.leq(x, y)).count();
                let down = (0..n).filter(|&y| self.leq(y, x)).count();
                (up, down, h[x])
            })
            .collect()
    }

    /// An order isomorphism `self -> other` as an index map, if one exists.
    pub fn is_isomorphic(&self, other: &Self) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.relation_count() != other.relation_count() {
            return None;
        }
        let sig_a = self.signatures();
        let sig_b = other.signatures();
        let mut sorted_a = sig_a.clone();
        let mut sorted_b = sig_b.clone();
        sorted_a.sort_unstable();
        sorted_b.sort_unstable();
        if sorted_a != sorted_b {
            return None;
        }
        let mut multiplicity: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        for s in &sig_a {
            *multiplicity.entry(*s).or_default() += 1;
        }
        // Rare signatures first, then along a linear extension so that each
        // newly placed element is constrained by its already placed neighbours.
        let pos: Vec<usize> = {
            let ext = self.linear_extension();
            let mut p = vec![0; n];
            for (k, &x) in ext.iter().enumerate() {
                p[x] = k;
            }
            p
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (multiplicity[&sig_a[x]], pos[x]));

        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if self.extend_iso(other, &sig_a, &sig_b, &order, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_iso(
        &self,
        other: &Self,
        sig_a: &[(usize, usize, usize)],
        sig_b: &[(usize, usize, usize)],
        order: &[usize],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let x = order[depth];
        for y in 0..other.len() {
            if used[y] || sig_a[x] != sig_b[y] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&a| {
                let b = map[a];
                self.leq(a, x) == other.leq(b, y) && self.leq(x, a) == other.leq(y, b)
            });
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if self.extend_iso(other, sig_a, sig_b, order, depth + 1, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }

    /// Induced subposet on `subset`, in the given order.
    pub fn induced(&self, subset: &[usize]) -> Result<Self, PosetError> {
        let labels = subset.iter().map(|&i| self.labels[i].clone()).collect();
        let leq = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.leq(i, j)).collect())
            .collect();
        Self::from_leq_matrix(labels, leq)
    }
}

fn transitive_closure(leq: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if !leq[i * n + k] {
                continue;
            }
            for j in 0..n {
                if leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
}

/// Serializable description: element labels plus strict relations, which
/// are closed under transitivity on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    pub less_than: Vec<(String, String)>,
}

impl PosetSpec {
    /// Canonical form: cover relations only, sorted by index pair.
    pub fn from_poset(x: &Poset) -> Self {
        Self {
            elements: x.labels().to_vec(),
            less_than: x
                .covers()
                .covers
                .into_iter()
                .map(|(i, j)| (x.label(i).to_string(), x.label(j).to_string()))
                .collect(),
        }
    }

    pub fn to_poset(&self) -> Result<Poset, PosetError> {
        Poset::from_relations(&self.elements, &self.less_than)
    }
}

/// Random poset: independent edges `i -> j` (i < j in index order) with the
/// given probability, then transitive closure. Labels are `0..n`.
pub fn random_poset(n: usize, edge_prob: Ratio<u64>, seed: u64) -> Result<Poset, PosetError> {
    if n == 0 {
        return Err(PosetError::EmptyPoset);
    }
    if *edge_prob.denom() == 0 || edge_prob.numer() > edge_prob.denom() {
        return Err(PosetError::BadProbability(format!(
            "{}/{}",
            edge_prob.numer(),
            edge_prob.denom()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_range(0..*edge_prob.denom()) < *edge_prob.numer() {
                edges.push((i, j));
            }
        }
    }
    Poset::from_index_relations((0..n).map(|i| i.to_string()).collect(), &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{antichain, chain, diamond, v3};
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn from_relations_examples() {
        let c = Poset::from_relations(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(c.lt(0, 1) && !c.leq(1, 0));
        assert!(matches!(
            Poset::from_relations(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(PosetError::CycleDetected(_))
        ));
        let v = Poset::from_relations(&["1", "2", "3"], &[("1", "3"), ("2", "3")]).unwrap();
        assert_eq!(v.relation_count(), 5);
        assert!(matches!(
            Poset::from_relations(&["a", "a"], &[]),
            Err(PosetError::DuplicateLabel(_))
        ));
        assert!(matches!(
            Poset::from_relations(&["a"], &[("a", "z")]),
            Err(PosetError::UnknownLabel(_))
        ));
        let empty: [&str; 0] = [];
        assert_eq!(Poset::from_relations(&empty, &[]), Err(PosetError::EmptyPoset));
    }

    #[test]
    fn cover_examples() {
        assert_eq!(chain(3).covers().covers, vec![(0, 1), (1, 2)]);
        assert!(antichain(3).covers().covers.is_empty());
        assert_eq!(diamond().covers().covers.len(), 4);
    }

    #[test]
    fn linear_extension_examples() {
        let rev = Poset::from_relations(&["c", "b", "a"], &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(rev.linear_extension(), vec![2, 1, 0]);
        assert_eq!(antichain(4).linear_extension(), vec![0, 1, 2, 3]);
        assert_eq!(v3().linear_extension(), vec![0, 1, 2]);
    }

    #[test]
    fn opposite_and_product() {
        assert_eq!(antichain(3).opposite(), antichain(3));
        let c = chain(2).opposite();
        assert!(c.lt(1, 0));
        let sq = chain(2).product(&chain(2));
        assert!(sq.is_isomorphic(&diamond()).is_some());
        let point = chain(1);
        assert!(v3().product(&point).is_isomorphic(&v3()).is_some());
    }

    #[test]
    fn components_and_chains() {
        assert_eq!(antichain(3).connected_components().len(), 3);
        assert_eq!(diamond().connected_components().len(), 1);
        assert_eq!(chain(5).longest_chain(), 4);
        assert_eq!(antichain(5).longest_chain(), 0);
        let u = chain(1).disjoint_union(&Poset::from_relations(&["z"], &[]).unwrap()).unwrap();
        assert_eq!(u, Poset::from_relations(&["0", "z"], &[]).unwrap());
    }

    #[test]
    fn closedness_and_principal_sets() {
        let v = v3();
        assert!(v.is_closed(&[0]));
        assert!(!chain(2).is_closed(&[1]));
        assert!(v.is_closed(&[]) && v.is_closed(&[0, 1, 2]));
        assert_eq!(chain(3).principal_sets(1), (vec![1, 2], vec![0, 1]));
        assert_eq!(antichain(2).principal_sets(0), (vec![0], vec![0]));
        let d = diamond();
        let min = d.index_of("t").unwrap();
        assert_eq!(d.principal_sets(min).0.len(), 4);
        assert_eq!(d.principal_sets(min).1, vec![min]);
    }

    #[test]
    fn random_poset_extremes() {
        let zero = Ratio::new(0, 1);
        let one = Ratio::new(1, 1);
        assert_eq!(random_poset(4, zero, 3).unwrap(), antichain(4));
        assert_eq!(random_poset(4, one, 3).unwrap(), chain(4));
        assert!(random_poset(5, Ratio::new(1, 2), 7).unwrap().check_axioms().is_ok());
        assert!(matches!(
            random_poset(3, Ratio::new(3, 2), 1),
            Err(PosetError::BadProbability(_))
        ));
    }

    fn arb_poset(max_n: usize) -> impl Strategy<Value = Poset> {
        (1..=max_n, 0u64..=4, any::<u64>())
            .prop_map(|(n, p, seed)| random_poset(n, Ratio::new(p, 4), seed).unwrap())
    }

    proptest! {
        #[test]
        fn closure_of_covers_is_the_order(x in arb_poset(9)) {
            prop_assert!(x.check_axioms().is_ok());
            let covers = x.covers().covers;
            let rebuilt = Poset::from_index_relations(x.labels().to_vec(), &covers).unwrap();
            prop_assert_eq!(&rebuilt, &x);
            prop_assert_eq!(rebuilt.covers().covers, covers);
        }

        #[test]
        fn linear_extension_is_topological(x in arb_poset(9)) {
            let ext = x.linear_extension();
            for a in 0..ext.len() {
                for b in 0..ext.len() {
                    if x.lt(ext[a], ext[b]) {
                        prop_assert!(a < b);
                    }
                }
            }
        }

        #[test]
        fn opposite_is_an_involution(x in arb_poset(8)) {
            prop_assert_eq!(x.opposite().opposite(), x.clone());
            let mut reversed: Vec<_> = x.covers().covers.into_iter().map(|(a, b)| (b, a)).collect();
            reversed.sort_unstable();
            prop_assert_eq!(x.opposite().covers().covers, reversed);
        }

        #[test]
        fn isomorphism_is_reflexive_and_symmetric(x in arb_poset(8), y in arb_poset(8), perm_seed in any::<u64>()) {
            // A relabelled, reindexed copy is always isomorphic.
            let n = x.len();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let labels = (0..n).map(|i| format!("v{i}")).collect();
            let leq = (0..n).map(|i| (0..n).map(|j| x.leq(perm[i], perm[j])).collect()).collect();
            let copy = Poset::from_leq_matrix(labels, leq).unwrap();
            let f = x.is_isomorphic(&copy).expect("relabelled copy");
            for a in 0..n {
                for b in 0..n {
                    prop_assert_eq!(x.leq(a, b), copy.leq(f[a], f[b]));
                }
            }
            prop_assert!(x.is_isomorphic(&x).is_some());
            prop_assert_eq!(x.is_isomorphic(&y).is_some(), y.is_isomorphic(&x).is_some());
            if x.signatures().len() == y.signatures().len() {
                let mut a = x.signatures();
                let mut b = y.signatures();
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    prop_assert!(x.is_isomorphic(&y).is_none());
                }
            }
        }

        #[test]
        fn components_of_disjoint_union_add(x in arb_poset(6), y in arb_poset(6)) {
            let y = y.with_labels((0..y.len()).map(|i| format!("y{i}")).collect()).unwrap();
            let u = x.disjoint_union(&y).unwrap();
            prop_assert_eq!(
                u.connected_components().len(),
                x.connected_components().len() + y.connected_components().len()
            );
        }
    }
}
