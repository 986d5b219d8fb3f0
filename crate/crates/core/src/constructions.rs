//! Poset-building operations that preserve derived equivalence: ordinal and
//! lexicographic sums, the bipartite flip, and the reordered poset `X'` and
//! algebra `A_Y` attached to a closed subset `Y`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fixtures::chain;
use crate::poset::{Poset, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("an ordinal sum needs at least one summand")]
    EmptyList,
    #[error("no component given for element `{0}`")]
    MissingComponent(String),
    #[error("{got} components given for a base poset with {expected} elements")]
    ExtraComponents { expected: usize, got: usize },
    #[error("poset is not bipartite")]
    NotBipartite,
    #[error("subset is not downward closed")]
    NotClosed,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Lexicographic sum: element `s` of `base` is replaced by `components[s]`.
/// Elements are laid out component by component and labelled `s.x`.
pub fn lex_sum(base: &Poset, components: &[Poset]) -> Result<Poset, ConstructionError> {
    if components.len() < base.len() {
        return Err(ConstructionError::MissingComponent(
            base.label(components.len()).to_string(),
        ));
    }
    if components.len() > base.len() {
        return Err(ConstructionError::ExtraComponents {
            expected: base.len(),
            got: components.len(),
        });
    }
    let mut owner = Vec::new();
    let mut local = Vec::new();
    let mut labels = Vec::new();
    for (s, comp) in components.iter().enumerate() {
        for x in 0..comp.len() {
            owner.push(s);
            local.push(x);
            labels.push(format!("{}.{}", base.label(s), comp.label(x)));
        }
    }
    let total = owner.len();
    let leq = (0..total)
        .map(|a| {
            (0..total)
                .map(|b| {
                    let (s, t) = (owner[a], owner[b]);
                    base.lt(s, t) || (s == t && components[s].leq(local[a], local[b]))
                })
                .collect()
        })
        .collect();
    Ok(Poset::from_leq_matrix(labels, leq)?)
}

/// `parts[0] + parts[1] + ...`: every element of an earlier part lies below
/// every element of a later one. Labels are `i.x` with `i` the part index.
pub fn ordinal_sum(parts: &[Poset]) -> Result<Poset, ConstructionError> {
    if parts.is_empty() {
        return Err(ConstructionError::EmptyList);
    }
    lex_sum(&chain(parts.len()), parts)
}

/// Two-level split `S = S0 ⊔ S1` with every strict relation going `S0 -> S1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartitePartition {
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
}

/// `S0` = minimal elements lying below something, `S1` = the rest. Posets
/// without strict relations are rejected.
pub fn bipartite_partition(s: &Poset) -> Option<BipartitePartition> {
    let n = s.len();
    let is_minimal = |j: usize| (0..n).all(|i| !s.lt(i, j));
    let below_something = |i: usize| (0..n).any(|j| s.lt(i, j));
    let (lower, upper): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| is_minimal(i) && below_something(i));
    if lower.is_empty() || upper.is_empty() {
        return None;
    }
    let mut in_lower = vec![false; n];
    for &i in &lower {
        in_lower[i] = true;
    }
    let valid = (0..n).all(|a| (0..n).all(|b| !s.lt(a, b) || (in_lower[a] && !in_lower[b])));
    valid.then_some(BipartitePartition { lower, upper })
}

/// `(⊕_S X, ⊕_{S^op} X)` for a bipartite `S`.
pub fn bipartite_flip(s: &Poset, components: &[Poset]) -> Result<(Poset, Poset), ConstructionError> {
    if bipartite_partition(s).is_none() {
        return Err(ConstructionError::NotBipartite);
    }
    Ok((lex_sum(s, components)?, lex_sum(&s.opposite(), components)?))
}

/// Witness that `y <= y'`, `u' <= u`, `y < u` but not `y' < u'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarViolation {
    pub y: usize,
    pub y_prime: usize,
    pub u_prime: usize,
    pub u: usize,
}

impl StarViolation {
    pub fn describe(&self, x: &Poset) -> String {
        format!(
            "y={} <= y'={}, u'={} <= u={}, {} < {} but not {} < {}",
            x.label(self.y),
            x.label(self.y_prime),
            x.label(self.u_prime),
            x.label(self.u),
            x.label(self.y),
            x.label(self.u),
            x.label(self.y_prime),
            x.label(self.u_prime)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AyPoset {
    /// The reordered poset on the same labels and indices as `X`.
    Order(Poset),
    Violation(StarViolation),
}

fn split_closed(x: &Poset, closed: &[usize]) -> Result<(Vec<bool>, Vec<usize>, Vec<usize>), ConstructionError> {
    if closed.iter().any(|&i| i >= x.len()) || !x.is_closed(closed) {
        return Err(ConstructionError::NotClosed);
    }
    let mut in_y = vec![false; x.len()];
    for &i in closed {
        in_y[i] = true;
    }
    let ys = (0..x.len()).filter(|&i| in_y[i]).collect();
    let us = (0..x.len()).filter(|&i| !in_y[i]).collect();
    Ok((in_y, ys, us))
}

/// Keeps the orders on `Y` and `U = X \ Y` and reverses every relation
/// between them (`u <' y` iff `y < u`), provided the compatibility condition
/// holds; otherwise returns the first violating quadruple in index order.
pub fn ay_poset(x: &Poset, closed: &[usize]) -> Result<AyPoset, ConstructionError> {
    let (in_y, ys, us) = split_closed(x, closed)?;
    for &y in &ys {
        for &y2 in ys.iter().filter(|&&y2| x.leq(y, y2)) {
            for &u2 in &us {
                for &u in us.iter().filter(|&&u| x.leq(u2, u)) {
                    if x.lt(y, u) && !x.lt(y2, u2) {
                        return Ok(AyPoset::Violation(StarViolation {
                            y,
                            y_prime: y2,
                            u_prime: u2,
                            u,
                        }));
                    }
                }
            }
        }
    }
    let n = x.len();
    let leq = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| match (in_y[a], in_y[b]) {
                    (true, true) | (false, false) => x.leq(a, b),
                    (false, true) => x.lt(b, a),
                    (true, false) => false,
                })
                .collect()
        })
        .collect();
    Ok(AyPoset::Order(Poset::from_leq_matrix(x.labels().to_vec(), leq)?))
}

/// Kind of a basis element of `A_Y`, with the element indices it is named by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKind {
    /// `e_{yy'}`, `y <= y'` in `Y`.
    Closed { y: usize, y2: usize },
    /// `e_{u'u}`, `u' <= u` in `U`.
    Open { u2: usize, u: usize },
    /// `e_{uy}`, `y < u`.
    Mixed { u: usize, y: usize },
    /// `e_{ab}` of an incidence algebra, `a <= b`.
    Incidence { a: usize, b: usize },
}

impl BasisKind {
    /// The ordered pair of elements naming this basis vector.
    pub fn pair(self) -> (usize, usize) {
        match self {
            BasisKind::Closed { y, y2 } => (y, y2),
            BasisKind::Open { u2, u } => (u2, u),
            BasisKind::Mixed { u, y } => (u, y),
            BasisKind::Incidence { a, b } => (a, b),
        }
    }
}

/// Finite-dimensional algebra given by a basis and structure constants: the
/// product of two basis elements is zero or `±` one basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub labels: Vec<String>,
    pub basis: Vec<BasisKind>,
    /// Indices of the idempotents `e_xx`; they sum to the unit.
    pub idempotents: Vec<usize>,
    products: BTreeMap<(usize, usize), (usize, i8)>,
}

impl AlgebraPresentation {
    fn from_rule(
        x: &Poset,
        basis: Vec<BasisKind>,
        rule: impl Fn(BasisKind, BasisKind) -> Option<BasisKind>,
    ) -> Self {
        let index: BTreeMap<BasisKind, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut products = BTreeMap::new();
        for (i, &a) in basis.iter().enumerate() {
            for (j, &b) in basis.iter().enumerate() {
                if let Some(c) = rule(a, b) {
                    let k = *index.get(&c).expect("product lands in the basis");
                    products.insert((i, j), (k, 1));
                }
            }
        }
        let labels = basis
            .iter()
            .map(|b| {
                let (p, q) = b.pair();
                format!("e({},{})", x.label(p), x.label(q))
            })
            .collect();
        let idempotents = basis
            .iter()
            .enumerate()
            .filter(|(_, b)| {
                let (p, q) = b.pair();
                p == q
            })
            .map(|(i, _)| i)
            .collect();
        Self {
            labels,
            basis,
            idempotents,
            products,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `basis[a] * basis[b]` as `(index, coefficient)`, or `None` for zero.
    pub fn product(&self, a: usize, b: usize) -> Option<(usize, i8)> {
        self.products.get(&(a, b)).copied()
    }

    pub fn find(&self, kind: BasisKind) -> Option<usize> {
        self.basis.iter().position(|&b| b == kind)
    }

    pub fn nonzero_products(&self) -> impl Iterator<Item = ((usize, usize), (usize, i8))> + '_ {
        self.products.iter().map(|(&k, &v)| (k, v))
    }

    /// Exhaustive check of `(ab)c = a(bc)` over all basis triples.
    pub fn is_associative(&self) -> bool {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                let ab = self.product(a, b);
                for c in 0..d {
                    let left = ab.and_then(|(k, s)| self.product(k, c).map(|(m, t)| (m, s * t)));
                    let right = self.product(b, c).and_then(|(k, s)| self.product(a, k).map(|(m, t)| (m, s * t)));
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The idempotents sum to a two-sided unit.
    pub fn has_unit(&self) -> bool {
        (0..self.dim()).all(|b| {
            let left: Vec<_> = self.idempotents.iter().filter_map(|&e| self.product(e, b)).collect();
            let right: Vec<_> = self.idempotents.iter().filter_map(|&e| self.product(b, e)).collect();
            left == vec![(b, 1)] && right == vec![(b, 1)]
        })
    }

    /// Equality of structure constants after identifying basis elements by
    /// their naming pairs.
    pub fn same_structure(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let theirs: BTreeMap<(usize, usize), usize> =
            other.basis.iter().enumerate().map(|(i, b)| (b.pair(), i)).collect();
        let Some(map): Option<Vec<usize>> = self.basis.iter().map(|b| theirs.get(&b.pair()).copied()).collect() else {
            return false;
        };
        (0..self.dim()).all(|a| {
            (0..self.dim()).all(|b| {
                let mine = self.product(a, b).map(|(k, s)| (map[k], s));
                mine == other.product(map[a], map[b])
            })
        })
    }
}

/// Incidence algebra of a poset: basis `e_ab` for `a <= b`,
/// `e_ab e_cd = δ_bc e_ad`.
pub fn incidence_algebra(x: &Poset) -> AlgebraPresentation {
    let n = x.len();
    let basis = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| x.leq(a, b))
        .map(|(a, b)| BasisKind::Incidence { a, b })
        .collect();
    AlgebraPresentation::from_rule(x, basis, |p, q| match (p, q) {
        (BasisKind::Incidence { a, b }, BasisKind::Incidence { a: c, b: d }) if b == c => {
            Some(BasisKind::Incidence { a, b: d })
        }
        _ => None,
    })
}

/// The endomorphism algebra `A_Y` of the exceptional collection attached to
/// the closed subset `Y`, presented by its distinguished basis.
pub fn ay_algebra(x: &Poset, closed: &[usize]) -> Result<AlgebraPresentation, ConstructionError> {
    let (_, ys, us) = split_closed(x, closed)?;
    let mut basis = Vec::new();
    for &y in &ys {
        for &y2 in &ys {
            if x.leq(y, y2) {
                basis.push(BasisKind::Closed { y, y2 });
            }
        }
    }
    for &u2 in &us {
        for &u in &us {
            if x.leq(u2, u) {
                basis.push(BasisKind::Open { u2, u });
            }
        }
    }
    for &u in &us {
        for &y in &ys {
            if x.lt(y, u) {
                basis.push(BasisKind::Mixed { u, y });
            }
        }
    }
    let rule = |p: BasisKind, q: BasisKind| -> Option<BasisKind> {
        use BasisKind::*;
        match (p, q) {
            (Closed { y, y2 }, Closed { y: y3, y2: y4 }) if y2 == y3 => Some(Closed { y, y2: y4 }),
            (Open { u2, u }, Open { u2: u3, u: u4 }) if u == u3 => Some(Open { u2, u: u4 }),
            (Mixed { u, y }, Closed { y: y3, y2 }) if y == y3 => x.lt(y2, u).then_some(Mixed { u, y: y2 }),
            (Open { u2, u }, Mixed { u: u3, y }) if u == u3 => x.lt(y, u2).then_some(Mixed { u: u2, y }),
            _ => None,
        }
    };
    let algebra = AlgebraPresentation::from_rule(x, basis, rule);
    debug_assert!(algebra.is_associative());
    Ok(algebra)
}
