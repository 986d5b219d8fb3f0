//! Sheaves on a poset, i.e. commutative diagrams of finite-dimensional vector
//! spaces over its Hasse diagram, and the homological algebra built on them.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, FieldTag};
use crate::linalg::LinalgError;
use crate::matrix::Matrix;
use crate::poset::{Poset, PosetError};

mod hochschild;
mod injective;
pub mod io;
mod resolution;

pub use hochschild::{enveloping_poset, hochschild_dims, incidence_bimodule, MAX_ENVELOPING_POINTS};
pub use injective::{constant_sheaf_injective_resolution, injective_sum, InjectiveResolution};
pub use resolution::{
    euler_form_sheaves, ext_dims, projective_resolution, projective_resolution_with, projective_sum,
    sheaf_cohomology_constant, sheaf_cohomology_tagged, top_and_cover, CoverStrategy, ProjResolution,
    ProjectiveCover,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SheafError {
    #[error("diagrams live on different posets")]
    BaseMismatch,
    #[error("diagrams use different fields ({left} vs {right})")]
    FieldMismatch { left: FieldTag, right: FieldTag },
    #[error("a {0} sheaf needs an element")]
    MissingElement(StandardKind),
    #[error("element index {0} is out of range")]
    UnknownElement(usize),
    #[error("subset is not closed")]
    NotClosed,
    #[error("element `{element}` is on the wrong side of the closed subset for {kind}")]
    ElementOnWrongSide { element: String, kind: TruncatedKind },
    #[error("expected {expected} stalk dimensions, got {got}")]
    StalkCount { expected: usize, got: usize },
    #[error("map on cover {from} -> {to} is {got_rows}x{got_cols}, expected {rows}x{cols}")]
    BadEdgeMap {
        from: String,
        to: String,
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("{from} < {to} is not a cover relation")]
    NotACover { from: String, to: String },
    #[error("diagram does not commute between {from} and {to}")]
    NotCommutative { from: String, to: String },
    #[error("enveloping poset would have {0} points (limit {MAX_ENVELOPING_POINTS})")]
    EnvelopeTooLarge(usize),
    #[error("malformed diagram file: {0}")]
    Format(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardKind {
    Simple,
    Projective,
    Injective,
    Constant,
}

impl std::fmt::Display for StandardKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StandardKind::Simple => "simple",
            StandardKind::Projective => "projective",
            StandardKind::Injective => "injective",
            StandardKind::Constant => "constant",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncatedKind {
    /// `P_y` restricted to the closed subset; the element must lie in it.
    Projective,
    /// `I_u` restricted to the open complement; the element must lie in it.
    Injective,
}

impl std::fmt::Display for TruncatedKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TruncatedKind::Projective => f.write_str("truncated projective"),
            TruncatedKind::Injective => f.write_str("truncated injective"),
        }
    }
}

/// A sheaf on `base`: a stalk dimension per element and a linear map per
/// cover `x -> y`, stored as a `dim(y) x dim(x)` matrix.
///
/// Construction checks commutativity and caches the composite map for every
/// pair `x <= y`.
#[derive(Clone, Debug)]
pub struct Diagram<F: Field> {
    base: Arc<Poset>,
    field: F,
    dims: Vec<usize>,
    covers: Vec<(usize, usize)>,
    edge_maps: Vec<Matrix<F::Elem>>,
    transitions: Vec<Option<Matrix<F::Elem>>>,
}

impl<F: Field> Diagram<F> {
    /// `edge_map(x, y)` is called once per cover `x -> y`.
    pub fn from_fn(
        base: Arc<Poset>,
        field: F,
        dims: Vec<usize>,
        mut edge_map: impl FnMut(usize, usize) -> Matrix<F::Elem>,
    ) -> Result<Self, SheafError> {
        let covers = base.covers().covers;
        let maps = covers.iter().map(|&(x, y)| edge_map(x, y)).collect();
        Self::from_edge_maps(base, field, dims, maps)
    }

    /// Edge maps listed in the order of `base.covers()`.
    pub fn from_edge_maps(
        base: Arc<Poset>,
        field: F,
        dims: Vec<usize>,
        edge_maps: Vec<Matrix<F::Elem>>,
    ) -> Result<Self, SheafError> {
        let n = base.len();
        if dims.len() != n {
            return Err(SheafError::StalkCount { expected: n, got: dims.len() });
        }
        let covers = base.covers().covers;
        assert_eq!(covers.len(), edge_maps.len(), "one map per cover");
        for (&(x, y), m) in covers.iter().zip(&edge_maps) {
            if m.rows() != dims[y] || m.cols() != dims[x] {
                return Err(SheafError::BadEdgeMap {
                    from: base.label(x).to_string(),
                    to: base.label(y).to_string(),
                    rows: dims[y],
                    cols: dims[x],
                    got_rows: m.rows(),
                    got_cols: m.cols(),
                });
            }
        }
        let transitions = compose_transitions(&base, &field, &dims, &covers, &edge_maps)?;
        Ok(Self {
            base,
            field,
            dims,
            covers,
            edge_maps,
            transitions,
        })
    }

    /// Diagram with a 1-dimensional stalk on `support` and identity maps
    /// between adjacent nonzero stalks.
    pub fn indicator(base: Arc<Poset>, field: F, support: &[bool]) -> Result<Self, SheafError> {
        let dims: Vec<usize> = support.iter().map(|&s| usize::from(s)).collect();
        let f = field.clone();
        Self::from_fn(base, field, dims.clone(), |x, y| {
            Matrix::from_fn(dims[y], dims[x], |_, _| f.one())
        })
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn edge_maps(&self) -> &[Matrix<F::Elem>] {
        &self.edge_maps
    }

    /// The map on a cover `x -> y`.
    pub fn edge_map(&self, x: usize, y: usize) -> Option<&Matrix<F::Elem>> {
        self.covers
            .iter()
            .position(|&c| c == (x, y))
            .map(|i| &self.edge_maps[i])
    }

    /// The composite map `F(x) -> F(y)` for `x <= y`.
    pub fn transition(&self, x: usize, y: usize) -> Option<&Matrix<F::Elem>> {
        self.transitions[x * self.base.len() + y].as_ref()
    }

    /// Checks the same base poset and field.
    pub fn compatible(&self, other: &Self) -> Result<(), SheafError> {
        if self.field.tag() != other.field.tag() {
            return Err(SheafError::FieldMismatch {
                left: self.field.tag(),
                right: other.field.tag(),
            });
        }
        if !Arc::ptr_eq(&self.base, &other.base) && *self.base != *other.base {
            return Err(SheafError::BaseMismatch);
        }
        Ok(())
    }

    /// Stalkwise direct sum; edge maps are block diagonal.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, SheafError> {
        self.compatible(other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .edge_maps
            .iter()
            .zip(&other.edge_maps)
            .map(|(a, b)| a.direct_sum(&self.field, b))
            .collect();
        Self::from_edge_maps(self.base.clone(), self.field.clone(), dims, maps)
    }

    /// Re-checks commutativity by enumerating every cover path. Exponential in
    /// the worst case; meant for tests on small posets.
    pub fn check_all_paths(&self) -> bool {
        let n = self.base.len();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &(x, _)) in self.covers.iter().enumerate() {
            up[x].push(i);
        }
        for x in 0..n {
            let mut stack = vec![(x, Matrix::identity(&self.field, self.dims[x]))];
            while let Some((y, m)) = stack.pop() {
                if self.transition(x, y) != Some(&m) {
                    return false;
                }
                for &c in &up[y] {
                    let z = self.covers[c].1;
                    stack.push((z, self.edge_maps[c].mul(&self.field, &m)));
                }
            }
        }
        true
    }
}

fn compose_transitions<F: Field>(
    base: &Poset,
    field: &F,
    dims: &[usize],
    covers: &[(usize, usize)],
    edge_maps: &[Matrix<F::Elem>],
) -> Result<Vec<Option<Matrix<F::Elem>>>, SheafError> {
    let n = base.len();
    let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(_, y)) in covers.iter().enumerate() {
        lower[y].push(i);
    }
    let mut t: Vec<Option<Matrix<F::Elem>>> = vec![None; n * n];
    for y in base.linear_extension() {
        t[y * n + y] = Some(Matrix::identity(field, dims[y]));
        for x in 0..n {
            if !base.lt(x, y) {
                continue;
            }
            let mut found: Option<Matrix<F::Elem>> = None;
            for &c in &lower[y] {
                let z = covers[c].0;
                if !base.leq(x, z) {
                    continue;
                }
                let via = edge_maps[c].mul(field, t[x * n + z].as_ref().expect("z precedes y"));
                match &found {
                    None => found = Some(via),
                    Some(f) if *f == via => {}
                    Some(_) => {
                        return Err(SheafError::NotCommutative {
                            from: base.label(x).to_string(),
                            to: base.label(y).to_string(),
                        })
                    }
                }
            }
            t[x * n + y] = found;
        }
    }
    Ok(t)
}

/// A natural transformation: one matrix `F(x) -> G(x)` per element.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramMorphism<T> {
    pub components: Vec<Matrix<T>>,
}

impl<T: Clone + PartialEq> DiagramMorphism<T> {
    pub fn is_natural<F: Field<Elem = T>>(&self, source: &Diagram<F>, target: &Diagram<F>) -> bool {
        let f = source.field();
        source.covers.iter().enumerate().all(|(i, &(x, y))| {
            let left = target.edge_maps[i].mul(f, &self.components[x]);
            let right = self.components[y].mul(f, &source.edge_maps[i]);
            left == right
        })
    }

    pub fn is_zero_in<F: Field<Elem = T>>(&self, field: &F) -> bool {
        self.components.iter().all(|m| m.is_zero_in(field))
    }
}

fn check_element(base: &Poset, x: usize) -> Result<(), SheafError> {
    if x < base.len() {
        Ok(())
    } else {
        Err(SheafError::UnknownElement(x))
    }
}

/// `S_x`, `P_x` (constant on the up-set), `I_x` (constant on the down-set) or
/// the constant sheaf `k_X`.
pub fn standard_sheaf<F: Field>(
    base: &Arc<Poset>,
    field: &F,
    kind: StandardKind,
    x: Option<usize>,
) -> Result<Diagram<F>, SheafError> {
    let n = base.len();
    let support: Vec<bool> = match (kind, x) {
        (StandardKind::Constant, _) => vec![true; n],
        (_, None) => return Err(SheafError::MissingElement(kind)),
        (kind, Some(x)) => {
            check_element(base, x)?;
            (0..n)
                .map(|y| match kind {
                    StandardKind::Simple => y == x,
                    StandardKind::Projective => base.leq(x, y),
                    StandardKind::Injective => base.leq(y, x),
                    StandardKind::Constant => unreachable!(),
                })
                .collect()
        }
    };
    Diagram::indicator(base.clone(), field.clone(), &support)
}

/// `P̃_y` (support `{x in Y : y <= x}`) or `Ĩ_u` (support
/// `{x in X \ Y : x <= u}`) for a closed subset `Y`.
pub fn truncated_sheaf<F: Field>(
    base: &Arc<Poset>,
    field: &F,
    closed: &[usize],
    kind: TruncatedKind,
    element: usize,
) -> Result<Diagram<F>, SheafError> {
    let n = base.len();
    check_element(base, element)?;
    for &c in closed {
        check_element(base, c)?;
    }
    if !base.is_closed(closed) {
        return Err(SheafError::NotClosed);
    }
    let mut in_y = vec![false; n];
    for &c in closed {
        in_y[c] = true;
    }
    let wrong_side = match kind {
        TruncatedKind::Projective => !in_y[element],
        TruncatedKind::Injective => in_y[element],
    };
    if wrong_side {
        return Err(SheafError::ElementOnWrongSide {
            element: base.label(element).to_string(),
            kind,
        });
    }
    let support: Vec<bool> = (0..n)
        .map(|x| match kind {
            TruncatedKind::Projective => in_y[x] && base.leq(element, x),
            TruncatedKind::Injective => !in_y[x] && base.leq(x, element),
        })
        .collect();
    Diagram::indicator(base.clone(), field.clone(), &support)
}

/// Basis of `Hom(F, G)`: the solution space of every naturality square.
pub fn hom_space<F: Field>(
    source: &Diagram<F>,
    target: &Diagram<F>,
) -> Result<Vec<DiagramMorphism<F::Elem>>, SheafError> {
    source.compatible(target)?;
    let field = source.field();
    let n = source.base.len();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for x in 0..n {
        offsets.push(offsets[x] + target.dims[x] * source.dims[x]);
    }
    let unknowns = offsets[n];
    // phi_x is stored row-major: entry (r, c) is unknown offsets[x] + r * dim F(x) + c.
    let var = |x: usize, r: usize, c: usize| offsets[x] + r * source.dims[x] + c;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (i, &(x, y)) in source.covers.iter().enumerate() {
        let g = &target.edge_maps[i];
        let f = &source.edge_maps[i];
        // (G_e phi_x - phi_y F_e)[r][c] = 0 for r < dim G(y), c < dim F(x).
        for r in 0..target.dims[y] {
            for c in 0..source.dims[x] {
                let mut row = vec![field.zero(); unknowns];
                for k in 0..target.dims[x] {
                    let v = var(x, k, c);
                    row[v] = field.add(&row[v], &g[(r, k)]);
                }
                for k in 0..source.dims[y] {
                    let v = var(y, r, k);
                    row[v] = field.sub(&row[v], &f[(k, c)]);
                }
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zeros(field, 0, unknowns)
    } else {
        Matrix::from_rows(rows)
    };
    let basis = system.nullspace(field);
    Ok((0..basis.cols())
        .map(|k| DiagramMorphism {
            components: (0..n)
                .map(|x| {
                    Matrix::from_fn(target.dims[x], source.dims[x], |r, c| basis[(var(x, r, c), k)].clone())
                })
                .collect(),
        })
        .collect())
}

pub fn hom_dim<F: Field>(source: &Diagram<F>, target: &Diagram<F>) -> Result<usize, SheafError> {
    hom_space(source, target).map(|b| b.len())
}
