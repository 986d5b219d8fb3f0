//! Minimal projective resolutions and Ext via the Hom complex.

use std::sync::Arc;

use crate::field::{alternating, Field, FieldTag};
use crate::matrix::Matrix;
use crate::par::{self, Execution};
use crate::poset::Poset;
use crate::with_field;

use super::{standard_sheaf, Diagram, DiagramMorphism, SheafError, StandardKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoverStrategy {
    /// One generator per basis vector of the top `F(x) / rad F(x)`.
    #[default]
    Minimal,
    /// `⊕_x P_x^{dim F(x)}`, one generator per stalk basis vector.
    Canonical,
}

/// Generators `(x, v)` with `v in F(x)`; generator `(x, v)` spans a summand
/// `P_x` mapping onto the subsheaf generated by `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveCover<T> {
    pub generators: Vec<(usize, Vec<T>)>,
}

impl<T: Clone + PartialEq> ProjectiveCover<T> {
    pub fn points(&self) -> Vec<usize> {
        self.generators.iter().map(|(x, _)| *x).collect()
    }

    /// The cover as a diagram `⊕ P_{g_a}` together with its map to `target`.
    pub fn morphism<F: Field<Elem = T>>(
        &self,
        target: &Diagram<F>,
    ) -> Result<(Diagram<F>, DiagramMorphism<T>), SheafError> {
        let points = self.points();
        let source = projective_sum(target.base_arc(), target.field(), &points)?;
        let base = target.base();
        let components = (0..base.len())
            .map(|y| self.stalk_map(target, &points, y))
            .collect();
        Ok((source, DiagramMorphism { components }))
    }

    /// Stalk of the cover map at `y`, in the basis `{a : g_a <= y}`.
    fn stalk_map<F: Field<Elem = T>>(&self, target: &Diagram<F>, points: &[usize], y: usize) -> Matrix<T> {
        let base = target.base();
        let idx: Vec<usize> = (0..points.len()).filter(|&a| base.leq(points[a], y)).collect();
        let cols: Vec<Vec<T>> = idx
            .iter()
            .map(|&a| {
                let (g, v) = &self.generators[a];
                target.transition(*g, y).expect("g <= y").mul_vec(target.field(), v)
            })
            .collect();
        Matrix::from_columns(target.dim(y), &cols, target.field().zero())
    }
}

/// `⊕_a P_{points[a]}`. The stalk at `y` has basis `{a : points[a] <= y}` in
/// increasing order and every edge map is the coordinate inclusion.
pub fn projective_sum<F: Field>(base: &Arc<Poset>, field: &F, points: &[usize]) -> Result<Diagram<F>, SheafError> {
    let n = base.len();
    let idx: Vec<Vec<usize>> = (0..n)
        .map(|y| (0..points.len()).filter(|&a| base.leq(points[a], y)).collect())
        .collect();
    let dims = idx.iter().map(Vec::len).collect();
    Diagram::from_fn(base.clone(), field.clone(), dims, |x, y| {
        Matrix::from_fn(idx[y].len(), idx[x].len(), |r, c| {
            if idx[y][r] == idx[x][c] {
                field.one()
            } else {
                field.zero()
            }
        })
    })
}

/// Top dimensions and a minimal projective cover. The top at `x` is `F(x)`
/// modulo the images of the lower cover maps; its lifts are the standard
/// basis vectors at the non-pivot columns of the radical's echelon form.
pub fn top_and_cover<F: Field>(f: &Diagram<F>) -> (Vec<usize>, ProjectiveCover<F::Elem>) {
    cover_of(f, CoverStrategy::Minimal)
}

fn cover_of<F: Field>(f: &Diagram<F>, strategy: CoverStrategy) -> (Vec<usize>, ProjectiveCover<F::Elem>) {
    let field = f.field();
    let n = f.base().len();
    let mut tops = vec![0; n];
    let mut generators = Vec::new();
    for x in 0..n {
        let d = f.dim(x);
        let unit = |j: usize| (0..d).map(|i| if i == j { field.one() } else { field.zero() }).collect::<Vec<_>>();
        let free: Vec<usize> = match strategy {
            CoverStrategy::Canonical => (0..d).collect(),
            CoverStrategy::Minimal => {
                // Spanning vectors of the radical, one per row.
                let mut rows: Vec<Vec<F::Elem>> = Vec::new();
                for (i, &(_, y)) in f.covers().iter().enumerate() {
                    if y == x {
                        rows.extend(f.edge_maps()[i].transpose().to_rows());
                    }
                }
                let pivots = if rows.is_empty() {
                    Vec::new()
                } else {
                    Matrix::from_rows(rows).rref(field).pivots
                };
                (0..d).filter(|j| !pivots.contains(j)).collect()
            }
        };
        tops[x] = free.len();
        generators.extend(free.into_iter().map(|j| (x, unit(j))));
    }
    if strategy == CoverStrategy::Canonical {
        // The canonical cover is not minimal; report the true tops anyway.
        tops = cover_of(f, CoverStrategy::Minimal).0;
    }
    (tops, ProjectiveCover { generators })
}

/// A projective resolution `... -> Q_1 -> Q_0 -> F -> 0`.
///
/// Term `i` is `⊕_a P_{terms[i][a]}`. Since `Hom(P_x, P_y)` is `k` when
/// `y <= x` and zero otherwise, each differential is a scalar matrix:
/// `differentials[i][(a', a)]` is the coefficient of `P_{g_a'} -> P_{g_a}`
/// from term `i + 1` to term `i`.
#[derive(Clone, Debug)]
pub struct ProjResolution<F: Field> {
    base: Arc<Poset>,
    field: F,
    terms: Vec<Vec<usize>>,
    differentials: Vec<Matrix<F::Elem>>,
    augmentation: Vec<Vec<F::Elem>>,
}

impl<F: Field> ProjResolution<F> {
    pub fn terms(&self) -> &[Vec<usize>] {
        &self.terms
    }

    /// Index of the last nonzero term (0 for a projective or zero sheaf).
    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    /// Multiplicity of each `P_x` in term `i`.
    pub fn multiplicities(&self, i: usize) -> Vec<usize> {
        let mut m = vec![0; self.base.len()];
        for &x in self.terms.get(i).map_or(&[][..], Vec::as_slice) {
            m[x] += 1;
        }
        m
    }

    pub fn differential(&self, i: usize) -> Option<&Matrix<F::Elem>> {
        self.differentials.get(i)
    }

    /// Image of each generator of term 0 in the resolved diagram.
    pub fn augmentation(&self) -> &[Vec<F::Elem>] {
        &self.augmentation
    }

    /// `d ∘ d = 0`, `ε ∘ d_0 = 0` and coefficients only where a map exists.
    pub fn is_complex(&self, resolved: &Diagram<F>) -> bool {
        let f = &self.field;
        for (i, d) in self.differentials.iter().enumerate() {
            for a2 in 0..d.rows() {
                for a in 0..d.cols() {
                    if !f.is_zero(&d[(a2, a)]) && !self.base.leq(self.terms[i][a], self.terms[i + 1][a2]) {
                        return false;
                    }
                }
            }
        }
        for w in self.differentials.windows(2) {
            if !w[1].mul(f, &w[0]).is_zero_in(f) {
                return false;
            }
        }
        if let Some(d0) = self.differentials.first() {
            for a2 in 0..d0.rows() {
                let y = self.terms[1][a2];
                let mut acc = vec![f.zero(); resolved.dim(y)];
                for a in 0..d0.cols() {
                    let c = &d0[(a2, a)];
                    if f.is_zero(c) {
                        continue;
                    }
                    let g = self.terms[0][a];
                    let img = resolved.transition(g, y).expect("g <= y").mul_vec(f, &self.augmentation[a]);
                    for (s, v) in acc.iter_mut().zip(img) {
                        *s = f.add(s, &f.mul(c, &v));
                    }
                }
                if acc.iter().any(|v| !f.is_zero(v)) {
                    return false;
                }
            }
        }
        true
    }

    /// Exactness of the augmented complex at every stalk, by rank counting.
    pub fn is_exact(&self, resolved: &Diagram<F>) -> bool {
        if !self.is_complex(resolved) {
            return false;
        }
        let f = &self.field;
        (0..self.base.len()).all(|x| {
            let idx: Vec<Vec<usize>> = self
                .terms
                .iter()
                .map(|t| (0..t.len()).filter(|&a| self.base.leq(t[a], x)).collect())
                .collect();
            let eps_cols: Vec<Vec<F::Elem>> = idx
                .first()
                .map_or(&[][..], Vec::as_slice)
                .iter()
                .map(|&a| {
                    let g = self.terms[0][a];
                    resolved.transition(g, x).expect("g <= x").mul_vec(f, &self.augmentation[a])
                })
                .collect();
            let eps = Matrix::from_columns(resolved.dim(x), &eps_cols, f.zero());
            let mut prev_rank = eps.rank(f);
            if prev_rank != resolved.dim(x) {
                return false;
            }
            for i in 0..self.terms.len() {
                let rank = match self.differentials.get(i) {
                    None => 0,
                    Some(d) => Matrix::from_fn(idx[i].len(), idx[i + 1].len(), |r, c| d[(idx[i + 1][c], idx[i][r])].clone())
                        .rank(f),
                };
                if idx[i].len() != prev_rank + rank {
                    return false;
                }
                prev_rank = rank;
            }
            true
        })
    }
}

pub fn projective_resolution<F: Field>(f: &Diagram<F>) -> Result<ProjResolution<F>, SheafError> {
    projective_resolution_with(f, CoverStrategy::Minimal)
}

/// Iterated covers of kernels. Kernels are computed stalkwise; a kernel
/// vector's coordinates are its entries at the free columns of the echelon
/// form, which fixes the kernel bases deterministically.
pub fn projective_resolution_with<F: Field>(
    f: &Diagram<F>,
    strategy: CoverStrategy,
) -> Result<ProjResolution<F>, SheafError> {
    let base = f.base_arc().clone();
    let field = f.field().clone();
    let n = base.len();
    let mut terms: Vec<Vec<usize>> = Vec::new();
    let mut differentials = Vec::new();
    let mut augmentation = Vec::new();
    let mut current = f.clone();
    // For the current kernel: its stalk basis at x as columns in the
    // coordinates {a : g_a <= x} of the previous term.
    let mut embedding: Option<Vec<Matrix<F::Elem>>> = None;
    loop {
        let (_, cover) = cover_of(&current, strategy);
        if cover.generators.is_empty() {
            break;
        }
        assert!(terms.len() <= n, "resolution failed to terminate");
        match &embedding {
            None => augmentation = cover.generators.iter().map(|(_, v)| v.clone()).collect(),
            Some(emb) => {
                let prev = terms.last().expect("previous term");
                let mut d = Matrix::zeros(&field, cover.generators.len(), prev.len());
                for (row, (x, v)) in cover.generators.iter().enumerate() {
                    let coords = emb[*x].mul_vec(&field, v);
                    let idx = (0..prev.len()).filter(|&a| base.leq(prev[a], *x));
                    for (a, c) in idx.zip(coords) {
                        d[(row, a)] = c;
                    }
                }
                differentials.push(d);
            }
        }
        let points = cover.points();
        let mut bases = Vec::with_capacity(n);
        let mut frees = Vec::with_capacity(n);
        for y in 0..n {
            let (k, free) = cover.stalk_map(&current, &points, y).nullspace_with_free(&field);
            bases.push(k);
            frees.push(free);
        }
        let idx: Vec<Vec<usize>> = (0..n)
            .map(|y| (0..points.len()).filter(|&a| base.leq(points[a], y)).collect())
            .collect();
        let dims = bases.iter().map(Matrix::cols).collect();
        let kernel = Diagram::from_fn(base.clone(), field.clone(), dims, |x, y| {
            // Include Q(x) into Q(y), then read coordinates at the free columns of y.
            let pos: Vec<usize> = idx[x]
                .iter()
                .map(|a| idx[y].iter().position(|b| b == a).expect("up-set inclusion"))
                .collect();
            Matrix::from_fn(bases[y].cols(), bases[x].cols(), |r, c| {
                let target = frees[y][r];
                match pos.iter().position(|&p| p == target) {
                    Some(src) => bases[x][(src, c)].clone(),
                    None => field.zero(),
                }
            })
        })?;
        terms.push(points);
        current = kernel;
        embedding = Some(bases);
    }
    Ok(ProjResolution {
        base,
        field,
        terms,
        differentials,
        augmentation,
    })
}

/// `dim Ext^i(F, G)` for `i = 0 ..= longest_chain`, from the complex
/// `Hom(Q_•, G)` with `Hom(P_x, G) = G(x)`.
pub fn ext_dims<F: Field>(source: &Diagram<F>, target: &Diagram<F>) -> Result<Vec<usize>, SheafError> {
    source.compatible(target)?;
    let res = projective_resolution(source)?;
    Ok(ext_from_resolution(&res, target, source.base().longest_chain() + 1))
}

pub(crate) fn ext_from_resolution<F: Field>(res: &ProjResolution<F>, target: &Diagram<F>, min_len: usize) -> Vec<usize> {
    let field = target.field();
    let terms = &res.terms;
    let offsets: Vec<Vec<usize>> = terms
        .iter()
        .map(|t| {
            let mut o = vec![0];
            for &g in t {
                o.push(o.last().unwrap() + target.dim(g));
            }
            o
        })
        .collect();
    let cochain_dims: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();
    let ranks = par::map_range(Execution::default(), res.differentials.len(), |i| {
        let d = &res.differentials[i];
        let mut delta = Matrix::zeros(field, cochain_dims[i + 1], cochain_dims[i]);
        for a2 in 0..d.rows() {
            for a in 0..d.cols() {
                let c = &d[(a2, a)];
                if field.is_zero(c) {
                    continue;
                }
                let (g, g2) = (terms[i][a], terms[i + 1][a2]);
                let t = target.transition(g, g2).expect("coefficient only where g <= g2");
                for r in 0..t.rows() {
                    for s in 0..t.cols() {
                        delta[(offsets[i + 1][a2] + r, offsets[i][a] + s)] = field.mul(c, &t[(r, s)]);
                    }
                }
            }
        }
        delta.rank(field)
    });
    let len = min_len.max(terms.len());
    (0..len)
        .map(|i| {
            if i >= terms.len() {
                return 0;
            }
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i > 0 { ranks[i - 1] } else { 0 };
            cochain_dims[i] - out - inc
        })
        .collect()
}

pub fn euler_form_sheaves<F: Field>(source: &Diagram<F>, target: &Diagram<F>) -> Result<i64, SheafError> {
    let dims = ext_dims(source, target)?;
    Ok(dims.iter().enumerate().map(|(i, &d)| alternating(i) * d as i64).sum())
}

/// `H^i(X; k_X) = Ext^i(k_X, k_X)`.
pub fn sheaf_cohomology_constant<F: Field>(x: &Arc<Poset>, field: &F) -> Result<Vec<usize>, SheafError> {
    let k = standard_sheaf(x, field, StandardKind::Constant, None)?;
    ext_dims(&k, &k)
}

pub fn sheaf_cohomology_tagged(x: &Arc<Poset>, tag: FieldTag) -> Result<Vec<usize>, SheafError> {
    let tag = tag.validate()?;
    with_field!(tag, |f| sheaf_cohomology_constant(x, &f))
}
