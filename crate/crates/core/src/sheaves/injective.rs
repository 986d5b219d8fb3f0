//! The simplicial injective resolution of the constant sheaf.

use std::sync::Arc;

use crate::field::Field;
use crate::homology::OrderComplex;
use crate::matrix::Matrix;
use crate::poset::Poset;

use super::{hom_dim, standard_sheaf, Diagram, DiagramMorphism, SheafError, StandardKind};

/// `⊕_a I_{points[a]}`. The stalk at `y` has basis `{a : y <= points[a]}` and
/// edge maps are coordinate projections.
pub fn injective_sum<F: Field>(base: &Arc<Poset>, field: &F, points: &[usize]) -> Result<Diagram<F>, SheafError> {
    let idx = injective_indices(base, points);
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

fn injective_indices(base: &Poset, points: &[usize]) -> Vec<Vec<usize>> {
    (0..base.len())
        .map(|y| (0..points.len()).filter(|&a| base.leq(y, points[a])).collect())
        .collect()
}

/// `0 -> k_X -> I^0 -> I^1 -> ...` with `I^p = ⊕_{σ in X^(p)} I_{min σ}` and
/// the simplicial coboundary as differential.
#[derive(Clone, Debug)]
pub struct InjectiveResolution {
    base: Arc<Poset>,
    complex: OrderComplex,
}

pub fn constant_sheaf_injective_resolution(x: &Arc<Poset>) -> InjectiveResolution {
    InjectiveResolution {
        base: x.clone(),
        complex: OrderComplex::new(x),
    }
}

impl InjectiveResolution {
    pub fn len(&self) -> usize {
        self.complex.dimension() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn complex(&self) -> &OrderComplex {
        &self.complex
    }

    /// `min σ` for every `p`-simplex, in simplex order.
    pub fn term_points(&self, p: usize) -> Vec<usize> {
        self.complex.simplices(p).iter().map(|s| s[0]).collect()
    }

    pub fn term<F: Field>(&self, field: &F, p: usize) -> Result<Diagram<F>, SheafError> {
        injective_sum(&self.base, field, &self.term_points(p))
    }

    /// `I^p -> I^{p+1}` stalk by stalk: the coboundary restricted to the
    /// simplices whose minimum lies above the stalk's element.
    pub fn differential<F: Field>(&self, field: &F, p: usize) -> DiagramMorphism<F::Elem> {
        let d = self.complex.coboundary(field, p);
        let src = injective_indices(&self.base, &self.term_points(p));
        let dst = injective_indices(&self.base, &self.term_points(p + 1));
        DiagramMorphism {
            components: (0..self.base.len())
                .map(|y| Matrix::from_fn(dst[y].len(), src[y].len(), |r, c| d[(dst[y][r], src[y][c])].clone()))
                .collect(),
        }
    }

    /// Naturality of every differential plus stalkwise exactness of the
    /// augmented complex `0 -> k -> I^0(y) -> I^1(y) -> ...`.
    pub fn verify<F: Field>(&self, field: &F) -> Result<bool, SheafError> {
        let top = self.complex.dimension();
        let terms: Vec<Diagram<F>> = (0..=top).map(|p| self.term(field, p)).collect::<Result<_, _>>()?;
        let diffs: Vec<DiagramMorphism<F::Elem>> = (0..top).map(|p| self.differential(field, p)).collect();
        for (p, d) in diffs.iter().enumerate() {
            if !d.is_natural(&terms[p], &terms[p + 1]) {
                return Ok(false);
            }
        }
        for y in 0..self.base.len() {
            let dim0 = terms[0].dim(y);
            let aug = Matrix::filled(dim0, 1, field.one());
            if let Some(d0) = diffs.first() {
                if !d0.components[y].mul(field, &aug).is_zero_in(field) {
                    return Ok(false);
                }
            }
            let mut prev_rank = aug.rank(field);
            if prev_rank != 1 {
                return Ok(false);
            }
            for w in diffs.windows(2) {
                if !w[1].components[y].mul(field, &w[0].components[y]).is_zero_in(field) {
                    return Ok(false);
                }
            }
            for p in 0..=top {
                let rank = diffs.get(p).map_or(0, |d| d.components[y].rank(field));
                if terms[p].dim(y) != prev_rank + rank {
                    return Ok(false);
                }
                prev_rank = rank;
            }
        }
        Ok(true)
    }

    /// `dim Hom(k_X, I^p)` for each `p`.
    pub fn hom_dims<F: Field>(&self, field: &F) -> Result<Vec<usize>, SheafError> {
        let k = standard_sheaf(&self.base, field, StandardKind::Constant, None)?;
        (0..self.len()).map(|p| hom_dim(&k, &self.term(field, p)?)).collect()
    }
}
