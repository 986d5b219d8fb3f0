//! Hochschild cohomology of an incidence algebra as Ext over the enveloping
//! poset `X × X^op`.

use std::sync::Arc;

use crate::field::Field;
use crate::poset::Poset;

use super::{ext_dims, Diagram, SheafError};

/// Largest enveloping poset `hochschild_dims` will build.
pub const MAX_ENVELOPING_POINTS: usize = 400;

/// `X × X^op`; the pair `(x, y)` sits at index `x * |X| + y`.
pub fn enveloping_poset(x: &Poset) -> Poset {
    x.product(&x.opposite())
}

/// The diagonal bimodule: stalk `k` at `(x, y)` iff `y <= x`, identity maps
/// between nonzero stalks.
pub fn incidence_bimodule<F: Field>(x: &Poset, field: &F) -> Result<Diagram<F>, SheafError> {
    let n = x.len();
    if n * n > MAX_ENVELOPING_POINTS {
        return Err(SheafError::EnvelopeTooLarge(n * n));
    }
    let support: Vec<bool> = (0..n * n).map(|i| x.leq(i % n, i / n)).collect();
    Diagram::indicator(Arc::new(enveloping_poset(x)), field.clone(), &support)
}

/// `dim HH^i(kX)` for `i = 0 ..= max_degree`.
pub fn hochschild_dims<F: Field>(x: &Poset, field: &F, max_degree: usize) -> Result<Vec<usize>, SheafError> {
    let lambda = incidence_bimodule(x, field)?;
    let mut dims = ext_dims(&lambda, &lambda)?;
    dims.resize(max_degree + 1, 0);
    Ok(dims)
}
