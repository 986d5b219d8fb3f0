//! Exact linear algebra: unimodular inverses, characteristic polynomials and
//! invariant factors of `xI - M` for similarity testing over a field.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{bigint_abs_is_one, Field, Integers, Rationals, Ring};
use crate::matrix::Matrix;
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not invertible over the integers")]
    NotUnimodular,
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("unrecognized field `{0}` (expected `q` or a prime)")]
    BadFieldTag(String),
}

fn require_square<T: Clone>(m: &Matrix<T>) -> Result<usize, LinalgError> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Exact inverse of an integer matrix with determinant ±1.
pub fn inverse_unimodular(m: &Matrix<BigInt>) -> Result<Matrix<BigInt>, LinalgError> {
    require_square(m)?;
    let q = m.map(|v| Rationals.from_bigint(v));
    let inv = q.inverse_in(&Rationals).ok_or(LinalgError::NotUnimodular)?;
    let mut out = Matrix::zeros(&Integers, m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = &inv[(i, j)];
            if !v.is_integer() {
                return Err(LinalgError::NotUnimodular);
            }
            out[(i, j)] = v.to_integer();
        }
    }
    // Integral inverse already forces det = ±1; this guards the claim cheaply.
    debug_assert!(bigint_abs_is_one(&determinant_integer(m)));
    Ok(out)
}

/// Fraction-free (Bareiss) determinant over the integers.
pub fn determinant_integer(m: &Matrix<BigInt>) -> BigInt {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(p) => {
                    a.swap_rows(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Characteristic polynomial `det(xI - M)` by Berkowitz's division-free
/// recurrence, valid over any commutative ring. Coefficients ascending.
pub fn char_poly<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<Poly<R::Elem>, LinalgError> {
    let n = require_square(m)?;
    // `p` holds coefficients in descending order while iterating.
    let mut p = vec![ring.one()];
    for r in 1..=n {
        let a = &m[(r - 1, r - 1)];
        let row: Vec<R::Elem> = (0..r - 1).map(|j| m[(r - 1, j)].clone()).collect();
        let mut col: Vec<R::Elem> = (0..r - 1).map(|i| m[(i, r - 1)].clone()).collect();
        let mut toeplitz = Vec::with_capacity(r + 1);
        toeplitz.push(ring.one());
        toeplitz.push(ring.neg(a));
        for _ in 0..r.saturating_sub(1) {
            let dot = row
                .iter()
                .zip(&col)
                .fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)));
            toeplitz.push(ring.neg(&dot));
            // col <- B * col, B the leading (r-1)x(r-1) block.
            col = (0..r - 1)
                .map(|i| {
                    (0..r - 1).fold(ring.zero(), |acc, j| {
                        ring.add(&acc, &ring.mul(&m[(i, j)], &col[j]))
                    })
                })
                .collect();
        }
        let mut next = vec![ring.zero(); r + 1];
        for (j, pj) in p.iter().enumerate() {
            for (i, t) in toeplitz.iter().enumerate() {
                if i + j <= r {
                    next[i + j] = ring.add(&next[i + j], &ring.mul(t, pj));
                }
            }
        }
        p = next;
    }
    p.reverse();
    Ok(Poly::from_coeffs(ring, p))
}

/// Monic nonconstant invariant factors `f_1 | f_2 | ... | f_k` of `xI - M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantFactorList<T> {
    factors: Vec<Poly<T>>,
}

impl<T: Clone + PartialEq> InvariantFactorList<T> {
    pub fn factors(&self) -> &[Poly<T>] {
        &self.factors
    }

    pub fn product<F: Field<Elem = T>>(&self, field: &F) -> Poly<T> {
        self.factors
            .iter()
            .fold(Poly::constant(field, field.one()), |acc, f| acc.mul(field, f))
    }

    pub fn render<F: Field<Elem = T>>(&self, field: &F) -> Vec<String> {
        self.factors.iter().map(|f| f.render(field)).collect()
    }
}

/// Result of reducing a square polynomial matrix to Smith normal form.
/// When transforms were requested, `left * input * right = diag(diagonal)`.
#[derive(Clone, Debug)]
pub struct SmithForm<T> {
    pub diagonal: Vec<Poly<T>>,
    pub left: Option<Vec<Vec<Poly<T>>>>,
    pub right: Option<Vec<Vec<Poly<T>>>>,
}

/// `xI - M` as a polynomial matrix.
pub fn characteristic_matrix<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<Poly<F::Elem>>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let c = field.neg(&m[(i, j)]);
                    if i == j {
                        Poly::from_coeffs(field, vec![c, field.one()])
                    } else {
                        Poly::constant(field, c)
                    }
                })
                .collect()
        })
        .collect()
}

fn poly_identity<F: Field>(field: &F, n: usize) -> Vec<Vec<Poly<F::Elem>>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Poly::constant(field, field.one())
                    } else {
                        Poly::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Row `target -= q * row source`.
fn row_axpy<F: Field>(field: &F, a: &mut [Vec<Poly<F::Elem>>], target: usize, source: usize, q: &Poly<F::Elem>) {
    for j in 0..a[target].len() {
        if a[source][j].is_zero() {
            continue;
        }
        let t = q.mul(field, &a[source][j]);
        a[target][j] = a[target][j].sub(field, &t);
    }
}

/// Column `target -= q * column source`.
fn col_axpy<F: Field>(field: &F, a: &mut [Vec<Poly<F::Elem>>], target: usize, source: usize, q: &Poly<F::Elem>) {
    for row in a.iter_mut() {
        if row[source].is_zero() {
            continue;
        }
        let t = q.mul(field, &row[source]);
        row[target] = row[target].sub(field, &t);
    }
}

fn swap_cols<T>(a: &mut [Vec<T>], x: usize, y: usize) {
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// Smith normal form over `F[x]` of a square polynomial matrix. Pivots are
/// the lowest-degree nonzero entry of the active block, ties broken by
/// row-major position.
pub fn smith_normal_form<F: Field>(
    field: &F,
    input: Vec<Vec<Poly<F::Elem>>>,
    with_transforms: bool,
) -> SmithForm<F::Elem> {
    let n = input.len();
    let mut a = input;
    let mut left = with_transforms.then(|| poly_identity(field, n));
    let mut right = with_transforms.then(|| poly_identity(field, n));
    let neg_one = Poly::constant(field, field.neg(&field.one()));

    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if let Some(d) = e.degree() {
                        if best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            swap_cols(&mut a, t, pj);
            if let Some(l) = left.as_mut() {
                l.swap(t, pi);
            }
            if let Some(r) = right.as_mut() {
                swap_cols(r, t, pj);
            }

            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(field, &pivot);
                row_axpy(field, &mut a, i, t, &q);
                if let Some(l) = left.as_mut() {
                    row_axpy(field, l, i, t, &q);
                }
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(field, &pivot);
                col_axpy(field, &mut a, j, t, &q);
                if let Some(rt) = right.as_mut() {
                    col_axpy(field, rt, j, t, &q);
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !pivot.divides(field, &a[i][j]));
            match offender {
                Some((i, _)) => {
                    // row t += row i; the next pass leaves a smaller remainder.
                    row_axpy(field, &mut a, t, i, &neg_one);
                    if let Some(l) = left.as_mut() {
                        row_axpy(field, l, t, i, &neg_one);
                    }
                }
                None => break,
            }
        }
        if let Some(lead) = a[t][t].leading().cloned() {
            let inv = field.inv(&lead).unwrap();
            for e in a[t].iter_mut() {
                *e = e.scale(field, &inv);
            }
            if let Some(l) = left.as_mut() {
                for e in l[t].iter_mut() {
                    *e = e.scale(field, &inv);
                }
            }
        }
    }

    let diagonal = (0..n).map(|i| a[i][i].clone()).collect();
    SmithForm {
        diagonal,
        left,
        right,
    }
}

pub fn invariant_factors<F: Field>(
    field: &F,
    m: &Matrix<F::Elem>,
) -> Result<InvariantFactorList<F::Elem>, LinalgError> {
    require_square(m)?;
    let snf = smith_normal_form(field, characteristic_matrix(field, m), false);
    let factors = snf
        .diagonal
        .into_iter()
        .filter(|d| d.degree().is_some_and(|deg| deg > 0))
        .collect();
    Ok(InvariantFactorList { factors })
}

/// Similarity over `field`: equal invariant factor lists.
pub fn similar<F: Field>(
    field: &F,
    m1: &Matrix<F::Elem>,
    m2: &Matrix<F::Elem>,
) -> Result<bool, LinalgError> {
    let n1 = require_square(m1)?;
    let n2 = require_square(m2)?;
    if n1 != n2 {
        return Err(LinalgError::SizeMismatch {
            left: n1,
            right: n2,
        });
    }
    Ok(invariant_factors(field, m1)? == invariant_factors(field, m2)?)
}

/// Similarity of two integer matrices after reduction into the named fields.
/// Mixing fields is an error rather than a silent `false`.
pub fn similar_tagged<F: Field>(
    left_field: &F,
    m1: &Matrix<F::Elem>,
    right_field: &F,
    m2: &Matrix<F::Elem>,
) -> Result<bool, LinalgError> {
    if left_field != right_field {
        return Err(LinalgError::FieldMismatch {
            left: left_field.tag().to_string(),
            right: right_field.tag().to_string(),
        });
    }
    similar(left_field, m1, m2)
}

/// Kronecker product over a common ring. The ring tags are compared so
/// callers mixing coefficient rings get a typed error.
pub fn kronecker<R: Ring>(
    left_ring: &R,
    m1: &Matrix<R::Elem>,
    right_ring: &R,
    m2: &Matrix<R::Elem>,
) -> Result<Matrix<R::Elem>, LinalgError> {
    if left_ring != right_ring {
        return Err(LinalgError::RingMismatch {
            left: format!("{left_ring:?}"),
            right: format!("{right_ring:?}"),
        });
    }
    Ok(m1.kronecker(left_ring, m2))
}

/// Column basis of the kernel in reduced-echelon convention.
pub fn nullspace<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    m.nullspace(field)
}

/// Reduces an integer matrix into a field.
pub fn reduce<F: Field>(field: &F, m: &Matrix<BigInt>) -> Matrix<F::Elem> {
    m.map(|v| field.from_bigint(v))
}
