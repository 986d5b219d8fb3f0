//! Dense row-major matrices over an exact [`Ring`].

use std::ops::{Index, IndexMut};

use crate::field::{Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Rows and columns permuted: `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert!(self.is_square() && perm.len() == self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self[(perm[i], perm[j])].clone())
    }

    /// Entrywise conversion, e.g. reducing an integer matrix into a field.
    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Columns `cols` stacked side by side, keeping all rows.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<T>], zero: T) -> Self {
        let mut m = Self::filled(rows, columns.len(), zero);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn zeros<R: Ring<Elem = T>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = T>>(ring: &R, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn mul<R: Ring<Elem = T>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if ring.is_zero(b) {
                        continue;
                    }
                    let t = ring.mul(a, b);
                    out[(i, j)] = ring.add(&out[(i, j)], &t);
                }
            }
        }
        out
    }

    pub fn mul_vec<R: Ring<Elem = T>>(&self, ring: &R, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !ring.is_zero(a) && !ring.is_zero(b) {
                        acc = ring.add(&acc, &ring.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub<R: Ring<Elem = T>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            ring.sub(&self[(i, j)], &other[(i, j)])
        })
    }

    pub fn scale<R: Ring<Elem = T>>(&self, ring: &R, c: &T) -> Self {
        self.map(|v| ring.mul(c, v))
    }

    pub fn is_zero_in<R: Ring<Elem = T>>(&self, ring: &R) -> bool {
        self.data.iter().all(|v| ring.is_zero(v))
    }

    pub fn is_identity_in<R: Ring<Elem = T>>(&self, ring: &R) -> bool {
        self.is_square() && *self == Self::identity(ring, self.rows)
    }

    /// Standard Kronecker product; block `(i, j)` is `self[i][j] * other`.
    pub fn kronecker<R: Ring<Elem = T>>(&self, ring: &R, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            ring.mul(&self[(i / r2, j / c2)], &other[(i % r2, j % c2)])
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum<R: Ring<Elem = T>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = Self::zeros(ring, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub reduced: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: Clone + PartialEq> Matrix<T> {
    /// Gauss-Jordan elimination with the first nonzero entry of each column
    /// as pivot.
    pub fn rref<F: Field<Elem = T>>(&self, field: &F) -> Echelon<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !field.is_zero(&m[(i, c)])) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = field.inv(&m[(r, c)]).expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = field.mul(&m[(r, j)], &inv);
            }
            for i in 0..m.rows {
                if i == r || field.is_zero(&m[(i, c)]) {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let t = field.mul(&factor, &m[(r, j)]);
                    m[(i, j)] = field.sub(&m[(i, j)], &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank<F: Field<Elem = T>>(&self, field: &F) -> usize {
        // Row reduction on the shorter side is cheaper and gives the same rank.
        if self.rows > self.cols {
            self.transpose().rank(field)
        } else {
            self.rref(field).pivots.len()
        }
    }

    /// Basis of `{v : self * v = 0}` as the columns of the result. One basis
    /// vector per free column of the reduced echelon form, in column order.
    pub fn nullspace<F: Field<Elem = T>>(&self, field: &F) -> Matrix<T> {
        self.nullspace_with_free(field).0
    }

    /// Kernel basis plus the free columns it is indexed by. Basis vector `k`
    /// is 1 at `free[k]` and 0 at every other free column, so a kernel vector
    /// has coordinates equal to its entries at the free columns.
    pub fn nullspace_with_free<F: Field<Elem = T>>(&self, field: &F) -> (Matrix<T>, Vec<usize>) {
        let Echelon { reduced, pivots } = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(field, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                basis[(pc, k)] = field.neg(&reduced[(row, f)]);
            }
        }
        (basis, free)
    }

    /// Inverse over a field, or `None` if singular.
    pub fn inverse_in<F: Field<Elem = T>>(&self, field: &F) -> Option<Matrix<T>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = field.one();
        }
        let e = aug.rref(field);
        if n > 0 && (e.pivots.len() < n || e.pivots[n - 1] != n - 1) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| e.reduced[(i, n + j)].clone()))
    }

    /// Solves `self * x = b` for a single right-hand side, if consistent.
    pub fn solve<F: Field<Elem = T>>(&self, field: &F, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let e = aug.rref(field);
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (row, &pc) in e.pivots.iter().enumerate() {
            x[pc] = e.reduced[(row, self.cols)].clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn identity_has_empty_nullspace() {
        let i = Matrix::identity(&Rationals, 4);
        assert_eq!(i.nullspace(&Rationals).cols(), 0);
    }

    #[test]
    fn zero_matrix_nullspace_is_everything() {
        let z = Matrix::zeros(&Rationals, 2, 5);
        let ns = z.nullspace(&Rationals);
        assert_eq!(ns.cols(), 5);
        assert!(ns.is_identity_in(&Rationals));
    }

    #[test]
    fn kronecker_shapes() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::identity(&f, 2);
        let b = Matrix::identity(&f, 3);
        assert!(a.kronecker(&f, &b).is_identity_in(&f));
        let c = Matrix::zeros(&f, 2, 3);
        let d = Matrix::zeros(&f, 4, 5);
        let k = c.kronecker(&f, &d);
        assert_eq!((k.rows(), k.cols()), (8, 15));
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(1)]]);
        let inv = m.inverse_in(&Rationals).unwrap();
        assert!(m.mul(&Rationals, &inv).is_identity_in(&Rationals));
        let x = m.solve(&Rationals, &[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let singular = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(1)]]);
        assert!(singular.inverse_in(&Rationals).is_none());
        assert!(singular.solve(&Rationals, &[q(1), q(0)]).is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-3i64..4, 36)) {
            let m = Matrix::from_fn(rows, cols, |i, j| q(seed[i * 6 + j]));
            let rank = m.rank(&Rationals);
            let ns = m.nullspace(&Rationals);
            prop_assert_eq!(rank + ns.cols(), cols);
            prop_assert!(m.mul(&Rationals, &ns).is_zero_in(&Rationals));
        }
    }
}
