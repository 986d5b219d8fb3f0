//! Order complex of a poset and its simplicial cohomology over a field.

use std::collections::HashMap;

use crate::field::{alternating, Field, FieldTag, Ring};
use crate::linalg::LinalgError;
use crate::matrix::Matrix;
use crate::par::{self, Execution};
use crate::poset::Poset;
use crate::with_field;

/// Chains of the poset grouped by dimension. A `p`-simplex is stored as its
/// `p + 1` elements listed bottom to top; each dimension is sorted
/// lexicographically by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderComplex {
    simplices: Vec<Vec<Vec<usize>>>,
}

impl OrderComplex {
    pub fn new(x: &Poset) -> Self {
        let n = x.len();
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|v| vec![v]).collect()];
        loop {
            let last = simplices.last().unwrap();
            let mut next = Vec::new();
            for chain in last {
                let top = *chain.last().unwrap();
                for v in 0..n {
                    if x.lt(top, v) {
                        let mut c = chain.clone();
                        c.push(v);
                        next.push(c);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_unstable();
            simplices.push(next);
        }
        Self { simplices }
    }

    /// Top dimension (equals the longest chain length).
    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        self.simplices.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// Coboundary `d^p : C^p -> C^{p+1}` as a `|X^(p+1)| x |X^(p)|` matrix with
    /// entry `(-1)^j` where the column simplex is the row simplex minus vertex `j`.
    pub fn coboundary<R: Ring>(&self, ring: &R, p: usize) -> Matrix<R::Elem> {
        let cols = self.simplices(p);
        let rows = self.simplices(p + 1);
        let index: HashMap<&[usize], usize> =
            cols.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let mut d = Matrix::zeros(ring, rows.len(), cols.len());
        for (r, sigma) in rows.iter().enumerate() {
            for j in 0..sigma.len() {
                let mut face = sigma.clone();
                face.remove(j);
                let c = index[face.as_slice()];
                d[(r, c)] = ring.from_i64(alternating(j));
            }
        }
        d
    }
}

pub fn order_complex(x: &Poset) -> OrderComplex {
    OrderComplex::new(x)
}

/// Betti numbers `β^0 .. β^{dim X}` of the unreduced cohomology.
pub fn betti<F: Field>(x: &Poset, field: &F) -> Vec<usize> {
    betti_with(x, field, Execution::default())
}

pub fn betti_with<F: Field>(x: &Poset, field: &F, exec: Execution) -> Vec<usize> {
    let k = OrderComplex::new(x);
    betti_of_complex(&k, field, exec)
}

pub(crate) fn betti_of_complex<F: Field>(k: &OrderComplex, field: &F, exec: Execution) -> Vec<usize> {
    let dim = k.dimension();
    // rank of d^p for p = 0..dim-1; d^dim is the zero map.
    let ranks = par::map_range(exec, dim, |p| k.coboundary(field, p).rank(field));
    (0..=dim)
        .map(|p| {
            let out = if p < dim { ranks[p] } else { 0 };
            let incoming = if p > 0 { ranks[p - 1] } else { 0 };
            k.simplices(p).len() - out - incoming
        })
        .collect()
}

pub fn betti_tagged(x: &Poset, tag: FieldTag) -> Result<Vec<usize>, LinalgError> {
    let tag = tag.validate()?;
    Ok(with_field!(tag, |f| betti(x, &f)))
}

/// `Σ_p (-1)^p · #(p-simplices)`.
pub fn euler_char_simplicial(x: &Poset) -> i64 {
    OrderComplex::new(x)
        .face_counts()
        .iter()
        .enumerate()
        .map(|(p, &c)| alternating(p) * c as i64)
        .sum()
}

pub fn alternating_sum(values: &[usize]) -> i64 {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| alternating(i) * v as i64)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::fixtures::{antichain, chain, crown4, diamond};
    use crate::poset::random_poset;
    use num_rational::Ratio;
    use proptest::prelude::*;

    #[test]
    fn order_complex_examples() {
        assert_eq!(order_complex(&antichain(3)).face_counts(), vec![3]);
        assert_eq!(order_complex(&chain(3)).face_counts(), vec![3, 3, 1]);
        let c = order_complex(&crown4());
        assert_eq!(c.face_counts(), vec![4, 4]);
        assert_eq!(c.simplices(1)[0], vec![0, 2]);
    }

    #[test]
    fn betti_examples() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(betti(&crown4(), &Rationals), vec![1, 1]);
        assert_eq!(betti(&crown4(), &f2), vec![1, 1]);
        assert_eq!(betti(&diamond(), &Rationals), vec![1, 0, 0]);
        assert_eq!(betti(&antichain(4), &Rationals), vec![4]);
        assert_eq!(euler_char_simplicial(&crown4()), 0);
        assert_eq!(euler_char_simplicial(&chain(5)), 1);
        assert!(matches!(betti_tagged(&crown4(), FieldTag::Prime(9)), Err(LinalgError::NotPrime(9))));
    }

    fn arb_poset() -> impl Strategy<Value = Poset> {
        (1usize..=8, 0u64..=4, any::<u64>()).prop_map(|(n, p, s)| random_poset(n, Ratio::new(p, 4), s).unwrap())
    }

    proptest! {
        #[test]
        fn complex_is_closed_under_faces(x in arb_poset()) {
            let k = order_complex(&x);
            prop_assert_eq!(k.dimension(), x.longest_chain());
            for p in 1..=k.dimension() {
                for s in k.simplices(p) {
                    for j in 0..s.len() {
                        let mut f = s.clone();
                        f.remove(j);
                        prop_assert!(k.simplices(p - 1).binary_search(&f).is_ok());
                    }
                }
            }
        }

        #[test]
        fn coboundary_squares_to_zero(x in arb_poset()) {
            let k = order_complex(&x);
            for p in 0..k.dimension().saturating_sub(1) {
                let d0 = k.coboundary(&Rationals, p);
                let d1 = k.coboundary(&Rationals, p + 1);
                prop_assert!(d1.mul(&Rationals, &d0).is_zero_in(&Rationals));
            }
        }

        #[test]
        fn betti_invariants(x in arb_poset()) {
            let f2 = PrimeField::new(2).unwrap();
            let bq = betti(&x, &Rationals);
            let b2 = betti(&x, &f2);
            let chi = euler_char_simplicial(&x);
            prop_assert_eq!(alternating_sum(&bq), chi);
            prop_assert_eq!(alternating_sum(&b2), chi);
            prop_assert_eq!(bq[0], x.connected_components().len());
            prop_assert_eq!(b2[0], x.connected_components().len());
            prop_assert_eq!(betti(&x.opposite(), &Rationals), bq);
            prop_assert_eq!(betti_with(&x, &f2, Execution::Sequential), b2);
        }
    }
}
