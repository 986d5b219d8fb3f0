//! Univariate polynomials over an exact ring, coefficients stored in
//! ascending degree with no trailing zeros.

use crate::field::{Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + PartialEq> Poly<T> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant<R: Ring<Elem = T>>(ring: &R, c: T) -> Self {
        Self::from_coeffs(ring, vec![c])
    }

    /// `x - c`.
    pub fn linear<R: Ring<Elem = T>>(ring: &R, c: &T) -> Self {
        Self::from_coeffs(ring, vec![ring.neg(c), ring.one()])
    }

    /// Ascending-degree coefficients; trailing zeros are trimmed.
    pub fn from_coeffs<R: Ring<Elem = T>>(ring: &R, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add<R: Ring<Elem = T>>(&self, ring: &R, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = ring.zero();
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = other.coeffs.get(i).unwrap_or(&z);
                ring.add(a, b)
            })
            .collect();
        Self::from_coeffs(ring, c)
    }

    pub fn sub<R: Ring<Elem = T>>(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.neg(ring))
    }

    pub fn neg<R: Ring<Elem = T>>(&self, ring: &R) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| ring.neg(c)).collect(),
        }
    }

    pub fn mul<R: Ring<Elem = T>>(&self, ring: &R, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = ring.add(&c[i + j], &ring.mul(a, b));
            }
        }
        Self::from_coeffs(ring, c)
    }

    pub fn scale<R: Ring<Elem = T>>(&self, ring: &R, s: &T) -> Self {
        Self::from_coeffs(ring, self.coeffs.iter().map(|c| ring.mul(s, c)).collect())
    }

    /// Coefficientwise image under a ring map (e.g. reduction mod p).
    pub fn map_into<R: Ring>(&self, target: &R, f: impl Fn(&T) -> R::Elem) -> Poly<R::Elem> {
        Poly::from_coeffs(target, self.coeffs.iter().map(f).collect())
    }

    pub fn render<R: Ring<Elem = T>>(&self, ring: &R) -> String {
        render_descending(ring, &self.coeffs)
    }
}

impl<T: Clone + PartialEq> Poly<T> {
    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem<F: Field<Elem = T>>(&self, field: &F, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = field.inv(divisor.leading().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); self.coeffs.len().saturating_sub(d).max(1)];
        while rem.len() > d {
            let top = rem.len() - 1;
            let c = field.mul(&rem[top], &lead_inv);
            if !field.is_zero(&c) {
                let shift = top - d;
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    rem[shift + i] = field.sub(&rem[shift + i], &field.mul(&c, dc));
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        (Self::from_coeffs(field, quot), Self::from_coeffs(field, rem))
    }

    pub fn monic<F: Field<Elem = T>>(&self, field: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(field, &field.inv(l).unwrap()),
        }
    }

    pub fn divides<F: Field<Elem = T>>(&self, field: &F, other: &Self) -> bool {
        other.is_zero() || (!self.is_zero() && other.div_rem(field, self).1.is_zero())
    }
}

/// Renders `c_0 + c_1 x + ...` in descending powers, e.g. `x^2 - x + 1`.
pub fn render_descending<R: Ring>(ring: &R, coeffs: &[R::Elem]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if ring.is_zero(c) {
            continue;
        }
        let s = ring.render(c);
        let (negative, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&mono);
        } else if mag.contains('/') {
            out.push_str(&format!("({mag}){mono}"));
        } else {
            out.push_str(&format!("{mag}{mono}"));
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Integers, PrimeField, Rationals};
    use num_bigint::BigInt;

    fn zp(v: &[i64]) -> Poly<BigInt> {
        Poly::from_coeffs(&Integers, v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn rendering() {
        assert_eq!(zp(&[1, -1, 1]).render(&Integers), "x^2 - x + 1");
        assert_eq!(zp(&[0, 0, 1]).render(&Integers), "x^2");
        assert_eq!(zp(&[-2, 3]).render(&Integers), "3x - 2");
        assert_eq!(zp(&[]).render(&Integers), "0");
        assert_eq!(zp(&[0, -1]).render(&Integers), "-x");
        let f = PrimeField::new(5).unwrap();
        let p = Poly::from_coeffs(&f, vec![4, 1]);
        assert_eq!(p.render(&f), "x + 4");
    }

    #[test]
    fn division() {
        let f = PrimeField::new(11).unwrap();
        let a = Poly::from_coeffs(&f, vec![1, 0, 0, 1]); // x^3 + 1
        let b = Poly::from_coeffs(&f, vec![1, 1]); // x + 1
        let (q, r) = a.div_rem(&f, &b);
        assert!(r.is_zero());
        assert_eq!(q.mul(&f, &b), a);
        let c = Poly::from_coeffs(&f, vec![3, 0, 2]);
        let (q, r) = c.div_rem(&f, &b);
        assert_eq!(q.mul(&f, &b).add(&f, &r), c);
        assert!(r.degree().unwrap_or(0) < 1);
        let q1 = Poly::from_coeffs(&Rationals, vec![Rationals.from_i64(2), Rationals.from_i64(4)]);
        assert_eq!(q1.monic(&Rationals).leading(), Some(&Rationals.one()));
    }
}
