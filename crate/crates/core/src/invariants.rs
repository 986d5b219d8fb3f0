//! Combinatorial derived invariants of a poset and the pairwise comparator.
//!
//! All matrices are indexed along the canonical linear extension
//! ([`Poset::linear_extension`]), so the incidence matrix is upper
//! unitriangular and every report is reproducible byte for byte.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::field::{Field, FieldTag, Integers, PrimeField, Rationals, Ring};
use crate::homology::{alternating_sum, betti_of_complex, OrderComplex};
use crate::linalg::{char_poly, invariant_factors, inverse_unimodular, reduce, InvariantFactorList, LinalgError};
use crate::matrix::Matrix;
use crate::par::{self, Execution};
use crate::poly::Poly;
use crate::poset::Poset;

/// `(1_X)_{ab} = 1` iff the `a`-th element of the linear extension is below
/// the `b`-th.
pub fn incidence_matrix(x: &Poset) -> Matrix<BigInt> {
    let order = x.linear_extension();
    Matrix::from_fn(x.len(), x.len(), |a, b| {
        BigInt::from(x.leq(order[a], order[b]) as i64)
    })
}

/// Inverse of [`incidence_matrix`], in the same (linear extension) order.
pub fn mobius_matrix(x: &Poset) -> Matrix<BigInt> {
    inverse_unimodular(&incidence_matrix(x)).expect("incidence matrices are unitriangular")
}

/// `μ_X(a, b)` indexed by input element indices.
pub fn mobius_by_index(x: &Poset) -> Matrix<BigInt> {
    let order = x.linear_extension();
    let mut pos = vec![0; x.len()];
    for (k, &e) in order.iter().enumerate() {
        pos[e] = k;
    }
    mobius_matrix(x).permuted(&pos)
}

/// `1_X · 1_X^{-t}`, with no sign normalization.
pub fn coxeter_matrix(x: &Poset) -> Matrix<BigInt> {
    let inc = incidence_matrix(x);
    let inv_t = mobius_matrix(x).transpose();
    inc.mul(&Integers, &inv_t)
}

/// Sum of all entries of the Möbius matrix.
pub fn euler_char_mobius(x: &Poset) -> i64 {
    let m = mobius_matrix(x);
    let mut total = BigInt::from(0);
    for i in 0..m.rows() {
        for v in m.row(i) {
            total += v;
        }
    }
    total.to_i64().expect("Euler characteristic fits in i64")
}

/// Every invariant computed for one poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub n: usize,
    pub component_count: usize,
    /// Component sizes, ascending.
    pub component_sizes: Vec<usize>,
    pub dim: usize,
    pub mobius_entry_sum: i64,
    pub euler_char: i64,
    pub coxeter_charpoly: Poly<BigInt>,
    pub q_invariant_factors: InvariantFactorList<BigRational>,
    pub p_invariant_factors: BTreeMap<u64, InvariantFactorList<u64>>,
    pub betti: BTreeMap<FieldTag, Vec<usize>>,
}

fn validate_primes(primes: &[u64]) -> Result<Vec<PrimeField>, LinalgError> {
    primes.iter().map(|&p| PrimeField::new(p)).collect()
}

pub fn invariant_report(x: &Poset, primes: &[u64], fields: &[FieldTag]) -> Result<InvariantReport, LinalgError> {
    invariant_report_with(x, primes, fields, Execution::default())
}

pub fn invariant_report_with(
    x: &Poset,
    primes: &[u64],
    fields: &[FieldTag],
    exec: Execution,
) -> Result<InvariantReport, LinalgError> {
    let prime_fields = validate_primes(primes)?;
    for f in fields {
        f.validate()?;
    }
    let comps = x.connected_components();
    let mut component_sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    component_sizes.sort_unstable();

    let cox = coxeter_matrix(x);
    let coxeter_charpoly = char_poly(&Integers, &cox)?;
    let q_invariant_factors = invariant_factors(&Rationals, &reduce(&Rationals, &cox))?;
    let per_prime = par::map(exec, &prime_fields, |f| {
        (f.modulus(), invariant_factors(f, &reduce(f, &cox)).expect("square"))
    });
    let p_invariant_factors = per_prime.into_iter().collect();

    let complex = OrderComplex::new(x);
    let betti_list = par::map(exec, fields, |tag| {
        let b = crate::with_field!(*tag, |f| betti_of_complex(&complex, &f, Execution::Sequential));
        (*tag, b)
    });
    let betti: BTreeMap<FieldTag, Vec<usize>> = betti_list.into_iter().collect();

    let mobius_entry_sum = euler_char_mobius(x);
    let euler_char = crate::homology::euler_char_simplicial(x);
    assert_eq!(euler_char, mobius_entry_sum, "Möbius sum must equal the Euler characteristic");
    for (tag, b) in &betti {
        assert_eq!(alternating_sum(b), euler_char, "Betti numbers over {tag} disagree with χ");
    }
    let lifted = coxeter_charpoly.map_into(&Rationals, |c| Rationals.from_bigint(c));
    assert_eq!(q_invariant_factors.product(&Rationals), lifted);

    Ok(InvariantReport {
        n: x.len(),
        component_count: comps.len(),
        component_sizes,
        dim: x.longest_chain(),
        mobius_entry_sum,
        euler_char,
        coxeter_charpoly,
        q_invariant_factors,
        p_invariant_factors,
        betti,
    })
}

/// Fields used for Betti numbers by default: `Q` and each listed prime.
pub fn default_fields(primes: &[u64]) -> Vec<FieldTag> {
    std::iter::once(FieldTag::Rational)
        .chain(primes.iter().map(|&p| FieldTag::Prime(p)))
        .collect()
}

fn render_list<T: fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn padded(b: &[usize], len: usize) -> Vec<usize> {
    let mut v = b.to_vec();
    v.resize(len, 0);
    v
}

/// JSON shape of an [`InvariantReport`].
#[derive(Clone, Debug, Serialize)]
pub struct ReportJson {
    pub n: usize,
    pub components: ComponentsJson,
    pub dim: usize,
    pub mobius_entry_sum: i64,
    pub euler_char: i64,
    /// Coefficients in descending degree, as decimal strings.
    pub coxeter_charpoly: Vec<String>,
    pub coxeter_charpoly_text: String,
    pub q_invariant_factors: Vec<String>,
    pub p_invariant_factors: BTreeMap<String, Vec<String>>,
    pub betti: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentsJson {
    pub count: usize,
    pub sizes: Vec<usize>,
}

impl InvariantReport {
    pub fn q_factors_text(&self) -> Vec<String> {
        self.q_invariant_factors.render(&Rationals)
    }

    pub fn p_factors_text(&self, p: u64) -> Option<Vec<String>> {
        let f = PrimeField::new(p).ok()?;
        self.p_invariant_factors.get(&p).map(|l| l.render(&f))
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            n: self.n,
            components: ComponentsJson {
                count: self.component_count,
                sizes: self.component_sizes.clone(),
            },
            dim: self.dim,
            mobius_entry_sum: self.mobius_entry_sum,
            euler_char: self.euler_char,
            coxeter_charpoly: self.coxeter_charpoly.coeffs().iter().rev().map(ToString::to_string).collect(),
            coxeter_charpoly_text: self.coxeter_charpoly.render(&Integers),
            q_invariant_factors: self.q_factors_text(),
            p_invariant_factors: self
                .p_invariant_factors
                .keys()
                .map(|&p| (p.to_string(), self.p_factors_text(p).unwrap()))
                .collect(),
            betti: self.betti.iter().map(|(t, b)| (t.to_string(), b.clone())).collect(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k:<30}{v}\n"));
        line("points", self.n.to_string());
        line("components", self.component_count.to_string());
        line("component sizes", render_list(&self.component_sizes));
        line("dimension", self.dim.to_string());
        line("euler characteristic", self.euler_char.to_string());
        line("mobius entry sum", self.mobius_entry_sum.to_string());
        for (tag, b) in &self.betti {
            line(&format!("betti over {tag}"), render_list(b));
        }
        line("coxeter char poly", self.coxeter_charpoly.render(&Integers));
        line("invariant factors over Q", format!("[{}]", self.q_factors_text().join(", ")));
        for &p in self.p_invariant_factors.keys() {
            line(
                &format!("invariant factors over F{p}"),
                format!("[{}]", self.p_factors_text(p).unwrap().join(", ")),
            );
        }
        out
    }
}

/// Outcome of comparing two posets' invariants. `NotDistinguished` does not
/// prove derived equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Distinguished {
        invariant: String,
        left: String,
        right: String,
    },
    NotDistinguished {
        checked: Vec<String>,
    },
}

impl Verdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, Verdict::Distinguished { .. })
    }
}

/// Compares invariants in a fixed order and reports the first mismatch:
/// point count, component count, component sizes, Euler characteristic,
/// Betti numbers over `Q` then each prime, Coxeter characteristic
/// polynomial, invariant factors over `Q`, then over each prime.
pub fn distinguish(x: &Poset, y: &Poset, primes: &[u64]) -> Result<Verdict, LinalgError> {
    distinguish_with(x, y, primes, Execution::default())
}

pub fn distinguish_with(x: &Poset, y: &Poset, primes: &[u64], exec: Execution) -> Result<Verdict, LinalgError> {
    validate_primes(primes)?;
    let mut checked = Vec::new();
    macro_rules! check {
        ($name:expr, $a:expr, $b:expr) => {{
            let name: String = $name;
            let (a, b) = ($a, $b);
            if a != b {
                return Ok(Verdict::Distinguished {
                    invariant: name,
                    left: a,
                    right: b,
                });
            }
            checked.push(name);
        }};
    }
    check!("point count".into(), x.len().to_string(), y.len().to_string());
    let (cx, cy) = (x.connected_components(), y.connected_components());
    check!("component count".into(), cx.len().to_string(), cy.len().to_string());

    let fields = default_fields(primes);
    let pair = [x, y];
    let reports = par::map(exec, &pair, |p| invariant_report_with(p, primes, &fields, exec));
    let (rx, ry) = match (&reports[0], &reports[1]) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Err(e.clone()),
    };
    check!(
        "component sizes".into(),
        render_list(&rx.component_sizes),
        render_list(&ry.component_sizes)
    );
    check!("euler characteristic".into(), rx.euler_char.to_string(), ry.euler_char.to_string());
    for tag in &fields {
        let (bx, by) = (&rx.betti[tag], &ry.betti[tag]);
        let len = bx.len().max(by.len());
        check!(
            format!("betti numbers over {tag}"),
            render_list(&padded(bx, len)),
            render_list(&padded(by, len))
        );
    }
    check!(
        "coxeter characteristic polynomial".into(),
        rx.coxeter_charpoly.render(&Integers),
        ry.coxeter_charpoly.render(&Integers)
    );
    check!(
        "invariant factors over Q".into(),
        format!("[{}]", rx.q_factors_text().join(", ")),
        format!("[{}]", ry.q_factors_text().join(", "))
    );
    for &p in primes {
        check!(
            format!("invariant factors over F{p}"),
            format!("[{}]", rx.p_factors_text(p).unwrap().join(", ")),
            format!("[{}]", ry.p_factors_text(p).unwrap().join(", "))
        );
    }
    Ok(Verdict::NotDistinguished { checked })
}

/// Whether two Coxeter matrices are similar over the given field.
pub fn coxeter_similar<F: Field>(field: &F, x: &Poset, y: &Poset) -> Result<bool, LinalgError> {
    crate::linalg::similar(field, &reduce(field, &coxeter_matrix(x)), &reduce(field, &coxeter_matrix(y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primes_up_to;
    use crate::fixtures::{antichain, apr_r, chain, crown4, diamond, fig1_left, point, v3};
    use crate::linalg::determinant_integer;
    use crate::poset::random_poset;
    use num_rational::Ratio;
    use num_traits::{One, Signed};
    use proptest::prelude::*;

    fn zm(rows: Vec<Vec<i64>>) -> Matrix<BigInt> {
        Matrix::from_rows(rows).map(|&v| BigInt::from(v))
    }

    #[test]
    fn incidence_examples() {
        assert!(incidence_matrix(&antichain(3)).is_identity_in(&Integers));
        assert_eq!(
            incidence_matrix(&chain(3)),
            zm(vec![vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]])
        );
        assert_eq!(
            incidence_matrix(&v3()),
            zm(vec![vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 1]])
        );
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(
            mobius_matrix(&chain(3)),
            zm(vec![vec![1, -1, 0], vec![0, 1, -1], vec![0, 0, 1]])
        );
        assert!(mobius_matrix(&antichain(3)).is_identity_in(&Integers));
        let d = diamond();
        let mu = mobius_by_index(&d);
        let (t, b) = (d.index_of("t").unwrap(), d.index_of("b").unwrap());
        assert_eq!(mu[(t, b)], BigInt::one());
    }

    #[test]
    fn coxeter_examples() {
        assert_eq!(coxeter_matrix(&chain(2)), zm(vec![vec![0, 1], vec![-1, 1]]));
        assert!(coxeter_matrix(&antichain(3)).is_identity_in(&Integers));
    }

    #[test]
    fn euler_char_examples() {
        assert_eq!(euler_char_mobius(&point()), 1);
        assert_eq!(euler_char_mobius(&crown4()), 0);
        assert_eq!(euler_char_mobius(&antichain(5)), 5);
    }

    #[test]
    fn report_examples() {
        let primes = primes_up_to(13);
        let fields = default_fields(&primes);
        let r = invariant_report(&point(), &primes, &fields).unwrap();
        assert_eq!((r.n, r.euler_char), (1, 1));
        assert!(r.betti.values().all(|b| b == &vec![1]));
        let a = invariant_report(&diamond(), &primes, &fields).unwrap();
        let b = invariant_report(&apr_r(), &primes, &fields).unwrap();
        assert_eq!(a, b);
        let f = invariant_report(&fig1_left(), &[], &[FieldTag::Rational]).unwrap();
        assert_eq!((f.n, f.component_count), (12, 1));
        assert!(matches!(invariant_report(&point(), &[4], &[]), Err(LinalgError::NotPrime(4))));
    }

    #[test]
    fn distinguish_examples() {
        let primes = primes_up_to(50);
        assert!(!distinguish(&v3(), &v3(), &primes).unwrap().is_distinguished());
        assert_eq!(
            distinguish(&chain(2), &antichain(2), &primes).unwrap(),
            Verdict::Distinguished {
                invariant: "component count".into(),
                left: "1".into(),
                right: "2".into()
            }
        );
        assert!(matches!(distinguish(&v3(), &v3(), &[6]), Err(LinalgError::NotPrime(6))));
    }

    fn arb_poset(max: usize) -> impl Strategy<Value = Poset> {
        (1..=max, 0u64..=4, any::<u64>()).prop_map(|(n, p, s)| random_poset(n, Ratio::new(p, 4), s).unwrap())
    }

    proptest! {
        #[test]
        fn mobius_inverts_incidence(x in arb_poset(9)) {
            let prod = mobius_matrix(&x).mul(&Integers, &incidence_matrix(&x));
            prop_assert!(prod.is_identity_in(&Integers));
            prop_assert!(determinant_integer(&coxeter_matrix(&x)).abs().is_one());
        }

        #[test]
        fn mobius_inversion_formula(x in arb_poset(8), f in prop::collection::vec(-20i64..20, 8)) {
            let n = x.len();
            let mu = mobius_by_index(&x);
            let g: Vec<i64> = (0..n).map(|a| (0..n).filter(|&b| x.leq(a, b)).map(|b| f[b]).sum()).collect();
            for a in 0..n {
                let back: BigInt = (0..n).filter(|&b| x.leq(a, b)).map(|b| &mu[(a, b)] * g[b]).sum();
                prop_assert_eq!(back, BigInt::from(f[a]));
            }
        }

        #[test]
        fn disjoint_union_merges_component_sizes(x in arb_poset(5), y in arb_poset(5)) {
            let y = y.with_labels((0..y.len()).map(|i| format!("y{i}")).collect()).unwrap();
            let u = x.disjoint_union(&y).unwrap();
            let r = |p: &Poset| invariant_report(p, &[], &[]).unwrap().component_sizes;
            let mut merged = r(&x);
            merged.extend(r(&y));
            merged.sort_unstable();
            prop_assert_eq!(r(&u), merged);
        }
    }
}
