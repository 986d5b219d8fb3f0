//! Derived-equivalence invariants of finite posets.
//!
//! The crate computes exact invariants of the bounded derived category of
//! sheaves on a finite poset (Möbius function, Coxeter similarity classes over
//! Q and every F_p, Betti numbers, Ext and Hochschild dimensions), and builds
//! posets known to be derived equivalent (lexicographic sums and their flips).
//!
//! ```
//! use poset_derived::fixtures::{diamond, apr_r};
//! use poset_derived::invariants::distinguish;
//!
//! let verdict = distinguish(&diamond(), &apr_r(), &[2, 3, 5]).unwrap();
//! assert!(!verdict.is_distinguished());
//! assert!(diamond().is_isomorphic(&apr_r()).is_none());
//! ```
//!
//! ```
//! use poset_derived::fixtures::{fig1_left, fig1_right};
//! use poset_derived::invariants::{distinguish, Verdict};
//!
//! let v = distinguish(&fig1_left(), &fig1_right(), &[2, 3, 5, 7, 11]).unwrap();
//! assert!(matches!(v, Verdict::Distinguished { invariant, .. } if invariant == "invariant factors over F11"));
//! ```

pub mod cli;
pub mod constructions;
pub mod field;
pub mod fixtures;
pub mod homology;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod poset;
pub mod sheaves;

pub use field::{Field, FieldTag, Integers, PrimeField, Rationals, Ring};
pub use matrix::Matrix;
pub use par::Execution;
pub use poset::{HasseDiagram, Poset, PosetError, PosetSpec};
