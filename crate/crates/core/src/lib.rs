//! Root systems of Coxeter data with a possibly asymmetric pairing.
//!
//! A datum pairs simple roots `alpha_s` in one space with `beta_s` in another
//! through `C[s][t] = <alpha_s, beta_t>`. The crate validates such data,
//! enumerates root pairs, computes lengths and inversion sets, and finds the
//! canonical simple roots of reflection subgroups.
//!
//! ```
//! use paired_roots::catalog;
//! use paired_roots::group::enumerate_group;
//! use paired_roots::roots::{decomposition_check, generate_roots, Side};
//!
//! let b3 = catalog::standard("B3").unwrap();
//! assert_eq!(generate_roots(&b3, 50, 10_000).positives(Side::One).len(), 9);
//! assert_eq!(enumerate_group(&b3, usize::MAX, 10_000).unwrap().len(), 48);
//! assert!(decomposition_check(&b3, 12, 10_000).holds());
//! ```
//!
//! Module map:
//!
//! - [`datum`]: pairing matrices, conditions, bond orders, JSON files
//! - [`dihedral`]: the rank-two recurrence and matrices
//! - [`roots`]: root pairs, signs, breadth-first enumeration
//! - [`group`]: elements, lengths, inversion sets, enumeration
//! - [`subgroup`]: reflection subgroups and canonical generators
//! - [`cli`]: the `paired-roots` command

// `!(x > 0.0)` is deliberate: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod cone;
pub mod datum;
pub mod dihedral;
pub mod error;
pub mod group;
pub mod linalg;
pub mod roots;
pub mod subgroup;

pub use datum::{validate, CoxeterDatum, CoxeterMatrix, Order};
pub use error::{Error, Result};
pub use group::Element;
pub use roots::{generate_roots, RootPair, Side, SignedRootSet};
pub use subgroup::{subgroup_from_reflections, ReflectionSubgroup};

// The guide's code blocks run as doc-tests so they cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/datum.md")]
    mod datum {}
    #[doc = include_str!("../../../book/src/dihedral.md")]
    mod dihedral {}
    #[doc = include_str!("../../../book/src/roots.md")]
    mod roots {}
    #[doc = include_str!("../../../book/src/group.md")]
    mod group {}
    #[doc = include_str!("../../../book/src/subgroups.md")]
    mod subgroups {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
