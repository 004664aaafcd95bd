//! Exact q-character engine for generalized quantum groups of affine type
//! `A(M|N)` with `M != N`.
//!
//! The crate computes q-characters of simple modules by the monomial
//! expansion algorithm driven by rank-1 restrictions, together with the
//! supporting exact machinery:
//!
//! - [`ring`]: integer Laurent polynomials, the signed-Laurent ring
//!   `Z[x^{±1}][σ]/(σ²-1)` for `r`-symbolic expressions, and exact
//!   fraction pairs.
//! - [`cartan`]: the `(q,qt)`-deformed Cartan matrix, its specialization
//!   at `qt = -q^{-1}`, determinants and closed-form inverse tables.
//! - [`lweights`]: the ell-weight monomial ring in canonical form,
//!   spectral-parameter lattice arithmetic, weights and parsing.
//! - [`rank1`]: string decompositions and rank-1 simple characters for the
//!   even/odd `sl2` nodes and for the `(01)` node.
//! - [`restriction`]: the naive (`beta_J`) and refined (`tau_J`)
//!   restriction homomorphisms to interval subdiagrams.
//! - [`fm`]: the colored-monomial worklist engine and its DOT/JSON output.
//! - [`fixtures`]: embedded golden data used by the verification suite.
//!
//! ```
//! use qsc::{EpsilonSeq, Limits};
//! use qsc::lweights::parse::parse_monomial;
//!
//! let eps = EpsilonSeq::standard(3, 2)?;
//! let hw = parse_monomial(&eps, "Y[1,q^0]")?;
//! let result = qsc::fm::run(&eps, &hw, Limits::default())?;
//! assert!(result.is_success());
//! assert_eq!(result.qchar.dimension(), 5);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cartan;
pub mod cli;
pub mod fixtures;
pub mod fm;
pub mod lweights;
pub mod rank1;
pub mod restriction;
pub mod ring;

pub use cartan::EpsilonSeq;
pub use fm::{run, FMResult, FMStatus, Limits};
pub use lweights::{Monomial, QChar, Spec};
