//! Property checks and numeric certificates for functions on convex cones.
//!
//! A [`FunctionHandle`] pairs a rule with its domain, a [`ConeSpec`].
//! [`check::check`] samples the domain and tests a [`PropertyLabel`] such as
//! strong subadditivity, returning a report with the tightest margin seen
//! or a reproducible witness. [`certify`] tests sufficient conditions
//! instead, and [`catalog`] holds the named functions used throughout.
//!
//! ```
//! use conecheck::check::{check, CheckConfig, Verdict};
//! use conecheck::{lookup, PropertyLabel};
//!
//! let f = lookup("log1p")?.default_instance()?;
//! let r = check(&f.handle, &PropertyLabel::StrongSubadd, &CheckConfig::default().with_trials(200))?;
//! assert_eq!(r.verdict, Verdict::NoViolationFound);
//! # Ok::<(), conecheck::Error>(())
//! ```
//!
//! The guide in `book/` walks through each part; its snippets run as
//! doc-tests of this crate.

pub mod error;
pub mod linalg;
pub mod point;
pub mod rng;

pub use error::{Error, Result};
pub use point::{Point, PointKind};
pub use rng::{Sampler, SeedStream};
pub mod cone;
pub mod diff;
pub mod catalog;
pub mod check;
pub mod certify;
pub mod suite;
pub mod tol;

pub use catalog::{lookup, instantiate, Instance, PropertyLabel, Params};
pub use cone::ConeSpec;
pub use diff::FunctionHandle;
pub use tol::Tolerance;

// Book chapters compile and run as doc-tests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cones.md")]
mod book_cones {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/differences.md")]
mod book_differences {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/catalog.md")]
mod book_catalog {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/checking.md")]
mod book_checking {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/certificates.md")]
mod book_certificates {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/reproducibility.md")]
mod book_reproducibility {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
