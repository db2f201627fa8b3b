//! Fixed-point data of circle actions on compact oriented manifolds.
//!
//! A circle action with isolated fixed points is summarized by, for each
//! fixed point, a sign and a multiset of positive integer weights. This
//! crate represents that data exactly and provides:
//!
//! * [`series`]: the signature identity as exact truncated series and as an
//!   exact rational function in one indeterminate,
//! * [`constraints`]: necessary conditions every realizable data satisfies,
//! * [`multigraph`]: signed labeled multigraphs describing the data and the
//!   five special shapes that occur in dimension six with four fixed points,
//! * [`classify`]: decision procedures for two fixed points, dimension four,
//!   and dimension six with four fixed points,
//! * [`rewrite`]: the operations that reduce six-dimensional data to the
//!   empty collection, with replayable traces,
//! * [`generators`]: the standard examples (rotations of spheres, linear
//!   actions on projective spaces, a blown-up sphere),
//! * [`oracle`]: exhaustive enumeration of small data for cross-checking
//!   the classifier.

pub mod classify;
pub mod constraints;
pub mod data;
pub mod error;
pub mod generators;
pub mod io;
pub mod multigraph;
pub mod oracle;
pub mod rewrite;
pub mod series;

pub use classify::{Classification, Verdict};
pub use constraints::{CheckKind, CheckReport, CheckVerdict, SuiteReport};
pub use data::{FixedPointData, FixedPointDatum, Sign, SignedDatumClass};
pub use error::{Error, Result};
pub use multigraph::{Figure1Case, Figure1Tag, LabeledMultigraph};
pub use rewrite::{Collection, RewriteMove, RewriteTrace};
pub use series::{RationalPolynomial, SignatureVerdict, TruncatedSeries};
