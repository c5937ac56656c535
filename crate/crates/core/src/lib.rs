//! Exact statistics of the distance between two leaves in a uniformly random
//! fully resolved unrooted phylogenetic tree.
//!
//! The crate is organised in four layers:
//!
//! - [`exact`]: closed-form counts, cumulative distribution, median,
//!   percentiles and moments, all in exact big-integer / big-rational
//!   arithmetic, plus a log-space median solver for large `n`.
//! - [`asymptotic`]: double-precision limit formulas for the median and
//!   percentiles.
//! - [`series`] and [`certificate`]: independent verification machinery
//!   (generating-function coefficient extraction and the telescoping
//!   certificate behind the cumulative closed form).
//! - [`tree`]: concrete trees, exhaustive enumeration, uniform sampling and
//!   leaf distances, used as the brute-force oracle for everything above.
//!
//! [`verify`] bundles the cross-checks into a single report.

pub mod arith;
pub mod asymptotic;
pub mod certificate;
mod error;
pub mod exact;
pub mod series;
pub mod stats;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{BigCount, BigRatio, DistanceDistribution, SummaryStats};
