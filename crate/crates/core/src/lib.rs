//! Computation with higher-order velocities: truncated `r`-jets with source
//! at the origin of `R^n` and target in an `(n + m)`-dimensional manifold,
//! expressed in one chart.
//!
//! The crate covers
//!
//! - symmetric multi-index bookkeeping and the set-partition sums behind the
//!   higher-order chain rule ([`index`], [`table`]),
//! - the differential group `L^r_n` of invertible `r`-jets, its right action
//!   on velocities, truncation, prolongation of polynomial maps and the
//!   regularity test ([`jet`], [`poly`]),
//! - formal derivatives of polynomial functions of jet coordinates and the
//!   normalized operators `Δ_i` ([`formal`]),
//! - the complete system of scalar invariants of regular velocities, orbit
//!   equivalence and transporter recovery ([`invariants`]),
//! - target chart changes lifted to velocities and to invariant coordinates
//!   ([`charts`]).
//!
//! Everything is generic over [`Scalar`]; [`Rational`] gives exact
//! arithmetic, `f64` gives tolerance-based floating point.
//!
//! Indices are 0-based in the API. Documents and display strings use the
//! 1-based convention of the literature.

#![no_std]

extern crate alloc;

pub mod charts;
pub mod error;
pub mod formal;
pub mod index;
pub mod invariants;
pub mod jet;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod table;

pub use charts::{pq_matrices, transform_grassmann, transform_velocity, ChartJet, PqPair};
pub use error::{JetError, Result};
pub use formal::{d_formal, delta_apply, delta_components, JetPolynomial, JetVariable};
pub use index::{
    enumerate_multiindices, grassmann_dim, set_partitions, Layout, MultiIndex, SetPartition,
};
pub use invariants::{
    extract, extract_normalize, extract_recurrence, nonextendability_demo, orbit_equal,
    solve_transporter, GrassmannPoint, OrbitVerdict,
};
pub use jet::{is_regular, GroupJet, RegularityCertificate, Velocity};
pub use poly::{prolong, PolyMap, Polynomial};
pub use scalar::{Rational, Scalar, Tolerance};
pub use table::JetTable;
