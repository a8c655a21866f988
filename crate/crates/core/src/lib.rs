//! Numerical toolkit for anisotropic Hardy-type inequalities.
//!
//! The crate models a convex gauge `H` (a possibly non-symmetric-free, even,
//! positively 1-homogeneous norm on `R^N`) together with its polar `H0`, and
//! provides the machinery needed to evaluate and verify the family of
//! Hardy-type integral inequalities attached to the pair `(H, H0)`:
//!
//! * [`gauge`] - gauge families (Euclidean, weighted l^q, ellipsoidal,
//!   user-supplied), polar duality, and the differential identities that tie
//!   a gauge to its polar;
//! * [`quadrature`] - radial and angular rules, including graded and
//!   log-substituted rules for endpoint-singular integrands;
//! * [`wulff`] - volume and integration over the sublevel sets of `H0`
//!   (the Wulff shapes) via polar substitution;
//! * [`fields`] / [`corpus`] - scalar test fields, radial profiles, radial
//!   symmetrization and pointwise radial bounds, plus a named corpus of
//!   reusable test fields;
//! * [`hardy`] - the inequality evaluators (subcritical, critical, weighted,
//!   geometric, uncertainty-type) with their sharp constants;
//! * [`sharpness`] - near-extremal probe families and sweeps that approach
//!   the sharp constants;
//! * [`distance`] - anisotropic distance to the boundary for model domains,
//!   the eikonal property, and distributional sign checks for the associated
//!   p-Laplacian;
//! * [`transform`] - the scaling maps, the radial change-of-variables
//!   Jacobian, and the subcritical/critical bridge identity;
//! * [`report`] - structured check results shared by the library and the
//!   command-line driver.

pub mod corpus;
pub mod distance;
pub mod error;
pub mod fields;
pub mod gauge;
pub mod hardy;
pub mod linalg;
pub mod quadrature;
pub mod report;
pub mod sharpness;
pub mod transform;
pub mod wulff;

pub use error::Error;
pub use fields::{RadialProfile, ScalarField, Support};
pub use gauge::{Gauge, PolarGauge};
pub use report::{CheckRow, ExperimentReport, Provenance};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
