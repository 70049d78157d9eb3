//! Exact perturbative invariants `S_n(M)` of rational homology spheres.
//!
//! The invariants are the coefficients of `log` of the trivial-connection
//! contribution to the Witten–Reshetikhin–Turaev invariant, expanded in
//! `h = iπ/K`. They are computed here from surgery presentations on knots and
//! algebraically split links, entirely in exact rational arithmetic, and
//! cross-checked by independent routes:
//!
//! - [`numtheory`]: Dedekind sums, the Rademacher function, `SL(2,Z)`
//!   completions, exact signatures.
//! - [`series`]: truncated power series in `h` and the Gaussian-moment
//!   stationary-phase engine.
//! - [`jones`]: expansion grids of colored Jones polynomials, the shift,
//!   component removal and low-order data from Milnor/Alexander invariants.
//! - [`surgery`]: the surgery formula, lens spaces, connected sums, the
//!   Casson–Walker specialization and integrality checks.
//! - [`finitetype`]: alternating sums over sublinks and surgery shifts, and
//!   the trivalent diagram evaluation.
//! - [`rt`]: finite-level numerical Reshetikhin–Turaev sums.
//! - [`io`]: JSON schemas for grids, presentations and reports.
//!
//! Generic code is written against [`Scalar`]; the aliases below fix the
//! concrete types used by the exact layer.

pub mod error;
pub mod finitetype;
pub mod io;
pub mod jones;
pub mod numtheory;
pub mod rt;
pub mod scalar;
pub mod series;
pub mod surgery;

pub use error::{Error, Result};
pub use scalar::{RealScalar, Scalar};

/// Arbitrary-precision exact fraction.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// `a + bi` with exact rational parts.
pub type GaussianRational = num_complex::Complex<Rational>;
/// Truncated series in `h = iπ/K` with exact coefficients.
pub type KSeries = series::Series<Rational>;
/// Complex double used by the finite-level numerics.
pub type ComplexValue = num_complex::Complex64;

pub use finitetype::{Diagram, SublinkMask};
pub use jones::{JonesGrid, MilnorData, ShiftedJonesGrid, SlopeClass};
pub use numtheory::{FramingMatrix, SL2Matrix, SurgeryCoeff};
pub use rt::RTLevel;
pub use series::EvGrid;
pub use surgery::{Component, RHSInvariants, SurgeryPresentation};
