//! Exact computation and rigorous certification of the Stokes constants of
//! the nonlinear ODE `2v'' - t + 1/v^2 = 0` at its rank-one irregular
//! singularity.
//!
//! The crate is organized around one pipeline:
//!
//! * [`recurrence`] builds the coefficient sequences `c_n`, `d_n`,
//!   `b_n = c_n / d_n` and the increment decomposition `Q_n = Q_n^+ - Q_n^-`
//!   in exact rational arithmetic.
//! * [`certifier`] machine-checks the inequality chains that bound `|Q_n|`
//!   and sandwich `b_n`, and turns them into a rigorous enclosure of the
//!   limit `b = lim b_n`.
//! * [`numerics`] supplies exact rationals, outward-rounded interval
//!   arithmetic, and enclosures of the transcendental constants
//!   (pi, Gamma values, rational powers) with explicit truncation remainders.
//! * [`stokes`] assembles the complex enclosures of the Stokes constants
//!   `S_1 = i b K` and `S_2 = i e^{i pi/14} b K` where
//!   `K = pi^{3/2} 2^{13/14} / (Gamma(1/7) Gamma(3/7))`, and runs the
//!   large-order consistency estimator.
//! * [`oracle`] cross-validates the recurrence engine against independent
//!   truncated-series solutions of the original equation, its normalized
//!   form, and the diagonalized system, plus the Borel coefficient maps.
//!
//! Everything upstream of the final decimal rendering is exact: rational
//! arithmetic never rounds, and interval endpoints are exact rationals that
//! are only ever widened outward.

pub mod certifier;
pub mod numerics;
pub mod oracle;
pub mod recurrence;
pub mod stokes;

pub use numerics::{RatInterval, Rational};
pub use recurrence::CoefficientTable;
