//! Structure-preserving integration of the linear matrix ODE `Q' = S Q`
//! with a skew-symmetric coefficient `S`.
//!
//! For skew `S` the exact flow keeps `Q^T Q`, `trace(Q^T Q)` and `det Q`
//! fixed. Runge-Kutta tableaux with `B A + A^T B - b b^T = 0` keep the Gram
//! matrix exactly at the discrete level too; explicit methods do not. The
//! crate provides:
//!
//! - [`linalg`]: dense matrices, the hat map, skew validation, `exp(tS)`.
//! - [`tableau`]: Butcher tableaux, the built-in catalogue, the
//!   symplecticity check and a small text format.
//! - [`integrate`]: Runge-Kutta, Cayley and closed-form steps, transfer
//!   matrices and fixed-step propagation.
//! - [`diagnostics`]: energy, orthogonality, determinant and two-form
//!   meters, plus convergence-order estimation.
//! - [`navkit`]: gyro logs and zero-order-hold attitude propagation.

// `!(x <= tol)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod integrate;
pub mod linalg;
pub mod navkit;
pub mod tableau;

pub use diagnostics::{StepRecord, Trajectory};
pub use error::{Error, Result};
pub use integrate::{IntegratorConfig, Method, StageSolver, TransferMatrix};
pub use linalg::{AngularRate, OrthogonalState, SkewMatrix, SquareMatrix};
pub use navkit::{GyroLog, GyroSample};
pub use tableau::{ButcherTableau, SymplecticityReport};
