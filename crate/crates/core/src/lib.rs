//! Generalized Lomnitz creep law built on logarithmic-kernel fractional
//! operators.
//!
//! * [`special_functions`]: Gamma and Mittag-Leffler functions.
//! * [`hadamard_operators`]: `Î_α` and `Ô_ν` with kernel `ln((a+bt)/(a+bτ))`.
//! * [`creep`]: closed-form creep function, rate, strain and compliance.
//! * [`relaxation_solver`]: product-integration solver for the relaxation
//!   function and an independent reference solver.
//! * [`transform_checks`]: forward Laplace-domain consistency checks.
//! * [`csv`]: the curve format written by the `lomnitz` binary.

pub mod cli;
pub mod creep;
pub mod csv;
pub mod error;
pub mod hadamard_operators;
pub mod quadrature;
pub mod relaxation_solver;
pub mod special_functions;
pub mod transform_checks;

pub use creep::{MaterialParameters, Regime};
pub use error::{Error, Result};
pub use hadamard_operators::{DifferentiableInput, OperatorConfig};
pub use relaxation_solver::{SampledFunction, SolverReport, UniformGrid};
