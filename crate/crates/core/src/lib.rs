//! Minimum-error discrimination of quantum states.
//!
//! Given an ensemble `{(q_i, rho_i)}` of `r >= 2` states with prior probabilities,
//! this crate evaluates lower and upper bounds on the optimal success probability,
//! builds the measurements that attain the lower bounds, and checks the Holevo
//! optimality conditions for a candidate measurement.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command-line
//! front end and random sweeps live in the `qsd` companion crate.
//!
//! ```
//! use qsd_core::{bounds, Ensemble, HermitianOperator};
//!
//! let diag = |a: f64, b: f64| HermitianOperator::from_real_diagonal(&[a, b]);
//! let ensemble = Ensemble::from_states(
//!     &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
//!     &[diag(7.0 / 8.0, 1.0 / 8.0), diag(5.0 / 8.0, 3.0 / 8.0), diag(0.75, 0.25)],
//! )
//! .unwrap();
//! let report = bounds::bounds_report(&ensemble).unwrap();
//! assert!((report.lower.l1_new - 19.0 / 48.0).abs() < 1e-12);
//! assert!((report.upper.q_new - 4.0 / 9.0).abs() < 1e-12);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod ensemble;
mod error;
pub mod operator;
pub mod optimality;
pub mod povm;
pub mod random;
pub mod tolerance;

pub use bounds::{BoundsReport, PairwiseTable};
pub use ensemble::{DensityMatrix, Ensemble};
pub use error::{Error, Result};
pub use operator::{CMatrix, HermitianOperator, JordanParts, SpectralDecomposition};
pub use optimality::{Assessment, Certificate};
pub use povm::Povm;

pub use num_complex::Complex64;
