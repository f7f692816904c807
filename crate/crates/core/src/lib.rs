//! Numerical laboratory for smooth linear statistics of Riemann zeta zeros.
//!
//! The statistic N_f(τ) = Σ_j f((log T / 2π)(γ_j − τ)) is evaluated three
//! ways: directly over zero ordinates, through the explicit formula (a mean
//! term plus an oscillatory prime sum), and in the CUE random-matrix model.
//! The analytic routines are generic over [`Real`]; the aliases below fix
//! the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod explicit;
pub mod primes;
pub mod quad;
pub mod reduce;
pub mod rmt;
pub mod scalar;
pub mod special;
pub mod stats;
pub mod testfunc;
pub mod zeros;

pub use error::{Error, Result};
pub use scalar::Real;
pub use testfunc::Family;

pub type TestFunction = testfunc::TestFunction<f64>;
pub type TestFunction32 = testfunc::TestFunction<f32>;
pub type PrimePowerTable = primes::PrimePowerTable<f64>;
pub use zeros::{ZeroSet, ZeroSource};
