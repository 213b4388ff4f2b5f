//! Exact p-adic arithmetic, uniformly differentiable functions on Z_p and
//! the fermionic p-adic invariant integral with its induced measures on
//! cylinder sets `a + p^n Z_p`.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: scalars of Q_p at a fixed working precision.
//! * [`udfunc`]: polynomials, Mahler series and locally constant functions.
//! * [`fermionic`]: the integral `I_{-1}`, Euler numbers, measures
//!   `mu_{f,-1}` and the checks that verify their Radon–Nikodym and
//!   decomposition properties at finite level.
//! * [`exec`]: sequential / rayon execution of the inner sums.

pub mod error;
pub mod exec;
pub mod fermionic;
pub mod padic;
pub mod udfunc;

pub use error::{Error, Result};
pub use exec::Execution;
pub use padic::{
    arithmetic, congruent, make_scalar, make_scalar_strict, padic_norm, ArithOp, PAdicContext,
    PAdicScalar, DEFAULT_PRECISION,
};
pub use udfunc::{MahlerFunction, Polynomial, StepFunction, UDFunction};
pub use fermionic::{
    additivity_check, congruence_check, decompose, euler_number, fermionic_sum, integrate,
    
    integrate_against, measure_combine, measure_value, rn_derivative, strong_delta,
    verify_theorem1, CheckReport, Cylinder, FermionicMeasure, MeasureTable, Status,
};
