//! The fermionic p-adic invariant integral and the measures it induces.

mod checks;
mod integral;
mod measure;
mod report;

pub use checks::{
    additivity_check, congruence_check, decompose, integrate_against, integrate_against_with,
    rn_derivative, strong_delta, strong_delta_with, verify_theorem1, Decomposition,
    DerivativeEstimator, DEFAULT_SLACK,
};
pub use integral::{
    euler_number, fermionic_sum, fermionic_sum_with, integrate, mahler_basis_integral, EulerTable,
    DEFAULT_BUDGET,
};
pub use measure::{measure_combine, measure_value, Cylinder, FermionicMeasure, MeasureTable};
pub use report::{CheckReport, Status, Witness};
