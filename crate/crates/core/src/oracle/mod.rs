//! Independent brute-force oracles, seeded instance generation and the
//! bracket-test harness.

mod bracket;
mod generate;
mod oracles;

pub use bracket::{
    bracket_test, bracket_test_with_mode, hilbert_specialization_test, ActualBounds, NamedVerdict,
    SpecializationCheck, Timings, VerificationReport,
};
pub use generate::{random_instance, random_instance_with, GenMode, GenOptions, Instance, ParamCaps};
pub use oracles::{actual_bounds_oracle, best_gamma_oracle, best_t_oracle, OracleMax};
