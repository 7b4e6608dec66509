//! Two-reservoir master equations: generators, RK4 propagation and steady states.

mod density;
mod generator;
mod integrate;
mod steady;

pub use density::{occupation, DensityMatrix, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL};
pub use generator::{
    generator_apply, Generator, GeneratorSpec, Variant, DEFAULT_BOSON_N_MAX, MIN_BOSON_N_MAX,
};
pub use integrate::{
    evolve_matrix, max_stable_step, propagate, propagate_samples, truncation_weight,
    MAX_STEP_RATE_PRODUCT, MAX_STEP_STIFFNESS_PRODUCT, RENORMALIZE_TOL, TRUNCATION_TOL,
};
pub use steady::{
    stationarity_residual, steady_state, steady_state_with, variant_discrepancy,
    SteadyStateOptions, VariantDiscrepancy, STATIONARITY_TOL,
};
