//! Grassmann calculus for one fermionic mode: polynomials over anticommuting
//! generators, operators with Grassmann coefficients, coherent states and the
//! phase-space equation for the P-distribution.

mod coherent;
mod fokker_planck;
mod operator;
mod poly;
mod report;

pub use coherent::{
    algebra_checks, coherent_identity_suite, CoherentFrame, IdentityCheck, IdentityReport,
};
pub use fokker_planck::*;
pub use operator::GOp;
pub use poly::{
    berezin_integrate, exact_from_f64, fmt_exact, g_derivative_left, g_mul, grassmann_delta,
    Coefficient, Exact, GrassmannPoly, Universe, D2XI, MAX_GENERATORS, XI, XI_STAR,
};
pub use report::{ReportLine, Status};
