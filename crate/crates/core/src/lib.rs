//! Single fermionic (or bosonic) oscillator between an emitter and a
//! collector bath.
//!
//! * [`reservoirs`]: SI constants, thermal ratios, Fermi/Bose occupations.
//! * [`lindblad`]: master-equation generators, RK4 propagation, steady states.
//! * [`analytics`]: closed-form occupation and current.
//! * [`transport`]: quantum transport factors against the Carnot bound.
//! * [`spectrum`]: current operator, two-time correlations, power spectra.
//! * [`grassmann`]: exact Grassmann calculus and the P-representation checks.

// `!(x > 0.0)` guards are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod grassmann;
pub mod lindblad;
pub mod reservoirs;
pub mod spectrum;
pub mod transport;

pub use error::{Error, Result};
