//! Fixed-step RK4 propagation.
//!
//! The dissipative part is integrated in the frame co-rotating with
//! `ω n̂`; the rotation `ρ_ij → e^{−iω(i−j)t} ρ_ij` is applied exactly on
//! output. Both parts commute, so this is the same flow as integrating the
//! full generator, without the `ω·dt` stability limit.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::{check_state, DensityMatrix, TRACE_TOL};
use super::generator::Generator;
#[cfg(doc)]
use super::generator::GeneratorSpec;
use crate::error::{Error, Result};
use crate::reservoirs::Statistics;

/// Largest admissible `dt·(γ_e + γ_c)`.
pub const MAX_STEP_RATE_PRODUCT: f64 = 1e-2;
/// Largest admissible `dt` times [`GeneratorSpec::stiffness_bound`]. The
/// dissipator's spectrum is real, and RK4 is stable on `[−2.78, 0]`.
pub const MAX_STEP_STIFFNESS_PRODUCT: f64 = 2.0;
/// Trace drift above which the output is renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-12;
/// Largest allowed population in the two highest Fock levels.
pub const TRUNCATION_TOL: f64 = 1e-8;

fn check_step(gen: &Generator, dt: f64) -> Result<()> {
    let gamma = gen.spec().total_rate();
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Configuration(format!(
            "step must be positive, got {dt}"
        )));
    }
    if dt * gamma > MAX_STEP_RATE_PRODUCT * (1.0 + 1e-12) {
        return Err(Error::Configuration(format!(
            "dt·(γ_e+γ_c) = {:.3e} exceeds {MAX_STEP_RATE_PRODUCT}",
            dt * gamma
        )));
    }
    let stiff = gen.spec().stiffness_bound();
    if dt * stiff > MAX_STEP_STIFFNESS_PRODUCT {
        return Err(Error::Configuration(format!(
            "dt = {dt:.3e} exceeds the stable step {:.3e} for this truncation (rate bound {stiff:.3e}/s)",
            MAX_STEP_STIFFNESS_PRODUCT / stiff
        )));
    }
    Ok(())
}

/// Largest step [`propagate`] accepts for this generator.
pub fn max_stable_step(gen: &Generator) -> f64 {
    let spec = gen.spec();
    (MAX_STEP_RATE_PRODUCT / spec.total_rate())
        .min(MAX_STEP_STIFFNESS_PRODUCT / spec.stiffness_bound())
}

fn rk4_step(gen: &Generator, x: &DMatrix<Complex64>, h: f64) -> Result<DMatrix<Complex64>> {
    let k1 = gen.apply_dissipative(x)?;
    let k2 = gen.apply_dissipative(&(x + &k1 * Complex64::new(h / 2.0, 0.0)))?;
    let k3 = gen.apply_dissipative(&(x + &k2 * Complex64::new(h / 2.0, 0.0)))?;
    let k4 = gen.apply_dissipative(&(x + &k3 * Complex64::new(h, 0.0)))?;
    Ok(x + (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0))
}

/// Steps `x` forward by `span` with step `dt`, shortening the last step.
fn advance(gen: &Generator, x: &mut DMatrix<Complex64>, span: f64, dt: f64) -> Result<()> {
    if span <= 0.0 {
        return Ok(());
    }
    let full = (span / dt).floor() as usize;
    for _ in 0..full {
        *x = rk4_step(gen, x, dt)?;
    }
    let rest = span - full as f64 * dt;
    // a remainder below rounding level of the span is not a step
    if rest > span * 1e-14 {
        *x = rk4_step(gen, x, rest)?;
    }
    Ok(())
}

fn rotate(gen: &Generator, x: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let w = gen.spec().omega;
    let mut out = x.clone();
    for i in 0..out.nrows() {
        for j in 0..out.ncols() {
            if i != j {
                let phase = -w * (i as f64 - j as f64) * t;
                out[(i, j)] *= Complex64::from_polar(1.0, phase);
            }
        }
    }
    out
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(Error::Configuration(
            "times must be finite and non-negative".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Configuration("times must be non-decreasing".into()));
    }
    Ok(())
}

/// Evolves an arbitrary matrix (not necessarily a state) and returns it at
/// each requested time. No renormalization or state checks.
pub fn evolve_matrix(
    gen: &Generator,
    x0: &DMatrix<Complex64>,
    times: &[f64],
    dt: f64,
) -> Result<Vec<DMatrix<Complex64>>> {
    check_step(gen, dt)?;
    check_times(times)?;
    if x0.nrows() != gen.dim() || x0.ncols() != gen.dim() {
        return Err(Error::Structural(format!(
            "initial matrix is {}x{}, generator acts on dimension {}",
            x0.nrows(),
            x0.ncols(),
            gen.dim()
        )));
    }
    let mut x = x0.clone();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        advance(gen, &mut x, t - now, dt)?;
        now = t;
        out.push(rotate(gen, &x, t));
    }
    Ok(out)
}

/// Population held by the two highest Fock levels.
pub fn truncation_weight(rho: &DensityMatrix) -> f64 {
    let p = rho.populations();
    p.iter().rev().take(2).sum()
}

fn finish_state(gen: &Generator, mut m: DMatrix<Complex64>) -> Result<DensityMatrix> {
    let tr = m.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > RENORMALIZE_TOL {
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e3 * TRACE_TOL || tr.re <= 0.0 {
            return Err(Error::NumericalInstability(format!(
                "trace drifted to {tr} during propagation"
            )));
        }
        m /= tr;
    }
    check_state(&m).map_err(|e| Error::NumericalInstability(e.to_string()))?;
    let rho = DensityMatrix::from_matrix_unchecked(m);
    if gen.spec().statistics == Statistics::Bosonic {
        let w = truncation_weight(&rho);
        if w >= TRUNCATION_TOL {
            return Err(Error::Truncation(format!(
                "top two Fock levels hold {w:.3e} ≥ {TRUNCATION_TOL:e}; raise n_max above {}",
                gen.spec().n_max
            )));
        }
    }
    Ok(rho)
}

/// Density matrices at each of `times` (non-decreasing, ≥ 0), starting from `rho0` at t = 0.
pub fn propagate_samples(
    gen: &Generator,
    rho0: &DensityMatrix,
    times: &[f64],
    dt: f64,
) -> Result<Vec<DensityMatrix>> {
    if rho0.dim() != gen.dim() {
        return Err(Error::Structural(format!(
            "state has dimension {}, generator {}",
            rho0.dim(),
            gen.dim()
        )));
    }
    evolve_matrix(gen, rho0.matrix(), times, dt)?
        .into_iter()
        .map(|m| finish_state(gen, m))
        .collect()
}

/// The state at `t_final`.
pub fn propagate(
    gen: &Generator,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if !(t_final >= 0.0) {
        return Err(Error::Configuration(format!(
            "final time must be non-negative, got {t_final}"
        )));
    }
    check_step(gen, dt)?;
    if t_final == 0.0 {
        if rho0.dim() != gen.dim() {
            return Err(Error::Structural(
                "state dimension does not match generator".into(),
            ));
        }
        return Ok(rho0.clone());
    }
    Ok(propagate_samples(gen, rho0, &[t_final], dt)?.remove(0))
}
