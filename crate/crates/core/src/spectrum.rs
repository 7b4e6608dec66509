//! Current operator, two-time current correlations and the current power
//! spectrum.
//!
//! The spectrum is split into a DC weight `I_s²` (the coefficient of
//! `2πδ(ω)`) and a continuous density sampled on a frequency grid. The delta
//! is never put on the grid.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analytics::{
    current_at_occupation, current_constants, steady_occupation, TransportParams,
};
use crate::error::{Error, Result};
use crate::lindblad::{evolve_matrix, DensityMatrix, Generator};
use crate::reservoirs::Statistics;

/// `ι̂ = c_identity·𝟙 − c_number·n̂` on a `dim`-level space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentOperator {
    /// `½(γ_e n̄_e − γ_c n̄_c)`, s⁻¹.
    pub c_identity: f64,
    /// `½(γ_e − γ_c)`, s⁻¹.
    pub c_number: f64,
    pub dim: usize,
}

impl CurrentOperator {
    pub fn new(p: &TransportParams, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Structural(format!(
                "current operator needs dim ≥ 2, got {dim}"
            )));
        }
        Ok(Self {
            c_identity: 0.5 * (p.gamma_e * p.nbar_e - p.gamma_c * p.nbar_c),
            c_number: 0.5 * (p.gamma_e - p.gamma_c),
            dim,
        })
    }

    /// Diagonal element on `|k⟩`.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.c_identity - self.c_number * k as f64
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            if i == j {
                Complex64::new(self.eigenvalue(i), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// `Tr(ι̂ X)` for any matrix `X`.
    pub fn expectation(&self, x: &DMatrix<Complex64>) -> Complex64 {
        (0..self.dim).map(|k| x[(k, k)] * self.eigenvalue(k)).sum()
    }

    /// Largest deviation between `⟨ι̂⟩` on `|k⟩` and the bracket current at
    /// occupation `k`, over the basis states. Must be zero up to rounding.
    pub fn bracket_deviation(&self, p: &TransportParams) -> f64 {
        (0..self.dim)
            .map(|k| (self.eigenvalue(k) - current_at_occupation(p, k as f64)).abs())
            .fold(0.0, f64::max)
    }

    /// Errors with [`Error::Verification`] if the operator does not
    /// reproduce the bracket current on the number basis.
    pub fn verify(&self, p: &TransportParams) -> Result<()> {
        let scale = p.gamma_e.abs() + p.gamma_c.abs();
        let dev = self.bracket_deviation(p);
        if dev > 1e-14 * scale * self.dim as f64 {
            return Err(Error::Verification(format!(
                "current operator differs from the bracket current by {dev:e}"
            )));
        }
        Ok(())
    }
}

/// `I_0 − I_s`, written as `−½(γ_e − γ_c)(n0 − n̄_s)` so that it is exactly
/// zero whenever the rates match or the start is stationary.
pub fn current_excess(p: &TransportParams) -> f64 {
    -0.5 * (p.gamma_e - p.gamma_c) * (p.n0 - steady_occupation(p))
}

/// Closed-form two-time correlation
/// `I_s² + (I_0² − I_s²)e^{−β|τ|} + β(I_sI_0 − I_s²)|τ|e^{−β|τ|}`, `β = γ_e+γ_c`.
pub fn correlation_analytic(p: &TransportParams, tau: f64) -> f64 {
    let c = current_constants(p);
    let (is, i0) = (c.is, c.is + current_excess(p));
    let b = p.total_rate();
    let t = tau.abs();
    let e = (-b * t).exp();
    is * is + (i0 - is) * (i0 + is) * e + b * is * (i0 - is) * t * e
}

/// Regression form `I_0I_s + (⟨ι̂²⟩₀ − I_0I_s)e^{−β|τ|}` that
/// `Tr[ι̂ e^{ℒτ}(ι̂ρ0)]` obeys for a diagonal `ρ0` under the reference
/// generator. `second_moment` is `⟨ι̂²⟩₀`.
pub fn correlation_regression_closed_form(
    p: &TransportParams,
    second_moment: f64,
    tau: f64,
) -> f64 {
    let c = current_constants(p);
    let i0 = c.is + current_excess(p);
    let e = (-p.total_rate() * tau.abs()).exp();
    i0 * c.is + (second_moment - i0 * c.is) * e
}

/// `Tr[ι̂ · e^{ℒτ}(ι̂ρ0)]` at each `τ` of a non-decreasing grid, by
/// propagating the (generally non-Hermitian) matrix `ι̂ρ0`.
pub fn correlation_regression(
    gen: &Generator,
    current: &CurrentOperator,
    rho0: &DensityMatrix,
    taus: &[f64],
    dt: f64,
) -> Result<Vec<Complex64>> {
    if current.dim != gen.dim() || rho0.dim() != gen.dim() {
        return Err(Error::Structural(format!(
            "dimensions differ: generator {}, operator {}, state {}",
            gen.dim(),
            current.dim,
            rho0.dim()
        )));
    }
    let seed = current.matrix() * rho0.matrix();
    let evolved = evolve_matrix(gen, &seed, taus, dt)?;
    Ok(evolved.iter().map(|x| current.expectation(x)).collect())
}

/// Zero-lag comparison between `⟨ι̂²⟩₀` and `I_0² = ⟨ι̂⟩₀²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroLagReport {
    pub second_moment: f64,
    pub mean_squared: f64,
    /// `⟨ι̂²⟩₀ − ⟨ι̂⟩₀²`.
    pub gap: f64,
    /// `c_number²·(⟨n̂⟩₀ − ⟨n̂⟩₀²)`, the two-level prediction of the gap.
    pub predicted_gap: f64,
}

pub fn zero_lag_report(current: &CurrentOperator, rho0: &DensityMatrix) -> ZeroLagReport {
    let pops = rho0.populations();
    let mean: f64 = pops
        .iter()
        .enumerate()
        .map(|(k, p)| p * current.eigenvalue(k))
        .sum();
    let second: f64 = pops
        .iter()
        .enumerate()
        .map(|(k, p)| p * current.eigenvalue(k).powi(2))
        .sum();
    let n: f64 = pops.iter().enumerate().map(|(k, p)| p * k as f64).sum();
    let n2: f64 = pops
        .iter()
        .enumerate()
        .map(|(k, p)| p * (k * k) as f64)
        .sum();
    // variance of n̂ in general; n − n² on two levels where n̂² = n̂
    let var_n = if current.dim == 2 {
        n - n * n
    } else {
        n2 - n * n
    };
    ZeroLagReport {
        second_moment: second,
        mean_squared: mean * mean,
        gap: second - mean * mean,
        predicted_gap: current.c_number.powi(2) * var_n,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Coefficient of `2πδ(ω)`, equal to `I_s²`.
    pub dc_weight: f64,
    pub omegas: Vec<f64>,
    pub continuous: Vec<f64>,
}

/// Continuous part of the closed-form spectrum at one frequency.
pub fn spectrum_density(p: &TransportParams, omega: f64) -> f64 {
    let is = current_constants(p).is;
    let d = current_excess(p);
    let i0 = is + d;
    let b = p.total_rate();
    let l = b * b + omega * omega;
    2.0 * b * d / l * (i0 + is * 2.0 * b * b / l)
}

pub fn spectrum_analytic(p: &TransportParams, omegas: &[f64]) -> Result<SpectrumResult> {
    if omegas.iter().any(|w| !w.is_finite()) {
        return Err(Error::Domain("frequency grid must be finite".into()));
    }
    let is = current_constants(p).is;
    Ok(SpectrumResult {
        dc_weight: is * is,
        omegas: omegas.to_vec(),
        continuous: omegas.iter().map(|&w| spectrum_density(p, w)).collect(),
    })
}

/// Bosonic spectrum; same form with Bose occupations.
pub fn spectrum_bosonic(p: &TransportParams, omegas: &[f64]) -> Result<SpectrumResult> {
    if p.statistics != Statistics::Bosonic {
        return Err(Error::Domain(
            "bosonic spectrum needs bosonic parameters".into(),
        ));
    }
    spectrum_analytic(p, omegas)
}

/// Minimum covered lag, in units of `1/(γ_e+γ_c)`.
pub const MIN_LAG_COVERAGE: f64 = 12.0;

/// Trapezoid Fourier transform of a correlation sampled at `τ_k = k·dτ`.
///
/// `asymptote` is subtracted first and returned as the DC weight; `None`
/// takes the last sample. The remainder is extended evenly to `τ < 0`.
pub fn spectrum_numeric(
    samples: &[f64],
    dtau: f64,
    gamma_total: f64,
    asymptote: Option<f64>,
    omegas: &[f64],
) -> Result<SpectrumResult> {
    if samples.len() < 2 || !(dtau > 0.0) || !(gamma_total > 0.0) {
        return Err(Error::Configuration(
            "need ≥ 2 samples, positive lag step and positive total rate".into(),
        ));
    }
    let span = dtau * (samples.len() - 1) as f64;
    if span * gamma_total < MIN_LAG_COVERAGE * (1.0 - 1e-12) {
        return Err(Error::Configuration(format!(
            "lag grid covers {:.3}/(γ_e+γ_c), need {MIN_LAG_COVERAGE}",
            span * gamma_total
        )));
    }
    let dc = asymptote.unwrap_or(*samples.last().unwrap());
    let f: Vec<f64> = samples.iter().map(|c| c - dc).collect();
    let last = f.len() - 1;
    let continuous = omegas
        .iter()
        .map(|&w| {
            let mut acc = 0.0;
            for (k, v) in f.iter().enumerate() {
                let weight = if k == 0 || k == last { 0.5 } else { 1.0 };
                acc += weight * v * (w * k as f64 * dtau).cos();
            }
            2.0 * dtau * acc
        })
        .collect();
    Ok(SpectrumResult {
        dc_weight: dc,
        omegas: omegas.to_vec(),
        continuous,
    })
}

/// `points` equally spaced frequencies on `[−half_width, half_width]`,
/// mirrored so that `grid[i] = −grid[n−1−i]` exactly.
pub fn symmetric_grid(half_width: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    let mut g: Vec<f64> = (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect();
    for i in 0..n / 2 {
        g[n - 1 - i] = -g[i];
    }
    if n % 2 == 1 {
        g[n / 2] = 0.0;
    }
    g
}
