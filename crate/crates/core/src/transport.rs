//! Transport factors of the fermionic and bosonic two-bath mode, and the
//! Carnot reference they approach at high temperature.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::reservoirs::{thermal_ratio, HBAR, K_B};

fn check_order(t_e: f64, t_c: f64) -> Result<()> {
    if !(t_c > 0.0) || !t_c.is_finite() || !t_e.is_finite() {
        return Err(Error::Domain(format!(
            "temperatures must be finite and positive, got T_e={t_e}, T_c={t_c}"
        )));
    }
    if t_c > t_e {
        return Err(Error::Domain(format!(
            "collector hotter than emitter (T_c={t_c} > T_e={t_e})"
        )));
    }
    Ok(())
}

/// `1 − T_c/T_e`.
pub fn eta_carnot(t_e: f64, t_c: f64) -> Result<f64> {
    check_order(t_e, t_c)?;
    Ok(1.0 - t_c / t_e)
}

/// `1 − n̄_c/n̄_e` for Fermi occupations, from `x_c ≥ x_e > 0`.
///
/// Written as `−expm1(−(x_c − x_e))/(1 + e^{−x_c})`, which keeps full
/// relative precision when the two ratios nearly coincide.
pub fn fermi_bracket(x_e: f64, x_c: f64) -> f64 {
    -(-(x_c - x_e)).exp_m1() / (1.0 + (-x_c).exp())
}

/// `1 − n̄ᵇ_c/n̄ᵇ_e` from `x_c ≥ x_e > 0`, overflow-free for large `x_c`.
pub fn bose_bracket(x_e: f64, x_c: f64) -> f64 {
    let ratio = (x_e - x_c).exp() * (-x_e).exp_m1() / (-x_c).exp_m1();
    1.0 - ratio
}

/// `(2/x_c)(1 − n̄_c/n̄_e)`.
pub fn eta_fermionic_x(x_e: f64, x_c: f64) -> f64 {
    2.0 / x_c * fermi_bracket(x_e, x_c)
}

/// Fermionic transport factor `(2k_BT_c/ħω_s)(1 − n̄_c/n̄_e)`.
pub fn eta_fermionic(omega_s: f64, t_e: f64, t_c: f64) -> Result<f64> {
    check_order(t_e, t_c)?;
    Ok(eta_fermionic_x(
        thermal_ratio(omega_s, t_e)?,
        thermal_ratio(omega_s, t_c)?,
    ))
}

/// As [`eta_fermionic`], but with the shifted frequency `omega` in the
/// `2k_BT_c/ħω` prefactor. Occupations stay at `omega_s`.
pub fn eta_fermionic_shifted(omega_s: f64, omega: f64, t_e: f64, t_c: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "shifted frequency must be positive, got {omega}"
        )));
    }
    Ok(eta_fermionic(omega_s, t_e, t_c)? * omega_s / omega)
}

/// Bosonic transport factor `1 − n̄ᵇ_c/n̄ᵇ_e`.
pub fn eta_bosonic(omega_s: f64, t_e: f64, t_c: f64) -> Result<f64> {
    check_order(t_e, t_c)?;
    Ok(bose_bracket(
        thermal_ratio(omega_s, t_e)?,
        thermal_ratio(omega_s, t_c)?,
    ))
}

/// Energy-balance pieces behind the fermionic factor, for given rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportDiagnostics {
    /// Rate `γ_eγ_c/(γ_e+γ_c) · ħω_s/(2k_BT_c)` that makes `E_s/Q` equal the
    /// fermionic factor and reach Carnot at high temperature, s⁻¹.
    pub f: f64,
    /// The reciprocal form `γ_eγ_c/(γ_e+γ_c) · 2k_BT_c/(ħω_s)`, kept for
    /// comparison; with it `E_s/Q` does not reduce to the fermionic factor.
    pub f_reciprocal: f64,
    /// `ħω_s I_s`, W.
    pub steady_energy_loss: f64,
    /// `f ħω_s n̄_e`, W.
    pub emitter_supply: f64,
    /// `E_s/Q`; equals the fermionic factor up to rounding.
    pub ratio: f64,
}

pub fn fermionic_diagnostics(
    omega_s: f64,
    t_e: f64,
    t_c: f64,
    gamma_e: f64,
    gamma_c: f64,
) -> Result<TransportDiagnostics> {
    check_order(t_e, t_c)?;
    if !(gamma_e > 0.0 && gamma_c > 0.0) {
        return Err(Error::Domain("diagnostics need both rates positive".into()));
    }
    let ne = crate::reservoirs::fermi_occupation(thermal_ratio(omega_s, t_e)?);
    let nc = crate::reservoirs::fermi_occupation(thermal_ratio(omega_s, t_c)?);
    let g = gamma_e * gamma_c / (gamma_e + gamma_c);
    let f = g * HBAR * omega_s / (2.0 * K_B * t_c);
    let f_reciprocal = g * 2.0 * K_B * t_c / (HBAR * omega_s);
    let es = HBAR * omega_s * g * (ne - nc);
    let q = f * HBAR * omega_s * ne;
    Ok(TransportDiagnostics {
        f,
        f_reciprocal,
        steady_energy_loss: es,
        emitter_supply: q,
        ratio: es / q,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyPoint {
    pub t_c: f64,
    pub t_e: f64,
    /// `ħω_s/(k_B T_c)`.
    pub x_c: f64,
    pub eta_carnot: f64,
    pub eta_fermi: f64,
    pub eta_bose: f64,
    pub diagnostics: Option<TransportDiagnostics>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Worker threads; 1 runs inline.
    pub jobs: usize,
    /// Frequency in the fermionic prefactor, when it differs from `ω_s`.
    pub prefactor_omega: Option<f64>,
    /// `(γ_e, γ_c)` to attach [`TransportDiagnostics`] to every point.
    pub diagnostic_rates: Option<(f64, f64)>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            jobs: 1,
            prefactor_omega: None,
            diagnostic_rates: None,
        }
    }
}

fn sweep_point(omega_s: f64, ratio: f64, t_c: f64, opts: &SweepOptions) -> Result<EfficiencyPoint> {
    let t_e = ratio * t_c;
    let eta_fermi = match opts.prefactor_omega {
        Some(w) => eta_fermionic_shifted(omega_s, w, t_e, t_c)?,
        None => eta_fermionic(omega_s, t_e, t_c)?,
    };
    let diagnostics = opts
        .diagnostic_rates
        .map(|(ge, gc)| fermionic_diagnostics(omega_s, t_e, t_c, ge, gc))
        .transpose()?;
    Ok(EfficiencyPoint {
        t_c,
        t_e,
        x_c: thermal_ratio(omega_s, t_c)?,
        eta_carnot: eta_carnot(t_e, t_c)?,
        eta_fermi,
        eta_bose: eta_bosonic(omega_s, t_e, t_c)?,
        diagnostics,
    })
}

/// All three factors at `T_e = r·T_c` for each collector temperature.
pub fn sweep_ratio(
    omega_s: f64,
    ratio: f64,
    t_c_grid: &[f64],
    opts: &SweepOptions,
) -> Result<Vec<EfficiencyPoint>> {
    if !(ratio > 1.0) || !ratio.is_finite() {
        return Err(Error::Domain(format!(
            "temperature ratio must exceed 1, got {ratio}"
        )));
    }
    if t_c_grid.iter().any(|t| !(*t > 0.0)) || t_c_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "collector temperature grid must be positive and strictly increasing".into(),
        ));
    }
    let annotate = |i: usize, t: f64, e: Error| match e {
        Error::Domain(m) => Error::Domain(format!("grid point {i} (T_c={t} K): {m}")),
        other => other,
    };
    let eval = |(i, &t): (usize, &f64)| {
        sweep_point(omega_s, ratio, t, opts).map_err(|e| annotate(i, t, e))
    };
    if opts.jobs <= 1 {
        return t_c_grid.iter().enumerate().map(eval).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Configuration(format!("thread pool: {e}")))?;
    pool.install(|| t_c_grid.par_iter().enumerate().map(eval).collect())
}

/// Collector temperatures with `x_c` on a log-spaced grid, high to low `x_c`
/// so the temperatures come out increasing.
pub fn t_c_grid_from_x(omega_s: f64, log10_lo: f64, log10_hi: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .rev()
        .map(|i| {
            let x = 10f64.powf(log10_lo + (log10_hi - log10_lo) * i as f64 / (n - 1) as f64);
            HBAR * omega_s / (K_B * x)
        })
        .collect()
}

/// The `x_c` in `[lo, hi]` where the fermionic factor crosses Carnot at
/// fixed ratio `r`, by bisection. Errors when there is no sign change.
pub fn carnot_crossing(ratio: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(ratio > 1.0) || !(0.0 < lo && lo < hi) {
        return Err(Error::Domain("need r > 1 and 0 < lo < hi".into()));
    }
    let carnot = 1.0 - 1.0 / ratio;
    let gap = |x: f64| eta_fermionic_x(x / ratio, x) - carnot;
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (gap(a), gap(b));
    if fa.signum() == fb.signum() {
        return Err(Error::Convergence(format!(
            "no Carnot crossing for x_c in [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if gap(m).signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
        if b - a <= 4.0 * f64::EPSILON * m {
            break;
        }
    }
    Ok(0.5 * (a + b))
}
