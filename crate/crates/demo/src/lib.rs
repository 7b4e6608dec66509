//! WebAssembly bindings for the static page in `www/`.
//!
//! Every export returns a flat `Float64Array`, row after row; the column
//! layout is given on each function. Frequencies are fixed at ω_s = 1e12 rad/s.

use bathflow_core::analytics::{current_trace, TransportParams};
use bathflow_core::lindblad::{
    occupation, propagate_samples, DensityMatrix, Generator, GeneratorSpec, Variant,
};
use bathflow_core::reservoirs::{ReservoirSpec, Statistics, SystemSpec};
use bathflow_core::spectrum::{spectrum_analytic, symmetric_grid};
use bathflow_core::transport::{sweep_ratio, t_c_grid_from_x, SweepOptions};
use bathflow_core::Result;
use wasm_bindgen::prelude::*;

pub const OMEGA_S: f64 = 1e12;

fn params(
    stats: Statistics,
    gamma_e: f64,
    gamma_c: f64,
    t_e: f64,
    t_c: f64,
    n0: f64,
) -> Result<TransportParams> {
    TransportParams::from_reservoirs(
        &SystemSpec::new(OMEGA_S, stats, n0)?,
        &ReservoirSpec::new(t_e, gamma_e, stats)?,
        &ReservoirSpec::new(t_c, gamma_c, stats)?,
    )
}

/// Rows `[t, n_closed_form, n_rk4, current]` over `[0, 5/(γ_e+γ_c)]`, fermionic.
pub fn trace_rows(
    gamma_e: f64,
    gamma_c: f64,
    t_e: f64,
    t_c: f64,
    n0: f64,
    points: usize,
) -> Result<Vec<f64>> {
    let p = params(Statistics::Fermionic, gamma_e, gamma_c, t_e, t_c, n0)?;
    let beta = p.total_rate();
    let n = points.max(2);
    let times: Vec<f64> = (0..n)
        .map(|k| 5.0 / beta * k as f64 / (n - 1) as f64)
        .collect();
    let gen = Generator::new(GeneratorSpec::fermionic(
        Variant::ReferenceThermal,
        OMEGA_S,
        p.gamma_e,
        p.gamma_c,
        p.nbar_e,
        p.nbar_c,
    )?)?;
    let states = propagate_samples(
        &gen,
        &DensityMatrix::fermion_diagonal(n0)?,
        &times,
        1e-3 / beta,
    )?;
    let closed = current_trace(&p, &times)?;
    let mut out = Vec::with_capacity(4 * n);
    for k in 0..n {
        out.extend([
            times[k],
            closed.occupation[k],
            occupation(&states[k]),
            closed.current[k],
        ]);
    }
    Ok(out)
}

/// Rows `[x_c, η_carnot, η_fermi, η_bose]` for `x_c` rising from 1e-3 to 30.
pub fn transport_rows(ratio: f64, points: usize) -> Result<Vec<f64>> {
    let grid = t_c_grid_from_x(OMEGA_S, -3.0, 30f64.log10(), points);
    let pts = sweep_ratio(OMEGA_S, ratio, &grid, &SweepOptions::default())?;
    Ok(pts
        .iter()
        .rev()
        .flat_map(|p| [p.x_c, p.eta_carnot, p.eta_fermi, p.eta_bose])
        .collect())
}

/// Rows `[ω, S_fermi, S_bose]` on `[−10β, 10β]`. The first two entries are
/// the fermionic and bosonic DC weights.
pub fn spectrum_rows(
    gamma_e: f64,
    gamma_c: f64,
    t_e: f64,
    t_c: f64,
    n0: f64,
    points: usize,
) -> Result<Vec<f64>> {
    let f = params(Statistics::Fermionic, gamma_e, gamma_c, t_e, t_c, n0)?;
    let b = params(Statistics::Bosonic, gamma_e, gamma_c, t_e, t_c, n0.round())?;
    let grid = symmetric_grid(10.0 * f.total_rate(), points);
    let sf = spectrum_analytic(&f, &grid)?;
    let sb = spectrum_analytic(&b, &grid)?;
    let mut out = vec![sf.dc_weight, sb.dc_weight];
    for (k, w) in grid.iter().enumerate() {
        out.extend([*w, sf.continuous[k], sb.continuous[k]]);
    }
    Ok(out)
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn trace(
    gamma_e: f64,
    gamma_c: f64,
    t_e: f64,
    t_c: f64,
    n0: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    js(trace_rows(gamma_e, gamma_c, t_e, t_c, n0, points))
}

#[wasm_bindgen]
pub fn transport(ratio: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
    js(transport_rows(ratio, points))
}

#[wasm_bindgen]
pub fn spectrum(
    gamma_e: f64,
    gamma_c: f64,
    t_e: f64,
    t_c: f64,
    n0: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    js(spectrum_rows(gamma_e, gamma_c, t_e, t_c, n0, points))
}
