use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::occupation;
use super::density::{check_state, DensityMatrix};
use super::generator::{Generator, GeneratorSpec, Variant};
use super::integrate::{evolve_matrix, max_stable_step, truncation_weight, TRUNCATION_TOL};
use crate::error::{Error, Result};

/// Stationarity tolerance, relative to `γ_e + γ_c`.
pub const STATIONARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateOptions {
    /// Give up after this many multiples of `1/(γ_e+γ_c)` (bosons only).
    pub max_time_in_lifetimes: f64,
    /// `dt·(γ_e+γ_c)` for the relaxation run.
    pub step_rate_product: f64,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            max_time_in_lifetimes: 200.0,
            step_rate_product: 1e-2,
        }
    }
}

/// Largest entry of `L(ρ)` divided by `γ_e + γ_c`.
pub fn stationarity_residual(gen: &Generator, m: &DMatrix<Complex64>) -> Result<f64> {
    Ok(gen.apply(m)?.camax() / gen.spec().total_rate())
}

/// Stationary state of `gen`.
///
/// Two-level generators: null vector of the vectorized generator, with one
/// row swapped for the trace condition. Larger spaces: relaxation from the
/// vacuum until the residual drops below [`STATIONARITY_TOL`].
pub fn steady_state(gen: &Generator) -> Result<DensityMatrix> {
    steady_state_with(gen, SteadyStateOptions::default())
}

pub fn steady_state_with(gen: &Generator, opts: SteadyStateOptions) -> Result<DensityMatrix> {
    let gamma = gen.spec().total_rate();
    if !(gamma > 0.0) {
        return Err(Error::Domain("steady state needs γ_e + γ_c > 0".into()));
    }
    let rho = if gen.dim() <= 2 {
        null_space_state(gen)?
    } else {
        relax_to_steady(gen, opts)?
    };
    let res = stationarity_residual(gen, rho.matrix())?;
    if res > STATIONARITY_TOL {
        return Err(Error::Convergence(format!(
            "stationarity residual {res:.3e} above {STATIONARITY_TOL:e}"
        )));
    }
    Ok(rho)
}

fn null_space_state(gen: &Generator) -> Result<DensityMatrix> {
    let d = gen.dim();
    let mut s = gen.superoperator();
    // row 0 of vec(L ρ) = 0 is redundant with trace preservation
    for k in 0..d * d {
        s[(0, k)] = Complex64::new(0.0, 0.0);
    }
    for i in 0..d {
        s[(0, i * d + i)] = Complex64::new(1.0, 0.0);
    }
    let mut rhs = DMatrix::zeros(d * d, 1);
    rhs[(0, 0)] = Complex64::new(1.0, 0.0);
    let v = s
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Convergence("generator has a degenerate stationary space".into()))?;
    let mut m = DMatrix::from_column_slice(d, d, v.as_slice());
    // exact Hermitian part; the solve leaves rounding-level asymmetry
    m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    check_state(&m).map_err(|e| Error::NumericalInstability(e.to_string()))?;
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

fn relax_to_steady(gen: &Generator, opts: SteadyStateOptions) -> Result<DensityMatrix> {
    let gamma = gen.spec().total_rate();
    let dt = (opts.step_rate_product / gamma).min(max_stable_step(gen));
    let chunk = 1.0 / gamma;
    let mut m = DensityMatrix::number_state(gen.dim(), 0)?.into_matrix();
    let mut elapsed = 0.0;
    while elapsed < opts.max_time_in_lifetimes * chunk {
        m = evolve_matrix(gen, &m, &[chunk], dt)?.remove(0);
        elapsed += chunk;
        m /= m.trace();
        if stationarity_residual(gen, &m)? <= STATIONARITY_TOL {
            check_state(&m).map_err(|e| Error::NumericalInstability(e.to_string()))?;
            let rho = DensityMatrix::from_matrix_unchecked(m);
            let w = truncation_weight(&rho);
            if w >= TRUNCATION_TOL {
                return Err(Error::Truncation(format!(
                    "steady state puts {w:.3e} in the top two Fock levels"
                )));
            }
            return Ok(rho);
        }
    }
    Err(Error::Convergence(format!(
        "no stationary state within {} lifetimes",
        opts.max_time_in_lifetimes
    )))
}

/// Steady occupations of the two fermionic generators side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantDiscrepancy {
    /// `(γ_e n̄_e + γ_c n̄_c)/(γ_e+γ_c)`.
    pub expected: f64,
    pub reference: f64,
    pub paper_literal: f64,
    /// `α/(γ+2α)`.
    pub paper_literal_predicted: f64,
}

impl VariantDiscrepancy {
    pub fn gap(&self) -> f64 {
        self.paper_literal - self.expected
    }
}

impl std::fmt::Display for VariantDiscrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "steady occupation, n̄_s = (γ_e n̄_e + γ_c n̄_c)/(γ_e+γ_c) = {:.12e}",
            self.expected
        )?;
        writeln!(f, "  reference_thermal: {:.12e}", self.reference)?;
        writeln!(
            f,
            "  paper_literal:     {:.12e} (α/(γ+2α) = {:.12e})",
            self.paper_literal, self.paper_literal_predicted
        )?;
        write!(f, "  paper_literal − n̄_s = {:.6e}", self.gap())
    }
}

/// Solves both fermionic generators for the same baths.
pub fn variant_discrepancy(
    gamma_e: f64,
    gamma_c: f64,
    nbar_e: f64,
    nbar_c: f64,
) -> Result<VariantDiscrepancy> {
    let solve = |v| -> Result<(f64, GeneratorSpec)> {
        let spec = GeneratorSpec::fermionic(v, 0.0, gamma_e, gamma_c, nbar_e, nbar_c)?;
        Ok((occupation(&steady_state(&Generator::new(spec)?)?), spec))
    };
    let (reference, spec) = solve(Variant::ReferenceThermal)?;
    let (paper_literal, _) = solve(Variant::PaperLiteral)?;
    let (gamma, alpha) = (spec.total_rate(), spec.weighted_occupation_rate());
    Ok(VariantDiscrepancy {
        expected: alpha / gamma,
        reference,
        paper_literal,
        paper_literal_predicted: alpha / (gamma + 2.0 * alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_literal_misses_thermal_mean() {
        let d = variant_discrepancy(2.0, 1.0, 0.7, 0.2).unwrap();
        assert!((d.reference - d.expected).abs() < 1e-14);
        assert!((d.paper_literal - d.paper_literal_predicted).abs() < 1e-14);
        assert!(d.gap() < -0.1);
        assert!(d.to_string().contains("paper_literal − n̄_s"));
        // equal baths still disagree: n̄/(1+2n̄) ≠ n̄
        let equal = variant_discrepancy(2.0, 1.0, 0.3, 0.3).unwrap();
        assert!((equal.paper_literal - 0.3 / 1.6).abs() < 1e-14);
    }

    #[test]
    fn reference_thermal_steady_occupation() {
        let spec =
            GeneratorSpec::fermionic(Variant::ReferenceThermal, 1e12, 2e9, 1e9, 0.7, 0.2).unwrap();
        let rho = steady_state(&Generator::new(spec).unwrap()).unwrap();
        let ns = (2.0 * 0.7 + 0.2) / 3.0;
        assert!((occupation(&rho) - ns).abs() < 1e-12);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn paper_literal_steady_occupation() {
        let spec =
            GeneratorSpec::fermionic(Variant::PaperLiteral, 1.0, 2.0, 1.0, 0.7, 0.2).unwrap();
        let rho = steady_state(&Generator::new(spec).unwrap()).unwrap();
        let (gamma, alpha) = (3.0, 1.6);
        assert!((occupation(&rho) - alpha / (gamma + 2.0 * alpha)).abs() < 1e-12);
    }

    #[test]
    fn equal_baths_give_bath_occupation() {
        let spec =
            GeneratorSpec::fermionic(Variant::ReferenceThermal, 1.0, 1.5, 1.5, 0.3, 0.3).unwrap();
        let rho = steady_state(&Generator::new(spec).unwrap()).unwrap();
        assert!((occupation(&rho) - 0.3).abs() < 1e-14);
    }

    #[test]
    fn zero_total_rate_is_rejected() {
        let spec =
            GeneratorSpec::fermionic(Variant::ReferenceThermal, 1.0, 0.0, 0.0, 0.3, 0.3).unwrap();
        assert!(matches!(
            steady_state(&Generator::new(spec).unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bosonic_relaxation_reaches_thermal_mean() {
        let spec = GeneratorSpec::bosonic(1.0, 1.0, 0.5, 1.2, 0.4, 40).unwrap();
        let rho = steady_state(&Generator::new(spec).unwrap()).unwrap();
        let ns = (1.2 + 0.5 * 0.4) / 1.5;
        assert!((occupation(&rho) - ns).abs() < 1e-6);
    }

    #[test]
    fn bosonic_truncation_is_reported() {
        let spec = GeneratorSpec::bosonic(1.0, 1.0, 1.0, 5.0, 5.0, 10).unwrap();
        let opts = SteadyStateOptions {
            max_time_in_lifetimes: 200.0,
            step_rate_product: 1e-3,
        };
        assert!(matches!(
            steady_state_with(&Generator::new(spec).unwrap(), opts),
            Err(Error::Truncation(_))
        ));
    }
}
