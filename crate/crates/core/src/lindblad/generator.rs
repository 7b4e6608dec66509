use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::reservoirs::Statistics;

/// Which fermionic master equation to use.
///
/// `PaperLiteral` is the two-bracket form
/// `−(γ/2)(a†aρ + ρa†a − 2aρa†) − α(ρ − aρa† − a†ρa)`; its mean occupation
/// relaxes at rate `γ + 2α` towards `α/(γ + 2α)`. `ReferenceThermal` is the
/// standard two-bath thermal dissipator whose mean occupation relaxes at
/// rate `γ` towards `α/γ` (here `γ = γ_e + γ_c`, `α = γ_e n̄_e + γ_c n̄_c`).
/// Bosonic generators ignore the variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    PaperLiteral,
    #[default]
    ReferenceThermal,
}

pub const DEFAULT_BOSON_N_MAX: usize = 40;
pub const MIN_BOSON_N_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub statistics: Statistics,
    pub variant: Variant,
    /// Frequency of the unitary term, rad/s (the shifted ω; usually ω_s).
    pub omega: f64,
    pub gamma_e: f64,
    pub gamma_c: f64,
    pub nbar_e: f64,
    pub nbar_c: f64,
    /// Highest Fock level kept for bosons; unused for fermions.
    pub n_max: usize,
}

impl GeneratorSpec {
    pub fn fermionic(
        variant: Variant,
        omega: f64,
        gamma_e: f64,
        gamma_c: f64,
        nbar_e: f64,
        nbar_c: f64,
    ) -> Result<Self> {
        let spec = Self {
            statistics: Statistics::Fermionic,
            variant,
            omega,
            gamma_e,
            gamma_c,
            nbar_e,
            nbar_c,
            n_max: 1,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn bosonic(
        omega: f64,
        gamma_e: f64,
        gamma_c: f64,
        nbar_e: f64,
        nbar_c: f64,
        n_max: usize,
    ) -> Result<Self> {
        let spec = Self {
            statistics: Statistics::Bosonic,
            variant: Variant::ReferenceThermal,
            omega,
            gamma_e,
            gamma_c,
            nbar_e,
            nbar_c,
            n_max,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_e >= 0.0 && self.gamma_c >= 0.0)
            || !self.gamma_e.is_finite()
            || !self.gamma_c.is_finite()
        {
            return Err(Error::Domain(format!(
                "coupling rates must be non-negative, got γ_e={}, γ_c={}",
                self.gamma_e, self.gamma_c
            )));
        }
        if !self.omega.is_finite() {
            return Err(Error::Domain("ω must be finite".into()));
        }
        let occ_ok = |n: f64| match self.statistics {
            Statistics::Fermionic => n > 0.0 && n < 1.0,
            Statistics::Bosonic => n > 0.0 && n.is_finite(),
        };
        if !occ_ok(self.nbar_e) || !occ_ok(self.nbar_c) {
            return Err(Error::Domain(format!(
                "bath occupations n̄_e={}, n̄_c={} invalid for {:?} statistics",
                self.nbar_e, self.nbar_c, self.statistics
            )));
        }
        if self.statistics == Statistics::Bosonic && self.n_max < MIN_BOSON_N_MAX {
            return Err(Error::Domain(format!(
                "bosonic truncation n_max={} below {MIN_BOSON_N_MAX}",
                self.n_max
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self.statistics {
            Statistics::Fermionic => 2,
            Statistics::Bosonic => self.n_max + 1,
        }
    }

    /// `γ_e + γ_c`.
    pub fn total_rate(&self) -> f64 {
        self.gamma_e + self.gamma_c
    }

    /// `γ_e n̄_e + γ_c n̄_c`.
    pub fn weighted_occupation_rate(&self) -> f64 {
        self.gamma_e * self.nbar_e + self.gamma_c * self.nbar_c
    }

    /// Rates multiplying `𝔇[a]` and `𝔇[a†]`.
    ///
    /// The paper-literal bracket equals `(γ+α)𝔇[a] + α𝔇[a†]` on the
    /// two-level space; it is still applied term by term in `apply`.
    pub fn jump_rates(&self) -> (f64, f64) {
        let gamma = self.total_rate();
        let alpha = self.weighted_occupation_rate();
        match (self.statistics, self.variant) {
            (Statistics::Bosonic, _) => (gamma + alpha, alpha),
            (Statistics::Fermionic, Variant::ReferenceThermal) => (gamma - alpha, alpha),
            (Statistics::Fermionic, Variant::PaperLiteral) => (gamma + alpha, alpha),
        }
    }

    /// Upper bound on `|λ|` over the dissipator's spectrum: each term
    /// `𝔇[√r L]` has norm at most `2r‖L‖²`, and `‖b‖² = n_max` on the
    /// truncated oscillator.
    pub fn stiffness_bound(&self) -> f64 {
        let (down, up) = self.jump_rates();
        let b2 = match self.statistics {
            Statistics::Fermionic => 1.0,
            Statistics::Bosonic => self.n_max as f64,
        };
        2.0 * (down.abs() + up.abs()) * b2
    }

    /// Mean occupation the generator relaxes to, from its rate equation.
    pub fn expected_steady_occupation(&self) -> f64 {
        let gamma = self.total_rate();
        let alpha = self.weighted_occupation_rate();
        match (self.statistics, self.variant) {
            (Statistics::Fermionic, Variant::PaperLiteral) => alpha / (gamma + 2.0 * alpha),
            _ => alpha / gamma,
        }
    }
}

/// A generator with its ladder tables precomputed.
///
/// All terms are phase covariant, so the dissipative part commutes with the
/// unitary one; [`Generator::apply_dissipative`] exposes it on its own.
#[derive(Debug, Clone)]
pub struct Generator {
    spec: GeneratorSpec,
    /// `s[k] = ⟨k−1|b|k⟩` for `k ≥ 1`; `s[0] = 0`.
    ladder: Vec<f64>,
    /// Diagonal of `b b†` in the truncated space.
    bbdag: Vec<f64>,
}

impl Generator {
    pub fn new(spec: GeneratorSpec) -> Result<Self> {
        spec.validate()?;
        let dim = spec.dim();
        let ladder: Vec<f64> = (0..dim).map(|k| (k as f64).sqrt()).collect();
        let bbdag = (0..dim)
            .map(|i| {
                if i + 1 < dim {
                    ladder[i + 1].powi(2)
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self {
            spec,
            ladder,
            bbdag,
        })
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn check_dim(&self, m: &DMatrix<Complex64>) -> Result<()> {
        let d = self.dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Structural(format!(
                "matrix is {}x{}, generator acts on dimension {d}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(())
    }

    /// Full `dρ/dt` for any square matrix of the right size (need not be a state).
    pub fn apply(&self, m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        let mut out = self.apply_dissipative(m)?;
        let w = self.spec.omega;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if i != j {
                    out[(i, j)] += Complex64::new(0.0, -w * (i as f64 - j as f64)) * m[(i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Everything except `−iω[n̂, ·]`.
    pub fn apply_dissipative(&self, m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        self.check_dim(m)?;
        let d = self.dim();
        let s = &self.ladder;
        let lower = |i: usize, j: usize| -> Complex64 {
            // (b m b†)_{ij}
            if i + 1 < d && j + 1 < d {
                m[(i + 1, j + 1)] * (s[i + 1] * s[j + 1])
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let raise = |i: usize, j: usize| -> Complex64 {
            // (b† m b)_{ij}
            if i >= 1 && j >= 1 {
                m[(i - 1, j - 1)] * (s[i] * s[j])
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let gamma = self.spec.total_rate();
        let alpha = self.spec.weighted_occupation_rate();
        let mut out = DMatrix::zeros(d, d);
        match (self.spec.statistics, self.spec.variant) {
            (Statistics::Fermionic, Variant::PaperLiteral) => {
                for i in 0..d {
                    for j in 0..d {
                        let nsum = (i + j) as f64;
                        let a_rho_adag = lower(i, j);
                        let adag_rho_a = raise(i, j);
                        let damping = m[(i, j)] * nsum - a_rho_adag * 2.0;
                        let pumping = m[(i, j)] - a_rho_adag - adag_rho_a;
                        out[(i, j)] = -damping * (gamma / 2.0) - pumping * alpha;
                    }
                }
            }
            _ => {
                let (down, up) = self.spec.jump_rates();
                for i in 0..d {
                    for j in 0..d {
                        let nsum = (i + j) as f64;
                        let msum = self.bbdag[i] + self.bbdag[j];
                        let d_lower = lower(i, j) - m[(i, j)] * (0.5 * nsum);
                        let d_raise = raise(i, j) - m[(i, j)] * (0.5 * msum);
                        out[(i, j)] = d_lower * down + d_raise * up;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `dρ/dt` for a density matrix.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DMatrix<Complex64>> {
        self.apply(rho.matrix())
    }

    /// Column-stacked superoperator: `vec(L(X)) = S · vec(X)`.
    pub fn superoperator(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut s = DMatrix::zeros(d * d, d * d);
        for col in 0..d {
            for row in 0..d {
                let mut basis = DMatrix::zeros(d, d);
                basis[(row, col)] = Complex64::new(1.0, 0.0);
                let image = self
                    .apply(&basis)
                    .expect("dimension matches by construction");
                let k = col * d + row;
                for (idx, z) in image.iter().enumerate() {
                    // nalgebra iterates column-major, matching vec()
                    s[(idx, k)] = *z;
                }
            }
        }
        s
    }
}

/// One-shot `dρ/dt` for a spec and a state.
pub fn generator_apply(spec: &GeneratorSpec, rho: &DensityMatrix) -> Result<DMatrix<Complex64>> {
    Generator::new(*spec)?.apply_state(rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fermion_ops() -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let a = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        let adag = a.adjoint();
        (a, adag)
    }

    fn dissipator(l: &DMatrix<Complex64>, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let ld = l.adjoint();
        let ldl = &ld * l;
        l * rho * &ld - (&ldl * rho + rho * &ldl) * c(0.5, 0.0)
    }

    fn sample_rho() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(0.7, 0.), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.)])
    }

    #[test]
    fn paper_literal_matches_dense_transcription() {
        let spec =
            GeneratorSpec::fermionic(Variant::PaperLiteral, 3.0, 1.3, 0.4, 0.8, 0.1).unwrap();
        let (a, adag) = fermion_ops();
        let n = &adag * &a;
        let rho = sample_rho();
        let gamma = spec.total_rate();
        let alpha = spec.weighted_occupation_rate();
        let dense = -(&n * &rho - &rho * &n) * c(0.0, spec.omega)
            - (&n * &rho + &rho * &n - &a * &rho * &adag * c(2.0, 0.0)) * c(gamma / 2.0, 0.0)
            - (&rho - &a * &rho * &adag - &adag * &rho * &a) * c(alpha, 0.0);
        let got = Generator::new(spec).unwrap().apply(&rho).unwrap();
        assert!((got - dense).camax() < 1e-15);
    }

    #[test]
    fn reference_matches_dense_dissipators() {
        let spec =
            GeneratorSpec::fermionic(Variant::ReferenceThermal, 2.0, 1.3, 0.4, 0.8, 0.1).unwrap();
        let (a, adag) = fermion_ops();
        let n = &adag * &a;
        let rho = sample_rho();
        let mut dense = -(&n * &rho - &rho * &n) * c(0.0, spec.omega);
        for (g, nb) in [(spec.gamma_e, spec.nbar_e), (spec.gamma_c, spec.nbar_c)] {
            dense += dissipator(&a, &rho) * c(g * (1.0 - nb), 0.0);
            dense += dissipator(&adag, &rho) * c(g * nb, 0.0);
        }
        let got = Generator::new(spec).unwrap().apply(&rho).unwrap();
        assert!((got - dense).camax() < 1e-15);
    }

    #[test]
    fn paper_literal_is_a_lindblad_form_with_shifted_rates() {
        // −(γ/2)(nρ+ρn−2aρa†) − α(ρ − aρa† − a†ρa) = (γ+α)𝔇[a]ρ + α𝔇[a†]ρ on two levels
        let spec =
            GeneratorSpec::fermionic(Variant::PaperLiteral, 0.0, 1.0, 2.0, 0.3, 0.6).unwrap();
        let (a, adag) = fermion_ops();
        let rho = sample_rho();
        let (down, up) = spec.jump_rates();
        let expected = dissipator(&a, &rho) * c(down, 0.0) + dissipator(&adag, &rho) * c(up, 0.0);
        let got = Generator::new(spec).unwrap().apply(&rho).unwrap();
        assert!((got - expected).camax() < 1e-15);
    }

    #[test]
    fn bosonic_matches_dense_dissipators() {
        let spec = GeneratorSpec::bosonic(0.7, 1.0, 0.5, 0.4, 0.2, 9).unwrap();
        let d = spec.dim();
        let mut b = DMatrix::<Complex64>::zeros(d, d);
        for k in 1..d {
            b[(k - 1, k)] = c((k as f64).sqrt(), 0.0);
        }
        let bd = b.adjoint();
        let n = &bd * &b;
        let mut rho = DMatrix::<Complex64>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                rho[(i, j)] = c(1.0 / (1.0 + (i + j) as f64), 0.05 * (i as f64 - j as f64));
            }
        }
        let mut dense = -(&n * &rho - &rho * &n) * c(0.0, spec.omega);
        for (g, nb) in [(spec.gamma_e, spec.nbar_e), (spec.gamma_c, spec.nbar_c)] {
            dense += dissipator(&b, &rho) * c(g * (nb + 1.0), 0.0);
            dense += dissipator(&bd, &rho) * c(g * nb, 0.0);
        }
        let got = Generator::new(spec).unwrap().apply(&rho).unwrap();
        assert!((got - dense).camax() < 1e-13);
    }

    #[test]
    fn mean_occupation_rate_equations() {
        let n = 0.35;
        let rho = DensityMatrix::fermion_diagonal(n).unwrap();
        let (ge, gc, ne, nc) = (1.1, 0.6, 0.7, 0.2);
        let gamma = ge + gc;
        let alpha = ge * ne + gc * nc;

        let reference =
            GeneratorSpec::fermionic(Variant::ReferenceThermal, 5.0, ge, gc, ne, nc).unwrap();
        let d = generator_apply(&reference, &rho).unwrap();
        let dn = d[(1, 1)].re;
        assert!((dn - (-gamma * (n - alpha / gamma))).abs() < 1e-15);

        let literal = GeneratorSpec::fermionic(Variant::PaperLiteral, 5.0, ge, gc, ne, nc).unwrap();
        let d = generator_apply(&literal, &rho).unwrap();
        let dn = d[(1, 1)].re;
        assert!((dn - (-(gamma + 2.0 * alpha) * n + alpha)).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        let spec = GeneratorSpec::bosonic(1.0, 1.0, 1.0, 0.5, 0.5, 10).unwrap();
        let rho = DensityMatrix::number_state(2, 0).unwrap();
        assert!(matches!(
            generator_apply(&spec, &rho),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(
            GeneratorSpec::fermionic(Variant::ReferenceThermal, 1.0, -1.0, 1.0, 0.5, 0.5).is_err()
        );
        assert!(
            GeneratorSpec::fermionic(Variant::ReferenceThermal, 1.0, 1.0, 1.0, 1.0, 0.5).is_err()
        );
        assert!(GeneratorSpec::bosonic(1.0, 1.0, 1.0, 0.5, 0.5, 4).is_err());
        assert!(GeneratorSpec::bosonic(1.0, 1.0, 1.0, 2.5, 0.5, 8).is_ok());
    }

    #[test]
    fn superoperator_reproduces_apply() {
        let spec =
            GeneratorSpec::fermionic(Variant::ReferenceThermal, 2.0, 1.0, 0.5, 0.3, 0.6).unwrap();
        let g = Generator::new(spec).unwrap();
        let s = g.superoperator();
        let rho = sample_rho();
        let v = DMatrix::from_column_slice(4, 1, rho.as_slice());
        let lv = &s * v;
        let direct = g.apply(&rho).unwrap();
        for (a, b) in lv.iter().zip(direct.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn stiffness_bound_covers_spectrum() {
        let specs = [
            GeneratorSpec::bosonic(0.0, 1.0, 0.7, 3.0, 0.4, 12).unwrap(),
            GeneratorSpec::fermionic(Variant::PaperLiteral, 0.0, 1.0, 0.7, 0.9, 0.4).unwrap(),
            GeneratorSpec::fermionic(Variant::ReferenceThermal, 0.0, 1.0, 0.7, 0.9, 0.4).unwrap(),
        ];
        for spec in specs {
            let bound = spec.stiffness_bound();
            let s = Generator::new(spec).unwrap().superoperator().map(|z| z.re);
            let mut widest: f64 = 0.0;
            for l in s.complex_eigenvalues().iter() {
                assert!(l.im.abs() < 1e-9 && l.re < 1e-9, "{l}");
                widest = widest.max(l.norm());
            }
            assert!(widest <= bound, "{widest} > {bound}");
        }
    }
}
