//! Phase-space equation for the one-mode P-distribution `P = p0 + p1·ξ*ξ`
//! and the coefficient ODE it induces.
//!
//! Rates: `α = γ_e n̄_e + γ_c n̄_c`, `β = γ_e + γ_c`. All symbolic work runs
//! over [`Exact`] coefficients; doubles are converted without rounding.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::coherent::CoherentFrame;
use super::poly::{
    exact_from_f64, fmt_exact, Coefficient, Exact, GrassmannPoly, Universe, D2XI, XI, XI_STAR,
};
use super::report::{ReportLine, Status};
use crate::error::{Error, Result};
use crate::lindblad::{Generator, GeneratorSpec, Variant};

/// Even distribution `p0 + p1·ξ*ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PDistribution<T: Coefficient = Exact> {
    pub p0: T,
    pub p1: T,
}

impl<T: Coefficient> PDistribution<T> {
    pub fn new(p0: T, p1: T) -> Self {
        Self { p0, p1 }
    }

    /// `α/β − ξ*ξ`.
    pub fn steady(alpha: T, beta: T) -> Self {
        Self::new(alpha / beta, -T::one())
    }

    /// `δ = ξξ* = −ξ*ξ`.
    pub fn delta() -> Self {
        Self::new(T::zero(), -T::one())
    }

    pub fn to_poly(&self, u: &Universe) -> Result<GrassmannPoly<T>> {
        let ss = GrassmannPoly::monomial(u, &[XI_STAR, XI], self.p1.clone())?;
        GrassmannPoly::constant(u, self.p0.clone()).add(&ss)
    }

    /// Reads `p0`, `p1` back; anything outside `span{1, ξ*ξ}` is rejected.
    pub fn from_poly(p: &GrassmannPoly<T>) -> Result<Self> {
        let u = p.universe();
        let (i, j) = (u.index(XI)?, u.index(XI_STAR)?);
        let pair = (1u16 << i) | (1u16 << j);
        if p.terms().any(|(m, _)| m != 0 && m != pair) {
            return Err(Error::Structural(format!("P must be p0 + p1·ξ*ξ, got {p}")));
        }
        // ξ*ξ = −ξξ* in canonical order
        let sign = if i < j { -T::one() } else { T::one() };
        Ok(Self::new(p.scalar_part(), sign * p.coefficient(pair)))
    }

    /// `∫d²ξ P = −p1`.
    pub fn norm(&self) -> T {
        -self.p1.clone()
    }
}

fn require_even<T: Coefficient>(p: &GrassmannPoly<T>) -> Result<()> {
    if p.is_even() {
        Ok(())
    } else {
        Err(Error::Structural(format!("P must be even, got {p}")))
    }
}

fn validate_rates(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!(
            "need α ≥ 0 and β > 0, got α={alpha}, β={beta}"
        )));
    }
    Ok(())
}

struct Terms<T: Coefficient> {
    /// `∂²P/∂ξ*∂ξ`
    dd: GrassmannPoly<T>,
    /// `ξ∂P/∂ξ + ξ*∂P/∂ξ*` or `∂(ξP)/∂ξ + ∂(ξ*P)/∂ξ*`
    number: GrassmannPoly<T>,
    /// `ξ*ξ P`
    pair: GrassmannPoly<T>,
}

fn combine<T: Coefficient>(alpha: &T, beta: &T, t: Terms<T>) -> Result<GrassmannPoly<T>> {
    let two = T::from_ratio(2, 1);
    let half_beta = beta.clone() * T::from_ratio(1, 2);
    let damping = t
        .number
        .add(&t.pair.scale(&T::from_ratio(4, 1)))?
        .scale(&-half_beta);
    let diffusion = t.dd.sub(&t.number)?.sub(&t.pair.scale(&two))?.scale(alpha);
    damping.add(&diffusion)
}

fn pair_times<T: Coefficient>(p: &GrassmannPoly<T>) -> Result<GrassmannPoly<T>> {
    let u = p.universe();
    GrassmannPoly::monomial(u, &[XI_STAR, XI], T::one())?.mul(p)
}

/// `[I + II]P` with the operators acting on `P`:
/// `I = −(β/2)(ξ∂_ξ + ξ*∂_ξ* + 4ξ*ξ)`, `II = α(∂²/∂ξ*∂ξ − ξ∂_ξ − ξ*∂_ξ* − 2ξ*ξ)`.
pub fn fp_apply<T: Coefficient>(
    alpha: &T,
    beta: &T,
    p: &GrassmannPoly<T>,
) -> Result<GrassmannPoly<T>> {
    require_even(p)?;
    let u = p.universe();
    let xi = GrassmannPoly::generator(u, XI)?;
    let xs = GrassmannPoly::generator(u, XI_STAR)?;
    let number = xi
        .mul(&p.derivative_left(XI)?)?
        .add(&xs.mul(&p.derivative_left(XI_STAR)?)?)?;
    let dd = p.derivative_left(XI)?.derivative_left(XI_STAR)?;
    combine(
        alpha,
        beta,
        Terms {
            dd,
            number,
            pair: pair_times(p)?,
        },
    )
}

/// The same operators after moving derivatives off the projector:
/// `−(β/2)(∂_ξ(ξP) + ∂_ξ*(ξ*P) + 4ξ*ξP) + α(∂²P/∂ξ*∂ξ − ∂_ξ(ξP) − ∂_ξ*(ξ*P) − 2ξ*ξP)`.
pub fn fp_apply_integrated<T: Coefficient>(
    alpha: &T,
    beta: &T,
    p: &GrassmannPoly<T>,
) -> Result<GrassmannPoly<T>> {
    require_even(p)?;
    let u = p.universe();
    let xi = GrassmannPoly::generator(u, XI)?;
    let xs = GrassmannPoly::generator(u, XI_STAR)?;
    let number = xi
        .mul(p)?
        .derivative_left(XI)?
        .add(&xs.mul(p)?.derivative_left(XI_STAR)?)?;
    let dd = p.derivative_left(XI)?.derivative_left(XI_STAR)?;
    combine(
        alpha,
        beta,
        Terms {
            dd,
            number,
            pair: pair_times(p)?,
        },
    )
}

/// `∫d²ξ X|ξ⟩⟨ξ|` read as a number: the scalar part goes through
/// completeness, the rest through the Berezin integral.
pub fn project<T: Coefficient>(x: &GrassmannPoly<T>) -> Result<T> {
    Ok(x.scalar_part() + x.berezin(&D2XI)?.scalar_part())
}

/// Short rationals print exactly, the rest (converted doubles) as decimals.
fn show(x: &Exact) -> String {
    let small = |r: &num_rational::BigRational| r.denom().bits() <= 20 && r.numer().bits() <= 40;
    if small(&x.re) && small(&x.im) {
        fmt_exact(x)
    } else {
        format!("{:.9e}", x.to_complex64().re)
    }
}

/// `c_const + c_p0·p0 + c_p1·p1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm {
    pub constant: Exact,
    pub p0: Exact,
    pub p1: Exact,
}

impl AffineForm {
    fn probe(f: impl Fn(&PDistribution) -> Result<Exact>) -> Result<Self> {
        let z = Exact::zero();
        let o = Exact::one();
        let c = f(&PDistribution::new(z.clone(), z.clone()))?;
        let c0 = f(&PDistribution::new(o.clone(), z.clone()))? - c.clone();
        let c1 = f(&PDistribution::new(z, o))? - c.clone();
        Ok(Self {
            constant: c,
            p0: c0,
            p1: c1,
        })
    }

    pub fn eval(&self, p: &PDistribution) -> Exact {
        self.constant.clone() + self.p0.clone() * p.p0.clone() + self.p1.clone() * p.p1.clone()
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + ({})·p0 + ({})·p1",
            show(&self.constant),
            show(&self.p0),
            show(&self.p1)
        )
    }
}

/// `ṗ0 = a·p0 + b` with `p1 ≡ −1`.
#[derive(Debug, Clone)]
pub struct CoefficientOde {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub a_exact: Exact,
    pub b_exact: Exact,
    pub p1: f64,
    pub p1_dot: f64,
    /// Projected right-hand side as a function of `(p0, p1)`.
    pub rhs: AffineForm,
    pub lines: Vec<ReportLine>,
}

impl CoefficientOde {
    /// `p0(t)` from `p0(0)`.
    pub fn solve(&self, p0_init: f64, t: f64) -> f64 {
        if self.a == 0.0 {
            p0_init + self.b * t
        } else {
            let fixed = -self.b / self.a;
            fixed + (p0_init - fixed) * (self.a * t).exp()
        }
    }

    /// Fixed point `−b/a` and whether it attracts.
    pub fn fixed_point(&self) -> Option<(f64, bool)> {
        (self.a != 0.0).then(|| (-self.b / self.a, self.a < 0.0))
    }
}

fn pair_rates(alpha: f64, beta: f64) -> (Exact, Exact, Universe) {
    (exact_from_f64(alpha), exact_from_f64(beta), Universe::xi())
}

/// Builds the coefficient ODE from the integrated operator form and the
/// projection rule, and lists every point where it parts from the stated
/// intermediate steps.
pub fn derive_coefficient_ode(alpha: f64, beta: f64) -> Result<CoefficientOde> {
    validate_rates(alpha, beta)?;
    let (al, be, u) = pair_rates(alpha, beta);
    let rhs = AffineForm::probe(|d| project(&fp_apply_integrated(&al, &be, &d.to_poly(&u)?)?))?;
    // left side: π(ṗ0 + ṗ1 ξ*ξ) = ṗ0 − ṗ1, and normalization fixes ṗ1 = 0
    let lhs = AffineForm::probe(|d| project(&d.to_poly(&u)?))?;
    debug_assert!(lhs.p0 == Exact::one() && lhs.p1 == -Exact::one());
    let p1 = -Exact::one();
    let a_exact = rhs.p0.clone();
    let b_exact = rhs.constant.clone() + rhs.p1.clone() * p1.clone();
    let f = |x: &Exact| x.to_complex64().re;
    let mut ode = CoefficientOde {
        alpha,
        beta,
        a: f(&a_exact),
        b: f(&b_exact),
        a_exact: a_exact.clone(),
        b_exact: b_exact.clone(),
        p1: -1.0,
        p1_dot: 0.0,
        rhs: rhs.clone(),
        lines: Vec::new(),
    };
    let lines = &mut ode.lines;

    let stated = AffineForm {
        constant: Exact::zero(),
        p0: be.clone(),
        p1: al.clone(),
    };
    lines.push(ReportLine::compare(
        rhs == stated,
        "projected right side equals αP1 + βP0",
        format!("engine: {rhs}; stated: {stated}"),
    ));

    let steady = PDistribution::new(-al.clone() / be.clone(), p1.clone());
    lines.push(ReportLine::compare(
        rhs.eval(&steady).is_zero(),
        "engine steady value p0 = −α/β (stated intermediate)",
        format!("π(F(P)) at p0 = −α/β: {}", show(&rhs.eval(&steady))),
    ));
    let plus = PDistribution::steady(al.clone(), be.clone());
    lines.push(ReportLine::compare(
        rhs.eval(&plus).is_zero(),
        "steady value p0 = +α/β is stationary",
        format!("π(F(P)) at p0 = α/β: {}", show(&rhs.eval(&plus))),
    ));

    let stated_ode = (be.clone(), -al.clone());
    lines.push(ReportLine::compare(
        (a_exact.clone(), b_exact.clone()) == stated_ode,
        "coefficient ODE equals stated ṗ0 = −α + βp0",
        format!("engine: ṗ0 = {}·p0 + {}", show(&a_exact), show(&b_exact)),
    ));
    let solved = (-be.clone(), al.clone());
    lines.push(ReportLine::compare(
        (a_exact.clone(), b_exact.clone()) == solved,
        "solution from p0(0) = 0 is (α/β)(1 − e^{−βt})",
        format!(
            "needs ṗ0 = α − βp0; engine solution p0(t) = {}",
            describe_solution(&ode_numbers(&a_exact, &b_exact))
        ),
    ));
    lines.push(ReportLine::new(
        Status::Pass,
        "ṗ1 = 0",
        "∫d²ξ P = −p1 = 1 holds for all t, so p1 ≡ −1".into(),
    ));

    let direct = AffineForm::probe(|d| project(&fp_apply(&al, &be, &d.to_poly(&u)?)?))?;
    lines.push(ReportLine::new(
        if direct == rhs {
            Status::Pass
        } else {
            Status::Warn
        },
        "operators acting on P give the same projection",
        format!("π([I + II]P) = {direct}"),
    ));
    let norm_rate = AffineForm::probe(|d| {
        Ok(fp_apply_integrated(&al, &be, &d.to_poly(&u)?)?
            .berezin(&D2XI)?
            .scalar_part())
    })?;
    lines.push(ReportLine::new(
        if norm_rate == AffineForm::probe(|_| Ok(Exact::zero()))? {
            Status::Pass
        } else {
            Status::Warn
        },
        "right side conserves ∫d²ξ P",
        format!("∫d²ξ F(P) = {norm_rate}; p1 ≡ −1 is imposed by normalization"),
    ));
    Ok(ode)
}

fn ode_numbers(a: &Exact, b: &Exact) -> (f64, f64) {
    (a.to_complex64().re, b.to_complex64().re)
}

fn describe_solution((a, b): &(f64, f64)) -> String {
    if *a == 0.0 {
        format!("{b}·t")
    } else {
        format!("({:.6e})·(e^({:.6e}·t) − 1)", b / a, a)
    }
}

/// Stated solution `(α/β)(1 − e^{−βt})`.
pub fn stated_solution(alpha: f64, beta: f64, t: f64) -> f64 {
    -(alpha / beta) * (-beta * t).exp_m1()
}

#[derive(Debug, Clone)]
pub struct GaussianCheck {
    pub equal: bool,
    pub second_order_vanishes: bool,
    pub expansion: GrassmannPoly<Exact>,
}

/// `(α/β)·exp(−βξ*ξ/α)` against `α/β − ξ*ξ`, exactly.
pub fn gaussian_steady_equivalence(alpha: f64, beta: f64) -> Result<GaussianCheck> {
    validate_rates(alpha, beta)?;
    if alpha <= 0.0 {
        return Err(Error::Domain("the Gaussian form needs α > 0".into()));
    }
    let (al, be, u) = pair_rates(alpha, beta);
    gaussian_exact(&al, &be, &u)
}

fn gaussian_exact(al: &Exact, be: &Exact, u: &Universe) -> Result<GaussianCheck> {
    let exponent = GrassmannPoly::monomial(u, &[XI_STAR, XI], -(be.clone() / al.clone()))?;
    let expansion = exponent.exp_nilpotent()?.scale(&(al.clone() / be.clone()));
    let target = PDistribution::steady(al.clone(), be.clone()).to_poly(u)?;
    Ok(GaussianCheck {
        equal: expansion == target,
        second_order_vanishes: exponent.mul(&exponent)?.is_zero(),
        expansion,
    })
}

/// `ρ = sign·∫d²ξ P|ξ⟩⟨ξ|` as a 2×2 matrix.
pub fn density_from_p(p: &PDistribution, sign: f64) -> Result<DMatrix<Complex64>> {
    let frame = CoherentFrame::new()?;
    let rho = frame
        .projector
        .left_scalar(&p.to_poly(&frame.u)?)?
        .berezin(&D2XI)?
        .scale(&exact_from_f64(sign));
    let mut m = DMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let e = rho.entry(i, j);
            if !e.is_even() || e.terms().any(|(mask, _)| mask != 0) {
                return Err(Error::Verification(format!(
                    "ρ entry ({i},{j}) is not a number: {e}"
                )));
            }
            m[(i, j)] = e.scalar_part().to_complex64();
        }
    }
    Ok(m)
}

/// Maps the P-distribution to an operator and reads the population
/// equations off each master-equation variant.
pub fn operator_cross_reference(
    gamma_e: f64,
    gamma_c: f64,
    nbar_e: f64,
    nbar_c: f64,
) -> Result<Vec<ReportLine>> {
    let alpha = gamma_e * nbar_e + gamma_c * nbar_c;
    let beta = gamma_e + gamma_c;
    let mut lines = Vec::new();
    for sign in [1.0, -1.0] {
        let at =
            |p0: f64| density_from_p(&PDistribution::new(exact_from_f64(p0), -Exact::one()), sign);
        let r0 = at(0.0)?;
        let r1 = at(1.0)?;
        let tr = |m: &DMatrix<Complex64>| m.trace().re;
        let s = if sign > 0.0 { "+" } else { "−" };
        lines.push(ReportLine::new(
            if tr(&r0) == 1.0 && tr(&r1) == 1.0 {
                Status::Pass
            } else {
                Status::Warn
            },
            &format!("ρ = {s}∫d²ξ P|ξ⟩⟨ξ| has unit trace"),
            format!(
                "ρ00 = {} + {}·p0, ρ11 = {} + {}·p0 (p1 = −1)",
                r0[(0, 0)].re,
                r1[(0, 0)].re - r0[(0, 0)].re,
                r0[(1, 1)].re,
                r1[(1, 1)].re - r0[(1, 1)].re
            ),
        ));
        for variant in [Variant::ReferenceThermal, Variant::PaperLiteral] {
            let gen = Generator::new(GeneratorSpec::fermionic(
                variant, 0.0, gamma_e, gamma_c, nbar_e, nbar_c,
            )?)?;
            let d0 = gen.apply(&r0)?;
            let d1 = gen.apply(&r1)?;
            // ρ11 is affine in p0 with slope k; ṗ0 = (Lρ)11 / k
            let k = r1[(1, 1)].re - r0[(1, 1)].re;
            let b = d0[(1, 1)].re / k;
            let a = (d1[(1, 1)].re - d0[(1, 1)].re) / k;
            let k00 = r1[(0, 0)].re - r0[(0, 0)].re;
            let b00 = d0[(0, 0)].re / k00;
            let a00 = (d1[(0, 0)].re - d0[(0, 0)].re) / k00;
            let tol = 1e-12 * (alpha + beta).max(1.0);
            let matches_stated = (a + beta).abs() <= tol && (b - alpha).abs() <= tol;
            let consistent = (a - a00).abs() <= tol && (b - b00).abs() <= tol;
            lines.push(ReportLine::new(
                if matches_stated && consistent { Status::Pass } else { Status::Warn },
                &format!("{variant:?} generator on ρ(P) ({s} sign) reproduces ṗ0 = α − βp0"),
                format!(
                    "from ρ11: ṗ0 = {b:.6e} + ({a:.6e})·p0; from ρ00: ṗ0 = {b00:.6e} + ({a00:.6e})·p0; α = {alpha:.6e}, β = {beta:.6e}"
                ),
            ));
        }
    }
    let frame = CoherentFrame::new()?;
    let ss = frame.xi_star.mul(&frame.xi)?;
    let op_level = frame.projector.left_scalar(&ss)?.berezin(&D2XI)?;
    lines.push(ReportLine::new(
        Status::Warn,
        "projection of ξ*ξ matches the operator integral",
        format!(
            "scalar rule gives {}·1, ∫d²ξ ξ*ξ|ξ⟩⟨ξ| = {}",
            show(&project(&ss)?),
            op_level.describe()
        ),
    ));
    Ok(lines)
}

/// Everything the verify command prints for the phase-space part.
pub fn fokker_planck_report(
    gamma_e: f64,
    gamma_c: f64,
    nbar_e: f64,
    nbar_c: f64,
) -> Result<(CoefficientOde, GaussianCheck, Vec<ReportLine>)> {
    let alpha = gamma_e * nbar_e + gamma_c * nbar_c;
    let beta = gamma_e + gamma_c;
    let ode = derive_coefficient_ode(alpha, beta)?;
    let gauss = gaussian_steady_equivalence(alpha, beta)?;
    let mut lines = ode.lines.clone();
    lines.push(ReportLine::check(
        gauss.equal && gauss.second_order_vanishes,
        "Gaussian steady state (α/β)exp(−βξ*ξ/α) = α/β − ξ*ξ",
        format!("expansion {}", gauss.expansion),
    ));
    let limit_ok = matches!(ode.fixed_point(), Some((p, true)) if (p - alpha / beta).abs() <= 1e-15 * (alpha / beta).abs().max(1.0));
    lines.push(ReportLine::compare(
        limit_ok,
        "engine ODE relaxes to the Gaussian steady state",
        match ode.fixed_point() {
            Some((p, stable)) => format!(
                "fixed point p0 = {p:.6e} ({})",
                if stable { "attracting" } else { "repelling" }
            ),
            None => "no fixed point".into(),
        },
    ));
    lines.extend(operator_cross_reference(gamma_e, gamma_c, nbar_e, nbar_c)?);
    Ok((ode, gauss, lines))
}
