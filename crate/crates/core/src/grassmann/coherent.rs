//! Fermionic coherent states `|ξ⟩ = D(ξ)|0⟩` and their action identities,
//! checked in exact arithmetic.

use num_traits::{One, Zero};

use super::operator::GOp;
use super::poly::{grassmann_delta, Exact, GrassmannPoly, Universe, D2XI, XI, XI_STAR};
use super::report::ReportLine;
use crate::error::Result;

/// One verified identity: `lhs − rhs` and whether it vanished exactly.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub residual: String,
}

impl IdentityCheck {
    pub fn to_line(&self) -> ReportLine {
        let detail = if self.pass {
            String::new()
        } else {
            format!("residual: {}", self.residual)
        };
        ReportLine::check(self.pass, &self.name, detail)
    }

    fn from_difference(name: &str, diff: &GOp<Exact>) -> Self {
        Self {
            name: name.to_string(),
            pass: diff.is_zero(),
            residual: diff.describe(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

type Op = GOp<Exact>;
type Poly = GrassmannPoly<Exact>;

fn half() -> Exact {
    Exact::new(
        num_rational::BigRational::new(1.into(), 2.into()),
        Zero::zero(),
    )
}

/// The objects every identity is built from.
pub struct CoherentFrame {
    pub u: Universe,
    pub xi: Poly,
    pub xi_star: Poly,
    pub a: Op,
    pub a_dag: Op,
    pub one: Op,
    /// `a†ξ − ξ*a`
    pub x: Op,
    pub d: Op,
    pub ket: Op,
    pub bra: Op,
    pub projector: Op,
}

impl CoherentFrame {
    pub fn new() -> Result<Self> {
        let u = Universe::xi();
        let xi = Poly::generator(&u, XI)?;
        let xi_star = Poly::generator(&u, XI_STAR)?;
        let a = Op::a(&u);
        let a_dag = Op::a_dag(&u);
        let one = Op::identity(&u);
        let x = a_dag.right_scalar(&xi)?.sub(&a.left_scalar(&xi_star)?)?;
        // X³ = 0, so the exponential series stops at the square
        let d = one.add(&x)?.add(&x.mul(&x)?.scale(&half()))?;
        let ket = d.mul(&Op::vacuum_ket(&u))?;
        let bra = ket.dagger();
        let projector = ket.mul(&bra)?;
        Ok(Self {
            u,
            xi,
            xi_star,
            a,
            a_dag,
            one,
            x,
            d,
            ket,
            bra,
            projector,
        })
    }

    fn s(&self, p: &Poly) -> Op {
        Op::scalar(p)
    }

    fn xi_star_xi(&self) -> Result<Poly> {
        self.xi_star.mul(&self.xi)
    }
}

/// Integration rules, nilpotency and anticommutation, each checked exactly.
pub fn algebra_checks() -> Result<Vec<ReportLine>> {
    let mut lines = Vec::new();
    let mut check = |label: &str, ok: bool| lines.push(ReportLine::check(ok, label, String::new()));

    let t = Universe::new(&["θ"])?;
    let theta = Poly::generator(&t, "θ")?;
    check("∫dθ 1 = 0", Poly::one(&t).berezin(&["θ"])?.is_zero());
    check("∫dθ θ = 1", theta.berezin(&["θ"])? == Poly::one(&t));

    let f = CoherentFrame::new()?;
    check("ξ² = 0", f.xi.mul(&f.xi)?.is_zero());
    check("(ξ*)² = 0", f.xi_star.mul(&f.xi_star)?.is_zero());
    check(
        "{ξ, ξ*} = 0",
        f.xi.mul(&f.xi_star)?.add(&f.xi_star.mul(&f.xi)?)?.is_zero(),
    );
    let one = Poly::one(&f.u);
    check("∫d²ξ ξξ* = 1", f.xi.mul(&f.xi_star)?.berezin(&D2XI)? == one);
    check(
        "∫d²ξ ξ*ξ = −1",
        f.xi_star.mul(&f.xi)?.berezin(&D2XI)? == one.neg(),
    );
    let delta = grassmann_delta::<Exact>(&f.u)?;
    check("∫d²ξ δ = 1 with δ = ξξ*", delta.berezin(&D2XI)? == one);
    let anti = |g: &Poly, op: &Op| -> Result<bool> {
        let s = Op::scalar(g);
        Ok(s.mul(op)?.add(&op.mul(&s)?)?.is_zero())
    };
    check(
        "{ξ, a} = {ξ, a†} = {ξ*, a} = {ξ*, a†} = 0",
        anti(&f.xi, &f.a)?
            && anti(&f.xi, &f.a_dag)?
            && anti(&f.xi_star, &f.a)?
            && anti(&f.xi_star, &f.a_dag)?,
    );
    Ok(lines)
}

/// Runs every coherent-state identity and returns the per-identity residuals.
pub fn coherent_identity_suite() -> Result<IdentityReport> {
    let f = CoherentFrame::new()?;
    let mut checks = Vec::new();
    let mut push = |name: &str, diff: Op| checks.push(IdentityCheck::from_difference(name, &diff));
    let h = half();
    let ss = f.xi_star_xi()?;

    // D = 1 + X + (a†a − ½)ξ*ξ
    let n_minus_half = Op::number(&f.u).sub(&f.one.scale(&h))?;
    let stated_d = f.one.add(&f.x)?.add(&n_minus_half.right_scalar(&ss)?)?;
    push(
        "D(ξ) = 1 + (a†ξ − ξ*a) + (a†a − 1/2)ξ*ξ",
        f.d.sub(&stated_d)?,
    );

    let dd = f.d.dagger();
    push("D†D = 1", dd.mul(&f.d)?.sub(&f.one)?);
    push("D D† = 1", f.d.mul(&dd)?.sub(&f.one)?);
    push(
        "D†aD = a + ξ",
        dd.mul(&f.a)?.mul(&f.d)?.sub(&f.a.add(&f.s(&f.xi))?)?,
    );
    push(
        "D†a†D = a† + ξ*",
        dd.mul(&f.a_dag)?
            .mul(&f.d)?
            .sub(&f.a_dag.add(&f.s(&f.xi_star))?)?,
    );

    let vac = Op::vacuum_ket(&f.u);
    let stated_ket = f
        .one
        .add(&f.a_dag.right_scalar(&f.xi)?)?
        .sub(&f.s(&ss).scale(&h))?
        .mul(&vac)?;
    push("|ξ⟩ = (1 + a†ξ − ξ*ξ/2)|0⟩", f.ket.sub(&stated_ket)?);

    let ket_xi = f.ket.left_scalar(&f.xi)?;
    push("a|ξ⟩ = ξ|ξ⟩", f.a.mul(&f.ket)?.sub(&ket_xi)?);

    let minus_d_ket = f.ket.derivative_left(XI)?.scale(&-Exact::one());
    let rhs = minus_d_ket.add(&f.ket.left_scalar(&f.xi_star)?.scale(&h))?;
    push("a†|ξ⟩ = (−∂/∂ξ + ξ*/2)|ξ⟩", f.a_dag.mul(&f.ket)?.sub(&rhs)?);

    push(
        "⟨ξ|a† = ξ*⟨ξ|",
        f.bra.mul(&f.a_dag)?.sub(&f.bra.left_scalar(&f.xi_star)?)?,
    );
    let rhs = f
        .bra
        .derivative_left(XI_STAR)?
        .add(&f.bra.left_scalar(&f.xi)?.scale(&h))?;
    push("⟨ξ|a = (∂/∂ξ* + ξ/2)⟨ξ|", f.bra.mul(&f.a)?.sub(&rhs)?);

    let pi = &f.projector;
    push(
        "a|ξ⟩⟨ξ| = ξ|ξ⟩⟨ξ|",
        f.a.mul(pi)?.sub(&pi.left_scalar(&f.xi)?)?,
    );
    let rhs = pi
        .derivative_left(XI)?
        .scale(&-Exact::one())
        .add(&pi.left_scalar(&f.xi_star)?)?;
    push("a†|ξ⟩⟨ξ| = (−∂/∂ξ + ξ*)|ξ⟩⟨ξ|", f.a_dag.mul(pi)?.sub(&rhs)?);
    push(
        "|ξ⟩⟨ξ|a† = ξ*|ξ⟩⟨ξ|",
        pi.mul(&f.a_dag)?.sub(&pi.left_scalar(&f.xi_star)?)?,
    );
    let rhs = pi.derivative_left(XI_STAR)?.add(&pi.left_scalar(&f.xi)?)?;
    push("|ξ⟩⟨ξ|a = (∂/∂ξ* + ξ)|ξ⟩⟨ξ|", pi.mul(&f.a)?.sub(&rhs)?);

    push("∫d²ξ |ξ⟩⟨ξ| = 1", pi.berezin(&D2XI)?.sub(&f.one)?);

    Ok(IdentityReport { checks })
}
