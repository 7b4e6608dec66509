use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest generator universe.
pub const MAX_GENERATORS: usize = 8;

/// Scalar field for polynomial coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn conj(&self) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_complex64(&self) -> Complex64;
}

impl Coefficient for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn to_complex64(&self) -> Complex64 {
        *self
    }
}

/// Exact complex rationals.
pub type Exact = Complex<BigRational>;

/// Exact value of a finite double. Panics on NaN or infinity.
pub fn exact_from_f64(x: f64) -> Exact {
    Exact::new(
        BigRational::from_float(x).expect("finite value"),
        BigRational::zero(),
    )
}

impl Coefficient for Exact {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Exact::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn from_f64(x: f64) -> Self {
        exact_from_f64(x)
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

#[derive(Debug, PartialEq, Eq)]
struct UniverseData {
    names: Vec<String>,
    /// `conj[i]` is the index of the conjugate generator.
    conj: Vec<usize>,
}

/// Ordered set of anticommuting generators. The listed order is the
/// canonical order of every monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe(Arc<UniverseData>);

impl Universe {
    /// Generators without a conjugation (each is its own conjugate).
    pub fn new(names: &[&str]) -> Result<Self> {
        let conj = (0..names.len()).collect();
        Self::build(names, conj)
    }

    /// Generators with conjugate pairs given by name.
    pub fn with_pairs(names: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let mut conj: Vec<usize> = (0..names.len()).collect();
        for (a, b) in pairs {
            let i = index_of(names, a)?;
            let j = index_of(names, b)?;
            conj[i] = j;
            conj[j] = i;
        }
        Self::build(names, conj)
    }

    /// `{ξ, ξ*}` with `ξ` first.
    pub fn xi() -> Self {
        Self::with_pairs(&[XI, XI_STAR], &[(XI, XI_STAR)]).expect("two generators")
    }

    fn build(names: &[&str], conj: Vec<usize>) -> Result<Self> {
        if names.is_empty() || names.len() > MAX_GENERATORS {
            return Err(Error::Structural(format!(
                "universe needs 1..={MAX_GENERATORS} generators, got {}",
                names.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Structural(format!("generator {n} listed twice")));
            }
        }
        Ok(Self(Arc::new(UniverseData {
            names: names.iter().map(|s| s.to_string()).collect(),
            conj,
        })))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.0
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Structural(format!("unknown generator {name}")))
    }
}

pub const XI: &str = "ξ";
pub const XI_STAR: &str = "ξ*";

fn index_of(names: &[&str], name: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| *n == name)
        .ok_or_else(|| Error::Structural(format!("unknown generator {name}")))
}

/// Sign of moving the monomial `b` past `a` into canonical order:
/// one transposition per pair `i ∈ a`, `j ∈ b` with `i > j`.
fn merge_sign(a: u16, b: u16) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

/// Finite polynomial in anticommuting generators. Terms are keyed by the
/// bitmask of their generators; no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannPoly<T: Coefficient = Complex64> {
    universe: Universe,
    terms: BTreeMap<u16, T>,
}

impl<T: Coefficient> GrassmannPoly<T> {
    pub fn zero(u: &Universe) -> Self {
        Self {
            universe: u.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(u: &Universe, c: T) -> Self {
        Self::zero(u).with_term(0, c)
    }

    pub fn one(u: &Universe) -> Self {
        Self::constant(u, T::one())
    }

    pub fn generator(u: &Universe, name: &str) -> Result<Self> {
        Ok(Self::zero(u).with_term(1 << u.index(name)?, T::one()))
    }

    /// `c · g₁ g₂ … g_k` in the order given, reduced to canonical order.
    pub fn monomial(u: &Universe, names: &[&str], c: T) -> Result<Self> {
        let mut p = Self::constant(u, c);
        for n in names {
            p = p.mul(&Self::generator(u, n)?)?;
        }
        Ok(p)
    }

    fn with_term(mut self, mask: u16, c: T) -> Self {
        self.add_term(mask, c);
        self
    }

    fn add_term(&mut self, mask: u16, c: T) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&mask) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the canonical monomial `mask`.
    pub fn coefficient(&self, mask: u16) -> T {
        self.terms.get(&mask).cloned().unwrap_or_else(T::zero)
    }

    pub fn scalar_part(&self) -> T {
        self.coefficient(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u16, &T)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Every term has an even number of generators.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 1)
    }

    fn check_universe(&self, other: &Self) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::Structural(
                "polynomials over different universes".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(&self.universe);
        for (m, x) in &self.terms {
            out.add_term(*m, c.clone() * x.clone());
        }
        out
    }

    /// Bilinear product; overlapping generators vanish, reordering signs
    /// are collected.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let mut out = Self::zero(&self.universe);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca.clone() * cb.clone();
                out.add_term(ma | mb, if merge_sign(*ma, *mb) { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Left derivative: anticommute `g` to the front, then delete it.
    pub fn derivative_left(&self, g: &str) -> Result<Self> {
        let i = self.universe.index(g)?;
        let bit = 1u16 << i;
        let mut out = Self::zero(&self.universe);
        for (m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let before = (m & (bit - 1)).count_ones();
            let c = c.clone();
            out.add_term(m & !bit, if before % 2 == 1 { -c } else { c });
        }
        Ok(out)
    }

    /// `∫ dθ₁ … dθ_k f`, the innermost (last listed) variable first.
    /// `∫ dθ f` is the left derivative, so `∫dθ 1 = 0` and `∫dθ θ = 1`.
    pub fn berezin(&self, measure: &[&str]) -> Result<Self> {
        let mut out = self.clone();
        for g in measure.iter().rev() {
            out = out.derivative_left(g)?;
        }
        Ok(out)
    }

    /// Involution: conjugates coefficients, swaps each generator with its
    /// partner and reverses the order of every product.
    pub fn conjugate(&self) -> Self {
        let u = &self.universe;
        let mut out = Self::zero(u);
        for (m, c) in &self.terms {
            let gens: Vec<usize> = (0..u.len()).filter(|i| m & (1 << i) != 0).collect();
            let mut p = Self::constant(u, c.conj());
            for &i in gens.iter().rev() {
                let g = Self::zero(u).with_term(1 << u.0.conj[i], T::one());
                p = p.mul(&g).expect("same universe");
            }
            for (mm, cc) in p.terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Negates odd terms: the sign picked up when moving this element past
    /// one odd generator.
    pub fn twist(&self) -> Self {
        let mut out = self.clone();
        for (m, c) in out.terms.iter_mut() {
            if m.count_ones() % 2 == 1 {
                *c = -c.clone();
            }
        }
        out
    }

    pub fn twist_if(&self, odd: bool) -> Self {
        if odd {
            self.twist()
        } else {
            self.clone()
        }
    }

    /// `Σ xᵏ/k!` for a nilpotent element (no scalar part). The series stops
    /// once a power vanishes, which happens by degree `len + 1`.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.scalar_part().is_zero() {
            return Err(Error::Structural(
                "exponential needs an element without scalar part".into(),
            ));
        }
        let mut sum = Self::one(&self.universe);
        let mut power = Self::one(&self.universe);
        let mut k = 1i64;
        loop {
            power = power.mul(self)?.scale(&T::from_ratio(1, k));
            if power.is_zero() {
                return Ok(sum);
            }
            sum = sum.add(&power)?;
            k += 1;
        }
    }

    /// Same polynomial with coefficients in another field.
    pub fn map_coefficients<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> GrassmannPoly<U> {
        let mut out = GrassmannPoly::<U>::zero(&self.universe);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Largest coefficient magnitude, as a double.
    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_complex64().norm())
            .fold(0.0, f64::max)
    }

    fn monomial_name(&self, m: u16) -> String {
        (0..self.universe.len())
            .filter(|i| m & (1 << i) != 0)
            .map(|i| self.universe.name(i).to_string())
            .collect::<Vec<_>>()
            .join("")
    }
}

fn fmt_real(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        fmt_real(c.re)
    } else if c.re == 0.0 {
        format!("{}i", fmt_real(c.im))
    } else {
        format!("({}{:+}i)", fmt_real(c.re), c.im)
    }
}

impl<T: Coefficient> fmt::Display for GrassmannPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut c = c.to_complex64();
            let neg = c.im == 0.0 && c.re < 0.0;
            if neg {
                c = -c;
            }
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let name = self.monomial_name(*m);
            if *m == 0 {
                write!(f, "{}", fmt_coeff(c))?;
            } else if c == Complex64::new(1.0, 0.0) {
                write!(f, "{name}")?;
            } else {
                write!(f, "{}{name}", fmt_coeff(c))?;
            }
        }
        Ok(())
    }
}

/// Product of two polynomials; errors if their universes differ.
pub fn g_mul<T: Coefficient>(
    a: &GrassmannPoly<T>,
    b: &GrassmannPoly<T>,
) -> Result<GrassmannPoly<T>> {
    a.mul(b)
}

pub fn g_derivative_left<T: Coefficient>(
    a: &GrassmannPoly<T>,
    g: &str,
) -> Result<GrassmannPoly<T>> {
    a.derivative_left(g)
}

pub fn berezin_integrate<T: Coefficient>(
    a: &GrassmannPoly<T>,
    measure: &[&str],
) -> Result<GrassmannPoly<T>> {
    a.berezin(measure)
}

/// The measure `d²ξ = dξ* dξ`.
pub const D2XI: [&str; 2] = [XI_STAR, XI];

/// `δ(ξ, ξ*) = ξξ*`, normalized so that `∫d²ξ δ = 1`.
pub fn grassmann_delta<T: Coefficient>(u: &Universe) -> Result<GrassmannPoly<T>> {
    GrassmannPoly::monomial(u, &[XI, XI_STAR], T::one())
}

/// Exact rational as a float-free string, `p/q` or `p`.
pub fn fmt_exact(c: &Exact) -> String {
    let part = |r: &BigRational| {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    };
    if c.im.is_zero() {
        part(&c.re)
    } else {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        format!("{}{sign}{}i", part(&c.re), part(&c.im.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = GrassmannPoly<Complex64>;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn xi(u: &Universe) -> P {
        P::generator(u, XI).unwrap()
    }

    fn xs(u: &Universe) -> P {
        P::generator(u, XI_STAR).unwrap()
    }

    #[test]
    fn nilpotency_and_anticommutation() {
        let u = Universe::xi();
        assert!(xi(&u).mul(&xi(&u)).unwrap().is_zero());
        let a = xi(&u).mul(&xs(&u)).unwrap();
        let b = xs(&u).mul(&xi(&u)).unwrap();
        assert_eq!(a, b.neg());
    }

    #[test]
    fn hand_expansion() {
        let u = Universe::xi();
        let one = P::one(&u);
        let lhs = one
            .add(&xi(&u))
            .unwrap()
            .mul(&one.add(&xs(&u)).unwrap())
            .unwrap();
        let xixs = P::monomial(&u, &[XI, XI_STAR], c(1.0)).unwrap();
        let rhs = one
            .add(&xi(&u))
            .unwrap()
            .add(&xs(&u))
            .unwrap()
            .add(&xixs)
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn left_derivatives() {
        let u = Universe::xi();
        assert_eq!(xi(&u).derivative_left(XI).unwrap(), P::one(&u));
        let xsxi = P::monomial(&u, &[XI_STAR, XI], c(1.0)).unwrap();
        assert_eq!(xsxi.derivative_left(XI).unwrap(), xs(&u).neg());
        assert!(xs(&u).derivative_left(XI).unwrap().is_zero());
        assert!(matches!(
            xi(&u).derivative_left("θ"),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn berezin_rules() {
        let u = Universe::new(&["θ"]).unwrap();
        assert!(P::one(&u).berezin(&["θ"]).unwrap().is_zero());
        let t = P::generator(&u, "θ").unwrap();
        assert_eq!(t.berezin(&["θ"]).unwrap(), P::one(&u));
        let x = Universe::xi();
        let xsxi = P::monomial(&x, &[XI_STAR, XI], c(1.0)).unwrap();
        assert_eq!(xsxi.berezin(&D2XI).unwrap(), P::constant(&x, c(-1.0)));
        let d: P = grassmann_delta(&x).unwrap();
        assert_eq!(d.berezin(&D2XI).unwrap(), P::one(&x));
        assert!(d.mul(&xi(&x)).unwrap().is_zero());
    }

    #[test]
    fn conjugation_reverses_and_swaps() {
        let u = Universe::xi();
        let p = P::monomial(&u, &[XI, XI_STAR], Complex64::new(0.0, 2.0)).unwrap();
        // (2i ξξ*)* = −2i ξ ξ* (reversed: ξ** ξ* = ξ ξ*)
        let q = P::monomial(&u, &[XI, XI_STAR], Complex64::new(0.0, -2.0)).unwrap();
        assert_eq!(p.conjugate(), q);
        assert_eq!(xi(&u).conjugate(), xs(&u));
        assert_eq!(p.conjugate().conjugate(), p);
    }

    #[test]
    fn gaussian_truncates() {
        let u = Universe::xi();
        let n = P::monomial(&u, &[XI_STAR, XI], c(-2.0)).unwrap();
        let e = n.exp_nilpotent().unwrap();
        assert_eq!(e, P::one(&u).add(&n).unwrap());
        assert!(n.mul(&n).unwrap().is_zero());
        assert!(P::one(&u).exp_nilpotent().is_err());
    }

    #[test]
    fn display() {
        let u = Universe::xi();
        let p = P::constant(&u, c(0.5))
            .sub(&P::monomial(&u, &[XI, XI_STAR], c(1.0)).unwrap())
            .unwrap();
        assert_eq!(p.to_string(), "0.5 - ξξ*");
        assert_eq!(P::zero(&u).to_string(), "0");
    }

    #[test]
    fn exact_coefficients() {
        let u = Universe::xi();
        let half = Exact::from_ratio(1, 2);
        let p = GrassmannPoly::<Exact>::constant(&u, half.clone());
        let q = p.mul(&p).unwrap();
        assert_eq!(q.scalar_part(), Exact::from_ratio(1, 4));
        assert_eq!(fmt_exact(&half), "1/2");
        assert_eq!(exact_from_f64(0.75), Exact::from_ratio(3, 4));
    }

    #[test]
    fn universe_limits() {
        assert!(Universe::new(&[]).is_err());
        let names = ["a", "b", "c", "d", "e", "f", "g", "h", "i"];
        assert!(Universe::new(&names).is_err());
        assert!(Universe::new(&names[..8]).is_ok());
        assert!(Universe::new(&["a", "a"]).is_err());
        let a = P::one(&Universe::xi());
        let b = P::one(&Universe::new(&["θ"]).unwrap());
        assert!(g_mul(&a, &b).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(u: Universe) -> impl Strategy<Value = P> {
            let masks = 1u16 << u.len();
            proptest::collection::vec((0u16..masks, -4i32..=4), 1..=3).prop_map(move |terms| {
                let mut p = P::zero(&u);
                for (m, k) in terms {
                    p.add_term(m, c(k as f64));
                }
                p
            })
        }

        fn four() -> Universe {
            Universe::new(&["a", "b", "c", "d"]).unwrap()
        }

        proptest! {
            #[test]
            fn associative(a in arb_poly(four()), b in arb_poly(four()), cc in arb_poly(four())) {
                let l = a.mul(&b).unwrap().mul(&cc).unwrap();
                let r = a.mul(&b.mul(&cc).unwrap()).unwrap();
                prop_assert_eq!(l, r);
            }

            #[test]
            fn berezin_is_left_derivative(f in arb_poly(Universe::new(&["θ", "φ"]).unwrap())) {
                for g in ["θ", "φ"] {
                    prop_assert_eq!(f.berezin(&[g]).unwrap(), f.derivative_left(g).unwrap());
                }
            }

            #[test]
            fn generators_anticommute(i in 0usize..4, j in 0usize..4) {
                let u = four();
                let gi = P::generator(&u, u.name(i)).unwrap();
                let gj = P::generator(&u, u.name(j)).unwrap();
                let anti = gi.mul(&gj).unwrap().add(&gj.mul(&gi).unwrap()).unwrap();
                prop_assert!(anti.is_zero());
            }
        }
    }
}
