//! Operators on the fermionic two-level space with Grassmann coefficients.
//!
//! An operator is `Σ x_ij E_ij` with `E_ij = |i⟩⟨j|`. `E_ij` is odd when
//! `i + j` is odd, so generators anticommute with `a = E_01` and
//! `a† = E_10`: moving a coefficient `y` to the left past `E_ij` twists it.
//! Kets are stored in column 0, bras in row 0.

use super::poly::{Coefficient, GrassmannPoly, Universe};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct GOp<T: Coefficient> {
    /// `e[i][j]` is the coefficient of `E_ij`.
    e: [[GrassmannPoly<T>; 2]; 2],
}

fn odd(i: usize, j: usize) -> bool {
    (i + j) % 2 == 1
}

impl<T: Coefficient> GOp<T> {
    pub fn zero(u: &Universe) -> Self {
        let z = GrassmannPoly::zero(u);
        Self {
            e: [[z.clone(), z.clone()], [z.clone(), z]],
        }
    }

    /// `x·E_ij`.
    pub fn unit(u: &Universe, i: usize, j: usize, x: GrassmannPoly<T>) -> Self {
        let mut out = Self::zero(u);
        out.e[i][j] = x;
        out
    }

    /// `s·𝟙` for a Grassmann scalar `s`.
    pub fn scalar(s: &GrassmannPoly<T>) -> Self {
        let mut out = Self::zero(s.universe());
        out.e[0][0] = s.clone();
        out.e[1][1] = s.clone();
        out
    }

    pub fn identity(u: &Universe) -> Self {
        Self::scalar(&GrassmannPoly::one(u))
    }

    /// Annihilator `a = |0⟩⟨1|`.
    pub fn a(u: &Universe) -> Self {
        Self::unit(u, 0, 1, GrassmannPoly::one(u))
    }

    /// Creator `a† = |1⟩⟨0|`.
    pub fn a_dag(u: &Universe) -> Self {
        Self::unit(u, 1, 0, GrassmannPoly::one(u))
    }

    /// `a†a = |1⟩⟨1|`.
    pub fn number(u: &Universe) -> Self {
        Self::unit(u, 1, 1, GrassmannPoly::one(u))
    }

    /// `|0⟩` as a column.
    pub fn vacuum_ket(u: &Universe) -> Self {
        Self::unit(u, 0, 0, GrassmannPoly::one(u))
    }

    pub fn entry(&self, i: usize, j: usize) -> &GrassmannPoly<T> {
        &self.e[i][j]
    }

    pub fn universe(&self) -> &Universe {
        self.e[0][0].universe()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(|x| x.is_zero())
    }

    fn map(
        &self,
        f: impl Fn(usize, usize, &GrassmannPoly<T>) -> Result<GrassmannPoly<T>>,
    ) -> Result<Self> {
        let mut out = Self::zero(self.universe());
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = f(i, j, &self.e[i][j])?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.map(|i, j, x| x.add(&other.e[i][j]))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.map(|i, j, x| x.sub(&other.e[i][j]))
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|_, _, x| Ok(x.scale(c)))
            .expect("entrywise scaling")
    }

    /// `(x E_ij)(y E_kl) = x·twist^{i+j}(y)·δ_jk E_il`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.universe());
        for i in 0..2 {
            for j in 0..2 {
                if self.e[i][j].is_zero() {
                    continue;
                }
                for l in 0..2 {
                    let y = other.e[j][l].twist_if(odd(i, j));
                    let term = self.e[i][j].mul(&y)?;
                    out.e[i][l] = out.e[i][l].add(&term)?;
                }
            }
        }
        Ok(out)
    }

    /// `s·X` for a Grassmann scalar on the left.
    pub fn left_scalar(&self, s: &GrassmannPoly<T>) -> Result<Self> {
        Self::scalar(s).mul(self)
    }

    /// `X·s` for a Grassmann scalar on the right.
    pub fn right_scalar(&self, s: &GrassmannPoly<T>) -> Result<Self> {
        self.mul(&Self::scalar(s))
    }

    /// `(x E_ij)† = twist^{i+j}(x*) E_ji`.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero(self.universe());
        for i in 0..2 {
            for j in 0..2 {
                out.e[j][i] = self.e[i][j].conjugate().twist_if(odd(i, j));
            }
        }
        out
    }

    /// Left derivative of every coefficient.
    pub fn derivative_left(&self, g: &str) -> Result<Self> {
        self.map(|_, _, x| x.derivative_left(g))
    }

    /// Berezin integral of every coefficient.
    pub fn berezin(&self, measure: &[&str]) -> Result<Self> {
        self.map(|_, _, x| x.berezin(measure))
    }

    /// Largest coefficient magnitude over all entries.
    pub fn max_abs(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|x| x.max_abs())
            .fold(0.0, f64::max)
    }

    /// `E_00: …; E_01: …` listing of the nonzero entries.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                if !self.e[i][j].is_zero() {
                    parts.push(format!("|{i}⟩⟨{j}|: {}", self.e[i][j]));
                }
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("; ")
        }
    }
}
