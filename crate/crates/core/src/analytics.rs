//! Closed-form occupation and current for the two-bath mode.
//!
//! All rates in s⁻¹, times in s. The current counts particles per second;
//! no charge factor is applied.

use crate::error::{Error, Result};
use crate::reservoirs::{ReservoirSpec, Statistics, SystemSpec, HBAR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportParams {
    pub gamma_e: f64,
    pub gamma_c: f64,
    pub nbar_e: f64,
    pub nbar_c: f64,
    /// Initial occupation ⟨n̂⟩(0).
    pub n0: f64,
    pub omega_s: f64,
    pub statistics: Statistics,
}

impl TransportParams {
    /// Fermionic parameters; every occupation must lie in [0, 1].
    pub fn fermionic(
        gamma_e: f64,
        gamma_c: f64,
        nbar_e: f64,
        nbar_c: f64,
        n0: f64,
        omega_s: f64,
    ) -> Result<Self> {
        let p = Self {
            gamma_e,
            gamma_c,
            nbar_e,
            nbar_c,
            n0,
            omega_s,
            statistics: Statistics::Fermionic,
        };
        p.validate()?;
        Ok(p)
    }

    /// Bosonic parameters; occupations must be non-negative.
    pub fn bosonic(
        gamma_e: f64,
        gamma_c: f64,
        nbar_e: f64,
        nbar_c: f64,
        n0: f64,
        omega_s: f64,
    ) -> Result<Self> {
        let p = Self {
            gamma_e,
            gamma_c,
            nbar_e,
            nbar_c,
            n0,
            omega_s,
            statistics: Statistics::Bosonic,
        };
        p.validate()?;
        Ok(p)
    }

    /// Occupations evaluated from bath temperatures at the system frequency.
    pub fn from_reservoirs(
        system: &SystemSpec,
        emitter: &ReservoirSpec,
        collector: &ReservoirSpec,
    ) -> Result<Self> {
        if emitter.statistics != system.statistics || collector.statistics != system.statistics {
            return Err(Error::Domain(
                "system and both reservoirs must share one statistics".into(),
            ));
        }
        let p = Self {
            gamma_e: emitter.coupling,
            gamma_c: collector.coupling,
            nbar_e: emitter.occupation(system.omega_s)?,
            nbar_c: collector.occupation(system.omega_s)?,
            n0: system.initial_occupation,
            omega_s: system.omega_s,
            statistics: system.statistics,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let rates_ok = [self.gamma_e, self.gamma_c]
            .iter()
            .all(|g| *g >= 0.0 && g.is_finite());
        if !rates_ok || !(self.gamma_e + self.gamma_c > 0.0) {
            return Err(Error::Domain(format!(
                "rates must be non-negative with a positive sum, got γ_e={}, γ_c={}",
                self.gamma_e, self.gamma_c
            )));
        }
        if !(self.omega_s > 0.0) || !self.omega_s.is_finite() {
            return Err(Error::Domain(format!(
                "system frequency must be positive, got {}",
                self.omega_s
            )));
        }
        let occ = [self.nbar_e, self.nbar_c, self.n0];
        let ok = match self.statistics {
            Statistics::Fermionic => occ.iter().all(|n| (0.0..=1.0).contains(n)),
            Statistics::Bosonic => occ.iter().all(|n| *n >= 0.0 && n.is_finite()),
        };
        if !ok {
            return Err(Error::Domain(format!(
                "occupations {occ:?} out of range for {:?} statistics",
                self.statistics
            )));
        }
        Ok(())
    }

    /// `γ_e + γ_c`, the relaxation rate of every closed form here.
    pub fn total_rate(&self) -> f64 {
        self.gamma_e + self.gamma_c
    }

    /// `γ_e n̄_e + γ_c n̄_c`.
    pub fn weighted_occupation_rate(&self) -> f64 {
        self.gamma_e * self.nbar_e + self.gamma_c * self.nbar_c
    }

    pub fn with_n0(mut self, n0: f64) -> Result<Self> {
        self.n0 = n0;
        self.validate()?;
        Ok(self)
    }
}

/// `(γ_e n̄_e + γ_c n̄_c)/(γ_e + γ_c)`.
pub fn steady_occupation(p: &TransportParams) -> f64 {
    p.weighted_occupation_rate() / p.total_rate()
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "time must be finite and ≥ 0, got {t}"
        )));
    }
    Ok(())
}

/// `n̄_s + (n0 − n̄_s)e^{−(γ_e+γ_c)t}`.
pub fn occupation_closed_form(p: &TransportParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let ns = steady_occupation(p);
    Ok(ns + (p.n0 - ns) * (-p.total_rate() * t).exp())
}

/// Inflow from the emitter minus outflow to the collector at occupation `n`.
pub fn flux_residual(p: &TransportParams, n: f64) -> f64 {
    p.gamma_e * (p.nbar_e - n) - p.gamma_c * (n - p.nbar_c)
}

/// `½[γ_e(n̄_e − n) + γ_c(n − n̄_c)]`.
pub fn current_at_occupation(p: &TransportParams, n: f64) -> f64 {
    0.5 * (p.gamma_e * (p.nbar_e - n) + p.gamma_c * (n - p.nbar_c))
}

/// Initial and asymptotic current.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentConstants {
    pub i0: f64,
    pub is: f64,
}

pub fn current_constants(p: &TransportParams) -> CurrentConstants {
    let g = p.total_rate();
    CurrentConstants {
        i0: current_at_occupation(p, p.n0),
        // direct product form, so n̄_e = 1, n̄_c = 0 gives γ_eγ_c/(γ_e+γ_c) to the last bit
        is: p.gamma_e * p.gamma_c / g * (p.nbar_e - p.nbar_c),
    }
}

/// `I_s + (I_0 − I_s)e^{−(γ_e+γ_c)t}`.
pub fn current_closed_form(p: &TransportParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let c = current_constants(p);
    Ok(c.is + (c.i0 - c.is) * (-p.total_rate() * t).exp())
}

/// `ħω_s I_s`, in watts.
pub fn steady_energy_loss(p: &TransportParams) -> f64 {
    HBAR * p.omega_s * current_constants(p).is
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentTrace {
    pub times: Vec<f64>,
    pub occupation: Vec<f64>,
    pub current: Vec<f64>,
}

/// Closed-form occupation and current sampled on a non-decreasing grid.
pub fn current_trace(p: &TransportParams, times: &[f64]) -> Result<CurrentTrace> {
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Configuration(
            "time grid must be non-decreasing".into(),
        ));
    }
    let occupation = times
        .iter()
        .map(|&t| occupation_closed_form(p, t))
        .collect::<Result<Vec<_>>>()?;
    let current = times
        .iter()
        .map(|&t| current_closed_form(p, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurrentTrace {
        times: times.to_vec(),
        occupation,
        current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(ge: f64, gc: f64, ne: f64, nc: f64, n0: f64) -> TransportParams {
        TransportParams::fermionic(ge, gc, ne, nc, n0, 1e12).unwrap()
    }

    #[test]
    fn occupation_endpoints() {
        let p = params(2e9, 1e9, 0.4, 0.1, 1.0);
        assert_eq!(occupation_closed_form(&p, 0.0).unwrap(), 1.0);
        let late = occupation_closed_form(&p, 1e3 / p.total_rate()).unwrap();
        assert!((late - 0.3).abs() < 1e-15);
        assert!(occupation_closed_form(&p, -1.0).is_err());
    }

    #[test]
    fn occupation_quarter_at_half_life() {
        let p = params(1.0, 1.0, 1.0, 0.0, 0.0);
        let n = occupation_closed_form(&p, 2f64.ln() / 2.0).unwrap();
        assert!((n - 0.25).abs() < 1e-15);
    }

    #[test]
    fn flux_residual_cases() {
        let p = params(2.0, 3.0, 0.7, 0.2, 0.0);
        assert!(flux_residual(&p, steady_occupation(&p)).abs() < 1e-15);
        assert_eq!(flux_residual(&p, 0.0), p.weighted_occupation_rate());
        let one = params(2.0, 0.0, 0.7, 0.2, 0.0);
        assert_eq!(flux_residual(&one, 0.7), 0.0);
    }

    #[test]
    fn steady_current_full_emitter_empty_collector() {
        let p = params(3e9, 1e9, 1.0, 0.0, 0.0);
        assert_eq!(current_constants(&p).is, 3e9 * 1e9 / 4e9);
    }

    #[test]
    fn equal_baths_carry_no_steady_current() {
        let p = params(3.0, 1.0, 0.4, 0.4, 1.0);
        assert_eq!(current_constants(&p).is, 0.0);
    }

    #[test]
    fn steady_start_keeps_current_flat() {
        let p0 = params(3.0, 1.0, 0.8, 0.2, 0.0);
        let p = p0.with_n0(steady_occupation(&p0)).unwrap();
        let is = current_constants(&p).is;
        for k in 0..20 {
            let i = current_closed_form(&p, k as f64 * 0.1).unwrap();
            assert!((i - is).abs() < 1e-15);
        }
    }

    #[test]
    fn energy_loss() {
        let g = 1e9;
        let p = params(g, g, 1.0, 0.0, 0.0);
        let e = steady_energy_loss(&p);
        assert!((e - HBAR * 1e12 * g / 2.0).abs() <= 1e-15 * e);
        let doubled = params(2.0 * g, 2.0 * g, 1.0, 0.0, 0.0);
        assert!((steady_energy_loss(&doubled) - 2.0 * e).abs() <= 1e-15 * e);
        assert_eq!(steady_energy_loss(&params(g, g, 0.3, 0.3, 0.0)), 0.0);
    }

    #[test]
    fn validation() {
        assert!(TransportParams::fermionic(0.0, 0.0, 0.5, 0.5, 0.0, 1.0).is_err());
        assert!(TransportParams::fermionic(1.0, 0.0, 1.5, 0.5, 0.0, 1.0).is_err());
        assert!(TransportParams::bosonic(1.0, 0.0, 1.5, 0.5, 3.0, 1.0).is_ok());
        assert!(TransportParams::bosonic(1.0, 0.0, 1.5, 0.5, 3.0, 0.0).is_err());
    }

    #[test]
    fn from_reservoirs_uses_system_frequency() {
        let sys = SystemSpec::new(1e12, Statistics::Fermionic, 1.0).unwrap();
        let e = ReservoirSpec::new(300.0, 1e9, Statistics::Fermionic).unwrap();
        let c = ReservoirSpec::new(150.0, 2e9, Statistics::Fermionic).unwrap();
        let p = TransportParams::from_reservoirs(&sys, &e, &c).unwrap();
        assert_eq!(p.nbar_e, e.occupation(1e12).unwrap());
        assert_eq!(p.gamma_c, 2e9);
        let b = ReservoirSpec::new(150.0, 2e9, Statistics::Bosonic).unwrap();
        assert!(TransportParams::from_reservoirs(&sys, &e, &b).is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn arb_params() -> impl Strategy<Value = TransportParams> {
            (
                1e-3f64..10.0,
                1e-3f64..10.0,
                0.0f64..=1.0,
                0.0f64..=1.0,
                0.0f64..=1.0,
            )
                .prop_map(|(ge, gc, ne, nc, n0)| {
                    TransportParams::fermionic(ge, gc, ne, nc, n0, 1.0).unwrap()
                })
        }

        proptest! {
            #[test]
            fn current_from_occupation_matches_exponential(p in arb_params(), t in 0.0f64..5.0) {
                let n = occupation_closed_form(&p, t).unwrap();
                let a = current_at_occupation(&p, n);
                let b = current_closed_form(&p, t).unwrap();
                prop_assert!((a - b).abs() <= 1e-12);
            }

            #[test]
            fn current_is_monotone(p in arb_params()) {
                let c = current_constants(&p);
                let s = (c.i0 - c.is).signum();
                let mut prev = current_closed_form(&p, 0.0).unwrap();
                for k in 1..100 {
                    let i = current_closed_form(&p, k as f64 * 0.05).unwrap();
                    // decreasing when starting above the asymptote, else increasing
                    prop_assert!(s * (prev - i) >= -1e-15);
                    prev = i;
                }
            }

            #[test]
            fn occupation_stays_in_unit_interval(p in arb_params(), t in 0.0f64..50.0) {
                let n = occupation_closed_form(&p, t).unwrap();
                prop_assert!((-1e-15..=1.0 + 1e-15).contains(&n));
            }
        }
    }
}
