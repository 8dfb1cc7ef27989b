//! Closed-form time profiles `(zeta, eta)` driving the barrier amplitudes
//! and support radii. Six families cover decaying, growing and blowing-up
//! regimes; each evaluates its values and derivatives exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floor for the shift of log-decay profiles: `log(tau + t)` must stay
/// at or above 1 on the whole half-line.
pub const LOG_FAMILY_TAU_FLOOR: f64 = std::f64::consts::E;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileFamily {
    /// `zeta = (tau+t)^-alpha log(tau+t)^(beta/(m-1))`, `eta = log(tau+t)^-beta`.
    DecayLogPower,
    /// `zeta = (tau+t)^-alpha`, `eta = (tau+t)^-beta`.
    DecayPower,
    /// `zeta = (tau+t)^alpha`, `eta = (tau+t)^-beta`.
    GrowthPower,
    /// `zeta = exp(alpha (tau+t))`, `eta = exp(-beta (tau+t))`.
    GrowthExp,
    /// `zeta = (T-t)^-alpha (-log(T-t))^(beta/(m-1))`, `eta = (-log(T-t))^-beta`.
    BlowupLog,
    /// `zeta = (T-t)^-alpha`, `eta = (T-t)^beta`.
    BlowupPower,
}

impl ProfileFamily {
    /// True for the families defined on `[0, T)` with a finite horizon.
    pub fn has_finite_horizon(self) -> bool {
        matches!(self, ProfileFamily::BlowupLog | ProfileFamily::BlowupPower)
    }
}

/// Time horizon of a profile: either the half-line `[0, inf)` behind a
/// shift `tau`, or `[0, T)` with a blow-up time `T` in `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Horizon {
    Shifted { tau: f64 },
    Blowup { t_end: f64 },
}

/// One `(zeta, eta)` pair with exact derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeProfile {
    family: ProfileFamily,
    alpha: f64,
    beta: f64,
    horizon: Horizon,
    m: f64,
}

impl TimeProfile {
    pub fn new(
        family: ProfileFamily,
        alpha: f64,
        beta: f64,
        m: f64,
        horizon: Horizon,
    ) -> Result<Self> {
        if !(m > 1.0) {
            return Err(Error::Contract(format!("profile needs m > 1, got {m}")));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::Contract(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::Contract(format!("beta must be >= 0, got {beta}")));
        }
        match (family.has_finite_horizon(), horizon) {
            (true, Horizon::Blowup { t_end }) => {
                if !(t_end > 0.0 && t_end < 1.0) {
                    return Err(Error::Contract(format!(
                        "blow-up horizon must lie in (0, 1), got {t_end}"
                    )));
                }
            }
            (false, Horizon::Shifted { tau }) => {
                let floor = match family {
                    ProfileFamily::DecayLogPower => LOG_FAMILY_TAU_FLOOR,
                    ProfileFamily::GrowthExp => 0.0,
                    _ => f64::MIN_POSITIVE,
                };
                if !(tau >= floor) {
                    return Err(Error::Contract(format!(
                        "family {family:?} needs tau >= {floor}, got {tau}"
                    )));
                }
            }
            _ => {
                return Err(Error::Contract(format!(
                    "horizon {horizon:?} does not match family {family:?}"
                )));
            }
        }
        Ok(TimeProfile {
            family,
            alpha,
            beta,
            horizon,
            m,
        })
    }

    pub fn decay_log_power(alpha: f64, beta: f64, m: f64, tau: f64) -> Result<Self> {
        Self::new(
            ProfileFamily::DecayLogPower,
            alpha,
            beta,
            m,
            Horizon::Shifted { tau },
        )
    }

    pub fn decay_power(alpha: f64, beta: f64, m: f64, tau: f64) -> Result<Self> {
        Self::new(
            ProfileFamily::DecayPower,
            alpha,
            beta,
            m,
            Horizon::Shifted { tau },
        )
    }

    pub fn growth_power(alpha: f64, beta: f64, m: f64, tau: f64) -> Result<Self> {
        Self::new(
            ProfileFamily::GrowthPower,
            alpha,
            beta,
            m,
            Horizon::Shifted { tau },
        )
    }

    pub fn growth_exp(alpha: f64, beta: f64, m: f64, tau: f64) -> Result<Self> {
        Self::new(
            ProfileFamily::GrowthExp,
            alpha,
            beta,
            m,
            Horizon::Shifted { tau },
        )
    }

    pub fn blowup_log(alpha: f64, beta: f64, m: f64, t_end: f64) -> Result<Self> {
        Self::new(
            ProfileFamily::BlowupLog,
            alpha,
            beta,
            m,
            Horizon::Blowup { t_end },
        )
    }

    pub fn blowup_power(alpha: f64, beta: f64, m: f64, t_end: f64) -> Result<Self> {
        Self::new(
            ProfileFamily::BlowupPower,
            alpha,
            beta,
            m,
            Horizon::Blowup { t_end },
        )
    }

    pub fn family(&self) -> ProfileFamily {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    /// Shift `tau` for half-line families.
    pub fn tau(&self) -> Option<f64> {
        match self.horizon {
            Horizon::Shifted { tau } => Some(tau),
            Horizon::Blowup { .. } => None,
        }
    }

    /// Finite horizon `T` for blow-up families.
    pub fn blowup_time(&self) -> Option<f64> {
        match self.horizon {
            Horizon::Shifted { .. } => None,
            Horizon::Blowup { t_end } => Some(t_end),
        }
    }

    /// True when `t` lies in the profile's time domain.
    pub fn contains(&self, t: f64) -> bool {
        if !(t >= 0.0) || !t.is_finite() {
            return false;
        }
        match self.horizon {
            Horizon::Shifted { .. } => true,
            Horizon::Blowup { t_end } => t < t_end,
        }
    }

    pub fn require_in_domain(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "t = {t} outside the domain of {:?} with horizon {:?}",
                self.family, self.horizon
            )))
        }
    }

    /// Amplitude factor `zeta(t)`.
    pub fn zeta(&self, t: f64) -> f64 {
        let c = self.beta / (self.m - 1.0);
        match (self.family, self.horizon) {
            (ProfileFamily::DecayLogPower, Horizon::Shifted { tau }) => {
                let s = tau + t;
                s.powf(-self.alpha) * s.ln().powf(c)
            }
            (ProfileFamily::DecayPower, Horizon::Shifted { tau }) => (tau + t).powf(-self.alpha),
            (ProfileFamily::GrowthPower, Horizon::Shifted { tau }) => (tau + t).powf(self.alpha),
            (ProfileFamily::GrowthExp, Horizon::Shifted { tau }) => (self.alpha * (tau + t)).exp(),
            (ProfileFamily::BlowupLog, Horizon::Blowup { t_end }) => {
                let x = t_end - t;
                x.powf(-self.alpha) * (-x.ln()).powf(c)
            }
            (ProfileFamily::BlowupPower, Horizon::Blowup { t_end }) => {
                (t_end - t).powf(-self.alpha)
            }
            _ => unreachable!("horizon validated at construction"),
        }
    }

    /// `zeta'(t)` in closed form.
    pub fn dzeta(&self, t: f64) -> f64 {
        let c = self.beta / (self.m - 1.0);
        match (self.family, self.horizon) {
            (ProfileFamily::DecayLogPower, Horizon::Shifted { tau }) => {
                let s = tau + t;
                let l = s.ln();
                s.powf(-self.alpha - 1.0) * (-self.alpha * l.powf(c) + c * l.powf(c - 1.0))
            }
            (ProfileFamily::DecayPower, Horizon::Shifted { tau }) => {
                -self.alpha * (tau + t).powf(-self.alpha - 1.0)
            }
            (ProfileFamily::GrowthPower, Horizon::Shifted { tau }) => {
                self.alpha * (tau + t).powf(self.alpha - 1.0)
            }
            (ProfileFamily::GrowthExp, Horizon::Shifted { tau }) => {
                self.alpha * (self.alpha * (tau + t)).exp()
            }
            (ProfileFamily::BlowupLog, Horizon::Blowup { t_end }) => {
                let x = t_end - t;
                let l = -x.ln();
                x.powf(-self.alpha - 1.0) * (self.alpha * l.powf(c) + c * l.powf(c - 1.0))
            }
            (ProfileFamily::BlowupPower, Horizon::Blowup { t_end }) => {
                self.alpha * (t_end - t).powf(-self.alpha - 1.0)
            }
            _ => unreachable!("horizon validated at construction"),
        }
    }

    /// Support-shape factor `eta(t)`. Positive and nonincreasing on every
    /// family's domain.
    pub fn eta(&self, t: f64) -> f64 {
        match (self.family, self.horizon) {
            (ProfileFamily::DecayLogPower, Horizon::Shifted { tau }) => {
                (tau + t).ln().powf(-self.beta)
            }
            (ProfileFamily::DecayPower, Horizon::Shifted { tau })
            | (ProfileFamily::GrowthPower, Horizon::Shifted { tau }) => {
                (tau + t).powf(-self.beta)
            }
            (ProfileFamily::GrowthExp, Horizon::Shifted { tau }) => {
                (-self.beta * (tau + t)).exp()
            }
            (ProfileFamily::BlowupLog, Horizon::Blowup { t_end }) => {
                (-(t_end - t).ln()).powf(-self.beta)
            }
            (ProfileFamily::BlowupPower, Horizon::Blowup { t_end }) => {
                (t_end - t).powf(self.beta)
            }
            _ => unreachable!("horizon validated at construction"),
        }
    }

    /// `eta'(t)` in closed form.
    pub fn deta(&self, t: f64) -> f64 {
        match (self.family, self.horizon) {
            (ProfileFamily::DecayLogPower, Horizon::Shifted { tau }) => {
                let s = tau + t;
                -self.beta * s.ln().powf(-self.beta - 1.0) / s
            }
            (ProfileFamily::DecayPower, Horizon::Shifted { tau })
            | (ProfileFamily::GrowthPower, Horizon::Shifted { tau }) => {
                -self.beta * (tau + t).powf(-self.beta - 1.0)
            }
            (ProfileFamily::GrowthExp, Horizon::Shifted { tau }) => {
                -self.beta * (-self.beta * (tau + t)).exp()
            }
            (ProfileFamily::BlowupLog, Horizon::Blowup { t_end }) => {
                let x = t_end - t;
                -self.beta * (-x.ln()).powf(-self.beta - 1.0) / x
            }
            (ProfileFamily::BlowupPower, Horizon::Blowup { t_end }) => {
                -self.beta * (t_end - t).powf(self.beta - 1.0)
            }
            _ => unreachable!("horizon validated at construction"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn families() -> Vec<TimeProfile> {
        vec![
            TimeProfile::decay_log_power(1.0, 1.0, 2.0, 100.0).unwrap(),
            TimeProfile::decay_power(0.75, 0.25, 2.0, 5.0).unwrap(),
            TimeProfile::growth_power(1.0, 1.5, 3.0, 4.0).unwrap(),
            TimeProfile::growth_exp(0.8, 0.8, 3.0, 0.5).unwrap(),
            TimeProfile::blowup_log(1.0, 1.0, 2.0, 0.5).unwrap(),
            TimeProfile::blowup_power(2.0, 0.5, 2.0, 0.25).unwrap(),
        ]
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for profile in families() {
            let t_hi = profile.blowup_time().map_or(20.0, |t_end| 0.9 * t_end);
            for i in 1..40 {
                let t = t_hi * i as f64 / 40.0;
                let h = 1e-6 * t_hi;
                let fd_zeta = (profile.zeta(t + h) - profile.zeta(t - h)) / (2.0 * h);
                let fd_eta = (profile.eta(t + h) - profile.eta(t - h)) / (2.0 * h);
                assert_relative_eq!(profile.dzeta(t), fd_zeta, max_relative = 1e-6);
                assert_relative_eq!(profile.deta(t), fd_eta, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn eta_positive_and_nonincreasing() {
        for profile in families() {
            let t_hi = profile.blowup_time().map_or(50.0, |t_end| 0.999 * t_end);
            let mut prev = f64::INFINITY;
            for i in 0..=200 {
                let t = t_hi * i as f64 / 200.0;
                let eta = profile.eta(t);
                assert!(eta > 0.0);
                assert!(eta <= prev + 1e-15 * prev.abs());
                prev = eta;
            }
        }
    }

    #[test]
    fn domain_checks() {
        let blowup = TimeProfile::blowup_power(2.0, 0.5, 2.0, 0.25).unwrap();
        assert!(blowup.contains(0.2499));
        assert!(!blowup.contains(0.25));
        assert!(!blowup.contains(-0.1));
        assert!(blowup.require_in_domain(0.3).is_err());

        let shifted = TimeProfile::decay_power(1.0, 0.5, 2.0, 1.0).unwrap();
        assert!(shifted.contains(1e9));
    }

    #[test]
    fn construction_rejects_mismatches() {
        assert!(TimeProfile::decay_log_power(1.0, 1.0, 2.0, 1.0).is_err()); // tau below e
        assert!(TimeProfile::blowup_power(2.0, 0.5, 2.0, 1.5).is_err()); // T outside (0,1)
        assert!(TimeProfile::new(
            ProfileFamily::BlowupLog,
            1.0,
            1.0,
            2.0,
            Horizon::Shifted { tau: 1.0 },
        )
        .is_err());
        assert!(TimeProfile::decay_power(1.0, 0.5, 1.0, 1.0).is_err()); // m must exceed 1
    }
}
