//! Deterministic barrier synthesis following the constructive recipes:
//! amplitude from the sharp amplitude cap, spatial scale by doubling until
//! the structural gains hold, then the time shift (doubling) or blow-up
//! horizon (halving) until the full certificate passes. Fixed starting
//! points and schedules make certificates reproducible across platforms.

use serde::{Deserialize, Serialize};

use crate::barrier::{BarrierKind, BarrierSpec, TimeProfile, LOG_FAMILY_TAU_FLOOR};
use crate::error::{Error, Result};
use crate::util::normalized_margin;

use super::check::{check_subsolution, check_supersolution, derived_coefficient_floor};
use super::{default_time_grid, Certificate, ConditionReport};

/// Doubling/halving budget of every synthesis search.
const SCHEDULE_STEPS: usize = 60;

/// Probe count used while searching; certificates are re-checked on
/// denser grids by callers that need more.
const SEARCH_PROBES: usize = 1000;

/// Upper-barrier recipes, one per admissible time-profile family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupersolutionRegime {
    /// p > m with the sharp log-corrected decay.
    DecayLogPower,
    /// p > m with pure power decay.
    DecayPower,
    /// 1 < p < (m+1)/2 with power growth.
    GrowthPower,
    /// 1 < p <= (m+1)/2 with exponential growth.
    GrowthExp,
}

#[derive(Clone, Copy, Debug)]
pub struct SupersolutionInputs {
    pub m: f64,
    pub p: f64,
    pub dim: u32,
    /// Upper curvature bound constant.
    pub h: f64,
    /// Radius of a ball containing the data support.
    pub support_radius: f64,
    /// Sup-norm bound of the data to dominate.
    pub data_sup: f64,
}

/// Initial-data requirement attached to a synthesized lower barrier: the
/// data must cover the ball of `min_support_radius` with values at least
/// `min_value` there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataRequirement {
    pub min_support_radius: f64,
    pub min_value: f64,
}

/// Lower-barrier recipes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsolutionRegime {
    /// p > m, log-corrected finite-time blow-up.
    BlowupLog,
    /// p > m, pure power finite-time blow-up.
    BlowupPower,
    /// 1 < p < m, unbounded power growth.
    GrowthPower,
}

#[derive(Clone, Copy, Debug)]
pub struct SubsolutionInputs {
    pub m: f64,
    pub p: f64,
    pub dim: u32,
    /// Lower curvature bound constant.
    pub k: f64,
    /// Unit-ball drift constant of the target manifold.
    pub c0: f64,
    /// Profile speed exponent.
    pub alpha: f64,
    /// Profile shape exponent; regime-specific default when absent.
    pub beta: Option<f64>,
    /// Spatial scale of the barrier.
    pub spatial_scale: f64,
}

impl SubsolutionInputs {
    pub fn new(m: f64, p: f64, dim: u32, k: f64, c0: f64, alpha: f64) -> Self {
        SubsolutionInputs {
            m,
            p,
            dim,
            k,
            c0,
            alpha,
            beta: None,
            spatial_scale: 1.0,
        }
    }
}

/// Data-domination factor: on the half-scale ball the initial barrier is
/// at least `C zeta(0) 2^(-1/(m-1))`, and the recipes quote the bound with
/// `2^(-(m-1))`; the smaller of the two is safe for every m > 1.
fn dominance_factor(m: f64) -> f64 {
    0.5f64.powf((m - 1.0).max(1.0 / (m - 1.0)))
}

fn dominance_report(margin: f64) -> ConditionReport {
    ConditionReport {
        id: "data-dominance".into(),
        formula: "sup u0 <= C zeta(0) * 2^(-max(m-1, 1/(m-1)))".into(),
        worst_margin: margin,
        argmin_t: f64::NAN,
        strict: false,
        tail_ok: None,
    }
}

fn support_cover_report(a: f64, r0: f64) -> ConditionReport {
    ConditionReport {
        id: "support-cover".into(),
        formula: "a >= 2 R0".into(),
        worst_margin: normalized_margin(a, 2.0 * r0),
        argmin_t: f64::NAN,
        strict: false,
        tail_ok: None,
    }
}

/// Synthesizes an upper barrier dominating every datum supported in the
/// ball of radius `support_radius` with sup-norm at most `data_sup`,
/// together with its certificate. Fails with the best margin seen when the
/// schedule is exhausted (for the decaying regimes this is how data too
/// large for global existence surface).
pub fn synthesize_supersolution(
    regime: SupersolutionRegime,
    inputs: &SupersolutionInputs,
) -> Result<(BarrierSpec, Certificate)> {
    let SupersolutionInputs {
        m,
        p,
        dim,
        h,
        support_radius: r0,
        data_sup,
    } = *inputs;
    if !(m > 1.0 && p > 1.0) {
        return Err(Error::Contract(format!("needs m, p > 1, got m={m}, p={p}")));
    }
    if dim < 2 || !(h > 0.0) || !(r0 > 0.0) || !(data_sup >= 0.0) {
        return Err(Error::Contract(
            "needs N >= 2, h > 0, R0 > 0, data sup >= 0".into(),
        ));
    }
    let m1 = m - 1.0;
    let nm1 = (dim - 1) as f64;

    // Profile exponents per recipe.
    let (alpha, beta) = match regime {
        SupersolutionRegime::DecayLogPower => {
            if !(p > m) {
                return Err(Error::Regime(format!("log decay needs p > m, got p={p}, m={m}")));
            }
            (1.0 / m1, 1.0)
        }
        SupersolutionRegime::DecayPower => {
            if !(p > m) {
                return Err(Error::Regime(format!("power decay needs p > m, got p={p}, m={m}")));
            }
            let alpha = 0.5 * (1.0 / (p - 1.0) + 1.0 / m1);
            (alpha, 1.0 - alpha * m1)
        }
        SupersolutionRegime::GrowthPower => {
            if !(p < (m + 1.0) / 2.0) {
                return Err(Error::Regime(format!(
                    "power growth needs p < (m+1)/2, got p={p}, m={m}"
                )));
            }
            let alpha = 1.0 / (m - 2.0 * p + 1.0);
            (alpha, (1.0 + alpha * m1) / 2.0)
        }
        SupersolutionRegime::GrowthExp => {
            if !(p <= (m + 1.0) / 2.0) {
                return Err(Error::Regime(format!(
                    "exponential growth needs p <= (m+1)/2, got p={p}, m={m}"
                )));
            }
            let alpha = 8.0 / (m * nm1 * nm1 * h * h);
            (alpha, alpha * m1 / 2.0)
        }
    };

    // Spatial scale: start at the covering/scale floors, double until the
    // regime's gain condition holds. Amplitude rides the sharp cap.
    let mut a = (2.0 * r0).max(2.0 / (h * nm1 * m1));
    let amplitude_at = |a: f64| (m1 * beta / m).powf(1.0 / m1) * a.powf(2.0 / m1);
    let mut chosen = None;
    for _ in 0..SCHEDULE_STEPS {
        let c_amp = amplitude_at(a);
        let gain_ok = match regime {
            SupersolutionRegime::DecayLogPower | SupersolutionRegime::DecayPower => {
                let drift_coef = c_amp.powf(m1) * m / (a * m1);
                nm1 * h / 2.0 * drift_coef >= 2.0 * alpha * (1.0 - 1e-12)
            }
            SupersolutionRegime::GrowthPower | SupersolutionRegime::GrowthExp => {
                c_amp.powf(m - p) / a >= 2.0 * m1 / (m * nm1 * h) * (1.0 - 1e-12)
            }
        };
        if gain_ok {
            chosen = Some((a, c_amp));
            break;
        }
        a *= 2.0;
    }
    let Some((a, c_amp)) = chosen else {
        return Err(Error::SynthesisFailed {
            detail: "spatial scale schedule exhausted without meeting the gain condition".into(),
            worst_margin: f64::NEG_INFINITY,
        });
    };

    // Time shift: grow geometrically from the family floor until the
    // certificate and the data-domination condition both hold.
    let tau_floor = match regime {
        SupersolutionRegime::DecayLogPower => LOG_FAMILY_TAU_FLOOR,
        SupersolutionRegime::DecayPower | SupersolutionRegime::GrowthPower => 1.0,
        SupersolutionRegime::GrowthExp => 0.0,
    };
    let mut tau = tau_floor;
    let mut best_margin = f64::NEG_INFINITY;
    for _ in 0..SCHEDULE_STEPS {
        let profile = match regime {
            SupersolutionRegime::DecayLogPower => TimeProfile::decay_log_power(alpha, beta, m, tau),
            SupersolutionRegime::DecayPower => TimeProfile::decay_power(alpha, beta, m, tau),
            SupersolutionRegime::GrowthPower => TimeProfile::growth_power(alpha, beta, m, tau),
            SupersolutionRegime::GrowthExp => TimeProfile::growth_exp(alpha, beta, m, tau),
        }?;
        let spec = BarrierSpec::new(c_amp, a, profile, p, BarrierKind::OuterSupersolution)?;
        let grid = default_time_grid(&profile, SEARCH_PROBES);
        let mut cert = check_supersolution(&spec, dim, h, &grid)?;
        let dominance = normalized_margin(
            c_amp * profile.zeta(0.0) * dominance_factor(m),
            data_sup,
        );
        cert.conditions.push(dominance_report(dominance));
        cert.conditions.push(support_cover_report(a, r0));
        if cert.is_certified() && dominance >= 0.0 {
            return Ok((spec, cert));
        }
        best_margin = best_margin.max(cert.worst_margin().min(dominance));
        tau = if tau == 0.0 { 1.0 } else { tau * 2.0 };
    }
    Err(Error::SynthesisFailed {
        detail: format!("shift schedule exhausted for {regime:?}"),
        worst_margin: best_margin,
    })
}

/// Synthesizes a lower barrier together with its certificate and the
/// initial-data requirement that activates it.
pub fn synthesize_subsolution(
    regime: SubsolutionRegime,
    inputs: &SubsolutionInputs,
) -> Result<(BarrierSpec, Certificate, DataRequirement)> {
    let SubsolutionInputs {
        m,
        p,
        dim,
        k,
        c0,
        alpha,
        beta,
        spatial_scale: a,
    } = *inputs;
    if !(m > 1.0 && p > 1.0) {
        return Err(Error::Contract(format!("needs m, p > 1, got m={m}, p={p}")));
    }
    if dim < 2 || !(k > 0.0) || !(c0 > 0.0) || !(a > 0.0) {
        return Err(Error::Contract("needs N >= 2, k > 0, C0 > 0, a > 0".into()));
    }
    let m1 = m - 1.0;
    let nm1 = (dim - 1) as f64;

    let beta = match regime {
        SubsolutionRegime::BlowupLog => {
            if !(p > m) {
                return Err(Error::Regime(format!("log blow-up needs p > m, got p={p}, m={m}")));
            }
            let beta = beta.unwrap_or(1.0);
            let at_boundary = (alpha - 1.0 / m1).abs() <= 1e-12 * (1.0 / m1);
            let admissible =
                (alpha > 1.0 / m1 && beta > 0.0) || (at_boundary && beta > 0.0 && beta <= 1.0);
            if !admissible {
                return Err(Error::Regime(format!(
                    "log blow-up needs alpha > 1/(m-1) with beta > 0, or alpha = 1/(m-1) with beta in (0, 1]; got alpha={alpha}, beta={beta}"
                )));
            }
            beta
        }
        SubsolutionRegime::BlowupPower => {
            if !(p > m) {
                return Err(Error::Regime(format!(
                    "power blow-up needs p > m, got p={p}, m={m}"
                )));
            }
            if !(alpha > 1.0 / m1) {
                return Err(Error::Regime(format!(
                    "power blow-up needs alpha > 1/(m-1), got {alpha}"
                )));
            }
            let top = (alpha * m1 - 1.0) / 2.0;
            let beta = beta.unwrap_or(top);
            if !(beta > 0.0 && beta <= top * (1.0 + 1e-12)) {
                return Err(Error::Regime(format!(
                    "power blow-up needs beta in (0, (alpha(m-1)-1)/2]; got beta={beta}, top={top}"
                )));
            }
            beta
        }
        SubsolutionRegime::GrowthPower => {
            if !(p < m) {
                return Err(Error::Regime(format!(
                    "growth needs 1 < p < m, got p={p}, m={m}"
                )));
            }
            if !(alpha > 0.0 && alpha < 1.0 / m1) {
                return Err(Error::Regime(format!(
                    "growth needs alpha in (0, 1/(m-1)), got {alpha}"
                )));
            }
            let forced = (alpha * m1 + 1.0) / 2.0;
            if let Some(b) = beta {
                if (b - forced).abs() > 1e-9 * forced {
                    return Err(Error::Regime(format!(
                        "growth forces beta = (alpha(m-1)+1)/2 = {forced}, got {b}"
                    )));
                }
            }
            forced
        }
    };

    // Amplitude from the larger of the coefficient floor (linear in a) and
    // the steepness floor (quadratic in a).
    let k_coth = k / k.tanh();
    let mut floor = f64::max(
        alpha * m1 / (m * k_coth * nm1),
        (alpha * m1
            + if regime == SubsolutionRegime::GrowthPower {
                0.0
            } else {
                beta
            })
            / (m * c0 * nm1),
    );
    if p > m {
        floor = floor.max(derived_coefficient_floor(m, p, dim, k));
    }
    let cm1 = f64::max(a * floor, a * a * 2.0 * beta * m1 / m);
    let c_amp = cm1.powf(1.0 / m1);

    let mut best_margin = f64::NEG_INFINITY;
    match regime {
        SubsolutionRegime::BlowupLog | SubsolutionRegime::BlowupPower => {
            let mut t_end = 0.5;
            for _ in 0..SCHEDULE_STEPS {
                let profile = match regime {
                    SubsolutionRegime::BlowupLog => TimeProfile::blowup_log(alpha, beta, m, t_end),
                    SubsolutionRegime::BlowupPower => {
                        TimeProfile::blowup_power(alpha, beta, m, t_end)
                    }
                    SubsolutionRegime::GrowthPower => unreachable!(),
                }?;
                if let Ok(spec) =
                    BarrierSpec::new(c_amp, a, profile, p, BarrierKind::GluedSubsolution)
                {
                    let grid = default_time_grid(&profile, SEARCH_PROBES);
                    let cert = check_subsolution(&spec, dim, k, c0, &grid)?;
                    if cert.is_certified() {
                        let data = DataRequirement {
                            min_support_radius: spec.support_radius(0.0)?,
                            min_value: c_amp * profile.zeta(0.0),
                        };
                        return Ok((spec, cert, data));
                    }
                    best_margin = best_margin.max(cert.worst_margin());
                }
                t_end /= 2.0;
            }
        }
        SubsolutionRegime::GrowthPower => {
            let mut tau = 1f64.max((2.0 / a).powf(1.0 / beta));
            for _ in 0..SCHEDULE_STEPS {
                let profile = TimeProfile::growth_power(alpha, beta, m, tau)?;
                if let Ok(spec) =
                    BarrierSpec::new(c_amp, a, profile, p, BarrierKind::GluedSubsolution)
                {
                    let grid = default_time_grid(&profile, SEARCH_PROBES);
                    let cert = check_subsolution(&spec, dim, k, c0, &grid)?;
                    if cert.is_certified() {
                        let data = DataRequirement {
                            min_support_radius: spec.support_radius(0.0)?,
                            min_value: c_amp * profile.zeta(0.0),
                        };
                        return Ok((spec, cert, data));
                    }
                    best_margin = best_margin.max(cert.worst_margin());
                }
                tau *= 2.0;
            }
        }
    }
    Err(Error::SynthesisFailed {
        detail: format!("horizon schedule exhausted for {regime:?}"),
        worst_margin: best_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{check_subsolution, check_supersolution, default_time_grid};
    use approx::assert_relative_eq;

    #[test]
    fn log_decay_recovers_reference_amplitude_and_scale() {
        let inputs = SupersolutionInputs {
            m: 2.0,
            p: 3.0,
            dim: 3,
            h: 1.0,
            support_radius: 1.0,
            data_sup: 0.04,
        };
        let (spec, cert) = synthesize_supersolution(SupersolutionRegime::DecayLogPower, &inputs)
            .unwrap();
        assert!(cert.is_certified());
        // Sharp amplitude cap with beta = 1, m = 2 gives C = a^2/2; the
        // starting scale a = 2 already satisfies every gain condition.
        assert_relative_eq!(spec.spatial_scale(), 2.0);
        assert_relative_eq!(spec.amplitude(), 2.0);
        assert!(spec.profile().tau().unwrap() >= std::f64::consts::E);
        // Dominance with equality-style data: sup u0 = C zeta(0)/2.
        let bound = spec.amplitude() * spec.profile().zeta(0.0) / 2.0;
        assert!(inputs.data_sup <= bound);
    }

    #[test]
    fn synthesized_tuples_recertify_on_denser_grids() {
        let (spec, _) = synthesize_supersolution(
            SupersolutionRegime::GrowthPower,
            &SupersolutionInputs {
                m: 3.0,
                p: 1.5,
                dim: 3,
                h: 1.0,
                support_radius: 1.0,
                data_sup: 0.1,
            },
        )
        .unwrap();
        let dense = default_time_grid(spec.profile(), 10_000);
        let cert = check_supersolution(&spec, 3, 1.0, &dense).unwrap();
        assert!(cert.is_certified(), "{}", cert.render_text());
        // The recipe pins alpha >= 1/(m-2p+1) and the shape-power relation.
        assert_relative_eq!(spec.profile().alpha(), 1.0);
        assert_relative_eq!(spec.profile().beta(), 1.5);

        let (spec, _, _) = synthesize_subsolution(
            SubsolutionRegime::BlowupPower,
            &SubsolutionInputs::new(2.0, 3.0, 3, 1.0, 1.9039, 2.0),
        )
        .unwrap();
        let dense = default_time_grid(spec.profile(), 10_000);
        let cert = check_subsolution(&spec, 3, 1.0, 1.9039, &dense).unwrap();
        assert!(cert.is_certified(), "{}", cert.render_text());
    }

    #[test]
    fn regime_preconditions_are_enforced() {
        let err = synthesize_supersolution(
            SupersolutionRegime::DecayLogPower,
            &SupersolutionInputs {
                m: 2.0,
                p: 1.5,
                dim: 3,
                h: 1.0,
                support_radius: 1.0,
                data_sup: 0.1,
            },
        );
        assert!(matches!(err, Err(Error::Regime(_))));

        let err = synthesize_subsolution(
            SubsolutionRegime::GrowthPower,
            &SubsolutionInputs::new(2.0, 3.0, 3, 1.0, 1.9, 0.5),
        );
        assert!(matches!(err, Err(Error::Regime(_))));
    }

    #[test]
    fn growth_beta_is_forced() {
        let (spec, cert, data) = synthesize_subsolution(
            SubsolutionRegime::GrowthPower,
            &SubsolutionInputs::new(2.0, 1.5, 3, 1.0, 1.9039, 0.5),
        )
        .unwrap();
        assert!(cert.is_certified());
        assert_relative_eq!(spec.profile().beta(), 0.75);
        assert!(data.min_support_radius > 0.0 && data.min_value > 0.0);
    }

    #[test]
    fn blowup_power_beta_range() {
        // alpha = 2, m = 2: admissible beta range is (0, 0.5], defaulted
        // to the top.
        let (spec, _, _) = synthesize_subsolution(
            SubsolutionRegime::BlowupPower,
            &SubsolutionInputs::new(2.0, 3.0, 3, 1.0, 1.9039, 2.0),
        )
        .unwrap();
        assert_relative_eq!(spec.profile().beta(), 0.5);
        let mut bad = SubsolutionInputs::new(2.0, 3.0, 3, 1.0, 1.9039, 2.0);
        bad.beta = Some(0.6);
        assert!(matches!(
            synthesize_subsolution(SubsolutionRegime::BlowupPower, &bad),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn blowup_log_satisfies_drift_domination_at_start() {
        let (spec, cert, _) = synthesize_subsolution(
            SubsolutionRegime::BlowupLog,
            &SubsolutionInputs::new(2.0, 3.0, 3, 1.0, 1.9039, 1.0),
        )
        .unwrap();
        assert!(cert.is_certified());
        // Re-check the horizon condition by direct substitution at probe
        // times: the growth rate dominates the drift constant.
        let (m, p) = (spec.m(), spec.p());
        let t_end = spec.profile().blowup_time().unwrap();
        let k_coth = 1.0 / 1f64.tanh();
        let lhs = 2.0 * m * k_coth * 2.0 / (p - 2.0 + m);
        for i in 0..1000 {
            let t = t_end * (1.0 - 10f64.powf(-6.0 * i as f64 / 999.0));
            let rhs = spec.spatial_scale()
                * spec.amplitude().powf(p - m)
                * spec.profile().zeta(t).powf(p - m)
                / spec.profile().eta(t);
            assert!(rhs >= lhs * (1.0 - 1e-12), "t = {t}");
        }
    }
}
