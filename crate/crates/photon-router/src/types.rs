//! Shared domain types: rate sets, scenario configuration, routing
//! probabilities and sampled correlation surfaces.
//!
//! All rates are dimensionless multiples of a user-chosen reference
//! frequency; times are in inverse-reference units.

use crate::error::{Result, RouterError};

/// All system rates, in a shared angular-frequency unit.
///
/// Unused fields default to zero; each scenario validates the subset it
/// needs. `kappa_s` is the feeder-cavity half-decay (the emitted pulse has
/// intensity envelope `exp(-2 kappa_s t)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    /// Feeder-cavity half-decay rate (inverse pulse width).
    pub kappa_s: f64,
    /// Cavity-enhanced atomic half-decay per output channel (two-level router).
    pub gamma_c: f64,
    /// Three-level source decay rate.
    pub gamma_s: f64,
    /// First-stage (single-sided) cavity-enhanced decay in the cascade.
    pub gamma_c1: f64,
    /// Second-stage (router) cavity-enhanced decay in the cascade.
    pub gamma_c2: f64,
    /// Lambda-atom H-transition cavity-enhanced decay.
    pub gamma_ch: f64,
    /// Lambda-atom V-transition cavity-enhanced decay.
    pub gamma_cv: f64,
    /// Free-space atomic decay (loss channel).
    pub gamma: f64,
    /// Intrinsic cavity loss.
    pub kappa_i: f64,
    /// Cavity-fiber coupling.
    pub kappa_ex: f64,
    /// Atom-cavity coupling.
    pub g: f64,
}

impl Default for RateSet {
    fn default() -> Self {
        RateSet {
            kappa_s: 0.0,
            gamma_c: 0.0,
            gamma_s: 0.0,
            gamma_c1: 0.0,
            gamma_c2: 0.0,
            gamma_ch: 0.0,
            gamma_cv: 0.0,
            gamma: 0.0,
            kappa_i: 0.0,
            kappa_ex: 0.0,
            g: 0.0,
        }
    }
}

impl RateSet {
    /// Multiply every rate by `factor`. Routing probabilities are invariant
    /// under this rescaling (they depend only on rate ratios).
    pub fn scaled(&self, factor: f64) -> RateSet {
        RateSet {
            kappa_s: self.kappa_s * factor,
            gamma_c: self.gamma_c * factor,
            gamma_s: self.gamma_s * factor,
            gamma_c1: self.gamma_c1 * factor,
            gamma_c2: self.gamma_c2 * factor,
            gamma_ch: self.gamma_ch * factor,
            gamma_cv: self.gamma_cv * factor,
            gamma: self.gamma * factor,
            kappa_i: self.kappa_i * factor,
            kappa_ex: self.kappa_ex * factor,
            g: self.g * factor,
        }
    }

    pub(crate) fn require_positive(&self, fields: &[(&'static str, f64)]) -> Result<()> {
        for &(name, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(RouterError::NonPositiveRate { field: name, value });
            }
        }
        Ok(())
    }

    pub(crate) fn require_non_negative(&self, fields: &[(&'static str, f64)]) -> Result<()> {
        for &(name, value) in fields {
            if value < 0.0 || !value.is_finite() {
                return Err(RouterError::NegativeRate { field: name, value });
            }
        }
        Ok(())
    }
}

/// The five scenarios solved in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Two-level atom in a fiber-coupled resonator, fast-cavity regime.
    TwoLevelRouter,
    /// Two-photon-emitting source atom feeding the router (time-energy
    /// entangled input).
    EntangledSourceRouter,
    /// Single-sided cavity QED stage cascaded into the router.
    TwoStageCascade,
    /// Single-sided cavity QED system alone (bunched output state).
    SingleSidedBunching,
    /// Three-level atom in the Lambda configuration, single-sided cavity.
    LambdaRouter,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::TwoLevelRouter => "two-level",
            Scenario::EntangledSourceRouter => "entangled-source",
            Scenario::TwoStageCascade => "two-stage-cascade",
            Scenario::SingleSidedBunching => "single-sided-bunching",
            Scenario::LambdaRouter => "lambda",
        }
    }

    pub fn parse(s: &str) -> Option<Scenario> {
        match s {
            "two-level" | "two_level" | "twolevel" => Some(Scenario::TwoLevelRouter),
            "entangled-source" | "entangled_source" | "entangled" => {
                Some(Scenario::EntangledSourceRouter)
            }
            "two-stage-cascade" | "cascade" | "two_stage_cascade" => {
                Some(Scenario::TwoStageCascade)
            }
            "single-sided-bunching" | "single-sided" | "single_sided" => {
                Some(Scenario::SingleSidedBunching)
            }
            "lambda" => Some(Scenario::LambdaRouter),
            _ => None,
        }
    }
}

/// A validated scenario configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub rates: RateSet,
    /// Number of photons in the input pulse. 1 or 2 everywhere; the Lambda
    /// router also accepts larger Fock states.
    pub photon_number: u32,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario, rates: RateSet, photon_number: u32) -> Result<Self> {
        let config = ScenarioConfig {
            scenario,
            rates,
            photon_number,
        };
        config.validate()
    }

    /// Check rate/scenario consistency and return the config unchanged, or a
    /// descriptive error naming the offending field.
    pub fn validate(self) -> Result<Self> {
        let r = &self.rates;
        if self.photon_number < 1 {
            return Err(RouterError::InvalidConfig(
                "photon_number must be at least 1".into(),
            ));
        }
        r.require_non_negative(&[
            ("gamma", r.gamma),
            ("kappa_i", r.kappa_i),
            ("kappa_ex", r.kappa_ex),
            ("g", r.g),
        ])?;
        match self.scenario {
            Scenario::TwoLevelRouter => {
                r.require_positive(&[("kappa_s", r.kappa_s), ("gamma_c", r.gamma_c)])?;
            }
            Scenario::EntangledSourceRouter => {
                r.require_positive(&[
                    ("kappa_s", r.kappa_s),
                    ("gamma_c", r.gamma_c),
                    ("gamma_s", r.gamma_s),
                ])?;
            }
            Scenario::TwoStageCascade => {
                r.require_positive(&[
                    ("kappa_s", r.kappa_s),
                    ("gamma_c2", r.gamma_c2),
                ])?;
                r.require_non_negative(&[("gamma_c1", r.gamma_c1)])?;
            }
            Scenario::SingleSidedBunching => {
                r.require_positive(&[("kappa_s", r.kappa_s), ("gamma_c1", r.gamma_c1)])?;
            }
            Scenario::LambdaRouter => {
                r.require_positive(&[("gamma_ch", r.gamma_ch), ("gamma_cv", r.gamma_cv)])?;
                r.require_non_negative(&[("kappa_s", r.kappa_s)])?;
            }
        }
        if self.photon_number > 2 && self.scenario != Scenario::LambdaRouter {
            return Err(RouterError::PhotonNumber {
                scenario: self.scenario.name(),
                n: self.photon_number,
            });
        }
        Ok(self)
    }
}

/// The four ordered two-photon detection probabilities and the routing
/// efficiency `c_tr = p_tr + p_rt`.
///
/// The superscript order is detection order: `p_tr` is "transmitted first,
/// reflected second".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoutingProbabilities {
    pub p_tr: f64,
    pub p_rt: f64,
    pub p_rr: f64,
    pub p_tt: f64,
    pub c_tr: f64,
}

impl RoutingProbabilities {
    pub fn new(p_tr: f64, p_rt: f64, p_rr: f64, p_tt: f64) -> Self {
        RoutingProbabilities {
            p_tr,
            p_rt,
            p_rr,
            p_tt,
            c_tr: p_tr + p_rt,
        }
    }

    pub fn sum(&self) -> f64 {
        self.p_tr + self.p_rt + self.p_rr + self.p_tt
    }

    /// Rescale all four entries so they sum to one.
    pub fn normalized(&self) -> Self {
        let s = self.sum();
        RoutingProbabilities::new(self.p_tr / s, self.p_rt / s, self.p_rr / s, self.p_tt / s)
    }
}

/// Sampled second-order correlation surfaces for the four ordered channel
/// pairs, on a first-detection-time x interval grid.
#[derive(Debug, Clone)]
pub struct CorrelationGrid {
    /// First-detection times, strictly increasing.
    pub t_axis: Vec<f64>,
    /// Detection intervals (tau >= 0), strictly increasing.
    pub tau_axis: Vec<f64>,
    /// Row-major `t_axis.len() x tau_axis.len()` surfaces.
    pub gamma_tr: Vec<f64>,
    pub gamma_rt: Vec<f64>,
    pub gamma_rr: Vec<f64>,
    pub gamma_tt: Vec<f64>,
}

impl CorrelationGrid {
    pub fn nt(&self) -> usize {
        self.t_axis.len()
    }

    pub fn ntau(&self) -> usize {
        self.tau_axis.len()
    }

    pub fn surfaces(&self) -> [&[f64]; 4] {
        [&self.gamma_tr, &self.gamma_rt, &self.gamma_rr, &self.gamma_tt]
    }
}

/// Input pulse shape for the waveguide propagator. The width parameter is
/// `kappa_s`: exponential pulses decay as `exp(-2 kappa_s t)`; square and
/// Gaussian pulses have intensity half-width-half-maximum `v_g / kappa_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    Exponential,
    Gaussian,
    Square,
}

impl PulseShape {
    pub fn name(&self) -> &'static str {
        match self {
            PulseShape::Exponential => "exponential",
            PulseShape::Gaussian => "gaussian",
            PulseShape::Square => "square",
        }
    }

    pub fn parse(s: &str) -> Option<PulseShape> {
        match s {
            "exponential" | "exp" => Some(PulseShape::Exponential),
            "gaussian" | "gauss" => Some(PulseShape::Gaussian),
            "square" => Some(PulseShape::Square),
            _ => None,
        }
    }
}

/// Pulse specification: shape, width parameter and carrier detuning
/// (nonzero only for strong-coupling sideband driving).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub shape: PulseShape,
    pub kappa_s: f64,
    pub detuning: f64,
}

impl PulseSpec {
    pub fn new(shape: PulseShape, kappa_s: f64) -> Result<Self> {
        if !(kappa_s > 0.0) {
            return Err(RouterError::NonPositiveRate {
                field: "kappa_s",
                value: kappa_s,
            });
        }
        Ok(PulseSpec {
            shape,
            kappa_s,
            detuning: 0.0,
        })
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }
}

/// Parameter sweep request: which rate to vary (or a ratio of two), the
/// grid, and the fixed remaining rates.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Field name from `RateSet`, or "numerator/denominator" for a ratio
    /// sweep (the numerator varies, the denominator stays fixed).
    pub parameter: String,
    pub values: Vec<f64>,
    pub base: ScenarioConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(RouterError::InvalidConfig("sweep grid is empty".into()));
        }
        let increasing = self.values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(RouterError::InvalidConfig(
                "sweep grid must be strictly monotone".into(),
            ));
        }
        Ok(())
    }

    /// Resolve the config at one sweep value.
    pub fn config_at(&self, value: f64) -> Result<ScenarioConfig> {
        let mut rates = self.base.rates;
        let param = self.parameter.as_str();
        let (num, _den) = match param.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (param, None),
        };
        set_rate_field(&mut rates, num, value)?;
        ScenarioConfig::new(self.base.scenario, rates, self.base.photon_number)
    }
}

pub(crate) fn set_rate_field(rates: &mut RateSet, name: &str, value: f64) -> Result<()> {
    match name {
        "kappa_s" => rates.kappa_s = value,
        "gamma_c" => rates.gamma_c = value,
        "gamma_s" => rates.gamma_s = value,
        "gamma_c1" => rates.gamma_c1 = value,
        "gamma_c2" => rates.gamma_c2 = value,
        "gamma_ch" => rates.gamma_ch = value,
        "gamma_cv" => rates.gamma_cv = value,
        "gamma" => rates.gamma = value,
        "kappa_i" => rates.kappa_i = value,
        "kappa_ex" => rates.kappa_ex = value,
        "g" => rates.g = value,
        other => {
            return Err(RouterError::InvalidConfig(format!(
                "unknown rate field '{other}'"
            )))
        }
    }
    Ok(())
}

pub(crate) fn rate_field(rates: &RateSet, name: &str) -> Option<f64> {
    Some(match name {
        "kappa_s" => rates.kappa_s,
        "gamma_c" => rates.gamma_c,
        "gamma_s" => rates.gamma_s,
        "gamma_c1" => rates.gamma_c1,
        "gamma_c2" => rates.gamma_c2,
        "gamma_ch" => rates.gamma_ch,
        "gamma_cv" => rates.gamma_cv,
        "gamma" => rates.gamma,
        "kappa_i" => rates.kappa_i,
        "kappa_ex" => rates.kappa_ex,
        "g" => rates.g,
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_valid() {
        let rates = RateSet {
            kappa_s: 1.0,
            gamma_c: 1.0,
            ..Default::default()
        };
        assert!(ScenarioConfig::new(Scenario::TwoLevelRouter, rates, 2).is_ok());
    }

    #[test]
    fn two_level_rejects_degenerate_gamma_c() {
        let rates = RateSet {
            kappa_s: 1.0,
            gamma_c: 0.0,
            ..Default::default()
        };
        let err = ScenarioConfig::new(Scenario::TwoLevelRouter, rates, 2).unwrap_err();
        assert!(err.to_string().contains("gamma_c must be positive"));
    }

    #[test]
    fn lambda_accepts_three_photons() {
        let rates = RateSet {
            kappa_s: 0.1,
            gamma_ch: 1.0,
            gamma_cv: 1.0,
            ..Default::default()
        };
        assert!(ScenarioConfig::new(Scenario::LambdaRouter, rates, 3).is_ok());
    }

    #[test]
    fn non_lambda_rejects_three_photons() {
        let rates = RateSet {
            kappa_s: 1.0,
            gamma_c: 1.0,
            ..Default::default()
        };
        assert!(ScenarioConfig::new(Scenario::TwoLevelRouter, rates, 3).is_err());
    }

    #[test]
    fn sweep_requires_monotone_grid() {
        let base = ScenarioConfig::new(
            Scenario::TwoLevelRouter,
            RateSet {
                kappa_s: 1.0,
                gamma_c: 1.0,
                ..Default::default()
            },
            2,
        )
        .unwrap();
        let spec = SweepSpec {
            parameter: "kappa_s".into(),
            values: vec![1.0, 0.5, 2.0],
            base,
        };
        assert!(spec.validate().is_err());
    }
}
