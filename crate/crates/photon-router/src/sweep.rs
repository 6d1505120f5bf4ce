//! Parameter sweeps with deterministic output ordering.

use rayon::prelude::*;

use crate::error::Result;
use crate::types::{RoutingProbabilities, ScenarioConfig, SweepSpec};

/// Engine used to turn a configuration into probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Trajectory,
    Waveguide,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Trajectory => "trajectory",
            Engine::Waveguide => "waveguide",
        }
    }

    pub fn parse(s: &str) -> Option<Engine> {
        match s {
            "analytic" => Some(Engine::Analytic),
            "trajectory" => Some(Engine::Trajectory),
            "waveguide" => Some(Engine::Waveguide),
            _ => None,
        }
    }
}

/// One sweep row: parameter value and the resulting probabilities.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub probabilities: RoutingProbabilities,
}

/// Run a sweep in parallel, preserving grid order in the output.
pub fn run_sweep<F>(spec: &SweepSpec, eval: F) -> Result<Vec<SweepRow>>
where
    F: Fn(&ScenarioConfig) -> Result<RoutingProbabilities> + Sync,
{
    spec.validate()?;
    let configs: Result<Vec<(f64, ScenarioConfig)>> = spec
        .values
        .iter()
        .map(|&v| spec.config_at(v).map(|c| (v, c)))
        .collect();
    let configs = configs?;
    configs
        .into_par_iter()
        .map(|(value, config)| {
            Ok(SweepRow {
                value,
                probabilities: eval(&config)?,
            })
        })
        .collect()
}

/// Log-spaced grid, inclusive of both endpoints.
pub fn log_grid(from: f64, to: f64, points: usize) -> Vec<f64> {
    assert!(from > 0.0 && to > from && points >= 2);
    let (lf, lt) = (from.ln(), to.ln());
    (0..points)
        .map(|i| (lf + (lt - lf) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Linear grid, inclusive of both endpoints.
pub fn linear_grid(from: f64, to: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2);
    (0..points)
        .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::types::{RateSet, Scenario};

    #[test]
    fn sweep_rows_preserve_order() {
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
            values: log_grid(0.1, 10.0, 7),
            base,
        };
        let rows = run_sweep(&spec, |c| analytic::probabilities(c)).unwrap();
        assert_eq!(rows.len(), 7);
        for (row, v) in rows.iter().zip(&spec.values) {
            assert_eq!(row.value, *v);
            assert!((row.probabilities.sum() - 1.0).abs() < 1e-12);
        }
    }
}
