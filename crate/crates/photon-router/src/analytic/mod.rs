//! Closed-form amplitudes, correlation functions and probabilities for
//! every scenario with an analytic solution, safe at degenerate rate
//! combinations.

pub mod cascade;
pub mod entangled;
pub mod lambda_atom;
pub mod single_sided;
pub mod two_level;

pub use cascade::{
    cascade_amplitudes, cascade_correlations, cascade_probabilities,
    cascade_probabilities_exact, CascadeAmplitudes,
};
pub use entangled::{
    entangled_source_amplitudes, entangled_source_probabilities, EntangledSourceAmplitudes,
};
pub use lambda_atom::{
    lambda_amplitudes, lambda_phv, lambda_pv, lambda_routing, LambdaResult,
};
pub use single_sided::{bunched_amplitudes, bunching_factors, joint_amplitude};
pub use two_level::{
    single_photon_tr, two_level_amplitudes, two_level_correlations, two_level_probabilities,
    TwoLevelAmplitudes,
};

use crate::error::Result;
use crate::types::{CorrelationGrid, RoutingProbabilities, Scenario, ScenarioConfig};

/// Closed-form probabilities for a validated configuration.
///
/// `SingleSidedBunching` has a single output port, so ordered routing
/// probabilities are not defined for it; use [`joint_amplitude`] or
/// [`bunching_factors`] instead.
pub fn probabilities(config: &ScenarioConfig) -> Result<RoutingProbabilities> {
    match config.scenario {
        Scenario::TwoLevelRouter => Ok(two_level::two_level_probabilities(&config.rates)),
        Scenario::EntangledSourceRouter => {
            Ok(entangled::entangled_source_probabilities(&config.rates))
        }
        Scenario::TwoStageCascade => cascade::cascade_probabilities(&config.rates),
        Scenario::SingleSidedBunching => Err(crate::error::RouterError::InvalidConfig(
            "the single-sided stage has one output port; \
             routing probabilities are not defined"
                .into(),
        )),
        Scenario::LambdaRouter => {
            let res = lambda_atom::lambda_routing(&config.rates)?;
            // order: V-first maps to "reflected" (the converted photon leaves
            // in the V port), H-first to "transmitted"
            let p_hh = 1.0 - res.p_vh - res.p_hv;
            Ok(RoutingProbabilities::new(res.p_hv, res.p_vh, 0.0, p_hh))
        }
    }
}

/// Sampled correlation surfaces for the scenarios with two output ports.
pub fn correlation_grid(config: &ScenarioConfig, points: usize) -> Result<CorrelationGrid> {
    let surfaces = match config.scenario {
        Scenario::TwoLevelRouter => two_level::two_level_surfaces(&config.rates),
        Scenario::EntangledSourceRouter => entangled::entangled_surfaces(&config.rates),
        Scenario::TwoStageCascade => cascade::cascade_surfaces(&config.rates),
        _ => {
            return Err(crate::error::RouterError::InvalidConfig(format!(
                "correlation surfaces are not defined for scenario '{}'",
                config.scenario.name()
            )))
        }
    };
    Ok(two_level::sample_surfaces(&surfaces, points))
}

/// Interval marginals `\int Gamma(t, tau) dt` for the two-port scenarios,
/// as exponential polynomials in `tau` (order: tr, rt, rr, tt).
pub fn interval_marginals(config: &ScenarioConfig) -> Result<[crate::exppoly::ExpPoly; 4]> {
    let surfaces = match config.scenario {
        Scenario::TwoLevelRouter => two_level::two_level_surfaces(&config.rates),
        Scenario::EntangledSourceRouter => entangled::entangled_surfaces(&config.rates),
        Scenario::TwoStageCascade => cascade::cascade_surfaces(&config.rates),
        _ => {
            return Err(crate::error::RouterError::InvalidConfig(format!(
                "correlation marginals are not defined for scenario '{}'",
                config.scenario.name()
            )))
        }
    };
    Ok([
        surfaces[0].marginal_tau(),
        surfaces[1].marginal_tau(),
        surfaces[2].marginal_tau(),
        surfaces[3].marginal_tau(),
    ])
}
