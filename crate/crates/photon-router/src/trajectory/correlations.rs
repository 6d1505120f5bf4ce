//! Two-time correlation surfaces by collapse-then-propagate, and the
//! integrated routing probabilities — the independent oracle for every
//! closed-form result.

use num_complex::Complex64;

use crate::error::{Result, RouterError};
use crate::quadrature::{self, DEFAULT_GRID_POINTS};
use crate::types::{CorrelationGrid, RoutingProbabilities, Scenario, ScenarioConfig};

use super::chain::{build_chain, ChainSystem};
use super::evolve::{default_dt, evolve, FewExcitationState};

/// Evaluate the four ordered correlation surfaces on the given axes:
/// `Gamma^{xy}(t, tau) = || O_y U(tau) O_x psi(t) ||^2`, exact in the
/// few-excitation sector.
pub fn correlation_surfaces(
    config: &ScenarioConfig,
    t_axis: &[f64],
    tau_axis: &[f64],
) -> Result<CorrelationGrid> {
    let chain = build_chain(config)?;
    let dt = default_dt(&chain);
    let nt = t_axis.len();
    let ntau = tau_axis.len();
    let (first_channels, second_order) = channel_pairs(&chain, config.scenario)?;

    let mut surfaces = vec![vec![0.0; nt * ntau]; 4];
    let mut psi = FewExcitationState::initial(&chain);
    for (i, &t) in t_axis.iter().enumerate() {
        evolve(&mut psi, &chain, dt, t)?;
        for (x, &cx) in first_channels.iter().enumerate() {
            let collapsed = chain.apply_channel(&chain.channels[cx], &psi.amplitudes);
            let mut phi = FewExcitationState {
                amplitudes: collapsed,
                time: 0.0,
            };
            for (j, &tau) in tau_axis.iter().enumerate() {
                evolve(&mut phi, &chain, dt, tau)?;
                for (y, &cy) in first_channels.iter().enumerate() {
                    let out = chain.apply_channel(&chain.channels[cy], &phi.amplitudes);
                    let rate: f64 = out.iter().map(|c| c.norm_sqr()).sum();
                    surfaces[second_order[x][y]][i * ntau + j] = rate;
                }
            }
        }
    }
    let mut it = surfaces.into_iter();
    Ok(CorrelationGrid {
        t_axis: t_axis.to_vec(),
        tau_axis: tau_axis.to_vec(),
        gamma_tr: it.next().unwrap(),
        gamma_rt: it.next().unwrap(),
        gamma_rr: it.next().unwrap(),
        gamma_tt: it.next().unwrap(),
    })
}

/// Map channel indices to the (tr, rt, rr, tt) surface slots.
/// For two-port scenarios channel 0 = transmitted, 1 = reflected; for the
/// Lambda router channel 0 = H (maps to "t"), 1 = V (maps to "r"); the
/// single-port stage correlates its one channel with itself.
fn channel_pairs(
    chain: &ChainSystem,
    scenario: Scenario,
) -> Result<(Vec<usize>, [[usize; 2]; 2])> {
    match scenario {
        Scenario::SingleSidedBunching => Err(RouterError::InvalidConfig(
            "routing correlations need two output ports; \
             use joint_detection_density for the single-sided stage"
                .into(),
        )),
        _ => {
            debug_assert_eq!(chain.channels.len(), 2);
            // slots: [tr, rt, rr, tt]; first index = first click
            Ok((vec![0, 1], [[3, 0], [1, 2]]))
        }
    }
}

/// Grid extent: evolve until the (detectable) no-jump norm is negligible.
fn settle_time(chain: &ChainSystem, detectable: &dyn Fn(&ChainSystem, usize) -> bool) -> Result<f64> {
    let dt = default_dt(chain);
    let mut t = 14.0 / chain.min_rate.min(chain.max_rate);
    let mut psi = FewExcitationState::initial(chain);
    for _ in 0..60 {
        evolve(&mut psi, chain, dt, t)?;
        let residual: f64 = psi
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| detectable(chain, *i))
            .map(|(_, c)| c.norm_sqr())
            .sum();
        if residual < 1e-13 {
            return Ok(t);
        }
        t *= 1.5;
    }
    Ok(t)
}

/// Routing probabilities through the default grids.
///
/// The entangled-source scenario is conditioned on both photons entering
/// the feeder: its raw detection mass scales with the small left-mirror
/// linewidth, so the surfaces are normalized by the total two-photon
/// detection probability before the usual pipeline tolerance applies.
pub fn probabilities(config: &ScenarioConfig) -> Result<RoutingProbabilities> {
    probabilities_with_points(config, DEFAULT_GRID_POINTS)
}

pub fn probabilities_with_points(
    config: &ScenarioConfig,
    points: usize,
) -> Result<RoutingProbabilities> {
    let chain = build_chain(config)?;
    // states with the source atom (if any) back in its ground state can
    // still produce detections; the source excitation itself cannot
    let detectable = |chain: &ChainSystem, i: usize| -> bool {
        match config.scenario {
            Scenario::EntangledSourceRouter => chain.basis[i][0] == 0,
            _ => true,
        }
    };
    let t_max = settle_time(&chain, &detectable)?;
    let t_axis = quadrature::uniform_axis(t_max, points);
    let tau_axis = quadrature::uniform_axis(t_max, points);
    let grid = correlation_surfaces(config, &t_axis, &tau_axis)?;
    match config.scenario {
        Scenario::EntangledSourceRouter => {
            let [tr, rt, rr, tt] = grid.surfaces();
            let p = [
                quadrature::integrate_surface(tr, &grid.t_axis, &grid.tau_axis),
                quadrature::integrate_surface(rt, &grid.t_axis, &grid.tau_axis),
                quadrature::integrate_surface(rr, &grid.t_axis, &grid.tau_axis),
                quadrature::integrate_surface(tt, &grid.t_axis, &grid.tau_axis),
            ];
            let total: f64 = p.iter().sum();
            if total <= 0.0 {
                return Err(RouterError::EmptyCorrelation);
            }
            Ok(RoutingProbabilities::new(
                p[0] / total,
                p[1] / total,
                p[2] / total,
                p[3] / total,
            ))
        }
        _ => quadrature::integrate_probabilities(&grid),
    }
}

/// Time-resolved single-photon fluxes `||O_c psi(t)||^2` for a one-photon
/// input, integrated into channel probabilities (transmission/reflection).
pub fn single_photon_probabilities(config: &ScenarioConfig) -> Result<Vec<(String, f64)>> {
    let single = ScenarioConfig::new(config.scenario, config.rates, 1)?;
    let chain = build_chain(&single)?;
    let dt = default_dt(&chain);
    let t_max = settle_time(&chain, &|_, _| true)?;
    let axis = quadrature::uniform_axis(t_max, DEFAULT_GRID_POINTS);
    let h = axis[1] - axis[0];
    let mut psi = FewExcitationState::initial(&chain);
    let mut fluxes = vec![Vec::with_capacity(axis.len()); chain.channels.len()];
    for &t in &axis {
        evolve(&mut psi, &chain, dt, t)?;
        for (c, flux) in fluxes.iter_mut().enumerate() {
            let out = chain.apply_channel(&chain.channels[c], &psi.amplitudes);
            flux.push(out.iter().map(|x| x.norm_sqr()).sum::<f64>());
        }
    }
    Ok(chain
        .channels
        .iter()
        .zip(fluxes)
        .map(|(ch, flux)| (ch.label.to_string(), quadrature::simpson(&flux, h)))
        .collect())
}

/// Conditional-flux bunching factors of the single-sided stage, computed
/// with the chain operators at a reference time in the steady long-pulse
/// window: (rate after a first detection / rate before it, and the same
/// rate relative to a bare remaining feeder photon).
pub fn bunching_factors(config: &ScenarioConfig) -> Result<(f64, f64)> {
    if config.scenario != Scenario::SingleSidedBunching {
        return Err(RouterError::InvalidConfig(
            "bunching factors are defined for the single-sided stage".into(),
        ));
    }
    let chain = build_chain(config)?;
    let dt = default_dt(&chain);
    let t0 = 8.0 / config.rates.gamma_c1;
    let mut psi = FewExcitationState::initial(&chain);
    evolve(&mut psi, &chain, dt, t0)?;
    let norm2 = psi.norm_sq();
    let channel = &chain.channels[0];
    let collapsed = chain.apply_channel(channel, &psi.amplitudes);
    let rate_before: f64 = collapsed.iter().map(|c| c.norm_sqr()).sum();
    let twice = chain.apply_channel(channel, &collapsed);
    let rate_after_num: f64 = twice.iter().map(|c| c.norm_sqr()).sum();
    let rate_before_cond = rate_before / norm2;
    let rate_after_cond = rate_after_num / rate_before;
    // a bare photon in the feeder clicks at 2 kappa_s
    Ok((
        rate_after_cond / rate_before_cond,
        rate_after_cond / (2.0 * config.rates.kappa_s),
    ))
}

/// Joint detection density `|f(t, t + tau)|^2`-style surface for the
/// single-sided stage: first and second click through its single port.
pub fn joint_detection_density(
    config: &ScenarioConfig,
    t_axis: &[f64],
    tau_axis: &[f64],
) -> Result<Vec<f64>> {
    if config.scenario != Scenario::SingleSidedBunching {
        return Err(RouterError::InvalidConfig(
            "joint detection density is defined for the single-sided stage".into(),
        ));
    }
    let chain = build_chain(config)?;
    let dt = default_dt(&chain);
    let channel = 0;
    let mut psi = FewExcitationState::initial(&chain);
    let mut out = vec![0.0; t_axis.len() * tau_axis.len()];
    for (i, &t) in t_axis.iter().enumerate() {
        evolve(&mut psi, &chain, dt, t)?;
        let collapsed = chain.apply_channel(&chain.channels[channel], &psi.amplitudes);
        let mut phi = FewExcitationState {
            amplitudes: collapsed,
            time: 0.0,
        };
        for (j, &tau) in tau_axis.iter().enumerate() {
            evolve(&mut phi, &chain, dt, tau)?;
            let second = chain.apply_channel(&chain.channels[channel], &phi.amplitudes);
            out[i * tau_axis.len() + j] = second.iter().map(|c: &Complex64| c.norm_sqr()).sum();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::types::RateSet;
    use approx::assert_relative_eq;

    fn config(scenario: Scenario, rates: RateSet) -> ScenarioConfig {
        ScenarioConfig::new(scenario, rates, 2).unwrap()
    }

    #[test]
    fn two_level_surface_matches_closed_form_pointwise() {
        let rates = RateSet {
            kappa_s: 1.0,
            gamma_c: 1.0,
            ..Default::default()
        };
        let cfg = config(Scenario::TwoLevelRouter, rates);
        let t_axis = [0.0, 0.5, 1.3];
        let tau_axis = [0.0, 0.4, 2.0];
        let grid = correlation_surfaces(&cfg, &t_axis, &tau_axis).unwrap();
        for (i, &t) in t_axis.iter().enumerate() {
            for (j, &tau) in tau_axis.iter().enumerate() {
                let (tr, rt, rr, tt) = analytic::two_level_correlations(&rates, t, tau);
                let at = |s: &[f64]| s[i * tau_axis.len() + j];
                assert_relative_eq!(at(&grid.gamma_tr), tr, epsilon = 1e-5, max_relative = 1e-5);
                assert_relative_eq!(at(&grid.gamma_rt), rt, epsilon = 1e-5, max_relative = 1e-5);
                assert_relative_eq!(at(&grid.gamma_rr), rr, epsilon = 1e-5, max_relative = 1e-5);
                assert_relative_eq!(at(&grid.gamma_tt), tt, epsilon = 1e-5, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn single_photon_fluxes_integrate_to_tr() {
        let rates = RateSet {
            kappa_s: 10.0,
            gamma_c: 1.0,
            ..Default::default()
        };
        let cfg = config(Scenario::TwoLevelRouter, rates);
        let probs = single_photon_probabilities(&cfg).unwrap();
        let (t_exp, r_exp) = analytic::single_photon_tr(&rates);
        assert_relative_eq!(probs[0].1, t_exp, epsilon = 1e-5);
        assert_relative_eq!(probs[1].1, r_exp, epsilon = 1e-5);
    }

    #[test]
    fn bunching_factors_match_long_pulse_values() {
        let rates = RateSet {
            kappa_s: 1e-3,
            gamma_c1: 1.0,
            ..Default::default()
        };
        let cfg = config(Scenario::SingleSidedBunching, rates);
        let (after_before, after_naive) = bunching_factors(&cfg).unwrap();
        assert_relative_eq!(after_before, 4.5, max_relative = 5e-3);
        assert_relative_eq!(after_naive, 9.0, max_relative = 5e-3);
    }
}
