//! High-level waveguide runs: geometry planning, the two-photon routing
//! run, the strong-coupling sideband run, and state snapshots.

use std::io::Write;

use crate::error::{Result, RouterError};
use crate::types::{PulseShape, PulseSpec, RateSet, RoutingProbabilities};

use super::engine::{JunctionRates, WaveguideState};
use super::grid::WaveguideGrid;

/// Default grid resolution.
pub const DEFAULT_POINTS: usize = 2048;

/// Outcome report accompanying the probabilities of a waveguide run.
#[derive(Debug, Clone, Copy)]
pub struct RunReport {
    /// Norm lost to free-space atomic decay.
    pub loss_gamma: f64,
    /// Norm lost to intrinsic cavity decay.
    pub loss_kappa_i: f64,
    /// Norm still held by system excitations at the end.
    pub system_residual: f64,
    /// Norm that reached the grid edges.
    pub boundary_mass: f64,
    pub steps: usize,
    pub grid_points: usize,
    pub dt: f64,
}

impl RunReport {
    pub fn total_loss(&self) -> f64 {
        self.loss_gamma + self.loss_kappa_i
    }
}

/// Plan a grid for the given pulse and rates: the domain must hold the
/// sampled pulse left of the junction and give every scattered photon room
/// to clear the junction without reaching an edge.
pub fn plan_grid(pulse: &PulseSpec, rates: &RateSet, n: usize, v_g: f64) -> Result<WaveguideGrid> {
    let ks = pulse.kappa_s;
    // time for the sampled pulse to pass the junction
    let t_pulse = match pulse.shape {
        PulseShape::Exponential => 11.0 / ks,
        PulseShape::Gaussian => 11.5 / ks,
        PulseShape::Square => 2.5 / ks,
    };
    let t_ring = 15.0 / slowest_system_rate(rates, pulse.detuning);
    // both half-domains must hold v_g * (t_pulse + t_ring)
    let length = 2.12 * v_g * (t_pulse + t_ring);
    WaveguideGrid::new(n, length, v_g)
}

/// Conservative estimate of the slowest amplitude decay of the junction
/// system, used to size the post-pulse ring-down window.
fn slowest_system_rate(rates: &RateSet, detuning: f64) -> f64 {
    let kappa = rates.kappa_ex + rates.kappa_i;
    if rates.g == 0.0 {
        return kappa.max(1e-300);
    }
    if detuning == 0.0 {
        // fast-cavity: slaved atom decays at 2 g^2/kappa (+ free-space)
        (2.0 * rates.g * rates.g / kappa + rates.gamma).min(kappa)
    } else {
        // sideband driving: polariton linewidth (kappa + gamma)/2
        (0.5 * (kappa + rates.gamma)).min(kappa)
    }
}

/// Evolve a fresh two-photon state until the system excitation has decayed
/// away and the pulse has fully passed, then classify the field sectors.
///
/// Returns raw sector norms as probabilities (they sum to one minus losses)
/// plus the run report. Fails if the system has not settled below 1e-6 by
/// the time photons approach the boundary, or if edge contamination
/// exceeds 1e-6.
pub fn run(
    grid: WaveguideGrid,
    rates: &RateSet,
    pulse: &PulseSpec,
) -> Result<(RoutingProbabilities, RunReport)> {
    let mut junction = JunctionRates::from_rates(rates);
    if pulse.detuning != 0.0 {
        junction = junction.detuned(pulse.detuning);
    }
    let mut state = WaveguideState::new(grid, junction, pulse)?;
    let guard = 8usize;
    let max_steps = grid.jc.saturating_sub(guard);
    if max_steps < 16 {
        return Err(RouterError::DomainTooSmall {
            needed: 16,
            available: max_steps,
        });
    }
    let min_steps = grid.jc / 4;
    let mut steps = 0;
    let settle = 1e-7;
    while steps < max_steps {
        state.step();
        steps += 1;
        if steps >= min_steps && steps % 32 == 0 && state.system_norm() < settle {
            break;
        }
    }
    let system_residual = state.system_norm();
    if system_residual > 1e-6 {
        return Err(RouterError::DomainTooSmall {
            needed: steps * 2,
            available: max_steps,
        });
    }
    let boundary_mass = state.edge_mass(5);
    if boundary_mass > 1e-6 {
        return Err(RouterError::BoundaryContamination {
            leak: boundary_mass,
        });
    }
    let (p_tt, _p_rl, p_rr) = state.field_norms();
    let (p_tr, p_rt) = state.rl_split();
    let (loss_gamma, loss_kappa_i) = state.loss_attribution();
    Ok((
        RoutingProbabilities::new(p_tr, p_rt, p_rr, p_tt),
        RunReport {
            loss_gamma,
            loss_kappa_i,
            system_residual,
            boundary_mass,
            steps,
            grid_points: grid.n,
            dt: grid.dt(),
        },
    ))
}

/// Plan the grid and run in one call.
pub fn run_default(
    rates: &RateSet,
    pulse: &PulseSpec,
    n: usize,
) -> Result<(RoutingProbabilities, RunReport)> {
    let grid = plan_grid(pulse, rates, n, 1.0)?;
    run(grid, rates, pulse)
}

/// Carrier detuning of the reflection resonance for the two-mode junction:
/// the bright polariton sits at `sqrt(2 g^2 - kappa^2)` (reduces to
/// `sqrt(2) g` for `kappa << g`).
pub fn rabi_sideband(g: f64, kappa: f64) -> f64 {
    (2.0 * g * g - kappa * kappa).max(0.0).sqrt()
}

/// Strong-coupling run: identical machinery with the carrier on a Rabi
/// sideband. `sideband_sign` picks the upper or lower sideband.
///
/// Requires `g >= 5 kappa_ex`; the comparison curve is the fast-cavity
/// analytic result with the effective half-linewidth
/// `gamma_c -> (kappa + gamma)/4` (the sideband's reflection line has HWHM
/// `(kappa + gamma)/2`, which corresponds to the two-level atom's
/// interaction half-width `2 gamma_c`).
pub fn strong_coupling_run(
    grid: WaveguideGrid,
    rates: &RateSet,
    pulse: &PulseSpec,
    sideband_sign: f64,
) -> Result<(RoutingProbabilities, RunReport)> {
    let kappa = rates.kappa_ex + rates.kappa_i;
    if rates.g < 5.0 * kappa {
        return Err(RouterError::InvalidConfig(format!(
            "strong-coupling run requires g >= 5 kappa_ex (g = {}, kappa = {})",
            rates.g, kappa
        )));
    }
    let delta = sideband_sign.signum() * rabi_sideband(rates.g, kappa);
    let detuned = pulse.with_detuning(delta);
    run(grid, rates, &detuned)
}

/// Effective fast-cavity comparison rate for sideband-driven runs.
pub fn strong_coupling_effective_gamma_c(rates: &RateSet) -> f64 {
    0.25 * (rates.kappa_ex + rates.kappa_i + rates.gamma)
}

/// Write a state snapshot: text header followed by little-endian f64
/// (re, im) pairs for each sector in physical coordinates, in the order
/// rr, rl, ll, wra, wrb, wrs, wla, wlb, wls, pairs.
pub fn dump_snapshot(state: &WaveguideState, path: &std::path::Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    let grid = &state.grid;
    writeln!(file, "photon-router waveguide snapshot v1")?;
    writeln!(file, "n {}", grid.n)?;
    writeln!(file, "length {:.17e}", grid.length)?;
    writeln!(file, "v_g {:.17e}", grid.v_g)?;
    writeln!(file, "junction {}", grid.jc)?;
    writeln!(file, "time {:.17e}", state.time)?;
    writeln!(
        file,
        "sectors rr[n*n] rl[n*n] ll[n*n] wra[n] wrb[n] wrs[n] wla[n] wlb[n] wls[n] pairs[5]"
    )?;
    writeln!(file, "format complex128-le")?;
    writeln!(file, "end-header")?;
    let mut write_complex = |values: &[num_complex::Complex64]| -> Result<()> {
        for v in values {
            file.write_all(&v.re.to_le_bytes())?;
            file.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    };
    for sector in ["rr", "rl", "ll"] {
        write_complex(&state.sector_physical(sector).unwrap())?;
    }
    for name in ["wra", "wrb", "wrs", "wla", "wlb", "wls"] {
        write_complex(&state.one_photon_physical(name).unwrap())?;
    }
    write_complex(&state.pair_amplitudes())?;
    Ok(())
}

/// Parse a snapshot back: returns (header lines, all complex values in file
/// order). Mainly for round-trip tests and external tooling.
pub fn load_snapshot(path: &std::path::Path) -> Result<(Vec<String>, Vec<num_complex::Complex64>)> {
    let bytes = std::fs::read(path)?;
    let marker = b"end-header\n";
    let pos = bytes
        .windows(marker.len())
        .position(|w| w == marker)
        .ok_or_else(|| RouterError::InvalidConfig("snapshot header not found".into()))?;
    let header = String::from_utf8_lossy(&bytes[..pos])
        .lines()
        .map(str::to_string)
        .collect();
    let data = &bytes[pos + marker.len()..];
    if data.len() % 16 != 0 {
        return Err(RouterError::InvalidConfig(
            "snapshot payload is not a whole number of complex values".into(),
        ));
    }
    let values = data
        .chunks_exact(16)
        .map(|c| {
            num_complex::Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    Ok((header, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use approx::assert_relative_eq;

    #[test]
    fn no_scatterer_transmits_both_photons() {
        let rates = RateSet {
            kappa_ex: 1.0,
            g: 0.0,
            ..Default::default()
        };
        let pulse = PulseSpec::new(PulseShape::Exponential, 0.05).unwrap();
        let (p, report) = run_default(&rates, &pulse, 512).unwrap();
        assert!(p.p_tt > 0.999_99, "p_tt = {}", p.p_tt);
        assert!(report.total_loss() < 1e-9);
    }

    #[test]
    fn fast_cavity_matches_analytic_coarsely() {
        // small grid smoke test; the acceptance suite runs the full-size one
        let g = 0.14;
        let kex = 1.0;
        let gc = g * g / kex;
        let rates = RateSet {
            kappa_ex: kex,
            g,
            ..Default::default()
        };
        let pulse = PulseSpec::new(PulseShape::Exponential, 1.4 * gc).unwrap();
        let (p, _) = run_default(&rates, &pulse, 768).unwrap();
        let reference = analytic::two_level_probabilities(&RateSet {
            kappa_s: 1.4 * gc,
            gamma_c: gc,
            ..Default::default()
        });
        let total = p.sum();
        assert!((total - 1.0).abs() < 1e-6);
        assert_relative_eq!(p.p_tt, reference.p_tt, epsilon = 0.03);
        assert_relative_eq!(p.p_rr, reference.p_rr, epsilon = 0.03);
        assert_relative_eq!(p.c_tr, reference.c_tr, epsilon = 0.04);
    }

    #[test]
    fn sideband_formula() {
        assert_relative_eq!(rabi_sideband(5.0, 1.0), 7.0, epsilon = 1e-12);
    }

    #[test]
    fn snapshot_roundtrip() {
        let grid = WaveguideGrid::new(64, 8.0, 1.0).unwrap();
        let rates = RateSet {
            kappa_ex: 1.0,
            g: 0.2,
            ..Default::default()
        };
        let pulse = PulseSpec::new(PulseShape::Square, 2.0).unwrap();
        let mut state =
            WaveguideState::new(grid, JunctionRates::from_rates(&rates), &pulse).unwrap();
        for _ in 0..10 {
            state.step();
        }
        let dir = std::env::temp_dir().join("photon_router_snapshot_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.bin");
        dump_snapshot(&state, &path).unwrap();
        let (header, values) = load_snapshot(&path).unwrap();
        assert!(header[0].contains("snapshot v1"));
        let n = grid.n;
        assert_eq!(values.len(), 3 * n * n + 6 * n + 5);
        // first sector is rr in physical coordinates
        let rr = state.sector_physical("rr").unwrap();
        for (a, b) in rr.iter().zip(&values[..n * n]) {
            assert_eq!(a, b);
        }
        std::fs::remove_file(&path).ok();
    }
}
