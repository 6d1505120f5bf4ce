//! Closed-form solutions for the two-level router driven by an exponential
//! one- or two-photon pulse.

use crate::error::Result;
use crate::exppoly::{BilinearSurface, ExpPoly};
use crate::quadrature;
use crate::types::{CorrelationGrid, RateSet, RoutingProbabilities};

/// Single- and two-excitation amplitudes of the feeder-cavity + atom chain.
///
/// `a`, `b` are the one-photon branch (`|1g>`, `|0e>`); `alpha`, `beta` the
/// two-photon branch (`|2g>`, `|1e>`); `c` the decay of a bare atomic
/// excitation (`|0e>` after a collapse).
#[derive(Debug, Clone)]
pub struct TwoLevelAmplitudes {
    pub a: ExpPoly,
    pub b: ExpPoly,
    pub c: ExpPoly,
    pub alpha: ExpPoly,
    pub beta: ExpPoly,
}

/// Build the amplitude functions by solving the cascaded Schroedinger chain.
/// Degenerate rate combinations (`2 gamma_c = kappa_s`) come out as secular
/// `t e^{-...t}` terms automatically.
pub fn two_level_amplitudes(rates: &RateSet) -> TwoLevelAmplitudes {
    let ks = rates.kappa_s;
    let gc = rates.gamma_c;
    let a = ExpPoly::exp(1.0, ks);
    // b' = -2 gc b - 2 sqrt(ks gc) a
    let b = ExpPoly::solve_driven(2.0 * gc, &a.scale(-2.0 * (ks * gc).sqrt()), 0.0);
    let c = ExpPoly::exp(1.0, 2.0 * gc);
    let alpha = ExpPoly::exp(1.0, 2.0 * ks);
    // beta' = -(ks + 2 gc) beta - 2 sqrt(2 ks gc) alpha
    let beta = ExpPoly::solve_driven(
        ks + 2.0 * gc,
        &alpha.scale(-2.0 * (2.0 * ks * gc).sqrt()),
        0.0,
    );
    TwoLevelAmplitudes { a, b, c, alpha, beta }
}

/// Evaluate all five amplitudes at one time.
pub fn two_level_amplitudes_at(rates: &RateSet, t: f64) -> (f64, f64, f64, f64, f64) {
    let amps = two_level_amplitudes(rates);
    (
        amps.a.eval(t),
        amps.b.eval(t),
        amps.c.eval(t),
        amps.alpha.eval(t),
        amps.beta.eval(t),
    )
}

/// Single-photon transmission and reflection probabilities,
/// `T = kappa_s/(kappa_s + 2 gamma_c)`, `R = 2 gamma_c/(kappa_s + 2 gamma_c)`.
pub fn single_photon_tr(rates: &RateSet) -> (f64, f64) {
    let ks = rates.kappa_s;
    let gc = rates.gamma_c;
    (ks / (ks + 2.0 * gc), 2.0 * gc / (ks + 2.0 * gc))
}

/// The four ordered correlation surfaces in bilinear form.
///
/// First superscript = first detection. The assembly mirrors the
/// collapse-then-propagate structure: a first click leaves weighted
/// `|1g>` / `|0e>` components that evolve with `a, b` / `c`.
pub fn two_level_surfaces(rates: &RateSet) -> [BilinearSurface; 4] {
    let ks = rates.kappa_s;
    let gc = rates.gamma_c;
    let amps = two_level_amplitudes(rates);
    let sq = f64::sqrt;
    // transmitted-first components
    let f_cav = amps.alpha.scale(sq(2.0 * ks)).add(&amps.beta.scale(sq(gc)));
    let f_atom = amps.beta.clone();
    let tr = BilinearSurface {
        prefactor: 4.0 * gc,
        pairs: vec![
            (f_cav.clone(), amps.b.clone()),
            (f_atom.scale(sq(ks)), amps.c.clone()),
        ],
    };
    let tt = BilinearSurface {
        prefactor: 4.0,
        pairs: vec![
            (
                f_cav.clone(),
                amps.a.scale(sq(ks)).add(&amps.b.scale(sq(gc))),
            ),
            (f_atom.scale(sq(gc * ks)), amps.c.clone()),
        ],
    };
    // reflected-first components: only the atomic part clicks
    let rt = BilinearSurface {
        prefactor: 4.0 * gc,
        pairs: vec![(
            amps.beta.clone(),
            amps.a.scale(sq(ks)).add(&amps.b.scale(sq(gc))),
        )],
    };
    let rr = BilinearSurface {
        prefactor: 4.0 * gc * gc,
        pairs: vec![(amps.beta.clone(), amps.b.clone())],
    };
    [tr, rt, rr, tt]
}

/// Point evaluation of the four correlation functions
/// `(Gamma_tr, Gamma_rt, Gamma_rr, Gamma_tt)` at `(t, tau)`.
pub fn two_level_correlations(rates: &RateSet, t: f64, tau: f64) -> (f64, f64, f64, f64) {
    let [tr, rt, rr, tt] = two_level_surfaces(rates);
    (tr.eval(t, tau), rt.eval(t, tau), rr.eval(t, tau), tt.eval(t, tau))
}

/// Sample bilinear surfaces onto a grid with extents chosen so the exact
/// tail mass beyond the grid is negligible.
pub fn sample_surfaces(surfaces: &[BilinearSurface; 4], points: usize) -> CorrelationGrid {
    let (t_max, tau_max) = grid_extents(surfaces);
    let t_axis = quadrature::uniform_axis(t_max, points);
    let tau_axis = quadrature::uniform_axis(tau_max, points);
    let sample = |s: &BilinearSurface, t_axis: &[f64], tau_axis: &[f64]| -> Vec<f64> {
        let mut values = Vec::with_capacity(points * points);
        for &t in t_axis {
            // evaluate the t-factors once per row
            let a_vals: Vec<f64> = s.pairs.iter().map(|(a, _)| a.eval(t)).collect();
            for &tau in tau_axis {
                let amp: f64 = s
                    .pairs
                    .iter()
                    .zip(&a_vals)
                    .map(|((_, b), a)| a * b.eval(tau))
                    .sum();
                values.push(s.prefactor * amp * amp);
            }
        }
        values
    };
    let gamma_tr = sample(&surfaces[0], &t_axis, &tau_axis);
    let gamma_rt = sample(&surfaces[1], &t_axis, &tau_axis);
    let gamma_rr = sample(&surfaces[2], &t_axis, &tau_axis);
    let gamma_tt = sample(&surfaces[3], &t_axis, &tau_axis);
    CorrelationGrid {
        t_axis,
        tau_axis,
        gamma_tr,
        gamma_rt,
        gamma_rr,
        gamma_tt,
    }
}

/// Grid extents from the slowest decay rate actually present in the
/// surfaces: `12 / rate` leaves tail mass below 1e-5 relative even for the
/// slowest pure exponential.
pub fn grid_extents(surfaces: &[BilinearSurface; 4]) -> (f64, f64) {
    let mut st = f64::INFINITY;
    let mut stau = f64::INFINITY;
    for s in surfaces {
        let (a, b) = s.slowest_rates();
        st = st.min(a);
        stau = stau.min(b);
    }
    (14.0 / st.max(1e-300), 14.0 / stau.max(1e-300))
}

/// The rational closed forms for the ordered detection probabilities.
pub fn two_level_probabilities(rates: &RateSet) -> RoutingProbabilities {
    let ks = rates.kappa_s;
    let gc = rates.gamma_c;
    let den = (2.0 * gc + ks).powi(2) * (2.0 * gc + 3.0 * ks);
    RoutingProbabilities::new(
        12.0 * ks * gc * (gc + ks) / den,
        4.0 * ks * gc * gc / den,
        8.0 * gc.powi(3) / den,
        ks * (3.0 * ks * ks + 4.0 * gc * gc + 2.0 * ks * gc) / den,
    )
}

/// Quadrature route: sample the surfaces on the default grid and integrate
/// through the shared pipeline. Agrees with the rational forms to the
/// quadrature tolerance; used by the CLI when a grid is requested.
pub fn two_level_probabilities_quadrature(rates: &RateSet) -> Result<RoutingProbabilities> {
    let surfaces = two_level_surfaces(rates);
    let grid = sample_surfaces(&surfaces, quadrature::DEFAULT_GRID_POINTS);
    quadrature::integrate_probabilities(&grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rates(ks: f64, gc: f64) -> RateSet {
        RateSet {
            kappa_s: ks,
            gamma_c: gc,
            ..Default::default()
        }
    }

    #[test]
    fn initial_conditions() {
        let (a, b, c, alpha, beta) = two_level_amplitudes_at(&rates(1.0, 1.0), 0.0);
        assert_eq!((a, b, c, alpha, beta), (1.0, 0.0, 1.0, 1.0, 0.0));
    }

    #[test]
    fn b_at_unit_time_matches_closed_form() {
        // b(1) = -2(e^{-1} - e^{-2}) for kappa_s = gamma_c = 1
        let (_, b, _, _, _) = two_level_amplitudes_at(&rates(1.0, 1.0), 1.0);
        assert_relative_eq!(b, -2.0 * ((-1.0f64).exp() - (-2.0f64).exp()), epsilon = 1e-14);
        assert_relative_eq!(b, -0.46508, epsilon = 1e-5);
    }

    #[test]
    fn degenerate_limit_is_secular() {
        // 2 gamma_c = kappa_s: b(t) = -2 sqrt(2) t e^{-2t}
        let (_, b, _, _, _) = two_level_amplitudes_at(&rates(2.0, 1.0), 0.9);
        assert_relative_eq!(
            b,
            -2.0 * 2.0f64.sqrt() * 0.9 * (-1.8f64).exp(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn tr_closed_forms() {
        let (t, r) = single_photon_tr(&rates(2.0, 1.0));
        assert_relative_eq!(t, 0.5, epsilon = 1e-15);
        assert_relative_eq!(r, 0.5, epsilon = 1e-15);
        let (t, _) = single_photon_tr(&rates(10.0, 1.0));
        assert_relative_eq!(t, 10.0 / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn probabilities_at_equal_rates() {
        let p = two_level_probabilities(&rates(1.0, 1.0));
        assert_relative_eq!(p.p_tr, 24.0 / 45.0, epsilon = 1e-15);
        assert_relative_eq!(p.p_rt, 4.0 / 45.0, epsilon = 1e-15);
        assert_relative_eq!(p.p_rr, 8.0 / 45.0, epsilon = 1e-15);
        assert_relative_eq!(p.p_tt, 9.0 / 45.0, epsilon = 1e-15);
        assert_relative_eq!(p.sum(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(p.c_tr, 28.0 / 45.0, epsilon = 1e-15);
    }

    #[test]
    fn reflection_reflection_is_antibunched() {
        for &(ks, gc) in &[(0.3, 1.0), (1.0, 1.0), (5.0, 0.7)] {
            for &t in &[0.0, 0.4, 2.0] {
                let (_, _, rr, _) = two_level_correlations(&rates(ks, gc), t, 0.0);
                assert!(rr.abs() < 1e-25, "Gamma_rr(t, 0) = {rr}");
            }
        }
    }

    #[test]
    fn gamma_tt_at_origin() {
        // 4 |sqrt(2 ks) alpha (sqrt(ks) a + 0)|^2 = 8 at ks = gc = 1
        let (_, _, _, tt) = two_level_correlations(&rates(1.0, 1.0), 0.0, 0.0);
        assert_relative_eq!(tt, 8.0, epsilon = 1e-13);
    }

    #[test]
    fn exact_surface_integrals_reproduce_probabilities() {
        for &(ks, gc) in &[(0.5, 1.3), (1.0, 1.0), (4.0, 0.6)] {
            let r = rates(ks, gc);
            let surfaces = two_level_surfaces(&r);
            let p = two_level_probabilities(&r);
            for (s, expected) in surfaces.iter().zip([p.p_tr, p.p_rt, p.p_rr, p.p_tt]) {
                assert_relative_eq!(s.integral(), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_route_matches_closed_forms() {
        let r = rates(1.0, 1.0);
        let p = two_level_probabilities_quadrature(&r).unwrap();
        let exact = two_level_probabilities(&r);
        assert_relative_eq!(p.p_tr, exact.p_tr, epsilon = 1e-6);
        assert_relative_eq!(p.p_rt, exact.p_rt, epsilon = 1e-6);
        assert_relative_eq!(p.p_rr, exact.p_rr, epsilon = 1e-6);
        assert_relative_eq!(p.p_tt, exact.p_tt, epsilon = 1e-6);
    }

    #[test]
    fn long_pulse_limit_all_reflected() {
        let p = two_level_probabilities(&rates(1e-6, 1.0));
        assert!(p.p_rr > 0.999_99);
    }
}
