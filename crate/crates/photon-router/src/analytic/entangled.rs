//! Router driven by a time-energy entangled photon pair from a three-level
//! source atom cascaded through the feeder cavity.

use crate::exppoly::{BilinearSurface, ExpPoly};
use crate::types::{RateSet, RoutingProbabilities};

use super::two_level;

/// Source-chain amplitudes for `|e0g>`, `|g2g>`, `|g1e>`.
///
/// The left-mirror linewidth `kappa_s'` enters all closed-form amplitudes
/// only through a global `sqrt(kappa_s')` prefactor, which drops out of the
/// conditioned probabilities; `alpha` and `beta` are stored with that
/// prefactor factored out (equivalently, evaluated at `kappa_s' = 1`).
#[derive(Debug, Clone)]
pub struct EntangledSourceAmplitudes {
    pub xi: ExpPoly,
    pub alpha: ExpPoly,
    pub beta: ExpPoly,
}

pub fn entangled_source_amplitudes(rates: &RateSet) -> EntangledSourceAmplitudes {
    let ks = rates.kappa_s;
    let gc = rates.gamma_c;
    let gs = rates.gamma_s;
    let xi = ExpPoly::exp(1.0, 2.0 * gs);
    // alpha' = -2 ks alpha - 4 sqrt(ks' gs) xi   (ks' factored out)
    let alpha = ExpPoly::solve_driven(2.0 * ks, &xi.scale(-4.0 * gs.sqrt()), 0.0);
    // beta' = -(ks + 2 gc) beta - 2 sqrt(2 ks gc) alpha
    let beta = ExpPoly::solve_driven(
        ks + 2.0 * gc,
        &alpha.scale(-2.0 * (2.0 * ks * gc).sqrt()),
        0.0,
    );
    EntangledSourceAmplitudes { xi, alpha, beta }
}

/// Correlation surfaces: same collapse structure as the plain router, with
/// the two-photon branch amplitudes replaced by the source-chain ones (the
/// post-collapse propagation is unchanged because the source is back in its
/// ground state in every detected component).
pub fn entangled_surfaces(rates: &RateSet) -> [BilinearSurface; 4] {
    let ks = rates.kappa_s;
    let gc = rates.gamma_c;
    let src = entangled_source_amplitudes(rates);
    let single = two_level::two_level_amplitudes(rates);
    let sq = f64::sqrt;
    let f_cav = src.alpha.scale(sq(2.0 * ks)).add(&src.beta.scale(sq(gc)));
    let f_atom = src.beta.clone();
    let tr = BilinearSurface {
        prefactor: 4.0 * gc,
        pairs: vec![
            (f_cav.clone(), single.b.clone()),
            (f_atom.scale(sq(ks)), single.c.clone()),
        ],
    };
    let tt = BilinearSurface {
        prefactor: 4.0,
        pairs: vec![
            (
                f_cav,
                single.a.scale(sq(ks)).add(&single.b.scale(sq(gc))),
            ),
            (f_atom.scale(sq(gc * ks)), single.c.clone()),
        ],
    };
    let rt = BilinearSurface {
        prefactor: 4.0 * gc,
        pairs: vec![(
            src.beta.clone(),
            single.a.scale(sq(ks)).add(&single.b.scale(sq(gc))),
        )],
    };
    let rr = BilinearSurface {
        prefactor: 4.0 * gc * gc,
        pairs: vec![(src.beta.clone(), single.b.clone())],
    };
    [tr, rt, rr, tt]
}

/// Closed-form conditioned probabilities for the entangled-source input.
/// They reduce to the plain-router expressions as `gamma_s -> infinity` and
/// sum to one exactly.
pub fn entangled_source_probabilities(rates: &RateSet) -> RoutingProbabilities {
    let ks = rates.kappa_s;
    let gc = rates.gamma_c;
    let gs = rates.gamma_s;
    let den = (2.0 * gc + ks).powi(2) * (2.0 * gc + 3.0 * ks) * (2.0 * gs + 2.0 * gc + ks);
    let p_tr =
        4.0 * ks * gc * (6.0 * gs * (gc + ks) + (gc + 2.0 * ks) * (2.0 * gc + 3.0 * ks)) / den;
    let p_rt = 4.0 * ks * gc * gc * (2.0 * (gs + gc) + 3.0 * ks) / den;
    let p_rr = 8.0 * gc.powi(3) * (2.0 * (gs + gc) + 3.0 * ks) / den;
    let p_tt = ks
        * (8.0 * gc * gc * (gs + gc)
            + 4.0 * gc * ks * (gs + 2.0 * gc)
            + 2.0 * ks * ks * (3.0 * gs - 2.0 * gc)
            + 3.0 * ks.powi(3))
        / den;
    RoutingProbabilities::new(p_tr, p_rt, p_rr, p_tt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::two_level::two_level_probabilities;
    use approx::assert_relative_eq;

    fn rates(ks: f64, gc: f64, gs: f64) -> RateSet {
        RateSet {
            kappa_s: ks,
            gamma_c: gc,
            gamma_s: gs,
            ..Default::default()
        }
    }

    #[test]
    fn sums_to_one_exactly() {
        for &(ks, gc, gs) in &[(1.7, 1.3, 0.9), (5.0, 0.3, 7.0), (0.1, 2.0, 0.01)] {
            let p = entangled_source_probabilities(&rates(ks, gc, gs));
            assert_relative_eq!(p.sum(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn unentangled_limit_recovers_plain_router() {
        let p = entangled_source_probabilities(&rates(1.0, 1.0, 1e6));
        let q = two_level_probabilities(&rates(1.0, 1.0, 0.0));
        assert_relative_eq!(p.p_tr, q.p_tr, epsilon = 1e-4);
        assert_relative_eq!(p.p_rt, q.p_rt, epsilon = 1e-4);
        assert_relative_eq!(p.p_rr, q.p_rr, epsilon = 1e-4);
        assert_relative_eq!(p.p_tt, q.p_tt, epsilon = 1e-4);
    }

    #[test]
    fn surface_integrals_match_closed_forms_after_conditioning() {
        let r = rates(1.3, 0.8, 0.6);
        let surfaces = entangled_surfaces(&r);
        let raw: Vec<f64> = surfaces.iter().map(|s| s.integral()).collect();
        let total: f64 = raw.iter().sum();
        let p = entangled_source_probabilities(&r);
        for (raw_p, expected) in raw.iter().zip([p.p_tr, p.p_rt, p.p_rr, p.p_tt]) {
            assert_relative_eq!(raw_p / total, expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn initial_conditions() {
        let amps = entangled_source_amplitudes(&rates(1.0, 1.0, 2.0));
        assert_eq!(amps.xi.eval(0.0), 1.0);
        assert_eq!(amps.alpha.eval(0.0), 0.0);
        assert_eq!(amps.beta.eval(0.0), 0.0);
    }

    #[test]
    fn asymptotic_efficiency_approaches_paper_value() {
        // gs -> 0 with kappa_s at the optimum 1 + sqrt(3): C^tr -> 8k(1+k)/(2+k)^3
        let ks = 1.0 + 3.0f64.sqrt();
        let p = entangled_source_probabilities(&rates(ks, 1.0, 1e-9));
        assert_relative_eq!(p.c_tr, 0.7698, epsilon = 1e-3);
    }
}
