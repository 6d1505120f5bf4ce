//! Single-sided cavity QED stage: bunched two-photon output and the joint
//! detection amplitude.

use crate::exppoly::ExpPoly;
use crate::types::RateSet;

/// Two-photon no-jump amplitudes `alpha` (`|2g>`) and `beta` (`|1e>`) of the
/// single-sided stage.
pub fn bunched_amplitudes(rates: &RateSet) -> (ExpPoly, ExpPoly) {
    let ks = rates.kappa_s;
    let g1 = rates.gamma_c1;
    let alpha = ExpPoly::exp(1.0, 2.0 * ks);
    // beta' = -(ks + g1) beta - 2 sqrt(2 ks g1) alpha
    let beta = ExpPoly::solve_driven(
        ks + g1,
        &alpha.scale(-2.0 * (2.0 * ks * g1).sqrt()),
        0.0,
    );
    (alpha, beta)
}

/// Joint two-photon detection amplitude `f(t, tau)` in the paper's
/// normalization (`f(0,0) = 1`): leading form for pulses long compared to
/// the stage response, with the transient second bracket included.
///
/// The degenerate point `gamma_c1 = kappa_s` is a removable singularity of
/// the printed expression only through the prefactor convention; the
/// two-bracket form itself stays finite and is evaluated directly.
pub fn joint_amplitude(rates: &RateSet, t: f64, tau: f64) -> f64 {
    let ks = rates.kappa_s;
    let g1 = rates.gamma_c1;
    let decay = (-(g1 - ks) * tau).exp();
    (1.0 - 4.0 * decay) * (-2.0 * ks * t).exp() * (-ks * tau).exp()
        - 2.0 * (1.0 - 3.0 * decay) * (-g1 * t).exp() * (-ks * t).exp() * (-ks * tau).exp()
}

/// Conditional photon-flux bunching factors of the single-sided stage in
/// the long-pulse regime, computed from the exact collapse algebra at a
/// reference time deep in the steady window.
///
/// Returns `(after_over_before, after_over_naive)`: the detection rate just
/// after a first detection relative to the rate just before it, and
/// relative to the rate a bare single remaining excitation would give.
pub fn bunching_factors(rates: &RateSet) -> (f64, f64) {
    let ks = rates.kappa_s;
    let g1 = rates.gamma_c1;
    let (alpha, beta) = bunched_amplitudes(rates);
    // steady window: transients die like e^{-g1 t}, the pulse like e^{-2 ks t}
    let t0 = 8.0 / g1;
    let al = alpha.eval(t0);
    let be = beta.eval(t0);
    let sq = f64::sqrt;
    // a_out = sqrt(2 ks) a_s + sqrt(2 g1) sigma
    let f_cav = 2.0 * sq(ks) * al + sq(2.0 * g1) * be; // |1g> component
    let f_atom = sq(2.0 * ks) * be; // |0e> component
    let norm2 = al * al + be * be;
    let rate_before = (f_cav * f_cav + f_atom * f_atom) / norm2;
    // renormalized post-collapse state, detected again at tau = 0
    let second = sq(2.0 * ks) * f_cav + sq(2.0 * g1) * f_atom;
    let rate_after = second * second / (f_cav * f_cav + f_atom * f_atom);
    // a bare single photon in the feeder would click at 2 kappa_s
    (rate_after / rate_before, rate_after / (2.0 * ks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rates(ks: f64, g1: f64) -> RateSet {
        RateSet {
            kappa_s: ks,
            gamma_c1: g1,
            ..Default::default()
        }
    }

    #[test]
    fn f_at_origin_is_one() {
        assert_relative_eq!(joint_amplitude(&rates(1.0, 5.0), 0.0, 0.0), 1.0);
    }

    #[test]
    fn steady_flux_is_nine_times_single_photon_rate() {
        // |f(t, 0)|^2 -> 9 e^{-4 ks t} in the steady window
        let r = rates(1.0, 50.0);
        let t = 0.5;
        let f = joint_amplitude(&r, t, 0.0);
        assert_relative_eq!(f * f, 9.0 * (-4.0 * t).exp(), max_relative = 1e-3);
    }

    #[test]
    fn bunching_factors_long_pulse() {
        let (after_before, after_naive) = bunching_factors(&rates(1e-4, 1.0));
        assert_relative_eq!(after_before, 4.5, max_relative = 2e-3);
        assert_relative_eq!(after_naive, 9.0, max_relative = 2e-3);
    }

    #[test]
    fn initial_conditions() {
        let (alpha, beta) = bunched_amplitudes(&rates(1.0, 5.0));
        assert_eq!(alpha.eval(0.0), 1.0);
        assert_eq!(beta.eval(0.0), 0.0);
    }
}
