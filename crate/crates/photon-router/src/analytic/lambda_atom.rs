//! Three-level atom in the Lambda configuration behind a single-sided
//! cavity: the polarization router.

use crate::error::{Result, RouterError};
use crate::exppoly::ExpPoly;
use crate::types::RateSet;

/// Routing record for the Lambda scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaResult {
    /// Probability that the first detected photon is V (n = 2 input).
    pub p_v: f64,
    /// V-then-H detection probability; equals `p_v` for n = 2 since a V
    /// detection leaves the atom transparent.
    pub p_vh: f64,
    /// H-then-V detection probability.
    pub p_hv: f64,
    /// Routing efficiency `p_vh + p_hv`.
    pub c_tr: f64,
    /// First-order spontaneous-emission loss estimate `gamma / gamma_c`
    /// (symmetric transitions, long pulse).
    pub p_sp: f64,
    /// First-order intrinsic-cavity loss estimate `4 kappa_i / kappa_ex`.
    pub p_loss: Option<f64>,
}

/// No-jump amplitudes for an n-photon H Fock state driving the atom out of
/// `|g1>`: `alpha` multiplies `|n, g1>`, `beta` multiplies `|n-1, e>`.
pub fn lambda_amplitudes(n: u32, rates: &RateSet) -> (ExpPoly, ExpPoly) {
    let ks = rates.kappa_s;
    let gh = rates.gamma_ch;
    let gv = rates.gamma_cv;
    let nf = n as f64;
    let alpha = ExpPoly::exp(1.0, nf * ks);
    // beta' = -[(n-1) ks + gh + gv] beta - 2 sqrt(n ks gh) alpha
    let beta = ExpPoly::solve_driven(
        (nf - 1.0) * ks + gh + gv,
        &alpha.scale(-2.0 * (nf * ks * gh).sqrt()),
        0.0,
    );
    (alpha, beta)
}

/// Closed form for the probability that the first detected photon is V,
/// for an n-photon H input.
pub fn lambda_pv(n: u32, rates: &RateSet) -> f64 {
    let ks = rates.kappa_s;
    let gh = rates.gamma_ch;
    let gv = rates.gamma_cv;
    let nf = n as f64;
    let bracket = (gv - gh).powi(2)
        + (gv + gh) * (3.0 * nf - 2.0) * ks
        + (2.0 * nf - 1.0) * (nf - 1.0) * ks * ks;
    1.0 / (1.0 + bracket / (4.0 * gh * gv))
}

/// Closed form for the H-then-V probability with a two-photon input and the
/// atom initialized in `|g1>`. Valid for n = 2 only (after an H detection
/// the atom is partially excited, so `lambda_pv` does not compose).
pub fn lambda_phv(rates: &RateSet) -> f64 {
    let ks = rates.kappa_s;
    let gh = rates.gamma_ch;
    let gv = rates.gamma_cv;
    (ks * (7.0 * gv - gh + 6.0 * ks) + (gv - gh).powi(2))
        / ((ks + gh + gv) * (gh + gv))
        * lambda_pv(2, rates)
}

/// Full routing record for the two-photon Lambda router.
pub fn lambda_routing(rates: &RateSet) -> Result<LambdaResult> {
    rates.require_positive(&[("gamma_ch", rates.gamma_ch), ("gamma_cv", rates.gamma_cv)])?;
    rates.require_non_negative(&[
        ("kappa_s", rates.kappa_s),
        ("gamma", rates.gamma),
        ("kappa_i", rates.kappa_i),
        ("kappa_ex", rates.kappa_ex),
    ])?;
    let p_vh = lambda_pv(2, rates);
    let p_hv = lambda_phv(rates);
    let gamma_c = 0.5 * (rates.gamma_ch + rates.gamma_cv);
    let p_sp = rates.gamma / gamma_c;
    let p_loss = if rates.kappa_i == 0.0 && rates.kappa_ex == 0.0 {
        None
    } else if rates.kappa_ex == 0.0 {
        return Err(RouterError::LossWithoutCoupling);
    } else {
        Some(4.0 * rates.kappa_i / rates.kappa_ex)
    };
    Ok(LambdaResult {
        p_v: p_vh,
        p_vh,
        p_hv,
        c_tr: p_vh + p_hv,
        p_sp,
        p_loss,
    })
}

/// H-then-H probability (both photons leave unconverted); used by tests to
/// confirm the three outcomes are exhaustive.
pub fn lambda_phh(rates: &RateSet) -> f64 {
    let ks = rates.kappa_s;
    let gh = rates.gamma_ch;
    let gv = rates.gamma_cv;
    let sq = f64::sqrt;
    let (alpha, beta) = lambda_amplitudes(2, rates);
    // H click on alpha|2,g1> + beta|1,e>:
    //   (2 sqrt(ks) alpha + sqrt(2 gh) beta)|1,g1> + sqrt(2 ks) beta|0,e>
    let f1 = alpha.scale(2.0 * sq(ks)).add(&beta.scale(sq(2.0 * gh)));
    let f0 = beta.scale(sq(2.0 * ks));
    let (a1, b1) = lambda_amplitudes(1, rates);
    let ce = ExpPoly::exp(1.0, gh + gv);
    // second H click: sqrt(2 ks) a1 + sqrt(2 gh) b1 on the |1,g1> branch,
    // sqrt(2 gh) ce on the |0,e> branch
    let s1 = a1.scale(sq(2.0 * ks)).add(&b1.scale(sq(2.0 * gh)));
    let s0 = ce.scale(sq(2.0 * gh));
    let pairs = [(f1, s1), (f0, s0)];
    let mut total = 0.0;
    for (ai, bi) in &pairs {
        for (aj, bj) in &pairs {
            total += ai.mul(aj).integral() * bi.mul(bj).integral();
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rates(ks: f64, gh: f64, gv: f64) -> RateSet {
        RateSet {
            kappa_s: ks,
            gamma_ch: gh,
            gamma_cv: gv,
            ..Default::default()
        }
    }

    #[test]
    fn symmetric_long_pulse_is_certain() {
        let p = lambda_pv(2, &rates(1e-9, 1.0, 1.0));
        assert_relative_eq!(p, 1.0, epsilon = 1e-8);
        let p5 = lambda_pv(5, &rates(1e-9, 1.0, 1.0));
        assert_relative_eq!(p5, 1.0, epsilon = 1e-7);
    }

    #[test]
    fn asymmetric_single_photon_value() {
        // n = 1, kappa_s -> 0, gamma_cv = 3 gamma_ch: P_V = 0.75
        let p = lambda_pv(1, &rates(1e-12, 1.0, 3.0));
        assert_relative_eq!(p, 0.75, epsilon = 1e-9);
    }

    #[test]
    fn two_photon_symmetric_value() {
        // n = 2, gamma_ch = gamma_cv = gamma, kappa_s = 0.1 gamma
        let p = lambda_pv(2, &rates(0.1, 1.0, 1.0));
        assert_relative_eq!(p, 1.0 / (1.0 + (0.8 + 0.03) / 4.0), epsilon = 1e-12);
        assert_relative_eq!(p, 0.828157, epsilon = 1e-6);
    }

    #[test]
    fn pv_matches_first_jump_quadrature() {
        // P_V(n) = \int 2 gamma_cv |beta|^2
        for &(n, ks, gh, gv) in &[(1, 0.2, 1.0, 3.0), (2, 0.1, 1.0, 1.0), (3, 0.15, 0.7, 1.3)] {
            let r = rates(ks, gh, gv);
            let (_, beta) = lambda_amplitudes(n, &r);
            let integral = beta.mul(&beta).scale(2.0 * gv).integral();
            assert_relative_eq!(integral, lambda_pv(n, &r), epsilon = 1e-12);
        }
    }

    #[test]
    fn outcomes_are_exhaustive() {
        for &(ks, gh, gv) in &[(0.1, 1.0, 1.0), (0.5, 1.0, 2.0), (2.0, 0.5, 3.0)] {
            let r = rates(ks, gh, gv);
            let total = lambda_pv(2, &r) + lambda_phv(&r) + lambda_phh(&r);
            assert_relative_eq!(total, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn symmetric_long_pulse_routes_perfectly() {
        let res = lambda_routing(&rates(1e-9, 1.0, 1.0)).unwrap();
        assert!(res.p_hv < 1e-8);
        assert_relative_eq!(res.c_tr, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn spontaneous_loss_estimate() {
        let mut r = rates(0.3, 1.0, 1.0);
        r.gamma = 0.01;
        let res = lambda_routing(&r).unwrap();
        assert_relative_eq!(res.p_sp, 0.01, epsilon = 1e-15);
        // independent of kappa_s
        let mut r2 = r;
        r2.kappa_s = 3.0;
        assert_relative_eq!(lambda_routing(&r2).unwrap().p_sp, res.p_sp);
    }

    #[test]
    fn intrinsic_loss_estimate() {
        let mut r = rates(0.3, 1.0, 1.0);
        r.kappa_i = 0.01;
        r.kappa_ex = 1.0;
        assert_relative_eq!(lambda_routing(&r).unwrap().p_loss.unwrap(), 0.04);
        r.kappa_ex = 0.0;
        assert!(lambda_routing(&r).is_err());
    }

    #[test]
    fn high_enhancement_approaches_unity() {
        // gamma_ch = gamma_cv = 5 kappa_s
        let res = lambda_routing(&rates(1.0, 5.0, 5.0)).unwrap();
        assert!(res.c_tr > 0.95, "c_tr = {}", res.c_tr);
    }

    #[test]
    fn amplitudes_initial_conditions() {
        let (alpha, beta) = lambda_amplitudes(2, &rates(0.3, 1.0, 2.0));
        assert_eq!(alpha.eval(0.0), 1.0);
        assert_eq!(beta.eval(0.0), 0.0);
    }

    #[test]
    fn n_one_reduces_to_two_level_structure() {
        // beta(n=1) equals the plain-router single-photon b with
        // 2 gamma_c -> gamma_ch + gamma_cv and coupling sqrt(ks gamma_ch)
        let r = rates(0.4, 0.8, 1.1);
        let (_, beta) = lambda_amplitudes(1, &r);
        let drive = ExpPoly::exp(-2.0 * (r.kappa_s * r.gamma_ch).sqrt(), r.kappa_s);
        let expected = ExpPoly::solve_driven(r.gamma_ch + r.gamma_cv, &drive, 0.0);
        for &t in &[0.2, 1.0, 3.0] {
            assert_relative_eq!(beta.eval(t), expected.eval(t), epsilon = 1e-14);
        }
    }
}
