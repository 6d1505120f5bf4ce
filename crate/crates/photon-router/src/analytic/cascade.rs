//! Triply cascaded chain: feeder cavity -> single-sided stage -> router.

use crate::error::Result;
use crate::exppoly::{BilinearSurface, ExpPoly};
use crate::quadrature;
use crate::types::{RateSet, RoutingProbabilities};

use super::two_level::{grid_extents, sample_surfaces};

/// Pre-collapse two-excitation amplitudes (`|2gg>`, `|1eg>`, `|1ge>`,
/// `|0ee>`) and the three post-collapse branches.
#[derive(Debug, Clone)]
pub struct CascadeAmplitudes {
    pub alpha: ExpPoly,
    pub beta: ExpPoly,
    pub delta: ExpPoly,
    pub eta: ExpPoly,
    /// Collapse to the feeder: `|1gg>`, `|0eg>`, `|0ge>`.
    pub a1: ExpPoly,
    pub b1: ExpPoly,
    pub c1: ExpPoly,
    /// Collapse to the first atom: `|0eg>`, `|0ge>`.
    pub b2: ExpPoly,
    pub c2: ExpPoly,
    /// Collapse to the router atom: `|0ge>`.
    pub c3: ExpPoly,
}

/// Solve the full cascaded Schroedinger chain. All ten coefficient
/// functions come from the same driven-ODE ladder, so every degenerate rate
/// combination (`gamma_c1 = kappa_s`, `2 gamma_c2 = kappa_s`,
/// `2 gamma_c2 = gamma_c1`, `2 gamma_c2 + gamma_c1 = 2 kappa_s`) is handled
/// by the secular-term limit automatically.
pub fn cascade_amplitudes(rates: &RateSet) -> CascadeAmplitudes {
    let ks = rates.kappa_s;
    let g1 = rates.gamma_c1;
    let g2 = rates.gamma_c2;
    let sq = f64::sqrt;

    let alpha = ExpPoly::exp(1.0, 2.0 * ks);
    // beta' = -(ks + g1) beta - 2 sqrt(2 ks g1) alpha
    let beta = ExpPoly::solve_driven(ks + g1, &alpha.scale(-2.0 * sq(2.0 * ks * g1)), 0.0);
    // delta' = -(ks + 2 g2) delta - 2 sqrt(2) sqrt(g2 ks) alpha - 2 sqrt(g1 g2) beta
    let delta_drive = alpha
        .scale(-2.0 * sq(2.0) * sq(g2 * ks))
        .add(&beta.scale(-2.0 * sq(g1 * g2)));
    let delta = ExpPoly::solve_driven(ks + 2.0 * g2, &delta_drive, 0.0);
    // eta' = -(g1 + 2 g2) eta - 2 sqrt(g2 ks) beta - 2 sqrt(ks g1) delta
    let eta_drive = beta
        .scale(-2.0 * sq(g2 * ks))
        .add(&delta.scale(-2.0 * sq(ks * g1)));
    let eta = ExpPoly::solve_driven(g1 + 2.0 * g2, &eta_drive, 0.0);

    let a1 = ExpPoly::exp(1.0, ks);
    let b1 = ExpPoly::solve_driven(g1, &a1.scale(-2.0 * sq(ks * g1)), 0.0);
    let c1_drive = a1
        .scale(-2.0 * sq(g2 * ks))
        .add(&b1.scale(-2.0 * sq(g1 * g2)));
    let c1 = ExpPoly::solve_driven(2.0 * g2, &c1_drive, 0.0);

    let b2 = ExpPoly::exp(1.0, g1);
    let c2 = ExpPoly::solve_driven(2.0 * g2, &b2.scale(-2.0 * sq(g1 * g2)), 0.0);
    let c3 = ExpPoly::exp(1.0, 2.0 * g2);

    CascadeAmplitudes {
        alpha,
        beta,
        delta,
        eta,
        a1,
        b1,
        c1,
        b2,
        c2,
        c3,
    }
}

/// The four ordered correlation surfaces. First superscript = first
/// detection; the transmitted channel collects the feeder and both atoms,
/// the reflected channel only the router atom's backward emission.
pub fn cascade_surfaces(rates: &RateSet) -> [BilinearSurface; 4] {
    let ks = rates.kappa_s;
    let g1 = rates.gamma_c1;
    let g2 = rates.gamma_c2;
    let sq = f64::sqrt;
    let amps = cascade_amplitudes(rates);

    // components of the transmitted first click over (|1gg>, |0eg>, |0ge>)
    let p1 = amps
        .alpha
        .scale(sq(2.0 * ks))
        .add(&amps.beta.scale(sq(g1)))
        .add(&amps.delta.scale(sq(g2)));
    let p2 = amps.beta.scale(sq(ks)).add(&amps.eta.scale(sq(g2)));
    let p3 = amps.delta.scale(sq(ks)).add(&amps.eta.scale(sq(g1)));

    // second-click transmitted amplitudes along each branch
    let s1 = amps
        .a1
        .scale(sq(ks))
        .add(&amps.b1.scale(sq(g1)))
        .add(&amps.c1.scale(sq(g2)));
    let s2 = amps.b2.scale(sq(g1)).add(&amps.c2.scale(sq(g2)));
    let s3 = amps.c3.scale(sq(g2));

    let tr = BilinearSurface {
        prefactor: 4.0 * g2,
        pairs: vec![
            (p1.clone(), amps.c1.clone()),
            (p2.clone(), amps.c2.clone()),
            (p3.clone(), amps.c3.clone()),
        ],
    };
    let tt = BilinearSurface {
        prefactor: 4.0,
        pairs: vec![(p1, s1.clone()), (p2, s2.clone()), (p3, s3)],
    };
    let rt = BilinearSurface {
        prefactor: 4.0 * g2,
        pairs: vec![(amps.delta.clone(), s1), (amps.eta.clone(), s2)],
    };
    let rr = BilinearSurface {
        prefactor: 4.0 * g2 * g2,
        pairs: vec![
            (amps.delta.clone(), amps.c1.clone()),
            (amps.eta.clone(), amps.c2.clone()),
        ],
    };
    [tr, rt, rr, tt]
}

/// Point evaluation of the four cascade correlation functions.
pub fn cascade_correlations(rates: &RateSet, t: f64, tau: f64) -> (f64, f64, f64, f64) {
    let [tr, rt, rr, tt] = cascade_surfaces(rates);
    (tr.eval(t, tau), rt.eval(t, tau), rr.eval(t, tau), tt.eval(t, tau))
}

/// Assemble the correlation surfaces and integrate them on the default grid
/// through the shared quadrature pipeline.
pub fn cascade_probabilities(rates: &RateSet) -> Result<RoutingProbabilities> {
    let surfaces = cascade_surfaces(rates);
    let grid = sample_surfaces(&surfaces, quadrature::DEFAULT_GRID_POINTS);
    quadrature::integrate_probabilities(&grid)
}

/// Exact route: integrate the bilinear surfaces term by term. Same model,
/// different integration path; the quadrature route is checked against it.
pub fn cascade_probabilities_exact(rates: &RateSet) -> RoutingProbabilities {
    let [tr, rt, rr, tt] = cascade_surfaces(rates);
    RoutingProbabilities::new(tr.integral(), rt.integral(), rr.integral(), tt.integral())
}

/// Grid extents used by the quadrature route (exposed for diagnostics).
pub fn cascade_grid_extents(rates: &RateSet) -> (f64, f64) {
    grid_extents(&cascade_surfaces(rates))
}
