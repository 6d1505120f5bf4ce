//! Two-excitation real-space propagator.
//!
//! Transport is exact translation at unit CFL, implemented as ring-buffer
//! index rotation (no data moves). The fiber-cavity-atom interaction acts
//! at the junction cell through a Cayley (Crank-Nicolson) map each step:
//! exactly norm-preserving for lossless parameters and exact at the carrier
//! frequency, with second-order phase accuracy off carrier.

use num_complex::Complex64;

use crate::error::{Result, RouterError};
use crate::types::{PulseSpec, RateSet};

use super::grid::{sample_pulse, WaveguideGrid};
use super::linalg::CMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// System rates entering the junction blocks.
#[derive(Debug, Clone, Copy)]
pub struct JunctionRates {
    pub kappa_ex: f64,
    pub kappa_i: f64,
    pub g: f64,
    pub gamma: f64,
    /// Cavity detuning from the pulse carrier frame.
    pub delta_c: f64,
    /// Atom detuning from the pulse carrier frame.
    pub delta_a: f64,
}

impl JunctionRates {
    pub fn from_rates(rates: &RateSet) -> Self {
        JunctionRates {
            kappa_ex: rates.kappa_ex,
            kappa_i: rates.kappa_i,
            g: rates.g,
            gamma: rates.gamma,
            delta_c: 0.0,
            delta_a: 0.0,
        }
    }

    pub fn detuned(mut self, delta: f64) -> Self {
        // drive at carrier omega_0 = omega_c + delta: in the carrier frame
        // the system sits at -delta
        self.delta_c = -delta;
        self.delta_a = -delta;
        self
    }
}

/// Indices of the 14 double-junction variables.
mod dvar {
    pub const R2: usize = 0; // both photons at the junction, right-moving
    pub const RL: usize = 1;
    pub const L2: usize = 2;
    pub const RA: usize = 3; // photon at junction (r) + cavity a
    pub const RB: usize = 4;
    pub const RS: usize = 5;
    pub const LA: usize = 6;
    pub const LB: usize = 7;
    pub const LS: usize = 8;
    pub const AA: usize = 9;
    pub const AB: usize = 10;
    pub const BB: usize = 11;
    pub const AS: usize = 12;
    pub const BS: usize = 13;
}

/// Cayley maps for the three junction block types.
#[derive(Debug, Clone)]
pub struct JunctionMaps {
    /// 14x14 double-junction block.
    pub double: CMatrix,
    /// 5x5 r-spectator block: [sqrt2*Arr(jc,k), B(k,jc), wra, wrb, wrs].
    pub r_spec: CMatrix,
    /// 5x5 l-spectator block: [sqrt2*All(jc,k), B(jc,k), wla, wlb, wls].
    pub l_spec: CMatrix,
    /// 5x5 single-photon block: [wr(jc), wl(jc), a, b, sigma].
    pub single: CMatrix,
}

/// Cayley transform `(I + dt/2 G)^{-1} (I - dt/2 G)` of `G = iH + Lambda`.
fn cayley(h: &CMatrix, lam: &[f64], dt: f64) -> CMatrix {
    let n = h.n;
    let mut plus = CMatrix::identity(n);
    let mut minus = CMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let g = Complex64::new(0.0, 1.0) * h.get(i, j)
                + if i == j {
                    Complex64::new(lam[i], 0.0)
                } else {
                    ZERO
                };
            plus.add_at(i, j, 0.5 * dt * g);
            minus.add_at(i, j, -0.5 * dt * g);
        }
    }
    plus.inverse().matmul(&minus)
}

pub fn build_junction_maps(rates: &JunctionRates, dt: f64) -> JunctionMaps {
    let vbar = (2.0 * rates.kappa_ex / dt).sqrt();
    let s2 = 2.0f64.sqrt();
    let g = rates.g;
    let (dc, da) = (rates.delta_c, rates.delta_a);
    let (ki, gam) = (rates.kappa_i, rates.gamma);
    let re = |x: f64| Complex64::new(x, 0.0);

    // double block
    use dvar::*;
    let mut h = CMatrix::zeros(14);
    let put = |h: &mut CMatrix, i: usize, j: usize, v: f64| {
        h.add_at(i, j, re(v));
        h.add_at(j, i, re(v));
    };
    put(&mut h, R2, RA, s2 * vbar);
    put(&mut h, RL, RB, vbar);
    put(&mut h, RL, LA, vbar);
    put(&mut h, L2, LB, s2 * vbar);
    put(&mut h, RA, AA, s2 * vbar);
    put(&mut h, RB, AB, vbar);
    put(&mut h, RS, AS, vbar);
    put(&mut h, LA, AB, vbar);
    put(&mut h, LB, BB, s2 * vbar);
    put(&mut h, LS, BS, vbar);
    for (i, j) in [(RA, RS), (RB, RS), (LA, LS), (LB, LS)] {
        put(&mut h, i, j, g);
    }
    put(&mut h, AA, AS, s2 * g);
    put(&mut h, BB, BS, s2 * g);
    put(&mut h, AB, AS, g);
    put(&mut h, AB, BS, g);
    for (i, d) in [
        (RA, dc),
        (RB, dc),
        (LA, dc),
        (LB, dc),
        (RS, da),
        (LS, da),
        (AA, 2.0 * dc),
        (AB, 2.0 * dc),
        (BB, 2.0 * dc),
        (AS, dc + da),
        (BS, dc + da),
    ] {
        h.add_at(i, i, re(d));
    }
    let mut lam = [0.0; 14];
    for (i, l) in [
        (RA, ki),
        (RB, ki),
        (LA, ki),
        (LB, ki),
        (RS, gam),
        (LS, gam),
        (AA, 2.0 * ki),
        (AB, 2.0 * ki),
        (BB, 2.0 * ki),
        (AS, ki + gam),
        (BS, ki + gam),
    ] {
        lam[i] = l;
    }
    let double = cayley(&h, &lam, dt);

    // spectator blocks
    let spec = |first_port_couples_a: bool| -> CMatrix {
        let mut h = CMatrix::zeros(5);
        let put5 = |h: &mut CMatrix, i: usize, j: usize, v: f64| {
            h.add_at(i, j, re(v));
            h.add_at(j, i, re(v));
        };
        if first_port_couples_a {
            // [Pr, Pb, wa, wb, ws]: the r-port feeds a, the l-port feeds b
            put5(&mut h, 0, 2, vbar);
            put5(&mut h, 1, 3, vbar);
        } else {
            // [Pl, Pa, wa, wb, ws]: the l-port feeds b, the r-port feeds a
            put5(&mut h, 0, 3, vbar);
            put5(&mut h, 1, 2, vbar);
        }
        put5(&mut h, 2, 4, g);
        put5(&mut h, 3, 4, g);
        h.add_at(2, 2, re(dc));
        h.add_at(3, 3, re(dc));
        h.add_at(4, 4, re(da));
        cayley(&h, &[0.0, 0.0, ki, ki, gam], dt)
    };
    let r_spec = spec(true);
    let l_spec = spec(false);

    // single-photon block [ur, ul, a, b, sigma]
    let mut h = CMatrix::zeros(5);
    let put5 = |h: &mut CMatrix, i: usize, j: usize, v: f64| {
        h.add_at(i, j, re(v));
        h.add_at(j, i, re(v));
    };
    put5(&mut h, 0, 2, vbar);
    put5(&mut h, 1, 3, vbar);
    put5(&mut h, 2, 4, g);
    put5(&mut h, 3, 4, g);
    h.add_at(2, 2, re(dc));
    h.add_at(3, 3, re(dc));
    h.add_at(4, 4, re(da));
    let single = cayley(&h, &[0.0, 0.0, ki, ki, gam], dt);

    JunctionMaps {
        double,
        r_spec,
        l_spec,
        single,
    }
}

/// Sector-decomposed two-excitation wavefunction on the grid.
///
/// The two-photon amplitudes are stored in ring-rotated buffers: physical
/// cell `p` of a right-moving index lives at slot `(p - step) mod n`, of a
/// left-moving index at `(p + step) mod n`, so transport costs nothing.
pub struct WaveguideState {
    pub grid: WaveguideGrid,
    pub rates: JunctionRates,
    maps: JunctionMaps,
    steps: usize,
    /// `phi_rr`: symmetric, both indices right-moving (norm convention:
    /// total rr probability = sum of |entries|^2).
    arr: Vec<Complex64>,
    /// `phi_ll`: symmetric, both left-moving.
    all: Vec<Complex64>,
    /// `phi_rl`: row index right-moving, column left-moving.
    brl: Vec<Complex64>,
    wra: Vec<Complex64>,
    wrb: Vec<Complex64>,
    wrs: Vec<Complex64>,
    wla: Vec<Complex64>,
    wlb: Vec<Complex64>,
    wls: Vec<Complex64>,
    /// System pairs: aa, ab, bb, a-sigma, b-sigma.
    pair: [Complex64; 5],
    boundary_leak: f64,
    loss_gamma_raw: f64,
    loss_kappa_raw: f64,
    pub time: f64,
}

impl WaveguideState {
    /// Initialize with an unentangled product two-photon pulse,
    /// `phi_rr = u(x1) u(x2)`, unit norm.
    pub fn new(grid: WaveguideGrid, rates: JunctionRates, pulse: &PulseSpec) -> Result<Self> {
        let (u, _, _) = sample_pulse(&grid, pulse, 3)?;
        let n = grid.n;
        let mut arr = vec![ZERO; n * n];
        for j in 0..n {
            if u[j] == 0.0 {
                continue;
            }
            for k in 0..n {
                arr[j * n + k] = Complex64::new(u[j] * u[k], 0.0);
            }
        }
        let maps = build_junction_maps(&rates, grid.dt());
        Ok(WaveguideState {
            grid,
            rates,
            maps,
            steps: 0,
            arr,
            all: vec![ZERO; n * n],
            brl: vec![ZERO; n * n],
            wra: vec![ZERO; n],
            wrb: vec![ZERO; n],
            wrs: vec![ZERO; n],
            wla: vec![ZERO; n],
            wlb: vec![ZERO; n],
            wls: vec![ZERO; n],
            pair: [ZERO; 5],
            boundary_leak: 0.0,
            loss_gamma_raw: 0.0,
            loss_kappa_raw: 0.0,
            time: 0.0,
        })
    }

    fn smod(&self) -> usize {
        self.steps % self.grid.n
    }

    /// Buffer slot of physical right-moving cell `p`.
    pub fn r_slot(&self, p: usize) -> usize {
        let n = self.grid.n;
        (p + n - self.smod()) % n
    }

    /// Buffer slot of physical left-moving cell `p`.
    pub fn l_slot(&self, p: usize) -> usize {
        (p + self.smod()) % self.grid.n
    }

    /// Physical cell of a right-type buffer slot.
    pub fn r_phys(&self, b: usize) -> usize {
        (b + self.smod()) % self.grid.n
    }

    /// Physical cell of a left-type buffer slot.
    pub fn l_phys(&self, b: usize) -> usize {
        let n = self.grid.n;
        (b + n - self.smod()) % n
    }

    /// Advance one transport-plus-junction step (`dt = dx / v_g`).
    ///
    /// `dt` must equal the grid step; anything larger violates the CFL
    /// bound, anything smaller is not representable by the exact-shift
    /// transport.
    pub fn step_checked(&mut self, dt: f64) -> Result<()> {
        let dt0 = self.grid.dt();
        if dt > dt0 * (1.0 + 1e-12) {
            return Err(RouterError::CflViolation {
                dt,
                bound: dt0,
            });
        }
        if (dt - dt0).abs() > 1e-12 * dt0 {
            return Err(RouterError::InvalidConfig(format!(
                "exact-shift transport requires v_g dt = dx (dt = {dt0:.6e}); got {dt}"
            )));
        }
        self.step();
        Ok(())
    }

    /// One step: accumulate loss attribution, rotate, clear the entering
    /// edges, apply the junction maps.
    pub fn step(&mut self) {
        self.accumulate_loss_attribution();
        self.steps += 1;
        self.time += self.grid.dt();
        self.clear_edges();
        self.junction_update();
    }

    fn accumulate_loss_attribution(&mut self) {
        let dt = self.grid.dt();
        let (gam, ki) = (self.rates.gamma, self.rates.kappa_i);
        if gam == 0.0 && ki == 0.0 {
            return;
        }
        let sum2 = |v: &[Complex64]| -> f64 { v.iter().map(|c| c.norm_sqr()).sum() };
        let n_sigma = sum2(&self.wrs)
            + sum2(&self.wls)
            + self.pair[3].norm_sqr()
            + self.pair[4].norm_sqr();
        let n_cav = sum2(&self.wra)
            + sum2(&self.wrb)
            + sum2(&self.wla)
            + sum2(&self.wlb)
            + 2.0 * self.pair[0].norm_sqr()
            + 2.0 * self.pair[1].norm_sqr()
            + 2.0 * self.pair[2].norm_sqr()
            + self.pair[3].norm_sqr()
            + self.pair[4].norm_sqr();
        self.loss_gamma_raw += 2.0 * gam * n_sigma * dt;
        self.loss_kappa_raw += 2.0 * ki * n_cav * dt;
    }

    fn clear_edges(&mut self) {
        let n = self.grid.n;
        let zr = self.r_slot(0); // slot that just became the left r-edge
        let zl = self.l_slot(n - 1); // slot that just became the right l-edge
        let mut leak = 0.0;
        for k in 0..n {
            leak += self.arr[zr * n + k].norm_sqr() + self.arr[k * n + zr].norm_sqr();
            leak += self.all[zl * n + k].norm_sqr() + self.all[k * n + zl].norm_sqr();
            leak += self.brl[zr * n + k].norm_sqr() + self.brl[k * n + zl].norm_sqr();
            self.arr[zr * n + k] = ZERO;
            self.arr[k * n + zr] = ZERO;
            self.all[zl * n + k] = ZERO;
            self.all[k * n + zl] = ZERO;
            self.brl[zr * n + k] = ZERO;
            self.brl[k * n + zl] = ZERO;
        }
        leak += self.wra[zr].norm_sqr() + self.wrb[zr].norm_sqr() + self.wrs[zr].norm_sqr();
        leak += self.wla[zl].norm_sqr() + self.wlb[zl].norm_sqr() + self.wls[zl].norm_sqr();
        self.wra[zr] = ZERO;
        self.wrb[zr] = ZERO;
        self.wrs[zr] = ZERO;
        self.wla[zl] = ZERO;
        self.wlb[zl] = ZERO;
        self.wls[zl] = ZERO;
        // the diagonal corner cells were double-counted
        self.boundary_leak += leak;
    }

    fn junction_update(&mut self) {
        let n = self.grid.n;
        let br = self.r_slot(self.grid.jc);
        let bl = self.l_slot(self.grid.jc);
        let s2 = 2.0f64.sqrt();

        // double-junction block
        let mut y = [ZERO; 14];
        y[dvar::R2] = self.arr[br * n + br];
        y[dvar::RL] = self.brl[br * n + bl];
        y[dvar::L2] = self.all[bl * n + bl];
        y[dvar::RA] = self.wra[br];
        y[dvar::RB] = self.wrb[br];
        y[dvar::RS] = self.wrs[br];
        y[dvar::LA] = self.wla[bl];
        y[dvar::LB] = self.wlb[bl];
        y[dvar::LS] = self.wls[bl];
        y[dvar::AA..=dvar::BS].copy_from_slice(&self.pair);
        let mut out = [ZERO; 14];
        self.maps.double.apply(&y, &mut out);
        self.arr[br * n + br] = out[dvar::R2];
        self.brl[br * n + bl] = out[dvar::RL];
        self.all[bl * n + bl] = out[dvar::L2];
        self.wra[br] = out[dvar::RA];
        self.wrb[br] = out[dvar::RB];
        self.wrs[br] = out[dvar::RS];
        self.wla[bl] = out[dvar::LA];
        self.wlb[bl] = out[dvar::LB];
        self.wls[bl] = out[dvar::LS];
        self.pair.copy_from_slice(&out[dvar::AA..=dvar::BS]);

        // r-spectator blocks: spectator right-mover at slot b != br
        let m = &self.maps.r_spec;
        for b in 0..n {
            if b == br {
                continue;
            }
            let y = [
                s2 * self.arr[br * n + b],
                self.brl[b * n + bl],
                self.wra[b],
                self.wrb[b],
                self.wrs[b],
            ];
            let mut out = [ZERO; 5];
            m.apply(&y, &mut out);
            let half = out[0] / s2;
            self.arr[br * n + b] = half;
            self.arr[b * n + br] = half;
            self.brl[b * n + bl] = out[1];
            self.wra[b] = out[2];
            self.wrb[b] = out[3];
            self.wrs[b] = out[4];
        }

        // l-spectator blocks: spectator left-mover at slot b != bl
        let m = &self.maps.l_spec;
        for b in 0..n {
            if b == bl {
                continue;
            }
            let y = [
                s2 * self.all[bl * n + b],
                self.brl[br * n + b],
                self.wla[b],
                self.wlb[b],
                self.wls[b],
            ];
            let mut out = [ZERO; 5];
            m.apply(&y, &mut out);
            let half = out[0] / s2;
            self.all[bl * n + b] = half;
            self.all[b * n + bl] = half;
            self.brl[br * n + b] = out[1];
            self.wla[b] = out[2];
            self.wlb[b] = out[3];
            self.wls[b] = out[4];
        }
    }

    /// Norms of the pure-field sectors: `(p_tt, p_rl, p_rr)`.
    pub fn field_norms(&self) -> (f64, f64, f64) {
        let sum2 = |v: &[Complex64]| -> f64 { v.iter().map(|c| c.norm_sqr()).sum() };
        (sum2(&self.arr), sum2(&self.brl), sum2(&self.all))
    }

    /// Norm still held by system excitations (one-photon and pair sectors).
    pub fn system_norm(&self) -> f64 {
        let sum2 = |v: &[Complex64]| -> f64 { v.iter().map(|c| c.norm_sqr()).sum() };
        sum2(&self.wra)
            + sum2(&self.wrb)
            + sum2(&self.wrs)
            + sum2(&self.wla)
            + sum2(&self.wlb)
            + sum2(&self.wls)
            + self.pair.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn total_norm(&self) -> f64 {
        let (a, b, c) = self.field_norms();
        a + b + c + self.system_norm()
    }

    pub fn boundary_leak(&self) -> f64 {
        self.boundary_leak
    }

    /// Split the rl norm into TR vs RT by exit order: the earlier click is
    /// the photon farther past the junction (distances are flight times at
    /// fixed v_g). Ties count as RT.
    pub fn rl_split(&self) -> (f64, f64) {
        let n = self.grid.n;
        let jc = self.grid.jc as isize;
        let mut tr = 0.0;
        let mut rt = 0.0;
        for b_r in 0..n {
            let j = self.r_phys(b_r) as isize;
            for b_l in 0..n {
                let v = self.brl[b_r * n + b_l].norm_sqr();
                if v == 0.0 {
                    continue;
                }
                let k = self.l_phys(b_l) as isize;
                if j - jc > jc - k {
                    tr += v;
                } else {
                    rt += v;
                }
            }
        }
        (tr, rt)
    }

    /// Mass within `margin` cells of any relevant grid edge (plus anything
    /// that already wrapped), for the boundary-contamination check.
    pub fn edge_mass(&self, margin: usize) -> f64 {
        let n = self.grid.n;
        let mut mass = self.boundary_leak;
        let near_edge = |p: usize| p < margin || p >= n - margin;
        for b in 0..n {
            let pr = self.r_phys(b);
            let pl = self.l_phys(b);
            if near_edge(pr) {
                mass += self.wra[b].norm_sqr() + self.wrb[b].norm_sqr() + self.wrs[b].norm_sqr();
                for k in 0..n {
                    mass += self.arr[b * n + k].norm_sqr();
                    mass += self.brl[b * n + k].norm_sqr();
                }
            }
            if near_edge(pl) {
                mass += self.wla[b].norm_sqr() + self.wlb[b].norm_sqr() + self.wls[b].norm_sqr();
                for k in 0..n {
                    mass += self.all[b * n + k].norm_sqr();
                    mass += self.brl[k * n + b].norm_sqr();
                }
            }
        }
        mass
    }

    /// Largest symmetry violation `|phi(x1,x2) - phi(x2,x1)|` over the
    /// exchange-symmetric sectors.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.grid.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in (j + 1)..n {
                worst = worst.max((self.arr[j * n + k] - self.arr[k * n + j]).norm());
                worst = worst.max((self.all[j * n + k] - self.all[k * n + j]).norm());
            }
        }
        worst
    }

    /// Loss attribution `(gamma part, kappa_i part)`, rescaled so the parts
    /// sum to the exact lost norm.
    pub fn loss_attribution(&self) -> (f64, f64) {
        let exact = (1.0 - self.total_norm() - self.boundary_leak).max(0.0);
        let raw = self.loss_gamma_raw + self.loss_kappa_raw;
        if raw <= 0.0 {
            return (0.0, exact);
        }
        (
            exact * self.loss_gamma_raw / raw,
            exact * self.loss_kappa_raw / raw,
        )
    }

    /// Copy one two-photon sector out in physical coordinates (row-major,
    /// row = first index). `sector` is one of "rr", "rl", "ll".
    pub fn sector_physical(&self, sector: &str) -> Option<Vec<Complex64>> {
        let n = self.grid.n;
        let mut out = vec![ZERO; n * n];
        match sector {
            "rr" => {
                for j in 0..n {
                    let bj = self.r_slot(j);
                    for k in 0..n {
                        out[j * n + k] = self.arr[bj * n + self.r_slot(k)];
                    }
                }
            }
            "rl" => {
                for j in 0..n {
                    let bj = self.r_slot(j);
                    for k in 0..n {
                        out[j * n + k] = self.brl[bj * n + self.l_slot(k)];
                    }
                }
            }
            "ll" => {
                for j in 0..n {
                    let bj = self.l_slot(j);
                    for k in 0..n {
                        out[j * n + k] = self.all[bj * n + self.l_slot(k)];
                    }
                }
            }
            _ => return None,
        }
        Some(out)
    }

    /// One-photon sector in physical coordinates; `name` in
    /// {wra, wrb, wrs, wla, wlb, wls}.
    pub fn one_photon_physical(&self, name: &str) -> Option<Vec<Complex64>> {
        let n = self.grid.n;
        let (buf, right): (&[Complex64], bool) = match name {
            "wra" => (&self.wra, true),
            "wrb" => (&self.wrb, true),
            "wrs" => (&self.wrs, true),
            "wla" => (&self.wla, false),
            "wlb" => (&self.wlb, false),
            "wls" => (&self.wls, false),
            _ => return None,
        };
        let mut out = vec![ZERO; n];
        for p in 0..n {
            let b = if right { self.r_slot(p) } else { self.l_slot(p) };
            out[p] = buf[b];
        }
        Some(out)
    }

    pub fn pair_amplitudes(&self) -> [Complex64; 5] {
        self.pair
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{PulseShape, PulseSpec};

    fn lossless_rates(g: f64, kex: f64) -> JunctionRates {
        JunctionRates {
            kappa_ex: kex,
            kappa_i: 0.0,
            g,
            gamma: 0.0,
            delta_c: 0.0,
            delta_a: 0.0,
        }
    }

    #[test]
    fn free_transport_translates_exactly() {
        let grid = WaveguideGrid::new(128, 16.0, 1.0).unwrap();
        let pulse = PulseSpec::new(PulseShape::Gaussian, 2.0).unwrap();
        let mut state =
            WaveguideState::new(grid, lossless_rates(0.0, 0.0), &pulse).unwrap();
        let before = state.sector_physical("rr").unwrap();
        for _ in 0..10 {
            state.step();
        }
        let after = state.sector_physical("rr").unwrap();
        let n = grid.n;
        for j in 0..n - 10 {
            for k in 0..n - 10 {
                let d = (after[(j + 10) * n + (k + 10)] - before[j * n + k]).norm();
                assert!(d < 1e-14, "transport is not exact translation");
            }
        }
        assert!((state.total_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lossless_norm_conservation() {
        let grid = WaveguideGrid::new(256, 26.0, 1.0).unwrap();
        let pulse = PulseSpec::new(PulseShape::Exponential, 1.0).unwrap();
        let rates = lossless_rates(0.14, 1.0);
        let mut state = WaveguideState::new(grid, rates, &pulse).unwrap();
        for _ in 0..100 {
            state.step();
        }
        assert!(
            (state.total_norm() - 1.0).abs() < 1e-12,
            "norm drift {:e}",
            state.total_norm() - 1.0
        );
    }

    #[test]
    fn exchange_symmetry_is_preserved() {
        let grid = WaveguideGrid::new(192, 20.0, 1.0).unwrap();
        let pulse = PulseSpec::new(PulseShape::Exponential, 1.0).unwrap();
        let mut state = WaveguideState::new(grid, lossless_rates(0.3, 1.0), &pulse).unwrap();
        for _ in 0..80 {
            state.step();
        }
        assert!(state.symmetry_defect() < 1e-12);
    }

    #[test]
    fn cfl_violation_is_rejected() {
        let grid = WaveguideGrid::new(64, 8.0, 1.0).unwrap();
        let pulse = PulseSpec::new(PulseShape::Square, 4.0).unwrap();
        let mut state = WaveguideState::new(grid, lossless_rates(0.0, 0.0), &pulse).unwrap();
        assert!(state.step_checked(grid.dt() * 2.0).is_err());
        assert!(state.step_checked(grid.dt()).is_ok());
    }
}
