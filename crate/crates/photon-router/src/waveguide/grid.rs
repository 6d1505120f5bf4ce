//! Spatial grid and pulse sampling for the real-space propagator.

use crate::error::{Result, RouterError};
use crate::types::{PulseShape, PulseSpec};

/// Uniform 1D grid with the cavity junction at its center cell.
///
/// Transport runs at unit CFL (`v_g dt = dx`), so one step moves every
/// photon by exactly one cell; the fiber-cavity coupling acts at the
/// junction cell. The coupling profile is a single area-normalized cell,
/// the point-coupling limit of the Gaussian profile: at the fast-cavity
/// parameters a profile wider than `v_g / kappa_ex` acquires non-Markovian
/// retardation across itself, which is outside the model being simulated.
#[derive(Debug, Clone, Copy)]
pub struct WaveguideGrid {
    /// Number of cells.
    pub n: usize,
    /// Domain length.
    pub length: f64,
    /// Group velocity.
    pub v_g: f64,
    /// Junction cell index.
    pub jc: usize,
}

impl WaveguideGrid {
    pub fn new(n: usize, length: f64, v_g: f64) -> Result<Self> {
        if n < 32 {
            return Err(RouterError::InvalidConfig(
                "waveguide grid needs at least 32 cells".into(),
            ));
        }
        if !(length > 0.0) || !(v_g > 0.0) {
            return Err(RouterError::InvalidConfig(
                "waveguide grid needs positive length and group velocity".into(),
            ));
        }
        Ok(WaveguideGrid {
            n,
            length,
            v_g,
            jc: n / 2,
        })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn dt(&self) -> f64 {
        self.dx() / self.v_g
    }

    /// Cell-center coordinate.
    pub fn x(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }

    pub fn x_c(&self) -> f64 {
        self.x(self.jc)
    }

    /// Discrete coupling profile (area-normalized single cell).
    pub fn chi(&self) -> Vec<f64> {
        let mut chi = vec![0.0; self.n];
        chi[self.jc] = 1.0 / self.dx();
        chi
    }
}

/// Sample a pulse envelope onto the grid, unit-normalized, with its leading
/// edge `gap` cells left of the junction. Returns the amplitude vector and
/// the index range with support.
pub fn sample_pulse(
    grid: &WaveguideGrid,
    pulse: &PulseSpec,
    gap_cells: usize,
) -> Result<(Vec<f64>, usize, usize)> {
    let ks = pulse.kappa_s;
    let vg = grid.v_g;
    let dx = grid.dx();
    let front = grid.jc as isize - gap_cells as isize;
    let mut u = vec![0.0; grid.n];
    let (lo, hi) = match pulse.shape {
        PulseShape::Exponential => {
            // intensity ~ exp(2 kappa_s (x - x_front)/v_g) up to the front
            let extent = (10.5 * vg / ks / dx).ceil() as isize;
            let lo = front - extent;
            if lo < 4 {
                return Err(RouterError::DomainTooSmall {
                    needed: (extent + gap_cells as isize + 4) as usize,
                    available: grid.jc,
                });
            }
            for i in lo..=front {
                let x = grid.x(i as usize);
                let xf = grid.x(front as usize);
                u[i as usize] = (ks * (x - xf) / vg).exp();
            }
            (lo as usize, front as usize)
        }
        PulseShape::Gaussian => {
            // intensity HWHM = v_g / kappa_s
            let w = vg / ks;
            let half_extent = (5.6 * w / dx).ceil() as isize;
            let center = front - half_extent;
            let lo = center - half_extent;
            if lo < 4 {
                return Err(RouterError::DomainTooSmall {
                    needed: (2 * half_extent + gap_cells as isize + 4) as usize,
                    available: grid.jc,
                });
            }
            let xc = grid.x(center as usize);
            for i in lo..=front {
                let x = grid.x(i as usize);
                u[i as usize] = (-0.5 * std::f64::consts::LN_2 * ((x - xc) / w).powi(2)).exp();
            }
            (lo as usize, front as usize)
        }
        PulseShape::Square => {
            // full width = 2 * HWHM = 2 v_g / kappa_s
            let extent = (2.0 * vg / ks / dx).ceil() as isize;
            let lo = front - extent;
            if lo < 4 {
                return Err(RouterError::DomainTooSmall {
                    needed: (extent + gap_cells as isize + 4) as usize,
                    available: grid.jc,
                });
            }
            for i in lo..=front {
                u[i as usize] = 1.0;
            }
            (lo as usize, front as usize)
        }
    };
    if hi >= grid.jc {
        return Err(RouterError::PulseOverlap {
            front: grid.x(hi),
            cavity: grid.x_c(),
        });
    }
    let norm: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    u.iter_mut().for_each(|a| *a /= norm);
    Ok((u, lo, hi))
}

/// Time for the sampled pulse to stream fully past the junction.
pub fn pulse_transit_time(grid: &WaveguideGrid, support_lo: usize) -> f64 {
    (grid.jc - support_lo + 2) as f64 * grid.dt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::PulseShape;

    #[test]
    fn pulse_is_normalized_and_left_of_junction() {
        let grid = WaveguideGrid::new(2048, 26.0, 1.0).unwrap();
        for shape in [PulseShape::Exponential, PulseShape::Gaussian, PulseShape::Square] {
            let pulse = PulseSpec::new(shape, 1.0).unwrap();
            let (u, lo, hi) = sample_pulse(&grid, &pulse, 3).unwrap();
            let norm: f64 = u.iter().map(|a| a * a).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            assert!(hi < grid.jc);
            assert!(lo >= 4);
        }
    }

    #[test]
    fn square_pulse_support_length() {
        let grid = WaveguideGrid::new(4096, 40.0, 1.0).unwrap();
        let pulse = PulseSpec::new(PulseShape::Square, 1.0).unwrap();
        let (_, lo, hi) = sample_pulse(&grid, &pulse, 3).unwrap();
        let len = (hi - lo) as f64 * grid.dx();
        assert!((len - 2.0).abs() < 2.0 * grid.dx());
    }

    #[test]
    fn oversized_pulse_is_rejected() {
        let grid = WaveguideGrid::new(64, 1.0, 1.0).unwrap();
        let pulse = PulseSpec::new(PulseShape::Exponential, 0.1).unwrap();
        assert!(sample_pulse(&grid, &pulse, 3).is_err());
    }
}
