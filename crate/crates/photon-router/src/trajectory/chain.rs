//! Cascaded-chain construction: basis enumeration, non-Hermitian
//! Hamiltonian and output-channel operators for any scenario.

use std::collections::HashMap;

use crate::error::{Result, RouterError};
use crate::types::{Scenario, ScenarioConfig};

/// One subsystem in the unidirectional chain, with its local rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Subsystem {
    /// Feeder cavity holding the input Fock state, half-decay `kappa_s`.
    Feeder { kappa_s: f64, max_photons: u32 },
    /// Two-photon-emitting source atom driving the feeder through a weak
    /// left mirror (`kappa_prime`). Its excitation is worth two quanta.
    SourceAtom { gamma_s: f64, kappa_prime: f64 },
    /// Two-level atom coupled to both counterpropagating modes
    /// (transmits forward and reflects backward at `gamma_c` each).
    AtomDouble { gamma_c: f64 },
    /// Two-level atom behind a single-sided cavity (all output forward).
    AtomSingleSided { gamma_c1: f64 },
    /// Lambda atom: H transition from `g1`, V transition into `g2`.
    LambdaAtom { gamma_ch: f64, gamma_cv: f64 },
}

impl Subsystem {
    fn local_dim(&self) -> usize {
        match self {
            Subsystem::Feeder { max_photons, .. } => *max_photons as usize + 1,
            Subsystem::LambdaAtom { .. } => 3, // g1, e, g2
            _ => 2,
        }
    }

    /// Excitation weight of a local state (total is conserved by the
    /// no-jump evolution; a source excitation is worth two photons).
    fn excitation(&self, local: u8) -> u32 {
        match self {
            Subsystem::Feeder { .. } => local as u32,
            Subsystem::SourceAtom { .. } => 2 * local as u32,
            Subsystem::LambdaAtom { .. } => u32::from(local == 1),
            _ => local as u32,
        }
    }

    /// Amplitude self-decay rate of a local state (the `-i rate` diagonal).
    fn self_decay(&self, local: u8) -> f64 {
        match self {
            Subsystem::Feeder { kappa_s, .. } => *kappa_s * local as f64,
            Subsystem::SourceAtom { gamma_s, .. } => 2.0 * gamma_s * local as f64,
            Subsystem::AtomDouble { gamma_c } => 2.0 * gamma_c * local as f64,
            Subsystem::AtomSingleSided { gamma_c1 } => *gamma_c1 * local as f64,
            Subsystem::LambdaAtom {
                gamma_ch, gamma_cv, ..
            } => {
                if local == 1 {
                    gamma_ch + gamma_cv
                } else {
                    0.0
                }
            }
        }
    }
}

/// An output-channel operator: a weighted sum of subsystem lowering paths.
#[derive(Debug, Clone)]
pub struct ChannelOp {
    pub label: &'static str,
    /// Dense matrix, row-major `dim x dim`, acting on the basis.
    pub matrix: Vec<f64>,
}

/// A cascaded chain with its enumerated few-excitation basis.
#[derive(Debug, Clone)]
pub struct ChainSystem {
    pub subsystems: Vec<Subsystem>,
    /// Basis states as per-subsystem local indices, total excitation <= n.
    pub basis: Vec<Vec<u8>>,
    pub index: HashMap<Vec<u8>, usize>,
    /// Decay-matrix `K` (row-major) of the non-Hermitian Hamiltonian
    /// `H = -i K`; the state evolves as `dpsi/dt = -K psi`.
    pub decay_matrix: Vec<f64>,
    /// Ordered output channels (transmitted/reflected, or H/V).
    pub channels: Vec<ChannelOp>,
    /// Basis index of the initial state.
    pub initial: usize,
    /// Largest rate appearing in the chain (for step-size control).
    pub max_rate: f64,
    /// Slowest nonzero self-decay among reachable excited states.
    pub min_rate: f64,
}

impl ChainSystem {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Apply a channel operator to an amplitude vector.
    pub fn apply_channel(&self, channel: &ChannelOp, state: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        let n = self.dim();
        let mut out = vec![num_complex::Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let row = &channel.matrix[i * n..(i + 1) * n];
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for (j, &m) in row.iter().enumerate() {
                if m != 0.0 {
                    acc += m * state[j];
                }
            }
            out[i] = acc;
        }
        out
    }
}

/// Lowering-path descriptor used to assemble channels: subsystem index plus
/// the output amplitude coefficient of its lowering operator.
struct Lowering {
    node: usize,
    coefficient: f64,
    /// Local transition: (from, to). For bosonic feeders the matrix element
    /// also carries `sqrt(n)`.
    kind: LoweringKind,
}

enum LoweringKind {
    Boson,
    TwoLevel,
    LambdaH, // e -> g1
    LambdaV, // e -> g2
}

/// Build the chain for a validated configuration.
pub fn build_chain(config: &ScenarioConfig) -> Result<ChainSystem> {
    let r = &config.rates;
    let n_exc = config.photon_number;
    let mut subsystems = Vec::new();
    // forward lowering paths along the transmission line, upstream first
    let mut line: Vec<Lowering> = Vec::new();
    let mut reflected: Vec<Lowering> = Vec::new();
    let mut v_channel: Vec<Lowering> = Vec::new();
    let mut source: Option<usize> = None;

    match config.scenario {
        Scenario::TwoLevelRouter => {
            subsystems.push(Subsystem::Feeder {
                kappa_s: r.kappa_s,
                max_photons: n_exc,
            });
            subsystems.push(Subsystem::AtomDouble { gamma_c: r.gamma_c });
            line.push(Lowering {
                node: 0,
                coefficient: (2.0 * r.kappa_s).sqrt(),
                kind: LoweringKind::Boson,
            });
            line.push(Lowering {
                node: 1,
                coefficient: (2.0 * r.gamma_c).sqrt(),
                kind: LoweringKind::TwoLevel,
            });
            reflected.push(Lowering {
                node: 1,
                coefficient: (2.0 * r.gamma_c).sqrt(),
                kind: LoweringKind::TwoLevel,
            });
        }
        Scenario::EntangledSourceRouter => {
            if config.photon_number != 2 {
                return Err(RouterError::PhotonNumber {
                    scenario: "entangled-source",
                    n: config.photon_number,
                });
            }
            subsystems.push(Subsystem::SourceAtom {
                gamma_s: r.gamma_s,
                kappa_prime: 1e-3 * r.kappa_s,
            });
            subsystems.push(Subsystem::Feeder {
                kappa_s: r.kappa_s,
                max_photons: 2,
            });
            subsystems.push(Subsystem::AtomDouble { gamma_c: r.gamma_c });
            source = Some(0);
            line.push(Lowering {
                node: 1,
                coefficient: (2.0 * r.kappa_s).sqrt(),
                kind: LoweringKind::Boson,
            });
            line.push(Lowering {
                node: 2,
                coefficient: (2.0 * r.gamma_c).sqrt(),
                kind: LoweringKind::TwoLevel,
            });
            reflected.push(Lowering {
                node: 2,
                coefficient: (2.0 * r.gamma_c).sqrt(),
                kind: LoweringKind::TwoLevel,
            });
        }
        Scenario::TwoStageCascade => {
            subsystems.push(Subsystem::Feeder {
                kappa_s: r.kappa_s,
                max_photons: n_exc,
            });
            subsystems.push(Subsystem::AtomSingleSided {
                gamma_c1: r.gamma_c1,
            });
            subsystems.push(Subsystem::AtomDouble {
                gamma_c: r.gamma_c2,
            });
            line.push(Lowering {
                node: 0,
                coefficient: (2.0 * r.kappa_s).sqrt(),
                kind: LoweringKind::Boson,
            });
            line.push(Lowering {
                node: 1,
                coefficient: (2.0 * r.gamma_c1).sqrt(),
                kind: LoweringKind::TwoLevel,
            });
            line.push(Lowering {
                node: 2,
                coefficient: (2.0 * r.gamma_c2).sqrt(),
                kind: LoweringKind::TwoLevel,
            });
            reflected.push(Lowering {
                node: 2,
                coefficient: (2.0 * r.gamma_c2).sqrt(),
                kind: LoweringKind::TwoLevel,
            });
        }
        Scenario::SingleSidedBunching => {
            subsystems.push(Subsystem::Feeder {
                kappa_s: r.kappa_s,
                max_photons: n_exc,
            });
            subsystems.push(Subsystem::AtomSingleSided {
                gamma_c1: r.gamma_c1,
            });
            line.push(Lowering {
                node: 0,
                coefficient: (2.0 * r.kappa_s).sqrt(),
                kind: LoweringKind::Boson,
            });
            line.push(Lowering {
                node: 1,
                coefficient: (2.0 * r.gamma_c1).sqrt(),
                kind: LoweringKind::TwoLevel,
            });
        }
        Scenario::LambdaRouter => {
            subsystems.push(Subsystem::Feeder {
                kappa_s: r.kappa_s,
                max_photons: n_exc,
            });
            subsystems.push(Subsystem::LambdaAtom {
                gamma_ch: r.gamma_ch,
                gamma_cv: r.gamma_cv,
            });
            line.push(Lowering {
                node: 0,
                coefficient: (2.0 * r.kappa_s).sqrt(),
                kind: LoweringKind::Boson,
            });
            line.push(Lowering {
                node: 1,
                coefficient: (2.0 * r.gamma_ch).sqrt(),
                kind: LoweringKind::LambdaH,
            });
            v_channel.push(Lowering {
                node: 1,
                coefficient: (2.0 * r.gamma_cv).sqrt(),
                kind: LoweringKind::LambdaV,
            });
        }
    }

    // enumerate the product basis with total excitation <= n_exc
    let dims: Vec<usize> = subsystems.iter().map(|s| s.local_dim()).collect();
    let mut basis: Vec<Vec<u8>> = Vec::new();
    let mut current = vec![0u8; subsystems.len()];
    enumerate(&subsystems, &dims, n_exc, 0, &mut current, &mut basis);
    let index: HashMap<Vec<u8>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let dim = basis.len();

    // decay matrix: diagonal self-decay plus cascade couplings
    let mut k_matrix = vec![0.0; dim * dim];
    for (i, state) in basis.iter().enumerate() {
        let mut diag = 0.0;
        for (s, &local) in subsystems.iter().zip(state) {
            diag += s.self_decay(local);
        }
        k_matrix[i * dim + i] = diag;
    }
    // unidirectional line couplings: K += c_up * c_down * (L_down^dag L_up)
    for (u, up) in line.iter().enumerate() {
        for down in line.iter().skip(u + 1) {
            add_transfer(
                &mut k_matrix,
                &basis,
                &index,
                up,
                down,
                up.coefficient * down.coefficient,
            );
        }
    }
    // source-atom pair emission into the feeder:
    // K += 2 sqrt(2 kappa' gamma_s) (a_s^dag)^2 sigma_source
    if let Some(src) = source {
        let (gamma_s, kappa_prime) = match subsystems[src] {
            Subsystem::SourceAtom {
                gamma_s,
                kappa_prime,
            } => (gamma_s, kappa_prime),
            _ => unreachable!(),
        };
        let feeder = src + 1;
        let coeff = 2.0 * (2.0 * kappa_prime * gamma_s).sqrt();
        for (j, state) in basis.iter().enumerate() {
            if state[src] == 1 {
                let n = state[feeder] as f64;
                let mut to = state.clone();
                to[src] = 0;
                to[feeder] += 2;
                if let Some(&i) = index.get(&to) {
                    k_matrix[i * dim + j] += coeff * ((n + 1.0) * (n + 2.0)).sqrt();
                }
            }
        }
    }

    // channel operators
    let mut channels = Vec::new();
    let build_channel = |paths: &[Lowering], label: &'static str| -> ChannelOp {
        let mut m = vec![0.0; dim * dim];
        for path in paths {
            for (j, state) in basis.iter().enumerate() {
                if let Some((to, element)) = lower(state, path, &subsystems) {
                    if let Some(&i) = index.get(&to) {
                        m[i * dim + j] += path.coefficient * element;
                    }
                }
            }
        }
        ChannelOp { label, matrix: m }
    };
    match config.scenario {
        Scenario::LambdaRouter => {
            channels.push(build_channel(&line, "H"));
            channels.push(build_channel(&v_channel, "V"));
        }
        Scenario::SingleSidedBunching => {
            channels.push(build_channel(&line, "out"));
        }
        _ => {
            channels.push(build_channel(&line, "t"));
            channels.push(build_channel(&reflected, "r"));
        }
    }

    // initial state: all excitation at the head of the chain
    let mut init = vec![0u8; subsystems.len()];
    match config.scenario {
        Scenario::EntangledSourceRouter => init[0] = 1,
        _ => init[0] = n_exc as u8,
    }
    let initial = *index.get(&init).ok_or_else(|| {
        RouterError::InvalidConfig("initial state missing from basis".into())
    })?;

    let max_rate = k_matrix
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        .max(1e-300);
    let min_rate = basis
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let d = k_matrix[i * dim + i];
            d > 0.0
        })
        .map(|(i, _)| k_matrix[i * dim + i])
        .fold(f64::INFINITY, f64::min);

    Ok(ChainSystem {
        subsystems,
        basis,
        index,
        decay_matrix: k_matrix,
        channels,
        initial,
        max_rate,
        min_rate,
    })
}

fn enumerate(
    subsystems: &[Subsystem],
    dims: &[usize],
    n_exc: u32,
    node: usize,
    current: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    if node == subsystems.len() {
        let total: u32 = subsystems
            .iter()
            .zip(current.iter())
            .map(|(s, &l)| s.excitation(l))
            .sum();
        if total <= n_exc {
            out.push(current.clone());
        }
        return;
    }
    for local in 0..dims[node] {
        current[node] = local as u8;
        enumerate(subsystems, dims, n_exc, node + 1, current, out);
    }
    current[node] = 0;
}

/// Apply one lowering path to a basis state; returns the target state and
/// the bare matrix element (without the channel coefficient).
fn lower(state: &[u8], path: &Lowering, subsystems: &[Subsystem]) -> Option<(Vec<u8>, f64)> {
    let l = state[path.node];
    match path.kind {
        LoweringKind::Boson => {
            if l == 0 {
                return None;
            }
            let mut to = state.to_vec();
            to[path.node] = l - 1;
            Some((to, (l as f64).sqrt()))
        }
        LoweringKind::TwoLevel => {
            if l != 1 {
                return None;
            }
            let mut to = state.to_vec();
            to[path.node] = 0;
            Some((to, 1.0))
        }
        LoweringKind::LambdaH => {
            if l != 1 {
                return None;
            }
            let mut to = state.to_vec();
            to[path.node] = 0; // e -> g1
            Some((to, 1.0))
        }
        LoweringKind::LambdaV => {
            if l != 1 {
                return None;
            }
            let mut to = state.to_vec();
            to[path.node] = 2; // e -> g2
            Some((to, 1.0))
        }
    }
    .map(|(to, el)| {
        debug_assert!(subsystems[path.node].local_dim() > state[path.node] as usize);
        (to, el)
    })
}

/// Transfer coupling `c * L_down^dag L_up` added into the decay matrix.
fn add_transfer(
    k_matrix: &mut [f64],
    basis: &[Vec<u8>],
    index: &HashMap<Vec<u8>, usize>,
    up: &Lowering,
    down: &Lowering,
    coefficient: f64,
) {
    let dim = basis.len();
    for (j, state) in basis.iter().enumerate() {
        // lower upstream
        let (mid, el_up) = match raw_lower(state, up) {
            Some(x) => x,
            None => continue,
        };
        // raise downstream
        let (to, el_down) = match raw_raise(&mid, down) {
            Some(x) => x,
            None => continue,
        };
        if let Some(&i) = index.get(&to) {
            k_matrix[i * dim + j] += coefficient * el_up * el_down;
        }
    }
}

fn raw_lower(state: &[u8], path: &Lowering) -> Option<(Vec<u8>, f64)> {
    let l = state[path.node];
    match path.kind {
        LoweringKind::Boson => {
            if l == 0 {
                None
            } else {
                let mut to = state.to_vec();
                to[path.node] = l - 1;
                Some((to, (l as f64).sqrt()))
            }
        }
        LoweringKind::TwoLevel | LoweringKind::LambdaH => {
            if l != 1 {
                None
            } else {
                let mut to = state.to_vec();
                to[path.node] = 0;
                Some((to, 1.0))
            }
        }
        LoweringKind::LambdaV => {
            if l != 1 {
                None
            } else {
                let mut to = state.to_vec();
                to[path.node] = 2;
                Some((to, 1.0))
            }
        }
    }
}

fn raw_raise(state: &[u8], path: &Lowering) -> Option<(Vec<u8>, f64)> {
    let l = state[path.node];
    match path.kind {
        LoweringKind::Boson => {
            let mut to = state.to_vec();
            to[path.node] = l + 1;
            Some((to, (l as f64 + 1.0).sqrt()))
        }
        LoweringKind::TwoLevel | LoweringKind::LambdaH => {
            if l != 0 {
                None
            } else {
                let mut to = state.to_vec();
                to[path.node] = 1;
                Some((to, 1.0))
            }
        }
        LoweringKind::LambdaV => {
            if l != 2 {
                None
            } else {
                let mut to = state.to_vec();
                to[path.node] = 1;
                Some((to, 1.0))
            }
        }
    }
}
