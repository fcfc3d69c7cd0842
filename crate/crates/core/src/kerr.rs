//! Kerr-type rotations `exp(i theta N^{2k})` and the Gaussian phase-noise channel.
//!
//! A rotation by `pi/2 + phi` factorizes as `exp(i phi N^{2k})` applied after
//! the ideal rotation, since both are diagonal in the number basis. Averaging
//! over Gaussian `phi` therefore acts on a density matrix as an entrywise
//! multiplier, `rho_{nn'} -> rho_{nn'} exp(-sigma^2 (n^{2k} - n'^{2k})^2 / 2)`.
//!
//! The main path is that closed-form multiplier. Two oracles evaluate the
//! literal phase average independently: a seeded Monte-Carlo sampler and a
//! Gauss-Hermite rule. A third route averages over the phase wrapped onto the
//! circle and serves noise widths beyond the closed-form gate.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use gauss_quad::hermite::GaussHermite;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockOperator, TruncationSpec, C64};

/// Noise widths at or above this value leave the closed-form regime.
pub const CLOSED_FORM_GATE: f64 = 0.3;

/// Largest supported Hamiltonian power index (`N^{2k}`, `k <= 3`).
pub const MAX_POWER_INDEX: u32 = 3;

/// Minimum node count for the Gauss-Hermite oracle.
pub const MIN_HERMITE_NODES: usize = 64;

/// Gaussian phase jitter of width `sigma` on the generator `N^{2k}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    sigma: f64,
    k: u32,
}

impl NoiseModel {
    pub fn new(sigma: f64, k: u32) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::Parameter(format!("sigma must be finite and >= 0, got {sigma}")));
        }
        if !(1..=MAX_POWER_INDEX).contains(&k) {
            return Err(Error::Parameter(format!("power index k must be in 1..=3, got {k}")));
        }
        Ok(Self { sigma, k })
    }

    /// Plain Kerr case, `k = 1`.
    pub fn kerr(sigma: f64) -> Result<Self> {
        Self::new(sigma, 1)
    }

    pub fn noiseless(k: u32) -> Result<Self> {
        Self::new(0.0, k)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self::new(sigma, self.k)
    }
}

/// Eigenvalue `n^{2k}` of the generator on `|n>`.
pub fn generator_eigenvalue(n: usize, k: u32) -> u64 {
    (n as u64).pow(2 * k)
}

/// `n^{2k} - n'^{2k}`, exact as an integer.
pub fn generator_gap(n: usize, nprime: usize, k: u32) -> i128 {
    generator_eigenvalue(n, k) as i128 - generator_eigenvalue(nprime, k) as i128
}

/// `exp(i theta N^{2k})` on a truncated space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KerrGenerator {
    pub theta: f64,
    pub k: u32,
    pub trunc: TruncationSpec,
}

fn unit_phase(angle: f64) -> C64 {
    C64::from_polar(1.0, angle.rem_euclid(TAU))
}

/// Diagonal unitary with entries `exp(i theta n^{2k})`.
///
/// Quarter-turn multiples of `theta` are evaluated with integer arithmetic on
/// `n^{2k} mod 4`; other angles lose absolute phase accuracy roughly as
/// `eps * theta * n^{2k}`.
pub fn kerr_unitary(gen: KerrGenerator) -> Result<FockOperator> {
    if !(1..=MAX_POWER_INDEX).contains(&gen.k) {
        return Err(Error::Parameter(format!("power index k must be in 1..=3, got {}", gen.k)));
    }
    let quarter_turns = gen.theta / FRAC_PI_2;
    let exact = quarter_turns.fract() == 0.0 && quarter_turns.abs() < 1e15;
    let diag: Vec<C64> = (0..gen.trunc.dim)
        .map(|n| {
            let eig = generator_eigenvalue(n, gen.k);
            if exact {
                let q = (quarter_turns as i64).rem_euclid(4) as u64;
                match (q * (eig % 4)) % 4 {
                    0 => C64::new(1.0, 0.0),
                    1 => C64::new(0.0, 1.0),
                    2 => C64::new(-1.0, 0.0),
                    _ => C64::new(0.0, -1.0),
                }
            } else {
                unit_phase(gen.theta * eig as f64)
            }
        })
        .collect();
    FockOperator::diagonal(&diag, gen.trunc)
}

/// The basis rotation `U = exp(-i pi/4) exp(i pi/2 N^{2k})`, mapping
/// `|alpha+> -> |alpha>` and `|alpha-> -> |-alpha>`.
pub fn hadamard_rotation(k: u32, trunc: TruncationSpec) -> Result<FockOperator> {
    let u = kerr_unitary(KerrGenerator { theta: FRAC_PI_2, k, trunc })?;
    Ok(u.scaled(C64::from_polar(1.0, -PI / 4.0)))
}

/// Closed-form suppression of `rho_{n n'}`: `exp(-sigma^2 (n^{2k}-n'^{2k})^2 / 2)`.
pub fn gaussian_factor(n: usize, nprime: usize, noise: NoiseModel) -> f64 {
    let gap = generator_gap(n, nprime, noise.k) as f64;
    let s = noise.sigma * gap;
    (-0.5 * s * s).exp()
}

/// Which evaluation produced a channel output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    ClosedForm,
    Mc,
    Quadrature,
}

/// What to do with noise widths at or beyond the closed-form gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeyondGate {
    Fail,
    WrappedPhase,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub gate: f64,
    pub beyond_gate: BeyondGate,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self { gate: CLOSED_FORM_GATE, beyond_gate: BeyondGate::WrappedPhase }
    }
}

impl ChannelConfig {
    pub fn strict() -> Self {
        Self { beyond_gate: BeyondGate::Fail, ..Self::default() }
    }
}

/// Entrywise channel multiplier together with the route that produced it.
#[derive(Clone, Debug)]
pub struct ChannelMultiplier {
    factors: DMatrix<C64>,
    oracle: Oracle,
}

impl ChannelMultiplier {
    pub fn build(dim: usize, noise: NoiseModel, config: &ChannelConfig) -> Result<Self> {
        if noise.sigma == 0.0 || noise.sigma < config.gate {
            return Ok(Self::closed_form(dim, noise));
        }
        match config.beyond_gate {
            BeyondGate::Fail => Err(Error::OutsideGate { sigma: noise.sigma, gate: config.gate }),
            BeyondGate::WrappedPhase => {
                Ok(Self { factors: real_multiplier(dim, noise.k, |m| wrapped_phase_factor(m, noise.sigma)), oracle: Oracle::Quadrature })
            }
            BeyondGate::MonteCarlo { samples, seed } => Ok(Self { factors: mc_multiplier(dim, noise, samples, seed)?, oracle: Oracle::Mc }),
        }
    }

    pub fn closed_form(dim: usize, noise: NoiseModel) -> Self {
        let sigma = noise.sigma;
        let factors = real_multiplier(dim, noise.k, |m| {
            let s = sigma * m as f64;
            (-0.5 * s * s).exp()
        });
        Self { factors, oracle: Oracle::ClosedForm }
    }

    pub fn oracle(&self) -> Oracle {
        self.oracle
    }

    pub fn factors(&self) -> &DMatrix<C64> {
        &self.factors
    }

    /// Hadamard product with an arbitrary (not necessarily Hermitian) matrix.
    pub fn apply_matrix(&self, mat: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        if mat.nrows() != self.factors.nrows() || mat.ncols() != self.factors.ncols() {
            return Err(Error::Shape { expected: self.factors.nrows(), found: mat.nrows() });
        }
        Ok(mat.component_mul(&self.factors))
    }

    pub fn apply(&self, op: &FockOperator) -> Result<FockOperator> {
        FockOperator::from_matrix(self.apply_matrix(op.matrix())?, op.trunc())
    }
}

/// Build a multiplier from a function of `|n^{2k} - n'^{2k}|`, evaluated once per gap.
fn real_multiplier(dim: usize, k: u32, factor: impl Fn(u128) -> f64) -> DMatrix<C64> {
    let mut cache: HashMap<u128, f64> = HashMap::new();
    let mut out = DMatrix::from_element(dim, dim, C64::new(1.0, 0.0));
    for i in 0..dim {
        for j in (i + 1)..dim {
            let m = generator_gap(i, j, k).unsigned_abs();
            let f = *cache.entry(m).or_insert_with(|| factor(m));
            out[(i, j)] = C64::new(f, 0.0);
            out[(j, i)] = C64::new(f, 0.0);
        }
    }
    out
}

/// Closed-form dephasing channel `C_sigma` with the default routing.
pub fn dephase(rho: &FockOperator, noise: NoiseModel) -> Result<FockOperator> {
    Ok(dephase_with(rho, noise, &ChannelConfig::default())?.0)
}

/// Dephasing channel with explicit routing; reports the route taken.
pub fn dephase_with(rho: &FockOperator, noise: NoiseModel, config: &ChannelConfig) -> Result<(FockOperator, Oracle)> {
    rho.check_density()?;
    if noise.sigma == 0.0 {
        return Ok((rho.clone(), Oracle::ClosedForm));
    }
    let mult = ChannelMultiplier::build(rho.dim(), noise, config)?;
    Ok((mult.apply(rho)?, mult.oracle()))
}

/// Characteristic function of the wrapped normal at integer frequency `m`,
/// by periodic trapezoid quadrature of the wrapped density on `[-pi, pi)`.
pub fn wrapped_phase_factor(m: u128, sigma: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    if sigma == 0.0 {
        return 1.0;
    }
    if sigma * m as f64 > 38.6 {
        return 0.0;
    }
    let m = m as usize;
    // aliasing error ~ exp(-sigma^2 (P - m)^2 / 2)
    let points = (m + (40.0 / sigma).ceil() as usize + 2).max(64);
    let wraps = (8.0 * sigma / TAU).ceil() as i64 + 1;
    let norm = 1.0 / (sigma * TAU.sqrt());
    let h = TAU / points as f64;
    let mut acc = 0.0;
    for j in 0..points {
        let phi = -PI + j as f64 * h;
        let density: f64 = (-wraps..=wraps)
            .map(|r| {
                let x = (phi + TAU * r as f64) / sigma;
                norm * (-0.5 * x * x).exp()
            })
            .sum();
        acc += density * (m as f64 * phi).cos();
    }
    acc * h
}

const MC_BATCHES: u64 = 64;

fn mc_multiplier(dim: usize, noise: NoiseModel, samples: usize, seed: u64) -> Result<DMatrix<C64>> {
    if samples < 1000 {
        return Err(Error::Parameter(format!("Monte-Carlo oracle needs >= 1000 samples, got {samples}")));
    }
    let eig: Vec<f64> = (0..dim).map(|n| generator_eigenvalue(n, noise.k) as f64).collect();
    let normal = Normal::new(0.0, noise.sigma).map_err(|e| Error::Parameter(format!("noise width: {e}")))?;
    let per = samples as u64 / MC_BATCHES;
    let extra = samples as u64 % MC_BATCHES;
    // Fixed batches with their own streams: output is independent of thread count.
    let partials: Vec<DMatrix<C64>> = (0..MC_BATCHES)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = per + u64::from(b < extra);
            let mut acc = DMatrix::<C64>::zeros(dim, dim);
            let mut phases = vec![C64::new(1.0, 0.0); dim];
            for _ in 0..count {
                let phi = normal.sample(&mut rng);
                for (p, &e) in phases.iter_mut().zip(&eig) {
                    *p = unit_phase(phi * e);
                }
                for j in 0..dim {
                    let cj = phases[j].conj();
                    for i in 0..dim {
                        acc[(i, j)] += phases[i] * cj;
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = DMatrix::<C64>::zeros(dim, dim);
    for p in &partials {
        total += p;
    }
    Ok(total / C64::new(samples as f64, 0.0))
}

/// Literal Monte-Carlo average of `e^{i phi N^{2k}} rho e^{-i phi N^{2k}}`
/// over `samples` Gaussian draws; deterministic for fixed `(seed, samples)`.
pub fn dephase_oracle_mc(rho: &FockOperator, noise: NoiseModel, samples: usize, seed: u64) -> Result<FockOperator> {
    let mult = mc_multiplier(rho.dim(), noise, samples, seed)?;
    FockOperator::from_matrix(rho.matrix().component_mul(&mult), rho.trunc())
}

/// Gauss-Hermite evaluation of the phase average with `nodes` nodes.
///
/// For each generator gap `m` the phase is split into `L` i.i.d. Gaussian
/// increments of width `sigma/sqrt(L)`, chosen so every increment integrand
/// `cos(m phi_j)` stays well resolved; the per-increment averages multiply
/// because successive diagonal phase rotations compose additively.
pub fn dephase_oracle_quadrature(rho: &FockOperator, noise: NoiseModel, nodes: usize) -> Result<FockOperator> {
    if nodes < MIN_HERMITE_NODES {
        return Err(Error::Parameter(format!("Gauss-Hermite oracle needs >= {MIN_HERMITE_NODES} nodes, got {nodes}")));
    }
    let rule = GaussHermite::new(nodes.try_into().expect("nonzero"));
    let pairs = rule.as_node_weight_pairs();
    let weight_sum: f64 = pairs.iter().map(|(_, w)| w).sum();
    let sigma = noise.sigma;
    let mult = real_multiplier(rho.dim(), noise.k, |m| {
        if sigma == 0.0 {
            return 1.0;
        }
        let mf = m as f64;
        let splits = ((sigma * mf / 0.5).powi(2)).ceil().max(1.0);
        let step = sigma / splits.sqrt();
        // E[cos(m phi)] with phi = sqrt2 * step * x under weight e^{-x^2}
        let g: f64 = pairs.iter().map(|(x, w)| w * (std::f64::consts::SQRT_2 * step * x * mf).cos()).sum::<f64>() / weight_sum;
        if splits <= i32::MAX as f64 {
            g.powi(splits as i32)
        } else {
            g.powf(splits)
        }
    });
    FockOperator::from_matrix(rho.matrix().component_mul(&mult), rho.trunc())
}
