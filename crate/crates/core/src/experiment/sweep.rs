use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::records::{derive_seed, PointFailure, SweepOutcome, SweepRecord};
use crate::error::{Error, Result};
use crate::fock::{auto_truncation, CoherentParams};
use crate::kerr::{BeyondGate, ChannelConfig, NoiseModel};
use crate::qubit::bitflip_error_with;
use crate::witness::{phi_minus, witness_value, WitnessReadout, WitnessSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub tail_tol: f64,
    pub channel: ChannelConfig,
    pub base_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { tail_tol: 1e-12, channel: ChannelConfig::default(), base_seed: 0 }
    }
}

impl SweepConfig {
    /// Channel routing for the point at `index`, with its derived seed when sampling.
    pub fn point_channel(&self, index: usize) -> (ChannelConfig, Option<u64>) {
        match self.channel.beyond_gate {
            BeyondGate::MonteCarlo { samples, .. } => {
                let seed = derive_seed(self.base_seed, index);
                (ChannelConfig { beyond_gate: BeyondGate::MonteCarlo { samples, seed }, ..self.channel }, Some(seed))
            }
            _ => (self.channel, None),
        }
    }
}

/// `points` logarithmically spaced values from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min) || points < 2 {
        return Err(Error::Parameter(format!("log grid needs 0 < min < max and >= 2 points, got [{min}, {max}] x {points}")));
    }
    let (a, b) = (min.log10(), max.log10());
    let step = (b - a) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| 10f64.powf(a + i as f64 * step)).collect();
    grid[0] = min;
    grid[points - 1] = max;
    Ok(grid)
}

/// Logarithmic grid with a fixed density per decade.
pub fn log_grid_per_decade(min: f64, max: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min) || per_decade == 0 {
        return Err(Error::Parameter("log grid needs 0 < min < max".into()));
    }
    let points = ((max / min).log10() * per_decade as f64).round() as usize + 1;
    log_grid(min, max, points.max(2))
}

fn params_for(n: f64) -> Result<CoherentParams> {
    let p = CoherentParams::from_photon_number(n)?;
    p.require_qubit()?;
    Ok(p)
}

/// Bit-flip error at one `(N, sigma)` point.
pub fn epsilon_point(n: f64, sigma: f64, k: u32, cfg: &SweepConfig, index: usize) -> Result<SweepRecord> {
    let params = params_for(n)?;
    let trunc = auto_truncation(params, cfg.tail_tol)?;
    let noise = NoiseModel::new(sigma, k)?;
    let (channel, seed) = cfg.point_channel(index);
    let (epsilon, oracle_used) = bitflip_error_with(params, noise, trunc, &channel)?;
    let rec = SweepRecord {
        n,
        alpha: params.alpha(),
        sigma,
        k,
        epsilon,
        witness: None,
        dim: trunc.dim,
        tail_tol: cfg.tail_tol,
        seed,
        oracle_used,
    };
    rec.validate()?;
    Ok(rec)
}

/// Bit-flip error and witness at one point.
pub fn witness_point(
    n: f64,
    sigma: f64,
    k: u32,
    cfg: &SweepConfig,
    index: usize,
    readout: WitnessReadout,
    assume_ideal_z: bool,
) -> Result<SweepRecord> {
    let mut rec = epsilon_point(n, sigma, k, cfg, index)?;
    let params = params_for(n)?;
    let trunc = auto_truncation(params, cfg.tail_tol)?;
    let state = phi_minus(params, trunc)?;
    let (channel, _) = cfg.point_channel(index);
    let spec = WitnessSpec { noise: NoiseModel::new(sigma, k)?, assume_ideal_z, readout, channel };
    rec.witness = Some(witness_value(&state, &spec)?);
    Ok(rec)
}

fn run_grid<F>(n_list: &[f64], sigma_grid: &[f64], eval: F) -> Result<SweepOutcome>
where
    F: Fn(f64, f64, usize) -> Result<SweepRecord> + Sync,
{
    if n_list.is_empty() || sigma_grid.is_empty() {
        return Err(Error::Parameter("sweep needs at least one N and one sigma".into()));
    }
    let points: Vec<(usize, f64, f64)> =
        n_list.iter().flat_map(|&n| sigma_grid.iter().map(move |&s| (n, s))).enumerate().map(|(i, (n, s))| (i, n, s)).collect();
    let results: Vec<_> = points.par_iter().map(|&(i, n, s)| (i, n, s, eval(n, s, i))).collect();
    let mut out = SweepOutcome::default();
    for (index, n, sigma, r) in results {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(e) => out.failures.push(PointFailure { index, n, sigma, message: e.to_string() }),
        }
    }
    Ok(out)
}

/// `epsilon(N, sigma)` over the product grid, ordered by N then sigma.
pub fn sweep_epsilon(n_list: &[f64], sigma_grid: &[f64], k: u32, cfg: &SweepConfig) -> Result<SweepOutcome> {
    run_grid(n_list, sigma_grid, |n, s, i| epsilon_point(n, s, k, cfg, i))
}

/// `epsilon` and `<W>` over the product grid.
pub fn witness_sweep(
    n_list: &[f64],
    sigma_grid: &[f64],
    k: u32,
    cfg: &SweepConfig,
    readout: WitnessReadout,
    assume_ideal_z: bool,
) -> Result<SweepOutcome> {
    run_grid(n_list, sigma_grid, |n, s, i| witness_point(n, s, k, cfg, i, readout, assume_ideal_z))
}
