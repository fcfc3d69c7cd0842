use serde::{Deserialize, Serialize};

use super::sweep::{epsilon_point, SweepConfig};
use crate::error::{Error, Result};

pub const DEFAULT_TARGET: f64 = 0.25;
pub const DEFAULT_TOL: f64 = 1e-4;
const MAX_EXPANSIONS: usize = 60;
const MAX_BISECTIONS: usize = 200;
/// Minimum spread of N in decades accepted by the power-law fit.
pub const MIN_LOG10_SPAN: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSaturation {
    pub sigma_star: f64,
    pub epsilon: f64,
    pub evaluations: usize,
}

/// Bisection for `eps(sigma) = target` on an arbitrary monotone curve.
///
/// The upper bracket starts at `sigma_hi` and doubles until `eps` exceeds the target.
pub fn bisect_half_saturation<F>(eps: F, sigma_hi: f64, target: f64, tol: f64) -> Result<HalfSaturation>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(sigma_hi > 0.0) || !(tol > 0.0) {
        return Err(Error::Parameter("bisection needs sigma_hi > 0 and tol > 0".into()));
    }
    let mut evaluations = 1;
    let e0 = eps(0.0)?;
    if !(e0 < target && target < 0.5) {
        return Err(Error::Parameter(format!("need eps(0) = {e0} < target = {target} < 1/2")));
    }
    let mut hi = sigma_hi;
    let mut e_hi = eps(hi)?;
    evaluations += 1;
    let mut expansions = 0;
    while e_hi <= target {
        if expansions == MAX_EXPANSIONS {
            return Err(Error::Search(format!("eps stayed below {target} up to sigma = {hi}")));
        }
        hi *= 2.0;
        e_hi = eps(hi)?;
        evaluations += 1;
        expansions += 1;
    }
    let mut lo = 0.0;
    let mut best = (hi, e_hi);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let e = eps(mid)?;
        evaluations += 1;
        if (e - target).abs() < (best.1 - target).abs() {
            best = (mid, e);
        }
        if e > target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    if (best.1 - target).abs() > tol {
        return Err(Error::Search(format!("bisection ended at eps = {} (target {target})", best.1)));
    }
    Ok(HalfSaturation { sigma_star: best.0, epsilon: best.1, evaluations })
}

/// Noise width at which the bit-flip error reaches `target`.
pub fn half_saturation(n: f64, k: u32, target: f64, tol: f64, cfg: &SweepConfig) -> Result<HalfSaturation> {
    if !(n > 0.0) {
        return Err(Error::Parameter(format!("N must be positive, got {n}")));
    }
    // expected scale 1/N^{2k-1}
    let guess = n.powi(-(2 * k as i32 - 1));
    bisect_half_saturation(|s| Ok(epsilon_point(n, s, k, cfg, 0)?.epsilon), guess, target, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub k: u32,
    pub n: Vec<f64>,
    pub sigma_star: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares slope and intercept of `ln y` against `ln x`.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::Shape { expected: x.len(), found: y.len() });
    }
    if x.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::Fit("power-law fit needs positive finite data".into()));
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
    if (hi / lo).log10() < MIN_LOG10_SPAN {
        return Err(Error::Fit(format!("N values span only {:.3} decades", (hi / lo).log10())));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Log-log slope of the half-saturation width against N.
pub fn scaling_exponent(n_list: &[f64], k: u32, cfg: &SweepConfig) -> Result<ScalingFit> {
    use rayon::prelude::*;
    let stars = n_list
        .par_iter()
        .map(|&n| half_saturation(n, k, DEFAULT_TARGET, DEFAULT_TOL, cfg).map(|h| h.sigma_star))
        .collect::<Result<Vec<f64>>>()?;
    let (slope, intercept) = fit_power_law(n_list, &stars)?;
    Ok(ScalingFit { k, n: n_list.to_vec(), sigma_star: stars, slope, intercept })
}
