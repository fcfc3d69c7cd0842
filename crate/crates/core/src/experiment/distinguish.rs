use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::{auto_truncation, cat_state, mixed_pair, CatBranch, CoherentParams};
use crate::quadrature::{coarse_bin, fringe_period, tvd, Quadrature};

/// Bin widths in units of the fringe period.
pub const DEFAULT_MULTIPLES: [f64; 7] = [0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
/// Half-width of the p window; the p-densities here are `e^{-p^2}` envelopes.
pub const P_WINDOW: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistinguishRow {
    pub alpha: f64,
    pub fringe_period: f64,
    pub multiple: f64,
    pub bin_width: f64,
    pub tvd: f64,
}

/// TVD between binned p-densities of `|alpha+>` and the mixed pair, one row per bin width.
pub fn distinguish_p(alpha: f64, multiples: &[f64], tail_tol: f64) -> Result<Vec<DistinguishRow>> {
    let params = CoherentParams::new(alpha)?;
    let trunc = auto_truncation(params, tail_tol)?;
    let cat = cat_state(params, CatBranch::Plus, trunc)?;
    let mix = mixed_pair(params, trunc)?;
    let period = fringe_period(alpha);
    multiples
        .iter()
        .map(|&m| {
            let w = m * period;
            let a = coarse_bin(&cat, Quadrature::P, w, P_WINDOW)?;
            let b = coarse_bin(&mix, Quadrature::P, w, P_WINDOW)?;
            Ok(DistinguishRow { alpha, fringe_period: period, multiple: m, bin_width: w, tvd: tvd(&a, &b)? })
        })
        .collect()
}
