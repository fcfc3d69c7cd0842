//! Two-mode states in a sign-label decomposition and the witness
//! `W = sigma_y (x) sigma_y + sigma_z (x) sigma_z`.
//!
//! A state is stored as `rho = sum_{s,s'} c_{ss'} K_{ss'} (x) K_{ss'}` with
//! single-mode components `K_{ss'}`, so every two-mode expectation reduces to
//! four products of single-mode traces.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{coherent_state, trace_product, CoherentParams, FockOperator, Sign, TruncationSpec, C64};
use crate::kerr::{ChannelConfig, ChannelMultiplier, NoiseModel};
use crate::qubit::{ideal_sigma_y, ideal_sigma_z, sigma_y_measurement_with, sigma_z_measurement, Readout};

/// Largest imaginary part tolerated in a correlator before it is discarded.
pub const IMAGINARY_TOL: f64 = 1e-10;
pub const MIN_PROBE_SAMPLES: usize = 10_000;

#[derive(Clone, Debug)]
pub struct RankTwoModeState {
    params: CoherentParams,
    coeffs: [[C64; 2]; 2],
    components: [[DMatrix<C64>; 2]; 2],
    trunc: TruncationSpec,
}

impl RankTwoModeState {
    /// Build from raw parts; the coefficients are rescaled to unit trace.
    pub fn new(params: CoherentParams, coeffs: [[C64; 2]; 2], components: [[DMatrix<C64>; 2]; 2], trunc: TruncationSpec) -> Result<Self> {
        for row in &components {
            for k in row {
                if k.nrows() != trunc.dim || k.ncols() != trunc.dim {
                    return Err(Error::Shape { expected: trunc.dim, found: k.nrows() });
                }
            }
        }
        if (coeffs[0][1] - coeffs[1][0].conj()).norm() > 1e-15 || coeffs[0][0].im.abs() > 1e-15 || coeffs[1][1].im.abs() > 1e-15 {
            return Err(Error::Contract("sign-label coefficients must form a Hermitian array".into()));
        }
        let mut state = Self { params, coeffs, components, trunc };
        let tr = state.raw_trace();
        if !(tr.re > 0.0) || tr.im.abs() > IMAGINARY_TOL {
            return Err(Error::Contract(format!("two-mode trace {tr} is not positive")));
        }
        for row in state.coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c /= tr.re;
            }
        }
        Ok(state)
    }

    fn raw_trace(&self) -> C64 {
        let mut t = C64::new(0.0, 0.0);
        for s in 0..2 {
            for sp in 0..2 {
                let k = self.components[s][sp].trace();
                t += self.coeffs[s][sp] * k * k;
            }
        }
        t
    }

    pub fn params(&self) -> CoherentParams {
        self.params
    }

    pub fn coeffs(&self) -> &[[C64; 2]; 2] {
        &self.coeffs
    }

    pub fn component(&self, s: Sign, sp: Sign) -> &DMatrix<C64> {
        &self.components[s.index()][sp.index()]
    }

    pub fn trunc(&self) -> TruncationSpec {
        self.trunc
    }

    pub fn trace(&self) -> f64 {
        self.raw_trace().re
    }

    /// Partial trace over either mode (the decomposition is symmetric).
    pub fn reduced_state(&self) -> Result<FockOperator> {
        let d = self.trunc.dim;
        let mut out = DMatrix::zeros(d, d);
        for s in 0..2 {
            for sp in 0..2 {
                let k = &self.components[s][sp];
                out += k * (self.coeffs[s][sp] * k.trace());
            }
        }
        FockOperator::from_matrix(out, self.trunc)
    }

    /// `tr rho^2` from pairwise component traces.
    pub fn purity(&self) -> f64 {
        let mut p = C64::new(0.0, 0.0);
        for a in 0..4 {
            for b in 0..4 {
                let (s, sp) = (a / 2, a % 2);
                let (t, tp) = (b / 2, b % 2);
                let g = trace_product(&self.components[s][sp], &self.components[t][tp]);
                p += self.coeffs[s][sp] * self.coeffs[t][tp] * g * g;
            }
        }
        p.re
    }
}

/// `(|alpha, alpha> - |-alpha, -alpha>)/sqrt2`, renormalized on the truncated space.
pub fn phi_minus(params: CoherentParams, trunc: TruncationSpec) -> Result<RankTwoModeState> {
    params.require_qubit()?;
    let kets = [coherent_state(params, Sign::Plus, trunc)?, coherent_state(params, Sign::Minus, trunc)?];
    let comp = |s: usize, sp: usize| kets[s].amps() * kets[sp].amps().adjoint();
    let half = C64::new(0.5, 0.0);
    let coeffs = [[half, -half], [-half, half]];
    let components = [[comp(0, 0), comp(0, 1)], [comp(1, 0), comp(1, 1)]];
    RankTwoModeState::new(params, coeffs, components, trunc)
}

/// Same dephasing channel on both modes; the coefficients are untouched.
pub fn apply_local_dephasing(state: &RankTwoModeState, noise: NoiseModel) -> Result<RankTwoModeState> {
    apply_local_dephasing_with(state, noise, &ChannelConfig::default())
}

pub fn apply_local_dephasing_with(state: &RankTwoModeState, noise: NoiseModel, config: &ChannelConfig) -> Result<RankTwoModeState> {
    if noise.sigma() == 0.0 {
        return Ok(state.clone());
    }
    let mult = ChannelMultiplier::build(state.trunc.dim, noise, config)?;
    let mut out = state.clone();
    for row in out.components.iter_mut() {
        for k in row.iter_mut() {
            *k = mult.apply_matrix(k)?;
        }
    }
    Ok(out)
}

/// `<A (x) B>` as a sum of products of single-mode signed traces.
pub fn correlator<A: Readout + ?Sized, B: Readout + ?Sized>(state: &RankTwoModeState, a: &A, b: &B) -> Result<f64> {
    if a.dim() != state.trunc.dim || b.dim() != state.trunc.dim {
        return Err(Error::Shape { expected: state.trunc.dim, found: a.dim().max(b.dim()) });
    }
    let mut e = C64::new(0.0, 0.0);
    for s in 0..2 {
        for sp in 0..2 {
            let k = &state.components[s][sp];
            e += state.coeffs[s][sp] * a.signed_trace(k)? * b.signed_trace(k)?;
        }
    }
    if e.im.abs() > IMAGINARY_TOL {
        return Err(Error::NumericalConsistency { residue: e.im.abs() });
    }
    Ok(e.re)
}

/// How the two qubit observables are realized on the oscillator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessReadout {
    /// sigma_y is the sign of x after the noisy rotation; sigma_z is the sign of x,
    /// or the ideal coherent-basis operator when `assume_ideal_z` is set.
    #[default]
    SignOfX,
    /// Both observables built from `|alpha><alpha| - |-alpha><-alpha|`, with
    /// sigma_y pulled back through the noisy rotation.
    QubitOperators,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub noise: NoiseModel,
    pub assume_ideal_z: bool,
    pub readout: WitnessReadout,
    pub channel: ChannelConfig,
}

impl WitnessSpec {
    pub fn new(noise: NoiseModel) -> Self {
        Self { noise, assume_ideal_z: true, readout: WitnessReadout::SignOfX, channel: ChannelConfig::default() }
    }

    pub fn with_readout(mut self, readout: WitnessReadout) -> Self {
        self.readout = readout;
        self
    }

    pub fn with_ideal_z(mut self, ideal: bool) -> Self {
        self.assume_ideal_z = ideal;
        self
    }
}

/// The two witness terms `(<yy>, <zz>)`.
pub fn witness_terms(state: &RankTwoModeState, spec: &WitnessSpec) -> Result<(f64, f64)> {
    let params = state.params;
    let trunc = state.trunc;
    match spec.readout {
        WitnessReadout::SignOfX => {
            let y = sigma_y_measurement_with(trunc, spec.noise, &spec.channel)?;
            let yy = correlator(state, &y, &y)?;
            let zz = if spec.assume_ideal_z {
                let z = ideal_sigma_z(params, trunc)?;
                correlator(state, &z, &z)?
            } else {
                let z = sigma_z_measurement(trunc)?;
                correlator(state, &z, &z)?
            };
            Ok((yy, zz))
        }
        WitnessReadout::QubitOperators => {
            let y = ideal_sigma_y(params, trunc, spec.noise, &spec.channel)?;
            let z = ideal_sigma_z(params, trunc)?;
            Ok((correlator(state, &y, &y)?, correlator(state, &z, &z)?))
        }
    }
}

/// `<W> = <sigma_y sigma_y> + <sigma_z sigma_z>`.
pub fn witness_value(state: &RankTwoModeState, spec: &WitnessSpec) -> Result<f64> {
    let (yy, zz) = witness_terms(state, spec)?;
    Ok(yy + zz)
}

/// `1 + (1 - 2 eps)^2`.
pub fn witness_from_epsilon(eps: f64) -> Result<f64> {
    if !(0.0..=0.5 + 1e-9).contains(&eps) {
        return Err(Error::Parameter(format!("bit-flip error must lie in [0, 1/2], got {eps}")));
    }
    Ok(1.0 + (1.0 - 2.0 * eps).powi(2))
}

/// `|y_a y_b + z_a z_b|` for Bloch vectors `(x, y, z)`.
pub fn product_value(a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[1] * b[1] + a[2] * b[2]).abs()
}

/// Largest witness modulus over random product states of two qubits.
pub fn separable_bound_probe(samples: usize, seed: u64) -> Result<f64> {
    if samples < MIN_PROBE_SAMPLES {
        return Err(Error::Parameter(format!("need at least {MIN_PROBE_SAMPLES} samples, got {samples}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..samples {
        let a: [f64; 3] = UnitSphere.sample(&mut rng);
        let b: [f64; 3] = UnitSphere.sample(&mut rng);
        best = best.max(product_value(a, b));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{auto_truncation, mixed_pair};

    fn setup(alpha: f64) -> (CoherentParams, TruncationSpec) {
        let p = CoherentParams::new(alpha).unwrap();
        (p, auto_truncation(p, 1e-12).unwrap())
    }

    #[test]
    fn phi_minus_is_normalized_and_pure() {
        let (p, t) = setup(2.0);
        let s = phi_minus(p, t).unwrap();
        assert!((s.trace() - 1.0).abs() < 1e-14);
        assert!((s.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_state_is_mixed_pair() {
        for alpha in [2.0, 4.0] {
            let (p, t) = setup(alpha);
            let r = phi_minus(p, t).unwrap().reduced_state().unwrap();
            let m = mixed_pair(p, t).unwrap();
            // cross terms of size exp(-2 alpha^2)
            assert!(r.max_abs_diff(&m).unwrap() < (-2.0 * alpha * alpha).exp());
        }
    }

    #[test]
    fn noiseless_witness_with_qubit_operators() {
        let (p, t) = setup(2.0);
        let s = phi_minus(p, t).unwrap();
        let spec = WitnessSpec::new(NoiseModel::kerr(0.0).unwrap()).with_readout(WitnessReadout::QubitOperators);
        let w = witness_value(&s, &spec).unwrap();
        assert!((w - 2.0).abs() < 1e-6, "{w}");
    }

    #[test]
    fn epsilon_map() {
        assert_eq!(witness_from_epsilon(0.0).unwrap(), 2.0);
        assert_eq!(witness_from_epsilon(0.5).unwrap(), 1.0);
        assert_eq!(witness_from_epsilon(0.25).unwrap(), 1.25);
        assert!(witness_from_epsilon(0.6).is_err());
        assert!(witness_from_epsilon(-0.1).is_err());
    }

    #[test]
    fn product_value_axes() {
        assert_eq!(product_value([0.0, 1.0, 0.0], [0.0, 1.0, 0.0]), 1.0);
        assert_eq!(product_value([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn probe_rejects_few_samples() {
        assert!(separable_bound_probe(10, 1).is_err());
    }
}
