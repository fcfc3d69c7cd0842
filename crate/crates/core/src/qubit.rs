//! Coherent-state qubit readouts: the sign of x as a coarse sigma_z, and the
//! Kerr-rotated sign of x as sigma_y.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{auto_truncation, coherent_state, trace_product, CoherentParams, FockOperator, Sign, TruncationSpec, C64};
use crate::kerr::{hadamard_rotation, ChannelConfig, ChannelMultiplier, NoiseModel, Oracle};
use crate::quadrature::{halfline_projector, HalfLine};

/// Tolerance for POVM completeness and eigenvalue range.
pub const POVM_TOL: f64 = 1e-10;
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Z,
    Y,
}

/// Anything that yields a +-1 valued mean on a single-mode component.
pub trait Readout {
    fn dim(&self) -> usize;
    /// `tr(O K)` for the signed observable `O`; `K` need not be Hermitian.
    fn signed_trace(&self, component: &DMatrix<C64>) -> Result<C64>;
}

/// Two-outcome POVM on one mode.
#[derive(Clone, Debug)]
pub struct QubitMeasurement {
    basis: Basis,
    noise: NoiseModel,
    povm_plus: FockOperator,
    povm_minus: FockOperator,
    signed: DMatrix<C64>,
}

impl QubitMeasurement {
    pub fn new(basis: Basis, noise: NoiseModel, povm_plus: FockOperator, povm_minus: FockOperator) -> Result<Self> {
        let signed = povm_plus.sub(&povm_minus)?.into_matrix();
        let m = Self { basis, noise, povm_plus, povm_minus, signed };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let total = self.povm_plus.add(&self.povm_minus)?;
        let defect = total.max_abs_diff(&FockOperator::identity(self.povm_plus.trunc()))?;
        if defect > POVM_TOL {
            return Err(Error::Contract(format!("POVM elements sum to identity only within {defect:e}")));
        }
        for e in [&self.povm_plus, &self.povm_minus] {
            if e.hermiticity_defect() > POVM_TOL {
                return Err(Error::Contract("POVM element is not Hermitian".into()));
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn povm_plus(&self) -> &FockOperator {
        &self.povm_plus
    }

    pub fn povm_minus(&self) -> &FockOperator {
        &self.povm_minus
    }

    /// Outcome probabilities `(p+, p-)` on a density operator.
    pub fn probabilities(&self, rho: &FockOperator) -> Result<(f64, f64)> {
        Ok((rho.trace_product(&self.povm_plus)?.re, rho.trace_product(&self.povm_minus)?.re))
    }

    /// Smallest and largest eigenvalue over both POVM elements.
    pub fn eigenvalue_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for e in [&self.povm_plus, &self.povm_minus] {
            let eig = e.matrix().clone().symmetric_eigenvalues();
            lo = lo.min(eig.min());
            hi = hi.max(eig.max());
        }
        (lo, hi)
    }
}

impl Readout for QubitMeasurement {
    fn dim(&self) -> usize {
        self.povm_plus.dim()
    }

    fn signed_trace(&self, component: &DMatrix<C64>) -> Result<C64> {
        signed_trace(&self.signed, component)
    }
}

fn signed_trace(signed: &DMatrix<C64>, component: &DMatrix<C64>) -> Result<C64> {
    if signed.nrows() != component.nrows() || component.nrows() != component.ncols() {
        return Err(Error::Shape { expected: signed.nrows(), found: component.nrows() });
    }
    Ok(trace_product(signed, component))
}

/// A signed Hermitian observable used directly as a readout.
#[derive(Clone, Debug)]
pub struct QubitObservable {
    basis: Basis,
    op: FockOperator,
}

impl QubitObservable {
    pub fn new(basis: Basis, op: FockOperator) -> Result<Self> {
        if op.hermiticity_defect() > POVM_TOL {
            return Err(Error::Contract("qubit observable is not Hermitian".into()));
        }
        Ok(Self { basis, op })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn operator(&self) -> &FockOperator {
        &self.op
    }
}

impl Readout for QubitObservable {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn signed_trace(&self, component: &DMatrix<C64>) -> Result<C64> {
        signed_trace(self.op.matrix(), component)
    }
}

/// Sign-of-x readout.
pub fn sigma_z_measurement(trunc: TruncationSpec) -> Result<QubitMeasurement> {
    let plus = halfline_projector(trunc, HalfLine::Positive)?;
    let minus = halfline_projector(trunc, HalfLine::Negative)?;
    QubitMeasurement::new(Basis::Z, NoiseModel::noiseless(1)?, plus, minus)
}

/// Noisy Kerr rotation followed by the sign of x: `U^dag C_sigma(Theta^+-) U`.
pub fn sigma_y_measurement(trunc: TruncationSpec, noise: NoiseModel) -> Result<QubitMeasurement> {
    sigma_y_measurement_with(trunc, noise, &ChannelConfig::default())
}

pub fn sigma_y_measurement_with(trunc: TruncationSpec, noise: NoiseModel, config: &ChannelConfig) -> Result<QubitMeasurement> {
    let u = hadamard_rotation(noise.k(), trunc)?;
    let mult = ChannelMultiplier::build(trunc.dim, noise, config)?;
    let mut elems = Vec::with_capacity(2);
    for side in [HalfLine::Positive, HalfLine::Negative] {
        let theta = mult.apply(&halfline_projector(trunc, side)?)?;
        elems.push(theta.conjugate_by(&u.adjoint())?);
    }
    let minus = elems.pop().expect("two elements");
    let plus = elems.pop().expect("two elements");
    QubitMeasurement::new(Basis::Y, noise, plus, minus)
}

/// Ideal `sigma_z = |alpha><alpha| - |-alpha><-alpha|` in the coherent basis.
pub fn ideal_sigma_z(params: CoherentParams, trunc: TruncationSpec) -> Result<QubitObservable> {
    params.require_qubit()?;
    let plus = coherent_state(params, Sign::Plus, trunc)?.projector();
    let minus = coherent_state(params, Sign::Minus, trunc)?.projector();
    QubitObservable::new(Basis::Z, plus.sub(&minus)?)
}

/// Ideal sigma_z pulled back through the noisy rotation: `U^dag C_sigma(sigma_z) U`.
pub fn ideal_sigma_y(params: CoherentParams, trunc: TruncationSpec, noise: NoiseModel, config: &ChannelConfig) -> Result<QubitObservable> {
    let z = ideal_sigma_z(params, trunc)?;
    let u = hadamard_rotation(noise.k(), trunc)?;
    let mult = ChannelMultiplier::build(trunc.dim, noise, config)?;
    let y = mult.apply(z.operator())?.conjugate_by(&u.adjoint())?;
    QubitObservable::new(Basis::Y, y)
}

/// Bit-flip error `tr(Theta^- C_sigma(|alpha><alpha|))` at automatic truncation.
pub fn bitflip_error(params: CoherentParams, noise: NoiseModel) -> Result<f64> {
    let trunc = auto_truncation(params, DEFAULT_TAIL_TOL)?;
    Ok(bitflip_error_with(params, noise, trunc, &ChannelConfig::default())?.0)
}

/// Bit-flip error with explicit truncation and channel routing.
pub fn bitflip_error_with(
    params: CoherentParams,
    noise: NoiseModel,
    trunc: TruncationSpec,
    config: &ChannelConfig,
) -> Result<(f64, Oracle)> {
    branch_error(params, noise, trunc, config, Sign::Plus)
}

/// The same error read from the `|-alpha>` branch (positive-side mass).
pub fn bitflip_error_minus_branch(
    params: CoherentParams,
    noise: NoiseModel,
    trunc: TruncationSpec,
    config: &ChannelConfig,
) -> Result<(f64, Oracle)> {
    branch_error(params, noise, trunc, config, Sign::Minus)
}

fn branch_error(
    params: CoherentParams,
    noise: NoiseModel,
    trunc: TruncationSpec,
    config: &ChannelConfig,
    sign: Sign,
) -> Result<(f64, Oracle)> {
    params.require_qubit()?;
    let rho = coherent_state(params, sign, trunc)?.projector();
    let mult = ChannelMultiplier::build(trunc.dim, noise, config)?;
    let out = mult.apply(&rho)?;
    let wrong = match sign {
        Sign::Plus => HalfLine::Negative,
        Sign::Minus => HalfLine::Positive,
    };
    let eps = out.trace_product(&halfline_projector(trunc, wrong)?)?.re;
    Ok((eps, mult.oracle()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{mixed_pair, FockVector};

    fn trunc() -> TruncationSpec {
        auto_truncation(CoherentParams::new(2.0).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn z_povm_is_complete_and_positive() {
        let m = sigma_z_measurement(trunc()).unwrap();
        let (lo, hi) = m.eigenvalue_range();
        assert!(lo >= -POVM_TOL && hi <= 1.0 + POVM_TOL, "{lo} {hi}");
    }

    #[test]
    fn z_on_symmetric_states() {
        let t = trunc();
        let m = sigma_z_measurement(t).unwrap();
        let vac = FockVector::number_state(0, t).unwrap().projector();
        let (p, q) = m.probabilities(&vac).unwrap();
        assert!((p - 0.5).abs() < 1e-15 && (q - 0.5).abs() < 1e-15);
        let mix = mixed_pair(CoherentParams::new(2.0).unwrap(), t).unwrap();
        let (p, q) = m.probabilities(&mix).unwrap();
        assert!((p - 0.5).abs() < 1e-12 && (q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn noiseless_error_is_gaussian_tail() {
        let e = bitflip_error(CoherentParams::new(2.0).unwrap(), NoiseModel::kerr(0.0).unwrap()).unwrap();
        assert!((e - 3.167_124_183_311_992e-5).abs() < 1e-12, "{e}");
    }

    #[test]
    fn small_alpha_rejected() {
        let p = CoherentParams::new(1.0).unwrap();
        assert!(matches!(bitflip_error(p, NoiseModel::kerr(0.0).unwrap()), Err(Error::DegenerateBasis { .. })));
    }

    #[test]
    fn y_povm_complete_under_noise() {
        let m = sigma_y_measurement(trunc(), NoiseModel::kerr(0.05).unwrap()).unwrap();
        let (lo, hi) = m.eigenvalue_range();
        assert!(lo >= -POVM_TOL && hi <= 1.0 + POVM_TOL, "{lo} {hi}");
    }
}
