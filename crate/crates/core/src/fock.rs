//! Single-mode states in a truncated photon-number basis.
//!
//! Coherent amplitudes are real and nonnegative throughout; the sign of the
//! displacement is carried separately by [`Sign`]. Every factory checks the
//! Poisson tail beyond the cutoff against the [`TruncationSpec`] it is handed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default minimum coherent amplitude for qubit-basis constructions.
/// At this value the basis overlap `e^{-2 alpha^2}` is about 3.4e-4.
pub const QUBIT_ALPHA_MIN: f64 = 2.0;

/// Number of retained Fock levels plus the tail mass allowed beyond them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub dim: usize,
    pub tail_tol: f64,
}

impl TruncationSpec {
    pub fn new(dim: usize, tail_tol: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Parameter(format!("truncation dim must be >= 2, got {dim}")));
        }
        if !(tail_tol.is_finite() && tail_tol > 0.0) {
            return Err(Error::Parameter(format!("tail_tol must be positive, got {tail_tol}")));
        }
        Ok(Self { dim, tail_tol })
    }

    /// Same tolerance, different cutoff.
    pub fn with_dim(self, dim: usize) -> Result<Self> {
        Self::new(dim, self.tail_tol)
    }
}

/// Real coherent amplitude `alpha` together with the qubit-basis threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentParams {
    alpha: f64,
    qubit_threshold: f64,
}

impl CoherentParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Parameter(format!("alpha must be real, finite and nonnegative, got {alpha}")));
        }
        Ok(Self { alpha, qubit_threshold: QUBIT_ALPHA_MIN })
    }

    /// Parameters for mean photon number `n = alpha^2`.
    pub fn from_photon_number(n: f64) -> Result<Self> {
        if !(n.is_finite() && n >= 0.0) {
            return Err(Error::Parameter(format!("photon number must be nonnegative, got {n}")));
        }
        Self::new(n.sqrt())
    }

    /// Override the qubit threshold (used for small brute-force checks).
    pub fn with_qubit_threshold(mut self, threshold: f64) -> Self {
        self.qubit_threshold = threshold;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Mean photon number `N = alpha^2`.
    pub fn photon_number(&self) -> f64 {
        self.alpha * self.alpha
    }

    pub fn qubit_threshold(&self) -> f64 {
        self.qubit_threshold
    }

    pub fn require_qubit(&self) -> Result<()> {
        if self.alpha < self.qubit_threshold {
            return Err(Error::DegenerateBasis { alpha: self.alpha, threshold: self.qubit_threshold });
        }
        Ok(())
    }
}

/// Sign of the coherent displacement, `|+alpha>` or `|-alpha>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

/// The two cat states `|alpha+>` and `|alpha->`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatBranch {
    Plus,
    Minus,
}

/// Probability mass of Poisson(`mean`) at or beyond `dim`.
pub fn poisson_tail(mean: f64, dim: usize) -> f64 {
    if mean == 0.0 {
        return if dim == 0 { 1.0 } else { 0.0 };
    }
    let ln_mean = mean.ln();
    let ln_fact: f64 = (2..=dim).map(|k| (k as f64).ln()).sum();
    let mut ln_term = -mean + dim as f64 * ln_mean - ln_fact;
    // running log-sum-exp so far-tail starts do not underflow
    let mut ln_sum = f64::NEG_INFINITY;
    let mut n = dim;
    loop {
        ln_sum = log_add(ln_sum, ln_term);
        n += 1;
        ln_term += ln_mean - (n as f64).ln();
        if n as f64 > mean && ln_term < ln_sum - 45.0 {
            break;
        }
    }
    ln_sum.exp().min(1.0)
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Floor on the cutoff: eight Poisson standard deviations plus margin.
pub fn truncation_floor(alpha: f64) -> usize {
    (alpha * alpha + 8.0 * alpha + 16.0).ceil() as usize
}

/// Smallest cutoff whose Poisson(`alpha^2`) upper tail is within `tail_tol`,
/// never below [`truncation_floor`].
pub fn auto_truncation(params: CoherentParams, tail_tol: f64) -> Result<TruncationSpec> {
    if !(tail_tol > 0.0 && tail_tol < 1e-3) {
        return Err(Error::Parameter(format!("tail_tol must lie in (0, 1e-3), got {tail_tol}")));
    }
    let mean = params.photon_number();
    let mut dim = 2usize.max(mean.floor() as usize);
    while poisson_tail(mean, dim) > tail_tol {
        dim += 1;
    }
    TruncationSpec::new(dim.max(truncation_floor(params.alpha())), tail_tol)
}

/// Pure state as a complex amplitude vector over `|0>..|dim-1>`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amps: DVector<C64>,
    trunc: TruncationSpec,
}

impl FockVector {
    pub fn from_amps(amps: DVector<C64>, trunc: TruncationSpec) -> Result<Self> {
        if amps.len() != trunc.dim {
            return Err(Error::Shape { expected: trunc.dim, found: amps.len() });
        }
        Ok(Self { amps, trunc })
    }

    /// Number state `|n>`.
    pub fn number_state(n: usize, trunc: TruncationSpec) -> Result<Self> {
        if n >= trunc.dim {
            return Err(Error::Parameter(format!("number state {n} outside dim {}", trunc.dim)));
        }
        let mut amps = DVector::zeros(trunc.dim);
        amps[n] = C64::new(1.0, 0.0);
        Ok(Self { amps, trunc })
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.trunc.dim
    }

    pub fn trunc(&self) -> TruncationSpec {
        self.trunc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `op |self>`.
    pub fn apply(&self, op: &FockOperator) -> Result<FockVector> {
        check_dim(self.dim(), op.dim())?;
        Ok(Self { amps: &op.mat * &self.amps, trunc: self.trunc })
    }

    pub fn scaled(&self, factor: C64) -> FockVector {
        Self { amps: &self.amps * factor, trunc: self.trunc }
    }

    /// `|self><self|`.
    pub fn projector(&self) -> FockOperator {
        FockOperator { mat: &self.amps * self.amps.adjoint(), trunc: self.trunc }
    }
}

/// Dense operator on the truncated space: density matrices, unitaries, POVM elements.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    mat: DMatrix<C64>,
    trunc: TruncationSpec,
}

/// Tolerances for density-operator validation.
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const NEGATIVITY_TOL: f64 = 1e-10;

impl FockOperator {
    pub fn from_matrix(mat: DMatrix<C64>, trunc: TruncationSpec) -> Result<Self> {
        if mat.nrows() != trunc.dim || mat.ncols() != trunc.dim {
            return Err(Error::Shape { expected: trunc.dim, found: mat.nrows().max(mat.ncols()) });
        }
        Ok(Self { mat, trunc })
    }

    pub fn identity(trunc: TruncationSpec) -> Self {
        Self { mat: DMatrix::identity(trunc.dim, trunc.dim), trunc }
    }

    /// Diagonal operator with the given entries.
    pub fn diagonal(diag: &[C64], trunc: TruncationSpec) -> Result<Self> {
        check_dim(trunc.dim, diag.len())?;
        let mat = DMatrix::from_diagonal(&DVector::from_column_slice(diag));
        Ok(Self { mat, trunc })
    }

    /// `|u><v|`.
    pub fn outer(u: &FockVector, v: &FockVector) -> Result<Self> {
        check_dim(u.dim(), v.dim())?;
        Ok(Self { mat: u.amps() * v.amps().adjoint(), trunc: u.trunc })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.trunc.dim
    }

    pub fn trunc(&self) -> TruncationSpec {
        self.trunc
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn adjoint(&self) -> FockOperator {
        Self { mat: self.mat.adjoint(), trunc: self.trunc }
    }

    pub fn mul(&self, rhs: &FockOperator) -> Result<FockOperator> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(Self { mat: &self.mat * &rhs.mat, trunc: self.trunc })
    }

    pub fn add(&self, rhs: &FockOperator) -> Result<FockOperator> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(Self { mat: &self.mat + &rhs.mat, trunc: self.trunc })
    }

    pub fn sub(&self, rhs: &FockOperator) -> Result<FockOperator> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(Self { mat: &self.mat - &rhs.mat, trunc: self.trunc })
    }

    pub fn scaled(&self, factor: C64) -> FockOperator {
        Self { mat: &self.mat * factor, trunc: self.trunc }
    }

    /// `u self u^dagger`.
    pub fn conjugate_by(&self, u: &FockOperator) -> Result<FockOperator> {
        check_dim(self.dim(), u.dim())?;
        Ok(Self { mat: &u.mat * &self.mat * u.mat.adjoint(), trunc: self.trunc })
    }

    /// `tr(self * rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &FockOperator) -> Result<C64> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(trace_product(&self.mat, &rhs.mat))
    }

    /// `<psi| self |psi>`.
    pub fn expectation(&self, psi: &FockVector) -> Result<C64> {
        check_dim(self.dim(), psi.dim())?;
        Ok(psi.amps().dotc(&(&self.mat * psi.amps())))
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of `U^dagger U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.mat.adjoint() * &self.mat;
        let id = DMatrix::<C64>::identity(self.dim(), self.dim());
        max_abs_diff(&prod, &id)
    }

    pub fn max_abs_diff(&self, other: &FockOperator) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(max_abs_diff(&self.mat, &other.mat))
    }

    /// Hermiticity and unit trace; cheap enough for every channel call.
    pub fn check_density(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::Contract(format!("operator is not Hermitian (defect {defect:e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 10.0 * self.trunc.tail_tol.max(1e-12) || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::Contract(format!("density trace is {tr}, expected 1")));
        }
        Ok(())
    }

    /// Full density-operator check including the spectrum.
    pub fn validate_density(&self) -> Result<()> {
        self.check_density()?;
        let min = self.min_eigenvalue();
        if min < -NEGATIVITY_TOL {
            return Err(Error::Contract(format!("density has negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn trace_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    // tr(AB) = sum_ij A_ij B_ji
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub(crate) fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Shape { expected, found });
    }
    Ok(())
}

/// Convex combination of pure states; keeps low-rank mixtures cheap to
/// evaluate on large quadrature grids.
#[derive(Clone, Debug)]
pub struct PureMixture {
    components: Vec<(f64, FockVector)>,
}

impl PureMixture {
    pub fn new(components: Vec<(f64, FockVector)>) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::Parameter("empty mixture".into()));
        };
        let dim = first.dim();
        for (w, v) in &components {
            check_dim(dim, v.dim())?;
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::Parameter(format!("mixture weight {w} is negative")));
            }
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, FockVector)] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components[0].1.dim()
    }

    pub fn to_operator(&self) -> FockOperator {
        let trunc = self.components[0].1.trunc();
        let mut mat = DMatrix::<C64>::zeros(trunc.dim, trunc.dim);
        for (w, v) in &self.components {
            mat += v.amps() * v.amps().adjoint() * C64::new(*w, 0.0);
        }
        FockOperator { mat, trunc }
    }
}

fn check_tail(params: CoherentParams, trunc: TruncationSpec) -> Result<()> {
    let tail_mass = poisson_tail(params.photon_number(), trunc.dim);
    if tail_mass > trunc.tail_tol {
        return Err(Error::Truncation { dim: trunc.dim, tail_mass, tail_tol: trunc.tail_tol });
    }
    Ok(())
}

fn coherent_amplitudes(alpha: f64, sign: Sign, dim: usize) -> Vec<f64> {
    let mut amps = vec![0.0; dim];
    if alpha == 0.0 {
        amps[0] = 1.0;
        return amps;
    }
    let s = sign.factor();
    if alpha * alpha < 1200.0 {
        amps[0] = (-0.5 * alpha * alpha).exp();
        for n in 1..dim {
            amps[n] = amps[n - 1] * s * alpha / (n as f64).sqrt();
        }
    } else {
        // e^{-alpha^2/2} underflows; build the magnitudes in log space
        let ln_alpha = alpha.ln();
        let mut ln_mag = -0.5 * alpha * alpha;
        for (n, a) in amps.iter_mut().enumerate() {
            if n > 0 {
                ln_mag += ln_alpha - 0.5 * (n as f64).ln();
            }
            let parity = if n % 2 == 1 { s } else { 1.0 };
            *a = parity * ln_mag.exp();
        }
    }
    amps
}

/// Coherent state `|sign * alpha>` with amplitudes `e^{-a^2/2} (s a)^n / sqrt(n!)`.
pub fn coherent_state(params: CoherentParams, sign: Sign, trunc: TruncationSpec) -> Result<FockVector> {
    check_tail(params, trunc)?;
    let amps = coherent_amplitudes(params.alpha(), sign, trunc.dim);
    let amps = DVector::from_iterator(trunc.dim, amps.into_iter().map(|a| C64::new(a, 0.0)));
    Ok(FockVector { amps, trunc })
}

/// `|alpha+> = (|a> + i|-a>)/sqrt2` or `|alpha-> = (i|a> + |-a>)/sqrt2`.
pub fn cat_state(params: CoherentParams, branch: CatBranch, trunc: TruncationSpec) -> Result<FockVector> {
    params.require_qubit()?;
    let plus = coherent_state(params, Sign::Plus, trunc)?;
    let minus = coherent_state(params, Sign::Minus, trunc)?;
    let i = C64::new(0.0, 1.0);
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let amps = match branch {
        CatBranch::Plus => (plus.amps + minus.amps * i) * r,
        CatBranch::Minus => (plus.amps * i + minus.amps) * r,
    };
    Ok(FockVector { amps, trunc })
}

/// The classical mixture `(|a><a| + |-a><-a|)/2` as a two-component ensemble.
pub fn mixed_pair_ensemble(params: CoherentParams, trunc: TruncationSpec) -> Result<PureMixture> {
    params.require_qubit()?;
    let plus = coherent_state(params, Sign::Plus, trunc)?;
    let minus = coherent_state(params, Sign::Minus, trunc)?;
    PureMixture::new(vec![(0.5, plus), (0.5, minus)])
}

/// The classical mixture `(|a><a| + |-a><-a|)/2`.
pub fn mixed_pair(params: CoherentParams, trunc: TruncationSpec) -> Result<FockOperator> {
    Ok(mixed_pair_ensemble(params, trunc)?.to_operator())
}

/// `<u|v>`.
pub fn overlap(u: &FockVector, v: &FockVector) -> Result<C64> {
    check_dim(u.dim(), v.dim())?;
    Ok(u.amps().dotc(v.amps()))
}

/// `<psi| rho |psi>`.
pub fn fidelity(rho: &FockOperator, psi: &FockVector) -> Result<f64> {
    Ok(rho.expectation(psi)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trunc_for(alpha: f64) -> TruncationSpec {
        auto_truncation(CoherentParams::new(alpha).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn vacuum_truncation_is_small() {
        let t = auto_truncation(CoherentParams::new(0.0).unwrap(), 1e-12).unwrap();
        assert!((2..=16).contains(&t.dim));
        assert_eq!(poisson_tail(0.0, 1), 0.0);
    }

    #[test]
    fn floor_dominates_at_large_alpha() {
        let t = trunc_for(8.0);
        assert!(t.dim >= 144);
    }

    #[test]
    fn tail_tol_out_of_range() {
        let p = CoherentParams::new(2.0).unwrap();
        assert!(matches!(auto_truncation(p, 0.0), Err(Error::Parameter(_))));
        assert!(matches!(auto_truncation(p, 1e-2), Err(Error::Parameter(_))));
    }

    #[test]
    fn negative_alpha_rejected() {
        assert!(CoherentParams::new(-1.0).is_err());
        assert!(CoherentParams::new(f64::NAN).is_err());
    }

    #[test]
    fn vacuum_coherent_state() {
        let t = TruncationSpec::new(8, 1e-12).unwrap();
        for sign in Sign::BOTH {
            let v = coherent_state(CoherentParams::new(0.0).unwrap(), sign, t).unwrap();
            assert_eq!(v.amps()[0], C64::new(1.0, 0.0));
            assert!(v.amps().iter().skip(1).all(|a| *a == C64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn small_truncation_reports_tail() {
        let t = TruncationSpec::new(10, 1e-12).unwrap();
        let err = coherent_state(CoherentParams::new(2.0).unwrap(), Sign::Plus, t).unwrap_err();
        match err {
            Error::Truncation { tail_mass, .. } => assert!(tail_mass > 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cat_rejects_small_alpha() {
        let t = TruncationSpec::new(40, 1e-12).unwrap();
        let p = CoherentParams::new(1.0).unwrap();
        assert!(matches!(cat_state(p, CatBranch::Plus, t), Err(Error::DegenerateBasis { .. })));
        assert!(matches!(mixed_pair(p, t), Err(Error::DegenerateBasis { .. })));
        let zero = CoherentParams::new(0.0).unwrap();
        assert!(cat_state(zero, CatBranch::Minus, t).is_err());
    }

    #[test]
    fn cat_is_exactly_normalized() {
        for alpha in [2.0, 3.0, 5.0] {
            let t = trunc_for(alpha);
            let p = CoherentParams::new(alpha).unwrap();
            let v = cat_state(p, CatBranch::Plus, t).unwrap();
            let norm = overlap(&v, &v).unwrap();
            let plain = coherent_state(p, Sign::Plus, t).unwrap().norm_sqr();
            // cat norm equals the underlying coherent norm: cross terms cancel
            assert!((norm.re - plain).abs() < 1e-14);
            assert!(norm.im.abs() < 1e-15);
        }
    }

    #[test]
    fn dimension_mismatch_is_shape_error() {
        let a = FockVector::number_state(0, TruncationSpec::new(4, 1e-12).unwrap()).unwrap();
        let b = FockVector::number_state(0, TruncationSpec::new(5, 1e-12).unwrap()).unwrap();
        assert!(matches!(overlap(&a, &b), Err(Error::Shape { expected: 4, found: 5 })));
    }

    #[test]
    fn check_density_flags_non_hermitian() {
        let t = TruncationSpec::new(3, 1e-12).unwrap();
        let mut m = DMatrix::<C64>::zeros(3, 3);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        let op = FockOperator::from_matrix(m, t).unwrap();
        assert!(matches!(op.check_density(), Err(Error::Contract(_))));
    }

    #[test]
    fn mixture_operator_matches_sum_of_projectors() {
        let alpha = 2.0;
        let t = trunc_for(alpha);
        let p = CoherentParams::new(alpha).unwrap();
        let rho = mixed_pair(p, t).unwrap();
        let a = coherent_state(p, Sign::Plus, t).unwrap().projector();
        let b = coherent_state(p, Sign::Minus, t).unwrap().projector();
        let expected = a.add(&b).unwrap().scaled(C64::new(0.5, 0.0));
        assert!(rho.max_abs_diff(&expected).unwrap() < 1e-15);
    }
}
