//! Quadrature densities in the convention `X = (a + a^dag)/sqrt2`,
//! `P = (a - a^dag)/(i sqrt2)`, with `<x|n> = psi_n(x)` and
//! `<p|n> = (-i)^n psi_n(p)`.
//!
//! In this convention a coherent state `|alpha>` has an x-density centred at
//! `sqrt2 * alpha` with variance 1/2, and the cat fringe in p reads
//! `1 - sin(2 sqrt2 alpha p)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::{Arc, OnceLock, RwLock};

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{check_dim, FockOperator, FockVector, PureMixture, TruncationSpec, C64};

pub const MAX_HERMITE_INDEX: usize = 512;
pub const MAX_COORDINATE: f64 = 40.0;
/// Allowed discrepancy between integrated density and trace.
pub const COVERAGE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    X,
    P,
}

/// Half-width of the window that holds the x-support of `|+-alpha>`.
pub fn default_window(alpha: f64) -> f64 {
    std::f64::consts::SQRT_2 * alpha + 10.0
}

/// Distance between neighbouring fringe minima of the cat p-density.
pub fn fringe_period(alpha: f64) -> f64 {
    PI / (std::f64::consts::SQRT_2 * alpha)
}

/// Sample points with integration weights.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        check_dim(points.len(), weights.len())?;
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parameter("grid points must be strictly increasing".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Parameter("grid weights must be positive".into()));
        }
        Ok(Self { points, weights })
    }

    /// `n` equispaced points on `[lo, hi]` with trapezoid weights.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(Error::Parameter("uniform grid needs n >= 2 and hi > lo".into()));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let points = (0..n).map(|i| lo + i as f64 * h).collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Self::new(points, weights)
    }

    /// Composite Gauss-Legendre rule: `nodes_per_unit` nodes on each unit-length panel.
    pub fn gauss_legendre(lo: f64, hi: f64, nodes_per_unit: usize) -> Result<Self> {
        if nodes_per_unit == 0 || !(hi > lo) {
            return Err(Error::Parameter("Gauss-Legendre grid needs nodes and hi > lo".into()));
        }
        let panels = (hi - lo).ceil() as usize;
        let width = (hi - lo) / panels as f64;
        let (points, weights) = composite_legendre(lo, width, panels, nodes_per_unit);
        Self::new(points, weights)
    }

    /// Default integration grid for amplitude `alpha`: 8 nodes per unit over the window.
    pub fn for_alpha(alpha: f64) -> Result<Self> {
        let w = default_window(alpha);
        Self::gauss_legendre(-w, w, 8)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

fn legendre_rule(nodes: usize) -> GaussLegendre {
    GaussLegendre::new(nodes.try_into().expect("nonzero node count"))
}

fn composite_legendre(lo: f64, width: f64, panels: usize, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = legendre_rule(nodes);
    let pairs = rule.as_node_weight_pairs();
    let mut points = Vec::with_capacity(panels * nodes);
    let mut weights = Vec::with_capacity(panels * nodes);
    for p in 0..panels {
        let a = lo + p as f64 * width;
        for (x, w) in pairs {
            points.push(a + 0.5 * width * (x + 1.0));
            weights.push(0.5 * width * w);
        }
    }
    (points, weights)
}

/// Normalized Hermite functions `psi_n(x_j)` for `n = 0..=nmax`; rows are points.
///
/// Uses the normalized three-term recurrence with running rescaling, so the
/// Gaussian prefactor never underflows before it is applied.
pub fn hermite_basis(points: &[f64], nmax: usize) -> Result<DMatrix<f64>> {
    if nmax > MAX_HERMITE_INDEX {
        return Err(Error::Parameter(format!("nmax {nmax} exceeds {MAX_HERMITE_INDEX}")));
    }
    if let Some(x) = points.iter().find(|x| !(x.abs() <= MAX_COORDINATE)) {
        return Err(Error::Parameter(format!("coordinate {x} outside [-40, 40]")));
    }
    let mut out = DMatrix::zeros(points.len(), nmax + 1);
    let mut row = vec![0.0; nmax + 1];
    for (j, &x) in points.iter().enumerate() {
        hermite_row_into(x, nmax, &mut row);
        for n in 0..=nmax {
            out[(j, n)] = row[n];
        }
    }
    Ok(out)
}

/// Recurrence for a single point with the scale tracked per index.
fn hermite_row_into(x: f64, nmax: usize, row: &mut [f64]) {
    let ln_norm = -0.25 * PI.ln();
    let mut log_scale = ln_norm - 0.5 * x * x;
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    row[0] = log_scale.exp();
    for n in 0..nmax {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > 1e150 {
            prev /= mag;
            cur /= mag;
            log_scale += mag.ln();
        }
        row[n + 1] = if log_scale < -745.0 { 0.0 } else { cur * log_scale.exp() };
    }
}

/// `psi_n(0)` and `psi_n'(0)` for `n = 0..=nmax`.
pub fn hermite_at_origin(nmax: usize) -> (Vec<f64>, Vec<f64>) {
    let mut value = vec![0.0; nmax + 2];
    value[0] = PI.powf(-0.25);
    for n in 2..nmax + 2 {
        value[n] = -(((n - 1) as f64) / n as f64).sqrt() * value[n - 2];
    }
    let slope = (0..=nmax)
        .map(|n| {
            let down = if n > 0 { (n as f64 / 2.0).sqrt() * value[n - 1] } else { 0.0 };
            down - ((n as f64 + 1.0) / 2.0).sqrt() * value[n + 1]
        })
        .collect();
    value.truncate(nmax + 1);
    (value, slope)
}

/// Anything whose quadrature density can be evaluated from a Hermite basis.
pub trait QuadratureState {
    fn dim(&self) -> usize;
    fn total_mass(&self) -> f64;
    /// Density at the rows of `basis` (points x Fock index).
    fn density_from_basis(&self, basis: &DMatrix<f64>, quadrature: Quadrature) -> Vec<f64>;
}

/// `(-i)^n` for the p-representation.
fn p_phase(n: usize) -> C64 {
    match n % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, -1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, 1.0),
    }
}

fn rotated_amplitudes(psi: &FockVector, quadrature: Quadrature) -> (DVector<f64>, DVector<f64>) {
    let dim = psi.dim();
    let mut re = DVector::zeros(dim);
    let mut im = DVector::zeros(dim);
    for (n, a) in psi.amps().iter().enumerate() {
        let c = match quadrature {
            Quadrature::X => *a,
            Quadrature::P => p_phase(n) * a,
        };
        re[n] = c.re;
        im[n] = c.im;
    }
    (re, im)
}

impl QuadratureState for FockVector {
    fn dim(&self) -> usize {
        FockVector::dim(self)
    }

    fn total_mass(&self) -> f64 {
        self.norm_sqr()
    }

    fn density_from_basis(&self, basis: &DMatrix<f64>, quadrature: Quadrature) -> Vec<f64> {
        let (re, im) = rotated_amplitudes(self, quadrature);
        let a = basis * re;
        let b = basis * im;
        a.iter().zip(b.iter()).map(|(x, y)| x * x + y * y).collect()
    }
}

impl QuadratureState for PureMixture {
    fn dim(&self) -> usize {
        PureMixture::dim(self)
    }

    fn total_mass(&self) -> f64 {
        self.components().iter().map(|(w, v)| w * v.norm_sqr()).sum()
    }

    fn density_from_basis(&self, basis: &DMatrix<f64>, quadrature: Quadrature) -> Vec<f64> {
        let mut out = vec![0.0; basis.nrows()];
        for (w, v) in self.components() {
            for (o, d) in out.iter_mut().zip(v.density_from_basis(basis, quadrature)) {
                *o += w * d;
            }
        }
        out
    }
}

impl QuadratureState for FockOperator {
    fn dim(&self) -> usize {
        FockOperator::dim(self)
    }

    fn total_mass(&self) -> f64 {
        self.trace().re
    }

    fn density_from_basis(&self, basis: &DMatrix<f64>, quadrature: Quadrature) -> Vec<f64> {
        let dim = self.dim();
        // Re of (-i)^n rho_{nn'} i^{n'}; the imaginary part cancels in the sum
        let rho = self.matrix();
        let real = DMatrix::from_fn(dim, dim, |n, m| match quadrature {
            Quadrature::X => rho[(n, m)].re,
            Quadrature::P => (p_phase(n) * rho[(n, m)] * p_phase(m).conj()).re,
        });
        let a = basis * real;
        (0..basis.nrows()).map(|j| a.row(j).dot(&basis.row(j))).collect()
    }
}

/// Density at arbitrary points, without any coverage check.
pub fn density_at<S: QuadratureState + ?Sized>(state: &S, points: &[f64], quadrature: Quadrature) -> Result<Vec<f64>> {
    if state.dim() == 0 {
        return Err(Error::Parameter("empty state".into()));
    }
    let basis = hermite_basis(points, state.dim() - 1)?;
    Ok(state.density_from_basis(&basis, quadrature))
}

fn density_on_grid<S: QuadratureState + ?Sized>(state: &S, grid: &QuadratureGrid, quadrature: Quadrature) -> Result<Vec<f64>> {
    let values = density_at(state, grid.points(), quadrature)?;
    let lost_mass = state.total_mass() - grid.integrate(&values);
    if lost_mass.abs() > COVERAGE_TOL {
        return Err(Error::Coverage { lost_mass });
    }
    Ok(values)
}

/// x-quadrature density on `grid`; fails if the grid misses probability mass.
pub fn density_x<S: QuadratureState + ?Sized>(state: &S, grid: &QuadratureGrid) -> Result<Vec<f64>> {
    density_on_grid(state, grid, Quadrature::X)
}

/// p-quadrature density on `grid`; fails if the grid misses probability mass.
pub fn density_p<S: QuadratureState + ?Sized>(state: &S, grid: &QuadratureGrid) -> Result<Vec<f64>> {
    density_on_grid(state, grid, Quadrature::P)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfLine {
    Positive,
    Negative,
}

const PROJECTOR_PANELS: usize = 80;
const PROJECTOR_NODES: usize = 16;

fn projector_cache() -> &'static RwLock<HashMap<usize, Arc<DMatrix<f64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<DMatrix<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `Theta+_{mn} = int_0^inf psi_m psi_n dx` by composite Gauss-Legendre on `[0, 40]`.
///
/// Same-parity entries are fixed by symmetry (1/2 on the diagonal, 0 off it);
/// only opposite-parity entries are integrated.
pub fn positive_halfline_matrix(dim: usize) -> Result<Arc<DMatrix<f64>>> {
    if dim == 0 || dim > MAX_HERMITE_INDEX + 1 {
        return Err(Error::Parameter(format!("projector dim {dim} outside 1..=513")));
    }
    if let Some(m) = projector_cache().read().expect("cache poisoned").get(&dim) {
        return Ok(m.clone());
    }
    let (points, weights) = composite_legendre(0.0, MAX_COORDINATE / PROJECTOR_PANELS as f64, PROJECTOR_PANELS, PROJECTOR_NODES);
    let basis = hermite_basis(&points, dim - 1)?;
    let weighted = DMatrix::from_fn(basis.nrows(), dim, |j, n| basis[(j, n)] * weights[j]);
    let mut theta = basis.transpose() * weighted;
    for m in 0..dim {
        for n in 0..dim {
            if (m + n) % 2 == 0 {
                theta[(m, n)] = if m == n { 0.5 } else { 0.0 };
            }
        }
    }
    let theta = Arc::new(theta);
    projector_cache().write().expect("cache poisoned").entry(dim).or_insert_with(|| theta.clone());
    Ok(theta)
}

/// The same matrix from the Wronskian identity
/// `int_0^inf psi_m psi_n = [psi_m(0) psi_n'(0) - psi_n(0) psi_m'(0)] / (2 (n - m))`.
pub fn positive_halfline_wronskian(dim: usize) -> DMatrix<f64> {
    let (v, d) = hermite_at_origin(dim.saturating_sub(1));
    DMatrix::from_fn(dim, dim, |m, n| if m == n { 0.5 } else { (v[m] * d[n] - v[n] * d[m]) / (2.0 * (n as f64 - m as f64)) })
}

/// Projector onto positive or negative x as an operator on the truncated space.
pub fn halfline_projector(trunc: TruncationSpec, side: HalfLine) -> Result<FockOperator> {
    let theta = positive_halfline_matrix(trunc.dim)?;
    let mat = DMatrix::from_fn(trunc.dim, trunc.dim, |m, n| {
        let t = theta[(m, n)];
        let v = match side {
            HalfLine::Positive => t,
            HalfLine::Negative => {
                if m == n {
                    1.0 - t
                } else {
                    -t
                }
            }
        };
        C64::new(v, 0.0)
    });
    FockOperator::from_matrix(mat, trunc)
}

/// Probability masses over bins `[edge_i, edge_{i+1})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinnedDistribution {
    edges: Vec<f64>,
    masses: Vec<f64>,
}

impl BinnedDistribution {
    pub fn new(edges: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if edges.len() != masses.len() + 1 {
            return Err(Error::Shape { expected: masses.len() + 1, found: edges.len() });
        }
        if edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parameter("bin edges must be increasing".into()));
        }
        if masses.iter().any(|m| !m.is_finite()) {
            return Err(Error::Parameter("bin masses must be finite".into()));
        }
        Ok(Self { edges, masses })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Merge each run of `factor` adjacent bins into one (a trailing partial run is kept).
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::Parameter("coarsening factor must be positive".into()));
        }
        let mut edges = vec![self.edges[0]];
        let mut masses = Vec::new();
        for (chunk_idx, chunk) in self.masses.chunks(factor).enumerate() {
            masses.push(chunk.iter().sum());
            let end = (chunk_idx * factor + chunk.len()).min(self.masses.len());
            edges.push(self.edges[end]);
        }
        Self::new(edges, masses)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["bin_left", "bin_right", "value"])?;
        for (i, m) in self.masses.iter().enumerate() {
            w.write_record([self.edges[i].to_string(), self.edges[i + 1].to_string(), m.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sampled density as `coordinate,value` rows.
pub fn write_density_csv<W: Write>(out: W, coordinates: &[f64], values: &[f64]) -> Result<()> {
    check_dim(coordinates.len(), values.len())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["coordinate", "value"])?;
    for (x, v) in coordinates.iter().zip(values) {
        w.write_record([x.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Integrate the density over uniform bins of `bin_width` whose edges include
/// 0 and which together cover `[-window, window]`.
pub fn coarse_bin<S: QuadratureState + ?Sized>(
    state: &S,
    quadrature: Quadrature,
    bin_width: f64,
    window: f64,
) -> Result<BinnedDistribution> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::Parameter(format!("bin width must be positive, got {bin_width}")));
    }
    if !(window > 0.0 && window <= MAX_COORDINATE) {
        return Err(Error::Parameter(format!("window must lie in (0, 40], got {window}")));
    }
    let per_side = ((window / bin_width) - 1e-9).ceil().max(1.0) as i64;
    let half_span = per_side as f64 * bin_width;
    if half_span > MAX_COORDINATE + 1e-9 {
        // outer bins would leave the basis range; clip them to the window edge
        return coarse_bin_clipped(state, quadrature, bin_width, per_side, window);
    }
    let edges: Vec<f64> = (-per_side..=per_side).map(|i| i as f64 * bin_width).collect();
    bin_masses(state, quadrature, edges)
}

fn coarse_bin_clipped<S: QuadratureState + ?Sized>(
    state: &S,
    quadrature: Quadrature,
    bin_width: f64,
    per_side: i64,
    window: f64,
) -> Result<BinnedDistribution> {
    let mut edges: Vec<f64> = (-per_side..=per_side).map(|i| i as f64 * bin_width).collect();
    let last = edges.len() - 1;
    edges[0] = -window;
    edges[last] = window;
    bin_masses(state, quadrature, edges)
}

fn bin_masses<S: QuadratureState + ?Sized>(state: &S, quadrature: Quadrature, edges: Vec<f64>) -> Result<BinnedDistribution> {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut owner = Vec::new();
    let mut rules: HashMap<usize, GaussLegendre> = HashMap::new();
    for (b, pair) in edges.windows(2).enumerate() {
        let (a, c) = (pair[0], pair[1]);
        let nodes = ((8.0 * (c - a)).ceil() as usize).max(4);
        let rule = rules.entry(nodes).or_insert_with(|| legendre_rule(nodes));
        for (x, w) in rule.as_node_weight_pairs() {
            points.push(0.5 * (c - a) * (x + 1.0) + a);
            weights.push(0.5 * (c - a) * w);
            owner.push(b);
        }
    }
    let values = density_at(state, &points, quadrature)?;
    let mut masses = vec![0.0; edges.len() - 1];
    for ((v, w), b) in values.iter().zip(&weights).zip(&owner) {
        masses[*b] += v * w;
    }
    let lost_mass = state.total_mass() - masses.iter().sum::<f64>();
    if lost_mass.abs() > COVERAGE_TOL {
        return Err(Error::Coverage { lost_mass });
    }
    BinnedDistribution::new(edges, masses)
}

/// Total variation distance `1/2 sum |a_i - b_i|` between distributions on identical bins.
pub fn tvd(a: &BinnedDistribution, b: &BinnedDistribution) -> Result<f64> {
    if a.edges != b.edges {
        return Err(Error::Shape { expected: a.edges.len(), found: b.edges.len() });
    }
    Ok(0.5 * a.masses.iter().zip(&b.masses).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_values() {
        let b = hermite_basis(&[0.0], 3).unwrap();
        assert!((b[(0, 0)] - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert_eq!(b[(0, 1)], 0.0);
    }

    #[test]
    fn recurrence_matches_explicit_low_orders() {
        for &x in &[-3.1, -0.4, 0.0, 0.7, 2.2, 5.0] {
            let b = hermite_basis(&[x], 3).unwrap();
            let g = PI.powf(-0.25) * (-0.5 * x * x).exp();
            assert!((b[(0, 1)] - g * std::f64::consts::SQRT_2 * x).abs() < 1e-14);
            assert!((b[(0, 2)] - g * (2.0 * x * x - 1.0) / 2f64.sqrt()).abs() < 1e-14);
            assert!((b[(0, 3)] - g * (2.0 * x * x * x - 3.0 * x) / 3f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn no_overflow_at_range_edges() {
        let b = hermite_basis(&[-40.0, -33.0, 0.0, 31.9, 40.0], 512).unwrap();
        assert!(b.iter().all(|v| v.is_finite()));
        // near the turning point of psi_512 the function is O(0.1)
        assert!(b.row(3).iter().map(|v| v.abs()).fold(0.0, f64::max) > 1e-2);
    }

    #[test]
    fn range_violations() {
        assert!(hermite_basis(&[41.0], 4).is_err());
        assert!(hermite_basis(&[0.0], 513).is_err());
    }

    #[test]
    fn halfline_entries() {
        let t = positive_halfline_matrix(6).unwrap();
        for n in 0..6 {
            assert_eq!(t[(n, n)], 0.5);
        }
        assert_eq!(t[(0, 2)], 0.0);
        assert_eq!(t[(1, 5)], 0.0);
        assert!((t[(0, 1)] - 0.398_942_280_401_432_7).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_projector_matches_wronskian() {
        let dim = 200;
        let quad = positive_halfline_matrix(dim).unwrap();
        let wr = positive_halfline_wronskian(dim);
        let diff = quad.iter().zip(wr.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "max diff {diff}");
    }

    #[test]
    fn projectors_sum_to_identity() {
        let t = TruncationSpec::new(30, 1e-12).unwrap();
        let p = halfline_projector(t, HalfLine::Positive).unwrap();
        let m = halfline_projector(t, HalfLine::Negative).unwrap();
        let sum = p.add(&m).unwrap();
        assert!(sum.max_abs_diff(&FockOperator::identity(t)).unwrap() < 1e-10);
    }

    #[test]
    fn tvd_edge_mismatch() {
        let a = BinnedDistribution::new(vec![0.0, 1.0], vec![1.0]).unwrap();
        let b = BinnedDistribution::new(vec![0.0, 2.0], vec![1.0]).unwrap();
        assert!(matches!(tvd(&a, &b), Err(Error::Shape { .. })));
        assert_eq!(tvd(&a, &a).unwrap(), 0.0);
        let c = BinnedDistribution::new(vec![0.0, 1.0, 2.0], vec![1.0, 0.0]).unwrap();
        let d = BinnedDistribution::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(tvd(&c, &d).unwrap(), 1.0);
    }

    #[test]
    fn coarsen_keeps_mass() {
        let d = BinnedDistribution::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.2, 0.3, 0.5]).unwrap();
        let c = d.coarsen(2).unwrap();
        assert_eq!(c.edges(), &[0.0, 2.0, 3.0]);
        assert_eq!(c.masses(), &[0.5, 0.5]);
    }

    #[test]
    fn narrow_grid_reports_lost_mass() {
        let t = TruncationSpec::new(40, 1e-12).unwrap();
        let v = crate::fock::coherent_state(crate::fock::CoherentParams::new(2.0).unwrap(), crate::fock::Sign::Plus, t).unwrap();
        let grid = QuadratureGrid::gauss_legendre(-2.0, 2.0, 8).unwrap();
        match density_x(&v, &grid) {
            Err(Error::Coverage { lost_mass }) => assert!(lost_mass > 0.1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
