use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::distinguish::{distinguish_p, DEFAULT_MULTIPLES};
use super::output::Table;
use super::records::RunManifest;
use super::scaling::{half_saturation, DEFAULT_TARGET, DEFAULT_TOL};
use super::sweep::{log_grid, log_grid_per_decade, sweep_epsilon, witness_sweep, SweepConfig};
use crate::error::{Error, Result};
use crate::fock::{auto_truncation, cat_state, coherent_state, mixed_pair, CatBranch, CoherentParams, Sign};
use crate::kerr::{dephase_with, hadamard_rotation, NoiseModel};
use crate::quadrature::{default_window, density_p, density_x, QuadratureGrid};
use crate::witness::WitnessReadout;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5a,
    Fig5b,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [Self::Fig1, Self::Fig2, Self::Fig3, Self::Fig4, Self::Fig5a, Self::Fig5b];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5a => "fig5a",
            Self::Fig5b => "fig5b",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown figure '{s}' (expected fig1, fig2, fig3, fig4, fig5a or fig5b)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureParams {
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Number of sigma points; `None` means 30 per decade.
    pub sigma_points: Option<usize>,
    pub k: u32,
    /// Overrides the figure's own N values (fig4, fig5a, fig5b).
    pub n_list: Option<Vec<f64>>,
    pub grid_points: usize,
    pub sweep: SweepConfig,
}

impl Default for FigureParams {
    fn default() -> Self {
        Self { sigma_min: 1e-4, sigma_max: 1.0, sigma_points: None, k: 1, n_list: None, grid_points: 2000, sweep: SweepConfig::default() }
    }
}

impl FigureParams {
    pub fn sigma_grid(&self) -> Result<Vec<f64>> {
        match self.sigma_points {
            Some(p) => log_grid(self.sigma_min, self.sigma_max, p),
            None => log_grid_per_decade(self.sigma_min, self.sigma_max, 30),
        }
    }
}

/// Tables for one figure plus the manifest describing how they were made.
#[derive(Clone, Debug)]
pub struct FigureDataset {
    pub figure: FigureId,
    pub tables: Vec<Table>,
    pub manifest: RunManifest,
}

pub const FIG1_ALPHAS: [f64; 2] = [2.0, 16.0];
pub const FIG2_ALPHA: f64 = 8.0;
pub const FIG3_ALPHA: f64 = 2.0;
pub const FIG4_NS: [f64; 2] = [4.0, 36.0];
pub const FIG5_NS: [f64; 3] = [4.0, 16.0, 64.0];

/// Multiples of `1/N` forming the fig4 noise ladder.
pub const FIG4_LADDER: [f64; 4] = [0.0, 0.5, 1.0, 4.0];

const AXIS_NOTE: &str = "quadratures use X = (a + a^dag)/sqrt2: |alpha> is centred at x = sqrt2*alpha with variance 1/2, \
so curves drawn with centres at +-alpha correspond to x/sqrt2";

fn symmetric_grid(half_width: f64, points: usize) -> Result<QuadratureGrid> {
    QuadratureGrid::uniform(-half_width, half_width, points)
}

fn density_table(name: &str, axis: &str, grid: &QuadratureGrid, series: Vec<(&str, Vec<f64>)>) -> Table {
    let mut columns = vec![axis.to_string()];
    columns.extend(series.iter().map(|(n, _)| n.to_string()));
    let mut t = Table::new(name, columns);
    for (j, x) in grid.points().iter().enumerate() {
        let mut row = vec![*x];
        row.extend(series.iter().map(|(_, v)| v[j]));
        t.push_numbers(&row);
    }
    t
}

pub fn figure_dataset(id: FigureId, params: &FigureParams) -> Result<FigureDataset> {
    let mut manifest = RunManifest::new(format!("figure {id}"));
    manifest.set("figure", id)?;
    manifest.set("params", params)?;
    manifest.seeds.push(params.sweep.base_seed);
    manifest.tolerances.insert("tail_tol".into(), params.sweep.tail_tol);
    manifest.tolerances.insert("coverage".into(), crate::quadrature::COVERAGE_TOL);
    let tol = params.sweep.tail_tol;
    let mut tables = Vec::new();
    match id {
        FigureId::Fig1 => {
            manifest.notes.push(AXIS_NOTE.into());
            for alpha in FIG1_ALPHAS {
                let p = CoherentParams::new(alpha)?;
                let t = auto_truncation(p, tol)?;
                manifest.add_truncation(p.photon_number(), t.dim, tol);
                let grid = symmetric_grid(6.0, params.grid_points)?;
                let cat = density_p(&cat_state(p, CatBranch::Plus, t)?, &grid)?;
                let mix = density_p(&mixed_pair(p, t)?, &grid)?;
                tables.push(density_table(&format!("fig1_alpha{alpha}"), "p", &grid, vec![("cat_plus", cat), ("mixed_pair", mix)]));
            }
        }
        FigureId::Fig2 => {
            manifest.notes.push(AXIS_NOTE.into());
            let p = CoherentParams::new(FIG2_ALPHA)?;
            let t = auto_truncation(p, tol)?;
            manifest.add_truncation(p.photon_number(), t.dim, tol);
            let grid = symmetric_grid(default_window(FIG2_ALPHA), params.grid_points)?;
            let plus = density_x(&coherent_state(p, Sign::Plus, t)?, &grid)?;
            let minus = density_x(&coherent_state(p, Sign::Minus, t)?, &grid)?;
            tables.push(density_table("fig2", "x", &grid, vec![("coherent_plus", plus), ("coherent_minus", minus)]));
        }
        FigureId::Fig3 => {
            manifest.notes.push(AXIS_NOTE.into());
            manifest.notes.push(format!("fig3 drawn at alpha = {FIG3_ALPHA}"));
            let p = CoherentParams::new(FIG3_ALPHA)?;
            let t = auto_truncation(p, tol)?;
            manifest.add_truncation(p.photon_number(), t.dim, tol);
            let u = hadamard_rotation(params.k, t)?;
            let grid = symmetric_grid(default_window(FIG3_ALPHA), params.grid_points)?;
            let cp = cat_state(p, CatBranch::Plus, t)?;
            let cm = cat_state(p, CatBranch::Minus, t)?;
            let rp = cp.apply(&u)?;
            let rm = cm.apply(&u)?;
            tables.push(density_table(
                "fig3",
                "x",
                &grid,
                vec![
                    ("cat_plus", density_x(&cp, &grid)?),
                    ("cat_minus", density_x(&cm, &grid)?),
                    ("rotated_plus", density_x(&rp, &grid)?),
                    ("rotated_minus", density_x(&rm, &grid)?),
                ],
            ));
        }
        FigureId::Fig4 => {
            manifest.notes.push(AXIS_NOTE.into());
            manifest.notes.push("sigma ladder is {0, 1/(2N), 1/N, 4/N}; the values are a choice, not read from a source".into());
            let ns = params.n_list.clone().unwrap_or_else(|| FIG4_NS.to_vec());
            let mut ladder = Vec::new();
            for n in ns {
                let p = CoherentParams::from_photon_number(n)?;
                p.require_qubit()?;
                let t = auto_truncation(p, tol)?;
                manifest.add_truncation(n, t.dim, tol);
                let grid = symmetric_grid(default_window(p.alpha()), params.grid_points)?;
                let plus = coherent_state(p, Sign::Plus, t)?.projector();
                let minus = coherent_state(p, Sign::Minus, t)?.projector();
                for (i, m) in FIG4_LADDER.iter().enumerate() {
                    let sigma = m / n;
                    ladder.push((n, sigma));
                    let noise = NoiseModel::new(sigma, params.k)?;
                    let (cp, _) = dephase_with(&plus, noise, &params.sweep.channel)?;
                    let (cm, _) = dephase_with(&minus, noise, &params.sweep.channel)?;
                    tables.push(density_table(
                        &format!("fig4_n{n}_s{i}"),
                        "x",
                        &grid,
                        vec![("dephased_plus", density_x(&cp, &grid)?), ("dephased_minus", density_x(&cm, &grid)?)],
                    ));
                }
            }
            manifest.set("sigma_ladder", ladder)?;
        }
        FigureId::Fig5a => {
            let ns = params.n_list.clone().unwrap_or_else(|| FIG5_NS.to_vec());
            let grid = params.sigma_grid()?;
            let out = sweep_epsilon(&ns, &grid, params.k, &params.sweep)?;
            fail_on_points(&out.failures)?;
            for r in &out.records {
                manifest.add_truncation(r.n, r.dim, r.tail_tol);
            }
            tables.push(Table::from_records("fig5a", &out.records));
            let mut inset = Table::new("fig5a_inset", vec!["n".into(), "sigma_star".into(), "epsilon".into()]);
            for n in &ns {
                let h = half_saturation(*n, params.k, DEFAULT_TARGET, DEFAULT_TOL, &params.sweep)?;
                inset.push_numbers(&[*n, h.sigma_star, h.epsilon]);
            }
            tables.push(inset);
        }
        FigureId::Fig5b => {
            manifest.notes.push("witness uses sign-of-x sigma_y after the noisy rotation and the ideal coherent-basis sigma_z".into());
            let ns = params.n_list.clone().unwrap_or_else(|| FIG5_NS.to_vec());
            let grid = params.sigma_grid()?;
            let out = witness_sweep(&ns, &grid, params.k, &params.sweep, WitnessReadout::SignOfX, true)?;
            fail_on_points(&out.failures)?;
            for r in &out.records {
                manifest.add_truncation(r.n, r.dim, r.tail_tol);
            }
            tables.push(Table::from_records("fig5b", &out.records));
        }
    }
    manifest.tolerances.insert("half_saturation_tol".into(), DEFAULT_TOL);
    Ok(FigureDataset { figure: id, tables, manifest })
}

fn fail_on_points(failures: &[super::records::PointFailure]) -> Result<()> {
    match failures.first() {
        None => Ok(()),
        Some(f) => Err(Error::Contract(format!("sweep point N = {}, sigma = {} failed: {}", f.n, f.sigma, f.message))),
    }
}

/// TVD ladder used by the `distinguish-p` experiment, as a table.
pub fn distinguish_table(alphas: &[f64], multiples: Option<&[f64]>, tail_tol: f64) -> Result<Table> {
    let multiples = multiples.unwrap_or(&DEFAULT_MULTIPLES);
    let mut t =
        Table::new("distinguish_p", vec!["alpha".into(), "fringe_period".into(), "multiple".into(), "bin_width".into(), "tvd".into()]);
    for &a in alphas {
        for row in distinguish_p(a, multiples, tail_tol)? {
            t.push_numbers(&[row.alpha, row.fringe_period, row.multiple, row.bin_width, row.tvd]);
        }
    }
    Ok(t)
}
