//! Command-line front end. A TOML file given with `--config` may set any
//! flag; flags on the command line win.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiment::{
    distinguish_table, figure_dataset, half_saturation, scaling_exponent, sweep_epsilon, witness_sweep, write_dataset, FigureId,
    FigureParams, OutputFormat, RunManifest, SweepConfig, SweepOutcome, Table, FIG5_NS,
};
use crate::kerr::{BeyondGate, ChannelConfig};
use crate::witness::WitnessReadout;

#[derive(Clone, Debug, PartialEq)]
pub struct NumList(pub Vec<f64>);

fn parse_list(s: &str) -> std::result::Result<NumList, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(NumList)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BeyondGateArg {
    /// Exact wrapped-phase evaluation
    Wrapped,
    /// Seeded Monte Carlo average over phase errors
    Mc,
    /// Refuse noise widths at or beyond the gate
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReadoutArg {
    SignOfX,
    QubitOperators,
}

#[derive(Parser, Debug)]
#[command(name = "kerr-cat", version, about = "Cat-state qubits under imprecise Kerr rotations", args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Coherent amplitudes, comma separated
    #[arg(long, value_parser = parse_list, conflicts_with = "n")]
    pub alpha: Option<NumList>,
    /// Mean photon numbers N = alpha^2, comma separated
    #[arg(long, value_parser = parse_list)]
    pub n: Option<NumList>,
    /// Generator power index: noise acts through N^{2k}
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 1e-12)]
    pub tail_tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Output directory; tables go to stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file of flag values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Channel route for sigma at or beyond the closed-form gate
    #[arg(long, value_enum, default_value = "wrapped")]
    pub beyond_gate: BeyondGateArg,
    #[arg(long, default_value_t = 100_000)]
    pub mc_samples: usize,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, default_value_t = 1e-4)]
    pub sigma_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_max: f64,
    /// Number of log-spaced sigma values (default: 30 per decade)
    #[arg(long)]
    pub sigma_points: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit the datasets of one figure
    Figure {
        fig_id: String,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Bit-flip error over an (N, sigma) grid
    SweepEpsilon {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Noise width where the bit-flip error reaches the target
    HalfSaturation {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0.25)]
        target: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Log-log slope of the half-saturation width against N
    Scaling {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Witness mean value over an (N, sigma) grid
    WitnessSweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value = "sign-of-x")]
        readout: ReadoutArg,
        /// Read sigma_z as the sign of x instead of the ideal coherent-basis operator
        #[arg(long)]
        operational_z: bool,
    },
    /// TVD between binned p-densities of the cat and the mixture against bin width
    DistinguishP {
        #[command(flatten)]
        common: CommonArgs,
        /// Bin widths in units of the fringe period, comma separated
        #[arg(long, value_parser = parse_list)]
        multiples: Option<NumList>,
    },
}

impl CommonArgs {
    fn n_list(&self, default: &[f64]) -> Vec<f64> {
        match (&self.alpha, &self.n) {
            (Some(a), _) => a.0.iter().map(|a| a * a).collect(),
            (None, Some(n)) => n.0.clone(),
            (None, None) => default.to_vec(),
        }
    }

    fn sweep_config(&self) -> SweepConfig {
        let beyond_gate = match self.beyond_gate {
            BeyondGateArg::Wrapped => BeyondGate::WrappedPhase,
            BeyondGateArg::Fail => BeyondGate::Fail,
            BeyondGateArg::Mc => BeyondGate::MonteCarlo { samples: self.mc_samples, seed: self.seed },
        };
        SweepConfig { tail_tol: self.tail_tol, channel: ChannelConfig { beyond_gate, ..ChannelConfig::default() }, base_seed: self.seed }
    }

    fn format(&self) -> OutputFormat {
        match self.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

impl GridArgs {
    fn sigma_grid(&self) -> Result<Vec<f64>> {
        self.figure_params().sigma_grid()
    }

    fn figure_params(&self) -> FigureParams {
        FigureParams { sigma_min: self.sigma_min, sigma_max: self.sigma_max, sigma_points: self.sigma_points, ..FigureParams::default() }
    }
}

/// Turn a TOML table into `--flag value` arguments.
pub fn config_to_args(text: &str) -> Result<Vec<OsString>> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Usage(format!("config: {e}")))?;
    let mut out = Vec::new();
    for (key, value) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        let rendered = match value {
            toml::Value::Boolean(true) => {
                out.push(flag.into());
                continue;
            }
            toml::Value::Boolean(false) => continue,
            toml::Value::String(s) => s,
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => f.to_string(),
            toml::Value::Array(items) => items
                .iter()
                .map(|v| match v {
                    toml::Value::Integer(i) => Ok(i.to_string()),
                    toml::Value::Float(f) => Ok(f.to_string()),
                    toml::Value::String(s) => Ok(s.clone()),
                    other => Err(Error::Usage(format!("config key '{key}': unsupported list item {other}"))),
                })
                .collect::<Result<Vec<_>>>()?
                .join(","),
            other => return Err(Error::Usage(format!("config key '{key}': unsupported value {other}"))),
        };
        out.push(flag.into());
        out.push(rendered.into());
    }
    Ok(out)
}

fn find_config(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Splice flags from the config file in front of the command-line flags.
pub fn merge_config_args(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = find_config(&args) else {
        return Ok(args);
    };
    if args.len() < 2 || args[1].to_string_lossy().starts_with('-') {
        return Ok(args);
    }
    let text = std::fs::read_to_string(&path)?;
    let mut from_file = config_to_args(&text)?;
    let user_sets_amplitude = args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == "--alpha" || s == "--n" || s.starts_with("--alpha=") || s.starts_with("--n=")
    });
    if user_sets_amplitude {
        let mut kept = Vec::new();
        let mut it = from_file.into_iter();
        while let Some(f) = it.next() {
            if f == "--alpha" || f == "--n" {
                it.next();
            } else {
                kept.push(f);
            }
        }
        from_file = kept;
    }
    let mut merged = vec![args[0].clone(), args[1].clone()];
    merged.extend(from_file);
    merged.extend(args.into_iter().skip(2));
    Ok(merged)
}

fn emit(
    out: &mut dyn Write,
    dir: Option<&Path>,
    stem: &str,
    tables: &[Table],
    mut manifest: RunManifest,
    format: OutputFormat,
) -> Result<()> {
    match dir {
        Some(d) => {
            for p in write_dataset(d, stem, tables, &mut manifest, format)? {
                writeln!(out, "{}", p.display())?;
            }
        }
        None => {
            manifest.outputs = tables.iter().map(|t| t.name.clone()).collect();
            let hash = manifest.content_hash()?;
            for t in tables {
                t.write(&mut *out, format, &hash)?;
            }
        }
    }
    Ok(())
}

fn base_manifest(command: &str, common: &CommonArgs) -> Result<RunManifest> {
    let mut m = RunManifest::new(command);
    m.set("k", common.k)?;
    m.set("sweep", common.sweep_config())?;
    m.seeds.push(common.seed);
    m.tolerances.insert("tail_tol".into(), common.tail_tol);
    Ok(m)
}

fn outcome_tables(stem: &str, out: &SweepOutcome, manifest: &mut RunManifest) -> Vec<Table> {
    for r in &out.records {
        manifest.add_truncation(r.n, r.dim, r.tail_tol);
    }
    let mut tables = vec![Table::from_records(stem, &out.records)];
    if !out.failures.is_empty() {
        let mut f = Table::new(format!("{stem}_failures"), vec!["index".into(), "n".into(), "sigma".into(), "message".into()]);
        for p in &out.failures {
            f.push_cells(vec![p.index.to_string(), p.n.to_string(), p.sigma.to_string(), p.message.clone()]);
        }
        tables.push(f);
    }
    tables
}

/// Execute a parsed command, writing tables or file paths to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Figure { fig_id, common, grid } => {
            let id: FigureId = fig_id.parse()?;
            let params = FigureParams {
                k: common.k,
                n_list: (common.alpha.is_some() || common.n.is_some()).then(|| common.n_list(&[])),
                sweep: common.sweep_config(),
                ..grid.figure_params()
            };
            let data = figure_dataset(id, &params)?;
            emit(out, common.out.as_deref(), id.as_str(), &data.tables, data.manifest, common.format())
        }
        Command::SweepEpsilon { common, grid } => {
            let ns = common.n_list(&FIG5_NS);
            let sigmas = grid.sigma_grid()?;
            let mut m = base_manifest("sweep-epsilon", &common)?;
            m.set("n", &ns)?;
            m.set("sigma", &sigmas)?;
            let res = sweep_epsilon(&ns, &sigmas, common.k, &common.sweep_config())?;
            let tables = outcome_tables("sweep_epsilon", &res, &mut m);
            emit(out, common.out.as_deref(), "sweep_epsilon", &tables, m, common.format())
        }
        Command::HalfSaturation { common, target, tol } => {
            let ns = common.n_list(&FIG5_NS);
            let mut m = base_manifest("half-saturation", &common)?;
            m.set("n", &ns)?;
            m.tolerances.insert("half_saturation_tol".into(), tol);
            m.set("target", target)?;
            let mut t =
                Table::new("half_saturation", vec!["n".into(), "k".into(), "sigma_star".into(), "epsilon".into(), "evaluations".into()]);
            for n in ns {
                let h = half_saturation(n, common.k, target, tol, &common.sweep_config())?;
                t.push_numbers(&[n, common.k as f64, h.sigma_star, h.epsilon, h.evaluations as f64]);
            }
            emit(out, common.out.as_deref(), "half_saturation", &[t], m, common.format())
        }
        Command::Scaling { common } => {
            let default: &[f64] = if common.k == 1 { &FIG5_NS } else { &[4.0, 9.0, 16.0, 25.0] };
            let ns = common.n_list(default);
            let mut m = base_manifest("scaling", &common)?;
            m.set("n", &ns)?;
            let fit = scaling_exponent(&ns, common.k, &common.sweep_config())?;
            let mut pts = Table::new("scaling_points", vec!["n".into(), "sigma_star".into()]);
            for (n, s) in fit.n.iter().zip(&fit.sigma_star) {
                pts.push_numbers(&[*n, *s]);
            }
            let mut summary = Table::new("scaling_fit", vec!["k".into(), "slope".into(), "intercept".into()]);
            summary.push_numbers(&[fit.k as f64, fit.slope, fit.intercept]);
            emit(out, common.out.as_deref(), "scaling", &[pts, summary], m, common.format())
        }
        Command::WitnessSweep { common, grid, readout, operational_z } => {
            let ns = common.n_list(&FIG5_NS);
            let sigmas = grid.sigma_grid()?;
            let readout = match readout {
                ReadoutArg::SignOfX => WitnessReadout::SignOfX,
                ReadoutArg::QubitOperators => WitnessReadout::QubitOperators,
            };
            let mut m = base_manifest("witness-sweep", &common)?;
            m.set("n", &ns)?;
            m.set("sigma", &sigmas)?;
            m.set("readout", readout)?;
            m.set("assume_ideal_z", !operational_z)?;
            let res = witness_sweep(&ns, &sigmas, common.k, &common.sweep_config(), readout, !operational_z)?;
            let tables = outcome_tables("witness_sweep", &res, &mut m);
            emit(out, common.out.as_deref(), "witness_sweep", &tables, m, common.format())
        }
        Command::DistinguishP { common, multiples } => {
            let alphas: Vec<f64> = common.n_list(&[4.0, 64.0, 256.0]).iter().map(|n| n.sqrt()).collect();
            let mut m = base_manifest("distinguish-p", &common)?;
            m.set("alpha", &alphas)?;
            m.set("multiples", multiples.as_ref().map(|l| &l.0))?;
            let t = distinguish_table(&alphas, multiples.as_ref().map(|l| l.0.as_slice()), common.tail_tol)?;
            emit(out, common.out.as_deref(), "distinguish_p", &[t], m, common.format())
        }
    }
}

/// Parse, execute and map the outcome to a process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let merged = match merge_config_args(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(merged) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
