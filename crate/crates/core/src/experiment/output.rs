use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::records::{RunManifest, SweepRecord};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::Usage(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// A named table of already formatted cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self { name: name.into(), columns, rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| v.to_string()).collect());
    }

    pub fn push_cells(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn from_records(name: &str, records: &[SweepRecord]) -> Self {
        let cols = ["n", "alpha", "sigma", "k", "epsilon", "witness", "witness_from_epsilon", "dim", "tail_tol", "seed", "oracle"];
        let mut t = Table::new(name, cols.iter().map(|c| c.to_string()).collect());
        let with_witness = records.iter().any(|r| r.witness.is_some());
        if !with_witness {
            t.columns.retain(|c| c != "witness" && c != "witness_from_epsilon");
        }
        for r in records {
            let mut row = vec![r.n.to_string(), r.alpha.to_string(), r.sigma.to_string(), r.k.to_string(), r.epsilon.to_string()];
            if with_witness {
                row.push(r.witness.map(|w| w.to_string()).unwrap_or_default());
                row.push((1.0 + (1.0 - 2.0 * r.epsilon).powi(2)).to_string());
            }
            row.push(r.dim.to_string());
            row.push(r.tail_tol.to_string());
            row.push(r.seed.map(|s| s.to_string()).unwrap_or_default());
            row.push(serde_json::to_value(r.oracle_used).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default());
            t.rows.push(row);
        }
        t
    }

    /// Column values parsed back to numbers (empty cells become NaN).
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx].parse().unwrap_or(f64::NAN)).collect())
    }

    /// CSV with a leading comment block carrying the manifest hash.
    pub fn write_csv<W: Write>(&self, mut out: W, manifest_hash: &str) -> Result<()> {
        writeln!(out, "# table: {}", self.name)?;
        writeln!(out, "# manifest_sha256: {manifest_hash}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W, manifest_hash: &str) -> Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            manifest_sha256: &'a str,
            #[serde(flatten)]
            table: &'a Table,
        }
        serde_json::to_writer_pretty(&mut out, &Doc { manifest_sha256: manifest_hash, table: self })?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, out: W, format: OutputFormat, manifest_hash: &str) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out, manifest_hash),
            OutputFormat::Json => self.write_json(out, manifest_hash),
        }
    }
}

/// Write every table to `dir/<name>.<ext>` and the manifest to `dir/<stem>_manifest.json`.
pub fn write_dataset(dir: &Path, stem: &str, tables: &[Table], manifest: &mut RunManifest, format: OutputFormat) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    manifest.outputs = tables.iter().map(|t| format!("{}.{}", t.name, format.extension())).collect();
    let hash = manifest.content_hash()?;
    let mut paths = Vec::new();
    for (t, file) in tables.iter().zip(&manifest.outputs) {
        let path = dir.join(file);
        let f = std::io::BufWriter::new(fs::File::create(&path)?);
        t.write(f, format, &hash)?;
        paths.push(path);
    }
    let mpath = dir.join(format!("{stem}_manifest.json"));
    fs::write(&mpath, manifest.to_json()? + "\n")?;
    paths.push(mpath);
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_hash_header() {
        let mut t = Table::new("demo", vec!["a".into(), "b".into()]);
        t.push_numbers(&[1.0, 0.1]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf, "abc").unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "# table: demo\n# manifest_sha256: abc\na,b\n1,0.1\n");
        assert_eq!(t.column("b").unwrap(), vec![0.1]);
    }

    #[test]
    fn format_parse() {
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!(matches!("xml".parse::<OutputFormat>(), Err(Error::Usage(_))));
    }
}
