//! Write every figure dataset to a directory (first argument, default `figures/`).

use std::path::PathBuf;

use kerr_cat::experiment::{figure_dataset, write_dataset, FigureId, FigureParams, OutputFormat};

fn main() -> kerr_cat::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    let params = FigureParams { sigma_points: Some(10), ..FigureParams::default() };
    for id in ["fig1", "fig2", "fig3", "fig4", "fig5a", "fig5b"] {
        let id: FigureId = id.parse()?;
        let mut data = figure_dataset(id, &params)?;
        let paths = write_dataset(&dir, id.as_str(), &data.tables, &mut data.manifest, OutputFormat::Csv)?;
        println!("{id}: {} files", paths.len());
    }
    println!("wrote {}", dir.display());
    Ok(())
}
