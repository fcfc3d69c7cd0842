//! Kerr phase jitter on a coherent state, checked against the sampling oracles.

use kerr_cat::fock::{auto_truncation, coherent_state, CoherentParams, Sign};
use kerr_cat::kerr::{dephase, dephase_oracle_mc, dephase_oracle_quadrature, NoiseModel};

fn main() -> kerr_cat::Result<()> {
    let p = CoherentParams::new(2.0)?;
    let t = auto_truncation(p, 1e-12)?;
    let rho = coherent_state(p, Sign::Plus, t)?.projector();
    println!("{:>6} {:>12} {:>12} {:>12}", "sigma", "|rho_01|", "GH diff", "MC diff");
    for sigma in [0.0, 0.01, 0.05, 0.1, 0.2] {
        let noise = NoiseModel::kerr(sigma)?;
        let out = dephase(&rho, noise)?;
        let gh = out.max_abs_diff(&dephase_oracle_quadrature(&rho, noise, 64)?)?;
        let mc = out.max_abs_diff(&dephase_oracle_mc(&rho, noise, 20_000, 1)?)?;
        println!("{sigma:>6} {:>12.4e} {gh:>12.2e} {mc:>12.2e}", out.matrix()[(3, 4)].norm());
    }
    Ok(())
}
