//! Entanglement witness of a two-mode cat state under local dephasing.

use kerr_cat::fock::{auto_truncation, CoherentParams};
use kerr_cat::kerr::NoiseModel;
use kerr_cat::qubit::bitflip_error;
use kerr_cat::witness::{phi_minus, separable_bound_probe, witness_from_epsilon, witness_value, WitnessReadout, WitnessSpec};

fn main() -> kerr_cat::Result<()> {
    let p = CoherentParams::from_photon_number(16.0)?;
    let t = auto_truncation(p, 1e-12)?;
    let state = phi_minus(p, t)?;
    // projectors onto exact coherent states see every small rotation, the sign readout does not
    println!("purity {:.6}", state.purity());
    println!("{:>8} {:>10} {:>10} {:>12}", "sigma", "W", "W qubit", "1+(1-2e)^2");
    for sigma in [0.0, 0.005, 0.01, 0.02, 0.05, 0.1] {
        let noise = NoiseModel::kerr(sigma)?;
        let w = witness_value(&state, &WitnessSpec::new(noise))?;
        let wq = witness_value(&state, &WitnessSpec::new(noise).with_readout(WitnessReadout::QubitOperators))?;
        let we = witness_from_epsilon(bitflip_error(p, noise)?)?;
        println!("{sigma:>8} {w:>10.6} {wq:>10.6} {we:>12.6}");
    }
    println!("best product state over 1e5 samples: {:.6}", separable_bound_probe(100_000, 1)?);
    Ok(())
}
