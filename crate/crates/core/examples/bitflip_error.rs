//! Error of the sign-of-x readout after a noisy Hadamard-like rotation.

use kerr_cat::experiment::log_grid;
use kerr_cat::fock::CoherentParams;
use kerr_cat::kerr::NoiseModel;
use kerr_cat::qubit::bitflip_error;

fn main() -> kerr_cat::Result<()> {
    let ns = [4.0, 16.0, 64.0];
    print!("{:>10}", "sigma");
    for n in ns {
        print!(" {:>12}", format!("N={n}"));
    }
    println!();
    for sigma in log_grid(1e-4, 1.0, 13)? {
        print!("{sigma:>10.2e}");
        for n in ns {
            let e = bitflip_error(CoherentParams::from_photon_number(n)?, NoiseModel::kerr(sigma)?)?;
            print!(" {e:>12.4e}");
        }
        println!();
    }
    Ok(())
}
