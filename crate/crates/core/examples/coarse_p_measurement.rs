//! How binning the momentum readout washes out the cat fringes.

use kerr_cat::experiment::{distinguish_p, DEFAULT_MULTIPLES};

fn main() -> kerr_cat::Result<()> {
    for alpha in [2.0, 8.0, 16.0] {
        println!("alpha = {alpha}");
        for row in distinguish_p(alpha, &DEFAULT_MULTIPLES, 1e-12)? {
            println!("  bin = {:>5} x period ({:.4})  TVD = {:.5}", row.multiple, row.bin_width, row.tvd);
        }
    }
    Ok(())
}
