//! Half-saturation noise width against photon number for quadratic and quartic generators.

use kerr_cat::experiment::{scaling_exponent, SweepConfig};

fn main() -> kerr_cat::Result<()> {
    let cfg = SweepConfig::default();
    for (k, ns) in [(1, vec![4.0, 16.0, 64.0]), (2, vec![4.0, 9.0, 16.0, 25.0])] {
        let fit = scaling_exponent(&ns, k, &cfg)?;
        println!("k = {k}: slope {:.3} (expect {})", fit.slope, 1 - 2 * k as i32);
        for (n, s) in fit.n.iter().zip(&fit.sigma_star) {
            println!("  N = {n:>4}  sigma* = {s:.4e}");
        }
    }
    Ok(())
}
