//! Momentum distribution of a cat state against the incoherent mixture.

use kerr_cat::fock::{auto_truncation, cat_state, mixed_pair, CatBranch, CoherentParams};
use kerr_cat::quadrature::{density_at, fringe_period, Quadrature};

fn main() -> kerr_cat::Result<()> {
    let alpha = 2.0;
    let p = CoherentParams::new(alpha)?;
    let t = auto_truncation(p, 1e-16)?;
    // a narrow window, so evaluate pointwise without the coverage check
    let points: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.1).collect();
    let cat = density_at(&cat_state(p, CatBranch::Plus, t)?, &points, Quadrature::P)?;
    let mix = density_at(&mixed_pair(p, t)?, &points, Quadrature::P)?;
    println!("fringe period {:.4}", fringe_period(alpha));
    println!("{:>8} {:>10} {:>10}", "p", "cat", "mixture");
    for ((q, c), m) in points.iter().zip(&cat).zip(&mix) {
        println!("{q:>8.3} {c:>10.5} {m:>10.5}  {}", "#".repeat((c * 40.0) as usize));
    }
    Ok(())
}
