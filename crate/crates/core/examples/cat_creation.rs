//! Build a cat state from a coherent state with a quarter-period Kerr evolution.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use kerr_cat::fock::{auto_truncation, cat_state, coherent_state, overlap, CatBranch, CoherentParams, Sign};
use kerr_cat::kerr::{kerr_unitary, KerrGenerator};
use num_complex::Complex64;

fn main() -> kerr_cat::Result<()> {
    for alpha in [2.0, 4.0, 8.0] {
        let p = CoherentParams::new(alpha)?;
        let t = auto_truncation(p, 1e-12)?;
        let u = kerr_unitary(KerrGenerator { theta: -FRAC_PI_2, k: 1, trunc: t })?;
        let evolved = coherent_state(p, Sign::Plus, t)?.apply(&u)?.scaled(Complex64::from_polar(1.0, FRAC_PI_4));
        let target = cat_state(p, CatBranch::Plus, t)?;
        let f = overlap(&target, &evolved)?.norm_sqr();
        println!("alpha = {alpha:>4}  dim = {:>4}  1 - fidelity = {:.2e}", t.dim, (1.0 - f).max(0.0));
    }
    Ok(())
}
