use std::f64::consts::FRAC_PI_2;

use kerr_cat::fock::*;
use kerr_cat::kerr::*;
use kerr_cat::Error;
use statrs::function::gamma::ln_gamma;

fn params(alpha: f64) -> CoherentParams {
    CoherentParams::new(alpha).unwrap()
}

fn coherent_rho(alpha: f64) -> FockOperator {
    let p = params(alpha);
    let t = auto_truncation(p, 1e-12).unwrap();
    coherent_state(p, Sign::Plus, t).unwrap().projector()
}

#[test]
fn cat_creation_and_rotation() {
    for k in [1, 2] {
        for alpha in [2.0, 4.0, 8.0] {
            let p = params(alpha);
            let t = auto_truncation(p, 1e-12).unwrap();
            let coh = coherent_state(p, Sign::Plus, t).unwrap();
            let neg = coherent_state(p, Sign::Minus, t).unwrap();
            let plus = cat_state(p, CatBranch::Plus, t).unwrap();
            let minus = cat_state(p, CatBranch::Minus, t).unwrap();
            let u = hadamard_rotation(k, t).unwrap();
            assert!(overlap(&coh, &plus.apply(&u).unwrap()).unwrap().norm_sqr() >= 1.0 - 1e-10);
            assert!(overlap(&neg, &minus.apply(&u).unwrap()).unwrap().norm_sqr() >= 1.0 - 1e-10);
            // exp(-i pi/2 N^2)|alpha> = exp(-i pi/4)|alpha+>
            let make = kerr_unitary(KerrGenerator { theta: -FRAC_PI_2, k, trunc: t }).unwrap();
            let made = coh.apply(&make).unwrap();
            let target = plus.scaled(num_complex::Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4));
            let ov = overlap(&target, &made).unwrap();
            assert!((ov.re - 1.0).abs() < 1e-10 && ov.im.abs() < 1e-10, "k={k} alpha={alpha}: {ov}");
        }
    }
}

#[test]
fn gaussian_factor_examples() {
    let k1 = NoiseModel::new(0.5, 1).unwrap();
    let k2 = NoiseModel::new(0.5, 2).unwrap();
    assert_eq!(gaussian_factor(3, 3, k1), 1.0);
    assert!((gaussian_factor(2, 0, k1) - 0.1353352832366127).abs() < 1e-16);
    assert!((gaussian_factor(2, 0, k2) - 1.2664165549094176e-14).abs() < 1e-28);
}

#[test]
fn dephase_matches_coefficient_array() {
    let alpha = 2.0f64;
    let sigma = 0.03;
    let rho = coherent_rho(alpha);
    let out = dephase(&rho, NoiseModel::kerr(sigma).unwrap()).unwrap();
    for n in 0..rho.dim() {
        for m in 0..rho.dim() {
            let (nf, mf) = (n as f64, m as f64);
            let ln = -alpha * alpha + (nf + mf) * alpha.ln() - 0.5 * (ln_gamma(nf + 1.0) + ln_gamma(mf + 1.0));
            let gap = nf * nf - mf * mf;
            let want = (ln - 0.5 * sigma * sigma * gap * gap).exp();
            let got = out.matrix()[(n, m)];
            assert!((got.re - want).abs() < 1e-13 * want.max(1e-3) && got.im == 0.0, "{n},{m}");
        }
    }
}

#[test]
fn identity_at_zero_noise() {
    let rho = coherent_rho(2.0);
    let out = dephase(&rho, NoiseModel::kerr(0.0).unwrap()).unwrap();
    assert_eq!(out.matrix(), rho.matrix());
    let mc = dephase_oracle_mc(&rho, NoiseModel::kerr(0.0).unwrap(), 1000, 99).unwrap();
    assert_eq!(mc.matrix(), rho.matrix());
}

#[test]
fn quadrature_oracle_agrees() {
    for alpha in [2.0, 3.0, 4.0] {
        let rho = coherent_rho(alpha);
        for sigma in [0.001, 0.01, 0.05, 0.1, 0.2] {
            let noise = NoiseModel::kerr(sigma).unwrap();
            let a = dephase(&rho, noise).unwrap();
            let b = dephase_oracle_quadrature(&rho, noise, 64).unwrap();
            let d = a.max_abs_diff(&b).unwrap();
            assert!(d <= 1e-8, "alpha={alpha} sigma={sigma}: {d}");
        }
    }
}

#[test]
fn monte_carlo_oracle_agrees() {
    let rho = coherent_rho(2.0);
    let noise = NoiseModel::kerr(0.05).unwrap();
    let a = dephase(&rho, noise).unwrap();
    let b = dephase_oracle_mc(&rho, noise, 100_000, 2024).unwrap();
    assert!(a.max_abs_diff(&b).unwrap() <= 5e-3);
    let again = dephase_oracle_mc(&rho, noise, 100_000, 2024).unwrap();
    assert_eq!(b.matrix(), again.matrix());
}

#[test]
fn beyond_gate_routes() {
    let rho = coherent_rho(2.0);
    let noise = NoiseModel::kerr(0.5).unwrap();
    assert!(matches!(dephase_with(&rho, noise, &ChannelConfig::strict()), Err(Error::OutsideGate { .. })));
    let (wrapped, oracle) = dephase_with(&rho, noise, &ChannelConfig::default()).unwrap();
    assert_eq!(oracle, Oracle::Quadrature);
    // integer frequencies: the wrapped normal has the same characteristic function
    let closed = ChannelMultiplier::closed_form(rho.dim(), noise).apply(&rho).unwrap();
    assert!(wrapped.max_abs_diff(&closed).unwrap() < 1e-13);
    let cfg = ChannelConfig { beyond_gate: BeyondGate::MonteCarlo { samples: 100_000, seed: 5 }, ..ChannelConfig::default() };
    let (mc, oracle) = dephase_with(&rho, noise, &cfg).unwrap();
    assert_eq!(oracle, Oracle::Mc);
    assert!(mc.max_abs_diff(&closed).unwrap() < 5e-3);
}

#[test]
fn non_density_input_rejected() {
    let t = TruncationSpec::new(8, 1e-12).unwrap();
    let bad = FockOperator::identity(t);
    assert!(matches!(dephase(&bad, NoiseModel::kerr(0.1).unwrap()), Err(Error::Contract(_))));
}

#[test]
fn noisy_rotation_factorizes() {
    let t = TruncationSpec::new(30, 1e-12).unwrap();
    for k in [1, 2, 3] {
        let phi = 0.0123;
        let noisy = kerr_unitary(KerrGenerator { theta: FRAC_PI_2 + phi, k, trunc: t }).unwrap();
        let ideal = kerr_unitary(KerrGenerator { theta: FRAC_PI_2, k, trunc: t }).unwrap();
        let err = kerr_unitary(KerrGenerator { theta: phi, k, trunc: t }).unwrap();
        let composed = err.mul(&ideal).unwrap();
        // phase accuracy of the generic path degrades like eps * theta * n^{2k}
        let tol = 1e-15 * (29f64).powi(2 * k as i32) * 4.0;
        assert!(noisy.max_abs_diff(&composed).unwrap() < tol.max(1e-12), "k={k}");
    }
}

#[test]
fn large_alpha_suppression_window() {
    for alpha in [4.0f64, 5.0, 6.0] {
        let n0 = alpha * alpha;
        let sigma = 1.0 / (4.0 * n0);
        let noise = NoiseModel::kerr(sigma).unwrap();
        let lo = (n0 - 3.0 * alpha).ceil() as usize;
        let hi = (n0 + 3.0 * alpha).floor() as usize;
        for n in lo..=hi {
            for m in n.saturating_sub(3)..=(n + 3) {
                if m < lo || m > hi {
                    continue;
                }
                let exact = gaussian_factor(n, m, noise).ln();
                let d = n as f64 - m as f64;
                let approx = -2.0 * sigma * sigma * alpha.powi(4) * d * d;
                assert!((exact - approx).abs() <= 9.0, "alpha={alpha} n={n} m={m}");
            }
        }
    }
}
