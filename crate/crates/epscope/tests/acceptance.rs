#![allow(clippy::excessive_precision)] // frozen reference digits

//! Acceptance suite: one test per release criterion, each printing a
//! [PASS]/[FAIL] line with its runtime. Run with
//! `cargo test --test acceptance -- --nocapture` to see the report.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use epscope::counting::{n_eps_open, n_solutions, w_polynomial, w_spectrum, SystemShape};
use epscope::eplocator::{
    centers_closed_form, ep_locations_closed_form, eigenvalue_derivative, locate_ep_numeric,
    PrototypeSelfEnergy,
};
use epscope::expansion::{fit_coefficients_numeric, puiseux_coefficients_prototype};
use epscope::model::{
    branch_sqrt, dispersion, finite_chain_matrix, k_of_z, self_energy, self_energy_derivative,
    ModelParams, RiemannSheet, Sign,
};
use epscope::qpt::{fit_critical_exponents, width_slopes_at_ep};
use epscope::spectrum::{
    best_sheet, dispersion_residual, eigenvalues, spectral_pair, sweep, StateLabel,
};
use epscope::topology::{encircle_ep, encircle_loops, winding_period, ContourSpec, Permutation};
use num_complex::Complex64;

const G: f64 = 0.67;
// 40-digit evaluations of the closed forms at g = 0.67.
const EPS_BAR: f64 = 0.31968734726291545;
const Z_CENTER: f64 = 1.7238717913560946;
const Z_MINUS_10: f64 = 1.2304979093931587;
const BETA: [f64; 3] = [4.3923679060665413, 15.303601934683352, 47.870527456619828];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Run one criterion body, report, and enforce its runtime budget.
fn criterion<F: FnOnce()>(name: &str, budget: Duration, body: F) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) if elapsed <= budget => {
            println!("[PASS] {name} ({elapsed:.2?})");
        }
        Ok(()) => {
            println!("[FAIL] {name}: exceeded runtime budget {budget:.2?} (took {elapsed:.2?})");
            panic!("criterion '{name}' exceeded its runtime budget");
        }
        Err(payload) => {
            println!("[FAIL] {name} ({elapsed:.2?})");
            std::panic::resume_unwind(payload);
        }
    }
}

fn splitmix(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut x = *state;
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^= x >> 31;
    x as f64 / u64::MAX as f64
}

#[test]
fn acceptance_01_ep_locations() {
    criterion(
        "criterion 1: EP locations, closed form vs Newton (< 1e-9)",
        Duration::from_millis(1),
        || {
            let locations = ep_locations_closed_form(G);
            let (center_plus, center_minus) = centers_closed_form(G).unwrap();
            assert!((locations.plus - c(EPS_BAR, 0.0)).norm() < 1e-12);
            assert!((locations.minus + c(EPS_BAR, 0.0)).norm() < 1e-12);
            assert!((center_plus - Z_CENTER).abs() < 1e-12);
            assert!((center_minus + Z_CENTER).abs() < 1e-12);

            let sigma = PrototypeSelfEnergy { g: G };
            let found =
                locate_ep_numeric(&sigma, RiemannSheet::Second, c(1.5, 0.0), 1e-12, 100).unwrap();
            assert!((found.eps_bar - locations.plus).norm() < 1e-9);
            assert!((found.z_center - c(center_plus, 0.0)).norm() < 1e-9);
            let mirror =
                locate_ep_numeric(&sigma, RiemannSheet::Second, c(-1.5, 0.0), 1e-12, 100).unwrap();
            assert!((mirror.eps_bar - locations.minus).norm() < 1e-9);
            assert!((mirror.z_center - c(center_minus, 0.0)).norm() < 1e-9);
        },
    );
}

#[test]
fn acceptance_02_spectrum_regions() {
    criterion(
        "criterion 2: sweep reproduces the region structure at g = 0.67",
        Duration::from_millis(100),
        || {
            let n = 601;
            let grid: Vec<f64> = (0..n)
                .map(|i| -1.5 + 3.0 * i as f64 / (n - 1) as f64)
                .collect();
            let rows = sweep(G, &grid);
            assert_eq!(rows.len(), n);

            let eps_delta = 1.0 - G * G;
            let eps_bar = (1.0 - 2.0 * G * G).sqrt();

            // label boundaries: resonances exactly inside (ε̄₋, ε̄₊),
            // anti-bound pairs between ε̄ and ε_Δ on both sides
            for row in &rows {
                let pair = row.entry.as_ref().unwrap();
                let labels = [pair.minus.label, pair.plus.label];
                let eps_d = row.eps_d;
                if eps_d.abs() < eps_bar - 1e-9 {
                    assert!(
                        labels.contains(&StateLabel::Resonance)
                            && labels.contains(&StateLabel::AntiResonance),
                        "eps_d = {eps_d}: {labels:?}"
                    );
                } else if eps_d.abs() > eps_bar + 1e-9 && eps_d.abs() < eps_delta - 1e-9 {
                    assert_eq!(
                        labels,
                        [StateLabel::AntiBound, StateLabel::AntiBound],
                        "eps_d = {eps_d}"
                    );
                } else if eps_d.abs() > eps_delta + 1e-9 {
                    assert!(
                        labels.contains(&StateLabel::Bound)
                            && labels.contains(&StateLabel::AntiBound),
                        "eps_d = {eps_d}: {labels:?}"
                    );
                }

                // wave numbers pin to the band edges outside the windows
                if eps_d > eps_delta + 1e-9 {
                    assert!((pair.minus.k.re - PI).abs() < 1e-10, "eps_d = {eps_d}");
                }
                if eps_d < -eps_delta - 1e-9 {
                    assert!(pair.minus.k.re.abs() < 1e-10, "eps_d = {eps_d}");
                }
                // the resonance width is strictly negative inside the window
                if eps_d.abs() < eps_bar - 1e-9 && eps_d != 0.0 {
                    assert!(pair.minus.z.im < 0.0, "eps_d = {eps_d}");
                }
            }

            // band-edge identity at the exact threshold
            let (zm, _) = eigenvalues(&ModelParams::new(eps_delta, G)).unwrap();
            assert!((zm - c(1.0, 0.0)).norm() < 1e-12, "z_minus = {zm}");
        },
    );
}

#[test]
fn acceptance_03_dispersion_residual_grid() {
    criterion(
        "criterion 3: dispersion residual < 1e-10 over a 100x100 grid",
        Duration::from_secs(1),
        || {
            for i in 0..100 {
                let eps_d = -2.0 + 4.0 * i as f64 / 99.0;
                for j in 0..100 {
                    let g = 0.7 * j as f64 / 99.0;
                    let params = ModelParams::new(eps_d, g);
                    let (zm, zp) = eigenvalues(&params).unwrap();
                    for z in [zm, zp] {
                        let sheet = best_sheet(z, &params);
                        let residual = dispersion_residual(z, &params, sheet);
                        assert!(
                            residual < 1e-10,
                            "residual {residual} at eps_d={eps_d}, g={g}"
                        );
                    }
                }
            }
        },
    );
}

#[test]
fn acceptance_04_winding_period() {
    criterion(
        "criterion 4: winding gives p = 2 / 1 / 0 with residual < 1e-3",
        Duration::from_millis(30),
        || {
            let at_ep = ModelParams::new(EPS_BAR, G);
            let (p, residual) = winding_period(
                &ContourSpec::new(c(Z_CENTER, 0.0), 0.05, RiemannSheet::Second),
                &at_ep,
            )
            .unwrap();
            assert_eq!(p, 2);
            assert!(residual < 1e-3);

            let bound = ModelParams::new(1.0, G);
            let (p, residual) = winding_period(
                &ContourSpec::new(c(Z_MINUS_10, 0.0), 0.01, RiemannSheet::First),
                &bound,
            )
            .unwrap();
            assert_eq!(p, 1);
            assert!(residual < 1e-3);

            let (p, residual) = winding_period(
                &ContourSpec::new(c(5.0, 5.0), 0.1, RiemannSheet::Second),
                &at_ep,
            )
            .unwrap();
            assert_eq!(p, 0);
            assert!(residual < 1e-3);
        },
    );
}

#[test]
fn acceptance_05_encirclement() {
    criterion(
        "criterion 5: encircling swaps the pair, twice restores it",
        Duration::from_millis(10),
        || {
            assert_eq!(encircle_ep(G, 0.05, 400).unwrap(), Permutation::Swap);
            assert_eq!(
                encircle_loops(Sign::Plus, G, 0.05, 400, 2).unwrap(),
                Permutation::Identity
            );
            assert_eq!(encircle_ep(G, 0.05, 800).unwrap(), Permutation::Swap);
        },
    );
}

#[test]
fn acceptance_06_puiseux_expansion() {
    criterion(
        "criterion 6: order-8 series to 1e-8, coefficients to 1e-6",
        Duration::from_millis(100),
        || {
            let series = puiseux_coefficients_prototype(Sign::Plus, G, 12).unwrap();

            // order-8 evaluation against the exact coalescing family
            for i in 0..40 {
                let lam = 1e-6 * 10f64.powf(3.0 * i as f64 / 39.0); // up to |λ| = 1e−3
                for h in [0, 1] {
                    let truth = series.closed_form_on_path(c(lam, 0.0), h).unwrap();
                    let approx = series.evaluate_lambda(c(lam, 0.0), h, 8).unwrap().value;
                    assert!(
                        (approx - truth).norm() < 1e-8,
                        "order-8 miss at lam={lam}, h={h}"
                    );
                }
            }

            // numeric recovery of β₁, β₂, β₃ to 1e−6 relative
            let samples: Vec<(Complex64, Complex64)> = (0..40)
                .map(|i| {
                    let lam = 1e-7 * 10f64.powf(4.0 * i as f64 / 39.0);
                    let z = series.z_center + series.offset_on_path(c(lam, 0.0), 0).unwrap();
                    (c(lam, 0.0), z)
                })
                .collect();
            let fitted = fit_coefficients_numeric(&samples, &series.ep, 3).unwrap();
            for (i, want) in BETA.iter().enumerate() {
                let rel = (fitted[i] - c(*want, 0.0)).norm() / want;
                assert!(rel < 1e-6, "beta_{} recovered at rel err {rel}", i + 1);
            }

            // truncation-error halving ratio 2^{-(N+1)/2} within 10%
            for (order, lam) in [(2usize, 1e-6), (4, 1e-5), (6, 1e-4)] {
                let err = |l: f64| {
                    let truth = series.offset_on_path(c(l, 0.0), 0).unwrap();
                    let approx =
                        series.evaluate_lambda(c(l, 0.0), 0, order).unwrap().value - series.z_center;
                    (approx - truth).norm()
                };
                let ratio = err(lam / 2.0) / err(lam);
                let target = 2.0f64.powf(-((order + 1) as f64) / 2.0);
                assert!(
                    (ratio - target).abs() / target < 0.1,
                    "order {order}: halving ratio {ratio} vs {target}"
                );
            }
        },
    );
}

#[test]
fn acceptance_07_counting() {
    criterion(
        "criterion 7: solution and EP counts, w-polynomial degrees",
        Duration::from_millis(10),
        || {
            assert_eq!(n_solutions(SystemShape::new(1, 1).unwrap()), 4);
            assert_eq!(n_eps_open(SystemShape::new(1, 1).unwrap()), 12);
            assert_eq!(n_solutions(SystemShape::new(1, 2).unwrap()), 12);
            assert_eq!(n_eps_open(SystemShape::new(1, 2).unwrap()), 132);

            for f in [0.0, 0.3, 0.77, -0.4] {
                let poly = w_polynomial(&ModelParams::with_f(c(0.4, 0.0), 0.5, f));
                assert_eq!(poly.degree(), 4, "degree at F={f}");
            }
            let poly = w_polynomial(&ModelParams::new(1.0, G));
            assert_eq!(poly.degree(), 2);

            // the two reduced roots map onto the closed-form energies
            let (zm, zp) = eigenvalues(&ModelParams::new(1.0, G)).unwrap();
            let roots = w_spectrum(&ModelParams::new(1.0, G)).unwrap();
            let mut energies: Vec<Complex64> = roots.iter().map(|r| r.z).collect();
            energies.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
            assert!((energies[0] - zm).norm() < 1e-10);
            assert!((energies[1] - zp).norm() < 1e-10);
        },
    );
}

#[test]
fn acceptance_08_critical_exponents() {
    criterion(
        "criterion 8: width exponent 0.5, dynamic exponent 1.0, kink at EP",
        Duration::from_millis(100),
        || {
            let eps_bar = (1.0 - 2.0 * G * G).sqrt();
            let exponents =
                fit_critical_exponents(G, (eps_bar - 1e-3, eps_bar - 1e-6)).unwrap();
            assert!(
                (exponents.beta_order - 0.5).abs() < 0.01,
                "order-parameter exponent {}",
                exponents.beta_order
            );
            assert!(
                (exponents.z_dynamic - 1.0).abs() < 0.05,
                "dynamic exponent {}",
                exponents.z_dynamic
            );

            let (below, above) = width_slopes_at_ep(G, 1e-6).unwrap();
            assert!(
                below.abs() > 1e3 * above.abs().max(1.0),
                "one-sided slopes {below} / {above}"
            );
        },
    );
}

#[test]
fn acceptance_09_finite_chain_oracle() {
    criterion(
        "criterion 9: finite-chain oracle converges to the bound state",
        Duration::from_secs(5),
        || {
            let params = ModelParams::new(1.0, G);
            let mut previous = f64::MAX;
            for n in [250usize, 500, 1000, 2000] {
                let top = finite_chain_matrix(n, &params).unwrap().top_eigenvalue();
                let err = (top - Z_MINUS_10).abs();
                assert!(err < 1e-4, "N={n}: err {err}");
                // the truncation error sits at the floating floor for these
                // sizes, so allow ties at 1e-12 resolution
                assert!(
                    err <= previous + 1e-12,
                    "error grew from {previous} to {err} at N={n}"
                );
                previous = err;
            }
            // the stated five-digit reference value
            assert!((Z_MINUS_10 - 1.23050).abs() < 1e-5);
        },
    );
}

#[test]
fn acceptance_10_identity_suite() {
    criterion(
        "criterion 10: sheet product, dual derivative, conjugation, k round trip",
        Duration::from_secs(1),
        || {
            let mut state = 0x5eed5eed5eed5eedu64;
            for _ in 0..400 {
                let g = 0.05 + 0.65 * splitmix(&mut state);
                let g4 = g.powi(4);
                let z = c(
                    6.0 * splitmix(&mut state) - 3.0,
                    4.0 * splitmix(&mut state) - 2.0,
                );
                if z.im.abs() > 1e-3 || z.re.abs() > 1.001 {
                    // sheet product Σ_I Σ_II = g⁴
                    let product = self_energy(z, RiemannSheet::First, g)
                        * self_energy(z, RiemannSheet::Second, g);
                    assert!(
                        (product - c(g4, 0.0)).norm() < 1e-10 * g4.max(1e-6),
                        "sheet product at z={z}, g={g}"
                    );
                    // k/z round trip
                    for branch in [Sign::Plus, Sign::Minus] {
                        let k = k_of_z(z, branch);
                        assert!(
                            (dispersion(k) - z).norm() < 1e-10 * z.norm().max(1.0),
                            "round trip at z={z}"
                        );
                    }
                }

                let eps_d = 4.0 * splitmix(&mut state) - 2.0;
                let params = ModelParams::new(eps_d, g);
                let lambda = params.lambda();
                let (zm, zp) = eigenvalues(&params).unwrap();

                // conjugation closure
                let direct = (zm - zm.conj()).norm() + (zp - zp.conj()).norm();
                let crossed = (zm - zp.conj()).norm() + (zp - zm.conj()).norm();
                assert!(direct.min(crossed) < 1e-10, "conjugation at {eps_d}, {g}");

                // the implicit-function form of the eigenvalue derivative
                // matches the explicit one away from the coalescence
                if lambda.norm() > 1e-3 {
                    let (dm, dp) = eigenvalue_derivative(&params).unwrap();
                    for (z, d) in [(zm, dm), (zp, dp)] {
                        if (z - 1.0).norm() < 1e-6 || (z + 1.0).norm() < 1e-6 {
                            continue;
                        }
                        let slope = self_energy_derivative(z, best_sheet(z, &params), g).unwrap();
                        let dual = (c(1.0, 0.0) - slope).inv();
                        assert!(
                            (dual - d).norm() < 1e-10 * d.norm().max(1.0),
                            "dual derivative at eps_d={eps_d}, g={g}"
                        );
                    }
                }
            }
            // spot-check that the suite exercised a branch-cut-adjacent point
            let _ = branch_sqrt(c(0.2, 1e-3));
            let _ = spectral_pair(&ModelParams::new(0.2, 0.5)).unwrap();
        },
    );
}
