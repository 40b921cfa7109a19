//! Critical-scaling observables of the resonance onset: the decay width
//! Γ = −2 Im z₋ acts as an order parameter that switches on at ε_d = ε̄₊
//! like √(ε̄₊ − ε_d) with a first-derivative discontinuity, the anti-bound
//! pseudo-gap Δz mirrors it on the other side, and the resonance phase
//! φ_res plays the role of an inverse correlation length.

use num_complex::Complex64;

use crate::model::ModelParams;
use crate::spectrum::{eigenvalues, resonance_point};
use crate::{Error, Result};

/// Which side of the coalescence the parameters sit on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalSide {
    /// |ε_d| < ε̄₊: complex pair present, Γ > 0.
    Critical,
    /// |ε_d| > ε̄₊: real spectrum, Γ = 0.
    NonCritical,
    /// |ε_d| at ε̄₊ within 1e−12.
    AtEp,
}

/// Observable bundle at one parameter point. `gap` is populated only in the
/// anti-bound windows ε̄₊ < |ε_d| < ε_Δ⁺ and `xi_inverse` only in the
/// resonance window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QptObservables {
    pub gamma: f64,
    pub gap: Option<f64>,
    pub xi_inverse: Option<f64>,
    pub side: CriticalSide,
}

/// Fitted scaling exponents: `beta_order` for Γ against the distance to the
/// coalescence point, `z_dynamic` for Γ against the phase deviation |φ_res − π|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalExponents {
    pub beta_order: f64,
    pub z_dynamic: f64,
}

/// Decay width Γ = −2 Im z₋: zero for |ε_d| ≥ ε̄₊ (real spectrum) and
/// 2g²√|λ|/(1 − 2g²) inside the resonance window.
pub fn decay_width(params: &ModelParams) -> Result<f64> {
    params.require_prototype()?;
    let (zm, _) = eigenvalues(params)?;
    let gamma = -2.0 * zm.im;
    Ok(if gamma == 0.0 { 0.0 } else { gamma })
}

/// Pseudo-gap Δz = z₊ − z₋ = 2g²√λ/(1 − 2g²) between the two anti-bound
/// states; defined in ε̄₊ < ε_d < ε_Δ⁺ and its mirror window, vanishing at
/// the coalescence.
pub fn pseudo_gap(params: &ModelParams) -> Result<f64> {
    params.require_prototype()?;
    let eps_d = params.require_real_eps_d()?;
    let f1 = params.f1();
    if f1 <= 0.0 {
        return Err(Error::OutsideWindow);
    }
    let (eps_bar, eps_delta) = (f1.sqrt(), 1.0 - params.g * params.g);
    if eps_d.abs() <= eps_bar || eps_d.abs() >= eps_delta {
        return Err(Error::OutsideWindow);
    }
    let (zm, zp) = eigenvalues(params)?;
    Ok((zp - zm).re)
}

/// Correlation between the impurity and chain site x through the resonant
/// state, C(x) ∝ e^{i k_res x} with k_res = φ_res + i·log√(1 − 2g²). The
/// modulus grows along the chain (the resonance profile is spatially
/// amplifying) while the phase advances by φ_res ∈ (0, π) per site.
/// Normalized to C(0) = 1; defined in the resonance window.
pub fn correlation(x: u32, params: &ModelParams) -> Result<Complex64> {
    let point = resonance_point(params)?;
    Ok((Complex64::i() * point.k * x as f64).exp())
}

/// Inverse correlation length ξ⁻¹ ≡ φ_res on the critical side.
pub fn correlation_length_inverse(params: &ModelParams) -> Result<f64> {
    crate::spectrum::resonance_phase(params)
}

/// Collect the observables at one parameter point.
pub fn observables(params: &ModelParams) -> Result<QptObservables> {
    params.require_prototype()?;
    let eps_d = params.require_real_eps_d()?;
    let f1 = params.f1();
    if f1 <= 0.0 {
        return Err(Error::OutsideWindow);
    }
    let eps_bar = f1.sqrt();
    let gamma = decay_width(params)?;
    let side = if (eps_d.abs() - eps_bar).abs() < 1e-12 {
        CriticalSide::AtEp
    } else if eps_d.abs() < eps_bar {
        CriticalSide::Critical
    } else {
        CriticalSide::NonCritical
    };
    Ok(QptObservables {
        gamma,
        gap: pseudo_gap(params).ok(),
        xi_inverse: correlation_length_inverse(params).ok(),
        side,
    })
}

/// Fit the two scaling exponents from a window (lo, hi) of ε_d strictly
/// inside the positive resonance region: Γ against δ = ε̄₊ − ε_d gives
/// `beta_order` (1/2), and Γ against |φ_res − π| gives `z_dynamic` (1).
/// The window must not straddle the coalescence point and must span at
/// least two decades of δ.
pub fn fit_critical_exponents(g: f64, window: (f64, f64)) -> Result<CriticalExponents> {
    let f1 = 1.0 - 2.0 * g * g;
    if f1 <= 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    let eps_bar = f1.sqrt();
    let (lo, hi) = window;
    if !(0.0 < lo && lo < hi && hi < eps_bar) {
        return Err(Error::InsufficientSpan);
    }
    let (delta_min, delta_max) = (eps_bar - hi, eps_bar - lo);
    if delta_max / delta_min < 100.0 {
        return Err(Error::InsufficientSpan);
    }

    let count = 25;
    let mut width_samples = Vec::with_capacity(count);
    let mut phase_samples = Vec::with_capacity(count);
    for i in 0..count {
        let t = i as f64 / (count - 1) as f64;
        let delta = delta_min * (delta_max / delta_min).powf(t);
        let params = ModelParams::new(eps_bar - delta, g);
        let gamma = decay_width(&params)?;
        let phi = crate::spectrum::resonance_phase(&params)?;
        width_samples.push((delta.ln(), gamma.ln()));
        phase_samples.push(((std::f64::consts::PI - phi).abs().ln(), gamma.ln()));
    }
    Ok(CriticalExponents {
        beta_order: slope(&width_samples),
        z_dynamic: slope(&phase_samples),
    })
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// One-sided dΓ/dε_d finite-difference slopes at distance `step` from ε̄₊:
/// (below, above). The below-side slope diverges like |λ|^{−1/2}; the above
/// side is identically zero.
pub fn width_slopes_at_ep(g: f64, step: f64) -> Result<(f64, f64)> {
    let f1 = 1.0 - 2.0 * g * g;
    if f1 <= 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    let eps_bar = f1.sqrt();
    let below = (decay_width(&ModelParams::new(eps_bar - step, g))?
        - decay_width(&ModelParams::new(eps_bar, g))?)
        / step;
    let above = (decay_width(&ModelParams::new(eps_bar + step, g))?
        - decay_width(&ModelParams::new(eps_bar, g))?)
        / step;
    Ok((below, above))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen reference digits
mod tests {
    use super::*;
    use crate::spectrum::{spectral_pair, StateLabel};
    use std::f64::consts::PI;

    const G: f64 = 0.67;
    const EPS_BAR: f64 = 0.31968734726291545;
    const GAMMA_00: f64 = 2.8083688881863584;
    const GAP_05: f64 = 3.3772710892243001;
    const PHI_RES_01: f64 = 1.8889417846040806;
    const GROWTH_PER_SITE: f64 = 3.1280562354492738; // 1/√(1 − 2g²)

    #[test]
    fn decay_width_reference_points() {
        let gamma = decay_width(&ModelParams::new(0.0, G)).unwrap();
        assert!((gamma - GAMMA_00).abs() < 1e-13, "gamma = {gamma}");
        assert_eq!(decay_width(&ModelParams::new(0.5, G)).unwrap(), 0.0);
        assert_eq!(decay_width(&ModelParams::new(1.2, G)).unwrap(), 0.0);
        // exactly at the coalescence the width is still zero
        let at_ep = decay_width(&ModelParams::new(EPS_BAR, G)).unwrap();
        assert!(at_ep.abs() < 1e-7);
    }

    #[test]
    fn pseudo_gap_reference_and_window() {
        let gap = pseudo_gap(&ModelParams::new(0.5, G)).unwrap();
        assert!((gap - GAP_05).abs() < 1e-13, "gap = {gap}");
        let mirror = pseudo_gap(&ModelParams::new(-0.5, G)).unwrap();
        assert!((mirror - GAP_05).abs() < 1e-13);
        assert_eq!(
            pseudo_gap(&ModelParams::new(0.0, G)),
            Err(Error::OutsideWindow)
        );
        let eps_bar = (1.0 - 2.0 * G * G).sqrt();
        assert_eq!(
            pseudo_gap(&ModelParams::new(eps_bar, G)),
            Err(Error::OutsideWindow)
        );
        // shrinks to zero approaching the coalescence from above
        let tiny = pseudo_gap(&ModelParams::new(EPS_BAR + 1e-12, G)).unwrap();
        assert!(tiny < 1e-4);
    }

    #[test]
    fn correlation_reference_point() {
        assert_eq!(
            correlation(0, &ModelParams::new(0.1, G)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let c1 = correlation(1, &ModelParams::new(0.1, G)).unwrap();
        assert!((c1.norm() - GROWTH_PER_SITE).abs() < 1e-12, "|C| = {}", c1.norm());
        assert!((c1.arg() - PHI_RES_01).abs() < 1e-12, "arg = {}", c1.arg());
        assert_eq!(
            correlation(1, &ModelParams::new(0.5, G)),
            Err(Error::OutsideResonanceWindow)
        );
    }

    #[test]
    fn correlation_phase_stays_in_channel() {
        for eps_d in [-0.3, -0.05, 0.02, 0.18, 0.31] {
            let phi = correlation_length_inverse(&ModelParams::new(eps_d, G)).unwrap();
            assert!(phi > 0.0 && phi < PI, "phi = {phi} at eps_d = {eps_d}");
        }
    }

    #[test]
    fn noncritical_side_correlations_are_real_up_to_sign() {
        // anti-bound wave numbers pin Re k to 0 or π, so e^{ik x} is real
        for eps_d in [0.4, 0.5, 0.8, -0.45] {
            let pair = spectral_pair(&ModelParams::new(eps_d, G)).unwrap();
            assert_ne!(pair.minus.label, StateLabel::Resonance);
            let k = pair.minus.k;
            for x in 1..=4 {
                let c = (Complex64::i() * k * x as f64).exp();
                assert!(
                    c.im.abs() < 1e-9 * c.re.abs().max(1.0),
                    "complex correlation off the critical side: {c}"
                );
            }
        }
    }

    #[test]
    fn observables_sides() {
        let critical = observables(&ModelParams::new(0.1, G)).unwrap();
        assert_eq!(critical.side, CriticalSide::Critical);
        assert!(critical.gamma > 0.0);
        assert!(critical.gap.is_none());
        assert!((critical.xi_inverse.unwrap() - PHI_RES_01).abs() < 1e-12);

        let noncritical = observables(&ModelParams::new(0.5, G)).unwrap();
        assert_eq!(noncritical.side, CriticalSide::NonCritical);
        assert_eq!(noncritical.gamma, 0.0);
        assert!((noncritical.gap.unwrap() - GAP_05).abs() < 1e-12);
        assert!(noncritical.xi_inverse.is_none());

        let at_ep = observables(&ModelParams::new(EPS_BAR, G)).unwrap();
        assert_eq!(at_ep.side, CriticalSide::AtEp);
    }

    #[test]
    fn exponents_match_scaling_contract() {
        let window = (EPS_BAR - 1e-3, EPS_BAR - 1e-6);
        let exps = fit_critical_exponents(G, window).unwrap();
        assert!(
            (exps.beta_order - 0.5).abs() < 0.01,
            "beta = {}",
            exps.beta_order
        );
        assert!(
            (exps.z_dynamic - 1.0).abs() < 0.05,
            "z = {}",
            exps.z_dynamic
        );
    }

    #[test]
    fn exponent_fit_rejects_bad_windows() {
        // straddles the coalescence point
        assert_eq!(
            fit_critical_exponents(G, (EPS_BAR - 1e-3, EPS_BAR + 1e-3)),
            Err(Error::InsufficientSpan)
        );
        // too narrow
        assert_eq!(
            fit_critical_exponents(G, (EPS_BAR - 2e-4, EPS_BAR - 1e-4)),
            Err(Error::InsufficientSpan)
        );
    }

    #[test]
    fn width_derivative_is_discontinuous() {
        let (below, above) = width_slopes_at_ep(G, 1e-6).unwrap();
        assert_eq!(above, 0.0);
        assert!(below.abs() > 1e3, "below-side slope {below}");
        assert!(below.abs() > 1e3 * above.abs().max(1.0));
    }

    #[test]
    fn gap_width_duality_at_mirrored_offsets() {
        for delta in [1e-4, 1e-5, 1e-6] {
            let gap = pseudo_gap(&ModelParams::new(EPS_BAR + delta, G)).unwrap();
            let width = decay_width(&ModelParams::new(EPS_BAR - delta, G)).unwrap();
            assert!(
                (gap - width).abs() / gap < 1e-3,
                "delta={delta}: gap {gap} vs width {width}"
            );
        }
    }
}
