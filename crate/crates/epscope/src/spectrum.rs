//! Closed-form discrete spectrum of the chain-impurity model: the eigenvalue
//! pair z_±, effective wave numbers k_±, state classification, window
//! thresholds, the resonance phase, and parameter sweeps.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::eplocator;
use crate::model::{canonical_im, self_energy, ModelParams, RiemannSheet, Sign};
use crate::{Error, Result};

/// Default tolerance for state classification.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// The qualitative character of a discrete solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateLabel {
    /// Real z outside the band, spatially decaying (Im k > 0), first sheet.
    Bound,
    /// Real z on the second sheet, spatially growing (Im k < 0); its wave
    /// number pins to a band edge (Re k ∈ {0, π}).
    AntiBound,
    /// Im z < 0: carries the decay width Γ = −2 Im z.
    Resonance,
    /// Im z > 0: conjugate partner of the resonance.
    AntiResonance,
    /// z within tolerance of a band edge ±1.
    BandEdge,
}

impl StateLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            StateLabel::Bound => "bound",
            StateLabel::AntiBound => "anti-bound",
            StateLabel::Resonance => "resonance",
            StateLabel::AntiResonance => "anti-resonance",
            StateLabel::BandEdge => "band-edge",
        }
    }
}

/// One discrete solution: energy, wave number, sheet, label, and which sign
/// of the closed-form root produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub z: Complex64,
    pub k: Complex64,
    pub sheet: RiemannSheet,
    pub label: StateLabel,
    pub branch: Sign,
}

/// The (z₋, z₊) pair with full metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub minus: SpectralPoint,
    pub plus: SpectralPoint,
}

/// Window boundaries at fixed g: ε_Δ± = ±(1 − g²) separate bound from
/// anti-bound solutions; ε̄± = ±√(1 − 2g²) are the coalescence points where
/// the resonance pair appears (imaginary for g > 1/√2, see `eps_bar_real`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub eps_delta_plus: f64,
    pub eps_delta_minus: f64,
    pub eps_bar_plus: Complex64,
    pub eps_bar_minus: Complex64,
    pub eps_bar_real: bool,
}

/// Eigenvalue pair of the dispersion equation (prototype F = 1/2):
///
/// ```text
/// z_± = [ε_d(1 − g²) ± g²√λ] / (1 − 2g²),   λ = ε_d² − (1 − 2g²),
/// ```
///
/// with the principal root of λ. Both values satisfy
/// |z − ε_d − Σ(z)| < 1e−10 on their respective sheets.
///
/// Errors with `DegenerateCoupling` when |1 − 2g²| < 1e−12.
pub fn eigenvalues(params: &ModelParams) -> Result<(Complex64, Complex64)> {
    params.require_prototype()?;
    let f1 = params.f1();
    if f1.abs() < 1e-12 {
        return Err(Error::DegenerateCoupling);
    }
    let g2 = params.g * params.g;
    let root = params.lambda().sqrt();
    let base = params.eps_d * (1.0 - g2);
    Ok(((base - g2 * root) / f1, (base + g2 * root) / f1))
}

/// Effective wave numbers k_± = i log(−ε_d ± √λ) paired with z_±
/// (−cos k_± = z_± to 1e−12). Real parts of anti-bound solutions land
/// exactly on a band edge 0 or π.
pub fn wave_numbers(params: &ModelParams) -> Result<(Complex64, Complex64)> {
    params.require_prototype()?;
    if params.f1().abs() < 1e-12 {
        return Err(Error::DegenerateCoupling);
    }
    let root = params.lambda().sqrt();
    Ok((
        log_wave_number(-params.eps_d - root),
        log_wave_number(-params.eps_d + root),
    ))
}

/// k = i log w with the principal logarithm, folding Re k = −π onto +π.
fn log_wave_number(w: Complex64) -> Complex64 {
    let mut k = Complex64::i() * canonical_im(w).ln();
    if k.re <= -PI + 1e-9 {
        k += Complex64::new(2.0 * PI, 0.0);
    }
    Complex64::new(
        if k.re == 0.0 { 0.0 } else { k.re },
        if k.im == 0.0 { 0.0 } else { k.im },
    )
}

/// Classify a candidate (z, k) at tolerance `tol` (use `CLASSIFY_TOL` by
/// default). Band edges win; then the sign of Im z decides resonance vs
/// anti-resonance; then the sign of Im k decides bound vs anti-bound.
/// A residual candidate with everything below tolerance (a continuum-limit
/// point) reports as `BandEdge`.
pub fn classify(z: Complex64, k: Complex64, tol: f64) -> StateLabel {
    if (z - 1.0).norm() < tol || (z + 1.0).norm() < tol {
        StateLabel::BandEdge
    } else if z.im < -tol {
        StateLabel::Resonance
    } else if z.im > tol {
        StateLabel::AntiResonance
    } else if k.im > tol {
        StateLabel::Bound
    } else if k.im < -tol {
        StateLabel::AntiBound
    } else {
        StateLabel::BandEdge
    }
}

/// Window boundaries for a given coupling.
pub fn thresholds(g: f64) -> Thresholds {
    let locations = eplocator::ep_locations_closed_form(g);
    Thresholds {
        eps_delta_plus: 1.0 - g * g,
        eps_delta_minus: -(1.0 - g * g),
        eps_bar_plus: locations.plus,
        eps_bar_minus: locations.minus,
        eps_bar_real: locations.real,
    }
}

/// Assemble the full spectral pair: eigenvalues, wave numbers, sheet
/// assignment (by dispersion residual), and labels.
pub fn spectral_pair(params: &ModelParams) -> Result<SpectralPair> {
    spectral_pair_tol(params, CLASSIFY_TOL)
}

pub fn spectral_pair_tol(params: &ModelParams, tol: f64) -> Result<SpectralPair> {
    let (zm, zp) = eigenvalues(params)?;
    let (km, kp) = wave_numbers(params)?;
    Ok(SpectralPair {
        minus: assemble_point(zm, km, Sign::Minus, params, tol),
        plus: assemble_point(zp, kp, Sign::Plus, params, tol),
    })
}

fn assemble_point(
    z: Complex64,
    k: Complex64,
    branch: Sign,
    params: &ModelParams,
    tol: f64,
) -> SpectralPoint {
    // The ± of the closed form swaps physical roles across ε_d = 0, so the
    // sheet is decided a posteriori by which Σ branch closes the dispersion.
    let sheet = best_sheet(z, params);
    SpectralPoint {
        z,
        k,
        sheet,
        label: classify(z, k, tol),
        branch,
    }
}

/// |z − ε_d − Σ_sheet(z)|.
pub fn dispersion_residual(z: Complex64, params: &ModelParams, sheet: RiemannSheet) -> f64 {
    (z - params.eps_d - self_energy(z, sheet, params.g)).norm()
}

/// The sheet on which z better satisfies the dispersion equation.
pub fn best_sheet(z: Complex64, params: &ModelParams) -> RiemannSheet {
    if dispersion_residual(z, params, RiemannSheet::First)
        <= dispersion_residual(z, params, RiemannSheet::Second)
    {
        RiemannSheet::First
    } else {
        RiemannSheet::Second
    }
}

/// Real part of the resonance wave number k₋, a value strictly inside the
/// unperturbed channel (0, π). Defined in the resonance window
/// ε̄₋ < ε_d < ε̄₊ with ε_d ≠ 0 and g < 1/√2; computed directly from the
/// closed-form k₋ rather than from arctan case analysis, which keeps the
/// branch unambiguous on both signs of ε_d.
pub fn resonance_phase(params: &ModelParams) -> Result<f64> {
    let point = resonance_point(params)?;
    Ok(point.k.re)
}

/// The resonance member (Im z < 0) of the pair inside the window.
pub fn resonance_point(params: &ModelParams) -> Result<SpectralPoint> {
    params.require_prototype()?;
    let eps_d = params.require_real_eps_d()?;
    let f1 = params.f1();
    if f1 <= 0.0 || eps_d == 0.0 || eps_d.abs() >= f1.sqrt() {
        return Err(Error::OutsideResonanceWindow);
    }
    let pair = spectral_pair(params)?;
    Ok(pair.minus)
}

/// One row of a sweep: per-point failures are recorded, not fatal.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub eps_d: f64,
    pub entry: Result<SpectralPair>,
}

/// Evaluate the closed-form pair over a real ε_d grid, preserving order.
pub fn sweep(g: f64, eps_grid: &[f64]) -> Vec<SweepRow> {
    eps_grid
        .iter()
        .map(|&eps_d| SweepRow {
            eps_d,
            entry: spectral_pair(&ModelParams::new(eps_d, g)),
        })
        .collect()
}
