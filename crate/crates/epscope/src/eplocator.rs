//! Locating the coalescence points of the discrete spectrum: closed forms
//! for the chain model, the discriminant factorization, and a Newton-based
//! locator driven by the slope condition Σ′(z) = 1 that works for any
//! self-energy exposing a value and a derivative per sheet.

use num_complex::Complex64;

use crate::model::{branch_sqrt, self_energy, self_energy_derivative, ModelParams, RiemannSheet, Sign};
use crate::topology;
use crate::{Error, Result};

/// One exceptional point: its parameter location ε̄, the coalescence energy
/// z̄_c (center), the cycle period, the root-sign q of the center condition
/// (q = − goes with the positive-energy center, q = + with the negative one),
/// and the discriminant factor whose zero it is.
#[derive(Debug, Clone, PartialEq)]
pub struct EpRecord {
    pub eps_bar: Complex64,
    pub z_center: Complex64,
    pub period: u32,
    pub sign_q: Sign,
    pub factor: &'static str,
}

/// System discriminant D(ε_d; g) = −4g⁴·f₁·f₂ with f₁ = 1 − 2g² and
/// f₂ = ε_d² − (1 − 2g²). Zeros of f₂ are the exceptional points at fixed g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discriminant {
    pub value: f64,
    pub f1: f64,
    pub f2: f64,
    pub prefactor: f64,
}

/// The pair ε̄_± = ±√(1 − 2g²): real for g < 1/√2, imaginary beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpLocations {
    pub plus: Complex64,
    pub minus: Complex64,
    pub real: bool,
}

/// Discriminant with its factors exposed. Requires F = 1/2 and real ε_d.
pub fn discriminant(params: &ModelParams) -> Result<Discriminant> {
    params.require_prototype()?;
    let eps_d = params.require_real_eps_d()?;
    let g2 = params.g * params.g;
    let f1 = params.f1();
    let f2 = eps_d * eps_d - f1;
    let prefactor = -4.0 * g2 * g2;
    Ok(Discriminant {
        value: prefactor * f1 * f2,
        f1,
        f2,
        prefactor,
    })
}

/// Closed-form centers z̄_c^± = ±(1 − g²)/√(1 − 2g²), each satisfying
/// Σ′(z̄_c) = 1 on the second sheet. Defined for 0 ≤ g < 1/√2.
pub fn centers_closed_form(g: f64) -> Result<(f64, f64)> {
    let f1 = 1.0 - 2.0 * g * g;
    if f1 < 1e-12 {
        return Err(Error::DegenerateCoupling);
    }
    let center = (1.0 - g * g) / f1.sqrt();
    Ok((center, -center))
}

/// Closed-form exceptional points ε̄_± = ±√(1 − 2g²), with a reality flag.
pub fn ep_locations_closed_form(g: f64) -> EpLocations {
    let f1 = 1.0 - 2.0 * g * g;
    if f1 >= 0.0 {
        let r = f1.sqrt();
        EpLocations {
            plus: Complex64::new(r, 0.0),
            minus: Complex64::new(-r, 0.0),
            real: true,
        }
    } else {
        let r = (-f1).sqrt();
        EpLocations {
            plus: Complex64::new(0.0, r),
            minus: Complex64::new(0.0, -r),
            real: false,
        }
    }
}

/// Both prototype exceptional points as full records (period 2 cycles).
pub fn prototype_ep_records(g: f64) -> Result<(EpRecord, EpRecord)> {
    let (c_plus, c_minus) = centers_closed_form(g)?;
    let locations = ep_locations_closed_form(g);
    let make = |eps_bar: Complex64, z_center: f64| EpRecord {
        eps_bar,
        z_center: Complex64::new(z_center, 0.0),
        period: 2,
        sign_q: if z_center >= 0.0 { Sign::Minus } else { Sign::Plus },
        factor: "f2",
    };
    Ok((make(locations.plus, c_plus), make(locations.minus, c_minus)))
}

/// A self-energy usable by the generic locator: value and z-derivative per
/// sheet, plus the branch points a contour must avoid.
pub trait SelfEnergy {
    fn value(&self, z: Complex64, sheet: RiemannSheet) -> Complex64;
    fn derivative(&self, z: Complex64, sheet: RiemannSheet) -> Result<Complex64>;

    /// d²Σ/dz², used only to drive the locator's Newton step. The default
    /// is a real-step central difference of `derivative`, which is robust
    /// arbitrarily close to a branch cut; override when a closed form is
    /// available.
    fn curvature(&self, z: Complex64, sheet: RiemannSheet) -> Result<Complex64> {
        let step = 1e-6 * (1.0 + z.norm());
        let plus = self.derivative(z + step, sheet)?;
        let minus = self.derivative(z - step, sheet)?;
        Ok((plus - minus) / (2.0 * step))
    }

    fn branch_points(&self) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]
    }
}

/// The chain self-energy g²(z ∓ √(z² − 1)).
#[derive(Debug, Clone, Copy)]
pub struct PrototypeSelfEnergy {
    pub g: f64,
}

impl SelfEnergy for PrototypeSelfEnergy {
    fn value(&self, z: Complex64, sheet: RiemannSheet) -> Complex64 {
        self_energy(z, sheet, self.g)
    }

    fn derivative(&self, z: Complex64, sheet: RiemannSheet) -> Result<Complex64> {
        self_energy_derivative(z, sheet, self.g)
    }

    fn curvature(&self, z: Complex64, sheet: RiemannSheet) -> Result<Complex64> {
        if (z - 1.0).norm() < crate::model::BRANCH_POINT_TOL
            || (z + 1.0).norm() < crate::model::BRANCH_POINT_TOL
        {
            return Err(Error::BranchPointSingularity);
        }
        // Σ = g²(z + s√(z²−1)) ⇒ Σ″ = −s g²/(z²−1)^{3/2}
        let root = branch_sqrt(z);
        Ok(-sheet.root_sign() * self.g * self.g / (root * root * root))
    }
}

/// Newton search for a center of coalescence: solves Σ′(z) = 1 on the given
/// sheet starting from `z_guess`, then back-substitutes ε̄ = z − Σ(z).
/// Steps are capped at length 1/2 so distant guesses cannot vault across a
/// branch cut.
///
/// The branch-cut sign ambiguity of the back-substitution is resolved by a
/// consistency check: the returned record keeps whichever sheet's ε̄ makes
/// z − ε̄ − Σ(z) a double zero at the center, confirmed by the winding of the
/// denominator, which also fills the period field.
pub fn locate_ep_numeric(
    sigma: &dyn SelfEnergy,
    sheet: RiemannSheet,
    z_guess: Complex64,
    tol: f64,
    max_iter: usize,
) -> Result<EpRecord> {
    if tol <= 0.0 {
        return Err(Error::Domain("locator tolerance must be positive"));
    }
    const STEP_CAP: f64 = 0.5;
    let mut z = z_guess;
    let mut converged = false;
    for _ in 0..max_iter {
        for bp in sigma.branch_points() {
            if (z - bp).norm() < 1e-8 {
                return Err(Error::BranchPointSingularity);
            }
        }
        let h = sigma.derivative(z, sheet)? - 1.0;
        if h.norm() < tol {
            converged = true;
            break;
        }
        let hp = sigma.curvature(z, sheet)?;
        if hp.norm() < 1e-30 {
            return Err(Error::NoConvergence {
                iterations: max_iter,
            });
        }
        let mut step = h / hp;
        if step.norm() > STEP_CAP {
            step *= STEP_CAP / step.norm();
        }
        z -= step;
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: max_iter,
        });
    }

    // Back-substitute on both sheets; keep the candidate whose denominator
    // winds twice around the center.
    let radius = contour_radius(sigma, z);
    let mut fallback: Option<(Complex64, RiemannSheet)> = None;
    for s in [sheet, sheet.other()] {
        let eps_bar = z - sigma.value(z, s);
        // small radius ⇒ the trapezoid is already converged at 256 points
        let (p, residual) = topology::winding_generic(sigma, s, eps_bar, z, radius, 256);
        if residual < 1e-3 && p >= 2 {
            return Ok(EpRecord {
                eps_bar,
                z_center: z,
                period: p as u32,
                sign_q: center_sign(z, s),
                factor: "f2",
            });
        }
        if fallback.is_none() {
            fallback = Some((eps_bar, s));
        }
    }
    let (eps_bar, s) = fallback.expect("at least one sheet candidate");
    Ok(EpRecord {
        eps_bar,
        z_center: z,
        period: 1,
        sign_q: center_sign(z, s),
        factor: "f2",
    })
}

/// Root sign q of the center condition Σ′ = g²(1 − z/(q√(z²−1))) = 1 written
/// with the positive root: the second sheet at Re z > 0 corresponds to q = −.
fn center_sign(z: Complex64, sheet: RiemannSheet) -> Sign {
    let r = branch_sqrt(z);
    let positive_root = r.re >= 0.0;
    match sheet {
        RiemannSheet::First => {
            if positive_root {
                Sign::Plus
            } else {
                Sign::Minus
            }
        }
        RiemannSheet::Second => {
            if positive_root {
                Sign::Minus
            } else {
                Sign::Plus
            }
        }
    }
}

fn contour_radius(sigma: &dyn SelfEnergy, z: Complex64) -> f64 {
    let mut radius = 0.05f64;
    for bp in sigma.branch_points() {
        radius = radius.min(0.5 * (z - bp).norm());
    }
    radius.max(1e-10)
}

/// Analytic ε_d-derivative of the eigenvalue pair,
/// ∂z_±/∂ε_d = (1 − g²)/(1 − 2g²) ± g² ε_d/((1 − 2g²)√λ), which equals
/// 1/(1 − Σ′(z_±)) on the matching sheet. Diverges like |λ|^{−1/2} at the
/// exceptional points.
pub fn eigenvalue_derivative(params: &ModelParams) -> Result<(Complex64, Complex64)> {
    params.require_prototype()?;
    let f1 = params.f1();
    if f1.abs() < 1e-12 {
        return Err(Error::DegenerateCoupling);
    }
    let lambda = params.lambda();
    if lambda.norm() < 1e-14 {
        return Err(Error::AtExceptionalPoint);
    }
    let g2 = params.g * params.g;
    let base = (1.0 - g2) / f1;
    let swing = g2 * params.eps_d / (f1 * lambda.sqrt());
    Ok((base - swing, base + swing))
}
