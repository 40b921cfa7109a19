//! Solution and exceptional-point counting for open systems with quadratic
//! lead dispersion, together with the two-site effective Hamiltonian and the
//! w = e^{ik} polynomial eigenproblem it generates.
//!
//! A discrete sector of n_D levels attached to n_C non-degenerate chains has
//! 2^{n_C}(n_D + n_C) discrete solutions, hence N(N − 1) exceptional points
//! with N that count. The chain model is the (1, 1) case whose quartic
//! degenerates to a quadratic at F = 1/2 (two of the four solutions become
//! trivial).

use num_complex::Complex64;

use crate::model::{branch_sqrt, ModelParams, RiemannSheet};
use crate::{Error, Result};

/// (n_D, n_C): discrete impurity levels and non-degenerate continua.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemShape {
    pub n_d: u32,
    pub n_c: u32,
}

impl SystemShape {
    pub fn new(n_d: u32, n_c: u32) -> Result<Self> {
        if n_d + n_c == 0 {
            return Err(Error::Domain("system shape needs n_D + n_C >= 1"));
        }
        Ok(SystemShape { n_d, n_c })
    }
}

/// Number of discrete solutions: 2^{n_C} (n_D + n_C).
pub fn n_solutions(shape: SystemShape) -> u64 {
    (1u64 << shape.n_c) * (shape.n_d + shape.n_c) as u64
}

/// Number of exceptional points of the open system: N(N − 1) with
/// N = 2^{n_C}(n_D + n_C).
pub fn n_eps_open(shape: SystemShape) -> u64 {
    let n = n_solutions(shape);
    n * (n - 1)
}

/// Number of exceptional points of a closed n-level system: n(n − 1).
pub fn n_eps_closed(n: u64) -> u64 {
    n * (n - 1)
}

/// True when F triggers the quartic → quadratic reduction, i.e. F = 1/2 to
/// within 1e−14. Near-misses do not reduce.
pub fn degenerate_reduction_check(f: f64) -> bool {
    (1.0 - 2.0 * f).abs() < 1e-14
}

/// The z-dependent two-site effective Hamiltonian
///
/// ```text
/// [ ε_d        −g/√2      ]
/// [ −g/√2      −F e^{ik}  ]
/// ```
///
/// with e^{ik} = −(z ∓ √(z² − 1)) resolved per sheet, so that at F = 1/2 the
/// end-site entry equals Σ_sheet(z)/(2g²) and det(H_eff(z) − z) = 0 is the
/// dispersion equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian2x2 {
    pub eps_d: Complex64,
    pub g: f64,
    pub f: f64,
}

impl EffectiveHamiltonian2x2 {
    pub fn new(params: &ModelParams) -> Self {
        EffectiveHamiltonian2x2 {
            eps_d: params.eps_d,
            g: params.g,
            f: params.f,
        }
    }

    /// e^{ik} at energy z on the given sheet (|e^{ik}| < 1 on the first).
    pub fn phase_factor(z: Complex64, sheet: RiemannSheet) -> Complex64 {
        match sheet {
            RiemannSheet::First => -(z - branch_sqrt(z)),
            RiemannSheet::Second => -(z + branch_sqrt(z)),
        }
    }

    /// The 2×2 matrix at energy z (row-major).
    pub fn matrix(&self, z: Complex64, sheet: RiemannSheet) -> [[Complex64; 2]; 2] {
        let coupling = Complex64::new(-self.g / 2.0_f64.sqrt(), 0.0);
        let end_site = -self.f * Self::phase_factor(z, sheet);
        [
            [self.eps_d, coupling],
            [coupling, end_site],
        ]
    }

    /// det(z·I − H_eff(z)).
    pub fn char_det(&self, z: Complex64, sheet: RiemannSheet) -> Complex64 {
        let m = self.matrix(z, sheet);
        (z - m[0][0]) * (z - m[1][1]) - m[0][1] * m[1][0]
    }
}

/// The polynomial in w = e^{ik} equivalent to det(z(k) − H_eff(k)) = 0:
/// multiplying (w + 1/w + 2ε_d)((1 − 2F)w + 1/w) − 2g² by w² gives ascending
/// coefficients [1, 2ε_d, (1 − 2F) + 1 − 2g², 2ε_d(1 − 2F), (1 − 2F)].
/// Trailing (highest-order) coefficients below 1e−14 are trimmed and counted
/// in `trimmed`; near-degenerate leading coefficients above that threshold
/// are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct WPolynomial {
    /// Ascending powers of w, up to the effective degree.
    pub coefficients: Vec<Complex64>,
    /// How many trailing coefficients were trimmed as exact-degenerate.
    pub trimmed: usize,
}

impl WPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

pub fn w_polynomial(params: &ModelParams) -> WPolynomial {
    let one_m_2f = 1.0 - 2.0 * params.f;
    let g2 = params.g * params.g;
    let mut coefficients = vec![
        Complex64::new(1.0, 0.0),
        2.0 * params.eps_d,
        Complex64::new(one_m_2f + 1.0 - 2.0 * g2, 0.0),
        2.0 * params.eps_d * one_m_2f,
        Complex64::new(one_m_2f, 0.0),
    ];
    let mut trimmed = 0;
    while coefficients.len() > 1 && coefficients.last().unwrap().norm() < 1e-14 {
        coefficients.pop();
        trimmed += 1;
    }
    WPolynomial {
        coefficients,
        trimmed,
    }
}

/// One root of the w-polynomial and its energy z = −(w + 1/w)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WRoot {
    pub w: Complex64,
    pub z: Complex64,
}

/// All roots by deterministic Weierstrass (Durand–Kerner) simultaneous
/// iteration: initial guesses sit on a circle of radius 1 + max|coeff| (of
/// the monic-normalized polynomial) at staggered angles, and the output is
/// sorted by argument then modulus so repeated runs agree bit for bit.
/// Errors with `DegreeZero` on constant input and `NoConvergence` if the
/// residual has not reached 1e−12 within 1000 sweeps.
pub fn w_roots(coefficients: &[Complex64]) -> Result<Vec<WRoot>> {
    let degree = coefficients.len().saturating_sub(1);
    if degree == 0 {
        return Err(Error::DegreeZero);
    }
    let lead = coefficients[degree];
    if lead.norm() == 0.0 {
        return Err(Error::Domain("leading coefficient must be nonzero"));
    }
    let monic: Vec<Complex64> = coefficients.iter().map(|c| c / lead).collect();
    let eval = |w: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc * w + c;
        }
        acc
    };

    let radius = 1.0 + monic.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / degree as f64 + 0.4;
            radius * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    let mut converged = false;
    for _ in 0..1000 {
        let mut shift_max: f64 = 0.0;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let shift = eval(roots[i]) / denom;
            roots[i] -= shift;
            shift_max = shift_max.max(shift.norm());
        }
        if shift_max < 1e-14 {
            converged = true;
            break;
        }
    }
    let residual: f64 = roots.iter().map(|&w| eval(w).norm()).fold(0.0, f64::max);
    if !converged && residual > 1e-12 {
        return Err(Error::NoConvergence { iterations: 1000 });
    }

    roots.sort_by(|a, b| {
        (a.arg(), a.norm())
            .partial_cmp(&(b.arg(), b.norm()))
            .expect("finite roots")
    });
    Ok(roots
        .into_iter()
        .map(|w| WRoot {
            w,
            z: -(w + w.inv()) / 2.0,
        })
        .collect())
}

/// Convenience: roots of the w-polynomial of `params`.
pub fn w_spectrum(params: &ModelParams) -> Result<Vec<WRoot>> {
    w_roots(&w_polynomial(params).coefficients)
}
