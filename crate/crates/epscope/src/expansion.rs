//! Fractional-power (Puiseux) eigenvalue expansion around a coalescence
//! point: closed-form coefficients for the chain model, truncated
//! evaluation, and numerical recovery of the leading exponent and of the
//! coefficients from sampled eigenvalues.
//!
//! The expansion argument is always the discriminant factor
//! λ = f₂ = ε_d² − (1 − 2g²) itself, never a linearized (ε_d − ε̄): the
//! fractional powers make the usual regrouping into linear factors
//! impossible. For the chain model (period p = 2, side ε̄):
//!
//! ```text
//! z_h(λ) = z̄_c + Σ_l β_l e^{2πi l h / p} λ^{l/p},
//! β₁ = (1 − ε̄²)/(2ε̄²),   β_n = 1/(2 ε̄^{n+1})  for n ≥ 2,
//! ```
//!
//! an explicit geometric series with convergence radius |λ^{1/2}/ε̄| < 1.
//! The coefficients describe the one-parameter family that pins ε_d at the
//! coalescence value and carries the distance from it entirely in λ (through
//! g); `closed_form_on_path` evaluates the exact eigenvalue of that family
//! for cross-checks.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::eplocator::EpRecord;
use crate::model::{canonical_im, Sign};
use crate::{Error, Result};

/// Extra basis columns carried beyond the requested order when fitting, so
/// the unmodeled series tail does not bias the low coefficients.
const FIT_GUARD_COLUMNS: usize = 5;

/// A truncated fractional-power series around one exceptional point.
#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxSeries {
    pub z_center: Complex64,
    pub period: u32,
    /// β₁ … β_N.
    pub coefficients: Vec<Complex64>,
    pub ep: EpRecord,
    pub factor: &'static str,
}

/// Result of a series evaluation; `extrapolated` flags points outside the
/// geometric convergence radius |λ^{1/p}/ε̄| < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub extrapolated: bool,
}

/// Closed-form coefficients for the chain model on the chosen side
/// (`Sign::Plus` → ε̄₊). Requires 0 < g < 1/√2 and order ≥ 1.
pub fn puiseux_coefficients_prototype(
    ep_side: Sign,
    g: f64,
    order: usize,
) -> Result<PuiseuxSeries> {
    if order == 0 {
        return Err(Error::Domain("series order must be at least 1"));
    }
    if g <= 0.0 {
        return Err(Error::NoExceptionalPoint);
    }
    let f1 = 1.0 - 2.0 * g * g;
    if f1 < 1e-12 {
        return Err(Error::DegenerateCoupling);
    }
    let eps_bar = ep_side.as_f64() * f1.sqrt();
    let z_center = (1.0 + eps_bar * eps_bar) / (2.0 * eps_bar);
    let mut coefficients = Vec::with_capacity(order);
    coefficients.push(Complex64::new(
        (1.0 - eps_bar * eps_bar) / (2.0 * eps_bar * eps_bar),
        0.0,
    ));
    for n in 2..=order {
        coefficients.push(Complex64::new(
            1.0 / (2.0 * eps_bar.powi(n as i32 + 1)),
            0.0,
        ));
    }
    Ok(PuiseuxSeries {
        z_center: Complex64::new(z_center, 0.0),
        period: 2,
        coefficients,
        ep: EpRecord {
            eps_bar: Complex64::new(eps_bar, 0.0),
            z_center: Complex64::new(z_center, 0.0),
            period: 2,
            sign_q: if eps_bar >= 0.0 { Sign::Minus } else { Sign::Plus },
            factor: "f2",
        },
        factor: "f2",
    })
}

impl PuiseuxSeries {
    /// λ = f₂(ε_d) = ε_d² − ε̄², using ε̄² = 1 − 2g².
    pub fn lambda(&self, eps_d: Complex64) -> Complex64 {
        canonical_im(eps_d * eps_d - self.ep.eps_bar * self.ep.eps_bar)
    }

    /// Evaluate branch h (0 ≤ h < p) at the given ε_d, truncated at `order`
    /// coefficients: z̄_c + Σ_{l≤order} β_l e^{2πi l h/p} λ^{l/p} with the
    /// principal fractional root.
    pub fn evaluate(&self, eps_d: Complex64, branch_h: usize, order: usize) -> Result<SeriesValue> {
        self.evaluate_lambda(self.lambda(eps_d), branch_h, order)
    }

    /// Same, but with λ supplied directly.
    pub fn evaluate_lambda(
        &self,
        lambda: Complex64,
        branch_h: usize,
        order: usize,
    ) -> Result<SeriesValue> {
        if branch_h >= self.period as usize {
            return Err(Error::Domain("branch index must satisfy 0 <= h < p"));
        }
        if order > self.coefficients.len() {
            return Err(Error::Domain("order exceeds available coefficients"));
        }
        let p = self.period as f64;
        let root = canonical_im(lambda).powf(1.0 / p);
        let phase = Complex64::new(0.0, 2.0 * PI * branch_h as f64 / p).exp();
        let mut term = Complex64::new(1.0, 0.0);
        let mut total = self.z_center;
        for l in 1..=order {
            term *= root * phase;
            total += self.coefficients[l - 1] * term;
        }
        let extrapolated = root.norm() >= self.ep.eps_bar.norm();
        Ok(SeriesValue {
            value: total,
            extrapolated,
        })
    }

    /// Exact eigenvalue of the pinned-ε_d family the series expands:
    /// ε_d = ε̄ held fixed while g carries λ, i.e. 2g² = λ + 1 − ε̄². The
    /// branch sign s = +1 corresponds to h = 0 and s = −1 to h = 1.
    pub fn closed_form_on_path(&self, lambda: Complex64, branch_h: usize) -> Result<Complex64> {
        if branch_h >= self.period as usize {
            return Err(Error::Domain("branch index must satisfy 0 <= h < p"));
        }
        let s = if branch_h == 0 { 1.0 } else { -1.0 };
        let eps_bar = self.ep.eps_bar;
        let g2 = (lambda + 1.0 - eps_bar * eps_bar) / 2.0;
        let f1 = 1.0 - 2.0 * g2;
        let root = canonical_im(lambda).sqrt();
        Ok((eps_bar * (1.0 - g2) + s * g2 * root) / f1)
    }

    /// Distance to center without cancellation: z_s(λ) − z̄_c as
    /// β₁ s λ^{1/2} + λ / (2ε̄²(ε̄ − s λ^{1/2})), the resummed geometric tail.
    /// Accurate to machine precision relative to its own magnitude even for
    /// |λ| far below the rounding floor of z̄_c.
    pub fn offset_on_path(&self, lambda: Complex64, branch_h: usize) -> Result<Complex64> {
        if branch_h >= self.period as usize {
            return Err(Error::Domain("branch index must satisfy 0 <= h < p"));
        }
        let s = if branch_h == 0 { 1.0 } else { -1.0 };
        let eps_bar = self.ep.eps_bar;
        let root = s * canonical_im(lambda).sqrt();
        Ok(self.coefficients[0] * root
            + lambda / (2.0 * eps_bar * eps_bar * (eps_bar - root)))
    }
}

/// Least-squares slope of log|z − z̄_c| against log|λ|. Needs at least five
/// samples spanning two decades of |λ|; a branch-point family yields 1/p.
pub fn fit_leading_exponent(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 5 {
        return Err(Error::InsufficientSpan);
    }
    let (mut lo, mut hi) = (f64::MAX, 0.0f64);
    for &(lam, dz) in samples {
        if lam <= 0.0 || dz <= 0.0 {
            return Err(Error::Domain("exponent fit needs positive magnitudes"));
        }
        lo = lo.min(lam);
        hi = hi.max(lam);
    }
    if hi / lo < 100.0 {
        return Err(Error::InsufficientSpan);
    }
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(lam, dz) in samples {
        let (x, y) = (lam.ln(), dz.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Recover β₁ … β_order from eigenvalue samples (λ_i, z_i) taken on one
/// branch near the EP, by weighted linear least squares in the λ^{l/p}
/// basis. The period comes from the record (it is measured by the winding,
/// not fitted). Carries `FIT_GUARD_COLUMNS` extra columns so the series tail
/// does not bias the reported coefficients, weights rows by 1/|z − z̄_c| to
/// equalize relative error, and errors with `IllConditioned` when the
/// scaled-QR condition estimate exceeds 1e12.
pub fn fit_coefficients_numeric(
    samples: &[(Complex64, Complex64)],
    ep: &EpRecord,
    order: usize,
) -> Result<Vec<Complex64>> {
    if order == 0 {
        return Err(Error::Domain("fit order must be at least 1"));
    }
    if samples.len() < order + 1 {
        return Err(Error::InsufficientSpan);
    }
    let columns = (order + FIT_GUARD_COLUMNS).min(samples.len());
    let p = ep.period as f64;
    let rows = samples.len();
    let mut matrix = vec![Complex64::new(0.0, 0.0); rows * columns];
    let mut rhs = vec![Complex64::new(0.0, 0.0); rows];
    for (i, &(lambda, z)) in samples.iter().enumerate() {
        let offset = z - ep.z_center;
        let weight = 1.0 / offset.norm().max(1e-300);
        let root = canonical_im(lambda).powf(1.0 / p);
        let mut term = Complex64::new(weight, 0.0);
        for l in 0..columns {
            term *= root;
            matrix[i * columns + l] = term;
        }
        rhs[i] = offset * weight;
    }
    let solution = qr_least_squares(&mut matrix, &mut rhs, rows, columns)?;
    Ok(solution[..order].to_vec())
}

/// Column-scaled modified Gram–Schmidt QR least squares for complex systems.
/// Condition is estimated from the ratio of the largest to smallest |R_ii|
/// of the normalized columns.
fn qr_least_squares(
    matrix: &mut [Complex64],
    rhs: &mut [Complex64],
    rows: usize,
    columns: usize,
) -> Result<Vec<Complex64>> {
    let at = |m: &[Complex64], i: usize, j: usize| m[i * columns + j];

    let mut scale = vec![0.0f64; columns];
    for j in 0..columns {
        let norm: f64 = (0..rows).map(|i| at(matrix, i, j).norm_sqr()).sum();
        scale[j] = norm.sqrt();
        if scale[j] == 0.0 {
            return Err(Error::IllConditioned);
        }
        for i in 0..rows {
            matrix[i * columns + j] /= scale[j];
        }
    }

    // Modified Gram–Schmidt with the right-hand side carried as an extra
    // column, which keeps Qᴴb accurate even as Q loses strict orthogonality.
    let mut r = vec![Complex64::new(0.0, 0.0); columns * columns];
    let mut qtb = vec![Complex64::new(0.0, 0.0); columns];
    let mut diag_min = f64::MAX;
    let mut diag_max = 0.0f64;
    for j in 0..columns {
        for prev in 0..j {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..rows {
                dot += at(matrix, i, prev).conj() * at(matrix, i, j);
            }
            r[prev * columns + j] = dot;
            for i in 0..rows {
                let q = at(matrix, i, prev);
                matrix[i * columns + j] -= dot * q;
            }
        }
        let norm: f64 = (0..rows)
            .map(|i| at(matrix, i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        diag_min = diag_min.min(norm);
        diag_max = diag_max.max(norm);
        if diag_min == 0.0 || diag_max / diag_min > 1e12 {
            return Err(Error::IllConditioned);
        }
        r[j * columns + j] = Complex64::new(norm, 0.0);
        for i in 0..rows {
            matrix[i * columns + j] /= norm;
        }
        let mut dot = Complex64::new(0.0, 0.0);
        for (i, b) in rhs.iter().enumerate() {
            dot += at(matrix, i, j).conj() * b;
        }
        qtb[j] = dot;
        for (i, b) in rhs.iter_mut().enumerate() {
            *b -= dot * at(matrix, i, j);
        }
    }

    let mut x = vec![Complex64::new(0.0, 0.0); columns];
    for j in (0..columns).rev() {
        let mut acc = qtb[j];
        for l in (j + 1)..columns {
            acc -= r[j * columns + l] * x[l];
        }
        x[j] = acc / r[j * columns + j];
    }
    for j in 0..columns {
        x[j] /= scale[j];
    }
    Ok(x)
}
