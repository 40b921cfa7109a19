//! The chain-with-impurity model: parameters, the two-sheeted self-energy
//! Σ(z) = g²(z ∓ √(z² − 1)), the z ↔ k maps, and a finite-chain matrix that
//! serves as a brute-force oracle for the closed-form spectrum.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

/// Tolerance below which z counts as sitting on a band edge ±1.
pub const BRANCH_POINT_TOL: f64 = 1e-12;

/// Model parameters: impurity energy ε_d (complex values are allowed and are
/// used for encircling loops), coupling g ≥ 0, and the end-site weight F of
/// the reduced two-site eigenproblem. F = 1/2 is the semi-infinite chain;
/// other values enter only the general counting formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub eps_d: Complex64,
    pub g: f64,
    pub f: f64,
}

impl ModelParams {
    /// Real impurity energy, prototype weight F = 1/2.
    pub fn new(eps_d: f64, g: f64) -> Self {
        Self::complex(Complex64::new(eps_d, 0.0), g)
    }

    /// Complex impurity energy, prototype weight F = 1/2.
    pub fn complex(eps_d: Complex64, g: f64) -> Self {
        assert!(g >= 0.0, "coupling g must be nonnegative");
        ModelParams { eps_d, g, f: 0.5 }
    }

    /// Generalized end-site weight F.
    pub fn with_f(eps_d: Complex64, g: f64, f: f64) -> Self {
        assert!(g >= 0.0, "coupling g must be nonnegative");
        ModelParams { eps_d, g, f }
    }

    /// True when F = 1/2 to within 1e-14.
    pub fn is_prototype(&self) -> bool {
        (self.f - 0.5).abs() < 1e-14
    }

    pub fn require_prototype(&self) -> Result<()> {
        if self.is_prototype() {
            Ok(())
        } else {
            Err(Error::NotPrototype)
        }
    }

    pub fn require_real_eps_d(&self) -> Result<f64> {
        if self.eps_d.im == 0.0 {
            Ok(self.eps_d.re)
        } else {
            Err(Error::ComplexImpurity)
        }
    }

    /// The discriminant factor f₁ = 1 − 2g².
    pub fn f1(&self) -> f64 {
        1.0 - 2.0 * self.g * self.g
    }

    /// The discriminant factor f₂ = λ = ε_d² − (1 − 2g²), with the imaginary
    /// part canonicalized to +0 so that real parameters take the principal
    /// (upper-edge) square root downstream.
    pub fn lambda(&self) -> Complex64 {
        canonical_im(self.eps_d * self.eps_d - self.f1())
    }
}

/// Replace a signed-zero imaginary part by +0.0 so principal roots of real
/// negative quantities land on the upper edge of the cut deterministically.
pub(crate) fn canonical_im(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// Riemann sheet of the resolvent. Bound states live on the first sheet
/// (Σ_I → 0 at infinity); anti-bound states, resonances and anti-resonances
/// on the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RiemannSheet {
    First,
    Second,
}

impl RiemannSheet {
    /// −1 for the first sheet, +1 for the second: Σ = g²(z + sign·√(z²−1)).
    pub(crate) fn root_sign(self) -> f64 {
        match self {
            RiemannSheet::First => -1.0,
            RiemannSheet::Second => 1.0,
        }
    }

    pub fn other(self) -> Self {
        match self {
            RiemannSheet::First => RiemannSheet::Second,
            RiemannSheet::Second => RiemannSheet::First,
        }
    }
}

/// A ± selector: formula branch of the eigenvalue pair, sign of a wave-number
/// branch, side of an exceptional-point pair, or the root-sign q in the
/// center condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Unperturbed chain dispersion ε_k = −cos k (k ∈ [0, π] covers the band
/// [−1, 1]; complex k analytically continues it).
pub fn dispersion(k: Complex64) -> Complex64 {
    -k.cos()
}

/// √(z² − 1) with the branch cut exactly on the real segment [−1, 1]:
/// positive real for real z > 1, negative real for real z < −1 (odd under
/// z → −z), continuous everywhere off the cut. Real cut-interior inputs
/// resolve to the limit from Im z → 0⁺, i.e. +i√(1 − z²).
pub fn branch_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        let x = z.re;
        return if x >= 1.0 {
            Complex64::new((x * x - 1.0).sqrt(), 0.0)
        } else if x <= -1.0 {
            Complex64::new(-(x * x - 1.0).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (1.0 - x * x).sqrt())
        };
    }
    // Product of principal roots: the cuts of the two factors cancel on
    // (−∞, −1] and survive only on [−1, 1].
    (z - 1.0).sqrt() * (z + 1.0).sqrt()
}

/// Self-energy of the impurity level on the requested sheet:
/// Σ_I(z) = g²(z − √(z² − 1)), which decays as g²/(2z) at infinity, and
/// Σ_II(z) = g²(z + √(z² − 1)). The two obey Σ_I Σ_II = g⁴.
pub fn self_energy(z: Complex64, sheet: RiemannSheet, g: f64) -> Complex64 {
    let g2 = g * g;
    g2 * (z + sheet.root_sign() * branch_sqrt(z))
}

/// dΣ/dz on the requested sheet: g²(1 ∓ z/√(z² − 1)).
///
/// Errors with `BranchPointSingularity` within 1e-12 of a band edge.
pub fn self_energy_derivative(z: Complex64, sheet: RiemannSheet, g: f64) -> Result<Complex64> {
    if (z - 1.0).norm() < BRANCH_POINT_TOL || (z + 1.0).norm() < BRANCH_POINT_TOL {
        return Err(Error::BranchPointSingularity);
    }
    let g2 = g * g;
    Ok(g2 * (1.0 + sheet.root_sign() * z / branch_sqrt(z)))
}

/// Effective wave number for an energy z: a solution k of −cos k = z
/// (accurate to ~1e−15), with `branch` selecting the sign of Im k.
/// `Sign::Plus` gives the spatially bounded representative (Im k ≥ 0, first
/// sheet), `Sign::Minus` the growing one. Real parts land in [0, π] for the
/// states of the chain; anti-bound wave numbers pin to a band edge 0 or π.
pub fn k_of_z(z: Complex64, branch: Sign) -> Complex64 {
    // e^{ik} = 1/w for w = −z ∓ √(z² − 1); the two w are reciprocal, so the
    // larger is always well conditioned and the smaller is its exact inverse.
    let z = canonical_im(z);
    let root = branch_sqrt(z);
    let (a, b) = (-z - root, -z + root);
    let big = if a.norm() >= b.norm() { a } else { b };
    let w = match branch {
        Sign::Plus => big,       // |w| ≥ 1 ⇒ Im k ≥ 0 (bounded profile)
        Sign::Minus => big.inv(),
    };
    let mut k = Complex64::i() * w.ln();
    // −cos is even and 2π-periodic: fold Re k = −π onto +π.
    if k.re <= -PI + 1e-9 {
        k += Complex64::new(2.0 * PI, 0.0);
    }
    Complex64::new(
        if k.re == 0.0 { 0.0 } else { k.re },
        if k.im == 0.0 { 0.0 } else { k.im },
    )
}

/// Finite chain of N sites plus the impurity, as a symmetric tridiagonal
/// (N+1)×(N+1) matrix: diagonal (ε_d, 0, …, 0), first off-diagonal entry
/// −g/√2, then −1/2 along the chain. Its top eigenvalue converges to the
/// closed-form bound state, which makes it a brute-force oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteChain {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

/// Build the finite-chain matrix. Requires N ≥ 2, real ε_d, F = 1/2.
pub fn finite_chain_matrix(n: usize, params: &ModelParams) -> Result<FiniteChain> {
    params.require_prototype()?;
    let eps_d = params.require_real_eps_d()?;
    if n < 2 {
        return Err(Error::Domain("finite chain requires at least 2 sites"));
    }
    let mut diagonal = vec![0.0; n + 1];
    diagonal[0] = eps_d;
    let mut off_diagonal = vec![-0.5; n];
    off_diagonal[0] = -params.g / 2.0_f64.sqrt();
    Ok(FiniteChain {
        diagonal,
        off_diagonal,
    })
}

impl FiniteChain {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    /// Dense copy, mostly for inspection and interop.
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diagonal[i];
            if i + 1 < n {
                m[i][i + 1] = self.off_diagonal[i];
                m[i + 1][i] = self.off_diagonal[i];
            }
        }
        m
    }

    /// Number of eigenvalues strictly below x, from the signs of the LDLᵀ
    /// pivots (Sturm sequence).
    pub fn sturm_count(&self, x: f64) -> usize {
        let n = self.dim();
        let mut count = 0usize;
        let mut q = self.diagonal[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let q_safe = if q.abs() < 1e-300 {
                if q >= 0.0 {
                    1e-300
                } else {
                    -1e-300
                }
            } else {
                q
            };
            let e = self.off_diagonal[i - 1];
            q = (self.diagonal[i] - x) - e * e / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::MAX;
        let mut hi = f64::MIN;
        for i in 0..n {
            let left = if i > 0 {
                self.off_diagonal[i - 1].abs()
            } else {
                0.0
            };
            let right = if i < n - 1 {
                self.off_diagonal[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo - 1.0, hi + 1.0)
    }

    /// k-th smallest eigenvalue (0-based) by Sturm bisection, deterministic
    /// to machine width.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut a, mut b) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (b - a) < 2.0 * f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
            if self.sturm_count(mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }

    /// Largest eigenvalue.
    pub fn top_eigenvalue(&self) -> f64 {
        self.eigenvalue(self.dim() - 1)
    }

    /// All eigenvalues in ascending order. O(N² log(1/ε)); fine for the
    /// oracle sizes used here.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.eigenvalue(k)).collect()
    }
}

/// Check the bulk chain recursion: with ψ(x) = C e^{ikx}, C = ψ(1)e^{−ik},
/// every interior site must satisfy −½(ψ(x−1) + ψ(x+1)) = ε_k ψ(x) with
/// ε_k = −cos k. Returns the maximum stencil-relative residual over
/// x ∈ [2, x_max]; the identity holds by construction, so the result stays
/// below 1e−12 for any k (growing or decaying profiles alike, thanks to the
/// per-stencil normalization).
pub fn verify_chain_recursion(k: Complex64, x_max: usize) -> Result<f64> {
    if x_max < 3 {
        return Err(Error::Domain("recursion check needs x_max >= 3"));
    }
    let eps_k = dispersion(k);
    let psi = |x: usize| (Complex64::i() * k * (x as f64 - 1.0)).exp(); // ψ(1) = 1
    let mut worst: f64 = 0.0;
    for x in 2..=x_max {
        let (pm, p0, pp) = (psi(x - 1), psi(x), psi(x + 1));
        let lhs = -0.5 * (pm + pp);
        let scale = pm.norm().max(p0.norm()).max(pp.norm()).max(1e-300);
        worst = worst.max((lhs - eps_k * p0).norm() / scale);
    }
    Ok(worst)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen reference digits
mod tests {
    use super::*;

    const SQRT3: f64 = 1.7320508075688772;
    // Frozen closed-form references for g = 0.67 (40-digit arithmetic).
    const Z_MINUS_10: f64 = 1.2304979093931587;
    const Z_CENTER_PLUS: f64 = 1.7238717913560946;
    const K_MINUS_10_IM: f64 = 0.66655835327015151;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn branch_sqrt_reference_points() {
        assert!((branch_sqrt(c(2.0, 0.0)) - c(SQRT3, 0.0)).norm() < 1e-15);
        assert!((branch_sqrt(c(1.0, 0.0))).norm() == 0.0);
        assert!((branch_sqrt(c(-2.0, 0.0)) - c(-SQRT3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn branch_sqrt_cut_resolves_to_upper_edge() {
        let on_cut = branch_sqrt(c(0.5, 0.0));
        let above = branch_sqrt(c(0.5, 1e-14));
        assert!((on_cut - c(0.0, 0.75_f64.sqrt())).norm() < 1e-15);
        assert!((on_cut - above).norm() < 1e-12);
        // negative-zero imaginary part resolves the same way
        let neg_zero = branch_sqrt(c(0.5, -0.0));
        assert_eq!(on_cut, neg_zero);
    }

    #[test]
    fn branch_sqrt_continuous_across_negative_axis() {
        // no cut on (−∞, −1): the two edges must agree
        let up = branch_sqrt(c(-3.0, 1e-12));
        let dn = branch_sqrt(c(-3.0, -1e-12));
        assert!((up - dn).norm() < 1e-10, "cut leaked onto (-inf,-1)");
    }

    #[test]
    fn branch_sqrt_is_odd() {
        for &z in &[c(2.5, 0.7), c(-0.3, 1.9), c(0.1, -4.0), c(12.0, 3.0)] {
            assert!(
                (branch_sqrt(-z) + branch_sqrt(z)).norm() < 1e-13 * branch_sqrt(z).norm().max(1.0)
            );
        }
    }

    #[test]
    fn self_energy_reference_points() {
        let s = self_energy(c(2.0, 0.0), RiemannSheet::First, 1.0);
        assert!((s - c(2.0 - SQRT3, 0.0)).norm() < 1e-15);
        assert_eq!(
            self_energy(c(0.3, 1.7), RiemannSheet::Second, 0.0),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn self_energy_sheet_product_is_g4() {
        let g = 0.83f64;
        let g4 = g.powi(4);
        for &z in &[c(2.0, 0.1), c(-1.4, -0.4), c(0.0, 2.0), c(37.0, -11.0)] {
            let prod = self_energy(z, RiemannSheet::First, g) * self_energy(z, RiemannSheet::Second, g);
            assert!(
                (prod - c(g4, 0.0)).norm() < 1e-12 * g4,
                "sheet product broke at z={z}"
            );
        }
    }

    #[test]
    fn self_energy_decays_on_first_sheet() {
        let g = 0.9;
        for &z in &[c(10.0, 0.0), c(0.0, 25.0), c(-40.0, 13.0)] {
            let bound = 2.0 * g * g / z.norm();
            assert!(self_energy(z, RiemannSheet::First, g).norm() <= bound);
        }
    }

    #[test]
    fn self_energy_derivative_reference_points() {
        let d = self_energy_derivative(c(2.0, 0.0), RiemannSheet::First, 1.0).unwrap();
        assert!((d - c(1.0 - 2.0 / SQRT3, 0.0)).norm() < 1e-15);
        let zero = self_energy_derivative(c(5.0, 1.0), RiemannSheet::Second, 0.0).unwrap();
        assert_eq!(zero, c(0.0, 0.0));
        assert_eq!(
            self_energy_derivative(c(1.0, 0.0), RiemannSheet::First, 0.5),
            Err(Error::BranchPointSingularity)
        );
    }

    #[test]
    fn center_condition_holds_on_second_sheet() {
        // At the coalescence center z̄_c⁺ the slope condition Σ′ = 1 holds.
        let d = self_energy_derivative(c(Z_CENTER_PLUS, 0.0), RiemannSheet::Second, 0.67).unwrap();
        assert!((d - c(1.0, 0.0)).norm() < 1e-12, "got {d}");
        let d = self_energy_derivative(c(-Z_CENTER_PLUS, 0.0), RiemannSheet::Second, 0.67).unwrap();
        assert!((d - c(1.0, 0.0)).norm() < 1e-12, "mirror center: {d}");
    }

    #[test]
    fn derivative_matches_central_difference() {
        let g = 0.71;
        let h = 1e-6;
        for &z in &[c(1.9, 0.4), c(-2.2, -0.3), c(0.2, 1.4)] {
            for sheet in [RiemannSheet::First, RiemannSheet::Second] {
                let exact = self_energy_derivative(z, sheet, g).unwrap();
                let fd = (self_energy(z + h, sheet, g) - self_energy(z - h, sheet, g)) / (2.0 * h);
                assert!((exact - fd).norm() < 1e-7, "z={z} sheet={sheet:?}");
            }
        }
    }

    #[test]
    fn k_of_z_band_limits() {
        assert!((k_of_z(c(-1.0, 0.0), Sign::Plus)).norm() < 1e-15);
        assert!((k_of_z(c(1.0, 0.0), Sign::Plus) - c(PI, 0.0)).norm() < 1e-15);
        assert!((k_of_z(c(1.0, 0.0), Sign::Minus) - c(PI, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn k_of_z_bound_state_has_positive_im() {
        let k = k_of_z(c(Z_MINUS_10, 0.0), Sign::Plus);
        assert!((k - c(PI, K_MINUS_10_IM)).norm() < 1e-13, "k = {k}");
        assert!((dispersion(k) - c(Z_MINUS_10, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn k_of_z_round_trips() {
        for &z in &[
            c(3.7, 0.0),
            c(-15.0, 0.0),
            c(0.3, -1.2),
            c(-0.8, 0.9),
            c(900.0, 10.0),
        ] {
            for sign in [Sign::Plus, Sign::Minus] {
                let k = k_of_z(z, sign);
                assert!(
                    (dispersion(k) - z).norm() <= 1e-12 * z.norm().max(1.0),
                    "round trip failed at z={z}"
                );
            }
        }
    }

    #[test]
    fn finite_chain_small_matrix_entries() {
        let chain = finite_chain_matrix(2, &ModelParams::new(0.5, 0.67)).unwrap();
        let m = chain.dense();
        let coupling = -0.67 / 2.0_f64.sqrt();
        assert_eq!(m.len(), 3);
        assert_eq!(m[0][0], 0.5);
        assert_eq!(m[0][1], coupling);
        assert_eq!(m[1][0], coupling);
        assert_eq!(m[0][2], 0.0);
        assert_eq!(m[1][2], -0.5);
        assert_eq!(m[2][2], 0.0);
    }

    #[test]
    fn finite_chain_zero_coupling_decouples_impurity() {
        let chain = finite_chain_matrix(2, &ModelParams::new(0.5, 0.0)).unwrap();
        assert_eq!(chain.off_diagonal()[0], 0.0);
        // impurity eigenvalue survives untouched
        let evals = chain.eigenvalues();
        assert!(evals.iter().any(|&e| (e - 0.5).abs() < 1e-12));
    }

    #[test]
    fn finite_chain_rejects_bad_input() {
        assert_eq!(
            finite_chain_matrix(1, &ModelParams::new(0.5, 0.67)),
            Err(Error::Domain("finite chain requires at least 2 sites"))
        );
        assert!(matches!(
            finite_chain_matrix(10, &ModelParams::complex(c(0.5, 0.1), 0.67)),
            Err(Error::ComplexImpurity)
        ));
        assert!(matches!(
            finite_chain_matrix(10, &ModelParams::with_f(c(0.5, 0.0), 0.67, 0.3)),
            Err(Error::NotPrototype)
        ));
    }

    #[test]
    fn finite_chain_top_eigenvalue_matches_bound_state() {
        let chain = finite_chain_matrix(2000, &ModelParams::new(1.0, 0.67)).unwrap();
        let top = chain.top_eigenvalue();
        assert!(
            (top - Z_MINUS_10).abs() < 1e-10,
            "top eigenvalue {top} vs closed form {Z_MINUS_10}"
        );
    }

    #[test]
    fn sturm_count_brackets_spectrum() {
        let chain = finite_chain_matrix(50, &ModelParams::new(1.0, 0.67)).unwrap();
        assert_eq!(chain.sturm_count(-2.0), 0);
        assert_eq!(chain.sturm_count(2.0), chain.dim());
        // band states all inside (−1, 1) plus one bound state above
        assert_eq!(chain.sturm_count(1.0 + 1e-9), chain.dim() - 1);
    }

    #[test]
    fn chain_recursion_is_identity_by_construction() {
        assert!(verify_chain_recursion(c(PI / 2.0, 0.0), 10).unwrap() < 1e-12);
        assert!(verify_chain_recursion(c(0.3, 0.2), 50).unwrap() < 1e-12);
        // eigenvalue-consistent wave number of the bound state at (1.0, 0.67)
        assert!(verify_chain_recursion(c(PI, K_MINUS_10_IM), 100).unwrap() < 1e-12);
        // growing profile stays finite thanks to stencil normalization
        assert!(verify_chain_recursion(c(1.1, -0.8), 200).unwrap() < 1e-12);
        assert!(verify_chain_recursion(c(0.1, 0.1), 2).is_err());
    }
}
