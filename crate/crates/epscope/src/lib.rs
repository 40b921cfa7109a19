//! Spectral analysis of a semi-infinite tight-binding chain coupled to an
//! endpoint impurity, built around the branch points (exceptional points) of
//! its discrete spectrum.
//!
//! The chain has nearest-neighbor hopping −1/2 (which fixes the energy scale;
//! the band is [−1, 1]) and an impurity level ε_d attached to site 1 with
//! coupling −g/√2. Eliminating the chain reduces the eigenproblem to the
//! scalar dispersion equation
//!
//! ```text
//! z − ε_d = Σ(z),     Σ_I(z) = g²(z − √(z² − 1)),   Σ_II(z) = g²(z + √(z² − 1)),
//! ```
//!
//! whose two solutions are known in closed form together with their effective
//! wave numbers, state classification (bound / anti-bound / resonance /
//! anti-resonance), discriminant, and the locations ε̄_± = ±√(1 − 2g²) where
//! the pair coalesces. Around those coalescence points the crate provides
//! fractional-power (Puiseux) eigenvalue expansions, contour-integral winding
//! periods, adiabatic encirclement with eigenvalue tracking, solution/EP
//! counting formulas for the general quadratic-dispersion setting, and the
//! critical-scaling observables of the resonance onset (decay width,
//! pseudo-gap, correlation phase).
//!
//! Everything is a pure function of its inputs; all routines are safe to call
//! concurrently.

pub mod counting;
pub mod eplocator;
pub mod expansion;
pub mod model;
pub mod qpt;
pub mod spectrum;
pub mod topology;

pub use counting::{EffectiveHamiltonian2x2, SystemShape, WPolynomial, WRoot};
pub use eplocator::{Discriminant, EpLocations, EpRecord, PrototypeSelfEnergy, SelfEnergy};
pub use expansion::{PuiseuxSeries, SeriesValue};
pub use model::{FiniteChain, ModelParams, RiemannSheet, Sign};
pub use qpt::{CriticalExponents, CriticalSide, QptObservables};
pub use spectrum::{SpectralPair, SpectralPoint, StateLabel, SweepRow, Thresholds};
pub use topology::{ContourSpec, Cycle, Permutation};

use thiserror::Error;

/// Errors shared across the crate. Each operation documents which variants
/// it can produce.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Coupling at (or beyond) g = 1/√2, where 1 − 2g² changes sign and the
    /// two-solution closed forms degenerate.
    #[error("degenerate coupling: |1 - 2g^2| vanishes (g at or beyond 1/sqrt(2))")]
    DegenerateCoupling,
    /// Evaluation too close to a band edge z = ±1, where √(z² − 1) is not
    /// differentiable.
    #[error("branch-point singularity: z too close to a band edge +-1")]
    BranchPointSingularity,
    /// Operation defined only for the chain model proper (F = 1/2).
    #[error("operation requires the prototype end-site weight F = 1/2")]
    NotPrototype,
    /// Operation defined only for real impurity energy.
    #[error("operation requires a real impurity energy")]
    ComplexImpurity,
    /// Iterative routine failed to converge.
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    /// Derivative requested exactly at an eigenvalue coalescence.
    #[error("eigenvalue derivative diverges at the exceptional point")]
    AtExceptionalPoint,
    /// Parameters outside the window ε̄₋ < ε_d < ε̄₊ (with ε_d ≠ 0) where the
    /// resonance pair exists.
    #[error("parameters outside the resonance window")]
    OutsideResonanceWindow,
    /// Parameters outside the window required by the observable.
    #[error("parameters outside the validity window of this observable")]
    OutsideWindow,
    /// Fit input does not span enough decades (or straddles the coalescence
    /// point).
    #[error("samples span too little of the scaling window for a stable fit")]
    InsufficientSpan,
    /// Least-squares system condition estimate exceeded 1e12.
    #[error("ill-conditioned fit system")]
    IllConditioned,
    /// Contour violates its validity invariants (too large, or touching an
    /// obstruction).
    #[error("contour radius reaches an obstruction (band edge or eigenvalue)")]
    ContourTooLarge,
    /// Contour integral did not land on an integer winding.
    #[error("winding number residual {residual} exceeds 0.1")]
    NonIntegerWinding { residual: f64 },
    /// Eigenvalue tracks came too close to assign unambiguously.
    #[error("eigenvalue tracking ambiguous at step {step}")]
    TrackingAmbiguity { step: usize },
    /// No exceptional point exists for the requested parameters (g = 0).
    #[error("no exceptional point at zero coupling")]
    NoExceptionalPoint,
    /// Polynomial input of effective degree zero.
    #[error("polynomial has effective degree zero")]
    DegreeZero,
    /// A documented precondition was violated.
    #[error("domain error: {0}")]
    Domain(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
