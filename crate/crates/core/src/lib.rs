//! Graded calculus on finite-order jet bundles of the trivial bundle
//! `ℝⁿ × ℝᵐ → ℝⁿ`.
//!
//! The crate provides an exact polynomial algebra in jet coordinates
//! ([`jet`]), the bigraded exterior algebras of forms and multivector fields
//! ([`exterior`]), the vertical and horizontal differentials
//! ([`differentials`]), graded endomorphisms, derived brackets, the vertical
//! Schouten–Nijenhuis bracket and the Poisson–Leibniz bracket ([`brackets`]),
//! and the covariant Hamiltonian field equations built from them
//! ([`hamiltonian`]). [`frontend`] holds the text grammar, renderers and
//! configuration format.
//!
//! All types are generic over a [`Scalar`]; the aliases below fix the exact
//! rational instantiation used everywhere in the tools and tests.

pub mod brackets;
pub mod differentials;
pub mod error;
pub mod exterior;
pub mod frontend;
pub mod hamiltonian;
pub mod jet;
pub mod sample;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
pub use exterior::{Blade, Slot};
pub use jet::{Generator, JetContext, Monomial, MultiIndex};
pub use scalar::{Rational, Scalar};

pub type Expr = jet::Expr<Rational>;
pub type Form = exterior::Form<Rational>;
pub type Multivector = exterior::Multivector<Rational>;
pub type Metric = exterior::Metric<Rational>;
pub type Endo = brackets::Endo<Rational>;
pub type PoissonMultivector = brackets::PoissonMultivector<Rational>;
pub type HamiltonianProblem = hamiltonian::HamiltonianProblem<Rational>;
pub type PdeSystem = hamiltonian::PdeSystem<Rational>;

/// Floating-point instantiations, for numerical exploration only.
pub mod float {
    pub type Expr = crate::jet::Expr<f64>;
    pub type Form = crate::exterior::Form<f64>;
    pub type Multivector = crate::exterior::Multivector<f64>;
    pub type Metric = crate::exterior::Metric<f64>;
}
