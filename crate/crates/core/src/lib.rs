//! Exact and numeric verification of a family of three-dimensional semisimple
//! Frobenius manifolds built over a quadric hypersurface in C^4.
//!
//! The library is organized in layers:
//! - [`exact`]: arbitrary-precision rationals, sparse multivariate polynomials,
//!   univariate rational functions in `w`, and a text parser for polynomial
//!   expressions.
//! - [`numeric`]: complex floating-point kernel — polynomial root finding,
//!   branch-tracked solution of the quartic w–t relation, finite differences,
//!   and adaptive ODE integration along paths in the complex plane.
//! - [`instanton`]: the embedded datasets (one per instanton number
//!   n = 0, 1, 2) with the hypersurface scaffolding, the polynomial path, the
//!   canonical metrics, and the homogeneity ±1 companion metrics.
//! - [`geometry`]: three-dimensional moving-frame calculus with cross-product
//!   connection forms — torsion, curvature, the four Frobenius-coframe
//!   conditions, and numeric Riemann/Lie-derivative oracles.
//! - [`frobenius`]: the diagonal-metric characterization, the structural
//!   equation for the Egoroff coefficients, trace, and the parallel-transport
//!   lift to nonzero homogeneity.
//! - [`painleve`]: the Painlevé VI coefficient family and a residual evaluator
//!   for candidate solutions parametrized by `w`.
//! - [`report`] / [`verify`]: machine-readable verification reports and the
//!   suite runners behind the CLI.

pub mod exact;
pub mod frobenius;
pub mod geometry;
pub mod instanton;
pub mod numeric;
pub mod painleve;
pub mod report;
pub mod verify;
