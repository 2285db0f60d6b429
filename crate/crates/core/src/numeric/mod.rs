//! Complex floating-point kernel: Durand–Kerner root finding, the quartic
//! w–t relation with branch tracking, piecewise-linear complex paths,
//! adaptive Runge–Kutta integration, and finite-difference helpers.

pub mod ode;
pub mod path;
pub mod roots;

pub use num_complex::Complex64;
pub use ode::{integrate_path, Trajectory, TrajectoryPoint};
pub use path::PathSpec;
pub use roots::{cross_ratio_of_w, poly_roots, quartic_for_cross_ratio, solve_w, track_w};

use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum NumericError {
    #[error("polynomial degree must be at least 1")]
    DegreeTooLow,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("non-finite value at an API boundary")]
    NonFinite,
    #[error("root finder did not converge within {max_iter} iterations")]
    NoConvergence {
        max_iter: usize,
        /// Best iterate reached before giving up.
        best: Vec<Complex64>,
    },
    #[error("cross-ratio must avoid 0 and 1")]
    SingularCrossRatio,
    #[error("evaluation at a pole")]
    PoleAt(Complex64),
    #[error("ambiguous branch: roots {first} and {second} are nearly equidistant from the hint")]
    AmbiguousBranch { first: Complex64, second: Complex64 },
    #[error("branch tracking failed even after {0} subdivisions")]
    BranchRefinementExhausted(usize),
    #[error("path needs at least two waypoints, consecutive ones distinct")]
    BadPath,
    #[error("step size underflow at s = {s}")]
    StepUnderflow {
        s: f64,
        last_z: Complex64,
        last_y: Vec<Complex64>,
    },
    #[error("ODE field evaluation failed: {0}")]
    FieldFailure(String),
}

/// Canonical complex square root: the branch with argument in (-pi/2, pi/2],
/// made insensitive to the sign of a zero imaginary part.
pub fn canonical_sqrt(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0).sqrt()
}

/// Central difference with one Richardson extrapolation level, along the
/// real direction of a holomorphic function's argument.
pub fn diff_richardson<F>(f: F, z: Complex64, h: f64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let d1 = (f(z + h) - f(z - h)) / (2.0 * h);
    let d2 = (f(z + h / 2.0) - f(z - h / 2.0)) / h;
    (4.0 * d2 - d1) / 3.0
}

/// Plain central difference.
pub fn diff_central<F>(f: F, z: Complex64, h: f64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    (f(z + h) - f(z - h)) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sqrt_ignores_negative_zero() {
        let a = canonical_sqrt(Complex64::new(-0.375, 0.0));
        let b = canonical_sqrt(Complex64::new(-0.375, -0.0));
        assert_eq!(a, b);
        assert!(a.im > 0.0);
    }

    #[test]
    fn richardson_beats_plain_central() {
        let f = |z: Complex64| z.exp();
        let z = Complex64::new(0.3, 0.2);
        let exact = z.exp();
        let plain = (diff_central(f, z, 1e-4) - exact).norm();
        let rich = (diff_richardson(f, z, 1e-4) - exact).norm();
        assert!(rich < plain);
        assert!(rich < 1e-11);
    }
}
