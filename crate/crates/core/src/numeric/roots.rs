//! Durand–Kerner root finding and branch-tracked solution of the quartic
//! relation between the uniformizing variable `w` and the cross-ratio `t`.

use num_complex::Complex64;
use num_traits::Zero;

use super::{NumericError, PathSpec};

const DEFAULT_MAX_ITER: usize = 200;

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * z + c)
}

fn horner_deriv(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::zero();
    for (i, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c * (i as f64);
    }
    acc
}

/// All roots of the polynomial `coeffs[0] + coeffs[1] z + ... + coeffs[n] z^n`
/// by the Durand–Kerner iteration with deterministic initial guesses (scaled
/// roots of unity offset by 0.4 + 0.9i), Newton-polished.
///
/// Each returned root satisfies `|p(r)| / (1 + |p'(r)| |r|) < tol`. Roots are
/// sorted by real part, then imaginary part.
pub fn poly_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>, NumericError> {
    poly_roots_with(coeffs, tol, DEFAULT_MAX_ITER)
}

pub fn poly_roots_with(
    coeffs: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Complex64>, NumericError> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(NumericError::NonFinite);
    }
    let degree = coeffs.len().saturating_sub(1);
    if degree < 1 {
        return Err(NumericError::DegreeTooLow);
    }
    let lead = coeffs[degree];
    if lead.norm() == 0.0 {
        return Err(NumericError::ZeroLeadingCoefficient);
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();

    // Cauchy-style bound on root magnitude for the initial circle.
    let scale = 1.0
        + monic[..degree]
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
    let offset = Complex64::new(0.4, 0.9);
    let mut xs: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (degree as f64);
            scale * Complex64::new(angle.cos(), angle.sin()) + offset
        })
        .collect();

    let mut converged = false;
    for _ in 0..max_iter {
        let mut max_delta = 0.0_f64;
        for k in 0..degree {
            let xk = xs[k];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &xj) in xs.iter().enumerate() {
                if j != k {
                    denom *= xk - xj;
                }
            }
            if denom.norm() == 0.0 {
                // Perturb coincident iterates deterministically.
                xs[k] += Complex64::new(1e-6, 1e-6);
                max_delta = f64::MAX;
                continue;
            }
            let delta = horner(&monic, xk) / denom;
            xs[k] = xk - delta;
            max_delta = max_delta.max(delta.norm());
        }
        if max_delta < 1e-14 * scale {
            converged = true;
            break;
        }
    }

    // Newton polish.
    for x in xs.iter_mut() {
        for _ in 0..3 {
            let p = horner(&monic, *x);
            let dp = horner_deriv(&monic, *x);
            if dp.norm() == 0.0 {
                break;
            }
            *x -= p / dp;
        }
    }

    let acceptable = |x: Complex64| {
        let p = horner(coeffs, x);
        let dp = horner_deriv(coeffs, x);
        p.norm() / (1.0 + dp.norm() * x.norm()) < tol
    };
    if !converged || !xs.iter().all(|&x| acceptable(x)) {
        return Err(NumericError::NoConvergence {
            max_iter,
            best: xs,
        });
    }
    xs.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(xs)
}

/// Ascending coefficients of the quartic in `w` whose roots map to the given
/// cross-ratio: `(w-1)(w+3)^3 t - (w+1)(w-3)^3 = 0`, expanded as
/// `(t-1) w^4 + 8(t+1) w^3 + 18(t-1) w^2 - 27(t-1)`.
pub fn quartic_for_cross_ratio(t: Complex64) -> [Complex64; 5] {
    let one = Complex64::new(1.0, 0.0);
    [
        -27.0 * (t - one),
        Complex64::zero(),
        18.0 * (t - one),
        8.0 * (t + one),
        t - one,
    ]
}

/// Forward map: the cross-ratio value attached to `w`. Poles at `w = 1` and
/// `w = -3`.
pub fn cross_ratio_of_w(w: Complex64) -> Result<Complex64, NumericError> {
    let den = (w - 1.0) * (w + 3.0).powu(3);
    if den.norm() == 0.0 {
        return Err(NumericError::PoleAt(w));
    }
    let v = (w + 1.0) * (w - 3.0).powu(3) / den;
    if !v.is_finite() {
        return Err(NumericError::PoleAt(w));
    }
    Ok(v)
}

fn newton_polish_quartic(t: Complex64, mut w: Complex64) -> Complex64 {
    let coeffs = quartic_for_cross_ratio(t);
    for _ in 0..3 {
        let p = horner(&coeffs, w);
        let dp = horner_deriv(&coeffs, w);
        if dp.norm() == 0.0 {
            break;
        }
        w -= p / dp;
    }
    w
}

const SINGULAR_T_RADIUS: f64 = 1e-12;
const BRANCH_AMBIGUITY_REL: f64 = 1e-9;

/// One root `w` of the quartic for cross-ratio `t`.
///
/// With a `branch_hint` the root nearest the hint is returned (continuation
/// semantics); if the two nearest roots are equidistant from the hint within
/// a relative tolerance the call fails and the caller must refine its path.
/// Without a hint the deterministic first root is returned.
pub fn solve_w(t: Complex64, branch_hint: Option<Complex64>) -> Result<Complex64, NumericError> {
    if !t.is_finite() {
        return Err(NumericError::NonFinite);
    }
    if t.norm() < SINGULAR_T_RADIUS || (t - 1.0).norm() < SINGULAR_T_RADIUS {
        return Err(NumericError::SingularCrossRatio);
    }
    let roots = poly_roots(&quartic_for_cross_ratio(t), 1e-10)?;
    let w = match branch_hint {
        None => roots[0],
        Some(hint) => {
            let mut by_dist: Vec<(f64, Complex64)> =
                roots.iter().map(|&r| ((r - hint).norm(), r)).collect();
            by_dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let (d1, r1) = by_dist[0];
            let (d2, r2) = by_dist[1];
            if d2 - d1 < BRANCH_AMBIGUITY_REL * d2.max(1.0) {
                return Err(NumericError::AmbiguousBranch {
                    first: r1,
                    second: r2,
                });
            }
            r1
        }
    };
    Ok(newton_polish_quartic(t, w))
}

/// Continue the branch `w(t)` from `w_start` along a piecewise-linear path in
/// the `t`-plane. Steps that report an ambiguous branch are bisected, up to
/// `max_depth` levels. Returns the `(t, w)` samples actually used, endpoints
/// of every segment included.
pub fn track_w(
    path: &PathSpec,
    w_start: Complex64,
    max_depth: usize,
) -> Result<Vec<(Complex64, Complex64)>, NumericError> {
    let mut out = vec![(path.waypoints()[0], w_start)];
    let mut w = w_start;
    for seg in path.segments() {
        // Bisect adaptively: pop (a, b); try to extend from w(a) to b.
        let mut stack = vec![(seg.0, seg.1, 0usize)];
        while let Some((a, b, depth)) = stack.pop() {
            match solve_w(b, Some(w)) {
                Ok(wb) => {
                    w = wb;
                    out.push((b, w));
                }
                Err(NumericError::AmbiguousBranch { .. }) => {
                    if depth >= max_depth {
                        return Err(NumericError::BranchRefinementExhausted(max_depth));
                    }
                    let mid = (a + b) / 2.0;
                    stack.push((mid, b, depth + 1));
                    stack.push((a, mid, depth + 1));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}
