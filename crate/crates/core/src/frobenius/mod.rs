//! The diagonal-metric characterization in exact form, the structural
//! equation for the Egoroff coefficients, trace bookkeeping, and the
//! parallel-transport lift from a trace-k solution to the homogeneity
//! `±sqrt(8k)` coframes.

use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{rat, rational_to_f64, ExactError, MultiPoly, RatFunW, Rational};
use crate::geometry::{cross, max_abs, CanonicalCoframe, Point, TripleField};
use crate::instanton::frames::{cross_ratio_of_point, AnchoredSolution};
use crate::instanton::{cross_ratio_ratfun, dataset, InstantonError, Sign};
use crate::numeric::{integrate_path, NumericError, PathSpec};

#[derive(Debug, Error, Clone)]
pub enum FrobeniusError {
    #[error("metric has a zero component")]
    DegenerateMetric,
    #[error("{0} is not constant")]
    NonConstant(&'static str),
    #[error("cross-ratio must avoid 0 and 1")]
    SingularT,
    #[error("normalization constant must be nonzero")]
    ZeroConstant,
    #[error("trace is zero; no nonzero-homogeneity lift exists")]
    ZeroTrace,
    #[error("could not extract an eigenvector for the cross-product map")]
    EigenvectorFailure,
    #[error("initial data does not sit at the start of the path")]
    StartMismatch,
    #[error("solution evaluator failed at t = {0}")]
    SolutionFailure(Complex64),
    #[error(transparent)]
    Instanton(#[from] InstantonError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

// ---------------------------------------------------------------------------
// Types

/// The Egoroff coefficient triple at a base point of the cross-ratio plane.
#[derive(Debug, Clone, Copy)]
pub struct FrobeniusTriple {
    pub f: [Complex64; 3],
    pub t: Complex64,
}

impl FrobeniusTriple {
    pub fn new(f: [Complex64; 3], t: Complex64) -> Result<Self, FrobeniusError> {
        if f.iter().any(|c| !c.is_finite()) || !t.is_finite() {
            return Err(FrobeniusError::Numeric(NumericError::NonFinite));
        }
        Ok(FrobeniusTriple { f, t })
    }

    /// `k = -(1/2) F . F`.
    pub fn trace(&self) -> Complex64 {
        trace_of_triple(&self.f)
    }
}

/// `k = -(1/2) F . F` for a coefficient triple.
pub fn trace_of_triple(f: &[Complex64; 3]) -> Complex64 {
    -0.5 * (f[0] * f[0] + f[1] * f[1] + f[2] * f[2])
}

/// A diagonal metric in the uniformizing variable, with the cross-ratio
/// attached and the constants it is expected to realize.
#[derive(Debug, Clone)]
pub struct MetricTripleW {
    pub g: [RatFunW; 3],
    pub t_of_w: RatFunW,
    pub c: Rational,
    pub k: Rational,
}

impl MetricTripleW {
    pub fn from_dataset(n: u8) -> Result<Self, FrobeniusError> {
        let ds = dataset(n)?;
        Ok(MetricTripleW {
            g: ds.g_canon.clone(),
            t_of_w: cross_ratio_ratfun().clone(),
            c: ds.c.clone(),
            k: ds.k.clone(),
        })
    }
}

// ---------------------------------------------------------------------------
// The diagonal-metric characterization, exactly

/// Outcome of the exact characterization check.
#[derive(Debug, Clone)]
pub struct Prop22Report {
    pub pass: bool,
    /// The constant `c^2` recovered from the squared identity, when the
    /// ratio is constant at all.
    pub c_squared: Option<Rational>,
    /// Its exact square root when it is a perfect square.
    pub recovered_c: Option<Rational>,
    /// The trace implied by the component sum, when constant.
    pub trace: Option<Rational>,
    /// Nonzero numerator polynomial of the first failed identity.
    pub witness: Option<MultiPoly>,
}

fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(ns.clone() * ns.clone()) == r.numer() && &(ds.clone() * ds.clone()) == r.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

/// Verify the three squared identities
/// `(t g11')^2 = ((1-t) g22')^2 = (t(t-1) g33')^2 = 4 c^2 g11 g22 g33 (t')^2`
/// exactly as rational functions of `w`, together with the equality of the
/// three unsquared left sides up to a consistent sign fixed at `w = 2`, and
/// recover `c` and the trace.
pub fn check_prop22(m: &MetricTripleW) -> Result<Prop22Report, FrobeniusError> {
    if m.g.iter().any(|g| g.is_zero()) {
        return Err(FrobeniusError::DegenerateMetric);
    }
    let t = &m.t_of_w;
    let one = RatFunW::constant(Rational::one());
    let tp = t.diff();
    let lhs = [
        t * &m.g[0].diff(),
        &(&one - t) * &m.g[1].diff(),
        &(t * &(t - &one)) * &m.g[2].diff(),
    ];

    let mut witness: Option<MultiPoly> = None;
    let mut pass = true;

    // Unsquared left sides agree up to one sign, fixed by evaluation at a
    // regular rational point.
    let anchor = rat(2, 1);
    let v0 = lhs[0].eval_rational(&anchor)?;
    for other in &lhs[1..] {
        let vi = other.eval_rational(&anchor)?;
        let diff = if (v0.clone() - vi.clone()).is_zero() {
            &lhs[0] - other
        } else if (v0.clone() + vi).is_zero() {
            &lhs[0] + other
        } else {
            pass = false;
            witness.get_or_insert_with(|| (&lhs[0] - other).num().clone());
            continue;
        };
        if !diff.is_zero() {
            pass = false;
            witness.get_or_insert_with(|| diff.num().clone());
        }
    }

    // Squared identity with the declared constant.
    let ggg = &(&m.g[0] * &m.g[1]) * &m.g[2];
    let c2 = RatFunW::constant(m.c.clone() * m.c.clone() * rat(4, 1));
    let rhs = &(&c2 * &ggg) * &(&tp * &tp);
    let sq0 = &lhs[0] * &lhs[0];
    let sq_diff = &sq0 - &rhs;
    if !sq_diff.is_zero() {
        pass = false;
        witness.get_or_insert_with(|| sq_diff.num().clone());
    }

    // Recover c^2 independently of the declared value.
    let denom = &(&ggg * &(&tp * &tp)) * &RatFunW::constant(rat(4, 1));
    let c_squared = sq0
        .checked_div(&denom)
        .ok()
        .and_then(|ratio| ratio.as_constant());
    let recovered_c = c_squared.as_ref().and_then(exact_sqrt);
    if c_squared.as_ref() != Some(&(m.c.clone() * m.c.clone())) {
        pass = false;
    }

    // Trace from the component sum.
    let sum = &(&m.g[0] + &m.g[1]) + &m.g[2];
    let trace = sum
        .as_constant()
        .map(|s| -(m.c.clone() * m.c.clone() * rat(1, 2)) * s);
    if trace.as_ref() != Some(&m.k) {
        pass = false;
    }

    Ok(Prop22Report {
        pass,
        c_squared,
        recovered_c,
        trace,
        witness,
    })
}

/// Exact trace `k = -(c^2/2)(g11 + g22 + g33)` of a metric triple; the
/// component sum must be constant.
pub fn trace_of_metric(m: &MetricTripleW) -> Result<Rational, FrobeniusError> {
    let sum = &(&m.g[0] + &m.g[1]) + &m.g[2];
    let s = sum
        .as_constant()
        .ok_or(FrobeniusError::NonConstant("metric component sum"))?;
    Ok(-(m.c.clone() * m.c.clone() * rat(1, 2)) * s)
}

// ---------------------------------------------------------------------------
// The structural equation

const SINGULAR_T_RADIUS: f64 = 1e-12;

/// Right side of the structural system:
/// `(f2 f3 / t, f3 f1 / (1 - t), f1 f2 / (t (t - 1)))`.
pub fn structural_field(
    t: Complex64,
    f: &[Complex64; 3],
) -> Result<[Complex64; 3], FrobeniusError> {
    if t.norm() < SINGULAR_T_RADIUS || (t - 1.0).norm() < SINGULAR_T_RADIUS {
        return Err(FrobeniusError::SingularT);
    }
    Ok([
        f[1] * f[2] / t,
        f[2] * f[0] / (1.0 - t),
        f[0] * f[1] / (t * (t - 1.0)),
    ])
}

/// Residual of a candidate derivative triple against the structural system.
pub fn structural_residual(
    f: &FrobeniusTriple,
    df_dt: &[Complex64; 3],
) -> Result<[Complex64; 3], FrobeniusError> {
    let rhs = structural_field(f.t, &f.f)?;
    Ok([df_dt[0] - rhs[0], df_dt[1] - rhs[1], df_dt[2] - rhs[2]])
}

#[derive(Debug, Clone)]
pub struct StructuralPoint {
    pub s: f64,
    pub t: Complex64,
    pub f: [Complex64; 3],
    pub k: Complex64,
}

#[derive(Debug, Clone)]
pub struct StructuralTrajectory {
    pub points: Vec<StructuralPoint>,
    pub max_trace_drift: f64,
}

impl StructuralTrajectory {
    pub fn last(&self) -> &StructuralPoint {
        self.points.last().expect("trajectory is never empty")
    }
}

/// Integrate the structural system from `f0` along a path in the cross-ratio
/// plane, recording the trace at every accepted step.
pub fn integrate_structural(
    f0: &FrobeniusTriple,
    path: &PathSpec,
    tol: f64,
) -> Result<StructuralTrajectory, FrobeniusError> {
    if (f0.t - path.start()).norm() > 1e-12 * (1.0 + path.start().norm()) {
        return Err(FrobeniusError::StartMismatch);
    }
    let traj = integrate_path(
        |t, y| {
            let f = [y[0], y[1], y[2]];
            structural_field(t, &f)
                .map(|d| d.to_vec())
                .map_err(|e| NumericError::FieldFailure(e.to_string()))
        },
        path,
        &f0.f,
        tol,
    )?;
    let k0 = f0.trace();
    let mut max_drift = 0.0_f64;
    let points = traj
        .points
        .into_iter()
        .map(|p| {
            let f = [p.y[0], p.y[1], p.y[2]];
            let k = trace_of_triple(&f);
            max_drift = max_drift.max((k - k0).norm());
            StructuralPoint { s: p.s, t: p.z, f, k }
        })
        .collect();
    Ok(StructuralTrajectory {
        points,
        max_trace_drift: max_drift,
    })
}

// ---------------------------------------------------------------------------
// Solutions as evaluators, and the coframe constructions

/// A solution germ of the structural system, evaluable near its base point.
pub trait StructuralSolution: Send + Sync {
    fn f_at(&self, t: Complex64) -> Option<[Complex64; 3]>;
}

impl StructuralSolution for AnchoredSolution {
    fn f_at(&self, t: Complex64) -> Option<[Complex64; 3]> {
        AnchoredSolution::f_at_t(self, t).ok()
    }
}

/// The homogeneity-0 coframe generated by a solution: coefficients
/// `H = F / c` for a nonzero constant `c`.
pub fn coframe_from_solution(
    sol: Arc<dyn StructuralSolution>,
    c: &Rational,
) -> Result<CanonicalCoframe, FrobeniusError> {
    if c.is_zero() {
        return Err(FrobeniusError::ZeroConstant);
    }
    let inv = 1.0 / rational_to_f64(c);
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let field: TripleField = Arc::new(move |p: &Point| {
        let t = cross_ratio_of_point(p);
        match sol.f_at(t) {
            Some(f) => [f[0] * inv, f[1] * inv, f[2] * inv],
            None => [nan, nan, nan],
        }
    });
    Ok(CanonicalCoframe::new(field))
}

/// One output point of the parallel-transport lift.
#[derive(Debug, Clone)]
pub struct LiftPoint {
    pub s: f64,
    pub t: Complex64,
    pub x: Point,
    pub f: [Complex64; 3],
    pub h: [Complex64; 3],
    /// `|F x H - (m/2) H|` at this point.
    pub c4_residual: f64,
}

#[derive(Debug, Clone)]
pub struct LiftedCoframe {
    pub m: Complex64,
    pub points: Vec<LiftPoint>,
    pub max_c4: f64,
}

/// Eigenvector of `v -> F x v` for the eigenvalue `lambda`, normalized so
/// its largest-magnitude component is 1.
fn cross_map_eigenvector(
    f: &[Complex64; 3],
    lambda: Complex64,
) -> Result<[Complex64; 3], FrobeniusError> {
    // Rows of (F x .) - lambda I.
    let rows = [
        [-lambda, -f[2], f[1]],
        [f[2], -lambda, -f[0]],
        [-f[1], f[0], -lambda],
    ];
    let candidates = [
        cross(&rows[0], &rows[1]),
        cross(&rows[0], &rows[2]),
        cross(&rows[1], &rows[2]),
    ];
    let best = candidates
        .into_iter()
        .max_by(|a, b| max_abs(a).partial_cmp(&max_abs(b)).unwrap())
        .unwrap();
    let scale = max_abs(&best);
    let fscale = f.iter().map(|c| c.norm()).fold(1.0, f64::max);
    if scale < 1e-10 * fscale * fscale {
        return Err(FrobeniusError::EigenvectorFailure);
    }
    let pivot = best
        .iter()
        .copied()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .unwrap();
    Ok([best[0] / pivot, best[1] / pivot, best[2] / pivot])
}

/// Lift a trace-`k` solution to a homogeneity `m = sign * sqrt(8k)` coframe
/// by parallel transport along a path in the cross-ratio plane.
///
/// The coframe coefficients start at `p0` as the eigenvector of the
/// cross-product map for the eigenvalue `m/2` and are propagated by
/// `d H = Omega x H` along the section `x(t) = (x01, x02, x01 + t (x02 -
/// x01))` through `p0`. The solution itself is propagated jointly by the
/// structural system, so the transport needs no branch tracking.
pub fn lift_to_homogeneity(
    sol: &dyn StructuralSolution,
    sign: Sign,
    path: &PathSpec,
    p0: &Point,
    tol: f64,
) -> Result<LiftedCoframe, FrobeniusError> {
    let t0 = path.start();
    if (cross_ratio_of_point(p0) - t0).norm() > 1e-8 * (1.0 + t0.norm()) {
        return Err(FrobeniusError::StartMismatch);
    }
    let f0 = sol.f_at(t0).ok_or(FrobeniusError::SolutionFailure(t0))?;
    let k = trace_of_triple(&f0);
    if k.norm() < 1e-12 {
        return Err(FrobeniusError::ZeroTrace);
    }
    let m = f64::from(sign.m()) * crate::numeric::canonical_sqrt(8.0 * k);
    let h0 = cross_map_eigenvector(&f0, m / 2.0)?;

    let y0 = [f0[0], f0[1], f0[2], h0[0], h0[1], h0[2]];
    let traj = integrate_path(
        |t, y| {
            let f = [y[0], y[1], y[2]];
            let h = [y[3], y[4], y[5]];
            let df = structural_field(t, &f)
                .map_err(|e| NumericError::FieldFailure(e.to_string()))?;
            // Interior product of the special connection with the section
            // tangent: (-f1/(1-t), f2/t, 0), independent of the base pair.
            let omega_t = [
                -f[0] / (1.0 - t),
                f[1] / t,
                Complex64::new(0.0, 0.0),
            ];
            let dh = cross(&omega_t, &h);
            Ok(vec![df[0], df[1], df[2], dh[0], dh[1], dh[2]])
        },
        path,
        &y0,
        tol,
    )?;

    let base = (p0[0], p0[1]);
    let mut max_c4 = 0.0_f64;
    let points: Vec<LiftPoint> = traj
        .points
        .into_iter()
        .map(|pt| {
            let t = pt.z;
            let f = [pt.y[0], pt.y[1], pt.y[2]];
            let h = [pt.y[3], pt.y[4], pt.y[5]];
            let fxh = cross(&f, &h);
            let c4 = max_abs(&[
                fxh[0] - 0.5 * m * h[0],
                fxh[1] - 0.5 * m * h[1],
                fxh[2] - 0.5 * m * h[2],
            ]);
            max_c4 = max_c4.max(c4);
            LiftPoint {
                s: pt.s,
                t,
                x: [base.0, base.1, base.0 + t * (base.1 - base.0)],
                f,
                h,
                c4_residual: c4,
            }
        })
        .collect();
    Ok(LiftedCoframe {
        m,
        points,
        max_c4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn structural_residual_examples() {
        // zero solution
        let f = FrobeniusTriple::new([c(0.0, 0.0); 3], c(2.0, 0.0)).unwrap();
        let r = structural_residual(&f, &[c(0.0, 0.0); 3]).unwrap();
        assert!(max_abs(&r) == 0.0);
        // constant ones at t = 2
        let f = FrobeniusTriple::new([c(1.0, 0.0); 3], c(2.0, 0.0)).unwrap();
        let r = structural_residual(&f, &[c(0.0, 0.0); 3]).unwrap();
        assert!((r[0] - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((r[2] - c(-0.5, 0.0)).norm() < 1e-15);
        // singular base point
        let f = FrobeniusTriple::new([c(1.0, 0.0); 3], c(0.0, 0.0)).unwrap();
        assert!(matches!(
            structural_residual(&f, &[c(0.0, 0.0); 3]),
            Err(FrobeniusError::SingularT)
        ));
    }

    #[test]
    fn exact_solutions_have_tiny_residual() {
        // f_i = (signs) sqrt(g_ii) with derivatives from the exact quotient
        // rule and the implicit derivative of the cross-ratio.
        for n in 0..3u8 {
            let sol = AnchoredSolution::at_recorded_base(n).unwrap();
            let f = sol.base_f();
            let ds = dataset(n).unwrap();
            let w = c(2.0, 0.0);
            let tp = cross_ratio_ratfun().diff().eval_complex(w).unwrap();
            let mut df = [c(0.0, 0.0); 3];
            for i in 0..3 {
                let gp = ds.g_canon[i].diff().eval_complex(w).unwrap();
                df[i] = gp / (2.0 * f[i]) / tp;
            }
            let triple = FrobeniusTriple::new(f, sol.base_t()).unwrap();
            let r = structural_residual(&triple, &df).unwrap();
            assert!(max_abs(&r) < 1e-12, "n={n}: residual {:?}", r);
        }
    }

    #[test]
    fn prop22_passes_for_all_datasets() {
        for n in 0..3u8 {
            let m = MetricTripleW::from_dataset(n).unwrap();
            let rep = check_prop22(&m).unwrap();
            assert!(rep.pass, "n={n}");
            assert_eq!(rep.recovered_c, Some(rat_int(1)));
            assert_eq!(rep.trace, Some(dataset(n).unwrap().k.clone()));
            assert!(rep.witness.is_none());
        }
    }

    #[test]
    fn prop22_detects_perturbation() {
        let mut m = MetricTripleW::from_dataset(0).unwrap();
        m.g[0] = &m.g[0] * &RatFunW::var_w();
        let rep = check_prop22(&m).unwrap();
        assert!(!rep.pass);
        assert!(rep.witness.is_some());
        assert!(!rep.witness.unwrap().is_zero());
    }

    #[test]
    fn trace_values() {
        for (n, num, den) in [(0u8, 1i64, 8i64), (1, 9, 8), (2, 25, 8)] {
            let m = MetricTripleW::from_dataset(n).unwrap();
            assert_eq!(trace_of_metric(&m).unwrap(), rat(num, den));
        }
        assert_eq!(trace_of_triple(&[c(0.0, 0.0); 3]), c(0.0, 0.0));
        // arithmetic at the anchor for n = 1: -1/2 (243/980 - 9/490 - 243/98)
        let g = [rat(243, 980), rat(-9, 490), rat(-243, 98)];
        let sum = g[0].clone() + g[1].clone() + g[2].clone();
        assert_eq!(-(rat(1, 2)) * sum, rat(9, 8));
    }

    #[test]
    fn zero_solution_integrates_to_zero() {
        let path = PathSpec::line(c(-0.024, 0.0), c(-0.05, 0.0));
        let f0 = FrobeniusTriple::new([c(0.0, 0.0); 3], path.start()).unwrap();
        let traj = integrate_structural(&f0, &path, 1e-10).unwrap();
        assert!(max_abs(&traj.last().f) == 0.0);
        assert_eq!(traj.last().k, c(0.0, 0.0));
        assert_eq!(traj.max_trace_drift, 0.0);
    }

    #[test]
    fn start_mismatch_rejected() {
        let path = PathSpec::line(c(-0.024, 0.0), c(-0.05, 0.0));
        let f0 = FrobeniusTriple::new([c(0.0, 0.0); 3], c(0.5, 0.0)).unwrap();
        assert!(matches!(
            integrate_structural(&f0, &path, 1e-10),
            Err(FrobeniusError::StartMismatch)
        ));
    }

    #[test]
    fn coframe_from_solution_reproduces_metric() {
        let sol = Arc::new(AnchoredSolution::at_recorded_base(0).unwrap());
        let cof = coframe_from_solution(sol.clone(), &rat_int(1)).unwrap();
        // at a point with cross-ratio t(2), h_i^2 = g_ii(2)
        let t0 = sol.base_t();
        let p = [c(0.0, 0.0), c(1.0, 0.0), t0];
        let h = cof.h_at(&p).unwrap();
        for (i, want) in [(0usize, 0.15), (1, -0.025), (2, -0.375)] {
            assert!((h[i] * h[i] - c(want, 0.0)).norm() < 1e-12);
        }
        // rescaling by a constant scales the metric by the inverse square
        let cof2 = coframe_from_solution(sol, &rat_int(2)).unwrap();
        let h2 = cof2.h_at(&p).unwrap();
        for i in 0..3 {
            assert!((h2[i] * 2.0 - h[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_normalization_constant_rejected() {
        let sol = Arc::new(AnchoredSolution::at_recorded_base(0).unwrap());
        assert!(matches!(
            coframe_from_solution(sol, &rat_int(0)),
            Err(FrobeniusError::ZeroConstant)
        ));
    }

    #[test]
    fn lift_requires_nonzero_trace() {
        struct ZeroSol;
        impl StructuralSolution for ZeroSol {
            fn f_at(&self, _t: Complex64) -> Option<[Complex64; 3]> {
                Some([Complex64::new(0.0, 0.0); 3])
            }
        }
        let path = PathSpec::line(c(-0.024, 0.0), c(-0.05, 0.0));
        let p0 = [c(0.0, 0.0), c(1.0, 0.0), c(-0.024, 0.0)];
        assert!(matches!(
            lift_to_homogeneity(&ZeroSol, Sign::Plus, &path, &p0, 1e-10),
            Err(FrobeniusError::ZeroTrace)
        ));
    }

    #[test]
    fn eigenvector_satisfies_the_cross_map() {
        let sol = AnchoredSolution::at_recorded_base(0).unwrap();
        let f = sol.base_f();
        for lambda in [c(0.5, 0.0), c(-0.5, 0.0)] {
            let v = cross_map_eigenvector(&f, lambda).unwrap();
            let fxv = cross(&f, &v);
            let res = [
                fxv[0] - lambda * v[0],
                fxv[1] - lambda * v[1],
                fxv[2] - lambda * v[2],
            ];
            assert!(max_abs(&res) < 1e-12);
            assert!((max_abs(&v) - 1.0).abs() < 1e-12);
        }
    }
}
