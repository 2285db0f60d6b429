//! The Painlevé VI coefficient family attached to the instanton datasets,
//! and a residual evaluator for candidate solutions given as rational
//! functions of the uniformizing variable `w`.
//!
//! Candidates are differentiated exactly in `w` (twice); only the final
//! evaluation is floating point. The chain rule through the implicit w–t
//! relation converts the `w`-derivatives to `t`-derivatives.

use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::exact::{rat, rational_to_f64, ExactError, RatFunW, Rational, VarTable};
use crate::instanton::{cross_ratio_ratfun, Sign};

#[derive(Debug, Error, Clone)]
pub enum PainleveError {
    #[error("critical point of the w-t relation: dt/dw vanishes")]
    CriticalPoint(Complex64),
    #[error("evaluation at a pole")]
    Pole(Complex64),
    #[error("singular configuration: lambda hits 0, 1 or t")]
    SingularConfiguration,
    #[error("cross-ratio must avoid 0 and 1")]
    SingularT,
    #[error("candidate file: {0}")]
    BadCandidateFile(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The coefficient quadruple of the second-order equation, exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PviCoefficients {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    pub n: u32,
    pub sign: Sign,
}

/// Coefficients for instanton number `n` and branch sign:
/// `alpha = ((2n+1) -+ 2)^2 / 8`, `beta = -(2n+1)^2/8`,
/// `gamma = (2n+1)^2/8`, `delta = 1/2 - (2n+1)^2/8`.
pub fn pvi_coefficients(n: u32, sign: Sign) -> PviCoefficients {
    let odd = i64::from(2 * n + 1);
    let shifted = match sign {
        Sign::Plus => odd - 2,
        Sign::Minus => odd + 2,
    };
    let eighth = |v: i64| rat(v, 8);
    PviCoefficients {
        alpha: eighth(shifted * shifted),
        beta: eighth(-odd * odd),
        gamma: eighth(odd * odd),
        delta: rat(1, 2) - eighth(odd * odd),
        n,
        sign,
    }
}

static DT_DW: OnceLock<RatFunW> = OnceLock::new();

/// The exact derivative `dt/dw` of the cross-ratio along the path.
pub fn dt_dw_ratfun() -> &'static RatFunW {
    DT_DW.get_or_init(|| cross_ratio_ratfun().diff())
}

/// `dw/dt` at `w`, through the implicit relation: the reciprocal of the
/// exact `dt/dw`. Errors at critical points (`w = 0`, `w = 3`) and at poles.
pub fn implicit_dw_dt(w: Complex64) -> Result<Complex64, PainleveError> {
    let tp = dt_dw_ratfun()
        .eval_complex(w)
        .map_err(|_| PainleveError::Pole(w))?;
    if tp.norm() < 1e-13 {
        return Err(PainleveError::CriticalPoint(w));
    }
    Ok(1.0 / tp)
}

/// A candidate solution expressed as a rational function of `w`.
#[derive(Debug, Clone)]
pub struct CandidateSolution {
    pub lambda: RatFunW,
}

impl CandidateSolution {
    pub fn new(lambda: RatFunW) -> Self {
        CandidateSolution { lambda }
    }

    /// Parse the candidate file format: a `lambda-candidate v1` header line
    /// followed by two sparse-format blocks over `[w]` (numerator, then
    /// denominator).
    pub fn from_file_text(text: &str) -> Result<Self, PainleveError> {
        let mut lines = text.lines();
        let header = loop {
            match lines.next() {
                Some(l) if l.trim().is_empty() || l.trim_start().starts_with('#') => continue,
                Some(l) => break l.trim().to_string(),
                None => {
                    return Err(PainleveError::BadCandidateFile(
                        "empty candidate file".to_string(),
                    ))
                }
            }
        };
        if header != "lambda-candidate v1" {
            return Err(PainleveError::BadCandidateFile(format!(
                "expected header `lambda-candidate v1`, found `{header}`"
            )));
        }
        let rest: String = lines.collect::<Vec<_>>().join("\n");
        let blocks = crate::exact::parse_sparse(&rest, &VarTable::w())?;
        if blocks.len() != 2 {
            return Err(PainleveError::BadCandidateFile(format!(
                "expected 2 blocks (numerator, denominator), found {}",
                blocks.len()
            )));
        }
        let mut it = blocks.into_iter();
        let num = it.next().unwrap();
        let den = it.next().unwrap();
        Ok(CandidateSolution {
            lambda: RatFunW::new(num, den)?,
        })
    }
}

/// A residual evaluation, reporting the branch data actually used.
#[derive(Debug, Clone, Copy)]
pub struct PviResidual {
    pub value: Complex64,
    /// The `w`-germ on which the candidate was evaluated.
    pub w: Complex64,
    pub t: Complex64,
    pub lambda: Complex64,
    pub dlambda_dt: Complex64,
}

const SINGULAR_RADIUS: f64 = 1e-9;

/// Evaluate the full second-order residual of a candidate at `w`: the second
/// `t`-derivative minus the right side of the equation, with all
/// `w`-derivatives exact and the chain rule through the implicit relation.
pub fn pvi_residual(
    cand: &CandidateSolution,
    coeffs: &PviCoefficients,
    w: Complex64,
) -> Result<PviResidual, PainleveError> {
    let t_fun = cross_ratio_ratfun();
    let t = t_fun.eval_complex(w).map_err(|_| PainleveError::Pole(w))?;
    if t.norm() < SINGULAR_RADIUS || (t - 1.0).norm() < SINGULAR_RADIUS {
        return Err(PainleveError::SingularT);
    }
    let lam = cand
        .lambda
        .eval_complex(w)
        .map_err(|_| PainleveError::Pole(w))?;
    let scale = 1.0 + lam.norm() + t.norm();
    if lam.norm() < SINGULAR_RADIUS * scale
        || (lam - 1.0).norm() < SINGULAR_RADIUS * scale
        || (lam - t).norm() < SINGULAR_RADIUS * scale
    {
        return Err(PainleveError::SingularConfiguration);
    }

    let tp = dt_dw_ratfun()
        .eval_complex(w)
        .map_err(|_| PainleveError::Pole(w))?;
    if tp.norm() < 1e-13 {
        return Err(PainleveError::CriticalPoint(w));
    }
    let tpp = dt_dw_ratfun()
        .diff()
        .eval_complex(w)
        .map_err(|_| PainleveError::Pole(w))?;
    let lp = cand
        .lambda
        .diff()
        .eval_complex(w)
        .map_err(|_| PainleveError::Pole(w))?;
    let lpp = cand
        .lambda
        .diff()
        .diff()
        .eval_complex(w)
        .map_err(|_| PainleveError::Pole(w))?;

    // Chain rule: dl/dt = l'/t', d2l/dt2 = (l'' t' - l' t'') / t'^3.
    let dl_dt = lp / tp;
    let d2l_dt2 = (lpp * tp - lp * tpp) / (tp * tp * tp);

    let value = d2l_dt2 - pvi_rhs(coeffs, t, lam, dl_dt);
    Ok(PviResidual {
        value,
        w,
        t,
        lambda: lam,
        dlambda_dt: dl_dt,
    })
}

/// The right side of the second-order equation at `(t, lambda, dlambda/dt)`.
pub fn pvi_rhs(
    coeffs: &PviCoefficients,
    t: Complex64,
    lam: Complex64,
    dl_dt: Complex64,
) -> Complex64 {
    let alpha = rational_to_f64(&coeffs.alpha);
    let beta = rational_to_f64(&coeffs.beta);
    let gamma = rational_to_f64(&coeffs.gamma);
    let delta = rational_to_f64(&coeffs.delta);
    let half: f64 = 0.5;
    let first = half * (1.0 / lam + 1.0 / (lam - 1.0) + 1.0 / (lam - t)) * dl_dt * dl_dt;
    let second = (1.0 / t + 1.0 / (t - 1.0) + 1.0 / (lam - t)) * dl_dt;
    let bracket = alpha
        + beta * t / (lam * lam)
        + gamma * (t - 1.0) / ((lam - 1.0) * (lam - 1.0))
        + delta * t * (t - 1.0) / ((lam - t) * (lam - t));
    let third = lam * (lam - 1.0) * (lam - t) / (t * t * (t - 1.0) * (t - 1.0)) * bracket;
    first - second + third
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat_int};
    use crate::numeric::solve_w;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coefficient_table_small_n() {
        // frozen values: alpha_+ = (2n-1)^2/8, alpha_- = (2n+3)^2/8
        let table = [
            (0u32, (1, 8), (9, 8), (-1, 8), (1, 8), (3, 8)),
            (1, (1, 8), (25, 8), (-9, 8), (9, 8), (-5, 8)),
            (2, (9, 8), (49, 8), (-25, 8), (25, 8), (-21, 8)),
            (3, (25, 8), (81, 8), (-49, 8), (49, 8), (-45, 8)),
            (4, (49, 8), (121, 8), (-81, 8), (81, 8), (-77, 8)),
        ];
        for (n, ap, am, b, g, d) in table {
            let plus = pvi_coefficients(n, Sign::Plus);
            let minus = pvi_coefficients(n, Sign::Minus);
            assert_eq!(plus.alpha, rat(ap.0, ap.1), "n={n} alpha+");
            assert_eq!(minus.alpha, rat(am.0, am.1), "n={n} alpha-");
            for co in [&plus, &minus] {
                assert_eq!(co.beta, rat(b.0, b.1), "n={n} beta");
                assert_eq!(co.gamma, rat(g.0, g.1), "n={n} gamma");
                assert_eq!(co.delta, rat(d.0, d.1), "n={n} delta");
                // identities that hold for every n
                assert_eq!(co.beta.clone() + co.gamma.clone(), rat_int(0));
                assert_eq!(
                    co.delta.clone() - rat(1, 2) + co.gamma.clone(),
                    rat_int(0)
                );
            }
        }
    }

    #[test]
    fn implicit_derivative_values() {
        // dt/dw = 16 w^2 (w-3)^2 / ((w-1)^2 (w+3)^4); at w=2 this is 64/625
        let v = implicit_dw_dt(c(2.0, 0.0)).unwrap();
        assert!((v - c(625.0 / 64.0, 0.0)).norm() < 1e-12);
        assert!(matches!(
            implicit_dw_dt(c(0.0, 0.0)),
            Err(PainleveError::CriticalPoint(_))
        ));
        assert!(matches!(
            implicit_dw_dt(c(3.0, 0.0)),
            Err(PainleveError::CriticalPoint(_))
        ));
        assert!(matches!(
            implicit_dw_dt(c(1.0, 0.0)),
            Err(PainleveError::Pole(_))
        ));
    }

    #[test]
    fn constant_candidate_residual_is_minus_rhs() {
        let cand = CandidateSolution::new(RatFunW::constant(rat_int(2)));
        let coeffs = pvi_coefficients(0, Sign::Plus);
        let w = c(2.0, 0.0);
        let r = pvi_residual(&cand, &coeffs, w).unwrap();
        // dl/dt = 0, so the residual is minus the bracket part of the rhs
        let rhs = pvi_rhs(&coeffs, r.t, c(2.0, 0.0), c(0.0, 0.0));
        assert!((r.value + rhs).norm() < 1e-12);
        assert!(r.dlambda_dt.norm() == 0.0);
        // cross-check with a finite-difference dl/dt on the same expression
        let fd = {
            let eps = 1e-6;
            let lam = |t: Complex64| -> Complex64 {
                let wv = solve_w(t, Some(w)).unwrap();
                cand.lambda.eval_complex(wv).unwrap()
            };
            (lam(r.t + eps) - lam(r.t - eps)) / (2.0 * eps)
        };
        let rhs_fd = pvi_rhs(&coeffs, r.t, r.lambda, fd);
        assert!((r.value + rhs_fd).norm() < 1e-8);
    }

    #[test]
    fn chain_rule_matches_finite_differences() {
        // a generic rational candidate
        let wt = VarTable::w();
        let lambda = RatFunW::new(
            parse_poly("w^2 + 3*w - 1", &wt).unwrap(),
            parse_poly("w + 5", &wt).unwrap(),
        )
        .unwrap();
        let cand = CandidateSolution::new(lambda);
        let coeffs = pvi_coefficients(1, Sign::Minus);
        let seeds = [
            c(2.0, 0.0),
            c(1.7, 0.3),
            c(2.3, -0.4),
            c(-0.5, 1.4),
            c(0.8, -1.2),
            c(-1.6, 0.9),
            c(2.2, 1.1),
            c(-2.1, -1.3),
        ];
        for w in seeds {
            let r = match pvi_residual(&cand, &coeffs, w) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let eps = 1e-6 * (1.0 + r.t.norm());
            let lam_at = |t: Complex64| -> Complex64 {
                let wv = solve_w(t, Some(w)).unwrap();
                cand.lambda.eval_complex(wv).unwrap()
            };
            let fd = (lam_at(r.t + eps) - lam_at(r.t - eps)) / (2.0 * eps);
            let rel = (fd - r.dlambda_dt).norm() / (1.0 + r.dlambda_dt.norm());
            assert!(rel < 1e-7, "w={w}: fd {fd} vs exact {}", r.dlambda_dt);
        }
    }

    #[test]
    fn branch_round_trip_is_consistent() {
        let wt = VarTable::w();
        let cand = CandidateSolution::new(
            RatFunW::new(
                parse_poly("w^3 - 2*w", &wt).unwrap(),
                parse_poly("w^2 + 7", &wt).unwrap(),
            )
            .unwrap(),
        );
        let coeffs = pvi_coefficients(0, Sign::Minus);
        let w0 = c(1.9, 0.4);
        let r0 = pvi_residual(&cand, &coeffs, w0).unwrap();
        // round-trip the germ through t and back to w
        let w1 = solve_w(r0.t, Some(w0)).unwrap();
        let r1 = pvi_residual(&cand, &coeffs, w1).unwrap();
        assert!((r0.value - r1.value).norm() < 1e-9);
        assert!((r0.w - r1.w).norm() < 1e-9);
    }

    #[test]
    fn singular_configurations_are_rejected() {
        let coeffs = pvi_coefficients(0, Sign::Plus);
        // lambda == t identically: lambda(w) = t(w)
        let cand = CandidateSolution::new(cross_ratio_ratfun().clone());
        assert!(matches!(
            pvi_residual(&cand, &coeffs, c(2.0, 0.0)),
            Err(PainleveError::SingularConfiguration)
        ));
        // pole of the candidate
        let wt = VarTable::w();
        let cand = CandidateSolution::new(
            RatFunW::new(
                parse_poly("1", &wt).unwrap(),
                parse_poly("w - 2", &wt).unwrap(),
            )
            .unwrap(),
        );
        assert!(matches!(
            pvi_residual(&cand, &coeffs, c(2.0, 0.0)),
            Err(PainleveError::Pole(_))
        ));
    }

    #[test]
    fn candidate_file_round_trip() {
        let text = "# sample candidate\nlambda-candidate v1\n# numerator\n1/1 2\n-2/1 0\n\n# denominator\n1/1 1\n3/1 0\n";
        let cand = CandidateSolution::from_file_text(text).unwrap();
        let wt = VarTable::w();
        let want = RatFunW::new(
            parse_poly("w^2 - 2", &wt).unwrap(),
            parse_poly("w + 3", &wt).unwrap(),
        )
        .unwrap();
        assert!(RatFunW::equal(&cand.lambda, &want));
        assert!(CandidateSolution::from_file_text("nope v9\n1 0\n\n1 0\n").is_err());
        assert!(CandidateSolution::from_file_text("lambda-candidate v1\n1 0\n").is_err());
    }
}
