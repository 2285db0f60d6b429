//! Univariate rational functions in `w`, normalized by the Euclidean GCD
//! with a monic denominator. These are the exact home of the canonical
//! metric components `g_ii(w)` and of the cross-ratio `t(w)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::poly::rational_to_f64;
use super::{ExactError, MultiPoly, Rational, VarTable};

/// Dense coefficient vector, ascending powers, no trailing zeros.
type Dense = Vec<Rational>;

fn trim(mut v: Dense) -> Dense {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn dense_of(p: &MultiPoly) -> Result<Dense, ExactError> {
    if p.table().len() != 1 {
        return Err(ExactError::NotUnivariate);
    }
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut v = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        v[m.0[0] as usize] = c.clone();
    }
    Ok(trim(v))
}

fn poly_of(v: &Dense, table: &VarTable) -> MultiPoly {
    MultiPoly::from_terms(
        table,
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (vec![e as u32], c.clone())),
    )
    .expect("exponent vectors match table")
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca.clone() * cb.clone();
        }
    }
    trim(out)
}

fn dense_sub(a: &Dense, b: &Dense) -> Dense {
    let mut out = a.clone();
    out.resize(out.len().max(b.len()), Rational::zero());
    for (i, cb) in b.iter().enumerate() {
        out[i] -= cb.clone();
    }
    trim(out)
}

/// Remainder of Euclidean division.
fn dense_rem(a: &Dense, b: &Dense) -> Dense {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead_b = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let dr = r.len() - 1;
        let q = r.last().unwrap().clone() / lead_b.clone();
        let shift = dr - db;
        for (i, cb) in b.iter().enumerate() {
            r[i + shift] -= q.clone() * cb.clone();
        }
        r = trim(r);
        if r.len() > dr {
            break; // defensive: no progress
        }
    }
    r
}

fn to_monic(v: &Dense) -> Dense {
    match v.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = Rational::one() / lead.clone();
            v.iter().map(|c| c.clone() * inv.clone()).collect()
        }
    }
}

/// Monic GCD by the Euclidean algorithm; each remainder is renormalized to
/// monic to keep coefficient growth in check.
fn dense_gcd(a: &Dense, b: &Dense) -> Dense {
    let mut a = to_monic(a);
    let mut b = to_monic(b);
    while !b.is_empty() {
        let r = to_monic(&dense_rem(&a, &b));
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        to_monic(&a)
    }
}

fn dense_div_exact(a: &Dense, b: &Dense) -> Dense {
    if a.is_empty() {
        return Vec::new();
    }
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead_b = b.last().unwrap().clone();
    let mut q = vec![Rational::zero(); a.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let dr = r.len() - 1;
        let c = r.last().unwrap().clone() / lead_b.clone();
        let shift = dr - db;
        q[shift] = c.clone();
        for (i, cb) in b.iter().enumerate() {
            r[i + shift] -= c.clone() * cb.clone();
        }
        r = trim(r);
    }
    debug_assert!(r.is_empty(), "division was not exact");
    trim(q)
}

/// Rational function in `w`: `num/den` with `gcd(num, den) = 1` and a monic
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunW {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunW {
    /// Build and normalize. Errors if `den` is the zero polynomial or either
    /// argument is not univariate in the same single variable table.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ExactError> {
        super::require_same_table(num.table(), den.table())?;
        let table = num.table().clone();
        let n = dense_of(&num)?;
        let d = dense_of(&den)?;
        if d.is_empty() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Self::from_dense(n, d, &table))
    }

    fn from_dense(n: Dense, d: Dense, table: &VarTable) -> Self {
        if n.is_empty() {
            return RatFunW {
                num: MultiPoly::zero(table),
                den: MultiPoly::one(table),
            };
        }
        let g = dense_gcd(&n, &d);
        let (mut n, mut d) = if g.len() > 1 {
            (dense_div_exact(&n, &g), dense_div_exact(&d, &g))
        } else {
            (n, d)
        };
        // Make the denominator monic.
        let lead = d.last().expect("nonzero denominator").clone();
        let inv = Rational::one() / lead;
        for c in n.iter_mut() {
            *c *= inv.clone();
        }
        for c in d.iter_mut() {
            *c *= inv.clone();
        }
        RatFunW {
            num: poly_of(&n, table),
            den: poly_of(&d, table),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Result<Self, ExactError> {
        let one = MultiPoly::one(p.table());
        Self::new(p, one)
    }

    pub fn constant(c: Rational) -> Self {
        let t = VarTable::w();
        RatFunW {
            num: MultiPoly::constant(&t, c),
            den: MultiPoly::one(&t),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn var_w() -> Self {
        let t = VarTable::w();
        RatFunW {
            num: MultiPoly::var(&t, "w").unwrap(),
            den: MultiPoly::one(&t),
        }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(c)` when the function is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Cross-multiplication equality: `a.num*b.den - b.num*a.den == 0`.
    /// No normalization is required of the inputs.
    pub fn equal(a: &RatFunW, b: &RatFunW) -> bool {
        (&(&a.num * &b.den) - &(&b.num * &a.den)).is_zero()
    }

    /// Derivative by the quotient rule, renormalized.
    pub fn diff(&self) -> RatFunW {
        let var = self.num.table().names()[0].clone();
        let dn = self.num.diff(&var).expect("table variable");
        let dd = self.den.diff(&var).expect("table variable");
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        RatFunW::new(num, den).expect("denominator square is nonzero")
    }

    pub fn checked_div(&self, rhs: &RatFunW) -> Result<RatFunW, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        RatFunW::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn eval_rational(&self, w: &Rational) -> Result<Rational, ExactError> {
        let point = [w.clone()];
        let d = self.den.eval_rational(&point)?;
        if d.is_zero() {
            return Err(ExactError::Pole);
        }
        Ok(self.num.eval_rational(&point)? / d)
    }

    pub fn eval_complex(&self, w: Complex64) -> Result<Complex64, ExactError> {
        let point = [w];
        let d = self.den.eval_complex(&point)?;
        let n = self.num.eval_complex(&point)?;
        let v = n / d;
        if d.norm() == 0.0 || !v.is_finite() {
            return Err(ExactError::Pole);
        }
        Ok(v)
    }

    /// Degree pair (num, den); the zero function reports (None, 0).
    pub fn degrees(&self) -> (Option<u32>, u32) {
        (
            self.num.total_degree(),
            self.den.total_degree().unwrap_or(0),
        )
    }
}

impl Add for &RatFunW {
    type Output = RatFunW;
    fn add(self, rhs: &RatFunW) -> RatFunW {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunW::new(num, &self.den * &rhs.den).expect("denominator product is nonzero")
    }
}

impl Sub for &RatFunW {
    type Output = RatFunW;
    fn sub(self, rhs: &RatFunW) -> RatFunW {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatFunW::new(num, &self.den * &rhs.den).expect("denominator product is nonzero")
    }
}

impl Mul for &RatFunW {
    type Output = RatFunW;
    fn mul(self, rhs: &RatFunW) -> RatFunW {
        RatFunW::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("denominator product is nonzero")
    }
}

impl Neg for &RatFunW {
    type Output = RatFunW;
    fn neg(self) -> RatFunW {
        RatFunW {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunW {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Convenience: parse `num` and `den` expressions over `[w]` into a
/// normalized rational function.
pub(crate) fn ratfun_from_exprs(num: &str, den: &str) -> Result<RatFunW, ExactError> {
    let t = VarTable::w();
    RatFunW::new(super::parse_poly(num, &t)?, super::parse_poly(den, &t)?)
}

pub(crate) fn rational_to_c64(c: &Rational) -> Complex64 {
    Complex64::new(rational_to_f64(c), 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat, rat_int};

    fn rf(num: &str, den: &str) -> RatFunW {
        ratfun_from_exprs(num, den).unwrap()
    }

    #[test]
    fn normalization_cancels_and_makes_monic() {
        let f = rf("w^2 - 1", "w - 1");
        assert_eq!(f.num(), &parse_poly("w + 1", &VarTable::w()).unwrap());
        assert_eq!(f.den(), &parse_poly("1", &VarTable::w()).unwrap());
        let g = rf("2*w", "2*w + 2");
        // den made monic: (2w)/(2w+2) = 2w/(2(w+1)) -> num w, den w+1
        assert_eq!(g.den(), &parse_poly("w + 1", &VarTable::w()).unwrap());
        assert_eq!(g.num(), &parse_poly("w", &VarTable::w()).unwrap());
    }

    #[test]
    fn equality_by_cross_multiplication() {
        assert!(RatFunW::equal(&rf("w^2 - 1", "w - 1"), &rf("w + 1", "1")));
        assert!(!RatFunW::equal(&rf("w", "1"), &rf("w + 1", "1")));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            ratfun_from_exprs("w", "0"),
            Err(ExactError::ZeroDenominator)
        ));
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dw [-(w^2-1)/(4(w^2-9))] = 4w/(w^2-9)^2
        let g11 = rf("-(w^2 - 1)", "4*(w^2 - 9)");
        let expect = rf("4*w", "(w^2 - 9)^2");
        assert!(RatFunW::equal(&g11.diff(), &expect));
        assert!(RatFunW::constant(rat(5, 3)).diff().is_zero());
    }

    #[test]
    fn cross_ratio_derivative() {
        // t(w) = (w+1)(w-3)^3 / ((w-1)(w+3)^3); t' = 16w^2(w-3)^2/((w-1)^2(w+3)^4)
        let t = rf("(w + 1)*(w - 3)^3", "(w - 1)*(w + 3)^3");
        let expect = rf("16*w^2*(w - 3)^2", "(w - 1)^2*(w + 3)^4");
        assert!(RatFunW::equal(&t.diff(), &expect));
    }

    #[test]
    fn evaluation_and_poles() {
        let t = rf("(w + 1)*(w - 3)^3", "(w - 1)*(w + 3)^3");
        assert_eq!(t.eval_rational(&rat_int(2)).unwrap(), rat(-3, 125));
        assert!(matches!(
            t.eval_rational(&rat_int(1)),
            Err(ExactError::Pole)
        ));
        let v = t.eval_complex(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v - Complex64::new(-0.024, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn arithmetic_normalizes() {
        let a = rf("1", "w - 1");
        let b = rf("1", "w + 1");
        let s = &a + &b;
        assert!(RatFunW::equal(&s, &rf("2*w", "w^2 - 1")));
        let p = &a * &b;
        assert!(RatFunW::equal(&p, &rf("1", "w^2 - 1")));
        let d = a.checked_div(&b).unwrap();
        assert!(RatFunW::equal(&d, &rf("w + 1", "w - 1")));
        assert!(a.checked_div(&RatFunW::zero()).is_err());
    }
}
