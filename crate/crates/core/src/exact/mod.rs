//! Exact arithmetic layer: arbitrary-precision rationals, sparse multivariate
//! polynomials over a fixed variable table, univariate rational functions in
//! `w`, a recursive-descent expression parser, and a line-oriented sparse
//! storage format.
//!
//! Everything here is immutable after construction and exact; no floating
//! point enters except through the explicit `eval_complex` entry points.

mod parse;
mod poly;
mod ratfun;
mod sparse;

pub use parse::parse_poly;
pub use poly::{rational_to_f64, Monomial, MultiPoly};
pub use ratfun::RatFunW;
pub use sparse::{parse_sparse, write_sparse};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Arbitrary-precision rational number. Always stored reduced with a
/// positive denominator; zero is 0/1.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Convenience constructor for integers.
pub fn rat_int(num: i64) -> Rational {
    rat(num, 1)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("no variable named `{0}` in table")]
    NoSuchVariable(String),
    #[error("variable tables differ: [{0}] vs [{1}]")]
    TableMismatch(String, String),
    #[error("point has {got} entries, table has {want}")]
    LengthMismatch { want: usize, got: usize },
    #[error("variable `{0}` is not mapped in the substitution")]
    UnmappedVariable(String),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("evaluation at a pole of the denominator")]
    Pole,
    #[error("rational function is not univariate in `w`")]
    NotUnivariate,
    #[error("sparse format: {0}")]
    Sparse(String),
}

/// An ordered table of variable names, fixed for the lifetime of every
/// polynomial built over it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Arc<Vec<String>>,
}

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, ExactError> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().to_string();
            if !seen.insert(n.clone()) {
                return Err(ExactError::DuplicateVariable(n));
            }
            out.push(n);
        }
        Ok(VarTable {
            names: Arc::new(out),
        })
    }

    /// The ambient-coordinate table `[z1, z2, z3, r]`.
    pub fn zr() -> Self {
        Self::new(&["z1", "z2", "z3", "r"]).unwrap()
    }

    /// The canonical-coordinate table `[x1, x2, x3]`.
    pub fn xs() -> Self {
        Self::new(&["x1", "x2", "x3"]).unwrap()
    }

    /// The uniformizing-variable table `[w]`.
    pub fn w() -> Self {
        Self::new(&["w"]).unwrap()
    }

    /// The cross-ratio table `[t]`.
    pub fn t() -> Self {
        Self::new(&["t"]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(","))
    }
}

pub(crate) fn require_same_table(a: &VarTable, b: &VarTable) -> Result<(), ExactError> {
    if a == b {
        Ok(())
    } else {
        Err(ExactError::TableMismatch(a.to_string(), b.to_string()))
    }
}
