//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms are keyed by exponent vectors in a fixed [`VarTable`] and ordered
//! graded-lexicographically, which makes printing and hashing deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{require_same_table, ExactError, Rational, VarTable};

/// Exponent vector; entry count always equals the table size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, idx: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// Graded lexicographic order: total degree first, then lexicographic on the
/// exponent vector.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over [`Rational`] coefficients.
///
/// Invariants: no stored zero coefficients; every exponent vector has exactly
/// `table.len()` entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    table: VarTable,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(table: &VarTable) -> Self {
        MultiPoly {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &VarTable, c: Rational) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(table.len()), c);
        }
        p
    }

    pub fn one(table: &VarTable) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn var(table: &VarTable, name: &str) -> Result<Self, ExactError> {
        let idx = table
            .index_of(name)
            .ok_or_else(|| ExactError::NoSuchVariable(name.to_string()))?;
        let mut p = Self::zero(table);
        p.terms
            .insert(Monomial::var(table.len(), idx), Rational::one());
        Ok(p)
    }

    pub fn from_terms<I>(table: &VarTable, terms: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(table);
        for (exps, coeff) in terms {
            if exps.len() != table.len() {
                return Err(ExactError::LengthMismatch {
                    want: table.len(),
                    got: exps.len(),
                });
            }
            p.add_term(Monomial(exps), coeff);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// `Some(l)` if every term has total degree `l` (the zero polynomial is
    /// homogeneous of every degree and reports `None`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.total_degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::constant(self.table.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Formal partial derivative with respect to the named variable.
    pub fn diff(&self, var: &str) -> Result<MultiPoly, ExactError> {
        let idx = self
            .table
            .index_of(var)
            .ok_or_else(|| ExactError::NoSuchVariable(var.to_string()))?;
        let mut out = Self::zero(&self.table);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] = e - 1;
            out.add_term(Monomial(exps), c.clone() * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut result = Self::one(&self.table);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        result
    }

    fn eval_with<T, F>(&self, point: &[T], lift: F) -> Result<T, ExactError>
    where
        T: Clone + Zero + One + Mul<Output = T> + Add<Output = T>,
        F: Fn(&Rational) -> T,
    {
        if point.len() != self.table.len() {
            return Err(ExactError::LengthMismatch {
                want: self.table.len(),
                got: point.len(),
            });
        }
        // Cache powers of each coordinate up to its maximal exponent.
        let mut powers: Vec<Vec<T>> = Vec::with_capacity(point.len());
        for (v, coord) in point.iter().enumerate() {
            let max_e = self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0) as usize;
            let mut col = Vec::with_capacity(max_e + 1);
            col.push(T::one());
            for e in 1..=max_e {
                let prev = col[e - 1].clone();
                col.push(prev * coord.clone());
            }
            powers.push(col);
        }
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut term = lift(c);
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term * powers[v][e as usize].clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational, ExactError> {
        self.eval_with(point, |c| c.clone())
    }

    /// Floating evaluation at a complex point.
    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64, ExactError> {
        self.eval_with(point, |c| Complex64::new(rational_to_f64(c), 0.0))
    }

    /// Composition: replace every variable occurring in `self` by its image.
    /// All images must live in one common table, which becomes the result's
    /// table.
    pub fn substitute(
        &self,
        images: &BTreeMap<String, MultiPoly>,
    ) -> Result<MultiPoly, ExactError> {
        let occurring: Vec<usize> = (0..self.table.len())
            .filter(|&v| self.terms.keys().any(|m| m.0[v] > 0))
            .collect();
        let target = match images.values().next() {
            Some(img) => img.table().clone(),
            None => {
                // Nothing to substitute; a constant maps to itself.
                if occurring.is_empty() {
                    return Ok(self.clone());
                }
                return Err(ExactError::UnmappedVariable(
                    self.table.names()[occurring[0]].clone(),
                ));
            }
        };
        for img in images.values() {
            require_same_table(&target, img.table())?;
        }
        let mut image_of: Vec<Option<&MultiPoly>> = vec![None; self.table.len()];
        for &v in &occurring {
            let name = &self.table.names()[v];
            image_of[v] = Some(
                images
                    .get(name)
                    .ok_or_else(|| ExactError::UnmappedVariable(name.clone()))?,
            );
        }
        // Power cache per variable, built incrementally.
        let mut powers: Vec<Vec<MultiPoly>> = (0..self.table.len())
            .map(|_| vec![MultiPoly::one(&target)])
            .collect();
        let mut out = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(&target, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = image_of[v].expect("occurring variable has an image");
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap() * img;
                    powers[v].push(next);
                }
                term = &term * &powers[v][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    fn fmt_term(f: &mut fmt::Formatter<'_>, table: &VarTable, m: &Monomial, c: &Rational) -> fmt::Result {
        let mag = c.abs();
        let mut parts: Vec<String> = Vec::new();
        if !mag.is_one() || m.total_degree() == 0 {
            parts.push(format_rational(&mag));
        }
        for (v, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(table.names()[v].clone()),
                _ => parts.push(format!("{}^{}", table.names()[v], e)),
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

fn format_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Nearest double to an exact rational (NaN if out of range).
pub fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for MultiPoly {
    /// Prints in descending graded-lex order; the output re-parses to the
    /// same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            Self::fmt_term(f, &self.table, m, c)?;
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        require_same_table(&self.table, &rhs.table).expect("polynomial tables must match");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        require_same_table(&self.table, &rhs.table).expect("polynomial tables must match");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.table);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        require_same_table(&self.table, &rhs.table).expect("polynomial tables must match");
        let mut out = MultiPoly::zero(&self.table);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl Mul<&Rational> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.table);
        if rhs.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.clone() * rhs.clone());
        }
        out
    }
}
