//! Line-oriented sparse polynomial storage.
//!
//! One term per line: `num/den e1 e2 ... ek` with one exponent per table
//! variable. Lines starting with `#` are comments; a blank line terminates
//! the current block, so a file may hold several polynomials in sequence.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExactError, Monomial, MultiPoly, Rational, VarTable};

/// Parse every block of a sparse file, in order.
pub fn parse_sparse(text: &str, table: &VarTable) -> Result<Vec<MultiPoly>, ExactError> {
    let mut blocks = Vec::new();
    let mut current: Option<MultiPoly> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            if let Some(p) = current.take() {
                blocks.push(p);
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let coeff_txt = fields.next().expect("non-empty line has a first field");
        let coeff = parse_coeff(coeff_txt)
            .map_err(|msg| ExactError::Sparse(format!("line {}: {}", lineno + 1, msg)))?;
        let exps: Vec<u32> = fields
            .map(|f| {
                f.parse::<u32>().map_err(|_| {
                    ExactError::Sparse(format!(
                        "line {}: bad exponent `{}`",
                        lineno + 1,
                        f
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        if exps.len() != table.len() {
            return Err(ExactError::Sparse(format!(
                "line {}: expected {} exponents, found {}",
                lineno + 1,
                table.len(),
                exps.len()
            )));
        }
        let poly = current.get_or_insert_with(|| MultiPoly::zero(table));
        poly.add_term(Monomial(exps), coeff);
    }
    if let Some(p) = current.take() {
        blocks.push(p);
    }
    Ok(blocks)
}

fn parse_coeff(txt: &str) -> Result<Rational, String> {
    let (num_txt, den_txt) = match txt.split_once('/') {
        Some((n, d)) => (n, d),
        None => (txt, "1"),
    };
    let num: BigInt = num_txt
        .parse()
        .map_err(|_| format!("bad numerator `{num_txt}`"))?;
    let den: BigInt = den_txt
        .parse()
        .map_err(|_| format!("bad denominator `{den_txt}`"))?;
    if den.is_zero() {
        return Err("zero denominator".to_string());
    }
    Ok(Rational::new(num, den))
}

/// Canonical sparse text for one polynomial: terms in descending graded-lex
/// order, coefficients always written `num/den`.
pub fn write_sparse(p: &MultiPoly) -> String {
    let mut out = String::new();
    let terms: Vec<_> = p.terms().collect();
    if terms.is_empty() {
        out.push_str("0/1");
        for _ in 0..p.table().len() {
            out.push_str(" 0");
        }
        out.push('\n');
        return out;
    }
    for (m, c) in terms.into_iter().rev() {
        out.push_str(&format!("{}/{}", c.numer(), c.denom()));
        for e in &m.0 {
            out.push_str(&format!(" {e}"));
        }
        out.push('\n');
    }
    out
}

#[allow(dead_code)]
fn is_one(c: &Rational) -> bool {
    c.is_one()
}
