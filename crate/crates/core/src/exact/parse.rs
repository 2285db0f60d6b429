//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (highest precedence first): `^` with a non-negative decimal
//! exponent, unary `-`, `*`, then binary `+`/`-`. Rational literals are
//! written `p/q`; implicit multiplication is not accepted. Positions in
//! errors are 1-based character offsets.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ExactError, MultiPoly, Rational, VarTable};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Eof,
}

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.char_indices().collect(),
            pos: 0,
            text,
        }
    }

    fn char_pos(&self, idx: usize) -> usize {
        // 1-based character position for error messages.
        if idx >= self.chars.len() {
            self.text.chars().count() + 1
        } else {
            idx + 1
        }
    }

    fn next_tok(&mut self) -> Result<(Tok, usize), ExactError> {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
        let at = self.char_pos(self.pos);
        if self.pos >= self.chars.len() {
            return Ok((Tok::Eof, at));
        }
        let c = self.chars[self.pos].1;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                let n: BigInt = s.parse().expect("digit run parses as integer");
                return Ok((Tok::Num(n), self.char_pos(start)));
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].1.is_alphanumeric() || self.chars[self.pos].1 == '_')
                {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                return Ok((Tok::Ident(s), self.char_pos(start)));
            }
            _ => {
                return Err(ExactError::Syntax {
                    pos: at,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        self.pos += 1;
        Ok((tok, at))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    table: &'a VarTable,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.idx]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, ExactError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ExactError> {
        let mut acc = self.factor()?;
        while self.peek().0 == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ExactError> {
        if self.peek().0 == Tok::Minus {
            self.bump();
            return Ok(-&self.factor()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly, ExactError> {
        let base = self.atom()?;
        if self.peek().0 != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (tok, pos) = self.bump();
        let exp = match tok {
            Tok::Num(n) => n,
            Tok::Minus => return Err(ExactError::NegativeExponent { pos }),
            other => {
                return Err(ExactError::Syntax {
                    pos,
                    msg: format!("exponent must be a non-negative integer literal, found {other:?}"),
                })
            }
        };
        let exp: u32 = exp.try_into().map_err(|_| ExactError::Syntax {
            pos,
            msg: "exponent too large".to_string(),
        })?;
        Ok(base.pow(exp))
    }

    fn atom(&mut self) -> Result<MultiPoly, ExactError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(n) => {
                // Optional `/q` makes a rational literal.
                if self.peek().0 == Tok::Slash {
                    self.bump();
                    let (dtok, dpos) = self.bump();
                    let d = match dtok {
                        Tok::Num(d) if !d.is_zero() => d,
                        Tok::Num(_) => {
                            return Err(ExactError::Syntax {
                                pos: dpos,
                                msg: "zero denominator in rational literal".to_string(),
                            })
                        }
                        other => {
                            return Err(ExactError::Syntax {
                                pos: dpos,
                                msg: format!("expected denominator digits, found {other:?}"),
                            })
                        }
                    };
                    Ok(MultiPoly::constant(self.table, Rational::new(n, d)))
                } else {
                    Ok(MultiPoly::constant(self.table, Rational::from_integer(n)))
                }
            }
            Tok::Ident(name) => match self.table.index_of(&name) {
                Some(_) => MultiPoly::var(self.table, &name),
                None => Err(ExactError::UnknownVariable { name, pos }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let (close, cpos) = self.bump();
                if close != Tok::RParen {
                    return Err(ExactError::Syntax {
                        pos: cpos,
                        msg: "expected `)`".to_string(),
                    });
                }
                Ok(inner)
            }
            other => Err(ExactError::Syntax {
                pos,
                msg: format!("expected a number, variable or `(`, found {other:?}"),
            }),
        }
    }
}

/// Parse a polynomial expression over the given variable table.
pub fn parse_poly(text: &str, table: &VarTable) -> Result<MultiPoly, ExactError> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let (tok, pos) = lexer.next_tok()?;
        let done = tok == Tok::Eof;
        toks.push((tok, pos));
        if done {
            break;
        }
    }
    let mut p = Parser {
        toks,
        idx: 0,
        table,
    };
    let poly = p.expr()?;
    let (tok, pos) = p.peek().clone();
    if tok != Tok::Eof {
        return Err(ExactError::Syntax {
            pos,
            msg: format!("unexpected trailing input, found {tok:?}"),
        });
    }
    Ok(poly)
}
