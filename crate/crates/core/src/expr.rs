//! Text front end for polynomials.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary ('*' unary)*
//! unary    := '-' unary | power
//! power    := primary ('^' natural)*
//! primary  := integer ('/' positive-integer)? | variable | '(' expr ')'
//! variable := 'x' index ('[' natural (',' natural)* ']')?
//! ```
//!
//! A variable without brackets is `x<j>` with all slot entries zero. The
//! printer in [`crate::poly`] always emits the bracketed form.

use crate::ordering::{DVariable, MultiIndex};
use crate::poly::{DPolynomial, PolyRing};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ParseError at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Var(u32),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (first_line, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let simple = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            i += 1;
            col += 1;
        } else if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            i += 1;
            col += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Int(chars[start..i].iter().collect()),
                line: tl,
                column: tc,
            });
        } else if c == 'x' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start + 1;
            let digits: String = chars[start..i].iter().collect();
            let index = digits
                .parse::<u32>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or(ParseError {
                    line: tl,
                    column: tc,
                    message: "expected a positive indeterminate index after `x`".to_string(),
                })?;
            out.push(Token {
                tok: Tok::Var(index),
                line: tl,
                column: tc,
            });
        } else {
            return Err(ParseError {
                line: tl,
                column: tc,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    ring: &'a Arc<PolyRing>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> ParseError {
        ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(Self::error_at(&t, format!("expected {what}")))
        }
    }

    fn natural(&mut self) -> Result<u32, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(s) => s
                .parse::<u32>()
                .map_err(|_| Self::error_at(&t, "natural number too large")),
            _ => Err(Self::error_at(&t, "expected a natural number")),
        }
    }

    fn expr(&mut self) -> Result<DPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DPolynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.next();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<DPolynomial, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<DPolynomial, ParseError> {
        let mut base = self.primary()?;
        while self.peek().tok == Tok::Caret {
            self.next();
            let e = self.natural()?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<DPolynomial, ParseError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Int(s) => {
                let num = BigInt::from_str(&s).expect("lexer yields digits");
                let den = if self.peek().tok == Tok::Slash {
                    self.next();
                    let dt = self.next();
                    match &dt.tok {
                        Tok::Int(d) => {
                            let d = BigInt::from_str(d).expect("lexer yields digits");
                            if d.is_zero() {
                                return Err(Self::error_at(&dt, "zero denominator"));
                            }
                            d
                        }
                        _ => return Err(Self::error_at(&dt, "expected a denominator")),
                    }
                } else {
                    BigInt::from(1)
                };
                Ok(DPolynomial::constant(self.ring, Rational::new(num, den)))
            }
            Tok::Var(j) => {
                let v = self.variable_tail(j)?;
                DPolynomial::variable(self.ring, v).map_err(|e| Self::error_at(&t, e.to_string()))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(Self::error_at(&t, "expected a number, variable or `(`")),
        }
    }

    fn variable_tail(&mut self, j: u32) -> Result<DVariable, ParseError> {
        if self.peek().tok != Tok::LBracket {
            return Ok(DVariable::base(j, self.ring.slots()));
        }
        self.next();
        let mut entries = vec![self.natural()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            entries.push(self.natural()?);
        }
        self.expect(Tok::RBracket, "`,` or `]`")?;
        Ok(DVariable::new(j, MultiIndex::new(entries)))
    }
}

fn parse_at(ring: &Arc<PolyRing>, text: &str, line: usize) -> Result<DPolynomial, ParseError> {
    let toks = lex(text, line)?;
    let mut p = Parser { toks, pos: 0, ring };
    if p.peek().tok == Tok::End {
        return Err(Parser::error_at(p.peek(), "empty expression"));
    }
    let f = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(Parser::error_at(t, "unexpected trailing input"));
    }
    Ok(f)
}

pub fn parse_polynomial(ring: &Arc<PolyRing>, text: &str) -> Result<DPolynomial, ParseError> {
    parse_at(ring, text, 1)
}

pub fn parse_variable(ring: &Arc<PolyRing>, text: &str) -> Result<DVariable, ParseError> {
    let toks = lex(text, 1)?;
    let mut p = Parser { toks, pos: 0, ring };
    let t = p.next();
    let Tok::Var(j) = t.tok else {
        return Err(Parser::error_at(&t, "expected a variable"));
    };
    let v = p.variable_tail(j)?;
    if p.peek().tok != Tok::End {
        return Err(Parser::error_at(p.peek(), "unexpected trailing input"));
    }
    ring.check_variable(&v)
        .map_err(|e| Parser::error_at(&t, e.to_string()))?;
    Ok(v)
}

/// Lines of a generator file: blank lines and `#` comments are skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        (!line.trim().is_empty()).then_some((k + 1, line))
    })
}

/// One expression per line; positions in errors refer to the file.
pub fn parse_polynomial_list(
    ring: &Arc<PolyRing>,
    text: &str,
) -> Result<Vec<DPolynomial>, ParseError> {
    content_lines(text)
        .map(|(line, body)| parse_at(ring, body, line))
        .collect()
}

/// Largest indeterminate index mentioned in `text` (0 if none).
pub fn scan_max_indeterminate(text: &str) -> Result<u32, ParseError> {
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(lex(&body, 1)?
        .iter()
        .filter_map(|t| match t.tok {
            Tok::Var(j) => Some(j),
            _ => None,
        })
        .max()
        .unwrap_or(0))
}
