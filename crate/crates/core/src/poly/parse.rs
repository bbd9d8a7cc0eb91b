//! Text syntax for polynomials, e.g. `3/2*x^2*y - (z - y)^2`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*      // '/' only by a nonzero constant
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at column {column}")]
pub struct ParseError {
    pub message: String,
    /// 1-based character column within the parsed text.
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Token::Int(digits.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Token::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            other => {
                return Err(ParseError {
                    message: format!("unexpected character '{other}'"),
                    column: col,
                })
            }
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, S> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    vars: &'a [S],
    end_column: usize,
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_column)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            message: message.into(),
            column: self.column(),
        })
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let col = self.column();
                    let divisor = self.unary()?;
                    let c = divisor.constant_term();
                    if !divisor.is_constant() || c.is_zero() {
                        return Err(ParseError {
                            message: "division only by a nonzero constant".into(),
                            column: col,
                        });
                    }
                    acc = acc.scale(&(BigRational::from_integer(1.into()) / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Int(e)) => {
                    let e: u32 = match e.try_into() {
                        Ok(e) => e,
                        Err(_) => return self.error("exponent too large"),
                    };
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => self.error("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(
                    self.nvars(),
                    BigRational::from_integer(n),
                ))
            }
            Some(Token::Ident(name)) => match self.vars.iter().position(|v| v.as_ref() == name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.nvars(), i))
                }
                None => self.error(format!("unknown identifier '{name}'")),
            },
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.error("expected a number, variable or '('"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses `text` as a polynomial in the declared variables, in order.
pub fn parse_polynomial<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Polynomial, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        vars,
        end_column: text.chars().count() + 1,
    };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return parser.error("unexpected trailing input");
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{integer, rational};

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn parses_fractions_and_powers() {
        let p = parse_polynomial("3/2*x^2*y - z", &XYZ).unwrap();
        let x = Polynomial::var(3, 0);
        let y = Polynomial::var(3, 1);
        let z = Polynomial::var(3, 2);
        assert_eq!(p, &(&x.pow(2) * &y).scale(&rational(3, 2)) - &z);
        let q = parse_polynomial("z - (y - x^2)^2", &XYZ).unwrap();
        assert_eq!(q, &z - &(&y - &x.pow(2)).pow(2));
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_polynomial("x+z^2", &XYZ).unwrap();
        let b = parse_polynomial("  x  +  z ^ 2 ", &XYZ).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            parse_polynomial("-(-7)", &XYZ).unwrap(),
            Polynomial::constant(3, integer(7))
        );
    }

    #[test]
    fn rejects_unknown_identifiers() {
        let err = parse_polynomial("x + w", &XYZ).unwrap_err();
        assert!(err.message.contains("unknown identifier 'w'"));
        assert_eq!(err.column, 5);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_polynomial("x +", &XYZ).is_err());
        assert!(parse_polynomial("(x + y", &XYZ).is_err());
        assert!(parse_polynomial("x / y", &XYZ).is_err());
        assert!(parse_polynomial("x / 0", &XYZ).is_err());
        assert!(parse_polynomial("x ^ y", &XYZ).is_err());
        assert!(parse_polynomial("x y", &XYZ).is_err());
        assert!(parse_polynomial("x $ y", &XYZ).is_err());
    }
}
