//! Text front end for ODEs and coefficient expressions.
//!
//! Grammar, loosest to tightest: `+ -`, `* /`, unary `-`, `^` (right
//! associative, integer-literal exponents). Multiplication is always explicit.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{RationalFunction, Symbol, Q};
use crate::jet::JetPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: expected {}", expected.join(" or "))]
    SyntaxError {
        column: usize,
        expected: Vec<String>,
    },
    #[error("derivative in denominator at column {column}")]
    DerivativeInDenominator { column: usize },
    #[error("unknown symbol `{name}` at column {column}")]
    UnknownSymbol { name: String, column: usize },
    #[error("division by zero at column {column}")]
    DivisionByZero { column: usize },
    #[error("equation is identically zero")]
    ZeroEquation,
}

impl ParseError {
    pub fn column(&self) -> Option<usize> {
        match self {
            ParseError::SyntaxError { column, .. }
            | ParseError::DerivativeInDenominator { column }
            | ParseError::UnknownSymbol { column, .. }
            | ParseError::DivisionByZero { column } => Some(*column),
            ParseError::ZeroEquation => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Deriv(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Equals,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
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
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let mut primes = 0;
            while i < chars.len() && chars[i] == '\'' {
                primes += 1;
                i += 1;
            }
            if primes == 0 {
                out.push((Tok::Ident(s), col));
            } else if s == "y" && primes <= 4 {
                out.push((Tok::Deriv(primes), col));
            } else {
                return Err(ParseError::SyntaxError {
                    column: col,
                    expected: vec!["`y'`, `y''`, `y'''` or `y''''`".into()],
                });
            }
        } else {
            return Err(ParseError::SyntaxError {
                column: col,
                expected: vec!["an expression".into()],
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    params: &'a [Symbol],
    allow_derivatives: bool,
}

const OPERAND: &str = "number, symbol, derivative or `(`";

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::SyntaxError {
            column: self.column(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<JetPolynomial, ParseError> {
        let mut lhs = self.prefix()?;
        loop {
            let (bp, op) = match self.peek() {
                Tok::Plus => (10, Tok::Plus),
                Tok::Minus => (10, Tok::Minus),
                Tok::Star => (20, Tok::Star),
                Tok::Slash => (20, Tok::Slash),
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            self.bump();
            let col = self.column();
            let rhs = self.expr(bp + 1)?;
            lhs = match op {
                Tok::Plus => &lhs + &rhs,
                Tok::Minus => &lhs - &rhs,
                Tok::Star => &lhs * &rhs,
                _ => {
                    if rhs.order() > 0 || rhs.terms().any(|(m, _)| *m != [0; 4]) {
                        return Err(ParseError::DerivativeInDenominator { column: col });
                    }
                    let d = rhs.coeff(&[0; 4]);
                    let inv = d
                        .recip()
                        .map_err(|_| ParseError::DivisionByZero { column: col })?;
                    lhs.scale(&inv)
                }
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<JetPolynomial, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let v = self.expr(30)?;
            return Ok(-&v);
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let n = self.exponent()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let col = self.column();
        let n = match self.bump().0 {
            Tok::Int(n) => n,
            _ => {
                self.pos -= 1;
                return Err(ParseError::SyntaxError {
                    column: col,
                    expected: vec!["integer exponent".into()],
                });
            }
        };
        let mut n = n.to_u32().ok_or(ParseError::SyntaxError {
            column: col,
            expected: vec!["smaller exponent".into()],
        })?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            n = n.checked_pow(e).ok_or(ParseError::SyntaxError {
                column: col,
                expected: vec!["smaller exponent".into()],
            })?;
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<JetPolynomial, ParseError> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(JetPolynomial::constant(RationalFunction::from_q(
                    Q::from_integer(n),
                )))
            }
            Tok::Ident(name) => {
                self.bump();
                let s = match name.as_str() {
                    "x" => Symbol::X,
                    "y" => Symbol::Y,
                    _ => match Symbol::lookup(&name).filter(|s| self.params.contains(s)) {
                        Some(s) => s,
                        None => return Err(ParseError::UnknownSymbol { name, column: col }),
                    },
                };
                Ok(JetPolynomial::constant(RationalFunction::var(s)))
            }
            Tok::Deriv(k) => {
                if !self.allow_derivatives {
                    return Err(self.unexpected(&["expression without derivatives"]));
                }
                self.bump();
                Ok(JetPolynomial::u(k))
            }
            Tok::LParen => {
                self.bump();
                let v = self.expr(0)?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected(&["`)`", "operator"]));
                }
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected(&[OPERAND])),
        }
    }
}

fn declare(parameters: &[&str]) -> Vec<Symbol> {
    parameters.iter().map(|p| Symbol::new(p)).collect()
}

fn parse_raw(
    text: &str,
    parameters: &[&str],
    allow_derivatives: bool,
) -> Result<JetPolynomial, ParseError> {
    let params = declare(parameters);
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        params: &params,
        allow_derivatives,
    };
    let lhs = p.expr(0)?;
    let value = if allow_derivatives && *p.peek() == Tok::Equals {
        p.bump();
        let rhs = p.expr(0)?;
        &lhs - &rhs
    } else {
        lhs
    };
    if *p.peek() != Tok::End {
        let mut expected = vec!["operator"];
        if allow_derivatives {
            expected.push("`=`");
        }
        expected.push("end of input");
        return Err(p.unexpected(&expected));
    }
    Ok(value)
}

/// Parses an ODE `E` or `E = F` into a monic jet polynomial.
pub fn parse(text: &str, parameters: &[&str]) -> Result<JetPolynomial, ParseError> {
    let f = parse_raw(text, parameters, true)?;
    f.normalize_monic().map_err(|_| ParseError::ZeroEquation)
}

/// Parses a derivative-free coefficient expression.
pub fn parse_rational(text: &str, parameters: &[&str]) -> Result<RationalFunction, ParseError> {
    let f = parse_raw(text, parameters, false)?;
    Ok(f.coeff(&[0; 4]))
}

/// Deterministic text that [`parse`] maps back to the same jet.
pub fn print_canonical(f: &JetPolynomial) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str, params: &[&str]) -> RationalFunction {
        parse_rational(s, params).unwrap()
    }

    #[test]
    fn sixth_degree_example() {
        let f = parse("y'''' - 6*x*y'^5 + 12*y'/x^3", &[]).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.coeff(&[0, 0, 0, 1]).is_one());
        assert_eq!(f.coeff(&[5, 0, 0, 0]), rf("-6*x", &[]));
        assert_eq!(f.coeff(&[1, 0, 0, 0]), rf("12/x^3", &[]));
    }

    #[test]
    fn root_equation_with_parameters() {
        let f = parse("y'' - 2*y'^2/y + k*y'/2 + l*y = 0", &["k", "l"]).unwrap();
        assert_eq!(f.coeff(&[2, 0, 0, 0]), rf("-2/y", &[]));
        assert_eq!(f.coeff(&[1, 0, 0, 0]), rf("k/2", &["k"]));
        assert_eq!(f.coeff(&[0, 0, 0, 0]), rf("l*y", &["l"]));
    }

    #[test]
    fn rejects_derivative_denominator() {
        assert!(matches!(
            parse("y'/(y'+1)", &[]),
            Err(ParseError::DerivativeInDenominator { .. })
        ));
    }

    #[test]
    fn rejects_undeclared_symbol() {
        assert!(matches!(
            parse("y'' + q", &[]),
            Err(ParseError::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn rational_forbids_derivatives() {
        assert!(matches!(
            parse_rational("y'", &[]),
            Err(ParseError::SyntaxError { column: 1, .. })
        ));
        assert_eq!(rf("-x/y^2", &[]).to_string(), "-x/y^2");
        assert_eq!(rf("2/x", &[]).to_string(), "2/x");
    }

    #[test]
    fn trailing_operator_column() {
        match parse("y'' +", &[]) {
            Err(ParseError::SyntaxError { column, .. }) => assert_eq!(column, 6),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn precedence() {
        assert_eq!(rf("-x^2", &[]), -(&RationalFunction::x().pow(2)));
        assert_eq!(rf("2^3^2", &[]), RationalFunction::from_int(512));
        assert_eq!(rf("1 - 2 - 3", &[]), RationalFunction::from_int(-4));
        assert_eq!(rf("12/2/3", &[]), RationalFunction::from_int(2));
    }

    #[test]
    fn printing_round_trip() {
        for s in [
            "y'' - 2*y'^2/y + k*y'/2 + l*y",
            "y'''' - 6*x*y'^5 + 12*y'/x^3",
            "y''' - 3*x^2*y'^5/y^4 - 3*x*y'^4/y^3 + 6*y'^3/y^2 + 6*y'^2/(x*y) - 6*y'/x^2",
            "y'''' + (x + y)*y'*y'' - 1/2*y'",
        ] {
            let f = parse(s, &["k", "l"]).unwrap();
            let printed = print_canonical(&f);
            assert_eq!(parse(&printed, &["k", "l"]).unwrap(), f, "{}", printed);
        }
        assert_eq!(print_canonical(&parse("y''''", &[]).unwrap()), "y''''");
    }
}
