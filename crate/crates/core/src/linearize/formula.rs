//! Tiny formula language for closed-form coefficient relations.
//!
//! Identifiers are coefficient names (`A1`, `c`, `epsilon`), optionally with
//! a derivative suffix such as `_x` or `_xy`. Products must be written with
//! `*`; `^` takes a nonnegative integer exponent.

use std::collections::BTreeMap;

use crate::algebra::{RationalFunction, Q};

pub type Env = BTreeMap<String, RationalFunction>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let ch = cs[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let s = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let n: String = cs[s..i].iter().collect();
            out.push(Tok::Num(Q::from_integer(n.parse().unwrap())));
        } else if ch.is_ascii_alphabetic() {
            let s = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[s..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(format!("unexpected `{}`", ch));
        }
    }
    Ok(out)
}

struct Eval<'a> {
    toks: Vec<Tok>,
    pos: usize,
    env: &'a Env,
}

impl Eval<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<RationalFunction, String> {
        let mut acc = if self.eat('-') {
            -self.product()?
        } else {
            self.eat('+');
            self.product()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<RationalFunction, String> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                acc = acc
                    .checked_div(&d)
                    .map_err(|_| "division by zero".to_string())?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<RationalFunction, String> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let e: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| "exponent too large")?;
                    Ok(base.pow(e))
                }
                _ => Err("exponent must be an integer".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RationalFunction, String> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RationalFunction::from_q(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                lookup(self.env, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(')') {
                    return Err("missing `)`".into());
                }
                Ok(v)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            t => Err(format!("unexpected {:?}", t)),
        }
    }
}

fn lookup(env: &Env, name: &str) -> Result<RationalFunction, String> {
    let (base, suffix) = match name.split_once('_') {
        Some((b, s)) => (b, s),
        None => (name, ""),
    };
    let v = env
        .get(base)
        .ok_or_else(|| format!("unknown name `{}`", base))?;
    if suffix.chars().any(|c| c != 'x' && c != 'y') {
        return Err(format!("bad derivative suffix `{}`", suffix));
    }
    let i = suffix.chars().filter(|&c| c == 'x').count() as u32;
    let j = suffix.len() as u32 - i;
    Ok(v.derivative_xy(i, j))
}

/// Evaluates `text` over `env`.
pub fn evaluate(text: &str, env: &Env) -> Result<RationalFunction, String> {
    let toks = lex(text)?;
    let mut e = Eval { toks, pos: 0, env };
    let v = e.sum()?;
    if e.pos != e.toks.len() {
        return Err(format!("trailing input at token {}", e.pos));
    }
    Ok(v)
}

/// `lhs - rhs` for a relation written `lhs = rhs`.
pub fn relation_residual(text: &str, env: &Env) -> Result<RationalFunction, String> {
    let (l, r) = text
        .split_once('=')
        .ok_or_else(|| format!("no `=` in `{}`", text))?;
    Ok(&evaluate(l, env)? - &evaluate(r, env)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_rational;

    fn env() -> Env {
        let mut e = Env::new();
        e.insert("c".into(), parse_rational("x^2*y", &[]).unwrap());
        e.insert("A1".into(), parse_rational("3", &[]).unwrap());
        e
    }

    #[test]
    fn derivatives_and_precedence() {
        let v = evaluate("c_xy - 2*A1^2/3 + -1", &env()).unwrap();
        assert_eq!(v, parse_rational("2*x - 7", &[]).unwrap());
    }

    #[test]
    fn relation() {
        assert!(relation_residual("c_yy = 0", &env()).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        assert!(evaluate("1/(A1-3)", &env()).is_err());
        assert!(evaluate("(c", &env()).is_err());
        assert!(evaluate("q", &env()).is_err());
        assert!(evaluate("c_z", &env()).is_err());
    }
}
