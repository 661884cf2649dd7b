//! Checking an implicit relation `F(x, y) = 0` against an equation.

use crate::algebra::{pseudo_remainder, Polynomial, RationalFunction, Symbol};
use crate::jet::JetPolynomial;
use crate::parser::{parse_rational, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ImplicitError {
    #[error("relation does not depend on y")]
    SingularRelation,
    #[error("relation is not a polynomial")]
    NotPolynomial,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `F = 0` with `F` a polynomial in `x`, `y` and parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ImplicitRelation {
    pub f: Polynomial,
}

impl ImplicitRelation {
    pub fn new(f: Polynomial) -> Result<Self, ImplicitError> {
        if f.derivative(Symbol::Y).is_zero() {
            return Err(ImplicitError::SingularRelation);
        }
        Ok(ImplicitRelation {
            f: f.integer_primitive().1,
        })
    }

    pub fn parse(text: &str, parameters: &[&str]) -> Result<Self, ImplicitError> {
        let r = parse_rational(text, parameters)?;
        if !r.is_polynomial() {
            return Err(ImplicitError::NotPolynomial);
        }
        Self::new(r.numer().clone())
    }

    /// `y', y'', y''', y''''` as rational functions of `(x, y)` along the
    /// relation.
    pub fn derivatives(&self) -> [RationalFunction; 4] {
        let f = RationalFunction::from_poly(self.f.clone());
        let y1 = -&(f
            .partial_derivative(Symbol::X)
            .checked_div(&f.partial_derivative(Symbol::Y))
            .expect("F_y is nonzero"));
        let along = |r: &RationalFunction| {
            &r.partial_derivative(Symbol::X) + &(&r.partial_derivative(Symbol::Y) * &y1)
        };
        let y2 = along(&y1);
        let y3 = along(&y2);
        let y4 = along(&y3);
        [y1, y2, y3, y4]
    }
}

/// The jet with its derivatives replaced along the relation.
pub fn restrict(rel: &ImplicitRelation, f: &JetPolynomial) -> RationalFunction {
    let ys = rel.derivatives();
    let mut out = RationalFunction::zero();
    for (m, c) in f.terms() {
        let mut t = c.clone();
        for (k, &e) in m.iter().enumerate() {
            t = &t * &ys[k].pow(e as u32);
        }
        out = &out + &t;
    }
    out
}

/// True when `f` vanishes on every solution of `F = 0`, for all parameter
/// values.
pub fn verify_implicit_solution(rel: &ImplicitRelation, f: &JetPolynomial) -> bool {
    let r = restrict(rel, f);
    if r.is_zero() {
        return true;
    }
    let n = r.numer().to_univariate(Symbol::Y);
    let d = rel.f.to_univariate(Symbol::Y);
    pseudo_remainder(&n, &d).iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn straight_line() {
        let u2 = parse("y''", &[]).unwrap();
        assert!(verify_implicit_solution(
            &ImplicitRelation::parse("y - x", &[]).unwrap(),
            &u2
        ));
        assert!(!verify_implicit_solution(
            &ImplicitRelation::parse("y^2 - x", &[]).unwrap(),
            &u2
        ));
    }

    #[test]
    fn singular_relation() {
        assert_eq!(
            ImplicitRelation::parse("x^2 - 1", &[]),
            Err(ImplicitError::SingularRelation)
        );
    }

    #[test]
    fn circle_derivative() {
        let rel = ImplicitRelation::parse("x^2 + y^2 - 1", &[]).unwrap();
        let f = parse("y' + x/y", &[]).unwrap();
        assert!(verify_implicit_solution(&rel, &f));
    }
}
