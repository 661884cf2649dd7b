//! Canonical multivariate rational functions.
//!
//! A value is stored as `num / den` with `gcd(num, den) = 1` and `den` monic
//! in the grevlex order, so two rational functions are equal iff their
//! representations are structurally equal.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{Monomial, Polynomial};
use super::symbol::Symbol;
use super::{AlgebraError, Q};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Polynomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        RationalFunction::from_poly(Polynomial::from_int(n))
    }

    pub fn from_q(q: Q) -> Self {
        RationalFunction::from_poly(Polynomial::constant(q))
    }

    pub fn var(s: Symbol) -> Self {
        RationalFunction::from_poly(Polynomial::var(s))
    }

    pub fn x() -> Self {
        Self::var(Symbol::X)
    }

    pub fn y() -> Self {
        Self::var(Symbol::Y)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    /// `coef * x^m * y^n` with possibly negative exponents.
    pub fn laurent_monomial(coef: Q, m: i32, n: i32) -> Self {
        let mut num = vec![0u32; 2];
        let mut den = vec![0u32; 2];
        for (i, e) in [m, n].into_iter().enumerate() {
            if e >= 0 {
                num[i] = e as u32;
            } else {
                den[i] = (-e) as u32;
            }
        }
        RationalFunction::new(
            Polynomial::term(Monomial::from_vec(num), coef),
            Polynomial::term(Monomial::from_vec(den), Q::one()),
        )
        .unwrap()
    }

    /// Builds and reduces `num / den`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            return RationalFunction {
                num: num.scale(&c.recip()),
                den: Polynomial::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.leading_coeff().recip();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.num.contains(s) || self.den.contains(s)
    }

    pub fn variables(&self) -> Vec<Symbol> {
        let mut v = self.num.variables();
        for s in self.den.variables() {
            if !v.contains(&s) {
                v.push(s);
            }
        }
        v.sort();
        v
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn pow(&self, n: u32) -> Self {
        RationalFunction {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn powi(&self, n: i32) -> Result<Self, AlgebraError> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Ok(self.recip()?.pow((-n) as u32))
        }
    }

    pub fn partial_derivative(&self, v: Symbol) -> Self {
        let dn = self.num.derivative(v);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        Self::reduce(&(&dn * &self.den) - &(&self.num * &dd), self.den.pow(2))
    }

    /// Repeated partial derivative `d^(i+j) / dx^i dy^j`.
    pub fn derivative_xy(&self, i: u32, j: u32) -> Self {
        let mut r = self.clone();
        for _ in 0..i {
            r = r.partial_derivative(Symbol::X);
        }
        for _ in 0..j {
            r = r.partial_derivative(Symbol::Y);
        }
        r
    }

    pub fn evaluate(&self, point: &HashMap<Symbol, Q>) -> Result<Q, AlgebraError> {
        let look = |s: Symbol| point.get(&s).cloned();
        let unbound = || {
            let missing = self
                .variables()
                .into_iter()
                .find(|s| !point.contains_key(s))
                .map(|s| s.name())
                .unwrap_or_default();
            AlgebraError::UnboundSymbol(missing)
        };
        let d = self.den.eval_with(&look).ok_or_else(unbound)?;
        if d.is_zero() {
            return Err(AlgebraError::PoleAtPoint);
        }
        let n = self.num.eval_with(&look).ok_or_else(unbound)?;
        Ok(n / d)
    }

    /// Replaces symbols by rational functions. Symbols without an entry are
    /// left untouched.
    pub fn substitute(
        &self,
        map: &HashMap<Symbol, RationalFunction>,
    ) -> Result<Self, AlgebraError> {
        let n = substitute_poly(&self.num, map);
        let d = substitute_poly(&self.den, map);
        n.checked_div(&d)
    }

    pub fn substitute_one(
        &self,
        s: Symbol,
        value: &RationalFunction,
    ) -> Result<Self, AlgebraError> {
        let mut m = HashMap::new();
        m.insert(s, value.clone());
        self.substitute(&m)
    }
}

fn substitute_poly(p: &Polynomial, map: &HashMap<Symbol, RationalFunction>) -> RationalFunction {
    if !p.variables().iter().any(|s| map.contains_key(s)) {
        return RationalFunction::from_poly(p.clone());
    }
    // collect terms over a common denominator to avoid a gcd per term
    let mut powers: HashMap<(Symbol, u32), RationalFunction> = HashMap::new();
    let mut num = Polynomial::zero();
    let mut den = Polynomial::one();
    for (m, c) in p.terms() {
        let mut rest = Vec::new();
        let mut t = RationalFunction::from_q(c.clone());
        for (s, e) in m.symbols() {
            match map.get(&s) {
                Some(v) => {
                    let pw = powers.entry((s, e)).or_insert_with(|| v.pow(e)).clone();
                    t = &t * &pw;
                }
                None => rest.push((s, e)),
            }
        }
        let mut kept = vec![0u32; m.exponents().len()];
        for (s, e) in rest {
            kept[s.index()] = e;
        }
        let t_num = t.num.mul_monomial(&Monomial::from_vec(kept));
        if t.den == den {
            num = &num + &t_num;
        } else {
            let g = gcd(&den, &t.den);
            let a = t.den.exact_div(&g).unwrap();
            let b = den.exact_div(&g).unwrap();
            num = &(&num * &a) + &(&t_num * &b);
            den = &den * &a;
        }
    }
    RationalFunction::reduce(num, den)
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RationalFunction::from_poly(&self.num + &rhs.num);
            }
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let a = self.den.exact_div(&g).unwrap();
        let b = rhs.den.exact_div(&g).unwrap();
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        let den = &self.den * &b;
        RationalFunction::reduce(num, den)
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        let den = &d1 * &d2;
        let lc = den.leading_coeff().recip();
        RationalFunction {
            num: (&n1 * &n2).scale(&lc),
            den: den.scale(&lc),
        }
    }
}

/// Panics on division by zero; use [`RationalFunction::checked_div`] for
/// fallible division.
impl Div<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs)
            .expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_rf {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
        impl $tr<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                self.$m(&rhs)
            }
        }
    };
}

forward_rf!(Add, add);
forward_rf!(Sub, sub);
forward_rf!(Mul, mul);
forward_rf!(Div, div);

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = RationalFunction>>(iter: I) -> Self {
        iter.fold(RationalFunction::zero(), |a, b| &a + &b)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<i64> for RationalFunction {
    fn from(n: i64) -> Self {
        RationalFunction::from_int(n)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::rf_to_string(self))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::rf_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RationalFunction {
        RationalFunction::x()
    }
    fn y() -> RationalFunction {
        RationalFunction::y()
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let a = &x() / &y();
        let b = &y() / &x();
        assert!((&a * &b).is_one());
    }

    #[test]
    fn cancels_common_factor_on_construction() {
        let n = &(&x() * &x()) - &(&y() * &y());
        let d = &x() - &y();
        assert_eq!(&n / &d, &x() + &y());
    }

    #[test]
    fn cube_of_negative_quotient() {
        let c = -(&x() / &(&y() * &y()));
        let expect = -(&x().pow(3) / &y().pow(6));
        assert_eq!(c.pow(3), expect);
        // schoolbook route
        assert_eq!(&(&c * &c) * &c, expect);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            x().checked_div(&RationalFunction::zero()),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn partial_derivatives() {
        let c = -(&x() / &y().pow(2));
        assert_eq!(
            c.partial_derivative(Symbol::Y),
            &x().scale(&Q::from_integer(2.into())) / &y().pow(3)
        );
        let two_over_x = &RationalFunction::from_int(2) / &x();
        assert_eq!(
            two_over_x.partial_derivative(Symbol::X),
            &RationalFunction::from_int(-2) / &x().pow(2)
        );
        let k = RationalFunction::var(Symbol::new("k"));
        let l = RationalFunction::var(Symbol::new("l"));
        let e = &k.pow(2) - &l.scale(&Q::from_integer(5.into()));
        assert_eq!(
            e.partial_derivative(Symbol::new("k")),
            k.scale(&Q::from_integer(2.into()))
        );
    }

    #[test]
    fn evaluation() {
        let c = -(&x() / &y().pow(2));
        let mut p = HashMap::new();
        p.insert(Symbol::X, Q::from_integer(1.into()));
        p.insert(Symbol::Y, Q::from_integer(2.into()));
        assert_eq!(c.evaluate(&p).unwrap(), Q::new((-1).into(), 4.into()));
        let mut p = HashMap::new();
        p.insert(Symbol::X, Q::from_integer(2.into()));
        assert_eq!(
            (&RationalFunction::from_int(2) / &x())
                .evaluate(&p)
                .unwrap(),
            Q::one()
        );
        let mut p = HashMap::new();
        p.insert(Symbol::X, Q::zero());
        assert_eq!(
            x().recip().unwrap().evaluate(&p),
            Err(AlgebraError::PoleAtPoint)
        );
    }

    #[test]
    fn denominator_is_monic() {
        let r = &x() / &y().scale(&Q::from_integer((-3).into()));
        assert!(r.denom().leading_coeff().is_one());
        assert_eq!(r, -(&x() / &y().scale(&Q::from_integer(3.into()))));
    }

    #[test]
    fn substitution_into_rational_function() {
        let f = &x() / &(&y() + &RationalFunction::one());
        let r = f
            .substitute_one(Symbol::Y, &(&x() - &RationalFunction::one()))
            .unwrap();
        assert!(r.is_one());
    }
}
