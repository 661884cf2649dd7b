//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::symbol::Symbol;
use super::Q;

/// Exponent vector indexed by symbol id, with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol, e: u32) -> Monomial {
        let mut v = vec![0; s.index() + 1];
        v[s.index()] = e;
        Monomial::from_vec(v)
    }

    pub fn from_vec(mut v: Vec<u32>) -> Monomial {
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exp(&self, s: Symbol) -> u32 {
        self.0.get(s.index()).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
            .collect();
        Monomial(v)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        let v = other
            .0
            .iter()
            .enumerate()
            .map(|(i, b)| b - self.0.get(i).unwrap_or(&0))
            .collect();
        Monomial::from_vec(v)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let v = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| *a.min(b))
            .collect();
        Monomial::from_vec(v)
    }

    pub fn with_exp(&self, s: Symbol, e: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= s.index() {
            v.resize(s.index() + 1, 0);
        }
        v[s.index()] = e;
        Monomial::from_vec(v)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (Symbol, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| (Symbol::from_index(i), *e))
    }
}

// Graded reverse lexicographic order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let n = self.0.len().max(other.0.len());
        for i in (0..n).rev() {
            let a = self.0.get(i).unwrap_or(&0);
            let b = other.0.get(i).unwrap_or(&0);
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .symbols()
            .map(|(s, e)| {
                if e == 1 {
                    s.name()
                } else {
                    format!("{}^{}", s.name(), e)
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Q::one())
    }

    pub fn constant(c: Q) -> Polynomial {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Polynomial {
        Polynomial::constant(Q::from_integer(BigInt::from(n)))
    }

    pub fn var(s: Symbol) -> Polynomial {
        Polynomial::term(Monomial::var(s, 1), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Q)>) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// Terms in descending term order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Q {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Makes the leading coefficient 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn variables(&self) -> Vec<Symbol> {
        let mut n = 0;
        for m in self.terms.keys() {
            n = n.max(m.exponents().len());
        }
        (0..n)
            .filter(|&i| {
                self.terms
                    .keys()
                    .any(|m| m.exponents().get(i).copied().unwrap_or(0) > 0)
            })
            .map(Symbol::from_index)
            .collect()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.terms.keys().any(|m| m.exp(s) > 0)
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.keys().map(|m| m.exp(s)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Smallest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }

    pub fn derivative(&self, s: Symbol) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exp(s);
            if e > 0 {
                p.add_term(m.with_exp(s, e - 1), c * Q::from_integer(BigInt::from(e)));
            }
        }
        p
    }

    /// Coefficients with respect to `s`, indexed by degree.
    pub fn to_univariate(&self, s: Symbol) -> Vec<Polynomial> {
        let deg = self.degree_in(s) as usize;
        let mut out = vec![Polynomial::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let e = m.exp(s) as usize;
            out[e].add_term(m.with_exp(s, 0), c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[Polynomial], s: Symbol) -> Polynomial {
        let mut p = Polynomial::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(s, i as u32);
            for (k, a) in &c.terms {
                p.add_term(k.mul(&m), a.clone());
            }
        }
        p
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = d.leading()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if d.is_monomial() {
            let mut q = Polynomial::zero();
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                q.add_term(lm.div_into(m), c / lc);
            }
            return Some(q);
        }
        let mut r = self.clone();
        let mut q = Polynomial::zero();
        while let Some((rm, rc)) = r.leading() {
            if !lm.divides(rm) {
                return None;
            }
            let tm = lm.div_into(rm);
            let tc = rc / lc;
            let t = Polynomial::term(tm.clone(), tc.clone());
            r = &r - &(&t * d);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    pub fn eval_with(&self, value: &dyn Fn(Symbol) -> Option<Q>) -> Option<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in m.symbols() {
                let v = value(s)?;
                t *= num_traits::pow::pow(v, e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// Substitutes a polynomial for one symbol.
    pub fn substitute(&self, s: Symbol, value: &Polynomial) -> Polynomial {
        let coeffs = self.to_univariate(s);
        let mut acc = Polynomial::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Multiplies through by the lcm of the coefficient denominators and
    /// divides by the gcd of the numerators. Sign is preserved.
    pub fn integer_primitive(&self) -> (Q, Polynomial) {
        use num_integer::Integer;
        if self.is_zero() {
            return (Q::one(), Polynomial::zero());
        }
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        let factor = Q::new(l, g.abs());
        (factor.recip(), self.scale(&factor))
    }

    pub fn has_negative_leading(&self) -> bool {
        self.leading()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut p = big.clone();
        for (m, c) in &small.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c.clone());
        }
        p
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut p = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::poly_to_string(self))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::poly_to_string(self))
    }
}
