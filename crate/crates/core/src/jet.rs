//! Differential polynomials in y', y'', y''', y'''' over rational functions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{rf_factor_string, RationalFunction, Symbol};

/// Highest supported derivative order.
pub const MAX_ORDER: usize = 4;

/// Exponents of (u1, u2, u3, u4).
pub type JetMonomial = [u8; 4];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("derivative order would exceed {MAX_ORDER}")]
    OrderOverflow,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct JetPolynomial {
    terms: BTreeMap<JetMonomial, RationalFunction>,
}

/// Sort key: highest derivative first, then degree.
fn order_key(m: &JetMonomial) -> [u8; 4] {
    [m[3], m[2], m[1], m[0]]
}

fn mono_mul(a: &JetMonomial, b: &JetMonomial) -> JetMonomial {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

impl JetPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(RationalFunction::one())
    }

    pub fn constant(c: RationalFunction) -> Self {
        Self::term([0; 4], c)
    }

    /// The derivative symbol `u_k`, `1 <= k <= 4`.
    pub fn u(k: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&k));
        let mut m = [0; 4];
        m[k - 1] = 1;
        Self::term(m, RationalFunction::one())
    }

    pub fn term(m: JetMonomial, c: RationalFunction) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: JetMonomial, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &RationalFunction)> {
        self.terms.iter()
    }

    /// Terms in print order: descending derivative order, then u1-degree.
    pub fn terms_desc(&self) -> Vec<(&JetMonomial, &RationalFunction)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|t| std::cmp::Reverse(order_key(t.0)));
        v
    }

    pub fn coeff(&self, m: &JetMonomial) -> RationalFunction {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Highest derivative index present, 0 for a pure coefficient.
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|m| (0..4).rev().find(|&i| m[i] > 0).map(|i| i + 1).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, k: usize) -> u8 {
        self.terms.keys().map(|m| m[k - 1]).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&JetMonomial, &RationalFunction)> {
        self.terms
            .iter()
            .max_by(|a, b| order_key(a.0).cmp(&order_key(b.0)))
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn try_map_coeffs<E>(
        &self,
        f: impl Fn(&RationalFunction) -> Result<RationalFunction, E>,
    ) -> Result<Self, E> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }

    /// Partial derivative with respect to `u_k`.
    pub fn diff_u(&self, k: usize) -> Self {
        let i = k - 1;
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut nm = *m;
            nm[i] -= 1;
            out.add_term(nm, c.scale(&crate::algebra::Q::from_integer(m[i].into())));
        }
        out
    }

    /// Total x-derivative.
    pub fn total_derivative(&self) -> Result<Self, JetError> {
        self.total_derivative_with(&|c| c.partial_derivative(Symbol::X), &|c| {
            c.partial_derivative(Symbol::Y)
        })
    }

    /// Total derivative with caller-supplied coefficient derivations standing
    /// in for the partials in x and y.
    pub fn total_derivative_with(
        &self,
        dx: &dyn Fn(&RationalFunction) -> RationalFunction,
        dy: &dyn Fn(&RationalFunction) -> RationalFunction,
    ) -> Result<Self, JetError> {
        if self.terms.keys().any(|m| m[3] > 0) {
            return Err(JetError::OrderOverflow);
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, dx(c));
            let mut m1 = *m;
            m1[0] += 1;
            out.add_term(m1, dy(c));
        }
        for k in 1..MAX_ORDER {
            let d = self.diff_u(k);
            if d.is_zero() {
                continue;
            }
            out = &out + &(&d * &Self::u(k + 1));
        }
        Ok(out)
    }

    /// Replaces every `u_k` with `replacement`.
    pub fn substitute_derivative(&self, k: usize, replacement: &JetPolynomial) -> Self {
        let i = k - 1;
        let maxdeg = self.degree_in(k);
        let mut powers = vec![Self::one()];
        for _ in 0..maxdeg {
            let next = powers.last().unwrap() * replacement;
            powers.push(next);
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut rest = *m;
            rest[i] = 0;
            let base = Self::term(rest, c.clone());
            out = &out + &(&base * &powers[m[i] as usize]);
        }
        out
    }

    /// Divides by the coefficient of the leading term.
    pub fn normalize_monic(&self) -> Result<Self, JetError> {
        let (_, lc) = self.leading().ok_or(JetError::ZeroLeadingCoefficient)?;
        if lc.is_one() {
            return Ok(self.clone());
        }
        let inv = lc.recip().map_err(|_| JetError::ZeroLeadingCoefficient)?;
        Ok(self.scale(&inv))
    }

    /// Collects the coefficient of `u2^a u3^b u4^c` as a polynomial in u1.
    pub fn component(&self, pattern: [u8; 3]) -> BTreeMap<u8, RationalFunction> {
        self.terms
            .iter()
            .filter(|(m, _)| [m[1], m[2], m[3]] == pattern)
            .map(|(m, c)| (m[0], c.clone()))
            .collect()
    }

    pub fn shape(&self) -> Shape {
        let lead = self.leading().map(|(m, _)| *m);
        let mut components = BTreeMap::new();
        for m in self.terms.keys() {
            if Some(*m) == lead {
                continue;
            }
            let e = components.entry([m[1], m[2], m[3]]).or_insert(0u8);
            *e = (*e).max(m[0]);
        }
        Shape {
            lead: lead.unwrap_or([0; 4]),
            components,
        }
    }

    /// Symbols occurring in any coefficient.
    pub fn coefficient_symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.terms.values().flat_map(|c| c.variables()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Which derivative patterns occur, with the largest u1-degree in each.
/// The leading term itself is kept apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub lead: JetMonomial,
    /// Keyed by exponents of (u2, u3, u4).
    pub components: BTreeMap<[u8; 3], u8>,
}

impl Shape {
    pub const PURE: [u8; 3] = [0, 0, 0];
    pub const U2: [u8; 3] = [1, 0, 0];
    pub const U2SQ: [u8; 3] = [2, 0, 0];
    pub const U3: [u8; 3] = [0, 1, 0];

    pub fn degree(&self, pattern: [u8; 3]) -> Option<u8> {
        self.components.get(&pattern).copied()
    }

    /// True when every component fits under the corresponding bound of `allowed`.
    pub fn fits(&self, lead: JetMonomial, allowed: &[([u8; 3], u8)]) -> bool {
        self.lead == lead
            && self
                .components
                .iter()
                .all(|(p, d)| allowed.iter().any(|(q, max)| q == p && d <= max))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lead {}", monomial_string(&self.lead))?;
        for (p, d) in &self.components {
            let name = monomial_string(&[0, p[0], p[1], p[2]]);
            let name = if name == "1" {
                "pure".to_string()
            } else {
                name
            };
            write!(f, "; {}: deg {}", name, d)?;
        }
        Ok(())
    }
}

pub fn monomial_string(m: &JetMonomial) -> String {
    let mut parts = Vec::new();
    for i in (0..4).rev() {
        if m[i] == 0 {
            continue;
        }
        let tok = format!("y{}", "'".repeat(i + 1));
        parts.push(if m[i] == 1 {
            tok
        } else {
            format!("{}^{}", tok, m[i])
        });
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for JetPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms_desc().into_iter().enumerate() {
            let mono = monomial_string(m);
            let neg = c.numer().len() == 1 && c.numer().has_negative_leading();
            let mag = if neg { -c } else { c.clone() };
            let body = if mono == "1" {
                crate::algebra::rf_to_string(&mag)
            } else if mag.is_one() {
                mono
            } else {
                format!("{}*{}", rf_factor_string(&mag), mono)
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        write!(f, "{}", out)
    }
}

impl fmt::Debug for JetPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add<&JetPolynomial> for &JetPolynomial {
    type Output = JetPolynomial;
    fn add(self, rhs: &JetPolynomial) -> JetPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub<&JetPolynomial> for &JetPolynomial {
    type Output = JetPolynomial;
    fn sub(self, rhs: &JetPolynomial) -> JetPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul<&JetPolynomial> for &JetPolynomial {
    type Output = JetPolynomial;
    fn mul(self, rhs: &JetPolynomial) -> JetPolynomial {
        let mut out = JetPolynomial::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), a * b);
            }
        }
        out
    }
}

impl Neg for &JetPolynomial {
    type Output = JetPolynomial;
    fn neg(self) -> JetPolynomial {
        self.map_coeffs(|c| -c)
    }
}

impl From<RationalFunction> for JetPolynomial {
    fn from(c: RationalFunction) -> Self {
        JetPolynomial::constant(c)
    }
}
