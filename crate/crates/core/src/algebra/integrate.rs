//! Rational antiderivatives by Hermite reduction.
//!
//! The integrand is viewed as a univariate rational function in the
//! integration variable over the field of rational functions in every other
//! symbol. Only the rational part is produced; a nonzero logarithmic part is
//! reported as [`AlgebraError::LogTermRequired`].

use super::rational_function::RationalFunction;
use super::symbol::Symbol;
use super::AlgebraError;

/// Dense univariate polynomial with rational-function coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<RationalFunction>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: RationalFunction) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn new(coeffs: Vec<RationalFunction>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> RationalFunction {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> RationalFunction {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Splits `f` into numerator and denominator polynomials in `v`.
    pub fn from_rf(f: &RationalFunction, v: Symbol) -> (UniPoly, UniPoly) {
        let conv = |p: &super::Polynomial| {
            UniPoly::new(
                p.to_univariate(v)
                    .into_iter()
                    .map(RationalFunction::from_poly)
                    .collect(),
            )
        };
        (conv(f.numer()), conv(f.denom()))
    }

    pub fn to_rf(&self, v: Symbol) -> RationalFunction {
        let var = RationalFunction::var(v);
        let mut acc = RationalFunction::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &var) + c;
        }
        acc
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![RationalFunction::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &RationalFunction) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, n: u32) -> UniPoly {
        (0..n).fold(UniPoly::constant(RationalFunction::one()), |acc, _| {
            acc.mul(self)
        })
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&super::Q::from_integer((i as i64).into())))
                .collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let inv = self.lc().recip().unwrap();
        self.scale(&inv)
    }

    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.clone();
        let mut q =
            vec![RationalFunction::zero(); self.coeffs.len().saturating_sub(d.deg()).max(1)];
        let lc_inv = d.lc().recip().unwrap();
        while !r.is_zero() && r.deg() >= d.deg() {
            let shift = r.deg() - d.deg();
            let t = &r.lc() * &lc_inv;
            for (i, c) in d.coeffs.iter().enumerate() {
                r.coeffs[i + shift] = &r.coeffs[i + shift] - &(&t * c);
            }
            q[shift] = &q[shift] + &t;
            r.trim();
        }
        (UniPoly::new(q), r)
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g = gcd(self, o)`.
    pub fn ext_gcd(&self, o: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let one = UniPoly::constant(RationalFunction::one());
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (one.clone(), UniPoly::zero());
        let (mut t0, mut t1) = (UniPoly::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.lc().recip().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Solves `s*a + t*b = c` with `deg s < deg b`; `gcd(a, b)` must divide `c`.
    pub fn diophantine(a: &UniPoly, b: &UniPoly, c: &UniPoly) -> (UniPoly, UniPoly) {
        let (g, s0, t0) = a.ext_gcd(b);
        let (q, r) = c.divrem(&g);
        debug_assert!(r.is_zero());
        let mut s = s0.mul(&q);
        let mut t = t0.mul(&q);
        if !s.is_zero() && s.deg() >= b.deg() {
            let (qq, rr) = s.divrem(b);
            s = rr;
            t = t.add(&qq.mul(a));
        }
        (s, t)
    }

    /// Square-free factors `(factor, multiplicity)` of a monic polynomial.
    pub fn squarefree(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        let b = self.derivative();
        let c = self.gcd(&b);
        let mut w = self.divrem(&c).0;
        let mut y = b.divrem(&c).0;
        let mut z = y.sub(&w.derivative());
        let mut i = 1;
        while w.deg() > 0 {
            let a = w.gcd(&z);
            w = w.divrem(&a).0;
            y = z.divrem(&a).0;
            z = y.sub(&w.derivative());
            out.push((a, i));
            i += 1;
        }
        out
    }

    /// Termwise integral of a polynomial, zero constant term.
    fn integrate_poly(&self) -> UniPoly {
        let mut out = vec![RationalFunction::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c.scale(&super::Q::new(1.into(), ((i + 1) as i64).into())));
        }
        UniPoly::new(out)
    }
}

/// Rational `F` with `dF/dv = f` and no term free of `v` added.
pub fn antiderivative(f: &RationalFunction, v: Symbol) -> Result<RationalFunction, AlgebraError> {
    if f.is_zero() {
        return Ok(RationalFunction::zero());
    }
    if !f.contains(v) {
        return Ok(f * &RationalFunction::var(v));
    }
    let (a, d) = UniPoly::from_rf(f, v);
    let inv = d.lc().recip()?;
    let (a, d) = (a.scale(&inv), d.scale(&inv));
    let (q, r) = a.divrem(&d);
    let mut result = q.integrate_poly().to_rf(v);
    if r.is_zero() {
        return Ok(result);
    }
    let mut a = r;
    let mut dcur = d.clone();
    for (vf, mult) in d.squarefree() {
        if mult < 2 || vf.deg() == 0 {
            continue;
        }
        let u = dcur.divrem(&vf.pow(mult)).0;
        let vprime = vf.derivative();
        let uv = u.mul(&vprime);
        for j in (1..mult).rev() {
            let jq = RationalFunction::from_int(j as i64);
            let rhs = a.scale(&(-&jq.recip()?));
            let (b, c) = UniPoly::diophantine(&uv, &vf, &rhs);
            result = &result + &b.to_rf(v).checked_div(&vf.pow(j).to_rf(v))?;
            a = c.scale(&-&jq).sub(&u.mul(&b.derivative()));
        }
        dcur = u.mul(&vf);
    }
    let (q2, r2) = a.divrem(&dcur);
    if !r2.is_zero() {
        return Err(AlgebraError::LogTermRequired);
    }
    result = &result + &q2.integrate_poly().to_rf(v);
    Ok(result)
}
