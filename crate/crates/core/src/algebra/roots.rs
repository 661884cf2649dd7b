//! Perfect-power roots via square-free decomposition.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::gcd::{content, gcd};
use super::poly::Polynomial;
use super::rational_function::RationalFunction;
use super::symbol::Symbol;
use super::{AlgebraError, Q};

/// Exact `n`-th root of a rational number, if one exists.
pub fn rational_nth_root(q: &Q, n: u32) -> Option<Q> {
    if n == 0 {
        return None;
    }
    if q.is_zero() {
        return Some(Q::zero());
    }
    if q.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let root_int = |a: &BigInt| -> Option<BigInt> {
        let r = a.abs().nth_root(n);
        if num_traits::pow::pow(r.clone(), n as usize) == a.abs() {
            Some(r)
        } else {
            None
        }
    };
    let num = root_int(q.numer())?;
    let den = root_int(q.denom())?;
    let r = Q::new(num, den);
    Some(if q.is_negative() { -r } else { r })
}

/// Square-free factors of `p` with respect to `v`, as `(factor, multiplicity)`.
/// `p` should be primitive in `v`; the product matches `p` up to a rational
/// constant.
pub fn squarefree_factors(p: &Polynomial, v: Symbol) -> Vec<(Polynomial, u32)> {
    let mut out = Vec::new();
    let b = p.derivative(v);
    let c = gcd(p, &b);
    let mut w = p.exact_div(&c).expect("gcd divides");
    let mut y = b.exact_div(&c).expect("gcd divides");
    let mut z = &y - &w.derivative(v);
    let mut i = 1;
    while w.degree_in(v) > 0 {
        let a = gcd(&w, &z);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        w = w.exact_div(&a).expect("gcd divides");
        y = z.exact_div(&a).expect("gcd divides");
        z = &y - &w.derivative(v);
        i += 1;
    }
    out
}

/// Some `r` with `r^n = p`, or `None`.
pub fn poly_nth_root(p: &Polynomial, n: u32) -> Option<Polynomial> {
    if n == 1 {
        return Some(p.clone());
    }
    if let Some(c) = p.as_constant() {
        return rational_nth_root(&c, n).map(Polynomial::constant);
    }
    let v = *p.variables().last().unwrap();
    let cont = content(p, v);
    let pp = p.exact_div(&cont).unwrap();
    let root_cont = poly_nth_root(&cont, n)?;
    let mut r = Polynomial::one();
    for (f, mult) in squarefree_factors(&pp, v) {
        if mult % n != 0 {
            return None;
        }
        r = &r * &f.pow(mult / n);
    }
    let rest = pp.exact_div(&r.pow(n))?;
    let k = rest.as_constant()?;
    let kr = rational_nth_root(&k, n)?;
    Some((&root_cont * &r).scale(&kr))
}

/// Rational-function `n`-th root. For even `n` the branch with positive
/// leading numerator coefficient is returned; callers try the negation too.
pub fn nth_root(f: &RationalFunction, n: u32) -> Result<RationalFunction, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::NotAPerfectPower(n));
    }
    if f.is_zero() {
        return Ok(RationalFunction::zero());
    }
    let num = poly_nth_root(f.numer(), n).ok_or(AlgebraError::NotAPerfectPower(n))?;
    let den = poly_nth_root(f.denom(), n).ok_or(AlgebraError::NotAPerfectPower(n))?;
    let mut r = RationalFunction::new(num, den)?;
    if n.is_multiple_of(2) && r.numer().has_negative_leading() {
        r = -r;
    }
    debug_assert_eq!(&r.pow(n), f);
    Ok(r)
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
    fn cube_root_of_negative() {
        let f = -(&x().pow(3) / &y().pow(6));
        assert_eq!(nth_root(&f, 3).unwrap(), -(&x() / &y().pow(2)));
    }

    #[test]
    fn square_root_with_rational_content() {
        let f = &x().pow(2) / &RationalFunction::from_int(9);
        assert_eq!(
            nth_root(&f, 2).unwrap(),
            &x() / &RationalFunction::from_int(3)
        );
    }

    #[test]
    fn irrational_root_is_rejected() {
        assert_eq!(nth_root(&x(), 2), Err(AlgebraError::NotAPerfectPower(2)));
        assert!(nth_root(&RationalFunction::from_int(-4), 2).is_err());
    }

    #[test]
    fn square_of_binomial() {
        let b = &(&x() * &y()) - &RationalFunction::from_int(2);
        let f = b.pow(2);
        let r = nth_root(&f, 2).unwrap();
        assert_eq!(r.pow(2), f);
    }

    #[test]
    fn squarefree_split() {
        let xp = Polynomial::var(Symbol::X);
        let yp = Polynomial::var(Symbol::Y);
        let a = &xp + &yp;
        let b = &xp - &Polynomial::one();
        let p = &a.pow(2) * &b.pow(3);
        let f = squarefree_factors(&p, Symbol::X);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], (a, 2));
        assert_eq!(f[1], (b, 3));
    }
}
