//! Multivariate polynomial gcd.
//!
//! A heuristic evaluation/interpolation scheme over the integers is tried
//! first. When it gives up, the polynomial is viewed as univariate in its
//! highest-indexed variable with coefficients in the ring of the remaining
//! variables; contents are peeled off recursively and the primitive parts go
//! through the subresultant PRS.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, Polynomial};
use super::symbol::Symbol;
use super::Q;

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if a == b {
        return a.monic();
    }
    // split off the monomial part so that denominators like x^2*y^3 stay cheap
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = a.exact_div(&Polynomial::term(ma, Q::one())).unwrap();
    let b1 = b.exact_div(&Polynomial::term(mb, Q::one())).unwrap();
    let core = if a1.is_constant() || b1.is_constant() {
        Polynomial::one()
    } else {
        gcd_no_monomial(&a1, &b1)
    };
    core.mul_monomial(&mg).monic()
}

pub fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    let g = gcd(a, b);
    (a * &b.exact_div(&g).unwrap()).monic()
}

fn main_var(a: &Polynomial, b: &Polynomial) -> Option<Symbol> {
    let va = a.variables();
    let vb = b.variables();
    va.last()
        .copied()
        .into_iter()
        .chain(vb.last().copied())
        .max()
}

fn gcd_no_monomial(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if a == b {
        return a.monic();
    }
    if let Some(g) = heuristic(a, b) {
        return g.monic();
    }
    let v = main_var(a, b).expect("non-constant");
    let da = a.degree_in(v);
    let db = b.degree_in(v);
    if da == 0 {
        return gcd(a, &content(b, v));
    }
    if db == 0 {
        return gcd(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let pa = a.exact_div(&ca).unwrap();
    let pb = b.exact_div(&cb).unwrap();
    let cg = gcd(&ca, &cb);
    let (ua, ub) = if da >= db {
        (pa.to_univariate(v), pb.to_univariate(v))
    } else {
        (pb.to_univariate(v), pa.to_univariate(v))
    };
    let g = subresultant(ua, ub);
    let g = Polynomial::from_univariate(&g, v);
    let g = primitive_part(&g, v);
    (&cg * &g).monic()
}

const HEURISTIC_TRIES: usize = 6;

fn heuristic(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    let (_, pa) = a.integer_primitive();
    let (_, pb) = b.integer_primitive();
    heuristic_int(&pa, &pb)
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms()
        .map(|(_, c)| c.numer().abs())
        .max()
        .unwrap_or_default()
}

fn integer_content(p: &Polynomial) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

fn positive(p: Polynomial) -> Polynomial {
    if p.has_negative_leading() {
        -p
    } else {
        p
    }
}

/// `p` with `v` replaced by the integer `xi`.
fn evaluate_at(p: &Polynomial, v: Symbol, xi: &BigInt) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let e = m.exp(v);
        out.add_term(
            m.with_exp(v, 0),
            c * Q::from_integer(num_traits::pow(xi.clone(), e as usize)),
        );
    }
    out
}

fn symmetric_mod(c: &BigInt, xi: &BigInt) -> BigInt {
    let r = c.mod_floor(xi);
    if &r * 2 > *xi {
        r - xi
    } else {
        r
    }
}

/// Reads the base-`xi` digits of the coefficients of `h` back as powers of `v`.
fn interpolate(h: &Polynomial, v: Symbol, xi: &BigInt) -> Polynomial {
    let mut out = Polynomial::zero();
    let mut h = h.clone();
    let mut i = 0;
    let inv = Q::new(BigInt::one(), xi.clone());
    while !h.is_zero() {
        let mut digit = Polynomial::zero();
        for (m, c) in h.terms() {
            let r = symmetric_mod(c.numer(), xi);
            if !r.is_zero() {
                digit.add_term(m.clone(), Q::from_integer(r));
            }
        }
        for (m, c) in digit.terms() {
            out.add_term(m.mul(&Monomial::var(v, i)), c.clone());
        }
        h = (&h - &digit).scale(&inv);
        i += 1;
    }
    out
}

/// Gcd over the integers of two integer-coefficient polynomials, with
/// positive leading coefficient; `None` when the heuristic fails.
fn heuristic_int(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    if f.is_zero() {
        return Some(positive(g.clone()));
    }
    if g.is_zero() {
        return Some(positive(f.clone()));
    }
    let c = integer_content(f).gcd(&integer_content(g));
    let constant = Polynomial::constant(Q::from_integer(c.clone()));
    if f.is_constant() || g.is_constant() {
        return Some(constant);
    }
    let vf = f.variables();
    let Some(v) = g.variables().into_iter().rev().find(|s| vf.contains(s)) else {
        return Some(constant);
    };
    let cq = Q::from_integer(c.clone());
    let pf = f.scale(&cq.recip());
    let pg = g.scale(&cq.recip());
    let mut xi = max_norm(&pf).min(max_norm(&pg)) * 2 + 29;
    for _ in 0..HEURISTIC_TRIES {
        let fe = evaluate_at(&pf, v, &xi);
        let ge = evaluate_at(&pg, v, &xi);
        if !fe.is_zero() && !ge.is_zero() {
            if let Some(h) = heuristic_int(&fe, &ge) {
                let cand = interpolate(&h, v, &xi);
                if !cand.is_zero() {
                    let cand = positive(cand.integer_primitive().1);
                    if pf.exact_div(&cand).is_some() && pg.exact_div(&cand).is_some() {
                        return Some(cand.scale(&cq));
                    }
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content(p: &Polynomial, v: Symbol) -> Polynomial {
    let mut acc = Polynomial::zero();
    for c in p.to_univariate(v) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

pub fn primitive_part(p: &Polynomial, v: Symbol) -> Polynomial {
    if p.is_zero() {
        return Polynomial::zero();
    }
    let c = content(p, v);
    p.exact_div(&c).unwrap()
}

fn degree(u: &[Polynomial]) -> Option<usize> {
    u.iter().rposition(|c| !c.is_zero())
}

fn trim(mut u: Vec<Polynomial>) -> Vec<Polynomial> {
    while u.last().map(|c| c.is_zero()).unwrap_or(false) {
        u.pop();
    }
    u
}

/// Pseudo-remainder of `a` by `b` (coefficient lists, `b` nonzero).
pub fn pseudo_remainder(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let db = degree(b).expect("nonzero divisor");
    let lb = &b[db];
    let mut r = trim(a.to_vec());
    let da = match degree(&r) {
        Some(d) => d,
        None => return r,
    };
    if da < db {
        return r;
    }
    let mut e = (da - db + 1) as i64;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        r = trim(r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn subresultant(mut a: Vec<Polynomial>, mut b: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut g = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let da = degree(&a).unwrap();
        let db = degree(&b).unwrap();
        let delta = (da - db) as u32;
        let r = pseudo_remainder(&a, &b);
        let dr = match degree(&r) {
            None => return b,
            Some(d) => d,
        };
        if dr == 0 {
            return vec![Polynomial::one()];
        }
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r
            .iter()
            .map(|c| {
                c.exact_div(&divisor)
                    .expect("subresultant division is exact")
            })
            .collect();
        g = a[degree(&a).unwrap()].clone();
        h = if delta == 0 {
            h
        } else {
            let num = g.pow(delta);
            num.exact_div(&h.pow(delta - 1))
                .expect("subresultant h update is exact")
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(Symbol::X)
    }
    fn y() -> Polynomial {
        Polynomial::var(Symbol::Y)
    }

    #[test]
    fn monomial_gcd() {
        let a = &(&x() * &x()) * &y();
        let b = &x() * &(&y() * &y());
        assert_eq!(gcd(&a, &b), &x() * &y());
    }

    #[test]
    fn difference_of_squares() {
        let a = &(&x() * &x()) - &(&y() * &y());
        let b = &x() - &y();
        assert_eq!(gcd(&a, &b), &x() - &y());
    }

    #[test]
    fn gcd_with_zero_is_normalized() {
        let p = (&x() + &y()).scale(&Q::from_integer((-3).into()));
        assert_eq!(gcd(&p, &Polynomial::zero()), &x() + &y());
    }

    #[test]
    fn coprime_inputs() {
        let a = &(&x() * &x()) + &Polynomial::one();
        let b = &x() + &y();
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn nontrivial_common_factor() {
        let k = Polynomial::var(Symbol::new("k"));
        let f = &(&x() * &k) + &(&y() * &y());
        let a = &f * &(&x() + &Polynomial::one());
        let b = &f * &(&y() - &k);
        assert_eq!(gcd(&a, &b), f.monic());
    }
}
