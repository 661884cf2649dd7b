//! Text output in the same grammar the parser reads.

use num_traits::{One, Signed};

use super::poly::{Monomial, Polynomial};
use super::rational_function::RationalFunction;
use super::Q;

fn monomial_to_string(m: &Monomial) -> String {
    m.symbols()
        .map(|(s, e)| {
            if e == 1 {
                s.name()
            } else {
                format!("{}^{}", s.name(), e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn rational_to_string(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn poly_to_string(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms_desc().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&rational_to_string(&a));
        } else if a.is_one() {
            out.push_str(&monomial_to_string(m));
        } else {
            out.push_str(&rational_to_string(&a));
            out.push('*');
            out.push_str(&monomial_to_string(m));
        }
    }
    out
}

/// Numerator and denominator scaled to integer coefficients. The
/// denominator is `None` when it is 1.
pub fn integer_parts(r: &RationalFunction) -> (Polynomial, Option<Polynomial>) {
    let (fnum, pn) = r.numer().integer_primitive();
    let (fden, pd) = r.denom().integer_primitive();
    let f = fnum / fden;
    let n = pn.scale(&Q::from_integer(f.numer().clone()));
    let d = pd.scale(&Q::from_integer(f.denom().clone()));
    if d.is_one() {
        (n, None)
    } else {
        (n, Some(d))
    }
}

fn is_simple_power(p: &Polynomial) -> bool {
    match p.leading() {
        Some((m, c)) => p.is_monomial() && c.is_one() && m.symbols().count() == 1,
        None => false,
    }
}

fn is_single_token(p: &Polynomial) -> bool {
    // an integer or a bare symbol power
    p.as_constant()
        .map(|c| c.is_integer() && !c.is_negative())
        .unwrap_or(false)
        || is_simple_power(p)
}

pub fn rf_to_string(r: &RationalFunction) -> String {
    let (n, d) = integer_parts(r);
    match d {
        None => poly_to_string(&n),
        Some(d) => {
            let ns = if n.len() > 1 {
                format!("({})", poly_to_string(&n))
            } else {
                poly_to_string(&n)
            };
            let ds = if is_single_token(&d) {
                poly_to_string(&d)
            } else {
                format!("({})", poly_to_string(&d))
            };
            format!("{}/{}", ns, ds)
        }
    }
}

/// Text that stays correct when followed by `*<factor>`; a leading minus
/// sign is allowed.
pub fn rf_factor_string(r: &RationalFunction) -> String {
    if r.numer().len() > 1 && r.is_polynomial() {
        format!("({})", rf_to_string(r))
    } else {
        rf_to_string(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Symbol;

    #[test]
    fn prints_in_parser_grammar() {
        let x = RationalFunction::x();
        let y = RationalFunction::y();
        assert_eq!(rf_to_string(&-(&x / &y.pow(2))), "-x/y^2");
        assert_eq!(rf_to_string(&(&RationalFunction::from_int(2) / &x)), "2/x");
        let k = RationalFunction::var(Symbol::new("k"));
        assert_eq!(rf_to_string(&(&k / &RationalFunction::from_int(2))), "k/2");
        assert_eq!(
            rf_to_string(&(&x / &(&y * &RationalFunction::from_int(2)))),
            "x/(2*y)"
        );
        assert_eq!(rf_to_string(&(&(&x + &y) / &x)), "(x + y)/x");
        assert_eq!(rf_to_string(&RationalFunction::zero()), "0");
    }
}
