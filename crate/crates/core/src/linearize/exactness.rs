//! Recognising total x-derivatives.

use crate::algebra::{antiderivative, Symbol, Q};
use crate::jet::JetPolynomial;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("not a total derivative: {0}")]
pub struct NotExact(pub String);

/// `G` with `D_x G = f` and `order(G) = order(f) - 1`.
pub fn is_total_derivative(f: &JetPolynomial) -> Result<JetPolynomial, NotExact> {
    if f.order() == 0 {
        return Err(NotExact("order 0 input".into()));
    }
    let mut rem = f.clone();
    let mut g = JetPolynomial::zero();
    loop {
        let n = rem.order();
        if n < 2 {
            break;
        }
        if rem.degree_in(n) > 1 {
            return Err(NotExact(format!("nonlinear in u{}", n)));
        }
        let a = rem.diff_u(n);
        let mut g0 = JetPolynomial::zero();
        for (m, c) in a.terms() {
            let mut nm = *m;
            nm[n - 2] += 1;
            g0.add_term(nm, c.scale(&Q::from_integer(nm[n - 2].into()).recip()));
        }
        let dg = g0.total_derivative().map_err(|e| NotExact(e.to_string()))?;
        rem = &rem - &dg;
        if rem.order() >= n {
            return Err(NotExact(format!("compatibility failure at u{}", n)));
        }
        g = &g + &g0;
    }
    if rem.degree_in(1) > 1 {
        return Err(NotExact("nonlinear in u1".into()));
    }
    let a = rem.coeff(&[1, 0, 0, 0]);
    let b = rem.coeff(&[0, 0, 0, 0]);
    let phi = antiderivative(&a, Symbol::Y)
        .map_err(|_| NotExact("coefficient of u1 needs a logarithm in y".into()))?;
    let rest = &b - &phi.partial_derivative(Symbol::X);
    if rest.contains(Symbol::Y) {
        return Err(NotExact("compatibility failure at order 0".into()));
    }
    let psi = antiderivative(&rest, Symbol::X)
        .map_err(|_| NotExact("remainder needs a logarithm in x".into()))?;
    g.add_term([0, 0, 0, 0], &phi + &psi);
    Ok(g)
}

/// True when `f` is `D_x` of some lower-order jet.
pub fn is_exact(f: &JetPolynomial) -> bool {
    is_total_derivative(f).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearize::{generate, FormClass, RootCoefficients};
    use crate::parser::{parse, parse_rational};

    fn polar() -> RootCoefficients {
        let p = |s: &str| parse_rational(s, &[]).unwrap();
        RootCoefficients::new(p("x"), p("0"), p("2/x"), p("0"))
    }

    #[test]
    fn leibniz_pair() {
        let f = parse("y'''*y' + y''^2", &[]).unwrap();
        assert_eq!(
            is_total_derivative(&f).unwrap(),
            parse("y'*y''", &[]).unwrap()
        );
    }

    #[test]
    fn fourth18_integrates_to_third14() {
        let f = generate(&polar(), FormClass::Fourth18);
        let g = is_total_derivative(&f).unwrap();
        assert_eq!(g, generate(&polar(), FormClass::Third14));
    }

    #[test]
    fn fourth21_is_not_exact() {
        let f = generate(&polar(), FormClass::Fourth21);
        assert!(is_total_derivative(&f).is_err());
    }

    #[test]
    fn nonlinear_top_derivative() {
        let f = parse("y''^2", &[]).unwrap();
        assert_eq!(
            is_total_derivative(&f),
            Err(NotExact("nonlinear in u2".into()))
        );
    }

    #[test]
    fn first_order_needs_compatibility() {
        assert!(is_exact(&parse("y' + 2*x", &[]).unwrap()));
        assert!(!is_exact(&parse("y' + y", &[]).unwrap()));
    }
}
