//! Forward construction of class forms from root coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{RationalFunction, Symbol, Q};
use crate::jet::JetPolynomial;

use super::forms::{FormClass, FormCoefficients};

/// Coefficients of `y'' + c y'^3 - g y'^2 + h y' - d = 0`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RootCoefficients {
    pub c: RationalFunction,
    pub g: RationalFunction,
    pub h: RationalFunction,
    pub d: RationalFunction,
}

impl RootCoefficients {
    pub fn new(
        c: RationalFunction,
        g: RationalFunction,
        h: RationalFunction,
        d: RationalFunction,
    ) -> Self {
        RootCoefficients { c, g, h, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn get(&self, name: char) -> &RationalFunction {
        match name {
            'c' => &self.c,
            'g' => &self.g,
            'h' => &self.h,
            'd' => &self.d,
            _ => panic!("no root coefficient `{}`", name),
        }
    }

    pub fn get_mut(&mut self, name: char) -> &mut RationalFunction {
        match name {
            'c' => &mut self.c,
            'g' => &mut self.g,
            'h' => &mut self.h,
            'd' => &mut self.d,
            _ => panic!("no root coefficient `{}`", name),
        }
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        RootCoefficients {
            c: f(&self.c),
            g: f(&self.g),
            h: f(&self.h),
            d: f(&self.d),
        }
    }
}

impl fmt::Display for RootCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(c={}, g={}, h={}, d={})",
            self.c, self.g, self.h, self.d
        )
    }
}

type Derivation<'a> = &'a dyn Fn(&RationalFunction) -> RationalFunction;

/// `-(c y'^3 - g y'^2 + h y' - d)`, the value of y'' on the root equation.
fn second_derivative_value(r: &RootCoefficients) -> JetPolynomial {
    let mut p = JetPolynomial::zero();
    p.add_term([3, 0, 0, 0], -&r.c);
    p.add_term([2, 0, 0, 0], r.g.clone());
    p.add_term([1, 0, 0, 0], -&r.h);
    p.add_term([0, 0, 0, 0], r.d.clone());
    p
}

/// Builds a class form using `dx`, `dy` as the coefficient derivations.
pub fn generate_with(
    r: &RootCoefficients,
    class: FormClass,
    dx: Derivation,
    dy: Derivation,
) -> JetPolynomial {
    let rho = second_derivative_value(r);
    let d = |f: &JetPolynomial| {
        f.total_derivative_with(dx, dy)
            .expect("orders stay below four")
    };
    let root = &JetPolynomial::u(2) - &rho;
    if class == FormClass::Root8 {
        return root;
    }
    let third10 = d(&root);
    match class {
        FormClass::Third10 => third10,
        FormClass::Third14 => third10.substitute_derivative(2, &rho),
        FormClass::Fourth18 => d(&third10.substitute_derivative(2, &rho)),
        FormClass::Fourth21 => {
            d(&third10.substitute_derivative(2, &rho)).substitute_derivative(2, &rho)
        }
        FormClass::Fourth24 => d(&third10),
        FormClass::Fourth30 => {
            let u3 = &JetPolynomial::u(3) - &third10;
            d(&third10).substitute_derivative(3, &u3)
        }
        FormClass::Fourth34 => d(&third10).substitute_derivative(2, &rho),
        FormClass::Root8 => unreachable!(),
    }
}

/// The monic class form generated from `r`.
pub fn generate(r: &RootCoefficients, class: FormClass) -> JetPolynomial {
    generate_with(r, class, &|f| f.partial_derivative(Symbol::X), &|f| {
        f.partial_derivative(Symbol::Y)
    })
}

pub fn generate_coefficients(r: &RootCoefficients, class: FormClass) -> FormCoefficients {
    FormCoefficients::from_jet(&generate(r, class), class)
        .expect("generator output fits its layout")
}

/// The two scalar linearizability residuals.
pub fn tresse_criteria(r: &RootCoefficients) -> (RationalFunction, RationalFunction) {
    let (c, g, h, d) = (&r.c, &r.g, &r.h, &r.d);
    let x = |f: &RationalFunction| f.partial_derivative(Symbol::X);
    let y = |f: &RationalFunction| f.partial_derivative(Symbol::Y);
    let combo = |terms: [(i64, RationalFunction); 7]| -> RationalFunction {
        terms
            .iter()
            .map(|(k, t)| t.scale(&Q::from_integer((*k).into())))
            .sum()
    };
    let r1 = combo([
        (3, x(&(c * h))),
        (3, d * &y(c)),
        (-2, g * &x(g)),
        (-1, g * &y(h)),
        (-3, x(&x(c))),
        (-2, x(&y(g))),
        (-1, y(&y(h))),
    ]);
    let r2 = combo([
        (3, y(&(d * g))),
        (3, c * &x(d)),
        (-2, h * &y(h)),
        (-1, h * &x(g)),
        (-3, y(&y(d))),
        (-2, x(&y(h))),
        (-1, x(&x(g))),
    ]);
    (r1, r2)
}

/// Coefficients of `y'' + E3 y'^3 + E2 y'^2 + E1 y' + E0 = 0`.
pub fn lie_form(r: &RootCoefficients) -> FormCoefficients {
    let mut named = BTreeMap::new();
    named.insert("E3".to_string(), r.c.clone());
    named.insert("E2".to_string(), -&r.g);
    named.insert("E1".to_string(), r.h.clone());
    named.insert("E0".to_string(), -&r.d);
    FormCoefficients {
        class: FormClass::Root8,
        named,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse, parse_rational};

    fn rf(s: &str) -> RationalFunction {
        parse_rational(s, &["k", "l"]).unwrap()
    }

    fn root(c: &str, g: &str, h: &str, d: &str) -> RootCoefficients {
        RootCoefficients::new(rf(c), rf(g), rf(h), rf(d))
    }

    #[test]
    fn root_equation_matches_text() {
        let r = root("0", "2/y", "k/2", "-l*y");
        let f = parse("y'' - 2*y'^2/y + k*y'/2 + l*y = 0", &["k", "l"]).unwrap();
        assert_eq!(generate(&r, FormClass::Root8), f);
    }

    #[test]
    fn polar_fourth21_leading_coefficient() {
        let r = root("x", "0", "2/x", "0");
        let fc = generate_coefficients(&r, FormClass::Fourth21);
        assert_eq!(fc.get("P7"), rf("15*x^3"));
        let shape = generate(&r, FormClass::Fourth21).shape();
        assert_eq!(
            shape.components.keys().collect::<Vec<_>>(),
            vec![&crate::jet::Shape::PURE]
        );
        assert_eq!(shape.degree(crate::jet::Shape::PURE), Some(7));
    }

    #[test]
    fn third14_printed_example() {
        let r = root("-x/y^2", "1/y", "2/x", "0");
        let expect = parse(
            "y''' - 3*x^2*y'^5/y^4 - 3*x*y'^4/y^3 + 6*y'^3/y^2 + 6*y'^2/(x*y) - 6*y'/x^2",
            &[],
        )
        .unwrap();
        assert_eq!(generate(&r, FormClass::Third14), expect);
    }

    #[test]
    fn third14_first_coefficients() {
        let r = root("x*y", "1/y + x", "k/2", "x*y^2 - l");
        let fc = generate_coefficients(&r, FormClass::Third14);
        let (c, g, h, d) = (&r.c, &r.g, &r.h, &r.d);
        let dy = |f: &RationalFunction| f.partial_derivative(Symbol::Y);
        let dx = |f: &RationalFunction| f.partial_derivative(Symbol::X);
        let n = RationalFunction::from_int;
        assert_eq!(fc.get("alpha"), &n(3) * &c.pow(2));
        assert_eq!(fc.get("beta"), &(&(&n(5) * c) * g) + &dy(c));
        assert_eq!(
            fc.get("gamma"),
            &(&(&(&(&n(4) * c) * h) + &(&n(2) * &g.pow(2))) + &dy(g)) - &dx(c)
        );
        assert_eq!(
            fc.get("delta"),
            &(&(&(&(&n(3) * c) * d) + &(&(&n(3) * g) * h)) + &dy(h)) - &dx(g)
        );
        assert_eq!(
            fc.get("epsilon"),
            &(&(&(&(&n(2) * d) * g) + &h.pow(2)) + &dy(d)) - &dx(h)
        );
        assert_eq!(fc.get("phi"), &(d * h) - &dx(d));
    }

    #[test]
    fn criteria_examples() {
        let z = RationalFunction::zero();
        assert_eq!(
            tresse_criteria(&root("x", "0", "2/x", "0")),
            (z.clone(), z.clone())
        );
        assert_eq!(
            tresse_criteria(&RootCoefficients::zero()),
            (z.clone(), z.clone())
        );
        assert_eq!(
            tresse_criteria(&root("0", "0", "0", "y^3")),
            (z, rf("-18*y"))
        );
    }

    #[test]
    fn lie_form_signs() {
        let fc = lie_form(&root("0", "2/y", "k/2", "-l*y"));
        assert_eq!(fc.get("E3"), RationalFunction::zero());
        assert_eq!(fc.get("E2"), rf("-2/y"));
        assert_eq!(fc.get("E1"), rf("k/2"));
        assert_eq!(fc.get("E0"), rf("l*y"));
        let polar = lie_form(&root("x", "0", "2/x", "0"));
        assert_eq!(polar.get("E3"), rf("x"));
        assert_eq!(polar.get("E1"), rf("2/x"));
    }
}
