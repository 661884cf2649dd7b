//! Closed-form coefficient relations for each class, checked independently
//! of regeneration.

use std::fmt;

use crate::algebra::RationalFunction;
use crate::jet::JetPolynomial;

use super::forms::{FormClass, FormCoefficients};
use super::formula::{relation_residual, Env};
use super::generate::RootCoefficients;
use super::verify::regeneration_residuals;

const ROOT8: &[&str] = &["E3 = c", "E2 = -g", "E1 = h", "E0 = -d"];

const THIRD10: &[&str] = &[
    "c = A2/3",
    "g = A1/2",
    "h = A0",
    "d_x = -B2",
    "d_y = B1 - A0_x",
    "B4 = A2_y/3",
    "B3 = A1_y/2 - A1_x/3",
    "B2 = A0_y - A1_x/2",
];

const THIRD14: &[&str] = &[
    "alpha = 3*c^2",
    "beta = 5*c*g + c_y",
    "gamma = 4*c*h + 2*g^2 + g_y - c_x",
    "delta = 3*c*d + 3*g*h + h_y - g_x",
    "epsilon = 2*d*g + h^2 + d_y - h_x",
    "phi = d*h - d_x",
];

const FOURTH18: &[&str] = &[
    "c^2 = A4/15",
    "g = (A3 - 4*c_y)/(20*c)",
    "h = (A2 - 6*g^2 - 3*g_y + 3*c_x)/(12*c)",
    "d = (A1 - 6*g*h - 2*h_y + 2*g_x)/(6*c)",
    "B6 = A4/5",
    "B5 = A3_y/4 - A4_x/5",
    "B4 = A2_y/3 - A3_x/4",
    "B3 = A1_y/2 - A2_x/3",
    "B2 = A0_y - A1_x/2",
    "B1 = d*h_y + h*d_y - d_xy - A0_x/2",
    "B0 = d*h_x + h*d_x - d_xx",
    "A0 = 2*g*d + h^2 + d_y - h_x",
];

const FOURTH21: &[&str] = &[
    "c^3 = P7/15",
    "g = P6/(35*c^2) - 2*c_y/(7*c)",
    "h = P5/(27*c^2) - 26*g^2/(27*c) + c_x/(3*c) - g*c_y/(3*c^2) - 8*g_y/(27*c) - c_yy/(27*c^2)",
    "d = P4/(21*c^2) - 38*g*h/(21*c) - 2*g^3/(7*c^2) + 8*g*c_x/(21*c^2) - 8*h*c_y/(21*c^2) \
     + g_x/(3*c) - g*g_y/(3*c^2) - 2*h_y/(7*c) + 2*c_xy/(21*c^2) - g_yy/(21*c^2)",
    "P3 = 28*c*d*g + 13*c*h^2 + 12*g^2*h - 3*(h + d)*c_x + 4*d*c_y - (2*g + 3*h)*g_x \
     + (3*h + 2*d)*g_y - (c + 3*g)*h_x + 2*(g + h)*h_y - 3*c*d_x + (c + 2*g)*d_y + g_xx - 2*h_xy + d_yy",
    "P2 = 18*c*h*d + 8*g^2*d + 7*g*h^2 - 6*d*c_x - 5*h*g_x + 4*d*g_y - 4*g*h_x + 4*h*h_y \
     - 3*c*d_x + 2*g*d_y + g_xx - 2*h_xy + d_yy",
    "P1 = 6*c*d^2 - 8*g*h*d + h^3 - 4*d*g_x - 3*h*h_x + 3*d*h_y - 2*g*d_x + 2*h*d_y + h_xx - 2*d_xy",
    "P0 = 2*g*d^2 + h^2*d - 2*d*h_x - h*d_x + d*d_y + d_xx",
];

const FOURTH24: &[&str] = &[
    "c = A2/3",
    "c = B1/6",
    "g = A1/2",
    "g = B0/2",
    "h = A0",
    "C3 = 7*A2_y/3",
    "C2 = 5*A1_y/2 - 2*A2_x",
    "C1 = 3*A0_y - 2*A1_x",
    "D5 = A2_yy/3",
    "D4 = A1_yy/2 - 2*A2_xy/3",
    "D3 = A0_yy/2 - A1_xy + A2_xx/3",
    "C0 = d_y - 2*A0_x",
    "D0 = d_xx",
    "D1 + 2*C0_x + 3*A0_xx = 0",
    "D2 - C0_y - A1_xx/2 = 0",
];

const FOURTH30: &[&str] = &[
    "c = Q1/6",
    "g = Q0/2",
    "h = (R2 - Q0^2 + Q1_x - 5*Q0_y/2)/Q1",
    "d_y = R0 - h^2 + 2*h_x",
    "R4 = Q1^2/4",
    "R3 = Q1*Q0 + 7*Q1_y/6",
    "R1 = 2*Q0*h + h^2 + 3*h_y - 2*Q0_x",
    "S6 = Q1*Q1_y/12",
    "S5 = -Q1*Q1_x/36 + Q0*Q1_y/6 + Q1*Q0_y/4 + Q1_yy/6",
    "S4 = -Q0*Q1_x/6 + h*Q1_y/6 - Q1*Q0_x/4 + Q0*Q0_y/2 + Q1*h_y/2 - Q1_xy/3 + Q0_yy/2",
    "S3 = Q1*(R0 - h^2 - h_x)/2 - h*Q1/6 - Q0*Q0_x/2 + h*Q0_y/2 + Q0*h_y + Q1_xx/6 - Q0_xy + h_yy",
    "S2 = Q1*d_x/2 + Q0*(R0 - h^2 + h_x) - h*h_y - h*Q0_x/2 + R0_y + Q0_xx/2",
    "S1 = h*(R0 - h^2 + 5*h_x) - 2*R0_x - Q0*d_x - 3*h_xx",
    "S0 = h*d_x - d_xx",
];

const FOURTH34: &[&str] = &[
    "c^2 = A2/3",
    "g = A1/2",
    "h = A0",
    "d = (B4 - 8*c*A1*A0 - A1^3/4 + 3*A1*c_x - 7*A0*c_y + 2*c*A1_x - 5*A1*A1_y/4 - 3*c*A0_x \
     + 2*c_xy - A1_yy/2)/(4*A2)",
    "B7 = 6*c^3",
    "B6 = 7*c*(A1 + c_y)",
    "B5 = 3*A2*A0 + 5*c*A1^2/2 - 6*c*c_x + 7*A1*c_y/2 + 5*c*A1_y/2 + c_yy",
    "B3 = 8*c*A1*d + 6*c*A0^2 + A1^2*A0 - 6*A0*c_x + 7*d*c_y - A1*A1_x + 5*A0*A1_y/2 \
     - 2*c*A0_x + 3*A1*A0_y/2 + c*d_y + c_xx - A1_xy + A0_yy",
    "B2 = 12*c*A0*d + A1^2*d + A1*A0^2 - 6*d*c_x - 2*A0*A1_x + 5*d*A1_y/2 - A1*A0_x \
     + 3*A0*A0_y + A1*d_y/2 + A1_xx/2 - 2*A0_xy + d_yy",
    "B1 = 6*c*d^2 + 2*A1*A0*d - 4*d*A1_x - 2*A0*A0_x + 3*d*A0_y + A0*d_y + A0_xx - 2*d_xy",
    "B0 = d*(A1*d + d_y - A0_x) + d_xx",
];

pub fn relations(class: FormClass) -> &'static [&'static str] {
    match class {
        FormClass::Root8 => ROOT8,
        FormClass::Third10 => THIRD10,
        FormClass::Third14 => THIRD14,
        FormClass::Fourth18 => FOURTH18,
        FormClass::Fourth21 => FOURTH21,
        FormClass::Fourth24 => FOURTH24,
        FormClass::Fourth30 => FOURTH30,
        FormClass::Fourth34 => FOURTH34,
    }
}

/// Relations whose closed form is known not to match the generated class
/// form, keyed by class and the relation's left-hand side.
pub const KNOWN_DISCREPANCIES: &[(FormClass, &str)] = &[
    (FormClass::Third10, "d_y"),
    (FormClass::Third10, "B3"),
    (FormClass::Fourth18, "B6"),
    (FormClass::Fourth18, "B1"),
    (FormClass::Fourth21, "P3"),
    (FormClass::Fourth21, "P1"),
    (FormClass::Fourth24, "D5"),
    (FormClass::Fourth24, "D4"),
    (FormClass::Fourth24, "D1 + 2*C0_x + 3*A0_xx"),
    (FormClass::Fourth30, "R1"),
    (FormClass::Fourth30, "S5"),
    (FormClass::Fourth30, "S3"),
    (FormClass::Fourth34, "c^2"),
    (FormClass::Fourth34, "d"),
    (FormClass::Fourth34, "B6"),
    (FormClass::Fourth34, "B5"),
];

fn lhs(text: &str) -> &str {
    text.split('=').next().unwrap_or("").trim()
}

pub fn is_known_discrepancy(class: FormClass, relation: &str) -> bool {
    KNOWN_DISCREPANCIES
        .iter()
        .any(|(c, l)| *c == class && *l == lhs(relation))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Holds,
    Fails(RationalFunction),
    NotEvaluable(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub relation: &'static str,
    pub outcome: Outcome,
}

pub fn check_relations(
    f: &JetPolynomial,
    class: FormClass,
    root: &RootCoefficients,
) -> Result<Vec<RelationCheck>, String> {
    let coeffs = FormCoefficients::from_jet(f, class).map_err(|m| {
        format!(
            "term {} has no slot in {}",
            crate::jet::monomial_string(&m),
            class
        )
    })?;
    let mut env: Env = coeffs.named;
    for (k, v) in [
        ("c", &root.c),
        ("g", &root.g),
        ("h", &root.h),
        ("d", &root.d),
    ] {
        env.insert(k.to_string(), v.clone());
    }
    Ok(relations(class)
        .iter()
        .map(|&relation| {
            let outcome = match relation_residual(relation, &env) {
                Ok(r) if r.is_zero() => Outcome::Holds,
                Ok(r) => Outcome::Fails(r),
                Err(e) => Outcome::NotEvaluable(e),
            };
            RelationCheck { relation, outcome }
        })
        .collect())
}

/// Comparison of the closed-form relations with regeneration on one input.
#[derive(Clone, Debug, PartialEq)]
pub struct Audit {
    pub class: FormClass,
    pub regenerates: bool,
    pub checks: Vec<RelationCheck>,
}

impl Audit {
    pub fn failing(&self) -> Vec<&RelationCheck> {
        self.checks
            .iter()
            .filter(|c| matches!(c.outcome, Outcome::Fails(_)))
            .collect()
    }

    /// Failures not covered by the known discrepancy list.
    pub fn unexplained(&self) -> Vec<&RelationCheck> {
        self.failing()
            .into_iter()
            .filter(|c| !is_known_discrepancy(self.class, c.relation))
            .collect()
    }

    /// Both checkers accept, or both reject, once known discrepancies are set
    /// aside.
    pub fn agrees(&self) -> bool {
        self.regenerates == self.unexplained().is_empty()
    }
}

pub fn audit(f: &JetPolynomial, class: FormClass, root: &RootCoefficients) -> Audit {
    let regenerates = regeneration_residuals(f, class, root).is_empty();
    let checks = check_relations(f, class, root).unwrap_or_default();
    Audit {
        class,
        regenerates,
        checks,
    }
}

impl fmt::Display for Audit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: regenerates={}", self.class, self.regenerates)?;
        for c in &self.checks {
            match &c.outcome {
                Outcome::Holds => {}
                Outcome::Fails(r) => {
                    let tag = if is_known_discrepancy(self.class, c.relation) {
                        "known"
                    } else {
                        "UNEXPLAINED"
                    };
                    writeln!(f, "  {} [{}] residual {}", c.relation, tag, r)?
                }
                Outcome::NotEvaluable(e) => writeln!(f, "  {} [skipped] {}", c.relation, e)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearize::generate;
    use crate::parser::parse_rational;

    fn root(c: &str, g: &str, h: &str, d: &str) -> RootCoefficients {
        let p = |s: &str| parse_rational(s, &["k", "l"]).unwrap();
        RootCoefficients::new(p(c), p(g), p(h), p(d))
    }

    fn roots() -> Vec<RootCoefficients> {
        vec![
            root("0", "2/y", "k/2", "-l*y"),
            root("x", "0", "2/x", "0"),
            root("-x/y^2", "1/y", "2/x", "0"),
        ]
    }

    #[test]
    fn generated_forms_agree() {
        for r in roots() {
            for class in FormClass::ALL {
                let a = audit(&generate(&r, class), class, &r);
                assert!(a.regenerates && a.agrees(), "{}", a);
            }
        }
    }

    #[test]
    fn perturbed_input_is_rejected_by_both() {
        let r = root("x", "0", "2/x", "0");
        let mut f = generate(&r, FormClass::Fourth21);
        f.add_term([0, 0, 0, 0], RationalFunction::one());
        let a = audit(&f, FormClass::Fourth21, &r);
        assert!(!a.regenerates);
        assert!(!a.unexplained().is_empty());
        assert!(a.agrees());
    }

    #[test]
    fn every_relation_parses() {
        let r = root("x", "1/y", "2/x", "x*y");
        for class in FormClass::ALL {
            for c in check_relations(&generate(&r, class), class, &r).unwrap() {
                if let Outcome::NotEvaluable(e) = &c.outcome {
                    panic!("{}: {}", c.relation, e);
                }
            }
        }
    }
}
