//! The eight class forms: named coefficient layouts and shapes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::RationalFunction;
use crate::jet::{JetMonomial, JetPolynomial, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormClass {
    Root8,
    Third10,
    Third14,
    Fourth18,
    Fourth21,
    Fourth24,
    Fourth30,
    Fourth34,
}

impl FormClass {
    pub const ALL: [FormClass; 8] = [
        FormClass::Root8,
        FormClass::Third10,
        FormClass::Third14,
        FormClass::Fourth18,
        FormClass::Fourth21,
        FormClass::Fourth24,
        FormClass::Fourth30,
        FormClass::Fourth34,
    ];

    /// Order in which classification tries the classes.
    pub const CLASSIFY_ORDER: [FormClass; 8] = [
        FormClass::Root8,
        FormClass::Third10,
        FormClass::Third14,
        FormClass::Fourth18,
        FormClass::Fourth24,
        FormClass::Fourth21,
        FormClass::Fourth30,
        FormClass::Fourth34,
    ];

    pub const FOURTH: [FormClass; 5] = [
        FormClass::Fourth18,
        FormClass::Fourth21,
        FormClass::Fourth24,
        FormClass::Fourth30,
        FormClass::Fourth34,
    ];

    pub fn order(self) -> usize {
        match self {
            FormClass::Root8 => 2,
            FormClass::Third10 | FormClass::Third14 => 3,
            _ => 4,
        }
    }

    pub fn is_total_derivative_class(self) -> bool {
        matches!(self, FormClass::Fourth18 | FormClass::Fourth24)
    }

    pub fn name(self) -> &'static str {
        match self {
            FormClass::Root8 => "Root8",
            FormClass::Third10 => "Third10",
            FormClass::Third14 => "Third14",
            FormClass::Fourth18 => "Fourth18",
            FormClass::Fourth21 => "Fourth21",
            FormClass::Fourth24 => "Fourth24",
            FormClass::Fourth30 => "Fourth30",
            FormClass::Fourth34 => "Fourth34",
        }
    }

    fn lead(self) -> JetMonomial {
        let mut m = [0; 4];
        m[self.order() - 1] = 1;
        m
    }

    /// `(name, monomial, sign)` for every named coefficient.
    pub fn layout(self) -> Vec<(String, JetMonomial, i8)> {
        let mut out = Vec::new();
        let mut push = |name: &str, m: JetMonomial, s: i8| out.push((name.to_string(), m, s));
        let u = |e1: u8, e2: u8, e3: u8| -> JetMonomial { [e1, e2, e3, 0] };
        let alt = |top: usize, first: i8| -> Vec<(usize, i8)> {
            (0..=top)
                .rev()
                .map(|k| {
                    (
                        k,
                        if (top - k).is_multiple_of(2) {
                            first
                        } else {
                            -first
                        },
                    )
                })
                .collect()
        };
        match self {
            FormClass::Root8 => {
                for k in (0..=3).rev() {
                    push(&format!("E{}", k), u(k as u8, 0, 0), 1);
                }
            }
            FormClass::Third10 => {
                for (k, s) in alt(2, 1) {
                    push(&format!("A{}", k), u(k as u8, 1, 0), s);
                }
                for (k, s) in alt(4, 1) {
                    push(&format!("B{}", k), u(k as u8, 0, 0), s);
                }
            }
            FormClass::Third14 => {
                let names = ["phi", "epsilon", "delta", "gamma", "beta", "alpha"];
                for (k, s) in alt(5, -1) {
                    push(names[k], u(k as u8, 0, 0), s);
                }
            }
            FormClass::Fourth18 => {
                for (k, s) in alt(4, -1) {
                    push(&format!("A{}", k), u(k as u8, 1, 0), s);
                }
                for (k, s) in alt(6, -1) {
                    push(&format!("B{}", k), u(k as u8, 0, 0), s);
                }
            }
            FormClass::Fourth21 => {
                for (k, s) in alt(7, 1) {
                    push(&format!("P{}", k), u(k as u8, 0, 0), s);
                }
            }
            FormClass::Fourth24 => {
                for (k, s) in alt(2, 1) {
                    push(&format!("A{}", k), u(k as u8, 0, 1), s);
                }
                for (k, s) in alt(1, 1) {
                    push(&format!("B{}", k), u(k as u8, 2, 0), s);
                }
                for (k, s) in alt(3, 1) {
                    push(&format!("C{}", k), u(k as u8, 1, 0), s);
                }
                for (k, s) in alt(5, -1) {
                    push(&format!("D{}", k), u(k as u8, 0, 0), s);
                }
            }
            FormClass::Fourth30 => {
                for (k, s) in alt(1, 1) {
                    push(&format!("Q{}", k), u(k as u8, 2, 0), s);
                }
                for (k, s) in alt(4, -1) {
                    push(&format!("R{}", k), u(k as u8, 1, 0), s);
                }
                for (k, s) in alt(6, -1) {
                    push(&format!("S{}", k), u(k as u8, 0, 0), s);
                }
            }
            FormClass::Fourth34 => {
                for (k, s) in alt(2, 1) {
                    push(&format!("A{}", k), u(k as u8, 0, 1), s);
                }
                for (k, s) in alt(7, 1) {
                    push(&format!("B{}", k), u(k as u8, 0, 0), s);
                }
            }
        }
        out
    }

    /// Shape bounds: `(pattern over (u2,u3,u4), max u1-degree)`.
    pub fn shape_bounds(self) -> Vec<([u8; 3], u8)> {
        let mut b: BTreeMap<[u8; 3], u8> = BTreeMap::new();
        for (_, m, _) in self.layout() {
            let e = b.entry([m[1], m[2], m[3]]).or_insert(0);
            *e = (*e).max(m[0]);
        }
        b.into_iter().collect()
    }

    pub fn shape_fits(self, shape: &Shape) -> bool {
        shape.fits(self.lead(), &self.shape_bounds())
    }
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        FormClass::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown class `{}`", s))
    }
}

/// Named coefficients of a class form, signs as displayed in the form.
#[derive(Clone, Debug, PartialEq)]
pub struct FormCoefficients {
    pub class: FormClass,
    pub named: BTreeMap<String, RationalFunction>,
}

impl FormCoefficients {
    /// Reads the named coefficients off a monic jet. Fails with the first
    /// term that has no slot in the layout.
    pub fn from_jet(f: &JetPolynomial, class: FormClass) -> Result<Self, JetMonomial> {
        let layout = class.layout();
        let lead = class.lead();
        for (m, c) in f.terms() {
            if *m == lead && c.is_one() {
                continue;
            }
            if !layout.iter().any(|(_, lm, _)| lm == m) {
                return Err(*m);
            }
        }
        if !f.coeff(&lead).is_one() {
            return Err(lead);
        }
        let named = layout
            .into_iter()
            .map(|(n, m, s)| {
                let c = f.coeff(&m);
                (n, if s < 0 { -c } else { c })
            })
            .collect();
        Ok(FormCoefficients { class, named })
    }

    pub fn to_jet(&self) -> JetPolynomial {
        let mut f = JetPolynomial::term(self.class.lead(), RationalFunction::one());
        for (n, m, s) in self.class.layout() {
            if let Some(c) = self.named.get(&n) {
                f.add_term(m, if s < 0 { -c } else { c.clone() });
            }
        }
        f
    }

    pub fn get(&self, name: &str) -> RationalFunction {
        self.named.get(name).cloned().unwrap_or_default()
    }

    /// Names in display order (highest index first within each group).
    pub fn names(&self) -> Vec<String> {
        self.class.layout().into_iter().map(|(n, _, _)| n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn fourth21_layout_signs() {
        let f = parse("y'''' + 2*y'^7 - 3*y'^6 + 5", &[]).unwrap();
        let fc = FormCoefficients::from_jet(&f, FormClass::Fourth21).unwrap();
        assert_eq!(fc.get("P7"), RationalFunction::from_int(2));
        assert_eq!(fc.get("P6"), RationalFunction::from_int(3));
        assert_eq!(fc.get("P0"), RationalFunction::from_int(-5));
        assert_eq!(fc.to_jet(), f);
    }

    #[test]
    fn shapes() {
        let f = parse("y'''' + y'^10", &[]).unwrap();
        assert!(!FormClass::Fourth21.shape_fits(&f.shape()));
        let g = parse("y'''' + x*y'^2*y'' - y''^2 + y'", &[]).unwrap();
        assert!(FormClass::Fourth30.shape_fits(&g.shape()));
        assert!(!FormClass::Fourth21.shape_fits(&g.shape()));
        assert_eq!(
            FormClass::Fourth30.shape_bounds(),
            vec![([0, 0, 0], 6), ([1, 0, 0], 4), ([2, 0, 0], 1)]
        );
    }

    #[test]
    fn every_layout_has_distinct_slots() {
        for class in FormClass::ALL {
            let l = class.layout();
            let mut ms: Vec<_> = l.iter().map(|(_, m, _)| *m).collect();
            ms.sort();
            ms.dedup();
            assert_eq!(ms.len(), l.len(), "{}", class);
        }
    }

    #[test]
    fn parse_class_tag() {
        assert_eq!(
            "fourth21".parse::<FormClass>().unwrap(),
            FormClass::Fourth21
        );
        assert!("fifth".parse::<FormClass>().is_err());
    }
}
