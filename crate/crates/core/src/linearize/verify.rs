//! Membership check: regeneration plus the linearizability criteria.

use crate::algebra::RationalFunction;
use crate::jet::{monomial_string, JetPolynomial};

use super::forms::FormClass;
use super::generate::{generate, tresse_criteria, RootCoefficients};

/// A nonzero difference, named by coefficient slot or criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: RationalFunction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub ok: bool,
    pub residuals: Vec<Residual>,
}

impl Verification {
    pub fn names(&self) -> Vec<&str> {
        self.residuals.iter().map(|r| r.name.as_str()).collect()
    }
}

/// Slot-by-slot difference `f - generate(root, class)`, with the layout's
/// display signs applied.
pub fn regeneration_residuals(
    f: &JetPolynomial,
    class: FormClass,
    root: &RootCoefficients,
) -> Vec<Residual> {
    let f = f.normalize_monic().unwrap_or_else(|_| f.clone());
    let diff = &f - &generate(root, class);
    let layout = class.layout();
    let mut out = Vec::new();
    for (m, c) in diff.terms() {
        let (name, value) = match layout.iter().find(|(_, lm, _)| lm == m) {
            Some((n, _, s)) => (n.clone(), if *s < 0 { -c } else { c.clone() }),
            None => (monomial_string(m), c.clone()),
        };
        out.push(Residual { name, value });
    }
    out
}

pub fn verify(f: &JetPolynomial, class: FormClass, root: &RootCoefficients) -> Verification {
    let mut residuals = regeneration_residuals(f, class, root);
    let (r1, r2) = tresse_criteria(root);
    for (name, r) in [("criterion1", r1), ("criterion2", r2)] {
        if !r.is_zero() {
            residuals.push(Residual {
                name: name.to_string(),
                value: r,
            });
        }
    }
    Verification {
        ok: residuals.is_empty(),
        residuals,
    }
}
