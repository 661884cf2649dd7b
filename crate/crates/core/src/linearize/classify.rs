//! Classification pipeline over the catalogued class forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::RationalFunction;
use crate::jet::JetPolynomial;

use super::exactness::{is_total_derivative, NotExact};
use super::extract::{extract, ExtractionFailure};
use super::forms::FormClass;
use super::generate::{generate, tresse_criteria, RootCoefficients};
use super::verify::{verify, Residual};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Linearizable,
    NotThisClass,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Linearizable => "linearizable",
            Verdict::NotThisClass => "not-this-class",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub class: FormClass,
    pub extracted: Result<RootCoefficients, ExtractionFailure>,
    pub branch_notes: Vec<String>,
    pub constraints_ok: bool,
    pub residuals: Vec<Residual>,
    pub criteria: Option<(RationalFunction, RationalFunction)>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub input: JetPolynomial,
    pub normalized: JetPolynomial,
    pub order: usize,
    pub candidates: Vec<Candidate>,
    pub total_derivative_of: Result<JetPolynomial, NotExact>,
    pub root_equation: Option<JetPolynomial>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("unsupported order {0}; expected 2, 3 or 4")]
    UnsupportedOrder(usize),
    #[error("leading coefficient is zero")]
    ZeroLeading,
}

impl ClassificationReport {
    /// Classes whose candidate verified with vanishing criteria.
    pub fn linearizable_classes(&self) -> Vec<FormClass> {
        let mut out: Vec<FormClass> = self
            .candidates
            .iter()
            .filter(|c| c.verdict == Verdict::Linearizable)
            .map(|c| c.class)
            .collect();
        out.dedup();
        out
    }

    pub fn is_linearizable(&self) -> bool {
        !self.linearizable_classes().is_empty()
    }

    pub fn first_linearizable(&self) -> Option<&Candidate> {
        self.candidates
            .iter()
            .find(|c| c.verdict == Verdict::Linearizable)
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson::from(self)
    }
}

fn failure_verdict(e: &ExtractionFailure) -> Verdict {
    match e {
        ExtractionFailure::InconsistentCoefficients | ExtractionFailure::NotAPerfectPower(_) => {
            Verdict::NotThisClass
        }
        _ => Verdict::Inconclusive,
    }
}

fn candidates_for(f: &JetPolynomial, class: FormClass) -> Vec<Candidate> {
    match extract(f, class) {
        Err(e) => vec![Candidate {
            class,
            verdict: failure_verdict(&e),
            extracted: Err(e),
            branch_notes: Vec::new(),
            constraints_ok: false,
            residuals: Vec::new(),
            criteria: None,
        }],
        Ok(found) => found
            .into_iter()
            .map(|ex| {
                let v = verify(f, class, &ex.root);
                let (r1, r2) = tresse_criteria(&ex.root);
                let constraints_ok = v.residuals.iter().all(|r| r.name.starts_with("criterion"));
                let verdict = if v.ok {
                    Verdict::Linearizable
                } else {
                    Verdict::NotThisClass
                };
                Candidate {
                    class,
                    extracted: Ok(ex.root),
                    branch_notes: ex.notes,
                    constraints_ok,
                    residuals: v.residuals,
                    criteria: Some((r1, r2)),
                    verdict,
                }
            })
            .collect(),
    }
}

pub fn classify(f: &JetPolynomial) -> Result<ClassificationReport, ClassifyError> {
    let order = f.order();
    if !(2..=4).contains(&order) {
        return Err(ClassifyError::UnsupportedOrder(order));
    }
    let normalized = f
        .normalize_monic()
        .map_err(|_| ClassifyError::ZeroLeading)?;
    let mut candidates = Vec::new();
    for class in FormClass::CLASSIFY_ORDER {
        if class.order() == order {
            candidates.extend(candidates_for(&normalized, class));
        }
    }
    let mut notes = Vec::new();
    if &normalized != f {
        notes.push("input divided by its leading coefficient".to_string());
    }
    let root_equation = candidates
        .iter()
        .find(|c| c.verdict == Verdict::Linearizable)
        .and_then(|c| c.extracted.as_ref().ok())
        .map(|r| generate(r, FormClass::Root8));
    if root_equation.is_none() {
        notes.push("no catalogued class verifies".to_string());
    }
    let mut classes: Vec<FormClass> = candidates
        .iter()
        .filter(|c| c.verdict == Verdict::Linearizable)
        .map(|c| c.class)
        .collect();
    classes.dedup();
    if classes.len() > 1 {
        let names: Vec<&str> = classes.iter().map(|c| c.name()).collect();
        notes.push(format!("verified by several classes: {}", names.join(", ")));
    }
    let total_derivative_of = is_total_derivative(&normalized);
    Ok(ClassificationReport {
        input: f.clone(),
        normalized,
        order,
        candidates,
        total_derivative_of,
        root_equation,
        notes,
    })
}

/// Serializable view of a report: every expression printed in the parser's
/// grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub input: String,
    pub normalized: String,
    pub order: usize,
    pub candidates: Vec<CandidateJson>,
    pub total_derivative_of: Option<String>,
    pub root_equation: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub class: String,
    pub extracted: Option<RootJson>,
    pub failure: Option<String>,
    pub branch_notes: Vec<String>,
    pub constraints_ok: bool,
    pub residuals: Vec<ResidualJson>,
    pub criteria: Option<[String; 2]>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootJson {
    pub c: String,
    pub g: String,
    pub h: String,
    pub d: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualJson {
    pub name: String,
    pub value: String,
}

impl From<&RootCoefficients> for RootJson {
    fn from(r: &RootCoefficients) -> Self {
        RootJson {
            c: r.c.to_string(),
            g: r.g.to_string(),
            h: r.h.to_string(),
            d: r.d.to_string(),
        }
    }
}

impl From<&Candidate> for CandidateJson {
    fn from(c: &Candidate) -> Self {
        CandidateJson {
            class: c.class.name().to_string(),
            extracted: c.extracted.as_ref().ok().map(RootJson::from),
            failure: c
                .extracted
                .as_ref()
                .err()
                .map(|e| format!("{}: {}", e.tag(), e)),
            branch_notes: c.branch_notes.clone(),
            constraints_ok: c.constraints_ok,
            residuals: c
                .residuals
                .iter()
                .map(|r| ResidualJson {
                    name: r.name.clone(),
                    value: r.value.to_string(),
                })
                .collect(),
            criteria: c
                .criteria
                .as_ref()
                .map(|(a, b)| [a.to_string(), b.to_string()]),
            verdict: c.verdict.as_str().to_string(),
        }
    }
}

impl From<&ClassificationReport> for ReportJson {
    fn from(r: &ClassificationReport) -> Self {
        ReportJson {
            input: r.input.to_string(),
            normalized: r.normalized.to_string(),
            order: r.order,
            candidates: r.candidates.iter().map(CandidateJson::from).collect(),
            total_derivative_of: r.total_derivative_of.as_ref().ok().map(|g| g.to_string()),
            root_equation: r.root_equation.as_ref().map(|j| j.to_string()),
            notes: r.notes.clone(),
        }
    }
}

impl ReportJson {
    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl std::str::FromStr for ReportJson {
    type Err = serde_json::Error;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input: {}", self.input)?;
        if self.normalized != self.input {
            writeln!(f, "normalized: {}", self.normalized)?;
        }
        writeln!(f, "order: {}", self.order)?;
        for c in &self.candidates {
            write!(f, "{}: {}", c.class, c.verdict)?;
            match &c.extracted {
                Ok(r) => write!(f, " {}", r)?,
                Err(e) => write!(f, " ({})", e)?,
            }
            writeln!(f)?;
            for n in &c.branch_notes {
                writeln!(f, "  note: {}", n)?;
            }
            if let Some((r1, r2)) = &c.criteria {
                writeln!(f, "  criteria: ({}, {})", r1, r2)?;
            }
            for r in &c.residuals {
                writeln!(f, "  residual {}: {}", r.name, r.value)?;
            }
        }
        match &self.total_derivative_of {
            Ok(g) => writeln!(f, "total derivative of: {}", g)?,
            Err(e) => writeln!(f, "total derivative: {}", e)?,
        }
        if let Some(r) = &self.root_equation {
            writeln!(f, "root equation: {}", r)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {}", n)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse, parse_rational};

    fn root(c: &str, g: &str, h: &str, d: &str) -> RootCoefficients {
        let p = |s: &str| parse_rational(s, &["k", "l"]).unwrap();
        RootCoefficients::new(p(c), p(g), p(h), p(d))
    }

    #[test]
    fn second_order_example() {
        let f = parse("y'' - 2*y'^2/y + k*y'/2 + l*y", &["k", "l"]).unwrap();
        let rep = classify(&f).unwrap();
        assert_eq!(rep.linearizable_classes(), vec![FormClass::Root8]);
        let c = rep.first_linearizable().unwrap();
        assert_eq!(
            c.extracted.as_ref().unwrap(),
            &root("0", "2/y", "k/2", "-l*y")
        );
        let (r1, r2) = c.criteria.as_ref().unwrap();
        assert!(r1.is_zero() && r2.is_zero());
        assert_eq!(rep.root_equation.as_ref(), Some(&f));
    }

    #[test]
    fn polar_fourth30() {
        let r = root("x", "0", "2/x", "0");
        let rep = classify(&generate(&r, FormClass::Fourth30)).unwrap();
        assert!(rep.linearizable_classes().contains(&FormClass::Fourth30));
        assert!(rep.total_derivative_of.is_err());
    }

    #[test]
    fn off_catalog_shape() {
        let f = parse("y'''' + y'*y''*y'''", &[]).unwrap();
        let rep = classify(&f).unwrap();
        assert_eq!(rep.candidates.len(), 5);
        for c in &rep.candidates {
            assert!(matches!(
                c.extracted,
                Err(ExtractionFailure::ShapeMismatch(..))
            ));
            assert_eq!(c.verdict, Verdict::Inconclusive);
        }
    }

    #[test]
    fn unsupported_order() {
        let f = parse("y' + x", &[]).unwrap();
        assert_eq!(classify(&f), Err(ClassifyError::UnsupportedOrder(1)));
    }

    #[test]
    fn json_round_trip() {
        let r = root("-x/y^2", "1/y", "2/x", "0");
        let rep = classify(&generate(&r, FormClass::Fourth24)).unwrap();
        let text = rep.to_json().to_pretty();
        assert_eq!(text.parse::<ReportJson>().unwrap().to_pretty(), text);
        assert!(rep.total_derivative_of.is_ok());
    }
}
