//! The worked examples: roots, classes, regenerated equations and the
//! implicit-solution check.

mod implicit;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::jet::JetPolynomial;
use crate::linearize::{
    classify, generate, regeneration_residuals, FormClass, Residual, RootCoefficients, RootJson,
    Verdict,
};
use crate::parser::{parse, parse_rational};

pub use implicit::{restrict, verify_implicit_solution, ImplicitError, ImplicitRelation};

const DATA: &str = include_str!("../../data/corpus.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub id: u32,
    pub class: String,
    pub root: RootJson,
    pub parameters: Vec<String>,
    pub source_text: String,
    pub exact: bool,
    pub solution: Option<String>,
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusCase {
    pub id: u32,
    pub class: FormClass,
    pub root: RootCoefficients,
    pub parameters: Vec<String>,
    pub source_text: String,
    pub exact: bool,
    pub solution: Option<ImplicitRelation>,
    pub notes: String,
}

impl CorpusCase {
    fn params(&self) -> Vec<&str> {
        self.parameters.iter().map(String::as_str).collect()
    }

    pub fn from_record(r: &CaseRecord) -> Result<Self, String> {
        let params: Vec<&str> = r.parameters.iter().map(String::as_str).collect();
        let p = |s: &str| parse_rational(s, &params).map_err(|e| format!("case {}: {}", r.id, e));
        let root =
            RootCoefficients::new(p(&r.root.c)?, p(&r.root.g)?, p(&r.root.h)?, p(&r.root.d)?);
        let solution = match &r.solution {
            Some(s) => Some(
                ImplicitRelation::parse(s, &params).map_err(|e| format!("case {}: {}", r.id, e))?,
            ),
            None => None,
        };
        Ok(CorpusCase {
            id: r.id,
            class: r.class.parse()?,
            root,
            parameters: r.parameters.clone(),
            source_text: r.source_text.clone(),
            exact: r.exact,
            solution,
            notes: r.notes.clone(),
        })
    }

    pub fn jet(&self) -> JetPolynomial {
        generate(&self.root, self.class)
    }

    pub fn root_equation(&self) -> JetPolynomial {
        generate(&self.root, FormClass::Root8)
    }

    /// Slot-level differences between the stored source text and the
    /// regenerated equation.
    pub fn source_diff(&self) -> Result<Vec<Residual>, String> {
        let f = parse(&self.source_text, &self.params()).map_err(|e| e.to_string())?;
        Ok(regeneration_residuals(&f, self.class, &self.root))
    }
}

pub fn case_records() -> Vec<CaseRecord> {
    serde_json::from_str(DATA).expect("embedded corpus is valid JSON")
}

pub fn corpus_cases() -> Vec<CorpusCase> {
    case_records()
        .iter()
        .map(|r| CorpusCase::from_record(r).expect("embedded corpus is well formed"))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult {
    pub id: u32,
    pub class: FormClass,
    pub verified: bool,
    pub root_recovered: bool,
    pub criteria_zero: bool,
    pub exact_ok: bool,
    pub solution_ok: Option<bool>,
    pub branch_notes: Vec<String>,
    pub root_equation: Option<JetPolynomial>,
    pub failures: Vec<String>,
    pub source_diff: Result<Vec<Residual>, String>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The lower-order form whose total derivative a class is.
fn antiderivative_class(class: FormClass) -> Option<FormClass> {
    match class {
        FormClass::Fourth18 => Some(FormClass::Third14),
        FormClass::Fourth24 => Some(FormClass::Third10),
        _ => None,
    }
}

pub fn run_case(case: &CorpusCase) -> CaseResult {
    let f = case.jet();
    let mut failures = Vec::new();
    let mut res = CaseResult {
        id: case.id,
        class: case.class,
        verified: false,
        root_recovered: false,
        criteria_zero: false,
        exact_ok: false,
        solution_ok: None,
        branch_notes: Vec::new(),
        root_equation: None,
        failures: Vec::new(),
        source_diff: case.source_diff(),
    };
    match classify(&f) {
        Err(e) => failures.push(format!("classification error: {}", e)),
        Ok(rep) => {
            let mine: Vec<_> = rep
                .candidates
                .iter()
                .filter(|c| c.class == case.class)
                .collect();
            let hit = mine
                .iter()
                .find(|c| c.extracted.as_ref().ok() == Some(&case.root))
                .or_else(|| mine.first());
            match hit {
                None => failures.push(format!("{} was not tried", case.class)),
                Some(c) => {
                    res.branch_notes = c.branch_notes.clone();
                    res.root_recovered = c.extracted.as_ref().ok() == Some(&case.root);
                    if let Some((r1, r2)) = &c.criteria {
                        res.criteria_zero = r1.is_zero() && r2.is_zero();
                        if !res.criteria_zero {
                            failures.push(format!("criteria residual nonzero: ({}, {})", r1, r2));
                        }
                    }
                    res.verified = c.verdict == Verdict::Linearizable;
                    if !res.verified {
                        failures.push(format!("{} verdict {}", case.class, c.verdict));
                    }
                    if !res.root_recovered {
                        match &c.extracted {
                            Ok(r) => failures.push(format!("recovered root {} differs", r)),
                            Err(e) => failures.push(format!("extraction failed: {}", e)),
                        }
                    }
                }
            }
            res.root_equation = rep.root_equation.clone();
            let expected = antiderivative_class(case.class).map(|k| generate(&case.root, k));
            res.exact_ok = case.exact == rep.total_derivative_of.is_ok()
                && match (&rep.total_derivative_of, expected) {
                    (Ok(g), Some(e)) => *g == e,
                    (Err(_), None) => true,
                    _ => false,
                };
            if !res.exact_ok {
                failures.push(format!(
                    "total derivative check: expected {}, got {}",
                    if case.exact { "exact" } else { "not exact" },
                    if rep.total_derivative_of.is_ok() {
                        "exact"
                    } else {
                        "not exact"
                    }
                ));
            }
        }
    }
    if let Some(rel) = &case.solution {
        let ok = verify_implicit_solution(rel, &f)
            && verify_implicit_solution(rel, &case.root_equation());
        res.solution_ok = Some(ok);
        if !ok {
            failures.push("implicit solution does not satisfy the equation".into());
        }
    }
    res.failures = failures;
    res
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusReport {
    pub results: Vec<CaseResult>,
}

impl CorpusReport {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.results.len() - self.passed()
    }

    /// Distinct root equations with the cases that produced them.
    pub fn root_equations(&self) -> Vec<(JetPolynomial, Vec<u32>)> {
        let mut out: Vec<(JetPolynomial, Vec<u32>)> = Vec::new();
        for r in &self.results {
            let Some(eq) = &r.root_equation else { continue };
            match out.iter_mut().find(|(e, _)| e == eq) {
                Some((_, ids)) => ids.push(r.id),
                None => out.push((eq.clone(), vec![r.id])),
            }
        }
        out
    }
}

pub fn run_cases(cases: &[CorpusCase]) -> CorpusReport {
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|c| s.spawn(move || run_case(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("case worker"))
            .collect()
    });
    CorpusReport { results }
}

pub fn run_corpus() -> CorpusReport {
    run_cases(&corpus_cases())
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let status = if r.passed() { "ok" } else { "FAIL" };
            writeln!(f, "case {:>2} {:<8} {}", r.id, r.class.name(), status)?;
            for n in &r.branch_notes {
                writeln!(f, "    note: {}", n)?;
            }
            for e in &r.failures {
                writeln!(f, "    {}", e)?;
            }
            match &r.source_diff {
                Ok(d) if d.is_empty() => {}
                Ok(d) => {
                    let names: Vec<&str> = d.iter().map(|x| x.name.as_str()).collect();
                    writeln!(f, "    source text differs in {}", names.join(", "))?;
                }
                Err(e) => writeln!(f, "    source text unreadable: {}", e)?,
            }
        }
        for (eq, ids) in self.root_equations() {
            let ids: Vec<String> = ids.iter().map(u32::to_string).collect();
            writeln!(f, "root equation [{}]: {}", ids.join(","), eq)?;
        }
        write!(f, "{}/{} verified", self.passed(), self.results.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_cases() {
        let cases = corpus_cases();
        assert_eq!(cases.len(), 12);
        assert_eq!(
            cases.iter().map(|c| c.id).collect::<Vec<_>>(),
            (1..=12).collect::<Vec<_>>()
        );
    }

    #[test]
    fn case_nine_matches_source() {
        let c = &corpus_cases()[8];
        assert_eq!(c.source_diff().unwrap(), vec![]);
    }

    #[test]
    fn case_one_source_differs() {
        let c = &corpus_cases()[0];
        let d = c.source_diff().unwrap();
        assert!(d.iter().any(|r| r.name == "A1"));
    }
}
