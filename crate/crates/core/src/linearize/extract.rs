//! Inverse problem: recover root coefficients from a class form.
//!
//! Every named coefficient of the input is matched against the class form
//! built from unknown functions c, g, h, d. The resulting differential
//! equations are solved one unknown at a time: algebraically when an
//! equation involves the unknown itself only, by linear elimination and
//! integration when derivatives are determined, and otherwise by trying
//! monomial templates `λ x^m y^n`. Every candidate is checked by
//! regenerating the input.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{
    antiderivative, gcd, nth_root, AlgebraError, Monomial, Polynomial, RationalFunction, Symbol,
    UniPoly, Q,
};
use crate::jet::JetPolynomial;

use super::diffring::{self, Kind};
use super::forms::FormClass;
use super::generate::{generate, tresse_criteria, RootCoefficients};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractionFailure {
    #[error("shape does not fit {0}: {1}")]
    ShapeMismatch(FormClass, String),
    #[error("no rational root: {0}")]
    NotAPerfectPower(String),
    #[error("integral is not rational: {0}")]
    LogTermRequired(String),
    #[error("coefficients are inconsistent with the class")]
    InconsistentCoefficients,
    #[error("underdetermined: {0}")]
    UnderdeterminedD(String),
}

impl ExtractionFailure {
    pub fn tag(&self) -> &'static str {
        match self {
            ExtractionFailure::ShapeMismatch(..) => "ShapeMismatch",
            ExtractionFailure::NotAPerfectPower(_) => "NotAPerfectPower",
            ExtractionFailure::LogTermRequired(_) => "LogTermRequired",
            ExtractionFailure::InconsistentCoefficients => "InconsistentCoefficients",
            ExtractionFailure::UnderdeterminedD(_) => "UnderdeterminedD",
        }
    }

    fn rank(&self) -> u8 {
        match self {
            ExtractionFailure::InconsistentCoefficients => 0,
            ExtractionFailure::LogTermRequired(_) => 1,
            ExtractionFailure::NotAPerfectPower(_) => 2,
            ExtractionFailure::UnderdeterminedD(_) => 3,
            ExtractionFailure::ShapeMismatch(..) => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub root: RootCoefficients,
    pub notes: Vec<String>,
}

const TEMPLATE_BOUND: i32 = 3;
const JOINT_BOUND: i32 = 2;
const PROLONGATION: usize = 2;
const NODE_LIMIT: usize = 400;
const MAX_TEMPLATE_ROOTS: usize = 4;
const JOINT_BUDGET: usize = 3000;
const MAX_TERMS: usize = 120;

fn lambda() -> Symbol {
    Symbol::new("λ")
}

fn is_base(s: Symbol) -> bool {
    s == Symbol::X || s == Symbol::Y
}

/// Groups the terms of `p` by their monomial in the symbols accepted by
/// `outer`; the returned polynomials are the coefficients, in the other
/// symbols, of each group.
pub(crate) fn split_coefficients(
    p: &Polynomial,
    outer: impl Fn(Symbol) -> bool,
) -> Vec<Polynomial> {
    let mut groups: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut key = Monomial::one();
        let mut rest = Monomial::one();
        for (s, e) in m.symbols() {
            if outer(s) {
                key = key.mul(&Monomial::var(s, e));
            } else {
                rest = rest.mul(&Monomial::var(s, e));
            }
        }
        groups
            .entry(key)
            .or_insert_with(Polynomial::zero)
            .add_term(rest, c.clone());
    }
    groups.into_values().filter(|p| !p.is_zero()).collect()
}

fn shift_down(u: &UniPoly) -> UniPoly {
    UniPoly::new((1..=u.deg()).map(|i| u.coeff(i)).collect())
}

fn is_constant_rf(r: &RationalFunction) -> bool {
    r.as_constant().is_some()
}

fn divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let small = match n.to_u64() {
        Some(v) if v <= 1_000_000_000_000 => v,
        _ => return vec![num_bigint::BigInt::one()],
    };
    let mut i = 1u64;
    while i * i <= small {
        if small % i == 0 {
            out.push(i.into());
            if i * i != small {
                out.push((small / i).into());
            }
        }
        i += 1;
    }
    out
}

fn rational_roots(u: &UniPoly) -> Vec<Q> {
    let coeffs: Vec<Q> = (0..=u.deg())
        .map(|i| u.coeff(i).as_constant().unwrap_or_default())
        .collect();
    let lcm = coeffs.iter().fold(num_bigint::BigInt::one(), |acc, c| {
        num_integer::Integer::lcm(&acc, c.denom())
    });
    let ints: Vec<num_bigint::BigInt> = coeffs
        .iter()
        .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
        .collect();
    let (a0, an) = (&ints[0], &ints[ints.len() - 1]);
    if a0.is_zero() {
        return vec![Q::zero()];
    }
    let mut out = Vec::new();
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1, -1] {
                let r = Q::new(p.clone() * sign, q.clone());
                let v = coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * &r + c);
                if v.is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Roots of a univariate polynomial over the rational-function field, as
/// far as they are rational functions, with branch labels.
fn solve_univariate(
    u: &UniPoly,
    label: &str,
) -> (
    Vec<(RationalFunction, Option<String>)>,
    Option<ExtractionFailure>,
) {
    let mut roots = Vec::new();
    let mut failure = None;
    let mut p = u.clone();
    if p.is_zero() {
        return (roots, None);
    }
    if p.coeff(0).is_zero() {
        roots.push((RationalFunction::zero(), None));
        while !p.is_zero() && p.coeff(0).is_zero() {
            p = shift_down(&p);
        }
    }
    if p.deg() == 0 {
        return (roots, None);
    }
    for (factor, _) in p.monic().squarefree() {
        let k = factor.deg();
        let lc = factor.lc();
        let c0 = factor.coeff(0);
        let binomial = (1..k).all(|i| factor.coeff(i).is_zero());
        if k == 1 {
            roots.push((-&c0.checked_div(&lc).unwrap(), None));
        } else if binomial {
            let target = -&c0.checked_div(&lc).unwrap();
            match nth_root(&target, k as u32) {
                Ok(r) if k % 2 == 0 => {
                    roots.push((
                        r.clone(),
                        Some(format!("{}: + branch of {}", label, root_name(k))),
                    ));
                    roots.push((
                        -&r,
                        Some(format!("{}: - branch of {}", label, root_name(k))),
                    ));
                }
                Ok(r) => roots.push((r, None)),
                Err(_) => {
                    failure = Some(ExtractionFailure::NotAPerfectPower(format!(
                        "{} = ({})^(1/{})",
                        label, target, k
                    )))
                }
            }
        } else if k == 2 {
            let (a, b, c) = (lc, factor.coeff(1), c0);
            let disc = &b.pow(2) - &(&(&a * &c) * &RationalFunction::from_int(4));
            match nth_root(&disc, 2) {
                Ok(s) => {
                    let two_a = &a * &RationalFunction::from_int(2);
                    for (sign, sv) in [("+", s.clone()), ("-", -&s)] {
                        let r = (&sv - &b).checked_div(&two_a).unwrap();
                        let note = if s.is_zero() {
                            None
                        } else {
                            Some(format!("{}: {} branch of quadratic", label, sign))
                        };
                        roots.push((r, note));
                        if s.is_zero() {
                            break;
                        }
                    }
                }
                Err(_) => {
                    failure = Some(ExtractionFailure::NotAPerfectPower(format!(
                        "{}: discriminant {}",
                        label, disc
                    )))
                }
            }
        } else if (0..=k).all(|i| is_constant_rf(&factor.coeff(i))) {
            for r in rational_roots(&factor) {
                roots.push((RationalFunction::from_q(r), None));
            }
        } else {
            failure = Some(ExtractionFailure::NotAPerfectPower(format!(
                "{}: degree {} relation",
                label, k
            )));
        }
    }
    (roots, failure)
}

fn root_name(k: usize) -> String {
    match k {
        2 => "square root".into(),
        n => format!("{}-th root", n),
    }
}

#[derive(Clone)]
struct State {
    values: Vec<(String, RationalFunction)>,
    pending: Vec<String>,
    eqs: Vec<RationalFunction>,
    consts: Vec<Symbol>,
    notes: Vec<String>,
}

impl State {
    /// False when `value` makes a denominator vanish.
    fn assign(&mut self, base: &str, value: RationalFunction) -> bool {
        let mut eqs = Vec::with_capacity(self.eqs.len());
        for e in &self.eqs {
            match diffring::substitute_unknown(e, base, &value) {
                Some(e) if e.is_zero() => {}
                Some(e) => eqs.push(e),
                None => return false,
            }
        }
        self.eqs = eqs;
        for (_, v) in self.values.iter_mut() {
            match diffring::substitute_unknown(v, base, &value) {
                Some(w) => *v = w,
                None => return false,
            }
        }
        self.pending.retain(|p| p != base);
        self.values.push((base.to_string(), value));
        true
    }

    fn assign_const(&mut self, k: Symbol, value: &RationalFunction) -> bool {
        let sub = |r: &RationalFunction| r.substitute_one(k, value).ok();
        let Some(eqs) = self.eqs.iter().map(sub).collect::<Option<Vec<_>>>() else {
            return false;
        };
        self.eqs = eqs.into_iter().filter(|e| !e.is_zero()).collect();
        for (_, v) in self.values.iter_mut() {
            match sub(v) {
                Some(w) => *v = w,
                None => return false,
            }
        }
        self.consts.retain(|c| *c != k);
        true
    }

    fn is_const(&self, s: Symbol) -> bool {
        self.consts.contains(&s)
    }
}

/// Solves `p = 0` for one integration constant when `p` is linear in it.
fn solve_for_constant(p: &Polynomial, consts: &[Symbol]) -> Option<(Symbol, RationalFunction)> {
    for &k in consts {
        if p.degree_in(k) != 1 {
            continue;
        }
        let parts = p.to_univariate(k);
        let (p0, p1) = (&parts[0], &parts[1]);
        if consts.iter().any(|c| p1.contains(*c)) {
            continue;
        }
        let v = RationalFunction::new(-p0, p1.clone()).ok()?;
        return Some((k, v));
    }
    let present: Vec<Symbol> = consts.iter().copied().filter(|k| p.contains(*k)).collect();
    if let [k] = present[..] {
        let (roots, _) = solve_univariate(
            &UniPoly::from_rf(&RationalFunction::from_poly(p.clone()), k).0,
            "",
        );
        if let [(r, _)] = &roots[..] {
            return Some((k, r.clone()));
        }
    }
    None
}

/// Splits an equation whose unknowns depend on one base variable into the
/// coefficients of the powers of the other.
fn split_single_variable(e: &RationalFunction) -> Vec<RationalFunction> {
    let bases = diffring::bases(e);
    if bases.is_empty() {
        return vec![e.clone()];
    }
    let kinds: Vec<Kind> = bases.iter().map(|b| diffring::kind_of(b)).collect();
    let other = if kinds.iter().all(|k| *k == Kind::XOnly) {
        Symbol::Y
    } else if kinds.iter().all(|k| *k == Kind::YOnly) {
        Symbol::X
    } else {
        return vec![e.clone()];
    };
    let parts: Vec<RationalFunction> = e
        .numer()
        .to_univariate(other)
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(RationalFunction::from_poly)
        .collect();
    if parts.len() <= 1 {
        vec![e.clone()]
    } else {
        parts
    }
}

struct Candidate {
    value: RationalFunction,
    new_unknown: Option<String>,
    new_consts: Vec<Symbol>,
    note: Option<String>,
}

enum Recon {
    Exact(RationalFunction),
    Partial(RationalFunction, Kind),
}

struct Search {
    out: Vec<State>,
    failure: Option<ExtractionFailure>,
    nodes: usize,
    fresh: usize,
}

impl Search {
    fn fail(&mut self, f: ExtractionFailure) {
        if self
            .failure
            .as_ref()
            .map(|g| f.rank() > g.rank())
            .unwrap_or(true)
        {
            self.failure = Some(f);
        }
    }

    fn fresh_const(&mut self, consts: &mut Vec<Symbol>) -> RationalFunction {
        self.fresh += 1;
        let k = Symbol::new(&format!("κ{}", self.fresh));
        consts.push(k);
        RationalFunction::var(k)
    }

    /// Drops satisfied constraints and fixes integration constants that a
    /// constraint determines linearly.
    fn settle(&mut self, st: &mut State) -> Result<(), ExtractionFailure> {
        loop {
            st.eqs = st.eqs.iter().flat_map(split_single_variable).collect();
            let mut fixed = None;
            for e in &st.eqs {
                if !diffring::bases(e).is_empty() {
                    continue;
                }
                if !e.variables().iter().any(|s| st.is_const(*s)) {
                    return Err(ExtractionFailure::InconsistentCoefficients);
                }
                for p in split_coefficients(e.numer(), |s| !st.is_const(s)) {
                    if !p.variables().iter().any(|s| st.is_const(*s)) {
                        return Err(ExtractionFailure::InconsistentCoefficients);
                    }
                    if let Some(sol) = solve_for_constant(&p, &st.consts) {
                        fixed = Some(sol);
                        break;
                    }
                }
                if fixed.is_some() {
                    break;
                }
            }
            match fixed {
                Some((k, v)) => {
                    if !st.assign_const(k, &v) {
                        return Err(ExtractionFailure::InconsistentCoefficients);
                    }
                }
                None => return Ok(()),
            }
        }
    }

    fn run(&mut self, mut st: State) {
        self.nodes += 1;
        if self.nodes > NODE_LIMIT {
            self.fail(ExtractionFailure::UnderdeterminedD(
                "search budget exhausted".into(),
            ));
            return;
        }
        if let Err(f) = self.settle(&mut st) {
            self.fail(f);
            return;
        }
        if st.pending.is_empty() {
            self.out.push(st);
            return;
        }
        for u in st.pending.clone() {
            let usable: Vec<RationalFunction> = st
                .eqs
                .iter()
                .filter(|e| diffring::bases(e) == [u.clone()])
                .cloned()
                .collect();
            if usable.is_empty() {
                continue;
            }
            match self.candidates(&u, &usable) {
                Ok(None) => continue,
                Ok(Some(cands)) => {
                    for cand in cands {
                        let mut next = st.clone();
                        next.consts.extend(cand.new_consts.iter().copied());
                        if let Some(n) = cand.note {
                            next.notes.push(n);
                        }
                        let mut value = cand.value;
                        if let Some(nb) = &cand.new_unknown {
                            value = &value + &diffring::jet_var(nb, 0, 0);
                            next.pending.insert(0, nb.clone());
                        }
                        if !next.assign(&u, value) {
                            continue;
                        }
                        self.run(next);
                    }
                }
                Err(f) => self.fail(f),
            }
            return;
        }
        for u in st.pending.clone() {
            let coupled: Vec<RationalFunction> = st
                .eqs
                .iter()
                .filter(|e| diffring::bases(e).contains(&u))
                .cloned()
                .collect();
            match self.linear_candidate(&u, &coupled, true) {
                Ok(Some(cand)) => {
                    let mut next = st.clone();
                    next.consts.extend(cand.new_consts.iter().copied());
                    if !next.assign(&u, cand.value) {
                        continue;
                    }
                    self.run(next);
                    return;
                }
                Ok(None) => continue,
                Err(f) => {
                    self.fail(f);
                    return;
                }
            }
        }
        if self.joint_templates(&st) {
            return;
        }
        self.fail(ExtractionFailure::UnderdeterminedD(format!(
            "no equation isolates any of {}",
            st.pending.join(", ")
        )));
    }

    /// `None` when the equations leave `u` open.
    fn candidates(
        &mut self,
        u: &str,
        usable: &[RationalFunction],
    ) -> Result<Option<Vec<Candidate>>, ExtractionFailure> {
        let label = display_base(u);
        let s0 = diffring::jet_symbol(u, 0, 0);
        let only_value: Vec<&RationalFunction> = usable
            .iter()
            .filter(|e| {
                e.variables()
                    .iter()
                    .all(|s| *s == s0 || !diffring::is_jet(*s))
            })
            .collect();
        if !only_value.is_empty() {
            let mut g: Option<UniPoly> = None;
            for e in only_value {
                let p = UniPoly::from_rf(&RationalFunction::from_poly(e.numer().clone()), s0).0;
                g = Some(match g {
                    None => p.monic(),
                    Some(q) => q.gcd(&p),
                });
            }
            let g = g.unwrap();
            if g.deg() == 0 {
                return Err(ExtractionFailure::InconsistentCoefficients);
            }
            let (roots, failure) = solve_univariate(&g, &label);
            if roots.is_empty() {
                return Err(failure.unwrap_or(ExtractionFailure::InconsistentCoefficients));
            }
            return Ok(Some(
                roots
                    .into_iter()
                    .map(|(value, note)| Candidate {
                        value,
                        new_unknown: None,
                        new_consts: vec![],
                        note,
                    })
                    .collect(),
            ));
        }
        if let Some(c) = self.linear_candidate(u, usable, false)? {
            return Ok(Some(vec![c]));
        }
        let (t, open) = self.template_candidates(u, usable);
        if open {
            return Ok(None);
        }
        if t.is_empty() {
            return Err(ExtractionFailure::UnderdeterminedD(format!(
                "no closed form found for {}",
                label
            )));
        }
        Ok(Some(t))
    }

    fn linear_candidate(
        &mut self,
        u: &str,
        usable: &[RationalFunction],
        coupled: bool,
    ) -> Result<Option<Candidate>, ExtractionFailure> {
        let is_u = |s: Symbol| {
            diffring::parse_jet(s)
                .map(|(b, _, _)| b == u)
                .unwrap_or(false)
        };
        let linear = |p: &Polynomial| {
            p.terms().all(|(m, _)| {
                m.symbols()
                    .filter(|(s, _)| is_u(*s))
                    .map(|(_, e)| e)
                    .sum::<u32>()
                    <= 1
            })
        };
        let mut level: Vec<RationalFunction> = usable
            .iter()
            .map(|e| RationalFunction::from_poly(e.numer().clone()))
            .filter(|e| linear(e.numer()))
            .collect();
        if level.is_empty() {
            return Ok(None);
        }
        let mut all = level.clone();
        let depth = if coupled { 1 } else { PROLONGATION };
        for step in 0..=depth {
            if step > 0 {
                let next: Vec<RationalFunction> = level
                    .iter()
                    .flat_map(|e| [diffring::dx(e), diffring::dy(e)])
                    .map(|e| RationalFunction::from_poly(e.numer().clone()))
                    .filter(|e| !e.is_zero())
                    .collect();
                all.extend(next.iter().cloned());
                level = next;
            }
            let Some(known) = eliminate(&all, &is_u, coupled)? else {
                return Ok(None);
            };
            if known.is_empty() {
                continue;
            }
            if let Some(c) = self.candidate_from_known(u, &known, coupled)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    fn candidate_from_known(
        &mut self,
        u: &str,
        known: &BTreeMap<(u32, u32), RationalFunction>,
        coupled: bool,
    ) -> Result<Option<Candidate>, ExtractionFailure> {
        if coupled {
            return Ok(known.get(&(0, 0)).map(|v| Candidate {
                value: v.clone(),
                new_unknown: None,
                new_consts: vec![],
                note: None,
            }));
        }
        let mut consts = Vec::new();
        let kind = diffring::kind_of(u);
        let recon = match self.reconstruct(known, kind, &mut consts) {
            Ok(Some(r)) => r,
            Ok(None) => return Ok(None),
            Err(AlgebraError::LogTermRequired) => {
                return Err(ExtractionFailure::LogTermRequired(format!(
                    "integrating for {}",
                    display_base(u)
                )))
            }
            Err(_) => return Err(ExtractionFailure::InconsistentCoefficients),
        };
        Ok(Some(match recon {
            Recon::Exact(value) => Candidate {
                value,
                new_unknown: None,
                new_consts: consts,
                note: None,
            },
            Recon::Partial(value, k) => {
                self.fresh += 1;
                let tag = if k == Kind::XOnly { "x" } else { "y" };
                let nb = format!("{}~{}{}", u, tag, self.fresh);
                Candidate {
                    value,
                    new_unknown: Some(nb),
                    new_consts: consts,
                    note: None,
                }
            }
        }))
    }

    /// Rebuilds a function from a set of its determined derivatives.
    fn reconstruct(
        &mut self,
        known: &BTreeMap<(u32, u32), RationalFunction>,
        kind: Kind,
        consts: &mut Vec<Symbol>,
    ) -> Result<Option<Recon>, AlgebraError> {
        if let Some(v) = known.get(&(0, 0)) {
            return Ok(Some(Recon::Exact(v.clone())));
        }
        let shift = |dx: u32, dy: u32| -> BTreeMap<(u32, u32), RationalFunction> {
            known
                .iter()
                .filter(|((i, j), _)| *i >= dx && *j >= dy)
                .map(|((i, j), v)| ((i - dx, j - dy), v.clone()))
                .collect()
        };
        let sx = shift(1, 0);
        let sy = shift(0, 1);
        let vx = if kind != Kind::YOnly && !sx.is_empty() {
            self.reconstruct(&sx, kind, consts)?
        } else {
            None
        };
        let vy = if kind != Kind::XOnly && !sy.is_empty() {
            self.reconstruct(&sy, kind, consts)?
        } else {
            None
        };
        Ok(match (vx, vy) {
            (Some(Recon::Exact(a)), Some(Recon::Exact(b))) => {
                let mut u = antiderivative(&a, Symbol::X)?;
                let rem = &b - &u.partial_derivative(Symbol::Y);
                if !rem.partial_derivative(Symbol::X).is_zero() {
                    return Err(AlgebraError::DivisionByZero);
                }
                u = &u + &antiderivative(&rem, Symbol::Y)?;
                Some(Recon::Exact(&u + &self.fresh_const(consts)))
            }
            (Some(Recon::Exact(a)), _) => {
                let u = antiderivative(&a, Symbol::X)?;
                if kind == Kind::XOnly {
                    Some(Recon::Exact(&u + &self.fresh_const(consts)))
                } else {
                    Some(Recon::Partial(u, Kind::YOnly))
                }
            }
            (_, Some(Recon::Exact(b))) => {
                let u = antiderivative(&b, Symbol::Y)?;
                if kind == Kind::YOnly {
                    Some(Recon::Exact(&u + &self.fresh_const(consts)))
                } else {
                    Some(Recon::Partial(u, Kind::XOnly))
                }
            }
            _ => None,
        })
    }

    /// Monomial templates for all pending unknowns at once.
    fn joint_templates(&mut self, st: &State) -> bool {
        let unknowns = st.pending.clone();
        let lams: Vec<Symbol> = (0..unknowns.len())
            .map(|i| Symbol::new(&format!("λ{}", i + 1)))
            .collect();
        let mut found = Vec::new();
        let mut budget = JOINT_BUDGET;
        let mut shapes = Vec::new();
        joint_step(st, &unknowns, &lams, &mut shapes, &mut found, &mut budget);
        if found.is_empty() {
            return false;
        }
        'solutions: for (shapes, sol, notes) in found {
            let mut next = st.clone();
            next.notes.extend(notes);
            let lookup = |v: Symbol| sol.iter().find(|(w, _)| *w == v).map(|(_, r)| r.clone());
            for k in &st.consts {
                if let Some(v) = lookup(*k) {
                    if !next.assign_const(*k, &v) {
                        continue 'solutions;
                    }
                }
            }
            for (i, u) in unknowns.iter().enumerate() {
                let coef = match lookup(lams[i]) {
                    Some(r) => r,
                    None => self.fresh_const(&mut next.consts),
                };
                if !next.assign(u, &shapes[i] * &coef) {
                    continue 'solutions;
                }
            }
            self.run(next);
        }
        true
    }

    fn template_candidates(
        &mut self,
        u: &str,
        usable: &[RationalFunction],
    ) -> (Vec<Candidate>, bool) {
        let kind = diffring::kind_of(u);
        let label = display_base(u);
        let mut out: Vec<Candidate> = Vec::new();
        let zero_ok = usable.iter().all(|e| {
            diffring::substitute_unknown(e, u, &RationalFunction::zero())
                .is_some_and(|z| z.is_zero())
        });
        if zero_ok {
            out.push(Candidate {
                value: RationalFunction::zero(),
                new_unknown: None,
                new_consts: vec![],
                note: None,
            });
        }
        let lam = lambda();
        for (m, n) in template_grid(kind, TEMPLATE_BOUND) {
            if out.len() >= MAX_TEMPLATE_ROOTS {
                break;
            }
            let shape = RationalFunction::laurent_monomial(Q::one(), m, n);
            let value = &shape * &RationalFunction::var(lam);
            let mut g = Polynomial::zero();
            let mut empty = true;
            for e in usable {
                let Some(s) = diffring::substitute_unknown(e, u, &value) else {
                    empty = false;
                    g = Polynomial::one();
                    break;
                };
                for p in split_coefficients(s.numer(), is_base) {
                    empty = false;
                    g = gcd(&g, &p);
                    if g.is_one() {
                        break;
                    }
                }
                if g.is_one() {
                    break;
                }
            }
            if empty {
                return (out, true);
            }
            if g.is_one() || !g.contains(lam) {
                continue;
            }
            let uni = UniPoly::from_rf(&RationalFunction::from_poly(g), lam).0;
            let (roots, _) = solve_univariate(&uni, &label);
            for (r, note) in roots {
                if r.is_zero() {
                    continue;
                }
                let v = &shape * &r;
                if out.iter().any(|c| c.value == v) {
                    continue;
                }
                out.push(Candidate {
                    value: v,
                    new_unknown: None,
                    new_consts: vec![],
                    note,
                });
            }
        }
        (out, false)
    }
}

/// Gauss-Jordan elimination of equations linear in the jets of one unknown.
type JetValues = BTreeMap<(u32, u32), RationalFunction>;

/// Returns the jets fixed to explicit values, or `None` when expressions grow
/// past the size limit.
#[allow(clippy::needless_range_loop)]
fn eliminate(
    eqs: &[RationalFunction],
    is_u: &dyn Fn(Symbol) -> bool,
    coupled: bool,
) -> Result<Option<JetValues>, ExtractionFailure> {
    let mut cols: Vec<(u32, u32)> = eqs
        .iter()
        .flat_map(|e| e.variables())
        .filter(|s| is_u(*s))
        .filter_map(diffring::parse_jet)
        .map(|(_, i, j)| (i, j))
        .collect();
    cols.sort_by_key(|c| std::cmp::Reverse((c.0 + c.1, c.0)));
    cols.dedup();
    let mut rows: Vec<(Vec<RationalFunction>, RationalFunction)> = Vec::new();
    for e in eqs {
        let mut row = vec![RationalFunction::zero(); cols.len()];
        let mut rhs = Polynomial::zero();
        for (m, c) in e.numer().terms() {
            let mut jet = None;
            let mut rest = Monomial::one();
            for (s, k) in m.symbols() {
                match diffring::parse_jet(s) {
                    Some((_, i, j)) if is_u(s) => jet = Some((i, j)),
                    _ => rest = rest.mul(&Monomial::var(s, k)),
                }
            }
            let t = Polynomial::term(rest, c.clone());
            match jet {
                Some(ij) => {
                    let idx = cols.iter().position(|c| *c == ij).unwrap();
                    row[idx] = &row[idx] + &RationalFunction::from_poly(t);
                }
                None => rhs = &rhs + &t,
            }
        }
        rows.push((row, -&RationalFunction::from_poly(rhs)));
    }
    let size = |v: &RationalFunction| v.numer().len() + v.denom().len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..cols.len() {
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i].0[col].is_zero())
            .filter(|&i| !coupled || diffring::bases(&rows[i].0[col]).is_empty())
            .min_by_key(|&i| size(&rows[i].0[col]))
        else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r].0[col].recip().unwrap();
        let (row, rhs) = rows[r].clone();
        let row: Vec<RationalFunction> = row.iter().map(|v| v * &inv).collect();
        let rhs = &rhs * &inv;
        if row.iter().chain([&rhs]).any(|v| size(v) > MAX_TERMS) {
            return Ok(None);
        }
        for i in 0..rows.len() {
            if i == r || rows[i].0[col].is_zero() {
                continue;
            }
            let f = rows[i].0[col].clone();
            for k in 0..cols.len() {
                if !row[k].is_zero() {
                    rows[i].0[k] = &rows[i].0[k] - &(&f * &row[k]);
                }
            }
            rows[i].1 = &rows[i].1 - &(&f * &rhs);
            if rows[i]
                .0
                .iter()
                .chain([&rows[i].1])
                .any(|v| size(v) > MAX_TERMS)
            {
                return Ok(None);
            }
        }
        rows[r] = (row, rhs);
        pivots.push((r, col));
        r += 1;
    }
    let free_of_constants =
        |v: &RationalFunction| v.variables().iter().all(|s| !s.name().starts_with('κ'));
    if !coupled
        && rows[r..]
            .iter()
            .any(|(_, rhs)| !rhs.is_zero() && free_of_constants(rhs))
    {
        return Err(ExtractionFailure::InconsistentCoefficients);
    }
    let mut known = BTreeMap::new();
    for (ri, col) in pivots {
        let (row, rhs) = &rows[ri];
        if row.iter().enumerate().all(|(k, v)| k == col || v.is_zero()) {
            known.insert(cols[col], rhs.clone());
        }
    }
    Ok(Some(known))
}

pub(crate) type SystemSolution = (Vec<(Symbol, RationalFunction)>, Vec<String>);

/// Solutions of a polynomial system that can be found by peeling off one
/// univariate or linear equation at a time.
pub(crate) fn solve_system(
    polys: &[Polynomial],
    vars: &[Symbol],
    label: &dyn Fn(Symbol) -> String,
) -> Vec<SystemSolution> {
    let polys: Vec<Polynomial> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.is_empty() {
        return vec![(vec![], vec![])];
    }
    if polys.iter().any(|p| !vars.iter().any(|v| p.contains(*v))) {
        return vec![];
    }
    let mut choice = None;
    for &v in vars {
        let uni: Vec<&Polynomial> = polys
            .iter()
            .filter(|p| p.contains(v) && vars.iter().all(|w| *w == v || !p.contains(*w)))
            .collect();
        if uni.is_empty() {
            continue;
        }
        let g = uni.iter().fold(Polynomial::zero(), |g, p| gcd(&g, p));
        if !g.contains(v) {
            return vec![];
        }
        let (roots, _) = solve_univariate(
            &UniPoly::from_rf(&RationalFunction::from_poly(g), v).0,
            &label(v),
        );
        choice = Some((v, roots));
        break;
    }
    if choice.is_none() {
        'outer: for &v in vars {
            for p in &polys {
                if p.degree_in(v) != 1 {
                    continue;
                }
                let parts = p.to_univariate(v);
                if vars.iter().any(|w| parts[1].contains(*w)) {
                    continue;
                }
                if let Ok(r) = RationalFunction::new(-&parts[0], parts[1].clone()) {
                    choice = Some((v, vec![(r, None)]));
                    break 'outer;
                }
            }
        }
    }
    let Some((v, roots)) = choice else {
        return vec![];
    };
    let rest: Vec<Symbol> = vars.iter().copied().filter(|w| *w != v).collect();
    let mut out = Vec::new();
    for (r, note) in roots {
        let reduced: Vec<Polynomial> = polys
            .iter()
            .map(|p| {
                RationalFunction::from_poly(p.clone())
                    .substitute_one(v, &r)
                    .expect("polynomial substitution")
                    .numer()
                    .clone()
            })
            .collect();
        for (mut sol, mut notes) in solve_system(&reduced, &rest, label) {
            let map: std::collections::HashMap<Symbol, RationalFunction> =
                sol.iter().cloned().collect();
            let value = r.substitute(&map).expect("polynomial substitution");
            sol.push((v, value));
            notes.extend(note.clone());
            out.push((sol, notes));
        }
    }
    out
}

type JointSolution = (
    Vec<RationalFunction>,
    Vec<(Symbol, RationalFunction)>,
    Vec<String>,
);

fn template_grid(kind: Kind, bound: i32) -> Vec<(i32, i32)> {
    let mut grid = Vec::new();
    for m in -bound..=bound {
        for n in -bound..=bound {
            if (kind == Kind::XOnly && n != 0) || (kind == Kind::YOnly && m != 0) {
                continue;
            }
            grid.push((m, n));
        }
    }
    grid.sort_by_key(|(m, n)| (m.abs() + n.abs(), *m, *n));
    grid
}

fn joint_step(
    st: &State,
    unknowns: &[String],
    lams: &[Symbol],
    shapes: &mut Vec<RationalFunction>,
    found: &mut Vec<JointSolution>,
    budget: &mut usize,
) {
    let i = shapes.len();
    let u = &unknowns[i];
    let label = |v: Symbol| match lams.iter().position(|l| *l == v) {
        Some(k) => display_base(&unknowns[k]),
        None => v.name(),
    };
    for (m, n) in template_grid(diffring::kind_of(u), JOINT_BOUND) {
        if *budget == 0 || found.len() >= MAX_TEMPLATE_ROOTS {
            return;
        }
        *budget -= 1;
        shapes.push(RationalFunction::laurent_monomial(Q::one(), m, n));
        let assigned = &unknowns[..=i];
        let mut polys = Vec::new();
        for e in &st.eqs {
            let b = diffring::bases(e);
            if b.is_empty() || !b.iter().all(|x| assigned.contains(x)) || !b.contains(u) {
                continue;
            }
            let mut v = Some(e.clone());
            for (k, name) in assigned.iter().enumerate() {
                v = v.and_then(|v| {
                    diffring::substitute_unknown(
                        &v,
                        name,
                        &(&shapes[k] * &RationalFunction::var(lams[k])),
                    )
                });
            }
            match v {
                Some(v) => polys.extend(split_coefficients(v.numer(), is_base)),
                None => polys.push(Polynomial::one()),
            }
        }
        let mut vars: Vec<Symbol> = lams[..=i].to_vec();
        vars.extend(st.consts.iter().copied());
        let sols = solve_system(&polys, &vars, &label);
        if !sols.is_empty() {
            if i + 1 == unknowns.len() {
                for (sol, notes) in sols {
                    let values: Vec<RationalFunction> = (0..=i)
                        .map(|k| match sol.iter().find(|(w, _)| *w == lams[k]) {
                            Some((_, r)) => &shapes[k] * r,
                            None => shapes[k].clone(),
                        })
                        .collect();
                    if found.iter().any(|(v, s, _)| {
                        let vals: Vec<RationalFunction> = (0..v.len())
                            .map(|k| match s.iter().find(|(w, _)| *w == lams[k]) {
                                Some((_, r)) => &v[k] * r,
                                None => v[k].clone(),
                            })
                            .collect();
                        vals == values
                    }) {
                        continue;
                    }
                    found.push((shapes.clone(), sol, notes));
                }
            } else {
                joint_step(st, unknowns, lams, shapes, found, budget);
            }
        }
        shapes.pop();
    }
}

fn display_base(u: &str) -> String {
    match u.split_once('~') {
        Some((b, _)) => format!("{} (one-variable part)", b),
        None => u.to_string(),
    }
}

/// Fixes leftover integration constants, first from the linearizability
/// criteria, then by choosing zero.
fn settle_constants(root: &mut RootCoefficients, consts: &[Symbol], notes: &mut Vec<String>) {
    let mut consts: Vec<Symbol> = consts
        .iter()
        .copied()
        .filter(|k| {
            ['c', 'g', 'h', 'd']
                .iter()
                .any(|n| root.get(*n).contains(*k))
        })
        .collect();
    let mut fixed_by_criteria = false;
    if !consts.is_empty() {
        let (r1, r2) = tresse_criteria(root);
        let mut polys = split_coefficients(r1.numer(), |s| !consts.contains(&s));
        polys.extend(split_coefficients(r2.numer(), |s| !consts.contains(&s)));
        let sols = solve_system(&polys, &consts, &|k: Symbol| k.name());
        if let Some((sol, _)) = sols.into_iter().next() {
            let map: std::collections::HashMap<Symbol, RationalFunction> =
                sol.iter().cloned().collect();
            if let Ok(r) = (|| -> Result<RootCoefficients, AlgebraError> {
                Ok(RootCoefficients::new(
                    root.c.substitute(&map)?,
                    root.g.substitute(&map)?,
                    root.h.substitute(&map)?,
                    root.d.substitute(&map)?,
                ))
            })() {
                *root = r;
                fixed_by_criteria = !sol.is_empty();
                consts.retain(|k| !map.contains_key(k));
            }
        }
    }
    for n in ['c', 'g', 'h', 'd'] {
        let free: Vec<Symbol> = consts
            .iter()
            .copied()
            .filter(|k| root.get(n).contains(*k))
            .collect();
        if free.is_empty() {
            continue;
        }
        let names: Vec<String> = free.iter().map(|k| k.name()).collect();
        notes.push(format!(
            "{}: integration constant{} {} not fixed by the equation or the criteria; set to 0",
            n,
            if free.len() > 1 { "s" } else { "" },
            names.join(", ")
        ));
        for k in &free {
            *root = root.map(|f| {
                f.substitute_one(*k, &RationalFunction::zero())
                    .expect("constant substitution")
            });
        }
    }
    if fixed_by_criteria {
        notes.push("integration constants fixed by the linearizability criteria".to_string());
    }
}

/// All root coefficient sets whose class form equals `f`.
pub fn extract(f: &JetPolynomial, class: FormClass) -> Result<Vec<Extraction>, ExtractionFailure> {
    let f = f
        .normalize_monic()
        .map_err(|_| ExtractionFailure::ShapeMismatch(class, "zero equation".into()))?;
    let shape = f.shape();
    if f.order() != class.order() || !class.shape_fits(&shape) {
        return Err(ExtractionFailure::ShapeMismatch(class, shape.to_string()));
    }
    let universal = diffring::universal_form(class);
    let mut eqs = Vec::new();
    let mut monomials: Vec<_> = universal.terms().map(|(m, _)| *m).collect();
    monomials.extend(f.terms().map(|(m, _)| *m));
    monomials.sort();
    monomials.dedup();
    for m in monomials {
        let e = &universal.coeff(&m) - &f.coeff(&m);
        if !e.is_zero() {
            eqs.push(e);
        }
    }
    let state = State {
        values: Vec::new(),
        pending: diffring::UNKNOWNS.iter().map(|s| s.to_string()).collect(),
        eqs,
        consts: Vec::new(),
        notes: Vec::new(),
    };
    let mut search = Search {
        out: Vec::new(),
        failure: None,
        nodes: 0,
        fresh: 0,
    };
    search.run(state);
    let mut results: Vec<Extraction> = Vec::new();
    for st in search.out {
        let lookup = |n: &str| {
            st.values
                .iter()
                .find(|(b, _)| b == n)
                .map(|(_, v)| v.clone())
                .unwrap_or_default()
        };
        let mut root = RootCoefficients::new(lookup("c"), lookup("g"), lookup("h"), lookup("d"));
        if ['c', 'g', 'h', 'd']
            .iter()
            .any(|n| !diffring::bases(root.get(*n)).is_empty())
        {
            search.failure = Some(ExtractionFailure::UnderdeterminedD(
                "unresolved unknown function".into(),
            ));
            continue;
        }
        let mut notes = st.notes.clone();
        settle_constants(&mut root, &st.consts, &mut notes);
        if generate(&root, class) != f {
            continue;
        }
        if !results.iter().any(|r| r.root == root) {
            results.push(Extraction { root, notes });
        }
    }
    if results.is_empty() {
        return Err(search
            .failure
            .unwrap_or(ExtractionFailure::InconsistentCoefficients));
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse, parse_rational};

    fn root(c: &str, g: &str, h: &str, d: &str) -> RootCoefficients {
        let p = |s: &str| parse_rational(s, &["k", "l"]).unwrap();
        RootCoefficients::new(p(c), p(g), p(h), p(d))
    }

    fn round_trip(r: &RootCoefficients, class: FormClass) -> Vec<Extraction> {
        let f = generate(r, class);
        let got = extract(&f, class).unwrap_or_else(|e| panic!("{} {}: {}", class, r, e));
        for e in &got {
            assert_eq!(generate(&e.root, class), f);
        }
        got
    }

    #[test]
    fn example_eleven_fourth21() {
        let r = root("-x/y^2", "1/y", "2/x", "0");
        let got = round_trip(&r, FormClass::Fourth21);
        assert_eq!(got[0].root, r);
    }

    #[test]
    fn polar_fourth30() {
        let r = root("x", "0", "2/x", "0");
        let got = round_trip(&r, FormClass::Fourth30);
        assert!(got.iter().any(|e| e.root == r));
    }

    #[test]
    fn degree_ten_is_shape_mismatch() {
        let f = parse("y'''' + y'^10", &[]).unwrap();
        assert!(matches!(
            extract(&f, FormClass::Fourth21),
            Err(ExtractionFailure::ShapeMismatch(..))
        ));
    }

    #[test]
    fn degenerate_roots() {
        let r = root("0", "2/y", "k/2", "-l*y");
        for class in FormClass::ALL {
            let got = round_trip(&r, class);
            assert!(got.iter().any(|e| e.root == r), "{}: {:?}", class, got);
        }
    }

    #[test]
    fn rational_roots_of_cubic() {
        let u = UniPoly::new(
            [-24, 2, -7, 6]
                .iter()
                .map(|&k| RationalFunction::from_int(k))
                .collect(),
        );
        let (roots, _) = solve_univariate(&u, "g");
        assert!(roots
            .iter()
            .any(|(r, _)| *r == RationalFunction::from_int(2)));
    }
}
