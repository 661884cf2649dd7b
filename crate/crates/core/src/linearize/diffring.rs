//! Derivatives of unknown functions as ring symbols.
//!
//! `u@i.j` stands for the `i`-th x-derivative and `j`-th y-derivative of an
//! unknown `u`. Bases ending in `~x` (`~y`) depend on x (y) alone. The `@`
//! and `~` characters keep these names out of reach of the parser.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::algebra::{RationalFunction, Symbol};
use crate::jet::JetPolynomial;

use super::forms::FormClass;
use super::generate::{generate_with, RootCoefficients};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Full,
    XOnly,
    YOnly,
}

pub fn kind_of(base: &str) -> Kind {
    match base
        .rsplit_once('~')
        .map(|(_, t)| t.as_bytes().first().copied())
    {
        Some(Some(b'x')) => Kind::XOnly,
        Some(Some(b'y')) => Kind::YOnly,
        _ => Kind::Full,
    }
}

pub fn jet_symbol(base: &str, i: u32, j: u32) -> Symbol {
    Symbol::new(&format!("{}@{}.{}", base, i, j))
}

pub fn jet_var(base: &str, i: u32, j: u32) -> RationalFunction {
    RationalFunction::var(jet_symbol(base, i, j))
}

/// `(base, i, j)` when `s` is an unknown-function jet.
pub fn parse_jet(s: Symbol) -> Option<(String, u32, u32)> {
    let name = s.name();
    let (base, rest) = name.rsplit_once('@')?;
    let (i, j) = rest.split_once('.')?;
    Some((base.to_string(), i.parse().ok()?, j.parse().ok()?))
}

pub fn is_jet(s: Symbol) -> bool {
    parse_jet(s).is_some()
}

/// Bases of all unknown-function jets occurring in `f`.
pub fn bases(f: &RationalFunction) -> Vec<String> {
    let mut v: Vec<String> = f
        .variables()
        .into_iter()
        .filter_map(parse_jet)
        .map(|(b, _, _)| b)
        .collect();
    v.sort();
    v.dedup();
    v
}

fn shifted(s: Symbol, along_x: bool) -> Option<RationalFunction> {
    let (base, i, j) = parse_jet(s)?;
    let k = kind_of(&base);
    if (along_x && k == Kind::YOnly) || (!along_x && k == Kind::XOnly) {
        return Some(RationalFunction::zero());
    }
    Some(if along_x {
        jet_var(&base, i + 1, j)
    } else {
        jet_var(&base, i, j + 1)
    })
}

fn total(f: &RationalFunction, along_x: bool) -> RationalFunction {
    let base = if along_x { Symbol::X } else { Symbol::Y };
    let mut out = f.partial_derivative(base);
    for s in f.variables() {
        if let Some(next) = shifted(s, along_x) {
            if next.is_zero() {
                continue;
            }
            out = &out + &(&f.partial_derivative(s) * &next);
        }
    }
    out
}

/// x-derivative treating unknown jets as functions of (x, y).
pub fn dx(f: &RationalFunction) -> RationalFunction {
    total(f, true)
}

pub fn dy(f: &RationalFunction) -> RationalFunction {
    total(f, false)
}

pub fn dxy(f: &RationalFunction, i: u32, j: u32) -> RationalFunction {
    let mut out = f.clone();
    for _ in 0..i {
        out = dx(&out);
    }
    for _ in 0..j {
        out = dy(&out);
    }
    out
}

/// Replaces every jet of `base` by the matching derivative of `value`.
/// `None` when a denominator vanishes.
pub fn substitute_unknown(
    f: &RationalFunction,
    base: &str,
    value: &RationalFunction,
) -> Option<RationalFunction> {
    let mut map = HashMap::new();
    for s in f.variables() {
        if let Some((b, i, j)) = parse_jet(s) {
            if b == base {
                map.insert(s, dxy(value, i, j));
            }
        }
    }
    if map.is_empty() {
        return Some(f.clone());
    }
    f.substitute(&map).ok()
}

pub const UNKNOWNS: [&str; 4] = ["c", "g", "h", "d"];

pub fn symbolic_root() -> RootCoefficients {
    RootCoefficients::new(
        jet_var("c", 0, 0),
        jet_var("g", 0, 0),
        jet_var("h", 0, 0),
        jet_var("d", 0, 0),
    )
}

/// The class form for unknown root coefficients, built once per class.
pub fn universal_form(class: FormClass) -> JetPolynomial {
    static CACHE: OnceLock<Mutex<HashMap<FormClass, JetPolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&class) {
        return f.clone();
    }
    let f = generate_with(&symbolic_root(), class, &dx, &dy);
    cache.lock().unwrap().insert(class, f.clone());
    f
}
