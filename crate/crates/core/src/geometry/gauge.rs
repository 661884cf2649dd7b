//! Bounded template search for a flat gauge.

use std::collections::HashMap;

use crate::algebra::{Polynomial, RationalFunction, Symbol, Q};
use crate::linearize::{solve_system, split_coefficients, RootCoefficients};

use super::{complete, conditions_hold, geodesic_conditions, GaugeChoice, GeometryError};

fn grid(bound: i32) -> Vec<(i32, i32)> {
    let mut g: Vec<(i32, i32)> = (-bound..=bound)
        .flat_map(|m| (-bound..=bound).map(move |n| (m, n)))
        .collect();
    g.sort_by_key(|&(m, n)| (m.abs() + n.abs(), m.abs().max(n.abs()), -m, -n));
    g
}

/// Supports of at most two monomials, smallest first.
fn supports(bound: i32) -> Vec<Vec<(i32, i32)>> {
    let g = grid(bound);
    let mut out = vec![vec![]];
    out.extend(g.iter().map(|&m| vec![m]));
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            out.push(vec![g[i], g[j]]);
        }
    }
    out
}

fn template(support: &[(i32, i32)], prefix: &str) -> (RationalFunction, Vec<Symbol>) {
    let mut value = RationalFunction::zero();
    let mut vars = Vec::new();
    for (i, &(m, n)) in support.iter().enumerate() {
        let s = Symbol::new(&format!("{}{}", prefix, i));
        value = &value
            + &(&RationalFunction::laurent_monomial(Q::from_integer(1.into()), m, n)
                * &RationalFunction::var(s));
        vars.push(s);
    }
    (value, vars)
}

fn is_xy(s: Symbol) -> bool {
    s == Symbol::X || s == Symbol::Y
}

/// Coefficient equations in the template unknowns for `r ≡ 0`.
fn equations(residuals: &[RationalFunction]) -> Vec<Polynomial> {
    residuals
        .iter()
        .flat_map(|r| split_coefficients(r.numer(), is_xy))
        .collect()
}

/// Every assignment of `vars` making all residuals vanish; unknowns the
/// equations leave free are set to 0.
fn solve(
    residuals: &[RationalFunction],
    vars: &[Symbol],
) -> Vec<HashMap<Symbol, RationalFunction>> {
    let eqs = equations(residuals);
    solve_system(&eqs, vars, &|s| s.name())
        .into_iter()
        .map(|(sol, _)| {
            let mut map: HashMap<Symbol, RationalFunction> = sol.into_iter().collect();
            for v in vars {
                map.entry(*v).or_insert_with(RationalFunction::zero);
            }
            map
        })
        .collect()
}

fn instantiate(
    t: &RationalFunction,
    map: &HashMap<Symbol, RationalFunction>,
) -> Option<RationalFunction> {
    t.substitute(map).ok()
}

/// Searches `b, e` among sums of at most two monomials `λ x^m y^n` with
/// `|m|, |n| <= bound`.
pub fn gauge_search(root: &RootCoefficients, bound: i32) -> Result<GaugeChoice, GeometryError> {
    let zero = GaugeChoice::default();
    if conditions_hold(&complete(root, &zero)) {
        return Ok(zero);
    }
    let all = supports(bound);
    let mut seen: Vec<RationalFunction> = Vec::new();
    for sb in &all {
        let (bt, bvars) = template(sb, "gauge_b");
        if root.c.is_zero() {
            // the second condition then involves b alone
            let probe = complete(
                root,
                &GaugeChoice {
                    b: bt.clone(),
                    e: RationalFunction::zero(),
                },
            );
            let r2 = geodesic_conditions(&probe)[1].clone();
            for sol in solve(&[r2], &bvars) {
                let Some(b) = instantiate(&bt, &sol) else {
                    continue;
                };
                if seen.contains(&b) {
                    continue;
                }
                seen.push(b.clone());
                for se in &all {
                    let (et, evars) = template(se, "gauge_e");
                    let cs = complete(
                        root,
                        &GaugeChoice {
                            b: b.clone(),
                            e: et.clone(),
                        },
                    );
                    for sol in solve(&geodesic_conditions(&cs), &evars) {
                        let Some(e) = instantiate(&et, &sol) else {
                            continue;
                        };
                        let g = GaugeChoice { b: b.clone(), e };
                        if conditions_hold(&complete(root, &g)) {
                            return Ok(g);
                        }
                    }
                }
            }
        } else {
            // the second condition is linear in e with coefficient c
            let b = &bt;
            let rest = &(&(&b.partial_derivative(Symbol::Y)
                - &root.c.partial_derivative(Symbol::X))
                + &(&root.h * &root.c))
                + &(&(b * b) + &(b * &root.g));
            let Ok(et) = (-&rest).checked_div(&root.c) else {
                continue;
            };
            let cs = complete(
                root,
                &GaugeChoice {
                    b: bt.clone(),
                    e: et.clone(),
                },
            );
            let res = geodesic_conditions(&cs);
            for sol in solve(&[res[0].clone(), res[2].clone(), res[3].clone()], &bvars) {
                let (Some(b), Some(e)) = (instantiate(&bt, &sol), instantiate(&et, &sol)) else {
                    continue;
                };
                let g = GaugeChoice { b, e };
                if conditions_hold(&complete(root, &g)) {
                    return Ok(g);
                }
            }
        }
    }
    Err(GeometryError::NotFound(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_rational;

    fn rf(s: &str) -> RationalFunction {
        parse_rational(s, &["k", "l"]).unwrap()
    }

    #[test]
    fn polar_gauge() {
        let root = RootCoefficients::new(rf("x"), rf("0"), rf("2/x"), rf("0"));
        let g = gauge_search(&root, 2).unwrap();
        assert_eq!(
            g,
            GaugeChoice {
                b: rf("0"),
                e: rf("-1/x")
            }
        );
    }

    #[test]
    fn zero_root_gauge() {
        assert_eq!(
            gauge_search(&RootCoefficients::zero(), 2).unwrap(),
            GaugeChoice::default()
        );
    }

    #[test]
    fn failing_criteria_has_no_gauge() {
        let root = RootCoefficients::new(rf("0"), rf("0"), rf("0"), rf("y^3"));
        assert_eq!(gauge_search(&root, 2), Err(GeometryError::NotFound(2)));
    }

    #[test]
    fn parametric_root_gauge() {
        let root = RootCoefficients::new(rf("0"), rf("2/y"), rf("k/2"), rf("-l*y"));
        let g = gauge_search(&root, 2).unwrap();
        assert!(conditions_hold(&complete(&root, &g)));
    }

    #[test]
    fn third_corpus_root_gauge() {
        let root = RootCoefficients::new(rf("-x/y^2"), rf("1/y"), rf("2/x"), rf("0"));
        let g = gauge_search(&root, 2).unwrap();
        assert!(conditions_hold(&complete(&root, &g)));
    }
}
