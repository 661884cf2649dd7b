//! Christoffel symbols of the associated geodesic system, curvature, gauge
//! completion and numeric metric integration.

mod gauge;
mod metric;

use std::fmt;

use crate::algebra::{RationalFunction, Symbol};
use crate::linearize::RootCoefficients;

pub use gauge::gauge_search;
pub use metric::{
    metric_integrate, path_independence_check, MetricState, PathReport, DEFAULT_STEPS,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("no gauge found with templates up to degree {0}")]
    NotFound(i32),
    #[error("coefficient pole at ({0}, {1})")]
    PoleOnPath(f64, f64),
    #[error("no value for parameter `{0}`")]
    UnboundParameter(String),
}

/// Coefficients `a..f` of the geodesic-type system; the Christoffel symbols
/// are their negatives.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ChristoffelSet {
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub c: RationalFunction,
    pub d: RationalFunction,
    pub e: RationalFunction,
    pub f: RationalFunction,
}

/// The free pair `(b, e)`; `f = g + 2b` and `a = h + 2e` follow.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GaugeChoice {
    pub b: RationalFunction,
    pub e: RationalFunction,
}

/// `R^i_{j12}` for `i, j` in `{1, 2}`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CurvatureComponents {
    pub r1_112: RationalFunction,
    pub r1_212: RationalFunction,
    pub r2_112: RationalFunction,
    pub r2_212: RationalFunction,
}

impl CurvatureComponents {
    pub fn as_array(&self) -> [&RationalFunction; 4] {
        [&self.r1_112, &self.r1_212, &self.r2_112, &self.r2_212]
    }

    pub fn is_flat(&self) -> bool {
        self.as_array().iter().all(|r| r.is_zero())
    }
}

impl ChristoffelSet {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(
        a: RationalFunction,
        b: RationalFunction,
        c: RationalFunction,
        d: RationalFunction,
        e: RationalFunction,
        f: RationalFunction,
    ) -> Self {
        ChristoffelSet { a, b, c, d, e, f }
    }

    pub fn as_array(&self) -> [&RationalFunction; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
    }

    /// The projected scalar root `(c, f - 2b, a - 2e, d)`.
    pub fn root(&self) -> RootCoefficients {
        let two = RationalFunction::from_int(2);
        RootCoefficients::new(
            self.c.clone(),
            &self.f - &(&two * &self.b),
            &self.a - &(&two * &self.e),
            self.d.clone(),
        )
    }

    /// `Gamma^i_{jk}` with indices in `{0, 1}`.
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> RationalFunction {
        let v = match (i, j + k) {
            (0, 0) => &self.a,
            (0, 1) => &self.b,
            (0, _) => &self.c,
            (_, 0) => &self.d,
            (_, 1) => &self.e,
            _ => &self.f,
        };
        -v
    }
}

impl fmt::Display for ChristoffelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a={}, b={}, c={}, d={}, e={}, f={})",
            self.a, self.b, self.c, self.d, self.e, self.f
        )
    }
}

pub fn complete(root: &RootCoefficients, gauge: &GaugeChoice) -> ChristoffelSet {
    let two = RationalFunction::from_int(2);
    ChristoffelSet {
        a: &root.h + &(&two * &gauge.e),
        b: gauge.b.clone(),
        c: root.c.clone(),
        d: root.d.clone(),
        e: gauge.e.clone(),
        f: &root.g + &(&two * &gauge.b),
    }
}

fn partial(r: &RationalFunction, k: usize) -> RationalFunction {
    r.partial_derivative(if k == 0 { Symbol::X } else { Symbol::Y })
}

/// `R^i_{jkl} = G^i_{jl,k} - G^i_{jk,l} + G^i_{mk} G^m_{jl} - G^i_{ml} G^m_{jk}`.
pub fn riemann(cs: &ChristoffelSet, i: usize, j: usize, k: usize, l: usize) -> RationalFunction {
    let mut r = &partial(&cs.gamma(i, j, l), k) - &partial(&cs.gamma(i, j, k), l);
    for m in 0..2 {
        r = &r + &(&cs.gamma(i, m, k) * &cs.gamma(m, j, l));
        r = &r - &(&cs.gamma(i, m, l) * &cs.gamma(m, j, k));
    }
    r
}

pub fn curvature(cs: &ChristoffelSet) -> CurvatureComponents {
    CurvatureComponents {
        r1_112: riemann(cs, 0, 0, 0, 1),
        r1_212: riemann(cs, 0, 1, 0, 1),
        r2_112: riemann(cs, 1, 0, 0, 1),
        r2_212: riemann(cs, 1, 1, 0, 1),
    }
}

/// The four flatness conditions written directly in `a..f`.
pub fn geodesic_conditions(cs: &ChristoffelSet) -> [RationalFunction; 4] {
    let ChristoffelSet { a, b, c, d, e, f } = cs;
    let dx = |r: &RationalFunction| r.partial_derivative(Symbol::X);
    let dy = |r: &RationalFunction| r.partial_derivative(Symbol::Y);
    let r1 = &(&(&dy(a) - &dx(b)) + &(b * e)) - &(c * d);
    let r2 = &(&(&dy(b) - &dx(c)) + &(&(a * c) - &(b * b))) + &(&(b * f) - &(c * e));
    let r3 = &(&(&dy(d) - &dx(e)) - &(&(a * e) - &(b * d))) - &(&(d * f) - &(e * e));
    let r4 = &dx(&(b + f)) - &dy(&(a + e));
    [r1, r2, r3, r4]
}

pub fn conditions_hold(cs: &ChristoffelSet) -> bool {
    geodesic_conditions(cs).iter().all(|r| r.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_rational;

    fn rf(s: &str) -> RationalFunction {
        parse_rational(s, &[]).unwrap()
    }

    pub(super) fn polar_set() -> ChristoffelSet {
        let root = RootCoefficients::new(rf("x"), rf("0"), rf("2/x"), rf("0"));
        complete(
            &root,
            &GaugeChoice {
                b: rf("0"),
                e: rf("-1/x"),
            },
        )
    }

    fn wrong_gauge() -> ChristoffelSet {
        ChristoffelSet::new(rf("0"), rf("0"), rf("x"), rf("0"), rf("0"), rf("0"))
    }

    #[test]
    fn polar_completion() {
        let cs = polar_set();
        assert_eq!(
            cs,
            ChristoffelSet::new(rf("0"), rf("0"), rf("x"), rf("0"), rf("-1/x"), rf("0"))
        );
        assert_eq!(
            cs.root(),
            RootCoefficients::new(rf("x"), rf("0"), rf("2/x"), rf("0"))
        );
    }

    #[test]
    fn zero_gauge_copies_root() {
        let root = RootCoefficients::new(rf("x*y"), rf("1/y"), rf("x"), rf("3"));
        let cs = complete(&root, &GaugeChoice::default());
        assert_eq!(
            (cs.a.clone(), cs.f.clone()),
            (root.h.clone(), root.g.clone())
        );
        assert_eq!(
            complete(&RootCoefficients::zero(), &GaugeChoice::default()),
            ChristoffelSet::zero()
        );
    }

    #[test]
    fn polar_is_flat() {
        assert!(curvature(&polar_set()).is_flat());
        assert!(conditions_hold(&polar_set()));
        assert!(curvature(&ChristoffelSet::zero()).is_flat());
    }

    #[test]
    fn wrong_gauge_is_curved() {
        let k = curvature(&wrong_gauge());
        assert!(!k.r1_212.is_zero());
        let res = geodesic_conditions(&wrong_gauge());
        assert_eq!(res[1], rf("-1"));
    }

    #[test]
    fn first_component_matches_first_condition() {
        let cs = ChristoffelSet::new(
            rf("x*y"),
            rf("y^2"),
            rf("1/x"),
            rf("x - y"),
            rf("2*x"),
            rf("y/x"),
        );
        assert_eq!(curvature(&cs).r1_112, geodesic_conditions(&cs)[0]);
    }
}
