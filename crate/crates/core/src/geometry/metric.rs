//! Fixed-step RK4 integration of the metric transport equations.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::algebra::{Polynomial, RationalFunction, Symbol};

use super::{ChristoffelSet, GeometryError};

pub const DEFAULT_STEPS: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricState {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl MetricState {
    pub fn new(p: f64, q: f64, r: f64) -> Self {
        MetricState { p, q, r }
    }

    fn axpy(self, h: f64, k: MetricState) -> MetricState {
        MetricState::new(self.p + h * k.p, self.q + h * k.q, self.r + h * k.r)
    }

    pub fn distance(&self, o: &MetricState) -> f64 {
        (self.p - o.p)
            .abs()
            .max((self.q - o.q).abs())
            .max((self.r - o.r).abs())
    }
}

/// A polynomial flattened to `(coefficient, x-exponent, y-exponent)` terms
/// once parameters are fixed.
struct NumPoly(Vec<(f64, i32, i32)>);

impl NumPoly {
    fn new(p: &Polynomial, params: &HashMap<Symbol, f64>) -> Result<Self, GeometryError> {
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let mut k = c.to_f64().unwrap_or(f64::NAN);
            let (mut ex, mut ey) = (0, 0);
            for (s, e) in m.symbols() {
                if s == Symbol::X {
                    ex = e as i32;
                } else if s == Symbol::Y {
                    ey = e as i32;
                } else {
                    let v = params
                        .get(&s)
                        .ok_or_else(|| GeometryError::UnboundParameter(s.name()))?;
                    k *= v.powi(e as i32);
                }
            }
            terms.push((k, ex, ey));
        }
        Ok(NumPoly(terms))
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.0
            .iter()
            .map(|(k, i, j)| k * x.powi(*i) * y.powi(*j))
            .sum()
    }
}

struct NumRf(NumPoly, NumPoly);

impl NumRf {
    fn new(r: &RationalFunction, params: &HashMap<Symbol, f64>) -> Result<Self, GeometryError> {
        Ok(NumRf(
            NumPoly::new(r.numer(), params)?,
            NumPoly::new(r.denom(), params)?,
        ))
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64, GeometryError> {
        let d = self.1.eval(x, y);
        let v = self.0.eval(x, y) / d;
        if d.abs() < 1e-300 || !v.is_finite() {
            return Err(GeometryError::PoleOnPath(x, y));
        }
        Ok(v)
    }
}

struct Field([NumRf; 6]);

impl Field {
    fn new(cs: &ChristoffelSet, params: &HashMap<Symbol, f64>) -> Result<Self, GeometryError> {
        let [a, b, c, d, e, f] = cs.as_array();
        Ok(Field([
            NumRf::new(a, params)?,
            NumRf::new(b, params)?,
            NumRf::new(c, params)?,
            NumRf::new(d, params)?,
            NumRf::new(e, params)?,
            NumRf::new(f, params)?,
        ]))
    }

    /// Derivative of the state along the direction `(vx, vy)`.
    fn rate(
        &self,
        x: f64,
        y: f64,
        s: MetricState,
        vx: f64,
        vy: f64,
    ) -> Result<MetricState, GeometryError> {
        let mut k = [0.0; 6];
        for (slot, f) in k.iter_mut().zip(&self.0) {
            *slot = f.eval(x, y)?;
        }
        let [a, b, c, d, e, f] = k;
        let MetricState { p, q, r } = s;
        let px = -2.0 * (a * p + d * q);
        let qx = -b * p - (a + e) * q - d * r;
        let rx = -2.0 * (b * q + e * r);
        let py = -2.0 * (b * p + e * q);
        let qy = -c * p - (b + f) * q - e * r;
        let ry = -2.0 * (c * q + f * r);
        Ok(MetricState::new(
            vx * px + vy * py,
            vx * qx + vy * qy,
            vx * rx + vy * ry,
        ))
    }
}

fn segment(
    field: &Field,
    from: (f64, f64),
    to: (f64, f64),
    mut s: MetricState,
    steps_per_unit: usize,
) -> Result<MetricState, GeometryError> {
    let (vx, vy) = (to.0 - from.0, to.1 - from.1);
    let len = vx.hypot(vy);
    let n = ((len * steps_per_unit as f64).ceil() as usize).max(1);
    let h = 1.0 / n as f64;
    let at = |t: f64| (from.0 + t * vx, from.1 + t * vy);
    for i in 0..n {
        let t = i as f64 * h;
        let (x0, y0) = at(t);
        let (xm, ym) = at(t + h / 2.0);
        let (x1, y1) = at(t + h);
        let k1 = field.rate(x0, y0, s, vx, vy)?;
        let k2 = field.rate(xm, ym, s.axpy(h / 2.0, k1), vx, vy)?;
        let k3 = field.rate(xm, ym, s.axpy(h / 2.0, k2), vx, vy)?;
        let k4 = field.rate(x1, y1, s.axpy(h, k3), vx, vy)?;
        s = MetricState::new(
            s.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
            s.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
            s.r + h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
        );
    }
    Ok(s)
}

/// Transports `state` from `start` through the vertices of `path`.
pub fn metric_integrate(
    cs: &ChristoffelSet,
    params: &HashMap<Symbol, f64>,
    start: (f64, f64),
    state: MetricState,
    path: &[(f64, f64)],
    steps_per_unit: usize,
) -> Result<MetricState, GeometryError> {
    let field = Field::new(cs, params)?;
    let mut at = start;
    let mut s = state;
    for &next in path {
        s = segment(&field, at, next, s, steps_per_unit)?;
        at = next;
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathReport {
    /// `(target, axis-first result, diagonal result, discrepancy)`.
    pub rows: Vec<((f64, f64), MetricState, MetricState, f64)>,
    pub max_discrepancy: f64,
    pub tolerance: f64,
}

impl PathReport {
    pub fn consistent(&self) -> bool {
        self.max_discrepancy < self.tolerance
    }
}

/// Compares the axis-first polyline (x, then y) with the straight one for
/// each target.
pub fn path_independence_check(
    cs: &ChristoffelSet,
    params: &HashMap<Symbol, f64>,
    start: (f64, f64),
    state: MetricState,
    targets: &[(f64, f64)],
    steps_per_unit: usize,
    tolerance: f64,
) -> Result<PathReport, GeometryError> {
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &t in targets {
        let axis = metric_integrate(
            cs,
            params,
            start,
            state,
            &[(t.0, start.1), t],
            steps_per_unit,
        )?;
        let diag = metric_integrate(cs, params, start, state, &[t], steps_per_unit)?;
        let gap = axis.distance(&diag);
        worst = worst.max(gap);
        rows.push((t, axis, diag, gap));
    }
    Ok(PathReport {
        rows,
        max_discrepancy: worst,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tests::polar_set;
    use crate::parser::parse_rational;

    fn none() -> HashMap<Symbol, f64> {
        HashMap::new()
    }

    #[test]
    fn polar_reaches_closed_form() {
        let s = metric_integrate(
            &polar_set(),
            &none(),
            (1.0, 1.0),
            MetricState::new(1.0, 0.0, 1.0),
            &[(2.0, 1.0)],
            DEFAULT_STEPS,
        )
        .unwrap();
        assert!(
            s.distance(&MetricState::new(1.0, 0.0, 4.0)) < 1e-8,
            "{:?}",
            s
        );
    }

    #[test]
    fn zero_set_keeps_state() {
        let s0 = MetricState::new(2.0, -1.0, 3.0);
        let s = metric_integrate(
            &ChristoffelSet::zero(),
            &none(),
            (0.0, 0.0),
            s0,
            &[(1.0, 2.0), (-1.0, 0.5)],
            64,
        )
        .unwrap();
        assert_eq!(s, s0);
    }

    #[test]
    fn halving_the_step_cuts_error() {
        let exact = MetricState::new(1.0, 0.0, 4.0);
        let err = |n| {
            metric_integrate(
                &polar_set(),
                &none(),
                (1.0, 1.0),
                MetricState::new(1.0, 0.0, 1.0),
                &[(2.0, 1.0)],
                n,
            )
            .unwrap()
            .distance(&exact)
        };
        let (coarse, fine) = (err(4), err(8));
        assert!(coarse / fine >= 8.0, "{} {}", coarse, fine);
    }

    #[test]
    fn path_independence() {
        let targets = [(2.0, 2.0), (1.5, 0.5), (3.0, -1.0)];
        let rep = path_independence_check(
            &polar_set(),
            &none(),
            (1.0, 1.0),
            MetricState::new(1.0, 0.0, 1.0),
            &targets,
            DEFAULT_STEPS,
            1e-8,
        )
        .unwrap();
        assert!(rep.consistent(), "{}", rep.max_discrepancy);
        let zero = path_independence_check(
            &ChristoffelSet::zero(),
            &none(),
            (0.0, 0.0),
            MetricState::new(1.0, 0.0, 1.0),
            &targets,
            16,
            1e-8,
        )
        .unwrap();
        assert_eq!(zero.max_discrepancy, 0.0);
    }

    #[test]
    fn curved_set_is_path_dependent() {
        let x = parse_rational("x", &[]).unwrap();
        let mut cs = polar_set();
        cs.e = RationalFunction::zero();
        cs.c = x;
        let rep = path_independence_check(
            &cs,
            &none(),
            (1.0, 1.0),
            MetricState::new(1.0, 0.0, 1.0),
            &[(2.0, 2.0)],
            DEFAULT_STEPS,
            1e-8,
        )
        .unwrap();
        assert!(!rep.consistent());
    }

    #[test]
    fn pole_is_reported() {
        let r = metric_integrate(
            &polar_set(),
            &none(),
            (1.0, 1.0),
            MetricState::new(1.0, 0.0, 1.0),
            &[(0.0, 1.0)],
            8,
        );
        assert!(matches!(r, Err(GeometryError::PoleOnPath(..))));
    }
}
