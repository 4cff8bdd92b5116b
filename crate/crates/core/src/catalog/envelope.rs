use std::fmt;

use num_traits::Zero;

use crate::bounds::RatePoint;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Lower convex envelope of achievable `(M, R)` points, as its vertices in
/// increasing memory. To the right of the last vertex the rate stays at the
/// last vertex's value; left of the first vertex the curve is undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeoffCurve {
    vertices: Vec<RatePoint>,
}

fn cross(o: &RatePoint, a: &RatePoint, b: &RatePoint) -> Rational {
    (a.m - o.m) * (b.r - o.r) - (a.r - o.r) * (b.m - o.m)
}

/// Vertices of the lower convex envelope. Duplicate, collinear and dominated
/// points are dropped; the curve stops descending at its minimum rate.
pub fn envelope(points: &[RatePoint]) -> Result<TradeoffCurve> {
    if points.is_empty() {
        return Err(Error::config("an envelope needs at least one point"));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.m.cmp(&b.m).then(a.r.cmp(&b.r)));
    pts.dedup_by(|b, a| a.m == b.m);

    let mut hull: Vec<RatePoint> = Vec::new();
    for p in pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Rational::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    // Memory never hurts: anything right of the lowest vertex is dominated by it.
    let lowest = hull
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.r.cmp(&b.1.r).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .unwrap();
    hull.truncate(lowest + 1);
    Ok(TradeoffCurve { vertices: hull })
}

impl TradeoffCurve {
    pub fn vertices(&self) -> &[RatePoint] {
        &self.vertices
    }

    pub fn min_memory(&self) -> Rational {
        self.vertices[0].m
    }

    pub fn max_vertex_memory(&self) -> Rational {
        self.vertices[self.vertices.len() - 1].m
    }

    pub fn contains(&self, m: Rational) -> bool {
        m >= self.min_memory()
    }

    /// Memory-sharing rate at `m`.
    pub fn eval(&self, m: Rational) -> Result<Rational> {
        if !self.contains(m) {
            return Err(Error::Infeasible(format!(
                "M = {} is below the smallest memory {} of the curve",
                format_rational(&m),
                format_rational(&self.min_memory())
            )));
        }
        let v = &self.vertices;
        for w in v.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if m <= b.m {
                return Ok(a.r + (b.r - a.r) * (m - a.m) / (b.m - a.m));
            }
        }
        Ok(v[v.len() - 1].r)
    }

    pub fn eval_f64(&self, m: f64) -> Option<f64> {
        let v = &self.vertices;
        let f = |x: &Rational| crate::rational::to_f64(x);
        if m < f(&v[0].m) {
            return None;
        }
        for w in v.windows(2) {
            let (am, ar, bm, br) = (f(&w[0].m), f(&w[0].r), f(&w[1].m), f(&w[1].r));
            if m <= bm {
                return Some(ar + (br - ar) * (m - am) / (bm - am));
            }
        }
        Some(f(&v[v.len() - 1].r))
    }

    /// Abscissae of all vertices.
    pub fn breakpoints(&self) -> impl Iterator<Item = Rational> + '_ {
        self.vertices.iter().map(|p| p.m)
    }
}

impl fmt::Display for TradeoffCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(" -- "))
    }
}

/// Smallest `M` in `[lo, hi]` from which `a` is strictly below `b`, i.e. the
/// infimum of `{M : a(M) < b(M)}`. Both curves must be defined on `[lo, hi]`.
pub fn crossover(a: &TradeoffCurve, b: &TradeoffCurve, lo: Rational, hi: Rational) -> Result<Option<Rational>> {
    let mut xs: Vec<Rational> = a
        .breakpoints()
        .chain(b.breakpoints())
        .filter(|&x| x > lo && x < hi)
        .collect();
    xs.push(lo);
    xs.push(hi);
    xs.sort();
    xs.dedup();
    let diff = |x: Rational| -> Result<Rational> { Ok(a.eval(x)? - b.eval(x)?) };
    let d_lo = diff(xs[0])?;
    if d_lo < Rational::zero() {
        return Ok(Some(xs[0]));
    }
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let (d0, d1) = (diff(x0)?, diff(x1)?);
        if d0 < Rational::zero() {
            return Ok(Some(x0));
        }
        if d1 < Rational::zero() {
            return Ok(Some(x0 + d0 / (d0 - d1) * (x1 - x0)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(m: Rational, r: Rational) -> RatePoint {
        RatePoint::new(m, r, "")
    }

    #[test]
    fn single_point_is_flat_to_the_right() {
        let c = envelope(&[p(int(4), int(0))]).unwrap();
        assert_eq!(c.eval(int(4)).unwrap(), int(0));
        assert_eq!(c.eval(int(9)).unwrap(), int(0));
        assert!(c.eval(int(3)).is_err());
    }

    #[test]
    fn three_corners_for_four_files() {
        let c = envelope(&[p(int(2), int(1)), p(rat(8, 3), rat(1, 3)), p(int(4), int(0))]).unwrap();
        assert_eq!(c.vertices().len(), 3);
        // Segment (8/3,1/3)-(4,0) at M=3: 1/3 - (1/3)(1/3)/(4/3) = 1/4.
        assert_eq!(c.eval(int(3)).unwrap(), rat(1, 4));
    }

    #[test]
    fn dominated_and_collinear_points_drop_out() {
        let c = envelope(&[
            p(int(2), int(1)),
            p(int(3), rat(1, 2)),
            p(int(4), int(0)),
            p(rat(5, 2), int(1)),
            p(int(2), int(3)),
            p(int(5), int(1)),
        ])
        .unwrap();
        let ms: Vec<Rational> = c.breakpoints().collect();
        assert_eq!(ms, vec![int(2), int(4)]);
    }

    #[test]
    fn crossing_of_two_lines() {
        let a = envelope(&[p(int(0), int(2)), p(int(2), int(0))]).unwrap();
        let b = envelope(&[p(int(0), int(1)), p(int(2), rat(1, 2))]).unwrap();
        // 2 - M = 1 - M/4  ->  M = 4/3.
        assert_eq!(crossover(&a, &b, int(0), int(2)).unwrap(), Some(rat(4, 3)));
        assert_eq!(crossover(&b, &a, int(0), int(2)).unwrap(), Some(int(0)));
    }
}
