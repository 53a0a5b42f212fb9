//! Two-dimensional rate-region geometry.
//!
//! A [`RateRegion`] is a convex polygon in the first quadrant that contains
//! the origin and is closed under projection onto both axes. Vertices are
//! stored counterclockwise starting at the origin, so after `(0, 0)` come the
//! point `(max r1, 0)`, the upper-right boundary, and finally `(0, max r2)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct RatePoint<T> {
    pub r1: T,
    pub r2: T,
}

impl<T: Real> RatePoint<T> {
    pub fn new(r1: T, r2: T) -> Self {
        Self { r1, r2 }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.r1 - o.r1, self.r2 - o.r2)
    }

    fn norm(self) -> T {
        self.r1.hypot(self.r2)
    }

    fn lerp(self, o: Self, t: T) -> Self {
        Self::new(
            self.r1 + t * (o.r1 - self.r1),
            self.r2 + t * (o.r2 - self.r2),
        )
    }
}

/// `R1 <= a`, `R2 <= b`, `R1 + R2 <= c`.
///
/// `c` may be negative; the region then collapses to the origin.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct RateBounds<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> RateBounds<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Self { a, b, c }
    }

    /// Whether `p` satisfies all three constraints up to `slack`.
    pub fn admits(&self, p: RatePoint<T>, slack: T) -> bool {
        p.r1 >= -slack
            && p.r2 >= -slack
            && p.r1 <= self.a.pos() + slack
            && p.r2 <= self.b.pos() + slack
            && p.r1 + p.r2 <= self.c.pos() + slack
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateRegion<T> {
    vertices: Vec<RatePoint<T>>,
}

impl<T: Real> RateRegion<T> {
    /// The trivial region `{(0, 0)}`.
    pub fn origin() -> Self {
        Self {
            vertices: vec![RatePoint::origin()],
        }
    }

    pub fn vertices(&self) -> &[RatePoint<T>] {
        &self.vertices
    }

    pub fn max_r1(&self) -> T {
        self.vertices.iter().map(|v| v.r1).fold(T::zero(), T::max)
    }

    pub fn max_r2(&self) -> T {
        self.vertices.iter().map(|v| v.r2).fold(T::zero(), T::max)
    }

    /// Largest `r1 + r2` over the region.
    pub fn max_sum(&self) -> T {
        self.vertices
            .iter()
            .map(|v| v.r1 + v.r2)
            .fold(T::zero(), T::max)
    }

    /// Vertex with the largest `r1`, ties broken toward larger `r2`.
    pub fn max_r1_vertex(&self) -> RatePoint<T> {
        extreme(&self.vertices, |v| (v.r1, v.r2))
    }

    /// Vertex with the largest `r2`, ties broken toward larger `r1`.
    pub fn max_r2_vertex(&self) -> RatePoint<T> {
        extreme(&self.vertices, |v| (v.r2, v.r1))
    }

    pub fn contains(&self, p: RatePoint<T>, tol: T) -> bool {
        contains(self, p, tol)
    }
}

fn extreme<T: Real>(vs: &[RatePoint<T>], key: impl Fn(&RatePoint<T>) -> (T, T)) -> RatePoint<T> {
    *vs.iter()
        .max_by(|x, y| key(x).partial_cmp(&key(y)).expect("finite vertices"))
        .expect("regions always hold the origin")
}

/// `{(r1, r2) : 0 <= r1 <= a, 0 <= r2 <= b, r1 + r2 <= max(c, 0)}`.
pub fn pentagon<T: Real>(bounds: RateBounds<T>) -> RateRegion<T> {
    let c = bounds.c.pos();
    let a = bounds.a.pos().min(c);
    let b = bounds.b.pos().min(c);
    let corners = [
        RatePoint::new(a, (c - a).min(b)),
        RatePoint::new((c - b).min(a), b),
    ];
    hull_unchecked(corners.to_vec())
}

/// Convex hull of `points`, their axis projections and the origin.
pub fn convex_hull<T: Real>(points: &[RatePoint<T>]) -> Result<RateRegion<T>> {
    if points.is_empty() {
        return Err(Error::EmptyInput("convex_hull"));
    }
    let slack = T::lit(T::GEOM_EPS);
    for p in points {
        if !(p.r1 >= -slack && p.r2 >= -slack) || !p.r1.is_finite() || !p.r2.is_finite() {
            return Err(Error::Domain {
                name: "rate point",
                value: p.r1.min(p.r2).as_f64(),
                expected: "finite and >= 0",
            });
        }
    }
    Ok(hull_unchecked(points.to_vec()))
}

/// Convex hull of the vertices of every input region.
pub fn union_region<T: Real>(regions: &[RateRegion<T>]) -> Result<RateRegion<T>> {
    if regions.is_empty() {
        return Err(Error::EmptyInput("union_region"));
    }
    let pts: Vec<RatePoint<T>> = regions
        .iter()
        .flat_map(|r| r.vertices.iter().copied())
        .collect();
    Ok(hull_unchecked(pts))
}

#[inline]
fn cross<T: Real>(o: RatePoint<T>, a: RatePoint<T>, b: RatePoint<T>) -> T {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// Andrew's monotone chain over the inputs plus projections and origin.
///
/// Tiny negative coordinates from rounding are clamped to zero.
pub(crate) fn hull_unchecked<T: Real>(points: Vec<RatePoint<T>>) -> RateRegion<T> {
    let mut pts = Vec::with_capacity(3 * points.len() + 1);
    pts.push(RatePoint::origin());
    for p in points {
        let p = RatePoint::new(p.r1.pos(), p.r2.pos());
        pts.push(p);
        pts.push(RatePoint::new(p.r1, T::zero()));
        pts.push(RatePoint::new(T::zero(), p.r2));
    }
    pts.sort_by(|x, y| {
        (x.r1, x.r2)
            .partial_cmp(&(y.r1, y.r2))
            .expect("finite rate points")
    });
    let scale = pts.iter().map(|p| p.r1.max(p.r2)).fold(T::one(), T::max);
    let eps = T::lit(T::GEOM_EPS) * scale;
    // Merge near-duplicates into their componentwise maximum so that a point
    // rounded one ulp low never displaces the exact one.
    pts.dedup_by(|x, y| {
        let close = (x.r1 - y.r1).abs() <= eps && (x.r2 - y.r2).abs() <= eps;
        if close {
            *y = RatePoint::new(x.r1.max(y.r1), x.r2.max(y.r2));
        }
        close
    });
    if pts.len() < 3 {
        return RateRegion { vertices: pts };
    }

    // Collinearity threshold on the cross product, which scales as length².
    let area_eps = eps * scale;
    let mut hull: Vec<RatePoint<T>> = Vec::with_capacity(pts.len() + 1);
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= area_eps {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= area_eps
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.pop();
    }
    RateRegion { vertices: hull }
}

fn dist_to_segment<T: Real>(p: RatePoint<T>, a: RatePoint<T>, b: RatePoint<T>) -> T {
    let ab = b.sub(a);
    let len2 = ab.r1 * ab.r1 + ab.r2 * ab.r2;
    if len2 == T::zero() {
        return p.sub(a).norm();
    }
    let ap = p.sub(a);
    let t = ((ap.r1 * ab.r1 + ap.r2 * ab.r2) / len2)
        .max(T::zero())
        .min(T::one());
    p.sub(a.lerp(b, t)).norm()
}

/// True iff `p` lies within Euclidean distance `tol` of `region`.
pub fn contains<T: Real>(region: &RateRegion<T>, p: RatePoint<T>, tol: T) -> bool {
    let vs = &region.vertices;
    let n = vs.len();
    if n >= 3 && (0..n).all(|i| cross(vs[i], vs[(i + 1) % n], p) >= T::zero()) {
        return true;
    }
    let d = if n == 1 {
        p.sub(vs[0]).norm()
    } else {
        (0..n)
            .map(|i| dist_to_segment(p, vs[i], vs[(i + 1) % n]))
            .fold(T::infinity(), T::min)
    };
    d <= tol
}

/// `n` points spaced evenly in arc length along the boundary from
/// `(max r1, 0)` to `(0, max r2)`.
pub fn boundary_samples<T: Real>(region: &RateRegion<T>, n: usize) -> Result<Vec<RatePoint<T>>> {
    if n < 2 {
        return Err(Error::invalid("n", "need at least two boundary samples"));
    }
    let chain: Vec<RatePoint<T>> = if region.vertices.len() >= 3 {
        region.vertices[1..].to_vec()
    } else {
        vec![
            RatePoint::new(region.max_r1(), T::zero()),
            RatePoint::new(T::zero(), region.max_r2()),
        ]
    };
    let lengths: Vec<T> = chain.windows(2).map(|w| w[1].sub(w[0]).norm()).collect();
    let total: T = lengths.iter().copied().sum();
    if total == T::zero() {
        return Ok(vec![chain[0]; n]);
    }

    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    let mut walked = T::zero();
    for k in 0..n {
        let target = total * T::lit(k as f64) / T::lit((n - 1) as f64);
        while seg + 1 < lengths.len() && walked + lengths[seg] < target {
            walked = walked + lengths[seg];
            seg += 1;
        }
        let t = if lengths[seg] > T::zero() {
            ((target - walked) / lengths[seg])
                .max(T::zero())
                .min(T::one())
        } else {
            T::zero()
        };
        out.push(chain[seg].lerp(chain[seg + 1], t));
    }
    // pin the end points exactly
    out[0] = chain[0];
    out[n - 1] = *chain.last().expect("non-empty chain");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(r1: f64, r2: f64) -> RatePoint<f64> {
        RatePoint::new(r1, r2)
    }

    fn coords(r: &RateRegion<f64>) -> Vec<(f64, f64)> {
        r.vertices().iter().map(|v| (v.r1, v.r2)).collect()
    }

    #[test]
    fn pentagon_shapes() {
        let sq = pentagon(RateBounds::new(1.0, 1.0, 2.0));
        assert_eq!(
            coords(&sq),
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        );

        let p = pentagon(RateBounds::new(1.0, 1.0, 1.5));
        assert_eq!(
            coords(&p),
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0)]
        );

        let seg = pentagon(RateBounds::new(1.0, 0.0, 1.0));
        assert_eq!(coords(&seg), vec![(0.0, 0.0), (1.0, 0.0)]);

        let o = pentagon(RateBounds::new(1.0, 1.0, -0.3));
        assert_eq!(coords(&o), vec![(0.0, 0.0)]);

        let tri = pentagon(RateBounds::new(2.0, 2.0, 1.0));
        assert_eq!(coords(&tri), vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
    }

    #[test]
    fn hull_examples() {
        let h = convex_hull(&[pt(1.0, 0.0)]).unwrap();
        assert_eq!(coords(&h), vec![(0.0, 0.0), (1.0, 0.0)]);

        let h = convex_hull(&[pt(1.0, 0.0), pt(0.0, 1.0)]).unwrap();
        assert_eq!(coords(&h), vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);

        let line: Vec<_> = (0..=10)
            .map(|k| pt(k as f64 / 10.0, 1.0 - k as f64 / 10.0))
            .collect();
        let h = convex_hull(&line).unwrap();
        assert_eq!(coords(&h), vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);

        assert!(matches!(convex_hull::<f64>(&[]), Err(Error::EmptyInput(_))));
        assert!(convex_hull(&[pt(-1.0, 0.0)]).is_err());
        assert!(union_region::<f64>(&[]).is_err());
    }

    #[test]
    fn membership() {
        let sq = pentagon(RateBounds::new(1.0, 1.0, 2.0));
        assert!(contains(&sq, pt(0.5, 0.5), 0.0));
        assert!(!contains(&sq, pt(1.1, 0.0), 0.05));
        assert!(contains(&sq, pt(1.04, 0.0), 0.05));
        assert!(contains(&sq, pt(1.0, 1.0), 0.0));

        let seg = pentagon(RateBounds::new(1.0, 0.0, 1.0));
        assert!(contains(&seg, pt(0.5, 0.0), 0.0));
        assert!(contains(&seg, pt(0.5, 0.01), 0.02));
        assert!(!contains(&seg, pt(0.5, 0.01), 0.0));

        let o = RateRegion::<f64>::origin();
        assert!(contains(&o, pt(0.0, 0.0), 0.0));
        assert!(!contains(&o, pt(0.1, 0.0), 0.05));
    }

    #[test]
    fn boundary_walk() {
        let p = pentagon(RateBounds::new(1.0, 1.0, 1.5));
        let s = boundary_samples(&p, 5).unwrap();
        assert_eq!((s[0].r1, s[0].r2), (1.0, 0.0));
        assert_eq!((s[4].r1, s[4].r2), (0.0, 1.0));
        // chain length 0.5 + sqrt(0.5) + 0.5; samples lie on it in order
        for w in s.windows(2) {
            assert!(w[1].r1 <= w[0].r1 + 1e-12);
            assert!(w[1].r2 >= w[0].r2 - 1e-12);
        }

        let seg = pentagon(RateBounds::new(1.0, 0.0, 1.0));
        let s = boundary_samples(&seg, 3).unwrap();
        assert_eq!(
            s.iter().map(|p| p.r1).collect::<Vec<_>>(),
            vec![1.0, 0.5, 0.0]
        );

        let o = boundary_samples(&RateRegion::<f64>::origin(), 4).unwrap();
        assert!(o.iter().all(|p| *p == RatePoint::origin()));
        assert!(boundary_samples(&p, 1).is_err());
    }

    #[test]
    fn single_precision_hull() {
        let r = pentagon(RateBounds::new(1.0_f32, 1.0, 1.5));
        assert_eq!(r.vertices().len(), 5);
        assert!(r.contains(RatePoint::new(0.75, 0.75), 1e-6));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn is_convex_ccw(r: &RateRegion<f64>) -> bool {
            let v = r.vertices();
            let n = v.len();
            n < 3 || (0..n).all(|i| cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) > 0.0)
        }

        proptest! {
            #[test]
            fn pentagon_vertices_satisfy_bounds(a in 0.0..2.0f64, b in 0.0..2.0f64, c in -1.0..3.0f64) {
                let bounds = RateBounds::new(a, b, c);
                let r = pentagon(bounds);
                for v in r.vertices() {
                    prop_assert!(bounds.admits(*v, 1e-12));
                }
                prop_assert!(is_convex_ccw(&r));
            }

            #[test]
            fn pentagon_matches_constraint_grid(a in 0.0..1.0f64, b in 0.0..1.0f64, c in -0.2..1.5f64) {
                let bounds = RateBounds::new(a, b, c);
                let r = pentagon(bounds);
                // coarse sweep here; the 1e-3 sweep runs in the integration suite
                for i in 0..=50 {
                    for j in 0..=50 {
                        let p = pt(i as f64 / 50.0, j as f64 / 50.0);
                        let inside = bounds.admits(p, 0.0);
                        if inside {
                            prop_assert!(contains(&r, p, 1e-9));
                        } else {
                            prop_assert!(!contains(&r, p, 0.0) || bounds.admits(p, 1e-9));
                        }
                    }
                }
            }

            #[test]
            fn union_contains_inputs(
                bs in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64, 0.0..1.5f64), 1..8)
            ) {
                let regions: Vec<_> = bs.iter().map(|&(a, b, c)| pentagon(RateBounds::new(a, b, c))).collect();
                let u = union_region(&regions).unwrap();
                prop_assert!(is_convex_ccw(&u));
                for r in &regions {
                    for v in r.vertices() {
                        prop_assert!(contains(&u, *v, 1e-12));
                    }
                }
                let again = union_region(std::slice::from_ref(&u)).unwrap();
                prop_assert_eq!(again, u);
            }
        }
    }
}
