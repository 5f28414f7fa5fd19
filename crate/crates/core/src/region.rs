//! Planar convex chart regions: ellipses (including discs) and convex polygons.
//!
//! Every two-dimensional body is one of these in its own chart frame, and all
//! cap and floating-body computations reduce to integrals over such a region
//! cut by half-planes.

use std::f64::consts::PI;

use crate::hull::planar::{clip_halfplane, signed_area};
use crate::quadrature::{gauss_legendre, integrate_disc_region, integrate_triangle_refined, HalfPlane};

const OUTER_ORDER: usize = 32;
const INNER_ORDER: usize = 16;
const CHORD_ORDER: usize = 24;

/// A half-plane `<normal, p> >= offset` in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cut {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl Cut {
    pub fn new(normal: [f64; 2], offset: f64) -> Cut {
        Cut { normal, offset }
    }

    pub fn from_angle(theta: f64, offset: f64) -> Cut {
        Cut { normal: [theta.cos(), theta.sin()], offset }
    }

    #[inline]
    pub fn eval(&self, p: [f64; 2]) -> f64 {
        self.normal[0] * p[0] + self.normal[1] * p[1] - self.offset
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChartRegion {
    /// `{c + L q : |q| <= 1}` with `L` row-major.
    Ellipse { center: [f64; 2], l: [[f64; 2]; 2] },
    /// Convex polygon, counter-clockwise.
    Polygon(Vec<[f64; 2]>),
}

impl ChartRegion {
    pub fn disc(center: [f64; 2], radius: f64) -> ChartRegion {
        ChartRegion::Ellipse {
            center,
            l: [[radius, 0.0], [0.0, radius]],
        }
    }

    pub fn ellipse(center: [f64; 2], semi_axes: [f64; 2], angle: f64) -> ChartRegion {
        let (s, c) = angle.sin_cos();
        ChartRegion::Ellipse {
            center,
            l: [[c * semi_axes[0], -s * semi_axes[1]], [s * semi_axes[0], c * semi_axes[1]]],
        }
    }

    pub fn support(&self, u: [f64; 2]) -> f64 {
        match self {
            ChartRegion::Ellipse { center, l } => {
                let lt = lt_mul(l, u);
                u[0] * center[0] + u[1] * center[1] + lt[0].hypot(lt[1])
            }
            ChartRegion::Polygon(v) => v
                .iter()
                .map(|p| u[0] * p[0] + u[1] * p[1])
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// A point of the region maximising `<u, p>`.
    pub fn support_point(&self, u: [f64; 2]) -> [f64; 2] {
        match self {
            ChartRegion::Ellipse { center, l } => {
                let lt = lt_mul(l, u);
                let n = lt[0].hypot(lt[1]);
                if n == 0.0 {
                    return *center;
                }
                let q = [lt[0] / n, lt[1] / n];
                [
                    center[0] + l[0][0] * q[0] + l[0][1] * q[1],
                    center[1] + l[1][0] * q[0] + l[1][1] * q[1],
                ]
            }
            ChartRegion::Polygon(v) => *v
                .iter()
                .max_by(|a, b| (u[0] * a[0] + u[1] * a[1]).total_cmp(&(u[0] * b[0] + u[1] * b[1])))
                .expect("non-empty polygon"),
        }
    }

    /// Exact minimum of `<w, p>` over `region ∩ cut`, or `None` if that set is empty.
    ///
    /// The minimum of a linear form over a cap is attained at a chord endpoint
    /// or at the region's own minimiser when the latter lies in the cap.
    pub fn min_linear_over_cut(&self, cut: Cut, w: [f64; 2]) -> Option<f64> {
        let lin = |p: [f64; 2]| w[0] * p[0] + w[1] * p[1];
        if let ChartRegion::Polygon(v) = self {
            let p = clip_halfplane(v, [-cut.normal[0], -cut.normal[1]], -cut.offset);
            return p.iter().map(|q| lin(*q)).reduce(f64::min);
        }
        let mut best = f64::INFINITY;
        match self.chord_range(cut.normal, cut.offset) {
            Some((ta, tb)) => {
                let perp = [-cut.normal[1], cut.normal[0]];
                for t in [ta, tb] {
                    best = best.min(lin([
                        cut.offset * cut.normal[0] + t * perp[0],
                        cut.offset * cut.normal[1] + t * perp[1],
                    ]));
                }
            }
            None => {
                if cut.eval(self.center()) < 0.0 {
                    return None;
                }
            }
        }
        let m = self.support_point([-w[0], -w[1]]);
        if cut.eval(m) >= 0.0 {
            best = best.min(lin(m));
        }
        Some(best)
    }

    /// `(min, max)` of `<u, p>` over the region.
    pub fn linear_range(&self, u: [f64; 2]) -> (f64, f64) {
        (-self.support([-u[0], -u[1]]), self.support(u))
    }

    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        match self {
            ChartRegion::Ellipse { center, l } => {
                let q = self.to_unit(l, center, p);
                // boundary slack measured in chart units along the worst axis
                let smin = singular_min(l);
                (q[0] * q[0] + q[1] * q[1]).sqrt() <= 1.0 + tol / smin
            }
            ChartRegion::Polygon(v) => {
                let n = v.len();
                (0..n).all(|i| {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    let e = [b[0] - a[0], b[1] - a[1]];
                    let len = e[0].hypot(e[1]);
                    (e[0] * (p[1] - a[1]) - e[1] * (p[0] - a[0])) / len >= -tol
                })
            }
        }
    }

    fn to_unit(&self, l: &[[f64; 2]; 2], c: &[f64; 2], p: [f64; 2]) -> [f64; 2] {
        let det = l[0][0] * l[1][1] - l[0][1] * l[1][0];
        let x = [p[0] - c[0], p[1] - c[1]];
        [
            (l[1][1] * x[0] - l[0][1] * x[1]) / det,
            (-l[1][0] * x[0] + l[0][0] * x[1]) / det,
        ]
    }

    /// Lebesgue area.
    pub fn area(&self) -> f64 {
        match self {
            ChartRegion::Ellipse { l, .. } => PI * det(l).abs(),
            ChartRegion::Polygon(v) => signed_area(v).abs(),
        }
    }

    /// A representative interior point.
    pub fn center(&self) -> [f64; 2] {
        match self {
            ChartRegion::Ellipse { center, .. } => *center,
            ChartRegion::Polygon(v) => {
                let n = v.len() as f64;
                let s = v.iter().fold([0.0, 0.0], |a, p| [a[0] + p[0], a[1] + p[1]]);
                [s[0] / n, s[1] / n]
            }
        }
    }

    /// `∫ f` over the region intersected with every cut.
    pub fn integrate(&self, f: &impl Fn([f64; 2]) -> f64, cuts: &[Cut]) -> f64 {
        match self {
            ChartRegion::Ellipse { center, l } => {
                let mut hps = Vec::with_capacity(cuts.len());
                for cut in cuts {
                    // <u, c + L q> >= s  <=>  <-L^T u, q> <= <u, c> - s
                    let lt = lt_mul(l, cut.normal);
                    hps.push(HalfPlane {
                        a: [-lt[0], -lt[1]],
                        b: cut.normal[0] * center[0] + cut.normal[1] * center[1] - cut.offset,
                    });
                }
                let axis = match hps.first() {
                    Some(h) => {
                        let n = h.a[0].hypot(h.a[1]);
                        if n > 0.0 {
                            [h.a[0] / n, h.a[1] / n]
                        } else {
                            [1.0, 0.0]
                        }
                    }
                    None => [1.0, 0.0],
                };
                let jac = det(l).abs();
                let g = |q: [f64; 2]| {
                    f([
                        center[0] + l[0][0] * q[0] + l[0][1] * q[1],
                        center[1] + l[1][0] * q[0] + l[1][1] * q[1],
                    ])
                };
                jac * integrate_disc_region(&g, &hps, axis, OUTER_ORDER, INNER_ORDER)
            }
            ChartRegion::Polygon(v) => {
                let mut poly = v.clone();
                for cut in cuts {
                    poly = clip_halfplane(&poly, [-cut.normal[0], -cut.normal[1]], -cut.offset);
                    if poly.len() < 3 {
                        return 0.0;
                    }
                }
                integrate_polygon(f, &poly).1
            }
        }
    }

    /// `∫ f dl` along the chord `<u, p> = s` (u unit).
    pub fn chord_integral(&self, f: &impl Fn([f64; 2]) -> f64, u: [f64; 2], s: f64) -> f64 {
        let perp = [-u[1], u[0]];
        let base = [s * u[0], s * u[1]];
        let Some((ta, tb)) = self.chord_range(u, s) else {
            return 0.0;
        };
        let (x, w) = gauss_legendre(CHORD_ORDER);
        let (h, m) = (0.5 * (tb - ta), 0.5 * (tb + ta));
        x.iter()
            .zip(&w)
            .map(|(z, w)| {
                let t = m + h * z;
                w * f([base[0] + t * perp[0], base[1] + t * perp[1]])
            })
            .sum::<f64>()
            * h
    }

    /// Parameter range of the chord `s u + tau u_perp` inside the region.
    pub fn chord_range(&self, u: [f64; 2], s: f64) -> Option<(f64, f64)> {
        let perp = [-u[1], u[0]];
        let base = [s * u[0], s * u[1]];
        match self {
            ChartRegion::Ellipse { center, l } => {
                let q0 = self.to_unit(l, center, base);
                let qd = {
                    let z = self.to_unit(l, &[0.0, 0.0], perp);
                    [z[0], z[1]]
                };
                let a = qd[0] * qd[0] + qd[1] * qd[1];
                let b = 2.0 * (q0[0] * qd[0] + q0[1] * qd[1]);
                let c = q0[0] * q0[0] + q0[1] * q0[1] - 1.0;
                let disc = b * b - 4.0 * a * c;
                if disc <= 0.0 {
                    return None;
                }
                let r = disc.sqrt();
                let (t1, t2) = if b >= 0.0 {
                    let q = -0.5 * (b + r);
                    (q / a, c / q)
                } else {
                    let q = -0.5 * (b - r);
                    (c / q, q / a)
                };
                Some((t1.min(t2), t1.max(t2)))
            }
            ChartRegion::Polygon(v) => {
                let n = v.len();
                let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
                for i in 0..n {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    // inside: cross(b - a, p - a) >= 0 with p = base + t perp
                    let e = [b[0] - a[0], b[1] - a[1]];
                    let c0 = e[0] * (base[1] - a[1]) - e[1] * (base[0] - a[0]);
                    let c1 = e[0] * perp[1] - e[1] * perp[0];
                    if c1.abs() < 1e-300 {
                        if c0 < 0.0 {
                            return None;
                        }
                    } else if c1 > 0.0 {
                        lo = lo.max(-c0 / c1);
                    } else {
                        hi = hi.min(-c0 / c1);
                    }
                }
                (hi > lo).then_some((lo, hi))
            }
        }
    }

    /// Boundary polygon: the region itself, or `n` points on the ellipse.
    pub fn boundary_polygon(&self, n: usize) -> Vec<[f64; 2]> {
        match self {
            ChartRegion::Ellipse { center, l } => (0..n)
                .map(|k| {
                    let (s, c) = (2.0 * PI * k as f64 / n as f64).sin_cos();
                    [
                        center[0] + l[0][0] * c + l[0][1] * s,
                        center[1] + l[1][0] * c + l[1][1] * s,
                    ]
                })
                .collect(),
            ChartRegion::Polygon(v) => v.clone(),
        }
    }

    /// Polygon of `region ∩ {<u, p> >= s}`; ellipse arcs are sampled with
    /// `arc_points` points. Empty when the cut misses the region.
    pub fn cap_polygon(&self, cut: Cut, arc_points: usize) -> Vec<[f64; 2]> {
        match self {
            ChartRegion::Ellipse { center, l } => {
                let lt = lt_mul(l, cut.normal);
                let nl = lt[0].hypot(lt[1]);
                // in q: <lt, q> >= s - <u, c>; with q = (cos a, sin a) rotated to lt
                let h = (cut.offset - cut.normal[0] * center[0] - cut.normal[1] * center[1]) / nl;
                if h >= 1.0 {
                    return Vec::new();
                }
                let phi0 = lt[1].atan2(lt[0]);
                let half = if h <= -1.0 { PI } else { h.acos() };
                let m = arc_points.max(2);
                (0..m)
                    .map(|k| {
                        let a = phi0 - half + 2.0 * half * k as f64 / (m - 1) as f64;
                        let (s, c) = a.sin_cos();
                        [
                            center[0] + l[0][0] * c + l[0][1] * s,
                            center[1] + l[1][0] * c + l[1][1] * s,
                        ]
                    })
                    .collect()
            }
            ChartRegion::Polygon(v) => {
                let p = clip_halfplane(v, [-cut.normal[0], -cut.normal[1]], -cut.offset);
                if p.len() < 3 {
                    Vec::new()
                } else {
                    p
                }
            }
        }
    }
}

/// Coarse and refined `∫ f` over a convex polygon by fan triangulation from its vertex centroid.
pub fn integrate_polygon(f: &impl Fn([f64; 2]) -> f64, poly: &[[f64; 2]]) -> (f64, f64) {
    let n = poly.len();
    if n < 3 {
        return (0.0, 0.0);
    }
    let s = poly.iter().fold([0.0, 0.0], |a, p| [a[0] + p[0], a[1] + p[1]]);
    let o = [s[0] / n as f64, s[1] / n as f64];
    let mut coarse = 0.0;
    let mut fine = 0.0;
    for i in 0..n {
        let (c, r) = integrate_triangle_refined(f, o, poly[i], poly[(i + 1) % n]);
        coarse += c;
        fine += r;
    }
    (coarse, fine)
}

#[inline]
fn lt_mul(l: &[[f64; 2]; 2], u: [f64; 2]) -> [f64; 2] {
    [l[0][0] * u[0] + l[1][0] * u[1], l[0][1] * u[0] + l[1][1] * u[1]]
}

#[inline]
fn det(l: &[[f64; 2]; 2]) -> f64 {
    l[0][0] * l[1][1] - l[0][1] * l[1][0]
}

fn singular_min(l: &[[f64; 2]; 2]) -> f64 {
    let a = l[0][0] * l[0][0] + l[1][0] * l[1][0];
    let b = l[0][0] * l[0][1] + l[1][0] * l[1][1];
    let c = l[0][1] * l[0][1] + l[1][1] * l[1][1];
    let tr = a + c;
    let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
    (0.5 * (tr - disc)).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn one(_: [f64; 2]) -> f64 {
        1.0
    }

    #[test]
    fn ellipse_areas_and_cuts() {
        let e = ChartRegion::ellipse([0.1, -0.2], [0.3, 0.1], 0.7);
        assert_abs_diff_eq!(e.integrate(&one, &[]), PI * 0.03, epsilon = 1e-14);
        // a cut through the centre halves it for any direction
        for k in 0..8 {
            let cut = Cut::from_angle(k as f64, 0.0);
            let c = e.center();
            let cut = Cut::new(cut.normal, cut.normal[0] * c[0] + cut.normal[1] * c[1]);
            assert_abs_diff_eq!(e.integrate(&one, &[cut]), PI * 0.015, epsilon = 1e-14);
        }
    }

    #[test]
    fn support_and_chords() {
        let d = ChartRegion::disc([0.0, 0.0], 2.0);
        assert_abs_diff_eq!(d.support([0.6, 0.8]), 2.0, epsilon = 1e-15);
        let (a, b) = d.chord_range([1.0, 0.0], 1.0).unwrap();
        assert_abs_diff_eq!(b - a, 2.0 * 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(d.chord_integral(&one, [1.0, 0.0], 1.0), 2.0 * 3f64.sqrt(), epsilon = 1e-13);
        let sq = ChartRegion::Polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let (a, b) = sq.chord_range([0.6, 0.8], 0.7).unwrap();
        let exact = {
            // line 0.6x + 0.8y = 0.7 meets the square between (0, 0.875) and (1, 0.125)
            (1.0f64 + 0.75 * 0.75).sqrt()
        };
        assert_abs_diff_eq!(b - a, exact, epsilon = 1e-14);
        assert!(sq.chord_range([1.0, 0.0], 1.5).is_none());
    }

    #[test]
    fn polygon_cut_matches_clip_area() {
        let sq = ChartRegion::Polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let v = sq.integrate(&one, &[Cut::new([1.0, 0.0], 0.25)]);
        assert_abs_diff_eq!(v, 0.75, epsilon = 1e-14);
        let cap = sq.cap_polygon(Cut::new([0.6, 0.8], 1.2), 0);
        assert_abs_diff_eq!(signed_area(&cap), sq.integrate(&one, &[Cut::new([0.6, 0.8], 1.2)]), epsilon = 1e-14);
    }

    #[test]
    fn ellipse_cap_polygon_converges_to_cap_area() {
        let e = ChartRegion::ellipse([0.0, 0.0], [0.5, 0.2], 0.3);
        let cut = Cut::new([0.8, 0.6], 0.2);
        let poly = e.cap_polygon(cut, 4000);
        let a = signed_area(&poly).abs();
        assert_abs_diff_eq!(a, e.integrate(&one, &[cut]), epsilon = 1e-6);
        for p in &poly {
            assert!(cut.eval(*p) >= -1e-12);
            assert!(e.contains(*p, 1e-12));
        }
    }
}
