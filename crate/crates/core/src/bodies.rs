//! Convex test bodies: geodesic balls, chart ellipses and chart polytopes,
//! plus closed hemispheres and spherical polarity.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{GeoError, Result};
use crate::geometry::{
    chart_radius, dot, geodesic_distance, AmbientPoint, ChartPoint, Coords, Frame, Geometry, GeometryKind,
    ALGEBRAIC_TOL,
};
use crate::hull::{hull_of_chart_points, planar, GeodesicPolytope};
use crate::region::ChartRegion;

/// Boundary resolution used whenever an ellipse has to be replaced by a polygon.
pub const ELLIPSE_POLYGON_SIDES: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    GeodesicBall { center: AmbientPoint, radius: f64 },
    /// Planar only. `angle` rotates the first semi-axis away from the chart x-axis.
    ChartEllipse { center: [f64; 2], semi_axes: [f64; 2], angle: f64 },
    ChartPolytope { vertices: Vec<ChartPoint> },
}

/// A convex body together with the frame whose chart describes it.
///
/// For balls the frame is centred at the ball centre, so the chart image is a
/// round disc (or ball) about the origin.
#[derive(Clone, Debug)]
pub struct ConvexBodySpec {
    geometry: Geometry,
    shape: Shape,
    frame: Frame,
    polytope: Option<GeodesicPolytope>,
}

impl ConvexBodySpec {
    pub fn geodesic_ball(geometry: Geometry, center: AmbientPoint, radius: f64) -> Result<Self> {
        center.validate(geometry)?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeoError::InvalidInput(format!("ball radius {radius} must be positive")));
        }
        if geometry.kind == GeometryKind::Spherical && radius >= FRAC_PI_2 {
            return Err(GeoError::InvalidInput(format!(
                "spherical ball radius {radius} must be below pi/2"
            )));
        }
        let frame = Frame::centered_at(geometry, &center)?;
        Ok(Self {
            geometry,
            shape: Shape::GeodesicBall { center, radius },
            frame,
            polytope: None,
        })
    }

    /// Ball centred at the chart pole `e_{d+1}`.
    pub fn ball_at_pole(geometry: Geometry, radius: f64) -> Result<Self> {
        Self::geodesic_ball(geometry, geometry.pole(), radius)
    }

    pub fn chart_ellipse(geometry: Geometry, center: [f64; 2], semi_axes: [f64; 2], angle: f64) -> Result<Self> {
        Self::chart_ellipse_in_frame(geometry, Frame::identity(geometry), center, semi_axes, angle)
    }

    pub fn chart_ellipse_in_frame(
        geometry: Geometry,
        frame: Frame,
        center: [f64; 2],
        semi_axes: [f64; 2],
        angle: f64,
    ) -> Result<Self> {
        if geometry.dim != 2 {
            return Err(GeoError::Unsupported("chart ellipses are planar only".into()));
        }
        let finite = semi_axes.iter().all(|a| a.is_finite() && *a > 0.0)
            && angle.is_finite()
            && center.iter().all(|c| c.is_finite());
        if !finite {
            return Err(GeoError::InvalidInput("ellipse semi-axes must be positive and finite".into()));
        }
        let body = Self {
            geometry,
            shape: Shape::ChartEllipse { center, semi_axes, angle },
            frame,
            polytope: None,
        };
        if geometry.kind == GeometryKind::Hyperbolic {
            let region = body.chart_region()?;
            // max |p| over the ellipse, attained at a boundary point
            let worst = region
                .boundary_polygon(ELLIPSE_POLYGON_SIDES)
                .iter()
                .map(|p| p[0].hypot(p[1]))
                .fold(0.0, f64::max);
            if worst * (1.0 + 1e-6) >= 1.0 {
                return Err(GeoError::InvalidInput(
                    "hyperbolic chart ellipse must lie inside the unit disc".into(),
                ));
            }
        }
        Ok(body)
    }

    pub fn chart_polytope(geometry: Geometry, vertices: Vec<ChartPoint>) -> Result<Self> {
        Self::chart_polytope_in_frame(geometry, Frame::identity(geometry), vertices)
    }

    /// Polytope given by chart points; interior points are discarded so the
    /// stored vertex list is its own hull. A single (possibly repeated) point is
    /// accepted as a degenerate body.
    pub fn chart_polytope_in_frame(geometry: Geometry, frame: Frame, vertices: Vec<ChartPoint>) -> Result<Self> {
        let d = geometry.dim;
        if vertices.is_empty() {
            return Err(GeoError::InvalidInput("chart polytope needs at least one vertex".into()));
        }
        for v in &vertices {
            if v.0.len() != d || v.0.iter().any(|c| !c.is_finite()) {
                return Err(GeoError::InvalidInput(format!(
                    "chart vertex must have {d} finite coordinates"
                )));
            }
            if geometry.kind == GeometryKind::Hyperbolic && v.norm() >= 1.0 {
                return Err(GeoError::InvalidInput("hyperbolic chart vertex outside the unit ball".into()));
            }
        }
        if vertices.iter().all(|v| v == &vertices[0]) {
            return Ok(Self {
                geometry,
                shape: Shape::ChartPolytope { vertices: vec![vertices[0].clone()] },
                frame,
                polytope: None,
            });
        }
        let hull = hull_of_chart_points(geometry, &frame, &vertices).map_err(|e| match e {
            GeoError::DegenerateHull { rank, .. } => {
                GeoError::InvalidInput(format!("chart polytope vertices span only {rank} dimensions"))
            }
            other => other,
        })?;
        Ok(Self {
            geometry,
            shape: Shape::ChartPolytope { vertices: hull.chart_vertices.clone() },
            frame,
            polytope: Some(GeodesicPolytope { provenance: None, ..hull }),
        })
    }

    /// Axis-parallel chart square `[-h, h]^2` (or cube in three dimensions).
    pub fn chart_square(geometry: Geometry, half_side: f64) -> Result<Self> {
        let d = geometry.dim;
        let verts = (0..1usize << d)
            .map(|m| ChartPoint((0..d).map(|k| if m >> k & 1 == 1 { half_side } else { -half_side }).collect()))
            .collect();
        Self::chart_polytope(geometry, verts)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Frame whose chart is used for quadrature, sampling and hulls of this body.
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Hull representation of a non-degenerate chart polytope.
    pub fn polytope(&self) -> Option<&GeodesicPolytope> {
        self.polytope.as_ref()
    }

    pub fn is_ball(&self) -> bool {
        matches!(self.shape, Shape::GeodesicBall { .. })
    }

    /// Chart image in [`Self::frame`] (planar bodies).
    pub fn chart_region(&self) -> Result<ChartRegion> {
        if self.dim() != 2 {
            return Err(GeoError::Unsupported("chart regions are planar only".into()));
        }
        Ok(match &self.shape {
            Shape::GeodesicBall { radius, .. } => {
                ChartRegion::disc([0.0, 0.0], chart_radius(self.geometry, *radius))
            }
            Shape::ChartEllipse { center, semi_axes, angle } => ChartRegion::ellipse(*center, *semi_axes, *angle),
            Shape::ChartPolytope { vertices } => match &self.polytope {
                Some(p) => ChartRegion::Polygon(p.polygon()),
                None => ChartRegion::Polygon(vec![[vertices[0].0[0], vertices[0].0[1]]; 3]),
            },
        })
    }

    pub fn contains(&self, x: &AmbientPoint) -> bool {
        if let Shape::GeodesicBall { center, radius } = &self.shape {
            return match geodesic_distance(self.geometry, center, x) {
                Ok(r) => r <= radius + ALGEBRAIC_TOL,
                Err(_) => false,
            };
        }
        match self.frame.chart(self.geometry, x) {
            Ok(p) => self.contains_chart(p.coords()),
            Err(_) => false,
        }
    }

    /// Membership of a point given in the chart of [`Self::frame`].
    pub fn contains_chart(&self, p: &[f64]) -> bool {
        match &self.shape {
            Shape::GeodesicBall { radius, .. } => {
                let rho = chart_radius(self.geometry, *radius);
                dot(p, p).sqrt() <= rho + ALGEBRAIC_TOL
            }
            Shape::ChartEllipse { .. } => self
                .chart_region()
                .map(|r| r.contains([p[0], p[1]], ALGEBRAIC_TOL))
                .unwrap_or(false),
            Shape::ChartPolytope { vertices } => match &self.polytope {
                Some(poly) => poly.contains_chart(p, ALGEBRAIC_TOL),
                None => vertices[0].0.iter().zip(p).all(|(a, b)| (a - b).abs() <= ALGEBRAIC_TOL),
            },
        }
    }

    /// `(min, max)` over the body of a positive multiple of `<u, y>`; only the
    /// signs are meaningful for curved geometries.
    pub fn linear_sign_range(&self, u: &[f64]) -> (f64, f64) {
        let w = self.frame.pull_covector(u);
        let d = self.dim();
        let (wp, wl) = (&w[..d], w[d]);
        match &self.shape {
            Shape::GeodesicBall { radius, .. } => {
                let r = chart_radius(self.geometry, *radius) * dot(wp, wp).sqrt();
                (wl - r, wl + r)
            }
            Shape::ChartEllipse { .. } => {
                let region = self.chart_region().expect("ellipses are planar");
                let (lo, hi) = region.linear_range([wp[0], wp[1]]);
                (lo + wl, hi + wl)
            }
            Shape::ChartPolytope { vertices } => {
                vertices
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        let s = dot(wp, v.coords()) + wl;
                        (lo.min(s), hi.max(s))
                    })
            }
        }
    }

    /// A geodesic cap containing the body: exact for balls, otherwise centred at
    /// the preimage of the smallest enclosing chart ball.
    pub fn bounding_cap(&self) -> Result<(AmbientPoint, f64)> {
        let g = self.geometry;
        match &self.shape {
            Shape::GeodesicBall { center, radius } => Ok((center.clone(), *radius)),
            Shape::ChartPolytope { vertices } => {
                let pts: Vec<&[f64]> = vertices.iter().map(|v| v.coords()).collect();
                let m = min_enclosing_center(&pts);
                let c = self.frame.unchart(g, &ChartPoint(m))?;
                let mut r: f64 = 0.0;
                for v in vertices {
                    r = r.max(geodesic_distance(g, &c, &self.frame.unchart(g, v)?)?);
                }
                Ok((c, r))
            }
            Shape::ChartEllipse { center, .. } => {
                let c = self.frame.unchart(g, &ChartPoint(Coords::from_slice(center)))?;
                let mut r: f64 = 0.0;
                for p in self.chart_region()?.boundary_polygon(ELLIPSE_POLYGON_SIDES) {
                    let y = self.frame.unchart(g, &ChartPoint(Coords::from_slice(&p)))?;
                    r = r.max(geodesic_distance(g, &c, &y)?);
                }
                // the sampled maximum of a smooth function misses the true one by O(step^2)
                Ok((c, r * (1.0 + 1e-5) + 1e-9))
            }
        }
    }

    /// The polar body `K* = ∩_{x in K} H^-(x)`.
    pub fn spherical_polar(&self) -> Result<Self> {
        if !self.geometry.is_spherical() {
            return Err(GeoError::Unsupported("polarity is defined for spherical bodies only".into()));
        }
        let g = self.geometry;
        match &self.shape {
            Shape::GeodesicBall { center, radius } => {
                let anti = AmbientPoint(center.coords().iter().map(|v| -v).collect());
                Self::geodesic_ball(g, anti, FRAC_PI_2 - radius)
            }
            Shape::ChartPolytope { .. } => {
                let p = self
                    .polytope
                    .as_ref()
                    .ok_or_else(|| GeoError::InvalidInput("polar of a degenerate polytope".into()))?;
                let q = polar_polytope(p)?;
                Self::chart_polytope_in_frame(g, q.frame.clone(), q.chart_vertices)
            }
            Shape::ChartEllipse { .. } => {
                let poly = self.chart_region()?.boundary_polygon(ELLIPSE_POLYGON_SIDES);
                let verts = poly.iter().map(|p| ChartPoint(Coords::from_slice(p))).collect();
                Self::chart_polytope_in_frame(g, self.frame.clone(), verts)?.spherical_polar()
            }
        }
    }
}

/// Closed hemisphere `H^-(pole) = {y : <pole, y> <= 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hemisphere {
    pole: AmbientPoint,
}

impl Hemisphere {
    pub fn new(pole: AmbientPoint) -> Result<Self> {
        let n = dot(pole.coords(), pole.coords()).sqrt();
        if (n - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(GeoError::InvalidInput(format!("hemisphere pole has norm {n}")));
        }
        Ok(Self { pole })
    }

    pub fn pole(&self) -> &AmbientPoint {
        &self.pole
    }

    /// `y in H^-`, boundary included.
    pub fn contains(&self, y: &AmbientPoint) -> bool {
        dot(self.pole.coords(), y.coords()) <= ALGEBRAIC_TOL
    }

    /// `y in H^+`, boundary included.
    pub fn upper_contains(&self, y: &AmbientPoint) -> bool {
        dot(self.pole.coords(), y.coords()) >= -ALGEBRAIC_TOL
    }

    /// `K ⊆ H^-`, i.e. the pole lies in `K*`.
    pub fn contains_body(&self, body: &ConvexBodySpec) -> bool {
        body.linear_sign_range(self.pole.coords()).1 <= ALGEBRAIC_TOL
    }
}

/// The polar of a spherical polytope: vertices are the outward poles of the
/// facet great spheres, and each input vertex becomes a facet.
///
/// The result is charted from the antipode of the input's vertex centroid.
pub fn polar_polytope(p: &GeodesicPolytope) -> Result<GeodesicPolytope> {
    let g = p.geometry;
    if !g.is_spherical() {
        return Err(GeoError::Unsupported("polarity is defined for spherical polytopes only".into()));
    }
    let d = g.dim;
    if p.chart_vertices.len() < d + 1 || p.facets.len() < d + 1 {
        return Err(GeoError::DegenerateHull {
            rank: p.chart_vertices.len().saturating_sub(1).min(d - 1),
            required: d,
        });
    }
    let verts = p.ambient_vertices()?;
    let mut o: Coords = Coords::from_elem(0.0, d + 1);
    for v in &verts {
        for (a, b) in o.iter_mut().zip(v.coords()) {
            *a += b;
        }
    }
    normalize(&mut o);
    let poles: Vec<AmbientPoint> = p
        .facets
        .iter()
        .map(|f| {
            let mut w: Coords = match d {
                2 => cross3(verts[f[0]].coords(), verts[f[1]].coords()).iter().copied().collect(),
                3 => cross4(verts[f[0]].coords(), verts[f[1]].coords(), verts[f[2]].coords())
                    .iter()
                    .copied()
                    .collect(),
                _ => unreachable!("polytopes are built in dimensions 2 and 3 only"),
            };
            normalize(&mut w);
            if dot(&w, &o) > 0.0 {
                w.iter_mut().for_each(|x| *x = -*x);
            }
            AmbientPoint(w)
        })
        .collect();
    let anti = AmbientPoint(o.iter().map(|x| -x).collect());
    let frame = Frame::centered_at(g, &anti)?;
    let chart: Vec<ChartPoint> = poles.iter().map(|w| frame.chart(g, w)).collect::<Result<_>>()?;

    let (chart_vertices, facets) = if d == 2 {
        // walk input edges in boundary order; consecutive edges meet at a vertex
        let mut by_start: HashMap<usize, usize> = HashMap::new();
        for (i, f) in p.facets.iter().enumerate() {
            by_start.insert(f[0], i);
        }
        let mut order = Vec::with_capacity(p.facets.len());
        let mut cur = 0usize;
        for _ in 0..p.facets.len() {
            order.push(cur);
            cur = *by_start
                .get(&p.facets[cur][1])
                .ok_or_else(|| GeoError::Numerical("polygon boundary is not a cycle".into()))?;
        }
        let mut pts: Vec<ChartPoint> = order.iter().map(|&i| chart[i].clone()).collect();
        let poly: Vec<[f64; 2]> = pts.iter().map(|c| [c.0[0], c.0[1]]).collect();
        if planar::signed_area(&poly) < 0.0 {
            pts.reverse();
        }
        let m = pts.len();
        (pts, (0..m).map(|i| vec![i, (i + 1) % m]).collect::<Vec<_>>())
    } else {
        let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();
        let mut incident: Vec<Option<usize>> = vec![None; verts.len()];
        for (fi, f) in p.facets.iter().enumerate() {
            for k in 0..f.len() {
                edge_owner.insert((f[k], f[(k + 1) % f.len()]), fi);
                incident[f[k]].get_or_insert(fi);
            }
        }
        let succ = |fi: usize, v: usize| -> usize {
            let f = &p.facets[fi];
            let k = f.iter().position(|&x| x == v).expect("vertex on facet");
            f[(k + 1) % f.len()]
        };
        let centroid = {
            let mut c = [0.0; 3];
            for q in &chart {
                for k in 0..3 {
                    c[k] += q.0[k] / chart.len() as f64;
                }
            }
            c
        };
        let mut facets = Vec::with_capacity(verts.len());
        for v in 0..verts.len() {
            let start = incident[v].ok_or_else(|| GeoError::Numerical("vertex without facets".into()))?;
            let mut cycle = vec![start];
            let mut cur = start;
            loop {
                let b = succ(cur, v);
                cur = *edge_owner
                    .get(&(b, v))
                    .ok_or_else(|| GeoError::Numerical("polytope surface is not closed".into()))?;
                if cur == start {
                    break;
                }
                cycle.push(cur);
                if cycle.len() > p.facets.len() {
                    return Err(GeoError::Numerical("facet walk did not close".into()));
                }
            }
            // orient counter-clockwise seen from outside (Newell normal vs centroid)
            let mut n = [0.0; 3];
            let mut c = [0.0; 3];
            for k in 0..cycle.len() {
                let a = &chart[cycle[k]].0;
                let b = &chart[cycle[(k + 1) % cycle.len()]].0;
                n[0] += (a[1] - b[1]) * (a[2] + b[2]);
                n[1] += (a[2] - b[2]) * (a[0] + b[0]);
                n[2] += (a[0] - b[0]) * (a[1] + b[1]);
                for j in 0..3 {
                    c[j] += a[j] / cycle.len() as f64;
                }
            }
            let out: f64 = (0..3).map(|j| n[j] * (c[j] - centroid[j])).sum();
            if out < 0.0 {
                cycle.reverse();
            }
            facets.push(cycle);
        }
        (chart, facets)
    };
    Ok(GeodesicPolytope {
        geometry: g,
        frame,
        chart_vertices,
        facets,
        provenance: None,
    })
}

fn normalize(v: &mut Coords) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// A vector orthogonal to `a, b, c` in `R^4` (cofactor expansion).
fn cross4(a: &[f64], b: &[f64], c: &[f64]) -> [f64; 4] {
    let m = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    [m(1, 2, 3), -m(0, 2, 3), m(0, 1, 3), -m(0, 1, 2)]
}

/// Centre of the smallest enclosing Euclidean ball: exact (Welzl) in the plane,
/// Badoiu–Clarkson iteration otherwise.
fn min_enclosing_center(pts: &[&[f64]]) -> Coords {
    let d = pts[0].len();
    if d == 2 {
        let p: Vec<[f64; 2]> = pts.iter().map(|v| [v[0], v[1]]).collect();
        let (c, _) = welzl(&p);
        return Coords::from_slice(&c);
    }
    let mut c: Coords = Coords::from_slice(pts[0]);
    for k in 1..=2000 {
        let far = pts
            .iter()
            .max_by(|a, b| dist2(a, &c).total_cmp(&dist2(b, &c)))
            .expect("non-empty");
        let step = 1.0 / (k as f64 + 1.0);
        for (ci, fi) in c.iter_mut().zip(far.iter()) {
            *ci += step * (fi - *ci);
        }
    }
    c
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn welzl(p: &[[f64; 2]]) -> ([f64; 2], f64) {
    let inside =
        |c: [f64; 2], r: f64, q: [f64; 2]| (q[0] - c[0]).hypot(q[1] - c[1]) <= r * (1.0 + 1e-12) + 1e-15;
    let two = |a: [f64; 2], b: [f64; 2]| {
        (
            [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])],
            0.5 * (a[0] - b[0]).hypot(a[1] - b[1]),
        )
    };
    let three = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
        let (bx, by) = (b[0] - a[0], b[1] - a[1]);
        let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
        let dd = 2.0 * (bx * cy - by * cx);
        if dd.abs() < 1e-300 {
            // collinear: the widest pair decides
            let cands = [two(a, b), two(a, c), two(b, c)];
            return cands.into_iter().max_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
        }
        let ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / dd;
        let uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / dd;
        ([a[0] + ux, a[1] + uy], ux.hypot(uy))
    };
    let mut c = p[0];
    let mut r = 0.0;
    for i in 1..p.len() {
        if inside(c, r, p[i]) {
            continue;
        }
        c = p[i];
        r = 0.0;
        for j in 0..i {
            if inside(c, r, p[j]) {
                continue;
            }
            (c, r) = two(p[i], p[j]);
            for k in 0..j {
                if !inside(c, r, p[k]) {
                    (c, r) = three(p[i], p[j], p[k]);
                }
            }
        }
    }
    (c, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_from_pole;
    use approx::assert_abs_diff_eq;

    fn s2() -> Geometry {
        Geometry::spherical(2)
    }

    #[test]
    fn ball_membership_examples() {
        let b = ConvexBodySpec::ball_at_pole(s2(), 0.5).unwrap();
        let inside = AmbientPoint::new(s2(), &[0.0, 0.3f64.sin(), 0.3f64.cos()]).unwrap();
        let outside = AmbientPoint::new(s2(), &[0.0, 0.6f64.sin(), 0.6f64.cos()]).unwrap();
        assert!(b.contains(&inside));
        assert!(!b.contains(&outside));
    }

    #[test]
    fn square_membership() {
        let sq = ConvexBodySpec::chart_polytope(
            s2(),
            vec![
                ChartPoint::new(&[0.0, 0.0]),
                ChartPoint::new(&[1.0, 0.0]),
                ChartPoint::new(&[1.0, 1.0]),
                ChartPoint::new(&[0.0, 1.0]),
            ],
        )
        .unwrap();
        let x = crate::geometry::gnomonic_inverse(s2(), &ChartPoint::new(&[0.25, 0.25])).unwrap();
        assert!(sq.contains(&x));
        let y = crate::geometry::gnomonic_inverse(s2(), &ChartPoint::new(&[1.25, 0.25])).unwrap();
        assert!(!sq.contains(&y));
    }

    #[test]
    fn interior_vertices_are_dropped() {
        let p = ConvexBodySpec::chart_polytope(
            s2(),
            vec![
                ChartPoint::new(&[0.0, 0.0]),
                ChartPoint::new(&[1.0, 0.0]),
                ChartPoint::new(&[0.2, 0.2]),
                ChartPoint::new(&[0.0, 1.0]),
            ],
        )
        .unwrap();
        let Shape::ChartPolytope { vertices } = p.shape() else { unreachable!() };
        assert_eq!(vertices.len(), 3);
    }

    #[test]
    fn bounding_caps() {
        let b = ConvexBodySpec::ball_at_pole(s2(), 0.4).unwrap();
        let (c, r) = b.bounding_cap().unwrap();
        assert_eq!(c, s2().pole());
        assert_eq!(r, 0.4);
        let v = ChartPoint::new(&[0.3, -0.1]);
        let single = ConvexBodySpec::chart_polytope(s2(), vec![v.clone()]).unwrap();
        let (c, r) = single.bounding_cap().unwrap();
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-15);
        let expect = crate::geometry::gnomonic_inverse(s2(), &v).unwrap();
        for (a, b) in c.coords().iter().zip(expect.coords()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let sq = ConvexBodySpec::chart_square(s2(), 0.2).unwrap();
        let (c, r) = sq.bounding_cap().unwrap();
        assert_abs_diff_eq!(r, (0.2f64 * 2f64.sqrt()).atan(), epsilon = 1e-12);
        assert_abs_diff_eq!(c.last(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn ball_polar_and_involution() {
        let b = ConvexBodySpec::ball_at_pole(s2(), 0.3).unwrap();
        let p = b.spherical_polar().unwrap();
        match p.shape() {
            Shape::GeodesicBall { center, radius } => {
                assert_eq!(center.coords(), &[-0.0, -0.0, -1.0]);
                assert_abs_diff_eq!(*radius, FRAC_PI_2 - 0.3, epsilon = 1e-15);
            }
            _ => panic!("polar of a ball is a ball"),
        }
        let b = ConvexBodySpec::ball_at_pole(s2(), 0.4).unwrap();
        let pp = b.spherical_polar().unwrap().spherical_polar().unwrap();
        match pp.shape() {
            Shape::GeodesicBall { center, radius } => {
                assert_eq!(center, &s2().pole());
                assert_abs_diff_eq!(*radius, 0.4, epsilon = 1e-15);
            }
            _ => panic!("polar of a ball is a ball"),
        }
    }

    #[test]
    fn triangle_polar_is_triangle_of_edge_poles() {
        let tri = ConvexBodySpec::chart_polytope(
            s2(),
            vec![
                ChartPoint::new(&[0.3, 0.0]),
                ChartPoint::new(&[-0.2, 0.25]),
                ChartPoint::new(&[-0.1, -0.3]),
            ],
        )
        .unwrap();
        let p = tri.polytope().unwrap();
        let q = polar_polytope(p).unwrap();
        assert_eq!(q.f_vector(), (3, 3));
        let verts = p.ambient_vertices().unwrap();
        for w in q.ambient_vertices().unwrap() {
            let on: Vec<f64> = verts.iter().map(|v| dot(v.coords(), w.coords())).collect();
            // each pole is orthogonal to two vertices and has the third strictly below
            assert_eq!(on.iter().filter(|s| s.abs() < 1e-12).count(), 2);
            assert!(on.iter().all(|s| *s <= 1e-12));
        }
        let back = polar_polytope(&q).unwrap();
        let orig = p.ambient_vertices().unwrap();
        for v in back.ambient_vertices().unwrap() {
            let best = orig
                .iter()
                .map(|o| dist2(o.coords(), v.coords()))
                .fold(f64::INFINITY, f64::min);
            assert!(best.sqrt() < 1e-10);
        }
    }

    #[test]
    fn polyhedron_polar_counts() {
        let g = Geometry::spherical(3);
        let verts = vec![
            ChartPoint::new(&[0.2, 0.1, 0.0]),
            ChartPoint::new(&[-0.2, 0.15, 0.05]),
            ChartPoint::new(&[0.0, -0.25, 0.1]),
            ChartPoint::new(&[0.05, 0.0, 0.3]),
            ChartPoint::new(&[0.0, 0.0, -0.3]),
        ];
        let body = ConvexBodySpec::chart_polytope(g, verts).unwrap();
        let p = body.polytope().unwrap();
        let (f0, f2) = p.f_vector();
        let q = polar_polytope(p).unwrap();
        assert_eq!(q.f_vector(), (f2, f0));
        let back = polar_polytope(&q).unwrap();
        assert_eq!(back.f_vector(), (f0, f2));
        // polar facets are oriented outward, so the vertex centroid is strictly inside
        let c: Vec<f64> = (0..3)
            .map(|k| q.chart_vertices.iter().map(|v| v.0[k]).sum::<f64>() / q.chart_vertices.len() as f64)
            .collect();
        assert!(q.contains_chart(&c, -1e-9));
    }

    #[test]
    fn hemisphere_containment_of_ball() {
        let b = ConvexBodySpec::ball_at_pole(s2(), 0.3).unwrap();
        let far = point_from_pole(s2(), FRAC_PI_2 + 0.31, &[1.0, 0.0]);
        let near = point_from_pole(s2(), FRAC_PI_2 + 0.29, &[1.0, 0.0]);
        assert!(Hemisphere::new(far).unwrap().contains_body(&b));
        assert!(!Hemisphere::new(near).unwrap().contains_body(&b));
    }
}
