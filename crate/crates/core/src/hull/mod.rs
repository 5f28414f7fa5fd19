//! Convex hulls of point sets in a gnomonic chart and the polytopes they bound.

pub mod planar;
pub mod spatial;

use std::collections::HashMap;

use crate::error::{GeoError, Result};
use crate::geometry::{AmbientPoint, ChartPoint, Frame, Geometry, GeometryKind, DOMAIN_TOL};

/// A geodesic polytope stored by its chart vertices.
///
/// Facets are vertex cycles: edges `[a, b]` in the plane (counter-clockwise
/// boundary order), and in three dimensions polygons oriented counter-clockwise
/// seen from outside. Hulls of points produce triangles; polars of hulls may
/// produce larger polygons.
#[derive(Clone, Debug)]
pub struct GeodesicPolytope {
    pub geometry: Geometry,
    pub frame: Frame,
    pub chart_vertices: Vec<ChartPoint>,
    pub facets: Vec<Vec<usize>>,
    /// Index of the input point each vertex came from, when built as a hull.
    pub provenance: Option<Vec<usize>>,
}

impl GeodesicPolytope {
    pub fn dim(&self) -> usize {
        self.geometry.dim
    }

    /// `(f_0, f_{d-1})`.
    pub fn f_vector(&self) -> (usize, usize) {
        (self.chart_vertices.len(), self.facets.len())
    }

    pub fn ambient_vertices(&self) -> Result<Vec<AmbientPoint>> {
        self.chart_vertices
            .iter()
            .map(|p| self.frame.unchart(self.geometry, p))
            .collect()
    }

    pub fn vertex2(&self, i: usize) -> [f64; 2] {
        let c = &self.chart_vertices[i].0;
        [c[0], c[1]]
    }

    pub fn vertex3(&self, i: usize) -> [f64; 3] {
        let c = &self.chart_vertices[i].0;
        [c[0], c[1], c[2]]
    }

    /// Vertices in boundary order (planar polytopes only).
    pub fn polygon(&self) -> Vec<[f64; 2]> {
        assert_eq!(self.dim(), 2);
        self.facets.iter().map(|f| self.vertex2(f[0])).collect()
    }

    /// Outward unit chart normal and offset of every facet hyperplane.
    pub fn facet_planes(&self) -> Vec<(Vec<f64>, f64)> {
        match self.dim() {
            2 => self
                .facets
                .iter()
                .map(|f| {
                    let (a, b) = (self.vertex2(f[0]), self.vertex2(f[1]));
                    let n = [b[1] - a[1], a[0] - b[0]];
                    let l = n[0].hypot(n[1]);
                    let n = vec![n[0] / l, n[1] / l];
                    let o = n[0] * a[0] + n[1] * a[1];
                    (n, o)
                })
                .collect(),
            3 => self
                .facets
                .iter()
                .map(|f| {
                    let (n, o) = spatial::plane(self.vertex3(f[0]), self.vertex3(f[1]), self.vertex3(f[2]));
                    (n.to_vec(), o)
                })
                .collect(),
            _ => unreachable!("polytopes are built in dimensions 2 and 3 only"),
        }
    }

    /// Chart-point membership with an absolute slack on the facet inequalities.
    pub fn contains_chart(&self, p: &[f64], tol: f64) -> bool {
        self.facet_planes()
            .iter()
            .all(|(n, o)| n.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() - o <= tol)
    }

    pub fn contains(&self, x: &AmbientPoint) -> bool {
        match self.frame.chart(self.geometry, x) {
            Ok(p) => self.contains_chart(p.coords(), DOMAIN_TOL),
            Err(_) => false,
        }
    }

    /// Facets strictly visible from `x`; points on a facet hyperplane do not see it.
    pub fn visible_facets(&self, x: &AmbientPoint) -> Result<Vec<usize>> {
        let p = self.frame.chart(self.geometry, x)?;
        Ok(self.visible_facets_chart(p.coords()))
    }

    pub fn visible_facets_chart(&self, p: &[f64]) -> Vec<usize> {
        self.facet_planes()
            .iter()
            .enumerate()
            .filter(|(_, (n, o))| n.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() - o > crate::geometry::ALGEBRAIC_TOL)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Convex hull of ambient points, charted with the identity frame.
pub fn convex_hull(geometry: Geometry, points: &[AmbientPoint]) -> Result<GeodesicPolytope> {
    convex_hull_in_frame(geometry, &Frame::identity(geometry), points)
}

/// Convex hull of ambient points, charted through `frame`.
pub fn convex_hull_in_frame(geometry: Geometry, frame: &Frame, points: &[AmbientPoint]) -> Result<GeodesicPolytope> {
    let chart = points
        .iter()
        .map(|x| frame.chart(geometry, x))
        .collect::<Result<Vec<_>>>()?;
    hull_of_chart_points(geometry, frame, &chart)
}

/// Convex hull of points already expressed in the chart of `frame`.
pub fn hull_of_chart_points(geometry: Geometry, frame: &Frame, chart: &[ChartPoint]) -> Result<GeodesicPolytope> {
    let d = geometry.dim;
    match d {
        2 => {
            let pts: Vec<[f64; 2]> = chart.iter().map(|p| [p.0[0], p.0[1]]).collect();
            let idx = planar::hull_indices(&pts)?;
            let m = idx.len();
            Ok(GeodesicPolytope {
                geometry,
                frame: frame.clone(),
                chart_vertices: idx.iter().map(|&i| chart[i].clone()).collect(),
                facets: (0..m).map(|i| vec![i, (i + 1) % m]).collect(),
                provenance: Some(idx),
            })
        }
        3 => {
            let pts: Vec<[f64; 3]> = chart.iter().map(|p| [p.0[0], p.0[1], p.0[2]]).collect();
            let h = spatial::hull(&pts)?;
            let mut remap = HashMap::with_capacity(h.vertices.len());
            for (k, &i) in h.vertices.iter().enumerate() {
                remap.insert(i, k);
            }
            Ok(GeodesicPolytope {
                geometry,
                frame: frame.clone(),
                chart_vertices: h.vertices.iter().map(|&i| chart[i].clone()).collect(),
                facets: h.faces.iter().map(|f| f.iter().map(|v| remap[v]).collect()).collect(),
                provenance: Some(h.vertices),
            })
        }
        _ => Err(GeoError::Unsupported(format!("convex hulls in dimension {d}"))),
    }
}

/// Area of a planar geodesic polygon from its turning angles:
/// `2 pi - sum(exterior angles)` scaled by the curvature sign, or the shoelace
/// area in the Euclidean case.
pub fn gauss_bonnet_area(p: &GeodesicPolytope) -> Result<f64> {
    if p.dim() != 2 {
        return Err(GeoError::Unsupported("Gauss-Bonnet area is planar only".into()));
    }
    let poly = p.polygon();
    if p.geometry.kind == GeometryKind::Euclidean {
        return Ok(planar::signed_area(&poly).abs());
    }
    let verts = p
        .facets
        .iter()
        .map(|f| p.frame.unchart(p.geometry, &p.chart_vertices[f[0]]))
        .collect::<Result<Vec<AmbientPoint>>>()?;
    let m = verts.len();
    let form = |a: &[f64], b: &[f64]| -> f64 {
        match p.geometry.kind {
            GeometryKind::Hyperbolic => crate::geometry::minkowski(a, b),
            _ => crate::geometry::dot(a, b),
        }
    };
    // Tangent at x towards y: y - <x,y> x (sphere) or y + <x,y>_L x (hyperboloid).
    let tangent = |x: &[f64], y: &[f64]| -> Vec<f64> {
        let s = form(x, y);
        let sign = if p.geometry.kind == GeometryKind::Hyperbolic { 1.0 } else { -1.0 };
        x.iter().zip(y).map(|(xi, yi)| yi + sign * s * xi).collect()
    };
    let mut interior_sum = 0.0;
    for i in 0..m {
        let x = verts[i].coords();
        let prev = verts[(i + m - 1) % m].coords();
        let next = verts[(i + 1) % m].coords();
        let t1 = tangent(x, prev);
        let t2 = tangent(x, next);
        let c = form(&t1, &t2) / (form(&t1, &t1).sqrt() * form(&t2, &t2).sqrt());
        interior_sum += c.clamp(-1.0, 1.0).acos();
    }
    let flat = (m as f64 - 2.0) * std::f64::consts::PI;
    Ok(match p.geometry.kind {
        GeometryKind::Spherical => interior_sum - flat,
        _ => flat - interior_sum,
    })
}
