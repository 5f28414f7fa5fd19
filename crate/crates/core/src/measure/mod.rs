//! Curved volumes by chart-density quadrature, caps, floating bodies, cap
//! coverings and the mean width.

pub mod capcover;
pub mod floating;
pub mod mean_width;

use crate::bodies::{ConvexBodySpec, Shape};
use crate::error::{GeoError, Result};
use crate::geometry::{density_from_norm2, sphere_surface_area, Coords, Geometry, GeometryKind, ALGEBRAIC_TOL};
use crate::hull::GeodesicPolytope;
use crate::quadrature::{integrate_1d, integrate_tetrahedron_refined};
use crate::region::{integrate_polygon, ChartRegion, Cut};

pub use capcover::{cap_cover_2d, CapCover, CapCoverParams};
pub use floating::{floating_body_2d, floating_body_2d_with, offset_for_volume, wet_part_volume};
pub use mean_width::{mean_width_excess_paired, mean_width_u1, MeanWidthEstimate, SignRange};

/// `K ∩ {<normal, p> >= offset}` in the chart of the body's frame.
#[derive(Clone, Debug, PartialEq)]
pub struct CapCut {
    pub geometry: Geometry,
    pub normal: Coords,
    pub offset: f64,
}

impl CapCut {
    pub fn new(geometry: Geometry, normal: &[f64], offset: f64) -> Result<Self> {
        if normal.len() != geometry.dim {
            return Err(GeoError::InvalidInput(format!(
                "cap normal has {} components, expected {}",
                normal.len(),
                geometry.dim
            )));
        }
        let n = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (n - 1.0).abs() > ALGEBRAIC_TOL || !offset.is_finite() {
            return Err(GeoError::InvalidInput(format!("cap normal has length {n}")));
        }
        Ok(Self {
            geometry,
            normal: Coords::from_slice(normal),
            offset,
        })
    }

    pub fn planar(&self) -> Cut {
        Cut::new([self.normal[0], self.normal[1]], self.offset)
    }
}

/// The chart density as a closure over planar chart points.
pub fn density2(geometry: Geometry) -> impl Fn([f64; 2]) -> f64 {
    move |p| density_from_norm2(geometry, p[0] * p[0] + p[1] * p[1])
}

/// The chart density as a closure over spatial chart points.
pub fn density3(geometry: Geometry) -> impl Fn([f64; 3]) -> f64 {
    move |p| density_from_norm2(geometry, p[0] * p[0] + p[1] * p[1] + p[2] * p[2])
}

/// `∫ psi` over the chart polytope by fan triangulation from the vertex centroid.
/// Returns the refined value and `|refined - coarse|`.
pub fn polytope_volume(p: &GeodesicPolytope) -> Result<(f64, f64)> {
    let g = p.geometry;
    match g.dim {
        2 => {
            if p.facets.len() < 3 {
                return Err(GeoError::DegenerateHull { rank: 1, required: 2 });
            }
            let (coarse, fine) = integrate_polygon(&density2(g), &p.polygon());
            Ok((fine, (fine - coarse).abs()))
        }
        3 => {
            if p.facets.len() < 4 {
                return Err(GeoError::DegenerateHull { rank: 2, required: 3 });
            }
            let n = p.chart_vertices.len() as f64;
            let mut o = [0.0; 3];
            for i in 0..p.chart_vertices.len() {
                let v = p.vertex3(i);
                for k in 0..3 {
                    o[k] += v[k] / n;
                }
            }
            let psi = density3(g);
            let (mut coarse, mut fine) = (0.0, 0.0);
            for f in &p.facets {
                let a = p.vertex3(f[0]);
                for w in 1..f.len() - 1 {
                    let (c, r) = integrate_tetrahedron_refined(&psi, o, a, p.vertex3(f[w]), p.vertex3(f[w + 1]));
                    coarse += c;
                    fine += r;
                }
            }
            Ok((fine, (fine - coarse).abs()))
        }
        d => Err(GeoError::Unsupported(format!("polytope volume in dimension {d}"))),
    }
}

/// Volume of a geodesic ball of radius `r`.
pub fn ball_volume(geometry: Geometry, r: f64) -> f64 {
    let d = geometry.dim;
    match (geometry.kind, d) {
        (GeometryKind::Spherical, 2) => 2.0 * std::f64::consts::PI * (1.0 - r.cos()),
        (GeometryKind::Hyperbolic, 2) => 2.0 * std::f64::consts::PI * (r.cosh() - 1.0),
        (GeometryKind::Euclidean, _) => sphere_surface_area(d - 1) * r.powi(d as i32) / d as f64,
        (GeometryKind::Spherical, _) => {
            sphere_surface_area(d - 1) * integrate_1d(|s| s.sin().powi(d as i32 - 1), 0.0, r, 40)
        }
        (GeometryKind::Hyperbolic, _) => {
            sphere_surface_area(d - 1) * integrate_1d(|s| s.sinh().powi(d as i32 - 1), 0.0, r, 40)
        }
    }
}

pub fn body_volume(body: &ConvexBodySpec) -> Result<f64> {
    let g = body.geometry();
    match body.shape() {
        Shape::GeodesicBall { radius, .. } => Ok(ball_volume(g, *radius)),
        Shape::ChartEllipse { .. } => Ok(body.chart_region()?.integrate(&density2(g), &[])),
        Shape::ChartPolytope { .. } => match body.polytope() {
            Some(p) => Ok(polytope_volume(p)?.0),
            None => Ok(0.0),
        },
    }
}

/// `Vol(K ∩ H^+)` for a planar body; zero when the half-plane misses `K`.
pub fn cap_volume(body: &ConvexBodySpec, cut: &CapCut) -> Result<f64> {
    if body.dim() != 2 || cut.geometry != body.geometry() {
        return Err(GeoError::Unsupported("cap volumes are computed for planar bodies".into()));
    }
    region_cap_volume(body.geometry(), &body.chart_region()?, &[cut.planar()])
}

pub(crate) fn region_cap_volume(geometry: Geometry, region: &ChartRegion, cuts: &[Cut]) -> Result<f64> {
    Ok(region.integrate(&density2(geometry), cuts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ChartPoint;
    use crate::hull::hull_of_chart_points;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn inscribed_polygon(g: Geometry, r: f64, n: usize) -> GeodesicPolytope {
        let rho = crate::geometry::chart_radius(g, r);
        let pts: Vec<ChartPoint> = (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                ChartPoint::new(&[rho * a.cos(), rho * a.sin()])
            })
            .collect();
        hull_of_chart_points(g, &crate::geometry::Frame::identity(g), &pts).unwrap()
    }

    #[test]
    fn dense_inscribed_polygons_approach_ball_volumes() {
        let s = inscribed_polygon(Geometry::spherical(2), 0.5, 1 << 14);
        let (v, err) = polytope_volume(&s).unwrap();
        assert!((v - 2.0 * PI * (1.0 - 0.5f64.cos())).abs() < 1e-5);
        assert!(err < 1e-12);
        let h = inscribed_polygon(Geometry::hyperbolic(2), 1.0, 1 << 14);
        assert!((polytope_volume(&h).unwrap().0 - 2.0 * PI * (1f64.cosh() - 1.0)).abs() < 1e-4);
    }

    #[test]
    fn euclidean_unit_square() {
        let g = Geometry::euclidean(2);
        let sq = ConvexBodySpec::chart_polytope(
            g,
            vec![
                ChartPoint::new(&[0.0, 0.0]),
                ChartPoint::new(&[1.0, 0.0]),
                ChartPoint::new(&[1.0, 1.0]),
                ChartPoint::new(&[0.0, 1.0]),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(body_volume(&sq).unwrap(), 1.0, epsilon = 1e-12);
        let sq = ConvexBodySpec::chart_square(g, 0.35).unwrap();
        assert_abs_diff_eq!(body_volume(&sq).unwrap(), 0.49, epsilon = 1e-12);
    }

    #[test]
    fn ball_volume_examples() {
        let s = ConvexBodySpec::ball_at_pole(Geometry::spherical(2), PI / 3.0).unwrap();
        assert_abs_diff_eq!(body_volume(&s).unwrap(), PI, epsilon = 1e-14);
        let h = ConvexBodySpec::ball_at_pole(Geometry::hyperbolic(2), 1.0).unwrap();
        let oracle = integrate_1d(|r| 2.0 * PI * r.sinh(), 0.0, 1.0, 30);
        assert_abs_diff_eq!(body_volume(&h).unwrap(), oracle, epsilon = 1e-13);
        // S^3 ball: 2 pi (r - sin r cos r); H^3: pi (sinh 2r - 2r)
        let r: f64 = 0.7;
        assert_abs_diff_eq!(ball_volume(Geometry::spherical(3), r), 2.0 * PI * (r - r.sin() * r.cos()), epsilon = 1e-13);
        assert_abs_diff_eq!(ball_volume(Geometry::hyperbolic(3), r), PI * ((2.0 * r).sinh() - 2.0 * r), epsilon = 1e-13);
    }

    #[test]
    fn polyhedron_volume_of_chart_cube() {
        let g = Geometry::euclidean(3);
        let cube = ConvexBodySpec::chart_square(g, 0.5).unwrap();
        assert_abs_diff_eq!(body_volume(&cube).unwrap(), 1.0, epsilon = 1e-13);
        let gs = Geometry::spherical(3);
        let s = ConvexBodySpec::chart_square(gs, 0.3).unwrap();
        let (v, err) = polytope_volume(s.polytope().unwrap()).unwrap();
        assert!(v > 0.0 && err < 1e-10);
    }

    #[test]
    fn halving_cut_and_outside_cut() {
        for g in [Geometry::spherical(2), Geometry::hyperbolic(2)] {
            let b = ConvexBodySpec::ball_at_pole(g, 0.8).unwrap();
            let vol = body_volume(&b).unwrap();
            let half = cap_volume(&b, &CapCut::new(g, &[0.6, 0.8], 0.0).unwrap()).unwrap();
            assert_abs_diff_eq!(half, vol / 2.0, epsilon = 1e-8);
            let out = cap_volume(&b, &CapCut::new(g, &[1.0, 0.0], 5.0).unwrap()).unwrap();
            assert_eq!(out, 0.0);
        }
    }

    #[test]
    fn ellipse_volume_matches_polygon() {
        let g = Geometry::spherical(2);
        let e = ConvexBodySpec::chart_ellipse(g, [0.1, 0.05], [0.4, 0.25], 0.3).unwrap();
        let v = body_volume(&e).unwrap();
        let pts: Vec<ChartPoint> = e
            .chart_region()
            .unwrap()
            .boundary_polygon(1 << 14)
            .iter()
            .map(|p| ChartPoint::new(p))
            .collect();
        let p = hull_of_chart_points(g, e.frame(), &pts).unwrap();
        assert!((polytope_volume(&p).unwrap().0 - v).abs() < 1e-6);
    }
}
