use std::f64::consts::PI;

use geohull_core::bodies::{polar_polytope, ConvexBodySpec};
use geohull_core::geometry::{dot, geodesic_distance};
use geohull_core::hull::{gauss_bonnet_area, hull_of_chart_points, GeodesicPolytope};
use geohull_core::measure::{cap_cover_2d, mean_width_u1, polytope_volume, CapCoverParams};
use geohull_core::{AmbientPoint, ChartPoint, Frame, Geometry, GeometryKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_polygon(g: Geometry, rng: &mut ChaCha8Rng) -> GeodesicPolytope {
    // the fixed-order rule loses accuracy as hyperbolic polygons approach the ideal boundary
    let reach = if g.kind == GeometryKind::Hyperbolic { 0.9 } else { 2.0 };
    loop {
        let n = rng.random_range(3..20);
        let pts: Vec<ChartPoint> = (0..n)
            .map(|_| {
                let a = rng.random::<f64>() * 2.0 * PI;
                let r = reach * rng.random::<f64>().sqrt();
                ChartPoint::new(&[r * a.cos(), r * a.sin()])
            })
            .collect();
        if let Ok(h) = hull_of_chart_points(g, &Frame::identity(g), &pts) {
            return h;
        }
    }
}

/// Solid angle of the spherical triangle `abc` (unit vectors).
fn solid_angle(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
    2.0 * det.abs().atan2(1.0 + dot(a, b) + dot(b, c) + dot(c, a))
}

#[test]
fn gauss_bonnet_agrees_with_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for g in [Geometry::spherical(2), Geometry::hyperbolic(2)] {
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let p = random_polygon(g, &mut rng);
            let (quad, _) = polytope_volume(&p).unwrap();
            let gb = gauss_bonnet_area(&p).unwrap();
            worst = worst.max((quad - gb).abs());
        }
        assert!(worst < 1e-7, "{g:?}: worst gap {worst}");
    }
}

#[test]
fn spherical_polygon_areas_match_solid_angles() {
    let g = Geometry::spherical(2);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let p = random_polygon(g, &mut rng);
        let v = p.ambient_vertices().unwrap();
        let fan: f64 = (1..v.len() - 1).map(|i| solid_angle(v[0].coords(), v[i].coords(), v[i + 1].coords())).sum();
        assert!((polytope_volume(&p).unwrap().0 - fan).abs() < 1e-9);
    }
}

fn assert_same_vertices(a: &[AmbientPoint], b: &[AmbientPoint], tol: f64) {
    assert_eq!(a.len(), b.len());
    let g = Geometry::new(GeometryKind::Spherical, a[0].coords().len() - 1).unwrap();
    for x in a {
        let best = b
            .iter()
            .map(|y| geodesic_distance(g, x, y).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(best < tol, "unmatched vertex at distance {best}");
    }
}

#[test]
fn polar_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [2usize, 3] {
        let g = Geometry::spherical(d);
        for _ in 0..200 {
            let n = rng.random_range(d + 1..30);
            let pts: Vec<ChartPoint> = (0..n)
                .map(|_| ChartPoint((0..d).map(|_| 1.5 * (rng.random::<f64>() - 0.5)).collect()))
                .collect();
            let p = hull_of_chart_points(g, &Frame::identity(g), &pts).unwrap();
            let q = polar_polytope(&p).unwrap();
            assert_eq!(q.chart_vertices.len(), p.facets.len());
            assert_eq!(q.facets.len(), p.chart_vertices.len());
            let pp = polar_polytope(&q).unwrap();
            assert_same_vertices(&p.ambient_vertices().unwrap(), &pp.ambient_vertices().unwrap(), 1e-10);
        }
    }
}

#[test]
fn polar_vertices_separate_the_body() {
    // every vertex y of K* has <x, y> <= 0 for all vertices x of K
    let g = Geometry::spherical(2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let p = random_polygon(g, &mut rng);
        let q = polar_polytope(&p).unwrap();
        for y in q.ambient_vertices().unwrap() {
            for x in p.ambient_vertices().unwrap() {
                assert!(dot(x.coords(), y.coords()) <= 1e-12);
            }
        }
    }
}

#[test]
fn mean_width_matches_crofton_perimeter() {
    // a great circle meets a convex spherical polygon with probability perimeter / (2 pi)
    let g = Geometry::spherical(2);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..5 {
        let p = random_polygon(g, &mut rng);
        let v = p.ambient_vertices().unwrap();
        let perimeter: f64 = (0..v.len()).map(|i| geodesic_distance(g, &v[i], &v[(i + 1) % v.len()]).unwrap()).sum();
        let m = mean_width_u1(&p, 200_000, 100 + k).unwrap();
        let exact = perimeter / (4.0 * PI);
        assert!((m.estimate - exact).abs() < 4.0 * m.stderr, "{} vs {exact}", m.estimate);
    }
}

#[test]
fn square_cap_cover_passes_all_clauses() {
    for g in [Geometry::spherical(2), Geometry::hyperbolic(2)] {
        let body = ConvexBodySpec::chart_square(g, 0.5).unwrap();
        let cover = cap_cover_2d(&body, 2f64.powi(-10), &CapCoverParams::default()).unwrap();
        assert!(cover.m_prime() >= 1 && cover.m_prime() <= cover.m());
    }
}
