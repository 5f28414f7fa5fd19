//! Planar convex hulls by Andrew's monotone chain.

use crate::error::{GeoError, Result};

const COLLINEAR_EPS: f64 = 1e-12;

#[inline]
pub fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Indices of the hull vertices in counter-clockwise order, starting at the
/// lexicographically smallest point. Collinear boundary points are dropped.
///
/// Ties in coordinates are broken by input index so the output is a pure
/// function of the input sequence.
pub fn hull_indices(pts: &[[f64; 2]]) -> Result<Vec<usize>> {
    if pts.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(GeoError::InvalidInput("non-finite chart coordinate".into()));
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| {
        pts[i][0]
            .total_cmp(&pts[j][0])
            .then(pts[i][1].total_cmp(&pts[j][1]))
            .then(i.cmp(&j))
    });
    order.dedup_by(|b, a| pts[*a] == pts[*b]);
    if order.len() < 3 {
        return Err(degenerate(pts));
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = hull.len();
        let seq: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &i in seq {
            while hull.len() >= start + 2 {
                let o = pts[hull[hull.len() - 2]];
                let a = pts[hull[hull.len() - 1]];
                if cross(o, a, pts[i]) <= COLLINEAR_EPS {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(i);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(degenerate(pts));
    }
    Ok(hull)
}

fn degenerate(pts: &[[f64; 2]]) -> GeoError {
    let rank = match pts.first() {
        None => 0,
        Some(p0) => {
            if pts.iter().all(|p| (p[0] - p0[0]).abs() <= COLLINEAR_EPS && (p[1] - p0[1]).abs() <= COLLINEAR_EPS) {
                0
            } else {
                1
            }
        }
    };
    GeoError::DegenerateHull { rank, required: 2 }
}

/// Signed area (positive for counter-clockwise order).
pub fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        * 0.5
}

/// Clips a convex polygon to the half-plane `<u, p> <= s`.
pub fn clip_halfplane(poly: &[[f64; 2]], u: [f64; 2], s: f64) -> Vec<[f64; 2]> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let fa = u[0] * a[0] + u[1] * a[1] - s;
        let fb = u[0] * b[0] + u[1] * b[1] - s;
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let t = fa / (fa - fb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}
