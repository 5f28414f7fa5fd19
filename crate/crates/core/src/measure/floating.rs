//! Direction-discretized floating bodies `K_[t]` of planar bodies.

use std::f64::consts::PI;

use crate::bodies::ConvexBodySpec;
use crate::error::{GeoError, Result};
use crate::geometry::{ChartPoint, Geometry};
use crate::hull::{hull_of_chart_points, planar, GeodesicPolytope};
use crate::region::{ChartRegion, Cut};

use super::{body_volume, density2, polytope_volume};

pub const DEFAULT_DIRECTIONS: usize = 2048;
const INSCRIBED_SIDES: usize = 4096;

/// Offset `s` with `Vol(region ∩ {<u, p> >= s}) = t` for unit `u`, by Newton's
/// method on `s` (the derivative is minus the density-weighted chord length)
/// safeguarded by bisection. `0 < t < total`.
pub fn offset_for_volume(geometry: Geometry, region: &ChartRegion, u: [f64; 2], t: f64, total: f64) -> Result<f64> {
    if !(t > 0.0 && t < total) {
        return Err(GeoError::InvalidInput(format!("cap volume {t} outside (0, {total})")));
    }
    let psi = density2(geometry);
    let (mut lo, mut hi) = region.linear_range(u);
    let tol = t * 1e-10;
    let scale = hi - lo;
    // V(lo) = total > t > 0 = V(hi)
    let mut s = hi - (hi - lo) * (t / total).sqrt().min(0.5);
    for _ in 0..200 {
        let v = region.integrate(&psi, &[Cut::new(u, s)]);
        let r = v - t;
        if r.abs() <= tol {
            return Ok(s);
        }
        if r > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        if hi - lo <= 1e-15 * scale {
            return Ok(0.5 * (lo + hi));
        }
        let chord = region.chord_integral(&psi, u, s);
        let newton = if chord > 0.0 { s + r / chord } else { f64::NAN };
        s = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Err(GeoError::Numerical(format!("cap offset search did not converge for t = {t}")))
}

/// `K_[t]` with the default number of directions; `None` when it is empty.
pub fn floating_body_2d(body: &ConvexBodySpec, t: f64) -> Result<Option<GeodesicPolytope>> {
    floating_body_2d_with(body, t, DEFAULT_DIRECTIONS)
}

/// `K_[t]` approximated by `directions` equally spaced chart directions: the
/// intersection of the half-planes cutting off volume exactly `t`, clipped to
/// an inscribed polygon of `K` so the result stays inside `K`.
pub fn floating_body_2d_with(body: &ConvexBodySpec, t: f64, directions: usize) -> Result<Option<GeodesicPolytope>> {
    if body.dim() != 2 {
        return Err(GeoError::Unsupported("floating bodies are computed for planar bodies".into()));
    }
    if !(t > 0.0) || directions < 3 {
        return Err(GeoError::InvalidInput(format!("floating body needs t > 0, got {t}")));
    }
    let total = body_volume(body)?;
    if t >= total {
        return Ok(None);
    }
    let g = body.geometry();
    let region = body.chart_region()?;
    let mut poly = region.boundary_polygon(INSCRIBED_SIDES);
    for k in 0..directions {
        let a = 2.0 * PI * k as f64 / directions as f64;
        let u = [a.cos(), a.sin()];
        let s = offset_for_volume(g, &region, u, t, total)?;
        poly = planar::clip_halfplane(&poly, u, s);
        if poly.len() < 3 {
            return Ok(None);
        }
    }
    let pts: Vec<ChartPoint> = poly.iter().map(|p| ChartPoint::new(p)).collect();
    let fb = match hull_of_chart_points(g, body.frame(), &pts) {
        Ok(p) => p,
        Err(GeoError::DegenerateHull { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    for i in 0..fb.chart_vertices.len() {
        if !region.contains(fb.vertex2(i), 1e-12) {
            return Err(GeoError::Numerical("floating body escaped the body".into()));
        }
    }
    Ok(Some(GeodesicPolytope { provenance: None, ..fb }))
}

/// `Vol(K) - Vol(K_[t])`.
pub fn wet_part_volume(body: &ConvexBodySpec, t: f64) -> Result<f64> {
    let total = body_volume(body)?;
    Ok(match floating_body_2d(body, t)? {
        Some(fb) => (total - polytope_volume(&fb)?.0).max(0.0),
        None => total,
    })
}
