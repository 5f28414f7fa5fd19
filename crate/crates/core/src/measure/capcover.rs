//! Constructive economic cap covering of planar bodies.
//!
//! Anchor directions are marched around the body so that the volume-`t` caps
//! of consecutive anchors share at least `overlap * t`. The emitted caps are
//! the anchor caps enlarged to volume `dilation * t`; the inner sets are the
//! anchor caps shrunk about their centroids, thinned greedily to a pairwise
//! disjoint family. Every clause of the covering is then checked numerically.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bodies::ConvexBodySpec;
use crate::error::{GeoError, Result};
use crate::geometry::GeometryKind;
use crate::hull::planar::signed_area;
use crate::region::{integrate_polygon, ChartRegion, Cut};

use super::floating::offset_for_volume;
use super::{body_volume, density2, CapCut};

const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CapCoverParams {
    /// Emitted caps have volume `dilation * t`.
    pub dilation: f64,
    /// Consecutive anchor caps overlap in at least `overlap * t`.
    pub overlap: f64,
    /// Inner sets are anchor caps scaled by this factor about their centroid.
    pub shrink: f64,
    /// Points of the wet part tested against the union of caps.
    pub wet_samples: usize,
    /// Random caps of volume at most `t` tested for containment.
    pub random_caps: usize,
    /// Boundary points per cap polygon of curved bodies.
    pub arc_points: usize,
    pub seed: u64,
}

impl Default for CapCoverParams {
    fn default() -> Self {
        Self {
            dilation: 6.0,
            overlap: 0.5,
            shrink: 0.6,
            wet_samples: 1000,
            random_caps: 200,
            arc_points: 64,
            seed: 0x00ca_9c0e,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CapCover {
    pub t: f64,
    pub body_volume: f64,
    /// Anchor directions (chart angles).
    pub anchors: Vec<f64>,
    /// Offsets of the volume-`t` anchor caps.
    pub anchor_offsets: Vec<f64>,
    /// Emitted caps `C_i`, one per anchor, of volume `dilation * t`.
    pub caps: Vec<CapCut>,
    pub cap_volumes: Vec<f64>,
    /// Pairwise disjoint inner sets `C'_j` as chart polygons (counter-clockwise).
    pub inner_sets: Vec<Vec<[f64; 2]>>,
    pub inner_volumes: Vec<f64>,
    /// Anchor index each inner set was cut from.
    pub inner_anchor: Vec<usize>,
    /// `t` is below the enforced threshold but not below the curvature-corrected one.
    pub above_curved_threshold: bool,
    pub params: CapCoverParams,
}

impl CapCover {
    pub fn m(&self) -> usize {
        self.caps.len()
    }

    pub fn m_prime(&self) -> usize {
        self.inner_sets.len()
    }
}

/// Threshold enforced on `t`: `Vol(K) (2d)^{-2d}`.
pub fn cap_cover_threshold(volume: f64, dim: usize) -> f64 {
    volume * ((2 * dim) as f64).powi(-2 * dim as i32)
}

pub fn cap_cover_2d(body: &ConvexBodySpec, t: f64, params: &CapCoverParams) -> Result<CapCover> {
    if body.dim() != 2 {
        return Err(GeoError::Unsupported("cap coverings are built for planar bodies".into()));
    }
    let g = body.geometry();
    let vol = body_volume(body)?;
    let threshold = cap_cover_threshold(vol, 2);
    if !(t > 0.0 && t < threshold) {
        return Err(GeoError::InvalidInput(format!(
            "cap cover needs 0 < t < Vol(K)/256 = {threshold}, got {t}"
        )));
    }
    if !(params.dilation > 1.0 && params.dilation * t < vol && params.overlap > 0.0 && params.overlap < 1.0)
        || !(params.shrink > 0.0 && params.shrink < 1.0)
    {
        return Err(GeoError::InvalidInput("cap cover parameters out of range".into()));
    }
    let above_curved_threshold = if g.kind == GeometryKind::Spherical {
        let (_, rk) = body.bounding_cap()?;
        t >= threshold * rk.cos().powi(3)
    } else {
        false
    };

    let region = body.chart_region()?;
    let psi = density2(g);
    let dir = |a: f64| [a.cos(), a.sin()];
    let cap_cut = |a: f64, v: f64| -> Result<Cut> { Ok(Cut::new(dir(a), offset_for_volume(g, &region, dir(a), v, vol)?)) };
    let overlap = |a: &Cut, b: &Cut| region.integrate(&psi, &[*a, *b]);
    let target = params.overlap * t;

    // march anchors around the boundary
    let mut anchors = vec![0.0];
    let mut cuts = vec![cap_cut(0.0, t)?];
    let mut guess = PI / 8.0;
    loop {
        let a0 = *anchors.last().expect("non-empty");
        let c0 = *cuts.last().expect("non-empty");
        let mut hi = guess.min(PI);
        let mut lo = 0.0;
        while hi < PI && overlap(&c0, &cap_cut(a0 + hi, t)?) >= target {
            lo = hi;
            hi = (2.0 * hi).min(PI);
        }
        if hi >= PI && overlap(&c0, &cap_cut(a0 + PI, t)?) >= target {
            lo = PI;
        } else {
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                if overlap(&c0, &cap_cut(a0 + mid, t)?) >= target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        if lo <= 0.0 {
            return Err(GeoError::Numerical("anchor step collapsed".into()));
        }
        guess = 1.5 * lo;
        if a0 + lo >= 2.0 * PI {
            break;
        }
        anchors.push(a0 + lo);
        cuts.push(cap_cut(a0 + lo, t)?);
        if anchors.len() > 1_000_000 {
            return Err(GeoError::Numerical("anchor march did not close".into()));
        }
    }
    let wrap = overlap(cuts.last().expect("non-empty"), &cuts[0]);
    if anchors.len() > 1 && wrap < target * (1.0 - 1e-9) {
        return Err(GeoError::CapCover {
            clause: "overlap",
            detail: format!("last and first anchor caps overlap in {wrap}, need {target}"),
        });
    }

    let mut caps = Vec::with_capacity(anchors.len());
    let mut cap_volumes = Vec::with_capacity(anchors.len());
    for &a in &anchors {
        let c = cap_cut(a, params.dilation * t)?;
        cap_volumes.push(region.integrate(&psi, &[c]));
        caps.push(CapCut::new(g, &c.normal, c.offset)?);
    }

    // inner sets: shrunk anchor caps, thinned greedily to a disjoint family
    let mut inner_sets: Vec<Vec<[f64; 2]>> = Vec::new();
    let mut inner_volumes = Vec::new();
    let mut inner_anchor = Vec::new();
    for (i, c) in cuts.iter().enumerate() {
        let poly = shrink(&region.cap_polygon(*c, params.arc_points), params.shrink);
        if poly.len() < 3 {
            continue;
        }
        if inner_sets.iter().all(|q| polygons_disjoint(q, &poly)) {
            inner_volumes.push(integrate_polygon(&psi, &poly).1);
            inner_sets.push(poly);
            inner_anchor.push(i);
        }
    }

    let cover = CapCover {
        t,
        body_volume: vol,
        anchor_offsets: cuts.iter().map(|c| c.offset).collect(),
        anchors,
        caps,
        cap_volumes,
        inner_sets,
        inner_volumes,
        inner_anchor,
        above_curved_threshold,
        params: params.clone(),
    };
    verify(&cover, &region, body)?;
    Ok(cover)
}

fn fail(clause: &'static str, detail: String) -> GeoError {
    GeoError::CapCover { clause, detail }
}

/// Runtime check of the covering clauses.
fn verify(cover: &CapCover, region: &ChartRegion, body: &ConvexBodySpec) -> Result<()> {
    let g = body.geometry();
    let t = cover.t;
    let vol = cover.body_volume;
    let params = &cover.params;
    let cuts: Vec<Cut> = cover.caps.iter().map(|c| c.planar()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    // (i) inner sets lie in the wet part: inside K and inside their volume-t cap
    for (poly, &i) in cover.inner_sets.iter().zip(&cover.inner_anchor) {
        let base = Cut::new(cuts[i].normal, cover.anchor_offsets[i]);
        if let Some(p) = poly
            .iter()
            .find(|p| base.eval(**p) < -BOUNDARY_TOL || !region.contains(**p, BOUNDARY_TOL))
        {
            return Err(fail("i", format!("inner set {i} leaves the wet part at {p:?}")));
        }
    }
    // (i) the wet part (union of volume-t caps) lies in the union of the caps
    for k in 0..params.wet_samples {
        let a = rng.random_range(0.0..2.0 * PI);
        let c = Cut::new([a.cos(), a.sin()], offset_for_volume(g, region, [a.cos(), a.sin()], t, vol)?);
        let p = sample_in_cap(region, c, params.arc_points, &mut rng)
            .ok_or_else(|| fail("i", format!("could not sample wet point {k}")))?;
        if !cuts.iter().any(|cc| cc.eval(p) >= -BOUNDARY_TOL) {
            return Err(fail("i", format!("wet point {p:?} is outside every cap")));
        }
    }
    // (ii) volumes
    for (i, v) in cover.cap_volumes.iter().enumerate() {
        if *v > params.dilation * t * (1.0 + 1e-8) {
            return Err(fail("ii", format!("cap {i} has volume {v} > {}", params.dilation * t)));
        }
    }
    for (j, v) in cover.inner_volumes.iter().enumerate() {
        if *v < t / 4.0 {
            return Err(fail("ii", format!("inner set {j} has volume {v} < t/4 = {}", t / 4.0)));
        }
    }
    // (iii) random caps of volume at most t are contained in some cap
    for k in 0..params.random_caps {
        let a = rng.random_range(0.0..2.0 * PI);
        let v = t * (1.0 - rng.random::<f64>());
        let u = [a.cos(), a.sin()];
        let c = Cut::new(u, offset_for_volume(g, region, u, v, vol)?);
        let inside = cuts.iter().any(|cc| match region.min_linear_over_cut(c, cc.normal) {
            Some(m) => m >= cc.offset - BOUNDARY_TOL,
            None => true,
        });
        if !inside {
            return Err(fail("iii", format!("random cap {k} (direction {a}, volume {v}) is in no cap")));
        }
    }
    // (iv) every inner set sits inside some cap, and inner sets are pairwise disjoint
    for (j, poly) in cover.inner_sets.iter().enumerate() {
        if !cuts.iter().any(|cc| poly.iter().all(|p| cc.eval(*p) >= -BOUNDARY_TOL)) {
            return Err(fail("iv", format!("inner set {j} is in no cap")));
        }
        for (k, other) in cover.inner_sets.iter().enumerate().skip(j + 1) {
            if !polygons_disjoint(poly, other) {
                return Err(fail("iv", format!("inner sets {j} and {k} intersect")));
            }
        }
    }
    Ok(())
}

fn shrink(poly: &[[f64; 2]], factor: f64) -> Vec<[f64; 2]> {
    if poly.len() < 3 {
        return Vec::new();
    }
    let c = polygon_centroid(poly);
    poly.iter()
        .map(|p| [c[0] + factor * (p[0] - c[0]), c[1] + factor * (p[1] - c[1])])
        .collect()
}

fn polygon_centroid(poly: &[[f64; 2]]) -> [f64; 2] {
    let n = poly.len();
    let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let w = p[0] * q[1] - q[0] * p[1];
        a2 += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    [cx / (3.0 * a2), cy / (3.0 * a2)]
}

/// Separating-axis test for convex polygons; touching counts as intersecting.
pub fn polygons_disjoint(a: &[[f64; 2]], b: &[[f64; 2]]) -> bool {
    for poly in [a, b] {
        let n = poly.len();
        for i in 0..n {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            let axis = [q[1] - p[1], p[0] - q[0]];
            let proj = |s: &[[f64; 2]]| {
                s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    let x = axis[0] * v[0] + axis[1] * v[1];
                    (lo.min(x), hi.max(x))
                })
            };
            let (alo, ahi) = proj(a);
            let (blo, bhi) = proj(b);
            if ahi < blo || bhi < alo {
                return true;
            }
        }
    }
    false
}

fn sample_in_cap<R: Rng>(region: &ChartRegion, c: Cut, arc_points: usize, rng: &mut R) -> Option<[f64; 2]> {
    let poly = region.cap_polygon(c, arc_points.max(256));
    if poly.len() < 3 || signed_area(&poly) == 0.0 {
        return None;
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &poly {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let inside = ChartRegion::Polygon(if signed_area(&poly) > 0.0 {
        poly.clone()
    } else {
        poly.iter().rev().copied().collect()
    });
    for _ in 0..100_000 {
        let p = [rng.random_range(lo[0]..=hi[0]), rng.random_range(lo[1]..=hi[1])];
        if inside.contains(p, 0.0) {
            return Some(p);
        }
    }
    None
}
