//! Uniform sampling from convex bodies by rejection from their bounding caps.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::bodies::{ConvexBodySpec, Shape};
use crate::error::{GeoError, Result};
use crate::geometry::{chart_radius, point_from_pole, AmbientPoint, ChartPoint, Coords, Frame, Geometry, GeometryKind};

/// Proposals per acceptance window and the minimum acceptance rate within one.
const WINDOW: u64 = 1_000_000;
const MIN_RATE: f64 = 1e-4;

/// Inverse CDF of the polar angle of a uniform point in a cap of radius `R`:
/// density proportional to `sin^{d-1}`, `sinh^{d-1}` or `r^{d-1}`.
#[derive(Clone, Debug)]
pub struct PolarAngle {
    kind: GeometryKind,
    dim: usize,
    radius: f64,
    total: f64,
}

impl PolarAngle {
    pub fn new(geometry: Geometry, radius: f64) -> Self {
        let mut p = Self {
            kind: geometry.kind,
            dim: geometry.dim,
            radius,
            total: 0.0,
        };
        p.total = p.cdf_unnormalized(radius);
        p
    }

    fn weight(&self, th: f64) -> f64 {
        let k = self.dim as i32 - 1;
        match self.kind {
            GeometryKind::Spherical => th.sin().powi(k),
            GeometryKind::Hyperbolic => th.sinh().powi(k),
            GeometryKind::Euclidean => th.powi(k),
        }
    }

    /// `∫_0^th weight`.
    fn cdf_unnormalized(&self, th: f64) -> f64 {
        let k = self.dim - 1;
        match self.kind {
            GeometryKind::Euclidean => th.powi(self.dim as i32) / self.dim as f64,
            GeometryKind::Spherical => {
                // I_k = -sin^{k-1} cos / k + (k-1)/k I_{k-2}
                let (s, c) = th.sin_cos();
                let mut lo = if k % 2 == 0 { th } else { 2.0 * (0.5 * th).sin().powi(2) };
                let mut j = if k % 2 == 0 { 2 } else { 3 };
                while j <= k {
                    lo = -s.powi(j as i32 - 1) * c / j as f64 + (j - 1) as f64 / j as f64 * lo;
                    j += 2;
                }
                lo
            }
            GeometryKind::Hyperbolic => {
                let (s, c) = (th.sinh(), th.cosh());
                let mut lo = if k % 2 == 0 { th } else { 2.0 * (0.5 * th).sinh().powi(2) };
                let mut j = if k % 2 == 0 { 2 } else { 3 };
                while j <= k {
                    lo = s.powi(j as i32 - 1) * c / j as f64 - (j - 1) as f64 / j as f64 * lo;
                    j += 2;
                }
                lo
            }
        }
    }

    /// Polar angle with CDF value `u` in `[0, 1)`.
    pub fn invert(&self, u: f64) -> f64 {
        let r = self.radius;
        match (self.kind, self.dim) {
            (GeometryKind::Euclidean, d) => r * u.powf(1.0 / d as f64),
            (GeometryKind::Spherical, 2) => 2.0 * (u.sqrt() * (0.5 * r).sin()).asin(),
            (GeometryKind::Hyperbolic, 2) => 2.0 * (u.sqrt() * (0.5 * r).sinh()).asinh(),
            _ => {
                let target = u * self.total;
                let (mut lo, mut hi) = (0.0, r);
                let mut th = r * u.powf(1.0 / self.dim as f64);
                for _ in 0..100 {
                    let f = self.cdf_unnormalized(th) - target;
                    if f > 0.0 {
                        hi = th;
                    } else {
                        lo = th;
                    }
                    if hi - lo <= 1e-15 * r {
                        break;
                    }
                    let w = self.weight(th);
                    let next = if w > 0.0 { th - f / w } else { f64::NAN };
                    th = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
                }
                th
            }
        }
    }
}

fn unit_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Coords {
    if dim == 2 {
        let a = 2.0 * PI * rng.random::<f64>();
        let (s, c) = a.sin_cos();
        return Coords::from_slice(&[c, s]);
    }
    loop {
        let v: Coords = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-300 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Rejection sampler for one body; proposals are uniform in its bounding cap.
#[derive(Clone, Debug)]
pub struct UniformSampler<'a> {
    body: &'a ConvexBodySpec,
    cap_frame: Frame,
    polar: PolarAngle,
    /// The body is the bounding cap itself.
    exact: bool,
}

impl<'a> UniformSampler<'a> {
    pub fn new(body: &'a ConvexBodySpec) -> Result<Self> {
        let g = body.geometry();
        let (center, radius) = body.bounding_cap()?;
        let exact = matches!(body.shape(), Shape::GeodesicBall { .. });
        let cap_frame = if exact { body.frame().clone() } else { Frame::centered_at(g, &center)? };
        Ok(Self {
            body,
            cap_frame,
            polar: PolarAngle::new(g, radius),
            exact,
        })
    }

    pub fn body(&self) -> &'a ConvexBodySpec {
        self.body
    }

    /// `n` i.i.d. uniform points as charts in the body's frame.
    pub fn sample_chart<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<ChartPoint>> {
        let g = self.body.geometry();
        let mut out = Vec::with_capacity(n);
        if self.exact {
            for _ in 0..n {
                let th = self.polar.invert(rng.random::<f64>());
                let rho = chart_radius(g, th);
                out.push(ChartPoint(unit_direction(g.dim, rng).into_iter().map(|x| rho * x).collect()));
            }
            return Ok(out);
        }
        let (mut proposals, mut accepted) = (0u64, 0u64);
        while out.len() < n {
            let x = self.propose(rng)?;
            proposals += 1;
            if let Ok(p) = self.body.frame().chart(g, &x) {
                if self.body.contains_chart(p.coords()) {
                    accepted += 1;
                    out.push(p);
                }
            }
            if proposals == WINDOW {
                if (accepted as f64) < MIN_RATE * WINDOW as f64 {
                    return Err(GeoError::Envelope {
                        rate: accepted as f64 / proposals as f64,
                        proposals,
                    });
                }
                proposals = 0;
                accepted = 0;
            }
        }
        Ok(out)
    }

    fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<AmbientPoint> {
        let g = self.body.geometry();
        let th = self.polar.invert(rng.random::<f64>());
        let x = point_from_pole(g, th, &unit_direction(g.dim, rng));
        Ok(self.cap_frame.unapply(&x))
    }
}

/// `n` i.i.d. uniform points of the body.
pub fn sample_uniform<R: Rng + ?Sized>(body: &ConvexBodySpec, n: usize, rng: &mut R) -> Result<Vec<AmbientPoint>> {
    let g = body.geometry();
    UniformSampler::new(body)?
        .sample_chart(n, rng)?
        .iter()
        .map(|p| body.frame().unchart(g, p))
        .collect()
}

/// `n` i.i.d. uniform points of the body, charted in its frame.
pub fn sample_uniform_chart<R: Rng + ?Sized>(body: &ConvexBodySpec, n: usize, rng: &mut R) -> Result<Vec<ChartPoint>> {
    UniformSampler::new(body)?.sample_chart(n, rng)
}
