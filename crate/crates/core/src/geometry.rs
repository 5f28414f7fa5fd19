//! Coordinate geometry of the three constant-curvature model spaces.
//!
//! Points of `S^d` and `H^d` are stored in ambient coordinates of `R^{d+1}`
//! (unit sphere, upper sheet of the hyperboloid `|x'|^2 - x_{d+1}^2 = -1`).
//! Euclidean points are stored homogeneously as `(p, 1)`, which makes the
//! gnomonic chart `x -> x'/x_{d+1}` the identity for `R^d` and lets every
//! routine treat the three spaces uniformly.
//!
//! Convex sets are handled through their gnomonic images: geodesics become
//! straight segments, so hulls, caps and half-spaces are ordinary Euclidean
//! objects in the chart, and curved volume is Lebesgue measure weighted by
//! [`chart_density`].

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use statrs::function::gamma::gamma;

use crate::error::{GeoError, Result};

/// Tolerance for algebraic identities (normalisation, orthogonality).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Inner products within this distance of the arccos/arcosh domain are clamped.
pub const DOMAIN_TOL: f64 = 1e-9;

pub type Coords = SmallVec<[f64; 4]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Spherical,
    Hyperbolic,
    Euclidean,
}

/// One of `S^d`, `H^d`, `R^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Geometry {
    pub kind: GeometryKind,
    pub dim: usize,
}

impl Geometry {
    pub fn new(kind: GeometryKind, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(GeoError::InvalidInput(format!("dimension must be >= 2, got {dim}")));
        }
        Ok(Self { kind, dim })
    }

    pub fn spherical(dim: usize) -> Self {
        Self::new(GeometryKind::Spherical, dim).expect("dimension >= 2")
    }

    pub fn hyperbolic(dim: usize) -> Self {
        Self::new(GeometryKind::Hyperbolic, dim).expect("dimension >= 2")
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(GeometryKind::Euclidean, dim).expect("dimension >= 2")
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim + 1
    }

    pub fn is_spherical(&self) -> bool {
        self.kind == GeometryKind::Spherical
    }

    /// The chart centre `e_{d+1}` (origin of `R^d` in homogeneous form).
    pub fn pole(&self) -> AmbientPoint {
        let mut c: Coords = SmallVec::from_elem(0.0, self.dim + 1);
        c[self.dim] = 1.0;
        AmbientPoint(c)
    }
}

/// A point of the model space in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint(pub Coords);

/// A point of a gnomonic chart, `R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint(pub Coords);

impl AmbientPoint {
    /// Validated constructor; checks the ambient invariant of `geometry`.
    pub fn new(geometry: Geometry, coords: &[f64]) -> Result<Self> {
        let p = Self(Coords::from_slice(coords));
        p.validate(geometry)?;
        Ok(p)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn validate(&self, geometry: Geometry) -> Result<()> {
        let d = geometry.dim;
        if self.0.len() != d + 1 {
            return Err(GeoError::InvalidInput(format!(
                "ambient point has {} coordinates, expected {}",
                self.0.len(),
                d + 1
            )));
        }
        let x = &self.0;
        match geometry.kind {
            GeometryKind::Spherical => {
                let n2 = dot(x, x);
                if (n2.sqrt() - 1.0).abs() > ALGEBRAIC_TOL {
                    return Err(GeoError::Domain(format!("|x| = {} is not 1", n2.sqrt())));
                }
            }
            GeometryKind::Hyperbolic => {
                let q = minkowski(x, x);
                if (q + 1.0).abs() > ALGEBRAIC_TOL * x[d] * x[d] || x[d] <= 0.0 {
                    return Err(GeoError::Domain(format!(
                        "not on the upper hyperboloid sheet (form = {q})"
                    )));
                }
            }
            GeometryKind::Euclidean => {
                if x[d] != 1.0 {
                    return Err(GeoError::Domain(
                        "euclidean points are stored homogeneously with last coordinate 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl ChartPoint {
    pub fn new(coords: &[f64]) -> Self {
        Self(Coords::from_slice(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        dot(&self.0, &self.0).sqrt()
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minkowski form `x'.y' - x_{d+1} y_{d+1}`.
#[inline]
pub fn minkowski(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() - 1;
    dot(&a[..n], &b[..n]) - a[n] * b[n]
}

/// Gnomonic projection `g` (sphere, centre `e_{d+1}`) or `h` (hyperboloid).
pub fn gnomonic_forward(geometry: Geometry, x: &AmbientPoint) -> Result<ChartPoint> {
    let d = geometry.dim;
    let last = x.0[d];
    if geometry.kind == GeometryKind::Spherical && last <= 0.0 {
        return Err(GeoError::Domain(format!(
            "x_(d+1) = {last} is not in the open upper hemisphere"
        )));
    }
    Ok(ChartPoint(x.0[..d].iter().map(|v| v / last).collect()))
}

pub fn gnomonic_inverse(geometry: Geometry, p: &ChartPoint) -> Result<AmbientPoint> {
    let n2 = dot(&p.0, &p.0);
    let scale = match geometry.kind {
        GeometryKind::Spherical => 1.0 / (1.0 + n2).sqrt(),
        GeometryKind::Hyperbolic => {
            if n2 >= 1.0 {
                return Err(GeoError::Domain(format!(
                    "|p| = {} is outside the open unit ball",
                    n2.sqrt()
                )));
            }
            1.0 / (1.0 - n2).sqrt()
        }
        GeometryKind::Euclidean => 1.0,
    };
    let mut c: Coords = p.0.iter().map(|v| v * scale).collect();
    c.push(scale);
    Ok(AmbientPoint(c))
}

/// Density of the pushforward of curved volume under the chart, w.r.t. Lebesgue measure.
pub fn chart_density(geometry: Geometry, p: &ChartPoint) -> Result<f64> {
    let n2 = dot(&p.0, &p.0);
    if geometry.kind == GeometryKind::Hyperbolic && n2 >= 1.0 {
        return Err(GeoError::Domain(format!("|p| = {} >= 1", n2.sqrt())));
    }
    Ok(density_from_norm2(geometry, n2))
}

/// `psi` as a function of `|p|^2`; no domain check.
#[inline]
pub fn density_from_norm2(geometry: Geometry, n2: f64) -> f64 {
    let e = -0.5 * (geometry.dim as f64 + 1.0);
    match (geometry.kind, geometry.dim) {
        (GeometryKind::Euclidean, _) => 1.0,
        (GeometryKind::Spherical, 2) => {
            let s = 1.0 + n2;
            1.0 / (s * s.sqrt())
        }
        (GeometryKind::Hyperbolic, 2) => {
            let s = 1.0 - n2;
            1.0 / (s * s.sqrt())
        }
        (GeometryKind::Spherical, 3) => {
            let s = 1.0 + n2;
            1.0 / (s * s)
        }
        (GeometryKind::Hyperbolic, 3) => {
            let s = 1.0 - n2;
            1.0 / (s * s)
        }
        (GeometryKind::Spherical, _) => (1.0 + n2).powf(e),
        (GeometryKind::Hyperbolic, _) => (1.0 - n2).powf(e),
    }
}

pub fn geodesic_distance(geometry: Geometry, x: &AmbientPoint, y: &AmbientPoint) -> Result<f64> {
    let (a, b) = (x.coords(), y.coords());
    let d = geometry.dim;
    match geometry.kind {
        GeometryKind::Spherical => {
            let ip = dot(a, b);
            if ip.abs() > 1.0 + DOMAIN_TOL {
                return Err(GeoError::Domain(format!("<x,y> = {ip} outside [-1, 1]")));
            }
            // Chord form is accurate for nearby points, where arccos loses half the digits.
            let chord = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
            Ok(2.0 * (0.5 * chord).min(1.0).asin())
        }
        GeometryKind::Hyperbolic => {
            let c = -minkowski(a, b);
            if c < 1.0 - DOMAIN_TOL {
                return Err(GeoError::Domain(format!("cosh d = {c} < 1")));
            }
            let diff: Coords = a.iter().zip(b).map(|(p, q)| p - q).collect();
            let q = minkowski(&diff, &diff).max(0.0);
            Ok(2.0 * (0.5 * q.sqrt()).asinh())
        }
        GeometryKind::Euclidean => Ok(a[..d]
            .iter()
            .zip(&b[..d])
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()),
    }
}

/// Orthogonal `R` with `R u = e_{d+1}`, built from two Householder reflections.
///
/// For `u_{d+1} >= 0` reflect `u` to `-e_{d+1}` and flip the last axis; otherwise
/// reflect `u` to `e_{d+1}` and flip the first axis. Each reflection vector has
/// norm at least `sqrt(2)`, so neither branch is ill-conditioned.
pub fn rotation_to_pole(u: &[f64]) -> Result<DMatrix<f64>> {
    let n = u.len();
    if n < 2 {
        return Err(GeoError::InvalidInput("need at least two coordinates".into()));
    }
    let norm = dot(u, u).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(GeoError::InvalidInput(format!("|u| = {norm} is not 1")));
    }
    let last = n - 1;
    let mut v: Vec<f64> = u.iter().map(|x| x / norm).collect();
    let (flip_axis, sign) = if v[last] >= 0.0 { (last, 1.0) } else { (0, -1.0) };
    v[last] += sign;
    let vv = dot(&v, &v);
    let mut r = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            r[(i, j)] -= 2.0 * v[i] * v[j] / vv;
        }
    }
    for j in 0..n {
        r[(flip_axis, j)] = -r[(flip_axis, j)];
    }
    Ok(r)
}

/// Lorentz boost `B` with `B c = e_{d+1}` for `c` on the hyperboloid.
pub fn boost_to_pole(c: &[f64]) -> DMatrix<f64> {
    let n = c.len();
    let d = n - 1;
    let c0 = c[d];
    let mut b = DMatrix::<f64>::identity(n, n);
    for i in 0..d {
        for j in 0..d {
            b[(i, j)] += c[i] * c[j] / (1.0 + c0);
        }
        b[(i, d)] = -c[i];
        b[(d, i)] = -c[i];
    }
    b[(d, d)] = c0;
    b
}

/// A linear change of ambient frame. Charts of bodies and polytopes are taken
/// after applying `to_chart`, i.e. `chart(x) = g(to_chart x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    to_chart: DMatrix<f64>,
    from_chart: DMatrix<f64>,
}

impl Frame {
    pub fn identity(geometry: Geometry) -> Self {
        let n = geometry.ambient_dim();
        Self {
            to_chart: DMatrix::identity(n, n),
            from_chart: DMatrix::identity(n, n),
        }
    }

    /// Frame whose chart is centred at `center`.
    pub fn centered_at(geometry: Geometry, center: &AmbientPoint) -> Result<Self> {
        center.validate(geometry)?;
        let c = center.coords();
        let n = geometry.ambient_dim();
        Ok(match geometry.kind {
            GeometryKind::Spherical => {
                let r = rotation_to_pole(c)?;
                let rt = r.transpose();
                Self { to_chart: r, from_chart: rt }
            }
            GeometryKind::Hyperbolic => {
                let b = boost_to_pole(c);
                let mut neg = c.to_vec();
                for v in neg.iter_mut().take(n - 1) {
                    *v = -*v;
                }
                Self { to_chart: b, from_chart: boost_to_pole(&neg) }
            }
            GeometryKind::Euclidean => {
                let mut t = DMatrix::<f64>::identity(n, n);
                let mut ti = DMatrix::<f64>::identity(n, n);
                for i in 0..n - 1 {
                    t[(i, n - 1)] = -c[i];
                    ti[(i, n - 1)] = c[i];
                }
                Self { to_chart: t, from_chart: ti }
            }
        })
    }

    /// The frame of the antipodal chart `g~`: `diag(1, .., 1, -1)` composed with `self`.
    /// Charts of polars in this frame are Euclidean polars of charts in `self`.
    pub fn antipodal(&self) -> Self {
        let n = self.to_chart.nrows();
        let mut to = self.to_chart.clone();
        for j in 0..n {
            to[(n - 1, j)] = -to[(n - 1, j)];
        }
        let mut from = self.from_chart.clone();
        for i in 0..n {
            from[(i, n - 1)] = -from[(i, n - 1)];
        }
        Self { to_chart: to, from_chart: from }
    }

    pub fn from_orthogonal(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self { to_chart: m, from_chart: t }
    }

    pub fn to_chart_matrix(&self) -> &DMatrix<f64> {
        &self.to_chart
    }

    /// Ambient point expressed in this frame.
    pub fn apply(&self, x: &AmbientPoint) -> AmbientPoint {
        AmbientPoint(matvec(&self.to_chart, x.coords()))
    }

    /// Inverse of [`Frame::apply`].
    pub fn unapply(&self, x: &AmbientPoint) -> AmbientPoint {
        AmbientPoint(matvec(&self.from_chart, x.coords()))
    }

    /// `from_chart^T u`: the linear form `<u, .>` written in frame coordinates.
    pub fn pull_covector(&self, u: &[f64]) -> Coords {
        matvec(&self.from_chart.transpose(), u)
    }

    /// `chart(x) = g(to_chart x)`.
    pub fn chart(&self, geometry: Geometry, x: &AmbientPoint) -> Result<ChartPoint> {
        gnomonic_forward(geometry, &self.apply(x))
    }

    pub fn unchart(&self, geometry: Geometry, p: &ChartPoint) -> Result<AmbientPoint> {
        Ok(self.unapply(&gnomonic_inverse(geometry, p)?))
    }
}

fn matvec(m: &DMatrix<f64>, x: &[f64]) -> Coords {
    let n = m.nrows();
    (0..n)
        .map(|i| (0..x.len()).map(|j| m[(i, j)] * x[j]).sum())
        .collect()
}

/// Point at geodesic distance `radius` from the pole `e_{d+1}` in unit direction `dir`.
pub fn point_from_pole(geometry: Geometry, radius: f64, dir: &[f64]) -> AmbientPoint {
    let (s, c) = match geometry.kind {
        GeometryKind::Spherical => radius.sin_cos(),
        GeometryKind::Hyperbolic => (radius.sinh(), radius.cosh()),
        GeometryKind::Euclidean => (radius, 1.0),
    };
    let mut coords: Coords = dir.iter().map(|v| v * s).collect();
    coords.push(c);
    AmbientPoint(coords)
}

/// Chart radius of the image of a geodesic ball of `radius` about the chart centre.
pub fn chart_radius(geometry: Geometry, radius: f64) -> f64 {
    match geometry.kind {
        GeometryKind::Spherical => radius.tan(),
        GeometryKind::Hyperbolic => radius.tanh(),
        GeometryKind::Euclidean => radius,
    }
}

/// Inverse of [`chart_radius`].
pub fn geodesic_radius(geometry: Geometry, chart_r: f64) -> f64 {
    match geometry.kind {
        GeometryKind::Spherical => chart_r.atan(),
        GeometryKind::Hyperbolic => chart_r.atanh(),
        GeometryKind::Euclidean => chart_r,
    }
}

/// `omega_{d+1}`, the surface area of `S^d`.
pub fn sphere_surface_area(d: usize) -> f64 {
    let h = 0.5 * (d as f64 + 1.0);
    2.0 * PI.powf(h) / gamma(h)
}
