//! Monte Carlo estimation of the spherical mean width `U_1`.
//!
//! For convex `K` the Euler characteristic of `K ∩ u^⊥` is the indicator that
//! the great sphere `u^⊥` meets `K`, so `U_1(K)` is half the probability that a
//! uniform random great sphere hits `K`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bodies::ConvexBodySpec;
use crate::error::{GeoError, Result};
use crate::geometry::{dot, Geometry};
use crate::hull::GeodesicPolytope;

/// Sign-faithful range of `<u, .>` over a set.
pub trait SignRange {
    fn geometry(&self) -> Geometry;
    /// `(min, max)` of a positive multiple of `<u, y>` over the set.
    fn sign_range(&self, u: &[f64]) -> (f64, f64);

    fn hit_by(&self, u: &[f64]) -> bool {
        let (lo, hi) = self.sign_range(u);
        lo <= 0.0 && hi >= 0.0
    }
}

impl SignRange for ConvexBodySpec {
    fn geometry(&self) -> Geometry {
        ConvexBodySpec::geometry(self)
    }

    fn sign_range(&self, u: &[f64]) -> (f64, f64) {
        self.linear_sign_range(u)
    }
}

impl SignRange for GeodesicPolytope {
    fn geometry(&self) -> Geometry {
        self.geometry
    }

    fn sign_range(&self, u: &[f64]) -> (f64, f64) {
        let w = self.frame.pull_covector(u);
        let d = self.geometry.dim;
        self.chart_vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                let s = dot(&w[..d], v.coords()) + w[d];
                (lo.min(s), hi.max(s))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanWidthEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// A uniform unit vector in `R^{d+1}`.
pub fn random_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..=dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = dot(&v, &v).sqrt();
        if n > 1e-300 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn check_spherical(g: Geometry) -> Result<()> {
    if g.is_spherical() {
        Ok(())
    } else {
        Err(GeoError::Unsupported("mean width is defined for spherical sets".into()))
    }
}

/// `U_1` from `samples` uniform great spheres drawn from a stream seeded by `seed`.
pub fn mean_width_u1(target: &dyn SignRange, samples: usize, seed: u64) -> Result<MeanWidthEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    mean_width_u1_with(target, samples, &mut rng)
}

pub fn mean_width_u1_with<R: Rng + ?Sized>(target: &dyn SignRange, samples: usize, rng: &mut R) -> Result<MeanWidthEstimate> {
    let g = target.geometry();
    check_spherical(g)?;
    if samples == 0 {
        return Err(GeoError::InvalidInput("mean width needs at least one sample".into()));
    }
    let hits = (0..samples)
        .filter(|_| target.hit_by(&random_direction(g.dim, rng)))
        .count();
    let p = hits as f64 / samples as f64;
    Ok(MeanWidthEstimate {
        estimate: 0.5 * p,
        stderr: 0.5 * (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

/// `U_1(outer) - U_1(inner)` for `inner ⊆ outer`, from common random great
/// spheres. The per-sample difference is 0 or 1, so the estimate has the
/// binomial standard error of the excess alone.
pub fn mean_width_excess_paired<R: Rng + ?Sized>(
    outer: &dyn SignRange,
    inner: &dyn SignRange,
    samples: usize,
    rng: &mut R,
) -> Result<MeanWidthEstimate> {
    let g = outer.geometry();
    check_spherical(g)?;
    if samples == 0 {
        return Err(GeoError::InvalidInput("mean width needs at least one sample".into()));
    }
    let mut excess = 0usize;
    for _ in 0..samples {
        let u = random_direction(g.dim, rng);
        if !inner.hit_by(&u) && outer.hit_by(&u) {
            excess += 1;
        }
    }
    let p = excess as f64 / samples as f64;
    Ok(MeanWidthEstimate {
        estimate: 0.5 * p,
        stderr: 0.5 * (p * (1.0 - p) / samples as f64).sqrt(),
    })
}
