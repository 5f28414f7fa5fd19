//! Efron–Stein variance diagnostic, floating-body containment and single-path runs.

use rayon::prelude::*;

use super::rng::{replication_rng, stream_id};
use super::sampling::UniformSampler;
use super::stats::moments;
use crate::bodies::ConvexBodySpec;
use crate::error::{GeoError, Result};
use crate::geometry::ChartPoint;
use crate::hull::{hull_of_chart_points, GeodesicPolytope};
use crate::measure::{body_volume, density2, density3, floating_body_2d, polytope_volume};
use crate::quadrature::{integrate_tetrahedron_refined, integrate_triangle_refined};

/// Largest tolerated gap between the two increment computations.
pub const INCREMENT_TOL: f64 = 1e-7;
/// Default constant `c` in the floating-body parameter `Vol(K) c log(n) / n`.
pub const DEFAULT_CONTAINMENT_C: f64 = 20.0;

// keep diagnostic streams apart from experiment streams with the same seed
const EFRON_STEIN_DOMAIN: u64 = 0x4546_524f_4e53_5445;
const CONTAINMENT_DOMAIN: u64 = 0x464c_4f41_5449_4e47;

#[derive(Clone, Debug, PartialEq)]
pub struct EfronSteinReport {
    pub n: usize,
    pub replications: usize,
    /// Sample variance of `Vol(K_n)` and its jackknife stderr.
    pub varhat: f64,
    pub varhat_stderr: f64,
    /// `(n + 1) E[(Vol(K_{n+1}) - Vol(K_n))^2]` and its stderr.
    pub bound: f64,
    pub bound_stderr: f64,
    pub ratio: f64,
    /// Delta-method stderr of the ratio, treating the two estimates as independent.
    pub ratio_stderr: f64,
    pub max_increment_gap: f64,
    /// Replications whose extra point fell inside `K_n`.
    pub zero_increments: usize,
}

/// `Vol(K_{n+1}) - Vol(K_n)` as the sum over facets `F` of `K_n` visible from
/// the new point `x` of `Vol(conv(F, x))`.
pub fn visible_increment(hull: &GeodesicPolytope, x: &ChartPoint) -> Result<f64> {
    let g = hull.geometry;
    let visible = hull.visible_facets_chart(x.coords());
    let mut sum = 0.0;
    match g.dim {
        2 => {
            let psi = density2(g);
            let p = [x.0[0], x.0[1]];
            for f in visible {
                let facet = &hull.facets[f];
                sum += integrate_triangle_refined(&psi, hull.vertex2(facet[0]), hull.vertex2(facet[1]), p).1;
            }
        }
        3 => {
            let psi = density3(g);
            let p = [x.0[0], x.0[1], x.0[2]];
            for f in visible {
                let facet = &hull.facets[f];
                let a = hull.vertex3(facet[0]);
                for w in 1..facet.len() - 1 {
                    sum += integrate_tetrahedron_refined(&psi, a, hull.vertex3(facet[w]), hull.vertex3(facet[w + 1]), p).1;
                }
            }
        }
        d => return Err(GeoError::Unsupported(format!("increments in dimension {d}"))),
    }
    Ok(sum)
}

/// Compares `Var Vol(K_n)` with the Efron–Stein bound
/// `(n + 1) E[(Vol(K_{n+1}) - Vol(K_n))^2]` on one replication ensemble.
pub fn efron_stein_diagnostic(body: &ConvexBodySpec, n: usize, replications: usize, master_seed: u64) -> Result<EfronSteinReport> {
    let d = body.dim();
    if n < d + 1 || replications < 3 {
        return Err(GeoError::InvalidInput(format!(
            "efron-stein needs n >= d + 1 and at least 3 replications, got n = {n}, replications = {replications}"
        )));
    }
    let g = body.geometry();
    let sampler = UniformSampler::new(body)?;
    let seed = master_seed ^ EFRON_STEIN_DOMAIN;
    let rows: Vec<Result<(f64, f64, f64)>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let run = || -> Result<(f64, f64, f64)> {
                let mut rng = replication_rng(seed, n as u64, r as u64);
                let mut pts = sampler.sample_chart(n + 1, &mut rng)?;
                let x = pts.pop().expect("n + 1 points");
                let kn = hull_of_chart_points(g, body.frame(), &pts)?;
                let vn = polytope_volume(&kn)?.0;
                let inc = visible_increment(&kn, &x)?;
                pts.push(x);
                let vn1 = polytope_volume(&hull_of_chart_points(g, body.frame(), &pts)?)?.0;
                let gap = (inc - (vn1 - vn)).abs();
                if gap > INCREMENT_TOL {
                    return Err(GeoError::Numerical(format!(
                        "visible-facet increment {inc} and volume difference {} differ by {gap}",
                        vn1 - vn
                    )));
                }
                Ok((vn, inc, gap))
            };
            run().map_err(|e| GeoError::Replication {
                n,
                replication: r,
                stream: stream_id(seed, n as u64, r as u64),
                source: Box::new(e),
            })
        })
        .collect();
    let mut vols = Vec::with_capacity(replications);
    let mut sq = Vec::with_capacity(replications);
    let mut max_gap: f64 = 0.0;
    let mut zero = 0;
    for row in rows {
        let (v, inc, gap) = row?;
        vols.push(v);
        sq.push((n + 1) as f64 * inc * inc);
        max_gap = max_gap.max(gap);
        if inc == 0.0 {
            zero += 1;
        }
    }
    let mv = moments(&vols);
    let mb = moments(&sq);
    let ratio = mv.variance / mb.mean;
    let rel = (mv.stderr_variance / mv.variance).powi(2) + (mb.stderr_mean / mb.mean).powi(2);
    Ok(EfronSteinReport {
        n,
        replications,
        varhat: mv.variance,
        varhat_stderr: mv.stderr_variance,
        bound: mb.mean,
        bound_stderr: mb.stderr_mean,
        ratio,
        ratio_stderr: ratio * rel.sqrt(),
        max_increment_gap: max_gap,
        zero_increments: zero,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContainmentRate {
    pub t: f64,
    pub rate: f64,
    /// Binomial standard error.
    pub stderr: f64,
    pub replications: usize,
    /// Vertices of the floating body; 0 when it is empty.
    pub floating_vertices: usize,
}

/// Fraction of replications whose `K_n` contains the floating body
/// `K_[Vol(K) c log(n) / n]`. Streams do not depend on `c`, so rates for
/// different `c` are paired replication by replication.
pub fn floating_containment_rate(
    body: &ConvexBodySpec,
    n: usize,
    c: f64,
    replications: usize,
    master_seed: u64,
) -> Result<ContainmentRate> {
    if body.dim() != 2 {
        return Err(GeoError::Unsupported("floating containment is computed for planar bodies".into()));
    }
    if n < 3 || replications == 0 || !(c > 0.0) {
        return Err(GeoError::InvalidInput(format!(
            "containment needs n >= 3, c > 0 and replications > 0, got n = {n}, c = {c}, replications = {replications}"
        )));
    }
    let g = body.geometry();
    let t = body_volume(body)? * c * (n as f64).ln() / n as f64;
    let fb = floating_body_2d(body, t)?;
    let Some(fb) = fb else {
        return Ok(ContainmentRate {
            t,
            rate: 1.0,
            stderr: 0.0,
            replications,
            floating_vertices: 0,
        });
    };
    let targets = fb.ambient_vertices()?;
    let sampler = UniformSampler::new(body)?;
    let seed = master_seed ^ CONTAINMENT_DOMAIN;
    let hits: Vec<Result<bool>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = replication_rng(seed, n as u64, r as u64);
            let pts = sampler.sample_chart(n, &mut rng)?;
            let kn = hull_of_chart_points(g, body.frame(), &pts)?;
            Ok(targets.iter().all(|x| kn.contains(x)))
        })
        .collect();
    let mut count = 0usize;
    for h in hits {
        if h? {
            count += 1;
        }
    }
    let p = count as f64 / replications as f64;
    Ok(ContainmentRate {
        t,
        rate: p,
        stderr: (p * (1.0 - p) / replications as f64).sqrt(),
        replications,
        floating_vertices: fb.chart_vertices.len(),
    })
}

/// Missed volume `Vol(K) - Vol(K_n)` along one nested sample path: the hull
/// at size `n` uses the first `n` points of a single stream.
pub fn missed_volume_path(body: &ConvexBodySpec, n_grid: &[usize], master_seed: u64) -> Result<Vec<(usize, f64)>> {
    let Some(&last) = n_grid.iter().max() else {
        return Ok(Vec::new());
    };
    let g = body.geometry();
    let volume = body_volume(body)?;
    let mut rng = replication_rng(master_seed, last as u64, 0);
    let pts = UniformSampler::new(body)?.sample_chart(last, &mut rng)?;
    n_grid
        .iter()
        .map(|&n| {
            let hull = hull_of_chart_points(g, body.frame(), &pts[..n])?;
            Ok((n, volume - polytope_volume(&hull)?.0))
        })
        .collect()
}
