//! Replicated random-polytope experiments for the inscribed and circumscribed models.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{replication_rng, stream_id};
use super::sampling::UniformSampler;
use super::stats::moments;
use crate::bodies::{polar_polytope, ConvexBodySpec};
use crate::error::{GeoError, Result};
use crate::hull::{hull_of_chart_points, GeodesicPolytope};
use crate::measure::{body_volume, mean_width_excess_paired, polytope_volume};

/// Default number of paired great spheres for the mean width excess.
pub const DEFAULT_U1_SAMPLES: usize = 1_000_000;
/// Points of `K` checked against every circumscribed polytope.
const CONTAINMENT_CHECKS: usize = 100;
const MAX_RETRIES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Inscribed,
    Circumscribed,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Inscribed => "inscribed",
            Model::Circumscribed => "circumscribed",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = GeoError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inscribed" => Ok(Model::Inscribed),
            "circumscribed" => Ok(Model::Circumscribed),
            _ => Err(GeoError::InvalidInput(format!("unknown model {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `Vol(K) - Vol(K_n)`, or `Vol(K^(n)) - Vol(K)` for the circumscribed model.
    MissedVolume,
    F0,
    Fd1,
    /// `U_1(K^(n)) - U_1(K)`; circumscribed model only.
    MeanWidthExcess,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [
        Statistic::MissedVolume,
        Statistic::F0,
        Statistic::Fd1,
        Statistic::MeanWidthExcess,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::MissedVolume => "missed_volume",
            Statistic::F0 => "f0",
            Statistic::Fd1 => "fd1",
            Statistic::MeanWidthExcess => "mean_width_excess",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = GeoError;
    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| GeoError::InvalidInput(format!("unknown statistic {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub body: ConvexBodySpec,
    pub model: Model,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    pub statistics: Vec<Statistic>,
    pub u1_samples: usize,
}

impl SimulationConfig {
    /// Checks the config; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        let d = self.body.dim();
        let bad = |field: &str, why: String| Err(GeoError::InvalidInput(format!("{field}: {why}")));
        if self.n_grid.is_empty() {
            return bad("n_grid", "must not be empty".into());
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_grid", "must be strictly increasing".into());
        }
        if self.n_grid[0] < d + 1 {
            return bad("n_grid", format!("sample sizes must be at least d + 1 = {}", d + 1));
        }
        if self.replications < 2 {
            return bad("replications", format!("must be at least 2, got {}", self.replications));
        }
        if self.statistics.is_empty() {
            return bad("statistics", "must not be empty".into());
        }
        let mut seen = self.statistics.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.statistics.len() {
            return bad("statistics", "contains duplicates".into());
        }
        match self.model {
            Model::Inscribed => {
                if self.statistics.contains(&Statistic::MeanWidthExcess) {
                    return bad("statistics", "mean_width_excess needs the circumscribed model".into());
                }
            }
            Model::Circumscribed => {
                if !self.body.geometry().is_spherical() {
                    return bad("model", "the circumscribed model needs a spherical body".into());
                }
                if self.statistics.contains(&Statistic::MeanWidthExcess) && self.u1_samples == 0 {
                    return bad("u1_samples", "must be positive".into());
                }
            }
        }
        if !(d == 2 || d == 3) {
            return bad("body", format!("experiments run in dimension 2 or 3, got {d}"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub model: Model,
    pub statistic: Statistic,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub stderr_mean: f64,
    /// Delete-one jackknife over replications.
    pub stderr_variance: f64,
    pub replications: usize,
    pub seed: u64,
}

/// Runs the experiment for either model.
pub fn run_experiment(config: &SimulationConfig) -> Result<Vec<EstimatorSummary>> {
    config.validate()?;
    let body = &config.body;
    let volume = body_volume(body)?;
    let sampler = UniformSampler::new(body)?;
    let polar = match config.model {
        Model::Circumscribed => Some(body.spherical_polar()?),
        Model::Inscribed => None,
    };
    let polar_sampler = polar.as_ref().map(UniformSampler::new).transpose()?;

    let tasks: Vec<(usize, usize)> = config
        .n_grid
        .iter()
        .flat_map(|&n| (0..config.replications).map(move |r| (n, r)))
        .collect();
    let results: Vec<Result<Vec<f64>>> = tasks
        .par_iter()
        .map(|&(n, r)| {
            let mut rng = replication_rng(config.master_seed, n as u64, r as u64);
            let out = match &polar_sampler {
                None => inscribed_replication(config, &sampler, volume, n, &mut rng),
                Some(ps) => circumscribed_replication(config, &sampler, ps, volume, n, &mut rng),
            };
            out.map_err(|e| GeoError::Replication {
                n,
                replication: r,
                stream: stream_id(config.master_seed, n as u64, r as u64),
                source: Box::new(e),
            })
        })
        .collect();

    let mut values = Vec::with_capacity(results.len());
    for res in results {
        values.push(res?);
    }
    let reps = config.replications;
    let mut out = Vec::new();
    for (k, &n) in config.n_grid.iter().enumerate() {
        let block = &values[k * reps..(k + 1) * reps];
        for (j, &st) in config.statistics.iter().enumerate() {
            let col: Vec<f64> = block.iter().map(|row| row[j]).collect();
            let m = moments(&col);
            out.push(EstimatorSummary {
                model: config.model,
                statistic: st,
                n,
                mean: m.mean,
                variance: m.variance,
                stderr_mean: m.stderr_mean,
                stderr_variance: m.stderr_variance,
                replications: reps,
                seed: config.master_seed,
            });
        }
    }
    Ok(out)
}

pub fn run_inscribed_experiment(config: &SimulationConfig) -> Result<Vec<EstimatorSummary>> {
    if config.model != Model::Inscribed {
        return Err(GeoError::InvalidInput("model: expected inscribed".into()));
    }
    run_experiment(config)
}

pub fn run_circumscribed_experiment(config: &SimulationConfig) -> Result<Vec<EstimatorSummary>> {
    if config.model != Model::Circumscribed {
        return Err(GeoError::InvalidInput("model: expected circumscribed".into()));
    }
    run_experiment(config)
}

fn inscribed_replication<R: Rng + ?Sized>(
    config: &SimulationConfig,
    sampler: &UniformSampler<'_>,
    volume: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let body = &config.body;
    let pts = sampler.sample_chart(n, rng)?;
    let hull = hull_of_chart_points(body.geometry(), body.frame(), &pts)?;
    config
        .statistics
        .iter()
        .map(|st| {
            Ok(match st {
                Statistic::MissedVolume => volume - polytope_volume(&hull)?.0,
                Statistic::F0 => hull.chart_vertices.len() as f64,
                Statistic::Fd1 => hull.facets.len() as f64,
                Statistic::MeanWidthExcess => unreachable!("rejected by validation"),
            })
        })
        .collect()
}

fn circumscribed_replication<R: Rng + ?Sized>(
    config: &SimulationConfig,
    sampler: &UniformSampler<'_>,
    polar_sampler: &UniformSampler<'_>,
    volume: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let body = &config.body;
    let (poly, _) = circumscribed_with(body, sampler, polar_sampler, n, rng)?;
    config
        .statistics
        .iter()
        .map(|st| {
            Ok(match st {
                Statistic::MissedVolume => polytope_volume(&poly)?.0 - volume,
                Statistic::F0 => poly.chart_vertices.len() as f64,
                Statistic::Fd1 => poly.facets.len() as f64,
                Statistic::MeanWidthExcess => mean_width_excess_paired(&poly, body, config.u1_samples, rng)?.estimate,
            })
        })
        .collect()
}

/// A circumscribed random polytope and the number of degenerate pole draws it took.
#[derive(Clone, Debug)]
pub struct CircumscribedSample {
    pub polytope: GeodesicPolytope,
    pub retries: usize,
}

/// `K^(n)`: the intersection of the hemispheres `H^-(x_i)` for `n` uniform
/// poles `x_i` of the polar body, computed as the polar of their hull.
pub fn sample_circumscribed<R: Rng + ?Sized>(body: &ConvexBodySpec, n: usize, rng: &mut R) -> Result<CircumscribedSample> {
    if !body.geometry().is_spherical() {
        return Err(GeoError::Unsupported("the circumscribed model needs a spherical body".into()));
    }
    if n < body.dim() + 1 {
        return Err(GeoError::InvalidInput(format!("n must be at least d + 1, got {n}")));
    }
    let polar = body.spherical_polar()?;
    let sampler = UniformSampler::new(body)?;
    let polar_sampler = UniformSampler::new(&polar)?;
    let (polytope, retries) = circumscribed_with(body, &sampler, &polar_sampler, n, rng)?;
    Ok(CircumscribedSample { polytope, retries })
}

fn circumscribed_with<R: Rng + ?Sized>(
    body: &ConvexBodySpec,
    sampler: &UniformSampler<'_>,
    polar_sampler: &UniformSampler<'_>,
    n: usize,
    rng: &mut R,
) -> Result<(GeodesicPolytope, usize)> {
    let g = body.geometry();
    let polar_frame = polar_sampler.body().frame();
    let mut retries = 0;
    let hull = loop {
        let poles = polar_sampler.sample_chart(n, rng)?;
        match hull_of_chart_points(g, polar_frame, &poles) {
            Ok(h) => break h,
            Err(GeoError::DegenerateHull { .. }) if retries < MAX_RETRIES => retries += 1,
            Err(e) => return Err(e),
        }
    };
    let poly = polar_polytope(&hull)?;
    for p in sampler.sample_chart(CONTAINMENT_CHECKS, rng)? {
        let x = body.frame().unchart(g, &p)?;
        if !poly.contains(&x) {
            return Err(GeoError::Numerical("circumscribed polytope does not contain the body".into()));
        }
    }
    Ok((poly, retries))
}
