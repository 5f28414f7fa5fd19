//! Experiment config files: one JSON document with a schema version; unknown
//! fields are rejected.

use std::path::Path;

use geohull_core::bodies::ConvexBodySpec;
use geohull_core::montecarlo::{Model, SimulationConfig, Statistic, DEFAULT_U1_SAMPLES};
use geohull_core::{AmbientPoint, ChartPoint, Geometry, GeometryKind};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodyConfig {
    /// Ball about `center` (ambient coordinates), or about the pole when omitted.
    GeodesicBall {
        geometry: GeometryKind,
        dim: usize,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    ChartEllipse {
        geometry: GeometryKind,
        center: [f64; 2],
        semi_axes: [f64; 2],
        #[serde(default)]
        angle: f64,
    },
    ChartPolytope {
        geometry: GeometryKind,
        vertices: Vec<Vec<f64>>,
    },
    ChartSquare {
        geometry: GeometryKind,
        dim: usize,
        half_side: f64,
    },
}

impl BodyConfig {
    pub fn build(&self) -> Result<ConvexBodySpec, CliError> {
        let field = |e: geohull_core::GeoError| CliError::Config(format!("body: {e}"));
        match self {
            BodyConfig::GeodesicBall { geometry, dim, radius, center } => {
                let g = Geometry::new(*geometry, *dim).map_err(field)?;
                match center {
                    None => ConvexBodySpec::ball_at_pole(g, *radius),
                    Some(c) => ConvexBodySpec::geodesic_ball(g, AmbientPoint(c.iter().copied().collect()), *radius),
                }
                .map_err(field)
            }
            BodyConfig::ChartEllipse {
                geometry,
                center,
                semi_axes,
                angle,
            } => ConvexBodySpec::chart_ellipse(Geometry::new(*geometry, 2).map_err(field)?, *center, *semi_axes, *angle)
                .map_err(field),
            BodyConfig::ChartPolytope { geometry, vertices } => {
                let dim = vertices.first().map_or(0, |v| v.len());
                let g = Geometry::new(*geometry, dim).map_err(field)?;
                ConvexBodySpec::chart_polytope(g, vertices.iter().map(|v| ChartPoint::new(v)).collect()).map_err(field)
            }
            BodyConfig::ChartSquare {
                geometry,
                dim,
                half_side,
            } => ConvexBodySpec::chart_square(Geometry::new(*geometry, *dim).map_err(field)?, *half_side).map_err(field),
        }
    }
}

fn default_u1_samples() -> usize {
    DEFAULT_U1_SAMPLES
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    pub body: BodyConfig,
    pub model: Model,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    pub statistics: Vec<Statistic>,
    #[serde(default = "default_u1_samples")]
    pub u1_samples: usize,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ConfigFile = serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The validated simulation config.
    pub fn simulation(&self) -> Result<SimulationConfig, CliError> {
        let cfg = SimulationConfig {
            body: self.body.build()?,
            model: self.model,
            n_grid: self.n_grid.clone(),
            replications: self.replications,
            master_seed: self.master_seed,
            statistics: self.statistics.clone(),
            u1_samples: self.u1_samples,
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Compact JSON with fields in declaration order.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}
