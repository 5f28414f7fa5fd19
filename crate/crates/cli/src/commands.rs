//! Subcommands.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use geohull_core::bodies::{ConvexBodySpec, Shape};
use geohull_core::measure::{
    body_volume, cap_cover_2d, floating_body_2d_with, mean_width_u1, polytope_volume, CapCoverParams,
};
use geohull_core::montecarlo::{fit_scaling, run_experiment, Statistic};
use geohull_core::{GeoError, Geometry, GeometryKind};
use serde_json::json;

use crate::config::{BodyConfig, ConfigFile};
use crate::io::{self, Manifest, ScalingReport};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "geohull", version, about = "Random polytopes in spherical, hyperbolic and Euclidean space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a replicated experiment from a config file.
    Simulate(SimulateArgs),
    /// Fit a log-log slope to one statistic of a summaries table.
    Scaling(ScalingArgs),
    /// Floating body and wet-part volume of a planar body.
    Floating(FloatingArgs),
    /// Economic cap covering of a planar body, with its runtime verification.
    Capcover(CapcoverArgs),
    /// Monte Carlo estimate of the spherical mean width.
    Meanwidth(MeanwidthArgs),
    /// Spherical polar body.
    Polar(PolarArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(short, long)]
    pub config: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Replaces `master_seed` from the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "GEOHULL_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Target {
    Mean,
    Variance,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    pub summaries: PathBuf,
    #[arg(long)]
    pub stat: String,
    #[arg(long, value_enum, default_value = "mean")]
    pub target: Target,
    /// Restrict to one model when the table mixes both.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub expected: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub slack: f64,
    /// Defaults to `scaling.json` next to the summaries.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GeometryArg {
    Spherical,
    Hyperbolic,
    Euclidean,
}

impl From<GeometryArg> for GeometryKind {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Spherical => GeometryKind::Spherical,
            GeometryArg::Hyperbolic => GeometryKind::Hyperbolic,
            GeometryArg::Euclidean => GeometryKind::Euclidean,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ShapeArgs {
    /// Geodesic ball of this radius about the pole.
    #[arg(long)]
    pub ball: Option<f64>,
    /// Chart square (cube) of this half side.
    #[arg(long)]
    pub square: Option<f64>,
    /// Chart ellipse `a,b[,angle]` centred at the origin.
    #[arg(long, value_delimiter = ',', num_args = 2..=3)]
    pub ellipse: Option<Vec<f64>>,
    /// JSON file with a body object or a whole experiment config.
    #[arg(long)]
    pub body: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BodyArgs {
    #[arg(long, value_enum, default_value = "spherical")]
    pub geometry: GeometryArg,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[command(flatten)]
    pub shape: ShapeArgs,
}

impl BodyArgs {
    pub fn body_config(&self) -> Result<BodyConfig, CliError> {
        let geometry = self.geometry.into();
        let s = &self.shape;
        if let Some(radius) = s.ball {
            return Ok(BodyConfig::GeodesicBall {
                geometry,
                dim: self.dim,
                radius,
                center: None,
            });
        }
        if let Some(half_side) = s.square {
            return Ok(BodyConfig::ChartSquare {
                geometry,
                dim: self.dim,
                half_side,
            });
        }
        if let Some(e) = &s.ellipse {
            return Ok(BodyConfig::ChartEllipse {
                geometry,
                center: [0.0, 0.0],
                semi_axes: [e[0], e[1]],
                angle: e.get(2).copied().unwrap_or(0.0),
            });
        }
        let path = s.body.as_ref().expect("clap requires one shape");
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        match serde_json::from_str::<BodyConfig>(&text) {
            Ok(b) => Ok(b),
            Err(body_err) => match ConfigFile::parse(&text) {
                Ok(c) => Ok(c.body),
                Err(_) => Err(CliError::Config(format!("body: {body_err}"))),
            },
        }
    }

    pub fn build(&self) -> Result<ConvexBodySpec, CliError> {
        self.body_config()?.build()
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct VolumeArgs {
    /// Absolute cap volume.
    #[arg(long)]
    pub t: Option<f64>,
    /// Cap volume as a fraction of the body volume.
    #[arg(long)]
    pub t_fraction: Option<f64>,
}

impl VolumeArgs {
    fn resolve(&self, volume: f64) -> f64 {
        self.t.unwrap_or_else(|| volume * self.t_fraction.expect("clap requires one of t, t-fraction"))
    }
}

#[derive(Debug, Args)]
pub struct FloatingArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    #[command(flatten)]
    pub volume: VolumeArgs,
    #[arg(long, default_value_t = 2048)]
    pub directions: usize,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CapcoverArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    #[command(flatten)]
    pub volume: VolumeArgs,
    /// Seed of the randomized clause checks.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeanwidthArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PolarArgs {
    #[command(flatten)]
    pub body: BodyArgs,
    #[arg(short, long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Scaling(a) => scaling(&a),
        Command::Floating(a) => floating(&a),
        Command::Capcover(a) => capcover(&a),
        Command::Meanwidth(a) => meanwidth(&a),
        Command::Polar(a) => polar(&a),
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Config("threads: must be positive".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let started_at = now();
    let mut file = ConfigFile::load(&a.config)?;
    if let Some(seed) = a.seed {
        file.master_seed = seed;
    }
    let cfg = file.simulation()?;
    let summaries = with_threads(a.threads, || run_experiment(&cfg))??;
    create_dir(&a.out)?;
    io::write_summaries(&a.out.join("summaries.csv"), &summaries)?;
    let manifest = Manifest {
        config: serde_json::to_value(&file).expect("config serializes"),
        config_hash: file.content_hash(),
        started_at,
        finished_at: now(),
        version: env!("CARGO_PKG_VERSION").into(),
        outputs: vec!["summaries.csv".into()],
    };
    io::write_json(&a.out.join("manifest.json"), &manifest)?;
    println!("wrote {} summaries to {}", summaries.len(), a.out.join("summaries.csv").display());
    Ok(())
}

pub fn scaling(a: &ScalingArgs) -> Result<(), CliError> {
    let stat: Statistic = a.stat.parse().map_err(|e: GeoError| CliError::Config(format!("stat: {e}")))?;
    let rows = io::read_summaries(&a.summaries)?;
    let mut points: Vec<(usize, f64)> = rows
        .iter()
        .filter(|s| s.statistic == stat && a.model.as_deref().is_none_or(|m| s.model.name() == m))
        .map(|s| {
            (
                s.n,
                match a.target {
                    Target::Mean => s.mean,
                    Target::Variance => s.variance,
                },
            )
        })
        .collect();
    points.sort_by_key(|p| p.0);
    if points.len() < 3 {
        return Err(CliError::Config(format!(
            "stat: {} has {} rows in {}, need at least 3",
            stat,
            points.len(),
            a.summaries.display()
        )));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(n, v)| (n as f64, v)).collect();
    let fit = fit_scaling(&xy).map_err(|e| CliError::Config(e.to_string()))?;
    let target = match a.target {
        Target::Mean => "mean",
        Target::Variance => "variance",
    };
    let report = ScalingReport::new(stat.name(), target, &fit, points);
    let out = a.out.clone().unwrap_or_else(|| {
        a.summaries
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join("scaling.json")
    });
    io::write_json(&out, &report)?;
    println!(
        "{} {}: slope {} ± {} (95%), intercept {}, {} points",
        stat,
        target,
        fit.slope,
        fit.ci95,
        fit.intercept,
        fit.points
    );
    if let Some(expected) = a.expected {
        let gap = (fit.slope - expected).abs();
        if gap > fit.ci95 + a.slack {
            return Err(CliError::Mismatch(format!(
                "slope {} differs from expected {expected} by {gap} > ci95 {} + slack {}",
                fit.slope, fit.ci95, a.slack
            )));
        }
        println!("slope agrees with {expected} within ci95 + slack");
    }
    Ok(())
}

pub fn floating(a: &FloatingArgs) -> Result<(), CliError> {
    let body = a.body.build()?;
    let vol = body_volume(&body)?;
    let t = a.volume.resolve(vol);
    create_dir(&a.out)?;
    let fb = floating_body_2d_with(&body, t, a.directions)?;
    let (rows, inner) = match &fb {
        Some(p) => (p.polygon().iter().map(|q| q.to_vec()).collect(), polytope_volume(p)?.0),
        None => (Vec::new(), 0.0),
    };
    let wet = (vol - inner).max(0.0);
    io::write_points(&a.out.join("floating.csv"), &["x", "y"], &rows)?;
    io::write_json(
        &a.out.join("floating.json"),
        &json!({
            "t": t,
            "body_volume": vol,
            "floating_volume": inner,
            "wet_part_volume": wet,
            "empty": fb.is_none(),
            "vertices": rows.len(),
        }),
    )?;
    if fb.is_none() {
        println!("floating body is empty for t = {t}; wet part volume {wet}");
    } else {
        println!("floating body with {} vertices; wet part volume {wet}", rows.len());
    }
    Ok(())
}

pub fn capcover(a: &CapcoverArgs) -> Result<(), CliError> {
    let body = a.body.build()?;
    let vol = body_volume(&body)?;
    let t = a.volume.resolve(vol);
    let mut params = CapCoverParams::default();
    if let Some(s) = a.seed {
        params.seed = s;
    }
    create_dir(&a.out)?;
    let report_path = a.out.join("capcover.json");
    let cover = match cap_cover_2d(&body, t, &params) {
        Ok(c) => c,
        Err(GeoError::CapCover { clause, detail }) => {
            io::write_json(
                &report_path,
                &json!({ "t": t, "passed": false, "violated_clause": clause, "detail": detail }),
            )?;
            return Err(CliError::Runtime(format!("clause ({clause}) violated: {detail}")));
        }
        Err(e @ GeoError::InvalidInput(_)) => return Err(CliError::Config(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let caps: Vec<Vec<f64>> = cover
        .caps
        .iter()
        .zip(&cover.cap_volumes)
        .enumerate()
        .map(|(i, (c, v))| vec![i as f64, c.normal[0], c.normal[1], c.offset, *v])
        .collect();
    io::write_points(&a.out.join("caps.csv"), &["cap", "normal_x", "normal_y", "offset", "volume"], &caps)?;
    let inner: Vec<Vec<f64>> = cover
        .inner_sets
        .iter()
        .enumerate()
        .flat_map(|(j, poly)| {
            let anchor = cover.inner_anchor[j] as f64;
            poly.iter().map(move |p| vec![j as f64, anchor, p[0], p[1]])
        })
        .collect();
    io::write_points(&a.out.join("inner_sets.csv"), &["set", "anchor", "x", "y"], &inner)?;
    io::write_json(
        &report_path,
        &json!({
            "t": t,
            "body_volume": vol,
            "m": cover.m(),
            "m_prime": cover.m_prime(),
            "passed": true,
            "clauses": { "i": true, "ii": true, "iii": true, "iv": true },
            "above_curved_threshold": cover.above_curved_threshold,
            "inner_volumes": cover.inner_volumes,
        }),
    )?;
    println!(
        "{} caps, {} disjoint inner sets; clauses (i)-(iv) verified",
        cover.m(),
        cover.m_prime()
    );
    Ok(())
}

pub fn meanwidth(a: &MeanwidthArgs) -> Result<(), CliError> {
    let body = a.body.build()?;
    let m = mean_width_u1(&body, a.samples, a.seed).map_err(|e| match e {
        GeoError::Unsupported(_) | GeoError::InvalidInput(_) => CliError::Config(e.to_string()),
        e => e.into(),
    })?;
    println!("U1 = {} ± {}", m.estimate, m.stderr);
    Ok(())
}

pub fn polar(a: &PolarArgs) -> Result<(), CliError> {
    let body = a.body.build()?;
    let p = body.spherical_polar().map_err(|e| match e {
        GeoError::Unsupported(_) => CliError::Config(e.to_string()),
        e => e.into(),
    })?;
    create_dir(&a.out)?;
    let g: Geometry = p.geometry();
    match p.shape() {
        Shape::GeodesicBall { center, radius } => {
            io::write_json(
                &a.out.join("polar.json"),
                &json!({
                    "shape": "geodesic_ball",
                    "geometry": g.kind,
                    "dim": g.dim,
                    "center": center.coords(),
                    "radius": radius,
                }),
            )?;
            println!("polar is the ball of radius {radius} about {:?}", center.coords());
        }
        _ => {
            let poly = p
                .polytope()
                .ok_or_else(|| CliError::Runtime("polar polytope is degenerate".into()))?;
            let verts: Vec<Vec<f64>> = poly.ambient_vertices()?.iter().map(|v| v.coords().to_vec()).collect();
            let header: Vec<String> = (1..=g.dim + 1).map(|k| format!("x{k}")).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            io::write_points(&a.out.join("polar.csv"), &header, &verts)?;
            io::write_json(
                &a.out.join("polar.json"),
                &json!({
                    "shape": "polytope",
                    "geometry": g.kind,
                    "dim": g.dim,
                    "vertices": verts.len(),
                    "facets": poly.facets,
                }),
            )?;
            println!("polar is a polytope with {} vertices and {} facets", verts.len(), poly.facets.len());
        }
    }
    Ok(())
}
