//! Command-line front end: `generate`, `verify` and `gallery`.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::CATALOG;
use crate::error::Error;
use crate::export::{write_csv_rows, write_obj, Bounds, Gallery, GalleryItem, Report, CSV_HEADER};
use crate::grid::{degeneracy_classify, sample_grid, Degeneracy, Domain, Method, SurfaceGrid};
use crate::holo::{parse, Expr};
use crate::small::max_determinant_defect;
use crate::verify::{route_deviation, verify_grid, Check, Stencil, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EMPTY: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_CHECK_FAILED: i32 = 5;
const EXIT_OTHER: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "cmc1",
    version,
    about = "CMC-1 surfaces in hyperbolic space from a holomorphic function"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the surface and write an OBJ mesh plus a CSV of the samples.
    Generate(JobArgs),
    /// Sample the surface, run the numerical checks and write a JSON report.
    Verify(JobArgs),
    /// Write meshes and a summary for the built-in examples.
    Gallery {
        /// Output directory.
        #[arg(long, default_value = "gallery")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Bianchi,
    Small,
    Both,
}

impl MethodChoice {
    fn methods(self) -> &'static [Method] {
        match self {
            MethodChoice::Bianchi => &[Method::Bianchi],
            MethodChoice::Small => &[Method::Small],
            MethodChoice::Both => &[Method::Bianchi, Method::Small],
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodChoice::Bianchi => "bianchi",
            MethodChoice::Small => "small",
            MethodChoice::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StencilChoice {
    Second,
    Fourth,
    Sixth,
}

impl From<StencilChoice> for Stencil {
    fn from(s: StencilChoice) -> Self {
        match s {
            StencilChoice::Second => Stencil::Second,
            StencilChoice::Fourth => Stencil::Fourth,
            StencilChoice::Sixth => Stencil::Sixth,
        }
    }
}

#[derive(Debug, Args)]
struct JobArgs {
    /// Holomorphic function of `tau`, e.g. "tau^2" or "log(tau)".
    #[arg(long = "f", value_name = "EXPR", allow_hyphen_values = true)]
    expression: String,
    /// Radius range `min:max`.
    #[arg(long = "r", default_value = "0.5:2", value_parser = parse_range, allow_hyphen_values = true)]
    r: (f64, f64),
    /// Angle range `min:max` in radians; the upper end is excluded.
    #[arg(long, default_value = "0:6.283185307179586", value_parser = parse_range, allow_hyphen_values = true)]
    theta: (f64, f64),
    /// Grid size `<n_r>x<n_theta>`.
    #[arg(long, default_value = "64x64", value_parser = parse_size)]
    n: (usize, usize),
    #[arg(long, value_enum, default_value = "bianchi")]
    method: MethodChoice,
    /// OBJ output path; the CSV goes next to it with a `.csv` extension.
    #[arg(long, default_value = "surface.obj")]
    out: PathBuf,
    /// JSON report path.
    #[arg(long, default_value = "report.json")]
    report: PathBuf,
    /// Tolerance on max |H - 1|.
    #[arg(long)]
    tol_h: Option<f64>,
    /// Tolerance on the distance between the two constructions.
    #[arg(long)]
    tol_equiv: Option<f64>,
    /// Finite-difference stencil for the curvature check.
    #[arg(long, value_enum, default_value = "sixth")]
    stencil: StencilChoice,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `min:max`, got `{s}`"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("bad lower bound `{a}`: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("bad upper bound `{b}`: {e}"))?;
    Ok((a, b))
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected `<n_r>x<n_theta>`, got `{s}`"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("bad n_r `{a}`: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("bad n_theta `{b}`: {e}"))?;
    Ok((a, b))
}

/// A validated generation or verification job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub expression: String,
    pub domain: Domain,
    pub method: MethodChoice,
    pub mesh_path: PathBuf,
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
    pub tolerances: Tolerances,
    pub stencil: Stencil,
}

impl JobConfig {
    fn from_args(a: JobArgs) -> Result<Self, Error> {
        let domain = Domain {
            r_min: a.r.0,
            r_max: a.r.1,
            theta_min: a.theta.0,
            theta_max: a.theta.1,
            n_r: a.n.0,
            n_theta: a.n.1,
        };
        domain.validate()?;
        let mut tolerances = Tolerances::default();
        for (value, slot, flag) in [
            (a.tol_h, &mut tolerances.mean_curvature, "--tol-h"),
            (a.tol_equiv, &mut tolerances.route_equivalence, "--tol-equiv"),
        ] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidDomain(format!("{flag} must be positive, got {v}")));
                }
                *slot = v;
            }
        }
        Ok(Self {
            expression: a.expression,
            domain,
            method: a.method,
            csv_path: a.out.with_extension("csv"),
            mesh_path: a.out,
            report_path: a.report,
            tolerances,
            stencil: a.stencil.into(),
        })
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidDomain(_) => EXIT_USAGE,
        Error::EmptyGrid => EXIT_EMPTY,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_OTHER,
    }
}

/// Formats a coordinate for messages, rounding away float noise.
fn coord(x: f64) -> String {
    let r = (x * 1e10).round() / 1e10;
    format!("{}", if r == 0.0 { 0.0 } else { r })
}

enum Outcome {
    Done,
    Degenerate(String),
    ChecksFailed,
}

fn sample_all(e: &Expr, cfg: &JobConfig) -> Result<Result<Vec<SurfaceGrid>, String>, Error> {
    let grids = cfg
        .method
        .methods()
        .iter()
        .map(|&m| sample_grid(e, &cfg.domain, m))
        .collect::<Result<Vec<_>, _>>()?;
    if let Degeneracy::PointDegenerate { point, .. } = degeneracy_classify(&grids[0])? {
        return Ok(Err(format!(
            "degenerate: image is a single point ({}, {}, {})",
            coord(point.x),
            coord(point.y),
            coord(point.z)
        )));
    }
    Ok(Ok(grids))
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn generate(cfg: &JobConfig) -> Result<Outcome, Error> {
    let e = parse(&cfg.expression)?;
    let grids = match sample_all(&e, cfg)? {
        Ok(g) => g,
        Err(msg) => return Ok(Outcome::Degenerate(msg)),
    };
    let mesh = &grids[0];
    let header = format!("f(tau) = {}\nmethod: {}", cfg.expression, mesh.method);
    let (vertices, faces) = write_obj(mesh, &header, create(&cfg.mesh_path)?)?;
    let mut csv = create(&cfg.csv_path)?;
    writeln!(csv, "{CSV_HEADER}")?;
    let mut rows = 0;
    for g in &grids {
        rows += write_csv_rows(g, &mut csv)?;
    }
    csv.flush()?;
    println!(
        "wrote {} ({vertices} vertices, {faces} faces) and {} ({rows} rows); {} holes",
        cfg.mesh_path.display(),
        cfg.csv_path.display(),
        mesh.hole_count()
    );
    Ok(Outcome::Done)
}

fn prefixed(method: Method, checks: Vec<Check>) -> impl Iterator<Item = Check> {
    checks.into_iter().map(move |c| Check {
        name: format!("{method}.{}", c.name),
        ..c
    })
}

fn verify(cfg: &JobConfig, started: Instant) -> Result<Outcome, Error> {
    let e = parse(&cfg.expression)?;
    let grids = match sample_all(&e, cfg)? {
        Ok(g) => g,
        Err(msg) => return Ok(Outcome::Degenerate(msg)),
    };
    let mut checks = Vec::new();
    for g in &grids {
        let report = verify_grid(g, &e, &cfg.tolerances, cfg.stencil)?;
        checks.extend(prefixed(g.method, report.checks));
        if g.method == Method::Small {
            let det = max_determinant_defect(&e, &cfg.domain)?;
            checks.push(Check::new("small.determinant", det, cfg.tolerances.determinant));
        }
    }
    if let [a, b] = grids.as_slice() {
        let dev = route_deviation(a, b)?;
        checks.push(Check::new("route_equivalence", dev, cfg.tolerances.route_equivalence));
    }
    let report = Report {
        expression: cfg.expression.clone(),
        domain: cfg.domain,
        method: cfg.method.name().to_string(),
        checks,
        holes: grids[0].hole_count(),
        timing_ms: started.elapsed().as_millis() as u64,
    };
    let mut w = create(&cfg.report_path)?;
    serde_json::to_writer_pretty(&mut w, &report).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    for c in &report.checks {
        println!(
            "{:<28} {:>12.3e}  (tol {:.1e})  {}",
            c.name,
            c.max_residual,
            c.tolerance,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    println!("report: {}", cfg.report_path.display());
    Ok(if report.checks.iter().all(|c| c.pass) {
        Outcome::Done
    } else {
        Outcome::ChecksFailed
    })
}

fn gallery(out: &Path) -> Result<Outcome, Error> {
    fs::create_dir_all(out)?;
    let mut surfaces = Vec::new();
    for entry in &CATALOG {
        let e = parse(entry.expression)?;
        let g = sample_grid(&e, &entry.gallery_domain, Method::Bianchi)?;
        let mesh = format!("{}.obj", entry.name);
        let header = format!("{}: f(tau) = {}", entry.name, entry.expression);
        let (vertices, faces) = write_obj(&g, &header, create(&out.join(&mesh))?)?;
        let report = verify_grid(&g, &e, &Tolerances::default(), Stencil::default())?;
        println!("{:<16} {vertices:>6} vertices {faces:>6} faces  {}", entry.name, mesh);
        surfaces.push(GalleryItem {
            name: entry.name.to_string(),
            expression: entry.expression.to_string(),
            domain: entry.gallery_domain,
            mesh,
            vertices,
            faces,
            holes: g.hole_count(),
            bounds: Bounds::of(&g).ok_or(Error::EmptyGrid)?,
            checks: report.checks,
        });
    }
    let mut w = create(&out.join("gallery.json"))?;
    serde_json::to_writer_pretty(&mut w, &Gallery { surfaces }).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(Outcome::Done)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let started = Instant::now();
    let result = match cli.command {
        Command::Generate(a) => JobConfig::from_args(a).and_then(|cfg| generate(&cfg)),
        Command::Verify(a) => JobConfig::from_args(a).and_then(|cfg| verify(&cfg, started)),
        Command::Gallery { out } => gallery(&out),
    };
    match result {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::Degenerate(msg)) => {
            eprintln!("{msg}");
            EXIT_EMPTY
        }
        Ok(Outcome::ChecksFailed) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_sizes() {
        assert_eq!(parse_range("0.5:2"), Ok((0.5, 2.0)));
        assert_eq!(parse_range("-3.1:3.1"), Ok((-3.1, 3.1)));
        assert!(parse_range("1-2").is_err());
        assert_eq!(parse_size("64x32"), Ok((64, 32)));
        assert!(parse_size("64").is_err());
    }

    #[test]
    fn coordinates_are_rounded() {
        assert_eq!(coord(1.0000000000000002), "1");
        assert_eq!(coord(-1e-17), "0");
        assert_eq!(coord(2.5), "2.5");
    }

    #[test]
    fn tolerance_overrides_must_be_positive() {
        let cli = Cli::try_parse_from(["cmc1", "verify", "--f", "tau^2", "--tol-h", "0"]).unwrap();
        let Command::Verify(a) = cli.command else {
            unreachable!()
        };
        assert!(matches!(JobConfig::from_args(a), Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn csv_sits_next_to_mesh() {
        let cli = Cli::try_parse_from(["cmc1", "generate", "--f", "tau^2", "--out", "x/m.obj"]).unwrap();
        let Command::Generate(a) = cli.command else {
            unreachable!()
        };
        let cfg = JobConfig::from_args(a).unwrap();
        assert_eq!(cfg.csv_path, PathBuf::from("x/m.csv"));
        assert_eq!(cfg.domain, Domain::annulus(0.5, 2.0, 64, 64));
    }
}
