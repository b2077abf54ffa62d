//! Command-line front end: argument parsing, configuration and structured
//! output for every library operation.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use orbit_designs::designs::tables::{certify_instance, table_instances};
use orbit_designs::designs::{
    classify_with_precision, fisher_bound, is_tight, strength_direct, strength_full,
    strength_invariant, CornerShell, ShellMeta, StrengthReport, WeightedDesign,
};
use orbit_designs::groups::{corner_vector, molien_dims, orbit_capped, GroupType, ReflectionGroup};
use orbit_designs::invariants::invariant_harm_basis;
use orbit_designs::poly::harm_basis;
use orbit_designs::scalar::{mode_tag, tolerance_from_bits};
use orbit_designs::xu::{self, Family, RadialWeight, XuConfig, XuFormula};
use orbit_designs::Scalar;

use config::{Config, OutputFormat, Overrides, PRECISION_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "orbit-designs",
    version,
    about = "Designs and cubature formulas from reflection-group orbits"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Float precision in bits (overrides ORBIT_DESIGNS_PRECISION).
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Relative zero tolerance is 2^-EXP.
    #[arg(long, global = true, value_name = "EXP")]
    tolerance_exponent: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Largest rank for explicit orbit enumeration.
    #[arg(long, global = true)]
    rank_cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Orbit of a point or of a corner vector.
    Orbit {
        #[arg(long = "type")]
        ty: GroupType,
        #[arg(long)]
        rank: usize,
        /// Corner vector index.
        #[arg(long, conflicts_with = "point")]
        k: Option<usize>,
        /// Comma-separated coordinates.
        #[arg(long)]
        point: Option<String>,
    },
    /// Basis of harmonic polynomials of one degree, or of the invariant ones.
    HarmBasis {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        degree: u32,
        #[arg(long = "type")]
        ty: Option<GroupType>,
    },
    /// Strength and tightness of a weighted design read from a JSON file.
    CheckDesign {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        t_max: u32,
        /// Required strength; exit 1 when it is not reached.
        #[arg(long)]
        t: Option<u32>,
    },
    /// Fisher-type lower bound on the size of a design.
    Fisher {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        t: u32,
        /// Number of spheres in the support, the origin included.
        #[arg(long, default_value_t = 1)]
        spheres: usize,
        /// The origin is one of the points.
        #[arg(long)]
        origin: bool,
    },
    /// Search for tight designs carried by unions of corner orbits.
    Classify {
        #[arg(long = "type")]
        ty: GroupType,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        t_max: u32,
    },
    /// Re-certify every row of a published table.
    ReproduceTables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        /// Sample value of the free parameter (repeatable).
        #[arg(long = "param")]
        params: Vec<Scalar>,
    },
    /// Solve the moment equations for a radial weight.
    XuBuild {
        #[arg(long, default_value = "gaussian")]
        weight: String,
        /// Comma-separated moments mu(0), mu(1), ... for a custom weight.
        #[arg(long)]
        moments: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "odd")]
        family: Family,
    },
    /// Check the moment equations and the degree of a formula file.
    XuVerify {
        file: PathBuf,
        /// Degree to check; defaults to the degree the family promises.
        #[arg(long)]
        t: Option<u32>,
        #[arg(long, default_value = "gaussian")]
        weight: String,
        #[arg(long)]
        moments: Option<String>,
    },
    /// Coefficients of the Molien series of invariant harmonic dimensions.
    Molien {
        #[arg(long = "type")]
        ty: GroupType,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        lmax: usize,
    },
}

/// Exit code and the text written to each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

/// Result of one command: the JSON value and whether verification passed.
struct Report {
    value: Value,
    ok: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, ok: true }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var(PRECISION_ENV).ok().as_deref())
}

/// Like [`run`], with the precision variable passed explicitly.
pub fn run_with_env<I, T>(args: I, env_precision: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let flags = Overrides {
        precision_bits: cli.global.precision,
        tolerance_exponent: cli.global.tolerance_exponent,
        output_format: cli.global.format,
        orbit_rank_cap: cli.global.rank_cap,
    };
    let cfg = match Config::resolve(&flags, env_precision) {
        Ok(c) => c,
        Err(e) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    match execute(&cli.command, &cfg) {
        Ok(rep) => Outcome {
            code: if rep.ok { EXIT_OK } else { EXIT_FAILED },
            stdout: output::render(&rep.value, cfg.output_format),
            stderr: String::new(),
        },
        Err(CliError::Usage(m)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(CliError::Failed(m)) => Outcome {
            code: EXIT_FAILED,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
    }
}

fn execute(cmd: &Command, cfg: &Config) -> Result<Report, CliError> {
    match cmd {
        Command::Orbit { ty, rank, k, point } => cmd_orbit(*ty, *rank, *k, point.as_deref(), cfg),
        Command::HarmBasis { rank, degree, ty } => cmd_harm_basis(*rank, *degree, *ty),
        Command::CheckDesign { file, t_max, t } => cmd_check_design(file, *t_max, *t, cfg),
        Command::Fisher {
            rank,
            t,
            spheres,
            origin,
        } => cmd_fisher(*rank, *t, *spheres, *origin),
        Command::Classify { ty, n_max, t_max } => cmd_classify(*ty, *n_max, *t_max, cfg),
        Command::ReproduceTables { table, params } => cmd_reproduce(*table, params, cfg),
        Command::XuBuild {
            weight,
            moments,
            n,
            family,
        } => cmd_xu_build(weight, moments.as_deref(), *n, *family, cfg),
        Command::XuVerify {
            file,
            t,
            weight,
            moments,
        } => cmd_xu_verify(file, *t, weight, moments.as_deref(), cfg),
        Command::Molien { ty, rank, lmax } => cmd_molien(*ty, *rank, *lmax),
    }
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

fn parse_list(s: &str) -> Result<Vec<Scalar>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<Scalar>().map_err(usage))
        .collect()
}

fn cmd_orbit(
    ty: GroupType,
    rank: usize,
    k: Option<usize>,
    point: Option<&str>,
    cfg: &Config,
) -> Result<Report, CliError> {
    let g = ReflectionGroup::new(ty, rank).map_err(usage)?;
    let x = match (k, point) {
        (Some(k), None) => corner_vector(ty, rank, k).map_err(usage)?.unit,
        (None, Some(p)) => parse_list(p)?,
        _ => return Err(CliError::Usage("give exactly one of --k or --point".into())),
    };
    let o = orbit_capped(&g, &x, cfg.orbit_rank_cap).map_err(usage)?;
    let mut all: Vec<Scalar> = o.points.iter().flatten().cloned().collect();
    all.push(o.norm_sq.clone());
    Ok(Report::ok(json!({
        "command": "orbit",
        "type": ty,
        "rank": rank,
        "representative": strings(&o.representative),
        "norm_sq": o.norm_sq,
        "size": o.size(),
        "points": o.points.iter().map(|p| strings(p)).collect::<Vec<_>>(),
        "mode": mode_tag(&all),
    })))
}

fn cmd_harm_basis(rank: usize, degree: u32, ty: Option<GroupType>) -> Result<Report, CliError> {
    let polys = match ty {
        Some(ty) => {
            let g = ReflectionGroup::new(ty, rank).map_err(usage)?;
            invariant_harm_basis(&g, degree)
                .map_err(|e| CliError::Failed(e.to_string()))?
                .polys
        }
        None => {
            if rank == 0 {
                return Err(CliError::Usage("rank must be positive".into()));
            }
            harm_basis(rank, degree)
        }
    };
    let coeffs: Vec<Scalar> = polys
        .iter()
        .flat_map(|p| p.terms().values().cloned())
        .collect();
    Ok(Report::ok(json!({
        "command": "harm-basis",
        "type": ty,
        "rank": rank,
        "degree": degree,
        "dimension": polys.len(),
        "basis": polys.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "mode": mode_tag(&coeffs),
    })))
}

/// A design file: corner shells of a group, or explicit points.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DesignFile {
    Corners {
        #[serde(rename = "type")]
        ty: GroupType,
        rank: usize,
        shells: Vec<CornerShell>,
        origin_weight: Option<Scalar>,
    },
    Points {
        points: Vec<Vec<Scalar>>,
        weights: Vec<Scalar>,
        #[serde(rename = "type")]
        ty: Option<GroupType>,
        rank: Option<usize>,
    },
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn strength_json(r: &StrengthReport) -> Value {
    json!({ "method": r.method, "t_certified": r.t_certified })
}

fn cmd_check_design(
    path: &Path,
    t_max: u32,
    want: Option<u32>,
    cfg: &Config,
) -> Result<Report, CliError> {
    let file: DesignFile = read_json(path)?;
    let (x, g) = match file {
        DesignFile::Corners {
            ty,
            rank,
            shells,
            origin_weight,
        } => {
            let g = ReflectionGroup::new(ty, rank).map_err(usage)?;
            let mut x =
                WeightedDesign::from_corners_with_precision(&g, &shells, cfg.precision_bits)
                    .map_err(usage)?;
            if let Some(w) = origin_weight {
                x = x.with_origin(w).map_err(usage)?;
            }
            (x, Some(g))
        }
        DesignFile::Points {
            points,
            weights,
            ty,
            rank,
        } => {
            let g = match (ty, rank) {
                (Some(ty), Some(n)) => Some(ReflectionGroup::new(ty, n).map_err(usage)?),
                (None, None) => None,
                _ => {
                    return Err(CliError::Usage(
                        "give both type and rank, or neither".into(),
                    ))
                }
            };
            (
                WeightedDesign::from_points(points, weights).map_err(usage)?,
                g,
            )
        }
    };
    let failed = |e: orbit_designs::designs::DesignError| CliError::Failed(e.to_string());
    let mut reports = vec![
        strength_full(&x, t_max).map_err(failed)?,
        strength_direct(&x, t_max).map_err(failed)?,
    ];
    if let Some(g) = &g {
        reports.insert(0, strength_invariant(&x, g, t_max).map_err(failed)?);
    }
    let t = reports[0].t_certified;
    let agree = reports.iter().all(|r| r.t_certified == t);
    let tight = is_tight(&x, None, t).map_err(failed)?;
    let reached = want.is_none_or(|w| t >= w);
    let weights: Vec<Scalar> = x.points().map(|(_, w)| w.clone()).collect();
    let coords: Vec<Scalar> = x
        .points()
        .flat_map(|(p, _)| p.iter().cloned())
        .chain(weights)
        .collect();
    Ok(Report {
        ok: agree && reached,
        value: json!({
            "command": "check-design",
            "rank": x.n,
            "size": x.size(),
            "spheres": x.shell_meta().p,
            "t_max": t_max,
            "t_certified": t,
            "methods": reports.iter().map(strength_json).collect::<Vec<_>>(),
            "methods_agree": agree,
            "required_t": want,
            "tightness": tight,
            "mode": mode_tag(&coords),
        }),
    })
}

fn cmd_fisher(rank: usize, t: u32, spheres: usize, origin: bool) -> Result<Report, CliError> {
    if rank == 0 || spheres == 0 {
        return Err(CliError::Usage("rank and spheres must be positive".into()));
    }
    let meta = ShellMeta {
        p: spheres,
        eps_s: origin,
        origin_in_x: origin,
    };
    Ok(Report::ok(json!({
        "command": "fisher",
        "rank": rank,
        "t": t,
        "spheres": spheres,
        "origin": origin,
        "bound": fisher_bound(rank, t, &meta).to_string(),
        "mode": "rational",
    })))
}

fn cmd_classify(ty: GroupType, n_max: usize, t_max: u32, cfg: &Config) -> Result<Report, CliError> {
    if n_max < ty.min_rank() {
        return Err(CliError::Usage(format!(
            "n-max must be at least {} for type {ty}",
            ty.min_rank()
        )));
    }
    let rows = classify_with_precision(ty, n_max, t_max, cfg.precision_bits)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let values: Vec<Scalar> = rows
        .iter()
        .flat_map(|r| {
            r.sample
                .radii_sq
                .iter()
                .chain(&r.sample.weights)
                .map(|(_, v)| v.clone())
        })
        .collect();
    Ok(Report::ok(json!({
        "command": "classify",
        "type": ty,
        "n_max": n_max,
        "t_max": t_max,
        "count": rows.len(),
        "rows": rows,
        "mode": mode_tag(&values),
    })))
}

fn cmd_reproduce(table: u8, params: &[Scalar], cfg: &Config) -> Result<Report, CliError> {
    let rows = table_instances(table, (!params.is_empty()).then_some(params));
    let mut certs = Vec::with_capacity(rows.len());
    for row in &rows {
        let c = certify_instance(row, cfg.precision_bits)
            .map_err(|e| CliError::Failed(format!("{}: {e}", row.label())))?;
        certs.push(c);
    }
    let ok = certs.iter().all(|c| c.pass);
    let mode = if certs.iter().all(|c| c.exact) {
        "exact"
    } else {
        "float"
    };
    Ok(Report {
        ok,
        value: json!({
            "command": "reproduce-tables",
            "table": table,
            "count": certs.len(),
            "failed": certs.iter().filter(|c| !c.pass).map(|c| c.label.clone()).collect::<Vec<_>>(),
            "rows": certs,
            "mode": mode,
        }),
    })
}

fn weight_from(name: &str, moments: Option<&str>) -> Result<RadialWeight, CliError> {
    match (name, moments) {
        (_, Some(m)) => RadialWeight::custom(parse_list(m)?).map_err(usage),
        ("gaussian", None) => Ok(RadialWeight::Gaussian),
        ("unit_disk" | "unit-disk", None) => Ok(RadialWeight::UnitDisk),
        ("custom", None) => Err(CliError::Usage("a custom weight needs --moments".into())),
        (other, None) => Err(CliError::Usage(format!("unknown weight {other}"))),
    }
}

fn xu_config(cfg: &Config) -> XuConfig {
    XuConfig {
        prec: cfg.precision_bits,
        tol: tolerance_from_bits(cfg.tolerance_exponent, cfg.precision_bits),
    }
}

fn formula_values(f: &XuFormula) -> Vec<Scalar> {
    f.lambda
        .iter()
        .chain(&f.r)
        .chain(&f.lambda0)
        .cloned()
        .collect()
}

fn cmd_xu_build(
    weight: &str,
    moments: Option<&str>,
    n: usize,
    family: Family,
    cfg: &Config,
) -> Result<Report, CliError> {
    let w = weight_from(weight, moments)?;
    let xc = xu_config(cfg);
    match xu::solve_moment_system_with(&w, n, family, &xc) {
        Ok(f) => {
            let cond = xu::verify_conditions_with(&f, &w, &xc)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            let deg = xu::verify_degree_with(&f, &w, f.degree(), &xc)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            Ok(Report {
                ok: cond.pass && deg.pass,
                value: json!({
                    "command": "xu-build",
                    "weight": w.name(),
                    "formula": f,
                    "degree": f.degree(),
                    "points": xu::build_points(&f).len(),
                    "conditions_pass": cond.pass,
                    "degree_pass": deg.pass,
                    "mode": mode_tag(&formula_values(&f)),
                }),
            })
        }
        Err(e @ xu::XuError::NoPositiveSolution { .. }) => Ok(Report {
            ok: false,
            value: json!({
                "command": "xu-build",
                "weight": w.name(),
                "n": n,
                "family": family,
                "error": e.to_string(),
                "mode": "float",
            }),
        }),
        Err(e) => Err(usage(e)),
    }
}

fn cmd_xu_verify(
    path: &Path,
    t: Option<u32>,
    weight: &str,
    moments: Option<&str>,
    cfg: &Config,
) -> Result<Report, CliError> {
    let f: XuFormula = read_json(path)?;
    let w = weight_from(weight, moments)?;
    let xc = xu_config(cfg);
    let t = t.unwrap_or(f.degree());
    let cond = xu::verify_conditions_with(&f, &w, &xc).map_err(usage)?;
    let deg =
        xu::verify_degree_with(&f, &w, t, &xc).map_err(|e| CliError::Failed(e.to_string()))?;
    let failing_monomials: Vec<(u32, u32)> = deg
        .monomials
        .iter()
        .filter(|m| !m.vanishes)
        .map(|m| (m.a, m.b))
        .collect();
    let at_theorem_degree = t == f.degree();
    Ok(Report {
        ok: deg.pass && (!at_theorem_degree || cond.pass),
        value: json!({
            "command": "xu-verify",
            "weight": w.name(),
            "family": f.family,
            "n": f.n,
            "t": t,
            "conditions": cond,
            "degree_pass": deg.pass,
            "failing_monomials": failing_monomials,
            "monomials_checked": deg.monomials.len(),
            "invariants_checked": deg.invariants.len(),
            "mode": mode_tag(&formula_values(&f)),
        }),
    })
}

fn cmd_molien(ty: GroupType, rank: usize, lmax: usize) -> Result<Report, CliError> {
    let g = ReflectionGroup::new(ty, rank).map_err(usage)?;
    Ok(Report::ok(json!({
        "command": "molien",
        "type": ty,
        "rank": rank,
        "lmax": lmax,
        "exponents": g.exponents,
        "coefficients": molien_dims(&g, lmax),
        "mode": "rational",
    })))
}
