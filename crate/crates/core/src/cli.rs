//! Command-line front end: `frankel`, `decompose`, `check`, `sweep` and
//! `mesh-info` subcommands, deterministic JSON/CSV report files, and the
//! exit-code contract (0 Hamiltonian / 2 non-Hamiltonian / 3 indeterminate /
//! 64 config errors / 1 internal errors).

use crate::config::{
    CaseConfig, CriteriaToggles, EndConfig, GridConfig, ProfileConfig, RMax, Tolerances,
    WeightConfig,
};
use crate::criteria::{
    self, CriterionReport, DashboardCase, DashboardReport, EndModel, RadialSource,
};
use crate::dec::{self, Cochain, MeshComplex};
use crate::error::{Error, Result};
use crate::frankel::{self, FrankelReport, PipelineParams};
use crate::geometry::{CompatibleTriple, Profile, WeightFamily, WeightSpec};
use crate::hodge;
use crate::report::{csv_f64, csv_line, Json};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_NON_HAMILTONIAN: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_CONFIG: i32 = 64;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "FRANKEL_LAB_THREADS";

#[derive(Parser)]
#[command(
    name = "frankel-lab",
    about = "Weighted Hodge decomposition on rotationally symmetric surfaces: \
             momentum-map recovery and asymptotic criteria checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the momentum-map pipeline and classify the action.
    Frankel(FrankelArgs),
    /// Hodge-decompose a named closed 1-form and export the split.
    Decompose(DecomposeArgs),
    /// Run the asymptotic criteria checkers and the hypothesis dashboard.
    Check(CheckArgs),
    /// Run a matrix of checker cases in parallel and aggregate one CSV.
    Sweep(SweepArgs),
    /// Build a mesh and print its invariants; optionally serialize it.
    MeshInfo(MeshInfoArgs),
}

#[derive(Args)]
struct CaseFlags {
    /// Profile family, e.g. plane, sinh, hyperbolic:2, cylinder,
    /// decaying:1.0, torus
    #[arg(long)]
    profile: Option<String>,
    /// Weight family: none, gauss:C, poly:A, loggrowth
    #[arg(long, default_value = "none")]
    weight: String,
    /// Grid shape n_r x n_theta, e.g. 128x64
    #[arg(long)]
    grid: Option<String>,
    /// Truncation radius, a number or `auto` (tail-mass rule)
    #[arg(long, default_value = "auto")]
    r_max: String,
}

impl CaseFlags {
    fn to_config(&self, tol_h: f64, generator: &str) -> Result<CaseConfig> {
        let profile = ProfileConfig::parse(self.profile.as_deref().ok_or_else(|| {
            Error::Config("missing --profile (or use --config)".into())
        })?)?;
        let (n_r, n_theta) =
            GridConfig::parse_shape(self.grid.as_deref().unwrap_or("64x64"))?;
        let r_max = if self.r_max == "auto" {
            RMax::auto()
        } else {
            RMax::Value(self.r_max.parse::<f64>().map_err(|_| {
                Error::Config(format!("--r-max must be a number or auto, got {:?}", self.r_max))
            })?)
        };
        Ok(CaseConfig {
            profile,
            weight: WeightConfig::parse(&self.weight)?,
            topology: None,
            grid: GridConfig { n_r, n_theta, r_max },
            tolerances: Tolerances {
                tol_h,
                ..Tolerances::default()
            },
            criteria: CriteriaToggles::default(),
            end: None,
            generator: generator.to_string(),
            r_range: (1.0, 100.0),
            out_dir: None,
        })
    }
}

#[derive(Args)]
struct FrankelArgs {
    #[command(flatten)]
    case: CaseFlags,
    /// Full case configuration file (JSON); mutually exclusive with
    /// --profile
    #[arg(long, conflicts_with = "profile")]
    config: Option<PathBuf>,
    /// Harmonic-residual tolerance for the verdict
    #[arg(long, default_value_t = frankel::DEFAULT_TOL_H)]
    tol_h: f64,
    /// Action generator: theta1 (rotation) or theta2 (second torus angle)
    #[arg(long, default_value = "theta1")]
    xi: String,
    /// Output directory for report files
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    case: CaseFlags,
    /// Which closed 1-form to split: i-xi-omega, dtheta, dr, d-rsq
    #[arg(long, default_value = "i-xi-omega")]
    form: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    /// Profile family (surface checks)
    #[arg(long)]
    profile: Option<String>,
    /// End model (radial checks): cylindrical, conic:N, fibered:K,L, qac:N[,C]
    #[arg(long)]
    end: Option<String>,
    /// Weight family
    #[arg(long, default_value = "none")]
    weight: String,
    /// Radial range LO:HI for the tail fits
    #[arg(long, default_value = "1:100")]
    r_range: String,
    /// Ricci lower-bound input κ₁ for end models
    #[arg(long, default_value_t = 0.0)]
    ricci_lower: f64,
    /// Curvature-operator upper-bound input κ₂ for end models
    #[arg(long, default_value_t = 0.0)]
    curv_upper: f64,
    /// Optional grid n_r x n_theta for the J-invariance measurement
    #[arg(long)]
    grid: Option<String>,
    /// Truncation radius for the J-invariance grid
    #[arg(long, default_value = "auto")]
    r_max: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep matrix file (JSON: {"cases": [{"id": ..., ...}, ...]})
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct MeshInfoArgs {
    #[command(flatten)]
    case: CaseFlags,
    /// Write the full mesh + operators to this file (documented JSON schema)
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Frankel(args) => cmd_frankel(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Check(args) => cmd_check(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::MeshInfo(args) => cmd_mesh_info(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Profile(_) | Error::Criterion(_) => EXIT_CONFIG,
                _ => EXIT_INTERNAL,
            }
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn cmd_frankel(args: FrankelArgs) -> Result<i32> {
    let config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let mut cfg = CaseConfig::from_json(&text)?;
            if cfg.out_dir.is_none() {
                cfg.out_dir = Some(args.out.to_string_lossy().into_owned());
            }
            cfg
        }
        None => {
            let mut cfg = args.case.to_config(args.tol_h, &args.xi)?;
            cfg.out_dir = Some(args.out.to_string_lossy().into_owned());
            cfg
        }
    };
    let case = config.resolve()?;
    let triple = CompatibleTriple::standard(case.profile);
    let params = PipelineParams {
        n_r: case.n_r,
        n_theta: case.n_theta,
        r_max: case.r_max,
        tol_h: case.tolerances.tol_h,
        spectral_rel_threshold: case.tolerances.spectral_rel_threshold,
        generator: case.generator,
    };
    let report = frankel::run_frankel(&triple, &case.weight, &params)?;

    let out_dir = PathBuf::from(config.out_dir.as_deref().unwrap_or("."));
    let doc = frankel_report_json(&config, &case.profile, &case.weight, &report);
    write_file(&out_dir, "frankel_report.json", &doc.render())?;

    // momentum and basis exports need the mesh coordinates
    let mesh = MeshComplex::build(report.topology, report.n_r, report.n_theta, report.r_max)?;
    if let Some(mu) = &report.momentum {
        write_file(
            &out_dir,
            "momentum.csv",
            &momentum_csv(&mesh, &case.profile, mu),
        )?;
    }
    write_file(
        &out_dir,
        "harmonic_basis.csv",
        &basis_csv(&mesh, &report.basis.basis),
    )?;

    println!(
        "verdict: {} (rho = {:.3e}, tol_h = {:.1e}); reports in {}",
        report.verdict.name(),
        report.harmonic_residual,
        report.tol_h,
        out_dir.display()
    );
    eprintln!("runtime: {:.2}s", report.runtime_seconds);
    Ok(report.verdict.exit_code())
}

fn cmd_decompose(args: DecomposeArgs) -> Result<i32> {
    let config = args.case.to_config(frankel::DEFAULT_TOL_H, "theta1")?;
    let case = config.resolve()?;
    let triple = CompatibleTriple::standard(case.profile);
    let (mesh, mass) =
        frankel::build_case_mesh(&triple, &case.weight, case.n_r, case.n_theta, case.r_max)?;
    let alpha = match args.form.as_str() {
        "i-xi-omega" => frankel::sample_generator_flux(&mesh, &triple, case.generator)?,
        "dtheta" => dec::sample_oneform(&mesh, |_, _| 0.0, |_, _| 1.0),
        "dr" => dec::sample_oneform(&mesh, |_, _| 1.0, |_, _| 0.0),
        "d-rsq" => {
            let r2 = dec::sample_function(&mesh, |r, _| r * r);
            dec::d(&mesh, &r2)?
        }
        other => {
            return Err(Error::Config(format!(
                "unknown form {other:?} (expected i-xi-omega, dtheta, dr, d-rsq)"
            )))
        }
    };
    let split = hodge::hodge_decompose(&mesh, &mass, &alpha)?;
    let doc = split_json(&config, &split);
    write_file(&args.out, "hodge_split.json", &doc.render())?;
    write_file(
        &args.out,
        "potential.csv",
        &dec::serial::cochain_to_csv(&split.potential.values),
    )?;
    write_file(
        &args.out,
        "exact_part.csv",
        &dec::serial::cochain_to_csv(&split.exact_part.values),
    )?;
    write_file(
        &args.out,
        "harmonic_part.csv",
        &dec::serial::cochain_to_csv(&split.harmonic_part.values),
    )?;
    println!(
        "harmonic residual rho = {:.6e}; reports in {}",
        split.harmonic_ratio(),
        args.out.display()
    );
    Ok(EXIT_OK)
}

fn parse_r_range(text: &str) -> Result<(f64, f64)> {
    let bad = || Error::Config(format!("r-range must look like 1:100, got {text:?}"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo = lo.parse::<f64>().map_err(|_| bad())?;
    let hi = hi.parse::<f64>().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Gathers every criterion applicable to a (profile?, end?, weight) case.
fn collect_check_reports(
    profile: Option<&Profile>,
    end: Option<&EndModel>,
    weight: &WeightSpec,
    r_range: (f64, f64),
    ricci_lower: f64,
    curv_upper: f64,
    toggles: &CriteriaToggles,
) -> Result<Vec<CriterionReport>> {
    let mut out = Vec::new();
    if let Some(p) = profile {
        if p.kind() == crate::geometry::ProfileKind::PlaneLike && !weight.is_proper() {
            if toggles.troyanov {
                out.push(criteria::troyanov_check(p, r_range)?);
            }
            if toggles.mckean {
                out.push(criteria::mckean_contrast(p, r_range)?);
            }
        }
        if weight.is_proper() && toggles.gong_wang {
            out.extend(criteria::gong_wang_check(
                RadialSource::Surface(p),
                weight,
                r_range,
                0.0,
            )?);
        }
    }
    if let Some(e) = end {
        if let WeightFamily::Power { a } = weight.family() {
            if toggles.ahmed_stroock {
                out.extend(criteria::ahmed_stroock_check(
                    e,
                    a,
                    r_range,
                    ricci_lower,
                    curv_upper,
                )?);
            }
        }
        if weight.is_proper() && toggles.gong_wang {
            out.extend(criteria::gong_wang_check(
                RadialSource::End(e),
                weight,
                r_range,
                ricci_lower,
            )?);
        }
    }
    if out.is_empty() {
        return Err(Error::Config(
            "no applicable criteria: give a plane-like profile (unweighted), a weighted \
             profile, or an end model with a poly weight"
                .into(),
        ));
    }
    Ok(out)
}

fn cmd_check(args: CheckArgs) -> Result<i32> {
    if args.profile.is_none() && args.end.is_none() {
        return Err(Error::Config("give --profile and/or --end".into()));
    }
    let profile = args
        .profile
        .as_deref()
        .map(|t| ProfileConfig::parse(t)?.build())
        .transpose()?;
    let end = args
        .end
        .as_deref()
        .map(|t| EndConfig::parse(t)?.build())
        .transpose()?;
    let weight = WeightConfig::parse(&args.weight)?.build()?;
    let r_range = parse_r_range(&args.r_range)?;
    let reports = collect_check_reports(
        profile.as_ref(),
        end.as_ref(),
        &weight,
        r_range,
        args.ricci_lower,
        args.curv_upper,
        &CriteriaToggles::default(),
    )?;

    let mut csv = criterion_csv_header(&[]);
    for rep in &reports {
        csv.push_str(&criterion_csv_row(&[], rep));
    }
    write_file(&args.out, "criteria.csv", &csv)?;

    // dashboard needs a profile for the generator-norm diagnostic
    if let Some(p) = profile {
        let grid = args
            .grid
            .as_deref()
            .map(|g| -> Result<(usize, usize, f64)> {
                let (n_r, n_theta) = GridConfig::parse_shape(g)?;
                let r_max = if args.r_max == "auto" {
                    RMax::auto().resolve(&p, &weight)?
                } else {
                    args.r_max
                        .parse::<f64>()
                        .map_err(|_| Error::Config("bad --r-max".into()))?
                };
                Ok((n_r, n_theta, r_max))
            })
            .transpose()?;
        let dash = criteria::hypothesis_dashboard(&DashboardCase {
            profile: p,
            weight,
            end,
            r_range,
            grid,
            ricci_lower: args.ricci_lower,
            curv_op_upper: args.curv_upper,
        })?;
        write_file(&args.out, "dashboard.json", &dashboard_json(&dash).render())?;
        println!("hypotheses satisfied: {}; {}", dash.status.name(), dash.summary);
    } else {
        let pass = reports.iter().filter(|r| r.verdict.passed()).count();
        println!("{pass}/{} criteria pass; criteria.csv written", reports.len());
    }
    Ok(EXIT_OK)
}

/// One sweep entry: a named checker case in compact spec-string form.
#[derive(Debug, serde::Serialize, serde::Deserialize)]
struct SweepCase {
    id: String,
    #[serde(default)]
    profile: Option<String>,
    #[serde(default)]
    end: Option<String>,
    #[serde(default)]
    weight: Option<String>,
    #[serde(default)]
    r_range: Option<(f64, f64)>,
    #[serde(default)]
    ricci_lower: Option<f64>,
    #[serde(default)]
    curv_op_upper: Option<f64>,
}

#[derive(Debug, serde::Serialize, serde::Deserialize)]
struct SweepConfig {
    cases: Vec<SweepCase>,
}

fn run_sweep_case(case: &SweepCase) -> Result<Vec<CriterionReport>> {
    let profile = case
        .profile
        .as_deref()
        .map(|t| ProfileConfig::parse(t)?.build())
        .transpose()?;
    let end = case
        .end
        .as_deref()
        .map(|t| EndConfig::parse(t)?.build())
        .transpose()?;
    let weight = match case.weight.as_deref() {
        Some(w) => WeightConfig::parse(w)?.build()?,
        None => WeightSpec::zero(),
    };
    collect_check_reports(
        profile.as_ref(),
        end.as_ref(),
        &weight,
        case.r_range.unwrap_or((1.0, 100.0)),
        case.ricci_lower.unwrap_or(0.0),
        case.curv_op_upper.unwrap_or(0.0),
        &CriteriaToggles::default(),
    )
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&args.config)?;
    let sweep: SweepConfig = serde_json::from_str(&text).map_err(|e| {
        Error::Config(format!(
            "sweep config parse error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(
            std::env::var(THREADS_ENV)
                .ok()
                .and_then(|v| v.parse::<usize>().ok())
                .unwrap_or(0),
        )
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    use rayon::prelude::*;
    let mut results: Vec<(String, std::result::Result<Vec<CriterionReport>, String>)> = pool
        .install(|| {
            sweep
                .cases
                .par_iter()
                .map(|case| {
                    (
                        case.id.clone(),
                        run_sweep_case(case).map_err(|e| e.to_string()),
                    )
                })
                .collect()
        });
    // deterministic row order: lexicographic case key, then criterion id
    results.sort_by(|a, b| a.0.cmp(&b.0));

    let mut csv = criterion_csv_header(&["case_id"]);
    for (id, outcome) in &results {
        match outcome {
            Ok(reports) => {
                let mut reports: Vec<&CriterionReport> = reports.iter().collect();
                reports.sort_by(|a, b| a.id.cmp(&b.id));
                for rep in reports {
                    csv.push_str(&criterion_csv_row(&[id.clone()], rep));
                }
            }
            Err(msg) => {
                // in-row failure: the sweep continues
                let mut fields = vec![id.clone(), "error".into()];
                fields.extend(std::iter::repeat(String::new()).take(CRITERION_COLUMNS - 2));
                fields.push(msg.clone());
                csv.push_str(&csv_line(&fields));
            }
        }
    }
    write_file(&args.out, "sweep.csv", &csv)?;
    println!("{} case(s) swept; sweep.csv written", results.len());
    Ok(EXIT_OK)
}

fn cmd_mesh_info(args: MeshInfoArgs) -> Result<i32> {
    let config = args.case.to_config(frankel::DEFAULT_TOL_H, "theta1")?;
    let case = config.resolve()?;
    let triple = CompatibleTriple::standard(case.profile);
    let (mesh, mass) =
        frankel::build_case_mesh(&triple, &case.weight, case.n_r, case.n_theta, case.r_max)?;
    println!("topology: {}", mesh.topology.name());
    println!("grid: {} x {} (r_max = {})", mesh.n_r, mesh.n_theta, mesh.r_max);
    println!(
        "cells: {} vertices, {} edges ({} radial, {} angular), {} faces",
        mesh.n_vertices(),
        mesh.n_edges(),
        mesh.n_radial_edges(),
        mesh.n_angular_edges(),
        mesh.n_faces()
    );
    println!("euler characteristic: {}", mesh.euler_characteristic());
    println!("composite incidence d1 d0 = 0: {}", mesh.d1_after_d0_is_zero());
    let total_mass: f64 = mass.m0.iter().sum();
    println!("total measure: {total_mass:.12e}");
    match mass.tail_estimate {
        Some(t) => println!("truncation tail: {t:.3e} (warning: {})", mass.tail_warning),
        None => println!("truncation tail: n/a (weight not proper)"),
    }
    if let Some(path) = &args.json {
        let doc = dec::serial::mesh_to_json(&mesh, &mass);
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(path, doc.render())?;
        println!("mesh json written to {}", path.display());
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// report rendering

/// Columns after the optional prefix: criterion id through note.
const CRITERION_COLUMNS: usize = 17;

fn criterion_csv_header(prefix: &[&str]) -> String {
    let mut fields: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
    for name in [
        "criterion", "verdict", "boundary", "reliable", "r_lo", "r_hi", "witness_r", "C",
        "theta", "eps", "B", "kappa1", "kappa2", "k", "a", "extra", "note",
    ] {
        fields.push(name.into());
    }
    csv_line(&fields)
}

fn criterion_csv_row(prefix: &[String], rep: &CriterionReport) -> String {
    let mut fields: Vec<String> = prefix.to_vec();
    fields.push(rep.id.clone());
    fields.push(rep.verdict.name().into());
    fields.push(rep.boundary.to_string());
    fields.push(rep.reliable.to_string());
    fields.push(csv_f64(rep.r_range.0));
    fields.push(csv_f64(rep.r_range.1));
    fields.push(rep.witness_r.map(csv_f64).unwrap_or_default());
    let mut extra = Vec::new();
    let mut named = [None::<f64>; 8];
    const NAMED_KEYS: [&str; 8] = ["C", "theta", "eps", "B", "kappa1", "kappa2", "k", "a"];
    for (key, value) in &rep.constants {
        match NAMED_KEYS.iter().position(|k| k == key) {
            Some(i) => named[i] = Some(*value),
            None => extra.push(format!("{key}={}", csv_f64(*value))),
        }
    }
    for v in named {
        fields.push(v.map(csv_f64).unwrap_or_default());
    }
    fields.push(extra.join(";"));
    fields.push(rep.note.clone());
    csv_line(&fields)
}

fn case_json(config: &CaseConfig, profile: &Profile, weight: &WeightSpec) -> Json {
    Json::Obj(vec![
        ("profile", Json::Str(profile.family_name())),
        ("weight", Json::Str(weight.family_name())),
        ("generator", Json::Str(config.generator.clone())),
        (
            "grid",
            Json::Obj(vec![
                ("n_r", Json::Int(config.grid.n_r as i64)),
                ("n_theta", Json::Int(config.grid.n_theta as i64)),
            ]),
        ),
        ("tol_h", Json::Num(config.tolerances.tol_h)),
        (
            "spectral_rel_threshold",
            Json::Num(config.tolerances.spectral_rel_threshold),
        ),
    ])
}

fn split_summary_json(split: &crate::hodge::HodgeSplit) -> Json {
    Json::Obj(vec![
        (
            "norms",
            Json::Obj(vec![
                ("alpha", Json::Num(split.norms.alpha)),
                ("exact", Json::Num(split.norms.exact)),
                ("harmonic", Json::Num(split.norms.harmonic)),
            ]),
        ),
        (
            "residuals",
            Json::Obj(vec![
                ("closedness", Json::Num(split.residuals.closedness)),
                ("coclosedness", Json::Num(split.residuals.coclosedness)),
                ("orthogonality", Json::Num(split.residuals.orthogonality)),
                ("reconstruction", Json::Num(split.residuals.reconstruction)),
            ]),
        ),
        ("harmonic_residual", Json::Num(split.harmonic_ratio())),
        ("pythagoras_defect", Json::Num(split.pythagoras_defect())),
    ])
}

fn frankel_report_json(
    config: &CaseConfig,
    profile: &Profile,
    weight: &WeightSpec,
    report: &FrankelReport,
) -> Json {
    let step2: Vec<Json> = report
        .step2
        .iter()
        .map(|p| {
            Json::Obj(vec![
                ("variance", Json::Num(p.variance)),
                ("mean", Json::Num(p.mean)),
                (
                    "apex_value",
                    p.apex_value.map(Json::Num).unwrap_or(Json::Null),
                ),
                ("pairing", Json::Num(p.pairing)),
            ])
        })
        .collect();
    Json::Obj(vec![
        ("schema", Json::Str("frankel-lab/frankel-report/v1".into())),
        ("case", case_json(config, profile, weight)),
        ("topology", Json::Str(report.topology.name().into())),
        ("r_max", Json::Num(report.r_max)),
        (
            "step1_invariance_defect",
            Json::Num(report.step1_invariance_defect),
        ),
        ("step2_pairings", Json::Arr(step2)),
        (
            "harmonic_space",
            Json::Obj(vec![
                ("dimension", Json::Int(report.basis.dimension as i64)),
                (
                    "retained_eigenvalues",
                    Json::Arr(
                        report
                            .basis
                            .retained_eigenvalues
                            .iter()
                            .map(|&v| Json::Num(v))
                            .collect(),
                    ),
                ),
                (
                    "smallest_discarded",
                    Json::Num(report.basis.smallest_discarded),
                ),
                (
                    "largest_retained",
                    report
                        .basis
                        .largest_retained
                        .map(Json::Num)
                        .unwrap_or(Json::Null),
                ),
                ("gap_ratio", Json::Num(report.basis.gap_ratio)),
                ("lambda_max", Json::Num(report.basis.lambda_max)),
                ("threshold", Json::Num(report.basis.threshold)),
                ("ambiguous", Json::Bool(report.basis.ambiguous)),
            ]),
        ),
        ("step3_split", split_summary_json(&report.split)),
        ("verdict", Json::Str(report.verdict.name().into())),
        (
            "momentum",
            Json::Obj(vec![
                ("recovered", Json::Bool(report.momentum.is_some())),
                (
                    "rel_error_vs_analytic",
                    report
                        .momentum_rel_error
                        .map(Json::Num)
                        .unwrap_or(Json::Null),
                ),
                (
                    "gauge",
                    Json::Str(
                        if report.fixed_point_present {
                            "apex-zero"
                        } else {
                            "mean-zero"
                        }
                        .into(),
                    ),
                ),
            ]),
        ),
        (
            "xi_norm_sq",
            Json::Obj(vec![
                ("mesh", Json::Num(report.xi_norm_sq_mesh)),
                ("quadrature", Json::Num(report.xi_norm_sq_quad)),
                ("divergent", Json::Bool(report.xi_norm_divergent)),
            ]),
        ),
        ("fixed_point_present", Json::Bool(report.fixed_point_present)),
        ("tail_warning", Json::Bool(report.tail_warning)),
    ])
}

fn split_json(config: &CaseConfig, split: &crate::hodge::HodgeSplit) -> Json {
    let profile = config.profile.build().expect("validated earlier");
    let weight = config.weight.build().expect("validated earlier");
    Json::Obj(vec![
        ("schema", Json::Str("frankel-lab/hodge-split/v1".into())),
        ("case", case_json(config, &profile, &weight)),
        ("split", split_summary_json(split)),
    ])
}

fn dashboard_json(dash: &DashboardReport) -> Json {
    let criteria: Vec<Json> = dash
        .criteria
        .iter()
        .map(|c| {
            Json::Obj(vec![
                ("id", Json::Str(c.id.clone())),
                ("verdict", Json::Str(c.verdict.name().into())),
                ("boundary", Json::Bool(c.boundary)),
                ("reliable", Json::Bool(c.reliable)),
                (
                    "constants",
                    Json::Obj(
                        c.constants
                            .iter()
                            .map(|(k, v)| (*k, Json::Num(*v)))
                            .collect(),
                    ),
                ),
                (
                    "witness_r",
                    c.witness_r.map(Json::Num).unwrap_or(Json::Null),
                ),
                ("note", Json::Str(c.note.clone())),
            ])
        })
        .collect();
    Json::Obj(vec![
        ("schema", Json::Str("frankel-lab/dashboard/v1".into())),
        ("family", Json::Str(dash.family.clone())),
        ("xi_norm_finite", Json::Bool(dash.xi_norm_finite)),
        (
            "xi_norm_estimate",
            dash.xi_norm_estimate.map(Json::Num).unwrap_or(Json::Null),
        ),
        ("criteria", Json::Arr(criteria)),
        (
            "j_invariance_defect",
            dash.j_defect.map(Json::Num).unwrap_or(Json::Null),
        ),
        (
            "harmonic_dimension",
            dash.harmonic_dimension
                .map(|d| Json::Int(d as i64))
                .unwrap_or(Json::Null),
        ),
        ("hypotheses_satisfied", Json::Str(dash.status.name().into())),
        ("recommend_pipeline", Json::Bool(dash.recommend_pipeline)),
        ("summary", Json::Str(dash.summary.clone())),
    ])
}

fn momentum_csv(mesh: &MeshComplex, profile: &Profile, mu: &Cochain) -> String {
    let mut out = csv_line(&[
        "vertex_id".into(),
        "r".into(),
        "theta".into(),
        "mu".into(),
        "mu_analytic".into(),
    ]);
    for v in 0..mesh.n_vertices() {
        let r = mesh.vertex_radius(v);
        out.push_str(&csv_line(&[
            v.to_string(),
            csv_f64(r),
            csv_f64(mesh.vertex_theta(v)),
            csv_f64(mu.values[v]),
            csv_f64(profile.momentum(r)),
        ]));
    }
    out
}

fn basis_csv(mesh: &MeshComplex, basis: &[Cochain]) -> String {
    let mut header = vec![
        "edge_id".to_string(),
        "kind".to_string(),
        "r_mid".to_string(),
        "theta_lo".to_string(),
    ];
    for k in 0..basis.len() {
        header.push(format!("chi_{k}"));
    }
    let mut out = csv_line(&header);
    for e in 0..mesh.n_edges() {
        let geom = mesh.edge_geometry(e);
        let mut fields = vec![
            e.to_string(),
            match geom.kind {
                dec::EdgeKind::Radial => "radial".to_string(),
                dec::EdgeKind::Angular => "angular".to_string(),
            },
            csv_f64(geom.r_mid()),
            csv_f64(geom.theta_lo),
        ];
        for chi in basis {
            fields.push(csv_f64(chi.values[e]));
        }
        out.push_str(&csv_line(&fields));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_range_parsing() {
        assert_eq!(parse_r_range("1:100").unwrap(), (1.0, 100.0));
        assert!(parse_r_range("5").is_err());
        assert!(parse_r_range("10:1").is_err());
        assert!(parse_r_range("-1:10").is_err());
    }

    #[test]
    fn criterion_csv_has_fixed_width() {
        let header = criterion_csv_header(&[]);
        assert_eq!(header.trim_end().split(',').count(), CRITERION_COLUMNS);
        let rep = criteria::troyanov_check(
            &Profile::decaying(1.0).unwrap(),
            (1.0, 100.0),
        )
        .unwrap();
        let row = criterion_csv_row(&[], &rep);
        assert_eq!(row.trim_end().split(',').count(), CRITERION_COLUMNS);
    }

    #[test]
    fn sweep_case_rows_match_header_width() {
        let case = SweepCase {
            id: "x".into(),
            profile: Some("decaying:1.0".into()),
            end: None,
            weight: None,
            r_range: None,
            ricci_lower: None,
            curv_op_upper: None,
        };
        let reports = run_sweep_case(&case).unwrap();
        assert!(!reports.is_empty());
    }
}
