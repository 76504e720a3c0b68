//! `clarke-kit` command-line front end.
//!
//! Every command writes one JSON report (stdout unless `--out`). Exit code
//! 0 means no error and no failed reference check; 1 means a reference
//! check or acceptance criterion failed; 2 means the run errored.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use clarke_kit::convex::{caratheodory_reduce, distance_to_minkowski, FiniteCone};
use clarke_kit::density::{density_curve, density_scenario, density_scenarios};
use clarke_kit::epigraph::{run_scenario, scenarios, AccessibilityTrace};
use clarke_kit::function::{catalog, lookup, CatalogEntry};
use clarke_kit::parallel::{threads_from_env, with_threads};
use clarke_kit::report::{num, parse_list, parse_vector, parse_vectors, to_csv, vector_json, vectors_json, RunReport};
use clarke_kit::sampler::{
    assemble_estimate, build_cloud, hausdorff_vs_reference, test_stationarity, SamplingConfig,
    SubdifferentialEstimate, DEFAULT_HORIZON_THRESHOLD,
};
use clarke_kit::verify::{self, Tolerances};
use clarke_kit::Vector;

#[derive(Parser)]
#[command(name = "clarke-kit", version, about = "Sampled Clarke subdifferentials of catalog functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample gradients and assemble the trial set D_k.
    Estimate {
        #[command(flatten)]
        sample: SampleArgs,
        /// Allowed Hausdorff gap to a polyhedral reference.
        #[arg(long, default_value_t = 0.05)]
        hausdorff_tol: f64,
        /// Also write kept gradients as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Test whether 0 lies within `tol` of D_k.
    Stationarity {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// Distance from a vector to D_k.
    Distance {
        #[command(flatten)]
        sample: SampleArgs,
        /// Probe vector, e.g. `0.5,0`.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Proximal-normal traces of the shipped accessibility scenarios.
    Access {
        /// Scenario name; all scenarios when omitted.
        #[arg(long)]
        scenario: Option<String>,
    },
    /// Monte-Carlo volume fractions of a set in shrinking balls.
    Density {
        #[arg(long)]
        scenario: String,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long, default_value = "0.1,0.05,0.01")]
        radii: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write `index,radius,ratio,std_error` rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the acceptance criteria.
    Verify {
        /// Criterion names or ids, comma-separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// JSON file overriding tolerances.
        #[arg(long)]
        tolerances: Option<PathBuf>,
    },
    /// List catalog entries and scenarios.
    Catalog,
}

#[derive(Args)]
struct SampleArgs {
    /// Catalog function name.
    #[arg(long = "fn")]
    function: String,
    /// Base point; the entry's default center when omitted.
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    radius: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_HORIZON_THRESHOLD)]
    horizon_threshold: f64,
    /// Normal-cone generators replacing the catalog's, e.g. `-1,0;0,1`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "no_normals")]
    normals: Option<String>,
    /// Assemble without any normal-cone generators.
    #[arg(long)]
    no_normals: bool,
}

struct Sampled {
    entry: CatalogEntry,
    center: Vector,
    estimate: SubdifferentialEstimate,
    inputs: serde_json::Map<String, Value>,
}

impl SampleArgs {
    fn run(&self) -> Result<Sampled> {
        let entry = lookup(&self.function)?;
        let center = match &self.center {
            Some(s) => parse_vector(s)?,
            None => entry.default_center.clone(),
        };
        let dim = entry.function.dim();
        center.check_dim(dim)?;
        let (normals, source) = if self.no_normals {
            (FiniteCone::trivial(dim), "none")
        } else if let Some(s) = &self.normals {
            (FiniteCone::new(dim, parse_vectors(s)?)?, "override")
        } else {
            (entry.function.normals_at(&center), "catalog")
        };
        let mut config = SamplingConfig::new(self.radius, self.samples, self.seed);
        config.horizon_threshold = self.horizon_threshold;
        let cloud = build_cloud(&entry.function, &config, &center)?;
        let estimate = assemble_estimate(&cloud, &normals)?;
        let mut inputs = serde_json::Map::new();
        inputs.insert("fn".into(), json!(entry.name));
        inputs.insert("center".into(), vector_json(&center));
        inputs.insert("radius".into(), num(self.radius));
        inputs.insert("samples".into(), json!(self.samples));
        inputs.insert("seed".into(), json!(self.seed));
        inputs.insert("horizon_threshold".into(), num(self.horizon_threshold));
        inputs.insert("normals_source".into(), json!(source));
        inputs.insert("normals".into(), vectors_json(normals.generators()));
        Ok(Sampled { entry, center, estimate, inputs })
    }
}

fn axis_supports(est: &SubdifferentialEstimate) -> Result<Value> {
    let dim = est.dim();
    let mut out = serde_json::Map::new();
    for j in 0..dim {
        for sign in [1.0, -1.0] {
            let d = Vector::unit(dim, j).scale(sign);
            let key = format!("{}e{j}", if sign > 0.0 { "+" } else { "-" });
            out.insert(key, num(est.support(&d)?));
        }
    }
    Ok(Value::Object(out))
}

fn cmd_estimate(sample: &SampleArgs, hausdorff_tol: f64, csv: Option<&Path>) -> Result<RunReport> {
    let s = sample.run()?;
    let est = &s.estimate;
    let cloud = &est.cloud;
    if let Some(path) = csv {
        std::fs::write(path, to_csv(&cloud.kept_gradients)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut inputs = s.inputs;
    inputs.insert("hausdorff_tol".into(), num(hausdorff_tol));
    let hausdorff = match s.entry.reference_at(&s.center).filter(|r| r.polyhedral().is_some()) {
        Some(r) => Some(hausdorff_vs_reference(est, r, 64)?),
        None => None,
    };
    let outputs = json!({
        "kept": cloud.kept_gradients.len(),
        "horizon": cloud.horizon_directions.len(),
        "rejected_outside_domain": cloud.rejected_outside_domain,
        "rejected_nondifferentiable": cloud.rejected_nondifferentiable,
        "hull_vertices": vectors_json(est.set.hull().vertices()),
        "cone_generators": vectors_json(est.set.cone().generators()),
        "horizon_directions": vectors_json(&cloud.horizon_directions),
        "lifted_generators": vectors_json(&est.lifted_generators),
        "axis_support": axis_supports(est)?,
        "hausdorff_vs_reference": hausdorff.map_or(Value::Null, num),
    });
    let verdict = hausdorff.map(|h| h <= hausdorff_tol);
    Ok(RunReport::new("estimate", Value::Object(inputs), outputs, verdict))
}

fn cmd_stationarity(sample: &SampleArgs, tol: f64) -> Result<RunReport> {
    let s = sample.run()?;
    let mut inputs = s.inputs;
    inputs.insert("tol".into(), num(tol));
    let report = test_stationarity(&s.estimate, tol)?;
    let zero = Vector::zeros(s.center.dim());
    let expected = match s.entry.reference_at(&s.center) {
        Some(r) => Some(r.contains(&zero, 1e-9)?),
        None => None,
    };
    let outputs = json!({
        "distance_to_zero": num(report.distance_to_zero),
        "is_stationary": report.is_stationary,
        "witness": vector_json(&report.witness),
        "draws_used": report.draws_used,
        "reference_stationary": expected,
    });
    let verdict = expected.map(|e| e == report.is_stationary);
    Ok(RunReport::new("stationarity", Value::Object(inputs), outputs, verdict))
}

fn cmd_distance(sample: &SampleArgs, v: &str) -> Result<RunReport> {
    let s = sample.run()?;
    let v = parse_vector(v)?;
    v.check_dim(s.center.dim())?;
    let mut inputs = s.inputs;
    inputs.insert("v".into(), vector_json(&v));
    let proj = distance_to_minkowski(&v, &s.estimate.set)?;
    // express the hull part of the witness with at most n+1 gradients
    let vertices = s.estimate.set.hull().effective_vertices();
    let hull_part = proj.hull_weights.iter().fold(Vector::zeros(v.dim()), |acc, &(i, w)| acc.axpy(w, &vertices[i]));
    let carath = caratheodory_reduce(&hull_part, &vertices)?;
    let outputs = json!({
        "distance": num(proj.distance),
        "witness": vector_json(&proj.witness),
        "hull_combination": carath.iter().map(|(w, p)| json!({"weight": num(*w), "point": vector_json(p)})).collect::<Vec<_>>(),
        "cone_combination": proj.cone_weights.iter().map(|&(i, w)| json!({
            "weight": num(w),
            "generator": vector_json(&s.estimate.set.cone().generators()[i]),
        })).collect::<Vec<_>>(),
    });
    Ok(RunReport::new("distance", Value::Object(inputs), outputs, None))
}

fn trace_json(name: &str, trace: &AccessibilityTrace) -> Value {
    let records: Vec<Value> = trace
        .records
        .iter()
        .map(|r| {
            json!({
                "t": num(r.t),
                "y": vector_json(&r.y),
                "x": vector_json(&r.x),
                "proximal_normal": vector_json(&r.proximal_normal),
                "residual": num(r.residual),
                "distance_from_base": num(r.distance_from_base),
            })
        })
        .collect();
    json!({
        "scenario": name,
        "log_log_slope": trace.log_log_slope(0.0).map_or(Value::Null, num),
        "records": records,
    })
}

fn cmd_access(scenario: Option<&str>) -> Result<RunReport> {
    let all = scenarios();
    let chosen: Vec<_> = all.iter().filter(|s| scenario.is_none_or(|n| n == s.name)).collect();
    if chosen.is_empty() {
        bail!("unknown scenario {:?}; available: {}", scenario.unwrap_or(""),
            all.iter().map(|s| s.name).collect::<Vec<_>>().join(", "));
    }
    let mut traces = Vec::new();
    for s in &chosen {
        traces.push(trace_json(s.name, &run_scenario(s)?));
    }
    let inputs = json!({
        "scenarios": chosen.iter().map(|s| json!({
            "name": s.name,
            "fn": s.function,
            "base": vector_json(&s.spec.base.x),
            "base_level": num(s.spec.base.r),
            "direction_v": vector_json(&s.spec.direction_v),
            "direction_w": vector_json(&s.spec.direction_w),
            "t_schedule": s.spec.t_schedule.iter().map(|&t| num(t)).collect::<Vec<_>>(),
            "grid": s.spec.grid,
            "box_factor": num(s.spec.box_factor),
        })).collect::<Vec<_>>(),
    });
    Ok(RunReport::new("access", inputs, json!({ "traces": traces }), None))
}

#[allow(clippy::too_many_arguments)]
fn cmd_density(name: &str, center: Option<&str>, radii: &str, samples: usize, seed: u64, csv: Option<&Path>) -> Result<RunReport> {
    let scenario = density_scenario(name)?;
    let center = match center {
        Some(s) => parse_vector(s)?,
        None => Vector::zeros(scenario.dim),
    };
    center.check_dim(scenario.dim)?;
    let radii = parse_list(radii)?;
    let curve = density_curve(scenario.oracle.as_ref(), &center, &radii, samples, seed)?;
    let errors = curve.standard_errors();
    if let Some(path) = csv {
        let mut text = String::from("index,radius,ratio,std_error\n");
        for (i, ((r, p), e)) in curve.radii.iter().zip(&curve.ratios).zip(&errors).enumerate() {
            text.push_str(&format!("{i},{r:.16e},{p:.16e},{e:.16e}\n"));
        }
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let inputs = json!({
        "scenario": scenario.name,
        "center": vector_json(&center),
        "radii": radii.iter().map(|&r| num(r)).collect::<Vec<_>>(),
        "samples": samples,
        "seed": seed,
    });
    let outputs = json!({
        "ratios": curve.ratios.iter().map(|&r| num(r)).collect::<Vec<_>>(),
        "std_errors": errors.iter().map(|&r| num(r)).collect::<Vec<_>>(),
        "log_log_slope": curve.log_log_slope().map_or(Value::Null, num),
        "min_ratio": num(curve.min_ratio()),
        "epi_lipschitz": scenario.epi_lipschitz,
    });
    Ok(RunReport::new("density", inputs, outputs, None))
}

fn cmd_verify(only: &[String], tolerances: Option<&Path>) -> Result<RunReport> {
    for name in only {
        if !verify::CRITERIA.iter().any(|&(id, n, _)| verify::selected(std::slice::from_ref(name), id, n)) {
            bail!("unknown criterion {name:?}");
        }
    }
    let tol: Tolerances = match tolerances {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)
            .context("parsing tolerances")?,
        None => Tolerances::default(),
    };
    let results = verify::run(only, &tol);
    let all = results.iter().all(|r| r.passed);
    let inputs = json!({ "only": only, "tolerances": serde_json::to_value(&tol)? });
    Ok(RunReport::new("verify", inputs, json!({ "criteria": serde_json::to_value(&results)? }), Some(all)))
}

fn cmd_catalog() -> RunReport {
    let functions: Vec<Value> = catalog()
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "dim": e.function.dim(),
                "summary": e.summary,
                "citation": e.citation,
                "metadata": serde_json::to_value(e.function.metadata()).expect("plain struct"),
                "default_center": vector_json(&e.default_center),
                "references": e.references.iter().map(|r| json!({
                    "base_point": vector_json(&r.base_point),
                    "set": r.source,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let density: Vec<Value> = density_scenarios()
        .iter()
        .map(|s| json!({ "name": s.name, "summary": s.summary, "epi_lipschitz": s.epi_lipschitz }))
        .collect();
    let access: Vec<Value> = scenarios().iter().map(|s| json!({ "name": s.name, "fn": s.function })).collect();
    RunReport::new(
        "catalog",
        json!({}),
        json!({ "functions": functions, "density_scenarios": density, "access_scenarios": access }),
        None,
    )
}

fn run(cli: &Cli) -> Result<RunReport> {
    match &cli.command {
        Command::Estimate { sample, hausdorff_tol, csv } => cmd_estimate(sample, *hausdorff_tol, csv.as_deref()),
        Command::Stationarity { sample, tol } => cmd_stationarity(sample, *tol),
        Command::Distance { sample, v } => cmd_distance(sample, v),
        Command::Access { scenario } => cmd_access(scenario.as_deref()),
        Command::Density { scenario, center, radii, samples, seed, csv } => {
            cmd_density(scenario, center.as_deref(), radii, *samples, *seed, csv.as_deref())
        }
        Command::Verify { only, tolerances } => cmd_verify(only, tolerances.as_deref()),
        Command::Catalog => Ok(cmd_catalog()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = with_threads(threads_from_env(), || run(&cli));
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.pass_fail == Some(false) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
