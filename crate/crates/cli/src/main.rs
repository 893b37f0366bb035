//! `esw`: inspect spaces, classify Einstein metrics, solve, flow, and
//! reproduce the stability tables.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use esw_core::einstein_solvers::{solve, GridOptions, Method};
use esw_core::lichnerowicz::{analyze, Analysis, DEFAULT_TOL};
use esw_core::reports::{parse_param_range, reproduce, verdict_label, ReproduceOptions, TableId, TableReport};
use esw_core::ricci_flow::{flow, Terminal, DEFAULT_DT};
use esw_core::space_model::{catalog, resolve_space};
use esw_core::{DiagonalMetric, EswError, Rational, Scalar, SpaceDescriptor};

#[derive(Parser)]
#[command(name = "esw", version, about = "Stability of invariant Einstein metrics on homogeneous spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Numeric,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog of built-in spaces.
    Spaces {
        #[command(subcommand)]
        action: SpacesAction,
    },
    /// Spectrum and stability type of an Einstein metric.
    Classify {
        #[arg(long)]
        space: String,
        /// Comma-separated coefficients, e.g. `1,1,1` or `1/2,1,3/4`.
        #[arg(long)]
        metric: String,
        /// Relative tolerance against 2ρ (default 1e-7, or ESW_TOL).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// All Einstein metrics found on a space.
    Einstein {
        #[arg(long)]
        space: String,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Recompute a table and compare every cell.
    Reproduce {
        /// W2, W2Sc, W3, W3Sc, W4, W4_2, W5, FS3, or `all`.
        #[arg(long)]
        table: String,
        /// Family parameter range, e.g. `3..5`.
        #[arg(long)]
        params: Option<String>,
        /// Directory with descriptor files, needed for FS3.
        #[arg(long)]
        descriptor_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Integrate the normalized Ricci flow and write the trajectory as CSV.
    Flow {
        #[arg(long)]
        space: String,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum SpacesAction {
    List,
    Show { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<EswError>() {
        Some(EswError::NotEinstein { .. }) => 3,
        Some(EswError::Internal(_)) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Spaces { action } => spaces(action),
        Command::Classify {
            space,
            metric,
            tol,
            format,
        } => classify(&space, &metric, tol, format),
        Command::Einstein { space, method, format } => einstein(&space, method, format),
        Command::Reproduce {
            table,
            params,
            descriptor_dir,
            format,
        } => reproduce_cmd(&table, params.as_deref(), descriptor_dir, format),
        Command::Flow {
            space,
            x0,
            t_max,
            dt,
            out,
        } => flow_cmd(&space, &x0, t_max, dt, &out),
    }
}

fn parse_metric(s: &str) -> Result<DiagonalMetric, EswError> {
    let x = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<Rational>()
                .map(Scalar::Exact)
                .or_else(|_| t.trim().parse::<f64>().map(Scalar::Approx))
                .map_err(|_| EswError::Parse(format!("bad metric coefficient {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    DiagonalMetric::new(x)
}

fn tolerance(arg: Option<f64>) -> anyhow::Result<f64> {
    if let Some(t) = arg {
        return Ok(t);
    }
    match std::env::var("ESW_TOL") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| EswError::Parse(format!("ESW_TOL={v:?} is not a number")).into()),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn floats(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.10}")).collect();
    format!("({})", parts.join(", "))
}

fn scalars(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::to_string).collect();
    format!("({})", parts.join(", "))
}

fn spaces(action: SpacesAction) -> anyhow::Result<ExitCode> {
    match action {
        SpacesAction::List => {
            for e in catalog() {
                println!("{:<14} {:<18} {}", e.name, e.syntax, e.quotient);
            }
        }
        SpacesAction::Show { name } => {
            let s = resolve_space(&name)?;
            show_space(&s);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn show_space(s: &SpaceDescriptor) {
    println!("name: {}", s.name());
    println!("r: {}", s.r());
    let dims: Vec<String> = s.dims().iter().map(u64::to_string).collect();
    println!("dims: ({})", dims.join(", "));
    println!("n: {}", s.n());
    println!("b: {}", scalars(s.killing()));
    println!("constants:");
    for (t, v) in s.constants().iter() {
        println!("  [{}{}{}] = {v}", t[0], t[1], t[2]);
    }
    if s.trivial_dim() > 0 {
        println!("trivial_dim: {}", s.trivial_dim());
    }
    if !s.notes().is_empty() {
        println!("notes: {}", s.notes());
    }
    for w in s.warnings() {
        println!("warning: {w}");
    }
}

fn analysis_json(a: &Analysis) -> Value {
    let v = &a.verdict;
    json!({
        "two_rho": a.two_rho.to_f64(),
        "two_rho_exact": a.two_rho.as_rational().map(|r| r.to_string()),
        "lambda_p": a.report.lambda_min,
        "lambda_max": a.report.lambda_max,
        "tt_spectrum": a.report.tt_spectrum,
        "residual": a.residual,
        "verdict": {
            "kind": v.kind,
            "coindex": v.coindex,
            "label": verdict_label(v),
            "margin": if v.margin.is_finite() { json!(v.margin) } else { Value::Null },
            "tolerance": v.tolerance,
            "kernel_dim_tt": v.kernel_dim_tt,
            "ricci_locally_invertible": v.ricci_locally_invertible,
        },
    })
}

fn print_analysis(a: &Analysis, indent: &str) {
    let v = &a.verdict;
    let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.10}"));
    println!("{indent}2rho: {} ({:.10})", a.two_rho, a.two_rho.to_f64());
    println!("{indent}lambda_p: {}", opt(a.report.lambda_min));
    println!("{indent}lambda_max: {}", opt(a.report.lambda_max));
    println!("{indent}TT spectrum: {}", floats(&a.report.tt_spectrum));
    println!("{indent}type: {}", verdict_label(v));
    println!("{indent}coindex: {}", v.coindex);
    println!(
        "{indent}kernel flag: {} (Ricci locally invertible: {})",
        if v.kernel_dim_tt > 0 { "set" } else { "clear" },
        if v.ricci_locally_invertible { "yes" } else { "no" }
    );
    println!("{indent}residual: {:.3e}", a.residual);
}

fn classify(space: &str, metric: &str, tol: Option<f64>, format: Format) -> anyhow::Result<ExitCode> {
    let s = resolve_space(space)?;
    let g = parse_metric(metric)?;
    let tol = tolerance(tol)?;
    let a = analyze(&s, &g, tol)?;
    match format {
        Format::Json => {
            let mut v = analysis_json(&a);
            v["space"] = json!(s.name());
            v["metric"] = json!(g);
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        Format::Table => {
            println!("space: {}", s.name());
            println!("metric: {}", scalars(g.x()));
            print_analysis(&a, "");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn einstein(space: &str, method: MethodArg, format: Format) -> anyhow::Result<ExitCode> {
    let s = resolve_space(space)?;
    let method = match method {
        MethodArg::Auto => Method::Auto,
        MethodArg::Numeric => Method::Numeric,
    };
    let set = solve(&s, method, &GridOptions::default())?;
    let analyses = set
        .solutions
        .iter()
        .map(|sol| analyze(&s, &sol.metric, DEFAULT_TOL))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Json => {
            let sols: Vec<Value> = set
                .solutions
                .iter()
                .zip(&analyses)
                .map(|(sol, a)| {
                    let mut v = analysis_json(a);
                    v["label"] = json!(sol.label);
                    v["source"] = json!(sol.source);
                    v["metric"] = json!(sol.metric);
                    v
                })
                .collect();
            let out = json!({ "space": s.name(), "solutions": sols, "absent": set.absent });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Format::Table => {
            println!("space: {} ({} metrics)", s.name(), set.solutions.len());
            for (sol, a) in set.solutions.iter().zip(&analyses) {
                println!("{} [{:?}]", sol.label, sol.source);
                println!("  metric: {}", scalars(sol.metric.x()));
                print_analysis(a, "  ");
            }
            for ab in &set.absent {
                println!("{}: absent ({})", ab.label, ab.reason);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn reproduce_cmd(table: &str, params: Option<&str>, dir: Option<PathBuf>, format: Format) -> anyhow::Result<ExitCode> {
    let tables: Vec<TableId> = if table.eq_ignore_ascii_case("all") {
        TableId::ALL.iter().copied().filter(|t| *t != TableId::FS3 || dir.is_some()).collect()
    } else {
        vec![table.parse()?]
    };
    let opts = ReproduceOptions {
        params: params.map(parse_param_range).transpose()?,
        descriptor_dir: dir,
    };
    let reports: Vec<TableReport> = tables
        .iter()
        .map(|t| reproduce(*t, &opts).with_context(|| format!("table {t}")))
        .collect::<anyhow::Result<_>>()?;
    match format {
        Format::Json => {
            let v = if reports.len() == 1 {
                serde_json::to_value(&reports[0])?
            } else {
                serde_json::to_value(&reports)?
            };
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        Format::Table => {
            for r in &reports {
                print!("{}", r.render_text());
            }
        }
    }
    Ok(if reports.iter().all(TableReport::all_pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn flow_cmd(space: &str, x0: &str, t_max: f64, dt: f64, out: &PathBuf) -> anyhow::Result<ExitCode> {
    let s = resolve_space(space)?;
    let g = parse_metric(x0)?;
    let traj = flow(&s, &g, t_max, dt)?;
    traj.save_csv(out).with_context(|| format!("writing {}", out.display()))?;
    let status = match &traj.terminal {
        Terminal::ConvergedToEinstein { residual } => format!("ConvergedToEinstein (residual {residual:.3e})"),
        Terminal::MaxTimeReached => "MaxTimeReached".into(),
        Terminal::Diverged { bound } => format!("Diverged (left the box at {bound:e})"),
    };
    println!("terminal: {status} at t = {}", traj.last_time());
    println!("final state: {}", floats(traj.last_state()));
    println!("scalar: {:.10}", traj.scalars.last().copied().unwrap_or(f64::NAN));
    println!("wrote {} rows to {}", traj.times.len(), out.display());
    Ok(ExitCode::SUCCESS)
}
