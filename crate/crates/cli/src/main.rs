//! `subspec` command-line front end.
//!
//! Exit status: 0 on success, 1 on input or validation errors, 2 when a
//! cross-check between routes fails.

mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use subspec::graph::{self, Graph};
use subspec::invariants::{self, walk, ReportConfig, Route};
use subspec::linalg::{jacobi_eigenvalues, normalized_laplacian};
use subspec::spectrum::{self, round_significant};
use subspec::{LevelReport, Spectrum};

const SIGNIFICANT: usize = 12;
/// Tolerance for analytic vs Jacobi spectra in `verify`.
const SPECTRUM_TOL: f64 = 1e-7;
/// Upper bound on expected random-walk steps spent by `verify`.
const WALK_BUDGET: f64 = 5e8;

#[derive(Debug, Parser)]
#[command(name = "subspec", version, about = "Normalized-Laplacian spectra and invariants of iterated graph subdivisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the spectrum of s^n(G) with multiplicities and branch paths.
    Spectrum { input: PathBuf },
    /// Print Kirchhoff, Kemeny and spanning-tree values for levels 0..=n by every route.
    Invariants { input: PathBuf },
    /// Write the edge list of s^n(G).
    Subdivide { input: PathBuf },
    /// Cross-check the analytic routes against the dense oracles.
    Verify { input: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, clap::Args)]
struct Options {
    /// Subdivision level.
    #[arg(long = "n", global = true, default_value_t = 0)]
    n: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for the Monte Carlo walk.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = graph::DEFAULT_VERTEX_CAP)]
    vertex_cap: u64,
    /// Random-walk trials for the Monte Carlo Kemeny estimate.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(walk::MIN_TRIALS..))]
    mc_steps: u64,
    /// Largest explicit graph for the dense floating-point oracles.
    #[arg(long, global = true, default_value_t = subspec::linalg::DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    /// Largest explicit graph for the exact matrix-tree determinant.
    #[arg(long, global = true, default_value_t = invariants::DEFAULT_EXACT_ORACLE_CAP)]
    exact_oracle_cap: usize,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    CrossCheck(String),
}

impl From<subspec::Error> for Failure {
    fn from(e: subspec::Error) -> Self {
        match e {
            subspec::Error::CrossCheck { .. } => Failure::CrossCheck(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, Failure::CrossCheck(msg))) => {
            print!("{out}");
            eprintln!("subspec: cross-check failed: {msg}");
            ExitCode::from(2)
        }
        Err((_, Failure::Invalid(msg))) => {
            eprintln!("subspec: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    graph::parse_edge_list(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// Returns stdout text; on failure, the text to print before reporting.
fn run(cli: &Cli) -> Result<String, (String, Failure)> {
    let o = &cli.opts;
    let fail = |f| (String::new(), f);
    match &cli.command {
        Command::Spectrum { input } => {
            let g = load(input).map_err(fail)?;
            check_vertex_cap(&g, o).map_err(fail)?;
            let s = spectrum::spectrum_at_capped::<f64>(&g, o.n, o.oracle_cap, o.vertex_cap)
                .map_err(|e| fail(e.into()))?;
            Ok(render_spectrum(&s, o.format))
        }
        Command::Invariants { input } => {
            let g = load(input).map_err(fail)?;
            check_vertex_cap(&g, o).map_err(fail)?;
            let levels = invariants::build_report::<f64>(&g, o.n, &report_config(o)).map_err(|e| fail(e.into()))?;
            let out = render_report(&levels, o.format);
            match invariants::first_failure(&levels) {
                Ok(()) => Ok(out),
                Err(e) => Err((out, e.into())),
            }
        }
        Command::Subdivide { input } => {
            let g = load(input).map_err(fail)?;
            let s = graph::iterate_subdivide(&g, o.n, o.vertex_cap).map_err(|e| fail(e.into()))?;
            Ok(s.to_edge_list())
        }
        Command::Verify { input } => {
            let g = load(input).map_err(fail)?;
            check_vertex_cap(&g, o).map_err(fail)?;
            verify(&g, o)
        }
    }
}

fn report_config(o: &Options) -> ReportConfig {
    ReportConfig { oracle_cap: o.oracle_cap, exact_oracle_cap: o.exact_oracle_cap, entry_cap: o.vertex_cap }
}

fn check_vertex_cap(g: &Graph, o: &Options) -> Result<(), Failure> {
    let required = graph::subdivision_counts(g.vertex_count() as u64, g.edge_count() as u64, o.n)
        .map(|(v, _)| v as u128)
        .unwrap_or(u128::MAX);
    if required > o.vertex_cap as u128 {
        return Err(Failure::Invalid(format!(
            "level {} has {required} vertices, above --vertex-cap {}",
            o.n, o.vertex_cap
        )));
    }
    Ok(())
}

fn fmt_num(x: f64) -> String {
    format!("{}", round_significant(x, SIGNIFICANT))
}

fn render_spectrum(s: &Spectrum, format: Format) -> String {
    match format {
        Format::Json => {
            let arr: Vec<serde_json::Value> = s.records().iter().map(|r| r.to_json(Some(SIGNIFICANT))).collect();
            format!("{}\n", serde_json::to_string_pretty(&arr).expect("json"))
        }
        Format::Table => {
            let mut t = table::Table::new(["value", "multiplicity", "path", "base"]);
            for r in s.records() {
                let exact_or = |x: f64, e: Option<u8>| e.map_or_else(|| fmt_num(x), |v| v.to_string());
                t.row([exact_or(r.value, r.exact), r.multiplicity.to_string(), r.path.clone(), exact_or(r.base, r.base_exact)]);
            }
            format!(
                "{}# level {}: {} distinct values, total multiplicity {}\n",
                t.render(),
                s.level(),
                s.distinct_count(),
                s.total_multiplicity()
            )
        }
    }
}

fn render_report(levels: &[LevelReport], format: Format) -> String {
    match format {
        Format::Json => {
            format!("{}\n", serde_json::to_string_pretty(&invariants::report_json(levels, Some(SIGNIFICANT))).expect("json"))
        }
        Format::Table => {
            let mut header = vec!["quantity".to_string(), "route".to_string()];
            header.extend(levels.iter().map(|l| format!("n={}", l.level)));
            let mut t = table::Table::new(header);
            let counts = |name: &str, f: &dyn Fn(&LevelReport) -> String| {
                let mut row = vec![name.to_string(), "-".to_string()];
                row.extend(levels.iter().map(f));
                row
            };
            t.row(counts("N", &|l| l.reports[0].vertex_count.to_string()));
            t.row(counts("E", &|l| l.reports[0].edge_count.to_string()));
            type Getter = fn(&subspec::InvariantReport) -> String;
            let quantities: [(&str, Getter); 3] = [
                ("Kf*", |r| fmt_num(r.kirchhoff_mult)),
                ("Kemeny", |r| fmt_num(r.kemeny)),
                ("trees", |r| r.spanning_trees.as_ref().map_or_else(|| "-".into(), |t| t.to_string())),
            ];
            for (name, get) in quantities {
                for route in [Route::Spectral, Route::ClosedForm, Route::Oracle] {
                    if levels.iter().all(|l| l.route(route).is_none()) {
                        continue;
                    }
                    let mut row = vec![name.to_string(), route_name(route).to_string()];
                    row.extend(levels.iter().map(|l| l.route(route).map_or_else(|| "-".into(), get)));
                    t.row(row);
                }
            }
            let status = if levels.iter().all(|l| l.passed()) { "all cross-checks passed" } else { "CROSS-CHECK FAILURES" };
            format!("{}# {status}\n", t.render())
        }
    }
}

fn route_name(route: Route) -> &'static str {
    match route {
        Route::Spectral => "SPECTRAL",
        Route::ClosedForm => "CLOSED_FORM",
        Route::Oracle => "ORACLE",
    }
}

struct Outcome {
    name: String,
    passed: bool,
    detail: String,
}

fn verify(g: &Graph, o: &Options) -> Result<String, (String, Failure)> {
    let fail = |e: subspec::Error| (String::new(), Failure::from(e));
    let meta = graph::analyze(g);
    let mut outcomes = Vec::new();

    let mut spec = spectrum::base_spectrum_capped::<f64>(g, o.oracle_cap).map_err(fail)?;
    let mut explicit = g.clone();
    for n in 0..=o.n {
        if n > 0 {
            spec = spectrum::step(&spec, &meta).map_err(fail)?;
        }
        let (vertices, _) = graph::subdivision_counts(g.vertex_count() as u64, g.edge_count() as u64, n)
            .expect("checked against vertex cap");
        let trace = spec.trace();
        outcomes.push(Outcome {
            name: format!("level {n}: count and trace"),
            passed: spec.total_multiplicity() == vertices && (trace - vertices as f64).abs() <= 1e-8 * vertices as f64,
            detail: format!("count {} of {vertices}, trace {}", spec.total_multiplicity(), fmt_num(trace)),
        });
        if vertices > o.oracle_cap as u64 {
            continue;
        }
        if n > 0 {
            explicit = graph::subdivide(&explicit);
        }
        let eig = jacobi_eigenvalues(&normalized_laplacian::<f64>(&explicit)).map_err(fail)?;
        let m = spectrum::compare(&spec, &eig, SPECTRUM_TOL).map_err(fail)?;
        outcomes.push(Outcome {
            name: format!("level {n}: spectrum vs Jacobi"),
            passed: m.success && m.multiplicities_agree(),
            detail: format!("max deviation {:e}, {} clusters", m.max_deviation, m.clusters.len()),
        });
    }

    let levels = invariants::build_report::<f64>(g, o.n, &report_config(o)).map_err(fail)?;
    for l in &levels {
        for r in &l.reports {
            let worst = r.checks.iter().filter(|c| !c.passed).map(|c| format!("{:?} {:e}", c.quantity, c.deviation));
            let worst: Vec<String> = worst.collect();
            outcomes.push(Outcome {
                name: format!("level {}: {} invariants", l.level, route_name(r.route)),
                passed: r.passed(),
                detail: if worst.is_empty() { format!("{} check{}", r.checks.len(), if r.checks.len() == 1 { "" } else { "s" }) } else { worst.join(", ") },
            });
        }
    }

    // one random-walk check, at the deepest level that fits the budget
    let walk_level = levels
        .iter()
        .rev()
        .find(|l| {
            l.reports[0].vertex_count <= o.oracle_cap as u64 && l.reports[1].kemeny * o.mc_steps as f64 <= WALK_BUDGET
        })
        .map(|l| l.level);
    if let Some(n) = walk_level {
        let sg = graph::iterate_subdivide(g, n, o.vertex_cap).map_err(fail)?;
        let est = walk::kemeny_montecarlo::<f64>(&sg, o.mc_steps, o.seed);
        let exact = levels[n as usize].route(Route::ClosedForm).expect("closed form").kemeny;
        let z = est.z_score(exact);
        outcomes.push(Outcome {
            name: format!("level {n}: Monte Carlo Kemeny"),
            passed: z <= 3.0,
            detail: format!("estimate {} +/- {} vs {}, z = {:.3}", fmt_num(est.mean), fmt_num(est.standard_error), fmt_num(exact), z),
        });
    }

    let all = outcomes.iter().all(|x| x.passed);
    let out = match o.format {
        Format::Json => {
            let arr: Vec<_> = outcomes
                .iter()
                .map(|x| json!({"check": x.name, "passed": x.passed, "detail": x.detail}))
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&json!({"passed": all, "checks": arr})).expect("json"))
        }
        Format::Table => {
            let mut t = table::Table::new(["status", "check", "detail"]);
            for x in &outcomes {
                t.row([if x.passed { "PASS" } else { "FAIL" }.to_string(), x.name.clone(), x.detail.clone()]);
            }
            t.render()
        }
    };
    if all {
        Ok(out)
    } else {
        let failed = outcomes.iter().filter(|x| !x.passed).count();
        Err((out, Failure::CrossCheck(format!("{failed} of {} checks failed", outcomes.len()))))
    }
}
