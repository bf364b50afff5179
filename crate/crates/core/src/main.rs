use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use obstructor::adversary::{
    eval_shortcut_budget, random_emulator, spanner_adversary, suggest_params, Application,
    DeletionPlan, Strategy,
};
use obstructor::alternation::{exponent_argmin, exponent_f};
use obstructor::base::{build_family, Budget, Family, LayeredGraph};
use obstructor::hull::{hull_growth_exponent, positive_hull, verify_hull_properties};
use obstructor::obstacle::build_gobs;
use obstructor::oracles::{Stretch, SweepConfig};
use obstructor::report::{reports_to_csv_rows, rows_to_csv, CsvRow, Report};
use obstructor::textio;
use obstructor::verify::{all_pass, verify_graph};
use obstructor::{ObstructorError, Result};

const DEFAULT_SEED: u64 = 1729;

#[derive(Parser)]
#[command(
    name = "obstructor",
    version,
    about = "Build, verify, and attack extremal layered-graph families"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write graph and pairs files for a family instance
    Gen {
        /// g0 | galt2 | galt3 | galtgen | gobs
        #[arg(long)]
        family: String,
        #[arg(long = "D")]
        depth: u64,
        #[arg(long = "r")]
        radius: u64,
        /// Coordinate count for galtgen
        #[arg(long)]
        k: Option<u32>,
        /// Output directory (default: current)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Vertex budget override
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run the structural verification suite; nonzero exit on any failure
    Verify {
        #[arg(long)]
        family: Option<String>,
        #[arg(long = "D")]
        depth: Option<u64>,
        #[arg(long = "r")]
        radius: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
        /// Verify a generated graph file instead of an in-memory build
        #[arg(long)]
        graph_file: Option<PathBuf>,
        #[arg(long)]
        pairs_file: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// exhaustive | sampled (forces sampling of the pair-pair sweep)
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Adversary evaluations
    Eval {
        #[command(subcommand)]
        what: EvalCmd,
    },
    /// Print a hull set, verify it, or fit the growth exponent
    Hull {
        #[arg(long = "r")]
        radius: Option<i64>,
        /// Comma-separated radii for the log-log growth fit
        #[arg(long)]
        radii: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the exponent table f(k) with its integer argmin
    Fk {
        #[arg(long, default_value_t = 3)]
        min: i64,
        #[arg(long, default_value_t = 12)]
        max: i64,
    },
}

#[derive(Subcommand)]
enum EvalCmd {
    /// Diameter under budgeted shortcut sets (random/greedy/folklore)
    Shortcut {
        #[arg(long)]
        family: String,
        #[arg(long = "D")]
        depth: u64,
        #[arg(long = "r")]
        radius: u64,
        #[arg(long)]
        k: Option<u32>,
        /// Integer, or "max-N" for (pair count - N)
        #[arg(long, default_value = "max-1")]
        budget: String,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Comma-separated subset of random,greedy,folklore
        #[arg(long)]
        strategies: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Additive stretch after clique-edge deletions on the obstacle graph
    Spanner {
        #[arg(long = "D")]
        depth: u64,
        #[arg(long = "r")]
        radius: u64,
        /// per-path | random-clique:N
        #[arg(long, default_value = "per-path")]
        plan: String,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emulator-to-spanner reduction on seeded random emulators
    Emulator {
        #[arg(long = "D")]
        depth: u64,
        #[arg(long = "r")]
        radius: u64,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Balanced parameters and predicted size for an application
    Suggest {
        /// shortcut-galt2 | shortcut-galt3 | spanner | emulator
        #[arg(long)]
        app: String,
        #[arg(long = "D")]
        depth: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn family_from_cli(name: &str, k: Option<u32>) -> Result<Family> {
    match name.to_ascii_lowercase().as_str() {
        "g0" => Ok(Family::G0),
        "galt2" => Ok(Family::Galt2),
        "galt3" => Ok(Family::Galt3),
        "galtgen" => {
            let k = k.ok_or_else(|| {
                ObstructorError::InvalidParam("galtgen requires --k".into())
            })?;
            if k < 3 {
                return Err(ObstructorError::InvalidParam(
                    "galtgen requires k >= 3".into(),
                ));
            }
            Ok(Family::GaltGen(k))
        }
        other => Err(ObstructorError::InvalidParam(format!(
            "unknown family {other}"
        ))),
    }
}

fn make_budget(vertices: Option<u64>) -> Budget {
    match vertices {
        Some(v) => Budget {
            max_vertices: v,
            ..Budget::default()
        },
        None => Budget::default(),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_with_csv(out: &Option<PathBuf>, json_text: &str, rows: &[CsvRow]) -> Result<()> {
    let csv = rows_to_csv(rows);
    match out {
        Some(path) => {
            fs::write(path, json_text)?;
            fs::write(path.with_extension("csv"), csv)?;
        }
        None => {
            print!("{json_text}");
            print!("{csv}");
        }
    }
    Ok(())
}

fn parse_budget_spec(spec: &str, pair_count: u64) -> Result<u64> {
    if let Some(rest) = spec.strip_prefix("max-") {
        let sub: u64 = rest
            .parse()
            .map_err(|_| ObstructorError::Parse(format!("bad budget spec {spec}")))?;
        pair_count
            .checked_sub(sub)
            .ok_or_else(|| ObstructorError::InvalidParam(format!("budget {spec} underflows")))
    } else {
        spec.parse()
            .map_err(|_| ObstructorError::Parse(format!("bad budget spec {spec}")))
    }
}

fn cmd_gen(
    family: &str,
    depth: u64,
    radius: u64,
    k: Option<u32>,
    out: &Option<PathBuf>,
    budget: Option<u64>,
) -> Result<()> {
    let budget = make_budget(budget);
    let dir = out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let (graph_text, pairs_text, stem) = if family.eq_ignore_ascii_case("gobs") {
        let g = build_gobs(depth, radius, &budget)?;
        (
            textio::write_obstacle_graph(&g),
            textio::write_obstacle_pairs(&g),
            format!("GOBS_D{depth}_r{radius}"),
        )
    } else {
        let fam = family_from_cli(family, k)?;
        let g = build_family(fam, depth, radius, &budget)?;
        (
            textio::write_graph(&g),
            textio::write_pairs(&g),
            format!("{}_D{depth}_r{radius}", fam.tag()),
        )
    };
    let graph_path = dir.join(format!("{stem}.graph.txt"));
    let pairs_path = dir.join(format!("{stem}.pairs.txt"));
    fs::write(&graph_path, graph_text)?;
    fs::write(&pairs_path, pairs_text)?;
    println!("{}", graph_path.display());
    println!("{}", pairs_path.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    family: &Option<String>,
    depth: Option<u64>,
    radius: Option<u64>,
    k: Option<u32>,
    graph_file: &Option<PathBuf>,
    pairs_file: &Option<PathBuf>,
    seed: u64,
    mode: &Option<String>,
    out: &Option<PathBuf>,
    budget: Option<u64>,
) -> Result<bool> {
    let budget = make_budget(budget);
    let g: LayeredGraph = match (graph_file, pairs_file) {
        (Some(gf), Some(pf)) => {
            let gt = fs::read_to_string(gf)?;
            let pt = fs::read_to_string(pf)?;
            textio::load_graph(&gt, &pt, &budget)?
        }
        (None, None) => {
            let fam = family_from_cli(
                family.as_deref().ok_or_else(|| {
                    ObstructorError::InvalidParam("verify needs --family or files".into())
                })?,
                k,
            )?;
            let (d, r) = (
                depth.ok_or_else(|| ObstructorError::InvalidParam("verify needs --D".into()))?,
                radius.ok_or_else(|| ObstructorError::InvalidParam("verify needs --r".into()))?,
            );
            build_family(fam, d, r, &budget)?
        }
        _ => {
            return Err(ObstructorError::InvalidParam(
                "verify needs both --graph-file and --pairs-file".into(),
            ))
        }
    };
    let mut sweep = SweepConfig {
        seed,
        ..SweepConfig::default()
    };
    if mode.as_deref() == Some("sampled") {
        sweep.naive_pair_limit = 0;
        sweep.index_event_limit = 0;
    }
    let reports = verify_graph(&g, seed, &sweep);
    let ok = all_pass(&reports);
    emit(out, &obstructor::report::reports_to_json(&reports))?;
    Ok(ok)
}

fn cmd_eval_shortcut(
    family: &str,
    depth: u64,
    radius: u64,
    k: Option<u32>,
    budget_spec: &str,
    trials: u32,
    seed: u64,
    strategies: &Option<String>,
    out: &Option<PathBuf>,
) -> Result<()> {
    let fam = family_from_cli(family, k)?;
    let g = build_family(fam, depth, radius, &Budget::default())?;
    let budget = parse_budget_spec(budget_spec, g.pairs().len() as u64)?;
    let strategies: Vec<Strategy> = match strategies {
        Some(s) => s
            .split(',')
            .map(|t| Strategy::parse(t.trim()))
            .collect::<Result<_>>()?,
        None => Strategy::all().to_vec(),
    };
    let report = eval_shortcut_budget(&g, budget, &strategies, trials, seed)?;
    let record = Report::new("shortcut-budget", fam.tag(), json!({"D": depth, "r": radius}))
        .seed(seed)
        .result(json!({
            "baseline_diameter": report.baseline_diameter,
            "budget": report.budget,
            "pairs": report.pair_count,
            "bound": report.bound.map(|b| format!("{b:?}")),
            "rows": report.rows.iter().map(|r| json!({
                "strategy": r.strategy,
                "trial": r.trial,
                "shortcuts": r.shortcut_count,
                "diameter": r.diameter,
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        }))
        .pass(report.all_pass);
    let rows = reports_to_csv_rows(
        report
            .rows
            .iter()
            .map(|r| (r.strategy.to_string(), r.trial, r.diameter.to_string())),
    );
    emit_with_csv(out, &obstructor::report::reports_to_json(&[record]), &rows)
}

fn cmd_eval_spanner(
    depth: u64,
    radius: u64,
    plan: &str,
    trials: u32,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    let gobs = build_gobs(depth, radius, &Budget::default())?;
    let plan_parsed = if plan == "per-path" {
        DeletionPlan::PerPath { delete_count: None }
    } else if let Some(n) = plan.strip_prefix("random-clique:") {
        DeletionPlan::RandomClique {
            count: n
                .parse()
                .map_err(|_| ObstructorError::Parse(format!("bad plan {plan}")))?,
        }
    } else {
        return Err(ObstructorError::Parse(format!("unknown plan {plan}")));
    };
    let report = spanner_adversary(&gobs, &plan_parsed, trials, seed, 20_000)?;
    let record = Report::new("spanner-adversary", "GOBS", json!({"D": depth, "r": radius}))
        .seed(seed)
        .mode(report.mode)
        .result(json!({
            "stretch_bound": report.bound,
            "rows": report.rows.iter().map(|r| json!({
                "trial": r.trial,
                "deleted": r.deleted,
                "target_pair": r.target_pair,
                "designated_stretch": r.designated_stretch,
                "max_path_loss": r.max_path_loss,
                "beta": stretch_json(r.beta),
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        }))
        .pass(report.all_pass);
    let rows = reports_to_csv_rows(report.rows.iter().map(|r| {
        (
            plan.to_string(),
            r.trial,
            match r.beta {
                Stretch::Finite(b) => b.to_string(),
                Stretch::Infinite => "inf".into(),
            },
        )
    }));
    emit_with_csv(out, &obstructor::report::reports_to_json(&[record]), &rows)
}

fn stretch_json(s: Stretch) -> serde_json::Value {
    match s {
        Stretch::Finite(b) => json!(b),
        Stretch::Infinite => json!("inf"),
    }
}

fn cmd_eval_emulator(
    depth: u64,
    radius: u64,
    trials: u32,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    let gobs = build_gobs(depth, radius, &Budget::default())?;
    let mut rows = Vec::new();
    let mut trial_reports = Vec::new();
    let mut ok = true;
    for trial in 0..trials {
        let em = random_emulator(&gobs, 30, 40, true, seed ^ u64::from(trial))?;
        let (_, rep) = obstructor::adversary::emulator_to_spanner(&gobs, &em)?;
        ok &= rep.distances_preserved && rep.within_clique_bound;
        rows.push((
            "emulator".to_string(),
            trial,
            rep.clique_edges.to_string(),
        ));
        trial_reports.push(json!({
            "trial": trial,
            "emulator_edges": rep.emulator_edges,
            "pairs_connected": rep.pairs_connected,
            "distances_preserved": rep.distances_preserved,
            "spanner_edges": rep.spanner_edges,
            "clique_edges": rep.clique_edges,
            "clique_bound": rep.clique_bound,
            "within_clique_bound": rep.within_clique_bound,
        }));
    }
    let record = Report::new("emulator-reduction", "GOBS", json!({"D": depth, "r": radius}))
        .seed(seed)
        .result(json!({"rows": trial_reports}))
        .pass(ok);
    let rows = reports_to_csv_rows(rows.into_iter());
    emit_with_csv(out, &obstructor::report::reports_to_json(&[record]), &rows)
}

fn cmd_eval_suggest(app: &str, depth: u64, out: &Option<PathBuf>) -> Result<()> {
    let application = Application::parse(app)?;
    let s = suggest_params(application, depth)?;
    let record = Report::new("suggest-params", application.label(), json!({"D": depth}))
        .result(json!({
            "r": s.radius,
            "predicted_n": s.predicted_vertices.to_string(),
            "exponent": format!("{}/{}", s.exponent.numer(), s.exponent.denom()),
        }));
    let rows = vec![CsvRow {
        param: application.label().to_string(),
        trial: 0,
        value: s.radius.to_string(),
    }];
    emit_with_csv(out, &obstructor::report::reports_to_json(&[record]), &rows)
}

fn cmd_hull(radius: Option<i64>, radii: &Option<String>, out: &Option<PathBuf>) -> Result<()> {
    if let Some(spec) = radii {
        let rs: Vec<i64> = spec
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| ObstructorError::Parse(format!("bad radius {t}")))
            })
            .collect::<Result<_>>()?;
        let slope = hull_growth_exponent(&rs)?;
        let sizes: Vec<usize> = rs
            .iter()
            .map(|&r| positive_hull(r).map(|h| h.len()))
            .collect::<Result<_>>()?;
        let record = Report::new("hull-growth", "hull", json!({"radii": rs}))
            .result(json!({"sizes": sizes, "slope": slope}));
        return emit(out, &obstructor::report::reports_to_json(&[record]));
    }
    let r = radius.ok_or_else(|| {
        ObstructorError::InvalidParam("hull needs --r or --radii".into())
    })?;
    let h = positive_hull(r)?;
    let v = verify_hull_properties(&h);
    if !v.all_pass() {
        return Err(ObstructorError::InvalidParam(format!(
            "hull verification failed: {v:?}"
        )));
    }
    emit(out, &textio::write_hull(&h))
}

fn cmd_fk(min: i64, max: i64) -> Result<()> {
    let mut records = Vec::new();
    for k in min..=max {
        let f = exponent_f(k)?;
        records.push(json!({
            "k": k,
            "f": format!("{}/{}", f.numer(), f.denom()),
            "approx": *f.numer() as f64 / *f.denom() as f64,
        }));
    }
    let argmin = exponent_argmin(min, max)?;
    let record = Report::new("exponent-table", "fk", json!({"min": min, "max": max}))
        .result(json!({"table": records, "argmin": argmin}));
    emit(&None, &obstructor::report::reports_to_json(&[record]))
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Gen {
            family,
            depth,
            radius,
            k,
            out,
            budget,
        } => cmd_gen(&family, depth, radius, k, &out, budget).map(|()| true),
        Cmd::Verify {
            family,
            depth,
            radius,
            k,
            graph_file,
            pairs_file,
            seed,
            mode,
            out,
            budget,
        } => cmd_verify(
            &family,
            depth,
            radius,
            k,
            &graph_file,
            &pairs_file,
            seed,
            &mode,
            &out,
            budget,
        ),
        Cmd::Eval { what } => match what {
            EvalCmd::Shortcut {
                family,
                depth,
                radius,
                k,
                budget,
                trials,
                seed,
                strategies,
                out,
            } => cmd_eval_shortcut(
                &family, depth, radius, k, &budget, trials, seed, &strategies, &out,
            )
            .map(|()| true),
            EvalCmd::Spanner {
                depth,
                radius,
                plan,
                trials,
                seed,
                out,
            } => cmd_eval_spanner(depth, radius, &plan, trials, seed, &out).map(|()| true),
            EvalCmd::Emulator {
                depth,
                radius,
                trials,
                seed,
                out,
            } => cmd_eval_emulator(depth, radius, trials, seed, &out).map(|()| true),
            EvalCmd::Suggest { app, depth, out } => {
                cmd_eval_suggest(&app, depth, &out).map(|()| true)
            }
        },
        Cmd::Hull { radius, radii, out } => cmd_hull(radius, &radii, &out).map(|()| true),
        Cmd::Fk { min, max } => cmd_fk(min, max).map(|()| true),
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("OBSTRUCTOR_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global();
        }
    }
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
