//! `anondyn`: command-line front end for the counting lab.
//!
//! Exit codes: 0 when every check passed, 1 when a check failed, 2 for usage,
//! input or I/O errors.

mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anondyn::algebra::{
    build_matrix, column_count, exact_json, kernel_generic, kernel_recursive, kernel_sums, pow3,
    row_count, to_i64_vec,
};
use anondyn::graph::{persistent_distances, AnySchedule, DynamicSchedule, MultigraphSchedule};
use anondyn::oracle::{min_distinguishing_round, DEFAULT_MAX_CELLS};
use anondyn::protocols::{
    degree_detector_counter, equation_solver_counter, star_counter, CountOutcome,
};
use anondyn::sim::{measure_dynamic_diameter, run, ProtocolRun, RunOptions};
use anondyn::witness::{build_ambiguous_pair, lift_pair_to_diameter, lift_pair_to_pd2};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use report::{envelope, sha256_hex, write_atomic, CliError};

#[derive(Parser)]
#[command(name = "anondyn", version, about = "Counting in anonymous dynamic networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the kernel of every M_r up to a round.
    VerifyKernel {
        #[arg(long)]
        max_round: usize,
        /// Largest round for the exact-elimination kernel (defaults to min(max-round, 4)).
        #[arg(long)]
        generic_max_round: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit an indistinguishable instance pair as schedule files plus a manifest.
    Witness {
        #[arg(long)]
        round: usize,
        #[arg(long, value_enum)]
        lift: Option<Lift>,
        /// Target dynamic diameter for `--lift diameter`.
        #[arg(long = "D", visible_alias = "d")]
        diameter: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a counting protocol on a schedule file.
    Simulate {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, value_enum)]
        protocol: ProtocolName,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        degree_oracle: bool,
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Exhaustive minimal distinguishing rounds as CSV.
    Oracle {
        #[arg(long)]
        max_n: u64,
        #[arg(long)]
        max_rounds: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measured dynamic diameter of a schedule file.
    Diameter {
        #[arg(long)]
        schedule: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Lift {
    Pd2,
    Diameter,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolName {
    Star,
    Eqsolver,
    Degree,
}

/// Outcome of a subcommand: the report and whether its checks passed.
struct Done {
    report: Value,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::VerifyKernel { max_round, generic_max_round, out } => {
            verify_kernel(max_round, generic_max_round, out.as_deref())
        }
        Command::Witness { round, lift, diameter, out } => witness(round, lift, diameter, &out),
        Command::Simulate { schedule, protocol, horizon, degree_oracle, transcript } => {
            simulate(&schedule, protocol, horizon, degree_oracle, transcript.as_deref())
        }
        Command::Oracle { max_n, max_rounds, out } => oracle(max_n, max_rounds, &out),
        Command::Diameter { schedule } => diameter(&schedule),
    };
    match result {
        Ok(done) => {
            let text = serde_json::to_string_pretty(&done.report).expect("reports are valid JSON");
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout(), "{text}");
            if done.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}

const MAX_KERNEL_ROUND: usize = 10;

fn verify_kernel(max_round: usize, generic_max: Option<usize>, out: Option<&Path>) -> Result<Done, CliError> {
    if max_round > MAX_KERNEL_ROUND {
        return Err(CliError::Usage(format!("--max-round must be at most {MAX_KERNEL_ROUND}")));
    }
    let generic_max = generic_max.unwrap_or(max_round.min(4));
    let mut rounds = Vec::new();
    let mut passed = true;
    for r in 0..=max_round {
        let m = build_matrix(r);
        let k = kernel_recursive(r);
        let annihilated = m.mul_i64(&k.entries)?.iter().all(|&x| x == 0);
        let generic = (r <= generic_max).then(|| {
            let basis = kernel_generic(&m);
            let negated: Vec<i64> = k.entries.iter().map(|x| -x).collect();
            let matches = basis.len() == 1
                && to_i64_vec(&basis[0]).is_some_and(|v| v == k.entries || v == negated);
            json!({ "dimension": basis.len(), "matches_recursion": matches })
        });
        let sums = kernel_sums(&k);
        let formula_pos = (pow3(r + 1) as u64).div_ceil(2);
        let sums_ok = sums.total == 1 && sums.sum_pos == formula_pos;
        let generic_ok = generic.as_ref().is_none_or(|g| g["matches_recursion"] == json!(true));
        passed &= annihilated && sums_ok && generic_ok;
        let mut entry = json!({
            "round": r,
            "rows": row_count(r),
            "columns": column_count(r),
            "kernel_annihilated": annihilated,
            "generic_kernel": generic,
            "sums": sums,
            "positive_sum_formula": formula_pos,
            "sums_match_formula": sums_ok,
            "stated_negative_variant": (pow3(r) as u64).div_ceil(2) - 1,
        });
        if column_count(r) <= 729 {
            entry["kernel"] = exact_json(&k.entries);
        }
        rounds.push(entry);
    }
    let mut report = envelope("verify-kernel", &[], None);
    report["max_round"] = json!(max_round);
    report["generic_max_round"] = json!(generic_max);
    report["rounds"] = Value::Array(rounds);
    report["passed"] = json!(passed);
    if let Some(path) = out {
        write_atomic(path, &serde_json::to_vec_pretty(&report).expect("reports are valid JSON"))?;
    }
    Ok(Done { report, passed })
}

const MAX_WITNESS_ROUND: usize = 7;

fn witness(round: usize, lift: Option<Lift>, target: Option<usize>, dir: &Path) -> Result<Done, CliError> {
    if round > MAX_WITNESS_ROUND {
        return Err(CliError::Usage(format!("--round must be at most {MAX_WITNESS_ROUND}")));
    }
    if target.is_some() && !matches!(lift, Some(Lift::Diameter)) {
        return Err(CliError::Usage("--D only applies to --lift diameter".into()));
    }
    let p = build_ambiguous_pair(round);
    let (a, b, lift_name) = match lift {
        None => (AnySchedule::Multigraph(p.m.clone()), AnySchedule::Multigraph(p.m_prime.clone()), "none"),
        Some(Lift::Pd2) => {
            let (a, b) = lift_pair_to_pd2(&p)?;
            (AnySchedule::Graph(a.schedule), AnySchedule::Graph(b.schedule), "pd2")
        }
        Some(Lift::Diameter) => {
            let d = target.ok_or_else(|| CliError::Usage("--lift diameter needs --D".into()))?;
            let (a, b) = lift_pair_to_diameter(&p, d)?;
            (AnySchedule::Graph(a), AnySchedule::Graph(b), "diameter")
        }
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    let mut files = serde_json::Map::new();
    for (name, schedule) in [("s.json", &a), ("s_prime.json", &b)] {
        let text = schedule.to_json();
        write_atomic(&dir.join(name), text.as_bytes())?;
        files.insert(name.into(), json!(sha256_hex(text.as_bytes())));
    }
    let (n, n_prime) = p.populations();
    let mut manifest = envelope("witness", &[], None);
    manifest["r"] = json!(round);
    manifest["n"] = json!(n);
    manifest["n_prime"] = json!(n_prime);
    manifest["shared_leader_vector"] = exact_json(&p.leader_vector.entries);
    manifest["lift"] = json!(lift_name);
    manifest["D"] = json!(target);
    manifest["node_counts"] = json!([node_count(&a), node_count(&b)]);
    manifest["files"] = Value::Object(files);
    write_atomic(&dir.join("manifest.json"), &serde_json::to_vec_pretty(&manifest).expect("valid JSON"))?;
    Ok(Done { report: manifest, passed: true })
}

fn node_count(s: &AnySchedule) -> usize {
    match s {
        AnySchedule::Graph(g) => g.node_count,
        AnySchedule::Multigraph(m) => m.non_leader_count + 1,
    }
}

fn read_schedule(path: &Path) -> Result<(AnySchedule, String), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let schedule = AnySchedule::from_json(&text)?;
    Ok((schedule, sha256_hex(text.as_bytes())))
}

fn simulate(
    path: &Path,
    protocol: ProtocolName,
    horizon: usize,
    degree_oracle: bool,
    transcript: Option<&Path>,
) -> Result<Done, CliError> {
    let (schedule, hash) = read_schedule(path)?;
    let mut options = RunOptions::default();
    if degree_oracle {
        options = options.with_degree_oracle();
    }
    let (outcome, view, trace) = match (protocol, &schedule) {
        (ProtocolName::Star, AnySchedule::Graph(g)) => summarize(&run(g, &star_counter(), horizon, &options)?),
        (ProtocolName::Eqsolver, AnySchedule::Multigraph(m)) => {
            summarize(&run(m, &equation_solver_counter(horizon), horizon, &options)?)
        }
        (ProtocolName::Degree, AnySchedule::Graph(g)) => {
            let levels = declared_levels(g)?;
            summarize(&run(g, &degree_detector_counter(), horizon, &options.with_levels(levels))?)
        }
        (ProtocolName::Eqsolver, AnySchedule::Graph(_)) => {
            return Err(CliError::Usage("eqsolver needs a multigraph schedule".into()))
        }
        (_, AnySchedule::Multigraph(_)) => {
            return Err(CliError::Usage("star and degree need a graph schedule".into()))
        }
    };
    if let Some(t) = transcript {
        write_atomic(t, &serde_json::to_vec_pretty(&trace).expect("valid JSON"))?;
    }
    let name = match protocol {
        ProtocolName::Star => "star",
        ProtocolName::Eqsolver => "eqsolver",
        ProtocolName::Degree => "degree",
    };
    let mut report = envelope("simulate", &[(path, hash)], None);
    report["protocol"] = json!(name);
    report["horizon"] = json!(horizon);
    report["degree_oracle"] = json!(degree_oracle);
    report["outcome"] = serde_json::to_value(outcome).expect("valid JSON");
    report["leader_view_sha256"] = json!(view);
    Ok(Done { report, passed: true })
}

fn declared_levels(g: &DynamicSchedule) -> Result<Vec<usize>, CliError> {
    persistent_distances(g)
        .per_node_distance
        .iter()
        .enumerate()
        .map(|(v, d)| d.ok_or_else(|| CliError::Usage(format!("node {v} has no persistent distance"))))
        .collect()
}

fn summarize<S, M>(r: &ProtocolRun<S, M>) -> (CountOutcome, String, Value)
where
    S: serde::Serialize,
    M: serde::Serialize,
{
    let view = serde_json::to_vec(&r.leader_states()).expect("states serialize");
    (CountOutcome::from_run(r), sha256_hex(&view), r.transcript_json())
}

fn max_cells() -> Result<u128, CliError> {
    match std::env::var("ANONDYN_MAX_CELLS") {
        Ok(v) => v.trim().parse().map_err(|e| CliError::Usage(format!("ANONDYN_MAX_CELLS={v}: {e}"))),
        Err(_) => Ok(DEFAULT_MAX_CELLS),
    }
}

fn oracle(max_n: u64, max_rounds: usize, out: &Path) -> Result<Done, CliError> {
    let limit = max_cells()?;
    let table = min_distinguishing_round(max_n, max_rounds, limit)?;
    let csv = table.to_csv();
    write_atomic(out, csv.as_bytes())?;
    let disagreeing: Vec<u64> =
        table.rows.iter().filter(|row| row.agrees(max_rounds) == Some(false)).map(|row| row.n).collect();
    let mut report = envelope("oracle", &[], None);
    report["max_n"] = json!(max_n);
    report["max_rounds"] = json!(max_rounds);
    report["max_cells"] = json!(limit.to_string());
    report["table"] = serde_json::to_value(&table.rows).expect("valid JSON");
    report["csv_sha256"] = json!(sha256_hex(csv.as_bytes()));
    report["disagreeing"] = json!(disagreeing);
    Ok(Done { report, passed: disagreeing.is_empty() })
}

/// Plain graph view of a multigraph: leader `0`, node `w` becomes `w + 1`.
fn flatten(m: &MultigraphSchedule) -> DynamicSchedule {
    let rounds = m
        .rounds
        .iter()
        .map(|edges| {
            let mut round: Vec<(usize, usize)> = edges.iter().map(|&(w, _)| (0, w + 1)).collect();
            round.sort_unstable();
            round.dedup();
            round
        })
        .collect();
    DynamicSchedule::new(m.non_leader_count + 1, 0, rounds)
}

fn diameter(path: &Path) -> Result<Done, CliError> {
    let (schedule, hash) = read_schedule(path)?;
    let graph = match &schedule {
        AnySchedule::Graph(g) => g.clone(),
        AnySchedule::Multigraph(m) => {
            if let Some(v) = anondyn::graph::validate_multigraph(m).first() {
                return Err(anondyn::Error::InvalidMultigraph(v.to_string()).into());
            }
            flatten(m)
        }
    };
    if let Some(v) = anondyn::graph::validate_schedule(&graph).first() {
        return Err(anondyn::Error::InvalidSchedule(v.to_string()).into());
    }
    let d = measure_dynamic_diameter(&graph)?;
    let mut report = envelope("diameter", &[(path, hash)], None);
    report["nodes"] = json!(graph.node_count);
    report["rounds"] = json!(graph.len());
    report["diameter"] = json!(d);
    Ok(Done { report, passed: true })
}
