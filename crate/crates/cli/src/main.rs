use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use burnt_pancake::covering::{
    btilde_spectrum_check, check_covering, fiber_map, merged_quotient_spectrum,
    multiplicity_crosscheck, LAPLACIAN_TOLERANCE, MAX_CHECK_N,
};
use burnt_pancake::error::{Error, Result};
use burnt_pancake::exact::ExactMatrix;
use burnt_pancake::quotient::{
    compute_quotient, position_partition, quotient_block, quotient_sum, verify_equitable,
};
use burnt_pancake::report::{write_atomic, Cache, Check, Outcome, RunReport};
use burnt_pancake::spectra::dense::{CLUSTER_TOLERANCE, RESIDUAL_FACTOR};
use burnt_pancake::spectra::scans::{
    gap_from_spectrum, integer_membership_scan_with, lanczos_gap, GapReport,
};
use burnt_pancake::spectra::theorem::{vector_as_i64, PrintedOutcome, MAX_LIFT_N};
use burnt_pancake::spectra::{burnt_dense_spectrum, verify_theorem, Method};
use burnt_pancake::{CayleyGraph, Family};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

const MAX_BUILD_BURNT: usize = 6;
const MAX_BUILD_PLAIN: usize = 8;
const MAX_PARTITION_N: usize = 6;
const MAX_SCAN_N: usize = 6;

#[derive(Parser)]
#[command(
    name = "pancake",
    version,
    about = "Burnt pancake graphs, their quotient and spectra"
)]
struct Cli {
    /// Print the JSON report instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Ignore and do not write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the adjacency matrix in Matrix Market format.
    Build {
        #[arg(long, default_value = "burnt")]
        family: Family,
        #[arg(short = 'n')]
        n: usize,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print M(BP_n) and check it against the sum of permutation matrices.
    Quotient {
        #[arg(short = 'n')]
        n: usize,
        /// Also check the position partition of BP_n is equitable.
        #[arg(long)]
        check_partition: bool,
        /// Write the matrix as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact eigenpair certificates for the integer eigenvalues of M(BP_n).
    VerifyTheorem {
        #[arg(short = 'n')]
        n: usize,
        /// Lift each certificate to BP_n and check it there.
        #[arg(long)]
        lift: bool,
    },
    /// Covering conditions and Laplacian spectrum of the four-vertex projection.
    Cover {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Spectral gaps and integer-eigenvalue tables for n = 2..=nmax.
    Scan {
        #[arg(long)]
        nmax: usize,
        /// Directory for gaps.csv, integers.csv and spectrum CSVs.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = (!cli.no_cache).then(Cache::from_env);
    match run(&cli.command, cache.as_ref()) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print_human(
                    &report,
                    matches!(cli.command, Command::Build { out: None, .. }),
                );
            }
            if report.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_human(report: &RunReport, to_stderr: bool) {
    let mut text = String::new();
    for line in &report.summary {
        text.push_str(line);
        text.push('\n');
    }
    for c in &report.checks {
        let tag = match c.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Finding => "FINDING",
        };
        let mut meta = Vec::new();
        if let Some(m) = &c.method {
            meta.push(m.clone());
        }
        if let Some(t) = c.tolerance {
            meta.push(format!("tol {t:.2e}"));
        }
        let meta = if meta.is_empty() {
            String::new()
        } else {
            format!(" [{}]", meta.join(", "))
        };
        text.push_str(&format!("{tag:<8}{}{meta}\n", c.name));
        if c.outcome != Outcome::Pass {
            text.push_str(&format!("        {}\n", c.detail));
        }
    }
    if to_stderr {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
}

fn run(command: &Command, cache: Option<&Cache>) -> Result<RunReport> {
    match command {
        Command::Build { family, n, out } => cmd_build(*family, *n, out.as_deref()),
        Command::Quotient {
            n,
            check_partition,
            csv,
        } => {
            let key = format!("n{n}{}", if *check_partition { "-partition" } else { "" });
            let report = cached(cache, "quotient", &key, || {
                cmd_quotient(*n, *check_partition)
            })?;
            if let Some(path) = csv {
                write_atomic(path, quotient_block(*n)?.to_csv().as_bytes())?;
            }
            Ok(report)
        }
        Command::VerifyTheorem { n, lift } => {
            let key = format!("n{n}{}", if *lift { "-lift" } else { "" });
            cached(cache, "verify-theorem", &key, || {
                cmd_verify_theorem(*n, *lift)
            })
        }
        Command::Cover { n } => cached(cache, "cover", &format!("n{n}"), || cmd_cover(*n)),
        Command::Scan { nmax, csv_dir } => cmd_scan(*nmax, csv_dir.as_deref(), cache),
    }
}

fn cached(
    cache: Option<&Cache>,
    command: &str,
    key: &str,
    compute: impl FnOnce() -> Result<RunReport>,
) -> Result<RunReport> {
    if let Some(hit) = cache.and_then(|c| c.load(command, key)) {
        return Ok(hit);
    }
    let report = compute()?;
    if let Some(c) = cache {
        if let Err(e) = c.store(command, key, &report) {
            eprintln!("warning: could not write cache: {e}");
        }
    }
    Ok(report)
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn build_limit(family: Family) -> usize {
    match family {
        Family::Burnt => MAX_BUILD_BURNT,
        Family::Plain => MAX_BUILD_PLAIN,
    }
}

fn vertex_count_u128(family: Family, n: usize) -> u128 {
    let fact = (1..=n as u128).fold(1u128, |a, k| a.saturating_mul(k));
    match family {
        Family::Burnt => fact.saturating_mul(1u128.checked_shl(n as u32).unwrap_or(u128::MAX)),
        Family::Plain => fact,
    }
}

fn cmd_build(family: Family, n: usize, out: Option<&Path>) -> Result<RunReport> {
    let limit = build_limit(family);
    if n > limit {
        return Err(Error::BudgetExceeded {
            what: "vertices",
            requested: vertex_count_u128(family, n),
            limit: vertex_count_u128(family, limit),
        });
    }
    let start = Instant::now();
    let graph = CayleyGraph::new(family, n)?;
    let a = graph.build_sparse_adjacency()?;
    let family_name = match family {
        Family::Burnt => "burnt",
        Family::Plain => "plain",
    };
    let mut report = RunReport::new(
        "build",
        json!({"family": family_name, "n": n, "out": out.map(|p| p.display().to_string())}),
    );
    match out {
        Some(path) => {
            let mut buf = Vec::new();
            a.export_matrix_market(&mut buf)?;
            write_atomic(path, &buf)?;
            report.artifacts.push(path.display().to_string());
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            a.export_matrix_market(&mut w)?;
            w.flush()?;
        }
    }
    let regular = (0..a.dimension()).all(|u| a.row(u).len() == graph.degree());
    report.line(format!(
        "{family_name} n = {n}: {} vertices, {} edges, degree {}",
        a.dimension(),
        a.nonzeros() / 2,
        graph.degree()
    ));
    report.push(
        Check::pass_if(
            "adjacency symmetric and regular",
            a.is_symmetric() && regular,
            json!({"vertices": a.dimension(), "nonzeros": a.nonzeros(), "degree": graph.degree()}),
        )
        .method(Method::Exact),
    );
    report.time("total", millis(start));
    Ok(report)
}

fn matrix_lines(m: &ExactMatrix) -> Vec<String> {
    m.to_string().lines().map(|l| format!("  {l}")).collect()
}

fn cmd_quotient(n: usize, check_partition: bool) -> Result<RunReport> {
    let start = Instant::now();
    let block = quotient_block(n)?;
    let sum = quotient_sum(n)?;
    let mut report = RunReport::new(
        "quotient",
        json!({"n": n, "check_partition": check_partition}),
    );
    report.line(format!("M(BP_{n}), rows and columns ordered 1̄..n̄, 1..n:"));
    for l in matrix_lines(&block) {
        report.line(l);
    }
    report.push(
        Check::pass_if(
            "block form equals sum of P(r_i)",
            block == sum,
            json!({"matrix": block.to_json()}),
        )
        .method(Method::Exact),
    );
    if check_partition {
        if n > MAX_PARTITION_N {
            return Err(Error::UnsupportedN {
                op: "quotient --check-partition",
                n,
                min: 1,
                max: MAX_PARTITION_N,
            });
        }
        let graph = CayleyGraph::burnt(n)?;
        let p = position_partition(n)?;
        let outcome = compute_quotient(&graph, &p)?;
        let (ok, detail) = match outcome.matrix() {
            Some(q) => (
                q == &block && verify_equitable(&graph, &p, &block)?,
                json!({"vertices": graph.vertex_count(), "classes": p.class_count()}),
            ),
            None => (
                false,
                json!({"vertices": graph.vertex_count(), "not_equitable": format!("{outcome:?}")}),
            ),
        };
        report.push(
            Check::pass_if(
                format!(
                    "position partition equitable over {} vertices",
                    graph.vertex_count()
                ),
                ok,
                detail,
            )
            .method(Method::Exact),
        );
    }
    report.time("total", millis(start));
    Ok(report)
}

fn cmd_verify_theorem(n: usize, lift: bool) -> Result<RunReport> {
    if lift && n > MAX_LIFT_N {
        return Err(Error::UnsupportedN {
            op: "verify-theorem --lift",
            n,
            min: 1,
            max: MAX_LIFT_N,
        });
    }
    let start = Instant::now();
    let t = verify_theorem(n, lift)?;
    let mut report = RunReport::new("verify-theorem", json!({"n": n, "lift": lift}));
    for c in &t.certificates {
        report.line(format!(
            "λ = {:>3}  {}  {:?}",
            c.lambda,
            if c.verified { "verified" } else { "FAILED" },
            vector_as_i64(&c.vector)
        ));
    }
    report.push(
        Check::pass_if(
            format!("{} certificates verified exactly", t.certificates.len()),
            t.certificates.iter().all(|c| c.verified),
            serde_json::to_value(&t.certificates).unwrap_or(Value::Null),
        )
        .method(Method::Exact),
    );
    report.push(
        Check::pass_if(
            format!("λ-set is [0, {n}] without {}", t.excluded),
            t.lambda_set == t.expected_set,
            json!({"lambda_set": t.lambda_set, "expected": t.expected_set}),
        )
        .method(Method::Exact),
    );
    report.push(
        Check::new(
            format!("{} is not an eigenvalue of the quotient", t.excluded),
            if t.excluded_absent {
                Outcome::Pass
            } else {
                Outcome::Finding
            },
            json!({"excluded": t.excluded}),
        )
        .method(Method::Exact),
    );
    if lift {
        let vertices = t.lifted.first().map_or(0, |l| l.vertex_count);
        report.push(
            Check::pass_if(
                format!(
                    "{} lifted certificates over {vertices} vertices",
                    t.lifted.len()
                ),
                t.lifted.len() == t.certificates.len() && t.lifted.iter().all(|l| l.verified),
                serde_json::to_value(&t.lifted).unwrap_or(Value::Null),
            )
            .method(Method::Exact),
        );
    }
    for a in &t.printed_forms {
        let outcome = match a.outcome {
            PrintedOutcome::Verified => Outcome::Pass,
            _ => Outcome::Finding,
        };
        report.push(
            Check::new(
                format!("printed eigenvector: {}", a.label),
                outcome,
                serde_json::to_value(a).unwrap_or(Value::Null),
            )
            .method(Method::Exact),
        );
    }
    report.time("total", millis(start));
    Ok(report)
}

fn cmd_cover(n: usize) -> Result<RunReport> {
    let start = Instant::now();
    let lap = btilde_spectrum_check(n)?;
    let mut report = RunReport::new("cover", json!({"n": n}));
    report.line(format!(
        "ℒ(B̃) eigenvalues: {}",
        lap.numeric
            .iter()
            .map(|x| format!("{x:.12}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    report.line(format!(
        "as adjacency eigenvalues n(1 − λ): {}",
        lap.converted
            .iter()
            .map(|x| format!("{x:.6}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    report.push(
        Check::pass_if(
            format!("ℒ(B̃) spectrum is {{0, 1/{n}, 1/{n}, 1}}"),
            lap.max_error <= lap.tolerance,
            json!({"numeric": lap.numeric, "max_error": lap.max_error}),
        )
        .method(Method::Dense)
        .tolerance(LAPLACIAN_TOLERANCE),
    );
    report.push(
        Check::pass_if(
            "characteristic polynomial of D⁻¹L has those roots",
            lap.exact_match,
            serde_json::to_value(&lap.exact_roots).unwrap_or(Value::Null),
        )
        .method(Method::Exact),
    );
    if n <= MAX_CHECK_N {
        let cover = check_covering(&fiber_map(n)?)?;
        let failures = cover.condition1_failures();
        for c in cover.condition1.iter().filter(|c| !c.passed) {
            if let Some((a, b)) = &c.witnesses {
                report.line(format!(
                    "condition (1) fails for {} → {}: {} has {}, {} has {}",
                    c.fiber, c.target, a.vertex, a.sum, b.vertex, b.sum
                ));
            }
        }
        report.push(
            Check::new(
                "covering condition (1)",
                if failures.is_empty() {
                    Outcome::Pass
                } else {
                    Outcome::Finding
                },
                serde_json::to_value(&cover.condition1).unwrap_or(Value::Null),
            )
            .method(Method::Exact),
        );
        let expected_m: u64 = (1u64 << (n - 1)) * (1..n as u64).product::<u64>();
        let m = cover.index.as_ref().map(|m| m.to_string());
        if let Some(m) = &m {
            report.line(format!("covering index m = {m}"));
        }
        report.push(
            Check::pass_if(
                format!("covering condition (2) with m = {expected_m}"),
                m.as_deref() == Some(expected_m.to_string().as_str())
                    && cover.inconsistencies.is_empty(),
                json!({"index": m, "inconsistencies": cover.inconsistencies,
                       "pairs": serde_json::to_value(&cover.condition2).unwrap_or(Value::Null)}),
            )
            .method(Method::Exact),
        );
        let merged = merged_quotient_spectrum(n)?;
        report.push(
            Check::pass_if(
                format!(
                    "merged fibers equitable with spectrum {{{n}, {}, 0}}",
                    n - 1
                ),
                merged.passed(),
                serde_json::to_value(&merged).unwrap_or(Value::Null),
            )
            .method(Method::Exact),
        );
    } else {
        report.line(format!(
            "exhaustive fiber checks skipped for n > {MAX_CHECK_N}"
        ));
    }
    if (3..=4).contains(&n) {
        let m = multiplicity_crosscheck(n)?;
        report.push(
            Check::pass_if(
                format!("multiplicity of {} in sp(BP_{n}) is at least 2", n - 1),
                m.passed(),
                serde_json::to_value(&m).unwrap_or(Value::Null),
            )
            .method(Method::Dense)
            .tolerance(CLUSTER_TOLERANCE),
        );
    }
    report.time("total", millis(start));
    Ok(report)
}

fn gap_checks(report: &mut RunReport, g: &GapReport) {
    let detail = serde_json::to_value(g).unwrap_or(Value::Null);
    report.push(
        Check::pass_if(
            format!("n = {}: λ₂ residual within bound", g.n),
            g.residual <= g.tolerance,
            detail.clone(),
        )
        .method(g.method)
        .tolerance(g.tolerance),
    );
    report.push(
        Check::new(
            format!("n = {}: spectral gap in (0, 1)", g.n),
            if g.in_unit_interval() {
                Outcome::Pass
            } else {
                Outcome::Finding
            },
            detail,
        )
        .method(g.method)
        .tolerance(g.tolerance),
    );
}

fn scan_one(n: usize, cache: Option<&Cache>) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("scan", json!({"n": n}));
    if n <= 5 {
        let spectrum = burnt_dense_spectrum(n)?;
        report.time(&format!("dense_n{n}"), millis(start));
        if let Some(c) = cache {
            if let Ok(p) = c.store_text(
                "spectrum-burnt",
                &format!("n{n}"),
                "csv",
                &spectrum.to_csv(),
            ) {
                report.artifacts.push(p.display().to_string());
            }
        }
        report
            .data
            .insert("spectrum_csv".into(), Value::from(spectrum.to_csv()));
        gap_checks(&mut report, &gap_from_spectrum(n, &spectrum));
        if n >= 3 {
            let scan = integer_membership_scan_with(n, &spectrum)?;
            report.push(
                Check::new(
                    format!(
                        "n = {n}: every integer in [{}, {n}] is an eigenvalue",
                        1 - n as i64
                    ),
                    if scan.all_present() {
                        Outcome::Pass
                    } else {
                        Outcome::Finding
                    },
                    serde_json::to_value(&scan).unwrap_or(Value::Null),
                )
                .method(Method::Exact)
                .tolerance(CLUSTER_TOLERANCE),
            );
        }
    } else {
        let g = lanczos_gap(n)?;
        report.line(format!(
            "n = {n}: Lanczos gap only; integer table not computed"
        ));
        gap_checks(&mut report, &g);
    }
    report.time(&format!("n{n}"), millis(start));
    Ok(report)
}

fn cmd_scan(nmax: usize, csv_dir: Option<&Path>, cache: Option<&Cache>) -> Result<RunReport> {
    if !(2..=MAX_SCAN_N).contains(&nmax) {
        return Err(Error::UnsupportedN {
            op: "scan",
            n: nmax,
            min: 2,
            max: MAX_SCAN_N,
        });
    }
    let mut report = RunReport::new("scan", json!({"nmax": nmax}));
    let mut gaps_csv = String::from("n,lambda2,gap,method,residual,tolerance\n");
    let mut ints_csv = String::from("n,lambda,present,method,evidence\n");
    report.line(format!(
        "{:>3} {:>16} {:>16} {:>8} {:>10}",
        "n", "lambda2", "gap", "method", "residual"
    ));
    let mut tables = Vec::new();
    for n in 2..=nmax {
        let key = format!("n{n}");
        let sub = cached(cache, "scan", &key, || scan_one(n, cache))?;
        for c in &sub.checks {
            let d = &c.detail;
            if c.name.ends_with("gap in (0, 1)") {
                report.line(format!(
                    "{:>3} {:>16.12} {:>16.12} {:>8} {:>10.2e}",
                    n,
                    d["lambda2"].as_f64().unwrap_or(f64::NAN),
                    d["gap"].as_f64().unwrap_or(f64::NAN),
                    d["method"].as_str().unwrap_or(""),
                    d["residual"].as_f64().unwrap_or(f64::NAN)
                ));
                gaps_csv.push_str(&format!(
                    "{n},{},{},{},{},{}\n",
                    d["lambda2"],
                    d["gap"],
                    d["method"].as_str().unwrap_or(""),
                    d["residual"],
                    d["tolerance"]
                ));
            }
            if let Some(entries) = d["entries"].as_array() {
                let mut present = Vec::new();
                let mut absent = Vec::new();
                for e in entries {
                    let lambda = e["lambda"].as_i64().unwrap_or_default();
                    let is_present = e["present"].as_bool().unwrap_or(false);
                    if is_present {
                        present.push(lambda);
                    } else {
                        absent.push(lambda);
                    }
                    ints_csv.push_str(&format!(
                        "{n},{lambda},{is_present},{},{}\n",
                        e["method"].as_str().unwrap_or(""),
                        e["evidence"]["kind"].as_str().unwrap_or("")
                    ));
                }
                tables.push(format!("n = {n}: present {present:?}, absent {absent:?}"));
            }
        }
        if let Some(dir) = csv_dir {
            if let Some(csv) = sub.data.get("spectrum_csv").and_then(Value::as_str) {
                let path = dir.join(format!("spectrum-n{n}.csv"));
                write_atomic(&path, csv.as_bytes())?;
                report.artifacts.push(path.display().to_string());
            }
        }
        for l in sub.summary {
            tables.push(l);
        }
        for c in sub.checks {
            report.push(c);
        }
        report.artifacts.extend(sub.artifacts);
        report.timings_ms.extend(sub.timings_ms);
    }
    for t in tables {
        report.line(t);
    }
    if let Some(dir) = csv_dir {
        for (name, text) in [("gaps.csv", &gaps_csv), ("integers.csv", &ints_csv)] {
            let path = dir.join(name);
            write_atomic(&path, text.as_bytes())?;
            report.artifacts.push(path.display().to_string());
        }
    }
    report.line(format!(
        "dense residual bound {RESIDUAL_FACTOR:e} × dimension, cluster tolerance {CLUSTER_TOLERANCE:e}"
    ));
    Ok(report)
}
