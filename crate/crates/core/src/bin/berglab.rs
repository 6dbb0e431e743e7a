//! Command-line front end: run verification scenarios and emit reports.
//!
//! Usage:
//!   berglab run <config.json | builtin-id> [--out PATH] [--format json|csv]
//!   berglab list-scenarios
//!   berglab show-scenario <id>
//!
//! `run` exits 0 exactly when every check passes. Reports are byte-identical
//! across runs on the same platform; the human summary goes to stderr when
//! the report itself is printed to stdout.

use berglab::scenario::{self, Report, ReportFormat, ScenarioConfig};
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

/// Write to stdout, tolerating a closed pipe (e.g. `berglab … | head`).
fn emit(s: &str) {
    let _ = std::io::stdout().write_all(s.as_bytes());
}

fn usage() -> ExitCode {
    eprintln!(
        "usage:\n  berglab run <config.json | builtin-id> [--out PATH] [--format json|csv]\n  \
         berglab list-scenarios\n  berglab show-scenario <id>"
    );
    ExitCode::from(2)
}

fn load_config(arg: &str) -> Result<ScenarioConfig, String> {
    if Path::new(arg).exists() {
        let text = std::fs::read_to_string(arg).map_err(|e| format!("reading {arg}: {e}"))?;
        serde_json::from_str(&text).map_err(|e| format!("parsing {arg}: {e}"))
    } else {
        scenario::builtin_scenario(arg)
            .map_err(|_| format!("`{arg}` is neither a config file nor a built-in scenario id"))
    }
}

fn summary_lines(report: &Report) -> String {
    let mut out = String::new();
    for r in &report.records {
        let t = r
            .t
            .iter()
            .map(|c| format!("{:+.3}{:+.3}i", c[0], c[1]))
            .collect::<Vec<_>>()
            .join(", ");
        let loc = if t.is_empty() {
            String::new()
        } else {
            format!(" @ t = [{t}]")
        };
        out.push_str(&format!(
            "[{}] {}{}  value = {:.6e}  tol = {:.1e}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.check,
            loc,
            r.value,
            r.tolerance
        ));
    }
    out.push_str(&format!(
        "{}: {} of {} records pass\n",
        report.scenario_id,
        report.records.iter().filter(|r| r.pass).count(),
        report.records.len()
    ));
    out
}

fn cmd_run(args: &[String]) -> ExitCode {
    if args.is_empty() {
        return usage();
    }
    let mut config = match load_config(&args[0]) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut i = 1;
    while i < args.len() {
        match args[i].as_str() {
            "--out" if i + 1 < args.len() => {
                config.output.path = Some(args[i + 1].clone());
                i += 2;
            }
            "--format" if i + 1 < args.len() => {
                config.output.format = match args[i + 1].as_str() {
                    "json" => ReportFormat::Json,
                    "csv" => ReportFormat::Csv,
                    other => {
                        eprintln!("error: unknown format `{other}`");
                        return ExitCode::from(2);
                    }
                };
                i += 2;
            }
            other => {
                eprintln!("error: unknown argument `{other}`");
                return usage();
            }
        }
    }
    let report = match scenario::run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let body = match config.output.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv(),
    };
    match &config.output.path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("error: writing {path}: {e}");
                return ExitCode::from(2);
            }
            emit(&summary_lines(&report));
            emit(&format!("report: {path}\n"));
        }
        None => {
            eprint!("{}", summary_lines(&report));
            emit(&body);
        }
    }
    if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(|s| s.as_str()) {
        Some("run") => cmd_run(&args[1..]),
        Some("list-scenarios") => {
            for (id, desc) in scenario::list_scenarios() {
                emit(&format!("{id:24} {desc}\n"));
            }
            ExitCode::SUCCESS
        }
        Some("show-scenario") => match args.get(1) {
            Some(id) => match scenario::builtin_scenario(id) {
                Ok(cfg) => {
                    emit(&serde_json::to_string_pretty(&cfg).expect("serializes"));
                    emit("\n");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            },
            None => usage(),
        },
        _ => usage(),
    }
}
