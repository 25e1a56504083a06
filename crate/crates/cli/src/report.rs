//! Deterministic report assembly: the text report is byte-identical for
//! identical configs and versions regardless of parallelism; wall times go
//! to the JSON report and stderr only.

use crate::config::ConfigFile;
use crate::tasks::{run_task, RunOptions, Status, TaskOutcome};
use rayon::prelude::*;
use serde_json::json;
use std::time::Instant;

pub struct Report {
    pub version: String,
    pub config_echo: String,
    pub results: Vec<TaskResult>,
}

pub struct TaskResult {
    pub index: usize,
    pub kind: &'static str,
    pub outcome: TaskOutcome,
    pub millis: u128,
}

pub fn run_all(cfg: &ConfigFile, opts: &RunOptions) -> Report {
    let results: Vec<TaskResult> = cfg
        .tasks
        .par_iter()
        .enumerate()
        .map(|(index, spec)| {
            let start = Instant::now();
            let outcome = run_task(cfg, spec, opts);
            TaskResult {
                index,
                kind: spec.kind_name(),
                outcome,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_echo: cfg.echo(),
        results,
    }
}

pub fn exit_code(report: &Report) -> i32 {
    if report
        .results
        .iter()
        .any(|r| r.outcome.status == Status::Error)
    {
        3
    } else if report
        .results
        .iter()
        .any(|r| r.outcome.status == Status::Fail)
    {
        1
    } else {
        0
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    }
}

pub fn render_text(report: &Report, cfg: &ConfigFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("iwafitt {}\n", report.version));
    out.push_str(&format!("config: {}\n", report.config_echo));
    for r in &report.results {
        out.push_str(&format!(
            "task {} [{}] status={} precision=(N={}, M={})\n",
            r.index + 1,
            r.kind,
            status_str(r.outcome.status),
            cfg.coeff_precision,
            cfg.t_precision
        ));
        for line in &r.outcome.lines {
            out.push_str(&format!("  {line}\n"));
        }
        for ideal in &r.outcome.ideals {
            out.push_str(&format!("  {} = ({})\n", ideal.role, ideal.generators.join(", ")));
        }
        if let Some(w) = &r.outcome.witness {
            out.push_str(&format!("  witness: {w}\n"));
        }
    }
    let passed = report
        .results
        .iter()
        .filter(|r| r.outcome.status == Status::Pass)
        .count();
    let failed = report
        .results
        .iter()
        .filter(|r| r.outcome.status == Status::Fail)
        .count();
    let errors = report
        .results
        .iter()
        .filter(|r| r.outcome.status == Status::Error)
        .count();
    out.push_str(&format!(
        "summary: {passed} passed, {failed} failed, {errors} errors\n"
    ));
    out
}

pub fn render_json(report: &Report, cfg: &ConfigFile) -> serde_json::Value {
    json!({
        "version": report.version,
        "config": {
            "p": cfg.p,
            "coeff_precision": cfg.coeff_precision,
            "t_precision": cfg.t_precision,
            "group_orders": cfg.group_orders,
            "echo": report.config_echo,
        },
        "tasks": report.results.iter().map(|r| json!({
            "id": r.index + 1,
            "kind": r.kind,
            "status": status_str(r.outcome.status),
            "precision": {"N": cfg.coeff_precision, "M": cfg.t_precision},
            "ideals": r.outcome.ideals.iter().map(|i| json!({
                "role": i.role,
                "generators": i.generators,
            })).collect::<Vec<_>>(),
            "detail": r.outcome.lines,
            "witness": r.outcome.witness,
            "millis": r.millis,
        })).collect::<Vec<_>>(),
    })
}
