mod args;
mod config;
mod exec;

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::Parser;
use ferchar::verify::VerificationReport;
use ferchar::GradedCharacter;

use args::{Cli, Format};
use config::{Job, RunConfig};
use exec::{Outcome, Partial};

/// Why a run stopped short.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Resource(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Internal(_) => 70,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Resource(m) | Failure::Internal(m) => m,
        }
    }
}

const MISMATCH: u8 = 1;

fn write_out(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}

fn render_character(ch: &GradedCharacter, format: Format) -> String {
    match format {
        Format::Json => ch.to_json_string() + "\n",
        Format::Table => ch.render_table(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["z", "u", "q", "dim"]).expect("in-memory write");
            for ((z, u, q), d) in ch.iter() {
                w.write_record([z.to_string(), u.to_string(), q.to_string(), d.to_string()]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv is utf-8")
        }
    }
}

fn render_reports(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
        Format::Table => reports.iter().map(|r| r.summary_line() + "\n").collect(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(VerificationReport::csv_header().split(',')).expect("in-memory write");
            for r in reports {
                w.write_record(r.csv_record()).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv is utf-8")
        }
    }
}

/// Writes the reports and picks the exit code from their expectations.
fn finish_reports(cfg: &RunConfig, reports: &[VerificationReport]) -> Result<u8, Failure> {
    write_out(cfg, &render_reports(reports, cfg.format.unwrap_or_default()))?;
    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passes()).collect();
    for r in &failed {
        log::error!("unexpected verdict: {}", r.summary_line());
    }
    Ok(if failed.is_empty() { 0 } else { MISMATCH })
}

/// Partial reports on a resource stop, then the stop itself.
fn stop_with_partial(cfg: &RunConfig, done: &Partial, why: Failure) -> Result<u8, Failure> {
    let reports: Vec<VerificationReport> = done.lock().expect("report map").values().flatten().cloned().collect();
    write_out(cfg, &render_reports(&reports, cfg.format.unwrap_or_default()))?;
    Err(why)
}

fn run(cfg: RunConfig) -> Result<u8, Failure> {
    let job = cfg.job()?;
    let window = cfg.window()?;
    let mode = cfg.field_mode();
    let threads = cfg.thread_count()?;
    let timeout = cfg.timeout_secs.map(Duration::from_secs);
    let timed_out = |what: &str| Failure::Resource(format!("{what} did not finish within {} s", cfg.timeout_secs.unwrap_or(0)));
    match job {
        Job::Char(e) => match exec::run_bounded(threads, timeout, move || exec::evaluate(&e, window, mode))? {
            Outcome::Done(ch) => {
                write_out(&cfg, &render_character(&ch?, cfg.format.unwrap_or_default()))?;
                Ok(0)
            }
            Outcome::TimedOut => Err(timed_out("character")),
        },
        Job::Verify(target) => {
            let done: Partial = Arc::default();
            let sink = Arc::clone(&done);
            let outcome = exec::run_bounded(threads, timeout, move || {
                let r = exec::verify(&target, window, mode)?;
                sink.lock().expect("report map").insert(0, r);
                Ok::<(), Failure>(())
            })?;
            match outcome {
                Outcome::Done(Ok(())) => finish_reports(&cfg, &done.lock().expect("report map")[&0]),
                Outcome::Done(Err(e @ Failure::Resource(_))) => stop_with_partial(&cfg, &done, e),
                Outcome::Done(Err(e)) => Err(e),
                Outcome::TimedOut => stop_with_partial(&cfg, &done, timed_out("verification")),
            }
        }
        Job::Scan(scan) => {
            let done: Partial = Arc::default();
            let sink = Arc::clone(&done);
            let outcome = exec::run_bounded(threads, timeout, move || exec::scan(&scan, window, mode, &sink))?;
            match outcome {
                Outcome::Done(Ok(())) => {
                    let reports: Vec<VerificationReport> = done.lock().expect("report map").values().flatten().cloned().collect();
                    finish_reports(&cfg, &reports)
                }
                Outcome::Done(Err(e @ Failure::Resource(_))) => stop_with_partial(&cfg, &done, e),
                Outcome::Done(Err(e)) => Err(e),
                Outcome::TimedOut => stop_with_partial(&cfg, &done, timed_out("scan")),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let save = cli.save_config.clone();
    let result = RunConfig::resolve(cli).and_then(|cfg| {
        if let Some(path) = save {
            let text = serde_json::to_string_pretty(&cfg).expect("config serializes");
            std::fs::write(&path, text + "\n").map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
        }
        run(cfg)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ferchar: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
