//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a run
//! aborts, 2 on usage or input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::differentiator::FilteringDifferentiator;
use crate::error::{Error, Result};
use crate::scenario::{builtin_example, Scenario};
use crate::suites::{run_verify, Suite};

#[derive(Debug, Parser)]
#[command(name = "ubst", version, about = "Prescribed-time redesign of finite-time controllers and differentiators")]
pub struct Args {
    /// Built-in example (1, 2 or 3).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3), conflicts_with = "scenario")]
    pub example: Option<u8>,
    /// Add the measurement noise to the example's input signal.
    #[arg(long, requires = "example")]
    pub noise: bool,
    /// Scenario JSON file.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Override the base step size.
    #[arg(long)]
    pub h: Option<f64>,
    /// Override the output stride.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Run a verification suite instead of a scenario.
    #[arg(long, value_enum, conflicts_with_all = ["example", "scenario", "differentiate"])]
    pub verify: Option<Suite>,
    /// Differentiate a sampled `t,y` CSV with the configured differentiator.
    #[arg(long)]
    pub differentiate: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema { .. } | Error::Json(_) | Error::InvalidParameter(_) | Error::DisturbanceBound { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

/// Parses `argv` and runs; returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&args) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn run(args: &Args) -> std::result::Result<bool, Failure> {
    if let Some(suite) = args.verify {
        let report = run_verify(suite);
        for s in &report.suites {
            for c in &s.checks {
                println!("{} {}/{}", if c.pass { "PASS" } else { "FAIL" }, s.suite, c.name);
            }
        }
        let json = serde_json::to_string_pretty(&report).map_err(Error::from)?;
        write_atomic(&args.out, &format!("verify_{}.json", suite.name()), &json)?;
        return Ok(report.pass);
    }

    let scenario = load_scenario(args)?;
    if let Some(input) = &args.differentiate {
        let text = fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
        let samples = parse_samples(&text).map_err(Failure::Usage)?;
        let csv = differentiate_samples(&scenario, &samples)?;
        let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("input");
        let path = write_atomic(&args.out, &format!("{stem}.diff.csv"), &csv)?;
        println!("wrote {}", path.display());
        return Ok(true);
    }

    let out = scenario.run()?;
    let report = &out.report;
    let report_json = serde_json::to_string_pretty(report).map_err(Error::from)?;
    write_atomic(&args.out, &format!("{}.csv", scenario.name), &out.csv)?;
    write_atomic(&args.out, &format!("{}.report.json", scenario.name), &report_json)?;
    write_atomic(&args.out, &format!("{}.scenario.json", scenario.name), &scenario.to_json()?)?;
    let settle = report
        .settling
        .settle_time
        .map_or("none".to_string(), |t| format!("{t:.6}"));
    println!(
        "{} {}: settle {} (bound {:.6}), max gain {:.3e}, {} samples",
        if report.pass { "PASS" } else { "FAIL" },
        report.name,
        settle,
        report.ubst,
        report.max_gain,
        report.samples
    );
    if let Some(note) = &report.note {
        println!("note: {note}");
    }
    Ok(report.pass)
}

fn load_scenario(args: &Args) -> std::result::Result<Scenario, Failure> {
    let mut scenario = match (&args.scenario, args.example) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Scenario::from_json(&text)?
        }
        (None, Some(id)) => builtin_example(id, args.noise)?,
        (None, None) if args.differentiate.is_some() => builtin_example(3, false)?,
        (None, None) => return Err(Failure::Usage("one of --example, --scenario or --verify is required".into())),
    };
    if let Some(h) = args.h {
        scenario.step.h = h;
    }
    if let Some(s) = args.stride {
        scenario.output_stride = s;
    }
    scenario.validate()?;
    Ok(scenario)
}

/// Parses `t,y` rows; a non-numeric first line is taken as a header.
pub fn parse_samples(text: &str) -> std::result::Result<Vec<(f64, f64)>, String> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let parsed = (cols.next().map(str::parse::<f64>), cols.next().map(str::parse::<f64>));
        match parsed {
            (Some(Ok(t)), Some(Ok(y))) => rows.push((t, y)),
            _ if i == 0 => continue,
            _ => return Err(format!("line {}: expected `t,y`", i + 1)),
        }
    }
    if rows.len() < 2 {
        return Err("need at least two samples".into());
    }
    if rows.windows(2).any(|w| !(w[1].0 > w[0].0)) || rows.iter().any(|(t, y)| !t.is_finite() || !y.is_finite()) {
        return Err("sample times must be finite and strictly increasing".into());
    }
    Ok(rows)
}

/// Runs the scenario's differentiator over samples under a zero-order hold,
/// starting at the first sample time from the scenario's initial state.
pub fn differentiate_samples(scenario: &Scenario, samples: &[(f64, f64)]) -> Result<String> {
    let spec = scenario
        .differentiator
        .as_ref()
        .ok_or_else(|| Error::schema("differentiator", "scenario has no differentiator section"))?;
    let built = scenario.build()?;
    let pair = built.pair.with_t0(samples[0].0);
    let mut diff = FilteringDifferentiator::new(pair, spec.n_d, spec.n_f, built.policy)?;
    let (w, z) = scenario.x0.split_at(spec.n_f);
    diff.set_state(w, z)?;

    let mut csv = String::from("t");
    for i in 0..=spec.n_d {
        write!(csv, ",z{i}").unwrap();
    }
    for i in 1..=spec.n_f {
        write!(csv, ",w{i}").unwrap();
    }
    csv.push_str(",kappa\n");
    let row = |csv: &mut String, d: &FilteringDifferentiator| {
        let e = d.estimate();
        write!(csv, "{:.16e}", e.t).unwrap();
        for v in e.derivatives.iter().chain(&e.residuals) {
            write!(csv, ",{v:.16e}").unwrap();
        }
        writeln!(csv, ",{:.16e}", e.kappa).unwrap();
    };
    row(&mut csv, &diff);
    for pair in samples.windows(2) {
        let (t, y) = pair[0];
        diff.step(y, pair[1].0 - t)?;
        row(&mut csv, &diff);
    }
    Ok(csv)
}

/// Writes via a temporary file in the same directory, then renames.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_with_header() {
        let rows = parse_samples("t,y\n0,1\n0.5,2\n").unwrap();
        assert_eq!(rows, vec![(0.0, 1.0), (0.5, 2.0)]);
        assert!(parse_samples("0,1\n0,2\n").is_err());
        assert!(parse_samples("0,1\nx,2\n").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(main_with(["ubst"]), 2);
        assert_eq!(main_with(["ubst", "--example", "4"]), 2);
        assert_eq!(main_with(["ubst", "--verify", "bogus"]), 2);
    }
}
