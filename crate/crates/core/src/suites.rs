//! Verification suites behind `--verify`: each check records pass/fail and
//! the numbers it was judged on.

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::fields::{CorrectionField, DriftG};
use crate::linalg::{output_injection, spectral_abscissa};
use crate::redesign::SystemPair;
use crate::scenario::{builtin_example, example_signal, Scenario};
use crate::sim::{integrate, DisturbanceSignal, OutputGrid, RedesignedDynamics, StepPolicy};
use crate::time_scaling::{choose_alpha_for_slack, compute_eta, BlowUpProfile, ProfileKind};
use crate::verify::{
    check_gain_bound, check_ubst_sweep, equivalence_oracle, estimate_settling_time, decay_condition,
    lyapunov_residual, lyapunov_solve, min_linear_gain, profile_identities, resolvable_tau, SweepReport,
    DEFAULT_DWELL, DEFAULT_EPSILON,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Profiles,
    Equivalence,
    Ubst,
    Gains,
    Lyapunov,
    Decay,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Profiles,
        Suite::Equivalence,
        Suite::Ubst,
        Suite::Gains,
        Suite::Lyapunov,
        Suite::Decay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Profiles => "profiles",
            Suite::Equivalence => "equivalence",
            Suite::Ubst => "ubst",
            Suite::Gains => "gains",
            Suite::Lyapunov => "lyapunov",
            Suite::Decay => "decay",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub evidence: Value,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, evidence: Value) -> Self {
        Self { name: name.into(), pass, evidence }
    }

    fn from_result(name: &str, r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| Check::new(name, false, json!({ "error": e.to_string() })))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

/// Runs `suite` (every suite for [`Suite::All`], fanned out but reported in fixed order).
pub fn run_verify(suite: Suite) -> VerifyReport {
    let selected: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let suites: Vec<SuiteReport> = selected.par_iter().map(|&s| run_suite(s)).collect();
    let pass = suites.iter().all(|s| s.pass);
    VerifyReport { suites, pass }
}

fn run_suite(suite: Suite) -> SuiteReport {
    let checks = match suite {
        Suite::Profiles => profiles(),
        Suite::Equivalence => equivalence(),
        Suite::Ubst => ubst(),
        Suite::Gains => gains(),
        Suite::Lyapunov => lyapunov(),
        Suite::Decay => decay(),
        Suite::All => unreachable!("expanded by run_verify"),
    };
    let pass = checks.iter().all(|c| c.pass);
    SuiteReport { suite: suite.name(), checks, pass }
}

fn profiles() -> Vec<Check> {
    let mut checks = Vec::new();
    let cases = [
        ("exponential", BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY)),
        ("rational", BlowUpProfile::rational(1.0, f64::INFINITY)),
    ];
    for (label, profile) in cases {
        let name = format!("identities/{label}");
        checks.push(Check::from_result(
            &name,
            profile.and_then(|p| {
                let hi = resolvable_tau(&p, 50.0);
                let r = profile_identities(&p, 1e-3, hi, 200)?;
                let pass = r.reciprocal <= 1e-12 && r.composition <= 1e-9 && r.quadrature <= 1e-8;
                Ok(Check::new(&name, pass, serde_json::to_value(&r).unwrap_or_default()))
            }),
        ));
    }
    for t_f in [2f64.ln(), 5.0, f64::INFINITY] {
        let kind = ProfileKind::Exponential { alpha: 1.0 };
        let eta = compute_eta(&kind, t_f);
        let closed = 1.0 - (-t_f).exp();
        let err = (eta - closed).abs();
        checks.push(Check::new(
            format!("eta/exponential/T_f={t_f}"),
            err <= 2.0 * f64::EPSILON,
            json!({ "eta": eta, "closed_form": closed, "abs_error": err }),
        ));
    }
    let epsilon = 1e-3;
    checks.push(Check::from_result(
        "slack/T_max*=233.7349",
        choose_alpha_for_slack(1.0, 233.7349, 1.0, epsilon).map(|c| {
            Check::new("slack/T_max*=233.7349", c.slack <= epsilon, json!({ "alpha": c.alpha, "slack": c.slack, "epsilon": epsilon }))
        }),
    ));
    checks
}

/// Linear `n = 2` pair used by the equivalence and Lyapunov checks.
pub fn linear_pair(r: f64, kappa_max: Option<f64>) -> Result<SystemPair> {
    let mut profile = BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY)?;
    if let Some(k) = kappa_max {
        profile = profile.with_kappa_max(k)?;
    }
    SystemPair::new(
        profile,
        CorrectionField::linear(vec![-2.0, -1.0])?,
        DriftG::new(0, vec![-2.0, -1.0])?,
        r,
        2.5,
        0.0,
    )
}

fn uniform_grid(t_max: f64, points: usize) -> Vec<f64> {
    (0..=points).map(|k| t_max * k as f64 / points as f64).collect()
}

fn equivalence() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(Check::from_result(
        "linear/h-halving",
        (|| {
            let pair = linear_pair(3.0, None)?;
            let grid = uniform_grid(pair.profile().psi(3.0)?, 1000);
            let coarse = equivalence_oracle(&pair, &[1.0, 0.0], 3.0, &grid, &DisturbanceSignal::Zero, 1e-5)?;
            let fine = equivalence_oracle(&pair, &[1.0, 0.0], 3.0, &grid, &DisturbanceSignal::Zero, 5e-6)?;
            let ratio = coarse / fine;
            Ok(Check::new(
                "linear/h-halving",
                coarse <= 1e-3 && (ratio - 2.0).abs() <= 0.4,
                json!({ "deviation_h": coarse, "deviation_h_half": fine, "ratio": ratio }),
            ))
        })(),
    ));
    checks.push(Check::from_result(
        "linear/zero-initial-state",
        (|| {
            let pair = linear_pair(3.0, None)?;
            let grid = uniform_grid(pair.profile().psi(3.0)?, 100);
            let d = equivalence_oracle(&pair, &[0.0, 0.0], 3.0, &grid, &DisturbanceSignal::Zero, 1e-4)?;
            Ok(Check::new("linear/zero-initial-state", d == 0.0, json!({ "deviation": d })))
        })(),
    ));
    checks.push(Check::from_result(
        "canonical/disturbed",
        (|| {
            let built = builtin_example(3, false)?.build()?;
            let pair = built.pair;
            let profile = pair.profile().clone();
            // δ̂(τ) = 2.5 cos τ expressed in t
            let disturbance = move |t: f64| 2.5 * profile.psi_inv(t).map(f64::cos).unwrap_or(0.0);
            let grid = uniform_grid(pair.profile().psi(3.0)?, 1000);
            let d = equivalence_oracle(&pair, &[10.0, 0.0], 3.0, &grid, &disturbance, 1e-5)?;
            Ok(Check::new("canonical/disturbed", d <= 1e-2, json!({ "deviation": d })))
        })(),
    ));
    checks
}

fn sweep_inits(n: usize) -> Vec<Vec<f64>> {
    let mut inits = Vec::new();
    for k in 0..=2 {
        for sign in [1.0, -1.0] {
            let mut x = vec![0.0; n];
            x[0] = sign * 10f64.powi(k);
            inits.push(x);
        }
    }
    inits
}

/// One sweep per field family: linear (`r = 1.1 r_min`), HOSM (example 1
/// gains) and the composite canonical field (example 3), the latter two under
/// the example signal's disturbance.
pub fn ubst_sweeps() -> Vec<(&'static str, Result<SweepReport>)> {
    let linear = (|| {
        let a = output_injection(&[-2.0, -1.0]);
        let r = 1.1 * min_linear_gain(&a)?;
        let pair = linear_pair(r, Some(1e6))?;
        let policy = StepPolicy::rk4(1e-5);
        Ok(check_ubst_sweep(&pair, &sweep_inits(2), &DisturbanceSignal::Zero, &policy, 2.0, 100, DEFAULT_EPSILON, DEFAULT_DWELL))
    })();
    let from_example = |id: u8| -> Result<SweepReport> {
        let scenario: Scenario = builtin_example(id, false)?;
        let built = scenario.build()?;
        let n = scenario.order();
        let delta = DisturbanceSignal::DerivativeOfSignal {
            signal: example_signal(),
            order: scenario.differentiator.as_ref().map_or(n as u32, |d| (d.n_d + 1) as u32),
        };
        Ok(check_ubst_sweep(&built.pair, &sweep_inits(n), &delta, &built.policy, 1.6, 100, DEFAULT_EPSILON, DEFAULT_DWELL))
    };
    vec![("linear", linear), ("hosm", from_example(1)), ("canonical", from_example(3))]
}

fn ubst() -> Vec<Check> {
    ubst_sweeps()
        .into_iter()
        .map(|(family, report)| {
            let name = format!("sweep/{family}");
            Check::from_result(
                &name,
                report.map(|r| {
                    let pass = r.pass && (family != "linear" || r.nondecreasing_in_norm);
                    Check::new(&name, pass, serde_json::to_value(&r).unwrap_or_default())
                }),
            )
        })
        .collect()
}

fn gains() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(Check::from_result(
        "example3/gain-bound",
        (|| {
            let scenario = builtin_example(3, false)?;
            let out = scenario.run()?;
            let built = scenario.build()?;
            let r = check_gain_bound(&out.trajectory, built.pair.profile(), 233.7349)?;
            Ok(Check::new("example3/gain-bound", r.pass, serde_json::to_value(&r).unwrap_or_default()))
        })(),
    ));
    checks.push(Check::from_result(
        "rational/unbounded-skip",
        (|| {
            let p = BlowUpProfile::rational(1.0, f64::INFINITY)?;
            let pair = SystemPair::new(
                p.clone(),
                CorrectionField::linear(vec![-2.0, -1.0])?,
                DriftG::new(0, vec![-2.0, -1.0])?,
                1.0,
                0.0,
                0.0,
            )?;
            let traj = integrate(
                &RedesignedDynamics { pair: &pair, disturbance: &DisturbanceSignal::Zero },
                &[1.0, 0.0],
                0.0,
                0.5,
                &StepPolicy::rk4(1e-3),
                &OutputGrid::Stride(10),
            )?;
            let r = check_gain_bound(&traj, &p, f64::INFINITY)?;
            Ok(Check::new("rational/unbounded-skip", r.pass && r.skipped.is_some(), serde_json::to_value(&r).unwrap_or_default()))
        })(),
    ));
    checks
}

/// Random Hurwitz matrices of order 2 to 5: uniform entries shifted left of
/// their spectral abscissa.
pub fn random_hurwitz(count: usize, seed: u64) -> Vec<DMatrix<f64>> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=5);
            let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let shift = spectral_abscissa(&m) + rng.gen_range(0.1..1.0);
            m - DMatrix::identity(n, n) * shift
        })
        .collect()
}

/// Settle time of the linear `n = 2` redesign from `(10, 0)` with gain `r`.
pub fn linear_settle(r: f64) -> Result<Option<f64>> {
    let pair = linear_pair(r, Some(1e6))?;
    let traj = integrate(
        &RedesignedDynamics { pair: &pair, disturbance: &DisturbanceSignal::Zero },
        &[10.0, 0.0],
        0.0,
        2.0,
        &StepPolicy::rk4(1e-5),
        &OutputGrid::Stride(100),
    )?;
    Ok(estimate_settling_time(&traj, DEFAULT_EPSILON, DEFAULT_DWELL)?.settle_time)
}

fn lyapunov() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    let mut failed = None;
    for (i, a) in random_hurwitz(20, 7).iter().enumerate() {
        match lyapunov_solve(a) {
            Ok((p, _)) => worst = worst.max(lyapunov_residual(a, &p)),
            Err(e) => failed = Some(format!("matrix {i}: {e}")),
        }
    }
    checks.push(Check::new(
        "residual/random-20",
        failed.is_none() && worst <= 1e-9,
        json!({ "max_residual": worst, "error": failed }),
    ));
    checks.push(Check::from_result(
        "r-bound/settling",
        (|| {
            let r_min = min_linear_gain(&output_injection(&[-2.0, -1.0]))?;
            let with_gain = linear_settle(1.1 * r_min)?;
            let without = linear_settle(0.0)?;
            let pass = with_gain.is_some_and(|t| t < 1.0) && without.is_none_or(|t| t > 1.0);
            Ok(Check::new(
                "r-bound/settling",
                pass,
                json!({ "r_min": r_min, "settle_r_1.1r_min": with_gain, "settle_r_0": without }),
            ))
        })(),
    ));
    checks
}

fn decay() -> Vec<Check> {
    let mut checks = Vec::new();
    for (c, expect) in [(2.5, true), (1.5, false)] {
        let name = format!("exponential/n=3/c={c}");
        checks.push(Check::from_result(
            &name,
            BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY)
                .and_then(|p| decay_condition(c, &p, 3, 1.0))
                .map(|r| Check::new(&name, r.holds == expect && r.asymptote == Some(2.0), serde_json::to_value(&r).unwrap_or_default())),
        ));
    }
    checks
}
