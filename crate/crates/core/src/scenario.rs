//! JSON scenario files, the three built-in examples and the scenario runner.
//!
//! A scenario either simulates the redesigned system directly (with a
//! disturbance `δ(t)`) or, when it has a `differentiator` section, runs the
//! filtering differentiator on a signal and reports its error coordinates
//! `x = (w, z - y^{(i)})`.

use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::differentiator::DifferentiatorDynamics;
use crate::error::{Error, Result};
use crate::fields::{CanonicalTerms, CorrectionField, DriftG, SignedPowerSum, SignedPowerTerm};
use crate::redesign::SystemPair;
use crate::sim::{
    check_disturbance_bound, integrate, DisturbanceSignal, OutputGrid, RedesignedDynamics, Signal,
    StepMethod, StepPolicy, Trajectory, Trig, TrigTerm,
};
use crate::time_scaling::{BlowUpProfile, ProfileKind, TabulatedDensity};
use crate::verify::{
    check_gain_bound, differentiator_error, estimate_settling_time, GainBoundReport, SettlingReport,
    DEFAULT_DWELL, DEFAULT_EPSILON,
};

/// `f64` that may be written as the string `"inf"`.
mod extended {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got \"{s}\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Exponential,
    Rational,
    Tabulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub kind: ProfileName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(rename = "T_c")]
    pub t_c: f64,
    #[serde(rename = "T_f", with = "extended")]
    pub t_f: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch_guard: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taus: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phis: Option<Vec<f64>>,
}

/// `g(x) = Σ c ⌈x⌋^e`, written as `[[c, e], ...]`.
pub type PowerSumSpec = Vec<(f64, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchSpec {
    /// Auxiliary time after which `k`/`g` replace the initial terms.
    pub tau: f64,
    pub k: Vec<f64>,
    pub g: Vec<PowerSumSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Linear {
        gains: Vec<f64>,
    },
    Hosm {
        gains: Vec<f64>,
    },
    Canonical {
        alpha: f64,
        k: Vec<f64>,
        g: Vec<PowerSumSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        switch: Option<SwitchSpec>,
    },
}

impl FieldSpec {
    fn order(&self) -> usize {
        match self {
            Self::Linear { gains } | Self::Hosm { gains } => gains.len(),
            Self::Canonical { k, .. } => k.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftSpec {
    pub m: u8,
    pub gains: Vec<f64>,
}

fn default_kappa_ref() -> f64 {
    10.0
}

fn default_gain_exponent() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub method: StepMethod,
    pub h: f64,
    #[serde(default = "default_kappa_ref")]
    pub kappa_ref: f64,
    #[serde(default = "default_gain_exponent")]
    pub gain_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentiatorSpec {
    pub n_d: usize,
    pub n_f: usize,
    pub signal: Signal,
    /// Added to the measured signal only; the error coordinates use the clean one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<Signal>,
}

fn default_stride() -> usize {
    1
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_dwell() -> f64 {
    DEFAULT_DWELL
}

fn zero_disturbance() -> DisturbanceSignal {
    DisturbanceSignal::Zero
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub profile: ProfileSpec,
    pub field: FieldSpec,
    pub drift: DriftSpec,
    pub r: f64,
    #[serde(rename = "L")]
    pub bound: f64,
    #[serde(default)]
    pub t0: f64,
    /// Initial state; error coordinates in differentiator mode.
    pub x0: Vec<f64>,
    pub horizon: f64,
    pub step: StepSpec,
    #[serde(default = "zero_disturbance")]
    pub disturbance: DisturbanceSignal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differentiator: Option<DifferentiatorSpec>,
    #[serde(default = "default_stride")]
    pub output_stride: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_dwell")]
    pub dwell: f64,
    /// Settling bound of the autonomous design, enables the gain-bound check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max_star: Option<f64>,
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::schema(field, format!("must be positive and finite, got {v}")))
    }
}

fn finite_all(field: &str, v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::schema(format!("{field}[{i}]"), "must be finite")),
        None => Ok(()),
    }
}

fn power_sums(field: &str, g: &[PowerSumSpec]) -> Result<Vec<SignedPowerSum>> {
    g.iter()
        .enumerate()
        .map(|(i, terms)| {
            for (j, (c, e)) in terms.iter().enumerate() {
                if !c.is_finite() || !(e.is_finite() && *e >= 0.0) {
                    return Err(Error::schema(
                        format!("{field}[{i}][{j}]"),
                        "needs a finite coefficient and a nonnegative exponent",
                    ));
                }
            }
            Ok(SignedPowerSum(terms.iter().map(|&(c, e)| SignedPowerTerm::new(c, e)).collect()))
        })
        .collect()
}

fn at(field: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Schema { .. } => e,
        other => Error::schema(field, other.to_string()),
    }
}

/// Runtime objects built from a validated scenario.
pub struct Built {
    pub pair: SystemPair,
    pub policy: StepPolicy,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn order(&self) -> usize {
        self.field.order()
    }

    pub fn is_noisy(&self) -> bool {
        self.differentiator.as_ref().is_some_and(|d| d.noise.is_some())
    }

    /// Schema checks that need no numerics; [`Scenario::build`] runs them too.
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::schema("name", "must be non-empty and use only [A-Za-z0-9_-]"));
        }
        let n = self.order();
        if n == 0 {
            return Err(Error::schema("field", "needs at least one gain"));
        }
        let p = &self.profile;
        positive("profile.T_c", p.t_c)?;
        if !(p.t_f > 0.0) {
            return Err(Error::schema("profile.T_f", "must be positive or \"inf\""));
        }
        match p.kind {
            ProfileName::Exponential => positive("profile.alpha", p.alpha.ok_or_else(|| Error::schema("profile.alpha", "required for the exponential kind"))?)?,
            _ if p.alpha.is_some() => return Err(Error::schema("profile.alpha", "only used by the exponential kind")),
            _ => {}
        }
        match p.kind {
            ProfileName::Tabulated if p.taus.is_none() || p.phis.is_none() => {
                return Err(Error::schema("profile.taus", "tabulated profiles need taus and phis"))
            }
            ProfileName::Tabulated => {}
            _ if p.taus.is_some() || p.phis.is_some() => {
                return Err(Error::schema("profile.taus", "only used by the tabulated kind"))
            }
            _ => {}
        }
        if let Some(k) = p.kappa_max {
            if !(k >= 1.0) {
                return Err(Error::schema("profile.kappa_max", "must be >= 1"));
            }
        }
        match &self.field {
            FieldSpec::Linear { gains } | FieldSpec::Hosm { gains } => finite_all("field.gains", gains)?,
            FieldSpec::Canonical { alpha, k, g, switch } => {
                positive("field.alpha", *alpha)?;
                finite_all("field.k", k)?;
                if g.len() != n {
                    return Err(Error::schema("field.g", format!("needs {n} entries, got {}", g.len())));
                }
                if let Some(sw) = switch {
                    if !(sw.tau.is_finite() && sw.tau >= 0.0) {
                        return Err(Error::schema("field.switch.tau", "must be finite and >= 0"));
                    }
                    finite_all("field.switch.k", &sw.k)?;
                    if sw.k.len() != n || sw.g.len() != n {
                        return Err(Error::schema("field.switch", format!("needs {n} gains and {n} maps")));
                    }
                }
            }
        }
        if self.drift.gains.len() != n {
            return Err(Error::schema("drift.gains", format!("needs {n} entries, got {}", self.drift.gains.len())));
        }
        finite_all("drift.gains", &self.drift.gains)?;
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(Error::schema("r", "must be finite and >= 0"));
        }
        if !(self.bound.is_finite() && self.bound >= 0.0) {
            return Err(Error::schema("L", "must be finite and >= 0"));
        }
        if !self.t0.is_finite() {
            return Err(Error::schema("t0", "must be finite"));
        }
        if self.x0.len() != n {
            return Err(Error::schema("x0", format!("needs {n} entries, got {}", self.x0.len())));
        }
        finite_all("x0", &self.x0)?;
        positive("horizon", self.horizon)?;
        positive("step.h", self.step.h)?;
        positive("step.kappa_ref", self.step.kappa_ref)?;
        if !(self.step.gain_exponent.is_finite() && self.step.gain_exponent >= 0.0) {
            return Err(Error::schema("step.gain_exponent", "must be >= 0"));
        }
        if self.output_stride == 0 {
            return Err(Error::schema("output_stride", "must be >= 1"));
        }
        positive("epsilon", self.epsilon)?;
        if !(self.dwell >= 0.0 && self.dwell <= self.horizon) {
            return Err(Error::schema("dwell", "must lie in [0, horizon]"));
        }
        if let Some(t) = self.t_max_star {
            positive("t_max_star", t)?;
        }
        if let Some(d) = &self.differentiator {
            if d.n_d + d.n_f + 1 != n {
                return Err(Error::schema(
                    "differentiator",
                    format!("n_d + n_f + 1 = {} does not match the field order {n}", d.n_d + d.n_f + 1),
                ));
            }
            if self.disturbance != DisturbanceSignal::Zero {
                return Err(Error::schema("disturbance", "differentiator scenarios take their disturbance from the signal"));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Built> {
        self.validate()?;
        let p = &self.profile;
        let kind = match p.kind {
            ProfileName::Exponential => ProfileKind::Exponential { alpha: p.alpha.unwrap_or_default() },
            ProfileName::Rational => ProfileKind::Rational,
            ProfileName::Tabulated => ProfileKind::Tabulated(
                TabulatedDensity::new(p.taus.clone().unwrap_or_default(), p.phis.clone().unwrap_or_default())
                    .map_err(at("profile.phis"))?,
            ),
        };
        let mut profile = BlowUpProfile::new(kind, p.t_c, p.t_f).map_err(at("profile"))?;
        if let Some(k) = p.kappa_max {
            profile = profile.with_kappa_max(k).map_err(at("profile.kappa_max"))?;
        }
        if let Some(g) = p.switch_guard {
            profile = profile.with_switch_guard(g).map_err(at("profile.switch_guard"))?;
        }
        let field = match &self.field {
            FieldSpec::Linear { gains } => CorrectionField::linear(gains.clone()).map_err(at("field.gains"))?,
            FieldSpec::Hosm { gains } => CorrectionField::hosm(gains.clone()).map_err(at("field.gains"))?,
            FieldSpec::Canonical { alpha, k, g, switch } => {
                let terms = CanonicalTerms { k: k.clone(), g: power_sums("field.g", g)? };
                let switched = match switch {
                    Some(sw) => Some((sw.tau, CanonicalTerms { k: sw.k.clone(), g: power_sums("field.switch.g", &sw.g)? })),
                    None => None,
                };
                CorrectionField::canonical(*alpha, terms, switched).map_err(at("field"))?
            }
        };
        let drift = DriftG::new(self.drift.m, self.drift.gains.clone()).map_err(at("drift"))?;
        let pair = SystemPair::new(profile, field, drift, self.r, self.bound, self.t0).map_err(at("field"))?;
        let policy = StepPolicy {
            method: self.step.method,
            h: self.step.h,
            kappa_ref: self.step.kappa_ref,
            gain_exponent: self.step.gain_exponent,
            divergence_limit: 1e12,
        };
        Ok(Built { pair, policy })
    }

    /// Runs the scenario and returns the CSV text, the report and the
    /// trajectory in error coordinates.
    pub fn run(&self) -> Result<RunOutput> {
        let Built { pair, policy } = self.build()?;
        let grid = OutputGrid::Stride(self.output_stride);
        let (traj, extra) = match &self.differentiator {
            None => {
                check_disturbance_bound(&self.disturbance, self.bound, self.t0, self.horizon, self.step.h)?;
                let dynamics = RedesignedDynamics { pair: &pair, disturbance: &self.disturbance };
                (integrate(&dynamics, &self.x0, self.t0, self.horizon, &policy, &grid)?, None)
            }
            Some(spec) => {
                let delta = DisturbanceSignal::DerivativeOfSignal {
                    signal: spec.signal.clone(),
                    order: (spec.n_d + 1) as u32,
                };
                check_disturbance_bound(&delta, self.bound, self.t0, self.horizon, self.step.h)?;
                let noise = spec.noise.clone().unwrap_or_default();
                let input = |t: f64| spec.signal.value(t) + noise.value(t);
                let dynamics = DifferentiatorDynamics { pair: &pair, n_f: spec.n_f, input };
                let s0: Vec<f64> = self
                    .x0
                    .iter()
                    .enumerate()
                    .map(|(i, x)| if i < spec.n_f { *x } else { x + spec.signal.derivative((i - spec.n_f) as u32, self.t0) })
                    .collect();
                let raw = integrate(&dynamics, &s0, self.t0, self.horizon, &policy, &grid)?;
                let mut errors = raw.clone();
                for i in 0..raw.len() {
                    let x = differentiator_error(raw.state(i), spec.n_f, &spec.signal, raw.time(i));
                    errors.states[i * raw.dim..(i + 1) * raw.dim].copy_from_slice(&x);
                }
                (errors, Some((raw, spec)))
            }
        };

        let n = self.order();
        let mut csv = String::new();
        csv.push('t');
        for i in 1..=n {
            write!(csv, ",x{i}").unwrap();
        }
        csv.push_str(",kappa");
        if let Some((_, spec)) = &extra {
            csv.push_str(",y,dy_true");
            for i in 0..=spec.n_d {
                write!(csv, ",z{i}").unwrap();
            }
        }
        csv.push('\n');
        for i in 0..traj.len() {
            let t = traj.time(i);
            write!(csv, "{t:.16e}").unwrap();
            for v in traj.state(i) {
                write!(csv, ",{v:.16e}").unwrap();
            }
            write!(csv, ",{:.16e}", traj.gains[i]).unwrap();
            if let Some((raw, spec)) = &extra {
                write!(csv, ",{:.16e},{:.16e}", spec.signal.value(t), spec.signal.derivative(1, t)).unwrap();
                for v in &raw.state(i)[spec.n_f..] {
                    write!(csv, ",{v:.16e}").unwrap();
                }
            }
            csv.push('\n');
        }

        let settling = estimate_settling_time(&traj, self.epsilon, self.dwell)?;
        let ubst = pair.profile().ubst();
        let tolerance = 2.0 * self.step.h;
        let noisy = self.is_noisy();
        let settled_within_ubst = (!noisy).then(|| settling.settle_time.is_some_and(|t| t - self.t0 <= ubst + tolerance));
        let gain_bound = match self.t_max_star {
            Some(t) => Some(check_gain_bound(&traj, pair.profile(), t)?),
            None => None,
        };
        let after = traj.elapsed.iter().position(|e| *e > ubst).unwrap_or(traj.len());
        let max_abs_after_ubst = (after..traj.len())
            .flat_map(|i| traj.state(i).iter().map(|v| v.abs()))
            .fold(0.0f64, f64::max);
        let bounded = traj.states.iter().all(|v| v.is_finite());
        let pass = bounded
            && settled_within_ubst.unwrap_or(true)
            && gain_bound.as_ref().is_none_or(|g| g.pass);
        let report = RunReport {
            name: self.name.clone(),
            mode: if extra.is_some() { "differentiator" } else { "system" },
            noisy,
            note: noisy.then(|| "noisy: no settling asserted".to_string()),
            ubst,
            tolerance,
            settling,
            settled_within_ubst,
            gain_bound,
            max_abs_after_ubst,
            max_gain: traj.gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            samples: traj.len(),
            pass,
        };
        Ok(RunOutput { csv, report, trajectory: traj })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub name: String,
    pub mode: &'static str,
    pub noisy: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub ubst: f64,
    pub tolerance: f64,
    pub settling: SettlingReport,
    /// `None` for noisy runs, where settling is not asserted.
    pub settled_within_ubst: Option<bool>,
    pub gain_bound: Option<GainBoundReport>,
    pub max_abs_after_ubst: f64,
    pub max_gain: f64,
    pub samples: usize,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub csv: String,
    pub report: RunReport,
    /// Error coordinates in differentiator mode, the state otherwise.
    pub trajectory: Trajectory,
}

/// `y(t) = -0.4 sin t + 0.8 cos 0.8t`.
pub fn example_signal() -> Signal {
    Signal::trig(vec![
        TrigTerm { kind: Trig::Sin, amplitude: -0.4, frequency: 1.0 },
        TrigTerm { kind: Trig::Cos, amplitude: 0.8, frequency: 0.8 },
    ])
}

/// `0.01 cos 10t + 0.001 cos 30t`.
pub fn example_noise() -> Signal {
    Signal::trig(vec![
        TrigTerm { kind: Trig::Cos, amplitude: 0.01, frequency: 10.0 },
        TrigTerm { kind: Trig::Cos, amplitude: 0.001, frequency: 30.0 },
    ])
}

/// Default `T_θ` of example 2, in auxiliary time.
pub const EXAMPLE2_T_THETA: f64 = 5.0;

/// Gains `(2L^{1/3}, 2.12L^{2/3}, 1.1L)`, negated.
pub fn example1_gains(l: f64) -> Vec<f64> {
    vec![-2.0 * l.cbrt(), -2.12 * l.powf(2.0 / 3.0), -1.1 * l]
}

fn powers(exponents: &[f64]) -> Vec<PowerSumSpec> {
    exponents.iter().map(|&e| vec![(1.0, e)]).collect()
}

/// The built-in scenarios with their published constants.
pub fn builtin_example(id: u8, noise: bool) -> Result<Scenario> {
    let suffix = if noise { "_noise" } else { "" };
    let differentiator = |n_f: usize| DifferentiatorSpec {
        n_d: 1,
        n_f,
        signal: example_signal(),
        noise: noise.then(example_noise),
    };
    let common = |name: &str, profile, field, drift, bound, x0: Vec<f64>, step, n_f, t_max_star| Scenario {
        name: format!("{name}{suffix}"),
        profile,
        field,
        drift,
        r: 1.0,
        bound,
        t0: 0.0,
        x0,
        horizon: 10.0,
        step,
        disturbance: DisturbanceSignal::Zero,
        differentiator: Some(differentiator(n_f)),
        output_stride: 100,
        epsilon: DEFAULT_EPSILON,
        dwell: DEFAULT_DWELL,
        t_max_star,
    };
    match id {
        1 => {
            let l = 2.2;
            Ok(common(
                "example1",
                ProfileSpec {
                    kind: ProfileName::Rational,
                    alpha: None,
                    t_c: 1.0,
                    t_f: f64::INFINITY,
                    kappa_max: Some(100.0),
                    switch_guard: None,
                    taus: None,
                    phis: None,
                },
                FieldSpec::Hosm { gains: example1_gains(l) },
                DriftSpec { m: 1, gains: example1_gains(l) },
                l,
                vec![100.0, 0.0, 0.0],
                StepSpec { method: StepMethod::Euler, h: 1e-5, kappa_ref: 5.0, gain_exponent: 3.0 },
                1,
                None,
            ))
        }
        2 => {
            let l: f64 = 2.5;
            let hosm = vec![-2.0 * l.cbrt(), -1.5 * 2f64.sqrt() * l.powf(4.0 / 6.0), -1.1 * l];
            Ok(common(
                "example2",
                ProfileSpec {
                    kind: ProfileName::Exponential,
                    alpha: Some(1.0),
                    t_c: 1.0,
                    t_f: f64::INFINITY,
                    kappa_max: Some(100.0),
                    switch_guard: None,
                    taus: None,
                    phis: None,
                },
                FieldSpec::Canonical {
                    alpha: 1.0,
                    k: vec![-7.0, -15.0 / 7.0, -1.0],
                    g: powers(&[1.02, 1.04, 1.06]),
                    switch: Some(SwitchSpec {
                        tau: EXAMPLE2_T_THETA,
                        k: hosm.clone(),
                        g: powers(&[2.0 / 3.0, 1.0 / 3.0, 0.0]),
                    }),
                },
                DriftSpec { m: 1, gains: hosm },
                l,
                vec![100.0, 0.0, 0.0],
                StepSpec { method: StepMethod::Euler, h: 1e-5, kappa_ref: 5.0, gain_exponent: 3.0 },
                1,
                None,
            ))
        }
        3 => {
            let l: f64 = 2.5;
            let s3 = 3f64.sqrt();
            Ok(common(
                "example3",
                ProfileSpec {
                    kind: ProfileName::Exponential,
                    alpha: Some(1.0),
                    t_c: 1.0,
                    t_f: 233.7349,
                    kappa_max: Some(1e4),
                    switch_guard: None,
                    taus: None,
                    phis: None,
                },
                FieldSpec::Canonical {
                    alpha: 1.0,
                    k: vec![-2.0 * s3, -6.0],
                    g: vec![vec![(1.0, 0.5), (1.0, 1.5)], vec![(0.5, 0.0), (2.0, 1.0), (1.5, 2.0)]],
                    switch: None,
                },
                DriftSpec { m: 1, gains: vec![-1.5 * l.sqrt(), -1.1 * l] },
                l,
                vec![100.0, 0.0],
                StepSpec { method: StepMethod::Euler, h: 1e-5, kappa_ref: 10.0, gain_exponent: 2.0 },
                0,
                Some(233.7349),
            ))
        }
        other => Err(Error::invalid(format!("unknown example {other}; expected 1, 2 or 3"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> Scenario {
        Scenario {
            name: "minimal".into(),
            profile: ProfileSpec {
                kind: ProfileName::Exponential,
                alpha: Some(1.0),
                t_c: 1.0,
                t_f: 3.0,
                kappa_max: None,
                switch_guard: None,
                taus: None,
                phis: None,
            },
            field: FieldSpec::Linear { gains: vec![-2.0, -1.0] },
            drift: DriftSpec { m: 0, gains: vec![-2.0, -1.0] },
            r: 3.0,
            bound: 1.0,
            t0: 0.0,
            x0: vec![0.0, 0.0],
            horizon: 2.0,
            step: StepSpec { method: StepMethod::Rk4, h: 1e-3, kappa_ref: 10.0, gain_exponent: 1.0 },
            disturbance: DisturbanceSignal::Zero,
            differentiator: None,
            output_stride: 10,
            epsilon: 1e-2,
            dwell: 0.5,
            t_max_star: None,
        }
    }

    #[test]
    fn zero_scenario_gives_zero_trajectory() {
        let out = minimal().run().unwrap();
        assert!(out.trajectory.states.iter().all(|v| *v == 0.0));
        assert_eq!(out.report.settling.settle_time, Some(0.0));
        assert!(out.csv.starts_with("t,x1,x2,kappa\n"));
        assert_eq!(out.csv.lines().count(), 1 + 201);
    }

    #[test]
    fn json_round_trip() {
        for id in 1..=3 {
            for noise in [false, true] {
                let s = builtin_example(id, noise).unwrap();
                let back = Scenario::from_json(&s.to_json().unwrap()).unwrap();
                assert_eq!(back, s);
            }
        }
        let s = minimal();
        assert_eq!(Scenario::from_json(&s.to_json().unwrap()).unwrap(), s);
    }

    #[test]
    fn inf_horizon_parses() {
        let mut v: serde_json::Value = serde_json::from_str(&minimal().to_json().unwrap()).unwrap();
        v["profile"]["T_f"] = "inf".into();
        let s = Scenario::from_json(&v.to_string()).unwrap();
        assert_eq!(s.profile.t_f, f64::INFINITY);
        v["profile"]["T_f"] = "forever".into();
        assert!(Scenario::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn schema_errors_name_the_field() {
        let mut v: serde_json::Value = serde_json::from_str(&minimal().to_json().unwrap()).unwrap();
        v["colour"] = "blue".into();
        assert!(matches!(Scenario::from_json(&v.to_string()), Err(Error::Json(_))));

        let mut s = minimal();
        s.x0 = vec![1.0];
        assert!(matches!(s.validate(), Err(Error::Schema { field, .. }) if field == "x0"));

        let mut s = minimal();
        s.step.h = 0.0;
        assert!(matches!(s.validate(), Err(Error::Schema { field, .. }) if field == "step.h"));

        let mut s = minimal();
        s.field = FieldSpec::Linear { gains: vec![2.0, -1.0] };
        assert!(matches!(s.build(), Err(Error::Schema { field, .. }) if field == "field.gains"));

        let mut s = minimal();
        s.profile.alpha = None;
        assert!(matches!(s.validate(), Err(Error::Schema { field, .. }) if field == "profile.alpha"));
    }

    #[test]
    fn disturbance_above_bound_rejected() {
        let mut s = minimal();
        s.disturbance = DisturbanceSignal::Harmonic { terms: vec![(1.5, 1.0)] };
        assert!(matches!(s.run(), Err(Error::DisturbanceBound { .. })));
    }

    #[test]
    fn unknown_example_rejected() {
        assert!(builtin_example(4, false).is_err());
    }
}
