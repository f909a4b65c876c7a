//! Fixed-step integration with gain-adaptive substeps, exact breakpoints and
//! decimated output, plus the disturbance and test-signal generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::redesign::SystemPair;

/// Time split into the run origin `t₀` and the elapsed time since it.
///
/// Everything inside the integrator works on `elapsed`, so shifting `t₀`
/// leaves the step sequence and the states untouched.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instant {
    pub origin: f64,
    pub elapsed: f64,
}

impl Instant {
    #[inline]
    pub fn absolute(&self) -> f64 {
        self.origin + self.elapsed
    }
}

/// A right-hand side the integrator can drive.
pub trait Dynamics {
    fn dim(&self) -> usize;

    fn rhs(&self, t: Instant, x: &[f64], dx: &mut [f64]) -> Result<()>;

    /// Gain that sets the substep size; 1 means the base step.
    fn gain(&self, _t: Instant) -> f64 {
        1.0
    }

    /// Elapsed times that must be hit exactly by the step sequence.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Wraps a closure `f(t, x, dx)` over absolute time.
pub struct FnDynamics<F> {
    dim: usize,
    f: F,
}

impl<F> FnDynamics<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> Dynamics for FnDynamics<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn rhs(&self, t: Instant, x: &[f64], dx: &mut [f64]) -> Result<()> {
        (self.f)(t.absolute(), x, dx);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepMethod {
    Euler,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPolicy {
    pub method: StepMethod,
    pub h: f64,
    /// Gain below which the base step is used unchanged.
    pub kappa_ref: f64,
    /// Substep `h / max(1, (κ/κ_ref)^p)`; `p = 1` divides the step by the gain ratio.
    pub gain_exponent: f64,
    pub divergence_limit: f64,
}

impl StepPolicy {
    pub fn euler(h: f64) -> Self {
        Self {
            method: StepMethod::Euler,
            h,
            kappa_ref: 10.0,
            gain_exponent: 1.0,
            divergence_limit: 1e12,
        }
    }

    pub fn rk4(h: f64) -> Self {
        Self {
            method: StepMethod::Rk4,
            ..Self::euler(h)
        }
    }

    pub fn with_gain_scaling(mut self, kappa_ref: f64, gain_exponent: f64) -> Self {
        self.kappa_ref = kappa_ref;
        self.gain_exponent = gain_exponent;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::invalid(format!("step h must be positive, got {}", self.h)));
        }
        if !(self.kappa_ref.is_finite() && self.kappa_ref > 0.0) {
            return Err(Error::invalid("kappa_ref must be positive"));
        }
        if !(self.gain_exponent.is_finite() && self.gain_exponent >= 0.0) {
            return Err(Error::invalid("gain exponent must be >= 0"));
        }
        if !(self.divergence_limit > 0.0) {
            return Err(Error::invalid("divergence limit must be positive"));
        }
        Ok(())
    }

    #[inline]
    pub fn substep(&self, gain: f64) -> f64 {
        let ratio = gain / self.kappa_ref;
        if ratio <= 1.0 {
            self.h
        } else {
            self.h / ratio.powf(self.gain_exponent)
        }
    }
}

/// Which grid nodes are kept in the returned trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum OutputGrid {
    /// Every `k`-th base node (`j·k·h`) plus the final time.
    Stride(usize),
    /// Exactly these elapsed times (inserted as nodes).
    Times(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub dim: usize,
    /// Elapsed times since `t0`, strictly increasing.
    pub elapsed: Vec<f64>,
    /// Row-major, `dim` values per sample.
    pub states: Vec<f64>,
    pub gains: Vec<f64>,
    pub meta: serde_json::Value,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.elapsed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elapsed.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.elapsed[i]
    }

    pub fn times(&self) -> Vec<f64> {
        self.elapsed.iter().map(|e| self.t0 + e).collect()
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    pub fn last_state(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    /// Samples from index `start` on, keeping `t0`.
    pub fn tail(&self, start: usize) -> Trajectory {
        Trajectory {
            t0: self.t0,
            dim: self.dim,
            elapsed: self.elapsed[start..].to_vec(),
            states: self.states[start * self.dim..].to_vec(),
            gains: self.gains[start..].to_vec(),
            meta: self.meta.clone(),
        }
    }
}

/// Reusable stage buffers for [`advance`].
#[derive(Debug, Clone)]
pub struct Workspace {
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Workspace {
    pub fn new(dim: usize) -> Self {
        Self {
            k: std::array::from_fn(|_| vec![0.0; dim]),
            tmp: vec![0.0; dim],
        }
    }
}

fn check_state(x: &[f64], t: f64, last_valid: f64, limit: f64) -> Result<()> {
    let mut norm = 0.0f64;
    for v in x {
        if v.is_nan() {
            return Err(Error::NotANumber { t });
        }
        norm = norm.max(v.abs());
    }
    if norm > limit {
        return Err(Error::Divergence { t, norm, last_valid });
    }
    Ok(())
}

fn single_step<D: Dynamics + ?Sized>(
    dynamics: &D,
    method: StepMethod,
    origin: f64,
    t: f64,
    dt: f64,
    x: &mut [f64],
    ws: &mut Workspace,
) -> Result<()> {
    let at = |elapsed| Instant { origin, elapsed };
    match method {
        StepMethod::Euler => {
            dynamics.rhs(at(t), x, &mut ws.k[0])?;
            for (xi, ki) in x.iter_mut().zip(&ws.k[0]) {
                *xi += dt * ki;
            }
        }
        StepMethod::Rk4 => {
            let [k1, k2, k3, k4] = &mut ws.k;
            let tmp = &mut ws.tmp;
            dynamics.rhs(at(t), x, k1)?;
            for i in 0..x.len() {
                tmp[i] = x[i] + 0.5 * dt * k1[i];
            }
            dynamics.rhs(at(t + 0.5 * dt), tmp, k2)?;
            for i in 0..x.len() {
                tmp[i] = x[i] + 0.5 * dt * k2[i];
            }
            dynamics.rhs(at(t + 0.5 * dt), tmp, k3)?;
            for i in 0..x.len() {
                tmp[i] = x[i] + dt * k3[i];
            }
            dynamics.rhs(at(t + dt), tmp, k4)?;
            for i in 0..x.len() {
                x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
    Ok(())
}

/// Length and end of the substep that starts at `t` on the way to `to`.
#[inline]
pub fn next_node(policy: &StepPolicy, gain: f64, t: f64, to: f64) -> (f64, f64) {
    let dt = policy.substep(gain);
    let remaining = to - t;
    if dt >= remaining || remaining - dt < 1e-3 * dt {
        (remaining, to)
    } else {
        (dt, t + dt)
    }
}

/// Advances `x` from elapsed `from` to `to` with gain-adaptive substeps.
///
/// The substep is chosen from the gain at the start of each substep; the last
/// substep is shortened to land on `to` exactly, and a remainder shorter than
/// a thousandth of a substep is folded into the previous one.
pub fn advance<D: Dynamics + ?Sized>(
    dynamics: &D,
    policy: &StepPolicy,
    origin: f64,
    from: f64,
    to: f64,
    x: &mut [f64],
    ws: &mut Workspace,
) -> Result<()> {
    let mut t = from;
    while t < to {
        let (dt, next) = next_node(policy, dynamics.gain(Instant { origin, elapsed: t }), t, to);
        single_step(dynamics, policy.method, origin, t, dt, x, ws)?;
        check_state(x, origin + next, origin + t, policy.divergence_limit)?;
        t = next;
    }
    Ok(())
}

/// Integrates `dynamics` over elapsed `[0, duration]` starting at `t₀`.
///
/// Base nodes sit at `j·h`; breakpoints and requested output times are
/// inserted as extra nodes so the step sequence hits them exactly.
pub fn integrate<D: Dynamics + ?Sized>(
    dynamics: &D,
    x0: &[f64],
    t0: f64,
    duration: f64,
    policy: &StepPolicy,
    output: &OutputGrid,
) -> Result<Trajectory> {
    policy.validate()?;
    if x0.len() != dynamics.dim() {
        return Err(Error::invalid(format!(
            "initial state has {} entries, system has {}",
            x0.len(),
            dynamics.dim()
        )));
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::invalid(format!("span must be positive, got {duration}")));
    }
    if !t0.is_finite() {
        return Err(Error::invalid("t0 must be finite"));
    }
    check_state(x0, t0, t0, policy.divergence_limit)?;

    let h = policy.h;
    let base = (duration / h).floor() as usize;
    // node = (elapsed, keep)
    let mut nodes: Vec<(f64, bool)> = Vec::with_capacity(base + 2);
    let stride = match output {
        OutputGrid::Stride(k) if *k == 0 => return Err(Error::invalid("stride must be >= 1")),
        OutputGrid::Stride(k) => Some(*k),
        OutputGrid::Times(_) => None,
    };
    for j in 0..=base {
        let e = j as f64 * h;
        if e < duration {
            nodes.push((e, stride.is_some_and(|k| j % k == 0)));
        }
    }
    nodes.push((duration, stride.is_some()));
    for b in dynamics.breakpoints() {
        if b > 0.0 && b < duration {
            nodes.push((b, false));
        }
    }
    if let OutputGrid::Times(times) = output {
        for &e in times {
            if !(e >= 0.0 && e <= duration) {
                return Err(Error::Domain { what: "output time outside the span", value: e });
            }
            nodes.push((e, true));
        }
    }
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, bool)> = Vec::with_capacity(nodes.len());
    for (e, keep) in nodes {
        match merged.last_mut() {
            Some(last) if last.0 == e => last.1 |= keep,
            _ => merged.push((e, keep)),
        }
    }

    let dim = x0.len();
    let mut x = x0.to_vec();
    let mut ws = Workspace::new(dim);
    let mut traj = Trajectory {
        t0,
        dim,
        elapsed: Vec::new(),
        states: Vec::new(),
        gains: Vec::new(),
        meta: serde_json::Value::Null,
    };
    let record = |traj: &mut Trajectory, e: f64, x: &[f64]| {
        traj.elapsed.push(e);
        traj.states.extend_from_slice(x);
        traj.gains.push(dynamics.gain(Instant { origin: t0, elapsed: e }));
    };
    let mut prev = merged[0].0;
    if merged[0].1 {
        record(&mut traj, prev, &x);
    }
    for &(e, keep) in &merged[1..] {
        advance(dynamics, policy, t0, prev, e, &mut x, &mut ws)?;
        prev = e;
        if keep {
            record(&mut traj, e, &x);
        }
    }
    Ok(traj)
}

/// Anything that yields `δ(t)` at absolute time `t`.
pub trait Disturbance {
    fn value(&self, t: f64) -> f64;
}

impl<F: Fn(f64) -> f64> Disturbance for F {
    fn value(&self, t: f64) -> f64 {
        self(t)
    }
}

/// Redesigned system `ẏ = H + A₀y + Dδ(t)` as integrable dynamics.
pub struct RedesignedDynamics<'a, D: ?Sized = DisturbanceSignal> {
    pub pair: &'a SystemPair,
    pub disturbance: &'a D,
}

impl<D: Disturbance + ?Sized> Dynamics for RedesignedDynamics<'_, D> {
    fn dim(&self) -> usize {
        self.pair.n()
    }

    #[inline]
    fn rhs(&self, t: Instant, x: &[f64], dx: &mut [f64]) -> Result<()> {
        let delta = self.disturbance.value(t.absolute());
        self.pair.redesigned_rhs_elapsed(t.elapsed, x, delta, dx)
    }

    #[inline]
    fn gain(&self, t: Instant) -> f64 {
        self.pair.profile().kappa(t.elapsed)
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.pair.profile().transient_end()]
    }
}

/// Auxiliary system in `τ`, with `δ̂(τ) = δ(ψ(τ) + t₀)`.
pub struct AuxiliaryDynamics<'a, D: ?Sized = DisturbanceSignal> {
    pub pair: &'a SystemPair,
    pub disturbance: &'a D,
}

impl<D: Disturbance + ?Sized> Dynamics for AuxiliaryDynamics<'_, D> {
    fn dim(&self) -> usize {
        self.pair.n()
    }

    fn rhs(&self, t: Instant, x: &[f64], dx: &mut [f64]) -> Result<()> {
        let tau = t.elapsed;
        let delta_hat = self.disturbance.value(self.pair.profile().psi(tau)? + self.pair.t0());
        self.pair.aux_rhs_into(tau, x, delta_hat, dx)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.pair.field().switch_tau().into_iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub kind: Trig,
    pub amplitude: f64,
    pub frequency: f64,
}

/// `y(t) = Σ c_k t^k + Σ a sin(ωt) / a cos(ωt)`, differentiable in closed form.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signal {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polynomial: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TrigTerm>,
}

impl Signal {
    pub fn trig(terms: Vec<TrigTerm>) -> Self {
        Self {
            polynomial: Vec::new(),
            terms,
        }
    }

    pub fn polynomial(coefficients: Vec<f64>) -> Self {
        Self {
            polynomial: coefficients,
            terms: Vec::new(),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.derivative(0, t)
    }

    /// `d^order y / dt^order` at `t`.
    pub fn derivative(&self, order: u32, t: f64) -> f64 {
        let mut acc = 0.0;
        for (k, c) in self.polynomial.iter().enumerate().skip(order as usize) {
            let falling: f64 = ((k - order as usize + 1)..=k).map(|m| m as f64).product();
            acc += c * falling * t.powi((k - order as usize) as i32);
        }
        for term in &self.terms {
            let w = term.frequency;
            let scale = term.amplitude * w.powi(order as i32);
            // each derivative advances the phase by a quarter turn
            let quarter = match term.kind {
                Trig::Sin => order % 4,
                Trig::Cos => (order + 1) % 4,
            };
            let s = (w * t).sin();
            let c = (w * t).cos();
            acc += scale
                * match quarter {
                    0 => s,
                    1 => c,
                    2 => -s,
                    _ => -c,
                };
        }
        acc
    }
}

/// Disturbance `δ(t)` driving the redesigned system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum DisturbanceSignal {
    Zero,
    /// `Σ a cos(ωt)` over `(a, ω)` pairs.
    Harmonic { terms: Vec<(f64, f64)> },
    /// `-y^{(order)}(t)`, the disturbance seen by a differentiator error system.
    DerivativeOfSignal { signal: Signal, order: u32 },
}

impl Disturbance for DisturbanceSignal {
    #[inline]
    fn value(&self, t: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Harmonic { terms } => terms.iter().map(|(a, w)| a * (w * t).cos()).sum(),
            Self::DerivativeOfSignal { signal, order } => -signal.derivative(*order, t),
        }
    }
}

/// `δ(t)`, rejected when `|δ(t)| > L`.
pub fn sample_disturbance(d: &DisturbanceSignal, bound: f64, t: f64) -> Result<f64> {
    let value = d.value(t);
    if value.abs() <= bound {
        Ok(value)
    } else {
        Err(Error::DisturbanceBound { t, value, bound })
    }
}

/// Checks `|δ| ≤ L` on every node of `[t₀, t₀ + duration]` spaced by `h`.
pub fn check_disturbance_bound(
    d: &DisturbanceSignal,
    bound: f64,
    t0: f64,
    duration: f64,
    h: f64,
) -> Result<()> {
    let steps = (duration / h).ceil() as usize;
    for j in 0..=steps {
        sample_disturbance(d, bound, t0 + (j as f64 * h).min(duration))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{CorrectionField, DriftG};
    use crate::time_scaling::BlowUpProfile;
    use approx::assert_relative_eq;

    #[test]
    fn zero_rhs_keeps_state() {
        let dynamics = FnDynamics::new(2, |_, _, dx: &mut [f64]| dx.fill(0.0));
        let traj = integrate(
            &dynamics,
            &[1.0, 2.0],
            0.0,
            1.0,
            &StepPolicy::euler(0.1),
            &OutputGrid::Stride(1),
        )
        .unwrap();
        assert_eq!(traj.len(), 11);
        for i in 0..traj.len() {
            assert_eq!(traj.state(i), &[1.0, 2.0]);
        }
        assert_eq!(*traj.elapsed.last().unwrap(), 1.0);
    }

    #[test]
    fn rk4_exponential_decay() {
        let dynamics = FnDynamics::new(1, |_, x: &[f64], dx: &mut [f64]| dx[0] = -x[0]);
        let traj = integrate(
            &dynamics,
            &[1.0],
            0.0,
            1.0,
            &StepPolicy::rk4(0.01),
            &OutputGrid::Stride(10),
        )
        .unwrap();
        assert!((traj.last_state()[0] - (-1f64).exp()).abs() <= 1e-8);
    }

    #[test]
    fn step_halving_orders() {
        let dynamics = FnDynamics::new(2, |_, x: &[f64], dx: &mut [f64]| {
            dx[0] = -2.0 * x[0] + x[1];
            dx[1] = -x[0];
        });
        let run = |policy: StepPolicy| {
            integrate(&dynamics, &[1.0, 0.0], 0.0, 2.0, &policy, &OutputGrid::Stride(1_000_000))
                .unwrap()
                .last_state()[0]
        };
        let reference = run(StepPolicy::rk4(1e-4));
        let e1 = (run(StepPolicy::euler(1e-2)) - reference).abs();
        let e2 = (run(StepPolicy::euler(5e-3)) - reference).abs();
        assert!((e1 / e2 - 2.0).abs() < 0.2, "euler ratio {}", e1 / e2);
        let r1 = (run(StepPolicy::rk4(0.1)) - reference).abs();
        let r2 = (run(StepPolicy::rk4(0.05)) - reference).abs();
        assert!((r1 / r2 - 16.0).abs() < 3.0, "rk4 ratio {}", r1 / r2);
    }

    #[test]
    fn divergence_and_nan_are_reported() {
        let blow = FnDynamics::new(1, |_, x: &[f64], dx: &mut [f64]| dx[0] = x[0] * x[0]);
        let err = integrate(&blow, &[1.0], 0.0, 2.0, &StepPolicy::euler(1e-3), &OutputGrid::Stride(1))
            .unwrap_err();
        assert!(matches!(err, Error::Divergence { .. } | Error::NotANumber { .. }));
        let nan = FnDynamics::new(1, |_, _, dx: &mut [f64]| dx[0] = f64::NAN);
        let err = integrate(&nan, &[1.0], 0.0, 1.0, &StepPolicy::euler(0.1), &OutputGrid::Stride(1))
            .unwrap_err();
        assert!(matches!(err, Error::NotANumber { .. }));
    }

    fn linear_pair(t0: f64) -> SystemPair {
        SystemPair::new(
            BlowUpProfile::exponential(1.0, 1.0, 3.0).unwrap(),
            CorrectionField::linear(vec![-2.0, -1.0]).unwrap(),
            DriftG::new(0, vec![-2.0, -1.0]).unwrap(),
            3.0,
            1.0,
            t0,
        )
        .unwrap()
    }

    #[test]
    fn t0_shift_is_exact_and_gains_match() {
        let zero = DisturbanceSignal::Zero;
        let policy = StepPolicy::euler(1e-3);
        let run = |t0: f64| {
            let pair = linear_pair(t0);
            let d = RedesignedDynamics { pair: &pair, disturbance: &zero };
            integrate(&d, &[1.0, -1.0], t0, 2.0, &policy, &OutputGrid::Stride(7)).unwrap()
        };
        let a = run(0.0);
        let b = run(12.5);
        assert_eq!(a.elapsed, b.elapsed);
        assert_eq!(a.states, b.states);
        assert_eq!(a.gains, b.gains);
        let pair = linear_pair(0.0);
        for (e, g) in a.elapsed.iter().zip(&a.gains) {
            assert_eq!(pair.profile().kappa(*e).to_bits(), g.to_bits());
        }
        let end = pair.profile().transient_end();
        let traj = {
            let d = RedesignedDynamics { pair: &pair, disturbance: &zero };
            integrate(&d, &[1.0, -1.0], 0.0, 2.0, &policy, &OutputGrid::Times(vec![end])).unwrap()
        };
        assert_eq!(traj.elapsed, vec![end]);
    }

    #[test]
    fn disturbance_examples() {
        assert_eq!(sample_disturbance(&DisturbanceSignal::Zero, 0.0, 3.0).unwrap(), 0.0);
        let y = Signal::trig(vec![
            TrigTerm { kind: Trig::Sin, amplitude: -0.4, frequency: 1.0 },
            TrigTerm { kind: Trig::Cos, amplitude: 0.8, frequency: 0.8 },
        ]);
        // δ = -ÿ, so the sampled value is the negated second derivative
        assert_relative_eq!(y.derivative(2, 0.0), -0.512, max_relative = 1e-15);
        let d = DisturbanceSignal::DerivativeOfSignal { signal: y.clone(), order: 2 };
        assert_relative_eq!(sample_disturbance(&d, 1.0, 0.0).unwrap(), 0.512, max_relative = 1e-15);
        let h = DisturbanceSignal::Harmonic { terms: vec![(2.5, 1.3)] };
        assert_eq!(sample_disturbance(&h, 2.5, 0.0).unwrap(), 2.5);
        assert!(matches!(
            sample_disturbance(&h, 2.4, 0.0),
            Err(Error::DisturbanceBound { t, .. }) if t == 0.0
        ));
        assert!(check_disturbance_bound(&h, 2.5, 0.0, 10.0, 1e-3).is_ok());
    }

    #[test]
    fn signal_derivatives() {
        let y = Signal::trig(vec![
            TrigTerm { kind: Trig::Sin, amplitude: -0.4, frequency: 1.0 },
            TrigTerm { kind: Trig::Cos, amplitude: 0.8, frequency: 0.8 },
        ]);
        let t = 0.37f64;
        assert_relative_eq!(y.value(t), -0.4 * t.sin() + 0.8 * (0.8 * t).cos(), max_relative = 1e-15);
        assert_relative_eq!(y.derivative(1, t), -0.4 * t.cos() - 0.64 * (0.8 * t).sin(), max_relative = 1e-14);
        assert_relative_eq!(y.derivative(3, t), 0.4 * t.cos() + 0.8f64.powi(4) * (0.8 * t).sin(), max_relative = 1e-14);
        let p = Signal::polynomial(vec![1.0, 0.0, 0.5]);
        assert_eq!(p.value(2.0), 3.0);
        assert_eq!(p.derivative(1, 2.0), 2.0);
        assert_eq!(p.derivative(2, 2.0), 1.0);
        assert_eq!(p.derivative(3, 2.0), 0.0);
    }
}
