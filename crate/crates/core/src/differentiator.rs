//! Online filtering differentiator with a prescribed convergence time.
//!
//! State layout is `[w₁ … w_{n_f}, z₀ … z_{n_d}]`. The correction acts on
//! `w₁`, or on `z₀ - y(t)` when there is no filter stage, and uses the
//! transient/terminal switch of the underlying [`SystemPair`].

use crate::error::{Error, Result};
use crate::redesign::SystemPair;
use crate::sim::{advance, Dynamics, Instant, StepPolicy, Workspace};

/// Differentiator right-hand side driven by an input signal `y(t)`.
pub struct DifferentiatorDynamics<'a, Y> {
    pub pair: &'a SystemPair,
    pub n_f: usize,
    pub input: Y,
}

impl<Y: Fn(f64) -> f64> Dynamics for DifferentiatorDynamics<'_, Y> {
    fn dim(&self) -> usize {
        self.pair.n()
    }

    #[inline]
    fn rhs(&self, t: Instant, x: &[f64], dx: &mut [f64]) -> Result<()> {
        let n = x.len();
        let n_f = self.n_f;
        let y = (self.input)(t.absolute());
        let e = if n_f > 0 { x[0] } else { x[0] - y };
        self.pair.eval_h_elapsed(e, t.elapsed, dx);
        for i in 0..n {
            let next = if i + 1 == n {
                0.0
            } else if i + 1 == n_f {
                x[n_f] - y
            } else {
                x[i + 1]
            };
            dx[i] += next;
        }
        Ok(())
    }

    #[inline]
    fn gain(&self, t: Instant) -> f64 {
        self.pair.profile().kappa(t.elapsed)
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.pair.profile().transient_end()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub t: f64,
    /// `z₀ … z_{n_d}`, estimates of `y, ẏ, …, y^{(n_d)}`.
    pub derivatives: Vec<f64>,
    /// `w₁ … w_{n_f}`.
    pub residuals: Vec<f64>,
    pub kappa: f64,
}

#[derive(Debug, Clone)]
pub struct FilteringDifferentiator {
    pair: SystemPair,
    n_d: usize,
    n_f: usize,
    policy: StepPolicy,
    state: Vec<f64>,
    elapsed: f64,
    ws: Workspace,
}

impl FilteringDifferentiator {
    /// `pair` must have order `n_d + n_f + 1`; its drift supplies the terminal
    /// gains and its `t₀` the start time.
    pub fn new(pair: SystemPair, n_d: usize, n_f: usize, policy: StepPolicy) -> Result<Self> {
        let n = n_d + n_f + 1;
        if pair.n() != n {
            return Err(Error::invalid(format!(
                "differentiator needs order n_d + n_f + 1 = {n}, system has {}",
                pair.n()
            )));
        }
        policy.validate()?;
        Ok(Self {
            pair,
            n_d,
            n_f,
            policy,
            state: vec![0.0; n],
            elapsed: 0.0,
            ws: Workspace::new(n),
        })
    }

    pub fn n_d(&self) -> usize {
        self.n_d
    }

    pub fn n_f(&self) -> usize {
        self.n_f
    }

    pub fn pair(&self) -> &SystemPair {
        &self.pair
    }

    pub fn policy(&self) -> &StepPolicy {
        &self.policy
    }

    pub fn reset(&mut self) {
        self.state.fill(0.0);
        self.elapsed = 0.0;
    }

    /// Overwrites `w` and `z` without touching the clock.
    pub fn set_state(&mut self, w: &[f64], z: &[f64]) -> Result<()> {
        if w.len() != self.n_f || z.len() != self.n_d + 1 {
            return Err(Error::invalid("state lengths must be n_f and n_d + 1"));
        }
        self.state[..self.n_f].copy_from_slice(w);
        self.state[self.n_f..].copy_from_slice(z);
        Ok(())
    }

    pub fn state(&self) -> &[f64] {
        &self.state
    }

    pub fn t(&self) -> f64 {
        self.pair.t0() + self.elapsed
    }

    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }

    pub fn estimate(&self) -> Estimate {
        Estimate {
            t: self.t(),
            derivatives: self.state[self.n_f..].to_vec(),
            residuals: self.state[..self.n_f].to_vec(),
            kappa: self.pair.profile().kappa(self.elapsed),
        }
    }

    /// Advances by `h`, holding `y_sample` constant over the step.
    pub fn step(&mut self, y_sample: f64, h: f64) -> Result<Estimate> {
        self.step_with(h, |_| y_sample)?;
        Ok(self.estimate())
    }

    /// Advances by `h` with a continuous input `y(t)`.
    pub fn step_with<Y: Fn(f64) -> f64>(&mut self, h: f64, input: Y) -> Result<()> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::invalid(format!("step must be positive, got {h}")));
        }
        let dynamics = DifferentiatorDynamics {
            pair: &self.pair,
            n_f: self.n_f,
            input,
        };
        let from = self.elapsed;
        let to = from + h;
        let origin = self.pair.t0();
        let switch = self.pair.profile().transient_end();
        if from < switch && switch < to {
            advance(&dynamics, &self.policy, origin, from, switch, &mut self.state, &mut self.ws)?;
            advance(&dynamics, &self.policy, origin, switch, to, &mut self.state, &mut self.ws)?;
        } else {
            advance(&dynamics, &self.policy, origin, from, to, &mut self.state, &mut self.ws)?;
        }
        self.elapsed = to;
        Ok(())
    }
}
