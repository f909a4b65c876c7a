//! The auxiliary `τ`-system and the redesigned `t`-system built from one
//! profile, one correction field and one terminal drift.

use crate::error::{Error, Result};
use crate::fields::{CorrectionField, DriftG};
use crate::time_scaling::BlowUpProfile;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemPair {
    profile: BlowUpProfile,
    field: CorrectionField,
    drift: DriftG,
    r: f64,
    bound: f64,
    t0: f64,
    /// Elapsed time `ψ(T_θ)` at which a switched field changes terms.
    switch_elapsed: Option<f64>,
}

impl SystemPair {
    pub fn new(
        profile: BlowUpProfile,
        field: CorrectionField,
        drift: DriftG,
        r: f64,
        bound: f64,
        t0: f64,
    ) -> Result<Self> {
        if field.n() != drift.n() {
            return Err(Error::invalid(format!(
                "field order {} differs from drift order {}",
                field.n(),
                drift.n()
            )));
        }
        if field.n() > 16 {
            return Err(Error::invalid("orders above 16 are not supported"));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::invalid(format!("r must be finite and >= 0, got {r}")));
        }
        if !(bound.is_finite() && bound >= 0.0) {
            return Err(Error::invalid(format!("L must be finite and >= 0, got {bound}")));
        }
        if !t0.is_finite() {
            return Err(Error::invalid("t0 must be finite"));
        }
        let switch_elapsed = match field.switch_tau() {
            Some(tau) => Some(profile.psi(tau)?),
            None => None,
        };
        Ok(Self {
            profile,
            field,
            drift,
            r,
            bound,
            t0,
            switch_elapsed,
        })
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    pub fn profile(&self) -> &BlowUpProfile {
        &self.profile
    }

    pub fn field(&self) -> &CorrectionField {
        &self.field
    }

    pub fn drift(&self) -> &DriftG {
        &self.drift
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Same pair with a different `t₀`.
    pub fn with_t0(&self, t0: f64) -> Self {
        Self { t0, ..self.clone() }
    }

    /// Same pair with a different `r`.
    pub fn with_r(&self, r: f64) -> Result<Self> {
        Self::new(
            self.profile.clone(),
            self.field.clone(),
            self.drift.clone(),
            r,
            self.bound,
            self.t0,
        )
    }

    fn check_bound(&self, value: f64, t: f64) -> Result<()> {
        if value.abs() <= self.bound {
            Ok(())
        } else {
            Err(Error::DisturbanceBound {
                t,
                value,
                bound: self.bound,
            })
        }
    }

    /// `dz/dτ = rF(z₁) + rA₀z - (ρ'/ρ)Mz + r^{1-n}ρ^{-n}Dδ̂`.
    pub fn aux_rhs_into(&self, tau: f64, z: &[f64], delta_hat: f64, out: &mut [f64]) -> Result<()> {
        self.check_bound(delta_hat, tau)?;
        let n = self.n();
        let after = self.field.switch_tau().is_some_and(|s| tau > s);
        self.field.eval_into(z[0], after, out);
        let log_der = self.profile.rho_log_derivative(tau)?;
        for i in 0..n {
            let shift = if i + 1 < n { z[i + 1] } else { 0.0 };
            out[i] = self.r * (out[i] + shift) - log_der * i as f64 * z[i];
        }
        if delta_hat != 0.0 {
            let rho = self.profile.rho(tau)?;
            let coeff = self.r.powi(1 - n as i32) * rho.powi(-(n as i32));
            if !coeff.is_finite() {
                return Err(Error::Domain {
                    what: "disturbance channel with r = 0",
                    value: self.r,
                });
            }
            out[n - 1] += coeff * delta_hat;
        }
        Ok(())
    }

    pub fn aux_rhs(&self, tau: f64, z: &[f64], delta_hat: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n()];
        self.aux_rhs_into(tau, z, delta_hat, &mut out)?;
        Ok(out)
    }

    /// `H(y₁, t)`: `Λ(rκ)F(y₁)` before `t₀ + ηT_c` (less the guard), `G(y₁)` after.
    #[inline]
    pub fn eval_h_into(&self, y1: f64, t: f64, out: &mut [f64]) {
        self.eval_h_elapsed(y1, t - self.t0, out)
    }

    /// [`Self::eval_h_into`] with the time already measured from `t₀`.
    #[inline]
    pub fn eval_h_elapsed(&self, y1: f64, t_hat: f64, out: &mut [f64]) {
        if self.profile.in_transient(t_hat) {
            let gain = self.r * self.profile.kappa(t_hat);
            let after = self.switch_elapsed.is_some_and(|s| t_hat > s);
            self.field.eval_into(y1, after, out);
            let mut scale = 1.0;
            for o in out.iter_mut() {
                scale *= gain;
                *o *= scale;
            }
        } else {
            self.drift.eval_into(y1, out);
        }
    }

    pub fn eval_h(&self, y1: f64, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        self.eval_h_into(y1, t, &mut out);
        out
    }

    /// `ẏ = H(y₁, t) + A₀y + Dδ`, with `t` measured from `t₀`.
    #[inline]
    pub fn redesigned_rhs_elapsed(&self, t_hat: f64, y: &[f64], delta: f64, out: &mut [f64]) -> Result<()> {
        self.check_bound(delta, t_hat + self.t0)?;
        self.eval_h_elapsed(y[0], t_hat, out);
        let n = out.len();
        for i in 0..n - 1 {
            out[i] += y[i + 1];
        }
        out[n - 1] += delta;
        Ok(())
    }

    pub fn redesigned_rhs(&self, t: f64, y: &[f64], delta: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n()];
        self.redesigned_rhs_elapsed(t - self.t0, y, delta, &mut out)?;
        Ok(out)
    }
}
