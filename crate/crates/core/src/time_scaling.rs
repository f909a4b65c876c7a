//! Time-scale profiles.
//!
//! A profile is the reciprocal pair `Φ = 1/(T_c ρ)`, where `Φ` is a density on
//! `[0, ∞)` with unit mass. It generates the monotone map
//! `ψ(τ) = T_c ∫₀^τ Φ`, which compresses the infinite auxiliary horizon into
//! `[0, T_c)`, and the time-varying gain `κ(t̂) = ρ(ψ⁻¹(t̂))` used while
//! `t̂ < ηT_c`. After that instant `κ ≡ 1`.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use crate::error::{Error, Result};

/// Default cap applied to `κ`. The unclamped gain is unbounded when `η = 1`.
pub const DEFAULT_KAPPA_MAX: f64 = 1e9;

const PSI_INV_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// `ρ(τ) = exp(ατ)/(αT_c)`, so `ρ'/ρ = α`.
    Exponential { alpha: f64 },
    /// `ρ(τ) = π(τ² + 1)/(2T_c)`, so `ρ'/ρ → 0`.
    Rational,
    /// Piecewise-linear density through user samples.
    Tabulated(TabulatedDensity),
}

/// Piecewise-linear density `Φ` on `[0, τ_N]`, normalized to unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    taus: Vec<f64>,
    phis: Vec<f64>,
    /// `∫₀^{τ_k} Φ` at every node.
    cumulative: Vec<f64>,
    /// Centered-difference estimate of `Φ'` at every node.
    slopes: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(taus: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if taus.len() < 2 || taus.len() != phis.len() {
            return Err(Error::invalid(
                "tabulated profile needs at least two (tau, phi) samples of equal length",
            ));
        }
        if taus[0] != 0.0 {
            return Err(Error::invalid("tabulated profile must start at tau = 0"));
        }
        if taus.windows(2).any(|w| !(w[1] > w[0])) || taus.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("tabulated tau grid must be finite and strictly increasing"));
        }
        if phis.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::invalid("tabulated phi samples must be finite and positive"));
        }

        let mut cumulative = Vec::with_capacity(taus.len());
        cumulative.push(0.0);
        for k in 1..taus.len() {
            let d = taus[k] - taus[k - 1];
            cumulative.push(cumulative[k - 1] + 0.5 * d * (phis[k] + phis[k - 1]));
        }
        let mass = *cumulative.last().unwrap();
        let phis: Vec<f64> = phis.iter().map(|p| p / mass).collect();
        let cumulative: Vec<f64> = cumulative.iter().map(|c| c / mass).collect();

        let last = taus.len() - 1;
        let slopes = (0..taus.len())
            .map(|k| {
                let (lo, hi) = (k.saturating_sub(1), (k + 1).min(last));
                (phis[hi] - phis[lo]) / (taus[hi] - taus[lo])
            })
            .collect();

        Ok(Self {
            taus,
            phis,
            cumulative,
            slopes,
        })
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn horizon(&self) -> f64 {
        *self.taus.last().unwrap()
    }

    fn segment(&self, tau: f64) -> usize {
        match self.taus.binary_search_by(|t| t.partial_cmp(&tau).unwrap()) {
            Ok(k) => k.min(self.taus.len() - 2),
            Err(k) => k.saturating_sub(1).min(self.taus.len() - 2),
        }
    }

    fn density(&self, tau: f64) -> f64 {
        let k = self.segment(tau);
        let w = (tau - self.taus[k]) / (self.taus[k + 1] - self.taus[k]);
        self.phis[k] + w * (self.phis[k + 1] - self.phis[k])
    }

    fn density_slope(&self, tau: f64) -> f64 {
        let k = self.segment(tau);
        let w = (tau - self.taus[k]) / (self.taus[k + 1] - self.taus[k]);
        self.slopes[k] + w * (self.slopes[k + 1] - self.slopes[k])
    }

    /// Exact integral of the linear interpolant (trapezoid rule per segment).
    fn mass_until(&self, tau: f64) -> f64 {
        if tau >= self.horizon() {
            return 1.0;
        }
        let k = self.segment(tau);
        let d = tau - self.taus[k];
        let slope = (self.phis[k + 1] - self.phis[k]) / (self.taus[k + 1] - self.taus[k]);
        self.cumulative[k] + self.phis[k] * d + 0.5 * slope * d * d
    }
}

/// Immutable time-scale object: `ρ`, `Φ`, `ψ`, `ψ⁻¹`, `κ`, `η`, `T_c`, `T_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowUpProfile {
    kind: ProfileKind,
    t_c: f64,
    t_f: f64,
    eta: f64,
    kappa_max: f64,
    switch_guard: f64,
}

impl BlowUpProfile {
    pub fn new(kind: ProfileKind, t_c: f64, t_f: f64) -> Result<Self> {
        if !(t_c.is_finite() && t_c > 0.0) {
            return Err(Error::invalid(format!("T_c must be positive and finite, got {t_c}")));
        }
        if !(t_f > 0.0) {
            return Err(Error::invalid(format!("T_f must be positive or +inf, got {t_f}")));
        }
        if let ProfileKind::Exponential { alpha } = kind {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
            }
        }
        let eta = compute_eta(&kind, t_f);
        Ok(Self {
            kind,
            t_c,
            t_f,
            eta,
            kappa_max: DEFAULT_KAPPA_MAX,
            switch_guard: 0.0,
        })
    }

    pub fn exponential(alpha: f64, t_c: f64, t_f: f64) -> Result<Self> {
        Self::new(ProfileKind::Exponential { alpha }, t_c, t_f)
    }

    pub fn rational(t_c: f64, t_f: f64) -> Result<Self> {
        Self::new(ProfileKind::Rational, t_c, t_f)
    }

    pub fn tabulated(taus: Vec<f64>, phis: Vec<f64>, t_c: f64, t_f: f64) -> Result<Self> {
        Self::new(ProfileKind::Tabulated(TabulatedDensity::new(taus, phis)?), t_c, t_f)
    }

    pub fn with_kappa_max(mut self, kappa_max: f64) -> Result<Self> {
        if !(kappa_max >= 1.0) {
            return Err(Error::invalid(format!("kappa_max must be >= 1, got {kappa_max}")));
        }
        self.kappa_max = kappa_max;
        Ok(self)
    }

    /// Moves the branch point to `ηT_c - guard`, so the terminal branch takes
    /// over slightly early instead of evaluating `ρ∘ψ⁻¹` at its singularity.
    pub fn with_switch_guard(mut self, guard: f64) -> Result<Self> {
        if !(guard >= 0.0 && guard < self.eta * self.t_c) {
            return Err(Error::invalid(format!("switch guard {guard} out of range")));
        }
        self.switch_guard = guard;
        Ok(self)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn t_c(&self) -> f64 {
        self.t_c
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa_max
    }

    pub fn switch_guard(&self) -> f64 {
        self.switch_guard
    }

    /// The prescribed settling bound `ηT_c`.
    pub fn ubst(&self) -> f64 {
        self.eta * self.t_c
    }

    /// Elapsed time at which the terminal branch takes over.
    pub fn transient_end(&self) -> f64 {
        self.ubst() - self.switch_guard
    }

    pub fn in_transient(&self, t_hat: f64) -> bool {
        t_hat < self.transient_end()
    }

    fn check_tau(&self, tau: f64) -> Result<()> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::Domain { what: "tau", value: tau });
        }
        if let ProfileKind::Tabulated(tab) = &self.kind {
            if tau > tab.horizon() {
                return Err(Error::Domain { what: "tau beyond tabulated horizon", value: tau });
            }
        }
        Ok(())
    }

    /// Density `Φ(τ)`.
    pub fn phi(&self, tau: f64) -> Result<f64> {
        self.check_tau(tau)?;
        Ok(match &self.kind {
            ProfileKind::Exponential { alpha } => alpha * (-alpha * tau).exp(),
            ProfileKind::Rational => FRAC_2_PI / (tau * tau + 1.0),
            ProfileKind::Tabulated(tab) => tab.density(tau),
        })
    }

    /// Blow-up function `ρ(τ) = 1/(T_c Φ(τ))`.
    pub fn rho(&self, tau: f64) -> Result<f64> {
        self.check_tau(tau)?;
        Ok(match &self.kind {
            ProfileKind::Exponential { alpha } => (alpha * tau).exp() / (alpha * self.t_c),
            ProfileKind::Rational => FRAC_PI_2 * (tau * tau + 1.0) / self.t_c,
            ProfileKind::Tabulated(tab) => 1.0 / (self.t_c * tab.density(tau)),
        })
    }

    /// `ln ρ(τ)`, finite where `ρ` itself would overflow.
    pub fn ln_rho(&self, tau: f64) -> Result<f64> {
        self.check_tau(tau)?;
        Ok(match &self.kind {
            ProfileKind::Exponential { alpha } => alpha * tau - (alpha * self.t_c).ln(),
            ProfileKind::Rational => (FRAC_PI_2 / self.t_c).ln() + tau.mul_add(tau, 1.0).ln(),
            ProfileKind::Tabulated(tab) => -(self.t_c * tab.density(tau)).ln(),
        })
    }

    /// `ρ(τ)⁻¹ dρ/dτ`, analytic for the built-in kinds.
    pub fn rho_log_derivative(&self, tau: f64) -> Result<f64> {
        self.check_tau(tau)?;
        Ok(match &self.kind {
            ProfileKind::Exponential { alpha } => *alpha,
            ProfileKind::Rational => 2.0 * tau / (tau * tau + 1.0),
            // ρ = 1/(T_c Φ)  =>  ρ'/ρ = -Φ'/Φ
            ProfileKind::Tabulated(tab) => -tab.density_slope(tau) / tab.density(tau),
        })
    }

    /// `ψ(τ) = T_c ∫₀^τ Φ`.
    pub fn psi(&self, tau: f64) -> Result<f64> {
        self.check_tau(tau)?;
        Ok(match &self.kind {
            ProfileKind::Exponential { alpha } => -self.t_c * (-alpha * tau).exp_m1(),
            ProfileKind::Rational => self.t_c * FRAC_2_PI * tau.atan(),
            ProfileKind::Tabulated(tab) => self.t_c * tab.mass_until(tau),
        })
    }

    /// Inverse of `ψ` on `[0, ηT_c)`.
    pub fn psi_inv(&self, t_hat: f64) -> Result<f64> {
        if !(t_hat.is_finite() && t_hat >= 0.0) {
            return Err(Error::Domain { what: "t_hat", value: t_hat });
        }
        if t_hat >= self.ubst() {
            return Err(Error::OutOfRange { t_hat, limit: self.ubst() });
        }
        Ok(self.psi_inv_unchecked(t_hat))
    }

    fn psi_inv_unchecked(&self, t_hat: f64) -> f64 {
        match &self.kind {
            ProfileKind::Exponential { alpha } => -(-t_hat / self.t_c).ln_1p() / alpha,
            ProfileKind::Rational => (FRAC_PI_2 * t_hat / self.t_c).tan(),
            ProfileKind::Tabulated(tab) => {
                let target = t_hat / self.t_c;
                let (mut lo, mut hi) = (0.0, tab.horizon());
                while hi - lo > f64::EPSILON * hi.max(1.0) {
                    let mid = 0.5 * (lo + hi);
                    let m = tab.mass_until(mid);
                    if (m - target).abs() <= PSI_INV_TOL {
                        return mid;
                    }
                    if m < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    /// Gain `κ(t̂)`: `ρ(ψ⁻¹(t̂))` during the transient (capped at `κ_max`), 1 afterwards.
    pub fn kappa(&self, t_hat: f64) -> f64 {
        if !self.in_transient(t_hat) {
            return 1.0;
        }
        let tau = self.psi_inv_unchecked(t_hat.max(0.0));
        let rho = match &self.kind {
            ProfileKind::Exponential { alpha } => (alpha * tau).exp() / (alpha * self.t_c),
            ProfileKind::Rational => FRAC_PI_2 * (tau * tau + 1.0) / self.t_c,
            ProfileKind::Tabulated(tab) => 1.0 / (self.t_c * tab.density(tau)),
        };
        rho.min(self.kappa_max)
    }
}

/// `η = lim_{τ→T_f} ψ(τ)/T_c`.
pub fn compute_eta(kind: &ProfileKind, t_f: f64) -> f64 {
    if t_f == f64::INFINITY {
        return 1.0;
    }
    match kind {
        ProfileKind::Exponential { alpha } => -(-alpha * t_f).exp_m1(),
        ProfileKind::Rational => FRAC_2_PI * t_f.atan(),
        ProfileKind::Tabulated(tab) => tab.mass_until(t_f),
    }
}

/// Result of [`choose_alpha_for_slack`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlackChoice {
    pub alpha: f64,
    /// Achieved `s_ρ = T_c (e^{-α T_f*} - e^{-α T_max*})`.
    pub slack: f64,
}

/// Slack between the least settling bound and `ηT_c` for an exponential profile.
pub fn exponential_slack(alpha: f64, t_f_star: f64, t_max_star: f64, t_c: f64) -> f64 {
    t_c * ((-alpha * t_f_star).exp() - (-alpha * t_max_star).exp())
}

/// Picks the rate `α` of an exponential profile so that the slack between the
/// true worst-case settling time `T_f*` and the design bound `T_max*` maps to at
/// most `epsilon` time units after the time-scale compression.
///
/// The slack vanishes at `α → 0`, peaks, then decays; the search stays on the
/// decaying tail (doubling, then bisection) and returns its smallest admissible
/// rate.
pub fn choose_alpha_for_slack(
    t_f_star: f64,
    t_max_star: f64,
    t_c: f64,
    epsilon: f64,
) -> Result<SlackChoice> {
    if !(t_f_star > 0.0 && t_f_star <= t_max_star && t_max_star.is_finite()) {
        return Err(Error::invalid(format!(
            "need 0 < T_f* <= T_max* < inf, got T_f*={t_f_star}, T_max*={t_max_star}"
        )));
    }
    if !(epsilon > 0.0 && t_c > 0.0) {
        return Err(Error::invalid("epsilon and T_c must be positive"));
    }
    if t_f_star == t_max_star {
        return Ok(SlackChoice { alpha: 1.0, slack: 0.0 });
    }
    let slack = |a: f64| exponential_slack(a, t_f_star, t_max_star, t_c);

    let peak = (t_max_star / t_f_star).ln() / (t_max_star - t_f_star);
    if slack(peak) <= epsilon {
        return Ok(SlackChoice { alpha: peak, slack: slack(peak) });
    }
    let mut lo = peak;
    let mut hi = peak.max(1.0);
    while slack(hi) > epsilon {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::invalid("slack search did not terminate"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slack(mid) > epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(SlackChoice { alpha: hi, slack: slack(hi) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn rho_examples() {
        let e1 = BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY).unwrap();
        assert_relative_eq!(e1.rho(0.0).unwrap(), 1.0);
        let r = BlowUpProfile::rational(1.0, f64::INFINITY).unwrap();
        assert_relative_eq!(r.rho(0.0).unwrap(), PI / 2.0, max_relative = 1e-15);
        let e2 = BlowUpProfile::exponential(2.0, 0.5, f64::INFINITY).unwrap();
        assert_relative_eq!(e2.rho(1.0).unwrap(), 2f64.exp(), max_relative = 1e-15);
        assert!(matches!(e1.rho(f64::NAN), Err(Error::Domain { .. })));
        assert!(matches!(e1.rho(f64::INFINITY), Err(Error::Domain { .. })));
    }

    #[test]
    fn psi_examples() {
        let e1 = BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY).unwrap();
        let r = BlowUpProfile::rational(1.0, f64::INFINITY).unwrap();
        assert_eq!(e1.psi(0.0).unwrap(), 0.0);
        assert_eq!(r.psi(0.0).unwrap(), 0.0);
        assert_relative_eq!(e1.psi(LN_2).unwrap(), 0.5, max_relative = 1e-15);
        assert_relative_eq!(r.psi(1.0).unwrap(), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn psi_inv_examples() {
        let e1 = BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY).unwrap();
        let r = BlowUpProfile::rational(1.0, f64::INFINITY).unwrap();
        assert_eq!(e1.psi_inv(0.0).unwrap(), 0.0);
        assert_relative_eq!(e1.psi_inv(0.5).unwrap(), LN_2, max_relative = 1e-15);
        assert_relative_eq!(r.psi_inv(0.5).unwrap(), 1.0, max_relative = 1e-15);
        assert!(matches!(r.psi_inv(1.0), Err(Error::OutOfRange { .. })));
        let short = BlowUpProfile::exponential(1.0, 1.0, LN_2).unwrap();
        assert!(matches!(short.psi_inv(0.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn kappa_examples() {
        let e1 = BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY).unwrap();
        assert_relative_eq!(e1.kappa(0.9), 10.0, max_relative = 1e-12);
        let r = BlowUpProfile::rational(1.0, f64::INFINITY).unwrap();
        assert_relative_eq!(r.kappa(0.5), PI, max_relative = 1e-12);
        assert_eq!(r.kappa(1.0), 1.0);
        assert_eq!(r.kappa(3.0), 1.0);
        let short = BlowUpProfile::exponential(1.0, 1.0, LN_2).unwrap();
        assert_eq!(short.kappa(0.5), 1.0);
        assert_eq!(short.kappa(0.6), 1.0);
    }

    #[test]
    fn rational_kappa_general_form() {
        // κ = π sec²(π t̂ / (2T_c)) / (2T_c) for arbitrary T_c
        let t_c = 2.5;
        let r = BlowUpProfile::rational(t_c, f64::INFINITY).unwrap();
        for &t in &[0.0, 0.3, 1.0, 2.0, 2.4] {
            let sec = 1.0 / (PI * t / (2.0 * t_c)).cos();
            assert_relative_eq!(r.kappa(t), PI * sec * sec / (2.0 * t_c), max_relative = 1e-12);
        }
    }

    #[test]
    fn kappa_clamp_and_guard() {
        let e1 = BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY)
            .unwrap()
            .with_kappa_max(50.0)
            .unwrap()
            .with_switch_guard(1e-3)
            .unwrap();
        assert_eq!(e1.kappa(0.99), 50.0);
        assert_eq!(e1.kappa(1.0 - 1e-3), 1.0);
        assert!(e1.in_transient(1.0 - 1.1e-3));
        assert!(e1.with_kappa_max(0.5).is_err());
    }

    #[test]
    fn eta_examples() {
        let e1 = ProfileKind::Exponential { alpha: 1.0 };
        assert_eq!(compute_eta(&e1, f64::INFINITY), 1.0);
        assert_eq!(compute_eta(&ProfileKind::Rational, f64::INFINITY), 1.0);
        assert_relative_eq!(compute_eta(&e1, LN_2), 0.5, max_relative = 1e-15);
        assert_eq!(compute_eta(&e1, 233.7349), 1.0);
        assert_relative_eq!(
            compute_eta(&ProfileKind::Rational, 1.0),
            0.5,
            max_relative = 1e-15
        );
    }

    #[test]
    fn slack_chooser() {
        let deg = choose_alpha_for_slack(5.0, 5.0, 1.0, 0.1).unwrap();
        assert_eq!(deg, SlackChoice { alpha: 1.0, slack: 0.0 });

        let big = choose_alpha_for_slack(1.0, 233.7349, 1.0, 1e-3).unwrap();
        assert!(big.slack <= 1e-3);
        // e^{-α} = 1e-3 at α = ln 1000
        assert_relative_eq!(big.alpha, 1000f64.ln(), max_relative = 1e-9);

        // root of e^{-α} - e^{-2α} = 0.05 on the decaying tail (brentq oracle)
        let mid = choose_alpha_for_slack(1.0, 2.0, 1.0, 0.05).unwrap();
        assert_relative_eq!(mid.alpha, 2.941_501_611_955_805_7, max_relative = 1e-9);
        assert!(mid.slack <= 0.05);

        assert!(choose_alpha_for_slack(2.0, 1.0, 1.0, 0.1).is_err());
        assert!(choose_alpha_for_slack(1.0, f64::INFINITY, 1.0, 0.1).is_err());
    }

    #[test]
    fn tabulated_matches_exponential_shape() {
        let taus: Vec<f64> = (0..=4000).map(|k| k as f64 * 0.01).collect();
        let phis: Vec<f64> = taus.iter().map(|t| (-t).exp()).collect();
        let tab = BlowUpProfile::tabulated(taus, phis, 1.0, f64::INFINITY).unwrap();
        let ex = BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY).unwrap();
        for &tau in &[0.0, 0.5, 1.0, 3.0, 7.0] {
            assert_relative_eq!(tab.psi(tau).unwrap(), ex.psi(tau).unwrap(), epsilon = 1e-4);
        }
        // centered slopes are one-sided at the first sample
        for &tau in &[0.5, 1.0, 3.0, 7.0] {
            assert_relative_eq!(tab.rho_log_derivative(tau).unwrap(), 1.0, epsilon = 1e-3);
        }
        let t = tab.psi(2.0).unwrap();
        assert_relative_eq!(tab.psi(tab.psi_inv(t).unwrap()).unwrap(), t, epsilon = 1e-12);
        assert_eq!(tab.eta(), 1.0);
        assert!(tab.rho(41.0).is_err());
    }

    #[test]
    fn tabulated_rejects_bad_samples() {
        assert!(TabulatedDensity::new(vec![0.0], vec![1.0]).is_err());
        assert!(TabulatedDensity::new(vec![0.5, 1.0], vec![1.0, 1.0]).is_err());
        assert!(TabulatedDensity::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(TabulatedDensity::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn psi_round_trip_and_monotone_gain(
            alpha in 0.2f64..5.0,
            t_c in 0.1f64..10.0,
            u in 0.0f64..0.999,
            v in 0.0f64..0.999,
        ) {
            for p in [
                BlowUpProfile::exponential(alpha, t_c, f64::INFINITY).unwrap(),
                BlowUpProfile::rational(t_c, f64::INFINITY).unwrap(),
            ] {
                let (a, b) = (u.min(v) * t_c, u.max(v) * t_c);
                let back = p.psi(p.psi_inv(a).unwrap()).unwrap();
                proptest::prop_assert!((back - a).abs() <= 1e-12 * t_c);
                proptest::prop_assert!(p.kappa(a) <= p.kappa(b));
                proptest::prop_assert!(p.kappa(a) >= p.rho(0.0).unwrap() * (1.0 - 1e-12));
            }
        }
    }
}
