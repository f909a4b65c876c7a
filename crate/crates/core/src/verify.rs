//! Numerical checks of the design guarantees: settling before `ηT_c`, the
//! `τ`/`t` change-of-coordinates equivalence, gain bounds, the Lyapunov
//! `r`-bound and the exponential-decay condition on the profile.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::differentiator::DifferentiatorDynamics;
use crate::error::{Error, Result};
use crate::linalg::{ensure_hurwitz, solve_dense};
use crate::redesign::SystemPair;
use crate::sim::{
    advance, integrate, next_node, AuxiliaryDynamics, Dynamics, Instant, Disturbance, DisturbanceSignal, OutputGrid, RedesignedDynamics,
    Signal, StepPolicy, Trajectory, Workspace,
};
use crate::time_scaling::{BlowUpProfile, ProfileKind};

pub const DEFAULT_EPSILON: f64 = 1e-2;
pub const DEFAULT_DWELL: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettlingReport {
    /// Absolute time after which the sup-norm stays within `epsilon`; `None` if it never does.
    pub settle_time: Option<f64>,
    pub epsilon: f64,
    pub dwell: f64,
    /// Largest sup-norm seen from `settle_time` on.
    pub max_excursion: f64,
}

fn sup_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Earliest sample after which every sample has sup-norm `≤ ε`, provided at
/// least `dwell` time remains after it.
pub fn estimate_settling_time(traj: &Trajectory, epsilon: f64, dwell: f64) -> Result<SettlingReport> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("settling threshold must be positive"));
    }
    if traj.is_empty() {
        return Err(Error::invalid("empty trajectory"));
    }
    let span = traj.elapsed[traj.len() - 1] - traj.elapsed[0];
    if !(dwell >= 0.0 && dwell <= span) {
        return Err(Error::invalid(format!("dwell {dwell} exceeds the span {span}")));
    }
    let mut start = traj.len();
    let mut excursion = 0.0f64;
    for i in (0..traj.len()).rev() {
        let norm = sup_norm(traj.state(i));
        if norm > epsilon {
            break;
        }
        excursion = excursion.max(norm);
        start = i;
    }
    let end = traj.elapsed[traj.len() - 1];
    let settle_time = (start < traj.len() && end - traj.elapsed[start] >= dwell).then(|| traj.time(start));
    Ok(SettlingReport {
        settle_time,
        epsilon,
        dwell,
        max_excursion: if settle_time.is_some() { excursion } else { f64::NAN },
    })
}

/// Maximum over `grid` (elapsed `t̂`) of the per-component deviation between
/// the mapped auxiliary solution and the directly integrated redesigned
/// solution, each component normalised by its peak magnitude.
///
/// Both sides use explicit Euler with base step `h`; the `t`-side also
/// subdivides by the gain as in [`StepPolicy::euler`].
pub fn equivalence_oracle(
    pair: &SystemPair,
    z0: &[f64],
    tau_max: f64,
    grid: &[f64],
    disturbance: &dyn Disturbance,
    h: f64,
) -> Result<f64> {
    let profile = pair.profile();
    let t_max = profile.psi(tau_max)?;
    if t_max >= profile.transient_end() {
        return Err(Error::Domain { what: "psi(tau_max) reaches the terminal branch", value: tau_max });
    }
    if grid.is_empty() {
        return Err(Error::invalid("empty comparison grid"));
    }
    for &t in grid {
        if !(t >= 0.0 && t <= t_max) {
            return Err(Error::Domain { what: "grid time beyond psi(tau_max)", value: t });
        }
    }
    let n = pair.n();
    let taus = grid.iter().map(|&t| profile.psi_inv(t)).collect::<Result<Vec<_>>>()?;

    let aux = AuxiliaryDynamics { pair, disturbance };
    // the auxiliary side has unit gain, so this is a plain fixed step
    let z_traj = integrate(&aux, z0, 0.0, tau_max, &StepPolicy::euler(h), &OutputGrid::Times(taus.clone()))?;

    let mut y0 = z0.to_vec();
    let rho0 = profile.rho(0.0)?;
    for (i, y) in y0.iter_mut().enumerate() {
        *y *= (pair.r() * rho0).powi(i as i32);
    }
    let direct = RedesignedDynamics { pair, disturbance };
    let y_traj = integrate(&direct, &y0, pair.t0(), t_max, &StepPolicy::euler(h), &OutputGrid::Times(grid.to_vec()))?;

    // OutputGrid::Times keeps sorted, deduplicated nodes
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
    order.dedup_by(|a, b| grid[*a] == grid[*b]);

    let mut mapped = vec![vec![0.0; n]; order.len()];
    let mut peak = vec![0.0f64; n];
    for (row, &g) in order.iter().enumerate() {
        let tau = taus[g];
        let scale = pair.r() * profile.rho(tau)?;
        let z = z_traj.state(row);
        for i in 0..n {
            mapped[row][i] = scale.powi(i as i32) * z[i];
            peak[i] = peak[i].max(mapped[row][i].abs());
        }
    }
    let mut worst = 0.0f64;
    for (row, m) in mapped.iter().enumerate() {
        let y = y_traj.state(row);
        for i in 0..n {
            if peak[i] > 0.0 {
                worst = worst.max((m[i] - y[i]).abs() / peak[i]);
            } else {
                worst = worst.max((m[i] - y[i]).abs());
            }
        }
    }
    Ok(worst)
}

/// Solves `PA + AᵀP = -I` over the `n(n+1)/2` entries of a symmetric `P`;
/// returns `P` and its largest eigenvalue.
pub fn lyapunov_solve(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::invalid("Lyapunov solve needs a square matrix"));
    }
    ensure_hurwitz(a, "Lyapunov solve")?;
    let index = |i: usize, j: usize| {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * n - i * (i + 1) / 2 + j
    };
    let m = n * (n + 1) / 2;
    let mut lhs = DMatrix::zeros(m, m);
    let mut rhs = vec![0.0; m];
    for i in 0..n {
        for j in i..n {
            let row = index(i, j);
            // (PA)_ij + (AᵀP)_ij = Σ_k P_ik A_kj + A_ki P_kj
            for k in 0..n {
                lhs[(row, index(i, k))] += a[(k, j)];
                lhs[(row, index(k, j))] += a[(k, i)];
            }
            rhs[row] = if i == j { -1.0 } else { 0.0 };
        }
    }
    let p_vec = solve_dense(&lhs, &rhs)?;
    let p = DMatrix::from_fn(n, n, |i, j| p_vec[index(i, j)]);
    let lambda_max = SymmetricEigen::new(p.clone())
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((p, lambda_max))
}

/// `‖PA + AᵀP + I‖∞` (max absolute row sum).
pub fn lyapunov_residual(a: &DMatrix<f64>, p: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let r = p * a + a.transpose() * p + DMatrix::identity(n, n);
    (0..n)
        .map(|i| r.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `2 λ_max(P) (n - 1)` for the Lyapunov solution of `A`.
pub fn min_linear_gain(a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    let (_, lambda) = lyapunov_solve(a)?;
    Ok(2.0 * lambda * (n as f64 - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub holds: bool,
    /// First grid point where `c ≤ (n-1) ln ρ(τ)/τ`, with the right side.
    pub witness: Option<(f64, f64)>,
    pub max_rhs: f64,
    /// `(n-1)α` for exponential profiles.
    pub asymptote: Option<f64>,
}

/// Checks `c > (n-1) ln ρ(τ) / τ` on a log grid over `[τ*, 10⁴]` (clipped to a
/// tabulated horizon).
pub fn decay_condition(c: f64, profile: &BlowUpProfile, n: usize, tau_star: f64) -> Result<DecayReport> {
    if !(c > 0.0 && tau_star > 0.0) {
        return Err(Error::invalid("decay condition: c and tau* must be positive"));
    }
    let upper = match profile.kind() {
        ProfileKind::Tabulated(tab) => tab.horizon().min(1e4),
        _ => 1e4,
    };
    if tau_star > upper {
        return Err(Error::Domain { what: "tau* beyond the profile horizon", value: tau_star });
    }
    let points = 2000;
    let (lo, hi) = (tau_star.ln(), upper.ln());
    let mut witness = None;
    let mut max_rhs = f64::NEG_INFINITY;
    for k in 0..points {
        let tau = if k + 1 == points { upper } else { (lo + (hi - lo) * k as f64 / (points - 1) as f64).exp() };
        let rhs = (n as f64 - 1.0) * profile.ln_rho(tau)? / tau;
        max_rhs = max_rhs.max(rhs);
        if witness.is_none() && c <= rhs {
            witness = Some((tau, rhs));
        }
    }
    let asymptote = match profile.kind() {
        ProfileKind::Exponential { alpha } => Some((n as f64 - 1.0) * alpha),
        _ => None,
    };
    Ok(DecayReport {
        holds: witness.is_none(),
        witness,
        max_rhs,
        asymptote,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub init: Vec<f64>,
    pub settle_time: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub bound: f64,
    pub tolerance: f64,
    pub rows: Vec<SweepRow>,
    /// Settle times never decrease as `‖x₀‖` grows.
    pub nondecreasing_in_norm: bool,
    pub max_settle: Option<f64>,
    pub pass: bool,
}

/// Simulates every initial condition (in parallel) and checks
/// `settle_time ≤ ηT_c + 2h` (times measured from `t₀`).
#[allow(clippy::too_many_arguments)]
pub fn check_ubst_sweep(
    pair: &SystemPair,
    inits: &[Vec<f64>],
    disturbance: &(dyn Disturbance + Sync),
    policy: &StepPolicy,
    horizon: f64,
    stride: usize,
    epsilon: f64,
    dwell: f64,
) -> SweepReport {
    let bound = pair.profile().ubst();
    let tolerance = 2.0 * policy.h;
    let rows: Vec<SweepRow> = inits
        .par_iter()
        .map(|x0| {
            let dynamics = RedesignedDynamics { pair, disturbance };
            let outcome = integrate(&dynamics, x0, pair.t0(), horizon, policy, &OutputGrid::Stride(stride))
                .and_then(|traj| estimate_settling_time(&traj, epsilon, dwell));
            match outcome {
                Ok(report) => {
                    let settle = report.settle_time.map(|t| t - pair.t0());
                    SweepRow {
                        init: x0.clone(),
                        settle_time: settle,
                        pass: settle.is_some_and(|s| s <= bound + tolerance),
                        error: None,
                    }
                }
                Err(e) => SweepRow {
                    init: x0.clone(),
                    settle_time: None,
                    pass: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let mut by_norm: Vec<&SweepRow> = rows.iter().collect();
    by_norm.sort_by(|a, b| sup_norm(&a.init).total_cmp(&sup_norm(&b.init)));
    let nondecreasing_in_norm = by_norm.windows(2).all(|w| match (w[0].settle_time, w[1].settle_time) {
        (Some(a), Some(b)) => a <= b,
        _ => false,
    });
    let max_settle = rows
        .iter()
        .map(|r| r.settle_time)
        .try_fold(f64::NEG_INFINITY, |m, s| s.map(|s| m.max(s)));
    let pass = rows.iter().all(|r| r.pass);
    SweepReport {
        bound,
        tolerance,
        rows,
        nondecreasing_in_norm,
        max_settle,
        pass,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainBoundReport {
    pub skipped: Option<String>,
    pub bound: Option<f64>,
    pub max_gain: f64,
    pub pass: bool,
}

/// Every recorded gain must stay below `ρ(T_max*)`.
pub fn check_gain_bound(traj: &Trajectory, profile: &BlowUpProfile, t_max_star: f64) -> Result<GainBoundReport> {
    let max_gain = traj.gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !t_max_star.is_finite() || !profile.t_f().is_finite() {
        return Ok(GainBoundReport {
            skipped: Some("unbounded-gain design: T_f is infinite".into()),
            bound: None,
            max_gain,
            pass: true,
        });
    }
    let bound = profile.rho(t_max_star)?;
    Ok(GainBoundReport {
        skipped: None,
        bound: Some(bound),
        max_gain,
        pass: max_gain.is_finite() && max_gain <= bound,
    })
}

/// Maps a differentiator state to error coordinates: `w` unchanged, `z_i - y^{(i)}(t)`.
pub fn differentiator_error(state: &[f64], n_f: usize, signal: &Signal, t: f64) -> Vec<f64> {
    state
        .iter()
        .enumerate()
        .map(|(i, s)| if i < n_f { *s } else { s - signal.derivative((i - n_f) as u32, t) })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferentiatorEquivalence {
    /// Largest deviation after one integration step, both sides started from
    /// the same mapped state.
    pub max_step_deviation: f64,
    /// Deviation after running both sides independently over the whole span.
    pub accumulated_deviation: f64,
    pub steps: usize,
}

/// Compares the differentiator driven by `signal` with the redesigned error
/// system driven by `δ = -y^{(n_d+1)}`, step by step over the substep
/// sequence the integrator takes on a base grid of spacing `policy.h`.
pub fn differentiator_equivalence(
    pair: &SystemPair,
    n_f: usize,
    signal: &Signal,
    initial_state: &[f64],
    policy: &StepPolicy,
    duration: f64,
) -> Result<DifferentiatorEquivalence> {
    let n = pair.n();
    if initial_state.len() != n || n_f >= n {
        return Err(Error::invalid("differentiator state does not match the system order"));
    }
    let n_d = n - n_f - 1;
    let input = |t: f64| signal.value(t);
    let diff = DifferentiatorDynamics { pair, n_f, input };
    let delta = DisturbanceSignal::DerivativeOfSignal { signal: signal.clone(), order: (n_d + 1) as u32 };
    let errsys = RedesignedDynamics { pair, disturbance: &delta };
    let origin = pair.t0();
    let switch = pair.profile().transient_end();
    let mut ws = Workspace::new(n);
    let mut s = initial_state.to_vec();
    let mut free = differentiator_error(&s, n_f, signal, origin);
    let mut max_step = 0.0f64;
    let mut steps = 0;
    let base = (duration / policy.h).ceil() as usize;
    for j in 0..base {
        let from = j as f64 * policy.h;
        let end = ((j + 1) as f64 * policy.h).min(duration);
        let segments = if from < switch && switch < end {
            vec![(from, switch), (switch, end)]
        } else {
            vec![(from, end)]
        };
        for (a, b) in segments {
            let mut t = a;
            while t < b {
                let (_, next) = next_node(policy, diff.gain(Instant { origin, elapsed: t }), t, b);
                let mut x = differentiator_error(&s, n_f, signal, origin + t);
                advance(&diff, policy, origin, t, next, &mut s, &mut ws)?;
                advance(&errsys, policy, origin, t, next, &mut x, &mut ws)?;
                let mapped = differentiator_error(&s, n_f, signal, origin + next);
                for i in 0..n {
                    max_step = max_step.max((mapped[i] - x[i]).abs());
                }
                steps += 1;
                t = next;
            }
            advance(&errsys, policy, origin, a, b, &mut free, &mut ws)?;
        }
    }
    let mapped = differentiator_error(&s, n_f, signal, origin + duration);
    let accumulated = mapped.iter().zip(&free).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(DifferentiatorEquivalence {
        max_step_deviation: max_step,
        accumulated_deviation: accumulated,
        steps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileIdentityReport {
    /// `max |T_c ρ Φ - 1|`.
    pub reciprocal: f64,
    /// `max |κ(ψ(τ)) - ρ(τ)| / ρ(τ)`.
    pub composition: f64,
    /// `max |ψ(τ) - T_c ∫Φ| / ψ(τ)` against adaptive Simpson quadrature.
    pub quadrature: f64,
    pub tau_range: (f64, f64),
}

/// Largest `τ` at which `T_c - ψ(τ) ≥ 10⁻⁶ T_c`, so `κ(ψ(τ))` is still resolvable in `f64`.
pub fn resolvable_tau(profile: &BlowUpProfile, cap: f64) -> f64 {
    let target = (1.0 - 1e-6) * profile.ubst().min(profile.t_c());
    match profile.psi_inv(target) {
        Ok(tau) => tau.min(cap),
        Err(_) => cap,
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Reciprocal, composition and quadrature identities over `points` log-spaced
/// `τ` in `[τ_lo, τ_hi]`.
pub fn profile_identities(profile: &BlowUpProfile, tau_lo: f64, tau_hi: f64, points: usize) -> Result<ProfileIdentityReport> {
    if !(tau_lo > 0.0 && tau_hi > tau_lo && points >= 2) {
        return Err(Error::invalid("profile identities need 0 < tau_lo < tau_hi and >= 2 points"));
    }
    let mut reciprocal = 0.0f64;
    let mut composition = 0.0f64;
    let mut quadrature = 0.0f64;
    let phi = |t: f64| profile.phi(t).unwrap_or(f64::NAN);
    let mut prev_tau = 0.0;
    let mut integral = 0.0;
    for k in 0..points {
        let tau = (tau_lo.ln() + (tau_hi / tau_lo).ln() * k as f64 / (points - 1) as f64).exp();
        let rho = profile.rho(tau)?;
        reciprocal = reciprocal.max((profile.t_c() * rho * profile.phi(tau)? - 1.0).abs());
        let psi = profile.psi(tau)?;
        if profile.in_transient(psi) {
            composition = composition.max((profile.kappa(psi) - rho).abs() / rho);
        }
        integral += adaptive_simpson(&phi, prev_tau, tau, 1e-14);
        prev_tau = tau;
        quadrature = quadrature.max((psi - profile.t_c() * integral).abs() / psi);
    }
    Ok(ProfileIdentityReport {
        reciprocal,
        composition,
        quadrature,
        tau_range: (tau_lo, tau_hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{CorrectionField, DriftG};
    use approx::assert_relative_eq;

    fn traj_from(times: &[f64], states: &[f64]) -> Trajectory {
        Trajectory {
            t0: 0.0,
            dim: 1,
            elapsed: times.to_vec(),
            states: states.to_vec(),
            gains: vec![1.0; times.len()],
            meta: serde_json::Value::Null,
        }
    }

    #[test]
    fn settling_examples() {
        let zero = traj_from(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0]);
        assert_eq!(estimate_settling_time(&zero, 1e-2, 1.0).unwrap().settle_time, Some(0.0));

        let h = 1e-3;
        let times: Vec<f64> = (0..=10_000).map(|k| k as f64 * h).collect();
        let states: Vec<f64> = times.iter().map(|t| (-t).exp()).collect();
        let report = estimate_settling_time(&traj_from(&times, &states), (-3f64).exp(), 1.0).unwrap();
        assert!((report.settle_time.unwrap() - 3.0).abs() <= h);

        let never = traj_from(&[0.0, 1.0, 2.0], &[1.0, 1.0, 1.0]);
        assert_eq!(estimate_settling_time(&never, 1e-2, 0.5).unwrap().settle_time, None);
        assert!(estimate_settling_time(&never, 1e-2, 5.0).is_err());
    }

    #[test]
    fn settling_is_idempotent_on_tail() {
        let times: Vec<f64> = (0..=1000).map(|k| k as f64 * 1e-2).collect();
        let states: Vec<f64> = times.iter().map(|t| (-2.0 * t).exp()).collect();
        let traj = traj_from(&times, &states);
        let first = estimate_settling_time(&traj, 1e-3, 0.5).unwrap().settle_time.unwrap();
        let start = traj.elapsed.iter().position(|t| *t == first).unwrap();
        let again = estimate_settling_time(&traj.tail(start), 1e-3, 0.5).unwrap().settle_time;
        assert_eq!(again, Some(first));
    }

    #[test]
    fn lyapunov_examples() {
        let (p, l) = lyapunov_solve(&DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0])).unwrap();
        assert_relative_eq!(p, DMatrix::identity(2, 2) * 0.5, epsilon = 1e-15);
        assert_relative_eq!(l, 0.5, epsilon = 1e-15);

        let a = DMatrix::from_row_slice(2, 2, &[-2.0, 1.0, -1.0, 0.0]);
        let (p, _) = lyapunov_solve(&a).unwrap();
        assert!(lyapunov_residual(&a, &p) <= 1e-9);

        let (p, _) = lyapunov_solve(&DMatrix::from_row_slice(1, 1, &[-4.0])).unwrap();
        assert_relative_eq!(p[(0, 0)], 0.125, epsilon = 1e-15);

        assert!(lyapunov_solve(&DMatrix::from_row_slice(1, 1, &[1.0])).is_err());
    }

    #[test]
    fn r_min_examples() {
        assert_eq!(min_linear_gain(&DMatrix::from_row_slice(1, 1, &[-3.0])).unwrap(), 0.0);
        assert_relative_eq!(min_linear_gain(&-DMatrix::<f64>::identity(2, 2)).unwrap(), 1.0, epsilon = 1e-14);
        let a = DMatrix::from_row_slice(2, 2, &[-2.0, 1.0, -1.0, 0.0]);
        let (_, l) = lyapunov_solve(&a).unwrap();
        assert_relative_eq!(min_linear_gain(&a).unwrap(), 2.0 * l, epsilon = 1e-14);
    }

    #[test]
    fn decay_condition_examples() {
        let p = BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY).unwrap();
        assert!(decay_condition(1e-3, &p, 1, 1.0).unwrap().holds);
        let yes = decay_condition(2.5, &p, 3, 1.0).unwrap();
        assert!(yes.holds);
        assert_eq!(yes.asymptote, Some(2.0));
        let no = decay_condition(1.5, &p, 3, 1.0).unwrap();
        assert!(!no.holds);
        assert!(no.witness.is_some());
    }

    #[test]
    fn gain_bound_examples() {
        let traj = traj_from(&[0.0, 1.0], &[0.0, 0.0]);
        let p = BlowUpProfile::exponential(1.0, 1.0, 233.7349).unwrap();
        let r = check_gain_bound(&traj, &p, 233.7349).unwrap();
        assert!(r.pass && r.skipped.is_none());
        let rational = BlowUpProfile::rational(1.0, f64::INFINITY).unwrap();
        let r = check_gain_bound(&traj, &rational, f64::INFINITY).unwrap();
        assert!(r.pass && r.skipped.is_some());
    }

    fn linear_pair(r: f64) -> SystemPair {
        SystemPair::new(
            BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY).unwrap(),
            CorrectionField::linear(vec![-2.0, -1.0]).unwrap(),
            DriftG::new(0, vec![-2.0, -1.0]).unwrap(),
            r,
            2.5,
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn equivalence_trivial_and_domain() {
        let sp = linear_pair(3.0);
        let grid = [0.0, 0.3, 0.6];
        let d = equivalence_oracle(&sp, &[0.0, 0.0], 2.0, &grid, &DisturbanceSignal::Zero, 1e-3).unwrap();
        assert_eq!(d, 0.0);
        let beyond = [sp.profile().psi(2.5).unwrap()];
        assert!(equivalence_oracle(&sp, &[1.0, 0.0], 2.0, &beyond, &DisturbanceSignal::Zero, 1e-3).is_err());
    }

    #[test]
    fn equivalence_coarse_linear() {
        let sp = linear_pair(3.0);
        let t_max = sp.profile().psi(2.0).unwrap();
        let grid: Vec<f64> = (0..=50).map(|k| t_max * k as f64 / 50.0).collect();
        let d = equivalence_oracle(&sp, &[1.0, 0.0], 2.0, &grid, &DisturbanceSignal::Zero, 1e-3).unwrap();
        assert!(d < 5e-2, "deviation {d}");
    }

    #[test]
    fn profile_identity_report() {
        let p = BlowUpProfile::rational(1.0, f64::INFINITY).unwrap();
        let r = profile_identities(&p, 1e-3, 50.0, 50).unwrap();
        assert!(r.reciprocal <= 1e-12 && r.composition <= 1e-9 && r.quadrature <= 1e-8, "{r:?}");
        let e = BlowUpProfile::exponential(1.0, 1.0, f64::INFINITY).unwrap();
        let hi = resolvable_tau(&e, 50.0);
        assert_relative_eq!(hi, 1e6f64.ln(), max_relative = 1e-6);
    }
}
