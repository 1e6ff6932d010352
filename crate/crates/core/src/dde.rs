//! Method-of-steps integrator for the retarded atomic amplitude.
//!
//! The equation of motion in the lab frame is
//! `dbeta/dt = -i omega beta - gamma_e beta - sum_n W_n beta(t - d_n) Theta(t - d_n)`
//! with the real kernel weights `W_n` of [`crate::kernel::DelayKernel`].
//! Internally the fast phase is factored out, `beta(t) = e^{-i omega t} u(t)`,
//! which turns every weight into `W_n e^{i omega d_n}` and removes `omega`
//! from the step-size requirement.
//!
//! The slow amplitude is advanced with the classical fourth-order one-step
//! scheme. Retarded values come from cubic interpolation of the stored
//! history, with two refinements that keep the scheme at full order through
//! the retardation kinks:
//! - steps are split exactly at the activation times `d_n` and at the pair
//!   sums `d_n + d_m` where the right-hand side (or its slope) jumps, with the
//!   active delay set decided by each substep midpoint;
//! - interpolation stencils never straddle an activation time, where the
//!   stored history has a slope discontinuity.

use num_complex::Complex64;
use thiserror::Error;

use crate::config::GiantAtomConfig;
use crate::kernel::DelayKernel;

#[derive(Debug, Error)]
pub enum IntegrationError {
    #[error("time step must be positive and finite, got {0}")]
    BadDt(f64),
    #[error("t_max must be positive and finite, got {0}")]
    BadTMax(f64),
    #[error("dt = {dt} exceeds smallest delay / 10 = {limit}")]
    DtVsDelay { dt: f64, limit: f64 },
    #[error("dt = {dt} exceeds 0.05 / (W0 + gamma_e) = {limit}")]
    DtVsDecay { dt: f64, limit: f64 },
}

/// Uniformly sampled complex atomic amplitude `beta(t)` on `[0, t_max]`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    dt: f64,
    samples: Vec<Complex64>,
}

impl Trajectory {
    pub fn from_samples(dt: f64, samples: Vec<Complex64>) -> Self {
        assert!(dt > 0.0 && samples.len() >= 2);
        Trajectory { dt, samples }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_max(&self) -> f64 {
        (self.samples.len() - 1) as f64 * self.dt
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    /// Excited-state population `|beta|^2` at sample `k`.
    pub fn population(&self, k: usize) -> f64 {
        self.samples[k].norm_sqr()
    }

    pub fn final_population(&self) -> f64 {
        self.samples[self.samples.len() - 1].norm_sqr()
    }

    /// `beta(t)` by cubic interpolation of the stored samples; exactly zero
    /// for `t < 0` (the pre-initial history).
    ///
    /// Panics if `t` lies beyond the stored range.
    pub fn interp(&self, t: f64) -> Complex64 {
        if t < 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let k_last = self.samples.len() - 1;
        let x_total = t / self.dt;
        assert!(
            x_total <= k_last as f64 * (1.0 + 1e-12) + 1e-9,
            "interpolation at t = {t} beyond stored history t_max = {}",
            self.t_max()
        );
        let j = (x_total as usize).min(k_last.saturating_sub(1));
        let j0 = j.saturating_sub(1).min(k_last.saturating_sub(3));
        lagrange(&self.samples[j0..(j0 + 4).min(k_last + 1)], x_total - j0 as f64)
    }
}

/// Lagrange interpolation on unit-spaced nodes `0..n` at coordinate `x`.
fn lagrange(ys: &[Complex64], x: f64) -> Complex64 {
    let n = ys.len();
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..n {
        let mut basis = 1.0;
        for q in 0..n {
            if q != p {
                basis *= (x - q as f64) / (p as f64 - q as f64);
            }
        }
        total += basis * ys[p];
    }
    total
}

/// Default step: `min(smallest delay / 50, 0.01 / (W0 + gamma_e))`, the first
/// bound resolving retardation kinks and the second the local decay.
pub fn default_dt(kernel: &DelayKernel, gamma_e: f64) -> f64 {
    let decay_bound = 0.01 / (kernel.local_weight() + gamma_e);
    match kernel.min_positive_delay() {
        Some(d) => (d / 50.0).min(decay_bound),
        None => decay_bound,
    }
}

/// Rotating-frame history with kink-aware cubic lookup.
struct History {
    dt: f64,
    u: Vec<Complex64>,
    /// Slope-discontinuity locations of `u`: zero and every kernel delay.
    kinks: Vec<f64>,
}

impl History {
    /// Interpolate `u` at `tr >= 0`, using `know` as the highest valid sample
    /// and a stencil clamped to the smooth piece containing `tr`.
    fn interp(&self, tr: f64, know: usize) -> Complex64 {
        let dt = self.dt;
        let x_total = tr / dt;
        // smooth piece [lo, hi) around tr
        let piece = match self.kinks.iter().rposition(|&k| k <= tr + 1e-15 * tr.max(1.0)) {
            Some(i) => i,
            None => 0,
        };
        let lo_t = self.kinks[piece];
        let hi_t = self.kinks.get(piece + 1).copied().unwrap_or(f64::INFINITY);
        let i_lo = ((lo_t / dt - 1e-9).ceil().max(0.0)) as usize;
        let i_hi = (((hi_t / dt + 1e-9).floor()) as usize).min(know);

        if i_hi < i_lo || i_hi - i_lo < 1 {
            // piece narrower than the grid: fall back to an unclamped stencil
            let j = (x_total as usize).min(know.saturating_sub(1));
            let j0 = j.saturating_sub(1).min(know.saturating_sub(3));
            let hi = (j0 + 3).min(know);
            return lagrange(&self.u[j0..=hi], x_total - j0 as f64);
        }
        let j = (x_total as usize).clamp(i_lo, i_hi.saturating_sub(1).max(i_lo));
        let j0 = j.saturating_sub(1).clamp(i_lo, i_hi.saturating_sub(3).max(i_lo));
        let hi = (j0 + 3).min(i_hi);
        lagrange(&self.u[j0..=hi], x_total - j0 as f64)
    }
}

/// Integrate the spontaneous-emission dynamics with `beta(0) = 1` and zero
/// history, returning the lab-frame amplitude on a uniform grid over
/// `[0, t_max]` (the step is shrunk slightly so the grid ends at `t_max`).
pub fn integrate_emission(
    config: &GiantAtomConfig,
    kernel: &DelayKernel,
    dt: f64,
    t_max: f64,
) -> Result<Trajectory, IntegrationError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(IntegrationError::BadDt(dt));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(IntegrationError::BadTMax(t_max));
    }
    if let Some(d_min) = kernel.min_positive_delay() {
        if dt > d_min / 10.0 {
            return Err(IntegrationError::DtVsDelay { dt, limit: d_min / 10.0 });
        }
    }
    let local = kernel.local_weight() + config.gamma_e;
    if dt > 0.05 / local {
        return Err(IntegrationError::DtVsDecay { dt, limit: 0.05 / local });
    }

    let steps = (t_max / dt - 1e-9).ceil().max(1.0) as usize;
    let dt = t_max / steps as f64;
    let omega = config.omega;

    // retarded terms in the rotating frame, sorted by delay
    let retarded: Vec<(f64, Complex64)> = kernel.delays()[1..]
        .iter()
        .zip(&kernel.weights()[1..])
        .map(|(&d, &w)| (d, w * Complex64::from_polar(1.0, omega * d)))
        .collect();
    let delays: Vec<f64> = retarded.iter().map(|&(d, _)| d).collect();
    let damping = config.gamma_e + kernel.local_weight();

    // right-hand-side discontinuities: delays (value jumps) and pairwise sums
    // of delays (slope jumps); later generations are below scheme order
    let mut breakpoints: Vec<f64> = Vec::new();
    for (i, &di) in delays.iter().enumerate() {
        breakpoints.push(di);
        for &dj in &delays[i..] {
            if di + dj < t_max {
                breakpoints.push(di + dj);
            }
        }
    }
    breakpoints.retain(|&b| b > 0.0 && b < t_max);
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    // points that already sit on the grid need no split
    breakpoints.retain(|&b| {
        let r = b / dt;
        (r - r.round()).abs() > 1e-9
    });

    let mut kinks = vec![0.0];
    kinks.extend_from_slice(&delays);

    let mut hist =
        History { dt, u: Vec::with_capacity(steps + 1), kinks };
    hist.u.push(Complex64::new(1.0, 0.0));

    let delayed_sum = |hist: &History, t: f64, active: &[(f64, Complex64)], know: usize| {
        let mut s = Complex64::new(0.0, 0.0);
        for &(d, w) in active {
            s += w * hist.interp((t - d).max(0.0), know);
        }
        s
    };

    let rk4 = |hist: &History, t0: f64, t1: f64, u0: Complex64, know: usize| {
        let h = t1 - t0;
        let mid = 0.5 * (t0 + t1);
        let active = &retarded[..retarded.partition_point(|&(d, _)| d < mid)];
        let s0 = delayed_sum(hist, t0, active, know);
        let sm = delayed_sum(hist, mid, active, know);
        let s1 = delayed_sum(hist, t1, active, know);
        let k1 = -damping * u0 - s0;
        let k2 = -damping * (u0 + 0.5 * h * k1) - sm;
        let k3 = -damping * (u0 + 0.5 * h * k2) - sm;
        let k4 = -damping * (u0 + h * k3) - s1;
        u0 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };

    let mut next_bp = breakpoints.iter().copied().peekable();
    for k in 0..steps {
        let t0 = k as f64 * dt;
        let t1 = (k + 1) as f64 * dt;
        let mut u = hist.u[k];
        let mut t_from = t0;
        while let Some(&bp) = next_bp.peek() {
            if bp >= t1 - 1e-12 {
                break;
            }
            next_bp.next();
            if bp <= t_from + 1e-12 {
                continue;
            }
            u = rk4(&hist, t_from, bp, u, k);
            t_from = bp;
        }
        u = rk4(&hist, t_from, t1, u, k);
        hist.u.push(u);
    }

    let samples = hist
        .u
        .iter()
        .enumerate()
        .map(|(k, &u)| u * Complex64::from_polar(1.0, -omega * k as f64 * dt))
        .collect();
    Ok(Trajectory { dt, samples })
}
