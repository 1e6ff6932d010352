//! Emitted waveguide field, directional accumulation and chirality.
//!
//! The field reconstructed from the atomic amplitude is
//! `phi(x, t) = -i sqrt(gamma_scale / v) sum_m conj(c_m) beta(t - |x - x_m|/v) Theta(.)`,
//! the accumulated left/right probabilities are time integrals of `|phi|^2`
//! at the outermost legs, and the chirality is their normalized difference.
//!
//! `|phi|^2` at a fixed point jumps each time another leg's wavefront arrives,
//! so the trapezoidal accumulation splits integration cells at those known
//! arrival times with one-sided field values. The probability-balance
//! diagnostic integrates `|phi|^2` between the outermost legs the same way,
//! with spatial pieces split at the leg positions and at the wavefronts.

use num_complex::Complex64;
use thiserror::Error;

use crate::config::GiantAtomConfig;
use crate::dde::Trajectory;

#[derive(Debug, Error)]
pub enum EmissionError {
    #[error("retarded time beyond stored history: t = {t}, t_max = {t_max}")]
    BeyondHistory { t: f64, t_max: f64 },
    #[error("probability balance requires gamma_e = 0 (external loss {gamma_e} would be counted as deficit)")]
    ExternalLoss { gamma_e: f64 },
    #[error("trajectory has not decayed (|beta|^2 = {population}); the long-time overlap formula does not apply")]
    DarkResidual { population: f64 },
}

/// Time-resolved directional emission record on the trajectory grid.
#[derive(Debug, Clone)]
pub struct EmissionReport {
    pub times: Vec<f64>,
    pub i_left: Vec<f64>,
    pub i_right: Vec<f64>,
    /// `None` where the accumulated total is below 1e-12 (chirality undefined).
    pub chirality: Vec<Option<f64>>,
    pub population: Vec<f64>,
    /// `|beta|^2 + I_L + I_R +` field norm between the outermost legs.
    pub balance: Vec<f64>,
}

/// Denominator threshold below which the chirality is reported as undefined.
pub const CHIRALITY_DENOM_TOL: f64 = 1e-12;

/// Field amplitude `phi(x, t)`. A wavefront exactly at `x` (zero retarded
/// time) counts as arrived.
pub fn field_at(
    traj: &Trajectory,
    config: &GiantAtomConfig,
    x: f64,
    t: f64,
) -> Result<Complex64, EmissionError> {
    if t > traj.t_max() * (1.0 + 1e-12) + 1e-12 {
        return Err(EmissionError::BeyondHistory { t, t_max: traj.t_max() });
    }
    Ok(field_sided(traj, config, x, t, true))
}

/// One-sided field value: `include_front` decides whether legs whose
/// retardation is exactly zero (a wavefront passing the evaluation point at
/// this instant) contribute.
fn field_sided(
    traj: &Trajectory,
    config: &GiantAtomConfig,
    x: f64,
    t: f64,
    include_front: bool,
) -> Complex64 {
    let prefactor = Complex64::new(0.0, -config.gamma_scale.sqrt());
    let mut sum = Complex64::new(0.0, 0.0);
    for leg in &config.legs {
        let arg = t - (x - leg.position).abs();
        if arg > 0.0 || (include_front && arg == 0.0) {
            sum += leg.coupling().conj() * traj.interp(arg);
        }
    }
    prefactor * sum
}

/// Wavefront arrival times of the legs at observation point `x`, excluding
/// zero (the co-located leg emits from `t = 0` without a jump).
fn arrival_times(config: &GiantAtomConfig, x: f64) -> Vec<f64> {
    let mut times: Vec<f64> = config
        .legs
        .iter()
        .map(|l| (x - l.position).abs())
        .filter(|&d| d > 0.0)
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup_by(|a, b| a == b);
    times
}

/// Trapezoidal accumulation of `|phi(x, .)|^2` on the trajectory grid with
/// cells split at wavefront arrivals. Returns the running integral at every
/// grid point.
fn accumulate_intensity(traj: &Trajectory, config: &GiantAtomConfig, x: f64) -> Vec<f64> {
    let dt = traj.dt();
    let n = traj.len();
    let arrivals = arrival_times(config, x);

    let value = |t: f64, include_front: bool| -> f64 {
        field_sided(traj, config, x, t, include_front).norm_sqr()
    };

    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    let mut acc = 0.0;
    let mut next_arrival = arrivals.iter().copied().peekable();
    let mut left_value = value(0.0, true);
    for k in 1..n {
        let t1 = k as f64 * dt;
        let mut t_from = (k - 1) as f64 * dt;
        let mut v_from = left_value;
        while let Some(&a) = next_arrival.peek() {
            if a > t1 {
                break;
            }
            next_arrival.next();
            if a > t_from {
                acc += 0.5 * (a - t_from) * (v_from + value(a, false));
            }
            t_from = a;
            v_from = value(a, true);
        }
        let v1 = value(t1, true);
        acc += 0.5 * (t1 - t_from) * (v_from + v1);
        left_value = v1;
        out.push(acc);
    }
    out
}

/// Photon density integrated over the region between the outermost legs,
/// with pieces split at leg positions and wavefronts and at least 40 nodes
/// per shortest inter-leg interval.
///
/// Between the legs the right- and left-moving components are orthogonal
/// waveguide modes, so the conserved density is `|phi_R|^2 + |phi_L|^2`
/// (summing them coherently would count counter-propagating interference
/// that cancels only after full spatial integration).
fn interleg_field_norm(traj: &Trajectory, config: &GiantAtomConfig, t: f64) -> f64 {
    if config.n_legs() < 2 {
        return 0.0;
    }
    let x1 = config.x_first();
    let xn = config.x_last();
    let min_gap = config
        .legs
        .windows(2)
        .map(|p| p[1].position - p[0].position)
        .fold(f64::INFINITY, f64::min);
    let h = min_gap / 40.0;

    let mut cuts: Vec<f64> = config.legs.iter().map(|l| l.position).collect();
    for leg in &config.legs {
        for x in [leg.position - t, leg.position + t] {
            if x > x1 && x < xn {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let couplings: Vec<Complex64> = config.legs.iter().map(|l| l.coupling().conj()).collect();
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let mid = 0.5 * (a + b);
        // legs sit on piece boundaries: sources to the left feed the
        // right-mover, sources to the right the left-mover
        let mut movers: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for m in 0..config.n_legs() {
            let leg_x = config.legs[m].position;
            if t - (mid - leg_x).abs() > 0.0 {
                movers[usize::from(leg_x > mid)].push(m);
            }
        }
        if movers[0].is_empty() && movers[1].is_empty() {
            continue;
        }
        let segments = ((b - a) / h).ceil().max(1.0) as usize;
        let dx = (b - a) / segments as f64;
        let density = |x: f64| -> f64 {
            let mut value = 0.0;
            for set in &movers {
                let mut sum = Complex64::new(0.0, 0.0);
                for &m in set {
                    let arg = (t - (x - config.legs[m].position).abs()).max(0.0);
                    sum += couplings[m] * traj.interp(arg);
                }
                value += sum.norm_sqr();
            }
            config.gamma_scale * value
        };
        let mut piece = 0.5 * (density(a) + density(b));
        for i in 1..segments {
            piece += density(a + i as f64 * dx);
        }
        total += piece * dx;
    }
    total
}

/// Accumulated left/right probabilities on the trajectory grid (left column
/// first). Used directly by parameter sweeps that do not need the balance.
pub fn directional_accumulation(
    traj: &Trajectory,
    config: &GiantAtomConfig,
) -> (Vec<f64>, Vec<f64>) {
    (
        accumulate_intensity(traj, config, config.x_first()),
        accumulate_intensity(traj, config, config.x_last()),
    )
}

/// Final accumulated left/right probabilities, for sweeps that only need the
/// end point of the run.
pub fn directional_totals(traj: &Trajectory, config: &GiantAtomConfig) -> (f64, f64) {
    let (il, ir) = directional_accumulation(traj, config);
    (*il.last().unwrap(), *ir.last().unwrap())
}

/// Full emission report: directional probabilities, chirality, population and
/// probability balance at every trajectory grid point.
pub fn accumulate_directional(traj: &Trajectory, config: &GiantAtomConfig) -> EmissionReport {
    let (i_left, i_right) = directional_accumulation(traj, config);
    let n = traj.len();
    let times: Vec<f64> = (0..n).map(|k| traj.time(k)).collect();
    let population: Vec<f64> = (0..n).map(|k| traj.population(k)).collect();
    let chirality = i_left
        .iter()
        .zip(&i_right)
        .map(|(&l, &r)| {
            let total = l + r;
            (total >= CHIRALITY_DENOM_TOL).then(|| (l - r) / total)
        })
        .collect();
    let balance = (0..n)
        .map(|k| population[k] + i_left[k] + i_right[k] + interleg_field_norm(traj, config, times[k]))
        .collect();
    EmissionReport { times, i_left, i_right, chirality, population, balance }
}

/// Probability balance `|beta(t)|^2 + field between legs + I_L(t) + I_R(t)`;
/// equals one for a closed system.
pub fn probability_balance(
    traj: &Trajectory,
    config: &GiantAtomConfig,
    t: f64,
) -> Result<f64, EmissionError> {
    if config.gamma_e > 0.0 {
        return Err(EmissionError::ExternalLoss { gamma_e: config.gamma_e });
    }
    if t > traj.t_max() * (1.0 + 1e-12) + 1e-12 {
        return Err(EmissionError::BeyondHistory { t, t_max: traj.t_max() });
    }
    let il = accumulate_until(traj, config, config.x_first(), t);
    let ir = accumulate_until(traj, config, config.x_last(), t);
    Ok(traj.interp(t).norm_sqr() + il + ir + interleg_field_norm(traj, config, t))
}

/// Running intensity integral up to an arbitrary time: the grid-cell
/// trapezoid of [`accumulate_intensity`] plus a partial final cell.
fn accumulate_until(traj: &Trajectory, config: &GiantAtomConfig, x: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let dt = traj.dt();
    let arrivals = arrival_times(config, x);
    let value =
        |tt: f64, front: bool| -> f64 { field_sided(traj, config, x, tt, front).norm_sqr() };

    let mut acc = 0.0;
    let mut t_prev = 0.0;
    let mut v_prev = value(0.0, true);
    let mut ai = 0;
    let mut k = 1usize;
    loop {
        let node = (k as f64 * dt).min(t);
        while ai < arrivals.len() && arrivals[ai] <= node {
            let a = arrivals[ai];
            ai += 1;
            if a > t_prev {
                acc += 0.5 * (a - t_prev) * (v_prev + value(a, false));
            }
            t_prev = a;
            v_prev = value(a, true);
        }
        if node > t_prev {
            let v = value(node, true);
            acc += 0.5 * (node - t_prev) * (v_prev + v);
            t_prev = node;
            v_prev = v;
        }
        if node >= t {
            return acc;
        }
        k += 1;
    }
}

/// Long-time left/right probability difference from the overlap formula
/// `4 gamma_scale sum_{m>m'} |c_m c_m'| sin(theta_m - theta_m')
///  int_0^inf Im[beta(t) conj(beta(t + tau_mm'))] dt`,
/// truncated at the stored horizon. Requires a decayed trajectory.
pub fn longtime_difference_oracle(
    traj: &Trajectory,
    config: &GiantAtomConfig,
) -> Result<f64, EmissionError> {
    let residual = traj.final_population();
    if residual >= 1e-6 {
        return Err(EmissionError::DarkResidual { population: residual });
    }
    let dt = traj.dt();
    let t_max = traj.t_max();
    let mut total = 0.0;
    for m in 1..config.n_legs() {
        for mp in 0..m {
            let a = &config.legs[m];
            let b = &config.legs[mp];
            let tau = a.position - b.position;
            let coeff = 4.0
                * config.gamma_scale
                * a.magnitude
                * b.magnitude
                * (a.phase - b.phase).sin();
            if coeff == 0.0 {
                continue;
            }
            let overlap = |t: f64| (traj.interp(t) * traj.interp(t + tau).conj()).im;
            let t_end = t_max - tau;
            let cells = (t_end / dt).floor() as usize;
            let mut integral = 0.0;
            let mut prev = overlap(0.0);
            for k in 1..=cells {
                let cur = overlap(k as f64 * dt);
                integral += 0.5 * dt * (prev + cur);
                prev = cur;
            }
            let t_last = cells as f64 * dt;
            if t_end > t_last {
                integral += 0.5 * (t_end - t_last) * (prev + overlap(t_end));
            }
            total += coeff * integral;
        }
    }
    Ok(total)
}
