//! Parameter sweeps producing deterministic grids.
//!
//! Diagram sweeps fix the rate unit `gamma = 2 Gamma c^2 = 1` and derive the
//! neighbour delay from `gamma_tau` and the atomic frequency from the
//! propagating phase, so the grid depends only on the dimensionless pairs.
//! Cells are computed independently (in parallel) and stored row-major with
//! the first axis outer, so output order never depends on scheduling.

use gatom_core::{
    closed_form_emission, default_dt, directional_totals, effective_parameters,
    integrate_emission, nonreciprocity, steady_coefficients, DriveSpec, GiantAtomConfig,
    Incidence, IntegrationError,
};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("grid axes must have at least 2 points, got {0}x{1}")]
    BadGrid(usize, usize),
    #[error("diagram needs gamma_tau > 0 and t_f/tau > 0 for the dde method")]
    BadDiagramParams,
    #[error("leg count must be >= 1")]
    BadLegCount,
    #[error("integration: {0}")]
    Integration(#[from] IntegrationError),
    #[error("config: {0}")]
    Config(#[from] gatom_core::ConfigError),
    #[error("scattering: {0}")]
    Scattering(#[from] gatom_core::ScatteringError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramMethod {
    ClosedForm,
    Dde,
}

/// One cell of the chirality diagram.
#[derive(Debug, Clone, Copy)]
pub struct SweepCell {
    pub chirality: Option<f64>,
    pub residual_population: f64,
    pub i_left: f64,
    pub i_right: f64,
}

/// Row-major diagram grid: `cells[i * axis2.len() + j]` belongs to
/// `(axis1[i], axis2[j])`.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn cell(&self, i: usize, j: usize) -> &SweepCell {
        &self.cells[i * self.axis2.len() + j]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiagramSpec {
    pub n: u32,
    /// Non-Markovian parameter `gamma * tau` (rate unit `gamma = 1`).
    pub gamma_tau: f64,
    /// Final time in units of the neighbour delay.
    pub t_f_over_tau: f64,
    pub axis1_points: usize,
    pub axis2_points: usize,
    pub method: DiagramMethod,
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| lo + step * k as f64).collect()
}

/// Single diagram cell evaluated by full time integration: `N` legs spaced by
/// `tau = gamma_tau`, arithmetic phases with step `dtheta`, atomic frequency
/// `dzeta / tau`. A propagating phase at (or within a hair of) zero is mapped
/// one period up, which is exact: the emission depends on the frequency only
/// through phases `omega * tau * integer`.
pub fn diagram_cell_dde(
    n: u32,
    gamma_tau: f64,
    t_f_over_tau: f64,
    dzeta: f64,
    dtheta: f64,
) -> Result<SweepCell, SweepError> {
    if !(gamma_tau > 0.0 && t_f_over_tau > 0.0) {
        return Err(SweepError::BadDiagramParams);
    }
    let tau = gamma_tau;
    let dzeta_eff = if dzeta > 1e-9 { dzeta } else { dzeta + 2.0 * std::f64::consts::PI };
    let omega = dzeta_eff / tau;
    let legs: Vec<(f64, f64, f64)> =
        (0..n).map(|m| (m as f64 * tau, 1.0, m as f64 * dtheta)).collect();
    let config = GiantAtomConfig::from_legs(omega, 0.5, 0.0, &legs)?;
    let kernel = config.delay_kernel();
    let dt = default_dt(&kernel, 0.0);
    let traj = integrate_emission(&config, &kernel, dt, t_f_over_tau * tau)?;
    let (i_left, i_right) = directional_totals(&traj, &config);
    let total = i_left + i_right;
    Ok(SweepCell {
        chirality: (total >= 1e-12).then(|| (i_left - i_right) / total),
        residual_population: traj.final_population(),
        i_left,
        i_right,
    })
}

/// Diagram cell from the closed forms; the residual population follows the
/// effective decay over the same horizon the time-domain method would use.
pub fn diagram_cell_closed(
    n: u32,
    gamma_tau: f64,
    t_f_over_tau: f64,
    dzeta: f64,
    dtheta: f64,
) -> SweepCell {
    let emission = closed_form_emission(n, dzeta, dtheta);
    let params = effective_parameters(n, 1.0, dzeta, dtheta);
    let t_f = t_f_over_tau * gamma_tau;
    SweepCell {
        chirality: emission.chirality,
        residual_population: (-2.0 * params.decay * t_f).exp(),
        i_left: emission.i_left,
        i_right: emission.i_right,
    }
}

/// Chirality diagram over `(dzeta, dtheta)` in `[0, 2 pi]^2`.
pub fn run_diagram_sweep(spec: &DiagramSpec) -> Result<SweepGrid, SweepError> {
    if spec.axis1_points < 2 || spec.axis2_points < 2 {
        return Err(SweepError::BadGrid(spec.axis1_points, spec.axis2_points));
    }
    if spec.n < 1 {
        return Err(SweepError::BadLegCount);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let axis1 = linspace(0.0, two_pi, spec.axis1_points);
    let axis2 = linspace(0.0, two_pi, spec.axis2_points);
    let pairs: Vec<(f64, f64)> = axis1
        .iter()
        .flat_map(|&dz| axis2.iter().map(move |&dth| (dz, dth)))
        .collect();
    let cells: Result<Vec<SweepCell>, SweepError> = pairs
        .par_iter()
        .map(|&(dz, dth)| match spec.method {
            DiagramMethod::ClosedForm => {
                Ok(diagram_cell_closed(spec.n, spec.gamma_tau, spec.t_f_over_tau, dz, dth))
            }
            DiagramMethod::Dde => {
                diagram_cell_dde(spec.n, spec.gamma_tau, spec.t_f_over_tau, dz, dth)
            }
        })
        .collect();
    Ok(SweepGrid { axis1, axis2, cells: cells? })
}

/// One row of a scattering spectrum.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumRow {
    pub omega_d: f64,
    pub delta: f64,
    pub r_left: f64,
    pub t_lr: f64,
    pub r_right: f64,
    pub t_rl: f64,
    pub nr: Option<f64>,
}

/// Scattering spectrum over a drive-frequency range (empty range allowed).
pub fn run_spectrum_sweep(
    config: &GiantAtomConfig,
    omega_values: &[f64],
) -> Result<Vec<SpectrumRow>, SweepError> {
    omega_values
        .par_iter()
        .map(|&omega_d| {
            let left = steady_coefficients(config, &DriveSpec::new(omega_d, Incidence::Left))?;
            let right = steady_coefficients(config, &DriveSpec::new(omega_d, Incidence::Right))?;
            let report = nonreciprocity(config, omega_d)?;
            Ok(SpectrumRow {
                omega_d,
                delta: omega_d - config.omega,
                r_left: left.reflection,
                t_lr: left.transmission,
                r_right: right.reflection,
                t_rl: right.transmission,
                nr: report.nr,
            })
        })
        .collect()
}
