//! Single-photon scattering off the giant atom.
//!
//! A monochromatic probe at `omega_d` drives the atom through all coupling
//! points; the steady reflection and transmission follow in closed form from
//! the collective coupling sums with leg offsets `tau_m = (x_m - x_1)/v`.
//! Right incidence is evaluated on the mirrored configuration. Transient
//! coefficients use the linear-response amplitude `eta(t)`, a steady term
//! plus the residue series over the characteristic poles (which must include
//! `gamma_e`).

use num_complex::Complex64;
use thiserror::Error;

use crate::config::GiantAtomConfig;
use crate::spectral::PoleExpansion;

#[derive(Debug, Error)]
pub enum ScatteringError {
    #[error("drive frequency must be positive, got {0}")]
    BadDriveFrequency(f64),
    #[error("response denominator vanished (|D| = {0:.3e}); parameters sit on a pole")]
    SingularDenominator(f64),
    #[error("pole expansion captures only {captured} of the amplitude; need >= 0.99")]
    IncompleteExpansion { captured: f64 },
    #[error("operating point needs 0 < theta < pi/2, got {0}")]
    BadTheta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Incidence {
    Left,
    Right,
}

/// Monochromatic probe specification. The amplitude cancels in every
/// coefficient and is kept only for completeness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    pub omega_d: f64,
    pub amplitude: f64,
    pub incidence: Incidence,
}

impl DriveSpec {
    pub fn new(omega_d: f64, incidence: Incidence) -> Self {
        DriveSpec { omega_d, amplitude: 1.0, incidence }
    }
}

/// Steady-state reflection/transmission pair for one incidence direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringPoint {
    pub reflection: f64,
    pub transmission: f64,
    pub incidence: Incidence,
}

/// Transmission asymmetry between the two incidence directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonreciprocityReport {
    pub t_left_to_right: f64,
    pub t_right_to_left: f64,
    /// `(T_LR - T_RL) / (T_LR + T_RL)`, `None` when both transmissions vanish.
    pub nr: Option<f64>,
}

/// Collective sums entering the closed forms, with leg offsets from the
/// leftmost coupling point.
struct DriveSums {
    /// `gamma_scale * sum_mm' c_m conj(c_m') e^{i omega_d |tau_m - tau_m'|}`
    kernel_sum: Complex64,
    /// `sum_m c_m e^{i omega_d tau_m}`
    forward: Complex64,
    /// `sum_m conj(c_m) e^{i omega_d tau_m}`
    conjugate: Complex64,
}

fn drive_sums(config: &GiantAtomConfig, omega_d: f64) -> DriveSums {
    let x1 = config.x_first();
    let mut kernel_sum = Complex64::new(0.0, 0.0);
    let mut forward = Complex64::new(0.0, 0.0);
    let mut conjugate = Complex64::new(0.0, 0.0);
    for a in &config.legs {
        let ca = a.coupling();
        let tau_a = a.position - x1;
        let phase = Complex64::from_polar(1.0, omega_d * tau_a);
        forward += ca * phase;
        conjugate += ca.conj() * phase;
        for b in &config.legs {
            let tau_ab = (a.position - b.position).abs();
            kernel_sum += ca
                * b.coupling().conj()
                * Complex64::from_polar(config.gamma_scale, omega_d * tau_ab);
        }
    }
    DriveSums { kernel_sum, forward, conjugate }
}

/// Denominator `Delta + i gamma_e + i Gamma sum_mm' ...` shared by reflection
/// and transmission.
fn denominator(config: &GiantAtomConfig, omega_d: f64, sums: &DriveSums) -> Complex64 {
    Complex64::new(omega_d - config.omega, config.gamma_e) + Complex64::i() * sums.kernel_sum
}

/// Steady-state reflection and transmission for the requested incidence.
pub fn steady_coefficients(
    config: &GiantAtomConfig,
    drive: &DriveSpec,
) -> Result<ScatteringPoint, ScatteringError> {
    if !(drive.omega_d > 0.0) {
        return Err(ScatteringError::BadDriveFrequency(drive.omega_d));
    }
    let oriented;
    let config = match drive.incidence {
        Incidence::Left => config,
        Incidence::Right => {
            oriented = config.mirrored();
            &oriented
        }
    };
    let sums = drive_sums(config, drive.omega_d);
    let den = denominator(config, drive.omega_d, &sums);
    if den.norm() < 1e-300 {
        return Err(ScatteringError::SingularDenominator(den.norm()));
    }

    let reflection_num = config.gamma_scale * sums.forward * sums.conjugate;
    let reflection = (reflection_num / den).norm_sqr();

    // Delta + i gamma_e - 2 Gamma sum_{m<m'} c_m conj(c_m') sin(omega_d |tau|)
    let mut cross = Complex64::new(0.0, 0.0);
    for (i, a) in config.legs.iter().enumerate() {
        for b in config.legs.iter().skip(i + 1) {
            let tau = (b.position - a.position).abs();
            cross += a.coupling() * b.coupling().conj() * (drive.omega_d * tau).sin();
        }
    }
    let transmission_num = Complex64::new(drive.omega_d - config.omega, config.gamma_e)
        - 2.0 * config.gamma_scale * cross;
    let transmission = (transmission_num / den).norm_sqr();

    Ok(ScatteringPoint { reflection, transmission, incidence: drive.incidence })
}

/// Transmission both ways and the normalized nonreciprocity.
pub fn nonreciprocity(
    config: &GiantAtomConfig,
    omega_d: f64,
) -> Result<NonreciprocityReport, ScatteringError> {
    let lr = steady_coefficients(config, &DriveSpec::new(omega_d, Incidence::Left))?;
    let rl = steady_coefficients(config, &DriveSpec::new(omega_d, Incidence::Right))?;
    let total = lr.transmission + rl.transmission;
    Ok(NonreciprocityReport {
        t_left_to_right: lr.transmission,
        t_right_to_left: rl.transmission,
        nr: (total >= 1e-15).then(|| (lr.transmission - rl.transmission) / total),
    })
}

/// Linear-response amplitude `eta(t)` for unit drive amplitude: zero for
/// `t <= 0`, otherwise the steady term plus the pole sum.
fn eta(
    config: &GiantAtomConfig,
    omega_d: f64,
    expansion: &PoleExpansion,
    steady_den: Complex64,
    t: f64,
) -> Complex64 {
    if t <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let x1 = config.x_first();
    // steady response at the drive frequency
    let mut steady_num = Complex64::new(0.0, 0.0);
    for leg in &config.legs {
        steady_num +=
            leg.coupling() * Complex64::from_polar(1.0, -omega_d * (t - (leg.position - x1)));
    }
    let mut value = steady_num / (2.0 * steady_den);
    // transient pole sum
    for (s, w) in expansion.poles.iter().zip(&expansion.residue_weights) {
        let mut legs_sum = Complex64::new(0.0, 0.0);
        for leg in &config.legs {
            legs_sum += leg.coupling() * (s * (t - (leg.position - x1))).exp();
        }
        value += legs_sum * w / (2.0 * (s + Complex64::new(0.0, omega_d)));
    }
    value
}

/// Time-resolved reflection and transmission `(R(t), T(t))` from the
/// linear-response amplitude. The expansion must have been computed with the
/// same `gamma_e` as `config` and capture at least 0.99 of the amplitude.
pub fn transient_coefficients(
    config: &GiantAtomConfig,
    drive: &DriveSpec,
    expansion: &PoleExpansion,
    t: f64,
) -> Result<(f64, f64), ScatteringError> {
    if !(drive.omega_d > 0.0) {
        return Err(ScatteringError::BadDriveFrequency(drive.omega_d));
    }
    if expansion.captured_weight < 0.99 {
        return Err(ScatteringError::IncompleteExpansion {
            captured: expansion.captured_weight,
        });
    }
    let oriented;
    let config = match drive.incidence {
        Incidence::Left => config,
        Incidence::Right => {
            oriented = config.mirrored();
            &oriented
        }
    };
    let omega_d = drive.omega_d;
    let sums = drive_sums(config, omega_d);
    // eta's steady denominator: -i Delta + gamma_e + Gamma sum = -i * D
    let steady_den = -Complex64::i() * denominator(config, omega_d, &sums);
    if steady_den.norm() < 1e-300 {
        return Err(ScatteringError::SingularDenominator(steady_den.norm()));
    }

    let x1 = config.x_first();
    let tau_n = config.x_last() - x1;
    let gamma = config.gamma_scale;

    // R(t) = 4 Gamma^2 |sum_m conj(c_m) eta(t - tau_m)|^2
    let mut reflected = Complex64::new(0.0, 0.0);
    for leg in &config.legs {
        reflected +=
            leg.coupling().conj() * eta(config, omega_d, expansion, steady_den, t - (leg.position - x1));
    }
    let r_t = (2.0 * gamma * reflected).norm_sqr();

    // T(t) = |e^{-i omega_d (t - tau_N)} - 2 Gamma sum_m conj(c_m) eta(t - tau_N + tau_m)|^2
    let mut transmitted = Complex64::from_polar(1.0, -omega_d * (t - tau_n));
    for leg in &config.legs {
        transmitted -= 2.0
            * gamma
            * leg.coupling().conj()
            * eta(config, omega_d, expansion, steady_den, t - tau_n + (leg.position - x1));
    }
    Ok((r_t, transmitted.norm_sqr()))
}

/// Requested sign of full nonreciprocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NrSign {
    Positive,
    Negative,
}

/// Two-leg isolator operating point: detuning, external dissipation and
/// propagating phase guaranteeing zero reflection with full one-way
/// transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub delta: f64,
    pub gamma_e: f64,
    pub phi: f64,
}

/// Zero-reflection full-nonreciprocity conditions for two equal legs:
/// `phi = (2k+1) pi ∓ theta`, `Delta = ± Gamma c^2 sin(2 theta)`,
/// `gamma_e = 2 Gamma c^2 sin^2(theta)`.
pub fn two_leg_operating_point(
    theta: f64,
    gamma_c2: f64,
    sign: NrSign,
    k: i64,
) -> Result<OperatingPoint, ScatteringError> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(ScatteringError::BadTheta(theta));
    }
    let odd_pi = (2 * k + 1) as f64 * std::f64::consts::PI;
    let (phi, delta) = match sign {
        NrSign::Positive => (odd_pi - theta, gamma_c2 * (2.0 * theta).sin()),
        NrSign::Negative => (odd_pi + theta, -gamma_c2 * (2.0 * theta).sin()),
    };
    Ok(OperatingPoint { delta, gamma_e: 2.0 * gamma_c2 * theta.sin() * theta.sin(), phi })
}
