//! Closed forms for `N` uniformly spaced legs with arithmetic coupling phases.
//!
//! With propagating phase `dzeta = omega * d / v` between neighbours and
//! coupling-phase step `dtheta`, everything depends on `phi_± = dzeta ± dtheta`:
//! the Lamb shift and effective decay of the equivalent point emitter, the
//! long-time directional split, the dark-point design rule, and the discrete
//! frequencies of fully chiral emission.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("k_plus + k_minus must be nonzero")]
    DegenerateBranch,
    #[error("k = {0} is divisible by N = {1}; not a dark point of this family")]
    NotDark(i64, u32),
    #[error("N must be >= 1")]
    BadLegCount,
    #[error("gamma must be positive, got {0}")]
    BadGamma(f64),
    #[error("omega_max must be positive, got {0}")]
    BadOmegaMax(f64),
    #[error("spacing d must be positive, got {0}")]
    BadSpacing(f64),
}

/// Effective point-emitter parameters of the uniform-N-leg atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    /// Lamb shift of the transition frequency, with the sign convention of
    /// the interference sum (the `N = 2` reduction is `-gamma sin(dzeta)`
    /// at `dtheta = 0`); the dressed pole sits at `omega - lamb_shift`.
    pub lamb_shift: f64,
    /// Effective decay rate, in `[0, N^2 gamma / 2]`.
    pub decay: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
}

/// `(1 - cos(N phi)) / (1 - cos(phi))` with its removable singularity
/// `-> N^2` at `phi = 2 k pi`.
fn decay_branch(n: f64, phi: f64) -> f64 {
    let den = 1.0 - phi.cos();
    if den.abs() < 1e-9 {
        n * n
    } else {
        (1.0 - (n * phi).cos()) / den
    }
}

/// `(N sin(phi) - sin(N phi)) / (1 - cos(phi))` with limit `0` at `phi = 2 k pi`.
fn shift_branch(n: f64, phi: f64) -> f64 {
    let den = 1.0 - phi.cos();
    if den.abs() < 1e-9 {
        0.0
    } else {
        (n * phi.sin() - (n * phi).sin()) / den
    }
}

/// Lamb shift and effective decay:
/// `shift = -gamma/4 sum_j (N sin phi_j - sin N phi_j)/(1 - cos phi_j)`,
/// `decay = gamma/4 sum_j (1 - cos N phi_j)/(1 - cos phi_j)`, `j = ±`.
pub fn effective_parameters(n: u32, gamma: f64, dzeta: f64, dtheta: f64) -> EffectiveParams {
    assert!(n >= 1 && gamma > 0.0);
    let nf = n as f64;
    let phi_plus = dzeta + dtheta;
    let phi_minus = dzeta - dtheta;
    let decay = 0.25 * gamma * (decay_branch(nf, phi_plus) + decay_branch(nf, phi_minus));
    let lamb_shift =
        -0.25 * gamma * (shift_branch(nf, phi_plus) + shift_branch(nf, phi_minus));
    EffectiveParams { lamb_shift, decay, phi_plus, phi_minus }
}

/// Long-time directional split of the emitted photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEmission {
    pub i_left: f64,
    pub i_right: f64,
    /// `None` at dark points, where the split is ill-defined.
    pub chirality: Option<f64>,
    pub dark: bool,
}

/// Threshold on both directional numerators below which the point counts as
/// dark (the atom decoupled, chirality ill-defined).
pub const DARK_NUMERATOR_TOL: f64 = 1e-12;

/// Long-time accumulated probabilities and chirality:
/// `I_L ∝ sin^2(phi_+/2) sin^2(N phi_-/2)`, `I_R ∝ sin^2(phi_-/2) sin^2(N phi_+/2)`,
/// normalized so `I_L + I_R = 1` away from dark points.
pub fn closed_form_emission(n: u32, dzeta: f64, dtheta: f64) -> ClosedFormEmission {
    assert!(n >= 1);
    let nf = n as f64;
    let phi_plus = dzeta + dtheta;
    let phi_minus = dzeta - dtheta;
    let sq = |x: f64| {
        let s = x.sin();
        s * s
    };
    let num_left = sq(0.5 * phi_plus) * sq(0.5 * nf * phi_minus);
    let num_right = sq(0.5 * phi_minus) * sq(0.5 * nf * phi_plus);
    if num_left < DARK_NUMERATOR_TOL && num_right < DARK_NUMERATOR_TOL {
        return ClosedFormEmission { i_left: 0.0, i_right: 0.0, chirality: None, dark: true };
    }
    let total = num_left + num_right;
    ClosedFormEmission {
        i_left: num_left / total,
        i_right: num_right / total,
        chirality: Some((num_left - num_right) / total),
        dark: false,
    }
}

/// Dark-point design for a passive atom whose two phases share the fixed
/// ratio `lambda = dtheta / dzeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkDesign {
    /// Phase ratio `(k_+ - k_-) / (k_+ + k_-)`.
    pub lambda: f64,
    /// Atomic frequency of the dark point, `(k_+ + k_-) pi v / (N d)`.
    pub omega_c: f64,
}

/// Design rule for a dark point indexed by the branch integers `k_±`.
pub fn dark_state_design(
    k_plus: i64,
    k_minus: i64,
    n: u32,
    d: f64,
) -> Result<DarkDesign, DesignError> {
    if n < 1 {
        return Err(DesignError::BadLegCount);
    }
    if !(d > 0.0) {
        return Err(DesignError::BadSpacing(d));
    }
    if k_plus + k_minus == 0 {
        return Err(DesignError::DegenerateBranch);
    }
    for k in [k_plus, k_minus] {
        if k.rem_euclid(n as i64) == 0 {
            return Err(DesignError::NotDark(k, n));
        }
    }
    let lambda = (k_plus - k_minus) as f64 / (k_plus + k_minus) as f64;
    let omega_c = (k_plus + k_minus) as f64 * std::f64::consts::PI / (n as f64 * d);
    Ok(DarkDesign { lambda, omega_c })
}

/// Frequencies below `omega_max` at which the design emits completely to the
/// left (`C = +1`, first list) or completely to the right (`C = -1`, second
/// list): `omega = k omega_c / k_±` with `k/k_± ∉ Z` and `k/N ∉ Z`, each
/// candidate verified against the closed-form chirality.
pub fn full_chirality_frequencies(
    k_plus: i64,
    k_minus: i64,
    n: u32,
    d: f64,
    omega_max: f64,
) -> Result<(Vec<f64>, Vec<f64>), DesignError> {
    if !(omega_max > 0.0) {
        return Err(DesignError::BadOmegaMax(omega_max));
    }
    let design = dark_state_design(k_plus, k_minus, n, d)?;
    let lambda = design.lambda;
    let collect = |k_branch: i64, want_sign: f64| -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 1i64;
        loop {
            let omega = k as f64 * design.omega_c / k_branch as f64;
            if omega > omega_max || omega <= 0.0 {
                break;
            }
            if k % k_branch != 0 && k % n as i64 != 0 {
                let dzeta = omega * d;
                let emission = closed_form_emission(n, dzeta, lambda * dzeta);
                if let Some(c) = emission.chirality {
                    if (c - want_sign).abs() < 1e-9 {
                        out.push(omega);
                    }
                }
            }
            k += 1;
        }
        out
    };
    Ok((collect(k_plus, 1.0), collect(k_minus, -1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_leg_reduction() {
        let p = effective_parameters(1, 1.0, 0.71, 2.3);
        assert!((p.decay - 0.5).abs() < 1e-15);
        assert!(p.lamb_shift.abs() < 1e-15);
    }

    #[test]
    fn two_leg_reduction_matches_algebra() {
        // N = 2: decay = gamma (1 + cos dzeta cos dtheta), shift = -gamma sin dzeta cos dtheta
        let gamma = 1.0;
        for &(dz, dth) in &[(0.3, 0.0), (PI / 2.0, 0.0), (1.1, 0.7), (5.0, 2.0)] {
            let p = effective_parameters(2, gamma, dz, dth);
            let decay = gamma * (1.0 + dz.cos() * dth.cos());
            let shift = -gamma * dz.sin() * dth.cos();
            assert!((p.decay - decay).abs() < 1e-12);
            assert!((p.lamb_shift - shift).abs() < 1e-12);
        }
        let p = effective_parameters(2, gamma, PI / 2.0, 0.0);
        assert!((p.decay - gamma).abs() < 1e-15);
        assert!((p.lamb_shift + gamma).abs() < 1e-15);
    }

    #[test]
    fn decay_extremes() {
        // phi_± = 2 k pi maximizes the decay at N^2 gamma / 2
        let p = effective_parameters(3, 1.0, 2.0 * PI, 0.0);
        assert!((p.decay - 4.5).abs() < 1e-12);
        // N = 3, dzeta = 2 pi / 3, dtheta = 0 is a dark point
        let p = effective_parameters(3, 1.0, 2.0 * PI / 3.0, 0.0);
        assert!(p.decay.abs() < 1e-12);
    }

    #[test]
    fn closed_form_full_and_null_chirality() {
        // phi_+ = 2 pi / 3, phi_- = pi / 3 -> C = +1, I_R = 0
        let dzeta = 0.5 * (2.0 * PI / 3.0 + PI / 3.0);
        let dtheta = 0.5 * (2.0 * PI / 3.0 - PI / 3.0);
        let e = closed_form_emission(3, dzeta, dtheta);
        assert!(!e.dark);
        assert!((e.chirality.unwrap() - 1.0).abs() < 1e-12);
        assert!(e.i_right.abs() < 1e-12);
        assert!((e.i_left + e.i_right - 1.0).abs() < 1e-12);

        // dtheta = 0 is achiral
        let e = closed_form_emission(4, 1.234, 0.0);
        assert_eq!(e.chirality, Some(0.0));

        // dark point
        let e = closed_form_emission(3, 2.0 * PI / 3.0, 0.0);
        assert!(e.dark && e.chirality.is_none());
    }

    #[test]
    fn design_rule_examples() {
        let d = dark_state_design(5, 4, 3, 1.0).unwrap();
        assert!((d.lambda - 1.0 / 9.0).abs() < 1e-15);
        assert!((d.omega_c - 3.0 * PI).abs() < 1e-12);
        // omega_c / (2 pi / tau) = 1.5 with tau = d = 1
        assert!((d.omega_c / (2.0 * PI) - 1.5).abs() < 1e-12);

        let d = dark_state_design(1, 1, 3, 1.0).unwrap();
        assert_eq!(d.lambda, 0.0);
        assert!((d.omega_c - 2.0 * PI / 3.0).abs() < 1e-15);

        let d = dark_state_design(2, 1, 3, 1.0).unwrap();
        assert!((d.lambda - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.omega_c - PI).abs() < 1e-15);

        assert!(matches!(dark_state_design(1, -1, 3, 1.0), Err(DesignError::DegenerateBranch)));
        assert!(matches!(dark_state_design(3, 4, 3, 1.0), Err(DesignError::NotDark(3, 3))));
    }

    #[test]
    fn full_chirality_lists() {
        let (left, right) = full_chirality_frequencies(5, 4, 3, 1.0, 3.0 * PI).unwrap();
        let omega_c = 3.0 * PI;
        let expect_left: Vec<f64> = [0.2, 0.4, 0.8].iter().map(|f| f * omega_c).collect();
        let expect_right: Vec<f64> = [0.25, 0.5].iter().map(|f| f * omega_c).collect();
        assert_eq!(left.len(), expect_left.len());
        for (a, b) in left.iter().zip(&expect_left) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(right.len(), expect_right.len());
        for (a, b) in right.iter().zip(&expect_right) {
            assert!((a - b).abs() < 1e-12);
        }
        // 5 omega_c / 4 appears once the range is extended
        let (_, right) = full_chirality_frequencies(5, 4, 3, 1.0, 4.0 * PI).unwrap();
        assert!(right.iter().any(|&w| (w - 1.25 * omega_c).abs() < 1e-12));
    }

    #[test]
    fn listed_frequencies_verify_against_closed_form() {
        let (left, right) = full_chirality_frequencies(5, 4, 3, 1.0, 10.0).unwrap();
        for (&w, sign) in left.iter().map(|w| (w, 1.0)).chain(right.iter().map(|w| (w, -1.0))) {
            let e = closed_form_emission(3, w, w / 9.0);
            assert!((e.chirality.unwrap() - sign).abs() < 1e-9);
        }
    }
}
