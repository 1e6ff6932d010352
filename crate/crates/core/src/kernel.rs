//! Aggregated delay kernel of the retarded equation of motion.
//!
//! The emission dynamics couples the amplitude to its own past through every
//! ordered pair of legs: the pair `(m, m')` contributes the delay
//! `|x_m - x_m'| / v` with strength `gamma_scale * c_m * conj(c_m')`. Pairs
//! sharing a delay are aggregated; conjugate pairs always combine to a real
//! weight `2 gamma |c_m||c_m'| cos(theta_m - theta_m')`.

use num_complex::Complex64;

use crate::config::GiantAtomConfig;

/// Two delays closer than this (time units) are merged into one kernel entry.
pub const DELAY_MERGE_TOL: f64 = 1e-12;

/// Distinct retardation delays with real aggregated weights, sorted ascending.
/// The first entry is always delay zero with weight `gamma_scale * sum |c_m|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayKernel {
    delays: Vec<f64>,
    weights: Vec<f64>,
}

impl DelayKernel {
    /// Aggregate all ordered leg pairs of `config` into the kernel.
    pub fn from_config(config: &GiantAtomConfig) -> Self {
        let couplings: Vec<Complex64> = config.legs.iter().map(|l| l.coupling()).collect();
        let positions: Vec<f64> = config.legs.iter().map(|l| l.position).collect();
        let n = couplings.len();

        let mut entries: Vec<(f64, Complex64)> = Vec::new();
        for m in 0..n {
            for mp in 0..n {
                let delay = (positions[m] - positions[mp]).abs();
                let w = config.gamma_scale * couplings[m] * couplings[mp].conj();
                match entries
                    .iter_mut()
                    .find(|(d, _)| (*d - delay).abs() < DELAY_MERGE_TOL)
                {
                    Some((_, acc)) => *acc += w,
                    None => entries.push((delay, w)),
                }
            }
        }
        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        let scale: f64 = entries.iter().map(|(_, w)| w.norm()).sum::<f64>().max(1.0);
        let mut delays = Vec::with_capacity(entries.len());
        let mut weights = Vec::with_capacity(entries.len());
        for (d, w) in entries {
            debug_assert!(
                w.im.abs() < 1e-14 * scale,
                "kernel weight at delay {d} has imaginary residue {}",
                w.im
            );
            delays.push(d);
            weights.push(w.re);
        }
        DelayKernel { delays, weights }
    }

    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.delays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delays.is_empty()
    }

    /// Weight of the zero-delay entry, `W_0 = gamma_scale * sum |c_m|^2 > 0`.
    pub fn local_weight(&self) -> f64 {
        self.weights[0]
    }

    /// Smallest nonzero delay, if the kernel has any retardation at all.
    pub fn min_positive_delay(&self) -> Option<f64> {
        self.delays.get(1).copied()
    }

    /// Largest delay (zero for a single coupling point).
    pub fn max_delay(&self) -> f64 {
        *self.delays.last().unwrap()
    }

    pub fn has_retardation(&self) -> bool {
        self.delays.len() > 1
    }
}

impl GiantAtomConfig {
    /// Build the delay kernel for this configuration.
    pub fn delay_kernel(&self) -> DelayKernel {
        DelayKernel::from_config(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GiantAtomConfig;

    /// Independent oracle: enumerate every ordered pair and group by delay.
    fn brute_force(config: &GiantAtomConfig) -> Vec<(f64, f64)> {
        let mut entries: Vec<(f64, Complex64)> = Vec::new();
        for a in &config.legs {
            for b in &config.legs {
                let d = (a.position - b.position).abs();
                let w = config.gamma_scale * a.coupling() * b.coupling().conj();
                match entries.iter_mut().find(|(q, _)| (*q - d).abs() < 1e-12) {
                    Some((_, acc)) => *acc += w,
                    None => entries.push((d, w)),
                }
            }
        }
        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        entries.into_iter().map(|(d, w)| (d, w.re)).collect()
    }

    #[test]
    fn single_leg_kernel() {
        let cfg = GiantAtomConfig::from_legs(10.0, 0.7, 0.0, &[(0.0, 2.0, 0.0)]).unwrap();
        let k = cfg.delay_kernel();
        assert_eq!(k.delays(), &[0.0]);
        assert!((k.local_weight() - 0.7 * 4.0).abs() < 1e-15);
        assert!(!k.has_retardation());
    }

    #[test]
    fn three_equal_legs_arithmetic_phases() {
        // gamma = 2 Gamma c^2; expected weights {1.5 gamma, 2 gamma cos dth, gamma cos 2 dth}
        let gamma_scale = 0.5;
        let c = 1.0;
        let gamma = 2.0 * gamma_scale * c * c;
        let d = 0.8;
        let dth = 0.4;
        let cfg = GiantAtomConfig::from_legs(
            10.0,
            gamma_scale,
            0.0,
            &[(0.0, c, 0.0), (d, c, dth), (2.0 * d, c, 2.0 * dth)],
        )
        .unwrap();
        let k = cfg.delay_kernel();
        assert_eq!(k.len(), 3);
        assert!((k.delays()[1] - d).abs() < 1e-15);
        assert!((k.delays()[2] - 2.0 * d).abs() < 1e-15);
        assert!((k.weights()[0] - 1.5 * gamma).abs() < 1e-14);
        assert!((k.weights()[1] - 2.0 * gamma * dth.cos()).abs() < 1e-14);
        assert!((k.weights()[2] - gamma * (2.0 * dth).cos()).abs() < 1e-14);

        let oracle = brute_force(&cfg);
        for ((d1, w1), (d2, w2)) in oracle.iter().zip(k.delays().iter().zip(k.weights())) {
            assert!((d1 - d2).abs() < 1e-15 && (w1 - w2).abs() < 1e-14);
        }
    }

    #[test]
    fn two_leg_cross_weight() {
        let (c1, c2) = (1.3, 0.6);
        let (th1, th2) = (0.2, 1.1);
        let tau = 0.5;
        let gs = 0.9;
        let cfg =
            GiantAtomConfig::from_legs(10.0, gs, 0.0, &[(0.0, c1, th1), (tau, c2, th2)]).unwrap();
        let k = cfg.delay_kernel();
        let expect = 2.0 * gs * c1 * c2 * (th1 - th2).cos();
        assert!((k.weights()[1] - expect).abs() < 1e-14);
    }

    #[test]
    fn near_coincident_delays_merge() {
        let eps = 1e-13;
        let cfg = GiantAtomConfig::from_legs(
            10.0,
            0.5,
            0.0,
            &[(0.0, 1.0, 0.0), (1.0, 1.0, 0.0), (2.0 + eps, 1.0, 0.0)],
        )
        .unwrap();
        // delays {0, 1, 1+eps, 2+eps} -> the two near-1 entries merge
        let k = cfg.delay_kernel();
        assert_eq!(k.len(), 3);
    }
}
