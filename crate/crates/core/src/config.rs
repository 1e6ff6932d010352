//! Physical configuration of the giant atom and its symmetry transforms.
//!
//! A [`GiantAtomConfig`] holds the atomic transition frequency, the rate scale,
//! the external dissipation rate and an ordered list of coupling [`Leg`]s.
//! Configurations are immutable; every transform returns a new value.

use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

/// Waveguide group velocity. Fixed to one so lengths double as times.
pub const VELOCITY: f64 = 1.0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("configuration needs at least one coupling leg")]
    NoLegs,
    #[error("duplicate leg positions at x = {0}")]
    DuplicatePositions(f64),
    #[error("coupling magnitude must be >= 0, got {0}")]
    NegativeMagnitude(f64),
    #[error("leg length must be >= 0, got {0}")]
    NegativeLength(f64),
    #[error("atomic frequency must be > 0, got {0}")]
    NonPositiveOmega(f64),
    #[error("gamma_scale must be > 0, got {0}")]
    NonPositiveGammaScale(f64),
    #[error("external dissipation must be >= 0, got {0}")]
    NegativeGammaE(f64),
    #[error("at least one coupling magnitude must be positive")]
    AllCouplingsZero,
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),
    #[error("config line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing key `{0}` in config")]
    MissingKey(&'static str),
    #[error("reading config: {0}")]
    Io(#[from] std::io::Error),
}

/// One coupling point of the giant atom.
///
/// `length` records the meander length of a passive leg when the phase was
/// derived from it; the stored `phase` always equals `omega * length` then.
#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    /// Attachment coordinate along the waveguide.
    pub position: f64,
    /// Dimensionless coupling magnitude `|c_m| >= 0`.
    pub magnitude: f64,
    /// Coupling phase `theta_m` in radians, stored unreduced.
    pub phase: f64,
    /// Optional physical leg length for the passive scheme.
    pub length: Option<f64>,
}

impl Leg {
    pub fn new(position: f64, magnitude: f64, phase: f64) -> Self {
        Leg { position, magnitude, phase, length: None }
    }

    /// Complex coupling strength `|c_m| e^{i theta_m}`.
    pub fn coupling(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// Raw leg description before validation: exactly one of `phase`/`length`
/// should be set; an unset pair defaults to phase zero.
#[derive(Debug, Clone, Default)]
pub struct RawLeg {
    pub position: f64,
    pub magnitude: f64,
    pub phase: Option<f64>,
    pub length: Option<f64>,
}

/// Parsed-but-unvalidated configuration, as read from a config file.
#[derive(Debug, Clone)]
pub struct RawConfig {
    pub omega: f64,
    pub gamma_scale: f64,
    pub gamma_e: f64,
    pub legs: Vec<RawLeg>,
}

impl RawConfig {
    /// Validate and assemble the configuration. Legs are sorted by position
    /// and length-specified phases are resolved via [`passive_phases`].
    pub fn build(self) -> Result<GiantAtomConfig, ConfigError> {
        for (v, name) in [
            (self.omega, "omega"),
            (self.gamma_scale, "gamma_scale"),
            (self.gamma_e, "gamma_e"),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::NonFinite(name));
            }
        }
        if self.omega <= 0.0 {
            return Err(ConfigError::NonPositiveOmega(self.omega));
        }
        if self.gamma_scale <= 0.0 {
            return Err(ConfigError::NonPositiveGammaScale(self.gamma_scale));
        }
        if self.gamma_e < 0.0 {
            return Err(ConfigError::NegativeGammaE(self.gamma_e));
        }
        if self.legs.is_empty() {
            return Err(ConfigError::NoLegs);
        }

        let mut legs = Vec::with_capacity(self.legs.len());
        for raw in &self.legs {
            if !raw.position.is_finite() || !raw.magnitude.is_finite() {
                return Err(ConfigError::NonFinite("leg"));
            }
            if raw.magnitude < 0.0 {
                return Err(ConfigError::NegativeMagnitude(raw.magnitude));
            }
            let (phase, length) = match (raw.phase, raw.length) {
                (_, Some(l)) => {
                    let theta = passive_phases(&[l], self.omega)?[0];
                    (theta, Some(l))
                }
                (Some(p), None) => {
                    if !p.is_finite() {
                        return Err(ConfigError::NonFinite("leg phase"));
                    }
                    (p, None)
                }
                (None, None) => (0.0, None),
            };
            legs.push(Leg { position: raw.position, magnitude: raw.magnitude, phase, length });
        }
        legs.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());
        for pair in legs.windows(2) {
            if pair[1].position <= pair[0].position {
                return Err(ConfigError::DuplicatePositions(pair[0].position));
            }
        }
        if legs.iter().all(|l| l.magnitude == 0.0) {
            return Err(ConfigError::AllCouplingsZero);
        }
        Ok(GiantAtomConfig {
            omega: self.omega,
            gamma_scale: self.gamma_scale,
            gamma_e: self.gamma_e,
            legs,
        })
    }
}

/// Resolve passive coupling phases `theta_m = omega * l_m / v` from leg lengths.
pub fn passive_phases(lengths: &[f64], omega: f64) -> Result<Vec<f64>, ConfigError> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(ConfigError::NonPositiveOmega(omega));
    }
    lengths
        .iter()
        .map(|&l| {
            if !l.is_finite() {
                Err(ConfigError::NonFinite("leg length"))
            } else if l < 0.0 {
                Err(ConfigError::NegativeLength(l))
            } else {
                Ok(omega * l / VELOCITY)
            }
        })
        .collect()
}

/// Validated giant-atom configuration. Legs are sorted by ascending position.
#[derive(Debug, Clone, PartialEq)]
pub struct GiantAtomConfig {
    /// Atomic transition frequency (rad/time), `> 0`.
    pub omega: f64,
    /// Rate scale multiplying every coupling bilinear, `> 0`.
    pub gamma_scale: f64,
    /// External dissipation rate, `>= 0`.
    pub gamma_e: f64,
    /// Coupling legs, strictly increasing in position, `len >= 1`.
    pub legs: Vec<Leg>,
}

impl GiantAtomConfig {
    /// Convenience constructor for legs given as `(position, magnitude, phase)`.
    pub fn from_legs(
        omega: f64,
        gamma_scale: f64,
        gamma_e: f64,
        legs: &[(f64, f64, f64)],
    ) -> Result<Self, ConfigError> {
        RawConfig {
            omega,
            gamma_scale,
            gamma_e,
            legs: legs
                .iter()
                .map(|&(x, c, th)| RawLeg {
                    position: x,
                    magnitude: c,
                    phase: Some(th),
                    length: None,
                })
                .collect(),
        }
        .build()
    }

    pub fn n_legs(&self) -> usize {
        self.legs.len()
    }

    /// Leftmost attachment coordinate.
    pub fn x_first(&self) -> f64 {
        self.legs[0].position
    }

    /// Rightmost attachment coordinate.
    pub fn x_last(&self) -> f64 {
        self.legs[self.legs.len() - 1].position
    }

    /// Spatial extent `x_N - x_1` of the coupling region.
    pub fn span(&self) -> f64 {
        self.x_last() - self.x_first()
    }

    /// Mirror (parity) image: positions are reflected about the midpoint of the
    /// coupling region and the coupling order reverses. Reflecting about the
    /// midpoint keeps the span in place, which makes the operation an exact
    /// involution and leaves parity-symmetric configurations fixed.
    pub fn mirrored(&self) -> Self {
        let pivot = self.x_first() + self.x_last();
        let mut legs: Vec<Leg> = self
            .legs
            .iter()
            .map(|l| Leg { position: pivot - l.position, ..l.clone() })
            .collect();
        legs.reverse();
        GiantAtomConfig { legs, ..self.clone() }
    }

    /// Shift every coupling phase by `phi0` (gauge transformation).
    pub fn gauge_shifted(&self, phi0: f64) -> Self {
        let legs = self
            .legs
            .iter()
            .map(|l| Leg { phase: l.phase + phi0, length: None, ..l.clone() })
            .collect();
        GiantAtomConfig { legs, ..self.clone() }
    }

    /// Time-reversal image: every coupling is conjugated (phases negated).
    pub fn time_reversed(&self) -> Self {
        let legs = self
            .legs
            .iter()
            .map(|l| Leg { phase: -l.phase, length: None, ..l.clone() })
            .collect();
        GiantAtomConfig { legs, ..self.clone() }
    }

    /// Parse the line-oriented `key = value` config format.
    ///
    /// Keys: `omega`, `gamma_scale`, `gamma_e`, and one `leg = position,
    /// magnitude, phase` or `leg = position, magnitude, length:<value>` line
    /// per leg. `#` starts a comment.
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut omega = None;
        let mut gamma_scale = None;
        let mut gamma_e = None;
        let mut legs = Vec::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(p) => &raw_line[..p],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: line_no,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_num = |s: &str, what: &str| -> Result<f64, ConfigError> {
                s.trim().parse::<f64>().map_err(|_| ConfigError::Parse {
                    line: line_no,
                    msg: format!("cannot parse {what} `{s}` as a number"),
                })
            };
            match key {
                "omega" => omega = Some(parse_num(value, "omega")?),
                "gamma_scale" => gamma_scale = Some(parse_num(value, "gamma_scale")?),
                "gamma_e" => gamma_e = Some(parse_num(value, "gamma_e")?),
                "leg" => {
                    let fields: Vec<&str> = value.split(',').collect();
                    if fields.len() != 3 {
                        return Err(ConfigError::Parse {
                            line: line_no,
                            msg: format!(
                                "leg needs `position, magnitude, phase|length:<v>`, got `{value}`"
                            ),
                        });
                    }
                    let position = parse_num(fields[0], "leg position")?;
                    let magnitude = parse_num(fields[1], "leg magnitude")?;
                    let last = fields[2].trim();
                    let mut leg = RawLeg { position, magnitude, ..Default::default() };
                    if let Some(rest) = last.strip_prefix("length:") {
                        leg.length = Some(parse_num(rest, "leg length")?);
                    } else {
                        leg.phase = Some(parse_num(last, "leg phase")?);
                    }
                    legs.push(leg);
                }
                other => {
                    return Err(ConfigError::Parse {
                        line: line_no,
                        msg: format!("unknown key `{other}`"),
                    })
                }
            }
        }

        RawConfig {
            omega: omega.ok_or(ConfigError::MissingKey("omega"))?,
            gamma_scale: gamma_scale.ok_or(ConfigError::MissingKey("gamma_scale"))?,
            gamma_e: gamma_e.ok_or(ConfigError::MissingKey("gamma_e"))?,
            legs,
        }
        .build()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        Self::parse_str(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_builds() {
        let cfg = GiantAtomConfig::from_legs(10.0, 0.5, 0.0, &[(0.0, 1.0, 0.0)]).unwrap();
        assert_eq!(cfg.n_legs(), 1);
        assert_eq!(cfg.span(), 0.0);
    }

    #[test]
    fn duplicate_positions_rejected() {
        let err = GiantAtomConfig::from_legs(10.0, 0.5, 0.0, &[(0.0, 1.0, 0.0), (0.0, 1.0, 0.1)])
            .unwrap_err();
        assert!(matches!(err, ConfigError::DuplicatePositions(_)));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            GiantAtomConfig::from_legs(10.0, 0.5, 0.0, &[(0.0, -1.0, 0.0)]),
            Err(ConfigError::NegativeMagnitude(_))
        ));
        assert!(matches!(
            GiantAtomConfig::from_legs(10.0, 0.5, -0.1, &[(0.0, 1.0, 0.0)]),
            Err(ConfigError::NegativeGammaE(_))
        ));
        assert!(matches!(
            GiantAtomConfig::from_legs(10.0, 0.5, 0.0, &[]),
            Err(ConfigError::NoLegs)
        ));
        assert!(matches!(
            GiantAtomConfig::from_legs(-1.0, 0.5, 0.0, &[(0.0, 1.0, 0.0)]),
            Err(ConfigError::NonPositiveOmega(_))
        ));
    }

    #[test]
    fn passive_lengths_resolve_to_arithmetic_phases() {
        let omega = 7.0;
        let dl = 0.3;
        let raw = RawConfig {
            omega,
            gamma_scale: 0.5,
            gamma_e: 0.0,
            legs: (0..3)
                .map(|m| RawLeg {
                    position: m as f64,
                    magnitude: 1.0,
                    phase: None,
                    length: Some(m as f64 * dl),
                })
                .collect(),
        };
        let cfg = raw.build().unwrap();
        for (m, leg) in cfg.legs.iter().enumerate() {
            assert!((leg.phase - omega * dl * m as f64).abs() < 1e-15);
            assert_eq!(leg.length, Some(m as f64 * dl));
        }
    }

    #[test]
    fn passive_phases_direct() {
        assert_eq!(passive_phases(&[0.0], 5.0).unwrap(), vec![0.0]);
        let th = passive_phases(&[1.0, 2.0], std::f64::consts::PI).unwrap();
        assert!((th[0] - std::f64::consts::PI).abs() < 1e-15);
        assert!((th[1] - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!(matches!(
            passive_phases(&[-1.0], 5.0),
            Err(ConfigError::NegativeLength(_))
        ));
    }

    #[test]
    fn mirror_reflects_and_reverses() {
        let cfg = GiantAtomConfig::from_legs(
            10.0,
            0.5,
            0.0,
            &[(0.0, 1.0, 0.1), (1.0, 2.0, 0.2), (3.0, 3.0, 0.3)],
        )
        .unwrap();
        let m = cfg.mirrored();
        let got: Vec<(f64, f64)> = m.legs.iter().map(|l| (l.position, l.magnitude)).collect();
        assert_eq!(got, vec![(0.0, 3.0), (2.0, 2.0), (3.0, 1.0)]);
    }

    #[test]
    fn mirror_fixes_symmetric_config_and_is_involution() {
        let sym = GiantAtomConfig::from_legs(
            10.0,
            0.5,
            0.0,
            &[(1.0, 1.0, 0.4), (2.0, 2.0, 0.9), (3.0, 1.0, 0.4)],
        )
        .unwrap();
        assert_eq!(sym.mirrored(), sym);
        let asym = GiantAtomConfig::from_legs(
            10.0,
            0.5,
            0.0,
            &[(0.5, 1.0, 0.1), (1.0, 2.0, 0.2), (3.0, 3.0, 0.3)],
        )
        .unwrap();
        assert_eq!(asym.mirrored().mirrored(), asym);
    }

    #[test]
    fn gauge_shift_and_time_reverse() {
        let cfg =
            GiantAtomConfig::from_legs(10.0, 0.5, 0.0, &[(0.0, 1.0, 0.3), (1.0, 1.0, 0.7)])
                .unwrap();
        let shifted = cfg.gauge_shifted(-0.3);
        assert!((shifted.legs[0].phase - 0.0).abs() < 1e-15);
        assert!((shifted.legs[1].phase - 0.4).abs() < 1e-15);
        assert_eq!(cfg.gauge_shifted(0.0), cfg);

        let rev = cfg.time_reversed();
        assert_eq!(rev.legs[0].phase, -0.3);
        assert_eq!(rev.time_reversed(), cfg);
        let real = GiantAtomConfig::from_legs(10.0, 0.5, 0.0, &[(0.0, 1.0, 0.0)]).unwrap();
        assert_eq!(real.time_reversed(), real);
    }

    #[test]
    fn parse_config_text() {
        let text = "\
# two-leg sample
omega = 6.2831853
gamma_scale = 0.5
gamma_e = 0
leg = 0, 1.0, 0.0
leg = 0.5, 1.0, length:0.25
";
        let cfg = GiantAtomConfig::parse_str(text).unwrap();
        assert_eq!(cfg.n_legs(), 2);
        assert!((cfg.legs[1].phase - 6.2831853 * 0.25).abs() < 1e-12);

        assert!(GiantAtomConfig::parse_str("omega = 1\ngamma_scale = 1\n").is_err());
        assert!(GiantAtomConfig::parse_str("omega = x\ngamma_scale = 1\ngamma_e = 0\nleg=0,1,0")
            .is_err());
    }
}
