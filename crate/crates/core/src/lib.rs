//! Dynamics of a two-level giant atom coupled to a 1D waveguide at several points.
//!
//! The crate models an emitter with transition frequency `omega` whose coupling
//! legs attach to the waveguide at positions `x_m` with complex strengths
//! `|c_m| e^{i theta_m}`. Interference between the legs makes the spontaneous
//! emission retarded (a delay differential equation), directional (chiral), and
//! the single-photon scattering potentially nonreciprocal once the atom also
//! leaks into an external bath.
//!
//! Units: `hbar = 1` and the waveguide group velocity `v = 1`, so lengths and
//! times are interchangeable. Rates are set by `gamma_scale * |c_m| * |c_m'|`.
//!
//! Module map:
//! - [`config`]: configuration, symmetry transforms, config-file parsing
//! - [`kernel`]: the aggregated delay kernel of the retarded equation of motion
//! - [`dde`]: method-of-steps integrator for the atomic amplitude
//! - [`spectral`]: characteristic-equation poles and the residue-series amplitude
//! - [`emission`]: emitted field, accumulated directional probabilities, chirality
//! - [`markovian`]: closed forms for uniformly spaced legs with arithmetic phases
//! - [`scattering`]: reflection/transmission, nonreciprocity, isolator design

pub mod config;
pub mod dde;
pub mod emission;
pub mod kernel;
pub mod markovian;
pub mod scattering;
pub mod spectral;

pub use config::{passive_phases, ConfigError, GiantAtomConfig, Leg, RawConfig, RawLeg};
pub use dde::{default_dt, integrate_emission, IntegrationError, Trajectory};
pub use emission::{
    accumulate_directional, directional_accumulation, directional_totals, field_at,
    longtime_difference_oracle, probability_balance, EmissionError, EmissionReport,
};
pub use kernel::DelayKernel;
pub use markovian::{
    closed_form_emission, dark_state_design, effective_parameters, full_chirality_frequencies,
    ClosedFormEmission, DarkDesign, DesignError, EffectiveParams,
};
pub use scattering::{
    nonreciprocity, steady_coefficients, transient_coefficients, two_leg_operating_point,
    DriveSpec, Incidence, NonreciprocityReport, NrSign, OperatingPoint, ScatteringError,
    ScatteringPoint,
};
pub use spectral::{
    amplitude_from_poles, characteristic, characteristic_derivative, find_poles, PoleExpansion,
    SearchRegion, SpectralError,
};
