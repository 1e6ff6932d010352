//! Batch jobs over the giant-atom library: emission runs, chirality diagram
//! sweeps, scattering spectra, pole tables and dark-point design, all writing
//! deterministic CSV.

pub mod checks;
pub mod csvfmt;
pub mod sweep;
