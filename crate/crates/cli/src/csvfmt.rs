//! Deterministic CSV output: 12 significant digits, `.` decimal separator,
//! `,` field separator, `\n` line endings, header always present. Undefined
//! chirality prints as an empty field.

use std::io::{self, Write};

use gatom_core::{EmissionReport, PoleExpansion, Trajectory};

use crate::sweep::{DiagramSpec, SpectrumRow, SweepGrid};

/// Fixed 12-significant-digit float form, identical across platforms.
pub fn fmt_f(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

pub fn write_emission_csv(out: &mut impl Write, report: &EmissionReport) -> io::Result<()> {
    writeln!(out, "t,IL,IR,C,population,balance")?;
    for k in 0..report.times.len() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f(report.times[k]),
            fmt_f(report.i_left[k]),
            fmt_f(report.i_right[k]),
            fmt_opt(report.chirality[k]),
            fmt_f(report.population[k]),
            fmt_f(report.balance[k]),
        )?;
    }
    Ok(())
}

pub fn write_trajectory_csv(out: &mut impl Write, traj: &Trajectory) -> io::Result<()> {
    writeln!(out, "t,re_beta,im_beta,population")?;
    for (k, beta) in traj.samples().iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f(traj.time(k)),
            fmt_f(beta.re),
            fmt_f(beta.im),
            fmt_f(beta.norm_sqr()),
        )?;
    }
    Ok(())
}

pub fn write_poles_csv(out: &mut impl Write, expansion: &PoleExpansion) -> io::Result<()> {
    writeln!(out, "re_s,im_s,re_w,im_w")?;
    for (s, w) in expansion.poles.iter().zip(&expansion.residue_weights) {
        writeln!(out, "{},{},{},{}", fmt_f(s.re), fmt_f(s.im), fmt_f(w.re), fmt_f(w.im))?;
    }
    writeln!(out, "# captured_weight={}", fmt_f(expansion.captured_weight))?;
    Ok(())
}

pub fn write_diagram_csv(
    out: &mut impl Write,
    spec: &DiagramSpec,
    grid: &SweepGrid,
) -> io::Result<()> {
    let method = match spec.method {
        crate::sweep::DiagramMethod::ClosedForm => "closed_form",
        crate::sweep::DiagramMethod::Dde => "dde",
    };
    writeln!(
        out,
        "# n={} gamma_tau={} tf_over_tau={} grid={}x{} method={}",
        spec.n, spec.gamma_tau, spec.t_f_over_tau, spec.axis1_points, spec.axis2_points, method
    )?;
    writeln!(out, "dzeta,dtheta,C,population")?;
    for (i, &dz) in grid.axis1.iter().enumerate() {
        for (j, &dth) in grid.axis2.iter().enumerate() {
            let cell = grid.cell(i, j);
            writeln!(
                out,
                "{},{},{},{}",
                fmt_f(dz),
                fmt_f(dth),
                fmt_opt(cell.chirality),
                fmt_f(cell.residual_population),
            )?;
        }
    }
    Ok(())
}

pub fn write_spectrum_csv(out: &mut impl Write, rows: &[SpectrumRow]) -> io::Result<()> {
    writeln!(out, "omega_d,delta,R_left,T_LR,R_right,T_RL,NR")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f(row.omega_d),
            fmt_f(row.delta),
            fmt_f(row.r_left),
            fmt_f(row.t_lr),
            fmt_f(row.r_right),
            fmt_f(row.t_rl),
            fmt_opt(row.nr),
        )?;
    }
    Ok(())
}
