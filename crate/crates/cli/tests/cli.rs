//! End-to-end tests of the `gatom` binary: file formats, exit codes and
//! scheduling-independent output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gatom() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gatom"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gatom-test-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const TWO_LEG_CFG: &str = "\
# two-leg atom, omega tau = pi, gamma tau = 0.5
omega = 6.283185307179586
gamma_scale = 0.5
gamma_e = 0
leg = 0, 1.7320508075688772, 0
leg = 0.5, 0.5773502691896258, 0
";

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "command failed: {}\n{}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn emit_writes_report_and_trajectory() {
    let dir = tmp_dir("emit");
    let cfg = write_config(&dir, "two_leg.cfg", TWO_LEG_CFG);
    let out_csv = dir.join("run.csv");
    let traj_csv = dir.join("traj.csv");
    run_ok(gatom()
        .args(["emit", "--config"])
        .arg(&cfg)
        .args(["--tmax", "10", "--out"])
        .arg(&out_csv)
        .arg("--trajectory-out")
        .arg(&traj_csv));

    let text = fs::read_to_string(&out_csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,IL,IR,C,population,balance");
    let first = lines.next().unwrap();
    // nothing accumulated at t = 0: chirality column prints empty
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields.len(), 6);
    assert_eq!(fields[3], "");
    assert_eq!(fields[4], "1.00000000000e0");

    let traj = fs::read_to_string(&traj_csv).unwrap();
    assert!(traj.starts_with("t,re_beta,im_beta,population\n"));
    assert!(traj.lines().count() > 100);
}

#[test]
fn diagram_row_major_and_deterministic_across_worker_counts() {
    let dir = tmp_dir("diagram");
    let out1 = dir.join("d1.csv");
    let out2 = dir.join("d2.csv");
    for (out, threads) in [(&out1, "1"), (&out2, "4")] {
        run_ok(gatom()
            .env("RAYON_NUM_THREADS", threads)
            .args([
                "diagram",
                "--n",
                "3",
                "--gamma-tau",
                "0.05",
                "--tf",
                "60",
                "--grid",
                "7x5",
                "--method",
                "dde",
                "--out",
            ])
            .arg(out));
    }
    let a = fs::read(&out1).unwrap();
    let b = fs::read(&out2).unwrap();
    assert_eq!(a, b, "diagram CSV depends on the worker count");

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# n=3 gamma_tau=0.05"));
    assert_eq!(lines.next().unwrap(), "dzeta,dtheta,C,population");
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    assert_eq!(rows.len(), 7 * 5);
    // row-major: first axis constant over each block of 5
    assert_eq!(rows[0][0], rows[4][0]);
    assert_ne!(rows[0][0], rows[5][0]);
    // second axis cycles
    assert_eq!(rows[0][1], rows[5][1]);
}

#[test]
fn spectrum_covers_both_incidences() {
    let dir = tmp_dir("spectrum");
    let cfg = write_config(&dir, "two_leg.cfg", TWO_LEG_CFG);
    let out = dir.join("spec.csv");
    run_ok(gatom()
        .args(["spectrum", "--config"])
        .arg(&cfg)
        .args(["--omega-min", "4", "--omega-max", "9", "--points", "11", "--out"])
        .arg(&out));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "omega_d,delta,R_left,T_LR,R_right,T_RL,NR");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    for row in rows {
        let f: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((f[2] + f[3] - 1.0).abs() < 1e-10, "row not unitary: {row}");
        assert!(f[6].abs() < 1e-12);
    }

    // empty range exits successfully with just the header
    let out_empty = dir.join("empty.csv");
    run_ok(gatom()
        .args(["spectrum", "--config"])
        .arg(&cfg)
        .args(["--omega-min", "4", "--omega-max", "9", "--points", "0", "--out"])
        .arg(&out_empty));
    assert_eq!(
        fs::read_to_string(&out_empty).unwrap(),
        "omega_d,delta,R_left,T_LR,R_right,T_RL,NR\n"
    );
}

#[test]
fn poles_csv_reports_captured_weight() {
    let dir = tmp_dir("poles");
    let cfg = write_config(&dir, "two_leg.cfg", TWO_LEG_CFG);
    let out = dir.join("poles.csv");
    run_ok(gatom()
        .args(["poles", "--config"])
        .arg(&cfg)
        .args(["--periods", "200", "--out"])
        .arg(&out));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("re_s,im_s,re_w,im_w\n"));
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("# captured_weight="));
    let captured: f64 = last.trim_start_matches("# captured_weight=").parse().unwrap();
    assert!((captured - 1.0).abs() < 0.01, "captured {captured}");
    // the bound pole at -i omega with weight 2/3 appears as a data row
    assert!(text.lines().count() > 100);
}

#[test]
fn design_dark_prints_slope_and_lists() {
    let out = run_ok(gatom().args([
        "design", "dark", "--kplus", "5", "--kminus", "4", "--n", "3",
    ]));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lambda  = 1.11111111111e-1"), "{text}");
    assert!(text.contains("1.50000000000e0"), "omega_c in units of 2 pi / d: {text}");
    assert!(text.contains("complete left emission"));
    assert!(text.contains("complete right emission"));
    // three left frequencies below omega_c: omega/omega_c = 0.2, 0.4, 0.8
    for frac in ["2.00000000000e-1", "4.00000000000e-1", "8.00000000000e-1"] {
        assert!(text.contains(frac), "missing omega/omega_c = {frac} in:\n{text}");
    }
}

#[test]
fn check_subcommand_passes() {
    let out = run_ok(gatom().arg("check"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("check summary: 10/10 passed"));
}

#[test]
fn exit_codes_distinguish_usage_from_job_failures() {
    let dir = tmp_dir("exit");

    // unknown flag -> 2 (usage)
    let out = gatom().args(["emit", "--frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // malformed number in the config file -> 2 (usage)
    let bad = write_config(&dir, "bad.cfg", "omega = abc\ngamma_scale = 1\ngamma_e = 0\nleg = 0, 1, 0\n");
    let out = gatom()
        .args(["emit", "--config"])
        .arg(&bad)
        .args(["--tmax", "1", "--out"])
        .arg(dir.join("x.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // violated integrator precondition -> 1 (job failure)
    let cfg = write_config(&dir, "ok.cfg", TWO_LEG_CFG);
    let out = gatom()
        .args(["emit", "--config"])
        .arg(&cfg)
        .args(["--tmax", "1", "--dt", "0.2", "--out"])
        .arg(dir.join("y.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("smallest delay"), "unexpected stderr: {err}");
}

#[test]
fn passive_lengths_accepted_in_config_files() {
    let dir = tmp_dir("passive");
    let cfg = write_config(
        &dir,
        "passive.cfg",
        "omega = 10\ngamma_scale = 0.5\ngamma_e = 0\nleg = 0, 1, length:0\nleg = 0.4, 1, length:0.157\n",
    );
    let out = dir.join("run.csv");
    run_ok(gatom()
        .args(["emit", "--config"])
        .arg(&cfg)
        .args(["--tmax", "5", "--out"])
        .arg(&out));
    assert!(fs::read_to_string(&out).unwrap().lines().count() > 10);
}
