//! Built-in invariant suite behind `gatom check`: quick self-contained
//! verifications of the physics kernels, printing one line per check.

use std::f64::consts::PI;

use gatom_core::*;

struct Outcome {
    failed: usize,
    total: usize,
}

impl Outcome {
    fn run(&mut self, name: &str, ok: bool) {
        self.total += 1;
        if ok {
            println!("check {name} ... ok");
        } else {
            self.failed += 1;
            println!("check {name} ... FAIL");
        }
    }
}

/// Run every check; returns `true` when all pass.
pub fn run_all() -> bool {
    let mut out = Outcome { failed: 0, total: 0 };

    // kernel aggregation against hand-enumerated pair sums
    {
        let gamma = 1.0;
        let (d, dth) = (0.8, 0.4);
        let cfg = GiantAtomConfig::from_legs(
            10.0,
            0.5,
            0.0,
            &[(0.0, 1.0, 0.0), (d, 1.0, dth), (2.0 * d, 1.0, 2.0 * dth)],
        )
        .unwrap();
        let k = cfg.delay_kernel();
        let ok = (k.weights()[0] - 1.5 * gamma).abs() < 1e-14
            && (k.weights()[1] - 2.0 * gamma * dth.cos()).abs() < 1e-14
            && (k.weights()[2] - gamma * (2.0 * dth).cos()).abs() < 1e-14;
        out.run("kernel_pair_aggregation", ok);
    }

    // symmetry transforms: involutions and kernel invariance
    {
        let cfg = GiantAtomConfig::from_legs(
            7.0,
            0.5,
            0.0,
            &[(0.0, 1.2, 0.3), (0.7, 0.4, 1.1), (1.1, 0.9, 2.0)],
        )
        .unwrap();
        let ok = cfg.mirrored().mirrored() == cfg
            && cfg.time_reversed().time_reversed() == cfg
            && kernels_close(&cfg.gauge_shifted(0.83).delay_kernel(), &cfg.delay_kernel())
            && kernels_close(&cfg.mirrored().delay_kernel(), &cfg.delay_kernel());
        out.run("symmetry_transforms", ok);
    }

    // single-leg exponential decay
    {
        let cfg = GiantAtomConfig::from_legs(10.0, 0.5, 0.0, &[(0.0, 1.0, 0.0)]).unwrap();
        let kernel = cfg.delay_kernel();
        let traj = integrate_emission(&cfg, &kernel, default_dt(&kernel, 0.0), 5.0).unwrap();
        let ok = (0..traj.len())
            .all(|k| (traj.population(k) - (-traj.time(k)).exp()).abs() < 1e-8);
        out.run("single_leg_decay", ok);
    }

    // two-leg bound state traps 4/9 of the population
    {
        let tau = 0.5;
        let cfg = GiantAtomConfig::from_legs(
            PI / tau,
            0.5,
            0.0,
            &[(0.0, 1.0, 0.0), (tau, 1.0, 0.0)],
        )
        .unwrap();
        let kernel = cfg.delay_kernel();
        let traj = integrate_emission(&cfg, &kernel, default_dt(&kernel, 0.0), 60.0).unwrap();
        out.run("bound_state_trapping", (traj.final_population() - 4.0 / 9.0).abs() < 1e-3);
    }

    // effective-model formulas
    {
        let max = effective_parameters(3, 1.0, 2.0 * PI, 0.0);
        let dark = effective_parameters(3, 1.0, 2.0 * PI / 3.0, 0.0);
        let two = effective_parameters(2, 1.0, PI / 2.0, 0.0);
        let ok = (max.decay - 4.5).abs() < 1e-12
            && dark.decay.abs() < 1e-12
            && (two.decay - 1.0).abs() < 1e-12
            && (two.lamb_shift + 1.0).abs() < 1e-12;
        out.run("markovian_formulas", ok);
    }

    // closed-form diagram symmetries on a coarse grid
    {
        let mut ok = true;
        let grid: Vec<f64> = (0..17).map(|k| 2.0 * PI * k as f64 / 16.0).collect();
        for &dz in &grid {
            for &dth in &grid {
                let a = closed_form_emission(3, dz, dth).chirality;
                let swap = closed_form_emission(3, dth, dz).chirality;
                let neg = closed_form_emission(3, dz, -dth).chirality;
                let per = closed_form_emission(3, dz + 2.0 * PI, dth).chirality;
                match (a, swap, neg, per) {
                    (Some(a), Some(s), Some(n), Some(p)) => {
                        ok &= (a - s).abs() < 1e-9 && (a + n).abs() < 1e-9 && (a - p).abs() < 1e-9;
                    }
                    (None, None, None, None) => {}
                    _ => ok = false,
                }
            }
        }
        out.run("diagram_symmetries", ok);
    }

    // scattering unitarity and reciprocity without external loss
    {
        let cfg = GiantAtomConfig::from_legs(
            9.0,
            0.7,
            0.0,
            &[(0.0, 1.0, 0.5), (0.3, 0.8, 1.9), (0.9, 1.1, 3.1)],
        )
        .unwrap();
        let mut ok = true;
        for i in 0..50 {
            let omega_d = 6.0 + 0.12 * i as f64;
            let p = steady_coefficients(&cfg, &DriveSpec::new(omega_d, Incidence::Left)).unwrap();
            let nr = nonreciprocity(&cfg, omega_d).unwrap();
            ok &= (p.reflection + p.transmission - 1.0).abs() < 1e-10;
            ok &= nr.nr.map(|v| v.abs() < 1e-12).unwrap_or(false);
        }
        out.run("scattering_unitarity_reciprocity", ok);
    }

    // isolator operating point
    {
        let point = two_leg_operating_point(PI / 4.0, 1.0, NrSign::Positive, 0).unwrap();
        let omega_d = 6.0;
        let cfg = GiantAtomConfig::from_legs(
            omega_d - point.delta,
            1.0,
            point.gamma_e,
            &[(0.0, 1.0, 0.0), (point.phi / omega_d, 1.0, PI / 4.0)],
        )
        .unwrap();
        let left = steady_coefficients(&cfg, &DriveSpec::new(omega_d, Incidence::Left)).unwrap();
        let nr = nonreciprocity(&cfg, omega_d).unwrap();
        let ok = left.reflection < 1e-12
            && (left.transmission - 1.0).abs() < 1e-12
            && (nr.nr.unwrap() - 1.0).abs() < 1e-12;
        out.run("isolator_point", ok);
    }

    // parity-symmetric layout emits without chirality
    {
        let cfg = GiantAtomConfig::from_legs(
            9.0,
            0.5,
            0.0,
            &[(0.0, 1.0, 0.9), (0.5, 0.6, 0.2), (1.0, 1.0, 0.9)],
        )
        .unwrap();
        let kernel = cfg.delay_kernel();
        let traj =
            integrate_emission(&cfg, &kernel, default_dt(&kernel, 0.0), 20.0).unwrap();
        let report = accumulate_directional(&traj, &cfg);
        let ok = report.chirality.iter().flatten().all(|c| c.abs() < 1e-10);
        out.run("parity_null_chirality", ok);
    }

    // dark-point design numbers
    {
        let d = dark_state_design(5, 4, 3, 1.0).unwrap();
        let (left, right) = full_chirality_frequencies(5, 4, 3, 1.0, 3.0 * PI).unwrap();
        let ok = (d.lambda - 1.0 / 9.0).abs() < 1e-15
            && (d.omega_c / (2.0 * PI) - 1.5).abs() < 1e-12
            && left.len() == 3
            && right.len() == 2;
        out.run("dark_design", ok);
    }

    println!(
        "check summary: {}/{} passed",
        out.total - out.failed,
        out.total
    );
    out.failed == 0
}

fn kernels_close(a: &DelayKernel, b: &DelayKernel) -> bool {
    a.len() == b.len()
        && a.delays()
            .iter()
            .zip(b.delays())
            .all(|(x, y)| (x - y).abs() < 1e-12)
        && a.weights()
            .iter()
            .zip(b.weights())
            .all(|(x, y)| (x - y).abs() < 1e-12)
}
