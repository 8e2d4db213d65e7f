//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.
//!
//! Reference values are recomputed here from CODATA constants with plain
//! arithmetic, independently of the library's own formulas.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use solvfel::dynamics::polar::polar_equivalence;
use solvfel::dynamics::{run, InitMode, RunOutput, SimConfig};
use solvfel::harmonics::{dipole_matrix_element, Axis};
use solvfel::mixing::{linearized_polarization, solvation_inversion};
use solvfel::rotor::RigidRotor;
use solvfel::scaling::{universal_prefactors, SystemParams};
use solvfel::scenario::{derive_chain, AxonPreset};
use solvfel::spin::{ponderomotive_closed_form, ponderomotive_term, Branch, Frame};

// tolerances
const TOL_RATIO_ABS: f64 = 0.01;
const TOL_WAVENUMBER_REL: f64 = 0.03;
const TOL_WAVELENGTH_REL: f64 = 0.05;
const TOL_INVERSION_ABS: f64 = 0.05;
const TOL_POLARIZATION_REL: f64 = 0.02;
const TOL_SOLVATION_ABS: f64 = 0.2;
const TOL_PREFACTOR_REL: f64 = 0.05;
const TOL_AXON_REL: f64 = 0.10;
const TOL_ORACLE_REL: f64 = 1e-12;
const TOL_MATRIX_ELEMENT: f64 = 1e-9;
const TOL_PONDEROMOTIVE_REL: f64 = 1e-12;
const TOL_DRIFT: f64 = 1e-8;
const TOL_GROWTH_REL: f64 = 0.05;
const SAT_WINDOW: (f64, f64) = (0.7, 1.6);
const MIN_SAT_BUNCHING: f64 = 0.5;
const TOL_FORMULATION: f64 = 1e-6;

// CODATA 2018
const HBAR: f64 = 1.054_571_817e-34;
const C: f64 = 299_792_458.0;
const K_B: f64 = 1.380_649e-23;
const M_P: f64 = 1.672_621_923_69e-27;
const E: f64 = 1.602_176_634e-19;
const MU0: f64 = 1.256_637_062_12e-6;
const D_G: f64 = 0.82e-10;
const D_E: f64 = 0.2e-10;

struct Oracle {
    inertia: f64,
    omega: f64,
    d0_tilde: f64,
}

fn oracle() -> Oracle {
    let inertia = 2.0 * M_P * D_G * D_G;
    Oracle {
        inertia,
        omega: HBAR / inertia,
        d0_tilde: 2.0 * E * D_E * (2.0_f64 / 3.0).sqrt(),
    }
}

/// `(c_A, c_t)` from the gain coefficients at unit concentration and polarization.
fn oracle_prefactors(n: f64, dn: f64) -> (f64, f64) {
    let o = oracle();
    let a = 3f64.sqrt() * dn * o.omega * o.d0_tilde / (n * o.inertia);
    let b = MU0 * C * C * dn * o.d0_tilde / (2.0 * 3f64.sqrt());
    ((2.0 * b * b / a).cbrt(), (2.0 / (a * b)).cbrt())
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn spectral_ratios() -> Outcome {
    let table = [1.0, 0.89, 0.70, 0.49, 0.30, 0.17];
    let o = oracle();
    let rotor = RigidRotor::water();
    let mut worst_table = 0.0_f64;
    let mut worst_oracle = 0.0_f64;
    for (l, want) in table.iter().enumerate() {
        let got = rotor.population_ratio(l as i32, 300.0).unwrap();
        let lf = l as f64;
        let expected = (-HBAR * HBAR / o.inertia * lf * (lf + 1.0) / 2.0 / (K_B * 300.0)).exp();
        worst_table = worst_table.max((got - want).abs());
        worst_oracle = worst_oracle.max((got - expected).abs());
    }
    outcome(
        worst_table <= TOL_RATIO_ABS && worst_oracle <= 1e-14,
        format!("max |R_l - table| = {worst_table:.4}, max |R_l - oracle| = {worst_oracle:.1e}"),
    )
}

fn rotor_constants() -> Outcome {
    let rotor = RigidRotor::water();
    let o = oracle();
    let k_oracle = HBAR / (o.inertia * C) / 100.0;
    let l_oracle = TAU * C / o.omega;
    let k = rotor.wavenumber_per_cm();
    let l = rotor.wavelength;
    outcome(
        rel(k, 160.0) <= TOL_WAVENUMBER_REL
            && rel(l, 400e-6) <= TOL_WAVELENGTH_REL
            && rel(k, k_oracle) <= TOL_ORACLE_REL
            && rel(l, l_oracle) <= TOL_ORACLE_REL,
        format!("E/(hbar c) = {k:.2} cm^-1, l_c = {:.1} um", l * 1e6),
    )
}

fn thermal_inversion() -> Outcome {
    let o = oracle();
    let x = HBAR * o.omega / (2.0 * K_B * 300.0);
    let expected = 15.0 * x.tanh();
    let got = RigidRotor::water().thermal_inversion(30, 300.0).unwrap().delta_n;
    outcome(
        (got - 0.9).abs() <= TOL_INVERSION_ABS && rel(got, expected) <= TOL_ORACLE_REL,
        format!("delta n = {got:.4} (E/2kT = {x:.4})"),
    )
}

fn polarization_chain() -> Outcome {
    let pz = linearized_polarization(100.0).unwrap();
    let dn = solvation_inversion(30, 0.62).unwrap();
    outcome(
        rel(pz, 4.9e-7) <= TOL_POLARIZATION_REL
            && (dn - 30.0 * 0.62).abs() < 1e-12
            && (dn - 18.7).abs() <= TOL_SOLVATION_ABS,
        format!("P_z(100 V/m) = {pz:.3e}, n dw = {dn:.2} (target 18.7)"),
    )
}

fn prefactors() -> Outcome {
    let (ca_o, ct_o) = oracle_prefactors(30.0, 18.6);
    let params = SystemParams::new(30, 18.6, 1.0, 0.0, RigidRotor::water()).unwrap();
    let (ca, ct) = universal_prefactors(&params).unwrap();
    outcome(
        rel(ca, 2.6e-22) <= TOL_PREFACTOR_REL
            && rel(ct, 8.1e-5) <= TOL_PREFACTOR_REL
            && rel(ca, ca_o) <= TOL_ORACLE_REL
            && rel(ct, ct_o) <= TOL_ORACLE_REL,
        format!("c_A = {ca:.4e} (oracle {ca_o:.4e}), c_t = {ct:.4e} (oracle {ct_o:.4e})"),
    )
}

fn axon_scenario() -> Outcome {
    let rho_o = 1e4 / (PI * 10e-6 * 10e-6 * 1e-3 / 4.0);
    let (ca_o, ct_o) = oracle_prefactors(30.0, 18.6);
    let a_o = ca_o * rho_o.powf(2.0 / 3.0) * 4.9e-7_f64.powf(1.0 / 3.0);
    let t_o = ct_o * rho_o.powf(-1.0 / 3.0) * 4.9e-7_f64.powf(-2.0 / 3.0);
    let chain = derive_chain(&AxonPreset::default().inputs(), &RigidRotor::water()).unwrap();
    let (a, t) = (chain.gain.a_sat, chain.gain.t_gain);
    outcome(
        rel(chain.rho * 1e-18, 0.13) <= 0.03
            && rel(a, 5.1e-13) <= TOL_AXON_REL
            && rel(t, 2.6e-6) <= TOL_AXON_REL
            && rel(a, a_o) <= 1e-10
            && rel(t, t_o) <= 1e-10,
        format!("rho = {:.3} um^-3, A_sat = {a:.3e}, t_gain = {t:.3e} s", chain.rho * 1e-18),
    )
}

fn matrix_elements() -> Outcome {
    let m = |l1, m1, l2, m2, axis| dipole_matrix_element(l1, m1, l2, m2, axis).unwrap();
    let s6 = 1.0 / 6f64.sqrt();
    let s3 = 1.0 / 3f64.sqrt();
    let cases = [
        (m(1, 1, 0, 0, Axis::One), (-s6, 0.0)),
        (m(1, -1, 0, 0, Axis::One), (s6, 0.0)),
        (m(1, 1, 0, 0, Axis::Two), (0.0, s6)),
        (m(1, -1, 0, 0, Axis::Two), (0.0, s6)),
        (m(1, 0, 0, 0, Axis::Three), (s3, 0.0)),
        (m(0, 0, 0, 0, Axis::Three), (0.0, 0.0)),
        (m(1, 0, 0, 0, Axis::One), (0.0, 0.0)),
        (m(1, 1, 0, 0, Axis::Three), (0.0, 0.0)),
        (m(1, 1, 1, 0, Axis::Three), (0.0, 0.0)),
        (m(1, 0, 1, 0, Axis::Three), (0.0, 0.0)),
    ];
    let worst = cases
        .iter()
        .map(|(got, (re, im))| (got.re - re).abs().max((got.im - im).abs()))
        .fold(0.0, f64::max);
    outcome(
        worst <= TOL_MATRIX_ELEMENT,
        format!("{} elements, max error {worst:.1e}", cases.len()),
    )
}

/// splitmix64, enough for drawing test parameters.
struct Draws(u64);

impl Draws {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn ponderomotive() -> Outcome {
    let rotor = RigidRotor::water();
    let o = oracle();
    let mut rng = Draws(2024);
    let mut worst = 0.0_f64;
    let mut negation = true;
    let mut xi1_spread = 0.0_f64;
    for _ in 0..1000 {
        let a0 = 1e-12 * (0.01 + rng.next());
        let phi0 = TAU * rng.next();
        let theta = TAU * rng.next();
        let delta = TAU * rng.next();
        let xi2 = TAU * rng.next();
        let frame = Frame::new(PI * rng.next(), xi2).unwrap();
        let scale = a0 * o.omega * o.d0_tilde;
        // independent closed form: cos(xi2) sin(theta + phi0 + delta) / (2 sqrt 3)
        let expected = scale * xi2.cos() * (theta + phi0 + delta).sin() / (2.0 * 3f64.sqrt());
        let g = ponderomotive_term(a0, phi0, theta, delta, frame, &rotor, Branch::Ground);
        let e = ponderomotive_term(a0, phi0, theta, delta, frame, &rotor, Branch::Excited);
        worst = worst.max((g - expected).abs() / scale).max((e + expected).abs() / scale);
        let cg = ponderomotive_closed_form(a0, phi0, theta, delta, frame, &rotor, Branch::Ground);
        let ce = ponderomotive_closed_form(a0, phi0, theta, delta, frame, &rotor, Branch::Excited);
        negation &= ce == -cg && (g + e).abs() <= TOL_PONDEROMOTIVE_REL * scale;
        let other = Frame::new(PI * rng.next(), xi2).unwrap();
        let g2 = ponderomotive_term(a0, phi0, theta, delta, other, &rotor, Branch::Ground);
        xi1_spread = xi1_spread.max((g2 - g).abs() / scale);
    }
    let unit = Frame::new(0.3, 0.0).unwrap();
    let peak = ponderomotive_term(1e-12, FRAC_PI_2, 0.0, 0.0, unit, &rotor, Branch::Ground);
    let factor = peak / (1e-12 * o.omega * o.d0_tilde);
    let factor_err = (factor - 1.0 / (2.0 * 3f64.sqrt())).abs();
    outcome(
        worst <= TOL_PONDEROMOTIVE_REL
            && negation
            && xi1_spread <= TOL_PONDEROMOTIVE_REL
            && factor_err <= TOL_PONDEROMOTIVE_REL,
        format!(
            "1000 draws: max rel {worst:.1e}, psi(e) = -psi(g): {negation}, xi1 spread {xi1_spread:.1e}, factor {factor:.15}"
        ),
    )
}

fn reference_run() -> RunOutput {
    run(&SimConfig {
        n_particles: 16_384,
        dt: 0.01,
        tau_end: 30.0,
        seed_amp: 1e-4,
        init_mode: InitMode::QuietStart,
        rng_seed: 1,
        record_stride: 10,
    })
    .unwrap()
}

fn first_integral(out: &RunOutput) -> Outcome {
    let d = out.diagnostics.conserved_drift;
    let within_records = out
        .records
        .iter()
        .map(|r| (r.conserved - out.records[0].conserved).abs())
        .fold(0.0, f64::max);
    outcome(
        d < TOL_DRIFT && within_records <= d,
        format!("max |C - C(0)| = {d:.2e} over 3000 steps, 16384 particles"),
    )
}

fn collective_instability(out: &RunOutput) -> Outcome {
    // largest real part among the roots of l^3 = i
    let oracle_rate = (0..3)
        .map(|k| ((FRAC_PI_2 + TAU * k as f64) / 3.0).cos())
        .fold(f64::MIN, f64::max);
    let d = &out.diagnostics;
    let rate = d.growth_rate_fit.unwrap_or(f64::NAN);
    let peak = d.sat_peak.unwrap_or(f64::NAN);
    let b = d.sat_bunching.unwrap_or(f64::NAN);
    outcome(
        rel(rate, oracle_rate) <= TOL_GROWTH_REL
            && (SAT_WINDOW.0..=SAT_WINDOW.1).contains(&peak)
            && b > MIN_SAT_BUNCHING,
        format!(
            "growth {rate:.4} vs {oracle_rate:.4}, peak {peak:.3} at tau {:.2}, |b| {b:.3}",
            d.sat_tau.unwrap_or(f64::NAN)
        ),
    )
}

fn formulation_equivalence() -> Outcome {
    let cfg = SimConfig {
        n_particles: 16_384,
        tau_end: 30.0,
        ..SimConfig::default()
    };
    let eq = polar_equivalence(&cfg).unwrap();
    outcome(
        eq.max_amplitude_deviation < TOL_FORMULATION && eq.steps_compared == cfg.steps(),
        format!(
            "max ||A_polar| - |A_complex|| = {:.2e}, max |A_polar - A_complex| = {:.2e}, {} steps",
            eq.max_amplitude_deviation, eq.max_field_deviation, eq.steps_compared
        ),
    )
}

fn run_binary(dir: &Path, threads: &str) -> (Vec<u8>, Vec<u8>) {
    let status = Command::new(env!("CARGO_BIN_EXE_solvfel"))
        .args(["axon", "--tau-end", "20", "--out"])
        .arg(dir)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("binary runs");
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    (
        std::fs::read(dir.join("summary.json")).unwrap(),
        std::fs::read(dir.join("trajectory.csv")).unwrap(),
    )
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let a = run_binary(&tmp.path().join("one"), "1");
    let b = run_binary(&tmp.path().join("one-again"), "1");
    let c = run_binary(&tmp.path().join("four"), "4");
    let rerun = {
        let dir = tmp.path().join("from-summary");
        let out = Command::new(env!("CARGO_BIN_EXE_solvfel"))
            .args(["simulate", "--config"])
            .arg(tmp.path().join("four/summary.json"))
            .arg("--out")
            .arg(&dir)
            .output()
            .unwrap();
        assert!(out.status.success());
        (
            std::fs::read(dir.join("summary.json")).unwrap(),
            std::fs::read(dir.join("trajectory.csv")).unwrap(),
        )
    };
    let same = a == b && a == c && a == rerun;
    outcome(
        same,
        format!(
            "summary {} bytes, trajectory {} bytes; repeat, 1 vs 4 workers, rerun from summary all identical: {same}",
            a.0.len(),
            a.1.len()
        ),
    )
}

fn main() {
    let mut failures = 0;
    let mut report = |id: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        println!(
            "[{}] criterion {id:2} {name}: {} ({:.2} s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failures += 1;
        }
    };

    report(1, "spectral ratios", &mut spectral_ratios);
    report(2, "rotor constants", &mut rotor_constants);
    report(3, "thermal inversion", &mut thermal_inversion);
    report(4, "polarization chain", &mut polarization_chain);
    report(5, "universal prefactors", &mut prefactors);
    report(6, "axon scenario", &mut axon_scenario);
    report(7, "matrix elements", &mut matrix_elements);
    report(8, "ponderomotive term", &mut ponderomotive);
    let out = reference_run();
    report(9, "first integral", &mut || first_integral(&out));
    report(10, "collective instability", &mut || collective_instability(&out));
    report(11, "formulation equivalence", &mut formulation_equivalence);
    report(12, "determinism", &mut determinism);

    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 12 acceptance criteria passed");
}
