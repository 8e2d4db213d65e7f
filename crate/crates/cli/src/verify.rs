//! Quick self-checks of the physical constants chain and the spin algebra.

use std::f64::consts::{PI, TAU};

use solvfel::harmonics::{dipole_matrix_element, Axis};
use solvfel::mixing::{linearized_polarization, solvation_inversion, DEFAULT_DELTA_W};
use solvfel::rotor::RigidRotor;
use solvfel::scaling::{universal_prefactors, SystemParams};
use solvfel::scenario::{derive_chain, AxonPreset};
use solvfel::spin::{ponderomotive_closed_form, ponderomotive_term, Branch, Frame};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub detail: String,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        Self { name, detail, pass }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value / target - 1.0).abs() <= rel
}

/// Deterministic points in `[0, 1)` from the additive golden-ratio sequence.
fn sequence(k: usize, dim: usize) -> f64 {
    const ALPHAS: [f64; 6] = [
        0.618_033_988_749_894_9,
        0.414_213_562_373_095_1,
        0.732_050_807_568_877_2,
        0.236_067_977_499_789_7,
        0.645_751_311_064_590_6,
        0.316_624_790_355_399_9,
    ];
    ((k as f64 + 1.0) * ALPHAS[dim]).fract()
}

pub fn run_checks() -> Vec<Check> {
    let rotor = RigidRotor::water();
    let mut checks = Vec::new();

    let table = [1.0, 0.89, 0.70, 0.49, 0.30, 0.17];
    let ratios: Vec<f64> = (0..6).map(|l| rotor.population_ratio(l, 300.0).unwrap_or(f64::NAN)).collect();
    let worst = ratios.iter().zip(&table).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    checks.push(Check::new(
        "population ratios at 300 K",
        worst <= 0.01,
        format!("max deviation {worst:.4} from tabulated values"),
    ));

    let k = rotor.wavenumber_per_cm();
    let l = rotor.wavelength;
    checks.push(Check::new(
        "rotor splitting and wavelength",
        within(k, 160.0, 0.03) && within(l, 400e-6, 0.05),
        format!("{k:.2} cm^-1, {:.1} um", l * 1e6),
    ));

    let dn = rotor.thermal_inversion(30, 300.0).map(|t| t.delta_n).unwrap_or(f64::NAN);
    checks.push(Check::new(
        "thermal inversion, n = 30, 300 K",
        (dn - 0.9).abs() <= 0.05,
        format!("{dn:.4}"),
    ));

    let pz = linearized_polarization(100.0).unwrap_or(f64::NAN);
    let dnb = solvation_inversion(30, DEFAULT_DELTA_W).unwrap_or(f64::NAN);
    checks.push(Check::new(
        "polarization at 100 V/m and solvation imbalance",
        within(pz, 4.9e-7, 0.02) && (dnb - 18.7).abs() <= 0.2,
        format!("P_z = {pz:.3e}, n dw = {dnb:.2}"),
    ));

    let prefactors = SystemParams::new(30, dnb, 1.0, 0.0, rotor).and_then(|p| universal_prefactors(&p));
    let (ca, ct) = prefactors.unwrap_or((f64::NAN, f64::NAN));
    checks.push(Check::new(
        "universal prefactors",
        within(ca, 2.6e-22, 0.05) && within(ct, 8.1e-5, 0.05),
        format!("c_A = {ca:.4e}, c_t = {ct:.4e}"),
    ));

    let axon = AxonPreset::default();
    let (a_sat, t_gain) = derive_chain(&axon.inputs(), &rotor)
        .map(|d| (d.gain.a_sat, d.gain.t_gain))
        .unwrap_or((f64::NAN, f64::NAN));
    checks.push(Check::new(
        "axon saturation scales",
        within(a_sat, 5.1e-13, 0.1) && within(t_gain, 2.6e-6, 0.1),
        format!("A_sat = {a_sat:.3e}, t_gain = {t_gain:.3e} s"),
    ));

    let elem = |l1, m1, l2, m2, axis| dipole_matrix_element(l1, m1, l2, m2, axis).unwrap_or_default();
    let x = elem(1, 1, 0, 0, Axis::One);
    let z = elem(1, 0, 0, 0, Axis::Three);
    let forbidden = [
        elem(0, 0, 0, 0, Axis::Three),
        elem(1, 1, 0, 0, Axis::Three),
        elem(1, 0, 0, 0, Axis::One),
        elem(1, 1, 1, 1, Axis::Three),
    ];
    let err = (x.re + 1.0 / 6f64.sqrt())
        .abs()
        .max(x.im.abs())
        .max((z.re - 1.0 / 3f64.sqrt()).abs())
        .max(z.im.abs())
        .max(forbidden.iter().map(|c| c.norm()).fold(0.0, f64::max));
    checks.push(Check::new(
        "dipole matrix elements by quadrature",
        err < 1e-9,
        format!("max error {err:.2e}"),
    ));

    let scale = rotor.omega_c * rotor.d0_tilde;
    let mut worst = 0.0_f64;
    let mut antisymmetric = true;
    for k in 0..1000 {
        let a0 = 1e-13 + 1e-12 * sequence(k, 0);
        let phi0 = TAU * sequence(k, 1);
        let theta = TAU * sequence(k, 2);
        let delta = TAU * sequence(k, 3);
        let Ok(frame) = Frame::new(PI * sequence(k, 4), TAU * sequence(k, 5)) else {
            continue;
        };
        for which in [Branch::Ground, Branch::Excited] {
            let n = ponderomotive_term(a0, phi0, theta, delta, frame, &rotor, which);
            let c = ponderomotive_closed_form(a0, phi0, theta, delta, frame, &rotor, which);
            worst = worst.max((n - c).abs() / (a0 * scale));
        }
        let g = ponderomotive_term(a0, phi0, theta, delta, frame, &rotor, Branch::Ground);
        let e = ponderomotive_term(a0, phi0, theta, delta, frame, &rotor, Branch::Excited);
        antisymmetric &= (g + e).abs() <= 1e-12 * a0 * scale;
    }
    checks.push(Check::new(
        "ponderomotive term, numeric against closed form",
        worst <= 1e-12 && antisymmetric,
        format!("1000 parameter points, max relative deviation {worst:.2e}"),
    ));

    checks
}
