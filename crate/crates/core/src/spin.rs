//! Energy-spin algebra of the truncated two-level space and the per-molecule
//! ponderomotive coefficient.
//!
//! All kets and operators use the basis ordering `(|e>, |g>)`, where
//! `|g> = |0,0>` and `|e> = |1,1>`.
//!
//! [`ponderomotive_term`] builds the expectation of `-A . (e_1 d1_dot + e_2 d2_dot)`
//! from explicit frame vectors, matrix expectations and the Heisenberg time
//! derivative of the spins. [`ponderomotive_closed_form`] is the reduced
//! expression `± A0 w_c d0~ cos(xi2) sin(theta + phi0 + delta) / (2 sqrt 3)`.
//! The two are kept as separate code paths so they can be checked against
//! each other.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::Axis;
use crate::rotor::RigidRotor;

pub type Ket = [Complex64; 2];
pub type Operator = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn mat_mul(a: &Operator, b: &Operator) -> Operator {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn commutator(a: &Operator, b: &Operator) -> Operator {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = ab[i][j] - ba[i][j];
        }
    }
    out
}

pub fn trace(a: &Operator) -> Complex64 {
    a[0][0] + a[1][1]
}

pub fn scale(a: &Operator, s: Complex64) -> Operator {
    let mut out = *a;
    out.iter_mut().flatten().for_each(|v| *v *= s);
    out
}

/// `<psi| op |psi>` without normalising `psi`.
pub fn expectation(op: &Operator, psi: &Ket) -> Complex64 {
    let w = [
        op[0][0] * psi[0] + op[0][1] * psi[1],
        op[1][0] * psi[0] + op[1][1] * psi[1],
    ];
    psi[0].conj() * w[0] + psi[1].conj() * w[1]
}

pub fn inner(a: &Ket, b: &Ket) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOperators {
    pub s1: Operator,
    pub s2: Operator,
    pub s3: Operator,
}

impl SpinOperators {
    pub fn get(&self, axis: Axis) -> &Operator {
        match axis {
            Axis::One => &self.s1,
            Axis::Two => &self.s2,
            Axis::Three => &self.s3,
        }
    }
}

/// `s1 = (|e><g| + |g><e|)/2`, `s2 = (|e><g| - |g><e|)/2i`,
/// `s3 = (|e><e| - |g><g|)/2`.
pub fn energy_spins() -> SpinOperators {
    SpinOperators {
        s1: [[ZERO, c(0.5, 0.0)], [c(0.5, 0.0), ZERO]],
        s2: [[ZERO, c(0.0, -0.5)], [c(0.0, 0.5), ZERO]],
        s3: [[c(0.5, 0.0), ZERO], [ZERO, c(-0.5, 0.0)]],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `psi^(g)`
    Ground,
    /// `psi^(e)`
    Excited,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Ground => 1.0,
            Branch::Excited => -1.0,
        }
    }
}

/// Truncated (unnormalised) superradiant states of one water molecule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperradiantPair {
    pub theta1: f64,
    pub theta2: f64,
    pub psi_g: Ket,
    pub psi_e: Ket,
}

impl SuperradiantPair {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let r3 = 1.0 / 3.0_f64.sqrt();
        let psi_g = [
            Complex64::from_polar(r2 * r3, theta1),
            -Complex64::from_polar(r2, theta2),
        ];
        let psi_e = [
            Complex64::from_polar(r2 * r3, -theta2),
            Complex64::from_polar(r2, -theta1),
        ];
        Self {
            theta1,
            theta2,
            psi_g,
            psi_e,
        }
    }

    pub fn state(&self, which: Branch) -> &Ket {
        match which {
            Branch::Ground => &self.psi_g,
            Branch::Excited => &self.psi_e,
        }
    }
}

pub fn superradiant_pair(theta1: f64, theta2: f64) -> SuperradiantPair {
    SuperradiantPair::new(theta1, theta2)
}

/// `<psi| s^axis |psi>` with the unnormalised amplitudes.
pub fn spin_expectation(pair: &SuperradiantPair, which: Branch, axis: Axis) -> f64 {
    expectation(energy_spins().get(axis), pair.state(which)).re
}

/// Expectation of the truncated free Hamiltonian `diag(E/2, -E/2)`.
pub fn free_energy_expectation(pair: &SuperradiantPair, which: Branch, splitting: f64) -> f64 {
    let h = scale(&energy_spins().s3, c(splitting, 0.0));
    expectation(&h, pair.state(which)).re
}

/// Orientation of a molecule frame `(e_1, e_2, e_3)` relative to `(e_x, e_y, e_z)`:
/// a rotation by `-xi1` about `z` followed by a rotation by `-xi2` about the new `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub xi1: f64,
    pub xi2: f64,
}

impl Frame {
    pub fn new(xi1: f64, xi2: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&xi1) {
            return Err(Error::InvalidParameter {
                name: "xi1",
                value: xi1,
                reason: "must lie in [0, pi]",
            });
        }
        if !(0.0..std::f64::consts::TAU).contains(&xi2) {
            return Err(Error::InvalidParameter {
                name: "xi2",
                value: xi2,
                reason: "must lie in [0, 2 pi)",
            });
        }
        Ok(Self { xi1, xi2 })
    }

    /// Rows are `e_1`, `e_2`, `e_3` in `(x, y, z)` components.
    pub fn vectors(&self) -> [[f64; 3]; 3] {
        let (s1, c1) = self.xi1.sin_cos();
        let (s2, c2) = self.xi2.sin_cos();
        let about_x = [[1.0, 0.0, 0.0], [0.0, c2, -s2], [0.0, s2, c2]];
        let about_z = [[c1, -s1, 0.0], [s1, c1, 0.0], [0.0, 0.0, 1.0]];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| about_x[i][k] * about_z[k][j]).sum();
            }
        }
        m
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Coefficients `C[a][b]` with `d/dt s^a = sum_b C[a][b] s^b` for the free
/// evolution `H = hbar w s3`, from `i w [s3, s^a]` projected on `2 s^b`.
pub fn spin_rate_matrix(omega: f64) -> [[f64; 3]; 3] {
    let spins = energy_spins();
    let mut out = [[0.0; 3]; 3];
    for (a, row) in Axis::ALL.iter().zip(out.iter_mut()) {
        let rate = scale(&commutator(&spins.s3, spins.get(*a)), c(0.0, omega));
        for (b, v) in Axis::ALL.iter().zip(row.iter_mut()) {
            *v = 2.0 * trace(&mat_mul(&rate, spins.get(*b))).re;
        }
    }
    out
}

/// `-A . <psi| e_1 d1_dot + e_2 d2_dot |psi>` for one water molecule, assembled
/// step by step from explicit frame vectors.
#[allow(clippy::too_many_arguments)]
pub fn ponderomotive_term_with_longitudinal(
    a0: f64,
    phi0: f64,
    theta: f64,
    delta: f64,
    frame: Frame,
    rotor: &RigidRotor,
    which: Branch,
    a_z: f64,
) -> f64 {
    let [e1, e2, e3] = frame.vectors();
    let ez = [0.0, 0.0, 1.0];
    let field = [a0 * phi0.cos(), -a0 * phi0.sin(), a_z];

    // Rotating (e_x, e_y) by -xi1 about z shifts the relative phase by xi1.
    let pair = SuperradiantPair::new(0.0, theta + delta + frame.xi1);
    let spins = energy_spins();
    let psi = pair.state(which);
    let s_xp = expectation(&spins.s1, psi).re;
    let s_yp = expectation(&spins.s2, psi).re;

    // Only the part of the primed-frame spin in the plane normal to e_3 survives.
    let s_mol = [s_xp, dot(&e3, &ez) * s_yp, 0.0];

    let rates = spin_rate_matrix(rotor.omega_c);
    let s_dot: Vec<f64> = rates
        .iter()
        .map(|row| row.iter().zip(&s_mol).map(|(r, s)| r * s).sum())
        .collect();

    // d = e_1 (-d0~ s1) + e_2 (-d0~ s2)
    let d1_dot = -rotor.d0_tilde * s_dot[0];
    let d2_dot = -rotor.d0_tilde * s_dot[1];
    let current = [
        e1[0] * d1_dot + e2[0] * d2_dot,
        e1[1] * d1_dot + e2[1] * d2_dot,
        e1[2] * d1_dot + e2[2] * d2_dot,
    ];
    -dot(&field, &current)
}

pub fn ponderomotive_term(
    a0: f64,
    phi0: f64,
    theta: f64,
    delta: f64,
    frame: Frame,
    rotor: &RigidRotor,
    which: Branch,
) -> f64 {
    ponderomotive_term_with_longitudinal(a0, phi0, theta, delta, frame, rotor, which, 0.0)
}

pub fn ponderomotive_closed_form(
    a0: f64,
    phi0: f64,
    theta: f64,
    delta: f64,
    frame: Frame,
    rotor: &RigidRotor,
    which: Branch,
) -> f64 {
    which.sign() * a0 * rotor.omega_c * rotor.d0_tilde * frame.xi2.cos() * (theta + phi0 + delta).sin()
        / (2.0 * 3.0_f64.sqrt())
}

/// Average of the term over one period of `delta`, for a field co-rotating at
/// the resonance (`phi0 = phi - delta`), sampled at `samples` equally spaced
/// points.
#[allow(clippy::too_many_arguments)]
pub fn cycle_averaged_term(
    a0: f64,
    phi: f64,
    theta: f64,
    frame: Frame,
    rotor: &RigidRotor,
    which: Branch,
    a_z: f64,
    samples: usize,
) -> f64 {
    let sum: f64 = (0..samples)
        .map(|k| {
            let delta = std::f64::consts::TAU * k as f64 / samples as f64;
            ponderomotive_term_with_longitudinal(a0, phi - delta, theta, delta, frame, rotor, which, a_z)
        })
        .sum();
    sum / samples as f64
}

/// Ponderomotive potential of one ion: `A0 w_c dn d0~ P_z sin(theta + phi) / (2 sqrt 3)`.
pub fn ion_ponderomotive_potential(
    a0: f64,
    rotor: &RigidRotor,
    delta_n_bar: f64,
    p_z: f64,
    theta_plus_phi: f64,
) -> f64 {
    a0 * rotor.omega_c * delta_n_bar * rotor.d0_tilde * p_z * theta_plus_phi.sin() / (2.0 * 3.0_f64.sqrt())
}
