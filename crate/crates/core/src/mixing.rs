//! Electrostatic mixing of `|0,0>` and `|1,0>` under a static field along `z`,
//! and the permanent polarization it produces.
//!
//! Two entry points are provided. [`permanent_polarization`] takes the mixing
//! angle directly. [`linearized_polarization`] takes the applied field and uses
//! the fixed linear response coefficient [`POLARIZATION_PER_FIELD`]; the
//! mixing angle as a function of the field is not modelled here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::z_coupling;

/// Linear response `P_z / E_0z` [m/V].
pub const POLARIZATION_PER_FIELD: f64 = 4.9e-9;
/// Largest static field for which the linear response holds [V/m].
pub const MAX_LINEAR_FIELD: f64 = 1.0e7;
/// Limit-cycle population imbalance between the mixed eigenstates.
pub const DEFAULT_DELTA_W: f64 = 0.62;

/// Mixed eigenstates expanded over `(|0,0>, |1,0>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedStates {
    pub alpha: f64,
    pub amp_0: [Complex64; 2],
    pub amp_1: [Complex64; 2],
}

impl MixedStates {
    pub fn new(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self {
            alpha,
            amp_0: [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            amp_1: [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
        }
    }

    /// `<0~|1~>`
    pub fn overlap(&self) -> Complex64 {
        inner(&self.amp_0, &self.amp_1)
    }

    /// `(<0~| cos|0~>, <1~| cos|1~>)` from the quadrature matrix element.
    pub fn z_expectations(&self) -> (f64, f64) {
        let m = z_coupling();
        // cos(theta) in the (|0,0>, |1,0>) basis
        let op = [
            [Complex64::new(0.0, 0.0), Complex64::new(m, 0.0)],
            [Complex64::new(m, 0.0), Complex64::new(0.0, 0.0)],
        ];
        (expect(&op, &self.amp_0), expect(&op, &self.amp_1))
    }
}

fn inner(a: &[Complex64; 2], b: &[Complex64; 2]) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

fn expect(op: &[[Complex64; 2]; 2], v: &[Complex64; 2]) -> f64 {
    let w = [
        op[0][0] * v[0] + op[0][1] * v[1],
        op[1][0] * v[0] + op[1][1] * v[1],
    ];
    inner(v, &w).re
}

pub fn mixed_states(alpha: f64) -> MixedStates {
    MixedStates::new(alpha)
}

fn check_weights(w_plus: f64, w_minus: f64) -> Result<()> {
    let total = w_minus + 3.0 * w_plus;
    if !total.is_finite() || (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "w_minus + 3 w_plus",
            value: total,
            reason: "population weights must satisfy w_minus + 3 w_plus = 1",
        });
    }
    Ok(())
}

/// Population-weighted expectation of `e_3 . e_z` over the mixed eigenstates.
///
/// `w_plus` and `w_minus` are the average populations of the upper and lower
/// mixed states and must satisfy `w_minus + 3 w_plus = 1`.
pub fn permanent_polarization(alpha: f64, w_plus: f64, w_minus: f64) -> Result<f64> {
    check_weights(w_plus, w_minus)?;
    let weight = w_minus + 3.0 * w_plus;
    let (z0, z1) = MixedStates::new(alpha).z_expectations();
    Ok(weight / 2.0 * z0 + weight / 6.0 * z1)
}

/// `sin(2 alpha) / (3 sqrt 3)`.
pub fn polarization_closed_form(alpha: f64) -> f64 {
    (2.0 * alpha).sin() / (3.0 * 3.0_f64.sqrt())
}

/// `P_z = c_P E_0z`, valid for `0 <= E_0z <= 1e7 V/m`.
pub fn linearized_polarization(field_e0z: f64) -> Result<f64> {
    if !field_e0z.is_finite() || field_e0z < 0.0 {
        return Err(Error::InvalidParameter {
            name: "field_e0z",
            value: field_e0z,
            reason: "static field must be finite and non-negative",
        });
    }
    if field_e0z > MAX_LINEAR_FIELD {
        return Err(Error::OutOfRange {
            name: "field_e0z",
            value: field_e0z,
            reason: "linear polarization response holds only up to 1e7 V/m",
        });
    }
    Ok(POLARIZATION_PER_FIELD * field_e0z)
}

/// Population imbalance per ion `n * delta_w`.
pub fn solvation_inversion(n: u32, delta_w: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n_waters",
            value: 0.0,
            reason: "at least one water molecule per ion is required",
        });
    }
    if !(0.0..=1.0).contains(&delta_w) {
        return Err(Error::InvalidParameter {
            name: "delta_w",
            value: delta_w,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(f64::from(n) * delta_w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationResult {
    pub p_z: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub delta_w: f64,
    pub delta_n_bar: f64,
}

impl PolarizationResult {
    /// Solves `w_minus + 3 w_plus = 1`, `w_minus - w_plus = delta_w` for the
    /// weights and combines them with an already known `P_z`.
    pub fn new(p_z: f64, delta_w: f64, n: u32) -> Result<Self> {
        let delta_n_bar = solvation_inversion(n, delta_w)?;
        let w_plus = (1.0 - delta_w) / 4.0;
        let w_minus = w_plus + delta_w;
        Ok(Self {
            p_z,
            w_plus,
            w_minus,
            delta_w,
            delta_n_bar,
        })
    }
}
