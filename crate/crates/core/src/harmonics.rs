//! Spherical harmonics and angular matrix elements by 2-D quadrature.
//!
//! Integrals over the sphere use Gauss-Legendre nodes in `cos(theta)` and the
//! trapezoid rule in `phi`. For `l <= 2` every integrand is a polynomial in
//! `cos(theta)` of degree at most 5 times a trigonometric polynomial of degree
//! at most 5 in `phi`, so both rules are exact up to rounding at the orders
//! below.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GAUSS_LEGENDRE_NODES: usize = 24;
pub const AZIMUTHAL_NODES: usize = 32;
/// Largest `l` accepted by [`angular_integral`].
pub const MAX_L: i32 = 2;

/// Cartesian component of the dipole direction, in the molecule frame
/// `(e_1, e_2, e_3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    One,
    Two,
    Three,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::One, Axis::Two, Axis::Three];

    fn direction_cosine(self, theta: f64, phi: f64) -> f64 {
        match self {
            Axis::One => theta.sin() * phi.cos(),
            Axis::Two => theta.sin() * phi.sin(),
            Axis::Three => theta.cos(),
        }
    }
}

impl TryFrom<u8> for Axis {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Axis::One),
            2 => Ok(Axis::Two),
            3 => Ok(Axis::Three),
            other => Err(Error::Axis(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureOrders {
    pub gauss_legendre_nodes: usize,
    pub azimuthal_nodes: usize,
}

pub const QUADRATURE_ORDERS: QuadratureOrders = QuadratureOrders {
    gauss_legendre_nodes: GAUSS_LEGENDRE_NODES,
    azimuthal_nodes: AZIMUTHAL_NODES,
};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Associated Legendre function `P_l^m(x)` for `m >= 0`, Condon-Shortley phase.
fn associated_legendre(l: i32, m: i32, x: f64) -> f64 {
    let mut pmm = 1.0;
    if m > 0 {
        let s = ((1.0 - x) * (1.0 + x)).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= -fact * s;
            fact += 2.0;
        }
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * f64::from(2 * m + 1) * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = (x * f64::from(2 * ll - 1) * pmmp1 - f64::from(ll + m - 1) * pmm) / f64::from(ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

fn factorial(n: i32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `Y_{l,m}(theta, phi)` with the Condon-Shortley phase convention.
pub fn spherical_harmonic(l: i32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    if l < 0 || m.abs() > l {
        return Err(Error::QuantumNumbers { l, m });
    }
    let am = m.abs();
    let norm = (f64::from(2 * l + 1) / (4.0 * PI) * factorial(l - am) / factorial(l + am)).sqrt();
    let y = Complex64::from_polar(
        norm * associated_legendre(l, am, theta.cos()),
        f64::from(am) * phi,
    );
    Ok(if m < 0 {
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        y.conj() * sign
    } else {
        y
    })
}

struct Grid {
    // (theta, phi, weight)
    points: Vec<(f64, f64, f64)>,
}

fn grid() -> &'static Grid {
    static GRID: OnceLock<Grid> = OnceLock::new();
    GRID.get_or_init(|| {
        let (x, w) = gauss_legendre(GAUSS_LEGENDRE_NODES);
        let dphi = 2.0 * PI / AZIMUTHAL_NODES as f64;
        let mut points = Vec::with_capacity(GAUSS_LEGENDRE_NODES * AZIMUTHAL_NODES);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.acos();
            for k in 0..AZIMUTHAL_NODES {
                points.push((theta, k as f64 * dphi, wi * dphi));
            }
        }
        Grid { points }
    })
}

/// `∫ conj(Y_{l1,m1}) (direction cosine along axis) Y_{l2,m2} dΩ` for `l <= 2`.
pub fn angular_integral(l1: i32, m1: i32, l2: i32, m2: i32, axis: Axis) -> Result<Complex64> {
    for (l, m) in [(l1, m1), (l2, m2)] {
        if !(0..=MAX_L).contains(&l) || m.abs() > l {
            return Err(Error::QuantumNumbers { l, m });
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for &(theta, phi, w) in &grid().points {
        let bra = spherical_harmonic(l1, m1, theta, phi)?.conj();
        let ket = spherical_harmonic(l2, m2, theta, phi)?;
        acc += bra * ket * (axis.direction_cosine(theta, phi) * w);
    }
    Ok(acc)
}

/// Matrix element `<l1,m1| e_axis |l2,m2>` of the dipole direction, in units of
/// `d0`, restricted to the `l <= 1` space of the two-level model.
pub fn dipole_matrix_element(l1: i32, m1: i32, l2: i32, m2: i32, axis: Axis) -> Result<Complex64> {
    for (l, m) in [(l1, m1), (l2, m2)] {
        if !(0..=1).contains(&l) || m.abs() > l {
            return Err(Error::QuantumNumbers { l, m });
        }
    }
    angular_integral(l1, m1, l2, m2, axis)
}

/// `<1,0| cos(theta) |0,0>`, computed once by quadrature.
pub fn z_coupling() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        angular_integral(1, 0, 0, 0, Axis::Three)
            .expect("valid quantum numbers")
            .re
    })
}
