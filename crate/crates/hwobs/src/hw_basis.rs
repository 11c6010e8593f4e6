//! Clock/shift operators, phase-space displacements D(l,m), and the
//! Hermitian observables Q(l,m) = chi D + chi* D^dag with chi = (1+i)/2.
//!
//! Phase points (l, m) live on the d x d grid and are reduced mod d at
//! construction, so amplitude arithmetic like a3 = a1 + a2 always lands on a
//! valid grid point. The amplitude encoding is
//! alpha = sqrt(pi/d) (m + i l).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::ComplexMatrix;

/// chi = (1 + i)/2; the sign choice matches the explicit d=3 matrices.
pub const CHI: Complex64 = Complex64::new(0.5, 0.5);

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("amplitude ({re}, {im}) is off the grid for d={d}; nearest grid point is (l={l}, m={m})")]
    OffGridAmplitude {
        re: f64,
        im: f64,
        d: usize,
        l: usize,
        m: usize,
    },
}

/// Point (l, m) on the discrete d x d phase-space grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhasePoint {
    d: usize,
    l: usize,
    m: usize,
}

impl PhasePoint {
    /// Accepts any integers and reduces them mod d.
    pub fn new(d: usize, l: i64, m: i64) -> Result<Self, BasisError> {
        if d < 2 {
            return Err(BasisError::DimensionTooSmall(d));
        }
        let di = d as i64;
        Ok(Self {
            d,
            l: l.rem_euclid(di) as usize,
            m: m.rem_euclid(di) as usize,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_origin(&self) -> bool {
        self.l == 0 && self.m == 0
    }

    /// Pointwise sum mod d, matching amplitude addition.
    pub fn add(&self, other: &PhasePoint) -> PhasePoint {
        assert_eq!(self.d, other.d, "phase points must share a dimension");
        PhasePoint {
            d: self.d,
            l: (self.l + other.l) % self.d,
            m: (self.m + other.m) % self.d,
        }
    }

    pub fn negate(&self) -> PhasePoint {
        PhasePoint {
            d: self.d,
            l: (self.d - self.l) % self.d,
            m: (self.d - self.m) % self.d,
        }
    }
}

impl std::fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.l, self.m)
    }
}

/// Displacement amplitude alpha = (alpha_R, alpha_I).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub re: f64,
    pub im: f64,
}

impl Amplitude {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn add(&self, other: &Amplitude) -> Amplitude {
        Amplitude::new(self.re + other.re, self.im + other.im)
    }
}

/// alpha = sqrt(pi/d) (m + i l).
pub fn amplitude_of(p: &PhasePoint) -> Amplitude {
    let s = (PI / p.d as f64).sqrt();
    Amplitude::new(s * p.m as f64, s * p.l as f64)
}

/// Inverse of [`amplitude_of`]; the amplitude must sit on the grid within
/// 1e-9 after division by sqrt(pi/d). Integer coordinates outside [0, d)
/// reduce mod d.
pub fn phase_point_of(a: &Amplitude, d: usize) -> Result<PhasePoint, BasisError> {
    if d < 2 {
        return Err(BasisError::DimensionTooSmall(d));
    }
    let s = (PI / d as f64).sqrt();
    let mf = a.re / s;
    let lf = a.im / s;
    let mr = mf.round();
    let lr = lf.round();
    if (mf - mr).abs() > 1e-9 || (lf - lr).abs() > 1e-9 {
        let near = PhasePoint::new(d, lr as i64, mr as i64)?;
        return Err(BasisError::OffGridAmplitude {
            re: a.re,
            im: a.im,
            d,
            l: near.l,
            m: near.m,
        });
    }
    PhasePoint::new(d, lr as i64, mr as i64)
}

/// Hermitian Heisenberg-Weyl observable Q(l,m).
#[derive(Debug, Clone)]
pub struct HWObservable {
    pub point: PhasePoint,
    pub matrix: ComplexMatrix,
}

/// diag(1, w, ..., w^{d-1}) with w = e^{i 2 pi / d}.
pub fn clock_matrix(d: usize) -> Result<ComplexMatrix, BasisError> {
    if d < 2 {
        return Err(BasisError::DimensionTooSmall(d));
    }
    Ok(ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, 2.0 * PI * i as f64 / d as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Cyclic shift |j> -> |j+1 mod d>.
pub fn shift_matrix(d: usize) -> Result<ComplexMatrix, BasisError> {
    if d < 2 {
        return Err(BasisError::DimensionTooSmall(d));
    }
    Ok(ComplexMatrix::from_fn(d, d, |i, j| {
        if i == (j + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// D(l,m) = Z^l X^m e^{-i pi l m / d}.
///
/// Computed entrywise: Z^l X^m maps |j> to w^{l(j+m)} |j+m>, so
/// D[(j+m) mod d, j] = w^{l(j+m)} e^{-i pi l m / d}.
pub fn displacement(p: &PhasePoint) -> ComplexMatrix {
    let d = p.d;
    let mut out = ComplexMatrix::zeros(d, d);
    let phase = -PI * (p.l * p.m) as f64 / d as f64;
    for j in 0..d {
        let row = (j + p.m) % d;
        let theta = 2.0 * PI * (p.l * (j + p.m)) as f64 / d as f64 + phase;
        out[(row, j)] = Complex64::from_polar(1.0, theta);
    }
    out
}

/// Q(l,m) = chi D(l,m) + chi* D(l,m)^dag. Q(0,0) is the identity exactly.
pub fn hw_observable(p: &PhasePoint) -> HWObservable {
    if p.is_origin() {
        return HWObservable {
            point: *p,
            matrix: ComplexMatrix::identity(p.d),
        };
    }
    let disp = displacement(p);
    let matrix = disp
        .scale(CHI)
        .add(&disp.adjoint().scale(CHI.conj()))
        .expect("shapes match");
    HWObservable { point: *p, matrix }
}

/// All d^2 observables in row-major (l, m) order, identity first.
pub fn full_basis(d: usize) -> Result<Vec<HWObservable>, BasisError> {
    if d < 2 {
        return Err(BasisError::DimensionTooSmall(d));
    }
    let mut out = Vec::with_capacity(d * d);
    for l in 0..d {
        for m in 0..d {
            out.push(hw_observable(&PhasePoint::new(d, l as i64, m as i64)?));
        }
    }
    Ok(out)
}

/// All non-identity phase points of dimension d in row-major order.
pub fn non_identity_points(d: usize) -> Result<Vec<PhasePoint>, BasisError> {
    Ok(full_basis_points(d)?
        .into_iter()
        .filter(|p| !p.is_origin())
        .collect())
}

pub fn full_basis_points(d: usize) -> Result<Vec<PhasePoint>, BasisError> {
    if d < 2 {
        return Err(BasisError::DimensionTooSmall(d));
    }
    let mut out = Vec::with_capacity(d * d);
    for l in 0..d {
        for m in 0..d {
            out.push(PhasePoint::new(d, l as i64, m as i64)?);
        }
    }
    Ok(out)
}

/// Numeric eigenvalues of an observable, ascending.
pub fn spectrum(q: &HWObservable) -> Vec<f64> {
    q.matrix
        .hermitian_eigenvalues()
        .expect("HW observables are Hermitian by construction")
}

/// Eigenvalue magnitudes admitted for any non-identity observable:
/// sqrt(1 + sin(4 pi n / d)) for n = 0..d-1.
pub fn spectrum_magnitude_set(d: usize) -> Vec<f64> {
    (0..d)
        .map(|n| (1.0 + (4.0 * PI * n as f64 / d as f64).sin()).sqrt())
        .collect()
}

/// Largest eigenvalue magnitude of a non-identity observable:
/// sqrt(1 + max_n sin(4 pi n / d)). The max ranges over n in [0, d) since
/// sin(4 pi n / d) is d-periodic in n.
pub fn q_max(d: usize) -> f64 {
    spectrum_magnitude_set(d)
        .into_iter()
        .fold(0.0, f64::max)
}
