//! Bloch encoding of density matrices in the HW observable basis, bipartite
//! correlation tensors, conjugate observables, and the generalized Gell-Mann
//! comparison basis.
//!
//! Normalization note: HW observables obey Tr{Q Q'} = d delta, while the
//! Gell-Mann family here uses the textbook convention Tr{lambda^2} = 2. The
//! paper's 2/d correlation value for the maximally entangled state holds
//! under that convention.

use num_complex::Complex64;
use thiserror::Error;

use crate::hw_basis::{self, HWObservable, PhasePoint};
use crate::numerics::{ComplexMatrix, NumericsError, STRUCT_TOL};

#[derive(Debug, Error)]
pub enum BlochError {
    #[error("density matrix invariant violated: {0}")]
    InvalidState(String),
    #[error("expected a single-party state, got {0} parties")]
    NotSingleParty(usize),
    #[error("Bloch vector length {got} does not match d^2-1 = {want} for d={d}")]
    LengthMismatch { d: usize, got: usize, want: usize },
    #[error("operator list has {ops} entries but the state has {parties} parties")]
    PartyCountMismatch { ops: usize, parties: usize },
    #[error("operator for party {party} is {got}x{got} but the local dimension is {want}")]
    PartyDimMismatch { party: usize, got: usize, want: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Validated density matrix over an explicit list of local dimensions.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    parties: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-10) and positivity
    /// (min eigenvalue >= -1e-9).
    pub fn new(parties: Vec<usize>, matrix: ComplexMatrix) -> Result<Self, BlochError> {
        let dim: usize = parties.iter().product();
        if parties.is_empty() || parties.iter().any(|&d| d < 2) {
            return Err(BlochError::InvalidState(
                "every party dimension must be at least 2".into(),
            ));
        }
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(BlochError::InvalidState(format!(
                "matrix is {}x{} but parties {:?} require {}x{}",
                matrix.rows(),
                matrix.cols(),
                parties,
                dim,
                dim
            )));
        }
        let herm = matrix.hermiticity_defect();
        if herm > STRUCT_TOL {
            return Err(BlochError::InvalidState(format!(
                "not Hermitian: defect {herm:.3e}"
            )));
        }
        let tr = matrix.trace()?;
        if (tr.re - 1.0).abs() > STRUCT_TOL || tr.im.abs() > STRUCT_TOL {
            return Err(BlochError::InvalidState(format!(
                "trace is {tr} instead of 1"
            )));
        }
        let min_eig = matrix
            .hermitian_eigenvalues()?
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -1e-9 {
            return Err(BlochError::InvalidState(format!(
                "minimum eigenvalue {min_eig:.3e} below -1e-9"
            )));
        }
        Ok(Self { parties, matrix })
    }

    /// Single-party state of dimension d.
    pub fn single(matrix: ComplexMatrix) -> Result<Self, BlochError> {
        let d = matrix.rows();
        Self::new(vec![d], matrix)
    }

    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.parties.iter().product()
    }

    pub fn purity(&self) -> f64 {
        self.matrix
            .matmul(&self.matrix)
            .expect("square")
            .trace()
            .expect("square")
            .re
    }

    /// Trace out every party except `keep`. Party ordering is big-endian:
    /// the first party is the most significant index factor.
    pub fn partial_trace_keep(&self, keep: usize) -> Result<DensityMatrix, BlochError> {
        let n = self.parties.len();
        if keep >= n {
            return Err(BlochError::PartyCountMismatch {
                ops: keep + 1,
                parties: n,
            });
        }
        let dk = self.parties[keep];
        // strides for mixed-radix index decomposition
        let mut stride = vec![1usize; n];
        for i in (0..n - 1).rev() {
            stride[i] = stride[i + 1] * self.parties[i + 1];
        }
        let others: Vec<usize> = (0..n).filter(|&i| i != keep).collect();
        let env_dim: usize = others.iter().map(|&i| self.parties[i]).product();
        let mut out = ComplexMatrix::zeros(dk, dk);
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..env_dim {
                    // decode environment multi-index
                    let mut rem = e;
                    let mut row = a * stride[keep];
                    let mut col = b * stride[keep];
                    for &i in others.iter().rev() {
                        let di = self.parties[i];
                        let idx = rem % di;
                        rem /= di;
                        row += idx * stride[i];
                        col += idx * stride[i];
                    }
                    acc += self.matrix[(row, col)];
                }
                out[(a, b)] = acc;
            }
        }
        DensityMatrix::single(out)
    }
}

/// Real Bloch vector: d^2 - 1 components in canonical row-major point order,
/// identity excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    pub d: usize,
    pub components: Vec<f64>,
}

impl BlochVector {
    pub fn new(d: usize, components: Vec<f64>) -> Result<Self, BlochError> {
        let want = d * d - 1;
        if components.len() != want {
            return Err(BlochError::LengthMismatch {
                d,
                got: components.len(),
                want,
            });
        }
        Ok(Self { d, components })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum()
    }

    /// Component for a given non-identity phase point.
    pub fn component(&self, p: &PhasePoint) -> f64 {
        assert!(!p.is_origin(), "identity carries no Bloch component");
        self.components[p.l() * p.dim() + p.m() - 1]
    }
}

/// components[p] = Tr{rho Q(p)} over all non-identity points.
pub fn decompose(rho: &DensityMatrix) -> Result<BlochVector, BlochError> {
    if rho.parties().len() != 1 {
        return Err(BlochError::NotSingleParty(rho.parties().len()));
    }
    let d = rho.dim();
    let mut components = Vec::with_capacity(d * d - 1);
    for p in hw_basis::non_identity_points(d).expect("d >= 2") {
        let q = hw_basis::hw_observable(&p);
        let t = rho.matrix().matmul(&q.matrix)?.trace()?;
        if t.im.abs() > STRUCT_TOL {
            return Err(BlochError::InvalidState(format!(
                "expectation of Q{p} has imaginary part {:.3e}",
                t.im
            )));
        }
        components.push(t.re);
    }
    BlochVector::new(d, components)
}

/// Result of [`reconstruct`]: the matrix is Hermitian with unit trace by
/// construction; positivity is diagnosed, not enforced.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub matrix: ComplexMatrix,
    pub min_eigenvalue: f64,
}

impl Reconstruction {
    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue >= -1e-9
    }

    pub fn into_density(self) -> Result<DensityMatrix, BlochError> {
        DensityMatrix::single(self.matrix)
    }
}

/// (1/d)(I + sum_p v[p] Q(p)).
pub fn reconstruct(v: &BlochVector) -> Result<Reconstruction, BlochError> {
    let d = v.d;
    let mut acc = ComplexMatrix::identity(d);
    for p in hw_basis::non_identity_points(d).expect("d >= 2") {
        let q = hw_basis::hw_observable(&p);
        acc = acc.add(&q.matrix.scale(Complex64::new(v.component(&p), 0.0)))?;
    }
    let matrix = acc.scale(Complex64::new(1.0 / d as f64, 0.0));
    debug_assert!(matrix.hermiticity_defect() < 1e-9);
    let min_eigenvalue = matrix.hermitian_eigenvalues()?[0];
    Ok(Reconstruction {
        matrix,
        min_eigenvalue,
    })
}

/// Per-party factor of a correlation observable.
#[derive(Debug, Clone)]
pub enum PartyOp {
    Identity,
    Observable(ComplexMatrix),
}

impl PartyOp {
    fn matrix(&self, dim: usize) -> ComplexMatrix {
        match self {
            PartyOp::Identity => ComplexMatrix::identity(dim),
            PartyOp::Observable(m) => m.clone(),
        }
    }
}

/// Tr{rho (op_1 x op_2 x ...)}, real within 1e-9 for Hermitian factors.
pub fn correlation(rho: &DensityMatrix, ops: &[PartyOp]) -> Result<f64, BlochError> {
    if ops.len() != rho.parties().len() {
        return Err(BlochError::PartyCountMismatch {
            ops: ops.len(),
            parties: rho.parties().len(),
        });
    }
    let mut full: Option<ComplexMatrix> = None;
    for (i, op) in ops.iter().enumerate() {
        let want = rho.parties()[i];
        let m = op.matrix(want);
        if m.rows() != want || m.cols() != want {
            return Err(BlochError::PartyDimMismatch {
                party: i,
                got: m.rows(),
                want,
            });
        }
        full = Some(match full {
            None => m,
            Some(acc) => acc.kron(&m),
        });
    }
    let full = full.expect("at least one party");
    let t = rho.matrix().matmul(&full)?.trace()?;
    if t.im.abs() > 1e-9 {
        return Err(BlochError::InvalidState(format!(
            "correlation has imaginary part {:.3e}",
            t.im
        )));
    }
    Ok(t.re)
}

/// Entrywise conjugate of an HW observable.
///
/// The conjugated matrix is again a basis element up to sign:
/// conj(Q(l,m)) = sign * Q(l, -m mod d) with sign = -1 exactly when l is odd
/// and m != 0. The `matrix` field always holds the true entrywise conjugate.
#[derive(Debug, Clone)]
pub struct ConjugateObservable {
    pub point: PhasePoint,
    pub sign: f64,
    pub matrix: ComplexMatrix,
}

pub fn conjugate_observable(q: &HWObservable) -> ConjugateObservable {
    let d = q.point.dim();
    let matrix = q.matrix.conjugate();
    let point = PhasePoint::new(d, q.point.l() as i64, -(q.point.m() as i64))
        .expect("valid dimension");
    let sign = if q.point.l() % 2 == 1 && q.point.m() != 0 {
        -1.0
    } else {
        1.0
    };
    debug_assert!(
        hw_basis::hw_observable(&point)
            .matrix
            .scale(Complex64::new(sign, 0.0))
            .sub(&matrix)
            .expect("shapes match")
            .max_norm()
            < 1e-12
    );
    ConjugateObservable {
        point,
        sign,
        matrix,
    }
}

/// Generalized Gell-Mann basis: d^2 - 1 Hermitian matrices with
/// Tr{lambda lambda'} = 2 delta. Order: symmetric pairs, antisymmetric
/// pairs, then diagonal members.
pub fn gell_mann_basis(d: usize) -> Vec<ComplexMatrix> {
    assert!(d >= 2);
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = Complex64::new(1.0, 0.0);
            sym[(k, j)] = Complex64::new(1.0, 0.0);
            out.push(sym);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut asym = ComplexMatrix::zeros(d, d);
            asym[(j, k)] = Complex64::new(0.0, -1.0);
            asym[(k, j)] = Complex64::new(0.0, 1.0);
            out.push(asym);
        }
    }
    for n in 1..d {
        let norm = (2.0 / (n as f64 * (n + 1) as f64)).sqrt();
        let mut diag = ComplexMatrix::zeros(d, d);
        for j in 0..n {
            diag[(j, j)] = Complex64::new(norm, 0.0);
        }
        diag[(n, n)] = Complex64::new(-(n as f64) * norm, 0.0);
        out.push(diag);
    }
    out
}
