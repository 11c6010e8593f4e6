//! Ancilla-qubit Ramsey measurement of HW observables.
//!
//! The cycle is rotation - conditional displacement - rotation on the probe
//! qubit, followed by a projective qubit measurement. The composite basis is
//! system (x) qubit with down = |0>, up = |1>. The printed rotation matrix is
//! normalized by 1/sqrt(2) to make it unitary, and the first rotation phase
//! is -pi/4: with these choices the estimator identity
//! E_up - E_down = Q / sqrt(2) holds exactly, which is the authoritative
//! contract for the whole module.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bloch::{BlochError, BlochVector, DensityMatrix};
use crate::hw_basis::{self, PhasePoint};
use crate::numerics::{ComplexMatrix, NumericsError};

#[derive(Debug, Error)]
pub enum RamseyError {
    #[error("state dimension {state} does not match point dimension {point}")]
    DimensionMismatch { state: usize, point: usize },
    #[error("shots must be at least 1")]
    NoShots,
    #[error("internal inconsistency: probabilities ({p_up}, {p_down}) outside [0, 1]")]
    BadProbabilities { p_up: f64, p_down: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Bloch(#[from] BlochError),
}

/// The measurement circuit for one phase point, with the composed unitary
/// cached. `rotations` holds the two probe phases in application order.
#[derive(Debug, Clone)]
pub struct RamseyCircuit {
    pub d: usize,
    pub point: PhasePoint,
    pub rotations: (f64, f64),
    unitary: ComplexMatrix,
}

/// Probe rotation R(phi) = (1/sqrt 2) [[1, e^{i phi}], [-e^{-i phi}, 1]].
pub fn rotation(phi: f64) -> ComplexMatrix {
    let s = Complex64::new(1.0 / SQRT_2, 0.0);
    let e = Complex64::new(0.0, phi).exp();
    ComplexMatrix::from_rows(
        2,
        2,
        vec![s, s * e, -s * e.conj(), s],
    )
}

/// U_alpha = I (x) |down><down| + D(l,m) (x) |up><up| in system (x) qubit
/// ordering.
pub fn conditional_displacement(p: &PhasePoint) -> ComplexMatrix {
    let d = p.dim();
    let disp = hw_basis::displacement(p);
    ComplexMatrix::from_fn(2 * d, 2 * d, |r, c| {
        let (sr, qr) = (r / 2, r % 2);
        let (sc, qc) = (c / 2, c % 2);
        if qr != qc {
            Complex64::new(0.0, 0.0)
        } else if qr == 0 {
            if sr == sc {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        } else {
            disp[(sr, sc)]
        }
    })
}

fn qubit_embed(d: usize, q: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(d).kron(q)
}

impl RamseyCircuit {
    pub fn new(point: PhasePoint) -> Result<Self, RamseyError> {
        let d = point.dim();
        let rotations = (-FRAC_PI_4, 0.0);
        let first = qubit_embed(d, &rotation(rotations.0));
        let second = qubit_embed(d, &rotation(rotations.1));
        let unitary = second
            .matmul(&conditional_displacement(&point))?
            .matmul(&first)?;
        debug_assert!(unitary.unitarity_defect().unwrap() < 1e-10);
        Ok(Self {
            d,
            point,
            rotations,
            unitary,
        })
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// Kraus operator M_j = <j| U_RM |down> acting on the system alone.
    pub fn kraus(&self, j: usize) -> ComplexMatrix {
        assert!(j < 2);
        ComplexMatrix::from_fn(self.d, self.d, |sr, sc| {
            self.unitary[(sr * 2 + j, sc * 2)]
        })
    }
}

/// POVM elements (E_up, E_down) with E_j = M_j^dag M_j.
pub fn povm_elements(p: &PhasePoint) -> Result<(ComplexMatrix, ComplexMatrix), RamseyError> {
    let circuit = RamseyCircuit::new(*p)?;
    let m_down = circuit.kraus(0);
    let m_up = circuit.kraus(1);
    let e_down = m_down.adjoint().matmul(&m_down)?;
    let e_up = m_up.adjoint().matmul(&m_up)?;
    Ok((e_up, e_down))
}

/// Exact outcome probabilities (p_up, p_down) = (Tr rho E_up, Tr rho E_down).
pub fn exact_probabilities(
    rho: &DensityMatrix,
    p: &PhasePoint,
) -> Result<(f64, f64), RamseyError> {
    if rho.dim() != p.dim() {
        return Err(RamseyError::DimensionMismatch {
            state: rho.dim(),
            point: p.dim(),
        });
    }
    let (e_up, e_down) = povm_elements(p)?;
    let p_up = rho.matrix().matmul(&e_up)?.trace()?.re;
    let p_down = rho.matrix().matmul(&e_down)?.trace()?.re;
    let tol = 1e-9;
    if !(-tol..=1.0 + tol).contains(&p_up)
        || !(-tol..=1.0 + tol).contains(&p_down)
        || (p_up + p_down - 1.0).abs() > 1e-10
    {
        return Err(RamseyError::BadProbabilities { p_up, p_down });
    }
    Ok((p_up.clamp(0.0, 1.0), p_down.clamp(0.0, 1.0)))
}

/// Finite-statistics record of one measured point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub d: usize,
    pub l: usize,
    pub m: usize,
    pub shots: u64,
    pub count_up: u64,
    pub count_down: u64,
    pub seed: u64,
}

impl MeasurementRecord {
    pub fn point(&self) -> PhasePoint {
        PhasePoint::new(self.d, self.l as i64, self.m as i64).expect("valid record")
    }
}

fn point_stream(seed: u64, p: &PhasePoint) -> ChaCha8Rng {
    // independent stream per (seed, point): fold the point into the seed
    let mix = (p.l() as u64)
        .wrapping_mul(0x9e3779b97f4a7c15)
        .wrapping_add(p.m() as u64)
        .wrapping_mul(0xc2b2ae3d27d4eb4f)
        .wrapping_add(p.dim() as u64);
    ChaCha8Rng::seed_from_u64(seed ^ mix)
}

/// Bernoulli sampling of the qubit outcome, deterministic per (seed, point).
pub fn sample(
    rho: &DensityMatrix,
    p: &PhasePoint,
    shots: u64,
    seed: u64,
) -> Result<MeasurementRecord, RamseyError> {
    if shots == 0 {
        return Err(RamseyError::NoShots);
    }
    let (p_up, _) = exact_probabilities(rho, p)?;
    let mut rng = point_stream(seed, p);
    let mut count_up = 0u64;
    for _ in 0..shots {
        if rng.gen::<f64>() < p_up {
            count_up += 1;
        }
    }
    Ok(MeasurementRecord {
        d: p.dim(),
        l: p.l(),
        m: p.m(),
        shots,
        count_up,
        count_down: shots - count_up,
        seed,
    })
}

/// Unbiased estimator sqrt(2) (n_up - n_down) / shots of <Q(p)>.
pub fn estimate(record: &MeasurementRecord) -> f64 {
    SQRT_2 * (record.count_up as f64 - record.count_down as f64) / record.shots as f64
}

/// Bloch vector estimated point by point; `shots = None` returns the exact
/// probabilities' limit, which coincides with the direct decomposition.
pub fn estimate_bloch(
    rho: &DensityMatrix,
    shots: Option<u64>,
    seed: u64,
) -> Result<BlochVector, RamseyError> {
    let d = rho.dim();
    let points = hw_basis::non_identity_points(d).map_err(|_| RamseyError::DimensionMismatch {
        state: d,
        point: d,
    })?;
    let mut components = Vec::with_capacity(points.len());
    for p in &points {
        let value = match shots {
            Some(n) => estimate(&sample(rho, p, n, seed)?),
            None => {
                let (p_up, p_down) = exact_probabilities(rho, p)?;
                SQRT_2 * (p_up - p_down)
            }
        };
        components.push(value);
    }
    Ok(BlochVector::new(d, components)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch;
    use crate::states;

    fn pt(d: usize, l: i64, m: i64) -> PhasePoint {
        PhasePoint::new(d, l, m).unwrap()
    }

    #[test]
    fn rotation_values_and_unitarity() {
        let r0 = rotation(0.0);
        let s = 1.0 / SQRT_2;
        for (idx, want) in [(0, s), (1, s), (2, -s), (3, s)] {
            let got = r0[(idx / 2, idx % 2)];
            assert!((got - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
        let rpi = rotation(std::f64::consts::PI);
        for (idx, want) in [(0, s), (1, -s), (2, s), (3, s)] {
            let got = rpi[(idx / 2, idx % 2)];
            assert!((got - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
        for phi in [0.0, 0.3, -FRAC_PI_4, 2.0] {
            assert!(rotation(phi).unitarity_defect().unwrap() < 1e-12);
        }
    }

    #[test]
    fn conditional_displacement_blocks() {
        let u = conditional_displacement(&pt(2, 1, 0));
        // down block (qubit index 0) is the identity
        for s in 0..2 {
            for t in 0..2 {
                let want = if s == t { 1.0 } else { 0.0 };
                assert!((u[(s * 2, t * 2)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
        // up block is Z = diag(1, -1)
        assert!((u[(1, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((u[(3, 3)] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let trivial = conditional_displacement(&pt(3, 0, 0));
        assert!(
            trivial
                .sub(&ComplexMatrix::identity(6))
                .unwrap()
                .max_norm()
                < 1e-12
        );
        for p in hw_basis::full_basis_points(4).unwrap() {
            assert!(conditional_displacement(&p).unitarity_defect().unwrap() < 1e-10);
        }
    }

    #[test]
    fn estimator_identity_all_points_d_up_to_6() {
        for d in 2..=6usize {
            for p in hw_basis::full_basis_points(d).unwrap() {
                let (e_up, e_down) = povm_elements(&p).unwrap();
                let sum = e_up.add(&e_down).unwrap();
                assert!(
                    sum.sub(&ComplexMatrix::identity(d)).unwrap().max_norm() < 1e-10,
                    "completeness d={d} {p}"
                );
                let diff = e_up.sub(&e_down).unwrap();
                let q = hw_basis::hw_observable(&p)
                    .matrix
                    .scale(Complex64::new(1.0 / SQRT_2, 0.0));
                assert!(
                    diff.sub(&q).unwrap().max_norm() < 1e-10,
                    "estimator identity d={d} {p}"
                );
                for e in [&e_up, &e_down] {
                    let min = e.hermitian_eigenvalues().unwrap()[0];
                    assert!(min > -1e-9, "PSD d={d} {p}");
                }
            }
        }
    }

    #[test]
    fn exact_probability_examples() {
        let mixed = states::StateSpec::MaxMixed { parties: vec![4] }
            .build()
            .unwrap();
        let (up, down) = exact_probabilities(&mixed, &pt(4, 1, 1)).unwrap();
        assert!((up - 0.5).abs() < 1e-12 && (down - 0.5).abs() < 1e-12);

        // d=2, rho = |0><0|, p=(1,0): <Z> = 1
        let rho = bloch::DensityMatrix::single(ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == 0 && j == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
        .unwrap();
        let (up, down) = exact_probabilities(&rho, &pt(2, 1, 0)).unwrap();
        assert!((up - down - 1.0 / SQRT_2).abs() < 1e-12);

        // local reduction of |phi_4> is I/4
        let local = states::max_entangled(4)
            .unwrap()
            .partial_trace_keep(0)
            .unwrap();
        let (up, down) = exact_probabilities(&local, &pt(4, 1, 0)).unwrap();
        assert!((up - 0.5).abs() < 1e-12 && (down - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic_and_consistent() {
        let rho = states::random_density(3, 3, 11).unwrap();
        let p = pt(3, 1, 2);
        let a = sample(&rho, &p, 10_000, 7).unwrap();
        let b = sample(&rho, &p, 10_000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.count_up + a.count_down, a.shots);
        let c = sample(&rho, &p, 10_000, 8).unwrap();
        assert_ne!(a.count_up, c.count_up, "different seeds should differ");
        assert!(sample(&rho, &p, 0, 7).is_err());
    }

    #[test]
    fn estimator_converges() {
        let rho = states::random_density(3, 3, 21).unwrap();
        let p = pt(3, 2, 1);
        let q = hw_basis::hw_observable(&p).matrix;
        let exact = rho.matrix().matmul(&q).unwrap().trace().unwrap().re;
        let shots = 1_000_000u64;
        let mut hits = 0;
        for seed in 0..100u64 {
            let rec = sample(&rho, &p, shots, seed).unwrap();
            if (estimate(&rec) - exact).abs() < 5.0 * (2.0 / shots as f64).sqrt() {
                hits += 1;
            }
        }
        assert!(hits >= 99, "only {hits}/100 trials within the bound");
    }

    #[test]
    fn exact_bloch_estimation_matches_decompose() {
        let rho = states::random_density(4, 4, 33).unwrap();
        let direct = bloch::decompose(&rho).unwrap();
        let via_ramsey = estimate_bloch(&rho, None, 0).unwrap();
        for (a, b) in direct.components().iter().zip(via_ramsey.components()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn sampled_bloch_estimation_close() {
        let rho = states::random_density(3, 3, 5).unwrap();
        let est = estimate_bloch(&rho, Some(100_000), 42).unwrap();
        let rec = bloch::reconstruct(&est).unwrap();
        let err = rec.matrix.sub(rho.matrix()).unwrap().max_norm();
        assert!(err < 0.02, "reconstruction error {err}");
    }

    #[test]
    fn variance_scales_inversely_with_shots() {
        let rho = states::random_density(2, 2, 3).unwrap();
        let p = pt(2, 1, 1);
        let (p_up, _) = exact_probabilities(&rho, &p).unwrap();
        let theory_var = |shots: f64| 8.0 * p_up * (1.0 - p_up) / shots;
        for shots in [1_000u64, 10_000, 100_000] {
            let trials = 200;
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for seed in 0..trials {
                let est = estimate(&sample(&rho, &p, shots, 10_000 + seed).unwrap());
                sum += est;
                sum_sq += est * est;
            }
            let n = trials as f64;
            let var = sum_sq / n - (sum / n).powi(2);
            let ratio = var / theory_var(shots as f64);
            assert!(
                (0.8..=1.2).contains(&ratio),
                "variance ratio {ratio} at {shots} shots"
            );
        }
    }
}
