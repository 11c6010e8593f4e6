//! Factories for the reference states used in the examples plus seeded
//! random-state generation for property tests.
//!
//! Composite indices are big-endian: the first party is the most significant
//! factor.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bloch::{BlochError, DensityMatrix};
use crate::numerics::ComplexMatrix;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("party count must be at least 2, got {0}")]
    TooFewParties(usize),
    #[error("mixing fraction {0} outside [0, 1]")]
    MixingOutOfRange(f64),
    #[error("rank {rank} outside [1, {d}]")]
    RankOutOfRange { rank: usize, d: usize },
    #[error(transparent)]
    Bloch(#[from] BlochError),
    #[error(transparent)]
    Numerics(#[from] crate::numerics::NumericsError),
}

/// Serializable description of a factory state, used by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    MaxEntangled { d: usize },
    Ghz { parties: usize, d: usize },
    MaxMixed { parties: Vec<usize> },
    IsotropicMix { base: Box<StateSpec>, p: f64 },
    RandomDensity { d: usize, rank: usize, seed: u64 },
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityMatrix, StateError> {
        match self {
            StateSpec::MaxEntangled { d } => max_entangled(*d),
            StateSpec::Ghz { parties, d } => ghz(*parties, *d),
            StateSpec::MaxMixed { parties } => {
                let dim: usize = parties.iter().product();
                if parties.iter().any(|&d| d < 2) || parties.is_empty() {
                    return Err(StateError::DimensionTooSmall(
                        parties.iter().copied().min().unwrap_or(0),
                    ));
                }
                let m = ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
                Ok(DensityMatrix::new(parties.clone(), m)?)
            }
            StateSpec::IsotropicMix { base, p } => {
                let rho = base.build()?;
                isotropic_mix(&rho, *p)
            }
            StateSpec::RandomDensity { d, rank, seed } => random_density(*d, *rank, *seed),
        }
    }
}

fn projector(parties: Vec<usize>, ket: &[Complex64]) -> Result<DensityMatrix, StateError> {
    let dim = ket.len();
    let m = ComplexMatrix::from_fn(dim, dim, |i, j| ket[i] * ket[j].conj());
    Ok(DensityMatrix::new(parties, m)?)
}

/// Projector onto |phi_d> = (1/sqrt d) sum_j |j>|j>.
pub fn max_entangled(d: usize) -> Result<DensityMatrix, StateError> {
    ghz(2, d)
}

/// Projector onto (1/sqrt d) sum_j |j>^{x n}.
pub fn ghz(parties: usize, d: usize) -> Result<DensityMatrix, StateError> {
    if parties < 2 {
        return Err(StateError::TooFewParties(parties));
    }
    if d < 2 {
        return Err(StateError::DimensionTooSmall(d));
    }
    let dim = d.pow(parties as u32);
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut ket = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..d {
        // index of |j j ... j> in big-endian mixed radix
        let mut idx = 0usize;
        for _ in 0..parties {
            idx = idx * d + j;
        }
        ket[idx] = amp;
    }
    projector(vec![d; parties], &ket)
}

/// p rho1 + (1-p) rho2 for states of matching party structure.
pub fn convex_mix(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    p: f64,
) -> Result<DensityMatrix, StateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StateError::MixingOutOfRange(p));
    }
    let m = rho1
        .matrix()
        .scale(Complex64::new(p, 0.0))
        .add(&rho2.matrix().scale(Complex64::new(1.0 - p, 0.0)))?;
    Ok(DensityMatrix::new(rho1.parties().to_vec(), m)?)
}

/// p rho + (1-p) I/D with D the full dimension.
pub fn isotropic_mix(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix, StateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StateError::MixingOutOfRange(p));
    }
    let dim = rho.dim();
    let mixed = ComplexMatrix::identity(dim).scale(Complex64::new((1.0 - p) / dim as f64, 0.0));
    let m = rho.matrix().scale(Complex64::new(p, 0.0)).add(&mixed)?;
    Ok(DensityMatrix::new(rho.parties().to_vec(), m)?)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        // Box-Muller
        let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        data.push(Complex64::new(r * theta.cos(), r * theta.sin()));
    }
    ComplexMatrix::from_rows(rows, cols, data)
}

/// Hilbert-Schmidt-style random state: G G^dag / Tr with G a seeded complex
/// Gaussian d x rank matrix. Deterministic per seed.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix, StateError> {
    if d < 2 {
        return Err(StateError::DimensionTooSmall(d));
    }
    if rank < 1 || rank > d {
        return Err(StateError::RankOutOfRange { rank, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(&mut rng, d, rank);
    let gg = g.matmul(&g.adjoint()).expect("shapes match");
    let tr = gg.trace().expect("square").re;
    let m = gg.scale(Complex64::new(1.0 / tr, 0.0));
    Ok(DensityMatrix::single(m)?)
}

/// Explicit tensor product of independent seeded local random states.
pub fn random_product_state(dims: &[usize], seed: u64) -> Result<DensityMatrix, StateError> {
    assert!(!dims.is_empty());
    let mut acc: Option<ComplexMatrix> = None;
    for (i, &d) in dims.iter().enumerate() {
        let local = random_density(d, d, seed.wrapping_add(i as u64).wrapping_mul(0x9e3779b97f4a7c15))?;
        acc = Some(match acc {
            None => local.matrix().clone(),
            Some(a) => a.kron(local.matrix()),
        });
    }
    Ok(DensityMatrix::new(dims.to_vec(), acc.expect("nonempty"))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_state() {
        let rho = max_entangled(2).unwrap();
        let m = rho.matrix();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((m[(i, j)] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        }
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn max_entangled_local_purity() {
        let rho = max_entangled(4).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        let local = rho.partial_trace_keep(0).unwrap();
        assert!((local.purity() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ghz_matches_definition() {
        let rho = ghz(3, 4).unwrap();
        // entries 1/4 at positions |iii><jjj|
        for i in 0..4usize {
            for j in 0..4usize {
                let row = i * 16 + i * 4 + i;
                let col = j * 16 + j * 4 + j;
                assert!((rho.matrix()[(row, col)] - Complex64::new(0.25, 0.0)).norm() < 1e-14);
            }
        }
        let total: f64 = rho.matrix().entries().iter().map(|z| z.norm()).sum();
        assert!((total - 4.0).abs() < 1e-12, "only the 16 GHZ entries are nonzero");
        // ghz(2, d) == max_entangled(d)
        let a = ghz(2, 3).unwrap();
        let b = max_entangled(3).unwrap();
        assert!(a.matrix().sub(b.matrix()).unwrap().max_norm() < 1e-14);
    }

    #[test]
    fn ghz_party_permutation_invariant() {
        let rho = ghz(3, 3).unwrap();
        let d = 3usize;
        // permute parties (0,1,2) -> (2,0,1) on indices
        let perm = |idx: usize| -> usize {
            let a = idx / (d * d);
            let b = (idx / d) % d;
            let c = idx % d;
            c * d * d + a * d + b
        };
        let dim = d * d * d;
        let permuted = ComplexMatrix::from_fn(dim, dim, |i, j| rho.matrix()[(perm(i), perm(j))]);
        assert!(permuted.sub(rho.matrix()).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn isotropic_mix_endpoints_and_composition() {
        let rho = ghz(3, 2).unwrap();
        let same = isotropic_mix(&rho, 1.0).unwrap();
        assert!(same.matrix().sub(rho.matrix()).unwrap().max_norm() < 1e-14);
        let mixed = isotropic_mix(&rho, 0.0).unwrap();
        let want = ComplexMatrix::identity(8).scale(Complex64::new(1.0 / 8.0, 0.0));
        assert!(mixed.matrix().sub(&want).unwrap().max_norm() < 1e-14);
        // mix(mix(rho, p), q) == mix(rho, p q)
        let a = isotropic_mix(&isotropic_mix(&rho, 0.7).unwrap(), 0.5).unwrap();
        let b = isotropic_mix(&rho, 0.35).unwrap();
        assert!(a.matrix().sub(b.matrix()).unwrap().max_norm() < 1e-12);
        assert!(isotropic_mix(&rho, 1.5).is_err());
    }

    #[test]
    fn random_density_contracts() {
        let pure = random_density(4, 1, 42).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);
        let full = random_density(4, 4, 42).unwrap();
        let min = full.matrix().hermitian_eigenvalues().unwrap()[0];
        assert!(min > 0.0);
        // determinism
        let again = random_density(4, 4, 42).unwrap();
        assert_eq!(full.matrix(), again.matrix());
        assert!(random_density(4, 5, 0).is_err());
    }

    #[test]
    fn random_product_state_is_product() {
        let rho = random_product_state(&[2, 3], 7).unwrap();
        assert_eq!(rho.parties(), &[2, 3]);
        // purity factorizes for product states
        let a = rho.partial_trace_keep(0).unwrap();
        let b = rho.partial_trace_keep(1).unwrap();
        assert!((rho.purity() - a.purity() * b.purity()).abs() < 1e-10);
    }
}
