//! Anti-commutativity bound for sets of observables, and the entanglement
//! witnesses built from it.
//!
//! The bound on the squared Bloch components of a set {lambda_i} is
//! (max_i <lambda_i^2> + K) / (min_i Tr{lambda_i^2})^2, where K collects the
//! pairwise anticommutators. The i != j sum in K is taken over ordered pairs
//! by default (each unordered pair counted twice), which is the reading the
//! variance proof requires; the unordered reading is also provided since
//! both are useful when comparing against published demo values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bloch::{self, BlochError, DensityMatrix, PartyOp};
use crate::hw_basis::{self, PhasePoint};
use crate::numerics::{anticommutator, ComplexMatrix, NumericsError, STRUCT_TOL};

#[derive(Debug, Error)]
pub enum AcboundError {
    #[error("observable set must be nonempty")]
    EmptySet,
    #[error("observable '{label}' is not Hermitian (defect {defect:.3e})")]
    NotHermitian { label: String, defect: f64 },
    #[error("observables '{a}' and '{b}' are not orthogonal (|Tr| = {overlap:.3e})")]
    NotOrthogonal { a: String, b: String, overlap: f64 },
    #[error("state dimension {state} does not match set dimension {set}")]
    DimensionMismatch { state: usize, set: usize },
    #[error("witness term {term} has {got} factors but the state has {want} parties")]
    TermLengthMismatch { term: usize, got: usize, want: usize },
    #[error(transparent)]
    Bloch(#[from] BlochError),
    #[error("state construction failed: {0}")]
    State(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// How the sum over i != j in K is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairSum {
    /// Each unordered pair counted twice; matches the variance proof.
    #[default]
    Ordered,
    /// Each unordered pair counted once.
    Unordered,
}

fn pair_factor(conv: PairSum) -> f64 {
    match conv {
        PairSum::Ordered => 2.0,
        PairSum::Unordered => 1.0,
    }
}

#[derive(Debug, Clone)]
pub struct LabeledObservable {
    pub label: String,
    pub matrix: ComplexMatrix,
}

/// Set of Hermitian, pairwise Frobenius-orthogonal observables of one
/// dimension with a common normalization Tr{lambda^2} (= d for HW sets).
#[derive(Debug, Clone)]
pub struct ObservableSet {
    d: usize,
    members: Vec<LabeledObservable>,
    normalization: f64,
}

impl ObservableSet {
    pub fn new(members: Vec<LabeledObservable>, normalization: f64) -> Result<Self, AcboundError> {
        let first = members.first().ok_or(AcboundError::EmptySet)?;
        let d = first.matrix.rows();
        for m in &members {
            let defect = m.matrix.hermiticity_defect();
            if defect > STRUCT_TOL {
                return Err(AcboundError::NotHermitian {
                    label: m.label.clone(),
                    defect,
                });
            }
        }
        for (i, a) in members.iter().enumerate() {
            for b in members.iter().skip(i + 1) {
                let t = a.matrix.matmul(&b.matrix)?.trace()?;
                if t.norm() > 1e-9 {
                    return Err(AcboundError::NotOrthogonal {
                        a: a.label.clone(),
                        b: b.label.clone(),
                        overlap: t.norm(),
                    });
                }
            }
        }
        Ok(Self {
            d,
            members,
            normalization,
        })
    }

    /// HW observable subset; normalization Tr{Q^2} = d.
    pub fn from_points(points: &[PhasePoint]) -> Result<Self, AcboundError> {
        let first = points.first().ok_or(AcboundError::EmptySet)?;
        let members = points
            .iter()
            .map(|p| LabeledObservable {
                label: format!("Q{p}"),
                matrix: hw_basis::hw_observable(p).matrix,
            })
            .collect();
        Self::new(members, first.dim() as f64)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn members(&self) -> &[LabeledObservable] {
        &self.members
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }
}

/// K from exact anticommutator expectation values on a given state:
/// (1/2) sqrt(sum_{i != j} Tr{rho {lambda_i, lambda_j}}^2).
pub fn k_exact(
    rho: &DensityMatrix,
    set: &ObservableSet,
    conv: PairSum,
) -> Result<f64, AcboundError> {
    if rho.dim() != set.dim() {
        return Err(AcboundError::DimensionMismatch {
            state: rho.dim(),
            set: set.dim(),
        });
    }
    let mut sum = 0.0;
    for (i, a) in set.members.iter().enumerate() {
        for b in set.members.iter().skip(i + 1) {
            let ac = anticommutator(&a.matrix, &b.matrix)?;
            let ev = rho.matrix().matmul(&ac)?.trace()?.re;
            sum += pair_factor(conv) * ev * ev;
        }
    }
    Ok(0.5 * sum.sqrt())
}

/// State-independent upper bound on K from operator norms:
/// (1/2) sqrt(sum_{i != j} ||{lambda_i, lambda_j}||_inf^2).
pub fn k_opnorm(set: &ObservableSet, conv: PairSum) -> Result<f64, AcboundError> {
    let mut sum = 0.0;
    for (i, a) in set.members.iter().enumerate() {
        for b in set.members.iter().skip(i + 1) {
            let norm = anticommutator(&a.matrix, &b.matrix)?.operator_infinity_norm()?;
            sum += pair_factor(conv) * norm * norm;
        }
    }
    Ok(0.5 * sum.sqrt())
}

/// Theorem bound on sum of squared Bloch components over the set.
///
/// With a state: (max_i <lambda_i^2> + k_exact) / (min_i Tr{lambda_i^2})^2.
/// Without: the worst case over states, max_i ||lambda_i^2||_inf + k_opnorm
/// over the same denominator.
pub fn theorem_bound(
    set: &ObservableSet,
    rho: Option<&DensityMatrix>,
    conv: PairSum,
) -> Result<f64, AcboundError> {
    if set.members.is_empty() {
        return Err(AcboundError::EmptySet);
    }
    let mut min_tr_sq = f64::INFINITY;
    let mut numerator_max = f64::NEG_INFINITY;
    for m in &set.members {
        let sq = m.matrix.matmul(&m.matrix)?;
        min_tr_sq = min_tr_sq.min(sq.trace()?.re);
        let second_moment = match rho {
            Some(rho) => rho.matrix().matmul(&sq)?.trace()?.re,
            None => sq.operator_infinity_norm()?,
        };
        numerator_max = numerator_max.max(second_moment);
    }
    let k = match rho {
        Some(rho) => k_exact(rho, set, conv)?,
        None => k_opnorm(set, conv)?,
    };
    Ok((numerator_max + k) / (min_tr_sq * min_tr_sq))
}

/// Per-party factor label in a witness term. `Conj` denotes the entrywise
/// conjugate of Q(l,m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ObservableLabel {
    Identity,
    Point { l: usize, m: usize },
    Conj { l: usize, m: usize },
}

impl ObservableLabel {
    pub fn realize(&self, dim: usize) -> Result<PartyOp, AcboundError> {
        Ok(match self {
            ObservableLabel::Identity => PartyOp::Identity,
            ObservableLabel::Point { l, m } => {
                let p = PhasePoint::new(dim, *l as i64, *m as i64)
                    .map_err(|_| AcboundError::DimensionMismatch { state: dim, set: dim })?;
                PartyOp::Observable(hw_basis::hw_observable(&p).matrix)
            }
            ObservableLabel::Conj { l, m } => {
                let p = PhasePoint::new(dim, *l as i64, *m as i64)
                    .map_err(|_| AcboundError::DimensionMismatch { state: dim, set: dim })?;
                let q = hw_basis::hw_observable(&p);
                PartyOp::Observable(bloch::conjugate_observable(&q).matrix)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Separable,
    Biseparable,
}

/// Witness as data: per-party labels per term, with a separability bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub parties: Vec<usize>,
    pub terms: Vec<Vec<ObservableLabel>>,
    pub bound: f64,
    pub bound_kind: BoundKind,
    #[serde(default)]
    pub description: String,
}

/// Evaluation outcome: value is the sum of moduli of the term correlations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessReport {
    pub value: f64,
    pub term_values: Vec<f64>,
    pub bound: f64,
    pub violated: bool,
    /// Critical state fraction p_crit = bound / value under isotropic noise.
    pub noise_threshold: f64,
    /// Tolerable noise fraction 1 - p_crit.
    pub noise_resistance: f64,
}

pub fn evaluate_witness(
    rho: &DensityMatrix,
    spec: &WitnessSpec,
) -> Result<WitnessReport, AcboundError> {
    if spec.parties != rho.parties() {
        return Err(AcboundError::DimensionMismatch {
            state: rho.dim(),
            set: spec.parties.iter().product(),
        });
    }
    let mut value = 0.0;
    let mut term_values = Vec::with_capacity(spec.terms.len());
    for (ti, term) in spec.terms.iter().enumerate() {
        if term.len() != spec.parties.len() {
            return Err(AcboundError::TermLengthMismatch {
                term: ti,
                got: term.len(),
                want: spec.parties.len(),
            });
        }
        let ops = term
            .iter()
            .zip(&spec.parties)
            .map(|(lbl, &dim)| lbl.realize(dim))
            .collect::<Result<Vec<_>, _>>()?;
        let corr = bloch::correlation(rho, &ops)?;
        term_values.push(corr);
        value += corr.abs();
    }
    let violated = value > spec.bound + 1e-9;
    let noise_threshold = if value > 0.0 {
        spec.bound / value
    } else {
        f64::INFINITY
    };
    Ok(WitnessReport {
        value,
        term_values,
        bound: spec.bound,
        violated,
        noise_threshold,
        noise_resistance: 1.0 - noise_threshold,
    })
}

/// Separable bound sqrt(bound_A * bound_B) with
/// bound_X = q_max(d_X)^2 + k_opnorm(set_X) under HW normalization.
pub fn build_separable_bound(
    set_a: &ObservableSet,
    set_b: &ObservableSet,
    conv: PairSum,
) -> Result<f64, AcboundError> {
    let bound_a = hw_basis::q_max(set_a.dim()).powi(2) + k_opnorm(set_a, conv)?;
    let bound_b = hw_basis::q_max(set_b.dim()).powi(2) + k_opnorm(set_b, conv)?;
    Ok((bound_a * bound_b).sqrt())
}

/// Witness value of a bare term list; used by the Monte-Carlo tests.
pub fn witness_value(
    rho: &DensityMatrix,
    parties: &[usize],
    terms: &[Vec<ObservableLabel>],
) -> Result<f64, AcboundError> {
    let spec = WitnessSpec {
        parties: parties.to_vec(),
        terms: terms.to_vec(),
        bound: f64::INFINITY,
        bound_kind: BoundKind::Separable,
        description: String::new(),
    };
    Ok(evaluate_witness(rho, &spec)?.value)
}

/// The scaled identity component is irrelevant to witness values; moduli of
/// correlations are convex in rho.
pub fn convexity_defect(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    p: f64,
    spec: &WitnessSpec,
) -> Result<f64, AcboundError> {
    let mix = crate::states::convex_mix(rho1, rho2, p)
        .map_err(|e| AcboundError::State(e.to_string()))?;
    let v_mix = evaluate_witness(&mix, spec)?.value;
    let v1 = evaluate_witness(rho1, spec)?.value;
    let v2 = evaluate_witness(rho2, spec)?.value;
    Ok(v_mix - (p * v1 + (1.0 - p) * v2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    fn pt(d: usize, l: i64, m: i64) -> PhasePoint {
        PhasePoint::new(d, l, m).unwrap()
    }

    fn pauli_triple() -> ObservableSet {
        ObservableSet::from_points(&[pt(2, 0, 1), pt(2, 1, 0), pt(2, 1, 1)]).unwrap()
    }

    #[test]
    fn k_zero_for_exact_anticommuting() {
        let set = pauli_triple();
        assert!(k_opnorm(&set, PairSum::Ordered).unwrap() < 1e-12);
        let rho = states::random_density(2, 2, 5).unwrap();
        assert!(k_exact(&rho, &set, PairSum::Ordered).unwrap() < 1e-12);
        // singleton: empty sum
        let single = ObservableSet::from_points(&[pt(2, 0, 1)]).unwrap();
        assert_eq!(k_opnorm(&single, PairSum::Ordered).unwrap(), 0.0);
        assert_eq!(k_exact(&rho, &single, PairSum::Ordered).unwrap(), 0.0);
    }

    #[test]
    fn d4_triple_k_vanishes() {
        let set = ObservableSet::from_points(&[pt(4, 0, 1), pt(4, 2, 0), pt(4, 2, 1)]).unwrap();
        assert!(k_opnorm(&set, PairSum::Ordered).unwrap() < 1e-12);
    }

    #[test]
    fn k_exact_below_k_opnorm() {
        let set =
            ObservableSet::from_points(&[pt(9, 1, 0), pt(9, 0, 4), pt(9, 1, 4)]).unwrap();
        for conv in [PairSum::Ordered, PairSum::Unordered] {
            let upper = k_opnorm(&set, conv).unwrap();
            for seed in 0..5 {
                let rho = states::random_density(9, 9, seed).unwrap();
                assert!(k_exact(&rho, &set, conv).unwrap() <= upper + 1e-9);
            }
        }
    }

    #[test]
    fn pauli_worst_case_bound() {
        let set = pauli_triple();
        let b = theorem_bound(&set, None, PairSum::Ordered).unwrap();
        assert!((b - 0.25).abs() < 1e-12);
    }

    #[test]
    fn hw_simplified_bound_agrees() {
        // For an HW set the theorem bound times d^2 equals q_max^2 + K.
        let set =
            ObservableSet::from_points(&[pt(9, 1, 0), pt(9, 0, 4), pt(9, 1, 4)]).unwrap();
        let b = theorem_bound(&set, None, PairSum::Ordered).unwrap();
        let simplified =
            hw_basis::q_max(9).powi(2) + k_opnorm(&set, PairSum::Ordered).unwrap();
        assert!((b * 81.0 - simplified).abs() < 1e-9);
    }

    #[test]
    fn monte_carlo_bound_never_violated_d4() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let points = hw_basis::non_identity_points(4).unwrap();
        for trial in 0..50 {
            let size = rng.gen_range(2..=5);
            let subset: Vec<PhasePoint> = points
                .choose_multiple(&mut rng, size)
                .copied()
                .collect();
            let set = ObservableSet::from_points(&subset).unwrap();
            let rho = states::random_density(4, 4, 1000 + trial).unwrap();
            let bound = theorem_bound(&set, Some(&rho), PairSum::Ordered).unwrap();
            let sum_c_sq: f64 = subset
                .iter()
                .map(|p| {
                    let q = hw_basis::hw_observable(p);
                    let c = rho.matrix().matmul(&q.matrix).unwrap().trace().unwrap().re / 4.0;
                    c * c
                })
                .sum();
            assert!(sum_c_sq <= bound + 1e-9);
        }
    }

    #[test]
    fn witness_report_invariant() {
        let rho = states::ghz(3, 4).unwrap();
        let spec = crate::demos::ghz34_witness();
        let report = evaluate_witness(&rho, &spec).unwrap();
        assert_eq!(report.violated, report.value > report.bound + 1e-9);
        assert!((report.value - 3.0).abs() < 1e-9);
        assert!((report.noise_threshold - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn separable_bound_examples() {
        let a = ObservableSet::from_points(&[pt(4, 0, 1), pt(4, 2, 0), pt(4, 2, 1)]).unwrap();
        assert!((build_separable_bound(&a, &a, PairSum::Ordered).unwrap() - 1.0).abs() < 1e-10);
        let p = pauli_triple();
        assert!((build_separable_bound(&p, &p, PairSum::Ordered).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn non_orthogonal_set_rejected() {
        let q = hw_basis::hw_observable(&pt(3, 1, 1));
        let members = vec![
            LabeledObservable {
                label: "a".into(),
                matrix: q.matrix.clone(),
            },
            LabeledObservable {
                label: "b".into(),
                matrix: q.matrix.clone(),
            },
        ];
        assert!(matches!(
            ObservableSet::new(members, 3.0),
            Err(AcboundError::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn witness_convexity() {
        let spec = crate::demos::ghz34_witness();
        let rho1 = states::ghz(3, 4).unwrap();
        let rho2 = states::isotropic_mix(&rho1, 0.2).unwrap();
        for p in [0.0, 0.3, 0.8, 1.0] {
            let defect = convexity_defect(&rho1, &rho2, p, &spec).unwrap();
            assert!(defect <= 1e-9);
        }
    }
}
