//! (Anti-)commutation structure of HW observables in discrete phase space.
//!
//! Classification runs in exact integer arithmetic on t = m'l - m l':
//! the pair anticommutes iff 2t is an odd multiple of d, commutes iff t is a
//! multiple of d. The amplitude-level cross product alpha x alpha' =
//! (pi/d) t is reported alongside for the continuous notation.

use thiserror::Error;

use crate::hw_basis::{self, amplitude_of, Amplitude, PhasePoint};
use crate::numerics::{anticommutator, commutator};

#[derive(Debug, Error)]
pub enum CommutationError {
    #[error("phase points have different dimensions: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {d} above the exhaustive-search ceiling {ceiling}")]
    AboveCeiling { d: usize, ceiling: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    Commuting,
    Anticommuting,
    Neither,
}

/// Classified pair with the numeric residual used for verification:
/// the anticommutator norm for Anticommuting, the commutator norm for
/// Commuting, and the smaller of the two for Neither.
#[derive(Debug, Clone)]
pub struct PairRelation {
    pub kind: RelationKind,
    pub cross: f64,
    pub residual: f64,
}

/// Im(alpha conj(alpha')) = a.im * b.re - a.re * b.im, equal to
/// (pi/d)(m' l - m l') on grid points.
pub fn cross_product(a: &Amplitude, b: &Amplitude) -> f64 {
    a.im * b.re - a.re * b.im
}

/// Integer cross index t = m' l - m l' for points (l, m) and (l', m').
fn cross_index(p1: &PhasePoint, p2: &PhasePoint) -> i64 {
    p2.m() as i64 * p1.l() as i64 - p1.m() as i64 * p2.l() as i64
}

fn kind_of(d: usize, t: i64) -> RelationKind {
    let di = d as i64;
    if t.rem_euclid(di) == 0 {
        RelationKind::Commuting
    } else if (2 * t).rem_euclid(2 * di) == di {
        RelationKind::Anticommuting
    } else {
        RelationKind::Neither
    }
}

pub fn classify_pair(p1: &PhasePoint, p2: &PhasePoint) -> Result<PairRelation, CommutationError> {
    if p1.dim() != p2.dim() {
        return Err(CommutationError::DimensionMismatch(p1.dim(), p2.dim()));
    }
    let d = p1.dim();
    let t = cross_index(p1, p2);
    // ceiling from the anticommutation condition, checked as an assertion
    debug_assert!(t.unsigned_abs() <= ((d - 1) * (d - 1)) as u64);
    let kind = kind_of(d, t);
    let qa = hw_basis::hw_observable(p1).matrix;
    let qb = hw_basis::hw_observable(p2).matrix;
    let ac_norm = anticommutator(&qa, &qb)
        .expect("same dimension")
        .operator_infinity_norm()
        .expect("square");
    let c_norm = commutator(&qa, &qb)
        .expect("same dimension")
        .operator_infinity_norm()
        .expect("square");
    let residual = match kind {
        RelationKind::Anticommuting => ac_norm,
        RelationKind::Commuting => c_norm,
        RelationKind::Neither => ac_norm.min(c_norm),
    };
    Ok(PairRelation {
        kind,
        cross: cross_product(&amplitude_of(p1), &amplitude_of(p2)),
        residual,
    })
}

/// Integer-only classification, used by the exhaustive searches.
pub fn classify_kind(p1: &PhasePoint, p2: &PhasePoint) -> RelationKind {
    assert_eq!(p1.dim(), p2.dim());
    kind_of(p1.dim(), cross_index(p1, p2))
}

/// Adjacency of the anticommutation graph over non-identity points.
fn anticommuting_pairs(d: usize) -> (Vec<PhasePoint>, Vec<Vec<bool>>) {
    let points = hw_basis::non_identity_points(d).expect("d >= 2");
    let n = points.len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if classify_kind(&points[i], &points[j]) == RelationKind::Anticommuting {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    (points, adj)
}

/// All pairwise-anticommuting triples, exhaustively enumerated and
/// numerically verified (anticommutator norms below 1e-10). Sorted
/// canonically; empty for odd d.
pub fn find_anticommuting_triples(d: usize) -> Result<Vec<[PhasePoint; 3]>, CommutationError> {
    if d < 2 {
        return Err(CommutationError::AboveCeiling { d, ceiling: 0 });
    }
    let (points, adj) = anticommuting_pairs(d);
    let n = points.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !adj[i][j] {
                continue;
            }
            for k in (j + 1)..n {
                if adj[i][k] && adj[j][k] {
                    let triple = [points[i], points[j], points[k]];
                    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                        let qa = hw_basis::hw_observable(&triple[a]).matrix;
                        let qb = hw_basis::hw_observable(&triple[b]).matrix;
                        let norm = anticommutator(&qa, &qb)
                            .expect("same dimension")
                            .operator_infinity_norm()
                            .expect("square");
                        assert!(
                            norm < 1e-10,
                            "classifier/numerics disagree on {:?}",
                            triple
                        );
                    }
                    out.push(triple);
                }
            }
        }
    }
    Ok(out)
}

/// Size of the largest pairwise-anticommuting subset, exhaustive up to the
/// ceiling (default 8 via [`max_anticommuting_set_size`]). Also asserts that
/// no 4-element set exists.
#[allow(clippy::needless_range_loop)] // symmetric clique search reads best with indices
pub fn max_anticommuting_set_size_with_ceiling(
    d: usize,
    ceiling: usize,
) -> Result<usize, CommutationError> {
    if d > ceiling {
        return Err(CommutationError::AboveCeiling { d, ceiling });
    }
    let (_, adj) = anticommuting_pairs(d);
    let n = adj.len();
    let mut has_pair = false;
    let mut best = 1usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if adj[i][j] {
                has_pair = true;
                best = best.max(2);
            }
        }
    }
    if has_pair {
        for i in 0..n {
            for j in (i + 1)..n {
                if !adj[i][j] {
                    continue;
                }
                for k in (j + 1)..n {
                    if !(adj[i][k] && adj[j][k]) {
                        continue;
                    }
                    best = best.max(3);
                    // any 4-clique would extend a triple
                    for l in (k + 1)..n {
                        assert!(
                            !(adj[i][l] && adj[j][l] && adj[k][l]),
                            "found a 4-element anticommuting set in d={d}"
                        );
                    }
                }
            }
        }
    }
    debug_assert!(best <= 3);
    Ok(best)
}

pub fn max_anticommuting_set_size(d: usize) -> Result<usize, CommutationError> {
    max_anticommuting_set_size_with_ceiling(d, 8)
}
