//! Hand-embedded reference matrices for every HW observable at d=3 and d=4.
//!
//! These are written out entry by entry from the explicit tabulated
//! representation, independently of the displacement-product constructor, so
//! comparing the two paths is a genuine golden test. Shorthand: c = chi =
//! (1+i)/2, its conjugate cc, w = exp(2 pi i / 3), s = 1/sqrt(2).

use num_complex::Complex64;

use crate::hw_basis::PhasePoint;
use crate::numerics::ComplexMatrix;

fn mat(d: usize, entries: Vec<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_rows(d, d, entries)
}

/// All nine reference matrices for d=3 in row-major point order
/// (0,0), (0,1), ..., (2,2).
pub fn reference_d3() -> Vec<(PhasePoint, ComplexMatrix)> {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let c = Complex64::new(0.5, 0.5);
    let cc = c.conj();
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let wc = w.conj();

    let matrices = vec![
        // (0,0)
        mat(3, vec![one, o, o, o, one, o, o, o, one]),
        // (0,1)
        mat(3, vec![o, cc, c, c, o, cc, cc, c, o]),
        // (0,2)
        mat(3, vec![o, c, cc, cc, o, c, c, cc, o]),
        // (1,0)
        mat(
            3,
            vec![
                c + cc,
                o,
                o,
                o,
                c * w + cc * wc,
                o,
                o,
                o,
                c * wc + cc * w,
            ],
        ),
        // (1,1)
        mat(
            3,
            vec![o, -cc * w, -c * w, -c * wc, o, -cc, -cc * wc, -c, o],
        ),
        // (1,2)
        mat(3, vec![o, c * wc, cc * wc, cc * w, o, c, c * w, cc, o]),
        // (2,0)
        mat(
            3,
            vec![
                c + cc,
                o,
                o,
                o,
                c * wc + cc * w,
                o,
                o,
                o,
                c * w + cc * wc,
            ],
        ),
        // (2,1)
        mat(3, vec![o, cc * wc, c * wc, c * w, o, cc, cc * w, c, o]),
        // (2,2)
        mat(3, vec![o, c * w, cc * w, cc * wc, o, c, c * wc, cc, o]),
    ];
    attach_points(3, matrices)
}

/// All sixteen reference matrices for d=4 in row-major point order.
pub fn reference_d4() -> Vec<(PhasePoint, ComplexMatrix)> {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let c = Complex64::new(0.5, 0.5);
    let cc = c.conj();
    let s = Complex64::new(1.0 / std::f64::consts::SQRT_2, 0.0);

    let scaled = |entries: Vec<Complex64>| {
        mat(4, entries.into_iter().map(|z| s * z).collect())
    };

    let matrices = vec![
        // (0,0)
        mat(
            4,
            vec![
                one, o, o, o, o, one, o, o, o, o, one, o, o, o, o, one,
            ],
        ),
        // (0,1)
        mat(
            4,
            vec![o, cc, o, c, c, o, cc, o, o, c, o, cc, cc, o, c, o],
        ),
        // (0,2)
        mat(
            4,
            vec![o, o, one, o, o, o, o, one, one, o, o, o, o, one, o, o],
        ),
        // (0,3)
        mat(
            4,
            vec![o, c, o, cc, cc, o, c, o, o, cc, o, c, c, o, cc, o],
        ),
        // (1,0)
        mat(
            4,
            vec![
                one, o, o, o, o, -one, o, o, o, o, -one, o, o, o, o, one,
            ],
        ),
        // (1,1)
        scaled(vec![o, -i, o, one, i, o, -one, o, o, -one, o, i, one, o, -i, o]),
        // (1,2)
        mat(4, vec![o, o, -i, o, o, o, o, i, i, o, o, o, o, -i, o, o]),
        // (1,3)
        scaled(vec![o, -i, o, -one, i, o, one, o, o, one, o, i, -one, o, -i, o]),
        // (2,0)
        mat(
            4,
            vec![
                one, o, o, o, o, -one, o, o, o, o, one, o, o, o, o, -one,
            ],
        ),
        // (2,1)
        mat(
            4,
            vec![o, -c, o, cc, -cc, o, c, o, o, cc, o, -c, c, o, -cc, o],
        ),
        // (2,2)
        mat(
            4,
            vec![o, o, -one, o, o, o, o, one, -one, o, o, o, o, one, o, o],
        ),
        // (2,3)
        mat(
            4,
            vec![o, -cc, o, c, -c, o, cc, o, o, c, o, -cc, cc, o, -c, o],
        ),
        // (3,0)
        mat(
            4,
            vec![
                one, o, o, o, o, one, o, o, o, o, -one, o, o, o, o, -one,
            ],
        ),
        // (3,1)
        scaled(vec![o, -one, o, -i, -one, o, -i, o, o, i, o, one, i, o, one, o]),
        // (3,2)
        mat(4, vec![o, o, i, o, o, o, o, i, -i, o, o, o, o, -i, o, o]),
        // (3,3)
        scaled(vec![o, one, o, -i, one, o, -i, o, o, i, o, -one, i, o, -one, o]),
    ];
    attach_points(4, matrices)
}

fn attach_points(
    d: usize,
    matrices: Vec<ComplexMatrix>,
) -> Vec<(PhasePoint, ComplexMatrix)> {
    assert_eq!(matrices.len(), d * d);
    matrices
        .into_iter()
        .enumerate()
        .map(|(idx, m)| {
            let p = PhasePoint::new(d, (idx / d) as i64, (idx % d) as i64).expect("on grid");
            (p, m)
        })
        .collect()
}

/// Max entrywise deviation between each reference matrix and the
/// constructor's output, per point.
pub fn compare_dimension(d: usize) -> Vec<(PhasePoint, f64)> {
    let reference = match d {
        3 => reference_d3(),
        4 => reference_d4(),
        other => panic!("no golden data for d={other}"),
    };
    reference
        .into_iter()
        .map(|(p, want)| {
            let got = crate::hw_basis::hw_observable(&p).matrix;
            let dev = got.sub(&want).expect("same shape").max_norm();
            (p, dev)
        })
        .collect()
}
