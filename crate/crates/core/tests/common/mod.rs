#![allow(dead_code)]

use rand::Rng;
use skewflow_core::linalg::hat;
use skewflow_core::{AngularRate, ButcherTableau, SkewMatrix, SquareMatrix};

pub fn test_coefficient() -> SkewMatrix {
    hat(AngularRate([0.0, -0.1, -2.0]))
}

pub fn quarter_turn_2x2() -> SkewMatrix {
    SkewMatrix::new(SquareMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap()).unwrap()
}

/// Random skew matrix of size `dim` with Frobenius norm `norm`.
pub fn random_skew<R: Rng>(rng: &mut R, dim: usize, norm: f64) -> SkewMatrix {
    let mut m = SquareMatrix::zeros(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v: f64 = rng.gen_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    let f = m.frobenius_norm();
    if f == 0.0 {
        return SkewMatrix::new(m).unwrap();
    }
    SkewMatrix::new(m.scale(norm / f)).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> SquareMatrix {
    let data = (0..dim * dim).map(|_| rng.gen_range(-scale..scale)).collect();
    SquareMatrix::from_row_major(dim, data).unwrap()
}

/// Two implicit-midpoint half steps written as one 2-stage diagonally
/// implicit tableau; symplectic but not in the built-in catalogue.
pub fn composed_midpoint() -> ButcherTableau {
    skewflow_core::tableau::parse_tableau("# two half midpoints\n2\n0.25 0\n0.5 0.25\n0.5 0.5\n")
        .unwrap()
        .with_name("composed-midpoint")
}

pub fn rel_diff(a: &SquareMatrix, b: &SquareMatrix) -> f64 {
    (a - b).frobenius_norm() / b.frobenius_norm().max(f64::MIN_POSITIVE)
}
