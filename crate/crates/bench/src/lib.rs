//! Fixtures shared by the criterion benches.

use skewflow_core::linalg::hat;
use skewflow_core::{AngularRate, OrthogonalState, SkewMatrix, SquareMatrix};

/// The 3×3 test coefficient with rate (0, -0.1, -2).
pub fn test_coefficient() -> SkewMatrix {
    hat(AngularRate([0.0, -0.1, -2.0]))
}

pub fn identity_state() -> OrthogonalState {
    OrthogonalState::identity(3, 0.0)
}

/// Deterministic dense skew matrix of size `dim`.
pub fn skew_of_dim(dim: usize) -> SkewMatrix {
    let mut m = SquareMatrix::zeros(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v = ((i * 7 + j * 3) % 11) as f64 / 11.0 - 0.5;
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    SkewMatrix::new(m).expect("constructed skew")
}
