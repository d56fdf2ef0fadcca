//! Dense square matrices, skew-symmetric coefficients and the exact flow.
//!
//! Everything here is sized for the tiny systems this crate integrates
//! (3×3 attitude matrices, stacked stage systems of a few dozen unknowns),
//! so storage is a plain row-major `Vec<f64>` and factorizations are dense.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default relative tolerance used when gating skew-symmetry.
pub const SKEW_TOL: f64 = 1e-12;

/// Relative pivot threshold below which a factorization is declared singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// A dense `dim × dim` real matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from a slice of rows. All rows must have length
    /// equal to the number of rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: f64, other: &Self) -> Self {
        self.check_same_dim(other);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + k * b)
                .collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        self.transpose().inf_norm()
    }

    /// `self^T * self`
    pub fn gram(&self) -> Self {
        &self.transpose() * self
    }

    /// Determinant from the pivoted LU factorization (product of pivots with
    /// the permutation sign). Exactly singular matrices give zero.
    pub fn det(&self) -> f64 {
        let lu = Lu::factor_raw(self.dim, self.data.clone());
        lu.det()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    fn check_same_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "matrix dimensions differ ({} vs {})",
            self.dim, other.dim
        );
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.dim {
            list.entry(&self.row(i));
        }
        list.finish()
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.check_same_dim(rhs);
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;

    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.add_scaled(1.0, rhs)
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;

    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.add_scaled(-1.0, rhs)
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;

    fn neg(self) -> SquareMatrix {
        self.scale(-1.0)
    }
}

/// LU factorization with partial pivoting, `P A = L U`, stored compactly.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    /// Factors `a`, failing when a pivot falls below `PIVOT_TOL * ||a||_inf`.
    pub fn factor(a: &SquareMatrix) -> Result<Self> {
        Self::factor_row_major(a.dim, a.data.clone())
    }

    /// Same as [`Lu::factor`] for a raw row-major `n × n` buffer.
    pub fn factor_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        assert_eq!(data.len(), n * n);
        let norm = (0..n)
            .map(|i| data[i * n..(i + 1) * n].iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let threshold = PIVOT_TOL * norm;
        let lu = Self::factor_raw(n, data);
        for k in 0..n {
            let pivot = lu.lu[k * n + k];
            if pivot == 0.0 || pivot.abs() < threshold {
                return Err(Error::Singular {
                    column: k,
                    pivot: pivot.abs(),
                    threshold,
                });
            }
        }
        Ok(lu)
    }

    /// Doolittle elimination that never fails; zero pivot columns are skipped.
    fn factor_raw(n: usize, mut a: Vec<f64>) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            if best == 0.0 {
                continue;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let factor = a[i * n + k] / pivot;
                a[i * n + k] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        a[i * n + j] -= factor * a[k * n + j];
                    }
                }
            }
        }
        Self {
            n,
            lu: a,
            perm,
            swaps,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn det(&self) -> f64 {
        let sign = if self.swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
        (0..self.n).map(|k| self.lu[k * self.n + k]).product::<f64>() * sign
    }

    /// Solves `A X = B` for a row-major `n × ncols` right-hand side.
    pub fn solve_columns(&self, rhs: &[f64], ncols: usize) -> Vec<f64> {
        let n = self.n;
        assert_eq!(rhs.len(), n * ncols);
        let mut x = vec![0.0; n * ncols];
        for (i, &p) in self.perm.iter().enumerate() {
            x[i * ncols..(i + 1) * ncols].copy_from_slice(&rhs[p * ncols..(p + 1) * ncols]);
        }
        // forward: L has unit diagonal
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[i * n + k];
                if l != 0.0 {
                    for c in 0..ncols {
                        x[i * ncols + c] -= l * x[k * ncols + c];
                    }
                }
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[i * n + k];
                if u != 0.0 {
                    for c in 0..ncols {
                        x[i * ncols + c] -= u * x[k * ncols + c];
                    }
                }
            }
            let d = self.lu[i * n + i];
            for c in 0..ncols {
                x[i * ncols + c] /= d;
            }
        }
        x
    }
}

/// Solves `a X = b` by pivoted LU.
pub fn solve_linear(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    if a.dim != b.dim {
        return Err(Error::Dimension(format!(
            "cannot solve {0}x{0} system with {1}x{1} right-hand side",
            a.dim, b.dim
        )));
    }
    let lu = Lu::factor(a)?;
    let x = lu.solve_columns(&b.data, b.dim);
    SquareMatrix::from_row_major(a.dim, x)
}

/// A matrix validated as skew-symmetric, `S^T = -S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix(SquareMatrix);

impl SkewMatrix {
    /// Validates with the default relative tolerance [`SKEW_TOL`].
    pub fn new(a: SquareMatrix) -> Result<Self> {
        assert_skew(a, SKEW_TOL)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(SquareMatrix::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.0
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0.scale(k))
    }
}

/// Accepts `a` when `||a + a^T||_inf <= tol * max(1, ||a||_inf)`.
///
/// The row-sum norm of `a + a^T` counts each diagonal entry twice, so the
/// same bound also caps `|a_ii|`.
pub fn assert_skew(a: SquareMatrix, tol: f64) -> Result<SkewMatrix> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "skewness tolerance must be positive, got {tol}"
        )));
    }
    let defect = (&a + &a.transpose()).inf_norm();
    let bound = tol * a.inf_norm().max(1.0);
    if defect > bound {
        return Err(Error::Skewness { defect, bound });
    }
    Ok(SkewMatrix(a))
}

/// Body angular rate in radians per second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularRate(pub [f64; 3]);

impl AngularRate {
    pub fn new(wx: f64, wy: f64, wz: f64) -> Result<Self> {
        let w = [wx, wy, wz];
        if let Some(i) = w.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(Self(w))
    }

    pub fn zero() -> Self {
        Self([0.0; 3])
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }
}

/// The cross-product matrix: `hat(w) x = w × x`.
pub fn hat(omega: AngularRate) -> SkewMatrix {
    let [w1, w2, w3] = omega.0;
    SkewMatrix(SquareMatrix {
        dim: 3,
        data: vec![0.0, -w3, w2, w3, 0.0, -w1, -w2, w1, 0.0],
    })
}

/// Inverse of [`hat`] on 3×3 skew matrices.
pub fn vee(s: &SkewMatrix) -> Result<AngularRate> {
    if s.dim() != 3 {
        return Err(Error::Dimension(format!(
            "vee needs a 3x3 matrix, got {0}x{0}",
            s.dim()
        )));
    }
    let m = &s.0;
    Ok(AngularRate([m[(2, 1)], m[(0, 2)], m[(1, 0)]]))
}

/// Velocity of a body-fixed point: `w × x`, evaluated as `hat(w) x`.
pub fn apply_velocity(omega: AngularRate, x: [f64; 3]) -> [f64; 3] {
    let s = hat(omega);
    let m = s.as_matrix();
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..3).map(|j| m[(i, j)] * x[j]).sum();
    }
    out
}

/// Solution matrix `Q` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalState {
    pub q: SquareMatrix,
    pub t: f64,
}

impl OrthogonalState {
    pub fn new(q: SquareMatrix, t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
        }
        Ok(Self { q, t })
    }

    pub fn identity(dim: usize, t: f64) -> Self {
        Self {
            q: SquareMatrix::identity(dim),
            t,
        }
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// Fails unless `||Q^T Q - I||_F <= tol`.
    pub fn ensure_orthogonal(&self, tol: f64) -> Result<()> {
        let defect = (&self.q.gram() - &SquareMatrix::identity(self.dim())).frobenius_norm();
        if defect > tol {
            return Err(Error::NonOrthogonal { defect, tol });
        }
        Ok(())
    }
}

/// Exact flow `exp(tS)`.
///
/// 3×3 inputs use the closed-form rotation expansion; other sizes use
/// scaling and squaring of a Taylor series.
pub fn expm(s: &SkewMatrix, t: f64) -> SquareMatrix {
    if s.dim() == 3 {
        expm_rotation(s, t)
    } else {
        expm_taylor(&s.0.scale(t))
    }
}

fn expm_rotation(s: &SkewMatrix, t: f64) -> SquareMatrix {
    // vee is exact on the stored entries; symmetric rounding noise is ignored
    let m = &s.0;
    let w = [
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    ];
    let rate = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    let theta = (t * rate).abs();
    let id = SquareMatrix::identity(3);
    if theta < 1e-4 {
        let ts = hat(AngularRate([t * w[0], t * w[1], t * w[2]])).0;
        let ts2 = &ts * &ts;
        let th2 = theta * theta;
        let a = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
        let b = 0.5 - th2 / 24.0 + th2 * th2 / 720.0;
        return id.add_scaled(a, &ts).add_scaled(b, &ts2);
    }
    // unit axis form: I + sin(phi) K + (1 - cos(phi)) K^2, phi = t |w|
    let k = hat(AngularRate([w[0] / rate, w[1] / rate, w[2] / rate])).0;
    let k2 = &k * &k;
    let phi = t * rate;
    let one_minus_cos = 2.0 * (0.5 * phi).sin().powi(2);
    id.add_scaled(phi.sin(), &k).add_scaled(one_minus_cos, &k2)
}

fn expm_taylor(a: &SquareMatrix) -> SquareMatrix {
    let n = a.dim();
    let norm = a.one_norm();
    let mut squarings = 0;
    // each squaring roughly doubles the rounding error, so keep them few;
    // the series is still well conditioned for scaled norms up to 1
    if norm > 1.0 {
        squarings = norm.log2().ceil() as i32;
    }
    let scaled = a.scale(0.5f64.powi(squarings));
    let mut sum = SquareMatrix::identity(n);
    let mut term = SquareMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &scaled).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.frobenius_norm() <= 1e-18 * sum.frobenius_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn test_matrix() -> SquareMatrix {
        SquareMatrix::from_rows(&[[0.0, 2.0, -0.1], [-2.0, 0.0, 0.0], [0.1, 0.0, 0.0]]).unwrap()
    }

    fn assert_close(a: &SquareMatrix, b: &SquareMatrix, tol: f64) {
        let d = (a - b).frobenius_norm();
        assert!(d <= tol, "difference {d:e} > {tol:e}\n{a:?}\n{b:?}");
    }

    /// Plain power series, summed far past convergence for small arguments.
    fn series_oracle(a: &SquareMatrix) -> SquareMatrix {
        let mut sum = SquareMatrix::identity(a.dim());
        let mut term = SquareMatrix::identity(a.dim());
        for k in 1..60 {
            term = (&term * a).scale(1.0 / k as f64);
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn hat_of_test_rate_is_test_matrix() {
        let s = hat(AngularRate([0.0, -0.1, -2.0]));
        assert_eq!(s.as_matrix(), &test_matrix());
    }

    #[test]
    fn hat_examples() {
        assert_eq!(hat(AngularRate::zero()).as_matrix(), &SquareMatrix::zeros(3));
        let expected =
            SquareMatrix::from_rows(&[[0.0, -3.0, 2.0], [3.0, 0.0, -1.0], [-2.0, 1.0, 0.0]])
                .unwrap();
        assert_eq!(hat(AngularRate([1.0, 2.0, 3.0])).as_matrix(), &expected);
    }

    #[test]
    fn vee_examples() {
        assert_eq!(vee(&hat(AngularRate([1.0, 2.0, 3.0]))).unwrap().0, [1.0, 2.0, 3.0]);
        assert_eq!(vee(&SkewMatrix::zeros(3)).unwrap().0, [0.0; 3]);
        let s = SkewMatrix::new(test_matrix()).unwrap();
        assert_eq!(vee(&s).unwrap().0, [0.0, -0.1, -2.0]);
        assert!(matches!(vee(&SkewMatrix::zeros(2)), Err(Error::Dimension(_))));
    }

    #[test]
    fn assert_skew_examples() {
        let a = SquareMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        assert!(assert_skew(a, 1e-12).is_ok());
        let sym = SquareMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        match assert_skew(sym, 1e-12) {
            Err(Error::Skewness { defect, .. }) => assert_eq!(defect, 2.0),
            other => panic!("expected skewness error, got {other:?}"),
        }
        assert!(assert_skew(test_matrix(), 1e-12).is_ok());
        assert!(assert_skew(test_matrix(), 0.0).is_err());
    }

    #[test]
    fn assert_skew_rejects_diagonal() {
        let mut a = test_matrix();
        a[(1, 1)] = 1e-6;
        assert!(matches!(SkewMatrix::new(a), Err(Error::Skewness { .. })));
    }

    #[test]
    fn apply_velocity_examples() {
        assert_eq!(
            apply_velocity(AngularRate([0.0, 0.0, 1.0]), [1.0, 0.0, 0.0]),
            [0.0, 1.0, 0.0]
        );
        assert_eq!(apply_velocity(AngularRate::zero(), [4.0, -2.0, 7.0]), [0.0; 3]);
        assert_eq!(
            apply_velocity(AngularRate([1.0, 2.0, 3.0]), [4.0, 5.0, 6.0]),
            [-3.0, 6.0, -3.0]
        );
    }

    #[test]
    fn expm_zero_is_identity() {
        for dim in 1..5 {
            assert_eq!(expm(&SkewMatrix::zeros(dim), 3.7), SquareMatrix::identity(dim));
        }
    }

    #[test]
    fn expm_quarter_turn() {
        let s = hat(AngularRate([0.0, 0.0, 1.0]));
        let got = expm(&s, FRAC_PI_2);
        let expected =
            SquareMatrix::from_rows(&[[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
                .unwrap();
        assert_close(&got, &expected, 1e-15);
        assert_close(&got, &series_oracle(&s.as_matrix().scale(FRAC_PI_2)), 1e-14);
    }

    #[test]
    fn expm_test_step_matches_series() {
        let s = SkewMatrix::new(test_matrix()).unwrap();
        let got = expm(&s, 0.1);
        assert_close(&got, &series_oracle(&test_matrix().scale(0.1)), 1e-15);
        let defect = (&got.gram() - &SquareMatrix::identity(3)).frobenius_norm();
        assert!(defect <= 1e-14, "{defect:e}");
        assert!((got.det() - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn expm_small_angle_branch_matches_series() {
        let s = SkewMatrix::new(test_matrix()).unwrap();
        for t in [1e-9, 1e-6, 4e-5] {
            let got = expm(&s, t);
            assert_close(&got, &series_oracle(&test_matrix().scale(t)), 1e-16);
        }
    }

    #[test]
    fn expm_taylor_path_matches_series() {
        let a = SquareMatrix::from_rows(&[
            [0.0, 0.3, -0.2, 0.1],
            [-0.3, 0.0, 0.5, 0.0],
            [0.2, -0.5, 0.0, 0.4],
            [-0.1, 0.0, -0.4, 0.0],
        ])
        .unwrap();
        let s = SkewMatrix::new(a.clone()).unwrap();
        for t in [0.1, 1.0, 2.5] {
            assert_close(&expm(&s, t), &series_oracle(&a.scale(t)), 1e-14);
        }
    }

    #[test]
    fn solve_linear_examples() {
        let b = SquareMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(solve_linear(&SquareMatrix::identity(2), &b).unwrap(), b);
        let two = SquareMatrix::identity(3).scale(2.0);
        assert_eq!(
            solve_linear(&two, &SquareMatrix::identity(3)).unwrap(),
            SquareMatrix::identity(3).scale(0.5)
        );
        let a = SquareMatrix::from_rows(&[[1.0, -1.0], [1.0, 1.0]]).unwrap();
        let x = solve_linear(&a, &SquareMatrix::identity(2)).unwrap();
        let expected = SquareMatrix::from_rows(&[[0.5, 0.5], [-0.5, 0.5]]).unwrap();
        assert_close(&x, &expected, 1e-16);
    }

    #[test]
    fn solve_linear_singular() {
        let a = SquareMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve_linear(&a, &SquareMatrix::identity(2)),
            Err(Error::Singular { .. })
        ));
        assert!(matches!(
            solve_linear(&SquareMatrix::zeros(2), &SquareMatrix::identity(2)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn determinant() {
        let a = SquareMatrix::from_rows(&[[0.5, 1.0], [-1.0, 0.5]]).unwrap();
        assert_abs_diff_eq!(a.det(), 1.25, epsilon = 1e-15);
        let p = SquareMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(p.det(), -1.0);
        let sing = SquareMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert_eq!(sing.det(), 0.0);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(SquareMatrix::from_row_major(2, vec![1.0; 3]).is_err());
        assert!(SquareMatrix::from_row_major(0, vec![]).is_err());
        assert!(matches!(
            SquareMatrix::from_row_major(2, vec![1.0, f64::NAN, 0.0, 1.0]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn orthogonality_gate() {
        assert!(OrthogonalState::identity(3, 0.0).ensure_orthogonal(1e-8).is_ok());
        let q = OrthogonalState::new(SquareMatrix::identity(3).scale(1.01), 0.0).unwrap();
        assert!(matches!(q.ensure_orthogonal(1e-8), Err(Error::NonOrthogonal { .. })));
    }
}
