//! Invariant meters and analysis oracles.
//!
//! The flow of `Q' = S Q` with skew `S` keeps the Gram matrix `Q^T Q`, and
//! with it the generalized energy `trace(Q^T Q)`, as well as `det Q`. For a
//! linear update `Q -> Phi Q` the two-form `dQ ^ S dQ` is kept exactly when
//! `Phi^T S Phi = S`. The meters below measure each of these.

use crate::error::{Error, Result};
use crate::integrate::{propagate, IntegratorConfig, Method, TransferMatrix};
use crate::linalg::{expm, OrthogonalState, SkewMatrix, SquareMatrix};

/// Global errors at or below this make an order fit meaningless.
pub const ORDER_ERROR_FLOOR: f64 = 1e-14;

/// Generalized energy `trace(Q^T Q)`, the sum of squared entries.
pub fn energy(q: &SquareMatrix) -> f64 {
    q.as_slice().iter().map(|x| x * x).sum()
}

/// `||Q^T Q - I||_F`
pub fn orthogonality_defect(q: &SquareMatrix) -> f64 {
    (&q.gram() - &SquareMatrix::identity(q.dim())).frobenius_norm()
}

pub fn det_drift(q: &SquareMatrix, det0: f64) -> f64 {
    q.det() - det0
}

/// `||Phi^T S Phi - S||_F`
pub fn pseudo_symplectic_defect(phi: &TransferMatrix, s: &SkewMatrix) -> f64 {
    let p = &phi.phi;
    let sm = s.as_matrix();
    (&(&(&p.transpose() * sm) * p) - sm).frobenius_norm()
}

/// Predicted energy of the explicit second-order method after `k` steps
/// from `Q_0 = I`, for an `m × m` skew coefficient with a single rotation
/// plane of squared rate `theta_sq`.
///
/// One step has `Phi^T Phi = I + (h^4 / 4) S^4`, and `S^4` has eigenvalue
/// `theta^4` twice and zero elsewhere.
pub fn rk2_energy_forecast(theta_sq: f64, h: f64, k: u32, m: usize) -> f64 {
    let growth = 1.0 + h.powi(4) * theta_sq * theta_sq / 4.0;
    (m as f64 - 2.0) + 2.0 * growth.powf(k as f64)
}

/// One sample along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub energy: f64,
    /// `energy - energy` of the first record.
    pub energy_err: f64,
    pub orth_defect: f64,
    pub det_drift: f64,
    pub q: Option<SquareMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub method: String,
    pub step: f64,
    pub records: Vec<StepRecord>,
}

impl Trajectory {
    pub fn new(method: impl Into<String>, step: f64) -> Self {
        Self {
            method: method.into(),
            step,
            records: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, record: StepRecord) {
        debug_assert!(self.records.last().is_none_or(|r| r.t < record.t));
        self.records.push(record);
    }

    pub fn last(&self) -> Option<&StepRecord> {
        self.records.last()
    }

    pub fn max_abs_energy_err(&self) -> f64 {
        self.records.iter().map(|r| r.energy_err.abs()).fold(0.0, f64::max)
    }

    pub fn max_orth_defect(&self) -> f64 {
        self.records.iter().map(|r| r.orth_defect).fold(0.0, f64::max)
    }

    pub fn max_abs_det_drift(&self) -> f64 {
        self.records.iter().map(|r| r.det_drift.abs()).fold(0.0, f64::max)
    }
}

/// Baseline energy and determinant taken from the initial state.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Meter {
    energy0: f64,
    det0: f64,
}

impl Meter {
    pub(crate) fn new(q0: &SquareMatrix) -> Self {
        Self {
            energy0: energy(q0),
            det0: q0.det(),
        }
    }

    pub(crate) fn record(&self, t: f64, q: &SquareMatrix) -> StepRecord {
        let e = energy(q);
        StepRecord {
            t,
            energy: e,
            energy_err: e - self.energy0,
            orth_defect: orthogonality_defect(q),
            det_drift: det_drift(q, self.det0),
            q: Some(q.clone()),
        }
    }
}

/// Least-squares slope of `log(error)` against `log(h)`, where the error is
/// the Frobenius distance at `t_end` to `exp((t_end - t0) S) Q_0`.
pub fn convergence_order(
    method: &Method,
    s: &SkewMatrix,
    q0: &OrthogonalState,
    t_end: f64,
    steps: &[f64],
) -> Result<f64> {
    if steps.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 step sizes, got {}",
            steps.len()
        )));
    }
    let exact = &expm(s, t_end - q0.t) * &q0.q;
    let mut points = Vec::with_capacity(steps.len());
    for &h in steps {
        let cfg = IntegratorConfig::new(method.clone(), h)?;
        let traj = propagate(&cfg, s, q0, t_end, usize::MAX)?;
        let last = traj.last().and_then(|r| r.q.as_ref()).expect("final record");
        points.push((h, (last - &exact).frobenius_norm()));
    }
    if points.iter().all(|&(_, e)| e <= ORDER_ERROR_FLOOR) {
        return Err(Error::IndeterminateOrder {
            floor: ORDER_ERROR_FLOOR,
        });
    }
    if points.iter().any(|&(_, e)| e <= 0.0) {
        return Err(Error::IndeterminateOrder {
            floor: ORDER_ERROR_FLOOR,
        });
    }
    Ok(log_log_slope(&points))
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
