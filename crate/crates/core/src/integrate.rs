//! Time stepping for `Q' = S Q`.
//!
//! Three step paths exist: the general s-stage Runge-Kutta step driven by a
//! [`ButcherTableau`], the Cayley-transform form of the implicit midpoint
//! rule, and the closed-form polynomial of the explicit second-order method.
//! Every scheme is linear in `Q`, so each has a transfer matrix `Phi` with
//! `Q_{k+1} = Phi Q_k`.

use crate::diagnostics::{Meter, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{Lu, OrthogonalState, SkewMatrix, SquareMatrix};
use crate::tableau::{self, ButcherTableau};

/// Default fixed-point stage tolerance (relative to `max(1, ||Q||_F)`).
pub const FIXED_POINT_TOL: f64 = 1e-14;
pub const FIXED_POINT_MAX_ITERS: usize = 100;

/// Relative slack under which `duration / h` counts as a whole number of steps.
const WHOLE_STEPS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Tableau(ButcherTableau),
    /// `(I - h/2 S)^{-1} (I + h/2 S) Q`
    CayleyMidpoint,
    /// `(I + h S + h^2/2 S^2) Q`
    Rk2Closed,
}

impl Method {
    /// Resolves `cayley-midpoint`, `rk2-closed`, or any built-in tableau name.
    pub fn from_label(label: &str) -> Result<Self> {
        match label {
            "cayley-midpoint" => Ok(Self::CayleyMidpoint),
            "rk2-closed" => Ok(Self::Rk2Closed),
            name => tableau::builtin(name).map(Self::Tableau),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Tableau(t) => t.name().unwrap_or("custom-tableau").to_string(),
            Self::CayleyMidpoint => "cayley-midpoint".into(),
            Self::Rk2Closed => "rk2-closed".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StageSolver {
    /// One factorization of `I - h A (x) S` per step.
    Direct,
    FixedPoint { tol: f64, max_iters: usize },
}

impl StageSolver {
    pub fn fixed_point() -> Self {
        Self::FixedPoint {
            tol: FIXED_POINT_TOL,
            max_iters: FIXED_POINT_MAX_ITERS,
        }
    }

    fn check(&self) -> Result<()> {
        match *self {
            Self::FixedPoint { tol, max_iters } if !(tol > 0.0) || max_iters == 0 => {
                Err(Error::InvalidArgument(format!(
                    "fixed-point solver needs tol > 0 and max_iters >= 1 (got {tol}, {max_iters})"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// How a tableau's stage equations get solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StagePath {
    ForwardSubstitution,
    DirectSolve,
    FixedPoint,
}

/// Explicit tableaux always take forward substitution, whatever solver is
/// configured.
pub fn stage_path(t: &ButcherTableau, solver: &StageSolver) -> StagePath {
    if t.is_explicit() {
        StagePath::ForwardSubstitution
    } else {
        match solver {
            StageSolver::Direct => StagePath::DirectSolve,
            StageSolver::FixedPoint { .. } => StagePath::FixedPoint,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub step: f64,
    pub stage_solver: StageSolver,
}

impl IntegratorConfig {
    pub fn new(method: Method, step: f64) -> Result<Self> {
        Self::with_solver(method, step, StageSolver::Direct)
    }

    pub fn with_solver(method: Method, step: f64, stage_solver: StageSolver) -> Result<Self> {
        check_step(step)?;
        stage_solver.check()?;
        if let Method::Tableau(t) = &method {
            t.validate()?;
        }
        Ok(Self {
            method,
            step,
            stage_solver,
        })
    }
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("step must be positive and finite, got {h}")))
    }
}

fn check_dims(s: &SkewMatrix, q: &SquareMatrix) -> Result<()> {
    if s.dim() != q.dim() {
        return Err(Error::Dimension(format!(
            "coefficient is {0}x{0} but state is {1}x{1}",
            s.dim(),
            q.dim()
        )));
    }
    Ok(())
}

/// One s-stage Runge-Kutta step:
/// `Y_i = Q + h sum_j a_ij S Y_j`, `Q_next = Q + h sum_i b_i S Y_i`.
pub fn rk_step(
    t: &ButcherTableau,
    s: &SkewMatrix,
    q: &OrthogonalState,
    h: f64,
    solver: &StageSolver,
) -> Result<OrthogonalState> {
    check_step(h)?;
    check_dims(s, &q.q)?;
    solver.check()?;
    Ok(OrthogonalState {
        q: rk_apply(t, s, &q.q, h, solver)?,
        t: q.t + h,
    })
}

fn rk_apply(
    t: &ButcherTableau,
    s: &SkewMatrix,
    q: &SquareMatrix,
    h: f64,
    solver: &StageSolver,
) -> Result<SquareMatrix> {
    let sm = s.as_matrix();
    let stages = match stage_path(t, solver) {
        StagePath::ForwardSubstitution => explicit_stages(t, sm, q, h),
        StagePath::DirectSolve => direct_stages(t, sm, q, h)?,
        StagePath::FixedPoint => {
            let StageSolver::FixedPoint { tol, max_iters } = *solver else {
                unreachable!()
            };
            fixed_point_stages(t, sm, q, h, tol, max_iters)?
        }
    };
    let mut next = q.clone();
    for (y, &b) in stages.iter().zip(t.b()) {
        if b != 0.0 {
            next = next.add_scaled(h * b, &(sm * y));
        }
    }
    Ok(next)
}

fn explicit_stages(t: &ButcherTableau, s: &SquareMatrix, q: &SquareMatrix, h: f64) -> Vec<SquareMatrix> {
    let mut slopes: Vec<SquareMatrix> = Vec::with_capacity(t.stages());
    let mut stages = Vec::with_capacity(t.stages());
    for i in 0..t.stages() {
        let mut y = q.clone();
        for (j, k) in slopes.iter().enumerate() {
            let a = t.a(i, j);
            if a != 0.0 {
                y = y.add_scaled(h * a, k);
            }
        }
        slopes.push(s * &y);
        stages.push(y);
    }
    stages
}

/// Solves `(I - h A (x) S) Y = 1 (x) Q` for all stages at once; the
/// factorization is shared by every column of `Q`.
fn direct_stages(t: &ButcherTableau, s: &SquareMatrix, q: &SquareMatrix, h: f64) -> Result<Vec<SquareMatrix>> {
    let m = q.dim();
    let st = t.stages();
    let n = st * m;
    let mut k = vec![0.0; n * n];
    for i in 0..st {
        for j in 0..st {
            let a = t.a(i, j);
            for r in 0..m {
                for c in 0..m {
                    let mut v = -h * a * s[(r, c)];
                    if i == j && r == c {
                        v += 1.0;
                    }
                    k[(i * m + r) * n + j * m + c] = v;
                }
            }
        }
    }
    let lu = Lu::factor_row_major(n, k).map_err(|e| Error::StageSolve(Box::new(e)))?;
    let rhs: Vec<f64> = (0..st).flat_map(|_| q.as_slice().iter().copied()).collect();
    let y = lu.solve_columns(&rhs, m);
    (0..st)
        .map(|i| SquareMatrix::from_row_major(m, y[i * m * m..(i + 1) * m * m].to_vec()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::StageSolve(Box::new(e)))
}

fn fixed_point_stages(
    t: &ButcherTableau,
    s: &SquareMatrix,
    q: &SquareMatrix,
    h: f64,
    tol: f64,
    max_iters: usize,
) -> Result<Vec<SquareMatrix>> {
    let st = t.stages();
    let scale = q.frobenius_norm().max(1.0);
    let mut stages = vec![q.clone(); st];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iters {
        let slopes: Vec<SquareMatrix> = stages.iter().map(|y| s * y).collect();
        let next: Vec<SquareMatrix> = (0..st)
            .map(|i| {
                slopes.iter().enumerate().fold(q.clone(), |acc, (j, k)| {
                    let a = t.a(i, j);
                    if a == 0.0 {
                        acc
                    } else {
                        acc.add_scaled(h * a, k)
                    }
                })
            })
            .collect();
        residual = next
            .iter()
            .zip(&stages)
            .map(|(a, b)| (a - b).frobenius_norm())
            .fold(0.0, f64::max)
            / scale;
        stages = next;
        if !residual.is_finite() {
            break;
        }
        if residual <= tol {
            return Ok(stages);
        }
    }
    Err(Error::Convergence {
        iterations: max_iters,
        residual,
    })
}

/// Implicit midpoint in Cayley form, evaluated with a linear solve.
pub fn cayley_step(s: &SkewMatrix, q: &OrthogonalState, h: f64) -> Result<OrthogonalState> {
    check_step(h)?;
    check_dims(s, &q.q)?;
    Ok(OrthogonalState {
        q: cayley_apply(s, &q.q, h)?,
        t: q.t + h,
    })
}

fn cayley_apply(s: &SkewMatrix, q: &SquareMatrix, h: f64) -> Result<SquareMatrix> {
    let id = SquareMatrix::identity(q.dim());
    let sm = s.as_matrix();
    let lhs = id.add_scaled(-0.5 * h, sm);
    let rhs = q.add_scaled(0.5 * h, &(sm * q));
    let lu = Lu::factor(&lhs).map_err(|e| Error::StageSolve(Box::new(e)))?;
    SquareMatrix::from_row_major(q.dim(), lu.solve_columns(rhs.as_slice(), q.dim()))
}

/// Explicit second-order step in closed form.
pub fn rk2_closed_step(s: &SkewMatrix, q: &OrthogonalState, h: f64) -> Result<OrthogonalState> {
    check_step(h)?;
    check_dims(s, &q.q)?;
    Ok(OrthogonalState {
        q: rk2_apply(s, &q.q, h),
        t: q.t + h,
    })
}

fn rk2_apply(s: &SkewMatrix, q: &SquareMatrix, h: f64) -> SquareMatrix {
    let sm = s.as_matrix();
    let sq = sm * q;
    let ssq = sm * &sq;
    q.add_scaled(h, &sq).add_scaled(0.5 * h * h, &ssq)
}

/// Applies one step of `method` to a bare matrix. `h` may be negative
/// (used for adjoint checks).
fn apply(method: &Method, s: &SkewMatrix, q: &SquareMatrix, h: f64, solver: &StageSolver) -> Result<SquareMatrix> {
    match method {
        Method::Tableau(t) => rk_apply(t, s, q, h, solver),
        Method::CayleyMidpoint => cayley_apply(s, q, h),
        Method::Rk2Closed => Ok(rk2_apply(s, q, h)),
    }
}

/// One step of any method.
pub fn step(config: &IntegratorConfig, s: &SkewMatrix, q: &OrthogonalState, h: f64) -> Result<OrthogonalState> {
    check_step(h)?;
    check_dims(s, &q.q)?;
    Ok(OrthogonalState {
        q: apply(&config.method, s, &q.q, h, &config.stage_solver)?,
        t: q.t + h,
    })
}

/// `Phi` such that one step maps `Q` to `Phi Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub phi: SquareMatrix,
    pub method: String,
    pub step: f64,
}

/// Extracts `Phi` by stepping the identity.
pub fn transfer_matrix(method: &Method, s: &SkewMatrix, h: f64) -> Result<TransferMatrix> {
    check_step(h)?;
    Ok(TransferMatrix {
        phi: signed_transfer(method, s, h)?,
        method: method.label(),
        step: h,
    })
}

fn signed_transfer(method: &Method, s: &SkewMatrix, h: f64) -> Result<SquareMatrix> {
    apply(method, s, &SquareMatrix::identity(s.dim()), h, &StageSolver::Direct)
}

/// `||Phi(h) Phi(-h) - I||_F`, zero for symmetric methods.
pub fn adjoint_defect(method: &Method, s: &SkewMatrix, h: f64) -> Result<f64> {
    check_step(h)?;
    let forward = signed_transfer(method, s, h)?;
    let backward = signed_transfer(method, s, -h)?;
    Ok((&(&forward * &backward) - &SquareMatrix::identity(s.dim())).frobenius_norm())
}

/// Step schedule covering `[start, end]` with fixed `h`; the last step is
/// shortened when the interval is not a whole number of steps.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Schedule {
    start: f64,
    end: f64,
    h: f64,
    pub(crate) steps: usize,
    last: f64,
}

impl Schedule {
    pub(crate) fn new(start: f64, end: f64, h: f64) -> Self {
        let ratio = (end - start) / h;
        let whole = ratio.round();
        let (steps, last) = if whole >= 1.0 && (ratio - whole).abs() <= WHOLE_STEPS_TOL * whole {
            (whole as usize, h)
        } else {
            let n = ratio.ceil().max(1.0) as usize;
            (n, (end - start) - (n - 1) as f64 * h)
        };
        Self {
            start,
            end,
            h,
            steps,
            last,
        }
    }

    /// Length of step `k` (1-based).
    pub(crate) fn step_len(&self, k: usize) -> f64 {
        if k == self.steps {
            self.last
        } else {
            self.h
        }
    }

    /// Time after step `k`, recomputed from the index.
    pub(crate) fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.end
        } else {
            self.start + k as f64 * self.h
        }
    }
}

/// Advances `q` across one schedule, calling `record` after every step `k`
/// with `k % every == 0` except the last (callers record the endpoint).
pub(crate) fn run_schedule(
    config: &IntegratorConfig,
    s: &SkewMatrix,
    q: &mut SquareMatrix,
    schedule: &Schedule,
    every: Option<usize>,
    mut record: impl FnMut(f64, &SquareMatrix),
) -> Result<()> {
    for k in 1..=schedule.steps {
        *q = apply(&config.method, s, q, schedule.step_len(k), &config.stage_solver)?;
        if k < schedule.steps && every.is_some_and(|e| k % e == 0) {
            record(schedule.time(k), q);
        }
    }
    Ok(())
}

/// Fixed-step integration from `q0.t` to `t_end`, recording the initial
/// state, every `record_every`-th step, and the final state.
pub fn propagate(
    config: &IntegratorConfig,
    s: &SkewMatrix,
    q0: &OrthogonalState,
    t_end: f64,
    record_every: usize,
) -> Result<Trajectory> {
    check_dims(s, &q0.q)?;
    if !(t_end > q0.t) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "t_end ({t_end}) must be finite and after the start time ({})",
            q0.t
        )));
    }
    if record_every == 0 {
        return Err(Error::InvalidArgument("record_every must be at least 1".into()));
    }
    let meter = Meter::new(&q0.q);
    let mut traj = Trajectory::new(config.method.label(), config.step);
    traj.push(meter.record(q0.t, &q0.q));
    let schedule = Schedule::new(q0.t, t_end, config.step);
    let mut q = q0.q.clone();
    run_schedule(config, s, &mut q, &schedule, Some(record_every), |t, q| {
        traj.push(meter.record(t, q))
    })?;
    traj.push(meter.record(t_end, &q));
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hat, AngularRate};
    use approx::assert_abs_diff_eq;

    fn quarter() -> SkewMatrix {
        SkewMatrix::new(SquareMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap()).unwrap()
    }

    fn test_s() -> SkewMatrix {
        hat(AngularRate([0.0, -0.1, -2.0]))
    }

    fn assert_close(a: &SquareMatrix, b: &SquareMatrix, tol: f64) {
        let d = (a - b).frobenius_norm();
        assert!(d <= tol, "difference {d:e} > {tol:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn zero_field_leaves_state() {
        let q = OrthogonalState::new(
            SquareMatrix::from_rows(&[[1.0, 2.0, 0.0], [0.0, 1.0, 3.0], [4.0, 0.0, 1.0]]).unwrap(),
            1.5,
        )
        .unwrap();
        let s = SkewMatrix::zeros(3);
        for name in tableau::BUILTIN_NAMES {
            let t = tableau::builtin(name).unwrap();
            let next = rk_step(&t, &s, &q, 0.25, &StageSolver::Direct).unwrap();
            assert_eq!(next.q, q.q);
            assert_eq!(next.t, 1.75);
        }
        assert_eq!(cayley_step(&s, &q, 0.25).unwrap().q, q.q);
        assert_eq!(rk2_closed_step(&s, &q, 0.25).unwrap().q, q.q);
    }

    #[test]
    fn midpoint_quarter_turn() {
        let t = tableau::builtin("midpoint").unwrap();
        let q = OrthogonalState::identity(2, 0.0);
        let expected = quarter().into_matrix();
        let rk = rk_step(&t, &quarter(), &q, 2.0, &StageSolver::Direct).unwrap();
        assert_close(&rk.q, &expected, 1e-15);
        let cay = cayley_step(&quarter(), &q, 2.0).unwrap();
        assert_close(&cay.q, &expected, 1e-15);
    }

    #[test]
    fn rk2_closed_quarter_case() {
        let q = OrthogonalState::identity(2, 0.0);
        let got = rk2_closed_step(&quarter(), &q, 1.0).unwrap();
        let expected = SquareMatrix::from_rows(&[[0.5, 1.0], [-1.0, 0.5]]).unwrap();
        assert_eq!(got.q, expected);
    }

    #[test]
    fn rk2_tableau_matches_closed_form() {
        let t = tableau::builtin("rk2-explicit").unwrap();
        let q = OrthogonalState::identity(3, 0.0);
        let a = rk_step(&t, &test_s(), &q, 0.1, &StageSolver::Direct).unwrap();
        let b = rk2_closed_step(&test_s(), &q, 0.1).unwrap();
        assert_close(&a.q, &b.q, 1e-15);
    }

    #[test]
    fn rk2_single_step_energy() {
        let q = OrthogonalState::identity(3, 0.0);
        let next = rk2_closed_step(&test_s(), &q, 0.1).unwrap();
        let energy = next.q.frobenius_norm().powi(2);
        assert_abs_diff_eq!(energy, 3.000804005, epsilon = 1e-12);
    }

    #[test]
    fn cayley_test_step_is_orthogonal() {
        let q = OrthogonalState::identity(3, 0.0);
        let next = cayley_step(&test_s(), &q, 0.1).unwrap();
        let defect = (&next.q.gram() - &SquareMatrix::identity(3)).frobenius_norm();
        assert!(defect <= 1e-14, "{defect:e}");
    }

    #[test]
    fn transfer_examples() {
        let c = transfer_matrix(&Method::CayleyMidpoint, &quarter(), 2.0).unwrap();
        assert_close(&c.phi, quarter().as_matrix(), 1e-15);
        let r = transfer_matrix(&Method::Rk2Closed, &quarter(), 1.0).unwrap();
        assert_eq!(r.phi, SquareMatrix::from_rows(&[[0.5, 1.0], [-1.0, 0.5]]).unwrap());
        assert_abs_diff_eq!(r.phi.det(), 1.25, epsilon = 1e-15);
        for label in ["cayley-midpoint", "rk2-closed", "gauss2", "rk4-classical"] {
            let m = Method::from_label(label).unwrap();
            let phi = transfer_matrix(&m, &SkewMatrix::zeros(4), 0.3).unwrap();
            assert_eq!(phi.phi, SquareMatrix::identity(4));
        }
    }

    #[test]
    fn adjoint_examples() {
        let d = adjoint_defect(&Method::CayleyMidpoint, &test_s(), 0.1).unwrap();
        assert!(d <= 1e-14, "{d:e}");
        let r = adjoint_defect(&Method::Rk2Closed, &quarter(), 1.0).unwrap();
        assert_abs_diff_eq!(r, 2f64.sqrt() / 4.0, epsilon = 1e-15);
        assert_eq!(adjoint_defect(&Method::Rk2Closed, &SkewMatrix::zeros(3), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn explicit_tableau_skips_stage_solver() {
        let t = tableau::builtin("rk4-classical").unwrap();
        assert_eq!(stage_path(&t, &StageSolver::Direct), StagePath::ForwardSubstitution);
        // a single fixed-point sweep can never meet the tolerance on a
        // non-trivial field, so success shows the iteration was bypassed
        let one_sweep = StageSolver::FixedPoint { tol: 1e-14, max_iters: 1 };
        assert_eq!(stage_path(&t, &one_sweep), StagePath::ForwardSubstitution);
        let q = OrthogonalState::identity(3, 0.0);
        assert!(rk_step(&t, &test_s(), &q, 0.1, &one_sweep).is_ok());

        let g = tableau::builtin("gauss2").unwrap();
        assert_eq!(stage_path(&g, &one_sweep), StagePath::FixedPoint);
        assert!(matches!(
            rk_step(&g, &test_s(), &q, 0.1, &one_sweep),
            Err(Error::Convergence { iterations: 1, .. })
        ));
    }

    #[test]
    fn fixed_point_agrees_with_direct() {
        let q = OrthogonalState::identity(3, 0.0);
        for name in ["midpoint", "gauss2"] {
            let t = tableau::builtin(name).unwrap();
            let a = rk_step(&t, &test_s(), &q, 0.1, &StageSolver::Direct).unwrap();
            let b = rk_step(&t, &test_s(), &q, 0.1, &StageSolver::fixed_point()).unwrap();
            assert_close(&a.q, &b.q, 1e-12);
        }
    }

    #[test]
    fn fixed_point_diverges_for_large_steps() {
        let t = tableau::builtin("midpoint").unwrap();
        let q = OrthogonalState::identity(3, 0.0);
        let err = rk_step(&t, &test_s(), &q, 5.0, &StageSolver::fixed_point()).unwrap_err();
        assert!(matches!(err, Error::Convergence { iterations: 100, .. }), "{err:?}");
    }

    #[test]
    fn corrupted_coefficient_reports_stage_failure() {
        // I - h/2 S is singular when S = (2/h) I; such S only passes the
        // skew gate with a huge tolerance
        let bad = crate::linalg::assert_skew(SquareMatrix::identity(2).scale(20.0), 1e3).unwrap();
        let q = OrthogonalState::identity(2, 0.0);
        assert!(matches!(cayley_step(&bad, &q, 0.1), Err(Error::StageSolve(_))));
        let t = tableau::builtin("midpoint").unwrap();
        assert!(matches!(
            rk_step(&t, &bad, &q, 0.1, &StageSolver::Direct),
            Err(Error::StageSolve(_))
        ));
    }

    #[test]
    fn rejects_bad_arguments() {
        let q = OrthogonalState::identity(3, 0.0);
        assert!(cayley_step(&test_s(), &q, 0.0).is_err());
        assert!(rk2_closed_step(&test_s(), &q, -0.1).is_err());
        assert!(cayley_step(&quarter(), &q, 0.1).is_err());
        assert!(IntegratorConfig::new(Method::CayleyMidpoint, f64::NAN).is_err());
        assert!(IntegratorConfig::with_solver(
            Method::CayleyMidpoint,
            0.1,
            StageSolver::FixedPoint { tol: 0.0, max_iters: 3 }
        )
        .is_err());
        assert!(matches!(Method::from_label("euler"), Err(Error::UnknownMethod(_))));
        let cfg = IntegratorConfig::new(Method::CayleyMidpoint, 0.1).unwrap();
        assert!(propagate(&cfg, &test_s(), &q, 0.0, 1).is_err());
        assert!(propagate(&cfg, &test_s(), &q, 1.0, 0).is_err());
    }

    #[test]
    fn schedule_shrinks_last_step() {
        let s = Schedule::new(0.0, 1.05, 0.1);
        assert_eq!(s.steps, 11);
        assert_abs_diff_eq!(s.step_len(11), 0.05, epsilon = 1e-12);
        assert_eq!(s.time(11), 1.05);
        assert_eq!(s.time(3), 0.30000000000000004);

        let whole = Schedule::new(0.0, 2000.0, 0.1);
        assert_eq!(whole.steps, 20000);
        assert_eq!(whole.step_len(20000), 0.1);

        let short = Schedule::new(0.0, 0.01, 0.1);
        assert_eq!(short.steps, 1);
        assert_abs_diff_eq!(short.step_len(1), 0.01, epsilon = 1e-18);
    }

    #[test]
    fn propagate_records() {
        let cfg = IntegratorConfig::new(Method::CayleyMidpoint, 0.1).unwrap();
        let q0 = OrthogonalState::identity(3, 0.0);
        let traj = propagate(&cfg, &test_s(), &q0, 1.05, 4).unwrap();
        let times: Vec<f64> = traj.records.iter().map(|r| r.t).collect();
        assert_eq!(times, vec![0.0, 0.4, 0.8, 1.05]);

        let zero = propagate(&cfg, &SkewMatrix::zeros(3), &q0, 7.3, 5).unwrap();
        assert!(zero.records.iter().all(|r| r.q.as_ref() == Some(&q0.q)));
        assert!(zero.records.iter().all(|r| r.energy_err == 0.0));
    }
}
