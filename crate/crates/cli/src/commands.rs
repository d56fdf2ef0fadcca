use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use skewflow_core::diagnostics::rk2_energy_forecast;
use skewflow_core::integrate::propagate as run_propagate;
use skewflow_core::linalg::hat;
use skewflow_core::navkit::{parse_gyro_csv, propagate_gyro, reference_gyro, INITIAL_ORTHO_TOL};
use skewflow_core::tableau::{self, parse_tableau, symplecticity, TableauKind};
use skewflow_core::{
    AngularRate, ButcherTableau, Error as CoreError, IntegratorConfig, Method, OrthogonalState,
    SkewMatrix, SquareMatrix, StageSolver, Trajectory,
};

use crate::output::{matrix_dump, matrix_text, num, trajectory_csv, write_with_manifest, RunManifest};
use crate::{CheckTableauArgs, CliError, ExperimentArgs, GyroArgs, PropagateArgs, SolverArg};

type CmdResult = Result<String, CliError>;

/// Fixed parameters of the reference experiment.
pub mod experiment {
    /// Body rate whose hat matrix is [[0, 2, -0.1], [-2, 0, 0], [0.1, 0, 0]].
    pub const OMEGA: [f64; 3] = [0.0, -0.1, -2.0];
    pub const STEP: f64 = 0.1;
    pub const T_END: f64 = 2000.0;
    pub const MIDPOINT_ENERGY_TOL: f64 = 1e-8;
    pub const MIDPOINT_ORTHO_TOL: f64 = 1e-9;
    pub const RK2_FORECAST_REL_TOL: f64 = 5e-3;
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(path.display(), e))
}

fn write_out(path: &Path, contents: &str, manifest: &RunManifest) -> Result<(), CliError> {
    write_with_manifest(path, contents, manifest)
        .map_err(|e| CliError::input(format!("cannot write {}", path.display()), e))
}

fn tableau_from_file(path: &Path) -> Result<ButcherTableau, CliError> {
    let text = read_text(path)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    let t = parse_tableau(&text).map_err(|e| CliError::input(path.display(), e))?;
    Ok(match name {
        Some(n) => t.with_name(n),
        None => t,
    })
}

/// A method label, or a path to a tableau file when the label is unknown.
fn resolve_method(label: &str) -> Result<Method, CliError> {
    match Method::from_label(label) {
        Ok(m) => Ok(m),
        Err(CoreError::UnknownMethod(_)) if Path::new(label).is_file() => {
            tableau_from_file(Path::new(label)).map(Method::Tableau)
        }
        Err(e) => Err(CliError::input("method", e)),
    }
}

/// Whitespace-separated square matrix, one row per line, `#` comments.
pub fn parse_matrix(text: &str) -> Result<SquareMatrix, String> {
    let rows: Vec<(usize, Vec<f64>)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|_| format!("line {}: `{tok}` is not a number", i + 1))
                })
                .collect::<Result<Vec<f64>, String>>()
                .map(|r| (i + 1, r))
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Err("empty matrix".into());
    }
    let dim = rows.len();
    if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != dim) {
        return Err(format!("line {line}: expected {dim} entries, found {}", r.len()));
    }
    SquareMatrix::from_row_major(dim, rows.into_iter().flat_map(|(_, r)| r).collect())
        .map_err(|e| e.to_string())
}

fn read_matrix(path: &Path) -> Result<SquareMatrix, CliError> {
    parse_matrix(&read_text(path)?).map_err(|e| CliError::input(path.display(), e))
}

fn parse_omega(text: &str) -> Result<AngularRate, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let vals: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("--omega `{text}` is not three comma-separated numbers")))?;
    if vals.len() != 3 {
        return Err(CliError::Input(format!("--omega needs 3 components, got {}", vals.len())));
    }
    Ok(AngularRate::new(vals[0], vals[1], vals[2])?)
}

fn initial_state(
    path: Option<&Path>,
    dim: usize,
    t0: f64,
    allow_nonorthogonal: bool,
) -> Result<OrthogonalState, CliError> {
    let state = match path {
        Some(p) => OrthogonalState::new(read_matrix(p)?, t0)?,
        None => OrthogonalState::identity(dim, t0),
    };
    if state.dim() != dim {
        return Err(CliError::Input(format!(
            "initial matrix is {0}x{0} but the coefficient is {1}x{1}",
            state.dim(),
            dim
        )));
    }
    if !allow_nonorthogonal {
        state.ensure_orthogonal(INITIAL_ORTHO_TOL)?;
    }
    Ok(state)
}

fn solver(arg: SolverArg) -> StageSolver {
    match arg {
        SolverArg::Direct => StageSolver::Direct,
        SolverArg::FixedPoint => StageSolver::fixed_point(),
    }
}

fn ensure_finite(traj: &Trajectory) -> Result<(), CliError> {
    match traj.records.iter().find(|r| !r.energy.is_finite()) {
        Some(r) => Err(CliError::Numerical(format!("solution overflowed at t = {}", r.t))),
        None => Ok(()),
    }
}

fn summarize(out: &mut String, label: &str, traj: &Trajectory) {
    let last = traj.last().expect("trajectory has records");
    let _ = writeln!(out, "{label}: {} records, final t = {}", traj.records.len(), last.t);
    let _ = writeln!(out, "  final E = {}", num(last.energy));
    let _ = writeln!(out, "  max |E_err| = {}", num(traj.max_abs_energy_err()));
    let _ = writeln!(out, "  max orth_defect = {}", num(traj.max_orth_defect()));
    let _ = writeln!(out, "  max |det_err| = {}", num(traj.max_abs_det_drift()));
}

pub fn check_tableau(args: &CheckTableauArgs) -> CmdResult {
    let t = match (&args.source.name, &args.source.file) {
        (Some(name), _) => tableau::builtin(name).map_err(|e| CliError::input("--name", e))?,
        (None, Some(path)) => tableau_from_file(path)?,
        (None, None) => return Err(CliError::Usage("give --name or --file".into())),
    };
    let kind = t.validate().map_err(|e| CliError::input("tableau", e))?;
    let report = symplecticity(&t);
    let mut out = String::new();
    let _ = writeln!(out, "tableau: {}", t.name().unwrap_or("unnamed"));
    let _ = writeln!(out, "stages: {}", t.stages());
    let _ = writeln!(
        out,
        "kind: {}",
        match kind {
            TableauKind::Explicit => "explicit",
            TableauKind::Implicit => "implicit",
        }
    );
    let _ = writeln!(out, "M = B A + A^T B - b b^T:");
    for line in matrix_text(&report.m).lines() {
        let _ = writeln!(out, "  {line}");
    }
    let _ = writeln!(out, "defect: {}", num(report.defect));
    let _ = writeln!(
        out,
        "verdict: {}",
        if report.symplectic { "symplectic" } else { "non-symplectic" }
    );
    Ok(out)
}

pub fn propagate(args: &PropagateArgs) -> CmdResult {
    let method = resolve_method(&args.method)?;
    let (s, coefficient_input) = match (&args.omega, &args.s_file) {
        (Some(w), None) => (hat(parse_omega(w)?), ("omega".to_string(), w.clone())),
        (None, Some(path)) => {
            let s = SkewMatrix::new(read_matrix(path)?)?;
            (s, ("s_file".to_string(), path.display().to_string()))
        }
        _ => return Err(CliError::Usage("give exactly one of --omega or --s-file".into())),
    };
    let q0 = initial_state(args.q0.as_deref(), s.dim(), 0.0, args.allow_nonorthogonal)?;
    let cfg = IntegratorConfig::with_solver(method, args.h, solver(args.stage_solver))?;
    let traj = run_propagate(&cfg, &s, &q0, args.t_end, args.record_every)?;
    ensure_finite(&traj)?;

    let mut inputs = vec![
        coefficient_input,
        ("record_every".into(), args.record_every.to_string()),
        (
            "stage_solver".into(),
            match args.stage_solver {
                SolverArg::Direct => "direct".into(),
                SolverArg::FixedPoint => "fixed-point".into(),
            },
        ),
        ("allow_nonorthogonal".into(), args.allow_nonorthogonal.to_string()),
    ];
    if let Some(p) = &args.q0 {
        inputs.push(("q0".into(), p.display().to_string()));
    }
    let manifest = RunManifest {
        subcommand: "propagate".into(),
        method: cfg.method.label(),
        step: Some(args.h),
        t_end: Some(args.t_end),
        inputs,
        output: args.out.display().to_string(),
        seed: None,
    };
    write_out(&args.out, &trajectory_csv(&traj, None), &manifest)?;
    if let Some(dump) = &args.dump_q {
        let m = RunManifest {
            output: dump.display().to_string(),
            ..manifest.clone()
        };
        write_out(dump, &matrix_dump(&traj), &m)?;
    }
    let mut out = String::new();
    summarize(&mut out, &cfg.method.label(), &traj);
    let _ = writeln!(out, "wrote {}", args.out.display());
    Ok(out)
}

/// Scalar results of the reference experiment.
#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub midpoint_max_energy_err: f64,
    pub midpoint_max_orth_defect: f64,
    pub rk2_max_energy_err: f64,
    pub rk2_final_energy: f64,
    pub rk2_forecast: f64,
    pub rk2_monotone: bool,
}

impl ExperimentSummary {
    pub fn midpoint_pass(&self) -> bool {
        self.midpoint_max_energy_err <= experiment::MIDPOINT_ENERGY_TOL
            && self.midpoint_max_orth_defect <= experiment::MIDPOINT_ORTHO_TOL
    }

    pub fn rk2_relative_error(&self) -> f64 {
        (self.rk2_final_energy - self.rk2_forecast).abs() / self.rk2_forecast
    }

    pub fn rk2_pass(&self) -> bool {
        self.rk2_monotone && self.rk2_relative_error() <= experiment::RK2_FORECAST_REL_TOL
    }

    pub fn render(&self) -> String {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let mut out = String::new();
        let _ = writeln!(out, "problem: S = hat(0, -0.1, -2), Q0 = I, h = 0.1, t in [0, 2000]");
        let _ = writeln!(out, "midpoint max |E_err| = {}", num(self.midpoint_max_energy_err));
        let _ = writeln!(out, "midpoint max orth_defect = {}", num(self.midpoint_max_orth_defect));
        let _ = writeln!(out, "rk2 max |E_err| = {}", num(self.rk2_max_energy_err));
        let _ = writeln!(out, "rk2 final E = {}", num(self.rk2_final_energy));
        let _ = writeln!(out, "rk2 forecast E = {}", num(self.rk2_forecast));
        let _ = writeln!(out, "rk2 E_err monotone non-decreasing = {}", self.rk2_monotone);
        let _ = writeln!(
            out,
            "midpoint check (|E_err| <= 1e-8, orth_defect <= 1e-9): {}",
            verdict(self.midpoint_pass())
        );
        let _ = writeln!(
            out,
            "rk2 check (monotone, final E within 0.5% of forecast, rel err {}): {}",
            num(self.rk2_relative_error()),
            verdict(self.rk2_pass())
        );
        out
    }
}

/// Runs both methods on the reference problem, concurrently.
pub fn run_experiment() -> Result<(Trajectory, Trajectory, ExperimentSummary), CliError> {
    let s = hat(AngularRate(experiment::OMEGA));
    let q0 = OrthogonalState::identity(3, 0.0);
    let run = |method: Method| -> Result<Trajectory, CliError> {
        let cfg = IntegratorConfig::new(method, experiment::STEP)?;
        let traj = run_propagate(&cfg, &s, &q0, experiment::T_END, 1)?;
        ensure_finite(&traj)?;
        Ok(traj)
    };
    let (mid, rk2) = std::thread::scope(|scope| {
        let mid = scope.spawn(|| run(Method::CayleyMidpoint));
        let rk2 = scope.spawn(|| run(Method::Rk2Closed));
        (mid.join().expect("midpoint run panicked"), rk2.join().expect("rk2 run panicked"))
    });
    let (mid, rk2) = (mid?, rk2?);
    let steps = rk2.records.len() as u32 - 1;
    let summary = ExperimentSummary {
        midpoint_max_energy_err: mid.max_abs_energy_err(),
        midpoint_max_orth_defect: mid.max_orth_defect(),
        rk2_max_energy_err: rk2.max_abs_energy_err(),
        rk2_final_energy: rk2.last().expect("records").energy,
        rk2_forecast: rk2_energy_forecast(AngularRate(experiment::OMEGA).norm_squared(), experiment::STEP, steps, 3),
        rk2_monotone: rk2.records.windows(2).all(|w| w[1].energy_err >= w[0].energy_err),
    };
    Ok((mid, rk2, summary))
}

pub fn paper_experiment(args: &ExperimentArgs) -> CmdResult {
    fs::create_dir_all(&args.out).map_err(|e| CliError::input(args.out.display(), e))?;
    let (mid, rk2, summary) = run_experiment()?;
    for (file, traj) in [("midpoint.csv", &mid), ("rk2.csv", &rk2)] {
        let path = args.out.join(file);
        let manifest = RunManifest {
            subcommand: "paper-experiment".into(),
            method: traj.method.clone(),
            step: Some(experiment::STEP),
            t_end: Some(experiment::T_END),
            inputs: vec![("omega".into(), "0,-0.1,-2".into())],
            output: path.display().to_string(),
            seed: None,
        };
        write_out(&path, &trajectory_csv(traj, None), &manifest)?;
    }
    let text = summary.render();
    let summary_path = args.out.join("summary.txt");
    let manifest = RunManifest {
        subcommand: "paper-experiment".into(),
        method: "cayley-midpoint,rk2-closed".into(),
        step: Some(experiment::STEP),
        t_end: Some(experiment::T_END),
        inputs: vec![("omega".into(), "0,-0.1,-2".into())],
        output: summary_path.display().to_string(),
        seed: None,
    };
    write_out(&summary_path, &text, &manifest)?;
    if summary.midpoint_pass() && summary.rk2_pass() {
        Ok(text)
    } else {
        Err(CliError::Numerical(format!("experiment verdicts failed\n{text}")))
    }
}

pub fn gyro(args: &GyroArgs) -> CmdResult {
    let log = parse_gyro_csv(&read_text(&args.input)?)
        .map_err(|e| CliError::input(args.input.display(), e))?;
    let method = resolve_method(&args.method)?;
    let cfg = IntegratorConfig::new(method, args.h)?;
    let t0 = log.samples().first().map_or(0.0, |s| s.t);
    let q0 = initial_state(args.q0.as_deref(), 3, t0, args.allow_nonorthogonal)?;
    let traj = propagate_gyro(&log, &cfg, &q0, None)?;
    ensure_finite(&traj)?;

    let mut report = String::new();
    summarize(&mut report, &cfg.method.label(), &traj);
    let errors: Option<Vec<f64>> = if args.reference {
        let exact = reference_gyro(&log, &q0)?;
        let errs: Vec<f64> = traj
            .records
            .iter()
            .zip(&exact.records)
            .map(|(a, b)| match (&a.q, &b.q) {
                (Some(qa), Some(qb)) => (qa - qb).frobenius_norm(),
                _ => f64::NAN,
            })
            .collect();
        let _ = writeln!(report, "  final ref_err = {}", num(*errs.last().unwrap_or(&0.0)));
        Some(errs)
    } else {
        None
    };

    let mut inputs = vec![
        ("input".into(), args.input.display().to_string()),
        ("reference".into(), args.reference.to_string()),
        ("allow_nonorthogonal".into(), args.allow_nonorthogonal.to_string()),
    ];
    if let Some(p) = &args.q0 {
        inputs.push(("q0".into(), p.display().to_string()));
    }
    let manifest = RunManifest {
        subcommand: "gyro".into(),
        method: cfg.method.label(),
        step: Some(args.h),
        t_end: log.samples().last().map(|s| s.t),
        inputs,
        output: args.out.display().to_string(),
        seed: None,
    };
    let csv = trajectory_csv(&traj, errors.as_deref().map(|e| ("ref_err", e)));
    write_out(&args.out, &csv, &manifest)?;
    if let Some(dump) = &args.dump_q {
        let m = RunManifest {
            output: dump.display().to_string(),
            ..manifest.clone()
        };
        write_out(dump, &matrix_dump(&traj), &m)?;
    }
    let _ = writeln!(report, "wrote {}", args.out.display());
    Ok(report)
}
