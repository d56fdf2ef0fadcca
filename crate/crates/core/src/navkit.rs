//! Gyro-log ingestion and piecewise-constant attitude propagation.
//!
//! A log is read as a sequence of half-open intervals `[t_k, t_{k+1})`
//! over which the body rate is held at sample `k` (zero-order hold). The
//! last sample's rate is never used.

use crate::diagnostics::{Meter, Trajectory};
use crate::error::{Error, Result};
use crate::integrate::{run_schedule, IntegratorConfig, Schedule};
use crate::linalg::{expm, hat, AngularRate, OrthogonalState};

pub const GYRO_HEADER: &str = "t,wx,wy,wz";

/// Tolerance for the orthogonality check on a supplied initial attitude.
pub const INITIAL_ORTHO_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GyroSample {
    pub t: f64,
    pub omega: AngularRate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GyroLog {
    samples: Vec<GyroSample>,
}

impl GyroLog {
    /// Rejects non-finite or non-increasing timestamps.
    pub fn new(samples: Vec<GyroSample>) -> Result<Self> {
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].t > w[0].t) {
                return Err(Error::Ordering {
                    line: i + 2,
                    previous: w[0].t,
                    time: w[1].t,
                });
            }
        }
        if let Some(s) = samples.iter().find(|s| !s.t.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite sample time {}", s.t)));
        }
        Ok(Self { samples })
    }

    /// A log holding `omega` over `[t0, t1]`.
    pub fn constant(omega: AngularRate, t0: f64, t1: f64) -> Result<Self> {
        Self::new(vec![GyroSample { t: t0, omega }, GyroSample { t: t1, omega }])
    }

    pub fn samples(&self) -> &[GyroSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn check_propagatable(&self, q0: &OrthogonalState) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a gyro log needs at least 2 samples, got {}",
                self.samples.len()
            )));
        }
        if q0.dim() != 3 {
            return Err(Error::Dimension(format!(
                "attitude must be 3x3, got {0}x{0}",
                q0.dim()
            )));
        }
        if q0.t != self.samples[0].t {
            return Err(Error::InvalidArgument(format!(
                "initial attitude time {} differs from first sample time {}",
                q0.t, self.samples[0].t
            )));
        }
        Ok(())
    }
}

/// Parses `t,wx,wy,wz` CSV. `#` lines and blank lines are skipped; line
/// numbers in errors are 1-based physical lines.
pub fn parse_gyro_csv(text: &str) -> Result<GyroLog> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match rows.next() {
        Some((_, GYRO_HEADER)) => {}
        Some((n, other)) => {
            return Err(Error::Parse {
                line: n,
                message: format!("expected header `{GYRO_HEADER}`, found `{other}`"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: format!("missing header `{GYRO_HEADER}`"),
            })
        }
    }

    let mut samples: Vec<GyroSample> = Vec::new();
    for (n, line) in rows {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: n,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let mut vals = [0.0; 4];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: n,
                    message: format!("`{f}` is not a finite number"),
                })?;
        }
        if let Some(prev) = samples.last() {
            if !(vals[0] > prev.t) {
                return Err(Error::Ordering {
                    line: n,
                    previous: prev.t,
                    time: vals[0],
                });
            }
        }
        samples.push(GyroSample {
            t: vals[0],
            omega: AngularRate([vals[1], vals[2], vals[3]]),
        });
    }
    GyroLog::new(samples)
}

/// Integrates the attitude across the log with the configured method.
///
/// Records the initial attitude and the attitude at every later sample
/// time. With `record_every = Some(k)`, every k-th step inside an interval
/// is recorded as well.
pub fn propagate_gyro(
    log: &GyroLog,
    config: &IntegratorConfig,
    q0: &OrthogonalState,
    record_every: Option<usize>,
) -> Result<Trajectory> {
    log.check_propagatable(q0)?;
    if record_every == Some(0) {
        return Err(Error::InvalidArgument("record_every must be at least 1".into()));
    }
    let meter = Meter::new(&q0.q);
    let mut traj = Trajectory::new(config.method.label(), config.step);
    traj.push(meter.record(q0.t, &q0.q));
    let mut q = q0.q.clone();
    for w in log.samples.windows(2) {
        let s = hat(w[0].omega);
        let schedule = Schedule::new(w[0].t, w[1].t, config.step);
        run_schedule(config, &s, &mut q, &schedule, record_every, |t, q| {
            traj.push(meter.record(t, q))
        })?;
        traj.push(meter.record(w[1].t, &q));
    }
    Ok(traj)
}

/// Exact per-interval flow: the attitude at `t_{k+1}` is
/// `exp((t_{k+1} - t_k) hat(w_k))` applied to the attitude at `t_k`.
pub fn reference_gyro(log: &GyroLog, q0: &OrthogonalState) -> Result<Trajectory> {
    log.check_propagatable(q0)?;
    let meter = Meter::new(&q0.q);
    let mut traj = Trajectory::new("exact", 0.0);
    traj.push(meter.record(q0.t, &q0.q));
    let mut q = q0.q.clone();
    for w in log.samples.windows(2) {
        q = &expm(&hat(w[0].omega), w[1].t - w[0].t) * &q;
        traj.push(meter.record(w[1].t, &q));
    }
    Ok(traj)
}
