//! Trajectory CSV, matrix dumps, run manifests, and atomic file writes.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use skewflow_core::{SquareMatrix, Trajectory};

pub const TRAJECTORY_HEADER: &str = "t,E,E_err,orth_defect,det_err";

/// 17 significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders the scalar meters; `extra` appends one column per record.
pub fn trajectory_csv(traj: &Trajectory, extra: Option<(&str, &[f64])>) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    if let Some((name, _)) = extra {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, r) in traj.records.iter().enumerate() {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            num(r.t),
            num(r.energy),
            num(r.energy_err),
            num(r.orth_defect),
            num(r.det_drift)
        );
        if let Some((_, col)) = extra {
            let _ = write!(out, ",{}", num(col[i]));
        }
        out.push('\n');
    }
    out
}

/// One flattened row-major matrix per line.
pub fn matrix_dump(traj: &Trajectory) -> String {
    let mut out = String::new();
    for r in &traj.records {
        if let Some(q) = &r.q {
            let row: Vec<String> = q.as_slice().iter().map(|x| num(*x)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    out
}

pub fn matrix_text(m: &SquareMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = m.row(i).iter().map(|x| num(*x)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parameters of one run, written as `key=value` lines next to its output.
#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    pub subcommand: String,
    pub method: String,
    pub step: Option<f64>,
    pub t_end: Option<f64>,
    pub inputs: Vec<(String, String)>,
    pub output: String,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "none".to_string(), num);
        let mut out = String::new();
        let _ = writeln!(out, "tool=skewflow");
        let _ = writeln!(out, "version={}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "subcommand={}", self.subcommand);
        let _ = writeln!(out, "method={}", self.method);
        let _ = writeln!(out, "step={}", opt(self.step));
        let _ = writeln!(out, "t_end={}", opt(self.t_end));
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "{k}={v}");
        }
        let _ = writeln!(out, "output={}", self.output);
        let _ = writeln!(
            out,
            "seed={}",
            self.seed.map_or_else(|| "none".to_string(), |s| s.to_string())
        );
        out
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest");
    output.with_file_name(name)
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(format!(".tmp.{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Writes `contents` to `path` and the manifest beside it.
pub fn write_with_manifest(path: &Path, contents: &str, manifest: &RunManifest) -> io::Result<()> {
    write_atomic(path, contents)?;
    write_atomic(&manifest_path(path), &manifest.render())
}
