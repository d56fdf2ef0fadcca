//! Butcher tableaux, the built-in catalogue, and the symplecticity check
//! `M = B A + A^T B - b b^T` with `B = diag(b)`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;

/// Tolerance on `c_i - sum_j a_ij`.
pub const ROW_SUM_TOL: f64 = 1e-14;

/// A tableau is reported symplectic when `||M||_F` is at most this.
pub const SYMPLECTIC_TOL: f64 = 1e-14;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 4] = ["midpoint", "rk2-explicit", "gauss2", "rk4-classical"];

/// Coefficients `(A, b, c)` of an s-stage Runge-Kutta method.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    stages: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableauKind {
    /// `A` strictly lower triangular.
    Explicit,
    Implicit,
}

impl ButcherTableau {
    /// Assembles a tableau and checks it with [`ButcherTableau::validate`].
    /// When `c` is `None` it is filled with the row sums of `A`.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, c: Option<Vec<f64>>) -> Result<Self> {
        let t = Self::from_parts(a, b, c)?;
        t.validate()?;
        Ok(t)
    }

    /// Assembles a tableau checking only shapes. The row-sum condition is
    /// left to [`ButcherTableau::validate`].
    pub fn from_parts(a: Vec<Vec<f64>>, b: Vec<f64>, c: Option<Vec<f64>>) -> Result<Self> {
        let stages = b.len();
        if stages == 0 {
            return Err(Error::Dimension("tableau needs at least one stage".into()));
        }
        if a.len() != stages || a.iter().any(|row| row.len() != stages) {
            return Err(Error::Dimension(format!(
                "A must be {stages}x{stages} to match b"
            )));
        }
        let a: Vec<f64> = a.into_iter().flatten().collect();
        let c = match c {
            Some(c) if c.len() != stages => {
                return Err(Error::Dimension(format!(
                    "c has {} entries, expected {stages}",
                    c.len()
                )))
            }
            Some(c) => c,
            None => (0..stages)
                .map(|i| a[i * stages..(i + 1) * stages].iter().sum())
                .collect(),
        };
        Ok(Self {
            stages,
            a,
            b,
            c,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.stages + j]
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Checks finiteness and `c_i = sum_j a_ij`, then classifies the method.
    pub fn validate(&self) -> Result<TableauKind> {
        let s = self.stages;
        let all = self.a.iter().chain(&self.b).chain(&self.c);
        if all.clone().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("tableau has non-finite coefficients".into()));
        }
        for i in 0..s {
            let row_sum: f64 = (0..s).map(|j| self.a(i, j)).sum();
            if (row_sum - self.c[i]).abs() > ROW_SUM_TOL {
                return Err(Error::Consistency {
                    row: i + 1,
                    expected: row_sum,
                    found: self.c[i],
                });
            }
        }
        Ok(self.kind())
    }

    pub fn kind(&self) -> TableauKind {
        let s = self.stages;
        let explicit = (0..s).all(|i| (i..s).all(|j| self.a(i, j) == 0.0));
        if explicit {
            TableauKind::Explicit
        } else {
            TableauKind::Implicit
        }
    }

    pub fn is_explicit(&self) -> bool {
        self.kind() == TableauKind::Explicit
    }

    /// Text form readable by [`parse_tableau`], 17 significant digits.
    pub fn to_text(&self) -> String {
        let s = self.stages;
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "# {name}");
        }
        let _ = writeln!(out, "{s}");
        let line = |xs: &[f64]| {
            xs.iter()
                .map(|x| format!("{x:.16e}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        for i in 0..s {
            let _ = writeln!(out, "{}", line(&self.a[i * s..(i + 1) * s]));
        }
        let _ = writeln!(out, "{}", line(&self.b));
        let _ = writeln!(out, "{}", line(&self.c));
        out
    }
}

/// Looks up a tableau in the built-in catalogue.
pub fn builtin(name: &str) -> Result<ButcherTableau> {
    let t = match name {
        "midpoint" => ButcherTableau::new(vec![vec![0.5]], vec![1.0], Some(vec![0.5])),
        "rk2-explicit" => ButcherTableau::new(
            vec![vec![0.0, 0.0], vec![0.5, 0.0]],
            vec![0.0, 1.0],
            Some(vec![0.0, 0.5]),
        ),
        "gauss2" => {
            let r = 3f64.sqrt() / 6.0;
            ButcherTableau::new(
                vec![vec![0.25, 0.25 - r], vec![0.25 + r, 0.25]],
                vec![0.5, 0.5],
                Some(vec![0.5 - r, 0.5 + r]),
            )
        }
        "rk4-classical" => ButcherTableau::new(
            vec![
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.5, 0.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            Some(vec![0.0, 0.5, 0.5, 1.0]),
        ),
        other => return Err(Error::UnknownMethod(other.to_string())),
    }?;
    Ok(t.with_name(name))
}

/// The symplecticity matrix of a tableau and its Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticityReport {
    pub m: SquareMatrix,
    pub defect: f64,
    pub symplectic: bool,
}

pub fn symplecticity(t: &ButcherTableau) -> SymplecticityReport {
    let s = t.stages;
    let b = &t.b;
    let mut m = SquareMatrix::zeros(s);
    for i in 0..s {
        for j in 0..s {
            m[(i, j)] = b[i] * t.a(i, j) + b[j] * t.a(j, i) - b[i] * b[j];
        }
    }
    let defect = m.frobenius_norm();
    SymplecticityReport {
        m,
        defect,
        symplectic: defect <= SYMPLECTIC_TOL,
    }
}

/// Parses the text tableau format:
///
/// ```text
/// # comment lines anywhere
/// s
/// a_11 ... a_1s      (s rows of A)
/// b_1 ... b_s
/// c_1 ... c_s        (optional; row sums of A when absent)
/// ```
pub fn parse_tableau(text: &str) -> Result<ButcherTableau> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();

    let Some(&(line_no, first)) = lines.first() else {
        return Err(missing(text.lines().count(), "stage count"));
    };
    let stages: usize = first.parse().map_err(|_| Error::Parse {
        line: line_no,
        message: format!("stage count `{first}` is not a positive integer"),
    })?;
    if stages == 0 {
        return Err(Error::Parse {
            line: line_no,
            message: "stage count must be positive".into(),
        });
    }

    let body = &lines[1..];
    if body.len() > stages + 2 {
        return Err(Error::Parse {
            line: body[stages + 2].0,
            message: "unexpected trailing line".into(),
        });
    }
    let row = |k: usize, what: &str| -> Result<Vec<f64>> {
        match body.get(k) {
            Some(&(n, l)) => parse_row(n, l, stages, what),
            None => Err(missing(lines.last().map_or(0, |x| x.0), what)),
        }
    };
    let a = (0..stages)
        .map(|i| row(i, &format!("row {} of A", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let b = row(stages, "b")?;
    let c = if body.len() > stages + 1 {
        Some(row(stages + 1, "c")?)
    } else {
        None
    };
    ButcherTableau::new(a, b, c)
}

fn missing(after: usize, what: &str) -> Error {
    Error::Parse {
        line: after + 1,
        message: format!("missing {what}"),
    }
}

fn parse_row(line: usize, text: &str, stages: usize, what: &str) -> Result<Vec<f64>> {
    let row = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("`{tok}` is not a number"),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    if row.len() != stages {
        return Err(Error::Parse {
            line,
            message: format!("{what} has {} entries, expected {stages}", row.len()),
        });
    }
    Ok(row)
}
