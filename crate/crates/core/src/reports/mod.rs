//! Reproduction of the published stability tables.
//!
//! Every cell is recomputed from a space descriptor through the solvers and
//! the Lichnerowicz spectrum, then compared with an embedded expectation.
//! Exact expectations pass only through an exact certificate; decimal
//! expectations carry their own tolerance.

mod cells;
mod fs3;
mod tables;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{EswError, Result};
use crate::scalar::Rational;

pub use cells::verdict_label;
pub use fs3::{fs3_expectations, Fs3Metric, Fs3Space, FS3_CORRECTIONS, FS3_SPACES};
pub use tables::{stiefel_matrix, STIEFEL_TOL};

/// Tolerance for cells given as four-digit decimals.
pub const DECIMAL_TOL: f64 = 2e-3;
/// Tolerance for cells given as six-digit decimals.
pub const FINE_DECIMAL_TOL: f64 = 1e-5;
/// Tolerance for closed forms involving square roots.
pub const SURD_TOL: f64 = 1e-9;
/// Tolerance for volume-normalized scalar curvature closed forms.
pub const SCALAR_TOL: f64 = 1e-6;

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TableId {
    W2,
    W2Sc,
    W3,
    W3Sc,
    W4,
    W4_2,
    W5,
    FS3,
}

impl TableId {
    pub const ALL: [TableId; 8] = [
        TableId::W2,
        TableId::W2Sc,
        TableId::W3,
        TableId::W3Sc,
        TableId::W4,
        TableId::W4_2,
        TableId::W5,
        TableId::FS3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::W2 => "W2",
            TableId::W2Sc => "W2Sc",
            TableId::W3 => "W3",
            TableId::W3Sc => "W3Sc",
            TableId::W4 => "W4",
            TableId::W4_2 => "W4_2",
            TableId::W5 => "W5",
            TableId::FS3 => "FS3",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::W2 => "Einstein metrics g_kil, g_1, g_2, g_3 on generalized Wallach spaces with a_1 = a_2 = a_3",
            TableId::W2Sc => "Volume-normalized scalar curvature of the metrics of table W2",
            TableId::W3 => "Einstein metrics g_q±, g_p± on generalized Wallach spaces with a_1 = a_2 != a_3",
            TableId::W3Sc => "Volume-normalized scalar curvature of the metrics of table W3",
            TableId::W4 => "Spectra and types of the metrics of table W3 on W1-W5",
            TableId::W4_2 => "Spectra and types of the metrics of table W3 on W6, W12, W14",
            TableId::W5 => "Einstein metrics on generalized Wallach spaces with pairwise distinct a_i",
            TableId::FS3 => "Flag manifolds with b_2 = 1 and three summands (user-supplied descriptors)",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = EswError;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('-', "_");
        TableId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| {
                let names: Vec<&str> = TableId::ALL.iter().map(|t| t.as_str()).collect();
                EswError::Domain(format!("unknown table {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Where an expectation comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Transcribed from the table or its caption.
    Table,
    /// Computed independently from a closed form.
    Derived,
    /// A table entry with a typographical error, replaced by the value it
    /// evidently intends.
    Corrected,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Table => "table",
            Origin::Derived => "derived",
            Origin::Corrected => "corrected",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    Exact { value: Rational },
    Approx { value: f64, tol: f64 },
    Label { value: String },
}

impl Expected {
    pub fn tolerance(&self) -> f64 {
        match self {
            Expected::Approx { tol, .. } => *tol,
            _ => 0.0,
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Exact { value } => write!(f, "{value}"),
            Expected::Approx { value, tol } => write!(f, "{value:.10} ±{tol:.0e}"),
            Expected::Label { value } => f.write_str(value),
        }
    }
}

/// How a cell was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Exact eigenvalue multiplicity of the rational matrix `L`.
    Charpoly,
    /// Exact eigenvalue multiplicity of the rational pencil `S − λD`.
    Pencil,
    /// Exact rational equality.
    Exact,
    /// Floating-point comparison within the stated tolerance.
    Float,
    /// String equality.
    Label,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Charpoly => "charpoly",
            Check::Pencil => "pencil",
            Check::Exact => "exact",
            Check::Float => "float",
            Check::Label => "label",
        })
    }
}

/// One compared cell. `pass` holds iff `abs_err <= expected.tolerance()`.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub label: String,
    pub expected: Expected,
    pub origin: Origin,
    pub computed: String,
    pub abs_err: f64,
    pub pass: bool,
    pub check: Check,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table_id: TableId,
    pub rows: Vec<Row>,
    pub notes: Vec<String>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    /// Plain-text rendering, one line per cell.
    pub fn render_text(&self) -> String {
        let mut out = format!("table {}: {}\n", self.table_id, self.table_id.title());
        let width = self.rows.iter().map(|r| r.label.len()).max().unwrap_or(0);
        for r in &self.rows {
            out.push_str(&format!(
                "{}  {:<width$}  expected {} [{}]  computed {}  err {:.3e}  ({})\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.label,
                r.expected,
                r.origin,
                r.computed,
                r.abs_err,
                r.check,
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out.push_str(&format!("{}/{} cells pass\n", self.passed(), self.rows.len()));
        out
    }
}

/// Options for [`reproduce`].
#[derive(Clone, Debug, Default)]
pub struct ReproduceOptions {
    /// Overrides the sampled family parameters (inclusive range).
    pub params: Option<(i64, i64)>,
    /// Directory with descriptor files for [`TableId::FS3`].
    pub descriptor_dir: Option<PathBuf>,
}

/// Parses `a..b`, `a..=b`, `a-b` or a single integer.
pub fn parse_param_range(s: &str) -> Result<(i64, i64)> {
    let s = s.trim();
    let bad = || EswError::Parse(format!("bad parameter range {s:?}; expected e.g. 3..5"));
    let (a, b) = if let Some((a, b)) = s.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = s.split_once('-') {
        (a, b)
    } else {
        (s, s)
    };
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a < 1 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}

/// Recomputes every cell of `table`.
pub fn reproduce(table: TableId, opts: &ReproduceOptions) -> Result<TableReport> {
    let (rows, notes) = match table {
        TableId::W2 => tables::table_w2(opts.params)?,
        TableId::W2Sc => tables::table_w2sc(opts.params)?,
        TableId::W3 => tables::table_w3(opts.params)?,
        TableId::W3Sc => tables::table_w3sc(opts.params)?,
        TableId::W4 => tables::table_w4(opts.params)?,
        TableId::W4_2 => tables::table_w4_2()?,
        TableId::W5 => tables::table_w5(opts.params)?,
        TableId::FS3 => fs3::table_fs3(opts.descriptor_dir.as_deref())?,
    };
    Ok(TableReport {
        table_id: table,
        rows,
        notes,
    })
}
