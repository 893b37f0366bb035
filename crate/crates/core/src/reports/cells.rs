//! Cell evaluation shared by every table.

use super::{Check, Expected, Origin, Row, SURD_TOL};
use crate::curvature::scalar_curvature_normalized;
use crate::error::Result;
use crate::lichnerowicz::{
    analyze, build_pencil, multiplicity, pencil_multiplicity, rational_entries, Analysis, Matrix, StabilityKind,
    StabilityVerdict, DEFAULT_TOL,
};
use crate::scalar::{Rational, Scalar};
use crate::space_model::{DiagonalMetric, SpaceDescriptor};

/// `"G-stable"`, `"degenerate"`, or `"<kind>, coindex <n>"`.
pub fn verdict_label(v: &StabilityVerdict) -> String {
    match v.kind {
        StabilityKind::GStable | StabilityKind::Degenerate => v.kind.to_string(),
        k => format!("{k}, coindex {}", v.coindex),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Extreme {
    Min,
    Max,
}

impl Extreme {
    fn name(self) -> &'static str {
        match self {
            Extreme::Min => "lambda_p",
            Extreme::Max => "lambda_max",
        }
    }
}

/// One Einstein metric with its full analysis and exact matrices when available.
pub(crate) struct Ctx<'a> {
    pub space: &'a SpaceDescriptor,
    pub g: DiagonalMetric,
    pub analysis: Analysis,
    rational_l: Option<Matrix<Rational>>,
    rational_s: Option<Matrix<Rational>>,
}

impl<'a> Ctx<'a> {
    pub fn new(space: &'a SpaceDescriptor, g: DiagonalMetric) -> Result<Self> {
        let analysis = analyze(space, &g, DEFAULT_TOL)?;
        let rational_l = rational_entries(&analysis.report.matrix).ok();
        let rational_s = if g.is_exact() && space.is_exact() {
            rational_entries(&build_pencil(space, &g)).ok()
        } else {
            None
        };
        Ok(Ctx {
            space,
            g,
            analysis,
            rational_l,
            rational_s,
        })
    }

    pub fn lambda(&self, which: Extreme) -> Option<f64> {
        match which {
            Extreme::Min => self.analysis.report.lambda_min,
            Extreme::Max => self.analysis.report.lambda_max,
        }
    }

    pub fn scalar_normalized(&self) -> f64 {
        scalar_curvature_normalized(self.space, &self.g)
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.12}")
}

/// Accumulates rows for one group of cells.
#[derive(Default)]
pub(crate) struct Cells {
    pub rows: Vec<Row>,
}

impl Cells {
    fn push(&mut self, label: String, expected: Expected, origin: Origin, computed: String, abs_err: f64, check: Check) {
        let pass = abs_err <= expected.tolerance();
        self.rows.push(Row {
            label,
            expected,
            origin,
            computed,
            abs_err,
            pass,
            check,
        });
    }

    /// Exact equality; an inexact computed value never passes.
    pub fn exact(&mut self, label: impl Into<String>, expected: Rational, origin: Origin, computed: &Scalar) {
        let err = match computed {
            Scalar::Exact(c) if *c == expected => 0.0,
            c => {
                let d = (c.to_f64() - expected.to_f64()).abs();
                if d > 0.0 {
                    d
                } else {
                    f64::INFINITY
                }
            }
        };
        self.push(label.into(), Expected::Exact { value: expected }, origin, computed.to_string(), err, Check::Exact);
    }

    pub fn float(&mut self, label: impl Into<String>, expected: f64, tol: f64, origin: Origin, computed: f64) {
        let err = (computed - expected).abs();
        let err = if err.is_nan() { f64::INFINITY } else { err };
        self.push(
            label.into(),
            Expected::Approx { value: expected, tol },
            origin,
            fmt_f64(computed),
            err,
            Check::Float,
        );
    }

    /// Exact comparison when `expected` is exact, otherwise within `tol`.
    pub fn value(&mut self, label: impl Into<String>, expected: &Scalar, tol: f64, origin: Origin, computed: &Scalar) {
        match expected {
            Scalar::Exact(e) => self.exact(label, e.clone(), origin, computed),
            Scalar::Approx(e) => self.float(label, *e, tol, origin, computed.to_f64()),
        }
    }

    /// A plain label; an expectation without a comma is compared with the
    /// part of the computed label before its first comma.
    pub fn label(&mut self, label: impl Into<String>, expected: &str, origin: Origin, computed: &str) {
        let head = computed.split(',').next().unwrap_or("");
        let ok = computed == expected || (!expected.contains(',') && head == expected);
        self.push(
            label.into(),
            Expected::Label { value: expected.into() },
            origin,
            computed.into(),
            if ok { 0.0 } else { 1.0 },
            Check::Label,
        );
    }

    pub fn verdict(&mut self, prefix: &str, ctx: &Ctx, expected: &str, origin: Origin) {
        self.label(format!("{prefix} type"), expected, origin, &verdict_label(&ctx.analysis.verdict));
    }

    /// Whether the TT kernel is nontrivial (Ricci local invertibility fails).
    pub fn kernel(&mut self, prefix: &str, ctx: &Ctx, set: bool, origin: Origin) {
        let computed = if ctx.analysis.verdict.kernel_dim_tt > 0 { "set" } else { "clear" };
        self.label(format!("{prefix} kernel flag"), if set { "set" } else { "clear" }, origin, computed);
    }

    pub fn two_rho(&mut self, prefix: &str, ctx: &Ctx, expected: &Scalar, tol: f64, origin: Origin) {
        self.value(format!("{prefix} 2rho"), expected, tol, origin, &ctx.analysis.two_rho);
    }

    /// Extreme TT eigenvalue. Exact expectations need an exact certificate:
    /// the multiplicity of `λ` in `L` (or in the pencil `S − λD`) must equal
    /// the number of numerically coincident TT eigenvalues, plus one for the
    /// kernel direction `√d` when `λ = 0`.
    pub fn eigen(&mut self, prefix: &str, ctx: &Ctx, which: Extreme, expected: &Scalar, tol: f64, origin: Origin) {
        let label = format!("{prefix} {}", which.name());
        let Some(num) = ctx.lambda(which) else {
            self.push(label, Expected::Label { value: expected.to_string() }, origin, "no TT spectrum".into(), 1.0, Check::Label);
            return;
        };
        let lam = match expected {
            Scalar::Approx(e) => return self.float(label, *e, tol, origin, num),
            Scalar::Exact(l) => l,
        };
        let diff = (num - lam.to_f64()).abs();
        let scale = lam.to_f64().abs().max(1.0);
        let coincident = ctx
            .analysis
            .report
            .tt_spectrum
            .iter()
            .filter(|v| (*v - lam.to_f64()).abs() <= SURD_TOL * scale)
            .count();
        let need = coincident + usize::from(lam.is_zero());
        let (check, mult) = if let Some(l) = &ctx.rational_l {
            (Check::Charpoly, Some(multiplicity(l, lam)))
        } else if let Some(s) = &ctx.rational_s {
            (Check::Pencil, Some(pencil_multiplicity(s, ctx.space.dims(), lam)))
        } else {
            (Check::Exact, None)
        };
        let certified = diff <= SURD_TOL * scale && coincident > 0 && mult == Some(need);
        let err = if certified {
            0.0
        } else if diff > 0.0 {
            diff
        } else {
            f64::INFINITY
        };
        let computed = match mult {
            Some(m) => format!("{} (multiplicity {m})", fmt_f64(num)),
            None => format!("{} (no exact matrix)", fmt_f64(num)),
        };
        self.push(label, Expected::Exact { value: lam.clone() }, origin, computed, err, check);
    }

    /// `λ_p`, `λ_p^max` and `2ρ` in one go.
    #[allow(clippy::too_many_arguments)]
    pub fn spectrum(
        &mut self,
        prefix: &str,
        ctx: &Ctx,
        lambda_p: &Scalar,
        lambda_max: &Scalar,
        two_rho: &Scalar,
        tol: f64,
        origin: Origin,
    ) {
        self.eigen(prefix, ctx, Extreme::Min, lambda_p, tol, origin);
        self.eigen(prefix, ctx, Extreme::Max, lambda_max, tol, origin);
        self.two_rho(prefix, ctx, two_rho, tol, origin);
    }
}
