use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use weyl_chart::{bianchi_residuals, curvature_at, curvature_at_exact, integrate, scalar_data, scalar_relations, Chart, ChartError, Expr};
use weyl_core::decomp::{classify, Classification};
use weyl_core::tensor::membership4;
use weyl_core::SpaceTag;

use crate::args::{ChartCommand, Common, OutFormat};
use crate::{read, CliError, Report};

/// Residual ceiling of the jet-based scalar relations, per unit of conditioning.
const RELATION_MAX: f64 = 1e-8;
/// Sampling keeps this distance from non-periodic boundaries.
const MARGIN: f64 = 0.05;
/// Default relative tolerance of the classification flags at chart points.
pub const CLASSIFY_TOL: f64 = 1e-8;

pub fn load(path: &Path) -> Result<Chart, CliError> {
    Ok(Chart::from_json_str(&read(path)?)?)
}

pub fn run(c: &Common, cmd: &ChartCommand) -> Result<Report, CliError> {
    match cmd {
        ChartCommand::Verify { file, points } => verify(c, &load(file)?, *points),
        ChartCommand::Integrate { file, res } => {
            let r = integrate(&load(file)?, *res)?;
            let passed = r.curvature_bound_holds && r.volume_bound_holds;
            let text = match c.out.unwrap_or(OutFormat::Json) {
                OutFormat::Json => crate::json(&r),
                OutFormat::Table => format!(
                    "nodes {}\ncurvature_gap {:.9e} predicted {:.9e} {}\nvolume_gap {:.9e} predicted {:.9e} {}\nquadrature_error {:.3e}\n",
                    r.nodes,
                    r.curvature_gap,
                    r.predicted_curvature_gap,
                    if r.curvature_bound_holds { "OK" } else { "VIOLATED" },
                    r.volume_gap,
                    r.predicted_volume_gap,
                    if r.volume_bound_holds { "OK" } else { "VIOLATED" },
                    r.quadrature_error
                ),
            };
            Ok(Report { passed, text })
        }
        ChartCommand::Gauge { file, f } => {
            let f: Expr = f.parse().map_err(|e: ChartError| CliError::Usage(e.to_string()))?;
            let mut text = load(file)?.gauge(&f)?.to_json_string();
            text.push('\n');
            Ok(Report { passed: true, text })
        }
    }
}

/// Second-order behaviour of a residual under step halving.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Convergence {
    pub coarse: f64,
    pub fine: f64,
    pub converged: bool,
}

impl Convergence {
    /// Halving the step must cut the residual by a factor near 4 unless the
    /// finer residual is already at the rounding floor.
    fn new(coarse: f64, fine: f64, floor: f64) -> Self {
        let converged = fine <= floor.max(1e-12) || (3.0..=5.0).contains(&(coarse / fine));
        Convergence { coarse, fine, converged }
    }
}

/// Rounding floor of a central difference with step `h` of data computed from
/// a metric with condition number `cond`, relative to the data's size.
fn rounding_floor(cond: f64, h: f64) -> f64 {
    4.0 * f64::EPSILON * cond / h
}

fn condition_number(metric: &[f64], inverse: &[f64]) -> f64 {
    let max = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    max(metric) * max(inverse)
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScalarCheck {
    Checked { tau: f64, tau_tilde: f64, conditioning: f64, conformal: f64, normalization: f64, ok: bool },
    Skipped { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub point: Vec<f64>,
    pub weyl_membership: Convergence,
    pub bianchi: Convergence,
    pub bianchi_uncorrected: f64,
    pub scalar: ScalarCheck,
    pub classification: Classification,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartReport {
    pub n: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub points: Vec<PointReport>,
    pub passed: bool,
}

fn weyl_residual(chart: &Chart, x: &[f64]) -> Result<f64, CliError> {
    let a = curvature_at(chart, x)?.a;
    Ok(membership4(&a, SpaceTag::Weyl, 0.0).worst_residual / a.max_abs().max(1e-300))
}

fn scalar_check(chart: &Chart, x: &[f64]) -> Result<ScalarCheck, CliError> {
    match scalar_relations(chart, x) {
        Ok(rel) => {
            let d = scalar_data(chart, x)?;
            let tol = RELATION_MAX * d.conditioning();
            let ok = rel.conformal.abs() <= tol && rel.normalization.abs() <= tol && (d.tau_tilde - 1.0).abs() <= tol;
            Ok(ScalarCheck::Checked {
                tau: d.tau,
                tau_tilde: d.tau_tilde,
                conditioning: d.conditioning(),
                conformal: rel.conformal,
                normalization: rel.normalization,
                ok,
            })
        }
        Err(e @ (ChartError::NotRiemannian { .. } | ChartError::NonPositiveScalarCurvature { .. })) => {
            Ok(ScalarCheck::Skipped { reason: e.to_string() })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn chart_report(chart: &Chart, points: usize, seed: u64, tol: f64) -> Result<ChartReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = chart.clone().with_fd_step(chart.fd_step / 2.0);
    let mut out = Vec::with_capacity(points);
    for _ in 0..points {
        let x = chart.sample_point(&mut rng, MARGIN);
        let exact = curvature_at_exact(chart, &x)?;
        let c = &exact.coords;
        let size = c.low.iter().chain(&c.up).fold(0.0f64, |a, v| a.max(v.abs()));
        let floor = rounding_floor(condition_number(&c.metric, &c.inverse), half.fd_step);
        let weyl = Convergence::new(weyl_residual(chart, &x)?, weyl_residual(&half, &x)?, floor);
        let b = bianchi_residuals(chart, &x)?;
        let bianchi = Convergence::new(b.max(), bianchi_residuals(&half, &x)?.max(), floor * size);
        let scalar = scalar_check(chart, &x)?;
        let classification = classify(&exact.a, tol)?;
        let scalar_ok = !matches!(scalar, ScalarCheck::Checked { ok: false, .. });
        let passed = weyl.converged && bianchi.converged && scalar_ok;
        out.push(PointReport {
            point: x,
            weyl_membership: weyl,
            bianchi,
            bianchi_uncorrected: b.lowered_uncorrected,
            scalar,
            classification,
            passed,
        });
    }
    let passed = out.iter().all(|p| p.passed);
    Ok(ChartReport { n: chart.n, fd_step: chart.fd_step, seed, points: out, passed })
}

fn verify(c: &Common, chart: &Chart, points: usize) -> Result<Report, CliError> {
    let r = chart_report(chart, points, c.seed, c.tol.unwrap_or(CLASSIFY_TOL))?;
    let text = match c.out.unwrap_or(OutFormat::Json) {
        OutFormat::Json => crate::json(&r),
        OutFormat::Table => {
            let mut s = String::from("status weyl_residual bianchi_residual tau_tilde point\n");
            for p in &r.points {
                let tt = match &p.scalar {
                    ScalarCheck::Checked { tau_tilde, .. } => format!("{tau_tilde:.12}"),
                    ScalarCheck::Skipped { .. } => "-".into(),
                };
                let pt: Vec<String> = p.point.iter().map(|v| format!("{v:.6}")).collect();
                s.push_str(&format!(
                    "{} {:.3e} {:.3e} {} {}\n",
                    if p.passed { "PASS" } else { "FAIL" },
                    p.weyl_membership.coarse,
                    p.bianchi.coarse,
                    tt,
                    pt.join(",")
                ));
            }
            s
        }
    };
    Ok(Report { passed: r.passed, text })
}
