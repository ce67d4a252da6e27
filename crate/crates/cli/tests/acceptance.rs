//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weyl_chart::fit::{fit_two_power_terms, linear_fit};
use weyl_chart::{
    bianchi_residuals, christoffel_with, curvature_at, curvature_coords, exterior_derivative, integrate, Chart,
    ChristoffelMethod, Expr, PointFrame,
};
use weyl_core::decomp::{classify_weyl, WeylTensor};
use weyl_core::dims::module_dimension;
use weyl_core::tensor::membership4;
use weyl_core::traces::{directional, length_form, ricci};
use weyl_core::verify::{run_suite, Suite, SuiteReport, VerifyConfig};
use weyl_core::{Model, Rational, SpaceTag};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn all_models() -> Vec<Model> {
    (3..=6).flat_map(|n| [Model::euclidean(n).unwrap(), Model::lorentzian(n).unwrap()]).collect()
}

fn fixture(name: &str) -> Chart {
    let path = format!("{}/../chart/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    Chart::from_json_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

// ---------------------------------------------------------------- algebra

/// Closed forms of the module dimensions, written out independently of the
/// library's own table.
fn closed_form(space: SpaceTag, n: usize) -> usize {
    let n = n as i64;
    let d = match space {
        SpaceTag::GenCurv => n * n * (n * n - 1) / 3,
        SpaceTag::Algebraic => n * n * (n * n - 1) / 12,
        SpaceTag::Weyl => n * n * (n * n - 1) / 12 + n * (n - 1) / 2,
        SpaceTag::W6 if n == 3 => 0,
        SpaceTag::W6 => n * (n + 1) * (n - 3) * (n + 2) / 12,
        SpaceTag::W7 => (n - 1) * (n - 2) * (n + 1) * (n + 4) / 8,
        SpaceTag::W8 if n == 3 => 0,
        SpaceTag::W8 => n * (n - 1) * (n - 3) * (n + 2) / 8,
        SpaceTag::Scalar => 1,
        SpaceTag::Sym => n * (n + 1) / 2,
        SpaceTag::Sym0 => (n - 1) * (n + 2) / 2,
        SpaceTag::Alt => n * (n - 1) / 2,
    };
    d as usize
}

fn criterion_dimensions() -> Outcome {
    let mut bad = Vec::new();
    for m in all_models() {
        let n = m.n();
        for space in SpaceTag::ALL {
            let d = module_dimension(space, m);
            if d != closed_form(space, n) {
                bad.push(format!("{space} at {m}: {d}"));
            }
        }
        let weyl = module_dimension(SpaceTag::Weyl, m);
        if weyl != module_dimension(SpaceTag::Algebraic, m) + n * (n - 1) / 2 {
            bad.push(format!("Weyl = Algebraic + Alt fails at {m}"));
        }
    }
    let m4 = Model::euclidean(4).unwrap();
    let headline = [
        (SpaceTag::GenCurv, 80),
        (SpaceTag::Algebraic, 20),
        (SpaceTag::W6, 10),
        (SpaceTag::W7, 30),
        (SpaceTag::W8, 9),
        (SpaceTag::Sym0, 9),
        (SpaceTag::Alt, 6),
        (SpaceTag::Scalar, 1),
    ];
    for (space, d) in headline {
        if module_dimension(space, m4) != d {
            bad.push(format!("{space} at n = 4 is not {d}"));
        }
    }
    let m3 = Model::euclidean(3).unwrap();
    if module_dimension(SpaceTag::W6, m3) != 0 || module_dimension(SpaceTag::W8, m3) != 0 {
        bad.push("W6 or W8 nonzero at n = 3".into());
    }
    let detail = if bad.is_empty() { "10 spaces x 8 models, exact".to_string() } else { bad.join("; ") };
    outcome(bad.is_empty(), detail)
}

fn both_modes(suite: Suite, count: usize, seed: u64) -> (SuiteReport, SuiteReport) {
    let exact = VerifyConfig { models: all_models(), seed, count, tol: 0.0 };
    let float = VerifyConfig { tol: 1e-9, ..exact.clone() };
    (run_suite::<Rational>(suite, &exact), run_suite::<f64>(suite, &float))
}

fn suite_outcome(reports: &[SuiteReport], required: &[&str]) -> Outcome {
    let mut bad = Vec::new();
    for r in reports {
        for c in r.checks.iter().filter(|c| !c.passed()) {
            bad.push(format!("{} [{}]: {} failures", c.name, r.mode, c.failures));
        }
        for name in required {
            if r.check(name).is_none() {
                bad.push(format!("{name} [{}] missing", r.mode));
            }
        }
    }
    let per_model = reports.first().map_or(0, |r| r.count);
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    let float_worst = reports.iter().filter(|r| r.tol > 0.0).map(|r| r.worst_residual()).fold(0.0, f64::max);
    let detail = if bad.is_empty() {
        format!("{checks} checks, {per_model} samples per model and mode, worst float residual {float_worst:.1e}")
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty(), detail)
}

fn criterion_suite(suite: Suite, count: usize, required: &[&str]) -> Outcome {
    let (e, f) = both_modes(suite, count, 20_000);
    suite_outcome(&[e, f], required)
}

// ---------------------------------------------------------------- charts

fn theta(x: f64) -> (f64, f64, f64) {
    (0.3 + 0.1 * x.sin(), 0.1 * x.cos(), -0.1 * x.sin())
}

const N: usize = 4;
const NF: f64 = 4.0;

fn sample_x1() -> Vec<f64> {
    (0..10).map(|k| 0.25 + 0.6 * k as f64).collect()
}

fn point(x1: f64) -> [f64; 4] {
    [x1, 1.0, 2.0, 3.0]
}

/// Worst errors of Γ, ℛ(∂1,∂i)∂i, ℛ(∂i,∂j)∂j and τ against the closed forms
/// on the flat (`conformal = false`) or conformally flat fixture.
fn fixture_errors(conformal: bool, h: f64) -> [f64; 4] {
    let c = fixture(if conformal { "theta_conformal" } else { "theta_flat" }).with_fd_step(h);
    let mut e = [0.0f64; 4];
    for x1 in sample_x1() {
        let (t, t1, t2) = theta(x1);
        let x = point(x1);
        let gm = christoffel_with(&c, &x, ChristoffelMethod::CentralDifference).unwrap();
        for a in 0..N {
            for b in 0..N {
                for d in 0..N {
                    let (got, want) = if conformal {
                        let w = match (a, b, d) {
                            (0, 0, 0) => 0.5 * t1,
                            (0, j, l) | (j, 0, l) if j == l && j > 0 => 0.5 * t1,
                            (i, j, 0) if i == j && i > 0 => -0.5 * t1,
                            _ => 0.0,
                        };
                        (gm.lowered(a, b, d), w)
                    } else {
                        let w = match (a, b, d) {
                            (0, 0, 0) => t,
                            (k, 0, j) | (k, j, 0) if k == j && k > 0 => t,
                            (0, i, j) if i == j && i > 0 => -t,
                            _ => 0.0,
                        };
                        (gm.get(a, b, d), w)
                    };
                    e[0] = e[0].max((got - want).abs());
                }
            }
        }
        let r = curvature_coords(&c, &x).unwrap();
        let (r1, r2) = if conformal {
            (-0.5 * t2 / t + 0.5 * t1 * t1 / (t * t), -0.25 * t1 * t1 / (t * t))
        } else {
            (-t1, -t * t)
        };
        for i in 1..N {
            for l in 0..N {
                e[1] = e[1].max((r.operator(0, i, i, l) - if l == 0 { r1 } else { 0.0 }).abs());
                for j in (1..N).filter(|&j| j != i) {
                    e[2] = e[2].max((r.operator(i, j, j, l) - if l == i { r2 } else { 0.0 }).abs());
                }
            }
        }
        let tau = if conformal {
            -(NF - 1.0) * t2 / (t * t) + (NF - 1.0 - 0.25 * (NF - 1.0) * (NF - 2.0)) * t1 * t1 / (t * t * t)
        } else {
            -2.0 * (NF - 1.0) * t1 - (NF - 1.0) * (NF - 2.0) * t * t
        };
        e[3] = e[3].max((r.tau() - tau).abs());
    }
    e
}

fn second_order(coarse: f64, fine: f64) -> bool {
    fine <= 1e-12 || (3.0..=5.0).contains(&(coarse / fine))
}

fn criterion_fixtures() -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for conformal in [false, true] {
        let (a, b) = (fixture_errors(conformal, 1e-4), fixture_errors(conformal, 5e-5));
        for q in 0..4 {
            worst = worst.max(a[q]);
            if a[q] > 1e-6 || !second_order(a[q], b[q]) {
                bad.push(format!("fixture {} quantity {q}: {:.2e} -> {:.2e}", conformal as u8, a[q], b[q]));
            }
        }
    }
    let (conf, flat) = (fixture("theta_conformal"), fixture("theta_flat"));
    let (mut t, mut lap, mut grad2, mut y, mut div, mut norm2, mut y2) =
        (vec![], vec![], vec![], vec![], vec![], vec![], vec![]);
    for x1 in sample_x1() {
        let (th, t1, t2) = theta(x1);
        t.push(th);
        lap.push(t2);
        grad2.push(t1 * t1);
        y.push(NF * curvature_coords(&conf, &point(x1)).unwrap().tau() / (NF * (NF - 1.0)));
        div.push(t1);
        norm2.push(th * th);
        y2.push(curvature_coords(&flat, &point(x1)).unwrap().tau());
    }
    let f = fit_two_power_terms(&t, &lap, &grad2, &y);
    let (lin, _) = linear_fit(&[div, norm2], &y2);
    let got = [f.a1, f.a2, f.a3, f.a4, lin[0], lin[1]];
    let want = [-1.0, -2.0, -(NF - 6.0) / 4.0, -3.0, -2.0 * (NF - 1.0), -(NF - 1.0) * (NF - 2.0)];
    let fit_err = got.iter().zip(want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    if fit_err > 1e-4 {
        bad.push(format!("constants {got:?}"));
    }
    let detail =
        if bad.is_empty() { format!("worst error {worst:.1e}, constants within {fit_err:.1e}") } else { bad.join("; ") };
    outcome(bad.is_empty(), detail)
}

const REALIZATION_CHARTS: [&str; 3] = ["theta_flat", "lorentz_warped", "s3_nonclosed"];

fn weyl_residual(pf: &PointFrame) -> f64 {
    membership4(&pf.a, SpaceTag::Weyl, 0.0).worst_residual / pf.a.max_abs().max(1e-300)
}

fn points(chart: &Chart, seed: u64, k: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| chart.sample_point(&mut rng, 0.2)).collect()
}

fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().chain(b).fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

fn criterion_realization() -> Outcome {
    let mut bad = Vec::new();
    let mut worst_c = 0.0f64;
    let mut worst_gauge = 0.0f64;
    let f = Expr::parse("0.2*sin(x1)").unwrap();
    for name in REALIZATION_CHARTS {
        let chart = fixture(name);
        let h = chart.fd_step;
        let half = chart.clone().with_fd_step(h / 2.0);
        let pts = points(&chart, 11, 20);
        let coarse: Vec<f64> = pts.iter().map(|x| weyl_residual(&curvature_at(&chart, x).unwrap())).collect();
        let fine: Vec<f64> = pts.iter().map(|x| weyl_residual(&curvature_at(&half, x).unwrap())).collect();
        let c = fine.iter().fold(0.0f64, |m, r| m.max(r / (h * h / 4.0)));
        worst_c = worst_c.max(c);
        for (k, (a, b)) in coarse.iter().zip(&fine).enumerate() {
            if *a > 1.25 * c * h * h + 1e-13 || !second_order(*a, *b) {
                bad.push(format!("{name} point {k}: membership residual {a:.2e} -> {b:.2e}"));
            }
        }
        let gauged = chart.gauge(&f).unwrap();
        for x in &pts {
            let (p, q) = (curvature_at(&chart, x).unwrap(), curvature_at(&gauged, x).unwrap());
            let s = (2.0 * 0.2 * x[0].sin()).exp();
            let up = |v: &[f64]| v.iter().map(|c| c * s).collect::<Vec<f64>>();
            let mut d = max_rel_diff(&p.coords.ricci(), &q.coords.ricci());
            d = d.max(max_rel_diff(ricci(&p.a).components(), &up(ricci(&q.a).components())));
            d = d.max(max_rel_diff(length_form(&p.a).components(), &up(length_form(&q.a).components())));
            d = d.max(max_rel_diff(directional(&p.a).components(), &up(directional(&q.a).components())));
            let (wp, wq) = (WeylTensor::with_tol(p.a.clone(), 1e-5).unwrap(), WeylTensor::with_tol(q.a.clone(), 1e-5).unwrap());
            for i in 1..=8 {
                d = d.max(max_rel_diff(wp.alpha(i).unwrap().components(), &up(wq.alpha(i).unwrap().components())));
                d = d.max(max_rel_diff(wp.pi(i).unwrap().components(), &up(wq.pi(i).unwrap().components())));
            }
            worst_gauge = worst_gauge.max(d);
            if d > 1e-6 {
                bad.push(format!("{name}: gauge difference {d:.2e} at {x:?}"));
            }
            let (cp, cq) = (classify_weyl(&wp, 1e-6), classify_weyl(&wq, 1e-6));
            let flags = |c: &weyl_core::decomp::Classification| {
                [c.is_algebraic, c.is_trivial_pointwise, c.is_einstein_weyl, c.is_constant_curvature_type, c.is_ricci_flat]
            };
            if flags(&cp) != flags(&cq) {
                bad.push(format!("{name}: classification changes under gauge at {x:?}"));
            }
        }
    }
    // the measured sign of the exterior-derivative relation
    let chart = fixture("s3_nonclosed");
    for x in points(&chart, 21, 5) {
        let alt = weyl_chart::curvature_coords_exact(&chart, &x).unwrap().alt_ricci();
        let want: Vec<f64> = exterior_derivative(&chart, &x).iter().map(|v| -1.5 * v).collect();
        if max_rel_diff(&alt, &want) > 1e-10 {
            bad.push(format!("Lambda Ric != -(n/2) d phi at {x:?}"));
        }
    }
    let detail = if bad.is_empty() {
        format!("60 points, C <= {worst_c:.1}, gauge difference {worst_gauge:.1e}")
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty(), detail)
}

fn criterion_bianchi() -> Outcome {
    let chart = fixture("theta_flat");
    let half = chart.clone().with_fd_step(chart.fd_step / 2.0);
    let mut bad = Vec::new();
    let (mut worst, mut uncorrected) = (0.0f64, f64::INFINITY);
    for x in points(&chart, 9, 10) {
        let (a, b) = (bianchi_residuals(&chart, &x).unwrap(), bianchi_residuals(&half, &x).unwrap());
        worst = worst.max(a.max());
        uncorrected = uncorrected.min(a.lowered_uncorrected);
        let pairs = [
            (a.operator, b.operator),
            (a.lowered, b.lowered),
            (a.contracted, b.contracted),
            (a.alternating, b.alternating),
        ];
        if pairs.iter().any(|&(p, q)| !second_order(p, q)) || a.max() > 1e-6 {
            bad.push(format!("{a:?} -> {b:?}"));
        }
        if a.lowered_uncorrected < 1e-2 {
            bad.push(format!("uncorrected residual {:.2e} at {x:?}", a.lowered_uncorrected));
        }
    }
    let detail = if bad.is_empty() {
        format!("worst residual {worst:.1e} at h = 1e-4, uncorrected residual >= {uncorrected:.3}")
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty(), detail)
}

fn criterion_integrals() -> Outcome {
    let mut bad = Vec::new();
    let round = integrate(&fixture("s3_round"), 12).unwrap();
    let rel_curv = round.curvature_gap.abs() / round.kappa_tilde_integral.abs();
    let rel_vol = round.volume_gap.abs() / round.volume_tilde.abs();
    if rel_curv > 1e-4 || rel_vol > 1e-4 {
        bad.push(format!("round sphere gaps {rel_curv:.1e}, {rel_vol:.1e}"));
    }
    let conformal = integrate(&fixture("s3_conformal"), 12).unwrap();
    if !(conformal.curvature_gap > 10.0 * conformal.quadrature_error && conformal.curvature_gap > 0.0) {
        bad.push(format!("conformal curvature gap {:.2e}", conformal.curvature_gap));
    }
    let nonclosed = integrate(&fixture("s3_nonclosed"), 12).unwrap();
    if !(nonclosed.volume_gap > 10.0 * nonclosed.quadrature_error && nonclosed.volume_gap > 0.0) {
        bad.push(format!("nonclosed volume gap {:.2e}", nonclosed.volume_gap));
    }
    for r in [&round, &conformal, &nonclosed] {
        if !(r.curvature_bound_holds && r.volume_bound_holds) {
            bad.push("an inequality is violated".into());
        }
    }
    let detail = if bad.is_empty() {
        format!(
            "round gaps {:.1e}/{:.1e} rel; conformal curvature gap {:.4} (quadrature {:.1e}); nonclosed volume gap {:.4} (quadrature {:.1e})",
            rel_curv, rel_vol, conformal.curvature_gap, conformal.quadrature_error, nonclosed.volume_gap, nonclosed.quadrature_error
        )
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty(), detail)
}

fn main() {
    type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);
    let criteria: Vec<Criterion> = vec![
        ("dimension table", Box::new(criterion_dimensions)),
        (
            "decomposition reconstruction",
            Box::new(|| {
                criterion_suite(
                    Suite::Weyl,
                    500,
                    &["sum of alpha components reconstructs A", "sum of pi components reconstructs A", "alpha6 equals pi6"],
                )
            }),
        ),
        ("Ricci tables", Box::new(|| criterion_suite(Suite::Ricci, 500, &["Ric(pi4) = 0"]))),
        ("Higa battery", Box::new(|| criterion_suite(Suite::Higa, 200, &[]))),
        ("conjugate and trace battery", Box::new(|| criterion_suite(Suite::Conjugate, 200, &[]))),
        ("projective battery", Box::new(|| criterion_suite(Suite::Projective, 200, &[]))),
        (
            "Einstein-Weyl battery",
            Box::new(|| criterion_suite(Suite::Einstein, 400, &["fifteen Einstein-Weyl conditions agree pairwise"])),
        ),
        ("chart fixtures", Box::new(criterion_fixtures)),
        ("pointwise realization and gauge invariance", Box::new(criterion_realization)),
        ("second Bianchi identities", Box::new(criterion_bianchi)),
        ("integral inequalities", Box::new(criterion_integrals)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name} ({:.1}s): {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
