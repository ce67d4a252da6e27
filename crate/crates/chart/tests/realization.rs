mod common;

use common::{fixture, max_abs_diff, rng};
use weyl_chart::{curvature_at, curvature_coords_exact, exterior_derivative, scalar_curvature, Chart, Expr, PointFrame};
use weyl_core::decomp::{classify_weyl, WeylTensor};
use weyl_core::tensor::membership4;
use weyl_core::traces::{directional, length_form, ricci};
use weyl_core::{Curv4, SpaceTag};

const CHARTS: [&str; 3] = ["theta_flat", "lorentz_warped", "s3_nonclosed"];
const TOL: f64 = 1e-6;

fn weyl_residual(pf: &PointFrame) -> f64 {
    let scale = pf.a.max_abs().max(1e-300);
    membership4(&pf.a, SpaceTag::Weyl, 0.0).worst_residual / scale
}

#[test]
fn curvature_lies_in_weyl_space_up_to_second_order_error() {
    for name in CHARTS {
        let chart = fixture(name);
        let h = chart.fd_step;
        let mut r = rng(11);
        let points: Vec<Vec<f64>> = (0..20).map(|_| chart.sample_point(&mut r, 0.2)).collect();
        let coarse: Vec<f64> = points.iter().map(|x| weyl_residual(&curvature_at(&chart, x).unwrap())).collect();
        let half = chart.clone().with_fd_step(h / 2.0);
        let fine: Vec<f64> = points.iter().map(|x| weyl_residual(&curvature_at(&half, x).unwrap())).collect();
        // C calibrated on the halved step
        let c = fine.iter().map(|f| f / (h * h / 4.0)).fold(0.0, f64::max);
        for (k, (a, b)) in coarse.iter().zip(&fine).enumerate() {
            assert!(*a <= 1.25 * c * h * h + 1e-13, "{name} point {k}: {a:e} vs C = {c}");
            assert!(*b <= 1e-13 || (3.0..=5.0).contains(&(a / b)), "{name} point {k}: ratio {}", a / b);
        }
        let exact = curvature_coords_exact(&chart, &points[0]).unwrap();
        let pf = PointFrame::from_coords(exact).unwrap();
        assert!(weyl_residual(&pf) < 1e-12, "{name}: exact route");
    }
}

fn assert_close(name: &str, what: &str, a: &[f64], b: &[f64]) {
    let scale = a.iter().chain(b).map(|x| x.abs()).fold(1.0, f64::max);
    let d = max_abs_diff(a, b);
    assert!(d <= TOL * scale, "{name}: {what} differs by {d:e}");
}

fn rescaled(a: &Curv4<f64>, s: f64) -> Vec<f64> {
    a.components().iter().map(|x| x * s).collect()
}

#[test]
fn frame_quantities_are_gauge_invariant() {
    let f = Expr::parse("0.2*sin(x1)").unwrap();
    for name in CHARTS {
        let chart = fixture(name);
        let gauged = chart.gauge(&f).unwrap();
        let mut r = rng(5);
        for _ in 0..20 {
            let x = chart.sample_point(&mut r, 0.2);
            let p = curvature_at(&chart, &x).unwrap();
            let q = curvature_at(&gauged, &x).unwrap();
            assert_eq!(p.model, q.model);
            assert_close(name, "coordinate Ric", &p.coords.ricci(), &q.coords.ricci());
            // the orthonormal frame scales by e^{-f}, frame components by e^{-2f}
            let s = (2.0 * 0.2 * x[0].sin()).exp();
            assert_close(name, "A", p.a.components(), &rescaled(&q.a, s));
            let (rp, rq) = (ricci(&p.a), ricci(&q.a));
            assert_close(name, "Ric", rp.components(), rq.scale(s).components());
            assert_close(name, "F", length_form(&p.a).components(), length_form(&q.a).scale(s).components());
            assert_close(name, "K", directional(&p.a).components(), &rescaled(&directional(&q.a), s));
            let wp = WeylTensor::with_tol(p.a.clone(), 1e-5).unwrap();
            let wq = WeylTensor::with_tol(q.a.clone(), 1e-5).unwrap();
            for i in 1..=8 {
                assert_close(name, &format!("alpha{i}"), wp.alpha(i).unwrap().components(), &rescaled(&wq.alpha(i).unwrap(), s));
                assert_close(name, &format!("pi{i}"), wp.pi(i).unwrap().components(), &rescaled(&wq.pi(i).unwrap(), s));
            }
            let (cp, cq) = (classify_weyl(&wp, 1e-6), classify_weyl(&wq, 1e-6));
            assert_eq!(cp.is_algebraic, cq.is_algebraic, "{name}");
            assert_eq!(cp.is_trivial_pointwise, cq.is_trivial_pointwise, "{name}");
            assert_eq!(cp.is_einstein_weyl, cq.is_einstein_weyl, "{name}");
            assert_eq!(cp.is_constant_curvature_type, cq.is_constant_curvature_type, "{name}");
            assert_eq!(cp.is_ricci_flat, cq.is_ricci_flat, "{name}");
        }
    }
}

#[test]
fn scalar_curvature_transforms_with_the_gauge() {
    let f = Expr::parse("0.2*sin(x1) + 0.1*cos(x2)").unwrap();
    for name in CHARTS {
        let chart = fixture(name);
        let gauged = chart.gauge(&f).unwrap();
        let mut r = rng(8);
        for _ in 0..10 {
            let x = chart.sample_point(&mut r, 0.2);
            let t0 = scalar_curvature(&chart, &x).unwrap();
            let t1 = scalar_curvature(&gauged, &x).unwrap();
            let e = (-2.0 * f.eval_f64(&x)).exp();
            assert!((t1 - e * t0).abs() <= 1e-12 * (1.0 + t0.abs()), "{name}: {t1} vs {}", e * t0);
        }
    }
}

#[test]
fn alternating_ricci_vanishes_exactly_for_closed_forms() {
    let exact = fixture("s3_conformal");
    let closed = fixture("theta_flat");
    let open = fixture("s3_nonclosed");
    let mut r = rng(3);
    let mut seen_nonzero = false;
    for _ in 0..20 {
        for c in [&exact, &closed] {
            let x = c.sample_point(&mut r, 0.2);
            let p = curvature_at(c, &x).unwrap();
            let alt = p.coords.alt_ricci();
            let scale = p.coords.ricci().iter().map(|v| v.abs()).fold(1.0, f64::max);
            assert!(alt.iter().all(|v| v.abs() <= 1e-8 * scale));
            assert!(classify_weyl(&WeylTensor::with_tol(p.a, 1e-5).unwrap(), 1e-6).is_trivial_pointwise);
        }
        let x = open.sample_point(&mut r, 0.2);
        let alt = curvature_at(&open, &x).unwrap().coords.alt_ricci();
        seen_nonzero |= alt.iter().any(|v| v.abs() > 1e-3);
    }
    assert!(seen_nonzero);
}

/// Measured relation: `Λ Ric = −(n/2) dφ` with `(dφ)_ij = ∂_iφ_j − ∂_jφ_i`,
/// hence `F = −(2/n) Λ Ric = dφ`.
#[test]
fn alternating_ricci_is_minus_half_n_times_d_phi() {
    for name in ["lorentz_warped", "s3_nonclosed"] {
        let chart = fixture(name);
        let n = chart.n as f64;
        let mut r = rng(21);
        for _ in 0..10 {
            let x = chart.sample_point(&mut r, 0.2);
            let alt = curvature_coords_exact(&chart, &x).unwrap().alt_ricci();
            let d = exterior_derivative(&chart, &x);
            let want: Vec<f64> = d.iter().map(|v| -0.5 * n * v).collect();
            assert!(max_abs_diff(&alt, &want) < 1e-12, "{name}");
            assert!(d.iter().any(|v| v.abs() > 1e-3), "{name}: dφ should not vanish");
        }
    }
}

#[test]
fn einstein_weyl_condition_is_conformally_invariant() {
    let f = Expr::parse("0.3*cos(x2)*sin(x1)").unwrap();
    let cases: [(&str, bool); 3] = [("s3_round", true), ("s3_conformal", true), ("theta_flat", false)];
    for (name, expected) in cases {
        let chart: Chart = fixture(name);
        let gauged = chart.gauge(&f).unwrap();
        let mut r = rng(2);
        for _ in 0..5 {
            let x = chart.sample_point(&mut r, 0.2);
            let a = curvature_at(&chart, &x).unwrap();
            let b = curvature_at(&gauged, &x).unwrap();
            let ca = classify_weyl(&WeylTensor::with_tol(a.a, 1e-5).unwrap(), 1e-6);
            let cb = classify_weyl(&WeylTensor::with_tol(b.a, 1e-5).unwrap(), 1e-6);
            assert_eq!(ca.is_einstein_weyl, expected, "{name}");
            assert_eq!(cb.is_einstein_weyl, expected, "{name} after gauge");
        }
    }
}
