mod common;

use common::{fixture, rng};
use weyl_chart::{bianchi_residuals, curvature_coords_exact};

#[test]
fn bianchi_residuals_vanish_at_second_order() {
    for name in ["theta_flat", "s3_nonclosed", "lorentz_warped"] {
        let chart = fixture(name);
        let h = chart.fd_step;
        let half = chart.clone().with_fd_step(h / 2.0);
        let mut r = rng(9);
        for _ in 0..5 {
            let x = chart.sample_point(&mut r, 0.2);
            let a = bianchi_residuals(&chart, &x).unwrap();
            let b = bianchi_residuals(&half, &x).unwrap();
            assert!(a.max() <= 1e-5, "{name}: {a:?}");
            for (p, q) in [(a.operator, b.operator), (a.lowered, b.lowered), (a.contracted, b.contracted), (a.alternating, b.alternating)] {
                assert!(q <= 1e-12 || (3.0..=5.0).contains(&(p / q)), "{name}: {p:e} -> {q:e}");
            }
            // dropping the φ terms leaves a residual of the size of φ ⊗ R
            assert!(a.lowered_uncorrected >= 1e-2, "{name}: {a:?}");
        }
    }
}

#[test]
fn closedness_of_alternating_ricci_survives_a_nonclosed_potential() {
    let chart = fixture("s3_nonclosed");
    let x = [0.7, 1.0, 2.0];
    let alt = curvature_coords_exact(&chart, &x).unwrap().alt_ricci();
    assert!(alt.iter().any(|v| v.abs() > 1e-2), "{alt:?}");
    let r = bianchi_residuals(&chart, &x).unwrap();
    assert!(r.alternating < 1e-6, "{r:?}");
}
