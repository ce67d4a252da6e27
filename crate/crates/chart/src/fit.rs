//! Least-squares recovery of the constants in the conformal scalar-curvature
//! relations from sampled values.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Linear least squares `y ≈ Σ_c coeffs[c] columns[c]`; returns the
/// coefficients and the root-mean-square residual.
pub fn linear_fit(columns: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, f64) {
    let rows = y.len();
    let a = DMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r]);
    let b = DVector::from_column_slice(y);
    let sol = a.clone().svd(true, true).solve(&b, 1e-14).expect("SVD computed with both factors");
    let rms = ((&a * &sol - b).norm_squared() / rows as f64).sqrt();
    (sol.iter().copied().collect(), rms)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerFit {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub rms: f64,
}

fn power_model(p: &[f64; 4], t: &[f64], u: &[f64], w: &[f64]) -> Vec<f64> {
    (0..t.len()).map(|r| p[0] * t[r].powf(p[1]) * u[r] + p[2] * t[r].powf(p[3]) * w[r]).collect()
}

fn rms_of(p: &[f64; 4], t: &[f64], u: &[f64], w: &[f64], y: &[f64]) -> f64 {
    let m = power_model(p, t, u, w);
    (m.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / y.len() as f64).sqrt()
}

/// Fits `y ≈ a1 t^{a2} u + a3 t^{a4} w` with `t > 0`: exponents are scanned
/// on a half-integer grid in `[−8, 8]`, then all four constants are refined by
/// damped Gauss-Newton iterations.
pub fn fit_two_power_terms(t: &[f64], u: &[f64], w: &[f64], y: &[f64]) -> PowerFit {
    let mut best = ([0.0; 4], f64::INFINITY);
    for i in -16..=16 {
        for j in -16..=16 {
            let (e2, e4) = (0.5 * i as f64, 0.5 * j as f64);
            let c1: Vec<f64> = (0..t.len()).map(|r| t[r].powf(e2) * u[r]).collect();
            let c3: Vec<f64> = (0..t.len()).map(|r| t[r].powf(e4) * w[r]).collect();
            let (coef, rms) = linear_fit(&[c1, c3], y);
            if rms < best.1 {
                best = ([coef[0], e2, coef[1], e4], rms);
            }
        }
    }
    let (mut p, mut rms) = best;
    let mut lambda = 1e-3;
    for _ in 0..200 {
        let m = power_model(&p, t, u, w);
        let jac = DMatrix::from_fn(t.len(), 4, |r, c| {
            let lt = t[r].ln();
            match c {
                0 => t[r].powf(p[1]) * u[r],
                1 => p[0] * t[r].powf(p[1]) * lt * u[r],
                2 => t[r].powf(p[3]) * w[r],
                _ => p[2] * t[r].powf(p[3]) * lt * w[r],
            }
        });
        let resid = DVector::from_iterator(t.len(), (0..t.len()).map(|r| y[r] - m[r]));
        let jt = jac.transpose();
        let mut normal = &jt * &jac;
        for d in 0..4 {
            normal[(d, d)] *= 1.0 + lambda;
        }
        let Some(step) = normal.lu().solve(&(&jt * resid)) else { break };
        let trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2], p[3] + step[3]];
        let trial_rms = rms_of(&trial, t, u, w, y);
        if trial_rms < rms {
            let small = step.amax() < 1e-14;
            p = trial;
            rms = trial_rms;
            lambda = (lambda * 0.3).max(1e-12);
            if small {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e8 {
                break;
            }
        }
    }
    PowerFit { a1: p[0], a2: p[1], a3: p[2], a4: p[3], rms }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_planted_constants() {
        let t: Vec<f64> = (0..12).map(|k| 0.2 + 0.05 * k as f64).collect();
        let u: Vec<f64> = (0..12).map(|k| (k as f64 * 0.7).sin()).collect();
        let w: Vec<f64> = (0..12).map(|k| 0.1 + (k as f64 * 0.3).cos().powi(2)).collect();
        let y = power_model(&[-1.3, -2.25, 0.4, 1.7], &t, &u, &w);
        let f = fit_two_power_terms(&t, &u, &w, &y);
        assert!((f.a1 + 1.3).abs() < 1e-8 && (f.a2 + 2.25).abs() < 1e-8, "{f:?}");
        assert!((f.a3 - 0.4).abs() < 1e-8 && (f.a4 - 1.7).abs() < 1e-8, "{f:?}");
        let (c, rms) = linear_fit(&[t.clone(), u.clone()], &t.iter().zip(&u).map(|(a, b)| 2.0 * a - b).collect::<Vec<_>>());
        assert!((c[0] - 2.0).abs() < 1e-12 && (c[1] + 1.0).abs() < 1e-12 && rms < 1e-12);
    }
}
