//! Residuals of the second Bianchi identities of a Weyl connection.
//!
//! Curvature is evaluated exactly at `x ± h e_m`; the outer derivative is a
//! central difference with `h = chart.fd_step`, so residuals scale as `h²`.

use serde::Serialize;

use crate::chart::Chart;
use crate::error::Result;
use crate::geometry::{christoffel, curvature_coords_exact, i3, i4, shifted, CoordCurvature};

/// Max-norm residuals at one point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BianchiResiduals {
    /// `∇_mℛ_ijk^l + ∇_iℛ_jmk^l + ∇_jℛ_mik^l`.
    pub operator: f64,
    /// `∇_mR_ijkl + ∇_iR_jmkl + ∇_jR_mikl + 2(φ_mR_ijkl + φ_iR_jmkl + φ_jR_mikl)`.
    pub lowered: f64,
    /// The same cyclic sum without the `φ` terms.
    pub lowered_uncorrected: f64,
    /// `∇_mRic_jk − ∇_jRic_mk + ∇_iℛ_jmk^i`.
    pub contracted: f64,
    /// `∇_m(ΛRic)_jk + ∇_j(ΛRic)_km + ∇_k(ΛRic)_mj`.
    pub alternating: f64,
}

impl BianchiResiduals {
    /// Largest of the residuals that must vanish.
    pub fn max(&self) -> f64 {
        self.operator.max(self.lowered).max(self.contracted).max(self.alternating)
    }
}

struct Shifted {
    up: Vec<f64>,
    low: Vec<f64>,
    ric: Vec<f64>,
}

impl From<CoordCurvature> for Shifted {
    fn from(c: CoordCurvature) -> Shifted {
        let ric = c.ricci();
        Shifted { up: c.up, low: c.low, ric }
    }
}

fn diff(plus: &[f64], minus: &[f64], h: f64) -> Vec<f64> {
    plus.iter().zip(minus).map(|(a, b)| (a - b) / (2.0 * h)).collect()
}

pub fn bianchi_residuals(chart: &Chart, x: &[f64]) -> Result<BianchiResiduals> {
    let n = chart.n;
    let h = chart.fd_step;
    chart.check_interior(x, 2.0 * h)?;
    let here = curvature_coords_exact(chart, x)?;
    let gamma = christoffel(chart, x)?.up;
    let phi = here.phi.clone();
    let ric = here.ricci();
    let (mut d_up, mut d_low, mut d_ric) = (Vec::new(), Vec::new(), Vec::new());
    for m in 0..n {
        let (xp, xm) = shifted(x, m, h);
        let p: Shifted = curvature_coords_exact(chart, &xp)?.into();
        let q: Shifted = curvature_coords_exact(chart, &xm)?.into();
        d_up.push(diff(&p.up, &q.up, h));
        d_low.push(diff(&p.low, &q.low, h));
        d_ric.push(diff(&p.ric, &q.ric, h));
    }
    let gm = |k: usize, i: usize, j: usize| gamma[i3(n, k, i, j)];
    let up = &here.up;
    let low = &here.low;

    // covariant derivatives, first index is the direction of differentiation
    let mut nabla_up = vec![0.0; n.pow(5)];
    let mut nabla_low = vec![0.0; n.pow(5)];
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let idx = i4(n, i, j, k, l);
                        let mut a = d_up[m][idx];
                        let mut b = d_low[m][idx];
                        for p in 0..n {
                            a -= gm(p, m, i) * up[i4(n, p, j, k, l)]
                                + gm(p, m, j) * up[i4(n, i, p, k, l)]
                                + gm(p, m, k) * up[i4(n, i, j, p, l)];
                            a += gm(l, m, p) * up[i4(n, i, j, k, p)];
                            b -= gm(p, m, i) * low[i4(n, p, j, k, l)]
                                + gm(p, m, j) * low[i4(n, i, p, k, l)]
                                + gm(p, m, k) * low[i4(n, i, j, p, l)]
                                + gm(p, m, l) * low[i4(n, i, j, k, p)];
                        }
                        nabla_up[m * n.pow(4) + idx] = a;
                        nabla_low[m * n.pow(4) + idx] = b;
                    }
                }
            }
        }
    }
    let nu = |m: usize, i: usize, j: usize, k: usize, l: usize| nabla_up[m * n.pow(4) + i4(n, i, j, k, l)];
    let nl = |m: usize, i: usize, j: usize, k: usize, l: usize| nabla_low[m * n.pow(4) + i4(n, i, j, k, l)];

    let mut nabla_ric = vec![0.0; n * n * n];
    let mut nabla_alt = vec![0.0; n * n * n];
    for m in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut v = d_ric[m][j * n + k];
                for p in 0..n {
                    v -= gm(p, m, j) * ric[p * n + k] + gm(p, m, k) * ric[j * n + p];
                }
                nabla_ric[i3(n, m, j, k)] = v;
            }
        }
    }
    for m in 0..n {
        for j in 0..n {
            for k in 0..n {
                nabla_alt[i3(n, m, j, k)] = 0.5 * (nabla_ric[i3(n, m, j, k)] - nabla_ric[i3(n, m, k, j)]);
            }
        }
    }

    let mut r = BianchiResiduals { operator: 0.0, lowered: 0.0, lowered_uncorrected: 0.0, contracted: 0.0, alternating: 0.0 };
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = nu(m, i, j, k, l) + nu(i, j, m, k, l) + nu(j, m, i, k, l);
                        r.operator = r.operator.max(s.abs());
                        let cyc = nl(m, i, j, k, l) + nl(i, j, m, k, l) + nl(j, m, i, k, l);
                        let rhs = -2.0
                            * (phi[m] * low[i4(n, i, j, k, l)]
                                + phi[i] * low[i4(n, j, m, k, l)]
                                + phi[j] * low[i4(n, m, i, k, l)]);
                        r.lowered = r.lowered.max((cyc - rhs).abs());
                        r.lowered_uncorrected = r.lowered_uncorrected.max(cyc.abs());
                    }
                }
            }
        }
    }
    for m in 0..n {
        for j in 0..n {
            for k in 0..n {
                let trace: f64 = (0..n).map(|i| nu(i, j, m, k, i)).sum();
                let c = nabla_ric[i3(n, m, j, k)] - nabla_ric[i3(n, j, m, k)] + trace;
                r.contracted = r.contracted.max(c.abs());
                let a = nabla_alt[i3(n, m, j, k)] + nabla_alt[i3(n, j, k, m)] + nabla_alt[i3(n, k, m, j)];
                r.alternating = r.alternating.max(a.abs());
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Axis;

    #[test]
    fn flat_trivial_chart_has_zero_residuals() {
        let c = Chart::diagonal(&["1", "1", "1"], &["0", "0", "0"], vec![Axis::new(0.0, 1.0, false); 3]).unwrap();
        let r = bianchi_residuals(&c, &[0.5, 0.5, 0.5]).unwrap();
        assert_eq!(r.max(), 0.0);
        assert_eq!(r.lowered_uncorrected, 0.0);
    }

    #[test]
    fn residuals_are_small_on_a_generic_chart() {
        let c = Chart::parse(
            &[&["1 + 0.1*sin(x2)", "0.05*x1", "0"], &["0.05*x1", "2", "0.1*cos(x3)"], &["0", "0.1*cos(x3)", "exp(0.2*x1)"]],
            &["0.2*sin(x2)", "0.1*x3", "0.3*cos(x1)"],
            vec![Axis::new(0.0, 3.0, false); 3],
        )
        .unwrap()
        .with_fd_step(1e-3);
        let r = bianchi_residuals(&c, &[0.4, 1.2, 2.1]).unwrap();
        assert!(r.max() < 1e-5, "{r:?}");
        assert!(r.lowered_uncorrected > 1e-2, "{r:?}");
    }
}
