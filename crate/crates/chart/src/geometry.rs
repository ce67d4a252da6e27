//! Connection and curvature of the Weyl structure `(g, φ)` on a chart.
//!
//! Index conventions: `Γ^k_ij` is stored at `(k*n + i)*n + j` and satisfies
//! `∇_{∂i} ∂j = Γ^k_ij ∂k`. The curvature `ℛ(∂i,∂j)∂k = ℛ_ijk^l ∂l` is stored
//! at `((i*n + j)*n + k)*n + l`, and `R_ijkl = g(ℛ(∂i,∂j)∂k, ∂l)` uses the
//! same layout.

use serde::Serialize;
use weyl_core::{Curv4, Model};

use crate::chart::Chart;
use crate::error::{ChartError, Result};
use crate::jet::Jet;
use crate::real::Real;

#[inline]
pub(crate) fn i3(n: usize, a: usize, b: usize, c: usize) -> usize {
    (a * n + b) * n + c
}

#[inline]
pub(crate) fn i4(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

/// Inverse by Gauss-Jordan elimination with partial pivoting on the values.
pub(crate) fn invert<T: Real>(m: &[T], n: usize) -> Option<Vec<T>> {
    let scale = m.iter().map(|x| x.value().abs()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let mut a = m.to_vec();
    let mut inv: Vec<T> = (0..n * n).map(|k| m[0].lift(if k / n == k % n { 1.0 } else { 0.0 })).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| a[r * n + col].value().abs().total_cmp(&a[s * n + col].value().abs()))
            .expect("non-empty range");
        if a[piv * n + col].value().abs() <= 1e-13 * scale {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
                inv.swap(piv * n + k, col * n + k);
            }
        }
        let p = a[col * n + col].clone();
        for k in 0..n {
            a[col * n + k] = a[col * n + k].clone() / p.clone();
            inv[col * n + k] = inv[col * n + k].clone() / p.clone();
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col].clone();
            for k in 0..n {
                a[r * n + k] = a[r * n + k].clone() - f.clone() * a[col * n + k].clone();
                inv[r * n + k] = inv[r * n + k].clone() - f.clone() * inv[col * n + k].clone();
            }
        }
    }
    Some(inv)
}

pub(crate) fn determinant(m: &[f64], n: usize) -> f64 {
    let mut a = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs())).unwrap();
        if a[piv * n + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            for k in col..n {
                a[r * n + k] -= f * a[col * n + k];
            }
        }
    }
    det
}

/// Whether the symmetric matrix admits a Cholesky factorization.
pub(crate) fn positive_definite(m: &[f64], n: usize) -> bool {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = m[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = m[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    true
}

/// Weyl Christoffel symbols from `g`, `g⁻¹`, `∂g` (`dg[m]` holds `∂_m g`) and
/// `φ`: the Levi-Civita symbols plus `φ_i δ^k_j + φ_j δ^k_i − g_ij φ^k`.
pub(crate) fn weyl_gamma<T: Real>(n: usize, g: &[T], ginv: &[T], dg: &[Vec<T>], phi: &[T]) -> Vec<T> {
    let zero = g[0].lift(0.0);
    let mut low = vec![zero.clone(); n * n * n];
    for i in 0..n {
        for j in i..n {
            for l in 0..n {
                let v = (dg[i][j * n + l].clone() + dg[j][i * n + l].clone() - dg[l][i * n + j].clone()).scale(0.5);
                low[i3(n, i, j, l)] = v.clone();
                low[i3(n, j, i, l)] = v;
            }
        }
    }
    let phi_up: Vec<T> = (0..n)
        .map(|k| (0..n).fold(zero.clone(), |acc, l| acc + ginv[k * n + l].clone() * phi[l].clone()))
        .collect();
    let mut gamma = vec![zero.clone(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut v = (0..n).fold(zero.clone(), |acc, l| acc + ginv[k * n + l].clone() * low[i3(n, i, j, l)].clone());
                if j == k {
                    v = v + phi[i].clone();
                }
                if i == k {
                    v = v + phi[j].clone();
                }
                v = v - g[i * n + j].clone() * phi_up[k].clone();
                gamma[i3(n, k, i, j)] = v.clone();
                gamma[i3(n, k, j, i)] = v;
            }
        }
    }
    gamma
}

/// `ℛ_ijk^l = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik`, with
/// `dgamma[m]` holding `∂_m Γ`.
pub(crate) fn riemann_up<T: Real>(n: usize, gamma: &[T], dgamma: &[Vec<T>]) -> Vec<T> {
    let zero = gamma[0].lift(0.0);
    let mut r = vec![zero.clone(); n * n * n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = dgamma[i][i3(n, l, j, k)].clone() - dgamma[j][i3(n, l, i, k)].clone();
                    for m in 0..n {
                        v = v + gamma[i3(n, l, i, m)].clone() * gamma[i3(n, m, j, k)].clone()
                            - gamma[i3(n, l, j, m)].clone() * gamma[i3(n, m, i, k)].clone();
                    }
                    r[i4(n, j, i, k, l)] = -v.clone();
                    r[i4(n, i, j, k, l)] = v;
                }
            }
        }
    }
    r
}

pub(crate) fn lower_last<T: Real>(n: usize, up: &[T], g: &[T]) -> Vec<T> {
    let zero = g[0].lift(0.0);
    let mut low = vec![zero.clone(); up.len()];
    for ijk in 0..n * n * n {
        for l in 0..n {
            low[ijk * n + l] = (0..n).fold(zero.clone(), |acc, p| acc + up[ijk * n + p].clone() * g[p * n + l].clone());
        }
    }
    low
}

/// `Ric_jk = ℛ_ijk^i`.
pub(crate) fn ricci_coords<T: Real>(n: usize, up: &[T]) -> Vec<T> {
    let zero = up[0].lift(0.0);
    let mut ric = vec![zero.clone(); n * n];
    for j in 0..n {
        for k in 0..n {
            ric[j * n + k] = (0..n).fold(zero.clone(), |acc, i| acc + up[i4(n, i, j, k, i)].clone());
        }
    }
    ric
}

pub(crate) fn trace_with<T: Real>(n: usize, ginv: &[T], b: &[T]) -> T {
    let zero = b[0].lift(0.0);
    (0..n * n).fold(zero, |acc, k| acc + ginv[k].clone() * b[k].clone())
}

/// How `∂g` enters the Christoffel symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChristoffelMethod {
    /// Exact derivatives of the metric expressions.
    Exact,
    /// Central differences of `g` with the chart's `fd_step`.
    CentralDifference,
}

#[derive(Debug, Clone, Serialize)]
pub struct Christoffel {
    pub n: usize,
    /// `Γ^k_ij` at `(k*n + i)*n + j`.
    pub up: Vec<f64>,
    /// `Γ_ijl = g_lk Γ^k_ij` at `(i*n + j)*n + l`.
    pub lowered: Vec<f64>,
}

impl Christoffel {
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.up[i3(self.n, k, i, j)]
    }

    pub fn lowered(&self, i: usize, j: usize, l: usize) -> f64 {
        self.lowered[i3(self.n, i, j, l)]
    }

    fn from_up(n: usize, up: Vec<f64>, g: &[f64]) -> Christoffel {
        let mut lowered = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    lowered[i3(n, i, j, l)] = (0..n).map(|k| g[l * n + k] * up[i3(n, k, i, j)]).sum();
                }
            }
        }
        Christoffel { n, up, lowered }
    }
}

/// Jets of `g`, `g⁻¹`, `φ` and `Γ` at `x`; `Γ` is exact to `order − 1`.
pub(crate) struct JetConnection {
    pub g: Vec<Jet>,
    pub ginv: Vec<Jet>,
    pub phi: Vec<Jet>,
    pub gamma: Vec<Jet>,
}

pub(crate) fn jet_connection(n: usize, g: Vec<Jet>, phi: Vec<Jet>, point: &[f64]) -> Result<JetConnection> {
    let ginv = invert(&g, n).ok_or_else(|| ChartError::SingularMetric { point: point.to_vec() })?;
    let dg: Vec<Vec<Jet>> = (0..n).map(|m| g.iter().map(|e| e.d(m)).collect()).collect();
    let gamma = weyl_gamma(n, &g, &ginv, &dg, &phi);
    Ok(JetConnection { g, ginv, phi, gamma })
}

impl JetConnection {
    pub fn riemann_up(&self, n: usize) -> Vec<Jet> {
        let dgamma: Vec<Vec<Jet>> = (0..n).map(|m| self.gamma.iter().map(|e| e.d(m)).collect()).collect();
        riemann_up(n, &self.gamma, &dgamma)
    }

    /// The Weyl scalar curvature `τ = g^{jk} Ric_jk`.
    pub fn tau(&self, n: usize) -> Jet {
        let up = self.riemann_up(n);
        trace_with(n, &self.ginv, &ricci_coords(n, &up))
    }
}

fn values(v: &[Jet]) -> Vec<f64> {
    v.iter().map(Real::value).collect()
}

fn exact_gamma(chart: &Chart, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
    let (g, phi) = chart.jets(x, 1);
    let c = jet_connection(chart.n, g, phi, x)?;
    Ok((values(&c.g), values(&c.ginv), values(&c.phi), values(&c.gamma)))
}

/// Christoffel symbols of the Weyl connection at `x`, with `∂g` taken exactly.
pub fn christoffel(chart: &Chart, x: &[f64]) -> Result<Christoffel> {
    christoffel_with(chart, x, ChristoffelMethod::Exact)
}

pub fn christoffel_with(chart: &Chart, x: &[f64], method: ChristoffelMethod) -> Result<Christoffel> {
    chart.check_interior(x, 0.0)?;
    let n = chart.n;
    match method {
        ChristoffelMethod::Exact => {
            let (g, _, _, gamma) = exact_gamma(chart, x)?;
            Ok(Christoffel::from_up(n, gamma, &g))
        }
        ChristoffelMethod::CentralDifference => {
            let h = chart.fd_step;
            chart.check_interior(x, h)?;
            let g = chart.metric_at(x);
            let ginv = invert(&g, n).ok_or_else(|| ChartError::SingularMetric { point: x.to_vec() })?;
            let dg: Vec<Vec<f64>> = (0..n)
                .map(|m| {
                    let (plus, minus) = shifted(x, m, h);
                    let gp = chart.metric_at(&plus);
                    let gm = chart.metric_at(&minus);
                    gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect()
                })
                .collect();
            let gamma = weyl_gamma(n, &g, &ginv, &dg, &chart.phi_at(x));
            Ok(Christoffel::from_up(n, gamma, &g))
        }
    }
}

pub(crate) fn shifted(x: &[f64], m: usize, h: f64) -> (Vec<f64>, Vec<f64>) {
    let mut plus = x.to_vec();
    let mut minus = x.to_vec();
    plus[m] += h;
    minus[m] -= h;
    (plus, minus)
}

/// Curvature of the Weyl connection in coordinate components at one point.
#[derive(Debug, Clone, Serialize)]
pub struct CoordCurvature {
    pub n: usize,
    pub point: Vec<f64>,
    pub metric: Vec<f64>,
    pub inverse: Vec<f64>,
    pub phi: Vec<f64>,
    pub gamma: Vec<f64>,
    /// `ℛ_ijk^l` at `((i*n + j)*n + k)*n + l`.
    pub up: Vec<f64>,
    /// `R_ijkl = g(ℛ(∂i,∂j)∂k, ∂l)`.
    pub low: Vec<f64>,
}

impl CoordCurvature {
    /// Component `l` of `ℛ(∂i,∂j)∂k`.
    pub fn operator(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.up[i4(self.n, i, j, k, l)]
    }

    pub fn ricci(&self) -> Vec<f64> {
        ricci_coords(self.n, &self.up)
    }

    pub fn tau(&self) -> f64 {
        trace_with(self.n, &self.inverse, &self.ricci())
    }

    /// `Λ Ric_jk = (Ric_jk − Ric_kj) / 2`.
    pub fn alt_ricci(&self) -> Vec<f64> {
        let n = self.n;
        let ric = self.ricci();
        (0..n * n).map(|k| 0.5 * (ric[k] - ric[(k % n) * n + k / n])).collect()
    }
}

/// Curvature with `∂Γ` by central differences of the exact Christoffel
/// symbols, step `chart.fd_step`.
pub fn curvature_coords(chart: &Chart, x: &[f64]) -> Result<CoordCurvature> {
    let n = chart.n;
    let h = chart.fd_step;
    chart.check_interior(x, 2.0 * h)?;
    let (g, ginv, phi, gamma) = exact_gamma(chart, x)?;
    let dgamma = (0..n)
        .map(|m| {
            let (plus, minus) = shifted(x, m, h);
            let gp = exact_gamma(chart, &plus)?.3;
            let gm = exact_gamma(chart, &minus)?.3;
            Ok(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let up = riemann_up(n, &gamma, &dgamma);
    let low = lower_last(n, &up, &g);
    Ok(CoordCurvature { n, point: x.to_vec(), metric: g, inverse: ginv, phi, gamma, up, low })
}

/// Curvature with every derivative taken exactly (second-order jets).
pub fn curvature_coords_exact(chart: &Chart, x: &[f64]) -> Result<CoordCurvature> {
    let n = chart.n;
    chart.check_interior(x, 0.0)?;
    let (g, phi) = chart.jets(x, 2);
    let c = jet_connection(n, g, phi, x)?;
    let up = values(&c.riemann_up(n));
    let g = values(&c.g);
    let low = lower_last(n, &up, &g);
    Ok(CoordCurvature {
        n,
        point: x.to_vec(),
        inverse: values(&c.ginv),
        phi: values(&c.phi),
        gamma: values(&c.gamma),
        metric: g,
        up,
        low,
    })
}

/// An orthonormal frame `E_a = frame[i*n + a] ∂_i` for `g`, ordered with the
/// timelike vectors first. Returns the frame and the number of them.
pub fn orthonormal_frame(g: &[f64], n: usize) -> Option<(Vec<f64>, usize)> {
    let scale = g.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let ip = |u: &[f64], v: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += u[i] * g[i * n + j] * v[j];
            }
        }
        s
    };
    let mut pending: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut basis: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n);
    let project = |w: &mut Vec<f64>, basis: &[(Vec<f64>, f64)]| {
        for (e, s) in basis {
            let c = s * ip(w, e);
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi -= c * ei;
            }
        }
    };
    while !pending.is_empty() {
        for w in pending.iter_mut() {
            project(w, &basis);
        }
        let norm_ok = |w: &Vec<f64>| ip(w, w).abs() > 1e-10 * scale * w.iter().map(|x| x * x).sum::<f64>();
        let pick = match pending.iter().position(norm_ok) {
            Some(k) => k,
            None => {
                // every remaining direction is null: use a sum or difference
                let mut found = None;
                'outer: for a in 0..pending.len() {
                    for b in 0..pending.len() {
                        if a == b {
                            continue;
                        }
                        for sign in [1.0, -1.0] {
                            let w: Vec<f64> = pending[a].iter().zip(&pending[b]).map(|(x, y)| x + sign * y).collect();
                            if norm_ok(&w) {
                                pending[a] = w;
                                found = Some(a);
                                break 'outer;
                            }
                        }
                    }
                }
                found?
            }
        };
        let w = pending.remove(pick);
        let q = ip(&w, &w);
        let e: Vec<f64> = w.iter().map(|x| x / q.abs().sqrt()).collect();
        basis.push((e, q.signum()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| basis[a].1 > 0.0);
    let p = basis.iter().filter(|(_, s)| *s < 0.0).count();
    let mut frame = vec![0.0; n * n];
    for (a, &src) in order.iter().enumerate() {
        for i in 0..n {
            frame[i * n + a] = basis[src].0[i];
        }
    }
    Some((frame, p))
}

/// Contracts every slot of a rank-4 coordinate tensor with the frame.
pub(crate) fn to_frame(t: &[f64], frame: &[f64], n: usize) -> Vec<f64> {
    let mut cur = t.to_vec();
    for slot in 0..4 {
        let stride = n.pow(3 - slot as u32);
        let mut next = vec![0.0; cur.len()];
        for (idx, out) in next.iter_mut().enumerate() {
            let a = (idx / stride) % n;
            let base = idx - a * stride;
            *out = (0..n).map(|i| cur[base + i * stride] * frame[i * n + a]).sum();
        }
        cur = next;
    }
    cur
}

/// The curvature at a point, rewritten in an orthonormal frame so that it
/// lives over a diagonal `±1` model.
#[derive(Debug, Clone)]
pub struct PointFrame {
    pub point: Vec<f64>,
    pub model: Model,
    pub metric: Vec<f64>,
    /// `E_a = frame[i*n + a] ∂_i`.
    pub frame: Vec<f64>,
    pub a: Curv4<f64>,
    pub coords: CoordCurvature,
}

impl PointFrame {
    pub fn from_coords(coords: CoordCurvature) -> Result<PointFrame> {
        let n = coords.n;
        let (frame, p) = orthonormal_frame(&coords.metric, n)
            .ok_or_else(|| ChartError::SingularMetric { point: coords.point.clone() })?;
        let model = Model::new(n, p, n - p)?;
        let comps = to_frame(&coords.low, &frame, n);
        let a = Curv4::from_components(model, comps)?;
        Ok(PointFrame { point: coords.point.clone(), model, metric: coords.metric.clone(), frame, a, coords })
    }
}

/// Curvature at `x` in an orthonormal frame (`∂Γ` by central differences).
pub fn curvature_at(chart: &Chart, x: &[f64]) -> Result<PointFrame> {
    PointFrame::from_coords(curvature_coords(chart, x)?)
}

/// Like [`curvature_at`] with all derivatives exact.
pub fn curvature_at_exact(chart: &Chart, x: &[f64]) -> Result<PointFrame> {
    PointFrame::from_coords(curvature_coords_exact(chart, x)?)
}

/// `(dφ)_ij = ∂_iφ_j − ∂_jφ_i`, from exact derivatives of the expressions.
pub fn exterior_derivative(chart: &Chart, x: &[f64]) -> Vec<f64> {
    let n = chart.n;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = chart.phi[j].diff(i).eval_f64(x) - chart.phi[i].diff(j).eval_f64(x);
        }
    }
    out
}
