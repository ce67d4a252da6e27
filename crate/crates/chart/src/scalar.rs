//! Scalar curvature, the canonical metric `g̃ = τ_g g`, and the conformal
//! scalar-curvature relations, all computed from fourth-order jets.

use serde::Serialize;

use crate::chart::Chart;
use crate::error::{ChartError, Region, Result};
use crate::geometry::{determinant, jet_connection, positive_definite, JetConnection};
use crate::jet::Jet;
use crate::real::Real;

/// Values below this magnitude count as `τ = 0`.
pub const TAU_ZERO: f64 = 1e-10;

/// Accepted deviation of `τ_{g̃}` from 1, per unit of
/// [`ScalarData::conditioning`].
pub const CANONICAL_TOL: f64 = 1e-8;

/// Everything the scalar relations and integrals need at one point.
#[derive(Debug, Clone, Serialize)]
pub struct ScalarData {
    pub point: Vec<f64>,
    pub tau: f64,
    pub grad_tau: Vec<f64>,
    /// `Δ_g τ` for the Laplace-Beltrami operator of `g`.
    pub laplacian_tau: f64,
    /// `‖grad_g τ‖²_g`.
    pub grad_tau_norm2: f64,
    /// Normalized scalar curvature of the Levi-Civita connection of `g`.
    pub kappa: f64,
    /// Normalized scalar curvature of the Levi-Civita connection of `g̃`.
    pub kappa_tilde: f64,
    /// Weyl scalar curvature of `(g̃, φ̃)`.
    pub tau_tilde: f64,
    /// `∇^{g̃}_k φ̃^k`.
    pub div_phi_tilde: f64,
    /// `‖φ̃‖²_{g̃}`.
    pub phi_tilde_norm2: f64,
    /// `Ξ_g = |det g|^{1/2}`.
    pub volume_density: f64,
    pub volume_density_tilde: f64,
    pub g_tilde: Vec<f64>,
    pub phi_tilde: Vec<f64>,
}

impl ScalarData {
    /// Size of the terms that cancel in `τ_{g̃}`, relative to its value 1:
    /// `max(1, |Δτ|/τ², ‖grad τ‖²/τ³)`. Rounding errors grow with it as
    /// `τ` approaches 0.
    pub fn conditioning(&self) -> f64 {
        let t = self.tau;
        (self.laplacian_tau.abs() / (t * t)).max(self.grad_tau_norm2 / (t * t * t)).max(1.0)
    }
}

fn levi_civita(n: usize, g: &[Jet], point: &[f64]) -> Result<JetConnection> {
    let zero = g[0].lift(0.0);
    jet_connection(n, g.to_vec(), vec![zero; n], point)
}

fn nonpositive(point: &[f64], tau: f64) -> ChartError {
    let region = if tau.abs() <= TAU_ZERO { Region::N0 } else { Region::NMinus };
    ChartError::NonPositiveScalarCurvature { point: point.to_vec(), tau, region }
}

/// Weyl scalar curvature `τ_g = Tr_g Ric` at `x`, from exact derivatives.
pub fn scalar_curvature(chart: &Chart, x: &[f64]) -> Result<f64> {
    chart.check_interior(x, 0.0)?;
    let (g, phi) = chart.jets(x, 2);
    Ok(jet_connection(chart.n, g, phi, x)?.tau(chart.n).value())
}

pub fn scalar_data(chart: &Chart, x: &[f64]) -> Result<ScalarData> {
    chart.check_interior(x, 0.0)?;
    let n = chart.n;
    let nf = n as f64;
    let (g, phi) = chart.jets(x, 4);
    let weyl = jet_connection(n, g.clone(), phi.clone(), x)?;
    let tau = weyl.tau(n);
    if tau.value() <= TAU_ZERO {
        return Err(nonpositive(x, tau.value()));
    }
    let lc = levi_civita(n, &g, x)?;
    let kappa = lc.tau(n).value() / (nf * (nf - 1.0));
    let ginv: Vec<f64> = weyl.ginv.iter().map(Real::value).collect();
    let lc_gamma: Vec<f64> = lc.gamma.iter().map(Real::value).collect();

    let grad_tau: Vec<f64> = (0..n).map(|i| tau.d1(i)).collect();
    let mut laplacian_tau = 0.0;
    let mut grad_tau_norm2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let gij = ginv[i * n + j];
            let christ: f64 = (0..n).map(|k| lc_gamma[(k * n + i) * n + j] * grad_tau[k]).sum();
            laplacian_tau += gij * (tau.d2(i, j) - christ);
            grad_tau_norm2 += gij * grad_tau[i] * grad_tau[j];
        }
    }

    let g_tilde: Vec<Jet> = g.iter().map(|e| tau.clone() * e.clone()).collect();
    let ln_tau = tau.ln();
    let phi_tilde: Vec<Jet> = (0..n).map(|i| phi[i].clone() - ln_tau.d(i).scale(0.5)).collect();
    let weyl_tilde = jet_connection(n, g_tilde.clone(), phi_tilde.clone(), x)?;
    let tau_tilde = weyl_tilde.tau(n).value();
    let lc_tilde = levi_civita(n, &g_tilde, x)?;
    let kappa_tilde = lc_tilde.tau(n).value() / (nf * (nf - 1.0));

    let gt_inv = &weyl_tilde.ginv;
    let phi_up: Vec<Jet> = (0..n)
        .map(|k| (0..n).fold(phi_tilde[0].lift(0.0), |acc, l| acc + gt_inv[k * n + l].clone() * phi_tilde[l].clone()))
        .collect();
    let mut div_phi_tilde = 0.0;
    for k in 0..n {
        div_phi_tilde += phi_up[k].d1(k);
        for l in 0..n {
            div_phi_tilde += lc_tilde.gamma[(k * n + k) * n + l].value() * phi_up[l].value();
        }
    }
    let phi_tilde_norm2: f64 = (0..n).map(|k| phi_up[k].value() * phi_tilde[k].value()).sum();

    let g_val: Vec<f64> = g.iter().map(Real::value).collect();
    let gt_val: Vec<f64> = g_tilde.iter().map(Real::value).collect();
    Ok(ScalarData {
        point: x.to_vec(),
        tau: tau.value(),
        grad_tau,
        laplacian_tau,
        grad_tau_norm2,
        kappa,
        kappa_tilde,
        tau_tilde,
        div_phi_tilde,
        phi_tilde_norm2,
        volume_density: determinant(&g_val, n).abs().sqrt(),
        volume_density_tilde: determinant(&gt_val, n).abs().sqrt(),
        g_tilde: gt_val,
        phi_tilde: phi_tilde.iter().map(Real::value).collect(),
    })
}

/// The canonical Weyl metric at a point.
#[derive(Debug, Clone, Serialize)]
pub struct Canonical {
    pub point: Vec<f64>,
    pub tau: f64,
    pub g_tilde: Vec<f64>,
    pub phi_tilde: Vec<f64>,
    /// Weyl scalar curvature of `(g̃, φ̃)`, checked to be 1.
    pub tau_tilde: f64,
    pub conditioning: f64,
}

/// `g̃ = τ_g g` and `φ̃ = φ − ½ d ln τ_g` at `x`, after checking `τ_{g̃} = 1`.
pub fn canonical(chart: &Chart, x: &[f64]) -> Result<Canonical> {
    let d = scalar_data(chart, x)?;
    if (d.tau_tilde - 1.0).abs() > CANONICAL_TOL * d.conditioning() {
        return Err(ChartError::CanonicalCheck { point: x.to_vec(), tau_tilde: d.tau_tilde });
    }
    let conditioning = d.conditioning();
    Ok(Canonical { point: d.point, tau: d.tau, g_tilde: d.g_tilde, phi_tilde: d.phi_tilde, tau_tilde: d.tau_tilde, conditioning })
}

/// Residuals of the two conformal scalar-curvature relations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalarRelations {
    /// `nκ_{g̃} − [nτ⁻¹κ_g − τ⁻²Δ_gτ − ¼τ⁻³(n−6)‖grad τ‖²]`.
    pub conformal: f64,
    /// `1 − [n(n−1)κ_{g̃} − 2(n−1)∇̃_kφ̃^k − (n−1)(n−2)‖φ̃‖²_{g̃}]`.
    pub normalization: f64,
}

pub(crate) fn require_riemannian(chart: &Chart, x: &[f64]) -> Result<()> {
    if !chart.riemannian || !positive_definite(&chart.metric_at(x), chart.n) {
        return Err(ChartError::NotRiemannian { point: x.to_vec() });
    }
    Ok(())
}

pub fn scalar_relations(chart: &Chart, x: &[f64]) -> Result<ScalarRelations> {
    require_riemannian(chart, x)?;
    let d = scalar_data(chart, x)?;
    Ok(relations_from(&d, chart.n))
}

pub fn relations_from(d: &ScalarData, n: usize) -> ScalarRelations {
    let nf = n as f64;
    let t = d.tau;
    let rhs1 = nf * d.kappa / t - d.laplacian_tau / (t * t) - 0.25 * (nf - 6.0) * d.grad_tau_norm2 / (t * t * t);
    let rhs2 = nf * (nf - 1.0) * d.kappa_tilde
        - 2.0 * (nf - 1.0) * d.div_phi_tilde
        - (nf - 1.0) * (nf - 2.0) * d.phi_tilde_norm2;
    ScalarRelations { conformal: nf * d.kappa_tilde - rhs1, normalization: 1.0 - rhs2 }
}
