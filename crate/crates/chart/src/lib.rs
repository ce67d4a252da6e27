//! Weyl structures `(g, φ)` on coordinate charts: connection, curvature in an
//! orthonormal frame, gauge changes, the canonical metric, scalar-curvature
//! relations, second Bianchi residuals and integral identities.

pub mod bianchi;
pub mod chart;
pub mod error;
pub mod expr;
pub mod fit;
pub mod geometry;
pub mod integrate;
pub mod jet;
pub mod real;
pub mod scalar;

pub use bianchi::{bianchi_residuals, BianchiResiduals};
pub use chart::{Axis, Chart};
pub use error::{ChartError, Region, Result};
pub use expr::Expr;
pub use geometry::{
    christoffel, christoffel_with, curvature_at, curvature_at_exact, curvature_coords, curvature_coords_exact,
    exterior_derivative, orthonormal_frame, Christoffel, ChristoffelMethod, CoordCurvature, PointFrame,
};
pub use integrate::{integrate, IntegralReport};
pub use scalar::{canonical, scalar_curvature, scalar_data, scalar_relations, Canonical, ScalarData, ScalarRelations};

/// `(g, φ) ↦ (e^{2f} g, φ − df)`.
pub fn gauge(chart: &Chart, f: &Expr) -> Result<Chart> {
    chart.gauge(f)
}
