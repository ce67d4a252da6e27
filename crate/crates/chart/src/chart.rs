use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ChartError, Result};
use crate::expr::Expr;
use crate::jet::{Jet, JetSpace};

pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    #[serde(default)]
    pub periodic: bool,
}

impl Axis {
    pub fn new(min: f64, max: f64, periodic: bool) -> Axis {
        Axis { min, max, periodic }
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }
}

/// A coordinate chart carrying a metric `g` and a 1-form `φ`; the Weyl
/// connection is always derived from this pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub n: usize,
    pub g: Vec<Vec<Expr>>,
    pub phi: Vec<Expr>,
    pub domain: Vec<Axis>,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "default_riemannian")]
    pub riemannian: bool,
}

fn default_fd_step() -> f64 {
    DEFAULT_FD_STEP
}

fn default_riemannian() -> bool {
    true
}

impl Chart {
    pub fn new(g: Vec<Vec<Expr>>, phi: Vec<Expr>, domain: Vec<Axis>) -> Result<Chart> {
        let n = phi.len();
        let chart = Chart { n, g, phi, domain, fd_step: DEFAULT_FD_STEP, riemannian: true };
        chart.validate()?;
        Ok(chart)
    }

    /// Builds a chart from expression strings; `g` lists full rows.
    pub fn parse(g: &[&[&str]], phi: &[&str], domain: Vec<Axis>) -> Result<Chart> {
        let g = g
            .iter()
            .map(|row| row.iter().map(|s| Expr::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let phi = phi.iter().map(|s| Expr::parse(s)).collect::<Result<Vec<_>>>()?;
        Chart::new(g, phi, domain)
    }

    /// Diagonal metric with the given diagonal entries.
    pub fn diagonal(diag: &[&str], phi: &[&str], domain: Vec<Axis>) -> Result<Chart> {
        let n = diag.len();
        let rows: Vec<Vec<&str>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { diag[i] } else { "0" }).collect()).collect();
        let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        Chart::parse(&refs, phi, domain)
    }

    pub fn with_fd_step(mut self, h: f64) -> Chart {
        self.fd_step = h;
        self
    }

    pub fn with_riemannian(mut self, riemannian: bool) -> Chart {
        self.riemannian = riemannian;
        self
    }

    pub fn from_json_str(s: &str) -> Result<Chart> {
        let chart: Chart = serde_json::from_str(s)?;
        chart.validate()?;
        Ok(chart)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("charts serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let bad = |m: String| Err(ChartError::Invalid(m));
        if n < 3 {
            return bad(format!("dimension must be at least 3, got {n}"));
        }
        if self.g.len() != n || self.g.iter().any(|r| r.len() != n) {
            return bad(format!("g must be a {n}x{n} matrix"));
        }
        if self.phi.len() != n {
            return bad(format!("phi must have {n} entries, got {}", self.phi.len()));
        }
        if self.domain.len() != n {
            return bad(format!("domain must have {n} axes, got {}", self.domain.len()));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return bad(format!("fd_step must be positive, got {}", self.fd_step));
        }
        for (i, a) in self.domain.iter().enumerate() {
            if !(a.min < a.max) || !a.min.is_finite() || !a.max.is_finite() {
                return bad(format!("axis x{} has an empty or infinite interval", i + 1));
            }
        }
        let used = self.g.iter().flatten().chain(&self.phi).map(Expr::arity).max().unwrap_or(0);
        if used > n {
            return bad(format!("expression uses x{used} but the chart has dimension {n}"));
        }
        for x in self.probe_points() {
            for i in 0..n {
                for j in 0..i {
                    let a = self.g[i][j].eval_f64(&x);
                    let b = self.g[j][i].eval_f64(&x);
                    if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                        return bad(format!("g is not symmetric: g[{i}][{j}] = {a} but g[{j}][{i}] = {b} at {x:?}"));
                    }
                }
            }
        }
        Ok(())
    }

    fn probe_points(&self) -> Vec<Vec<f64>> {
        [0.5, 0.317, 0.709]
            .iter()
            .map(|t| self.domain.iter().map(|a| a.min + t * a.width()).collect())
            .collect()
    }

    pub fn metric_at(&self, x: &[f64]) -> Vec<f64> {
        self.g.iter().flatten().map(|e| e.eval_f64(x)).collect()
    }

    pub fn phi_at(&self, x: &[f64]) -> Vec<f64> {
        self.phi.iter().map(|e| e.eval_f64(x)).collect()
    }

    /// Taylor jets of `g` (row-major) and `φ` at `x`, truncated at `order`.
    pub fn jets(&self, x: &[f64], order: usize) -> (Vec<Jet>, Vec<Jet>) {
        let vars = JetSpace::get(self.n, order).variables(x);
        let g = self.g.iter().flatten().map(|e| e.eval(&vars)).collect();
        let phi = self.phi.iter().map(|e| e.eval(&vars)).collect();
        (g, phi)
    }

    /// Errors unless `x` has the right length and lies at least `margin` inside
    /// every non-periodic axis.
    pub fn check_interior(&self, x: &[f64], margin: f64) -> Result<()> {
        if x.len() != self.n {
            return Err(ChartError::Invalid(format!("point has {} coordinates, chart has {}", x.len(), self.n)));
        }
        for (i, (a, &xi)) in self.domain.iter().zip(x).enumerate() {
            if !a.periodic && (xi < a.min + margin || xi > a.max - margin) {
                return Err(ChartError::TooCloseToBoundary { point: x.to_vec(), axis: i + 1 });
            }
        }
        Ok(())
    }

    /// A uniformly random point keeping `margin` from non-periodic boundaries.
    pub fn sample_point<R: Rng>(&self, rng: &mut R, margin: f64) -> Vec<f64> {
        self.domain
            .iter()
            .map(|a| {
                let (lo, hi) = if a.periodic { (a.min, a.max) } else { (a.min + margin, a.max - margin) };
                rng.gen_range(lo..hi)
            })
            .collect()
    }

    /// The gauge-transformed chart `(e^{2f} g, φ − df)`, with `df` computed by
    /// exact differentiation of `f`.
    pub fn gauge(&self, f: &Expr) -> Result<Chart> {
        if f.arity() > self.n {
            return Err(ChartError::Invalid(format!("gauge function uses x{} but the chart has dimension {}", f.arity(), self.n)));
        }
        if f.is_zero() {
            return Ok(self.clone());
        }
        let conformal = Expr::exp(Expr::mul(Expr::Const(2.0), f.clone()));
        let g = self
            .g
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| if e.is_zero() { Expr::zero() } else { Expr::mul(conformal.clone(), e.clone()) })
                    .collect()
            })
            .collect();
        let phi = self.phi.iter().enumerate().map(|(i, e)| Expr::sub(e.clone(), f.diff(i))).collect();
        Ok(Chart { g, phi, ..self.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(n: usize) -> Vec<Axis> {
        vec![Axis::new(0.0, 6.0, true); n]
    }

    #[test]
    fn json_roundtrip_and_defaults() {
        let src = r#"{"n": 3, "g": [["1","0","0"],["0","1","0"],["0","0","1"]],
            "phi": ["0.3 + 0.1*sin(x1)", "0", "0"],
            "domain": [{"min": 0, "max": 6.283185307179586, "periodic": true},
                       {"min": 0, "max": 1}, {"min": 0, "max": 1}]}"#;
        let c = Chart::from_json_str(src).unwrap();
        assert_eq!(c.fd_step, DEFAULT_FD_STEP);
        assert!(c.riemannian);
        assert!(!c.domain[1].periodic);
        let back = Chart::from_json_str(&c.to_json_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_malformed_charts() {
        let asym = Chart::parse(&[&["1", "x1", "0"], &["0", "1", "0"], &["0", "0", "1"]], &["0", "0", "0"], cube(3));
        assert!(matches!(asym, Err(ChartError::Invalid(_))));
        let small = Chart::diagonal(&["1", "1"], &["0", "0"], cube(2));
        assert!(matches!(small, Err(ChartError::Invalid(_))));
        let stray = Chart::diagonal(&["1", "1", "x4"], &["0", "0", "0"], cube(3));
        assert!(matches!(stray, Err(ChartError::Invalid(_))));
        let parse = Chart::diagonal(&["1", "1", "x1 +"], &["0", "0", "0"], cube(3));
        assert!(matches!(parse, Err(ChartError::Parse { .. })));
    }

    #[test]
    fn interior_check() {
        let mut dom = cube(3);
        dom[0] = Axis::new(0.0, 1.0, false);
        let c = Chart::diagonal(&["1", "1", "1"], &["0", "0", "0"], dom).unwrap();
        assert!(c.check_interior(&[0.5, 0.0, 6.0], 2e-4).is_ok());
        assert!(matches!(c.check_interior(&[1e-4, 1.0, 1.0], 2e-4), Err(ChartError::TooCloseToBoundary { axis: 1, .. })));
    }

    #[test]
    fn gauge_with_zero_is_identity_and_composes() {
        let c = Chart::diagonal(&["1", "1 + x1^2", "1"], &["x2", "0", "0.5*x1"], cube(3)).unwrap();
        assert_eq!(c.gauge(&Expr::zero()).unwrap(), c);
        let f = Expr::parse("0.2*sin(x1)").unwrap();
        let g1 = c.gauge(&f).unwrap();
        let x = [0.7, 1.1, 2.0];
        let e = (0.4 * 0.7f64.sin()).exp();
        assert!((g1.metric_at(&x)[4] - e * (1.0 + 0.49)).abs() < 1e-14);
        assert!((g1.phi_at(&x)[0] - (1.1 - 0.2 * 0.7f64.cos())).abs() < 1e-14);
        let back = g1.gauge(&Expr::neg(f)).unwrap();
        for (a, b) in back.metric_at(&x).iter().zip(c.metric_at(&x)) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
