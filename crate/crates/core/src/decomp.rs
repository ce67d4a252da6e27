//! Irreducible components of Weyl-type curvature tensors (the A- and
//! W-decompositions), the Higa term, the projective curvature tensor and
//! pointwise classification.

use serde::Serialize;

use crate::builders::{h_wedge_h, tensor_dot, wedge, wedge_r};
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};
use crate::tensor::{membership4, Bilinear, Curv4, Model, SpaceTag, DEFAULT_FLOAT_TOL};
use crate::traces::{ricci, ricci_parts};

/// A tensor already checked to lie in the Weyl space, together with its
/// Ricci data.
#[derive(Debug, Clone)]
pub struct WeylTensor<S: Scalar> {
    a: Curv4<S>,
    sym_ric: Bilinear<S>,
    alt_ric: Bilinear<S>,
    tau: S,
}

impl<S: Scalar> WeylTensor<S> {
    pub fn new(a: Curv4<S>) -> Result<Self> {
        Self::with_tol(a, DEFAULT_FLOAT_TOL)
    }

    pub fn with_tol(a: Curv4<S>, tol: f64) -> Result<Self> {
        let r = membership4(&a, SpaceTag::Weyl, tol);
        if !r.holds {
            return Err(Error::NotWeyl {
                residual: r.worst_residual,
                constraint: r.violated_constraint.unwrap_or_default(),
            });
        }
        let (sym_ric, alt_ric) = ricci_parts(&a);
        let tau = sym_ric.trace();
        Ok(WeylTensor {
            a,
            sym_ric,
            alt_ric,
            tau,
        })
    }

    pub fn tensor(&self) -> &Curv4<S> {
        &self.a
    }

    pub fn into_tensor(self) -> Curv4<S> {
        self.a
    }

    pub fn model(&self) -> Model {
        self.a.model()
    }

    pub fn sym_ricci(&self) -> &Bilinear<S> {
        &self.sym_ric
    }

    pub fn alt_ricci(&self) -> &Bilinear<S> {
        &self.alt_ric
    }

    pub fn tau(&self) -> S {
        self.tau
    }

    fn n(&self) -> i64 {
        self.model().n() as i64
    }

    fn h(&self) -> Bilinear<S> {
        Bilinear::metric(self.model())
    }

    fn hh(&self) -> Curv4<S> {
        h_wedge_h(self.model())
    }

    /// `2 Lambda Ric . h + Lambda Ric ^_r h`.
    fn alt_block(&self, r: S) -> Curv4<S> {
        let h = self.h();
        let dot = tensor_dot(&self.alt_ric, &h).expect("same model");
        let w = wedge_r(&self.alt_ric, &h, r).expect("same model");
        &dot.scale(S::from_int(2)) + &w
    }

    fn sym_wedge(&self, r: S) -> Curv4<S> {
        wedge_r(&self.sym_ric, &self.h(), r).expect("same model")
    }

    /// Component `i` (1..=8) of the A-decomposition.
    pub fn alpha(&self, i: usize) -> Result<Curv4<S>> {
        let n = self.n();
        let m = self.model();
        let tau = self.tau;
        Ok(match i {
            1 => self.hh().scale(-tau * S::ratio(1, n * (n - 1))),
            2 => self
                .sym_wedge(S::one())
                .scale(S::ratio(-1, n - 2))
                .add_scaled(tau * S::ratio(2, n * (n - 2)), &self.hh()),
            4 => self.alt_block(S::from_int(-1)).scale(S::ratio(-1, 2 * n)),
            5 => self.alt_block(S::from_int(3)).scale(S::ratio(-1, 2 * n)),
            6 => self.sixth(),
            3 | 7 | 8 => Curv4::zeros(m),
            _ => return Err(Error::ComponentIndex { index: i, max: 8 }),
        })
    }

    /// Component `i` (1..=8) of the W-decomposition.
    pub fn pi(&self, i: usize) -> Result<Curv4<S>> {
        let n = self.n();
        let m = self.model();
        let tau = self.tau;
        Ok(match i {
            1 => self.hh().scale(-tau * S::ratio(1, n * (n - 1))),
            2 => {
                let theta = &self.h().scale(tau * S::ratio(1, n)) - &self.sym_ric;
                wedge(&theta, &self.h())
                    .expect("same model")
                    .scale(S::ratio(1, n - 1))
            }
            3 => self.alt_block(S::zero()).scale(S::ratio(-1, n + 1)),
            4 => self
                .alt_block(S::from_int(n + 1))
                .scale(S::ratio(-1, n * (n + 1))),
            5 => (&self.hh().scale(tau) - &self.sym_wedge(S::from_int(n - 1)))
                .scale(S::ratio(1, (n - 1) * (n - 2))),
            6 => self.sixth(),
            7 | 8 => Curv4::zeros(m),
            _ => return Err(Error::ComponentIndex { index: i, max: 8 }),
        })
    }

    fn sixth(&self) -> Curv4<S> {
        let n = self.n();
        let h = self.h();
        let dot = tensor_dot(&self.alt_ric, &h).expect("same model");
        let w1 = wedge_r(&self.alt_ric, &h, S::one()).expect("same model");
        self.a
            .add_scaled(S::ratio(2, n), &dot)
            .add_scaled(S::ratio(1, n), &w1)
            .add_scaled(S::ratio(1, n - 2), &self.sym_wedge(S::one()))
            .add_scaled(-self.tau * S::ratio(1, (n - 1) * (n - 2)), &self.hh())
    }

    /// Higa term `-(1/n)(2 Lambda Ric . h + Lambda Ric ^_1 h)`.
    pub fn higa(&self) -> Curv4<S> {
        self.alt_block(S::one()).scale(S::ratio(-1, self.n()))
    }

    /// Projective curvature tensor.
    pub fn projective(&self) -> Curv4<S> {
        let n = self.n();
        self.a
            .add_scaled(S::ratio(1, n + 1), &self.alt_block(S::zero()))
            .add_scaled(S::ratio(1, n - 1), &self.sym_wedge(S::zero()))
    }
}

/// `alpha_i(A)`, checking Weyl membership first.
pub fn alpha<S: Scalar>(a: &Curv4<S>, i: usize) -> Result<Curv4<S>> {
    WeylTensor::new(a.clone())?.alpha(i)
}

/// `pi_i(A)`, checking Weyl membership first.
pub fn pi_w<S: Scalar>(a: &Curv4<S>, i: usize) -> Result<Curv4<S>> {
    WeylTensor::new(a.clone())?.pi(i)
}

pub fn higa<S: Scalar>(a: &Curv4<S>) -> Result<Curv4<S>> {
    Ok(WeylTensor::new(a.clone())?.higa())
}

pub fn projective<S: Scalar>(a: &Curv4<S>) -> Result<Curv4<S>> {
    Ok(WeylTensor::new(a.clone())?.projective())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub is_algebraic: bool,
    pub is_trivial_pointwise: bool,
    pub is_einstein_weyl: bool,
    /// Einstein multiple `tau/n`, present iff `is_einstein_weyl`.
    pub lambda: Option<f64>,
    /// Exact rendering of `lambda` in exact mode.
    pub lambda_exact: Option<String>,
    pub is_constant_curvature_type: bool,
    pub is_ricci_flat: bool,
}

/// Zero test used by [`classify`]: exact zero in exact mode, otherwise
/// `residual <= tol * scale` (with `scale` floored at 1 when the input is 0).
pub fn negligible<S: Scalar>(residual: f64, scale: f64, tol: f64) -> bool {
    match S::MODE {
        Mode::Exact => residual == 0.0,
        Mode::Float => residual <= tol * if scale > 0.0 { scale } else { 1.0 },
    }
}

pub fn classify<S: Scalar>(a: &Curv4<S>, tol: f64) -> Result<Classification> {
    let w = WeylTensor::with_tol(a.clone(), tol)?;
    Ok(classify_weyl(&w, tol))
}

pub fn classify_weyl<S: Scalar>(w: &WeylTensor<S>, tol: f64) -> Classification {
    let m = w.model();
    let n = m.n() as i64;
    let a = w.tensor();
    let ric = ricci(a);
    let scale = a.max_abs().max(ric.max_abs());
    let zero = |x: f64| negligible::<S>(x, scale, tol);

    let is_algebraic = membership4(a, SpaceTag::Algebraic, tol).holds;
    let is_trivial_pointwise = zero(w.alt_ricci().max_abs());
    let lam = w.tau() * S::ratio(1, n);
    let einstein_gap = &w.sym_ric - &Bilinear::metric(m).scale(lam);
    let is_einstein_weyl = zero(einstein_gap.max_abs());
    let cc = h_wedge_h::<S>(m).scale(-w.tau() * S::ratio(1, n * (n - 1)));
    let is_constant_curvature_type = zero((a - &cc).max_abs());
    let is_ricci_flat = zero(ric.max_abs());
    let lambda_exact = match (S::MODE, lam.to_json()) {
        (Mode::Exact, serde_json::Value::String(s)) if is_einstein_weyl => Some(s),
        _ => None,
    };
    Classification {
        is_algebraic,
        is_trivial_pointwise,
        is_einstein_weyl,
        lambda: is_einstein_weyl.then(|| lam.to_f64()),
        lambda_exact,
        is_constant_curvature_type,
        is_ricci_flat,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{random_bilinear, random_curv, sigma45, Seed};
    use crate::scalar::Rational;
    use crate::tensor::inner;
    use crate::traces::ricci_star;

    fn q(v: i128) -> Rational {
        Rational::from_integer(v)
    }

    fn models() -> Vec<Model> {
        let mut v = Vec::new();
        for n in 3..=6 {
            v.push(Model::euclidean(n).unwrap());
            v.push(Model::lorentzian(n).unwrap());
        }
        v
    }

    fn sum<S: Scalar>(parts: &[Curv4<S>], m: Model) -> Curv4<S> {
        parts.iter().fold(Curv4::zeros(m), |acc, p| &acc + p)
    }

    #[test]
    fn alpha_of_h_wedge_h() {
        for m in models() {
            let hh = h_wedge_h::<Rational>(m);
            let w = WeylTensor::new(hh.clone()).unwrap();
            assert_eq!(w.alpha(1).unwrap(), hh);
            for i in 2..=8 {
                assert!(w.alpha(i).unwrap().is_zero(), "alpha_{i} at {m}");
            }
            assert!(matches!(w.alpha(9), Err(Error::ComponentIndex { .. })));
            assert!(matches!(w.pi(0), Err(Error::ComponentIndex { .. })));
        }
    }

    #[test]
    fn reconstruction_exact() {
        for m in models() {
            for s in 0..10 {
                let a = random_curv::<Rational>(SpaceTag::Weyl, m, Seed(s)).unwrap();
                let w = WeylTensor::new(a.clone()).unwrap();
                let al: Vec<_> = (1..=8).map(|i| w.alpha(i).unwrap()).collect();
                let pi: Vec<_> = (1..=8).map(|i| w.pi(i).unwrap()).collect();
                assert_eq!(sum(&al, m), a);
                assert_eq!(sum(&pi, m), a);
                assert_eq!(pi[5], al[5]);
                for i in [0usize, 1, 3, 4, 5] {
                    for j in [0usize, 1, 3, 4, 5] {
                        if i < j {
                            assert_eq!(inner(&al[i], &al[j]).unwrap(), q(0));
                        }
                    }
                }
                for i in 0..6 {
                    for j in (i + 1)..6 {
                        assert_eq!(inner(&pi[i], &pi[j]).unwrap(), q(0), "pi {i} {j} {m}");
                    }
                }
                assert!(membership4(&al[5], SpaceTag::W6, 0.0).holds);
            }
        }
    }

    #[test]
    fn higa_cases() {
        let m = Model::lorentzian(5).unwrap();
        let alg = random_curv::<Rational>(SpaceTag::Algebraic, m, Seed(2)).unwrap();
        assert!(higa(&alg).unwrap().is_zero());
        let phi = random_bilinear::<Rational>(SpaceTag::Alt, m, Seed(2)).unwrap();
        let p = sigma45(&phi).unwrap();
        assert_eq!(higa(&p).unwrap(), p);
        let a = random_curv::<Rational>(SpaceTag::Weyl, m, Seed(3)).unwrap();
        let w = WeylTensor::new(a.clone()).unwrap();
        let hg = w.higa();
        assert_eq!(higa(&hg).unwrap(), hg);
        assert_eq!(hg, &w.alpha(4).unwrap() + &w.alpha(5).unwrap());
        assert_eq!(hg, &w.pi(3).unwrap() + &w.pi(4).unwrap());
        assert!(membership4(&(&a - &hg), SpaceTag::Algebraic, 0.0).holds);
    }

    #[test]
    fn projective_cases() {
        let m = Model::euclidean(4).unwrap();
        assert!(projective(&h_wedge_h::<Rational>(m)).unwrap().is_zero());
        let a = random_curv::<Rational>(SpaceTag::Weyl, m, Seed(5)).unwrap();
        let w = WeylTensor::new(a).unwrap();
        let p = w.projective();
        assert!(ricci(&p).is_zero());
        let expect = sum(&[w.pi(4).unwrap(), w.pi(5).unwrap(), w.pi(6).unwrap()], m);
        assert_eq!(p, expect);
    }

    #[test]
    fn ricci_tables() {
        for m in models() {
            let n = m.n() as i128;
            let a = random_curv::<Rational>(SpaceTag::Weyl, m, Seed(17)).unwrap();
            let w = WeylTensor::new(a).unwrap();
            let h = Bilinear::<Rational>::metric(m);
            let tau_h = h.scale(w.tau() / q(n));
            let s0 = &w.sym_ric - &tau_h;
            let l = w.alt_ric.clone();
            let a1 = w.alpha(1).unwrap();
            assert_eq!(ricci(&a1), tau_h);
            assert_eq!(ricci_star(&a1), tau_h);
            let a2 = w.alpha(2).unwrap();
            assert_eq!(ricci(&a2), s0);
            assert_eq!(ricci_star(&a2), s0);
            let a4 = w.alpha(4).unwrap();
            assert_eq!(ricci(&a4), l.scale(Rational::new(n + 2, 2 * n)));
            assert_eq!(ricci_star(&a4), ricci(&a4).scale(q(-1)));
            let a5 = w.alpha(5).unwrap();
            assert_eq!(ricci(&a5), l.scale(Rational::new(n - 2, 2 * n)));
            assert_eq!(ricci_star(&a5), ricci(&a5).scale(q(3)));
            let p4 = w.pi(4).unwrap();
            assert!(ricci(&p4).is_zero());
            assert_eq!(
                ricci_star(&p4),
                l.scale(Rational::new((n - 2) * (n + 2), n * (n + 1)))
            );
            let p3 = w.pi(3).unwrap();
            assert_eq!(ricci(&p3), l);
            assert_eq!(ricci_star(&p3), l.scale(Rational::new(-3, n + 1)));
        }
    }

    #[test]
    fn classification_examples() {
        let m = Model::euclidean(4).unwrap();
        let c = classify(&h_wedge_h::<Rational>(m), 0.0).unwrap();
        assert!(c.is_algebraic && c.is_trivial_pointwise && c.is_einstein_weyl);
        assert!(c.is_constant_curvature_type && !c.is_ricci_flat);
        assert_eq!(c.lambda, Some(-3.0));
        assert_eq!(c.lambda_exact.as_deref(), Some("-3/1"));
        let phi = random_bilinear::<Rational>(SpaceTag::Alt, m, Seed(1)).unwrap();
        let c = classify(&sigma45(&phi).unwrap(), 0.0).unwrap();
        assert!(!c.is_algebraic && !c.is_trivial_pointwise && c.is_einstein_weyl);
        assert!(!c.is_constant_curvature_type);
        let c = classify(&Curv4::<Rational>::zeros(m), 0.0).unwrap();
        assert!(c.is_algebraic && c.is_trivial_pointwise && c.is_einstein_weyl);
        assert!(c.is_constant_curvature_type && c.is_ricci_flat);
        assert_eq!(c.lambda, Some(0.0));
        let gen = random_curv::<f64>(SpaceTag::GenCurv, m, Seed(1)).unwrap();
        assert!(matches!(classify(&gen, 1e-9), Err(Error::NotWeyl { .. })));
    }
}
