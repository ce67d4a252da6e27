//! Scalar-product spaces and dense rank-2 / rank-4 covariant tensors.
//!
//! A [`Model`] fixes `(V, h)`: dimension `n` and a diagonal scalar product with
//! `p` entries `-1` followed by `q` entries `+1`. Tensors store their
//! components densely in row-major order; the index order `(i, j, k, l)` of a
//! [`Curv4`] is the argument order of `A(e_i, e_j, e_k, e_l)` everywhere in
//! this crate.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest dimension accepted by default; components grow like `n^4`.
pub const DEFAULT_MAX_DIM: usize = 8;

/// Default relative tolerance for float-mode identity checks.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Model {
    n: usize,
    p: usize,
    q: usize,
}

impl Model {
    pub fn new(n: usize, p: usize, q: usize) -> Result<Self> {
        Self::with_cap(n, p, q, DEFAULT_MAX_DIM)
    }

    pub fn with_cap(n: usize, p: usize, q: usize, cap: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionTooSmall { n });
        }
        if p + q != n {
            return Err(Error::SignatureMismatch { n, p, q });
        }
        if n > cap {
            return Err(Error::DimensionTooLarge { n, cap });
        }
        Ok(Model { n, p, q })
    }

    /// Positive definite model of dimension `n`.
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(n, 0, n)
    }

    /// Signature `(1, n - 1)`.
    pub fn lorentzian(n: usize) -> Result<Self> {
        Self::new(n, 1, n.saturating_sub(1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// Diagonal entry `h_ii` (equal to `h^ii`).
    #[inline]
    pub fn h_sign(&self, i: usize) -> i64 {
        if i < self.p {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn h<S: Scalar>(&self, i: usize, j: usize) -> S {
        if i == j {
            S::from_int(self.h_sign(i))
        } else {
            S::zero()
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} ({},{})", self.n, self.p, self.q)
    }
}

/// Tensor in the second tensor power of the dual space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bilinear<S> {
    model: Model,
    c: Vec<S>,
}

impl<S: Scalar> Bilinear<S> {
    pub fn zeros(model: Model) -> Self {
        Bilinear {
            model,
            c: vec![S::zero(); model.n * model.n],
        }
    }

    pub fn from_fn(model: Model, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let n = model.n;
        let mut c = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                c.push(f(i, j));
            }
        }
        Bilinear { model, c }
    }

    pub fn from_components(model: Model, c: Vec<S>) -> Result<Self> {
        if c.len() != model.n * model.n {
            return Err(Error::Format(format!(
                "expected {} components, found {}",
                model.n * model.n,
                c.len()
            )));
        }
        Ok(Bilinear { model, c })
    }

    /// The scalar product `h` itself.
    pub fn metric(model: Model) -> Self {
        Self::from_fn(model, |i, j| model.h(i, j))
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn components(&self) -> &[S] {
        &self.c
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.c[i * self.model.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        let n = self.model.n;
        self.c[i * n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.model, |i, j| self.get(j, i))
    }

    pub fn scale(&self, s: S) -> Self {
        Bilinear {
            model: self.model,
            c: self.c.iter().map(|&x| x * s).collect(),
        }
    }

    /// Symmetric part `S theta`.
    pub fn sym(&self) -> Self {
        let half = S::ratio(1, 2);
        Self::from_fn(self.model, |i, j| (self.get(i, j) + self.get(j, i)) * half)
    }

    /// Antisymmetric part `Lambda theta`.
    pub fn alt(&self) -> Self {
        let half = S::ratio(1, 2);
        Self::from_fn(self.model, |i, j| (self.get(i, j) - self.get(j, i)) * half)
    }

    /// `h^{ij} theta_ij`.
    pub fn trace(&self) -> S {
        (0..self.model.n).fold(S::zero(), |acc, i| {
            acc + S::from_int(self.model.h_sign(i)) * self.get(i, i)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> Bilinear<T> {
        Bilinear {
            model: self.model,
            c: self.c.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn to_f64(&self) -> Bilinear<f64> {
        self.map(|x| x.to_f64())
    }
}

/// Tensor in the fourth tensor power of the dual space.
#[derive(Debug, Clone, PartialEq)]
pub struct Curv4<S> {
    model: Model,
    c: Vec<S>,
}

impl<S: Scalar> Curv4<S> {
    pub fn zeros(model: Model) -> Self {
        let n = model.n;
        Curv4 {
            model,
            c: vec![S::zero(); n * n * n * n],
        }
    }

    pub fn from_fn(model: Model, mut f: impl FnMut(usize, usize, usize, usize) -> S) -> Self {
        let n = model.n;
        let mut c = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        c.push(f(i, j, k, l));
                    }
                }
            }
        }
        Curv4 { model, c }
    }

    pub fn from_components(model: Model, c: Vec<S>) -> Result<Self> {
        let n = model.n;
        if c.len() != n * n * n * n {
            return Err(Error::Format(format!(
                "expected {} components, found {}",
                n * n * n * n,
                c.len()
            )));
        }
        Ok(Curv4 { model, c })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn components(&self) -> &[S] {
        &self.c
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let n = self.model.n;
        ((i * n + j) * n + k) * n + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> S {
        self.c[self.index(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: S) {
        let idx = self.index(i, j, k, l);
        self.c[idx] = v;
    }

    pub fn scale(&self, s: S) -> Self {
        Curv4 {
            model: self.model,
            c: self.c.iter().map(|&x| x * s).collect(),
        }
    }

    /// `result(i,j,k,l) = self(f(i,j,k,l))`.
    pub fn reindex(&self, f: impl Fn([usize; 4]) -> [usize; 4]) -> Self {
        Self::from_fn(self.model, |i, j, k, l| {
            let [a, b, c, d] = f([i, j, k, l]);
            self.get(a, b, c, d)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> Curv4<T> {
        Curv4 {
            model: self.model,
            c: self.c.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn to_f64(&self) -> Curv4<f64> {
        self.map(|x| x.to_f64())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: S, other: &Self) -> Self {
        assert_eq!(self.model, other.model, "model mismatch");
        Curv4 {
            model: self.model,
            c: self.c.iter().zip(&other.c).map(|(&a, &b)| a + s * b).collect(),
        }
    }
}

macro_rules! elementwise_ops {
    ($ty:ident) => {
        impl<S: Scalar> Add for &$ty<S> {
            type Output = $ty<S>;
            fn add(self, rhs: Self) -> $ty<S> {
                assert_eq!(self.model, rhs.model, "model mismatch");
                $ty {
                    model: self.model,
                    c: self.c.iter().zip(&rhs.c).map(|(&a, &b)| a + b).collect(),
                }
            }
        }
        impl<S: Scalar> Add for $ty<S> {
            type Output = $ty<S>;
            fn add(self, rhs: Self) -> $ty<S> {
                &self + &rhs
            }
        }
        impl<S: Scalar> Sub for &$ty<S> {
            type Output = $ty<S>;
            fn sub(self, rhs: Self) -> $ty<S> {
                assert_eq!(self.model, rhs.model, "model mismatch");
                $ty {
                    model: self.model,
                    c: self.c.iter().zip(&rhs.c).map(|(&a, &b)| a - b).collect(),
                }
            }
        }
        impl<S: Scalar> Sub for $ty<S> {
            type Output = $ty<S>;
            fn sub(self, rhs: Self) -> $ty<S> {
                &self - &rhs
            }
        }
        impl<S: Scalar> Neg for &$ty<S> {
            type Output = $ty<S>;
            fn neg(self) -> $ty<S> {
                $ty {
                    model: self.model,
                    c: self.c.iter().map(|&a| -a).collect(),
                }
            }
        }
        impl<S: Scalar> Neg for $ty<S> {
            type Output = $ty<S>;
            fn neg(self) -> $ty<S> {
                -&self
            }
        }
    };
}

elementwise_ops!(Bilinear);
elementwise_ops!(Curv4);

/// Max-norm of `a - b`.
pub fn diff_max<S: Scalar>(a: &Curv4<S>, b: &Curv4<S>) -> f64 {
    a.c.iter()
        .zip(&b.c)
        .map(|(&x, &y)| (x - y).abs_f64())
        .fold(0.0, f64::max)
}

/// Max-norm of `a - b` for bilinear forms.
pub fn diff_max2<S: Scalar>(a: &Bilinear<S>, b: &Bilinear<S>) -> f64 {
    a.c.iter()
        .zip(&b.c)
        .map(|(&x, &y)| (x - y).abs_f64())
        .fold(0.0, f64::max)
}

/// Either rank of tensor, as carried by the JSON format and the random generators.
#[derive(Debug, Clone, PartialEq)]
pub enum Tensor<S> {
    Bilinear(Bilinear<S>),
    Curv4(Curv4<S>),
}

impl<S: Scalar> Tensor<S> {
    pub fn model(&self) -> Model {
        match self {
            Tensor::Bilinear(b) => b.model(),
            Tensor::Curv4(a) => a.model(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Tensor::Bilinear(_) => 2,
            Tensor::Curv4(_) => 4,
        }
    }

    pub fn components(&self) -> &[S] {
        match self {
            Tensor::Bilinear(b) => b.components(),
            Tensor::Curv4(a) => a.components(),
        }
    }

    pub fn into_curv4(self) -> Option<Curv4<S>> {
        match self {
            Tensor::Curv4(a) => Some(a),
            Tensor::Bilinear(_) => None,
        }
    }

    pub fn into_bilinear(self) -> Option<Bilinear<S>> {
        match self {
            Tensor::Bilinear(b) => Some(b),
            Tensor::Curv4(_) => None,
        }
    }
}

/// Tensor spaces with a finite list of defining linear constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceTag {
    /// Generalized curvature tensors: first-pair antisymmetry and Bianchi.
    GenCurv,
    /// Algebraic curvature tensors: additionally antisymmetric in the last pair.
    Algebraic,
    /// Weyl curvature tensors: last-pair symmetric part proportional to `Lambda Ric (x) h`.
    Weyl,
    W6,
    W7,
    W8,
    /// The trivial module, realized as the line `R h` inside the bilinear forms.
    Scalar,
    Sym,
    Sym0,
    Alt,
}

impl SpaceTag {
    pub const ALL: [SpaceTag; 10] = [
        SpaceTag::GenCurv,
        SpaceTag::Algebraic,
        SpaceTag::Weyl,
        SpaceTag::W6,
        SpaceTag::W7,
        SpaceTag::W8,
        SpaceTag::Scalar,
        SpaceTag::Sym,
        SpaceTag::Sym0,
        SpaceTag::Alt,
    ];

    pub fn rank(self) -> usize {
        match self {
            SpaceTag::Scalar | SpaceTag::Sym | SpaceTag::Sym0 | SpaceTag::Alt => 2,
            _ => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceTag::GenCurv => "GenCurv",
            SpaceTag::Algebraic => "Algebraic",
            SpaceTag::Weyl => "Weyl",
            SpaceTag::W6 => "W6",
            SpaceTag::W7 => "W7",
            SpaceTag::W8 => "W8",
            SpaceTag::Scalar => "Scalar",
            SpaceTag::Sym => "Sym",
            SpaceTag::Sym0 => "Sym0",
            SpaceTag::Alt => "Alt",
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpaceTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SpaceTag::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown space `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub space: SpaceTag,
    pub holds: bool,
    pub worst_residual: f64,
    pub violated_constraint: Option<String>,
}

/// Tracks the largest residual seen over a family of constraints.
struct Worst {
    value: f64,
    nonzero: bool,
    label: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            nonzero: false,
            label: None,
        }
    }

    fn record<S: Scalar>(&mut self, r: S, label: impl FnOnce() -> String) {
        if r.is_zero() {
            return;
        }
        let a = r.abs_f64();
        if !self.nonzero || a > self.value {
            self.value = a;
            self.label = Some(label());
        }
        self.nonzero = true;
    }

    fn into_report<S: Scalar>(self, space: SpaceTag, scale: f64, tol: f64) -> MembershipReport {
        let holds = match S::MODE {
            crate::scalar::Mode::Exact => !self.nonzero,
            crate::scalar::Mode::Float => self.value <= tol * scale,
        };
        MembershipReport {
            space,
            holds,
            worst_residual: self.value,
            violated_constraint: if holds { None } else { self.label },
        }
    }
}

fn idx(i: usize, j: usize, k: usize, l: usize) -> String {
    format!("({},{},{},{})", i + 1, j + 1, k + 1, l + 1)
}

/// Contracts slots `slot_a` and `slot_b` (1-based) of `t` with `h^{ab}`; the
/// two remaining slots keep their relative order.
pub fn pair_trace<S: Scalar>(t: &Curv4<S>, slot_a: usize, slot_b: usize) -> Result<Bilinear<S>> {
    if slot_a == slot_b || !(1..=4).contains(&slot_a) || !(1..=4).contains(&slot_b) {
        return Err(Error::InvalidSlot {
            a: slot_a,
            b: slot_b,
        });
    }
    let model = t.model();
    let (a, b) = (slot_a - 1, slot_b - 1);
    let free: Vec<usize> = (0..4).filter(|&s| s != a && s != b).collect();
    Ok(Bilinear::from_fn(model, |x, y| {
        let mut acc = S::zero();
        for m in 0..model.n() {
            let mut ix = [0usize; 4];
            ix[a] = m;
            ix[b] = m;
            ix[free[0]] = x;
            ix[free[1]] = y;
            acc = acc + S::from_int(model.h_sign(m)) * t.get(ix[0], ix[1], ix[2], ix[3]);
        }
        acc
    }))
}

/// Symmetric and antisymmetric parts; `S + Lambda = theta`.
pub fn split2<S: Scalar>(theta: &Bilinear<S>) -> (Bilinear<S>, Bilinear<S>) {
    (theta.sym(), theta.alt())
}

/// Conjugate tensor `A*(x,y,z,w) = -A(x,y,w,z)`.
pub fn conjugate<S: Scalar>(a: &Curv4<S>) -> Curv4<S> {
    Curv4::from_fn(a.model(), |i, j, k, l| -a.get(i, j, l, k))
}

/// The `h`-induced inner product on the fourth tensor power.
pub fn inner<S: Scalar>(a: &Curv4<S>, b: &Curv4<S>) -> Result<S> {
    if a.model() != b.model() {
        return Err(Error::ModelMismatch);
    }
    let model = a.model();
    let n = model.n();
    let mut acc = S::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let sign = model.h_sign(i) * model.h_sign(j) * model.h_sign(k) * model.h_sign(l);
                    acc = acc + S::from_int(sign) * a.get(i, j, k, l) * b.get(i, j, k, l);
                }
            }
        }
    }
    Ok(acc)
}

/// Checks every defining constraint of `space`. In float mode the tolerance is
/// relative to the max-norm of the tensor; in exact mode residuals must vanish.
pub fn membership<S: Scalar>(t: &Tensor<S>, space: SpaceTag, tol: f64) -> MembershipReport {
    match (t, space.rank()) {
        (Tensor::Curv4(a), 4) => membership4(a, space, tol),
        (Tensor::Bilinear(b), 2) => membership2(b, space, tol),
        _ => MembershipReport {
            space,
            holds: false,
            worst_residual: f64::INFINITY,
            violated_constraint: Some(format!("rank {} != {}", t.rank(), space.rank())),
        },
    }
}

/// Membership for rank-4 spaces.
pub fn membership4<S: Scalar>(a: &Curv4<S>, space: SpaceTag, tol: f64) -> MembershipReport {
    if space.rank() != 4 {
        return membership(&Tensor::Curv4(a.clone()), space, tol);
    }
    let model = a.model();
    let n = model.n();
    let mut w = Worst::new();

    let ric = if space == SpaceTag::Weyl {
        Some(pair_trace(a, 1, 4).expect("valid slots"))
    } else {
        None
    };
    let four_over_n = S::ratio(4, n as i64);

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = a.get(i, j, k, l);
                    // antisymmetry in the first pair is common to every rank-4 space
                    w.record(v + a.get(j, i, k, l), || format!("antisym12{}", idx(i, j, k, l)));
                    let bianchi = || v + a.get(j, k, i, l) + a.get(k, i, j, l);
                    match space {
                        SpaceTag::GenCurv => {
                            w.record(bianchi(), || format!("bianchi{}", idx(i, j, k, l)));
                        }
                        SpaceTag::Algebraic => {
                            w.record(bianchi(), || format!("bianchi{}", idx(i, j, k, l)));
                            w.record(v + a.get(i, j, l, k), || format!("antisym34{}", idx(i, j, k, l)));
                        }
                        SpaceTag::Weyl => {
                            w.record(bianchi(), || format!("bianchi{}", idx(i, j, k, l)));
                            let ric = ric.as_ref().expect("computed above");
                            let lam = (ric.get(i, j) - ric.get(j, i)) * S::ratio(1, 2);
                            let r = v + a.get(i, j, l, k) + four_over_n * lam * model.h(k, l);
                            w.record(r, || format!("weyl_sym34{}", idx(i, j, k, l)));
                        }
                        SpaceTag::W6 => {
                            w.record(v - a.get(k, l, i, j), || format!("pair_sym{}", idx(i, j, k, l)));
                            w.record(bianchi(), || format!("bianchi{}", idx(i, j, k, l)));
                        }
                        SpaceTag::W7 => {
                            w.record(v - a.get(i, j, l, k), || format!("sym34{}", idx(i, j, k, l)));
                            let r = a.get(k, j, i, l) + a.get(i, k, j, l)
                                - a.get(l, j, i, k)
                                - a.get(i, l, j, k);
                            w.record(r, || format!("w7_cyclic{}", idx(i, j, k, l)));
                        }
                        SpaceTag::W8 => {
                            w.record(v + a.get(k, l, i, j), || format!("pair_antisym{}", idx(i, j, k, l)));
                        }
                        _ => unreachable!("rank-2 spaces handled separately"),
                    }
                }
            }
        }
    }

    if matches!(space, SpaceTag::W6 | SpaceTag::W7 | SpaceTag::W8) {
        let ric = pair_trace(a, 1, 4).expect("valid slots");
        for j in 0..n {
            for k in 0..n {
                w.record(ric.get(j, k), || format!("trace({},{})", j + 1, k + 1));
            }
        }
    }

    w.into_report::<S>(space, a.max_abs(), tol)
}

/// Membership for rank-2 spaces.
pub fn membership2<S: Scalar>(b: &Bilinear<S>, space: SpaceTag, tol: f64) -> MembershipReport {
    if space.rank() != 2 {
        return membership(&Tensor::Bilinear(b.clone()), space, tol);
    }
    let model = b.model();
    let n = model.n();
    let mut w = Worst::new();
    for i in 0..n {
        for j in 0..n {
            match space {
                SpaceTag::Sym | SpaceTag::Sym0 => {
                    w.record(b.get(i, j) - b.get(j, i), || format!("sym({},{})", i + 1, j + 1))
                }
                SpaceTag::Alt => {
                    w.record(b.get(i, j) + b.get(j, i), || format!("alt({},{})", i + 1, j + 1))
                }
                SpaceTag::Scalar => {
                    if i != j {
                        w.record(b.get(i, j), || format!("offdiag({},{})", i + 1, j + 1));
                    }
                }
                _ => unreachable!("rank-4 spaces handled separately"),
            }
        }
    }
    match space {
        SpaceTag::Sym0 => w.record(b.trace(), || "trace".to_string()),
        SpaceTag::Scalar => {
            for i in 1..n {
                let r = S::from_int(model.h_sign(i)) * b.get(i, i)
                    - S::from_int(model.h_sign(0)) * b.get(0, 0);
                w.record(r, || format!("multiple_of_h({})", i + 1));
            }
        }
        _ => {}
    }
    w.into_report::<S>(space, b.max_abs(), tol)
}
