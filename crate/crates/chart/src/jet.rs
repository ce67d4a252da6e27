//! Truncated multivariate Taylor jets (forward-mode automatic differentiation).
//!
//! A jet stores normalized Taylor coefficients `c_α = ∂^α f(x0) / α!` for all
//! multi-indices with `|α| <= order`. Arithmetic and the elementary functions
//! propagate the expansion exactly up to rounding, so derivatives of composed
//! chart data are available to any order without finite differences.

use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use crate::real::Real;

#[derive(Debug)]
pub struct JetSpace {
    nvars: usize,
    order: usize,
    exps: Vec<Vec<u8>>,
    degree: Vec<usize>,
    index: HashMap<Vec<u8>, usize>,
    /// `(a, b, c)` with `exps[a] + exps[b] = exps[c]`, sorted by `c`.
    products: Vec<(u32, u32, u32)>,
    /// `raise[v][a]` is the index of `exps[a] + e_v`, when within the order.
    raise: Vec<Vec<Option<usize>>>,
}

impl JetSpace {
    /// Shared space for `nvars` variables truncated at total degree `order`.
    pub fn get(nvars: usize, order: usize) -> &'static JetSpace {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), &'static JetSpace>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("jet space cache poisoned");
        guard
            .entry((nvars, order))
            .or_insert_with(|| Box::leak(Box::new(JetSpace::build(nvars, order))))
    }

    fn build(nvars: usize, order: usize) -> JetSpace {
        let mut exps = Vec::new();
        for d in 0..=order {
            let mut cur = vec![0u8; nvars];
            push_degree(&mut exps, &mut cur, 0, d);
        }
        let degree: Vec<usize> = exps.iter().map(|e| e.iter().map(|&x| x as usize).sum()).collect();
        let index: HashMap<Vec<u8>, usize> = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut products = Vec::new();
        for a in 0..exps.len() {
            for b in 0..exps.len() {
                if degree[a] + degree[b] <= order {
                    let sum: Vec<u8> = exps[a].iter().zip(&exps[b]).map(|(x, y)| x + y).collect();
                    products.push((a as u32, b as u32, index[&sum] as u32));
                }
            }
        }
        products.sort_by_key(|t| t.2);
        let raise = (0..nvars)
            .map(|v| {
                exps.iter()
                    .map(|e| {
                        let mut up = e.clone();
                        up[v] += 1;
                        index.get(&up).copied()
                    })
                    .collect()
            })
            .collect();
        JetSpace { nvars, order, exps, degree, index, products, raise }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// The jets of the coordinate functions at `x0`.
    pub fn variables(&'static self, x0: &[f64]) -> Vec<Jet> {
        assert_eq!(x0.len(), self.nvars, "point has the wrong dimension");
        x0.iter()
            .enumerate()
            .map(|(v, &x)| {
                let mut j = Jet::constant(self, x);
                j.c[1 + v] = 1.0;
                j
            })
            .collect()
    }
}

fn push_degree(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, pos: usize, left: usize) {
    if pos + 1 == cur.len() {
        cur[pos] = left as u8;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k as u8;
        push_degree(out, cur, pos + 1, left - k);
    }
    cur[pos] = 0;
}

#[derive(Clone, Debug)]
pub struct Jet {
    space: &'static JetSpace,
    /// Degree up to which the coefficients are valid.
    ord: usize,
    c: Vec<f64>,
}

impl Jet {
    pub fn constant(space: &'static JetSpace, v: f64) -> Jet {
        let mut c = vec![0.0; space.len()];
        c[0] = v;
        Jet { space, ord: space.order, c }
    }

    pub fn space(&self) -> &'static JetSpace {
        self.space
    }

    /// Degree up to which this jet is exact.
    pub fn order(&self) -> usize {
        self.ord
    }

    /// First partial derivative `∂f/∂x_v` at the base point.
    pub fn d1(&self, v: usize) -> f64 {
        debug_assert!(self.ord >= 1);
        self.c[1 + v]
    }

    /// Second partial derivative `∂²f/∂x_u∂x_v` at the base point.
    pub fn d2(&self, u: usize, v: usize) -> f64 {
        debug_assert!(self.ord >= 2);
        let mut e = vec![0u8; self.space.nvars];
        e[u] += 1;
        e[v] += 1;
        let c = self.c[self.space.index[&e]];
        if u == v {
            2.0 * c
        } else {
            c
        }
    }

    /// The jet of `∂f/∂x_v`, exact to one degree less.
    pub fn d(&self, v: usize) -> Jet {
        assert!(self.ord >= 1, "jet has no derivative information left");
        let sp = self.space;
        let mut c = vec![0.0; sp.len()];
        for a in 0..sp.len() {
            if sp.degree[a] >= self.ord {
                break;
            }
            if let Some(up) = sp.raise[v][a] {
                c[a] = (sp.exps[up][v] as f64) * self.c[up];
            }
        }
        Jet { space: sp, ord: self.ord - 1, c }
    }

    fn zip(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        debug_assert!(std::ptr::eq(self.space, other.space), "jets from different spaces");
        Jet {
            space: self.space,
            ord: self.ord.min(other.ord),
            c: self.c.iter().zip(&other.c).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    fn mul_ref(&self, other: &Jet) -> Jet {
        debug_assert!(std::ptr::eq(self.space, other.space), "jets from different spaces");
        let ord = self.ord.min(other.ord);
        let sp = self.space;
        let mut c = vec![0.0; sp.len()];
        for &(a, b, k) in &sp.products {
            let k = k as usize;
            if sp.degree[k] > ord {
                break;
            }
            c[k] += self.c[a as usize] * other.c[b as usize];
        }
        Jet { space: sp, ord, c }
    }

    /// `Σ_k coeffs[k] (f − f(x0))^k`, the composition with a univariate
    /// function whose normalized Taylor coefficients at `f(x0)` are `coeffs`.
    fn compose(&self, coeffs: &[f64]) -> Jet {
        let mut delta = self.clone();
        delta.c[0] = 0.0;
        let top = self.ord;
        let mut acc = Jet::constant(self.space, coeffs[top]);
        acc.ord = self.ord;
        for k in (0..top).rev() {
            acc = acc.mul_ref(&delta);
            acc.c[0] += coeffs[k];
        }
        acc
    }

    pub fn recip(&self) -> Jet {
        let a = self.c[0];
        let coeffs: Vec<f64> = (0..=self.ord)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / a.powi(k as i32 + 1))
            .collect();
        self.compose(&coeffs)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        self.zip(&o, |a, b| a + b)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self.zip(&o, |a, b| a - b)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        self.mul_ref(&o)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self.mul_ref(&o.recip())
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        self.c.iter_mut().for_each(|x| *x = -*x);
        self
    }
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        self.zip(o, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        self.zip(o, |a, b| a - b)
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        self.mul_ref(o)
    }
}

impl Real for Jet {
    fn lift(&self, c: f64) -> Self {
        Jet::constant(self.space, c)
    }

    fn value(&self) -> f64 {
        self.c[0]
    }

    fn sin(&self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        let cycle = [s, c, -s, -c];
        let coeffs: Vec<f64> = (0..=self.ord).map(|k| cycle[k % 4] / factorial(k)).collect();
        self.compose(&coeffs)
    }

    fn cos(&self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        let cycle = [c, -s, -c, s];
        let coeffs: Vec<f64> = (0..=self.ord).map(|k| cycle[k % 4] / factorial(k)).collect();
        self.compose(&coeffs)
    }

    fn exp(&self) -> Self {
        let e = self.c[0].exp();
        let coeffs: Vec<f64> = (0..=self.ord).map(|k| e / factorial(k)).collect();
        self.compose(&coeffs)
    }

    fn ln(&self) -> Self {
        let a = self.c[0];
        let coeffs: Vec<f64> = (0..=self.ord)
            .map(|k| {
                if k == 0 {
                    a.ln()
                } else {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign / (k as f64 * a.powi(k as i32))
                }
            })
            .collect();
        self.compose(&coeffs)
    }

    fn powf(&self, e: f64) -> Self {
        let a = self.c[0];
        let mut binom = 1.0;
        let coeffs: Vec<f64> = (0..=self.ord)
            .map(|k| {
                if k > 0 {
                    binom *= (e - (k as f64 - 1.0)) / k as f64;
                }
                binom * a.powf(e - k as f64)
            })
            .collect();
        self.compose(&coeffs)
    }

    fn scale(&self, c: f64) -> Self {
        Jet { space: self.space, ord: self.ord, c: self.c.iter().map(|x| x * c).collect() }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
