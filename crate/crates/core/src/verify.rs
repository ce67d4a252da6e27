//! Seeded identity batteries over the decomposition, trace and conjugation
//! machinery. Each suite draws `count` samples per model, evaluates a fixed
//! list of named identities on every sample, and aggregates the worst
//! relative residual per identity.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::builders::{
    h_wedge_h, mu, pi_lambda_s, psi, random_bilinear, random_curv, sigma4, sigma45, sigma5,
    sigma_lambda_s, tensor_dot, wedge, wedge_r, Seed,
};
use crate::decomp::{classify_weyl, negligible, WeylTensor};
use crate::scalar::{Mode, Scalar};
use crate::tensor::{
    conjugate, inner, membership4, pair_trace, split2, Bilinear, Curv4, Model, SpaceTag,
};
use crate::traces::{
    d_tensor, directional, length_curv4, length_form, ricci, ricci_of_conjugate, ricci_star,
    scalar_tau, weyl_schouten,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Weyl,
    Ricci,
    Higa,
    Conjugate,
    Projective,
    Einstein,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Algebra,
        Suite::Weyl,
        Suite::Ricci,
        Suite::Higa,
        Suite::Conjugate,
        Suite::Projective,
        Suite::Einstein,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Weyl => "weyl",
            Suite::Ricci => "ricci",
            Suite::Higa => "higa",
            Suite::Conjugate => "conjugate",
            Suite::Projective => "projective",
            Suite::Einstein => "einstein",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s.to_ascii_lowercase())
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub models: Vec<Model>,
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    /// Worst residual relative to the max-norm of the sample and operands.
    pub worst_residual: f64,
    /// First failing `(model, seed)` if any.
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub mode: Mode,
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
    pub models: Vec<String>,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn samples(&self) -> usize {
        self.checks.iter().map(|c| c.samples).max().unwrap_or(0)
    }

    pub fn worst_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.worst_residual).fold(0.0, f64::max)
    }
}

/// Per-sample recorder.
struct Probe<S: Scalar> {
    tol: f64,
    scale: f64,
    rows: Vec<(&'static str, f64, bool)>,
    _s: std::marker::PhantomData<S>,
}

impl<S: Scalar> Probe<S> {
    fn new(tol: f64, scale: f64) -> Self {
        Probe {
            tol,
            scale,
            rows: Vec::new(),
            _s: std::marker::PhantomData,
        }
    }

    fn record(&mut self, name: &'static str, diff: f64, operand_scale: f64) {
        let scale = self.scale.max(operand_scale);
        let rel = if scale > 0.0 { diff / scale } else { diff };
        let ok = match S::MODE {
            Mode::Exact => diff == 0.0,
            Mode::Float => rel <= self.tol,
        };
        self.rows.push((name, rel, ok));
    }

    fn eq4(&mut self, name: &'static str, a: &Curv4<S>, b: &Curv4<S>) {
        let d = (a - b).max_abs();
        self.record(name, d, a.max_abs().max(b.max_abs()));
    }

    fn eq2(&mut self, name: &'static str, a: &Bilinear<S>, b: &Bilinear<S>) {
        let d = (a - b).max_abs();
        self.record(name, d, a.max_abs().max(b.max_abs()));
    }

    fn zero4(&mut self, name: &'static str, a: &Curv4<S>) {
        self.record(name, a.max_abs(), 0.0);
    }

    fn zero2(&mut self, name: &'static str, a: &Bilinear<S>) {
        self.record(name, a.max_abs(), 0.0);
    }

    fn zero(&mut self, name: &'static str, v: S) {
        self.record(name, v.abs_f64(), 0.0);
    }

    fn truth(&mut self, name: &'static str, ok: bool) {
        self.rows.push((name, if ok { 0.0 } else { 1.0 }, ok));
    }

    /// Predicate "x = 0" at the probe's tolerance.
    fn vanishes(&self, x: f64) -> bool {
        negligible::<S>(x, self.scale, self.tol)
    }

    fn member(&self, a: &Curv4<S>, space: SpaceTag) -> bool {
        let r = membership4(a, space, self.tol);
        match S::MODE {
            Mode::Exact => r.holds,
            Mode::Float => r.worst_residual <= self.tol * self.scale.max(a.max_abs()).max(1e-300),
        }
    }
}

fn swap34<S: Scalar>(a: &Curv4<S>) -> Curv4<S> {
    a.reindex(|[i, j, k, l]| [i, j, l, k])
}

fn sum4<S: Scalar>(m: Model, parts: &[&Curv4<S>]) -> Curv4<S> {
    parts.iter().fold(Curv4::zeros(m), |acc, p| &acc + *p)
}

fn dot_h<S: Scalar>(t: &Bilinear<S>) -> Curv4<S> {
    tensor_dot(t, &Bilinear::metric(t.model())).expect("same model")
}

fn wedge_h<S: Scalar>(t: &Bilinear<S>, r: S) -> Curv4<S> {
    wedge_r(t, &Bilinear::metric(t.model()), r).expect("same model")
}

fn alts<S: Scalar>(m: Model, seed: Seed) -> Bilinear<S> {
    random_bilinear(SpaceTag::Alt, m, seed).expect("rank 2")
}

fn curv<S: Scalar>(space: SpaceTag, m: Model, seed: Seed) -> Curv4<S> {
    random_curv(space, m, seed).expect("rank 4")
}

/// Mixed sample kinds: algebraic, pure complement, generic Weyl.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Algebraic,
    Complement,
    Generic,
}

fn mixed_sample<S: Scalar>(m: Model, seed: Seed, idx: usize) -> (Kind, Curv4<S>) {
    match idx % 3 {
        0 => (Kind::Algebraic, curv(SpaceTag::Algebraic, m, seed)),
        1 => (Kind::Complement, sigma45(&alts(m, seed)).expect("antisymmetric")),
        _ => (Kind::Generic, curv(SpaceTag::Weyl, m, seed)),
    }
}

type SampleFn<S> = fn(Model, Seed, usize, &mut Probe<S>);

pub fn run_suite<S: Scalar>(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let f: SampleFn<S> = match suite {
        Suite::Algebra => algebra_sample::<S>,
        Suite::Weyl => weyl_sample::<S>,
        Suite::Ricci => ricci_sample::<S>,
        Suite::Higa => higa_sample::<S>,
        Suite::Conjugate => conjugate_sample::<S>,
        Suite::Projective => projective_sample::<S>,
        Suite::Einstein => einstein_sample::<S>,
    };
    let jobs: Vec<(Model, usize)> = cfg
        .models
        .iter()
        .flat_map(|&m| (0..cfg.count).map(move |i| (m, i)))
        .collect();
    let rows: Vec<(Model, u64, Vec<(&'static str, f64, bool)>)> = jobs
        .par_iter()
        .map(|&(m, i)| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let mut probe = Probe::<S>::new(cfg.tol, 0.0);
            f(m, Seed(seed), i, &mut probe);
            (m, seed, probe.rows)
        })
        .collect();
    let mut checks: Vec<CheckOutcome> = Vec::new();
    for (m, seed, sample) in rows {
        for (name, res, ok) in sample {
            let pos = match checks.iter().position(|c| c.name == name) {
                Some(p) => p,
                None => {
                    checks.push(CheckOutcome {
                        name: name.to_string(),
                        samples: 0,
                        failures: 0,
                        worst_residual: 0.0,
                        first_failure: None,
                    });
                    checks.len() - 1
                }
            };
            let c = &mut checks[pos];
            c.samples += 1;
            if res.is_nan() || res > c.worst_residual {
                c.worst_residual = res;
            }
            if !ok {
                c.failures += 1;
                if c.first_failure.is_none() {
                    c.first_failure = Some(format!("model {m} seed {seed}"));
                }
            }
        }
    }
    SuiteReport {
        suite,
        mode: S::MODE,
        seed: cfg.seed,
        count: cfg.count,
        tol: cfg.tol,
        models: cfg.models.iter().map(|m| m.to_string()).collect(),
        checks,
    }
}

fn algebra_sample<S: Scalar>(m: Model, seed: Seed, _idx: usize, p: &mut Probe<S>) {
    let n = m.n() as i64;
    let alg: Curv4<S> = curv(SpaceTag::Algebraic, m, seed);
    let weyl: Curv4<S> = curv(SpaceTag::Weyl, m, seed);
    let gen: Curv4<S> = curv(SpaceTag::GenCurv, m, seed);
    let phi: Bilinear<S> = alts(m, seed);
    let sym: Bilinear<S> = random_bilinear(SpaceTag::Sym, m, seed).expect("rank 2");
    p.scale = [&alg, &weyl, &gen].iter().map(|a| a.max_abs()).fold(phi.max_abs(), f64::max);

    p.truth("algebraic sample lies in Weyl space", p.member(&alg, SpaceTag::Weyl));
    p.truth("algebraic sample lies in GenCurv", p.member(&alg, SpaceTag::GenCurv));
    p.truth("Weyl sample lies in GenCurv", p.member(&weyl, SpaceTag::GenCurv));
    for space in [SpaceTag::W6, SpaceTag::W7, SpaceTag::W8] {
        let s: Curv4<S> = curv(space, m, seed);
        p.truth("sampled module element passes its membership", p.member(&s, space));
    }
    p.eq4("conjugate is an involution", &conjugate(&conjugate(&gen)), &gen);
    p.eq4("conjugate fixes algebraic tensors", &conjugate(&alg), &alg);
    p.eq2("pair trace (1,4) is Ricci", &pair_trace(&gen, 1, 4).expect("slots"), &ricci(&gen));
    let theta = &sym + &phi;
    let (s, l) = split2(&theta);
    p.eq2("split2 parts sum back", &(&s + &l), &theta);
    p.eq2("Ricci* contraction equals Ricci of conjugate", &ricci_star(&gen), &ricci_of_conjugate(&gen));
    let inner_ab = inner(&weyl, &gen).expect("model");
    let inner_ba = inner(&gen, &weyl).expect("model");
    p.zero("inner product is symmetric", inner_ab - inner_ba);

    let s4 = sigma4(&phi).expect("antisymmetric");
    let s5 = sigma5(&phi).expect("antisymmetric");
    p.truth("sigma4 image is a generalized curvature tensor", p.member(&s4, SpaceTag::GenCurv));
    p.truth("sigma5 image is a generalized curvature tensor", p.member(&s5, SpaceTag::GenCurv));
    let s45 = &s4 - &s5;
    p.truth("(sigma4 - sigma5) image lies in Weyl space", p.member(&s45, SpaceTag::Weyl));
    p.eq2("Ricci of (sigma4 - sigma5)phi is -n phi", &ricci(&s45), &phi.scale(S::from_int(-n)));
    p.eq2("length form of (sigma4 - sigma5)phi is 2 phi", &length_form(&s45), &phi.scale(S::from_int(2)));
    p.truth(
        "Weyl sample is algebraic iff its Ricci tensor is symmetric",
        p.member(&weyl, SpaceTag::Algebraic) == p.vanishes(ricci(&weyl).alt().max_abs()),
    );

    let big_theta = &tensor_dot(&phi, &sym).expect("model") + &tensor_dot(&alts(m, Seed(seed.0 ^ 0x5a5a)), &Bilinear::metric(m)).expect("model");
    let split = sigma_lambda_s(&big_theta).expect("symmetry type");
    p.truth("splitting lands in GenCurv", p.member(&split, SpaceTag::GenCurv));
    p.eq4("projection after splitting is the identity", &pi_lambda_s(&split), &big_theta);
    p.zero4("projection kills algebraic tensors", &pi_lambda_s(&alg));
    let residue = &gen - &sigma_lambda_s(&pi_lambda_s(&gen)).expect("symmetry type");
    p.truth("A - split(project(A)) is algebraic", p.member(&residue, SpaceTag::Algebraic));

    p.eq4("psi fixes algebraic tensors", &psi(&alg), &alg);
    let pg = psi(&gen);
    p.eq4("psi is idempotent", &psi(&pg), &pg);

    for k in [-1i64, 0, 1, 3, n - 1, n + 1] {
        p.eq4(
            "wedge_k of a form with itself is (k+1) times the plain wedge",
            &wedge_r(&theta, &theta, S::from_int(k)).expect("model"),
            &wedge(&theta, &theta).expect("model").scale(S::from_int(k + 1)),
        );
    }
    let (r, t) = (S::ratio(5, 2), S::from_int(-3));
    p.eq4(
        "wedge_r plus wedge_s equals wedge plus wedge_(r+s)",
        &(&wedge_r(&sym, &phi, r).expect("model") + &wedge_r(&sym, &phi, t).expect("model")),
        &(&wedge(&sym, &phi).expect("model") + &wedge_r(&sym, &phi, r + t).expect("model")),
    );
}

fn weyl_sample<S: Scalar>(m: Model, seed: Seed, _idx: usize, p: &mut Probe<S>) {
    let n = m.n() as i64;
    let a: Curv4<S> = curv(SpaceTag::Weyl, m, seed);
    p.scale = a.max_abs();
    let w = WeylTensor::new(a.clone()).expect("sampled tensor is Weyl");
    let al: Vec<Curv4<S>> = (1..=8).map(|i| w.alpha(i).expect("index")).collect();
    let pi: Vec<Curv4<S>> = (1..=8).map(|i| w.pi(i).expect("index")).collect();
    p.eq4("sum of alpha components reconstructs A", &sum4(m, &al.iter().collect::<Vec<_>>()), &a);
    p.eq4("sum of pi components reconstructs A", &sum4(m, &pi.iter().collect::<Vec<_>>()), &a);
    p.zero4("alpha3 vanishes", &al[2]);
    p.zero4("alpha7 vanishes", &al[6]);
    p.zero4("alpha8 vanishes", &al[7]);
    p.zero4("pi7 vanishes", &pi[6]);
    p.zero4("pi8 vanishes", &pi[7]);
    p.eq4("alpha6 equals pi6", &al[5], &pi[5]);
    p.truth("alpha6 lies in W6", p.member(&al[5], SpaceTag::W6));

    let orth_scale = |x: &Curv4<S>, y: &Curv4<S>| x.max_abs() * y.max_abs() * (n as f64).powi(4);
    for (i, j) in [(0, 1), (0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (3, 4), (3, 5), (4, 5)] {
        let v = inner(&al[i], &al[j]).expect("model");
        p.record("alpha components are pairwise orthogonal", v.abs_f64(), orth_scale(&al[i], &al[j]));
    }
    for i in 0..6 {
        for j in (i + 1)..6 {
            let v = inner(&pi[i], &pi[j]).expect("model");
            p.record("pi components are pairwise orthogonal", v.abs_f64(), orth_scale(&pi[i], &pi[j]));
        }
    }

    let hh = h_wedge_h::<S>(m);
    let ric = ricci(&a);
    let rs = ricci_star(&a);
    let l_ric = ric.alt();
    let l_rs = rs.alt();
    let tau = scalar_tau(&a);
    let one = S::one();

    let a2 = wedge_h(&(&ric + &rs).sym(), one)
        .scale(S::ratio(-1, 2 * (n - 2)))
        .add_scaled(tau * S::ratio(2, n * (n - 2)), &hh);
    p.eq4("alpha2 first form agrees", &a2, &al[1]);
    let a3 = wedge_h(&(&ric - &rs).sym(), S::from_int(-1)).scale(S::ratio(-1, 2 * n));
    p.zero4("alpha3 first form vanishes", &a3);
    let x = (&ric.scale(S::from_int(3)) - &rs).alt();
    let a4 = (&dot_h(&x).scale(S::from_int(2)) + &wedge_h(&x, S::from_int(-1))).scale(S::ratio(-1, 4 * (n + 2)));
    p.eq4("alpha4 first form agrees", &a4, &al[3]);
    let y = (&ric + &rs).alt();
    let a5 = (&dot_h(&y).scale(S::from_int(2)) + &wedge_h(&y, S::from_int(3))).scale(S::ratio(-1, 4 * (n - 2)));
    p.eq4("alpha5 first form agrees", &a5, &al[4]);
    let a6 = &(&psi(&a) - &al[0]) - &al[1];
    p.eq4("alpha6 psi form agrees", &a6, &al[5]);

    let p4 = (&dot_h(&l_rs).scale(S::from_int(2)) + &wedge_h(&l_rs, S::from_int(n + 1)))
        .scale(S::ratio(-1, n * n - 4))
        .add_scaled(
            S::ratio(-3, (n * n - 4) * (n + 1)),
            &(&dot_h(&l_ric).scale(S::from_int(2)) + &wedge_h(&l_ric, S::from_int(n + 1))),
        );
    p.eq4("pi4 first form agrees", &p4, &pi[3]);
    let z = (&ric + &rs.scale(S::from_int(n - 1))).sym().scale(S::ratio(1, n));
    let p5 = (&hh.scale(tau) - &wedge_h(&z, S::from_int(n - 1))).scale(S::ratio(1, (n - 1) * (n - 2)));
    p.eq4("pi5 first form agrees", &p5, &pi[4]);
    let p6 = psi(&a)
        .add_scaled(S::ratio(1, 2 * (n - 2)), &wedge_h(&(&ric + &rs).sym(), one))
        .add_scaled(-tau * S::ratio(1, (n - 1) * (n - 2)), &hh);
    p.eq4("pi6 psi form agrees", &p6, &pi[5]);
    let p7 = mu(&a)
        .add_scaled(S::ratio(1, 2 * n), &wedge_h(&(&ric - &rs).sym(), S::from_int(-1)))
        .add_scaled(S::ratio(1, 2 * (n + 2)), &dot_h(&x))
        .add_scaled(S::ratio(1, 4 * (n + 2)), &wedge_h(&x, S::from_int(-1)));
    p.zero4("pi7 mu form vanishes", &p7);
    let p8 = (&(&a - &psi(&a)) - &mu(&a))
        .add_scaled(S::ratio(1, 2 * (n - 2)), &dot_h(&y))
        .add_scaled(S::ratio(1, 4 * (n - 2)), &wedge_h(&y, S::from_int(3)));
    p.zero4("pi8 closed form vanishes", &p8);

    let sigma = weyl_schouten(&a).expect("Weyl");
    p.eq4(
        "alpha2 via Weyl-Schouten tensor",
        &al[1],
        &wedge_h(&sigma, one).scale(-one).add_scaled(tau * S::ratio(1, n * (n - 1)), &hh),
    );
    p.eq4(
        "alpha6 via Weyl-Schouten tensor",
        &al[5],
        &(&(&a + &wedge_h(&sigma, one)) - &(&al[3] + &al[4])),
    );

    let flat: Curv4<S> = curv(SpaceTag::W6, m, seed);
    let wf = WeylTensor::new(flat.clone()).expect("W6 is Weyl");
    p.zero2("W6 sample is Ricci flat", &ricci(&flat));
    for i in [1usize, 2, 3, 4, 5, 7, 8] {
        p.zero4("Ricci-flat tensor has no pi component besides pi6", &wf.pi(i).expect("index"));
    }
    p.eq4("Ricci-flat tensor equals its pi6 component", &wf.pi(6).expect("index"), &flat);
    p.eq4("Ricci-flat tensor equals its alpha6 component", &wf.alpha(6).expect("index"), &flat);
}

fn ricci_sample<S: Scalar>(m: Model, seed: Seed, _idx: usize, p: &mut Probe<S>) {
    let n = m.n() as i64;
    let a: Curv4<S> = curv(SpaceTag::Weyl, m, seed);
    p.scale = a.max_abs();
    let w = WeylTensor::new(a).expect("Weyl");
    let h = Bilinear::<S>::metric(m);
    let tau_h = h.scale(w.tau() * S::ratio(1, n));
    let s_ric = w.sym_ricci().clone();
    let l = w.alt_ricci().clone();
    let s0 = &s_ric - &tau_h;
    let al: Vec<Curv4<S>> = (1..=8).map(|i| w.alpha(i).expect("index")).collect();
    let pi: Vec<Curv4<S>> = (1..=8).map(|i| w.pi(i).expect("index")).collect();
    let (r, rs) = (ricci::<S>, ricci_star::<S>);

    p.eq2("Ric(alpha1) = tau/n h", &r(&al[0]), &tau_h);
    p.eq2("Ric*(alpha1) = tau/n h", &rs(&al[0]), &tau_h);
    p.eq2("Ric(alpha2) = S Ric - tau/n h", &r(&al[1]), &s0);
    p.eq2("Ric*(alpha2) = S Ric - tau/n h", &rs(&al[1]), &s0);
    p.eq2("Ric(alpha4) = (n+2)/(2n) Lambda Ric", &r(&al[3]), &l.scale(S::ratio(n + 2, 2 * n)));
    p.eq2("Ric*(alpha4) = -Ric(alpha4)", &rs(&al[3]), &r(&al[3]).scale(-S::one()));
    p.eq2("Ric(alpha5) = (n-2)/(2n) Lambda Ric", &r(&al[4]), &l.scale(S::ratio(n - 2, 2 * n)));
    p.eq2("Ric*(alpha5) = 3 Ric(alpha5)", &rs(&al[4]), &r(&al[4]).scale(S::from_int(3)));
    for j in [2usize, 5, 6, 7] {
        p.zero2("Ric(alpha_j) = 0 for j = 3,6,7,8", &r(&al[j]));
        p.zero2("Ric*(alpha_j) = 0 for j = 3,6,7,8", &rs(&al[j]));
    }

    p.eq2("Ric(pi1) = tau/n h", &r(&pi[0]), &tau_h);
    p.eq2("Ric*(pi1) = tau/n h", &rs(&pi[0]), &tau_h);
    p.eq2("Ric(pi2) = S Ric - tau/n h", &r(&pi[1]), &s0);
    p.eq2("Ric(pi2) = -(n-1) Ric*(pi2)", &r(&pi[1]), &rs(&pi[1]).scale(S::from_int(1 - n)));
    p.eq2("Ric(pi3) = Lambda Ric", &r(&pi[2]), &l);
    p.eq2("Ric(pi3) = -(n+1)/3 Ric*(pi3)", &r(&pi[2]), &rs(&pi[2]).scale(S::ratio(-(n + 1), 3)));
    p.zero2("Ric(pi4) = 0", &r(&pi[3]));
    p.eq2(
        "Ric*(pi4) = (n-2)(n+2)/(n(n+1)) Lambda Ric",
        &rs(&pi[3]),
        &l.scale(S::ratio((n - 2) * (n + 2), n * (n + 1))),
    );
    p.zero2("Ric(pi5) = 0", &r(&pi[4]));
    let p5s = (&s_ric.scale(S::from_int(n)) - &h.scale(w.tau())).scale(S::ratio(1, n - 1));
    p.eq2("Ric*(pi5) = (n S Ric - tau h)/(n-1)", &rs(&pi[4]), &p5s);
    p.eq2("Ric*(pi5) = n/(n-1) Ric(pi2)", &rs(&pi[4]), &r(&pi[1]).scale(S::ratio(n, n - 1)));
    p.eq2("Ric*(pi5) = -n Ric*(pi2)", &rs(&pi[4]), &rs(&pi[1]).scale(S::from_int(-n)));
    p.zero2("Ric(pi6) = 0", &r(&pi[5]));
    p.zero2("Ric*(pi6) = 0", &rs(&pi[5]));
}

fn higa_sample<S: Scalar>(m: Model, seed: Seed, idx: usize, p: &mut Probe<S>) {
    let n = m.n() as i64;
    let (kind, a) = mixed_sample::<S>(m, seed, idx);
    p.scale = a.max_abs();
    let w = WeylTensor::new(a.clone()).expect("Weyl");
    let hg = w.higa();
    let al = |i| w.alpha(i).expect("index");
    let pi = |i| w.pi(i).expect("index");
    let l = w.alt_ricci().clone();
    let closed = (&dot_h(&l).scale(S::from_int(2)) + &wedge_h(&l, S::one())).scale(S::ratio(-1, n));
    p.eq4("H = alpha4 + alpha5", &hg, &(&al(4) + &al(5)));
    p.eq4("H = pi3 + pi4", &hg, &(&pi(3) + &pi(4)));
    p.eq4("H closed form in Lambda Ric", &hg, &closed);
    p.truth("A - H is algebraic", p.member(&(&a - &hg), SpaceTag::Algebraic));
    p.eq4("A = alpha1 + alpha2 + alpha6 + H", &a, &sum4(m, &[&al(1), &al(2), &al(6), &hg]));
    let hw = WeylTensor::new(hg.clone()).expect("H is Weyl");
    p.eq4("H is idempotent", &hw.higa(), &hg);

    let d = d_tensor(&a);
    let dd = |i, j, k, l| d.get(i, j, k, l);
    let lhs = hg.scale(S::from_int(-4));
    let first = Curv4::from_fn(m, |x, y, z, q| {
        S::from_int(2) * dd(x, y, z, q) + dd(x, z, y, q) - dd(y, z, x, q) - dd(x, q, y, z) + dd(y, q, x, z)
    });
    let second = Curv4::from_fn(m, |x, y, z, q| {
        S::from_int(2) * dd(x, y, z, q)
            - (dd(x, y, z, q) + dd(y, z, x, q) + dd(z, x, y, q))
            - (dd(x, q, y, z) + dd(q, y, x, z) + dd(y, x, q, z))
    });
    p.eq4("-4H from D (first expression)", &lhs, &first);
    p.eq4("-4H from D (cyclic expression)", &lhs, &second);
    let h_sum = &hg + &swap34(&hg);
    p.eq4("D = -(H + H with last pair swapped)", &d, &h_sum.scale(-S::one()));
    let printed_gap = (&d - &h_sum).max_abs();
    let printed_ok = p.vanishes(printed_gap);
    let trivial = p.vanishes(l.max_abs());
    p.truth("D = +(H + H swapped) fails exactly when Lambda Ric is nonzero", printed_ok == trivial);
    let star = conjugate(&a);
    p.eq4("A* + A* with last pair swapped = D swapped", &(&star + &swap34(&star)), &swap34(&d));
    let alg = sum4(m, &[&al(1), &al(2), &al(6)]);
    p.eq4("A* = algebraic part - H with last pair swapped", &star, &(&alg - &swap34(&hg)));

    let z = |t: &Curv4<S>| p.vanishes(t.max_abs());
    let conds = [
        p.vanishes(l.max_abs()),
        z(&al(4)),
        z(&al(5)),
        z(&hg),
        z(&pi(3)),
        z(&pi(4)),
        p.member(&a, SpaceTag::Algebraic),
    ];
    let agree = conds.iter().all(|&c| c == conds[0]);
    p.truth("Lambda Ric=0, alpha4=0, alpha5=0, H=0, pi3=0, pi4=0, A algebraic agree", agree);
    let expected = match kind {
        Kind::Algebraic => true,
        Kind::Complement | Kind::Generic => l.is_zero(),
    };
    p.truth("equivalence truth value matches sample kind", conds[0] == expected);
}

fn conjugate_sample<S: Scalar>(m: Model, seed: Seed, idx: usize, p: &mut Probe<S>) {
    let n = m.n() as i64;
    let (kind, a) = mixed_sample::<S>(m, seed, idx);
    p.scale = a.max_abs();
    let w = WeylTensor::new(a.clone()).expect("Weyl");
    let ric = ricci(&a);
    let rs = ricci_star(&a);
    let (s_ric, l_ric) = split2(&ric);
    let (s_rs, l_rs) = split2(&rs);

    p.eq2("S Ric* = S Ric", &s_rs, &s_ric);
    p.eq2("Lambda Ric* = (n-4)/n Lambda Ric", &l_rs, &l_ric.scale(S::ratio(n - 4, n)));
    p.zero("tau = trace of Ric*", w.tau() - rs.trace());
    p.eq2("Ric* contraction equals Ric of conjugate", &rs, &ricci_of_conjugate(&a));
    let star = conjugate(&a);
    if n == 4 {
        p.zero2("Lambda Ric* vanishes in dimension 4", &l_rs);
    } else {
        p.eq4(
            "A* pair relation with 4/(n-4) Lambda Ric*",
            &(&star + &swap34(&star)),
            &dot_h(&l_rs).scale(S::ratio(4, n - 4)),
        );
    }

    let alg = p.member(&a, SpaceTag::Algebraic);
    let star_bianchi = p.member(&star, SpaceTag::GenCurv);
    p.truth("A algebraic iff A* satisfies Bianchi", alg == star_bianchi);

    let k = directional(&a);
    let f4 = length_curv4(&a);
    let f = length_form(&a);
    let (s_k, l_k) = split2(&ricci(&k));
    p.eq2("Ric(K) = (Ric + Ric*)/2", &ricci(&k), &(&ric + &rs).scale(S::ratio(1, 2)));
    p.eq2("S Ric(K) = S Ric", &s_k, &s_ric);
    p.eq2("Lambda Ric(K) = (n-2)/n Lambda Ric", &l_k, &l_ric.scale(S::ratio(n - 2, n)));
    p.eq2("Ric(F h) = 2/n Lambda Ric", &ricci(&f4), &l_ric.scale(S::ratio(2, n)));
    let printed_gap = (&ricci(&f4) - &l_ric.scale(S::ratio(1, n))).max_abs();
    p.truth(
        "Ric(F h) = 1/n Lambda Ric fails exactly when Lambda Ric is nonzero",
        p.vanishes(printed_gap) == p.vanishes(l_ric.max_abs()),
    );
    p.zero2("S Ric(F h) = 0", &ricci(&f4).sym());
    p.eq4("K antisymmetric in the last pair", &k, &swap34(&k).scale(-S::one()));
    p.eq4("F h = (A - A*)/2", &f4, &(&a - &star).scale(S::ratio(1, 2)));
    p.eq4(
        "A* with last pair swapped = A swapped - 2 F h",
        &swap34(&star),
        &(&swap34(&a) - &f4.scale(S::from_int(2))),
    );
    let hg = w.higa();
    p.eq4("F h = (H + H swapped)/2", &f4, &(&hg + &swap34(&hg)).scale(S::ratio(1, 2)));
    let alg_part = sum4(m, &[&w.alpha(1).expect("index"), &w.alpha(2).expect("index"), &w.alpha(6).expect("index")]);
    p.eq4(
        "K = algebraic part + (H - H swapped)/2",
        &k,
        &(&alg_part + &(&hg - &swap34(&hg)).scale(S::ratio(1, 2))),
    );
    p.eq2("F = -(2/n) Lambda Ric", &f, &l_ric.scale(S::ratio(-2, n)));

    let z = |t: &Curv4<S>| p.vanishes(t.max_abs());
    let conds = [
        p.vanishes(f.max_abs()),
        z(&hg),
        z(&(&a - &star)),
        z(&(&a - &k)),
        p.vanishes(l_ric.max_abs()),
        z(&w.alpha(4).expect("index")),
        z(&w.alpha(5).expect("index")),
        z(&w.pi(3).expect("index")),
        z(&w.pi(4).expect("index")),
        star_bianchi,
        p.member(&f4, SpaceTag::GenCurv),
        p.member(&k, SpaceTag::GenCurv),
        alg,
        p.member(&star, SpaceTag::Algebraic),
    ];
    p.truth("triviality conditions agree", conds.iter().all(|&c| c == conds[0]));
    let expected = kind == Kind::Algebraic || l_ric.is_zero();
    p.truth("triviality truth value matches sample kind", conds[0] == expected);
}

fn projective_sample<S: Scalar>(m: Model, seed: Seed, _idx: usize, p: &mut Probe<S>) {
    let n = m.n() as i64;
    let a: Curv4<S> = curv(SpaceTag::Weyl, m, seed);
    p.scale = a.max_abs();
    let w = WeylTensor::new(a.clone()).expect("Weyl");
    let pa = w.projective();
    p.zero2("Ric(p(A)) = 0", &ricci(&pa));
    let parts = [w.pi(4).expect("index"), w.pi(5).expect("index"), w.pi(6).expect("index")];
    p.eq4("p(A) = pi4 + pi5 + pi6", &pa, &sum4(m, &parts.iter().collect::<Vec<_>>()));
    let l = w.alt_ricci().clone();
    let closed = a
        .add_scaled(S::ratio(1, n + 1), &(&dot_h(&l).scale(S::from_int(2)) + &wedge_h(&l, S::zero())))
        .add_scaled(S::ratio(1, n - 1), &wedge_h(w.sym_ricci(), S::zero()));
    p.eq4("p(A) closed form", &pa, &closed);

    let mut rng = ChaCha8Rng::seed_from_u64(seed.0 ^ 0x7072_6f6a);
    let c = S::from_int(rng.gen_range(-9..=9));
    let cc = h_wedge_h::<S>(m).scale(c);
    let wc = WeylTensor::new(cc.clone()).expect("Weyl");
    p.zero4("p vanishes on multiples of h^h", &wc.projective());
    p.eq4("p(A) = 0 forces A = alpha1(A)", &cc, &wc.alpha(1).expect("index"));
    let theta: Bilinear<S> = random_bilinear(SpaceTag::Sym0, m, seed).expect("rank 2");
    let bump = wedge_h(&theta, S::one());
    let wb = WeylTensor::new(bump.clone()).expect("algebraic");
    let bump5 = wb.pi(5).expect("index");
    let wp = WeylTensor::new(&cc + &bump).expect("Weyl");
    let pp = wp.projective();
    p.eq4("p of perturbed tensor is p of the perturbation", &pp, &wb.projective());
    p.truth(
        "perturbation with nonzero pi5 part breaks p(A) = 0",
        p.vanishes(bump5.max_abs()) || !p.vanishes(pp.max_abs()),
    );
    let _ = n;
}

/// Einstein-Weyl samples `c h^h + (sigma4 - sigma5)phi + W6` on even indices
/// (with `phi = 0` on every fourth index) and generic Weyl samples on odd ones.
fn einstein_sample<S: Scalar>(m: Model, seed: Seed, idx: usize, p: &mut Probe<S>) {
    let einstein = idx.is_multiple_of(2);
    let a: Curv4<S> = if einstein {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.0 ^ 0x6577);
        let c = S::from_int(rng.gen_range(-9..=9));
        let phi: Bilinear<S> = if idx.is_multiple_of(4) { Bilinear::zeros(m) } else { alts(m, seed) };
        let w6: Curv4<S> = curv(SpaceTag::W6, m, seed);
        &(&h_wedge_h::<S>(m).scale(c) + &sigma45(&phi).expect("antisymmetric")) + &w6
    } else {
        curv(SpaceTag::Weyl, m, seed)
    };
    p.scale = a.max_abs();
    let w = WeylTensor::new(a.clone()).expect("Weyl");
    let al = |i| w.alpha(i).expect("index");
    let pi = |i| w.pi(i).expect("index");
    let ric = ricci(&a);
    let s_ric = w.sym_ricci().clone();
    let z4 = |t: &Curv4<S>| p.vanishes(t.max_abs());
    let z2 = |t: &Bilinear<S>| p.vanishes(t.max_abs());
    let ew = classify_weyl(&w, p.tol).is_einstein_weyl;
    let conds = [
        ew,
        z4(&(&a - &sum4(m, &[&al(1), &al(6), &al(4), &al(5)]))),
        z4(&(&a - &sum4(m, &[&pi(1), &pi(3), &pi(4), &pi(6)]))),
        z4(&al(2)),
        z4(&pi(2)),
        z4(&pi(5)),
        z2(&ricci(&al(2))),
        z2(&ricci_star(&al(2))),
        z2(&ricci(&pi(2))),
        z2(&ricci_star(&pi(2))),
        z2(&ricci_star(&pi(5))),
        z2(&(&ricci_star(&al(1)) - &s_ric)),
        z2(&(&ricci(&pi(1)) - &s_ric)),
        z2(&(&ricci_star(&pi(1)) - &s_ric)),
        z2(&(&ricci(&al(1)) - &s_ric)),
    ];
    let literal = [
        z2(&(&ricci_star(&al(1)) - &ric)),
        z2(&(&ricci(&pi(1)) - &ric)),
        z2(&(&ricci_star(&pi(1)) - &ric)),
        z2(&(&ricci(&al(1)) - &ric)),
    ];
    let trivial = z2(w.alt_ricci());
    p.truth("fifteen Einstein-Weyl conditions agree pairwise", conds.iter().all(|&c| c == conds[0]));
    p.truth("Einstein-Weyl flag matches the construction", ew == einstein);
    p.truth(
        "literal Ric forms of the last four conditions hold iff Einstein-Weyl and Lambda Ric = 0",
        literal.iter().all(|&c| c == (ew && trivial)),
    );
    if ew {
        let c = classify_weyl(&w, p.tol);
        p.truth("lambda reported with n lambda = tau", c.lambda.is_some());
        let s_rs = ricci_star(&a).sym();
        p.eq2("S Ric* = tau/n h on Einstein-Weyl samples", &s_rs, &Bilinear::metric(m).scale(w.tau() * S::ratio(1, m.n() as i64)));
    }
}

/// Counts of literal-form failures of the last four Einstein-Weyl
/// conditions on Einstein-Weyl samples with `Lambda Ric != 0`.
pub fn literal_einstein_failures<S: Scalar>(cfg: &VerifyConfig) -> (usize, usize) {
    let mut tested = 0;
    let mut failed = 0;
    for &m in &cfg.models {
        for idx in (0..cfg.count).filter(|i| i % 4 == 2) {
            let seed = Seed(cfg.seed.wrapping_add(idx as u64));
            let phi: Bilinear<S> = alts(m, seed);
            if phi.is_zero() {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed.0 ^ 0x6577);
            let c = S::from_int(rng.gen_range(-9..=9));
            let a = &(&h_wedge_h::<S>(m).scale(c) + &sigma45(&phi).expect("antisymmetric"))
                + &curv::<S>(SpaceTag::W6, m, seed);
            let w = WeylTensor::new(a.clone()).expect("Weyl");
            let gap = &ricci(&w.alpha(1).expect("index")) - &ricci(&a);
            tested += 1;
            if !negligible::<S>(gap.max_abs(), a.max_abs(), cfg.tol) {
                failed += 1;
            }
        }
    }
    (tested, failed)
}
