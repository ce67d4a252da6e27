//! Tensor constructors: products, `r`-wedges, the `sigma_4`/`sigma_5` maps,
//! the splitting pair between the generalized curvature tensors and
//! `Lambda^2 (x) S^2`, the `psi`/`mu` symmetrizers, and seeded samplers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dims::null_space;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{membership2, Bilinear, Curv4, Model, SpaceTag, Tensor, DEFAULT_FLOAT_TOL};

/// Seed of the deterministic sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

/// Sampled coefficients lie in `-COEFF_RANGE..=COEFF_RANGE`.
pub const COEFF_RANGE: i64 = 9;

fn same_model(a: Model, b: Model) -> Result<Model> {
    if a == b {
        Ok(a)
    } else {
        Err(Error::ModelMismatch)
    }
}

/// `(t1 . t2)(x,y,z,w) = t1(x,y) t2(z,w)`.
pub fn tensor_dot<S: Scalar>(t1: &Bilinear<S>, t2: &Bilinear<S>) -> Result<Curv4<S>> {
    let model = same_model(t1.model(), t2.model())?;
    Ok(Curv4::from_fn(model, |i, j, k, l| t1.get(i, j) * t2.get(k, l)))
}

/// `t1 ^_r t2`:
/// `t1(x,z)t2(y,w) - t1(y,z)t2(x,w) - r[t1(x,w)t2(y,z) - t1(y,w)t2(x,z)]`.
///
/// `r` is an arbitrary scalar; the decomposition formulas need `r` in
/// `{-1, 0, 1, 3, n - 1, n + 1}`.
pub fn wedge_r<S: Scalar>(t1: &Bilinear<S>, t2: &Bilinear<S>, r: S) -> Result<Curv4<S>> {
    let model = same_model(t1.model(), t2.model())?;
    Ok(Curv4::from_fn(model, |i, j, k, l| {
        t1.get(i, k) * t2.get(j, l) - t1.get(j, k) * t2.get(i, l)
            - r * (t1.get(i, l) * t2.get(j, k) - t1.get(j, l) * t2.get(i, k))
    }))
}

/// `t1 ^ t2`, the `r = 0` wedge.
pub fn wedge<S: Scalar>(t1: &Bilinear<S>, t2: &Bilinear<S>) -> Result<Curv4<S>> {
    wedge_r(t1, t2, S::zero())
}

/// `h ^ h`.
pub fn h_wedge_h<S: Scalar>(model: Model) -> Curv4<S> {
    let h = Bilinear::metric(model);
    wedge(&h, &h).expect("same model")
}

fn require_antisymmetric<S: Scalar>(phi: &Bilinear<S>) -> Result<()> {
    let report = membership2(phi, SpaceTag::Alt, DEFAULT_FLOAT_TOL);
    if report.holds {
        Ok(())
    } else {
        Err(Error::NotAntisymmetric {
            residual: report.worst_residual,
        })
    }
}

/// `sigma_4(phi)(x,y,z,w) = 2 phi(x,y)h(z,w) + phi(x,z)h(y,w) - phi(y,z)h(x,w)`.
pub fn sigma4<S: Scalar>(phi: &Bilinear<S>) -> Result<Curv4<S>> {
    require_antisymmetric(phi)?;
    let m = phi.model();
    let two = S::from_int(2);
    Ok(Curv4::from_fn(m, |i, j, k, l| {
        two * phi.get(i, j) * m.h(k, l) + phi.get(i, k) * m.h(j, l) - phi.get(j, k) * m.h(i, l)
    }))
}

/// `sigma_5(phi)(x,y,z,w) = phi(x,w)h(y,z) - phi(y,w)h(x,z)`.
pub fn sigma5<S: Scalar>(phi: &Bilinear<S>) -> Result<Curv4<S>> {
    require_antisymmetric(phi)?;
    let m = phi.model();
    Ok(Curv4::from_fn(m, |i, j, k, l| {
        phi.get(i, l) * m.h(j, k) - phi.get(j, l) * m.h(i, k)
    }))
}

/// `(sigma_4 - sigma_5)(phi)`, the generic element of the complement of the
/// algebraic tensors inside the Weyl space.
pub fn sigma45<S: Scalar>(phi: &Bilinear<S>) -> Result<Curv4<S>> {
    Ok(&sigma4(phi)? - &sigma5(phi)?)
}

/// `1/2 {A(x,y,z,w) + A(x,y,w,z)}`; its kernel on the generalized curvature
/// tensors is the algebraic ones.
pub fn pi_lambda_s<S: Scalar>(a: &Curv4<S>) -> Curv4<S> {
    let half = S::ratio(1, 2);
    Curv4::from_fn(a.model(), |i, j, k, l| (a.get(i, j, k, l) + a.get(i, j, l, k)) * half)
}

/// Splitting of [`pi_lambda_s`]: for `Theta` antisymmetric in the first pair
/// and symmetric in the second,
/// `Theta_ijkl + 1/2 {Theta_kjil + Theta_ikjl - Theta_ljik - Theta_iljk}`.
pub fn sigma_lambda_s<S: Scalar>(theta: &Curv4<S>) -> Result<Curv4<S>> {
    let m = theta.model();
    let n = m.n();
    let tol = DEFAULT_FLOAT_TOL * theta.max_abs();
    let mut worst = 0.0f64;
    let mut exact_bad = false;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = theta.get(i, j, k, l);
                    for r in [v + theta.get(j, i, k, l), v - theta.get(i, j, l, k)] {
                        exact_bad |= !r.is_zero();
                        worst = worst.max(r.abs_f64());
                    }
                }
            }
        }
    }
    let bad = match S::MODE {
        crate::scalar::Mode::Exact => exact_bad,
        crate::scalar::Mode::Float => worst > tol,
    };
    if bad {
        return Err(Error::WrongSymmetryType(format!(
            "expected Theta_ijkl = -Theta_jikl = Theta_ijlk (residual {worst:e})"
        )));
    }
    let half = S::ratio(1, 2);
    Ok(Curv4::from_fn(m, |i, j, k, l| {
        theta.get(i, j, k, l)
            + half
                * (theta.get(k, j, i, l) + theta.get(i, k, j, l)
                    - theta.get(l, j, i, k)
                    - theta.get(i, l, j, k))
    }))
}

/// `4 psi(A)(x,y,z,w) = A(x,y,z,w) + A(y,x,w,z) + A(z,w,x,y) + A(w,z,y,x)`.
pub fn psi<S: Scalar>(a: &Curv4<S>) -> Curv4<S> {
    let quarter = S::ratio(1, 4);
    Curv4::from_fn(a.model(), |i, j, k, l| {
        quarter * (a.get(i, j, k, l) + a.get(j, i, l, k) + a.get(k, l, i, j) + a.get(l, k, j, i))
    })
}

/// `8 mu(A)(x,y,z,w) = 3A(x,y,z,w) + 3A(x,y,w,z) + A(x,w,z,y) + A(x,z,w,y)
///  + A(w,y,z,x) + A(z,y,w,x)`.
pub fn mu<S: Scalar>(a: &Curv4<S>) -> Curv4<S> {
    let eighth = S::ratio(1, 8);
    let three = S::from_int(3);
    Curv4::from_fn(a.model(), |i, j, k, l| {
        eighth
            * (three * a.get(i, j, k, l)
                + three * a.get(i, j, l, k)
                + a.get(i, l, k, j)
                + a.get(i, k, l, j)
                + a.get(l, j, k, i)
                + a.get(k, j, l, i))
    })
}

fn rng_for(space: SpaceTag, model: Model, seed: Seed) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let (p, _) = model.signature();
    let space_id = SpaceTag::ALL.iter().position(|&s| s == space).unwrap_or(0) as u64;
    rng.set_stream((space_id << 16) | ((model.n() as u64) << 8) | p as u64);
    rng
}

fn random_combination(space: SpaceTag, model: Model, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let ns = null_space(space, model);
    let len = ns.basis.first().map_or_else(
        || if space.rank() == 4 { model.n().pow(4) } else { model.n().pow(2) },
        Vec::len,
    );
    let mut acc = vec![Rational::from_integer(0); len];
    for b in &ns.basis {
        let c = Rational::from_integer(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE) as i128);
        if c == Rational::from_integer(0) {
            continue;
        }
        for (slot, &v) in acc.iter_mut().zip(b) {
            if v != Rational::from_integer(0) {
                *slot += c * v;
            }
        }
    }
    acc
}

/// Exact random element of `space`. The Weyl space is sampled as a random
/// algebraic tensor plus `(sigma_4 - sigma_5)` of a random 2-form; every other
/// space as a random integer combination of its exact null-space basis.
pub fn random_exact(space: SpaceTag, model: Model, seed: Seed) -> Tensor<Rational> {
    let mut rng = rng_for(space, model, seed);
    if space == SpaceTag::Weyl {
        let alg = random_combination(SpaceTag::Algebraic, model, &mut rng);
        let alg = Curv4::from_components(model, alg).expect("sized");
        let phi = random_combination(SpaceTag::Alt, model, &mut rng);
        let phi = Bilinear::from_components(model, phi).expect("sized");
        let p = sigma45(&phi).expect("sampled 2-form is antisymmetric");
        return Tensor::Curv4(&alg + &p);
    }
    let c = random_combination(space, model, &mut rng);
    if space.rank() == 4 {
        Tensor::Curv4(Curv4::from_components(model, c).expect("sized"))
    } else {
        Tensor::Bilinear(Bilinear::from_components(model, c).expect("sized"))
    }
}

/// Random element of `space` in the scalar mode `S`; a pure function of
/// `(seed, model, space)`.
pub fn random_in<S: Scalar>(space: SpaceTag, model: Model, seed: Seed) -> Tensor<S> {
    match random_exact(space, model, seed) {
        Tensor::Curv4(a) => Tensor::Curv4(a.map(S::from_rational)),
        Tensor::Bilinear(b) => Tensor::Bilinear(b.map(S::from_rational)),
    }
}

pub fn random_curv<S: Scalar>(space: SpaceTag, model: Model, seed: Seed) -> Result<Curv4<S>> {
    if space.rank() != 4 {
        return Err(Error::UnsupportedSpace(space));
    }
    Ok(random_in(space, model, seed)
        .into_curv4()
        .expect("rank-4 space"))
}

pub fn random_bilinear<S: Scalar>(space: SpaceTag, model: Model, seed: Seed) -> Result<Bilinear<S>> {
    if space.rank() != 2 {
        return Err(Error::UnsupportedSpace(space));
    }
    Ok(random_in(space, model, seed)
        .into_bilinear()
        .expect("rank-2 space"))
}
