//! Trace-type invariants of a curvature tensor.

use crate::builders::tensor_dot;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{conjugate, membership4, pair_trace, split2, Bilinear, Curv4, SpaceTag};

/// `Ric_jk = h^{il} A_ijkl`.
pub fn ricci<S: Scalar>(a: &Curv4<S>) -> Bilinear<S> {
    pair_trace(a, 1, 4).expect("valid slots")
}

/// `Ric*_ij = h^{kl} A_iklj`, computed by its own contraction.
pub fn ricci_star<S: Scalar>(a: &Curv4<S>) -> Bilinear<S> {
    let m = a.model();
    let n = m.n();
    Bilinear::from_fn(m, |i, j| {
        let mut acc = S::zero();
        for k in 0..n {
            let v = a.get(i, k, k, j);
            acc = acc + if m.h_sign(k) < 0 { -v } else { v };
        }
        acc
    })
}

/// `Ric(A*)`; agrees with [`ricci_star`] for every `A` antisymmetric in its
/// first pair.
pub fn ricci_of_conjugate<S: Scalar>(a: &Curv4<S>) -> Bilinear<S> {
    ricci(&conjugate(a))
}

/// `tau = h^{ij} Ric_ij`.
pub fn scalar_tau<S: Scalar>(a: &Curv4<S>) -> S {
    ricci(a).trace()
}

/// Symmetric and antisymmetric parts of `Ric`.
pub fn ricci_parts<S: Scalar>(a: &Curv4<S>) -> (Bilinear<S>, Bilinear<S>) {
    split2(&ricci(a))
}

/// Length curvature `F = -(2/n) Lambda Ric`.
pub fn length_form<S: Scalar>(a: &Curv4<S>) -> Bilinear<S> {
    let n = a.model().n() as i64;
    ricci(a).alt().scale(S::ratio(-2, n))
}

/// The rank-4 tensor `F(x,y) h(z,w)`.
pub fn length_curv4<S: Scalar>(a: &Curv4<S>) -> Curv4<S> {
    let f = length_form(a);
    tensor_dot(&f, &Bilinear::metric(a.model())).expect("same model")
}

pub(crate) fn require_weyl<S: Scalar>(a: &Curv4<S>) -> Result<()> {
    let r = membership4(a, SpaceTag::Weyl, crate::tensor::DEFAULT_FLOAT_TOL);
    if r.holds {
        Ok(())
    } else {
        Err(Error::NotWeyl {
            residual: r.worst_residual,
            constraint: r.violated_constraint.unwrap_or_default(),
        })
    }
}

/// Weyl-Schouten tensor `(1/(n-2)) [S Ric - tau/(2(n-1)) h]`.
pub fn weyl_schouten<S: Scalar>(a: &Curv4<S>) -> Result<Bilinear<S>> {
    require_weyl(a)?;
    let m = a.model();
    let n = m.n() as i64;
    let (s, _) = ricci_parts(a);
    let tau = s.trace();
    let shift = Bilinear::metric(m).scale(tau * S::ratio(1, 2 * (n - 1)));
    Ok((&s - &shift).scale(S::ratio(1, n - 2)))
}

/// `D(x,y,z,w) = -(A(x,y,z,w) + A(x,y,w,z))`.
pub fn d_tensor<S: Scalar>(a: &Curv4<S>) -> Curv4<S> {
    Curv4::from_fn(a.model(), |i, j, k, l| -(a.get(i, j, k, l) + a.get(i, j, l, k)))
}

/// Directional curvature `K = (A + A*)/2`.
pub fn directional<S: Scalar>(a: &Curv4<S>) -> Curv4<S> {
    (a + &conjugate(a)).scale(S::ratio(1, 2))
}
