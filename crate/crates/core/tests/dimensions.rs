use weyl_core::builders::h_wedge_h;
use weyl_core::dims::{
    constraint_system, formula_dimension, module_dimension, null_basis, null_space, span_rank,
};
use weyl_core::tensor::membership;
use weyl_core::{Model, Rational, SpaceTag, Tensor};

fn models(n: usize) -> [Model; 2] {
    [Model::euclidean(n).unwrap(), Model::lorentzian(n).unwrap()]
}

#[test]
fn computed_dimensions_match_closed_forms() {
    for n in 3..=6 {
        for m in models(n) {
            for space in SpaceTag::ALL {
                assert_eq!(
                    module_dimension(space, m),
                    formula_dimension(space, n),
                    "{space} at {m}"
                );
            }
        }
    }
}

#[test]
fn headline_values_in_dimension_four() {
    let m = Model::lorentzian(4).unwrap();
    let expect = [
        (SpaceTag::GenCurv, 80),
        (SpaceTag::Algebraic, 20),
        (SpaceTag::Weyl, 26),
        (SpaceTag::W6, 10),
        (SpaceTag::W7, 30),
        (SpaceTag::W8, 9),
        (SpaceTag::Sym0, 9),
        (SpaceTag::Alt, 6),
        (SpaceTag::Scalar, 1),
    ];
    for (space, d) in expect {
        assert_eq!(module_dimension(space, m), d, "{space}");
    }
    let m3 = Model::euclidean(3).unwrap();
    assert_eq!(module_dimension(SpaceTag::W6, m3), 0);
    assert_eq!(module_dimension(SpaceTag::W8, m3), 0);
}

#[test]
fn counting_identities() {
    for n in 3..=6 {
        let m = Model::euclidean(n).unwrap();
        let d = |s| module_dimension(s, m);
        let lambda_s = n * (n - 1) / 2 * (n * (n + 1) / 2);
        assert_eq!(d(SpaceTag::GenCurv), d(SpaceTag::Algebraic) + lambda_s);
        assert_eq!(d(SpaceTag::Weyl), d(SpaceTag::Algebraic) + d(SpaceTag::Alt));
        if n >= 4 {
            assert_eq!(
                d(SpaceTag::GenCurv),
                1 + 2 * d(SpaceTag::Sym0) + 2 * d(SpaceTag::Alt) + d(SpaceTag::W6) + d(SpaceTag::W7) + d(SpaceTag::W8)
            );
            assert_eq!(
                d(SpaceTag::Weyl),
                1 + d(SpaceTag::Sym0) + d(SpaceTag::Alt) + d(SpaceTag::W6)
            );
        }
    }
}

#[test]
fn bases_are_members_and_rows_annihilate_them() {
    for m in models(4) {
        for space in SpaceTag::ALL {
            let system = constraint_system(space, m);
            for b in null_basis(space, m) {
                assert!(membership(&b, space, 0.0).holds, "{space}");
                for row in &system.rows {
                    assert_eq!(row.apply(b.components()), Rational::from_integer(0), "{}", row.label);
                }
            }
        }
    }
}

#[test]
fn h_wedge_h_lies_in_weyl_span() {
    for n in 3..=5 {
        for m in models(n) {
            let basis = &null_space(SpaceTag::Weyl, m).basis;
            let hh = Tensor::Curv4(h_wedge_h::<Rational>(m));
            let mut extended = basis.clone();
            extended.push(hh.components().to_vec());
            assert_eq!(span_rank(&extended), basis.len(), "{m}");
            assert_eq!(span_rank(basis), basis.len());
        }
    }
}

#[test]
fn larger_dimensions_are_consistent() {
    let m = Model::euclidean(7).unwrap();
    assert_eq!(module_dimension(SpaceTag::GenCurv, m), formula_dimension(SpaceTag::GenCurv, 7));
    assert_eq!(module_dimension(SpaceTag::W7, m), formula_dimension(SpaceTag::W7, 7));
}
