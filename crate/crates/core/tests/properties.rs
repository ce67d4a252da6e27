use proptest::prelude::*;
use weyl_core::builders::{random_bilinear, random_curv, sigma4, sigma45, sigma5, Seed};
use weyl_core::decomp::WeylTensor;
use weyl_core::tensor::{conjugate, membership4, split2};
use weyl_core::traces::{ricci, ricci_star};
use weyl_core::{Curv4, Model, Rational, SpaceTag};

fn model_strategy() -> impl Strategy<Value = Model> {
    (3usize..=6, any::<bool>()).prop_map(|(n, lor)| {
        if lor {
            Model::lorentzian(n).unwrap()
        } else {
            Model::euclidean(n).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn containment_chain(m in model_strategy(), s in any::<u64>()) {
        let a = random_curv::<Rational>(SpaceTag::Algebraic, m, Seed(s)).unwrap();
        prop_assert!(membership4(&a, SpaceTag::Algebraic, 0.0).holds);
        prop_assert!(membership4(&a, SpaceTag::Weyl, 0.0).holds);
        prop_assert!(membership4(&a, SpaceTag::GenCurv, 0.0).holds);
    }

    #[test]
    fn conjugation_is_an_involution(m in model_strategy(), s in any::<u64>()) {
        let a = random_curv::<Rational>(SpaceTag::GenCurv, m, Seed(s)).unwrap();
        prop_assert_eq!(conjugate(&conjugate(&a)), a);
    }

    #[test]
    fn split_parts_add_back(m in model_strategy(), s in any::<u64>()) {
        let a = random_bilinear::<Rational>(SpaceTag::Sym, m, Seed(s)).unwrap();
        let b = random_bilinear::<Rational>(SpaceTag::Alt, m, Seed(s ^ 1)).unwrap();
        let theta = &a + &b;
        let (sym, alt) = split2(&theta);
        prop_assert_eq!(&sym + &alt, theta);
        prop_assert_eq!(sym, a);
        prop_assert_eq!(alt, b);
    }

    #[test]
    fn sigma_maps_land_in_gencurv(m in model_strategy(), s in any::<u64>()) {
        let phi = random_bilinear::<Rational>(SpaceTag::Alt, m, Seed(s)).unwrap();
        prop_assert!(membership4(&sigma4(&phi).unwrap(), SpaceTag::GenCurv, 0.0).holds);
        prop_assert!(membership4(&sigma5(&phi).unwrap(), SpaceTag::GenCurv, 0.0).holds);
        prop_assert!(membership4(&sigma45(&phi).unwrap(), SpaceTag::Weyl, 0.0).holds);
    }

    #[test]
    fn decompositions_reconstruct_in_float(m in model_strategy(), s in any::<u64>()) {
        let a = random_curv::<f64>(SpaceTag::Weyl, m, Seed(s)).unwrap();
        let w = WeylTensor::new(a.clone()).unwrap();
        let mut sa = Curv4::zeros(m);
        let mut sp = Curv4::zeros(m);
        for i in 1..=8 {
            sa = &sa + &w.alpha(i).unwrap();
            sp = &sp + &w.pi(i).unwrap();
        }
        let scale = a.max_abs().max(1.0);
        prop_assert!((&sa - &a).max_abs() <= 1e-9 * scale);
        prop_assert!((&sp - &a).max_abs() <= 1e-9 * scale);
    }

    #[test]
    fn ricci_star_matches_ricci_on_algebraic(m in model_strategy(), s in any::<u64>()) {
        let a = random_curv::<Rational>(SpaceTag::Algebraic, m, Seed(s)).unwrap();
        prop_assert_eq!(ricci_star(&a), ricci(&a));
    }
}
