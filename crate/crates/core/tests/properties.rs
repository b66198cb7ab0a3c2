//! Randomized invariants of the homology and Frobenius layers on cyclic
//! modules over the Fermat cubic in characteristic 2 (an isolated
//! hypersurface singularity, so every higher Tor has finite length).

use std::sync::Arc;

use genhk::frobenius::{fhk, frobenius_module, theta, tor_frobenius_length};
use genhk::groebner::{poly_in_component, vector_to_polys};
use genhk::homology::{gamma_length, gamma_length_saturated};
use genhk::oracle::oracle_fhk;
use genhk::{Ideal, PolyRing, PresentedModule, QuotientRing, Submodule};
use proptest::prelude::*;

const LINEAR: [&str; 3] = ["x", "y", "z"];
const QUADRATIC: [&str; 6] = ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"];

fn form(degree: u32, mask: u16) -> String {
    let monos: &[&str] = if degree == 1 { &LINEAR } else { &QUADRATIC };
    let mask = (mask as usize % ((1 << monos.len()) - 1)) + 1;
    monos
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, m)| *m)
        .collect::<Vec<_>>()
        .join("+")
}

fn forms(count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec((1u32..=2, any::<u16>()), count)
        .prop_map(|v| v.into_iter().map(|(d, m)| form(d, m)).collect())
}

fn fermat() -> Arc<QuotientRing> {
    let r = PolyRing::new(2, &["x", "y", "z"]).unwrap();
    QuotientRing::parse(r, &["x^3+y^3+z^3"]).unwrap()
}

fn module(gens: &[String]) -> PresentedModule {
    let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
    PresentedModule::parse_cyclic(fermat(), &gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn syzygies_annihilate_generators(gens in forms(2..=3)) {
        let r = PolyRing::new(2, &["x", "y", "z"]).unwrap();
        let polys: Vec<_> = gens.iter().map(|g| r.parse(g).unwrap()).collect();
        let vecs = polys.iter().map(|p| poly_in_component(p, 0)).collect();
        let syz = Submodule::new(r.clone(), 1, vecs).unwrap().syzygies().unwrap();
        prop_assert!(!syz.generators().is_empty());
        for s in syz.generators() {
            let coeffs = vector_to_polys(&r, s, polys.len());
            let mut total = r.zero();
            for (c, g) in coeffs.iter().zip(&polys) {
                total = total.add(&c.mul(g).unwrap()).unwrap();
            }
            prop_assert!(total.is_zero());
        }
    }

    #[test]
    fn torsion_length_paths_agree(gens in forms(1..=3)) {
        let m = module(&gens);
        let direct = gamma_length(m.relations()).unwrap();
        let saturated = gamma_length_saturated(m.relations()).unwrap();
        prop_assert_eq!(direct.length, saturated.length);
    }

    #[test]
    fn finite_length_equals_hilbert_sum(gens in forms(2..=3)) {
        let m = module(&gens);
        let r = m.base().ambient().clone();
        let mut all: Vec<_> = gens.iter().map(|g| r.parse(g).unwrap()).collect();
        all.extend(m.base().relations().unwrap().iter().cloned());
        prop_assume!(Ideal::new(r, all).unwrap().krull_dim().unwrap() == 0);
        let gamma = m.gamma_m_length().unwrap().value().unwrap();
        let sum: u64 = (0..=24).map(|t| m.hilbert_function(t).unwrap()).sum();
        prop_assert_eq!(gamma, sum);
        prop_assert_eq!(m.local_length().unwrap().length, Some(gamma));
    }

    #[test]
    fn resolutions_are_minimal_complexes_and_periodic(gens in forms(1..=3)) {
        let m = module(&gens);
        let res = m.resolution(6).unwrap();
        prop_assert!(res.is_complex().unwrap());
        prop_assert!(res.is_minimal());
        let ranks = res.ranks();
        prop_assert_eq!(ranks[4], ranks[6], "ranks {:?}", ranks);
        prop_assert_eq!(ranks[4], ranks[5], "ranks {:?}", ranks);
    }

    #[test]
    fn tor_one_is_twisted_syzygy_torsion(gens in forms(1..=3)) {
        let m = module(&gens);
        let tor = tor_frobenius_length(&m, 1, 1).unwrap().value().unwrap();
        let syz = m.syzygy_module().unwrap();
        prop_assert_eq!(tor, fhk(&syz, 1).unwrap());
    }

    #[test]
    fn theta_vanishes(gens in forms(1..=3)) {
        let t = theta(&module(&gens), 1).unwrap();
        prop_assert_eq!(t.theta, 0, "Tor_4 {} Tor_5 {}", t.tor_even, t.tor_odd);
    }

    #[test]
    fn oracle_agrees_at_smallest_twist(gens in forms(1..=3)) {
        let m = module(&gens);
        let reading = oracle_fhk(&m, 1).unwrap();
        prop_assert!(reading.stable);
        prop_assert_eq!(reading.value, fhk(&m, 1).unwrap());
    }

    #[test]
    fn frobenius_twists_compose(gens in forms(1..=3)) {
        let m = module(&gens);
        let once = frobenius_module(&frobenius_module(&m, 1).unwrap(), 1).unwrap();
        prop_assert!(once.same_presentation(&frobenius_module(&m, 2).unwrap()).unwrap());
    }

    #[test]
    fn principal_quotients_have_no_higher_tor(gens in forms(1..=1)) {
        // R is a domain, so R/(f) has projective dimension one
        let m = module(&gens);
        for i in 1..=2 {
            prop_assert_eq!(tor_frobenius_length(&m, i, 1).unwrap().length, Some(0));
        }
    }
}
