use matdecomp_core::canonical::{catalog_entry, scramble_in};
use matdecomp_core::io;
use matdecomp_core::rota::{complementary_rb, rb_from_splitting, verify_rb};
use matdecomp_core::{
    canonicalize, fingerprint, random_preserving, sample_search, AutoSpec, CanonLabel, FieldDescriptor, MLabel,
};
use proptest::prelude::*;

fn label() -> impl Strategy<Value = CanonLabel> {
    prop::sample::select(CanonLabel::ALL.to_vec())
}

fn m_label() -> impl Strategy<Value = MLabel> {
    prop::sample::select(MLabel::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_automorphisms_preserve_m(m in m_label(), seed in any::<u64>()) {
        let q = FieldDescriptor::Rational;
        let phi = random_preserving(m, seed, &q);
        prop_assert!(phi.is_algebra_map(&q));
        prop_assert!(phi.preserves(m.subalgebra(&q).space()));
        let round = AutoSpec::Composite(vec![phi.clone(), phi.inverse()]);
        prop_assert_eq!(round.matrix9(&q).unwrap(), matdecomp_core::linalg::Matrix::identity(&q, 9));
    }

    #[test]
    fn scrambles_canonicalize_back(l in label(), seed in any::<u64>()) {
        let q = FieldDescriptor::Rational;
        let (d, _) = scramble_in(&q, l, seed);
        let r = canonicalize(&d).unwrap();
        prop_assert_eq!(r.label, l);
        prop_assert!(r.verify(&d).unwrap());
        let replayed = r.replay(&d).unwrap();
        let target = catalog_entry(l, &r.field);
        prop_assert_eq!(replayed.s().space(), target.s().space());
    }

    #[test]
    fn scrambles_over_f7_canonicalize_back(l in label(), seed in any::<u64>()) {
        let f7 = FieldDescriptor::prime(7).unwrap();
        let (d, _) = scramble_in(&f7, l, seed);
        let r = canonicalize(&d).unwrap();
        prop_assert_eq!(r.label, l);
        prop_assert!(r.verify(&d).unwrap());
    }

    #[test]
    fn fingerprints_are_orbit_invariants(l in label(), seed in any::<u64>()) {
        let q = FieldDescriptor::Rational;
        let (d, _) = scramble_in(&q, l, seed);
        prop_assert_eq!(fingerprint(d.s()).unwrap(), fingerprint(catalog_entry(l, &q).s()).unwrap());
    }

    #[test]
    fn splittings_give_rota_baxter_operators(l in label(), seed in any::<u64>(), w in -9i64..=9) {
        prop_assume!(w != 0);
        let q = FieldDescriptor::Rational;
        let (d, _) = scramble_in(&q, l, seed);
        let r = rb_from_splitting(&d, &q.from_i64(w)).unwrap();
        prop_assert!(verify_rb(&r));
        prop_assert!(r.is_projection_type());
        prop_assert_eq!(&r.kernel().unwrap(), d.m().space());
        prop_assert!(verify_rb(&complementary_rb(&r)));
    }

    #[test]
    fn decomposition_json_round_trips(l in label(), seed in any::<u64>()) {
        let q = FieldDescriptor::Rational;
        let (d, _) = scramble_in(&q, l, seed);
        let text = io::decomposition_to_json(&d).to_string();
        let back = io::decomposition_from_json(&text).unwrap();
        prop_assert_eq!(back.s().space(), d.s().space());
        prop_assert_eq!(back.m().space(), d.m().space());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sampling_is_deterministic_and_clean(m in m_label(), seed in any::<u64>()) {
        let a = sample_search(3, m, 500, seed).unwrap();
        let b = sample_search(3, m, 500, seed).unwrap();
        prop_assert!(a.is_clean());
        prop_assert_eq!(a, b);
    }
}
