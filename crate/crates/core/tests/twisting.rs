use proptest::prelude::*;
use qhopf::braid::AlgebraModel;
use qhopf::markov::{random_word, MarkovContext};
use qhopf::twist::{random_twistor, twist};
use qhopf::{catalog, io, Complex64, QuasiHopf};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn s3() -> QuasiHopf<Complex64> {
    catalog::s3().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn twisting_back_recovers_the_bundle(seed in any::<u64>()) {
        let b = s3();
        let t = random_twistor(&b, seed, TOL).unwrap();
        let back = twist(&twist(&b, &t, TOL).unwrap(), &t.inverse(), TOL).unwrap();
        for (x, y) in [(&back.phi, &b.phi), (&back.alpha, &b.alpha), (&back.beta, &b.beta)] {
            prop_assert!(x.residual(y).unwrap().0 < 1e-10);
        }
        prop_assert!(back.r().unwrap().residual(b.r().unwrap()).unwrap().0 < 1e-10);
    }

    #[test]
    fn markov_trace_ignores_twisting(seed in any::<u64>()) {
        let b = s3();
        let bt = twist(&b, &random_twistor(&b, seed, TOL).unwrap(), TOL).unwrap();
        let rep = b.rep("standard").unwrap();
        let (m, mt) = (AlgebraModel::new(&b, rep), AlgebraModel::new(&bt, rep));
        let (ctx, ctx_t) = (MarkovContext::new(&m, TOL).unwrap(), MarkovContext::new(&mt, TOL).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for strands in 2..=3 {
            let w = random_word(&mut rng, strands, 1, 5);
            prop_assert!((ctx.theta(&w).unwrap() - ctx_t.theta(&w).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn twisted_bundles_survive_serialization(seed in any::<u64>()) {
        let b = catalog::twisted_double_z2().unwrap();
        let bt = twist(&b, &random_twistor(&b, seed, TOL).unwrap(), TOL).unwrap();
        let text = io::to_pretty(&io::bundle_to_json(&bt));
        let again: QuasiHopf<Complex64> = io::parse_bundle(&io::parse_json(&text).unwrap(), TOL).unwrap();
        prop_assert_eq!(io::bundle_to_json(&again), io::bundle_to_json(&bt));
    }
}

#[test]
fn exact_twist_is_undone_exactly() {
    let b = catalog::cyclic::<qhopf::Rational>(3).unwrap();
    let t = catalog::z3_default_twistor().unwrap();
    let back = twist(&twist(&b, &t, 0.0).unwrap(), &t.inverse(), 0.0).unwrap();
    assert_eq!(
        io::bundle_to_json(&QuasiHopf {
            name: b.name.clone(),
            ..back
        }),
        io::bundle_to_json(&b)
    );
}
