mod common;

use common::*;
use hyperstretch::hgeom::{dist, prism_distance, Dim, FermiFrame, HPoint, HyperboloidPoint};
use hyperstretch::moebius::IsometryClass;
use hyperstretch::num_complex::Complex64;
use hyperstretch::stretch::{one_point_extension, FiniteMapData};
use hyperstretch::words::{ratio_sup_with, Representation, Word};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn random_h3(rng: &mut ChaCha8Rng) -> HPoint {
    let a = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    HPoint::h3(a, rng.gen_range(0.3..3.0)).unwrap()
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn conjugation_preserves_length_and_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = if seed % 2 == 0 {
            (random_real_matrix(&mut rng), random_real_matrix(&mut rng))
        } else {
            (random_complex_matrix(&mut rng), random_complex_matrix(&mut rng))
        };
        let c = g.conjugate_by(&h).unwrap();
        prop_assert_eq!(c.classify(), g.classify());
        prop_assert!(g.translation_length() <= g.cartan_mu() + 1e-12);
        if g.classify() == IsometryClass::Hyperbolic {
            let tol = 1e-9 * g.translation_length().max(1.0);
            prop_assert!((c.translation_length() - g.translation_length()).abs() <= tol);
        }
    }

    #[test]
    fn isometries_preserve_distance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, p, q) = if seed % 2 == 0 {
            (random_real_matrix(&mut rng), random_h2(&mut rng), random_h2(&mut rng))
        } else {
            (random_complex_matrix(&mut rng), random_h3(&mut rng), random_h3(&mut rng))
        };
        let d = dist(&p, &q).unwrap();
        let e = dist(&g.apply(&p), &g.apply(&q)).unwrap();
        prop_assert!((d - e).abs() <= 1e-9 * d.max(1.0), "{} vs {}", d, e);
    }

    #[test]
    fn lorentz_distance_matches(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = if seed % 2 == 0 {
            (random_h2(&mut rng), random_h2(&mut rng))
        } else {
            (random_h3(&mut rng), random_h3(&mut rng))
        };
        let (x, y) = (HyperboloidPoint::from_point(&p), HyperboloidPoint::from_point(&q));
        prop_assert!(x.form_residual() <= 1e-12 * x.raw()[3].powi(2));
        prop_assert!((x.distance(&y) - dist(&p, &q).unwrap()).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn fermi_points_at_equal_height_match_prism(h in -4.0f64..4.0, v in -3.0f64..3.0) {
        let frame = FermiFrame::canonical();
        let d = dist(&frame.to_point(0.0, v), &frame.to_point(h, v)).unwrap();
        prop_assert!((d - prism_distance(h.abs(), 0.0, v, v)).abs() <= 1e-9);
    }
}

#[test]
fn word_length_invariant_under_rotation_and_inversion() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let rep = Representation::free((0..2).map(|_| random_psl2r(&mut rng)).collect()).unwrap();
    let alphabet = rep.alphabet();
    for _ in 0..500 {
        let len = rng.gen_range(1..=8);
        let w = Word((0..len).map(|_| *alphabet.choose(&mut rng).unwrap()).collect());
        let lambda = rep.eval(&w).unwrap().translation_length();
        let tol = 1e-9 * lambda.max(1.0);
        let k = rng.gen_range(0..len);
        let rotated = rep.eval(&w.rotate(k)).unwrap().translation_length();
        let inverse = rep.eval(&w.inverse()).unwrap().translation_length();
        assert!((rotated - lambda).abs() <= tol, "{w:?} rotated by {k}: {rotated} vs {lambda}");
        assert!((inverse - lambda).abs() <= tol, "{w:?} inverted: {inverse} vs {lambda}");
    }
}

#[test]
fn ratio_sup_is_monotone_in_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..10 {
        let j = Representation::free((0..2).map(|_| random_psl2r(&mut rng)).collect()).unwrap();
        let rho = Representation::free((0..2).map(|_| random_psl2r(&mut rng)).collect()).unwrap();
        let values: Vec<Option<f64>> =
            (1..=5).map(|l| ratio_sup_with(&j, &rho, l, false).unwrap().value).collect();
        for w in values.windows(2) {
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                assert!(a <= b, "{values:?}");
            } else {
                assert!(w[0].is_none(), "{values:?}");
            }
        }
    }
}

#[test]
fn extension_constant_grows_with_the_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let o = HPoint::basepoint(Dim::Two);
    let mut checks = 0;
    while checks < 50 {
        let k = rng.gen_range(2..=5);
        let pairs: Vec<(HPoint, HPoint)> = (0..=k)
            .map(|_| (random_point_near(&mut rng, &o, 2.0), random_point_near(&mut rng, &o, 2.5)))
            .collect();
        let p = random_point_near(&mut rng, &o, 2.0);
        if pairs.iter().any(|(x, _)| dist(x, &p).unwrap() < 1e-3) {
            continue;
        }
        let (Ok(small), Ok(large)) = (FiniteMapData::new(pairs[..k].to_vec()), FiniteMapData::new(pairs.clone())) else {
            continue;
        };
        checks += 1;
        let before = one_point_extension(&small, &p).unwrap().constant;
        let after = one_point_extension(&large, &p).unwrap().constant;
        assert!(after >= before - 1e-9, "{after} < {before}");
    }
}
