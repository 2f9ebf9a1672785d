use groupapprox::jk::*;
use groupapprox::GroupFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(l1: u64, l2: u64) -> JkParams {
    JkParams::new(3, l1, l2).unwrap()
}

fn all(p: &JkParams) -> impl Iterator<Item = JkElement> + '_ {
    (0..p.order()).map(move |i| JkElement::decode(p, i))
}

#[test]
fn power_formula_matches_repeated_multiplication() {
    for (l1, l2) in [(0, 1), (1, 1), (2, 1)] {
        let p = params(l1, l2);
        for x in all(&p) {
            assert_eq!(jk_power(&p, &x, 3), jk_power_formula(&p, &x).unwrap(), "{x} with lambda ({l1},{l2})");
        }
    }
}

#[test]
fn identity_and_inverse_laws() {
    for (l1, l2) in [(0, 1), (1, 0)] {
        let p = params(l1, l2);
        let e = JkElement::IDENTITY;
        for x in all(&p) {
            assert_eq!(jk_multiply(&p, &e, &x), x);
            assert_eq!(jk_multiply(&p, &x, &e), x);
            let y = jk_inverse(&p, &x);
            assert_eq!(jk_multiply(&p, &x, &y), e);
            assert_eq!(jk_multiply(&p, &y, &x), e);
        }
    }
}

#[test]
fn associativity_on_random_triples() {
    for (l1, l2) in [(0, 1), (1, 1), (1, 0)] {
        let p = params(l1, l2);
        let mut rng = ChaCha8Rng::seed_from_u64(l1 * 10 + l2);
        for _ in 0..400_000 {
            let [x, y, z] = [(); 3].map(|_| JkElement::decode(&p, rng.gen_range(0..p.order())));
            assert_eq!(
                jk_multiply(&p, &jk_multiply(&p, &x, &y), &z),
                jk_multiply(&p, &x, &jk_multiply(&p, &y, &z))
            );
        }
    }
}

#[test]
fn validate_audits_rule_carrier() {
    let g = jk_group(&params(0, 1), false).unwrap();
    let report = g.validate();
    assert!(report.passed(), "{:?}", report.first_failure());
    assert!(!report.associativity.exhaustive);
}

#[test]
fn center_is_derived_subgroup() {
    let p = params(0, 1);
    let g = jk_group(&p, false).unwrap();
    let gens = g.generators().to_vec();
    for z in g.center() {
        assert!(gens.iter().all(|&a| g.mul(a, z) == g.mul(z, a)));
    }
    // Commutators of generators land in the r coordinates.
    for &a in &gens {
        for &b in &gens {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            assert_eq!(c % 81, 0);
        }
    }
    let noncentral = (0..g.order()).filter(|&x| x % 81 != 0);
    for x in noncentral.step_by(7) {
        assert!(gens.iter().any(|&a| g.mul(a, x) != g.mul(x, a)));
    }
}

#[test]
fn power_head_map_is_bijective() {
    for l1 in 0..3 {
        let p = params(l1, 1);
        let mut seen = vec![false; 81];
        for h in 0..81 {
            let x = JkElement::decode(&p, h);
            let image = jk_power_formula(&p, &x).unwrap().encode(&p) / 81;
            assert!(!std::mem::replace(&mut seen[image], true));
        }
    }
}

#[test]
fn final_function_is_bijective_and_linear() {
    let p = params(0, 1);
    let g = jk_group(&p, false).unwrap();
    let sigma = singer_sigma(3).unwrap();
    let f = final_prop_function(&g, &p, &sigma).unwrap();
    assert!(f.is_bijective());
    assert_eq!(f.apply(0), 0);
    let e1 = JkElement([0, 0, 0, 0, 1, 0, 0, 0]).encode(&p);
    let image = JkElement::decode(&p, f.apply(e1));
    let m = sigma.matrix();
    assert_eq!(image.tail(), [m[0][0], m[1][0], m[2][0], m[3][0]]);
    assert!(image.is_central());
    assert!(final_prop_function(&g, &params(1, 0), &sigma).is_err());
}

#[test]
fn reachability_invariants() {
    let p = params(0, 1);
    let id = JkElement::IDENTITY;
    for d in all(&p).step_by(5) {
        assert!(endo_reachable(&p, &d, &id).unwrap());
        assert!(endo_reachable(&p, &d, &d).unwrap());
    }
    // No universal element: every reachable set is at most 2 p^4.
    for d in all(&p).step_by(97) {
        let reach = all(&p).filter(|e| endo_reachable(&p, &d, e).unwrap()).count();
        assert!(reach <= 162, "{d} reaches {reach}");
    }
}

#[test]
fn enapp_zero_witness_full_scan() {
    let p = params(0, 1);
    let g = jk_group(&p, false).unwrap();
    let f = jk_enapp_zero_witness(&g, &p).unwrap();
    assert_ne!(f.apply(0), 0);
    for i in 0..g.order() {
        let x = JkElement::decode(&p, i);
        let y = JkElement::decode(&p, f.apply(i));
        assert!(!endo_reachable(&p, &x, &y).unwrap(), "{x} -> {y}");
        if !x.is_central() {
            assert!(!y.is_central() && y.head() != x.head());
        }
    }
}

#[test]
fn sampled_verification_of_final_function() {
    let p = params(1, 1);
    let g = jk_group(&p, false).unwrap();
    let f = final_prop_function(&g, &p, &singer_sigma(3).unwrap()).unwrap();
    let report = verify_affapp_one(&p, &f, VerifyMode::Sampled { samples: 1_000_000, seed: 3 }).unwrap();
    assert!(report.passed());
    assert_eq!(report.pairs_scanned, 1_000_000);
}

#[test]
fn fixed_vector_gives_violation() {
    let p = params(0, 1);
    let g = jk_group(&p, false).unwrap();
    let m = [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]];
    assert!(make_sigma(3, m).is_err());
    let f = GroupFunction::new(&g, final_prop_images(&p, &m)).unwrap();
    let report = verify_affapp_one(&p, &f, VerifyMode::Full).unwrap();
    assert!(!report.passed());
    assert!(report
        .violations
        .iter()
        .any(|v| v.d.is_central() && v.d == v.e));
}

#[test]
fn classification_sampling() {
    let report = sample_check_classification(&params(2, 1), 200_000, 11).unwrap();
    assert_eq!(report.failures, 0);
    assert!(sample_check_classification(&params(1, 0), 10, 0).is_err());
}

#[test]
fn larger_prime_behind_flag() {
    let p = JkParams::new(5, 0, 1).unwrap();
    let g = jk_group(&p, true).unwrap();
    assert_eq!(g.order(), 390_625);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let x = JkElement::decode(&p, rng.gen_range(0..p.order()));
        assert_eq!(jk_power(&p, &x, 5), jk_power_formula(&p, &x).unwrap());
    }
    assert!(jk_group(&JkParams::new(11, 0, 1).unwrap(), true).is_err());
}
