use groupapprox::approx::{self, FamilyKind, DEFAULT_BUDGET};
use groupapprox::bounds::*;
use groupapprox::catalog::catalog_up_to;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SLACK: f64 = 1e-9;

/// Every `(m1, m2)` with both at least 2 and `m2^m1 <= 10^6`.
fn shapes() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m2 in 2..=1000usize {
        for m1 in 2..=20usize {
            if (m2 as u64).checked_pow(m1 as u32).is_some_and(|s| s <= BRUTE_FORCE_LIMIT) {
                out.push((m1, m2));
            }
        }
    }
    out
}

fn random_function(rng: &mut impl Rng, m1: usize, m2: usize) -> Vec<usize> {
    (0..m1).map(|_| rng.gen_range(0..m2)).collect()
}

#[test]
fn ball_sizes_sum_to_the_whole_space() {
    for (m1, m2) in shapes() {
        let (_, nu) = circle_and_ball_sizes(m1, m2, m1).unwrap();
        assert_eq!(nu, BigUint::from(m2).pow(m1 as u32));
    }
}

#[test]
fn general_bounds_hold_for_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (m1, m2) in shapes() {
        for t in 0..100 {
            let fval = [0.5, 1.0, 1.5, 2.0][t % 4];
            let cap = ((m2 as f64).powf(fval).floor() as usize).clamp(1, 12);
            let size = rng.gen_range(1..=cap);
            let family: Vec<Vec<usize>> = (0..size).map(|_| random_function(&mut rng, m1, m2)).collect();
            let report = gen_app_bounds(m1, m2, fval).unwrap();
            let value = brute_force_app(m1, m2, &family).unwrap();
            assert!(value as f64 <= report.upper + SLACK, "({m1},{m2}) {value} > {}", report.upper);

            let mut with_constants = constants(m1, m2);
            with_constants.extend(family);
            let value = brute_force_app(m1, m2, &with_constants).unwrap();
            assert!(value as f64 + SLACK >= report.lower, "({m1},{m2}) {value} < {}", report.lower);
        }
    }
}

#[test]
fn pruned_and_plain_oracles_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (m1, m2) in [(2, 2), (3, 2), (4, 3), (5, 2), (3, 5), (6, 3)] {
        for _ in 0..30 {
            let size = rng.gen_range(0..6);
            let mut family: Vec<Vec<usize>> = (0..size).map(|_| random_function(&mut rng, m1, m2)).collect();
            if rng.gen_bool(0.5) {
                family.extend(constants(m1, m2));
            }
            family.shuffle(&mut rng);
            assert_eq!(
                brute_force_app(m1, m2, &family).unwrap(),
                brute_force_app_plain(m1, m2, &family).unwrap()
            );
        }
    }
}

#[test]
fn exact_small_values_respect_the_main_bounds() {
    for e in catalog_up_to(7).unwrap() {
        let n = e.group.order();
        if n < 2 {
            continue;
        }
        let b = main_theorem_bounds(n).unwrap();
        let endo = approx::worst_case_value(&e.group, FamilyKind::Endo, DEFAULT_BUDGET).unwrap();
        let affine = approx::worst_case_value(&e.group, FamilyKind::Affine, DEFAULT_BUDGET).unwrap();
        assert!(endo.value.unwrap() as f64 <= b.endo + SLACK, "{}", e.label);
        assert!(affine.value.unwrap() as f64 <= b.affine + SLACK, "{}", e.label);
    }
}

#[test]
fn main_bounds_are_monotone() {
    let mut prev = main_theorem_bounds(3).unwrap();
    let mut n = 4usize;
    while n <= 1_000_000 {
        let b = main_theorem_bounds(n).unwrap();
        assert!(b.endo + SLACK >= prev.endo && b.affine + SLACK >= prev.affine, "n = {n}");
        prev = b;
        n += if n < 10_000 { 1 } else { 97 };
    }
}
