use groupapprox::approx::{self, Family, FamilyKind, DEFAULT_BUDGET};
use groupapprox::catalog::catalog_up_to;
use groupapprox::group::{construct, Group, GroupFunction};
use groupapprox::morphism;
use proptest::prelude::*;

fn g(s: &str) -> Group {
    construct(&s.parse().unwrap()).unwrap()
}

fn small_groups() -> Vec<Group> {
    catalog_up_to(6).unwrap().into_iter().map(|e| e.group).collect()
}

fn function_on(order: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..order, order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bijective_affine_maps_preserve_affine_approximability(
        gi in 0usize..9,
        raw in function_on(6),
        ai in any::<prop::sample::Index>(),
    ) {
        let groups = small_groups();
        let group = &groups[gi % groups.len()];
        let n = group.order();
        let f: Vec<usize> = (0..n).map(|i| raw[i] % n).collect();
        let family = Family::new(group, FamilyKind::Affine).unwrap();
        let bijective: Vec<usize> = (0..family.len()).filter(|&i| family.member(i).is_bijective()).collect();
        let a = family.table(bijective[ai.index(bijective.len())]);
        let f_after_a: Vec<usize> = a.iter().map(|&y| f[y as usize]).collect();
        let a_after_f: Vec<usize> = f.iter().map(|&y| a[y] as usize).collect();
        let v = family.approximability(&f).0;
        prop_assert_eq!(v, family.approximability(&f_after_a).0);
        prop_assert_eq!(v, family.approximability(&a_after_f).0);
    }

    #[test]
    fn difference_criterion_agrees_with_scan(
        gi in 0usize..9,
        raw in function_on(6),
        mask in 1u32..64,
    ) {
        let groups = small_groups();
        let group = &groups[gi % groups.len()];
        let n = group.order();
        let images: Vec<usize> = (0..n).map(|i| raw[i] % n).collect();
        let mut x_set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if x_set.is_empty() {
            x_set.push(0);
        }
        let f = GroupFunction::new(group, images.clone()).unwrap();
        let found = approx::difference_criterion(group, &f, &x_set).unwrap();
        let family = Family::new(group, FamilyKind::Affine).unwrap();
        let scan = (0..family.len()).any(|i| x_set.iter().all(|&x| family.table(i)[x] as usize == images[x]));
        prop_assert_eq!(found.is_some(), scan);
        if let Some(a) = found {
            prop_assert!(x_set.iter().all(|&x| a.apply(group, x) == images[x]));
        }
    }
}

#[test]
fn endo_value_never_exceeds_affine_value() {
    for e in catalog_up_to(8).unwrap() {
        let endo = approx::worst_case_value(&e.group, FamilyKind::Endo, DEFAULT_BUDGET).unwrap();
        let affine = approx::worst_case_value(&e.group, FamilyKind::Affine, DEFAULT_BUDGET).unwrap();
        assert!(endo.exact && affine.exact, "{}", e.label);
        assert!(endo.value <= affine.value, "{}", e.label);
        assert!(affine.value.unwrap() >= 1);
        if e.group.is_abelian() && e.group.order() > 1 {
            assert!(affine.value.unwrap() >= 2, "{}", e.label);
        }
    }
}

#[test]
fn universal_element_decides_positive_enapp() {
    for e in catalog_up_to(15).unwrap() {
        let universal = approx::find_universal_tuple(&e.group, 1).unwrap().is_some();
        let zero = approx::enapp_zero_witness(&e.group).unwrap();
        assert_eq!(universal, zero.is_none(), "{}", e.label);
        if let Some(f) = zero {
            assert_eq!(approx::approximability(&f, FamilyKind::Endo).unwrap().0, 0, "{}", e.label);
        }
        if e.group.order() <= 8 {
            let exact = approx::worst_case_value(&e.group, FamilyKind::Endo, DEFAULT_BUDGET).unwrap();
            assert_eq!(exact.value.unwrap() >= 1, universal, "{}", e.label);
        }
    }
}

#[test]
fn small_p_groups_have_affine_value_at_least_two() {
    let mut groups: Vec<Group> = catalog_up_to(9)
        .unwrap()
        .into_iter()
        .filter(|e| [2, 3, 4, 8, 9].contains(&e.group.order()))
        .map(|e| e.group)
        .collect();
    for s in [
        "heis(3)",
        "modmax(3)",
        "cyclic(27)",
        "elemabelian(3,3)",
        "product(cyclic(3),cyclic(9))",
    ] {
        groups.push(g(s));
    }
    assert_eq!(groups.len(), 1 + 1 + 2 + 5 + 2 + 5);
    for group in groups {
        let lb = approx::lower_bound_certificates(&group).unwrap();
        assert!(lb.affine.value >= 2, "{}", group.name());
    }
}

#[test]
fn certificates_hold_against_exact_values() {
    for e in catalog_up_to(8).unwrap() {
        let lb = approx::lower_bound_certificates(&e.group).unwrap();
        for kind in [FamilyKind::Endo, FamilyKind::Affine] {
            let exact = approx::worst_case_value(&e.group, kind, DEFAULT_BUDGET).unwrap();
            assert!(lb.for_kind(kind).value <= exact.value.unwrap(), "{} {kind}", e.label);
        }
    }
}

#[test]
fn witnesses_are_consistent() {
    for s in ["cyclic(6)", "dihedral(8)", "dicyclic(8)", "alt(4)"] {
        let group = g(s);
        let cert = approx::worst_case_value(&group, FamilyKind::Affine, DEFAULT_BUDGET).unwrap();
        let w = cert.witness.unwrap();
        let best = cert.best_map.unwrap();
        let agree = (0..group.order()).filter(|&x| best.apply(&group, x) == w.apply(x)).count();
        assert_eq!(agree, cert.value.unwrap(), "{s}");
        assert_eq!(w.apply(0), 0);
    }
}

#[test]
fn dominating_orbits_bound_dihedral_and_dicyclic() {
    for s in ["dihedral(6)", "dihedral(10)", "dihedral(14)", "dicyclic(8)", "dicyclic(12)"] {
        let lb = approx::lower_bound_certificates(&g(s)).unwrap();
        assert!(lb.affine.value >= 2, "{s}");
    }
    let orbits = morphism::automorphism_orbits(&g("dihedral(10)")).unwrap();
    assert!(orbits.iter().any(|o| o == &vec![5, 6, 7, 8, 9]));
}
