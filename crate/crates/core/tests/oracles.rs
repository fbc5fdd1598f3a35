//! Constructed geometries compared with values computed by brute force.

mod common;

use std::collections::BTreeSet;

use common::*;
use geoforge::actions::{hs_action, ActionDescriptor};
use geoforge::construct::{build_family, check_sigma_invariance, FamilySpec};
use geoforge::geometry::{Layout, Pregeometry};

fn build(spec: FamilySpec) -> Pregeometry {
    build_family(&spec).unwrap().geometry().unwrap()
}

fn s3() -> ActionDescriptor {
    ActionDescriptor::parse_component("sym:3").unwrap()
}

/// Under a uniform layout the incidence between two types is the orbit of the base pair.
fn assert_edges_are_pair_orbits(g: &Pregeometry) {
    assert_eq!(g.attached().unwrap().layout(), Layout::Uniform);
    let gens = generator_images(g);
    let base = g.attached().unwrap().base().to_vec();
    for i in 0..g.rank() {
        for j in i + 1..g.rank() {
            let orbit = pair_orbit(&gens, (base[i], base[j]));
            assert_eq!(edges_between(g, i, j), orbit, "types {i},{j}");
        }
    }
}

#[test]
fn as_incidence_is_distinctness() {
    let g = build(FamilySpec::As { m: 5, b: 3 });
    let distinct: BTreeSet<(u32, u32)> = (0..5).flat_map(|a| (0..5).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    for i in 0..3 {
        for j in i + 1..3 {
            assert_eq!(edges_between(&g, i, j), distinct);
        }
    }
}

#[test]
fn as_chamber_counts_match_injective_tuples() {
    for (m, b) in [(5usize, 3usize), (7, 5), (6, 2)] {
        let g = build(FamilySpec::As { m, b });
        let injective = (m - b + 1..=m).product::<usize>() as u64;
        assert_eq!(g.chamber_count(1 << 24).unwrap(), injective, "m={m} b={b}");
    }
}

#[test]
fn as_corank1_flags_lie_in_three_chambers() {
    let g = build(FamilySpec::As { m: 5, b: 3 });
    // a co-rank-1 flag fixes two points; the third is any of the remaining three
    for (_, c) in g.base_corank1_counts().unwrap() {
        assert_eq!(c, 3);
    }
}

#[test]
fn alternating_class_sizes() {
    assert_eq!(alt_class_size(5, 2), 15);
    assert_eq!(alt_class_size(8, 2), 210);
    assert_eq!(alt_class_size(8, 4), 105);
    // independent closed form: m! / (2^k k! (m−2k)!)
    let f = |n: usize| (1..=n).product::<usize>();
    assert_eq!(alt_class_size(8, 2), f(8) / (4 * f(2) * f(4)));
}

#[test]
fn hs5_is_regular_of_class_size() {
    let g = build(FamilySpec::Hs { m: 5, b: 1 });
    assert_eq!(g.sizes(), &[60, 60]);
    let k = alt_class_size(5, 2);
    for i in 0..2 {
        for p in 0..60 {
            assert_eq!(g.neighbors(geoforge::geometry::Elem::new(i, p), 1 - i).len(), k);
        }
    }
}

#[test]
fn edges_equal_base_pair_orbits() {
    assert_edges_are_pair_orbits(&build(FamilySpec::As { m: 5, b: 3 }));
    assert_edges_are_pair_orbits(&build(FamilySpec::Hs { m: 5, b: 1 }));
    assert_edges_are_pair_orbits(&build(FamilySpec::HsSd { m: 5, b: 1 }));
    assert_edges_are_pair_orbits(&build(FamilySpec::Pa { component: s3(), n: 6, b: 2 }));
}

#[test]
fn group_orders_match_closure() {
    let cases: Vec<(Pregeometry, usize)> = vec![
        (build(FamilySpec::As { m: 5, b: 3 }), 120),
        (build(FamilySpec::Hs { m: 5, b: 1 }), 3600),
        (build(FamilySpec::HsSd { m: 5, b: 1 }), 7200),
        (build(FamilySpec::Pa { component: s3(), n: 4, b: 1 }), 6usize.pow(4) * 24),
    ];
    for (g, expected) in cases {
        let closure = closure_size(&generator_images(&g), 1 << 20);
        assert_eq!(closure, expected);
        assert_eq!(g.group().unwrap().order(), expected as u128);
    }
    let agl = ActionDescriptor::parse_component("agl:5").unwrap().instantiate().unwrap();
    let gens: Vec<Vec<u32>> = agl.group().generators().iter().map(|p| p.images().to_vec()).collect();
    assert_eq!(closure_size(&gens, 1000), 20);
    assert_eq!(agl.group().order(), 20);
}

#[test]
fn inversion_preserves_hs_incidence() {
    let g = build(FamilySpec::Hs { m: 5, b: 1 });
    let (_, sigma) = hs_action(5).unwrap();
    check_sigma_invariance(&g, &sigma).unwrap();
    // and on every edge, not only those through the base chamber
    let s = sigma.images();
    let edges = edges_between(&g, 0, 1);
    for &(p, q) in &edges {
        assert!(edges.contains(&(s[p as usize], s[q as usize])));
    }
}

#[test]
fn model_degrees_by_counting() {
    use geoforge::geometry::{model_geometry, Elem, ModelKind};
    let g = model_geometry(ModelKind::UBar, 2, 2, 6, 2).unwrap();
    // a coloured pair is disjoint from C(4,2)·2² coloured pairs
    assert_eq!(g.sizes(), &[60, 60]);
    assert_eq!(g.neighbors(Elem::new(0, 0), 1).len() as u64, binomial(4, 2) * 4);
}
