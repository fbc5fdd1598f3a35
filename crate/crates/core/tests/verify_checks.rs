//! Checks that must fail on broken inputs, with witnesses re-checked here.

mod common;

use geoforge::actions::{tuple_of, SdContext, SymKind};
use geoforge::construct::{build_family, FamilySpec};
use geoforge::geometry::{Elem, Labels, Layout, Pregeometry};
use geoforge::perm::{PermGroup, Permutation};
use geoforge::verify::{difficult_orbits_scan, verify, CheckKind, Status, VerifyOptions};
use serde_json::Value;

fn run(g: &Pregeometry, kinds: &[CheckKind]) -> geoforge::verify::VerificationReport {
    verify(g, Value::Null, VerifyOptions::with_checks(kinds)).unwrap()
}

fn points_of(flag: &Value) -> Vec<u32> {
    flag.as_array().unwrap().iter().map(|e| e[1].as_u64().unwrap() as u32 - 1).collect()
}

#[test]
fn cyclic_subgroup_is_not_flag_transitive() {
    let g = build_family(&FamilySpec::As { m: 5, b: 3 }).unwrap().geometry().unwrap();
    let base = g.attached().unwrap().base().to_vec();
    let c = Permutation::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
    let shrunk = g
        .detach()
        .attach(PermGroup::new(5, vec![c.clone()]).unwrap(), Layout::Uniform, base, None)
        .unwrap();
    let r = run(&shrunk, &[CheckKind::FlagTransitive, CheckKind::Geometry]);
    assert_eq!(r.get("geometry").unwrap().status, Status::Pass);
    assert_eq!(r.get("flag-transitive").unwrap().status, Status::Fail);
    assert_eq!(r.get("flag-transitive.recursive").unwrap().status, Status::Fail);

    let direct = r.get("flag-transitive.direct").unwrap();
    assert_eq!(direct.status, Status::Fail);
    let pair = direct.detail["witness"]["chambers_in_different_orbits"].as_array().unwrap();
    let (a, b) = (points_of(&pair[0]), points_of(&pair[1]));
    let mut power = Permutation::identity(5);
    for _ in 0..5 {
        let image: Vec<u32> = a.iter().map(|&x| power.image(x)).collect();
        assert_ne!(image, b);
        power = power.mul(&c);
    }
    // both really are chambers
    for ch in [&a, &b] {
        let flag: Vec<Elem> = ch.iter().enumerate().map(|(t, &x)| Elem::new(t, x)).collect();
        assert!(shrunk.is_flag(&flag));
    }
}

#[test]
fn disconnected_truncation_is_reported() {
    let edges = [(Elem::new(0, 0), Elem::new(1, 0)), (Elem::new(0, 1), Elem::new(1, 1))];
    let g = Pregeometry::from_edges(vec![1, 2], vec![2, 2], vec![Labels::Ordinal, Labels::Ordinal], edges).unwrap();
    let swap = Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap();
    let g = g.attach(PermGroup::new(4, vec![swap]).unwrap(), Layout::Disjoint, vec![0, 0], None).unwrap();
    let r = run(&g, &[CheckKind::CClass, CheckKind::Connected]);
    let c = r.get("c-class.connected-truncations").unwrap();
    assert_eq!(c.status, Status::Fail);
    let w = &c.detail["witness"]["different_components"];
    let (x, y) = (&w[0], &w[1]);
    // the two witnesses are not joined by a path
    let comps = g.components();
    let find = |v: &Value| {
        let e = Elem::new(g.type_index(v[0].as_u64().unwrap() as u32).unwrap(), v[1].as_u64().unwrap() as u32 - 1);
        comps.iter().position(|c| c.contains(&e)).unwrap()
    };
    assert_ne!(find(x), find(y));
    assert_eq!(r.get("connected").unwrap().status, Status::Fail);
}

#[test]
fn deleting_an_edge_breaks_thickness_or_the_group() {
    let g = build_family(&FamilySpec::As { m: 5, b: 3 }).unwrap().geometry().unwrap();
    let mut edges = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            for p in 0..5 {
                for q in g.neighbors(Elem::new(i, p), j) {
                    edges.push((Elem::new(i, p), Elem::new(j, q)));
                }
            }
        }
    }
    edges.retain(|&(a, b)| !(a == Elem::new(0, 0) && b == Elem::new(2, 3)));
    let broken = Pregeometry::from_edges(g.types().to_vec(), g.sizes().to_vec(), vec![Labels::Ordinal; 3], edges).unwrap();
    assert!(broken.clone().attach(g.group().unwrap().clone(), Layout::Uniform, vec![0, 1, 2], None).is_err());
    let r = run(&broken, &[CheckKind::Geometry, CheckKind::Thick]);
    assert_eq!(r.get("geometry").unwrap().status, Status::Pass);
    let t = r.get("thick").unwrap();
    assert_eq!(t.status, Status::Fail);
    let flag: Vec<Elem> = t.detail["witness"]["flag"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| Elem::new(broken.type_index(e[0].as_u64().unwrap() as u32).unwrap(), e[1].as_u64().unwrap() as u32 - 1))
        .collect();
    assert!(broken.chambers_through(&flag, 1 << 20).unwrap() < 3);
}

#[test]
fn hs_inversion_doubles_the_group() {
    let g = build_family(&FamilySpec::HsSd { m: 5, b: 1 }).unwrap().geometry().unwrap();
    assert_eq!(g.group().unwrap().order(), 7200);
    let r = run(&g, &[CheckKind::Structure, CheckKind::FlagTransitive]);
    assert!(r.passed(false), "{}", r.summary());
}

#[test]
fn affine_bound_needs_an_affine_action() {
    let g = build_family(&FamilySpec::As { m: 5, b: 3 }).unwrap().geometry().unwrap();
    let r = run(&g, &[CheckKind::HaBound]);
    assert_eq!(r.get("ha-bound").unwrap().status, Status::Skipped);
}

/// Literal reading of the interval statement, one `(x, α, β, i, j)` at a time.
fn naive_scan(delta: usize, n: usize) -> (u64, u64) {
    let non = |x: &[u32], g: u32, lo: usize, hi: usize| (lo..=hi).filter(|&k| x[k - 1] != g).count();
    let (mut hits, mut bad) = (0, 0);
    for code in 0..(delta as u32).pow(n as u32) {
        let x = tuple_of(code, delta, n);
        for alpha in 0..delta as u32 {
            for beta in 0..delta as u32 {
                let f = |l: usize| non(&x, alpha, 1, l) + non(&x, beta, l + 1, n) + l;
                for i in 1..=n {
                    for j in i + 1..=n {
                        let a = f(i);
                        if f(j) == a && j < a {
                            hits += 1;
                            if (i + 1..=j).any(|k| x[k - 1] != alpha) {
                                bad += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    (hits, bad)
}

#[test]
fn interval_scan_agrees_with_literal_oracle() {
    for n in 2..=6 {
        let s = difficult_orbits_scan(3, n);
        let (hits, bad) = naive_scan(3, n);
        assert_eq!((s.hits, s.violations), (hits, bad), "n = {n}");
        assert_eq!(bad, 0);
        assert!(n < 4 || hits > 0, "n = {n} exercises no case");
    }
}

#[test]
fn identity_coset_has_one_small_representative() {
    for n in [5, 9] {
        let ctx = SdContext::new(SymKind::Alt, 5, n).unwrap();
        let id = vec![ctx.identity(); n];
        let c = ctx.canonicalize(&id).unwrap();
        assert_eq!(ctx.small_support_count(&c), 1);
        assert_eq!(ctx.small_support_rep(&c), Some(id));
    }
}
