mod common;

use std::collections::BTreeSet;

use common::edges_by_type_id;
use geoforge::construct::{build_family, decompose, inc_extend, FamilySpec};
use geoforge::geometry::{basic_diagram, isomorphic, Partition, Pregeometry, TypeId};
use geoforge::verify::{verify, CheckKind, Status, VerificationReport, VerifyOptions};
use geoforge::Error;

fn build(spec: &FamilySpec) -> Pregeometry {
    build_family(spec).unwrap().geometry().unwrap()
}

fn all_but_battery() -> VerifyOptions {
    let checks: Vec<CheckKind> = CheckKind::ALL.into_iter().filter(|k| *k != CheckKind::SdBattery).collect();
    VerifyOptions::with_checks(&checks)
}

#[test]
fn decompose_then_extend_is_identity() {
    for spec in [FamilySpec::As { m: 5, b: 3 }, FamilySpec::Hs { m: 5, b: 1 }] {
        let g = build(&spec);
        let before = edges_by_type_id(&g);
        for &t in g.types() {
            let (truncated, y) = decompose(&g, t).unwrap();
            assert!(!truncated.types().contains(&t));
            let rebuilt = inc_extend(&truncated, y, t).unwrap();
            assert_eq!(edges_by_type_id(&rebuilt), before, "{spec:?} type {t}");
            let mut sizes: Vec<(TypeId, usize)> = rebuilt.types().iter().copied().zip(rebuilt.sizes().iter().copied()).collect();
            sizes.sort();
            let mut orig: Vec<(TypeId, usize)> = g.types().iter().copied().zip(g.sizes().iter().copied()).collect();
            orig.sort();
            assert_eq!(sizes, orig);
        }
    }
}

#[test]
fn file_round_trip_keeps_incidence_and_hash() {
    for spec in [FamilySpec::As { m: 5, b: 3 }, FamilySpec::HsSd { m: 5, b: 1 }] {
        let g = build(&spec);
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let (h, warnings) = Pregeometry::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert!(warnings.is_empty(), "{warnings:?}");
        assert_eq!(edges_by_type_id(&h), edges_by_type_id(&g));
        assert_eq!(h.instance_hash(), g.instance_hash());
        assert_eq!(h.group().unwrap().order(), g.group().unwrap().order());
    }
}

#[test]
fn loaded_instance_verifies_identically() {
    let spec = FamilySpec::As { m: 5, b: 3 };
    let g = build(&spec);
    let dir = tempfile_dir();
    let path = dir.join("as5.json");
    g.save(&path).unwrap();
    let (h, _) = Pregeometry::load(&path).unwrap();
    let inst = serde_json::to_value(&spec).unwrap();
    let a = verify(&g, inst.clone(), all_but_battery()).unwrap();
    let b = verify(&h, inst, all_but_battery()).unwrap();
    assert_eq!(a.without_timing(), b.without_timing());
    assert!(a.passed(false), "{}", a.summary());
}

#[test]
fn report_lines_round_trip() {
    let spec = FamilySpec::Hs { m: 5, b: 1 };
    let g = build(&spec);
    let inst = serde_json::to_value(&spec).unwrap();
    let r = verify(&g, inst.clone(), all_but_battery()).unwrap();
    let back = VerificationReport::from_json_lines(&r.to_json_lines(), inst).unwrap();
    // wall times go through decimal text and may lose the last bit
    assert_eq!(back.without_timing(), r.without_timing());
    for (a, b) in back.checks.iter().zip(&r.checks) {
        assert!((a.time_ms - b.time_ms).abs() <= 1e-9 * b.time_ms.max(1.0));
    }
    assert_eq!(r.to_json_lines().lines().count(), r.checks.len());
}

#[test]
fn product_power_squares_chambers_and_keeps_diagram() {
    let base = build(&FamilySpec::As { m: 5, b: 2 });
    let power = build(&FamilySpec::Product { inner: Box::new(FamilySpec::As { m: 5, b: 2 }), n: 2 });
    let c = base.chamber_count(1 << 20).unwrap();
    assert_eq!(c, 20);
    assert_eq!(power.chamber_count(1 << 20).unwrap(), c * c);
    let edges = |g: &Pregeometry| -> BTreeSet<(TypeId, TypeId)> {
        basic_diagram(g).unwrap().into_iter().filter(|e| e.is_edge()).map(|e| e.types).collect()
    };
    assert_eq!(edges(&power), edges(&base));
    let r = verify(&power, serde_json::Value::Null, VerifyOptions::with_checks(&[CheckKind::FlagTransitive])).unwrap();
    assert_eq!(r.get("flag-transitive").unwrap().status, Status::Pass);
}

#[test]
fn singleton_quotient_is_isomorphic() {
    let g = build(&FamilySpec::As { m: 5, b: 3 });
    let q = g.quotient(&Partition::singletons(&g)).unwrap();
    assert_eq!(q.sizes(), g.sizes());
    assert!(isomorphic(&q, &g.clone().detach()).unwrap().is_some());
    let r = verify(&q, serde_json::Value::Null, VerifyOptions::with_checks(&[CheckKind::CClass])).unwrap();
    assert!(r.passed(true), "{}", r.summary());
}

#[test]
fn universal_quotient_is_one_flag() {
    let g = build(&FamilySpec::As { m: 5, b: 3 });
    let q = g.quotient(&Partition::universal(&g)).unwrap();
    assert_eq!(q.sizes(), &[1, 1, 1]);
    assert_eq!(q.total_edges(), 3);
    let r = verify(&q, serde_json::Value::Null, VerifyOptions::with_checks(&[CheckKind::CClass])).unwrap();
    assert!(r.passed(true), "{}", r.summary());
}

#[test]
fn non_invariant_partition_is_rejected() {
    let g = build(&FamilySpec::As { m: 5, b: 3 });
    let ty = g.types()[0];
    let v = serde_json::json!({ ty.to_string(): [[1, 2], [3, 4, 5]] });
    let p = Partition::from_json(&g, &v).unwrap();
    match g.quotient(&p) {
        Err(Error::NotInvariant { type_id, part, .. }) => {
            assert_eq!(type_id, ty);
            assert!(part == vec![1, 2] || part == vec![3, 4, 5]);
        }
        other => panic!("expected rejection, got {:?}", other.map(|q| q.sizes().to_vec())),
    }
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("geoforge-roundtrip-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
