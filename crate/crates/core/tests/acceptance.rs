//! End-to-end acceptance run: one PASS/FAIL line per criterion, each under a
//! fixed wall-clock limit. Exits nonzero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{alt_class_size, binomial, edges_by_type_id};
use geoforge::actions::{hs_action, ActionDescriptor};
use geoforge::construct::{build_family, check_sigma_invariance, decompose, inc_extend, FamilySpec};
use geoforge::geometry::{basic_diagram, DiagramEdgeParams, Elem, Partition, Pregeometry, TypeId};
use geoforge::verify::{predict_pa, verify, CheckKind, Status, VerificationReport, VerifyOptions};
use geoforge::Error;
use serde_json::Value;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn build(spec: &FamilySpec) -> Result<Pregeometry, String> {
    build_family(spec).and_then(|b| b.geometry()).map_err(|e| e.to_string())
}

fn run(g: &Pregeometry, kinds: &[CheckKind]) -> Result<VerificationReport, String> {
    verify(g, Value::Null, VerifyOptions::with_checks(kinds)).map_err(|e| e.to_string())
}

fn without_battery() -> Vec<CheckKind> {
    CheckKind::ALL.into_iter().filter(|k| *k != CheckKind::SdBattery).collect()
}

fn status(r: &VerificationReport, name: &str) -> Result<Status, String> {
    r.get(name).map(|c| c.status).ok_or_else(|| format!("no result named {name}"))
}

fn all_pass(r: &VerificationReport, names: &[&str]) -> Result<(), String> {
    for n in names {
        ensure!(status(r, n)? == Status::Pass, "{n} did not pass:\n{}", r.summary());
    }
    Ok(())
}

fn s3() -> ActionDescriptor {
    ActionDescriptor::parse_component("sym:3").unwrap()
}

fn as_5_3() -> Outcome {
    let g = build(&FamilySpec::As { m: 5, b: 3 })?;
    let r = run(&g, &without_battery())?;
    all_pass(
        &r,
        &["geometry", "flag-transitive", "flag-transitive.direct", "flag-transitive.recursive", "thick", "c-class.connected-truncations", "connected"],
    )?;
    let chambers = g.chamber_count(1 << 20).map_err(|e| e.to_string())?;
    ensure!(chambers == 5 * 4 * 3, "chamber count {chambers}");
    // every co-rank-1 flag of every chamber, not only the base chamber's
    let mut counts = BTreeSet::new();
    for ch in g.chambers(1 << 20).map_err(|e| e.to_string())? {
        for skip in 0..3 {
            let flag: Vec<Elem> = (0..3).filter(|&t| t != skip).map(|t| Elem::new(t, ch[t])).collect();
            counts.insert(g.chambers_through(&flag, 1 << 20).map_err(|e| e.to_string())?);
        }
    }
    ensure!(counts == BTreeSet::from([3]), "co-rank-1 chamber counts {counts:?}");
    Ok(format!("{chambers} chambers, co-rank-1 flags in 3 chambers"))
}

fn as_7_5() -> Outcome {
    let g = build(&FamilySpec::As { m: 7, b: 5 })?;
    let r = run(&g, &without_battery())?;
    ensure!(r.passed(false), "failures:\n{}", r.summary());
    ensure!(status(&r, "flag-transitive.direct")? == Status::Pass, "direct strategy did not run");
    Ok(format!("{} checks pass", r.checks.len()))
}

fn pa_8_3() -> Outcome {
    let g = build(&FamilySpec::Pa { component: s3(), n: 8, b: 3 })?;
    ensure!(g.size(0) == 6561, "degree {}", g.size(0));
    let conditions = g.recursive_conditions().map_err(|e| e.to_string())?;
    // one condition per level ℓ and Q ⊆ {x_0..x_{ℓ−1}}: 1 + 2 + 4
    ensure!(conditions.len() == 7, "{} conditions", conditions.len());
    ensure!(conditions.iter().all(|c| c.holds()), "a recursive condition fails");
    let r = run(&g, &[CheckKind::FlagTransitive, CheckKind::Thick, CheckKind::Connected])?;
    all_pass(&r, &["flag-transitive.recursive", "thick", "connected"])?;
    // under flag-transitivity every co-rank-1 flag is an image of one in the base chamber
    let counts = g.base_corank1_counts().map_err(|e| e.to_string())?;
    ensure!(counts.iter().all(|&(_, n)| n >= 6), "co-rank-1 counts {counts:?}");
    let pairs = r.get("connected").unwrap().detail["pairs"].as_array().cloned().unwrap_or_default();
    ensure!(pairs.len() == 3, "{} pairs", pairs.len());
    for p in &pairs {
        ensure!(p["bfs"] == Value::Bool(true) && p["generation"] == Value::Bool(true), "pair {p}");
    }
    let min = counts.iter().map(|c| c.1).min().unwrap();
    Ok(format!("7 recursive conditions hold, co-rank-1 flags in ≥ {min} chambers, BFS and generation agree"))
}

/// Parameters `(n₁, n₂, s₁, s₂, d₁, d₂, g)` of the coloured subset geometries, from their closed forms.
fn u24(m: u64, delta: u64) -> DiagramEdgeParams {
    DiagramEdgeParams {
        n1: binomial(m, 2) * delta.pow(2),
        n2: binomial(m, 4) * delta.pow(4),
        s1: binomial(m - 2, 2) * delta.pow(2) - 1,
        s2: binomial(4, 2) - 1,
        d1: 4,
        d2: 4,
        g: Some(2),
    }
}

fn ubar22(m: u64, delta: u64) -> DiagramEdgeParams {
    let n = binomial(m, 2) * delta.pow(2);
    let s = binomial(m - 2, 2) * delta.pow(2) - 1;
    DiagramEdgeParams { n1: n, n2: n, s1: s, s2: s, d1: 3, d2: 3, g: Some(2) }
}

fn pa_diagram() -> Outcome {
    let g = build(&FamilySpec::Pa { component: s3(), n: 10, b: 4 })?;
    ensure!(g.size(0) == 59049, "degree {}", g.size(0));
    let p = predict_pa(&g).map_err(|e| e.to_string())?;
    ensure!(p.pairs.len() == 6, "{} pairs", p.pairs.len());
    let pos = |t: TypeId| g.type_index(t).unwrap() + 1;
    let mut seen = 0;
    for q in &p.pairs {
        let (u, v) = (pos(q.types.0), pos(q.types.1));
        let measured = q.measured;
        match (u, v) {
            (2, 3) => {
                let expected = DiagramEdgeParams { n1: 15, n2: 15, s1: 5, s2: 5, d1: 3, d2: 3, g: Some(2) };
                ensure!(measured == Some(expected), "{{2,3}} measured {measured:?}");
                ensure!(q.isomorphic == Some(true), "{{2,3}} isomorphism {:?}", q.isomorphic);
            }
            (1, 2) => ensure!(measured == Some(u24(8, 2).swapped()), "{{1,2}} measured {measured:?}"),
            (3, 4) => ensure!(measured == Some(u24(8, 2)), "{{3,4}} measured {measured:?}"),
            (1, 4) => {
                ensure!(measured == Some(ubar22(8, 2)), "{{1,4}} measured {measured:?}");
                let side = binomial(8, 2) as usize * 4;
                ensure!(q.residue_sizes == (side, side), "{{1,4}} sizes {:?}", q.residue_sizes);
            }
            (1, 3) | (2, 4) => {}
            other => return Err(format!("unexpected pair {other:?}")),
        }
        ensure!(q.holds, "pair {u},{v} differs from its prediction");
        seen += 1;
    }
    ensure!(seen == 6, "saw {seen} pairs");
    Ok("six residues match, U_{2,4}(6) isomorphic".into())
}

fn hs_5_1() -> Outcome {
    let g = build(&FamilySpec::Hs { m: 5, b: 1 })?;
    ensure!(g.sizes() == [60, 60], "sizes {:?}", g.sizes());
    let k = alt_class_size(5, 2);
    for t in 0..2 {
        for p in 0..60 {
            let d = g.neighbors(Elem::new(t, p), 1 - t).len();
            ensure!(d == k, "degree {d} ≠ {k}");
        }
    }
    let r = run(&g, &without_battery())?;
    all_pass(&r, &["flag-transitive", "thick", "connected"])?;
    ensure!(r.passed(false), "failures:\n{}", r.summary());

    let (_, sigma) = hs_action(5).map_err(|e| e.to_string())?;
    check_sigma_invariance(&g, &sigma).map_err(|e| e.to_string())?;
    let sd = build(&FamilySpec::HsSd { m: 5, b: 1 })?;
    let order = sd.group().unwrap().order();
    ensure!(order == 2 * 3600, "order {order}");
    let r = run(&sd, &without_battery())?;
    ensure!(r.passed(false), "inversion extension:\n{}", r.summary());
    Ok(format!("{k}-regular, σ-invariant, |H| = {order}"))
}

fn hs_8_2() -> Outcome {
    let g = build(&FamilySpec::Hs { m: 8, b: 2 })?;
    ensure!(g.size(0) == 20160 && g.rank() == 3, "shape {:?}", g.sizes());
    let r = run(&g, &without_battery())?;
    ensure!(r.passed(false), "failures:\n{}", r.summary());
    all_pass(&r, &["flag-transitive.recursive", "geometry", "thick", "connected"])?;
    let base = g.base_chamber().unwrap();
    let mut sizes = Vec::new();
    for i in 0..3 {
        let stab = g.stabilizer(&[base[i]]).map_err(|e| e.to_string())?;
        for j in (0..3).filter(|&j| j != i) {
            let orbit = g.orbit_in_type(&stab, base[j]).len();
            let class = alt_class_size(8, 2 * i.abs_diff(j));
            ensure!(orbit == class, "|x_{j}^G_x_{i}| = {orbit}, class size {class}");
            sizes.push(orbit);
        }
    }
    Ok(format!("orbit sizes {sizes:?}"))
}

fn sd_battery() -> Outcome {
    let r = verify(&Pregeometry::rank1(1, geoforge::geometry::Labels::Ordinal, 1).unwrap(), Value::Null, VerifyOptions::with_checks(&[CheckKind::SdBattery]))
        .map_err(|e| e.to_string())?;
    all_pass(&r, &["sd-battery.difficult-orbits", "sd-battery.rep", "sd-battery.unique-rep"])?;
    let scan = &r.get("sd-battery.difficult-orbits").unwrap().detail["lengths"];
    let ns: Vec<u64> = scan.as_array().unwrap().iter().map(|l| l["n"].as_u64().unwrap()).collect();
    ensure!(ns == (2..=10).collect::<Vec<_>>(), "scanned lengths {ns:?}");
    let streams = r.get("sd-battery.rep").unwrap().detail["streams"].as_array().cloned().unwrap();
    let mut got = BTreeSet::new();
    for s in &streams {
        ensure!(s["samples"] == 10_000 && s["violations"] == 0, "stream {s}");
        got.insert((s["n"].as_u64().unwrap(), s["s"].as_u64().unwrap(), s["a"].as_u64().unwrap()));
    }
    // 1 ≤ s < a with 4a ≤ n − 1
    let mut want = BTreeSet::new();
    for n in [9u64, 13] {
        for a in 2..=(n - 1) / 4 {
            for s in 1..a {
                want.insert((n, s, a));
            }
        }
    }
    ensure!(got == want, "streams {got:?}, expected {want:?}");
    Ok(format!("{} sampled streams, zero violations", got.len()))
}

fn product_power() -> Outcome {
    let base = build(&FamilySpec::As { m: 5, b: 2 })?;
    let g = build(&FamilySpec::Product { inner: Box::new(FamilySpec::As { m: 5, b: 2 }), n: 2 })?;
    let c = base.chamber_count(1 << 20).map_err(|e| e.to_string())?;
    let c2 = g.chamber_count(1 << 20).map_err(|e| e.to_string())?;
    ensure!(c2 == c * c, "{c2} ≠ {c}²");
    let r = run(&g, &[CheckKind::FlagTransitive])?;
    all_pass(&r, &["flag-transitive"])?;
    let edges = |g: &Pregeometry| -> Result<BTreeSet<(TypeId, TypeId)>, String> {
        Ok(basic_diagram(g).map_err(|e| e.to_string())?.into_iter().filter(|e| e.is_edge()).map(|e| e.types).collect())
    };
    ensure!(edges(&g)? == edges(&base)?, "diagram edge sets differ");
    Ok(format!("{c2} = {c}² chambers"))
}

fn quotients() -> Outcome {
    let g = build(&FamilySpec::As { m: 5, b: 3 })?;
    let c_class = ["c-class.vertex-transitive", "c-class.incidence-transitive", "c-class.chamber", "c-class.connected-truncations"];
    for p in [Partition::singletons(&g), Partition::universal(&g)] {
        let q = g.quotient(&p).map_err(|e| e.to_string())?;
        all_pass(&run(&q, &[CheckKind::CClass])?, &c_class)?;
    }
    let ty = g.types()[0];
    let bad = Partition::from_json(&g, &serde_json::json!({ ty.to_string(): [[1, 2], [3, 4, 5]] })).map_err(|e| e.to_string())?;
    match g.quotient(&bad) {
        Err(Error::NotInvariant { generator, part, .. }) => Ok(format!("non-invariant partition rejected by generator {generator} on part {part:?}")),
        Err(e) => Err(format!("wrong rejection: {e}")),
        Ok(_) => Err("non-invariant partition accepted".into()),
    }
}

fn round_trip() -> Outcome {
    let mut n = 0;
    for spec in [FamilySpec::As { m: 5, b: 3 }, FamilySpec::Hs { m: 5, b: 1 }] {
        let g = build(&spec)?;
        let edges = edges_by_type_id(&g);
        for &t in g.types() {
            let (h, y) = decompose(&g, t).map_err(|e| e.to_string())?;
            let back = inc_extend(&h, y, t).map_err(|e| e.to_string())?;
            ensure!(edges_by_type_id(&back) == edges, "{spec:?}: type {t} does not round-trip");
            n += 1;
        }
    }
    Ok(format!("{n} removable types reproduce their edge sets"))
}

fn ha_bound() -> Outcome {
    let component = ActionDescriptor::parse_component("agl:5").map_err(|e| e.to_string())?;
    ensure!(component.instantiate().map_err(|e| e.to_string())?.degree() == 5, "component degree");
    let g = build(&FamilySpec::Pa { component, n: 6, b: 2 })?;
    let r = run(&g, &[CheckKind::HaBound])?;
    all_pass(&r, &["ha-bound"])?;
    let d = &r.get("ha-bound").unwrap().detail;
    let rank = d["rank"].as_u64().unwrap();
    let dim = d["dimension"].as_u64().unwrap();
    ensure!(rank == 2 && dim == 6, "rank {rank}, dimension {dim}");
    let orders: Vec<u128> = d["stabilizer_orders"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o.as_str().map(|s| s.parse().unwrap()).unwrap_or_else(|| o.as_u64().unwrap() as u128))
        .collect();
    ensure!(orders.windows(2).all(|w| w[1] < w[0]), "stabilizer orders {orders:?}");
    ensure!(orders[0] == 20u128.pow(6) * 720, "group order {}", orders[0]);
    Ok(format!("rank {rank} ≤ {}, stabilizer orders {orders:?}", dim + 1))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("AS m=5 b=3 full check", 1, as_5_3),
        ("AS m=7 b=5 full verification", 10, as_7_5),
        ("PA S3 n=8 b=3 recursive, thick, connected", 120, pa_8_3),
        ("PA S3 n=10 b=4 diagram", 600, pa_diagram),
        ("HS m=5 b=1 and inversion extension", 5, hs_5_1),
        ("HS m=8 b=2 recursive verification", 900, hs_8_2),
        ("diagonal-coset battery", 180, sd_battery),
        ("product power AS{5,2}^2", 30, product_power),
        ("quotient closure", 5, quotients),
        ("decompose/extend round trip", 5, round_trip),
        ("affine rank bound", 60, ha_bound),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(*limit) => Err(format!("{msg}; exceeded {limit} s")),
            o => o,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name} ({secs:.2} s / {limit} s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2} s / {limit} s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria pass", criteria.len());
}
