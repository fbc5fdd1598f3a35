//! Group-theoretic and combinatorial checks: class-C conditions, the geometry
//! axiom, flag-transitivity, thickness, connectivity, the affine rank bound
//! and structural witnesses of the acting group.

use std::collections::VecDeque;

use serde_json::{json, Value};

use super::{order_json, skip_on_resource, timed, CheckResult, GeometryOutcome, Verifier};
use crate::actions::{ActionDescriptor, BasicAction};
use crate::error::Result;
use crate::geometry::{Elem, GeometryVerdict, Layout, Pregeometry};
use crate::perm::{OrbitSeed, PermGroup};

/// Elements of types `i` and `j` reachable from `start` in the `{i, j}`
/// truncation, and one element that is not reached.
pub(crate) fn pair_bfs(g: &Pregeometry, i: usize, j: usize, start: Elem) -> (usize, Option<Elem>) {
    let mut seen = [vec![false; g.size(i)], vec![false; g.size(j)]];
    let side = |t: usize| usize::from(t == j);
    seen[side(start.ty)][start.idx as usize] = true;
    let mut queue = VecDeque::from([start]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        let other = if u.ty == i { j } else { i };
        for q in g.neighbors(u, other) {
            let slot = &mut seen[side(other)][q as usize];
            if !*slot {
                *slot = true;
                reached += 1;
                queue.push_back(Elem::new(other, q));
            }
        }
    }
    let missing = [i, j].into_iter().find_map(|t| {
        seen[side(t)]
            .iter()
            .position(|&s| !s)
            .map(|x| Elem::new(t, x as u32))
    });
    (reached, missing)
}

/// `⟨G_{x_i}, G_{x_j}⟩ = G`, and otherwise an element outside the
/// component of `x_i`, found as a point outside that subgroup's orbits.
fn joint_generation(g: &Pregeometry, i: usize, j: usize) -> Result<(bool, Option<Elem>)> {
    let base = g.base_chamber().expect("group attached");
    let group = g.group().expect("group attached");
    let si = g.stabilizer(&[base[i]])?;
    let sj = g.stabilizer(&[base[j]])?;
    if group.generates_whole(si.generators(), sj.generators())? {
        return Ok((true, None));
    }
    let gens = si.generators().iter().chain(sj.generators()).cloned().collect();
    let h = PermGroup::new(group.degree(), gens)?;
    let missing = [i, j].into_iter().find_map(|t| {
        let orbit = g.orbit_in_type(&h, base[t]);
        (0..g.size(t) as u32)
            .find(|x| orbit.binary_search(x).is_err())
            .map(|x| Elem::new(t, x))
    });
    Ok((false, missing))
}

fn descriptor_affine(d: &ActionDescriptor) -> Option<(usize, u32)> {
    match d {
        ActionDescriptor::Basic(BasicAction::Agl { p, d }) => Some((*d, *p)),
        ActionDescriptor::Wreath { component, n, .. } => descriptor_affine(component).map(|(d, p)| (d * n, p)),
        _ => None,
    }
}

fn factorial(m: usize) -> u128 {
    (1..=m as u128).product()
}

impl Verifier<'_> {
    fn base(&self) -> Vec<Elem> {
        self.geom().base_chamber().expect("group attached")
    }

    fn group(&self) -> &PermGroup {
        self.geom().group().expect("group attached")
    }

    fn type_id(&self, t: usize) -> u32 {
        self.geom().types()[t]
    }

    pub(crate) fn c_class(&self) -> Result<Vec<CheckResult>> {
        let g = self.geom();
        let base = self.base();
        let k = g.rank();
        let mut out = Vec::new();

        out.push(timed(|| {
            let name = "c-class.vertex-transitive";
            let mut sizes = Vec::new();
            let mut witness = None;
            for t in 0..k {
                let orbit = g.orbit_in_type(self.group(), base[t]);
                sizes.push(json!({ "type": self.type_id(t), "orbit": orbit.len(), "elements": g.size(t) }));
                if witness.is_none() && orbit.len() != g.size(t) {
                    let y = (0..g.size(t) as u32).find(|x| orbit.binary_search(x).is_err()).unwrap();
                    witness = Some(json!({ "not_in_orbit_of": g.elem_json(base[t]), "element": g.elem_json(Elem::new(t, y)) }));
                }
            }
            Ok(CheckResult::verdict(name, witness.is_none(), json!({ "types": sizes }), || witness.unwrap()))
        })?);

        out.push(timed(|| {
            let name = "c-class.incidence-transitive";
            let mut pairs = Vec::new();
            let mut witness = None;
            for i in 0..k {
                let stab = g.stabilizer(&[base[i]])?;
                for j in i + 1..k {
                    let orbit = g.orbit_in_type(&stab, base[j]);
                    let nb = g.neighbors(base[i], j);
                    pairs.push(json!({
                        "types": [self.type_id(i), self.type_id(j)],
                        "orbit": orbit.len(),
                        "neighbours": nb.len(),
                    }));
                    if witness.is_none() && orbit.len() != nb.len() {
                        let y = nb.iter().copied().find(|x| orbit.binary_search(x).is_err()).unwrap_or(0);
                        witness = Some(json!({
                            "incident_pairs": [
                                [g.elem_json(base[i]), g.elem_json(base[j])],
                                [g.elem_json(base[i]), g.elem_json(Elem::new(j, y))],
                            ],
                            "note": "no stabilizer element of the first element maps one pair to the other",
                        }));
                    }
                }
            }
            Ok(CheckResult::verdict(name, witness.is_none(), json!({ "pairs": pairs }), || witness.unwrap()))
        })?);

        out.push(timed(|| {
            let name = "c-class.chamber";
            let bad = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .find(|&(i, j)| !g.incident(base[i], base[j]));
            Ok(CheckResult::verdict(
                name,
                bad.is_none(),
                json!({ "chamber": g.flag_json(&base) }),
                || {
                    let (i, j) = bad.unwrap();
                    json!({ "non_incident": [g.elem_json(base[i]), g.elem_json(base[j])] })
                },
            ))
        })?);

        out.push(timed(|| {
            let name = "c-class.connected-truncations";
            let mut pairs = Vec::new();
            let mut witness = None;
            for i in 0..k {
                for j in i + 1..k {
                    let (method, connected, missing) = if g.edge_count(i, j) <= self.opts.budget {
                        let (reached, missing) = pair_bfs(g, i, j, base[i]);
                        ("bfs", reached == g.size(i) + g.size(j), missing)
                    } else {
                        let (whole, missing) = joint_generation(g, i, j)?;
                        ("generation", whole, missing)
                    };
                    pairs.push(json!({ "types": [self.type_id(i), self.type_id(j)], "method": method, "connected": connected }));
                    if witness.is_none() && !connected {
                        witness = Some(json!({
                            "types": [self.type_id(i), self.type_id(j)],
                            "different_components": [g.elem_json(base[i]), missing.map(|e| g.elem_json(e))],
                        }));
                    }
                }
            }
            Ok(CheckResult::verdict(name, witness.is_none(), json!({ "pairs": pairs }), || witness.unwrap()))
        })?);
        Ok(out)
    }

    /// `Σ_J |G : G_(K_J)|` over all subsets `J` of the types, the empty flag included.
    fn flags_from_group(&self) -> Result<u128> {
        let g = self.geom();
        let base = self.base();
        let order = self.group().order();
        let mut total = 0u128;
        for mask in 0u64..(1u64 << g.rank()) {
            let flag: Vec<Elem> = (0..g.rank()).filter(|t| mask >> t & 1 == 1).map(|t| base[t]).collect();
            total = total.saturating_add(order / g.stabilizer(&flag)?.order());
        }
        Ok(total)
    }

    pub(crate) fn compute_geometry(&self) -> Result<GeometryOutcome> {
        let g = self.geom();
        let budget = self.opts.budget;
        let unextendable = |w: Vec<Elem>| {
            GeometryOutcome::Fails(json!({ "unextendable_flag": g.flag_json(&w), "note": "maximal flag that is not a chamber" }))
        };
        if self.recursive_holds()? {
            let from_group = self.flags_from_group()?;
            if from_group > budget as u128 {
                return Ok(GeometryOutcome::Holds(json!({
                    "method": "recursive",
                    "flags_from_group": order_json(from_group),
                })));
            }
            return Ok(match g.is_geometry_exhaustive(budget)? {
                GeometryVerdict::Geometry { flags } if flags as u128 == from_group => GeometryOutcome::Holds(json!({
                    "method": "exhaustive and recursive",
                    "flags": flags,
                    "flags_from_group": order_json(from_group),
                })),
                GeometryVerdict::Geometry { flags } => GeometryOutcome::Fails(json!({
                    "flag_count_mismatch": { "enumerated": flags, "from_group": order_json(from_group) },
                })),
                GeometryVerdict::Unextendable(w) => unextendable(w),
            });
        }
        match g.is_geometry_exhaustive(budget) {
            Ok(GeometryVerdict::Geometry { flags }) => Ok(GeometryOutcome::Holds(json!({ "method": "exhaustive", "flags": flags }))),
            Ok(GeometryVerdict::Unextendable(w)) => Ok(unextendable(w)),
            Err(e) if e.is_resource() => Ok(GeometryOutcome::Unknown(e.to_string())),
            Err(e) => Err(e),
        }
    }

    pub(crate) fn geometry_check(&self) -> Result<CheckResult> {
        Ok(match self.geometry_outcome()? {
            GeometryOutcome::Holds(d) => CheckResult::pass("geometry", d),
            GeometryOutcome::Fails(w) => CheckResult::fail("geometry", json!({}), w),
            GeometryOutcome::Unknown(reason) => CheckResult::skipped("geometry", reason),
        })
    }

    fn recursive_strategy(&self) -> Result<CheckResult> {
        let name = "flag-transitive.recursive";
        if !self.opts.strategies.recursive {
            return Ok(CheckResult::skipped(name, "strategy not selected"));
        }
        let g = self.geom();
        let base = self.base();
        let conds = self.recursive_conditions()?.expect("group attached");
        let list: Vec<Value> = conds
            .iter()
            .map(|c| {
                json!({
                    "type": self.type_id(c.level),
                    "q": g.flag_json(&c.q),
                    "orbit": c.orbit,
                    "target": c.target,
                })
            })
            .collect();
        let bad = conds.iter().find(|c| !c.holds());
        Ok(CheckResult::verdict(name, bad.is_none(), json!({ "conditions": list }), || {
            let c = bad.unwrap();
            let mut f1 = c.q.clone();
            f1.push(base[c.level]);
            let mut f2 = c.q.clone();
            f2.push(Elem::new(c.level, c.missing.unwrap_or(0)));
            json!({
                "flags_in_different_orbits": [g.flag_json(&f1), g.flag_json(&f2)],
                "orbit": c.orbit,
                "target": c.target,
            })
        }))
    }

    fn direct_strategy(&self) -> Result<CheckResult> {
        let name = "flag-transitive.direct";
        if !self.opts.strategies.direct {
            return Ok(CheckResult::skipped(name, "strategy not selected"));
        }
        let g = self.geom();
        let base = self.base();
        let budget = self.opts.budget;
        let orbit_size = self.group().order() / g.stabilizer(&base)?.order();
        if orbit_size > budget as u128 {
            return Ok(CheckResult::skipped(
                name,
                format!("chamber orbit of size {orbit_size} exceeds the budget of {budget}"),
            ));
        }
        skip_on_resource(name, (|| {
            let count = g.chamber_count(budget)?;
            let detail = json!({ "chambers": count, "chamber_orbit": orbit_size as u64 });
            if count as u128 == orbit_size {
                return Ok(CheckResult::pass(name, detail));
            }
            let points = |c: &[Elem]| c.iter().map(|&e| g.point(e)).collect::<Vec<u32>>();
            let orbit = self.group().orbit(&OrbitSeed::Tuple(points(&base)))?;
            let mut other = None;
            g.for_each_chamber(budget, |c| {
                if other.is_none() {
                    let ch: Vec<Elem> = c.iter().enumerate().map(|(t, &x)| Elem::new(t, x)).collect();
                    if !orbit.contains(&points(&ch)) {
                        other = Some(ch);
                    }
                }
            })?;
            let other = other.expect("a chamber outside the orbit exists when counts differ");
            Ok(CheckResult::fail(
                name,
                detail,
                json!({ "chambers_in_different_orbits": [g.flag_json(&base), g.flag_json(&other)] }),
            ))
        })())
    }

    pub(crate) fn flag_transitive(&self) -> Result<Vec<CheckResult>> {
        let rec = timed(|| self.recursive_strategy())?;
        let dir = timed(|| self.direct_strategy())?;
        let combined = timed(|| {
            let name = "flag-transitive";
            if let GeometryOutcome::Fails(w) = self.geometry_outcome()? {
                return Ok(CheckResult::fail(name, json!({ "note": "not a geometry" }), w));
            }
            let verdict = |r: &CheckResult| match r.status {
                super::Status::Pass => Some(true),
                super::Status::Fail => Some(false),
                super::Status::Skipped => None,
            };
            let detail = json!({ "recursive": rec.status, "direct": dir.status });
            Ok(match (verdict(&rec), verdict(&dir)) {
                (Some(a), Some(b)) if a != b => CheckResult::fail(
                    name,
                    detail,
                    json!({ "strategies_disagree": { "recursive": rec.detail, "direct": dir.detail } }),
                ),
                (None, None) => CheckResult::skipped(name, "no strategy completed"),
                (a, b) => {
                    let failing = [(&rec, a), (&dir, b)].into_iter().find(|(_, v)| *v == Some(false));
                    match failing {
                        Some((r, _)) => CheckResult::fail(name, detail, r.detail["witness"].clone()),
                        None => CheckResult::pass(name, detail),
                    }
                }
            })
        })?;
        Ok(vec![combined, dir, rec])
    }

    pub(crate) fn thick(&self) -> Result<CheckResult> {
        let name = "thick";
        let g = self.geom();
        if g.attached().is_some() && self.recursive_holds()? {
            let base = self.base();
            let counts = g.base_corank1_counts()?;
            let list: Vec<Value> = counts
                .iter()
                .map(|&(u, n)| json!({ "omitted_type": self.type_id(u), "chambers": n }))
                .collect();
            let bad = counts.iter().find(|&&(_, n)| n < 3).copied();
            return Ok(CheckResult::verdict(
                name,
                bad.is_none(),
                json!({ "method": "base chamber co-rank-1 flags", "counts": list }),
                || {
                    let (u, n) = bad.unwrap();
                    let flag: Vec<Elem> = base.iter().copied().filter(|e| e.ty != u).collect();
                    json!({ "flag": g.flag_json(&flag), "chambers": n })
                },
            ));
        }
        skip_on_resource(name, (|| {
            let v = g.is_thick_exhaustive(self.opts.budget)?;
            let detail = json!({ "method": "exhaustive", "min_chambers": v.min_chambers });
            Ok(CheckResult::verdict(name, v.thick, detail, || {
                let w = v.witness.clone().unwrap_or_default();
                let n = g.chambers_through(&w, self.opts.budget).unwrap_or(0);
                json!({ "flag": g.flag_json(&w), "chambers": n })
            }))
        })())
    }

    pub(crate) fn connected(&self) -> Result<CheckResult> {
        let name = "connected";
        let g = self.geom();
        let base = self.base();
        let k = g.rank();
        let mut pairs = Vec::new();
        let mut witness = None;
        for i in 0..k {
            for j in i + 1..k {
                let bfs = (g.edge_count(i, j) <= self.opts.budget).then(|| {
                    let (reached, missing) = pair_bfs(g, i, j, base[i]);
                    (reached == g.size(i) + g.size(j), missing)
                });
                let (generated, gen_missing) = joint_generation(g, i, j)?;
                let types = [self.type_id(i), self.type_id(j)];
                pairs.push(json!({ "types": types, "bfs": bfs.map(|b| b.0), "generation": generated }));
                if witness.is_some() {
                    continue;
                }
                match bfs {
                    Some((b, _)) if b != generated => {
                        witness = Some(json!({ "types": types, "bfs_and_generation_disagree": { "bfs": b, "generation": generated } }));
                    }
                    _ if !generated => {
                        let other = bfs.and_then(|b| b.1).or(gen_missing);
                        witness = Some(json!({
                            "types": types,
                            "different_components": [g.elem_json(base[i]), other.map(|e| g.elem_json(e))],
                        }));
                    }
                    _ => {}
                }
            }
        }
        Ok(CheckResult::verdict(name, witness.is_none(), json!({ "pairs": pairs }), || witness.unwrap()))
    }

    pub(crate) fn ha_bound(&self) -> Result<CheckResult> {
        let name = "ha-bound";
        let g = self.geom();
        let Some((d, p)) = g.attached().and_then(|a| a.action()).and_then(descriptor_affine) else {
            return Ok(CheckResult::skipped(name, "action is not affine"));
        };
        let base = self.base();
        let orders = (0..=base.len())
            .map(|l| Ok(g.stabilizer(&base[..l])?.order()))
            .collect::<Result<Vec<u128>>>()?;
        let rank_ok = g.rank() <= d + 1;
        let drop = orders.windows(2).position(|w| w[1] >= w[0]);
        let detail = json!({
            "rank": g.rank(),
            "dimension": d,
            "field": p,
            "stabilizer_orders": orders.iter().map(|&o| order_json(o)).collect::<Vec<_>>(),
        });
        Ok(CheckResult::verdict(name, rank_ok && drop.is_none(), detail, || match drop {
            Some(l) => json!({
                "flag": g.flag_json(&base[..l]),
                "next": g.elem_json(base[l]),
                "note": "adding the next element does not shrink the stabilizer",
            }),
            None => json!({ "rank": g.rank(), "bound": d + 1 }),
        }))
    }

    pub(crate) fn structure(&self) -> Result<CheckResult> {
        let name = "structure";
        let g = self.geom();
        let att = g.attached().expect("group attached");
        let group = att.group();
        let order = group.order();
        let mut detail = json!({
            "degree": group.degree(),
            "order": order_json(order),
            "layout": match att.layout() { Layout::Uniform => "uniform", Layout::Disjoint => "disjoint" },
            "action": att.action(),
        });
        let mut witness = None;
        if att.layout() == Layout::Uniform {
            let transitive = group.is_transitive();
            detail["transitive"] = json!(transitive);
            if transitive {
                detail["point_stabilizer_order"] = order_json(group.stabilizer(&[0])?.order());
                let block = group.nontrivial_block()?;
                detail["primitive"] = json!(block.is_none());
                if let Some(b) = block {
                    witness = Some(json!({ "block": b.iter().map(|&x| x + 1).collect::<Vec<_>>() }));
                }
            } else {
                let orbit: Vec<u32> = group.point_orbit(0).orbit().iter().map(|&x| x + 1).collect();
                witness = Some(json!({ "proper_orbit": orbit }));
            }
        }
        if let Some(ActionDescriptor::Basic(BasicAction::HsSd { m })) = att.action() {
            let t = factorial(*m) / 2;
            let expected = 2 * t * t;
            detail["expected_order"] = order_json(expected);
            if order != expected && witness.is_none() {
                witness = Some(json!({ "order": order_json(order), "expected": order_json(expected) }));
            }
        }
        Ok(CheckResult::verdict(name, witness.is_none(), detail, || witness.unwrap()))
    }
}
