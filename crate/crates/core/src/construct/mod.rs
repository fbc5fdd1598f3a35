//! Recursive construction of flag-transitive geometries by adjoining one
//! type at a time, its inverse, and the named families built from it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{self, seeds, ActionDescriptor, ActionSpace, SdContext, SdCoset, SymKind};
use crate::config;
use crate::error::{Error, Result};
use crate::geometry::{Csr, Elem, Incidence, Labels, Layout, Orbital, Pregeometry, TypeId};
use crate::perm::PermGroup;

/// A named family with its parameters; `b` counts seeds as in each construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// S_m on m points, seeds 1..b; rank b.
    As { m: usize, b: usize },
    /// H Wr S_n in product action; rank b.
    Pa { component: ActionDescriptor, n: usize, b: usize },
    /// T×T on T = A_m, seeds x_0..x_b; rank b+1.
    Hs { m: usize, b: usize },
    /// The HS geometry with the inversion map adjoined to the group.
    HsSd { m: usize, b: usize },
    /// Componentwise n-th power of another family.
    Product { inner: Box<FamilySpec>, n: usize },
    /// Diagonal-coset seeds over T = A_m or S_m, evaluated symbolically.
    SdSymbolic { kind: SymKind, m: usize, n: usize, b: usize },
}

impl FamilySpec {
    /// Rank of the geometry this family builds.
    pub fn rank(&self) -> usize {
        match self {
            FamilySpec::As { b, .. } | FamilySpec::Pa { b, .. } | FamilySpec::SdSymbolic { b, .. } => *b,
            FamilySpec::Hs { b, .. } | FamilySpec::HsSd { b, .. } => b + 1,
            FamilySpec::Product { inner, .. } => inner.rank(),
        }
    }

    /// Parameter ranges of each construction, checked before any work.
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::As { m, b } => {
                if *m < 3 || *b < 1 || b + 2 > *m {
                    return Err(Error::Range(format!("AS needs 1 ≤ b ≤ m−2 (m = {m}, b = {b})")));
                }
            }
            FamilySpec::Pa { n, b, .. } => {
                if *b < 1 || b + 1 > n / 2 {
                    return Err(Error::Range(format!("PA needs 1 ≤ b ≤ ⌊n/2⌋−1 (n = {n}, b = {b})")));
                }
            }
            FamilySpec::Hs { m, b } | FamilySpec::HsSd { m, b } => {
                if *m < 5 || *b < 1 || *b > m / 4 {
                    return Err(Error::Range(format!("HS needs m ≥ 5 and 1 ≤ b ≤ ⌊m/4⌋ (m = {m}, b = {b})")));
                }
            }
            FamilySpec::Product { inner, n } => {
                if *n < 1 {
                    return Err(Error::Range("product power needs n ≥ 1".into()));
                }
                if matches!(**inner, FamilySpec::SdSymbolic { .. }) {
                    return Err(Error::Range("symbolic SD seeds have no product power".into()));
                }
                inner.validate()?;
            }
            FamilySpec::SdSymbolic { n, b, .. } => {
                if *n < 5 || *b < 1 || *b > (n - 1) / 4 {
                    return Err(Error::Range(format!("SD needs 1 ≤ b ≤ ⌊(n−1)/4⌋ (n = {n}, b = {b})")));
                }
            }
        }
        Ok(())
    }
}

/// Symbolic SD data: the coset arithmetic and the seeds `x_c = [ᾱ_c]`.
#[derive(Clone, Debug)]
pub struct SdBundle {
    pub kind: SymKind,
    pub m: usize,
    pub b: usize,
    pub context: SdContext,
    pub seeds: Vec<SdCoset>,
}

impl SdBundle {
    pub fn to_json(&self) -> serde_json::Value {
        let seeds: Vec<Vec<String>> = self
            .seeds
            .iter()
            .map(|c| c.entries().iter().map(|&t| self.context.element(t).to_string()).collect())
            .collect();
        serde_json::json!({
            "family": "sd-symbolic",
            "kind": self.kind,
            "m": self.m,
            "n": self.context.n(),
            "b": self.b,
            "alpha": self.context.element(self.context.alpha()).to_string(),
            "seeds": seeds,
        })
    }
}

#[derive(Clone, Debug)]
pub enum Built {
    Geometry(Pregeometry),
    Sd(SdBundle),
}

impl Built {
    pub fn geometry(self) -> Result<Pregeometry> {
        match self {
            Built::Geometry(g) => Ok(g),
            Built::Sd(_) => Err(Error::Invalid("symbolic SD data is not a geometry".into())),
        }
    }
}

/// Geometry whose `i`-th type is a copy of the points of `group`, with
/// incidence `x_i^g ∗ w^g` for `w ∈ sets[i][j]`. Materialized when the edge
/// count is within the configured limit.
fn uniform_geometry(
    group: PermGroup,
    action: Option<ActionDescriptor>,
    labels: Labels,
    types: Vec<TypeId>,
    base: Vec<u32>,
    sets: Vec<Vec<Option<Vec<u32>>>>,
) -> Result<Pregeometry> {
    let k = types.len();
    let n = group.degree();
    let orbital = Orbital::new(group.clone(), &base, sets);
    let mut total = 0u64;
    for i in 0..k {
        for j in i + 1..k {
            total += orbital.edge_count(i, j);
        }
    }
    let incidence = if total <= config::materialize_limit() {
        let mut adj = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    adj.push(Csr::from_rows(vec![Vec::new(); n]));
                } else {
                    let rows: Vec<Vec<u32>> =
                        (0..n as u32).into_par_iter().map(|p| orbital.neighbors(i, p, j)).collect();
                    adj.push(Csr::from_rows(rows));
                }
            }
        }
        Incidence::explicit(k, adj)
    } else {
        Incidence::Orbital(orbital)
    };
    let g = Pregeometry::from_parts(types, vec![n; k], vec![labels; k], incidence);
    g.attach(group, Layout::Uniform, base, action)
}

fn uniform_parts(g: &Pregeometry) -> Result<(PermGroup, Option<ActionDescriptor>, Vec<u32>)> {
    let att = g
        .attached()
        .ok_or_else(|| Error::Hypothesis("construction needs an attached group".into()))?;
    if att.layout() != Layout::Uniform {
        return Err(Error::Hypothesis(
            "the new type must carry the same action as the existing types".into(),
        ));
    }
    Ok((att.group().clone(), att.action().cloned(), att.base().to_vec()))
}

/// `Inc(Γ', G, K', Y, y, j)` with `Y` a further copy of the point set of `G`:
/// `x_i^g ∗ w^g` for all `w ∈ y^{G_{x_i}}` and `g ∈ G`.
pub fn inc_extend(g: &Pregeometry, y: u32, j: TypeId) -> Result<Pregeometry> {
    let (group, action, base) = uniform_parts(g)?;
    if g.type_index(j).is_some() {
        return Err(Error::Invalid(format!("type {j} is already in use")));
    }
    if y as usize >= group.degree() {
        return Err(Error::PointOutOfRange {
            point: y as usize,
            degree: group.degree(),
        });
    }
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let k = g.rank();
    let base_elems = g.base_chamber().expect("attached");
    let mut sets: Vec<Vec<Option<Vec<u32>>>> = vec![vec![None; k + 1]; k + 1];
    for i in 0..k {
        for jj in (0..k).filter(|&jj| jj != i) {
            sets[i][jj] = Some(g.neighbors(base_elems[i], jj));
        }
    }
    let gy = group.stabilizer(&[y])?;
    for i in 0..k {
        let gx = group.stabilizer(&[base[i]])?;
        sets[i][k] = Some(gx.point_orbit(y).orbit().to_vec());
        sets[k][i] = Some(gy.point_orbit(base[i]).orbit().to_vec());
    }
    let mut types = g.types().to_vec();
    types.push(j);
    let mut new_base = base;
    new_base.push(y);
    uniform_geometry(group, action, g.labels(0).clone(), types, new_base, sets)
}

/// Vertex-transitivity on each type and incidence-transitivity on each type pair.
pub fn check_transitivity(g: &Pregeometry) -> Result<()> {
    let base = g
        .base_chamber()
        .ok_or_else(|| Error::Hypothesis("no group attached".into()))?;
    let group = g.group().expect("attached");
    for t in 0..g.rank() {
        let orbit = g.orbit_in_type(group, base[t]).len();
        if orbit != g.size(t) {
            return Err(Error::Hypothesis(format!(
                "not vertex-transitive: type {} has an orbit of {orbit} out of {} elements",
                g.types()[t],
                g.size(t)
            )));
        }
    }
    for i in 0..g.rank() {
        let stab = g.stabilizer(&[base[i]])?;
        for j in (0..g.rank()).filter(|&j| j != i) {
            let orbit = g.orbit_in_type(&stab, base[j]).len();
            let nbrs = g.neighbors(base[i], j).len();
            if orbit != nbrs {
                return Err(Error::Hypothesis(format!(
                    "not incidence-transitive: the stabilizer of {} has an orbit of {orbit} on its {nbrs} neighbours of type {}",
                    g.elem_name(base[i]),
                    g.types()[j]
                )));
            }
        }
    }
    Ok(())
}

/// Removes type `j`: returns the truncation and the point `y = x_j`, so that
/// `inc_extend(Γ', y, j)` rebuilds the geometry.
pub fn decompose(g: &Pregeometry, j: TypeId) -> Result<(Pregeometry, u32)> {
    if g.rank() < 2 {
        return Err(Error::Hypothesis("a rank-1 pregeometry has no type to remove".into()));
    }
    let jt = g
        .type_index(j)
        .ok_or_else(|| Error::Invalid(format!("unknown type {j}")))?;
    check_transitivity(g)?;
    let (_, _, base) = uniform_parts(g)?;
    let rest: Vec<TypeId> = g.types().iter().copied().filter(|&t| t != j).collect();
    Ok((g.truncation(&rest)?, base[jt]))
}

/// `Γⁿ` under `G Wr S_n`: n-tuples per type, incident when incident in every
/// coordinate; base chamber the constant tuples of `K`.
pub fn product_power(g: &Pregeometry, n: usize) -> Result<Pregeometry> {
    if n == 0 {
        return Err(Error::Range("product power needs n ≥ 1".into()));
    }
    if n == 1 {
        return Ok(g.clone());
    }
    let (_, action, base) = uniform_parts(g)?;
    let action = action.ok_or_else(|| Error::Hypothesis("product power needs a described action".into()))?;
    let component = action.instantiate()?;
    let space = actions::wreath_product_action(&component, n)?;
    let delta = component.degree();
    let k = g.rank();
    let diagonal = |x: u32| actions::tuple_index(&vec![x; n], delta);
    let base_elems = g.base_chamber().expect("attached");
    let mut sets: Vec<Vec<Option<Vec<u32>>>> = vec![vec![None; k]; k];
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            let nb = g.neighbors(base_elems[i], j);
            let count = (nb.len() as u128).pow(n as u32);
            if count > config::degree_cap() as u128 {
                return Err(Error::Resource {
                    what: "neighbours in the product power".into(),
                    requested: count,
                    limit: config::degree_cap() as u128,
                });
            }
            let mut out = Vec::with_capacity(count as usize);
            let mut digits = vec![0usize; n];
            loop {
                let coords: Vec<u32> = digits.iter().map(|&d| nb[d]).collect();
                out.push(actions::tuple_index(&coords, delta));
                let mut pos = n;
                while pos > 0 && digits[pos - 1] + 1 == nb.len() {
                    digits[pos - 1] = 0;
                    pos -= 1;
                }
                if pos == 0 || nb.is_empty() {
                    break;
                }
                digits[pos - 1] += 1;
            }
            if nb.is_empty() {
                out.clear();
            }
            sets[i][j] = Some(out);
        }
    }
    uniform_geometry(
        space.group().clone(),
        Some(space.descriptor().clone()),
        Labels::Codec(space.codec().clone()),
        g.types().to_vec(),
        base.iter().map(|&x| diagonal(x)).collect(),
        sets,
    )
}

/// Adjoins seeds one type at a time starting from the rank-1 geometry on the points.
pub fn build_from_seeds(space: &ActionSpace, types: &[TypeId], seeds: &[u32]) -> Result<Pregeometry> {
    assert_eq!(types.len(), seeds.len());
    let rank1 = Pregeometry::rank1(types[0], Labels::Codec(space.codec().clone()), space.degree())?;
    let mut g = rank1.attach(
        space.group().clone(),
        Layout::Uniform,
        vec![seeds[0]],
        Some(space.descriptor().clone()),
    )?;
    for (&t, &y) in types.iter().zip(seeds).skip(1) {
        g = inc_extend(&g, y, t)?;
    }
    Ok(g)
}

/// Checks that `sigma` preserves every neighbour set of the base chamber and fixes the chamber.
pub fn check_sigma_invariance(g: &Pregeometry, sigma: &crate::perm::Permutation) -> Result<()> {
    let base = g
        .base_chamber()
        .ok_or_else(|| Error::Hypothesis("no base chamber".into()))?;
    for &x in &base {
        if sigma.image(x.idx) != x.idx {
            return Err(Error::Hypothesis(format!("σ moves base element {}", g.elem_name(x))));
        }
    }
    for i in 0..g.rank() {
        for j in (0..g.rank()).filter(|&j| j != i) {
            let nb = g.neighbors(base[i], j);
            for &w in &nb {
                let s = sigma.image(w);
                if nb.binary_search(&s).is_err() {
                    return Err(Error::Hypothesis(format!(
                        "σ maps the incident pair {} {} to a non-incident pair",
                        g.elem_name(base[i]),
                        g.elem_name(Elem::new(j, w))
                    )));
                }
            }
        }
    }
    Ok(())
}

pub fn build_family(spec: &FamilySpec) -> Result<Built> {
    spec.validate()?;
    match spec {
        FamilySpec::As { m, b } => {
            let space = actions::natural_group(SymKind::Sym, *m)?;
            let seeds = seeds::almost_simple(*m, *b)?;
            let types: Vec<TypeId> = (1..=*b as u32).collect();
            Ok(Built::Geometry(build_from_seeds(&space, &types, &seeds)?))
        }
        FamilySpec::Pa { component, n, b } => {
            let space = actions::wreath_product_action(&component.instantiate()?, *n)?;
            let seeds = seeds::product_action(&space, *b)?;
            let types: Vec<TypeId> = (1..=*b as u32).collect();
            Ok(Built::Geometry(build_from_seeds(&space, &types, &seeds)?))
        }
        FamilySpec::Hs { m, b } => {
            let (space, _) = actions::hs_action(*m)?;
            let seeds = seeds::holomorph_simple(*m, *b)?;
            let types: Vec<TypeId> = (0..=*b as u32).collect();
            Ok(Built::Geometry(build_from_seeds(&space, &types, &seeds)?))
        }
        FamilySpec::HsSd { m, b } => {
            let (space, sigma) = actions::hs_action(*m)?;
            let seeds = seeds::holomorph_simple(*m, *b)?;
            let types: Vec<TypeId> = (0..=*b as u32).collect();
            let g = build_from_seeds(&space, &types, &seeds)?;
            check_sigma_invariance(&g, &sigma)?;
            let enlarged = actions::hs_sd_action(*m)?;
            let base = g.attached().expect("attached").base().to_vec();
            let g = g.detach().attach(
                enlarged.group().clone(),
                Layout::Uniform,
                base,
                Some(enlarged.descriptor().clone()),
            )?;
            Ok(Built::Geometry(g))
        }
        FamilySpec::Product { inner, n } => {
            let g = build_family(inner)?.geometry()?;
            Ok(Built::Geometry(product_power(&g, *n)?))
        }
        FamilySpec::SdSymbolic { kind, m, n, b } => {
            let context = SdContext::new(*kind, *m, *n)?;
            let seeds = context.seeds(*b)?;
            Ok(Built::Sd(SdBundle {
                kind: *kind,
                m: *m,
                b: *b,
                context,
                seeds,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn as_rank2_first_extension() {
        let g = build_family(&FamilySpec::As { m: 5, b: 2 }).unwrap().geometry().unwrap();
        assert_eq!(g.neighbors(Elem::new(0, 0), 1), vec![1, 2, 3, 4]);
    }

    #[test]
    fn ranges_cite_constraints() {
        let e = FamilySpec::As { m: 5, b: 4 }.validate().unwrap_err().to_string();
        assert!(e.contains("b ≤ m−2"), "{e}");
        let e = FamilySpec::Pa {
            component: ActionDescriptor::parse_component("sym:3").unwrap(),
            n: 8,
            b: 4,
        }
        .validate()
        .unwrap_err()
        .to_string();
        assert!(e.contains("b ≤ ⌊n/2⌋−1"), "{e}");
    }

    #[test]
    fn decompose_rank1_refused() {
        let g = build_family(&FamilySpec::As { m: 5, b: 1 }).unwrap().geometry().unwrap();
        assert!(decompose(&g, 1).is_err());
    }
}
