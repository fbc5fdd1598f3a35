//! Pregeometries: typed elements, cross-type incidence, an optional attached
//! group with a base chamber, and the structural predicates on them.

mod flags;
mod incidence;
mod io;
mod iso;
mod model;
mod quotient;
mod rank2;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde_json::Value;

use crate::actions::{ActionDescriptor, Codec};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

pub use flags::{ChamberStats, GeometryVerdict, RecursiveCondition, ThickVerdict};
pub use incidence::{Csr, Incidence, NeighborSet, Orbital};
pub use io::{instance_hash, GeometryFile};
pub use iso::isomorphic;
pub use model::{model_geometry, ModelKind};
pub use quotient::Partition;
pub use iso::ISO_LIMIT;
pub use rank2::{basic_diagram, co_rank2_residue, degree_sequence, diagram_dot, rank2_params, DiagramEdgeParams, DiagramEntry};

/// Type identifier as it appears in files and diagrams.
pub type TypeId = u32;

/// An element: position of its type in the type list, and its index within the type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub ty: usize,
    pub idx: u32,
}

impl Elem {
    pub fn new(ty: usize, idx: u32) -> Self {
        Elem { ty, idx }
    }
}

/// How elements of one type are named.
#[derive(Clone, Debug)]
pub enum Labels {
    /// 1-based ordinal.
    Ordinal,
    Codec(Codec),
    Values(Vec<Value>),
}

impl Labels {
    fn get(&self, idx: u32) -> Value {
        match self {
            Labels::Ordinal => Value::from(idx + 1),
            Labels::Codec(c) => c.decode(idx).to_json(),
            Labels::Values(v) => v[idx as usize].clone(),
        }
    }
}

/// Point numbering of the attached group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Every type is a copy of the same point set, acted on identically.
    Uniform,
    /// Types occupy consecutive blocks of points in type order.
    Disjoint,
}

#[derive(Clone, Debug)]
pub struct Attached {
    group: PermGroup,
    layout: Layout,
    /// Element index of the base chamber in each type.
    base: Vec<u32>,
    action: Option<ActionDescriptor>,
}

impl Attached {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn action(&self) -> Option<&ActionDescriptor> {
        self.action.as_ref()
    }
}

#[derive(Clone, Debug)]
pub struct Pregeometry {
    types: Vec<TypeId>,
    sizes: Vec<usize>,
    labels: Vec<Labels>,
    incidence: Incidence,
    attached: Option<Attached>,
}

impl Pregeometry {
    /// Explicit pregeometry from an edge list; each edge may be given in either orientation.
    pub fn from_edges(
        types: Vec<TypeId>,
        sizes: Vec<usize>,
        labels: Vec<Labels>,
        edges: impl IntoIterator<Item = (Elem, Elem)>,
    ) -> Result<Self> {
        let k = types.len();
        check_types(&types)?;
        if sizes.len() != k || labels.len() != k {
            return Err(Error::Invalid("types, sizes and labels differ in length".into()));
        }
        let mut lists: Vec<Vec<(u32, u32)>> = vec![Vec::new(); k * k];
        for (a, b) in edges {
            for e in [a, b] {
                if e.ty >= k || e.idx as usize >= sizes[e.ty] {
                    return Err(Error::Invalid(format!("element {e:?} out of range")));
                }
            }
            if a.ty == b.ty {
                return Err(Error::Invalid(format!(
                    "incidence between two elements of type {}",
                    types[a.ty]
                )));
            }
            lists[a.ty * k + b.ty].push((a.idx, b.idx));
            lists[b.ty * k + a.ty].push((b.idx, a.idx));
        }
        let adj = lists
            .into_iter()
            .enumerate()
            .map(|(ij, l)| Csr::from_edges(sizes[ij / k], l.into_iter()))
            .collect();
        Ok(Pregeometry {
            types,
            sizes,
            labels,
            incidence: Incidence::explicit(k, adj),
            attached: None,
        })
    }

    /// Trusted constructor; `incidence` must be symmetric.
    pub(crate) fn from_parts(
        types: Vec<TypeId>,
        sizes: Vec<usize>,
        labels: Vec<Labels>,
        incidence: Incidence,
    ) -> Self {
        Pregeometry {
            types,
            sizes,
            labels,
            incidence,
            attached: None,
        }
    }

    /// A single type with no incidence.
    pub fn rank1(ty: TypeId, labels: Labels, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Invalid("a rank-1 pregeometry needs at least one element".into()));
        }
        Self::from_edges(vec![ty], vec![size], vec![labels], std::iter::empty())
    }

    /// Attaches `group` after checking it preserves types and incidence and that `base` is a chamber.
    pub fn attach(
        mut self,
        group: PermGroup,
        layout: Layout,
        base: Vec<u32>,
        action: Option<ActionDescriptor>,
    ) -> Result<Self> {
        let k = self.rank();
        let expected = match layout {
            Layout::Uniform => {
                if self.sizes.iter().any(|&s| s != group.degree()) {
                    return Err(Error::Invalid("uniform layout needs every type of the group's degree".into()));
                }
                group.degree()
            }
            Layout::Disjoint => self.sizes.iter().sum(),
        };
        if group.degree() != expected {
            return Err(Error::DegreeMismatch(expected, group.degree()));
        }
        if base.len() != k {
            return Err(Error::Invalid(format!("base chamber has {} elements for rank {k}", base.len())));
        }
        let base_elems: Vec<Elem> = base.iter().enumerate().map(|(t, &i)| Elem::new(t, i)).collect();
        if !self.is_flag(&base_elems) {
            return Err(Error::NotAFlag(format!(
                "base chamber {} is not a chamber",
                self.flag_name(&base_elems)
            )));
        }
        let candidate = Attached {
            group,
            layout,
            base,
            action,
        };
        self.check_automorphisms(&candidate)?;
        self.attached = Some(candidate);
        Ok(self)
    }

    /// Attaches without checks; for groups that preserve incidence by construction.
    pub(crate) fn attach_trusted(mut self, attached: Attached) -> Self {
        self.attached = Some(attached);
        self
    }

    fn check_automorphisms(&self, att: &Attached) -> Result<()> {
        let offsets = self.offsets();
        let k = self.rank();
        for (gi, g) in att.group.generators().iter().enumerate() {
            let image = |e: Elem| -> Option<Elem> {
                let p = g.image(point_of(att.layout, &offsets, e));
                elem_of(att.layout, &offsets, &self.sizes, e.ty, p)
            };
            if att.layout == Layout::Disjoint {
                for t in 0..k {
                    for idx in 0..self.sizes[t] as u32 {
                        if image(Elem::new(t, idx)).is_none() {
                            return Err(Error::Invalid(format!(
                                "generator {} moves {} out of its type",
                                gi + 1,
                                self.elem_name(Elem::new(t, idx))
                            )));
                        }
                    }
                }
            }
            if let Incidence::Orbital(o) = &self.incidence {
                if o.group().generators() == att.group.generators() {
                    continue;
                }
            }
            for i in 0..k {
                for j in i + 1..k {
                    for p in 0..self.sizes[i] as u32 {
                        let a = Elem::new(i, p);
                        let ga = image(a).expect("type preserved");
                        for &q in self.incidence.neighbors(i, p, j).iter() {
                            let gb = image(Elem::new(j, q)).expect("type preserved");
                            if !self.incidence.incident(i, ga.idx, j, gb.idx) {
                                return Err(Error::Invalid(format!(
                                    "generator {} maps incident pair {} {} to a non-incident pair",
                                    gi + 1,
                                    self.elem_name(a),
                                    self.elem_name(Elem::new(j, q))
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn detach(mut self) -> Self {
        self.attached = None;
        self
    }

    pub fn rank(&self) -> usize {
        self.types.len()
    }

    pub fn types(&self) -> &[TypeId] {
        &self.types
    }

    pub fn type_index(&self, t: TypeId) -> Option<usize> {
        self.types.iter().position(|&x| x == t)
    }

    pub fn size(&self, ty: usize) -> usize {
        self.sizes[ty]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn element_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn labels(&self, ty: usize) -> &Labels {
        &self.labels[ty]
    }

    pub fn label(&self, e: Elem) -> Value {
        self.labels[e.ty].get(e.idx)
    }

    pub fn incidence(&self) -> &Incidence {
        &self.incidence
    }

    pub fn attached(&self) -> Option<&Attached> {
        self.attached.as_ref()
    }

    pub fn group(&self) -> Option<&PermGroup> {
        self.attached.as_ref().map(|a| &a.group)
    }

    pub fn base_chamber(&self) -> Option<Vec<Elem>> {
        self.attached
            .as_ref()
            .map(|a| a.base.iter().enumerate().map(|(t, &i)| Elem::new(t, i)).collect())
    }

    /// `type:index` with the index 1-based.
    pub fn elem_name(&self, e: Elem) -> String {
        format!("{}:{}", self.types[e.ty], e.idx + 1)
    }

    pub fn flag_name(&self, flag: &[Elem]) -> String {
        let parts: Vec<String> = flag.iter().map(|&e| self.elem_name(e)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn elem_json(&self, e: Elem) -> Value {
        Value::from(vec![Value::from(self.types[e.ty]), Value::from(e.idx + 1)])
    }

    pub fn flag_json(&self, flag: &[Elem]) -> Value {
        Value::Array(flag.iter().map(|&e| self.elem_json(e)).collect())
    }

    pub fn neighbors(&self, e: Elem, j: usize) -> Vec<u32> {
        if e.ty == j {
            return Vec::new();
        }
        self.incidence.neighbors(e.ty, e.idx, j).into_owned()
    }

    pub fn incident(&self, a: Elem, b: Elem) -> bool {
        if a.ty == b.ty {
            return a == b;
        }
        self.incidence.incident(a.ty, a.idx, b.ty, b.idx)
    }

    pub fn edge_count(&self, i: usize, j: usize) -> u64 {
        if i == j {
            0
        } else {
            self.incidence.edge_count(i, j)
        }
    }

    pub fn total_edges(&self) -> u64 {
        let k = self.rank();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| self.edge_count(i, j))
            .sum()
    }

    /// Distinct types, indices in range, pairwise incident.
    pub fn is_flag(&self, flag: &[Elem]) -> bool {
        for (a, &e) in flag.iter().enumerate() {
            if e.ty >= self.rank() || e.idx as usize >= self.sizes[e.ty] {
                return false;
            }
            for &f in &flag[..a] {
                if f.ty == e.ty || !self.incident(e, f) {
                    return false;
                }
            }
        }
        true
    }

    /// Elements of type `ty` incident to every member of `flag`, sorted.
    pub fn common_neighbors(&self, flag: &[Elem], ty: usize) -> Vec<u32> {
        let Some(first) = flag.iter().copied().min_by_key(|e| self.edge_count(e.ty, ty) / self.sizes[e.ty].max(1) as u64)
        else {
            return (0..self.sizes[ty] as u32).collect();
        };
        if flag.iter().any(|e| e.ty == ty) {
            return Vec::new();
        }
        self.neighbors(first, ty)
            .into_iter()
            .filter(|&q| flag.iter().all(|&f| f == first || self.incident(f, Elem::new(ty, q))))
            .collect()
    }

    pub(crate) fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.rank() + 1);
        off.push(0);
        for &s in &self.sizes {
            off.push(off.last().unwrap() + s);
        }
        off
    }

    /// Point of the attached group representing `e`.
    pub fn point(&self, e: Elem) -> u32 {
        let att = self.attached.as_ref().expect("no attached group");
        point_of(att.layout, &self.offsets(), e)
    }

    /// Pointwise stabilizer in the attached group of the given elements.
    pub fn stabilizer(&self, elems: &[Elem]) -> Result<PermGroup> {
        let att = self
            .attached
            .as_ref()
            .ok_or_else(|| Error::Hypothesis("no group attached".into()))?;
        let offsets = self.offsets();
        let pts: Vec<u32> = elems.iter().map(|&e| point_of(att.layout, &offsets, e)).collect();
        att.group.stabilizer(&pts)
    }

    /// Orbit of `e` under a subgroup `h` of the attached group, as sorted indices of `e`'s type.
    pub fn orbit_in_type(&self, h: &PermGroup, e: Elem) -> Vec<u32> {
        let att = self.attached.as_ref().expect("no attached group");
        let offsets = self.offsets();
        let tree = h.point_orbit(point_of(att.layout, &offsets, e));
        let mut out: Vec<u32> = tree
            .orbit()
            .iter()
            .map(|&p| {
                elem_of(att.layout, &offsets, &self.sizes, e.ty, p)
                    .expect("group preserves types")
                    .idx
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// `J`-truncation; `keep` lists type ids, output keeps this geometry's type order.
    pub fn truncation(&self, keep: &[TypeId]) -> Result<Pregeometry> {
        if keep.is_empty() {
            return Err(Error::Invalid("truncation to an empty type set".into()));
        }
        let mut idx: Vec<usize> = Vec::new();
        for &t in keep {
            let i = self
                .type_index(t)
                .ok_or_else(|| Error::Invalid(format!("unknown type {t}")))?;
            if !idx.contains(&i) {
                idx.push(i);
            }
        }
        idx.sort_unstable();
        let k = self.rank();
        let incidence = match &self.incidence {
            Incidence::Explicit { adj, .. } => {
                let mut out = Vec::with_capacity(idx.len() * idx.len());
                for &i in &idx {
                    for &j in &idx {
                        out.push(adj[i * k + j].clone());
                    }
                }
                Incidence::explicit(idx.len(), out)
            }
            Incidence::Orbital(o) => Incidence::Orbital(o.restrict(&idx)),
        };
        let mut out = Pregeometry::from_parts(
            idx.iter().map(|&i| self.types[i]).collect(),
            idx.iter().map(|&i| self.sizes[i]).collect(),
            idx.iter().map(|&i| self.labels[i].clone()).collect(),
            incidence,
        );
        if let Some(att) = &self.attached {
            let base = idx.iter().map(|&i| att.base[i]).collect();
            let group = match att.layout {
                Layout::Uniform => att.group.clone(),
                Layout::Disjoint => {
                    let offsets = self.offsets();
                    let degree: usize = idx.iter().map(|&i| self.sizes[i]).sum();
                    let gens = att
                        .group
                        .generators()
                        .iter()
                        .map(|g| {
                            let mut images = Vec::with_capacity(degree);
                            let mut shift = 0u32;
                            for &i in &idx {
                                for p in offsets[i]..offsets[i + 1] {
                                    images.push(g.image(p as u32) - offsets[i] as u32 + shift);
                                }
                                shift += self.sizes[i] as u32;
                            }
                            Permutation::from_images_unchecked(images)
                        })
                        .collect();
                    PermGroup::new(degree, gens)?
                }
            };
            out = out.attach_trusted(Attached {
                group,
                layout: att.layout,
                base,
                action: if att.layout == Layout::Uniform { att.action.clone() } else { None },
            });
        }
        Ok(out)
    }

    /// Residue of a flag, with explicit incidence and labels copied from this geometry.
    pub fn residue(&self, flag: &[Elem]) -> Result<Pregeometry> {
        if !self.is_flag(flag) {
            return Err(Error::NotAFlag(self.flag_name(flag)));
        }
        let rest: Vec<usize> = (0..self.rank()).filter(|t| flag.iter().all(|e| e.ty != *t)).collect();
        let members: Vec<Vec<u32>> = rest.iter().map(|&t| self.common_neighbors(flag, t)).collect();
        let position: Vec<HashMap<u32, u32>> = members
            .iter()
            .map(|m| m.iter().enumerate().map(|(a, &x)| (x, a as u32)).collect())
            .collect();
        let mut edges = Vec::new();
        for (a, &i) in rest.iter().enumerate() {
            for (b, &j) in rest.iter().enumerate().skip(a + 1) {
                for (pa, &p) in members[a].iter().enumerate() {
                    let nb = self.incidence.neighbors(i, p, j);
                    if nb.len() <= members[b].len() {
                        for q in nb.iter() {
                            if let Some(&pb) = position[b].get(q) {
                                edges.push((Elem::new(a, pa as u32), Elem::new(b, pb)));
                            }
                        }
                    } else {
                        for (pb, &q) in members[b].iter().enumerate() {
                            if nb.binary_search(&q).is_ok() {
                                edges.push((Elem::new(a, pa as u32), Elem::new(b, pb as u32)));
                            }
                        }
                    }
                }
            }
        }
        let labels = rest
            .iter()
            .zip(&members)
            .map(|(&t, m)| Labels::Values(m.iter().map(|&x| self.label(Elem::new(t, x))).collect()))
            .collect();
        Pregeometry::from_edges(
            rest.iter().map(|&t| self.types[t]).collect(),
            members.iter().map(|m| m.len()).collect(),
            labels,
            edges,
        )
    }

    /// Connected components of the incidence graph, each sorted.
    pub fn components(&self) -> Vec<Vec<Elem>> {
        let offsets = self.offsets();
        let total = self.element_count();
        let mut seen = vec![false; total];
        let mut out = Vec::new();
        for start_ty in 0..self.rank() {
            for start in 0..self.sizes[start_ty] as u32 {
                let s = Elem::new(start_ty, start);
                if seen[offsets[s.ty] + s.idx as usize] {
                    continue;
                }
                seen[offsets[s.ty] + s.idx as usize] = true;
                let mut comp = vec![s];
                let mut queue = VecDeque::from([s]);
                while let Some(e) = queue.pop_front() {
                    for j in 0..self.rank() {
                        if j == e.ty {
                            continue;
                        }
                        for &q in self.incidence.neighbors(e.ty, e.idx, j).iter() {
                            let slot = offsets[j] + q as usize;
                            if !seen[slot] {
                                seen[slot] = true;
                                let f = Elem::new(j, q);
                                comp.push(f);
                                queue.push_back(f);
                            }
                        }
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

fn check_types(types: &[TypeId]) -> Result<()> {
    for (a, t) in types.iter().enumerate() {
        if types[..a].contains(t) {
            return Err(Error::Invalid(format!("type {t} listed twice")));
        }
    }
    Ok(())
}

#[inline]
pub(crate) fn point_of(layout: Layout, offsets: &[usize], e: Elem) -> u32 {
    match layout {
        Layout::Uniform => e.idx,
        Layout::Disjoint => offsets[e.ty] as u32 + e.idx,
    }
}

#[inline]
pub(crate) fn elem_of(layout: Layout, offsets: &[usize], sizes: &[usize], ty: usize, p: u32) -> Option<Elem> {
    match layout {
        Layout::Uniform => ((p as usize) < sizes[ty]).then_some(Elem::new(ty, p)),
        Layout::Disjoint => {
            let p = p as usize;
            (p >= offsets[ty] && p < offsets[ty + 1]).then(|| Elem::new(ty, (p - offsets[ty]) as u32))
        }
    }
}

impl fmt::Display for Pregeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {} pregeometry, types {:?}, sizes {:?}", self.rank(), self.types, self.sizes)
    }
}

#[cfg(test)]
mod tests;
