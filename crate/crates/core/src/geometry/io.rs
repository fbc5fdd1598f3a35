//! JSON serialization of pregeometries.
//!
//! Element references are `[type, index]` with 1-based indices. Group
//! generators are cycle strings over the disjoint union of the type-classes
//! taken in type order. Geometries whose incidence is held implicitly store
//! `incidence_orbits` instead of `incidence`: the neighbours of each base
//! chamber element, from which the attached group generates all edges.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{Elem, Incidence, Labels, Layout, Orbital, Pregeometry, TypeId};
use crate::actions::ActionDescriptor;
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

pub type ElemRef = (TypeId, u32);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDescriptor>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeometryFile {
    pub types: Vec<TypeId>,
    pub elements: BTreeMap<String, Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidence: Option<Vec<(ElemRef, ElemRef)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidence_orbits: Option<Vec<(ElemRef, ElemRef)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_chamber: Option<Vec<ElemRef>>,
}

/// SHA-256 of the canonical (key-sorted, compact) JSON text.
pub fn instance_hash(file: &GeometryFile) -> String {
    let v = serde_json::to_value(file).expect("geometry files serialize");
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

impl Pregeometry {
    fn elem_ref(&self, e: Elem) -> ElemRef {
        (self.types()[e.ty], e.idx + 1)
    }

    pub fn to_file(&self) -> GeometryFile {
        let k = self.rank();
        let elements = (0..k)
            .map(|t| {
                (
                    self.types()[t].to_string(),
                    (0..self.size(t) as u32).map(|i| self.label(Elem::new(t, i))).collect(),
                )
            })
            .collect();
        let (incidence, incidence_orbits) = match self.incidence() {
            Incidence::Explicit { .. } => {
                let mut edges = Vec::new();
                for i in 0..k {
                    for j in i + 1..k {
                        for p in 0..self.size(i) as u32 {
                            for &q in self.incidence().neighbors(i, p, j).iter() {
                                edges.push((self.elem_ref(Elem::new(i, p)), self.elem_ref(Elem::new(j, q))));
                            }
                        }
                    }
                }
                (Some(edges), None)
            }
            Incidence::Orbital(o) => {
                let base = self.base_chamber().expect("implicit incidence comes with a base chamber");
                let mut pairs = Vec::new();
                for i in 0..k {
                    for j in (0..k).filter(|&j| j != i) {
                        for &w in o.base_neighbors(i, j).points() {
                            pairs.push((self.elem_ref(base[i]), self.elem_ref(Elem::new(j, w))));
                        }
                    }
                }
                (None, Some(pairs))
            }
        };
        let (group, base_chamber) = match self.attached() {
            Some(att) => {
                let offsets = self.offsets();
                let degree = offsets[k];
                let generators = att
                    .group()
                    .generators()
                    .iter()
                    .map(|g| match att.layout() {
                        Layout::Disjoint => g.to_string(),
                        Layout::Uniform => {
                            let mut images = Vec::with_capacity(degree);
                            for t in 0..k {
                                images.extend(g.images().iter().map(|&x| x + offsets[t] as u32));
                            }
                            Permutation::from_images_unchecked(images).to_string()
                        }
                    })
                    .collect();
                let base = self
                    .base_chamber()
                    .unwrap()
                    .into_iter()
                    .map(|e| self.elem_ref(e))
                    .collect();
                (
                    Some(GroupJson {
                        degree,
                        generators,
                        action: att.action().cloned(),
                    }),
                    Some(base),
                )
            }
            None => (None, None),
        };
        GeometryFile {
            types: self.types().to_vec(),
            elements,
            incidence,
            incidence_orbits,
            group,
            base_chamber,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_file()).expect("geometry files serialize")
    }

    pub fn instance_hash(&self) -> String {
        instance_hash(&self.to_file())
    }

    /// Loads a file. A group that fails the automorphism check is dropped
    /// and reported in the returned warnings; implicit incidence needs its group.
    pub fn from_file(file: &GeometryFile) -> Result<(Pregeometry, Vec<String>)> {
        let types = file.types.clone();
        let k = types.len();
        let mut sizes = Vec::with_capacity(k);
        let mut labels = Vec::with_capacity(k);
        for t in &types {
            let list = file
                .elements
                .get(&t.to_string())
                .ok_or_else(|| Error::Invalid(format!("no elements listed for type {t}")))?;
            sizes.push(list.len());
            labels.push(Labels::Values(list.clone()));
        }
        let type_pos: HashMap<TypeId, usize> = types.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let resolve = |r: &ElemRef| -> Result<Elem> {
            let ty = *type_pos
                .get(&r.0)
                .ok_or_else(|| Error::Invalid(format!("reference to unknown type {}", r.0)))?;
            if r.1 < 1 || r.1 as usize > sizes[ty] {
                return Err(Error::Invalid(format!("element {}:{} does not exist", r.0, r.1)));
            }
            Ok(Elem::new(ty, r.1 - 1))
        };
        let base = file
            .base_chamber
            .as_ref()
            .map(|b| b.iter().map(&resolve).collect::<Result<Vec<_>>>())
            .transpose()?;
        let base_idx = match &base {
            Some(b) => {
                if b.len() != k || b.iter().enumerate().any(|(t, e)| e.ty != t) {
                    return Err(Error::Invalid("base chamber must list one element per type, in type order".into()));
                }
                Some(b.iter().map(|e| e.idx).collect::<Vec<u32>>())
            }
            None => None,
        };
        let group = match &file.group {
            Some(gj) => Some(load_group(gj, &sizes)?),
            None => None,
        };

        let mut warnings = Vec::new();
        match (&file.incidence, &file.incidence_orbits) {
            (Some(_), Some(_)) => Err(Error::Invalid("file has both incidence and incidence_orbits".into())),
            (None, Some(pairs)) => {
                let (group, layout, action) =
                    group.ok_or_else(|| Error::Invalid("incidence_orbits needs a group".into()))?;
                let base_idx = base_idx.ok_or_else(|| Error::Invalid("incidence_orbits needs a base chamber".into()))?;
                if layout != Layout::Uniform {
                    return Err(Error::Invalid(
                        "incidence_orbits needs every type to carry the same action".into(),
                    ));
                }
                let mut sets: Vec<Vec<Option<Vec<u32>>>> =
                    (0..k).map(|i| (0..k).map(|j| (i != j).then(Vec::new)).collect()).collect();
                for (a, b) in pairs {
                    let (a, b) = (resolve(a)?, resolve(b)?);
                    if a.ty == b.ty || base_idx[a.ty] != a.idx {
                        return Err(Error::Invalid(format!(
                            "incidence_orbits entry {:?} does not start at a base chamber element",
                            (a, b)
                        )));
                    }
                    sets[a.ty][b.ty].as_mut().unwrap().push(b.idx);
                }
                let orbital = Orbital::new(group.clone(), &base_idx, sets);
                // each base pair must be incident from both ends
                for i in 0..k {
                    for j in (0..k).filter(|&j| j != i) {
                        for &w in orbital.base_neighbors(i, j).points() {
                            if !orbital.incident(j, w, i, base_idx[i]) {
                                return Err(Error::Invalid(format!(
                                    "incidence_orbits is not symmetric at {}:{} and {}:{}",
                                    types[i],
                                    base_idx[i] + 1,
                                    types[j],
                                    w + 1
                                )));
                            }
                        }
                    }
                }
                let g = Pregeometry::from_parts(types, sizes, labels, Incidence::Orbital(orbital));
                let g = g.attach(group, layout, base_idx, action)?;
                Ok((g, warnings))
            }
            (incidence, None) => {
                let mut edges = Vec::new();
                for (a, b) in incidence.iter().flatten() {
                    edges.push((resolve(a)?, resolve(b)?));
                }
                let g = Pregeometry::from_edges(types, sizes, labels, edges)?;
                match (group, base_idx) {
                    (Some((group, layout, action)), Some(base)) => {
                        match g.clone().attach(group, layout, base, action) {
                            Ok(with) => Ok((with, warnings)),
                            Err(e) => {
                                warnings.push(format!("group not attached: {e}"));
                                Ok((g, warnings))
                            }
                        }
                    }
                    (Some(_), None) => {
                        warnings.push("group not attached: file has no base chamber".into());
                        Ok((g, warnings))
                    }
                    _ => Ok((g, warnings)),
                }
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<(Pregeometry, Vec<String>)> {
        let file: GeometryFile = serde_json::from_value(v.clone())?;
        Self::from_file(&file)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let text = serde_json::to_string(&self.to_file())?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<(Pregeometry, Vec<String>)> {
        let text = std::fs::read_to_string(path)?;
        let file: GeometryFile = serde_json::from_str(&text)?;
        Self::from_file(&file)
    }
}

/// Parses generators; compresses to one copy when every type carries the
/// same action, and reuses the described action's group when it matches.
fn load_group(gj: &GroupJson, sizes: &[usize]) -> Result<(PermGroup, Layout, Option<ActionDescriptor>)> {
    let total: usize = sizes.iter().sum();
    if gj.degree != total {
        return Err(Error::DegreeMismatch(total, gj.degree));
    }
    let gens = gj
        .generators
        .iter()
        .map(|s| Permutation::parse(s, gj.degree))
        .collect::<Result<Vec<_>>>()?;
    let n = sizes[0];
    let uniform = !sizes.is_empty()
        && sizes.iter().all(|&s| s == n)
        && gens.iter().all(|g| {
            (0..sizes.len()).all(|t| {
                let off = (t * n) as u32;
                (0..n as u32).all(|p| g.image(off + p) == off + g.image(p))
            })
        });
    if !uniform {
        return Ok((PermGroup::new(total, gens)?, Layout::Disjoint, None));
    }
    let compressed: Vec<Permutation> = gens
        .iter()
        .map(|g| Permutation::from_images_unchecked(g.images()[..n].to_vec()))
        .collect();
    if let Some(desc) = &gj.action {
        if let Ok(space) = desc.instantiate() {
            if space.degree() == n && space.group().generators() == compressed.as_slice() {
                return Ok((space.group().clone(), Layout::Uniform, Some(desc.clone())));
            }
        }
    }
    Ok((PermGroup::new(n, compressed)?, Layout::Uniform, None))
}
