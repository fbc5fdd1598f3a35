//! Quotients by per-type partitions.

use std::collections::BTreeSet;

use serde_json::Value;

use super::{elem_of, point_of, Elem, Labels, Layout, Pregeometry};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Parts of each type-class, by type position; members are element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub parts: Vec<Vec<Vec<u32>>>,
}

impl Partition {
    pub fn singletons(g: &Pregeometry) -> Self {
        Partition {
            parts: g.sizes().iter().map(|&s| (0..s as u32).map(|i| vec![i]).collect()).collect(),
        }
    }

    /// One part per type.
    pub fn universal(g: &Pregeometry) -> Self {
        Partition {
            parts: g.sizes().iter().map(|&s| vec![(0..s as u32).collect()]).collect(),
        }
    }

    /// Reads `{"type": [[member, …], …]}`; a member is a 1-based index or an
    /// `[type, index]` reference. Types not mentioned get singleton parts.
    pub fn from_json(g: &Pregeometry, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("partition must be an object keyed by type".into()))?;
        let mut out = Partition::singletons(g);
        for (key, parts) in obj {
            let t: u32 = key
                .parse()
                .map_err(|_| Error::Parse(format!("partition key {key:?} is not a type id")))?;
            let ty = g
                .type_index(t)
                .ok_or_else(|| Error::Invalid(format!("partition names unknown type {t}")))?;
            let parts = parts
                .as_array()
                .ok_or_else(|| Error::Parse(format!("parts of type {t} must be a list")))?;
            let mut list = Vec::new();
            for part in parts {
                let members = part
                    .as_array()
                    .ok_or_else(|| Error::Parse(format!("a part of type {t} is not a list")))?;
                let mut p = Vec::new();
                for m in members {
                    let (mt, idx) = match m {
                        Value::Number(n) => (t, n.as_u64()),
                        Value::Array(r) if r.len() == 2 => (
                            r[0].as_u64().unwrap_or(u64::MAX) as u32,
                            r[1].as_u64(),
                        ),
                        _ => (t, None),
                    };
                    if mt != t {
                        return Err(Error::Invalid(format!(
                            "partition crosses types: a part of type {t} contains an element of type {mt}"
                        )));
                    }
                    let idx = idx
                        .filter(|&i| i >= 1)
                        .ok_or_else(|| Error::Parse(format!("bad partition member {m}")))?;
                    p.push(idx as u32 - 1);
                }
                list.push(p);
            }
            out.parts[ty] = list;
        }
        Ok(out)
    }
}

impl Pregeometry {
    /// Parts become elements, incident iff some members are. An attached group
    /// must permute the parts; it then acts on the quotient.
    pub fn quotient(&self, partition: &Partition) -> Result<Pregeometry> {
        let k = self.rank();
        if partition.parts.len() != k {
            return Err(Error::Invalid("partition must list every type".into()));
        }
        let mut part_of: Vec<Vec<u32>> = self.sizes().iter().map(|&s| vec![u32::MAX; s]).collect();
        for (t, parts) in partition.parts.iter().enumerate() {
            for (pi, part) in parts.iter().enumerate() {
                if part.is_empty() {
                    return Err(Error::Invalid(format!("empty part in type {}", self.types()[t])));
                }
                for &x in part {
                    let slot = part_of[t].get_mut(x as usize).ok_or_else(|| {
                        Error::Invalid(format!("element {} does not exist", self.elem_name(Elem::new(t, x))))
                    })?;
                    if *slot != u32::MAX {
                        return Err(Error::Invalid(format!(
                            "element {} lies in two parts",
                            self.elem_name(Elem::new(t, x))
                        )));
                    }
                    *slot = pi as u32;
                }
            }
            if let Some(x) = part_of[t].iter().position(|&p| p == u32::MAX) {
                return Err(Error::Invalid(format!(
                    "element {} lies in no part",
                    self.elem_name(Elem::new(t, x as u32))
                )));
            }
        }

        let induced = match self.attached() {
            Some(att) => Some(self.induced_action(att.group(), att.layout(), partition, &part_of)?),
            None => None,
        };

        let mut edges = BTreeSet::new();
        for i in 0..k {
            for j in i + 1..k {
                for p in 0..self.size(i) as u32 {
                    for &q in self.incidence().neighbors(i, p, j).iter() {
                        edges.insert((
                            Elem::new(i, part_of[i][p as usize]),
                            Elem::new(j, part_of[j][q as usize]),
                        ));
                    }
                }
            }
        }
        let labels = partition
            .parts
            .iter()
            .enumerate()
            .map(|(t, parts)| {
                Labels::Values(
                    parts
                        .iter()
                        .map(|p| Value::Array(p.iter().map(|&x| self.label(Elem::new(t, x))).collect()))
                        .collect(),
                )
            })
            .collect();
        let q = Pregeometry::from_edges(
            self.types().to_vec(),
            partition.parts.iter().map(|p| p.len()).collect(),
            labels,
            edges,
        )?;
        match (induced, self.attached()) {
            (Some(group), Some(att)) => {
                let base = att
                    .base()
                    .iter()
                    .enumerate()
                    .map(|(t, &x)| part_of[t][x as usize])
                    .collect();
                q.attach(group, Layout::Disjoint, base, None)
            }
            _ => Ok(q),
        }
    }

    /// Action on parts, laid out type by type; errors with the first generator and part it does not map onto a part.
    fn induced_action(
        &self,
        group: &PermGroup,
        layout: Layout,
        partition: &Partition,
        part_of: &[Vec<u32>],
    ) -> Result<PermGroup> {
        let offsets = self.offsets();
        let mut part_offsets = vec![0usize];
        for parts in &partition.parts {
            part_offsets.push(part_offsets.last().unwrap() + parts.len());
        }
        let degree = *part_offsets.last().unwrap();
        let mut gens = Vec::new();
        for (gi, g) in group.generators().iter().enumerate() {
            let mut images = vec![0u32; degree];
            for (t, parts) in partition.parts.iter().enumerate() {
                for (pi, part) in parts.iter().enumerate() {
                    let image_of = |x: u32| -> u32 {
                        let p = g.image(point_of(layout, &offsets, Elem::new(t, x)));
                        let e = elem_of(layout, &offsets, self.sizes(), t, p).expect("group preserves types");
                        part_of[t][e.idx as usize]
                    };
                    let target = image_of(part[0]);
                    let ok = partition.parts[t][target as usize].len() == part.len()
                        && part.iter().all(|&x| image_of(x) == target);
                    if !ok {
                        return Err(Error::NotInvariant {
                            generator: gi + 1,
                            type_id: self.types()[t],
                            part: part.iter().map(|&x| x as usize + 1).collect(),
                        });
                    }
                    images[part_offsets[t] + pi] = (part_offsets[t] as u32) + target;
                }
            }
            gens.push(Permutation::from_images(images)?);
        }
        // a homomorphic image of the attached group
        PermGroup::with_order_bound(degree, gens, group.order())
    }
}
