use std::collections::HashMap;

use super::{PermGroup, Permutation};
use crate::error::{Error, Result};

/// What an orbit is computed of: a point, an ordered tuple, or an unordered set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitSeed {
    Point(u32),
    Tuple(Vec<u32>),
    Set(Vec<u32>),
}

impl OrbitSeed {
    fn key(&self) -> Vec<u32> {
        match self {
            OrbitSeed::Point(p) => vec![*p],
            OrbitSeed::Tuple(t) => t.clone(),
            OrbitSeed::Set(s) => {
                let mut s = s.clone();
                s.sort_unstable();
                s.dedup();
                s
            }
        }
    }

    fn is_set(&self) -> bool {
        matches!(self, OrbitSeed::Set(_))
    }
}

/// Breadth-first orbit with a witness for every member.
///
/// Members appear in queue order with generators applied in stored order;
/// set members are stored sorted.
#[derive(Clone, Debug)]
pub struct Orbit {
    members: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    parent: Vec<usize>,
    label: Vec<usize>,
    generators: Vec<Permutation>,
}

impl Orbit {
    pub(crate) fn compute(group: &PermGroup, seed: &OrbitSeed) -> Result<Orbit> {
        let start = seed.key();
        for &p in &start {
            if p as usize >= group.degree() {
                return Err(Error::PointOutOfRange {
                    point: p as usize,
                    degree: group.degree(),
                });
            }
        }
        let set = seed.is_set();
        let gens = group.generators().to_vec();
        let mut members = vec![start.clone()];
        let mut index = HashMap::new();
        index.insert(start, 0usize);
        let mut parent = vec![usize::MAX];
        let mut label = vec![usize::MAX];
        let mut q = 0;
        while q < members.len() {
            for (k, g) in gens.iter().enumerate() {
                let mut img: Vec<u32> = members[q].iter().map(|&x| g.image(x)).collect();
                if set {
                    img.sort_unstable();
                }
                if !index.contains_key(&img) {
                    index.insert(img.clone(), members.len());
                    members.push(img);
                    parent.push(q);
                    label.push(k);
                }
            }
            q += 1;
        }
        Ok(Orbit {
            members,
            index,
            parent,
            label,
            generators: gens,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    pub fn contains(&self, member: &[u32]) -> bool {
        self.index.contains_key(member)
    }

    pub fn position(&self, member: &[u32]) -> Option<usize> {
        self.index.get(member).copied()
    }

    /// Group element mapping the seed to member `i`.
    pub fn witness(&self, i: usize) -> Permutation {
        let mut labels = Vec::new();
        let mut j = i;
        while j != 0 {
            labels.push(self.label[j]);
            j = self.parent[j];
        }
        let degree = self.generators[0].degree();
        let mut w = Permutation::identity(degree);
        for &k in labels.iter().rev() {
            w.mul_assign(&self.generators[k]);
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_and_set_orbits_in_s4() {
        let g = PermGroup::new(
            4,
            vec![
                Permutation::parse("(1,2,3,4)", 4).unwrap(),
                Permutation::parse("(1,2)", 4).unwrap(),
            ],
        )
        .unwrap();
        let pairs = g.orbit(&OrbitSeed::Tuple(vec![0, 1])).unwrap();
        assert_eq!(pairs.len(), 12);
        let sets = g.orbit(&OrbitSeed::Set(vec![1, 0])).unwrap();
        assert_eq!(sets.len(), 6);
        for i in 0..pairs.len() {
            let w = pairs.witness(i);
            let m = &pairs.members()[i];
            assert_eq!((w.image(0), w.image(1)), (m[0], m[1]));
        }
    }
}
