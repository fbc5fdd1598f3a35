use std::borrow::Cow;

use crate::perm::{PermGroup, Permutation, SchreierTree};

/// Adjacency lists from one type-class to another, rows sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut r in rows {
            r.sort_unstable();
            r.dedup();
            targets.extend_from_slice(&r);
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    /// Rows of length `rows` from an edge list.
    pub fn from_edges(rows: usize, edges: impl Iterator<Item = (u32, u32)>) -> Self {
        let mut lists = vec![Vec::new(); rows];
        for (a, b) in edges {
            lists[a as usize].push(b);
        }
        Self::from_rows(lists)
    }

    /// Transpose onto `cols` rows.
    pub fn transpose(&self, cols: usize) -> Self {
        let mut lists = vec![Vec::new(); cols];
        for a in 0..self.rows() {
            for &b in self.row(a) {
                lists[b as usize].push(a as u32);
            }
        }
        Self::from_rows(lists)
    }

    pub fn rows(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    #[inline]
    pub fn row(&self, a: usize) -> &[u32] {
        &self.targets[self.offsets[a]..self.offsets[a + 1]]
    }

    pub fn edge_count(&self) -> u64 {
        self.targets.len() as u64
    }

    #[inline]
    pub fn contains(&self, a: usize, b: u32) -> bool {
        self.row(a).binary_search(&b).is_ok()
    }
}

/// Γ_{x_i} ∩ X_j as a sorted list plus a membership table.
#[derive(Clone, Debug)]
pub struct NeighborSet {
    sorted: Vec<u32>,
    member: Vec<bool>,
}

impl NeighborSet {
    pub fn new(mut points: Vec<u32>, universe: usize) -> Self {
        points.sort_unstable();
        points.dedup();
        let mut member = vec![false; universe];
        for &p in &points {
            member[p as usize] = true;
        }
        NeighborSet {
            sorted: points,
            member,
        }
    }

    pub fn points(&self) -> &[u32] {
        &self.sorted
    }

    #[inline]
    pub fn contains(&self, p: u32) -> bool {
        self.member[p as usize]
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

/// Incidence defined by a group acting identically on every type-class:
/// `p ∗ q` iff `q` moved back by a witness of `p` lies in `Γ_{x_i} ∩ X_j`.
#[derive(Clone, Debug)]
pub struct Orbital {
    group: PermGroup,
    rank: usize,
    /// Indexed `i * rank + j`; unused on the diagonal.
    neighbors: Vec<Option<NeighborSet>>,
    /// Per type, a Schreier tree of the group rooted at the base element.
    trees: Vec<SchreierTree>,
}

impl Orbital {
    /// `neighbor_sets[i][j]` lists the neighbours of `base[i]` in type `j`.
    pub fn new(group: PermGroup, base: &[u32], neighbor_sets: Vec<Vec<Option<Vec<u32>>>>) -> Self {
        let rank = base.len();
        let degree = group.degree();
        let trees = base.iter().map(|&x| group.point_orbit(x)).collect();
        let mut neighbors = Vec::with_capacity(rank * rank);
        for row in neighbor_sets {
            for set in row {
                neighbors.push(set.map(|s| NeighborSet::new(s, degree)));
            }
        }
        Orbital {
            group,
            rank,
            neighbors,
            trees,
        }
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn base_neighbors(&self, i: usize, j: usize) -> &NeighborSet {
        self.neighbors[i * self.rank + j]
            .as_ref()
            .expect("no neighbour set on the diagonal")
    }

    pub fn tree(&self, i: usize) -> &SchreierTree {
        &self.trees[i]
    }

    pub fn neighbors(&self, i: usize, p: u32, j: usize) -> Vec<u32> {
        let set = self.base_neighbors(i, j);
        let tree = &self.trees[i];
        let gens = self.group.generators();
        let path = tree.path(p);
        let mut out: Vec<u32> = if path.len() * set.len() > self.group.degree() {
            let mut w = Permutation::identity(self.group.degree());
            for &k in &path {
                w.mul_assign(&gens[k as usize]);
            }
            set.points().iter().map(|&q| w.image(q)).collect()
        } else {
            set.points()
                .iter()
                .map(|&q| path.iter().fold(q, |x, &k| gens[k as usize].image(x)))
                .collect()
        };
        out.sort_unstable();
        out
    }

    #[inline]
    pub fn incident(&self, i: usize, p: u32, j: usize, q: u32) -> bool {
        let back = self.trees[i].apply_witness_inverse(p, self.group.inverses(), q);
        self.base_neighbors(i, j).contains(back)
    }

    pub fn edge_count(&self, i: usize, j: usize) -> u64 {
        self.trees[i].len() as u64 * self.base_neighbors(i, j).len() as u64
    }

    /// The same incidence on the listed types only.
    pub fn restrict(&self, keep: &[usize]) -> Orbital {
        let mut neighbors = Vec::with_capacity(keep.len() * keep.len());
        for &i in keep {
            for &j in keep {
                neighbors.push(self.neighbors[i * self.rank + j].clone());
            }
        }
        Orbital {
            group: self.group.clone(),
            rank: keep.len(),
            neighbors,
            trees: keep.iter().map(|&i| self.trees[i].clone()).collect(),
        }
    }
}

/// Cross-type incidence, stored or implicit.
#[derive(Clone, Debug)]
pub enum Incidence {
    Explicit { rank: usize, adj: Vec<Csr> },
    Orbital(Orbital),
}

impl Incidence {
    pub fn explicit(rank: usize, adj: Vec<Csr>) -> Self {
        debug_assert_eq!(adj.len(), rank * rank);
        Incidence::Explicit { rank, adj }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, Incidence::Explicit { .. })
    }

    pub fn neighbors(&self, i: usize, p: u32, j: usize) -> Cow<'_, [u32]> {
        match self {
            Incidence::Explicit { rank, adj } => Cow::Borrowed(adj[i * rank + j].row(p as usize)),
            Incidence::Orbital(o) => Cow::Owned(o.neighbors(i, p, j)),
        }
    }

    #[inline]
    pub fn incident(&self, i: usize, p: u32, j: usize, q: u32) -> bool {
        match self {
            Incidence::Explicit { rank, adj } => adj[i * rank + j].contains(p as usize, q),
            Incidence::Orbital(o) => o.incident(i, p, j, q),
        }
    }

    pub fn edge_count(&self, i: usize, j: usize) -> u64 {
        match self {
            Incidence::Explicit { rank, adj } => adj[i * rank + j].edge_count(),
            Incidence::Orbital(o) => o.edge_count(i, j),
        }
    }

    pub fn csr(&self, i: usize, j: usize) -> Option<&Csr> {
        match self {
            Incidence::Explicit { rank, adj } => Some(&adj[i * rank + j]),
            Incidence::Orbital(_) => None,
        }
    }
}
