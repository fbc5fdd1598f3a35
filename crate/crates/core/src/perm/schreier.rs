use super::Permutation;

pub(crate) const NONE: u32 = u32::MAX;

/// Orbit of a root point with a spanning tree labelled by generator indices.
///
/// Points keep their tree edge forever once discovered, so transversal
/// elements never change when generators are appended.
#[derive(Clone, Debug)]
pub struct SchreierTree {
    root: u32,
    orbit: Vec<u32>,
    /// Orbit position of each point, `NONE` outside the orbit.
    position: Vec<u32>,
    /// Orbit position of the tree parent, by orbit position.
    parent: Vec<u32>,
    /// Generator index of the tree edge into each orbit position.
    label: Vec<u32>,
}

impl SchreierTree {
    pub fn new(root: u32, degree: usize) -> Self {
        let mut position = vec![NONE; degree];
        position[root as usize] = 0;
        SchreierTree {
            root,
            orbit: vec![root],
            position,
            parent: vec![NONE],
            label: vec![NONE],
        }
    }

    pub fn build(root: u32, degree: usize, gens: &[Permutation]) -> Self {
        let mut t = Self::new(root, degree);
        t.close(gens, 0);
        t
    }

    /// Breadth-first closure: orbit positions `>= from` get every generator,
    /// earlier ones are assumed closed already.
    fn close(&mut self, gens: &[Permutation], from: usize) {
        let mut q = from;
        while q < self.orbit.len() {
            let x = self.orbit[q];
            for (k, g) in gens.iter().enumerate() {
                self.visit(x, q as u32, k as u32, g);
            }
            q += 1;
        }
    }

    #[inline]
    fn visit(&mut self, x: u32, from_pos: u32, k: u32, g: &Permutation) {
        let y = g.image(x);
        if self.position[y as usize] == NONE {
            self.position[y as usize] = self.orbit.len() as u32;
            self.orbit.push(y);
            self.parent.push(from_pos);
            self.label.push(k);
        }
    }

    /// Extends the orbit after `gens[new_index]` was appended.
    pub fn add_generator(&mut self, gens: &[Permutation], new_index: usize) {
        let old = self.orbit.len();
        let g = &gens[new_index];
        for q in 0..old {
            let x = self.orbit[q];
            self.visit(x, q as u32, new_index as u32, g);
        }
        self.close(gens, old);
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn orbit(&self) -> &[u32] {
        &self.orbit
    }

    pub fn len(&self) -> usize {
        self.orbit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbit.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.position[x as usize] != NONE
    }

    #[inline]
    pub fn position(&self, x: u32) -> Option<usize> {
        match self.position[x as usize] {
            NONE => None,
            p => Some(p as usize),
        }
    }

    /// Is the edge `x --gens[k]--> y` a tree edge?
    pub fn is_tree_edge(&self, x: u32, k: usize, y: u32) -> bool {
        match (self.position(x), self.position(y)) {
            (Some(px), Some(py)) => {
                py != 0 && self.parent[py] as usize == px && self.label[py] as usize == k
            }
            _ => false,
        }
    }

    /// Generator labels along the tree path from the root to `x`.
    pub fn path(&self, x: u32) -> Vec<u32> {
        let mut pos = self.position[x as usize];
        assert!(pos != NONE, "point not in orbit");
        let mut out = Vec::new();
        while pos != 0 {
            out.push(self.label[pos as usize]);
            pos = self.parent[pos as usize];
        }
        out.reverse();
        out
    }

    pub fn depth(&self, x: u32) -> usize {
        self.path(x).len()
    }

    /// Element mapping the root to `x`.
    pub fn witness(&self, x: u32, gens: &[Permutation]) -> Permutation {
        let mut w = Permutation::identity(self.position.len());
        for k in self.path(x) {
            w.mul_assign(&gens[k as usize]);
        }
        w
    }

    /// `q` under the witness of `x`.
    pub fn apply_witness(&self, x: u32, gens: &[Permutation], mut q: u32) -> u32 {
        for k in self.path(x) {
            q = gens[k as usize].image(q);
        }
        q
    }

    /// `q` under the inverse of the witness of `x`.
    #[inline]
    pub fn apply_witness_inverse(&self, x: u32, inverses: &[Permutation], mut q: u32) -> u32 {
        let mut pos = self.position[x as usize];
        debug_assert!(pos != NONE);
        while pos != 0 {
            q = inverses[self.label[pos as usize] as usize].image(q);
            pos = self.parent[pos as usize];
        }
        q
    }

    /// Replaces `h` by `h` followed by the inverse witness of `x`.
    pub fn strip(&self, x: u32, inverses: &[Permutation], h: &mut Permutation) {
        let mut pos = self.position[x as usize];
        while pos != 0 {
            h.mul_assign(&inverses[self.label[pos as usize] as usize]);
            pos = self.parent[pos as usize];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses_map_root_to_point() {
        let gens = vec![
            Permutation::parse("(1,2,3,4,5)", 5).unwrap(),
            Permutation::parse("(1,2)", 5).unwrap(),
        ];
        let inv: Vec<_> = gens.iter().map(|g| g.inverse()).collect();
        let t = SchreierTree::build(0, 5, &gens);
        assert_eq!(t.len(), 5);
        for &x in t.orbit() {
            let w = t.witness(x, &gens);
            assert_eq!(w.image(0), x);
            assert_eq!(t.apply_witness_inverse(x, &inv, x), 0);
            for q in 0..5 {
                assert_eq!(t.apply_witness(x, &gens, q), w.image(q));
            }
        }
    }
}
