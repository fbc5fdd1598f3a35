//! Stabilizer chains: deterministic Schreier–Sims, and a seeded sifting
//! builder that stops once a proven order upper bound is reached.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::schreier::SchreierTree;
use super::Permutation;

/// One level of a chain: the stabilizer of all earlier base points,
/// generated by `generators`, and the orbit of `base_point` under it.
#[derive(Clone, Debug)]
pub struct Level {
    generators: Vec<Permutation>,
    inverses: Vec<Permutation>,
    tree: SchreierTree,
}

impl Level {
    fn new(base_point: u32, degree: usize) -> Self {
        Level {
            generators: Vec::new(),
            inverses: Vec::new(),
            tree: SchreierTree::new(base_point, degree),
        }
    }

    fn add_generator(&mut self, g: Permutation) {
        self.inverses.push(g.inverse());
        self.generators.push(g);
        let k = self.generators.len() - 1;
        self.tree.add_generator(&self.generators, k);
    }

    pub fn base_point(&self) -> u32 {
        self.tree.root()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn inverses(&self) -> &[Permutation] {
        &self.inverses
    }

    pub fn tree(&self) -> &SchreierTree {
        &self.tree
    }

    pub fn orbit_len(&self) -> usize {
        self.tree.len()
    }
}

/// Base and strong generating set with per-level Schreier trees.
///
/// Invariant: the product of basic-orbit lengths is the group order.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point()).collect()
    }

    pub fn order(&self) -> u128 {
        product_of_orbits(&self.levels)
    }

    /// Chain of the pointwise stabilizer of the first `k` base points.
    pub fn tail(&self, k: usize) -> StabilizerChain {
        StabilizerChain {
            degree: self.degree,
            levels: self.levels[k..].to_vec(),
        }
    }

    /// Strong generators of the whole group (level 0 holds all of them).
    pub fn strong_generators(&self) -> &[Permutation] {
        self.levels.first().map(|l| l.generators()).unwrap_or(&[])
    }

    /// Residue of `g` and the level at which sifting stopped.
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        sift_levels(&self.levels, 0, g.clone())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, _) = self.sift(g);
        h.is_identity()
    }
}

fn product_of_orbits(levels: &[Level]) -> u128 {
    levels
        .iter()
        .map(|l| l.orbit_len() as u128)
        .fold(1u128, |acc, x| acc.saturating_mul(x))
}

fn sift_levels(levels: &[Level], from: usize, mut h: Permutation) -> (Permutation, usize) {
    for (i, level) in levels.iter().enumerate().skip(from) {
        let beta = h.image(level.base_point());
        if !level.tree.contains(beta) {
            return (h, i);
        }
        level.tree.strip(beta, &level.inverses, &mut h);
    }
    (h, levels.len())
}

/// Adds `h`, which fixes the base points of levels `< upto`, to levels `0..=upto`,
/// creating a new level when `upto` equals the current depth.
fn insert_strong_generator(levels: &mut Vec<Level>, degree: usize, h: Permutation, upto: usize, from: usize) {
    if upto == levels.len() {
        let b = h
            .smallest_moved_point()
            .expect("identity is never a strong generator");
        levels.push(Level::new(b, degree));
    }
    for level in levels.iter_mut().take(upto + 1).skip(from) {
        level.add_generator(h.clone());
    }
}

fn prefix_levels(degree: usize, prefix: &[u32]) -> Vec<Level> {
    prefix.iter().map(|&b| Level::new(b, degree)).collect()
}

/// Deterministic incremental Schreier–Sims.
///
/// Base: `prefix`, then smallest moved points. Schreier trees are
/// append-only, so a Schreier generator checked once stays checked.
pub fn schreier_sims(degree: usize, gens: &[Permutation], prefix: &[u32]) -> StabilizerChain {
    let mut levels = prefix_levels(degree, prefix);
    for g in gens {
        if g.is_identity() {
            continue;
        }
        let (h, j) = sift_levels(&levels, 0, g.clone());
        if !h.is_identity() {
            insert_strong_generator(&mut levels, degree, h, j, 0);
        }
    }
    // progress[i][pos] = number of generators of level i already paired with orbit position pos
    let mut progress: Vec<Vec<u32>> = vec![Vec::new(); levels.len()];
    let mut i = levels.len() as isize - 1;
    'outer: while i >= 0 {
        let li = i as usize;
        if progress.len() < levels.len() {
            progress.resize(levels.len(), Vec::new());
        }
        let mut pos = 0;
        while pos < levels[li].tree.len() {
            if progress[li].len() <= pos {
                progress[li].resize(pos + 1, 0);
            }
            while (progress[li][pos] as usize) < levels[li].generators.len() {
                let k = progress[li][pos] as usize;
                progress[li][pos] += 1;
                let level = &levels[li];
                let beta = level.tree.orbit()[pos];
                let gamma = level.generators[k].image(beta);
                if level.tree.is_tree_edge(beta, k, gamma) {
                    continue;
                }
                let mut s = level.tree.witness(beta, &level.generators);
                s.mul_assign(&level.generators[k]);
                level.tree.strip(gamma, &level.inverses, &mut s);
                if s.is_identity() {
                    continue;
                }
                let (h, j) = sift_levels(&levels, li + 1, s);
                if !h.is_identity() {
                    insert_strong_generator(&mut levels, degree, h, j, li + 1);
                    progress.resize(levels.len(), Vec::new());
                    i = j as isize;
                    continue 'outer;
                }
            }
            pos += 1;
        }
        i -= 1;
    }
    StabilizerChain { degree, levels }
}

/// Seeded product-replacement generator of pseudo-random group elements.
pub struct ProductReplacement {
    slots: Vec<Permutation>,
    acc: Permutation,
    rng: ChaCha8Rng,
}

impl ProductReplacement {
    pub fn new(degree: usize, gens: &[Permutation], seed: u64) -> Self {
        let base: Vec<Permutation> = if gens.is_empty() {
            vec![Permutation::identity(degree)]
        } else {
            gens.to_vec()
        };
        let mut slots = Vec::new();
        while slots.len() < 10.max(base.len()) {
            slots.push(base[slots.len() % base.len()].clone());
        }
        let mut pr = ProductReplacement {
            slots,
            acc: Permutation::identity(degree),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for _ in 0..50 {
            pr.step();
        }
        pr
    }

    fn step(&mut self) {
        let n = self.slots.len();
        let i = self.rng.random_range(0..n);
        let mut j = self.rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let rhs = if self.rng.random_bool(0.5) {
            self.slots[j].clone()
        } else {
            self.slots[j].inverse()
        };
        if self.rng.random_bool(0.5) {
            self.slots[i].mul_assign(&rhs);
        } else {
            self.slots[i] = rhs.mul(&self.slots[i]);
        }
        self.acc.mul_assign(&self.slots[i]);
    }

    pub fn next_element(&mut self) -> Permutation {
        self.step();
        self.acc.clone()
    }
}

/// Fixed seed for all sifting builders, so chains replay exactly.
pub const CHAIN_SEED: u64 = 0x6765_6f66_6f72_6765;

/// Consecutive trivial sifts after which the bound is deemed unreachable.
const STALL_LIMIT: usize = 80;

/// Builds a chain by sifting the generators and then pseudo-random elements
/// until the order reaches `bound`.
///
/// `bound` must be a proven upper bound on the group order: since the
/// product of basic-orbit lengths never exceeds the order of the group the
/// chain lives in, reaching it certifies the chain. Returns `None` when the
/// bound is not reached after a long run of trivial sifts.
pub fn sifting_chain(
    degree: usize,
    gens: &[Permutation],
    prefix: &[u32],
    bound: u128,
) -> Option<StabilizerChain> {
    let mut levels = prefix_levels(degree, prefix);
    for g in gens {
        if g.is_identity() {
            continue;
        }
        let (h, j) = sift_levels(&levels, 0, g.clone());
        if !h.is_identity() {
            insert_strong_generator(&mut levels, degree, h, j, 0);
        }
    }
    if product_of_orbits(&levels) > bound {
        return None;
    }
    let mut pr = ProductReplacement::new(degree, gens, CHAIN_SEED);
    let mut stall = 0;
    while product_of_orbits(&levels) < bound {
        let r = pr.next_element();
        let (h, j) = sift_levels(&levels, 0, r);
        if h.is_identity() {
            stall += 1;
            if stall >= STALL_LIMIT {
                return None;
            }
            continue;
        }
        stall = 0;
        insert_strong_generator(&mut levels, degree, h, j, 0);
        if product_of_orbits(&levels) > bound {
            return None;
        }
    }
    Some(StabilizerChain { degree, levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(m: usize) -> Vec<Permutation> {
        let cyc: Vec<u32> = (0..m as u32).collect();
        vec![
            Permutation::from_cycles(m, &[cyc]).unwrap(),
            Permutation::from_cycles(m, &[vec![0, 1]]).unwrap(),
        ]
    }

    #[test]
    fn symmetric_orders() {
        for (m, f) in [(2usize, 2u128), (3, 6), (5, 120), (7, 5040)] {
            let c = schreier_sims(m, &sym(m), &[]);
            assert_eq!(c.order(), f);
            let s = sifting_chain(m, &sym(m), &[], f).unwrap();
            assert_eq!(s.order(), f);
        }
    }

    #[test]
    fn base_is_smallest_moved_point() {
        let c = schreier_sims(5, &sym(5), &[]);
        let base = c.base();
        assert_eq!(base[0], 0);
        for (i, level) in c.levels().iter().enumerate() {
            let first = &level.generators()[0];
            assert!(base[..i].iter().all(|&b| first.image(b) == b));
            assert_eq!(first.smallest_moved_point(), Some(base[i]));
        }
        assert_eq!(schreier_sims(5, &sym(5), &[]).base(), base);
    }

    #[test]
    fn prefix_is_respected() {
        let c = schreier_sims(5, &sym(5), &[3, 1]);
        assert_eq!(&c.base()[..2], &[3, 1]);
        assert_eq!(c.order(), 120);
        assert_eq!(c.tail(1).order(), 24);
        assert_eq!(c.tail(2).order(), 6);
    }

    #[test]
    fn unreachable_bound_gives_none() {
        assert!(sifting_chain(5, &sym(5), &[], 240).is_none());
    }
}
