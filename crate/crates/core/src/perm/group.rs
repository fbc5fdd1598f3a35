use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::chain::{schreier_sims, sifting_chain, StabilizerChain};
use super::orbit::{Orbit, OrbitSeed};
use super::schreier::SchreierTree;
use super::Permutation;
use crate::error::{Error, Result};

/// Permutation group given by generators; the stabilizer chain is built on
/// first use and shared by all clones.
#[derive(Clone)]
pub struct PermGroup {
    inner: Arc<Inner>,
}

struct Inner {
    degree: usize,
    generators: Vec<Permutation>,
    inverses: Vec<Permutation>,
    /// Proven upper bound on the order, if known.
    order_bound: Option<u128>,
    chain: OnceLock<StabilizerChain>,
    stabilizers: Mutex<HashMap<Vec<u32>, PermGroup>>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree())
            .field("generators", &self.inner.generators)
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::build(degree, generators, None)
    }

    /// `bound` must be a proven upper bound on the order of the generated
    /// group; it only speeds up chain construction.
    pub fn with_order_bound(degree: usize, generators: Vec<Permutation>, bound: u128) -> Result<Self> {
        Self::build(degree, generators, Some(bound))
    }

    fn build(degree: usize, generators: Vec<Permutation>, order_bound: Option<u128>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Invalid("degree must be positive".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let generators = if generators.is_empty() {
            vec![Permutation::identity(degree)]
        } else {
            generators
        };
        let inverses = generators.iter().map(|g| g.inverse()).collect();
        Ok(PermGroup {
            inner: Arc::new(Inner {
                degree,
                generators,
                inverses,
                order_bound,
                chain: OnceLock::new(),
                stabilizers: Mutex::new(HashMap::new()),
            }),
        })
    }

    /// Group whose chain is already known.
    pub fn from_chain(chain: StabilizerChain) -> Self {
        let degree = chain.degree();
        let generators: Vec<Permutation> = if chain.strong_generators().is_empty() {
            vec![Permutation::identity(degree)]
        } else {
            chain.strong_generators().to_vec()
        };
        let inverses = generators.iter().map(|g| g.inverse()).collect();
        let order = chain.order();
        let cell = OnceLock::new();
        let _ = cell.set(chain);
        PermGroup {
            inner: Arc::new(Inner {
                degree,
                generators,
                inverses,
                order_bound: Some(order),
                chain: cell,
                stabilizers: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            let cyc: Vec<u32> = (0..degree as u32).collect();
            gens.push(Permutation::from_cycles(degree, &[cyc]).unwrap());
            gens.push(Permutation::from_cycles(degree, &[vec![0, 1]]).unwrap());
        }
        let bound = (1..=degree as u128).product();
        Self::with_order_bound(degree, gens, bound).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.inner.generators
    }

    pub fn inverses(&self) -> &[Permutation] {
        &self.inner.inverses
    }

    pub fn order_bound(&self) -> Option<u128> {
        self.inner.order_bound
    }

    pub fn chain(&self) -> &StabilizerChain {
        self.inner.chain.get_or_init(|| self.build_chain(&[]))
    }

    fn build_chain(&self, prefix: &[u32]) -> StabilizerChain {
        let gens = &self.inner.generators;
        if let Some(bound) = self.inner.order_bound {
            if let Some(c) = sifting_chain(self.degree(), gens, prefix, bound) {
                return c;
            }
        }
        schreier_sims(self.degree(), gens, prefix)
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.generators.iter().all(|g| g.is_identity())
    }

    /// Orbit of a point with a Schreier tree over the stored generators.
    pub fn point_orbit(&self, p: u32) -> SchreierTree {
        SchreierTree::build(p, self.degree(), &self.inner.generators)
    }

    pub fn orbit(&self, seed: &OrbitSeed) -> Result<Orbit> {
        Orbit::compute(self, seed)
    }

    /// Orbits of `⟨gens⟩` on all points, each sorted, listed by smallest member.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        orbits_of(self.degree(), &self.inner.generators)
    }

    pub fn is_transitive(&self) -> bool {
        self.point_orbit(0).len() == self.degree()
    }

    /// Pointwise stabilizer of `pts`, computed from a chain whose base starts with `pts`.
    pub fn stabilizer(&self, pts: &[u32]) -> Result<PermGroup> {
        for &p in pts {
            if p as usize >= self.degree() {
                return Err(Error::PointOutOfRange {
                    point: p as usize,
                    degree: self.degree(),
                });
            }
        }
        let mut key: Vec<u32> = Vec::new();
        for &p in pts {
            if !key.contains(&p) {
                key.push(p);
            }
        }
        if key.is_empty() {
            return Ok(self.clone());
        }
        if let Some(g) = self.inner.stabilizers.lock().unwrap().get(&key) {
            return Ok(g.clone());
        }
        let chain = self.chain();
        let result = if chain.base().starts_with(&key) {
            PermGroup::from_chain(chain.tail(key.len()))
        } else {
            let order = chain.order();
            let strong = chain.strong_generators().to_vec();
            let rebased = sifting_chain(self.degree(), &strong, &key, order)
                .unwrap_or_else(|| schreier_sims(self.degree(), &strong, &key));
            debug_assert_eq!(rebased.order(), order);
            PermGroup::from_chain(rebased.tail(key.len()))
        };
        self.inner
            .stabilizers
            .lock()
            .unwrap()
            .insert(key, result.clone());
        Ok(result)
    }

    /// Minimal-block test; errors on intransitive groups.
    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.nontrivial_block()?.is_none())
    }

    /// A nontrivial block containing point 0, if one exists.
    pub fn nontrivial_block(&self) -> Result<Option<Vec<u32>>> {
        if !self.is_transitive() {
            return Err(Error::NotTransitive);
        }
        let n = self.degree();
        if n <= 2 {
            return Ok(None);
        }
        // the minimal block through {0, j} depends only on the G_0-orbit of j
        let stab = self.stabilizer(&[0])?;
        for orbit in stab.orbits() {
            let j = orbit[0];
            if j == 0 {
                continue;
            }
            let block = minimal_block(n, self.generators(), 0, j);
            if block.len() < n {
                return Ok(Some(block));
            }
        }
        Ok(None)
    }

    /// Does `⟨a ∪ b⟩` have the full order of this group?
    pub fn generates_whole(&self, a: &[Permutation], b: &[Permutation]) -> Result<bool> {
        let gens: Vec<Permutation> = a
            .iter()
            .chain(b.iter())
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let order = self.order();
        let sub = PermGroup::with_order_bound(self.degree(), gens, order)?;
        Ok(sub.order() == order)
    }
}

pub(crate) fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start as u32];
        let mut q = 0;
        while q < orbit.len() {
            let x = orbit[q];
            for g in gens {
                let y = g.image(x) as usize;
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y as u32);
                }
            }
            q += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Smallest block of imprimitivity containing `a` and `b`.
fn minimal_block(n: usize, gens: &[Permutation], a: u32, b: u32) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let p = parent[x as usize];
            parent[x as usize] = parent[p as usize];
            x = p;
        }
        x
    }
    let mut queue = vec![(a, b)];
    let ra = find(&mut parent, a);
    let rb = find(&mut parent, b);
    parent[rb as usize] = ra;
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            let (gx, gy) = (g.image(x), g.image(y));
            let rx = find(&mut parent, gx);
            let ry = find(&mut parent, gy);
            if rx != ry {
                parent[ry as usize] = rx;
                queue.push((gx, gy));
            }
        }
    }
    let r = find(&mut parent, a);
    (0..n as u32).filter(|&x| find(&mut parent, x) == r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(text: &str, n: usize) -> Permutation {
        Permutation::parse(text, n).unwrap()
    }

    #[test]
    fn s5_and_point_stabilizer() {
        let g = PermGroup::new(5, vec![cyc("(1,2,3,4,5)", 5), cyc("(1,2)", 5)]).unwrap();
        assert_eq!(g.order(), 120);
        let s = g.stabilizer(&[0]).unwrap();
        assert_eq!(s.order(), 24);
        assert!(s.generators().iter().all(|h| h.image(0) == 0));
        let s2 = g.stabilizer(&[3, 1]).unwrap();
        assert_eq!(s2.order(), 6);
        assert!(s2.generators().iter().all(|h| h.image(3) == 3 && h.image(1) == 1));
    }

    #[test]
    fn primitivity() {
        let s5 = PermGroup::new(5, vec![cyc("(1,2,3,4,5)", 5), cyc("(1,2)", 5)]).unwrap();
        assert!(s5.is_primitive().unwrap());
        let c4 = PermGroup::new(4, vec![cyc("(1,2,3,4)", 4)]).unwrap();
        assert_eq!(c4.nontrivial_block().unwrap(), Some(vec![0, 2]));
        let intrans = PermGroup::new(4, vec![cyc("(1,2)", 4)]).unwrap();
        assert!(intrans.is_primitive().is_err());
    }

    #[test]
    fn joint_generation() {
        let s5 = PermGroup::new(5, vec![cyc("(1,2,3,4,5)", 5), cyc("(1,2)", 5)]).unwrap();
        let a = s5.stabilizer(&[0]).unwrap();
        let b = s5.stabilizer(&[1]).unwrap();
        assert!(s5.generates_whole(a.generators(), b.generators()).unwrap());
        let c4 = PermGroup::new(4, vec![cyc("(1,2,3,4)", 4)]).unwrap();
        let t = c4.stabilizer(&[0]).unwrap();
        assert_eq!(t.order(), 1);
        assert!(!c4.generates_whole(t.generators(), t.generators()).unwrap());
    }
}
