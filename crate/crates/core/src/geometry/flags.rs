//! Flag and chamber enumeration, the geometry axiom and thickness.

use super::{Elem, Pregeometry};
use crate::error::{Error, Result};

/// Counts visited partial flags and refuses to exceed the budget.
struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self, what: &str) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::Resource {
                what: what.into(),
                requested: self.used as u128,
                limit: self.limit as u128,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberStats {
    pub chambers: u64,
    pub partial_flags: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometryVerdict {
    Geometry { flags: u64 },
    /// A maximal flag that is not a chamber.
    Unextendable(Vec<Elem>),
}

impl GeometryVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, GeometryVerdict::Geometry { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThickVerdict {
    pub thick: bool,
    /// Least number of chambers through a co-rank-1 flag.
    pub min_chambers: Option<u64>,
    /// A non-maximal flag in fewer than three chambers.
    pub witness: Option<Vec<Elem>>,
}

impl Pregeometry {
    /// Calls `f` on every chamber extending `flag`, as one element index per type.
    fn extend_chambers(
        &self,
        flag: &[Elem],
        budget: &mut Budget,
        f: &mut dyn FnMut(&[u32]),
    ) -> Result<u64> {
        let k = self.rank();
        let mut fixed: Vec<Option<u32>> = vec![None; k];
        for e in flag {
            fixed[e.ty] = Some(e.idx);
        }
        let mut current: Vec<Elem> = flag.to_vec();
        let mut chamber = vec![0u32; k];
        for e in flag {
            chamber[e.ty] = e.idx;
        }
        let free: Vec<usize> = (0..k).filter(|&t| fixed[t].is_none()).collect();
        let mut count = 0u64;
        self.dfs_chambers(&free, 0, &mut current, &mut chamber, budget, f, &mut count)?;
        Ok(count)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_chambers(
        &self,
        free: &[usize],
        at: usize,
        current: &mut Vec<Elem>,
        chamber: &mut Vec<u32>,
        budget: &mut Budget,
        f: &mut dyn FnMut(&[u32]),
        count: &mut u64,
    ) -> Result<()> {
        budget.tick("partial flags")?;
        if at == free.len() {
            *count += 1;
            f(chamber);
            return Ok(());
        }
        let t = free[at];
        for c in self.common_neighbors(current, t) {
            chamber[t] = c;
            current.push(Elem::new(t, c));
            self.dfs_chambers(free, at + 1, current, chamber, budget, f, count)?;
            current.pop();
        }
        Ok(())
    }

    /// Visits every chamber by depth-first extension in type order.
    pub fn for_each_chamber(&self, budget: u64, mut f: impl FnMut(&[u32])) -> Result<ChamberStats> {
        let mut b = Budget { used: 0, limit: budget };
        let chambers = self.extend_chambers(&[], &mut b, &mut f)?;
        Ok(ChamberStats {
            chambers,
            partial_flags: b.used,
        })
    }

    pub fn chambers(&self, budget: u64) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        self.for_each_chamber(budget, |c| out.push(c.to_vec()))?;
        Ok(out)
    }

    pub fn chamber_count(&self, budget: u64) -> Result<u64> {
        Ok(self.for_each_chamber(budget, |_| {})?.chambers)
    }

    /// Number of chambers containing `flag`.
    pub fn chambers_through(&self, flag: &[Elem], budget: u64) -> Result<u64> {
        if !self.is_flag(flag) {
            return Err(Error::NotAFlag(self.flag_name(flag)));
        }
        let mut b = Budget { used: 0, limit: budget };
        self.extend_chambers(flag, &mut b, &mut |_| {})
    }

    /// Checks every flag extends to a chamber by enumerating all flags.
    pub fn is_geometry_exhaustive(&self, budget: u64) -> Result<GeometryVerdict> {
        let mut b = Budget { used: 0, limit: budget };
        let mut current = Vec::new();
        match self.dfs_flags(0, &mut current, &mut b)? {
            Some(w) => Ok(GeometryVerdict::Unextendable(w)),
            None => Ok(GeometryVerdict::Geometry { flags: b.used }),
        }
    }

    fn dfs_flags(&self, next: usize, current: &mut Vec<Elem>, budget: &mut Budget) -> Result<Option<Vec<Elem>>> {
        budget.tick("flags")?;
        let k = self.rank();
        if current.len() < k {
            let maximal = (0..k)
                .filter(|&u| current.iter().all(|e| e.ty != u))
                .all(|u| self.common_neighbors(current, u).is_empty());
            if maximal {
                return Ok(Some(current.clone()));
            }
        }
        for t in next..k {
            for c in self.common_neighbors(current, t) {
                current.push(Elem::new(t, c));
                let found = self.dfs_flags(t + 1, current, budget)?;
                current.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        Ok(None)
    }

    /// Exhaustive thickness: in a geometry the chamber count of a non-maximal
    /// flag is at least that of any co-rank-1 flag containing it, so co-rank-1
    /// flags of all chambers suffice.
    pub fn is_thick_exhaustive(&self, budget: u64) -> Result<ThickVerdict> {
        if let GeometryVerdict::Unextendable(w) = self.is_geometry_exhaustive(budget)? {
            return Ok(ThickVerdict {
                thick: false,
                min_chambers: Some(0),
                witness: Some(w),
            });
        }
        let mut min: Option<(u64, Vec<Elem>)> = None;
        let k = self.rank();
        self.for_each_chamber(budget, |c| {
            for u in 0..k {
                let flag: Vec<Elem> = (0..k).filter(|&t| t != u).map(|t| Elem::new(t, c[t])).collect();
                let n = self.common_neighbors(&flag, u).len() as u64;
                if min.as_ref().is_none_or(|(m, _)| n < *m) {
                    min = Some((n, flag));
                }
            }
        })?;
        Ok(match min {
            Some((n, flag)) => ThickVerdict {
                thick: n >= 3,
                min_chambers: Some(n),
                witness: (n < 3).then_some(flag),
            },
            // rank 0: the only flag is maximal
            None => ThickVerdict {
                thick: true,
                min_chambers: None,
                witness: None,
            },
        })
    }

    /// Chamber counts of the co-rank-1 flags `K ∖ {x_u}` of the base chamber, by type.
    pub fn base_corank1_counts(&self) -> Result<Vec<(usize, u64)>> {
        let base = self
            .base_chamber()
            .ok_or_else(|| Error::Hypothesis("no base chamber".into()))?;
        Ok((0..self.rank())
            .map(|u| {
                let flag: Vec<Elem> = base.iter().copied().filter(|e| e.ty != u).collect();
                (u, self.common_neighbors(&flag, u).len() as u64)
            })
            .collect())
    }
}

/// One condition of the recursive flag-transitivity criterion: the
/// stabilizer of `q` must be transitive on the elements of type `level`
/// incident to all of `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursiveCondition {
    pub level: usize,
    pub q: Vec<Elem>,
    pub orbit: usize,
    pub target: usize,
    /// An element of the target set outside the orbit.
    pub missing: Option<u32>,
}

impl RecursiveCondition {
    pub fn holds(&self) -> bool {
        self.orbit == self.target
    }
}

impl Pregeometry {
    /// For every level `ℓ` and every `Q ⊆ {x_0,…,x_{ℓ−1}}` of the base chamber,
    /// compares the `G_(Q)`-orbit of `x_ℓ` with the common neighbourhood of `Q` in type `ℓ`.
    ///
    /// All conditions holding implies, by induction on flags, that every flag
    /// is an image of a subflag of the base chamber: the pregeometry is then a
    /// flag-transitive geometry.
    pub fn recursive_conditions(&self) -> Result<Vec<RecursiveCondition>> {
        let base = self
            .base_chamber()
            .ok_or_else(|| Error::Hypothesis("no group attached".into()))?;
        let mut out = Vec::new();
        for level in 0..self.rank() {
            for mask in 0u64..(1u64 << level) {
                let q: Vec<Elem> = (0..level).filter(|s| mask >> s & 1 == 1).map(|s| base[s]).collect();
                let target = self.common_neighbors(&q, level);
                let stab = self.stabilizer(&q)?;
                let orbit = self.orbit_in_type(&stab, base[level]);
                let missing = if orbit.len() == target.len() {
                    None
                } else {
                    target.iter().copied().find(|x| orbit.binary_search(x).is_err())
                };
                out.push(RecursiveCondition {
                    level,
                    q,
                    orbit: orbit.len(),
                    target: target.len(),
                    missing,
                });
            }
        }
        Ok(out)
    }

    /// Geometry test: the group reduction when an attached group satisfies the
    /// recursive criterion, exhaustive enumeration otherwise.
    pub fn is_geometry(&self, budget: u64) -> Result<bool> {
        if self.attached().is_some() && self.recursive_conditions()?.iter().all(|c| c.holds()) {
            return Ok(true);
        }
        Ok(self.is_geometry_exhaustive(budget)?.holds())
    }

    /// Thickness test with the same reduction as [`Pregeometry::is_geometry`].
    pub fn is_thick(&self, budget: u64) -> Result<bool> {
        if self.attached().is_some() && self.recursive_conditions()?.iter().all(|c| c.holds()) {
            return Ok(self.base_corank1_counts()?.iter().all(|&(_, n)| n >= 3));
        }
        Ok(self.is_thick_exhaustive(budget)?.thick)
    }
}
