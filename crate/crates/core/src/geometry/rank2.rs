//! Rank-2 parameters and basic diagrams.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use super::{Elem, Pregeometry, TypeId};
use crate::error::{Error, Result};

/// `(n₁, n₂, s₁, s₂, d₁, d₂, g)` of a connected rank-2 pregeometry.
///
/// `s_i + 1` is the largest number of neighbours of a type-`i` element,
/// `d_i` the largest distance from a type-`i` element, `2g` the girth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DiagramEdgeParams {
    pub n1: u64,
    pub n2: u64,
    pub s1: u64,
    pub s2: u64,
    pub d1: u64,
    pub d2: u64,
    pub g: Option<u64>,
}

impl DiagramEdgeParams {
    /// Same parameters with the two sides exchanged.
    pub fn swapped(&self) -> Self {
        DiagramEdgeParams {
            n1: self.n2,
            n2: self.n1,
            s1: self.s2,
            s2: self.s1,
            d1: self.d2,
            d2: self.d1,
            g: self.g,
        }
    }

    pub fn tuple(&self) -> (u64, u64, u64, u64, u64, u64, Option<u64>) {
        (self.n1, self.n2, self.s1, self.s2, self.d1, self.d2, self.g)
    }
}

const UNSEEN: u32 = u32::MAX;

/// BFS from one vertex: (eccentricity, shortest closed walk through a non-tree edge, vertices reached).
fn bfs(g: &Pregeometry, root: Elem, offsets: &[usize], dist: &mut [u32], parent: &mut [u32]) -> (u32, Option<u32>, usize) {
    dist.fill(UNSEEN);
    let slot = |e: Elem| offsets[e.ty] + e.idx as usize;
    let rs = slot(root);
    dist[rs] = 0;
    parent[rs] = UNSEEN;
    let mut queue = VecDeque::from([root]);
    let mut ecc = 0;
    let mut cycle: Option<u32> = None;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        let su = slot(u);
        let du = dist[su];
        ecc = ecc.max(du);
        for j in 0..g.rank() {
            if j == u.ty {
                continue;
            }
            for &q in g.incidence().neighbors(u.ty, u.idx, j).iter() {
                let w = Elem::new(j, q);
                let sw = slot(w);
                if dist[sw] == UNSEEN {
                    dist[sw] = du + 1;
                    parent[sw] = su as u32;
                    reached += 1;
                    queue.push_back(w);
                } else if parent[su] != sw as u32 {
                    let c = du + dist[sw] + 1;
                    cycle = Some(cycle.map_or(c, |x| x.min(c)));
                }
            }
        }
    }
    (ecc, cycle, reached)
}

/// Degrees of all elements of one type, sorted.
pub fn degree_sequence(g: &Pregeometry, ty: usize) -> Vec<u64> {
    let other = 1 - ty;
    let mut d: Vec<u64> = (0..g.size(ty) as u32)
        .map(|p| g.incidence().neighbors(ty, p, other).len() as u64)
        .collect();
    d.sort_unstable();
    d
}

/// Parameters of a connected rank-2 pregeometry.
///
/// With a group attached that is transitive on each type, one BFS per type
/// suffices: eccentricities are invariants, and every cycle passes through
/// an image of the base element of the first type.
pub fn rank2_params(g: &Pregeometry) -> Result<DiagramEdgeParams> {
    if g.rank() != 2 {
        return Err(Error::Hypothesis(format!("rank-2 parameters of a rank-{} pregeometry", g.rank())));
    }
    let total = g.element_count();
    if g.size(0) == 0 || g.size(1) == 0 {
        return Err(Error::Hypothesis("rank-2 pregeometry with an empty type".into()));
    }
    let offsets = g.offsets();
    let mut dist = vec![UNSEEN; total];
    let mut parent = vec![UNSEEN; total];

    let transitive_base = match (g.base_chamber(), g.group()) {
        (Some(base), Some(group)) => {
            let t = (0..2).all(|t| g.orbit_in_type(group, base[t]).len() == g.size(t));
            t.then_some(base)
        }
        _ => None,
    };
    let sources: Vec<Vec<Elem>> = match &transitive_base {
        Some(base) => vec![vec![base[0]], vec![base[1]]],
        None => (0..2)
            .map(|t| (0..g.size(t) as u32).map(|i| Elem::new(t, i)).collect())
            .collect(),
    };
    let mut ecc = [0u64; 2];
    let mut cycle: Option<u32> = None;
    for (t, list) in sources.iter().enumerate() {
        for &s in list {
            let (e, c, reached) = bfs(g, s, &offsets, &mut dist, &mut parent);
            if reached != total {
                return Err(Error::Hypothesis(format!(
                    "rank-2 pregeometry is disconnected: {} reaches {reached} of {total} elements",
                    g.elem_name(s)
                )));
            }
            ecc[t] = ecc[t].max(e as u64);
            if let Some(c) = c {
                cycle = Some(cycle.map_or(c, |x| x.min(c)));
            }
        }
    }
    let s = |t: usize| -> u64 {
        let m = match &transitive_base {
            Some(base) => g.incidence().neighbors(t, base[t].idx, 1 - t).len() as u64,
            None => degree_sequence(g, t).last().copied().unwrap_or(0),
        };
        m.saturating_sub(1)
    };
    Ok(DiagramEdgeParams {
        n1: g.size(0) as u64,
        n2: g.size(1) as u64,
        s1: s(0),
        s2: s(1),
        d1: ecc[0],
        d2: ecc[1],
        g: cycle.map(|c| c as u64 / 2),
    })
}

impl Pregeometry {
    /// Rank 2 with every cross pair incident.
    pub fn is_complete_bipartite(&self) -> bool {
        self.rank() == 2 && self.edge_count(0, 1) == self.size(0) as u64 * self.size(1) as u64
    }
}

/// One type pair of a basic diagram, measured on the residue of the base chamber's co-flag.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramEntry {
    pub types: (TypeId, TypeId),
    pub residue_sizes: (u64, u64),
    pub complete_bipartite: bool,
    /// `None` when the residue is disconnected.
    pub params: Option<DiagramEdgeParams>,
}

impl DiagramEntry {
    pub fn is_edge(&self) -> bool {
        !self.complete_bipartite
    }
}

/// Residue `Γ_{K∖{x_i,x_j}}` for the base chamber `K`.
pub fn co_rank2_residue(g: &Pregeometry, i: usize, j: usize) -> Result<Pregeometry> {
    let base = g
        .base_chamber()
        .ok_or_else(|| Error::Hypothesis("basic diagram needs a base chamber".into()))?;
    let flag: Vec<Elem> = base.into_iter().filter(|e| e.ty != i && e.ty != j).collect();
    g.residue(&flag)
}

/// Every unordered type pair with its residue parameters.
pub fn basic_diagram(g: &Pregeometry) -> Result<Vec<DiagramEntry>> {
    let k = g.rank();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            out.push(diagram_entry(g, i, j)?);
        }
    }
    Ok(out)
}

pub(crate) fn diagram_entry(g: &Pregeometry, i: usize, j: usize) -> Result<DiagramEntry> {
    // at rank 2 the residue is the geometry itself, which keeps its group
    let r = if g.rank() == 2 { g.clone() } else { co_rank2_residue(g, i, j)? };
    Ok(DiagramEntry {
        types: (g.types()[i], g.types()[j]),
        residue_sizes: (r.size(0) as u64, r.size(1) as u64),
        complete_bipartite: r.is_complete_bipartite(),
        params: rank2_params(&r).ok(),
    })
}

/// DOT text: one node per type, one edge per non-complete-bipartite pair
/// labelled `d₁ g d₂`, with `s₁`, `s₂` at the ends.
pub fn diagram_dot(types: &[TypeId], sizes: &[usize], entries: &[DiagramEntry]) -> String {
    let mut out = String::from("graph diagram {\n  node [shape=circle];\n");
    for (t, n) in types.iter().zip(sizes) {
        let _ = writeln!(out, "  t{t} [label=\"{t}\\nn={n}\"];");
    }
    for e in entries.iter().filter(|e| e.is_edge()) {
        let (a, b) = e.types;
        match &e.params {
            Some(p) => {
                let g = p.g.map_or("-".to_string(), |g| g.to_string());
                let _ = writeln!(
                    out,
                    "  t{a} -- t{b} [label=\"{} {} {}\", taillabel=\"{}\", headlabel=\"{}\"];",
                    p.d1, g, p.d2, p.s1, p.s2
                );
            }
            None => {
                let _ = writeln!(out, "  t{a} -- t{b} [style=dashed, label=\"disconnected\"];");
            }
        }
    }
    out.push_str("}\n");
    out
}
