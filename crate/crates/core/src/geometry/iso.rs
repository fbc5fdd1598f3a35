//! Type-preserving isomorphism of small pregeometries by colour refinement
//! with individualization and backtracking.

use std::collections::{HashMap, HashSet};

use super::{Elem, Pregeometry};
use crate::error::{Error, Result};

/// Vertex limit per side for exact isomorphism.
pub const ISO_LIMIT: usize = 500;

struct Graph {
    adj: Vec<Vec<u32>>,
    colour: Vec<u32>,
}

fn as_graph(g: &Pregeometry) -> Graph {
    let offsets = g.offsets();
    let n = g.element_count();
    let mut adj = vec![Vec::new(); n];
    let mut colour = vec![0u32; n];
    for t in 0..g.rank() {
        for p in 0..g.size(t) as u32 {
            let v = offsets[t] + p as usize;
            colour[v] = t as u32;
            for j in 0..g.rank() {
                if j != t {
                    adj[v].extend(g.neighbors(Elem::new(t, p), j).iter().map(|&q| (offsets[j] + q as usize) as u32));
                }
            }
            adj[v].sort_unstable();
        }
    }
    Graph { adj, colour }
}

/// Refines a colouring of the disjoint union of two graphs to equitability.
fn refine(a: &Graph, b: &Graph, ca: &mut [u32], cb: &mut [u32]) {
    let mut classes = count_classes(ca, cb);
    loop {
        let mut sigs: Vec<(u32, Vec<u32>)> = Vec::with_capacity(ca.len() + cb.len());
        for (g, c) in [(a, &*ca), (b, &*cb)] {
            for v in 0..c.len() {
                let mut nb: Vec<u32> = g.adj[v].iter().map(|&w| c[w as usize]).collect();
                nb.sort_unstable();
                sigs.push((c[v], nb));
            }
        }
        let mut uniq: Vec<&(u32, Vec<u32>)> = sigs.iter().collect();
        uniq.sort();
        uniq.dedup();
        let index: HashMap<&(u32, Vec<u32>), u32> = uniq.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        let fresh: Vec<u32> = sigs.iter().map(|s| index[s]).collect();
        ca.copy_from_slice(&fresh[..ca.len()]);
        cb.copy_from_slice(&fresh[ca.len()..]);
        let now = count_classes(ca, cb);
        if now == classes {
            return;
        }
        classes = now;
    }
}

fn count_classes(ca: &[u32], cb: &[u32]) -> usize {
    ca.iter().chain(cb).collect::<HashSet<_>>().len()
}

fn balanced(ca: &[u32], cb: &[u32]) -> bool {
    let mut h: HashMap<u32, i64> = HashMap::new();
    for &c in ca {
        *h.entry(c).or_default() += 1;
    }
    for &c in cb {
        *h.entry(c).or_default() -= 1;
    }
    h.values().all(|&x| x == 0)
}

fn search(a: &Graph, b: &Graph, ca: Vec<u32>, cb: Vec<u32>) -> Option<Vec<u32>> {
    if !balanced(&ca, &cb) {
        return None;
    }
    // smallest non-singleton class
    let mut size: HashMap<u32, usize> = HashMap::new();
    for &c in &ca {
        *size.entry(c).or_default() += 1;
    }
    let target = size.iter().filter(|(_, &s)| s > 1).min_by_key(|(&c, &s)| (s, c)).map(|(&c, _)| c);
    let Some(cell) = target else {
        let mut pos = HashMap::new();
        for (w, &c) in cb.iter().enumerate() {
            pos.insert(c, w as u32);
        }
        let map: Vec<u32> = ca.iter().map(|c| pos[c]).collect();
        return is_isomorphism(a, b, &map).then_some(map);
    };
    let fresh = ca.iter().chain(&cb).max().copied().unwrap_or(0) + 1;
    let v = ca.iter().position(|&c| c == cell).unwrap();
    for w in (0..cb.len()).filter(|&w| cb[w] == cell) {
        let mut na = ca.clone();
        let mut nb = cb.clone();
        na[v] = fresh;
        nb[w] = fresh;
        refine(a, b, &mut na, &mut nb);
        if let Some(m) = search(a, b, na, nb) {
            return Some(m);
        }
    }
    None
}

fn is_isomorphism(a: &Graph, b: &Graph, map: &[u32]) -> bool {
    let edges_a: usize = a.adj.iter().map(|l| l.len()).sum();
    let edges_b: usize = b.adj.iter().map(|l| l.len()).sum();
    if edges_a != edges_b {
        return false;
    }
    (0..a.adj.len()).all(|v| {
        a.colour[v] == b.colour[map[v] as usize]
            && a.adj[v].iter().all(|&w| b.adj[map[v] as usize].binary_search(&map[w as usize]).is_ok())
    })
}

/// A type-preserving isomorphism `a → b` (types matched by position), as a
/// map from `a`'s elements to `b`'s, or `None` if none exists.
pub fn isomorphic(a: &Pregeometry, b: &Pregeometry) -> Result<Option<Vec<Elem>>> {
    for g in [a, b] {
        if g.element_count() > ISO_LIMIT {
            return Err(Error::Resource {
                what: "elements for exact isomorphism".into(),
                requested: g.element_count() as u128,
                limit: ISO_LIMIT as u128,
            });
        }
    }
    if a.sizes() != b.sizes() {
        return Ok(None);
    }
    let ga = as_graph(a);
    let gb = as_graph(b);
    let mut ca = ga.colour.clone();
    let mut cb = gb.colour.clone();
    refine(&ga, &gb, &mut ca, &mut cb);
    let offsets = b.offsets();
    Ok(search(&ga, &gb, ca, cb).map(|m| {
        m.into_iter()
            .map(|w| {
                let t = offsets.partition_point(|&o| o <= w as usize) - 1;
                Elem::new(t, w - offsets[t] as u32)
            })
            .collect()
    }))
}
