//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's orbit, chain or enumeration code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use geoforge::geometry::{Elem, Pregeometry, TypeId};

/// Every permutation of `0..n` as image vectors, by Heap's algorithm.
pub fn all_permutations(n: usize) -> Vec<Vec<u32>> {
    let mut a: Vec<u32> = (0..n as u32).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Cycle lengths (fixed points included), sorted descending.
pub fn cycle_type(p: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

pub fn is_even(p: &[u32]) -> bool {
    cycle_type(p).iter().map(|&l| l - 1).sum::<usize>() % 2 == 0
}

/// Number of elements of `A_m` that are products of `k` disjoint transpositions.
pub fn alt_class_size(m: usize, k: usize) -> usize {
    let mut shape = vec![2; k];
    shape.extend(std::iter::repeat(1).take(m - 2 * k));
    all_permutations(m)
        .iter()
        .filter(|p| is_even(p) && cycle_type(p) == shape)
        .count()
}

/// Size of the group generated by image vectors, by closing under products.
pub fn closure_size(gens: &[Vec<u32>], limit: usize) -> usize {
    let n = gens[0].len();
    let id: Vec<u32> = (0..n as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<u32> = p.iter().map(|&x| g[x as usize]).collect();
            if seen.insert(q.clone()) {
                assert!(seen.len() <= limit, "closure exceeds {limit}");
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

/// Orbit of a point pair under image-vector generators, by plain BFS.
pub fn pair_orbit(gens: &[Vec<u32>], start: (u32, u32)) -> BTreeSet<(u32, u32)> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((a, b)) = queue.pop_front() {
        for g in gens {
            let img = (g[a as usize], g[b as usize]);
            if seen.insert(img) {
                queue.push_back(img);
            }
        }
    }
    seen
}

/// Incidences between type positions `i < j` as index pairs.
pub fn edges_between(g: &Pregeometry, i: usize, j: usize) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    for p in 0..g.size(i) as u32 {
        for q in g.neighbors(Elem::new(i, p), j) {
            out.insert((p, q));
        }
    }
    out
}

/// Every incidence keyed by type ids, each edge listed with the smaller type id first.
pub fn edges_by_type_id(g: &Pregeometry) -> BTreeSet<((TypeId, u32), (TypeId, u32))> {
    let mut out = BTreeSet::new();
    for i in 0..g.rank() {
        for j in 0..g.rank() {
            if g.types()[i] >= g.types()[j] {
                continue;
            }
            for (p, q) in edges_between(g, i, j) {
                out.insert(((g.types()[i], p), (g.types()[j], q)));
            }
        }
    }
    out
}

/// Generators of the attached group as image vectors.
pub fn generator_images(g: &Pregeometry) -> Vec<Vec<u32>> {
    g.group()
        .unwrap()
        .generators()
        .iter()
        .map(|p| p.images().to_vec())
        .collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
