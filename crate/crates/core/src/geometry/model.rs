//! The coloured subset geometries `U_{a,b}(m, δ)` and `Ū_{a,b}(m, δ)`.

use serde_json::Value;

use super::{Elem, Labels, Pregeometry};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ModelKind {
    /// Incidence by inclusion with agreeing colours.
    U,
    /// Incidence by disjointness.
    UBar,
}

/// A coloured subset: bitmask of points and one colour per point (unused entries 0).
struct Coloured {
    mask: u32,
    colours: Vec<u8>,
}

/// All `k`-subsets of `{0..m}` in lexicographic order, each with every colouring in lexicographic order.
fn coloured_subsets(m: usize, k: usize, delta: usize) -> Vec<Coloured> {
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mask = subset.iter().fold(0u32, |acc, &p| acc | 1 << p);
        let mut digits = vec![0usize; k];
        loop {
            let mut colours = vec![0u8; m];
            for (&p, &c) in subset.iter().zip(&digits) {
                colours[p] = c as u8;
            }
            out.push(Coloured { mask, colours });
            // next colouring, last point fastest
            let mut pos = k;
            while pos > 0 && digits[pos - 1] + 1 == delta {
                digits[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            digits[pos - 1] += 1;
        }
        // next subset
        let mut i = k;
        while i > 0 && subset[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        subset[i - 1] += 1;
        for j in i..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    out
}

fn label(c: &Coloured, m: usize, delta: usize) -> Value {
    let pts = (0..m).filter(|&p| c.mask >> p & 1 == 1);
    if delta == 1 {
        Value::Array(pts.map(|p| Value::from(p + 1)).collect())
    } else {
        Value::Array(
            pts.map(|p| Value::from(vec![p as u64 + 1, c.colours[p] as u64 + 1]))
                .collect(),
        )
    }
}

/// Rank-2 model geometry on types 1 (the `a`-sets) and 2 (the `b`-sets).
///
/// For `U` the smaller set must lie inside the larger with the same colours
/// on it; for `Ū` the underlying sets must be disjoint. `δ = 1` is uncoloured.
pub fn model_geometry(kind: ModelKind, a: usize, b: usize, m: usize, delta: usize) -> Result<Pregeometry> {
    if a == 0 || b == 0 || a > m || b > m {
        return Err(Error::Range(format!("model geometry needs 1 ≤ a, b ≤ m (a = {a}, b = {b}, m = {m})")));
    }
    if m > 31 {
        return Err(Error::Range(format!("model geometry supports m ≤ 31, got {m}")));
    }
    if delta == 0 || delta > 255 {
        return Err(Error::Range(format!("palette size must be in 1..=255, got {delta}")));
    }
    match kind {
        ModelKind::U if a == b => {
            return Err(Error::Range(format!("U_{{a,b}} needs a ≠ b, got a = b = {a}")));
        }
        ModelKind::UBar if a + b > m => {
            return Err(Error::Range(format!("Ū_{{a,b}} needs a + b ≤ m (a = {a}, b = {b}, m = {m})")));
        }
        _ => {}
    }
    let xs = coloured_subsets(m, a, delta);
    let ys = coloured_subsets(m, b, delta);
    let incident = |x: &Coloured, y: &Coloured| -> bool {
        match kind {
            ModelKind::UBar => x.mask & y.mask == 0,
            ModelKind::U => {
                let (s, l) = if a < b { (x, y) } else { (y, x) };
                s.mask & !l.mask == 0
                    && (0..m).all(|p| s.mask >> p & 1 == 0 || s.colours[p] == l.colours[p])
            }
        }
    };
    let mut edges = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            if incident(x, y) {
                edges.push((Elem::new(0, i as u32), Elem::new(1, j as u32)));
            }
        }
    }
    Pregeometry::from_edges(
        vec![1, 2],
        vec![xs.len(), ys.len()],
        vec![
            Labels::Values(xs.iter().map(|c| label(c, m, delta)).collect()),
            Labels::Values(ys.iter().map(|c| label(c, m, delta)).collect()),
        ],
        edges,
    )
}
