//! Basic diagrams and their comparison with the predicted diagram of the
//! product-action family.

use serde::Serialize;
use serde_json::json;

use super::{timed, CheckResult, Verifier};
use crate::actions::{tuple_index, ActionDescriptor};
use crate::error::{Error, Result};
use crate::geometry::{
    basic_diagram, co_rank2_residue, degree_sequence, isomorphic, model_geometry, rank2_params, DiagramEdgeParams,
    ModelKind, Pregeometry, TypeId, ISO_LIMIT,
};

/// What a co-rank-2 residue of the base chamber should be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "expect", rename_all = "kebab-case")]
pub enum PaExpectation {
    /// Isomorphic to `model_geometry(kind, a, b, m, palette)`.
    Model { kind: ModelKind, a: usize, b: usize, m: usize, palette: usize },
    CompleteBipartite,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairPrediction {
    pub types: (TypeId, TypeId),
    pub expected: PaExpectation,
    pub residue_sizes: (usize, usize),
    pub measured: Option<DiagramEdgeParams>,
    pub model: Option<DiagramEdgeParams>,
    pub degrees_match: bool,
    /// Exact isomorphism with the model, when both sides are small enough.
    pub isomorphic: Option<bool>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PaPrediction {
    pub n: usize,
    pub b: usize,
    pub delta: usize,
    pub pairs: Vec<PairPrediction>,
}

impl PaPrediction {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|p| p.holds)
    }
}

/// `(n, δ)` when `g` is the product-action seed geometry: its action is a
/// wreath product on `Δⁿ` and the base chamber is `x_c = (α^{2c}, β^{n−2c})`.
fn pa_parameters(g: &Pregeometry) -> Option<(usize, usize)> {
    let att = g.attached()?;
    let ActionDescriptor::Wreath { n, .. } = att.action()? else {
        return None;
    };
    let n = *n;
    let size = g.size(0);
    let delta = (2..=size).find(|d| d.checked_pow(n as u32).is_some_and(|p| p >= size))?;
    if delta.pow(n as u32) != size {
        return None;
    }
    let seeds_match = att.base().iter().enumerate().all(|(c, &x)| {
        let coords: Vec<u32> = (0..n).map(|k| u32::from(k >= 2 * (c + 1))).collect();
        tuple_index(&coords, delta) == x
    });
    seeds_match.then_some((n, delta))
}

/// Expected residue for the 1-based type positions `u < v` of a rank-`b` instance.
fn expectation(u: usize, v: usize, b: usize, m: usize, palette: usize) -> PaExpectation {
    let model = |kind, a, bb, m, palette| PaExpectation::Model { kind, a, b: bb, m, palette };
    if (u, v) == (1, 2) {
        model(ModelKind::U, 4, 2, m, palette)
    } else if (u, v) == (b - 1, b) {
        model(ModelKind::U, 2, 4, m, palette)
    } else if (u, v) == (1, b) {
        model(ModelKind::UBar, 2, 2, m, palette)
    } else if v == u + 1 {
        model(ModelKind::U, 2, 4, 6, 1)
    } else {
        PaExpectation::CompleteBipartite
    }
}

/// Measures every co-rank-2 residue of the base chamber of a product-action
/// seed geometry and compares it with the predicted residue.
pub fn predict_pa(g: &Pregeometry) -> Result<PaPrediction> {
    let (n, delta) = pa_parameters(g)
        .ok_or_else(|| Error::Hypothesis("not a product-action seed geometry".into()))?;
    let b = g.rank();
    if b < 3 {
        return Err(Error::Hypothesis(format!(
            "diagram prediction needs rank b ≥ 3, got b = {b}: at b = 2 the first and last pairs coincide and the predicted label is ambiguous"
        )));
    }
    let m = n + 6 - 2 * b;
    let mut pairs = Vec::new();
    for i in 0..b {
        for j in i + 1..b {
            let expected = expectation(i + 1, j + 1, b, m, delta - 1);
            let r = co_rank2_residue(g, i, j)?;
            let measured = rank2_params(&r).ok();
            let residue_sizes = (r.size(0), r.size(1));
            let p = match expected {
                PaExpectation::CompleteBipartite => PairPrediction {
                    types: (g.types()[i], g.types()[j]),
                    expected,
                    residue_sizes,
                    measured,
                    model: None,
                    degrees_match: true,
                    isomorphic: None,
                    holds: r.is_complete_bipartite(),
                },
                PaExpectation::Model { kind, a, b: bb, m, palette } => {
                    let model = model_geometry(kind, a, bb, m, palette)?;
                    let model_params = rank2_params(&model).ok();
                    let degrees_match = (0..2).all(|t| degree_sequence(&r, t) == degree_sequence(&model, t));
                    let isomorphic = (r.element_count() <= ISO_LIMIT && model.element_count() <= ISO_LIMIT)
                        .then(|| isomorphic(&r, &model).map(|m| m.is_some()))
                        .transpose()?;
                    PairPrediction {
                        types: (g.types()[i], g.types()[j]),
                        expected,
                        residue_sizes,
                        measured,
                        model: model_params,
                        degrees_match,
                        isomorphic,
                        holds: measured.is_some()
                            && measured == model_params
                            && degrees_match
                            && isomorphic != Some(false),
                    }
                }
            };
            pairs.push(p);
        }
    }
    Ok(PaPrediction { n, b, delta, pairs })
}

impl Verifier<'_> {
    pub(crate) fn diagram(&self) -> Result<Vec<CheckResult>> {
        let g = self.geom();
        let entries = timed(|| Ok(CheckResult::pass("diagram", json!({ "entries": basic_diagram(g)? }))))?;
        let prediction = timed(|| {
            let name = "diagram.pa-prediction";
            match predict_pa(g) {
                Err(Error::Hypothesis(reason)) => Ok(CheckResult::skipped(name, reason)),
                Err(e) => Err(e),
                Ok(p) => {
                    let bad = p.pairs.iter().find(|q| !q.holds).cloned();
                    Ok(CheckResult::verdict(name, p.holds(), serde_json::to_value(&p)?, || {
                        serde_json::to_value(bad.unwrap()).expect("predictions serialize")
                    }))
                }
            }
        })?;
        Ok(vec![entries, prediction])
    }
}
