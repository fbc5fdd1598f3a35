//! Tuple and diagonal-coset statements behind the simple-diagonal seeds,
//! checked exhaustively at small size and by seeded sampling above it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{timed, CheckResult, SdOptions};
use crate::actions::{SdContext, SdCoset};
use crate::error::Result;
use crate::perm::Permutation;

/// Result of scanning all of `Δⁿ` for the interval statement: whenever
/// `f(ℓ) = non_α[1,ℓ](x) + non_β[ℓ+1,n](x) + ℓ` takes the same value `a`
/// at `ℓ = i` and `ℓ = j` with `i < j < a`, entries `i+1..=j` of `x` equal `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifficultOrbitsScan {
    pub n: usize,
    pub delta: usize,
    pub tuples: u64,
    /// `(x, α, β, i, j, a)` satisfying the hypothesis.
    pub hits: u64,
    pub violations: u64,
    /// `(x, α, β, i, j, a)`, 1-based coordinates.
    pub first_violation: Option<(Vec<u32>, u32, u32, usize, usize, usize)>,
}

/// Exhaustive scan over every `x ∈ Δⁿ`, every `α, β ∈ Δ` and every `1 ≤ i < j ≤ n`.
pub fn difficult_orbits_scan(delta: usize, n: usize) -> DifficultOrbitsScan {
    let total = (delta as u64).pow(n as u32);
    let (hits, violations, first) = (0..total)
        .into_par_iter()
        .map(|code| {
            let x = crate::actions::tuple_of(code as u32, delta, n);
            let mut hits = 0u64;
            let mut violations = 0u64;
            let mut first = None;
            let mut f = vec![0usize; n + 1];
            for alpha in 0..delta as u32 {
                for beta in 0..delta as u32 {
                    // f[ℓ] for ℓ = 1..=n
                    let mut prefix = 0;
                    let mut suffix: usize = x.iter().filter(|&&v| v != beta).count();
                    for l in 1..=n {
                        prefix += usize::from(x[l - 1] != alpha);
                        suffix -= usize::from(x[l - 1] != beta);
                        f[l] = prefix + suffix + l;
                    }
                    for i in 1..n {
                        for j in i + 1..=n {
                            let a = f[i];
                            if f[j] != a || a <= j {
                                continue;
                            }
                            hits += 1;
                            if x[i..j].iter().any(|&v| v != alpha) {
                                violations += 1;
                                if first.is_none() {
                                    first = Some((x.clone(), alpha, beta, i, j, a));
                                }
                            }
                        }
                    }
                }
            }
            (hits, violations, first)
        })
        .reduce(
            || (0, 0, None),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2.or(b.2)),
        );
    DifficultOrbitsScan {
        n,
        delta,
        tuples: total,
        hits,
        violations,
        first_violation: first,
    }
}

fn stream_seed(seed: u64, n: usize, s: usize, a: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((n as u64) << 32 | (s as u64) << 16 | a as u64)
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<u32> = (0..n as u32).collect();
    images.shuffle(rng);
    Permutation::from_images_unchecked(images)
}

fn tuple_json(ctx: &SdContext, tuple: &[u32]) -> Value {
    Value::Array(tuple.iter().map(|&t| Value::String(ctx.element(t).to_string())).collect())
}

/// The representative `Rep` of `x_a^{h_s⁻¹ t̄ σ h_s}`: support at most `2a ≤ (n−1)/2`,
/// the exact count `non_α[1,2s] + non_1[2s+1,n] = 2a−2s`, membership in the
/// coset, and being its only small-support representative.
fn rep_stream(ctx: &SdContext, s: usize, a: usize, samples: usize, seed: u64) -> Result<(u64, Option<Value>)> {
    let n = ctx.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut first = None;
    for _ in 0..samples {
        let t = rng.random_range(0..ctx.order() as u32);
        let sigma = random_perm(&mut rng, n);
        let r = ctx.rep(s, t, &sigma, a)?;
        let coset = ctx.image_coset(s, t, &sigma, a)?;
        let support = ctx.support(&r);
        let count = ctx.non_count(&r, ctx.alpha(), 1, 2 * s) + ctx.non_count(&r, ctx.identity(), 2 * s + 1, n);
        let unique = ctx.small_support_count(&coset);
        let problem = if support > 2 * a || 4 * a > n - 1 {
            Some("support exceeds 2a")
        } else if count != 2 * a - 2 * s {
            Some("count identity fails")
        } else if ctx.canonicalize(&r)? != coset {
            Some("representative outside its coset")
        } else if unique != 1 {
            Some("small-support representative not unique")
        } else {
            None
        };
        if let Some(p) = problem {
            violations += 1;
            if first.is_none() {
                first = Some(json!({
                    "problem": p,
                    "n": n, "s": s, "a": a,
                    "t": ctx.element(t).to_string(),
                    "sigma": sigma.images().iter().map(|&x| x + 1).collect::<Vec<_>>(),
                    "rep": tuple_json(ctx, &r),
                    "support": support,
                    "count": count,
                    "small_support_representatives": unique,
                }));
            }
        }
    }
    Ok((violations, first))
}

/// Small-support cosets have exactly one representative of support `< n/2`,
/// and arbitrary cosets at most one.
fn unique_stream(ctx: &SdContext, samples: usize, seed: u64) -> (u64, Option<Value>) {
    let n = ctx.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut first = None;
    let mut record = |v: Value, violations: &mut u64| {
        *violations += 1;
        if first.is_none() {
            first = Some(v);
        }
    };
    let id = ctx.identity();
    let trivial = SdCoset::clone(&ctx.canonicalize(&vec![id; n]).expect("length n"));
    if ctx.small_support_count(&trivial) != 1 || ctx.small_support_rep(&trivial) != Some(vec![id; n]) {
        record(json!({ "problem": "identity coset", "n": n }), &mut violations);
    }
    for k in 0..samples {
        let random_tuple = |rng: &mut ChaCha8Rng, support: usize| -> Vec<u32> {
            let mut v = vec![id; n];
            let mut pos: Vec<usize> = (0..n).collect();
            pos.shuffle(rng);
            for &p in &pos[..support] {
                v[p] = loop {
                    let t = rng.random_range(0..ctx.order() as u32);
                    if t != id {
                        break t;
                    }
                };
            }
            v
        };
        if k % 2 == 0 {
            // a small-support tuple hidden by a diagonal translate
            let support = rng.random_range(0..n.div_ceil(2));
            let v = random_tuple(&mut rng, support);
            let t = rng.random_range(0..ctx.order() as u32);
            let coset = ctx.canonicalize(&ctx.left_translate(t, &v)).expect("length n");
            let count = ctx.small_support_count(&coset);
            if count != 1 || ctx.small_support_rep(&coset).as_deref() != Some(&v[..]) {
                record(
                    json!({ "problem": "planted representative not recovered", "n": n, "tuple": tuple_json(ctx, &v), "representatives": count }),
                    &mut violations,
                );
            }
        } else {
            let raw: Vec<u32> = (0..n).map(|_| rng.random_range(0..ctx.order() as u32)).collect();
            let coset = ctx.canonicalize(&raw).expect("length n");
            let count = ctx.small_support_count(&coset);
            if count > 1 {
                record(
                    json!({ "problem": "two small-support representatives", "n": n, "coset": tuple_json(ctx, coset.entries()), "representatives": count }),
                    &mut violations,
                );
            }
        }
    }
    (violations, first)
}

pub(crate) fn battery(opts: &SdOptions) -> Result<Vec<CheckResult>> {
    let scan = timed(|| {
        let scans: Vec<DifficultOrbitsScan> = (2..=opts.exhaustive_max_n).map(|n| difficult_orbits_scan(3, n)).collect();
        let violations: u64 = scans.iter().map(|s| s.violations).sum();
        let detail = json!({
            "delta": 3,
            "lengths": scans.iter().map(|s| json!({ "n": s.n, "tuples": s.tuples, "hits": s.hits, "violations": s.violations })).collect::<Vec<_>>(),
        });
        Ok(CheckResult::verdict("sd-battery.difficult-orbits", violations == 0, detail, || {
            let (x, alpha, beta, i, j, a) = scans.iter().find_map(|s| s.first_violation.clone()).unwrap();
            json!({ "x": x, "alpha": alpha, "beta": beta, "i": i, "j": j, "a": a })
        }))
    })?;

    let contexts = opts
        .ns
        .iter()
        .map(|&n| SdContext::new(opts.kind, opts.m, n))
        .collect::<Result<Vec<_>>>()?;

    let rep = timed(|| {
        let mut jobs = Vec::new();
        for ctx in &contexts {
            let top = (ctx.n() - 1) / 4;
            for s in 1..=top {
                for a in s + 1..=top {
                    jobs.push((ctx, s, a, stream_seed(opts.seed, ctx.n(), s, a)));
                }
            }
        }
        let results = jobs
            .par_iter()
            .map(|&(ctx, s, a, seed)| rep_stream(ctx, s, a, opts.samples, seed))
            .collect::<Result<Vec<_>>>()?;
        let streams: Vec<Value> = jobs
            .iter()
            .zip(&results)
            .map(|(&(ctx, s, a, seed), r)| json!({ "n": ctx.n(), "s": s, "a": a, "seed": seed, "samples": opts.samples, "violations": r.0 }))
            .collect();
        let total: u64 = results.iter().map(|r| r.0).sum();
        let detail = json!({ "m": opts.m, "kind": opts.kind, "streams": streams });
        Ok(CheckResult::verdict("sd-battery.rep", total == 0, detail, || {
            results.iter().find_map(|r| r.1.clone()).unwrap()
        }))
    })?;

    let unique = timed(|| {
        let results: Vec<(u64, Option<Value>, u64)> = contexts
            .par_iter()
            .map(|ctx| {
                let seed = stream_seed(opts.seed, ctx.n(), 0, 0);
                let (v, w) = unique_stream(ctx, opts.samples, seed);
                (v, w, seed)
            })
            .collect();
        let streams: Vec<Value> = contexts
            .iter()
            .zip(&results)
            .map(|(ctx, r)| json!({ "n": ctx.n(), "seed": r.2, "samples": opts.samples, "violations": r.0 }))
            .collect();
        let total: u64 = results.iter().map(|r| r.0).sum();
        Ok(CheckResult::verdict("sd-battery.unique-rep", total == 0, json!({ "streams": streams }), || {
            results.iter().find_map(|r| r.1.clone()).unwrap()
        }))
    })?;
    Ok(vec![scan, rep, unique])
}
