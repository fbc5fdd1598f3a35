//! Concrete transitive actions used by the constructions, with point codecs.

mod sd;
mod symmetric;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

pub use sd::{SdContext, SdCoset};
pub use symmetric::{disjoint_transpositions, lex_rank, lex_unrank, natural_generators, ElementIndex, SymKind};

/// JSON description of an action, enough to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionDescriptor {
    Wreath {
        family: WreathTag,
        component: Box<ActionDescriptor>,
        n: usize,
    },
    Basic(BasicAction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WreathTag {
    Wreath,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BasicAction {
    Sym { m: usize },
    Alt { m: usize },
    /// One-dimensional affine group over the prime field of order `p`.
    Agl { p: u32, d: usize },
    Hs { m: usize },
    /// The HS action enlarged by the inversion map.
    HsSd { m: usize },
}

impl ActionDescriptor {
    pub fn wreath(component: ActionDescriptor, n: usize) -> Self {
        ActionDescriptor::Wreath {
            family: WreathTag::Wreath,
            component: Box::new(component),
            n,
        }
    }

    pub fn instantiate(&self) -> Result<ActionSpace> {
        match self {
            ActionDescriptor::Wreath { component, n, .. } => {
                wreath_product_action(&component.instantiate()?, *n)
            }
            ActionDescriptor::Basic(BasicAction::Sym { m }) => natural_group(SymKind::Sym, *m),
            ActionDescriptor::Basic(BasicAction::Alt { m }) => natural_group(SymKind::Alt, *m),
            ActionDescriptor::Basic(BasicAction::Agl { p, d }) => affine_group(*p, *d),
            ActionDescriptor::Basic(BasicAction::Hs { m }) => Ok(hs_action(*m)?.0),
            ActionDescriptor::Basic(BasicAction::HsSd { m }) => hs_sd_action(*m),
        }
    }

    /// Parses the CLI component syntax `sym:3`, `alt:5`, `agl:5`.
    pub fn parse_component(text: &str) -> Result<Self> {
        let (kind, arg) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("component {text:?} is not of the form kind:m")))?;
        let v: usize = arg
            .parse()
            .map_err(|_| Error::Parse(format!("bad component parameter {arg:?}")))?;
        let basic = match kind {
            "sym" => BasicAction::Sym { m: v },
            "alt" => BasicAction::Alt { m: v },
            "agl" => BasicAction::Agl { p: v as u32, d: 1 },
            "hs" => BasicAction::Hs { m: v },
            _ => return Err(Error::Parse(format!("unknown component kind {kind:?}"))),
        };
        Ok(ActionDescriptor::Basic(basic))
    }
}

/// How points are named.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Codec {
    /// Points `1..=m`.
    Natural(usize),
    /// n-tuples over the component's points; coordinate 1 is most significant.
    TupleOverDelta { component: Box<Codec>, delta: usize, n: usize },
    /// Elements of S_m or A_m by lexicographic index.
    GroupElementOf { kind: SymKind, m: usize },
}

/// Structured name of a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    Point(u32),
    Tuple(Vec<Label>),
    Element(Permutation),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Point(p) => write!(f, "{p}"),
            Label::Element(e) => write!(f, "{e}"),
            Label::Tuple(t) => {
                f.write_str("[")?;
                for (k, x) in t.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl Label {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Label::Point(p) => serde_json::Value::from(*p),
            Label::Element(e) => serde_json::Value::from(e.to_string()),
            Label::Tuple(t) => serde_json::Value::Array(t.iter().map(|l| l.to_json()).collect()),
        }
    }
}

impl Codec {
    pub fn size(&self) -> usize {
        match self {
            Codec::Natural(m) => *m,
            Codec::TupleOverDelta { delta, n, .. } => delta.pow(*n as u32),
            Codec::GroupElementOf { kind, m } => ElementIndex::new(*kind, *m).map(|e| e.len()).unwrap_or(0),
        }
    }

    pub fn decode(&self, p: u32) -> Label {
        match self {
            Codec::Natural(_) => Label::Point(p + 1),
            Codec::TupleOverDelta { component, delta, n } => Label::Tuple(
                tuple_of(p, *delta, *n)
                    .into_iter()
                    .map(|x| component.decode(x))
                    .collect(),
            ),
            Codec::GroupElementOf { kind, m } => {
                Label::Element(ElementIndex::new(*kind, *m).unwrap().element(p as usize))
            }
        }
    }

    pub fn encode(&self, label: &Label) -> Result<u32> {
        let bad = || Error::Invalid(format!("label {label} does not belong to this action"));
        match (self, label) {
            (Codec::Natural(m), Label::Point(p)) if *p >= 1 && (*p as usize) <= *m => Ok(p - 1),
            (Codec::TupleOverDelta { component, delta, n }, Label::Tuple(t)) if t.len() == *n => {
                let coords = t
                    .iter()
                    .map(|l| component.encode(l))
                    .collect::<Result<Vec<_>>>()?;
                Ok(tuple_index(&coords, *delta))
            }
            (Codec::GroupElementOf { kind, m }, Label::Element(e)) => ElementIndex::new(*kind, *m)?
                .index(e)
                .map(|i| i as u32)
                .ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

/// Point index of a 0-based coordinate tuple.
pub fn tuple_index(coords: &[u32], delta: usize) -> u32 {
    coords
        .iter()
        .fold(0u64, |acc, &c| acc * delta as u64 + c as u64) as u32
}

/// 0-based coordinates of a point.
pub fn tuple_of(mut p: u32, delta: usize, n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for k in (0..n).rev() {
        out[k] = p % delta as u32;
        p /= delta as u32;
    }
    out
}

/// A faithful transitive action with a point codec.
#[derive(Clone, Debug)]
pub struct ActionSpace {
    group: PermGroup,
    codec: Codec,
    descriptor: ActionDescriptor,
    /// `(d, p)` when the group embeds in AGL(d, p).
    affine: Option<(usize, u32)>,
}

impl ActionSpace {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn descriptor(&self) -> &ActionDescriptor {
        &self.descriptor
    }

    pub fn affine(&self) -> Option<(usize, u32)> {
        self.affine
    }

    pub fn decode(&self, p: u32) -> Label {
        self.codec.decode(p)
    }

    pub fn encode(&self, label: &Label) -> Result<u32> {
        self.codec.encode(label)
    }
}

fn check_degree_cap(what: &str, degree: u128) -> Result<()> {
    let cap = config::degree_cap() as u128;
    if degree > cap {
        return Err(Error::Resource {
            what: format!("{what} degree"),
            requested: degree,
            limit: cap,
        });
    }
    Ok(())
}

fn factorial(m: usize) -> u128 {
    (1..=m as u128).product()
}

/// S_m or A_m on `m` points with the standard two generators.
pub fn natural_group(kind: SymKind, m: usize) -> Result<ActionSpace> {
    let min = match kind {
        SymKind::Sym => 2,
        SymKind::Alt => 3,
    };
    if m < min {
        return Err(Error::Range(format!("{kind:?} needs m ≥ {min}, got {m}")));
    }
    check_degree_cap("natural action", m as u128)?;
    let bound = match kind {
        SymKind::Sym => factorial(m),
        SymKind::Alt => factorial(m) / 2,
    };
    let group = PermGroup::with_order_bound(m, natural_generators(kind, m), bound)?;
    let descriptor = ActionDescriptor::Basic(match kind {
        SymKind::Sym => BasicAction::Sym { m },
        SymKind::Alt => BasicAction::Alt { m },
    });
    Ok(ActionSpace {
        group,
        codec: Codec::Natural(m),
        descriptor,
        affine: None,
    })
}

/// AGL(1, p) on the field of order `p`: `x ↦ x+1` and `x ↦ ωx` for a primitive root ω.
pub fn affine_group(p: u32, d: usize) -> Result<ActionSpace> {
    if d != 1 {
        return Err(Error::Range(format!("only one-dimensional affine groups are built, got d = {d}")));
    }
    if p < 2 || !(2..p).take_while(|q| q * q <= p).all(|q| p % q != 0) {
        return Err(Error::Range(format!("affine group needs a prime p, got {p}")));
    }
    check_degree_cap("affine action", p as u128)?;
    let n = p as usize;
    let translate = Permutation::from_images_unchecked((0..p).map(|x| (x + 1) % p).collect());
    let omega = (1..p)
        .find(|&w| {
            let mut x = 1u64;
            (1..p - 1).all(|_| {
                x = x * w as u64 % p as u64;
                x != 1
            })
        })
        .unwrap_or(1);
    let mut gens = vec![translate];
    if p > 2 {
        gens.push(Permutation::from_images_unchecked(
            (0..p).map(|x| (x as u64 * omega as u64 % p as u64) as u32).collect(),
        ));
    }
    let group = PermGroup::with_order_bound(n, gens, p as u128 * (p as u128 - 1))?;
    Ok(ActionSpace {
        group,
        codec: Codec::Natural(n),
        descriptor: ActionDescriptor::Basic(BasicAction::Agl { p, d }),
        affine: Some((1, p)),
    })
}

/// The element `(h_1,…,h_n)σ⁻¹` of H Wr S_n acting on Δⁿ:
/// coordinate `k` of the image is `δ_{kσ}` moved by `h_{kσ}`.
pub fn wreath_element(hs: &[Permutation], sigma: &Permutation, delta: usize) -> Permutation {
    let n = sigma.degree();
    assert_eq!(hs.len(), n);
    let size = delta.pow(n as u32);
    let mut images = Vec::with_capacity(size);
    let mut coords = vec![0u32; n];
    for p in 0..size as u32 {
        let src = tuple_of(p, delta, n);
        for (k, c) in coords.iter_mut().enumerate() {
            let j = sigma.image(k as u32) as usize;
            *c = hs[j].image(src[j]);
        }
        images.push(tuple_index(&coords, delta));
    }
    Permutation::from_images_unchecked(images)
}

/// H Wr S_n in product action on Δⁿ.
pub fn wreath_product_action(component: &ActionSpace, n: usize) -> Result<ActionSpace> {
    if n < 1 {
        return Err(Error::Range("wreath product needs n ≥ 1".into()));
    }
    let delta = component.degree();
    check_degree_cap("product action", (delta as u128).saturating_pow(n as u32))?;
    let id_delta = Permutation::identity(delta);
    let id_top = Permutation::identity(n);
    let mut gens = Vec::new();
    for h in component.group().generators() {
        if h.is_identity() {
            continue;
        }
        let mut hs = vec![id_delta.clone(); n];
        hs[0] = h.clone();
        gens.push(wreath_element(&hs, &id_top, delta));
    }
    let ids = vec![id_delta.clone(); n];
    if n >= 2 {
        let cyc: Vec<u32> = (0..n as u32).collect();
        gens.push(wreath_element(&ids, &Permutation::from_cycles(n, &[cyc])?, delta));
        if n >= 3 {
            gens.push(wreath_element(&ids, &Permutation::from_cycles(n, &[vec![0, 1]])?, delta));
        }
    }
    let bound = component
        .group()
        .order()
        .checked_pow(n as u32)
        .and_then(|x| x.checked_mul(factorial(n)))
        .ok_or_else(|| Error::Resource {
            what: "wreath product order".into(),
            requested: u128::MAX,
            limit: u128::MAX,
        })?;
    let group = PermGroup::with_order_bound(delta.pow(n as u32), gens, bound)?;
    Ok(ActionSpace {
        group,
        codec: Codec::TupleOverDelta {
            component: Box::new(component.codec().clone()),
            delta,
            n,
        },
        descriptor: ActionDescriptor::wreath(component.descriptor().clone(), n),
        affine: component.affine().map(|(d, p)| (d * n, p)),
    })
}

fn hs_parts(m: usize) -> Result<(ElementIndex, Vec<Permutation>, Permutation)> {
    if m < 5 {
        return Err(Error::Range(format!("HS action needs m ≥ 5, got {m}")));
    }
    let index = ElementIndex::new(SymKind::Alt, m)?;
    check_degree_cap("HS action", index.len() as u128)?;
    let elements = index.elements();
    let lookup = |p: &Permutation| index.index(p).expect("product of even permutations is even") as u32;
    let mut gens = Vec::new();
    for g in index.generators() {
        let g_inv = g.inverse();
        gens.push(Permutation::from_images_unchecked(
            elements.iter().map(|t| lookup(&g_inv.mul(t))).collect(),
        ));
        gens.push(Permutation::from_images_unchecked(
            elements.iter().map(|t| lookup(&t.mul(&g))).collect(),
        ));
    }
    let sigma = Permutation::from_images_unchecked(elements.iter().map(|t| lookup(&t.inverse())).collect());
    Ok((index, gens, sigma))
}

/// T×T acting on T = A_m by `t ↦ t₁⁻¹ t t₂`, and the inversion map σ.
pub fn hs_action(m: usize) -> Result<(ActionSpace, Permutation)> {
    let (index, gens, sigma) = hs_parts(m)?;
    let t = index.len() as u128;
    let group = PermGroup::with_order_bound(index.len(), gens, t * t)?;
    let space = ActionSpace {
        group,
        codec: Codec::GroupElementOf { kind: SymKind::Alt, m },
        descriptor: ActionDescriptor::Basic(BasicAction::Hs { m }),
        affine: None,
    };
    Ok((space, sigma))
}

/// ⟨T×T, σ⟩ on T = A_m.
pub fn hs_sd_action(m: usize) -> Result<ActionSpace> {
    let (index, mut gens, sigma) = hs_parts(m)?;
    gens.push(sigma);
    let t = index.len() as u128;
    // σ normalizes T×T and is an involution
    let group = PermGroup::with_order_bound(index.len(), gens, 2 * t * t)?;
    Ok(ActionSpace {
        group,
        codec: Codec::GroupElementOf { kind: SymKind::Alt, m },
        descriptor: ActionDescriptor::Basic(BasicAction::HsSd { m }),
        affine: None,
    })
}

/// Seed sequences Σ of the named families, as points of their actions.
pub mod seeds {
    use super::*;

    /// `x_i = i` for `i = 1..=b`; requires `b ≤ m − 2`.
    pub fn almost_simple(m: usize, b: usize) -> Result<Vec<u32>> {
        if b < 1 || b + 2 > m {
            return Err(Error::Range(format!("AS needs 1 ≤ b ≤ m−2 (m = {m}, b = {b})")));
        }
        Ok((0..b as u32).collect())
    }

    /// `x_c = (α^{2c}, β^{n−2c})` for `c = 1..=b`, α and β the first two points of Δ;
    /// requires `b ≤ ⌊n/2⌋−1`.
    pub fn product_action(space: &ActionSpace, b: usize) -> Result<Vec<u32>> {
        let (delta, n) = match space.codec() {
            Codec::TupleOverDelta { delta, n, .. } => (*delta, *n),
            _ => return Err(Error::Invalid("PA seeds need a product action".into())),
        };
        if b < 1 || b + 1 > n / 2 {
            return Err(Error::Range(format!("PA needs 1 ≤ b ≤ ⌊n/2⌋−1 (n = {n}, b = {b})")));
        }
        if delta < 2 {
            return Err(Error::Range("PA needs |Δ| ≥ 2".into()));
        }
        Ok((1..=b)
            .map(|c| {
                let coords: Vec<u32> = (0..n).map(|k| if k < 2 * c { 0 } else { 1 }).collect();
                tuple_index(&coords, delta)
            })
            .collect())
    }

    /// `x_i = (1,2)(3,4)…(4i−1,4i)` for `i = 0..=b`; requires `b ≤ ⌊m/4⌋`.
    pub fn holomorph_simple(m: usize, b: usize) -> Result<Vec<u32>> {
        if b < 1 || b > m / 4 {
            return Err(Error::Range(format!("HS needs 1 ≤ b ≤ ⌊m/4⌋ (m = {m}, b = {b})")));
        }
        let index = ElementIndex::new(SymKind::Alt, m)?;
        (0..=b)
            .map(|i| {
                let x = disjoint_transpositions(m, 2 * i)?;
                Ok(index.index(&x).expect("even") as u32)
            })
            .collect()
    }
}

/// Number of entries of `x` in 1-based coordinates `i..=j` different from `gamma`.
pub fn nongamma_count<T: PartialEq>(x: &[T], gamma: &T, i: usize, j: usize) -> Result<usize> {
    if i < 1 || j < i || j > x.len() {
        return Err(Error::Range(format!(
            "coordinate range [{i},{j}] invalid for length {}",
            x.len()
        )));
    }
    Ok(x[i - 1..j].iter().filter(|v| *v != gamma).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_orders() {
        assert_eq!(natural_group(SymKind::Sym, 5).unwrap().group().order(), 120);
        assert_eq!(natural_group(SymKind::Alt, 5).unwrap().group().order(), 60);
        assert_eq!(natural_group(SymKind::Alt, 8).unwrap().group().order(), 20160);
        assert!(natural_group(SymKind::Alt, 2).is_err());
        assert!(natural_group(SymKind::Sym, 1).is_err());
    }

    #[test]
    fn product_action_formula() {
        let h = Permutation::parse("(1,2)", 3).unwrap();
        let id = Permutation::identity(3);
        let p = tuple_index(&[1, 2], 3);
        let g = wreath_element(&[h, id.clone()], &Permutation::identity(2), 3);
        assert_eq!(tuple_of(g.image(p), 3, 2), vec![0, 2]);
        let swap = Permutation::parse("(1,2)", 2).unwrap();
        let s = wreath_element(&[id.clone(), id], &swap, 3);
        assert_eq!(tuple_of(s.image(p), 3, 2), vec![2, 1]);
    }

    #[test]
    fn agl_1_5() {
        let a = affine_group(5, 1).unwrap();
        assert_eq!(a.group().order(), 20);
        assert!(a.group().is_primitive().unwrap());
    }

    #[test]
    fn seeds_match_definitions() {
        assert_eq!(seeds::almost_simple(5, 3).unwrap(), vec![0, 1, 2]);
        assert!(seeds::almost_simple(5, 4).is_err());
        let s3 = natural_group(SymKind::Sym, 3).unwrap();
        let pa = wreath_product_action(&s3, 8).unwrap();
        let x = seeds::product_action(&pa, 3).unwrap();
        assert_eq!(pa.decode(x[1]).to_string(), "[1,1,1,1,2,2,2,2]");
        assert!(seeds::product_action(&pa, 4).is_err());
        let hs = seeds::holomorph_simple(8, 2).unwrap();
        let idx = ElementIndex::new(SymKind::Alt, 8).unwrap();
        assert_eq!(idx.element(hs[2] as usize).to_string(), "(1,2)(3,4)(5,6)(7,8)");
        assert!(idx.element(hs[0] as usize).is_identity());
    }

    #[test]
    fn nongamma() {
        let x = [0, 1, 0, 0, 1];
        assert_eq!(nongamma_count(&x, &0, 1, 4).unwrap(), 1);
        assert_eq!(nongamma_count(&x, &7, 2, 5).unwrap(), 4);
        assert!(nongamma_count(&x, &0, 3, 2).is_err());
    }

    #[test]
    fn descriptor_json_shapes() {
        let d = ActionDescriptor::wreath(ActionDescriptor::Basic(BasicAction::Sym { m: 3 }), 8);
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v, serde_json::json!({"family":"wreath","component":{"kind":"sym","m":3},"n":8}));
        let h: ActionDescriptor = serde_json::from_str(r#"{"kind":"hs","m":5}"#).unwrap();
        assert_eq!(h, ActionDescriptor::Basic(BasicAction::Hs { m: 5 }));
    }
}
