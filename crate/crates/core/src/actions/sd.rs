//! Symbolic cosets of the straight diagonal D = {(t,…,t)} in Tⁿ.
//!
//! Elements of T are indices into a multiplication table; tuples are
//! vectors of indices. Products read left to right as everywhere else.

use serde::{Deserialize, Serialize};

use super::symmetric::{disjoint_transpositions, ElementIndex, SymKind};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Canonical coset `Dδ̄`: the representative whose first entry is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SdCoset {
    entries: Vec<u32>,
}

impl SdCoset {
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }
}

/// T with its multiplication table, the tuple length n, and the involution α.
#[derive(Clone, Debug)]
pub struct SdContext {
    index: ElementIndex,
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
    alpha: u32,
}

impl SdContext {
    /// T = A_m or S_m, α = (1,2)(3,4).
    pub fn new(kind: SymKind, m: usize, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Range(format!("diagonal cosets need n ≥ 2, got {n}")));
        }
        if m < 4 {
            return Err(Error::Range(format!("α = (1,2)(3,4) needs m ≥ 4, got {m}")));
        }
        let index = ElementIndex::new(kind, m)?;
        if index.len() > 5040 {
            return Err(Error::Resource {
                what: "multiplication table of T".into(),
                requested: index.len() as u128,
                limit: 5040,
            });
        }
        let elements = index.elements();
        let k = elements.len();
        let mut mul = vec![0u32; k * k];
        for (a, ea) in elements.iter().enumerate() {
            for (b, eb) in elements.iter().enumerate() {
                mul[a * k + b] = index.index(&ea.mul(eb)).unwrap() as u32;
            }
        }
        let inv = elements
            .iter()
            .map(|e| index.index(&e.inverse()).unwrap() as u32)
            .collect();
        let identity = index.index(&Permutation::identity(m)).unwrap() as u32;
        let alpha = index.index(&disjoint_transpositions(m, 2)?).unwrap() as u32;
        Ok(SdContext {
            index,
            n,
            mul,
            inv,
            identity,
            alpha,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.inv.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn element(&self, t: u32) -> Permutation {
        self.index.element(t as usize)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `t⁻¹ a t`.
    pub fn conj(&self, a: u32, t: u32) -> u32 {
        self.mul(self.mul(self.inv(t), a), t)
    }

    pub fn support(&self, tuple: &[u32]) -> usize {
        tuple.iter().filter(|&&x| x != self.identity).count()
    }

    fn check_len(&self, tuple: &[u32]) -> Result<()> {
        if tuple.len() != self.n {
            return Err(Error::Invalid(format!(
                "tuple of length {} in Tⁿ with n = {}",
                tuple.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// `(t a_1, …, t a_n)`.
    pub fn left_translate(&self, t: u32, tuple: &[u32]) -> Vec<u32> {
        tuple.iter().map(|&a| self.mul(t, a)).collect()
    }

    pub fn canonicalize(&self, raw: &[u32]) -> Result<SdCoset> {
        self.check_len(raw)?;
        Ok(SdCoset {
            entries: self.left_translate(self.inv(raw[0]), raw),
        })
    }

    /// The unique diagonal translate with support `< n/2`, if any.
    pub fn small_support_rep(&self, c: &SdCoset) -> Option<Vec<u32>> {
        let mut found = None;
        for t in 0..self.order() as u32 {
            let v = self.left_translate(t, &c.entries);
            if 2 * self.support(&v) < self.n {
                debug_assert!(found.is_none(), "two small-support representatives");
                found = Some(v);
            }
        }
        found
    }

    /// Number of diagonal translates with support `< n/2`.
    pub fn small_support_count(&self, c: &SdCoset) -> usize {
        (0..self.order() as u32)
            .filter(|&t| 2 * self.support(&self.left_translate(t, &c.entries)) < self.n)
            .count()
    }

    /// `ᾱ_c = (α^{2c}, 1^{n−2c})`.
    pub fn alpha_bar(&self, c: usize) -> Result<Vec<u32>> {
        if 2 * c > self.n {
            return Err(Error::Range(format!("ᾱ_{c} needs 2c ≤ n = {}", self.n)));
        }
        Ok((0..self.n)
            .map(|k| if k < 2 * c { self.alpha } else { self.identity })
            .collect())
    }

    /// Seeds `x_c = [ᾱ_c]` for `c = 1..=b`; requires `b ≤ ⌊(n−1)/4⌋`.
    pub fn seeds(&self, b: usize) -> Result<Vec<SdCoset>> {
        if b < 1 || b > (self.n - 1) / 4 {
            return Err(Error::Range(format!(
                "SD needs 1 ≤ b ≤ ⌊(n−1)/4⌋ (n = {}, b = {b})",
                self.n
            )));
        }
        (1..=b).map(|c| self.canonicalize(&self.alpha_bar(c)?)).collect()
    }

    /// Moves entry `k` to position `σ(k)`.
    pub fn permute(&self, tuple: &[u32], sigma: &Permutation) -> Vec<u32> {
        let mut out = vec![self.identity; tuple.len()];
        for (k, &x) in tuple.iter().enumerate() {
            out[sigma.image(k as u32) as usize] = x;
        }
        out
    }

    /// Entrywise right multiplication.
    pub fn right_mul(&self, tuple: &[u32], by: &[u32]) -> Vec<u32> {
        tuple.iter().zip(by).map(|(&a, &b)| self.mul(a, b)).collect()
    }

    fn check_sa(&self, s: usize, a: usize) -> Result<()> {
        let top = (self.n - 1) / 4;
        if s < 1 || s >= a || a > top {
            return Err(Error::Range(format!(
                "need 1 ≤ s < a ≤ ⌊(n−1)/4⌋ = {top}, got s = {s}, a = {a}"
            )));
        }
        Ok(())
    }

    /// Closed-form representative of `x_a^{h_s⁻¹ t̄ σ h_s}`:
    /// `(1^{2s}, (αᵗ)^{2a−2s}, 1^{n−2a})^σ · (α^{2s}, 1^{n−2s})`.
    pub fn rep(&self, s: usize, t: u32, sigma: &Permutation, a: usize) -> Result<Vec<u32>> {
        self.check_sa(s, a)?;
        let at = self.conj(self.alpha, t);
        let v: Vec<u32> = (0..self.n)
            .map(|k| if k >= 2 * s && k < 2 * a { at } else { self.identity })
            .collect();
        Ok(self.right_mul(&self.permute(&v, sigma), &self.alpha_bar(s)?))
    }

    /// `x_a^{h_s⁻¹ t̄ σ h_s}` computed by applying each factor to a representative.
    pub fn image_coset(&self, s: usize, t: u32, sigma: &Permutation, a: usize) -> Result<SdCoset> {
        self.check_sa(s, a)?;
        let hs = self.alpha_bar(s)?;
        let hs_inv: Vec<u32> = hs.iter().map(|&x| self.inv(x)).collect();
        let mut v = self.right_mul(&self.alpha_bar(a)?, &hs_inv);
        v = self.right_mul(&v, &vec![t; self.n]);
        v = self.permute(&v, sigma);
        v = self.right_mul(&v, &hs);
        self.canonicalize(&v)
    }

    /// Entries of `x` in 1-based coordinates `i..=j` different from `gamma`.
    pub fn non_count(&self, x: &[u32], gamma: u32, i: usize, j: usize) -> usize {
        x[i - 1..j].iter().filter(|&&v| v != gamma).count()
    }
}
