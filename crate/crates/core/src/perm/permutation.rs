use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0, …, degree−1}` stored as an image table.
///
/// Products read left to right: `p.mul(q)` sends `x` to `q(p(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "image table is not a bijection on {n} points"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Caller guarantees `images` is a bijection.
    pub fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let a = a as usize;
                if a >= degree {
                    return Err(Error::PointOutOfRange { point: a, degree });
                }
                if touched[a] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} repeated in cycle notation",
                        a + 1
                    )));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation such as `(1,2)(3,4)`; `()` is the identity.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycle_list(text)?;
        Self::from_cycles(degree, &cycles)
    }

    /// Parses cycle notation, taking the degree from the largest point mentioned.
    pub fn parse_min_degree(text: &str) -> Result<Self> {
        let cycles = parse_cycle_list(text)?;
        let degree = cycles
            .iter()
            .flatten()
            .map(|&x| x as usize + 1)
            .max()
            .unwrap_or(1);
        Self::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        if self.degree() != q.degree() {
            return Err(Error::DegreeMismatch(self.degree(), q.degree()));
        }
        Ok(self.mul(q))
    }

    /// `self` then `q`; degrees must agree.
    pub fn mul(&self, q: &Permutation) -> Permutation {
        assert_eq!(self.degree(), q.degree(), "degree mismatch in product");
        Permutation {
            images: self.images.iter().map(|&x| q.images[x as usize]).collect(),
        }
    }

    /// Replaces `self` by `self` then `q`.
    pub fn mul_assign(&mut self, q: &Permutation) {
        assert_eq!(self.degree(), q.degree(), "degree mismatch in product");
        for x in self.images.iter_mut() {
            *x = q.images[*x as usize];
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc.mul_assign(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    pub fn smallest_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(x, &y)| *x as u32 != y)
            .map(|(x, _)| x as u32)
    }

    /// Number of moved points.
    pub fn support_size(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(x, &y)| *x as u32 != y)
            .count()
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Element order, the lcm of cycle lengths.
    pub fn order(&self) -> u128 {
        self.cycles()
            .iter()
            .map(|c| c.len() as u128)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// Returns `x ↦ self(x)` on a relabelled point set: `shift` is added to every point
    /// and the result lives on `degree` points.
    pub fn embed(&self, degree: usize, shift: usize) -> Permutation {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (x, &y) in self.images.iter().enumerate() {
            images[x + shift] = y + shift as u32;
        }
        Permutation { images }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn parse_cycle_list(text: &str) -> Result<Vec<Vec<u32>>> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::Parse(format!("expected '(' in {text:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
        let body = &rest[1..close];
        let mut cycle = Vec::new();
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: u32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad point {tok:?} in {text:?}")))?;
            if v == 0 {
                return Err(Error::Parse("points are 1-based".into()));
            }
            cycle.push(v - 1);
        }
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
        rest = rest[close + 1..].trim_start();
    }
    Ok(cycles)
}

impl fmt::Display for Permutation {
    /// 1-based disjoint cycle notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() <= 64 {
            write!(f, "{self}")
        } else {
            write!(f, "Permutation(degree {}, {} moved)", self.degree(), self.support_size())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_to_right_product() {
        let p = Permutation::parse("(1,2,3)", 3).unwrap();
        let q = Permutation::parse("(1,2)", 3).unwrap();
        assert_eq!(p.compose(&q).unwrap().to_string(), "(2,3)");
        assert!(q.compose(&q).unwrap().is_identity());
    }

    #[test]
    fn parse_and_print_round_trip() {
        let p = Permutation::parse("(1, 4)(2 3 5)", 6).unwrap();
        assert_eq!(p.to_string(), "(1,4)(2,3,5)");
        assert_eq!(Permutation::parse("()", 4).unwrap(), Permutation::identity(4));
        assert!(Permutation::parse("(1,1)", 3).is_err());
        assert!(Permutation::parse("(1,7)", 3).is_err());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::identity(3)
            .compose(&Permutation::identity(4))
            .is_err());
    }

    #[test]
    fn order_and_power() {
        let p = Permutation::parse("(1,2,3)(4,5)", 5).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert!(!p.pow(3).is_identity());
    }
}
