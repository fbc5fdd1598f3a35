//! Elements of S_m and A_m indexed by lexicographic rank of their image tables.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Which of the two groups on `m` letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymKind {
    Sym,
    Alt,
}

fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// Lexicographic rank of an image table among all permutations of its length.
pub fn lex_rank(images: &[u32]) -> u64 {
    let m = images.len();
    let mut rank = 0u64;
    let mut used = 0u64;
    for (i, &x) in images.iter().enumerate() {
        let smaller_unused = (0..x).filter(|&y| used & (1 << y) == 0).count() as u64;
        rank += smaller_unused * factorial(m - 1 - i);
        used |= 1 << x;
    }
    rank
}

pub fn lex_unrank(m: usize, mut rank: u64) -> Vec<u32> {
    let mut pool: Vec<u32> = (0..m as u32).collect();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let f = factorial(m - 1 - i);
        let d = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(d));
    }
    out
}

/// Parity of a lexicographic rank: the factorial-base digits sum to the inversion count.
fn rank_is_even(m: usize, mut rank: u64) -> bool {
    let mut inversions = 0u64;
    for i in 0..m {
        let f = factorial(m - 1 - i);
        inversions += rank / f;
        rank %= f;
    }
    inversions % 2 == 0
}

/// The group S_m or A_m with elements indexed 0.. in lexicographic order.
///
/// In A_m the even permutation among ranks `2i`, `2i+1` gets index `i`,
/// since consecutive ranks differ by swapping the last two letters.
#[derive(Clone, Debug)]
pub struct ElementIndex {
    kind: SymKind,
    m: usize,
}

impl ElementIndex {
    pub fn new(kind: SymKind, m: usize) -> Result<Self> {
        if m < 2 || m > 20 {
            return Err(Error::Range(format!("element index needs 2 ≤ m ≤ 20, got {m}")));
        }
        Ok(ElementIndex { kind, m })
    }

    pub fn kind(&self) -> SymKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        match self.kind {
            SymKind::Sym => factorial(self.m) as usize,
            SymKind::Alt => (factorial(self.m) / 2) as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, index: usize) -> Permutation {
        let rank = match self.kind {
            SymKind::Sym => index as u64,
            SymKind::Alt => {
                let r = 2 * index as u64;
                if rank_is_even(self.m, r) {
                    r
                } else {
                    r + 1
                }
            }
        };
        Permutation::from_images_unchecked(lex_unrank(self.m, rank))
    }

    /// Index of `p`, or `None` when `p` is odd and the group is A_m.
    pub fn index(&self, p: &Permutation) -> Option<usize> {
        if p.degree() != self.m {
            return None;
        }
        let rank = lex_rank(p.images());
        match self.kind {
            SymKind::Sym => Some(rank as usize),
            SymKind::Alt => rank_is_even(self.m, rank).then_some((rank / 2) as usize),
        }
    }

    pub fn elements(&self) -> Vec<Permutation> {
        (0..self.len()).map(|i| self.element(i)).collect()
    }

    /// Standard two generators: `(1 2 … m)` and `(1 2)` for S_m; for A_m
    /// `(1 2 3)` with `(1 2 … m)` (m odd) or `(2 3 … m)` (m even).
    pub fn generators(&self) -> Vec<Permutation> {
        natural_generators(self.kind, self.m)
    }
}

pub fn natural_generators(kind: SymKind, m: usize) -> Vec<Permutation> {
    let long: Vec<u32> = (0..m as u32).collect();
    match kind {
        SymKind::Sym => {
            if m == 2 {
                vec![Permutation::from_cycles(m, &[vec![0, 1]]).unwrap()]
            } else {
                vec![
                    Permutation::from_cycles(m, &[long]).unwrap(),
                    Permutation::from_cycles(m, &[vec![0, 1]]).unwrap(),
                ]
            }
        }
        SymKind::Alt => {
            let three = Permutation::from_cycles(m, &[vec![0, 1, 2]]).unwrap();
            if m == 3 {
                return vec![three];
            }
            let cycle = if m % 2 == 1 { long } else { long[1..].to_vec() };
            vec![three, Permutation::from_cycles(m, &[cycle]).unwrap()]
        }
    }
}

/// Product of the `k` disjoint transpositions `(1,2)(3,4)…(2k−1,2k)`.
pub fn disjoint_transpositions(m: usize, k: usize) -> Result<Permutation> {
    if 2 * k > m {
        return Err(Error::Range(format!("{k} disjoint transpositions need m ≥ {}", 2 * k)));
    }
    let cycles: Vec<Vec<u32>> = (0..k as u32).map(|i| vec![2 * i, 2 * i + 1]).collect();
    Permutation::from_cycles(m, &cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_round_trip() {
        for r in 0..120 {
            assert_eq!(lex_rank(&lex_unrank(5, r)), r);
        }
    }

    #[test]
    fn alternating_index_is_dense_and_even() {
        let a5 = ElementIndex::new(SymKind::Alt, 5).unwrap();
        assert_eq!(a5.len(), 60);
        let mut last = None;
        for i in 0..60 {
            let p = a5.element(i);
            // even: cycle count parity
            let transpositions: usize = p.cycles().iter().map(|c| c.len() - 1).sum();
            assert_eq!(transpositions % 2, 0);
            assert_eq!(a5.index(&p), Some(i));
            let r = lex_rank(p.images());
            assert!(last.is_none_or(|l| l < r));
            last = Some(r);
        }
        assert_eq!(a5.index(&Permutation::parse("(1,2)", 5).unwrap()), None);
    }
}
