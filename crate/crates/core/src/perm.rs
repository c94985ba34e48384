//! Permutations of `{0, …, n-1}` and their cycle types.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::rng::SplitMix64;

/// A permutation stored as its image table: `apply(x) = images[x]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    /// Largest supported degree (images are stored as `u8`).
    pub const MAX_DEGREE: usize = 255;

    /// The identity on `0..n`.
    pub fn identity(n: usize) -> Perm {
        assert!(n <= Perm::MAX_DEGREE);
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    /// Builds a permutation from an image table, checking bijectivity.
    pub fn from_images(images: Vec<u8>) -> Result<Perm, Error> {
        let n = images.len();
        if n > Perm::MAX_DEGREE {
            return Err(Error::OrderTooLarge {
                order: n,
                max: Perm::MAX_DEGREE,
            });
        }
        let mut seen = vec![false; n];
        for &y in &images {
            if (y as usize) >= n || seen[y as usize] {
                return Err(Error::NotAPermutation { n });
            }
            seen[y as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Convenience constructor from `usize` images.
    pub fn from_usize(images: &[usize]) -> Result<Perm, Error> {
        if images.iter().any(|&y| y > u8::MAX as usize) {
            return Err(Error::NotAPermutation { n: images.len() });
        }
        Perm::from_images(images.iter().map(|&y| y as u8).collect())
    }

    /// Uniformly random permutation via Fisher–Yates.
    pub fn random(n: usize, rng: &mut SplitMix64) -> Perm {
        let mut images: Vec<u8> = (0..n as u8).collect();
        for i in (1..n).rev() {
            let j = rng.next_below(i + 1);
            images.swap(i, j);
        }
        Perm { images }
    }

    /// Degree `n`.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// The raw image table.
    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// Composition `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, Error> {
        if self.degree() != other.degree() {
            return Err(Error::OrderMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        let images = other
            .images
            .iter()
            .map(|&x| self.images[x as usize])
            .collect();
        Ok(Perm { images })
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u8; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u8;
        }
        Perm { images }
    }

    /// Cycle type: the multiset of cycle lengths.
    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u8;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }
}

impl fmt::Display for Perm {
    /// One-line image notation, e.g. `[2 0 1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, y) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{y}")?;
        }
        write!(f, "]")
    }
}

/// The cycle type of a permutation: a partition of `n` with parts stored in
/// descending order, e.g. `3-2-1-1` for degree 7.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType {
    parts: Vec<u8>,
}

impl CycleType {
    /// Builds a cycle type from (unordered, positive) parts.
    pub fn from_parts(mut parts: Vec<u8>) -> Result<CycleType, Error> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::CycleTypeParse {
                text: format!("{parts:?}"),
            });
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { parts })
    }

    /// Parts in descending order.
    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    /// The degree this is a partition of.
    pub fn degree(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "-")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Parses the dash-separated form, e.g. `"3-2-1-1"`.
    fn from_str(s: &str) -> Result<CycleType, Error> {
        let bad = || Error::CycleTypeParse {
            text: s.to_string(),
        };
        let mut parts = Vec::new();
        for tok in s.split('-') {
            let p: u8 = tok.trim().parse().map_err(|_| bad())?;
            parts.push(p);
        }
        CycleType::from_parts(parts).map_err(|_| bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 2]).is_err());
        assert!(Perm::from_images(vec![1, 2, 3]).is_err());
        assert!(Perm::from_images(vec![]).is_ok()); // degree 0 is a permutation
    }

    #[test]
    fn compose_applies_right_then_left() {
        // p = (0 1 2) as images, q swaps 0 and 1.
        let p = Perm::from_images(vec![1, 2, 0]).unwrap();
        let q = Perm::from_images(vec![1, 0, 2]).unwrap();
        let pq = p.compose(&q).unwrap();
        for x in 0..3 {
            assert_eq!(pq.apply(x), p.apply(q.apply(x)));
        }
        assert_eq!(pq.images(), &[2, 1, 0]);
    }

    #[test]
    fn compose_checks_degree() {
        let p = Perm::identity(3);
        let q = Perm::identity(4);
        assert_eq!(
            p.compose(&q),
            Err(Error::OrderMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn inverse_undoes() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let p = Perm::random(6, &mut rng);
            let pi = p.inverse();
            assert_eq!(p.compose(&pi).unwrap(), Perm::identity(6));
            assert_eq!(pi.compose(&p).unwrap(), Perm::identity(6));
        }
    }

    #[test]
    fn cycle_type_of_known_permutations() {
        assert_eq!(Perm::identity(4).cycle_type().parts(), &[1, 1, 1, 1]);
        let p = Perm::from_images(vec![1, 2, 0, 4, 3, 5, 6]).unwrap();
        assert_eq!(p.cycle_type().parts(), &[3, 2, 1, 1]);
        assert_eq!(p.cycle_type().to_string(), "3-2-1-1");
        assert_eq!(p.cycle_type().degree(), 7);
    }

    #[test]
    fn cycle_type_round_trips_through_strings() {
        let ct: CycleType = "3-2-1-1".parse().unwrap();
        assert_eq!(ct.parts(), &[3, 2, 1, 1]);
        // Parsing normalizes part order.
        let ct2: CycleType = "1-3-1-2".parse().unwrap();
        assert_eq!(ct, ct2);
        assert!("".parse::<CycleType>().is_err());
        assert!("3-0".parse::<CycleType>().is_err());
        assert!("a-b".parse::<CycleType>().is_err());
    }

    #[test]
    fn random_permutations_are_valid_and_seeded() {
        let mut a = SplitMix64::new(17);
        let mut b = SplitMix64::new(17);
        for _ in 0..20 {
            let p = Perm::random(9, &mut a);
            let q = Perm::random(9, &mut b);
            assert_eq!(p, q);
            assert!(Perm::from_images(p.images().to_vec()).is_ok());
        }
    }
}
