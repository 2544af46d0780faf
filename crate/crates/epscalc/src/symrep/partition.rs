use crate::error::{Error, Result};
use std::fmt;

/// A partition: a finite nonincreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be nonincreasing"
        );
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(vec![])
    }

    pub fn row(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition(vec![n])
        }
    }

    /// Block partition a×b: a rows of length b.
    pub fn block(rows: u32, cols: u32) -> Self {
        if rows == 0 || cols == 0 {
            Self::empty()
        } else {
            Partition(vec![cols; rows as usize])
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn transpose(&self) -> Partition {
        if self.0.is_empty() {
            return Self::empty();
        }
        let cols = self.0[0] as usize;
        let mut t = Vec::with_capacity(cols);
        for c in 0..cols {
            t.push(self.0.iter().filter(|&&p| p as usize > c).count() as u32);
        }
        Partition(t)
    }

    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.len()).all(|i| self.part(i) >= other.part(i))
    }

    /// Coordinatewise sum.
    pub fn add(&self, other: &Partition) -> Partition {
        let n = self.len().max(other.len());
        Partition::new((0..n).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// All partitions of `n`.
    pub fn all(n: u32) -> Vec<Partition> {
        Self::all_bounded(n, n, usize::MAX)
    }

    /// All partitions of `n` with at most `max_len` parts.
    pub fn all_with_max_len(n: u32, max_len: usize) -> Vec<Partition> {
        Self::all_bounded(n, n, max_len)
    }

    fn all_bounded(n: u32, max_part: u32, max_len: usize) -> Vec<Partition> {
        fn rec(n: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            if max_len == 0 {
                return;
            }
            let hi = max_part.min(n);
            for p in (1..=hi).rev() {
                cur.push(p);
                rec(n - p, p, max_len - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max_part, max_len, &mut Vec::new(), &mut out);
        out
    }

    /// z_lambda = prod_i i^{m_i} m_i! (order of the centralizer of a
    /// permutation of cycle type lambda).
    pub fn z_factor(&self) -> num::BigInt {
        use num::BigInt;
        let mut z = BigInt::from(1);
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let mut m = 0u32;
            while i < self.0.len() && self.0[i] == p {
                m += 1;
                i += 1;
            }
            for _ in 0..m {
                z *= BigInt::from(p);
            }
            for k in 1..=m {
                z *= BigInt::from(k);
            }
        }
        z
    }

    /// Sign of a permutation of this cycle type.
    pub fn cycle_type_sign(&self) -> i64 {
        let transpositions: u32 = self.0.iter().map(|p| p - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Merge two cycle types (multiset union of parts).
    pub fn merge(&self, other: &Partition) -> Partition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    /// Every part multiplied by k.
    pub fn stretch(&self, k: u32) -> Partition {
        Partition(self.0.iter().map(|p| p * k).collect())
    }
}

/// Frequency notation: freq[i] = number of parts equal to i+1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrequencyVector(Vec<u32>);

impl FrequencyVector {
    pub fn of(p: &Partition) -> Self {
        let m = p.part(0) as usize;
        let mut freq = vec![0u32; m];
        for &part in p.parts() {
            freq[part as usize - 1] += 1;
        }
        FrequencyVector(freq)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// freq[i] as the count of parts equal to `i+1`.
    pub fn count_of(&self, part: u32) -> u32 {
        self.0.get(part as usize - 1).copied().unwrap_or(0)
    }

    pub fn weighted_size(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u32 + 1) * c)
            .sum()
    }

    pub fn to_partition(&self) -> Partition {
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            for _ in 0..c {
                parts.push(i as u32 + 1);
            }
        }
        Partition::new(parts)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})", self.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return Ok(Partition::empty());
        }
        let parts: std::result::Result<Vec<u32>, _> =
            t.split(',').map(|x| x.trim().parse::<u32>()).collect();
        let parts = parts.map_err(|e| Error::Json(format!("bad partition: {e}")))?;
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::Json("partition parts must be nonincreasing".into()));
        }
        Ok(Partition::new(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_and_size() {
        let p = Partition::new(vec![4, 4, 3]);
        assert_eq!(p.transpose(), Partition::new(vec![3, 3, 3, 2]));
        assert_eq!(p.size(), 11);
        assert_eq!(p.transpose().transpose(), p);
    }

    #[test]
    fn enumeration_counts() {
        // p(n) for n = 0..10: 1,1,2,3,5,7,11,15,22,30,42
        let expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(Partition::all(n as u32).len(), e);
        }
        assert_eq!(Partition::all_with_max_len(6, 2).len(), 4); // (6),(5,1),(4,2),(3,3)
    }

    #[test]
    fn z_factors() {
        assert_eq!(Partition::new(vec![1, 1, 1]).z_factor(), 6.into());
        assert_eq!(Partition::new(vec![3]).z_factor(), 3.into());
        assert_eq!(Partition::new(vec![2, 1]).z_factor(), 2.into());
    }

    #[test]
    fn frequency_roundtrip() {
        let p = Partition::new(vec![3, 3, 2]);
        let f = FrequencyVector::of(&p);
        assert_eq!(f.counts(), &[0, 1, 2]);
        assert_eq!(f.to_partition(), p);
        assert_eq!(f.weighted_size(), 8);
    }
}
