use std::fmt;

use serde::{Deserialize, Serialize};

use super::RouquierError;

/// A word in the Artin generators of `Br_n`: `+i` is `sigma_i`, `-i` its
/// inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    n: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<i32>) -> Result<Self, RouquierError> {
        if n == 0 {
            return Err(RouquierError::NoStrands);
        }
        for (pos, &l) in letters.iter().enumerate() {
            if l == 0 || l.unsigned_abs() as usize >= n {
                return Err(RouquierError::BadLetter { pos, letter: l, n });
            }
        }
        Ok(Self { n, letters })
    }

    pub fn identity(n: usize) -> Self {
        Self { n: n.max(1), letters: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    pub fn positive(&self) -> usize {
        self.letters.iter().filter(|l| **l > 0).count()
    }

    pub fn negative(&self) -> usize {
        self.letters.iter().filter(|l| **l < 0).count()
    }

    /// `w(i)` for the underlying permutation, reading the word left to right
    /// as strands moving down.
    pub fn permutation(&self) -> Vec<usize> {
        let mut pos: Vec<usize> = (0..self.n).collect();
        for l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            for p in pos.iter_mut() {
                if *p == i {
                    *p = i + 1;
                } else if *p == i + 1 {
                    *p = i;
                }
            }
        }
        pos
    }

    /// Cycle lengths of the permutation, largest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        cycle_type(&self.permutation())
    }

    pub fn components(&self) -> usize {
        self.cycle_type().len()
    }

    pub fn concat(&self, other: &Self) -> Result<Self, RouquierError> {
        if self.n != other.n {
            return Err(RouquierError::StrandMismatch(self.n, other.n));
        }
        Ok(Self { n: self.n, letters: self.letters.iter().chain(&other.letters).copied().collect() })
    }

    /// The same word read in `Br_m` for `m >= n`.
    pub fn widen(&self, m: usize) -> Result<Self, RouquierError> {
        Self::new(m.max(self.n), self.letters.clone())
    }

    pub fn inverse(&self) -> Self {
        Self { n: self.n, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }
}

pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(i32::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_data() {
        let b = BraidWord::new(2, vec![1, 1, 1]).unwrap();
        assert_eq!(b.writhe(), 3);
        assert_eq!(b.cycle_type(), vec![2]);
        assert_eq!(b.to_string(), "1 1 1");
    }

    #[test]
    fn cancelling_pair_is_pure() {
        let b = BraidWord::new(2, vec![1, -1]).unwrap();
        assert_eq!(b.writhe(), 0);
        assert_eq!(b.permutation(), vec![0, 1]);
        assert_eq!(b.cycle_type(), vec![1, 1]);
    }

    #[test]
    fn range_is_checked() {
        assert_eq!(
            BraidWord::new(2, vec![1, 2]),
            Err(RouquierError::BadLetter { pos: 1, letter: 2, n: 2 })
        );
        assert!(BraidWord::new(3, vec![0]).is_err());
    }

    #[test]
    fn three_cycle() {
        let b = BraidWord::new(3, vec![1, 2]).unwrap();
        assert_eq!(b.cycle_type(), vec![3]);
        assert_eq!(b.components(), 1);
    }
}
