//! Permutations, small dense rational matrices and the representations
//! `wedge^a P` and `Ind(sign (x) triv)` of the symmetric group.

use itertools::Itertools;
use num_traits::{One, Zero};

use super::TraceError;
use crate::hochschild::subsets;
use crate::polyalg::Q;

/// `p[i]` is the image of `i`.
pub type Perm = Vec<usize>;

pub type DenseMatrix = Vec<Vec<Q>>;

/// `(a . b)(i) = a(b(i))`
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

pub fn transposition(n: usize, k: usize) -> Perm {
    let mut p: Perm = (0..n).collect();
    p.swap(k, k + 1);
    p
}

/// Every permutation of `0..n`, lexicographically.
pub fn all_perms(n: usize) -> Vec<Perm> {
    (0..n).permutations(n).collect()
}

pub fn perm_index(p: &[usize]) -> usize {
    // Lehmer code in lexicographic rank
    let n = p.len();
    let mut idx = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        idx = idx * (n - i) + smaller;
    }
    idx
}

/// Simple transpositions `k_1, .., k_m` with `p = s_{k_1} ... s_{k_m}`.
pub fn reduced_word(p: &[usize]) -> Vec<usize> {
    let mut q = p.to_vec();
    let mut word = Vec::new();
    while let Some(i) = (0..q.len().saturating_sub(1)).find(|&i| q[i] > q[i + 1]) {
        q.swap(i, i + 1);
        word.push(i);
    }
    word.reverse();
    word
}

pub fn sign(p: &[usize]) -> i64 {
    if reduced_word(p).len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Image of the sorted index set `s` (a bitmask) under `p`, with the sign of
/// re-sorting `e_{p(s_1)} ^ .. ^ e_{p(s_k)}`.
pub fn act_on_subset(p: &[usize], s: u32) -> (i64, u32) {
    let images: Vec<usize> = (0..p.len()).filter(|i| s >> i & 1 == 1).map(|i| p[i]).collect();
    let inversions = images.iter().tuple_combinations().filter(|(a, b)| a > b).count();
    let mask = images.iter().fold(0u32, |m, &i| m | 1 << i);
    (if inversions % 2 == 0 { 1 } else { -1 }, mask)
}

/// `theta_S theta_T = sign theta_{S u T}`, or `None` when they overlap.
pub fn wedge_sign(s: u32, t: u32) -> Option<i64> {
    if s & t != 0 {
        return None;
    }
    let mut swaps = 0;
    for i in 0..32 {
        if t >> i & 1 == 1 {
            swaps += (s >> (i + 1)).count_ones();
        }
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// Partitions of `n` as weakly decreasing parts, in increasing
/// lexicographic order; `(1,..,1)` comes first.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in 1..=n.min(max) {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// A permutation with the given cycle type, cycles on consecutive points.
pub fn class_representative(cycle_type: &[usize]) -> Perm {
    let n: usize = cycle_type.iter().sum();
    let mut p: Perm = (0..n).collect();
    let mut start = 0;
    for &len in cycle_type {
        for i in 0..len {
            p[start + i] = start + (i + 1) % len;
        }
        start += len;
    }
    p
}

pub fn identity_matrix(d: usize) -> DenseMatrix {
    (0..d).map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn mat_mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (r, k) = (a.len(), b.len());
    let c = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Q::zero(); c]; r];
    for i in 0..r {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

pub fn trace(a: &DenseMatrix) -> Q {
    a.iter().enumerate().map(|(i, row)| row[i].clone()).sum()
}

/// A representation of `S_n` given by its simple transpositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermRep {
    n: usize,
    dim: usize,
    gens: Vec<DenseMatrix>,
}

impl PermRep {
    pub fn new(n: usize, dim: usize, gens: Vec<DenseMatrix>) -> Result<Self, TraceError> {
        if gens.len() != n.saturating_sub(1)
            || gens.iter().any(|g| g.len() != dim || g.iter().any(|r| r.len() != dim))
        {
            return Err(TraceError::Shape("one dim x dim matrix per simple transposition".into()));
        }
        let r = Self { n, dim, gens };
        if !r.relations_hold() {
            return Err(TraceError::Relations("Coxeter relations fail".into()));
        }
        Ok(r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[DenseMatrix] {
        &self.gens
    }

    pub fn relations_hold(&self) -> bool {
        coxeter_relations_hold(&self.gens, self.dim)
    }

    pub fn matrix(&self, p: &[usize]) -> DenseMatrix {
        reduced_word(p).iter().fold(identity_matrix(self.dim), |acc, &k| mat_mul(&acc, &self.gens[k]))
    }

    pub fn character_at(&self, p: &[usize]) -> Q {
        trace(&self.matrix(p))
    }

    /// Values on the classes of [`partitions`], in that order.
    pub fn character(&self) -> Vec<Q> {
        partitions(self.n).iter().map(|ct| self.character_at(&class_representative(ct))).collect()
    }
}

pub fn coxeter_relations_hold(gens: &[DenseMatrix], dim: usize) -> bool {
    let id = identity_matrix(dim);
    for (i, s) in gens.iter().enumerate() {
        if mat_mul(s, s) != id {
            return false;
        }
        for (j, t) in gens.iter().enumerate().skip(i + 1) {
            let st = mat_mul(s, t);
            let ok = if j == i + 1 {
                mat_mul(&mat_mul(&st, &st), &st) == id
            } else {
                st == mat_mul(t, s)
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

fn check_range(a: usize, n: usize) -> Result<(), TraceError> {
    if a > n || n == 0 || n > 12 {
        return Err(TraceError::Range(format!("need 0 <= a <= n, 1 <= n <= 12; got a = {a}, n = {n}")));
    }
    Ok(())
}

/// `wedge^a` of the permutation representation on the basis
/// `e_{i_1} ^ .. ^ e_{i_a}`, `i_1 < .. < i_a`, in lexicographic order.
pub fn wedge_perm_rep(a: usize, n: usize) -> Result<PermRep, TraceError> {
    check_range(a, n)?;
    let basis = subsets(n, a);
    let gens = (0..n - 1)
        .map(|k| {
            let s = transposition(n, k);
            let mut m = vec![vec![Q::zero(); basis.len()]; basis.len()];
            for (j, &b) in basis.iter().enumerate() {
                let (sg, img) = act_on_subset(&s, b);
                let i = basis.iter().position(|&x| x == img).expect("closed under S_n");
                m[i][j] = Q::from_integer(sg.into());
            }
            m
        })
        .collect();
    PermRep::new(n, basis.len(), gens)
}

/// `Ind_{S_a x S_{n-a}}^{S_n}(sign (x) triv)`: one basis vector per coset
/// `r_A H`, where `r_A` sends `0..a` onto `A` and `a..n` onto its
/// complement, both increasingly.
pub fn induced_rep(a: usize, n: usize) -> Result<PermRep, TraceError> {
    check_range(a, n)?;
    let cosets = subsets(n, a);
    let rep = |set: u32| -> Perm {
        let inside = (0..n).filter(|i| set >> i & 1 == 1);
        let outside = (0..n).filter(|i| set >> i & 1 == 0);
        inside.chain(outside).collect()
    };
    let gens = (0..n - 1)
        .map(|k| {
            let s = transposition(n, k);
            let mut m = vec![vec![Q::zero(); cosets.len()]; cosets.len()];
            for (j, &set) in cosets.iter().enumerate() {
                let moved = compose(&s, &rep(set));
                let target = (0..a).fold(0u32, |acc, i| acc | 1 << moved[i]);
                let h = compose(&inverse(&rep(target)), &moved);
                debug_assert!((0..a).all(|i| h[i] < a));
                let i = cosets.iter().position(|&x| x == target).expect("coset");
                m[i][j] = Q::from_integer(sign(&h[..a]).into());
            }
            m
        })
        .collect();
    PermRep::new(n, cosets.len(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::q;

    #[test]
    fn reduced_words_multiply_back() {
        for p in all_perms(4) {
            let back = reduced_word(&p).iter().fold((0..4).collect::<Perm>(), |acc, &k| compose(&acc, &transposition(4, k)));
            assert_eq!(back, p);
        }
    }

    #[test]
    fn lehmer_index_is_lex_rank() {
        for (i, p) in all_perms(4).iter().enumerate() {
            assert_eq!(perm_index(p), i);
        }
    }

    #[test]
    fn small_characters() {
        let ch = |r: PermRep| r.character();
        assert_eq!(ch(wedge_perm_rep(1, 2).unwrap()), vec![q(2), q(0)]);
        assert_eq!(ch(wedge_perm_rep(2, 2).unwrap()), vec![q(1), q(-1)]);
        assert_eq!(ch(wedge_perm_rep(1, 3).unwrap()), vec![q(3), q(1), q(0)]);
        assert_eq!(induced_rep(2, 3).unwrap().dim(), 3);
        assert_eq!(ch(induced_rep(1, 2).unwrap()), vec![q(2), q(0)]);
    }

    #[test]
    fn characters_are_class_functions() {
        let r = wedge_perm_rep(2, 4).unwrap();
        for p in all_perms(4) {
            let mut ct: Vec<usize> = cycle_lengths(&p);
            ct.sort();
            assert_eq!(r.character_at(&p), r.character_at(&class_representative(&ct)));
        }
    }

    fn cycle_lengths(p: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; p.len()];
        let mut out = Vec::new();
        for i in 0..p.len() {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = p[j];
                len += 1;
            }
            if len > 0 {
                out.push(len);
            }
        }
        out
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b01, 0b10), Some(1));
        assert_eq!(wedge_sign(0b10, 0b01), Some(-1));
        assert_eq!(wedge_sign(0b11, 0b01), None);
        assert_eq!(act_on_subset(&[1, 0], 0b11), (-1, 0b11));
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(wedge_perm_rep(3, 2), Err(TraceError::Range(_))));
        assert!(induced_rep(0, 0).is_err());
    }
}
