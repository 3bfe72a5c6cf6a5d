//! Sparse exact linear algebra over a field: incremental echelon forms,
//! rank, kernels and membership tests.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::scalar::{mulmod, powmod, RatFunc, Rational};

pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; only called on nonzero values.
    fn inv(&self) -> Self;
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn inv(&self) -> Self {
        RatFunc::inv(self).expect("nonzero pivot")
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// The Mersenne prime 2^61 - 1.
pub const FP_MODULUS: u64 = (1u64 << 61) - 1;

/// Element of the prime field of order [`FP_MODULUS`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp(pub u64);

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp((self.0 + o.0) % FP_MODULUS)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp((self.0 + FP_MODULUS - o.0) % FP_MODULUS)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(mulmod(self.0, o.0, FP_MODULUS))
    }
    fn neg(&self) -> Self {
        Fp((FP_MODULUS - self.0) % FP_MODULUS)
    }
    fn inv(&self) -> Self {
        Fp(powmod(self.0, FP_MODULUS - 2, FP_MODULUS))
    }
}

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec<F> = Vec<(usize, F)>;

pub fn sparse_from_dense<F: Field>(v: &[F]) -> SparseVec<F> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Row-echelon form built incrementally. Every stored row is monic at its
/// pivot and the pivot columns are distinct.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduce `v` against the stored rows until no entry sits in a pivot
    /// column.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut work: BTreeMap<usize, F> = v.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = work.range(cursor..).find(|(c, _)| self.rows.contains_key(c)).map(|(c, x)| (*c, x.clone()));
            let Some((col, coef)) = next else { break };
            let row = &self.rows[&col];
            for (j, x) in row {
                let t = coef.mul(x);
                let e = work.entry(*j).or_insert_with(F::zero);
                *e = e.sub(&t);
                if e.is_zero() {
                    work.remove(j);
                }
            }
            cursor = col + 1;
        }
        work.into_iter().collect()
    }

    /// Insert a row; returns false if it was dependent on the stored rows.
    pub fn insert(&mut self, v: &SparseVec<F>) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let (p, lead) = r[0].clone();
        let li = lead.inv();
        let r: SparseVec<F> = r.into_iter().map(|(j, x)| (j, x.mul(&li))).collect();
        self.rows.insert(p, r);
        true
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Fully reduced rows (each pivot column is zero in all other rows).
    pub fn reduced_rows(&self) -> BTreeMap<usize, SparseVec<F>> {
        let mut out: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut work: BTreeMap<usize, F> = row.iter().cloned().collect();
            let cols: Vec<usize> = work.keys().copied().filter(|c| *c != p && out.contains_key(c)).collect();
            for c in cols {
                let Some(coef) = work.get(&c).cloned() else { continue };
                for (j, x) in &out[&c] {
                    let t = coef.mul(x);
                    let e = work.entry(*j).or_insert_with(F::zero);
                    *e = e.sub(&t);
                    if e.is_zero() {
                        work.remove(j);
                    }
                }
            }
            out.insert(p, work.into_iter().collect());
        }
        out
    }
}

pub fn rank<F: Field>(rows: &[SparseVec<F>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{ x : sum_j x_j * col_j = 0 }` where `cols` lists the columns of
/// a matrix as sparse vectors over the row index space. Equivalently the
/// kernel of the linear map sending basis vector j to `cols[j]`.
pub fn kernel_of_columns<F: Field>(cols: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    // Transpose into rows indexed by row index.
    let mut rows: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c {
            rows.entry(*i).or_default().push((j, x.clone()));
        }
    }
    let mut e = Echelon::new();
    for r in rows.values() {
        e.insert(r);
    }
    let red = e.reduced_rows();
    let n = cols.len();
    let mut out = Vec::new();
    for free in 0..n {
        if red.contains_key(&free) {
            continue;
        }
        let mut v: SparseVec<F> = Vec::new();
        for (&p, row) in &red {
            if let Some((_, x)) = row.iter().find(|(j, _)| *j == free) {
                v.push((p, x.neg()));
            }
        }
        v.push((free, F::one()));
        v.sort_by_key(|t| t.0);
        out.push(v);
    }
    out
}

/// Solve `sum_j x_j * cols[j] = b` if possible.
pub fn solve_columns<F: Field>(cols: &[SparseVec<F>], b: &SparseVec<F>) -> Option<SparseVec<F>> {
    let n = cols.len();
    // Augment: unknown columns 0..n, right-hand side at column n.
    let mut rows: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c {
            rows.entry(*i).or_default().push((j, x.clone()));
        }
    }
    for (i, x) in b {
        rows.entry(*i).or_default().push((n, x.clone()));
    }
    let mut e = Echelon::new();
    for r in rows.values() {
        e.insert(r);
    }
    if e.rows.contains_key(&n) {
        return None;
    }
    let red = e.reduced_rows();
    let mut x: SparseVec<F> = Vec::new();
    for (&p, row) in &red {
        if let Some((_, v)) = row.iter().find(|(j, _)| *j == n) {
            x.push((p, v.clone()));
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn sv(v: &[i64]) -> SparseVec<Rational> {
        sparse_from_dense(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&[sv(&[1, 2, 3]), sv(&[2, 4, 6]), sv(&[0, 1, 1])]), 2);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let cols = vec![sv(&[1, 0]), sv(&[0, 1]), sv(&[1, 1])];
        let k = kernel_of_columns(&cols);
        assert_eq!(k.len(), 1);
        let mut acc = vec![rat(0), rat(0)];
        for (j, x) in &k[0] {
            for (i, y) in &cols[*j] {
                acc[*i] += x * y;
            }
        }
        assert!(acc.iter().all(|x| Zero::is_zero(x)));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let cols = vec![sv(&[1, 1]), sv(&[1, -1])];
        let x = solve_columns(&cols, &sv(&[3, 1])).unwrap();
        assert_eq!(x, vec![(0, rat(2)), (1, rat(1))]);
        let cols = vec![sv(&[1, 1])];
        assert!(solve_columns(&cols, &sv(&[1, 0])).is_none());
    }

    #[test]
    fn prime_field_inverse() {
        let a = Fp(123456789);
        assert_eq!(a.mul(&a.inv()), Fp(1));
    }
}
