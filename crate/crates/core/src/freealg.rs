//! Free algebras modulo homogeneous two-sided ideals, built one multidegree
//! at a time. A piece `A_mu` is the quotient of `sum_i A_{mu - deg(i)} (x) x_i`
//! by the images `A_{mu - deg(r)} . r` of the relations, so every piece only
//! ever stores a basis and a projection table.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::linalg::{Echelon, Field, SparseVec};

/// Element of the free algebra: word (letter indices) to coefficient.
pub type FreeElem<F> = Vec<(Vec<usize>, F)>;

#[derive(Clone, Debug)]
struct Piece<F: Field> {
    /// (letter, basis index of the predecessor piece) -> pre-column index.
    pre_index: HashMap<(usize, usize), usize>,
    /// Projection of each pre-column onto the quotient basis.
    proj: Vec<SparseVec<F>>,
    dim: usize,
    /// A word representing each basis element.
    basis_words: Vec<Vec<usize>>,
}

pub struct FreeQuotient<F: Field> {
    letter_deg: Vec<Vec<u32>>,
    relations: Vec<(Vec<u32>, FreeElem<F>)>,
    pieces: HashMap<Vec<u32>, Piece<F>>,
}

fn sub_deg(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

fn add_deg(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<F: Field> FreeQuotient<F> {
    /// Relations must be homogeneous for the letter multidegrees.
    pub fn new(letter_deg: Vec<Vec<u32>>, relations: Vec<FreeElem<F>>) -> Self {
        let k = letter_deg.first().map_or(0, |d| d.len());
        let rels = relations
            .into_iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut d = vec![0u32; k];
                for &l in &r[0].0 {
                    d = add_deg(&d, &letter_deg[l]);
                }
                for (w, _) in &r {
                    let mut e = vec![0u32; k];
                    for &l in w {
                        e = add_deg(&e, &letter_deg[l]);
                    }
                    assert_eq!(e, d, "inhomogeneous relation");
                }
                (d, r)
            })
            .collect();
        FreeQuotient { letter_deg, relations: rels, pieces: HashMap::new() }
    }

    pub fn num_letters(&self) -> usize {
        self.letter_deg.len()
    }

    pub fn word_degree(&self, w: &[usize]) -> Vec<u32> {
        let k = self.letter_deg.first().map_or(0, |d| d.len());
        w.iter().fold(vec![0; k], |acc, &l| add_deg(&acc, &self.letter_deg[l]))
    }

    fn ensure(&mut self, mu: &[u32]) {
        if self.pieces.contains_key(mu) {
            return;
        }
        if mu.iter().all(|&x| x == 0) {
            self.pieces.insert(
                mu.to_vec(),
                Piece { pre_index: HashMap::new(), proj: Vec::new(), dim: 1, basis_words: vec![vec![]] },
            );
            return;
        }
        for l in 0..self.num_letters() {
            if let Some(nu) = sub_deg(mu, &self.letter_deg[l]) {
                self.ensure(&nu);
            }
        }
        // Every prefix degree of every relation placed at the end of mu.
        let mut needed: BTreeSet<Vec<u32>> = BTreeSet::new();
        for (d, r) in &self.relations {
            if let Some(nu) = sub_deg(mu, d) {
                for (w, _) in r {
                    let mut cur = nu.clone();
                    needed.insert(cur.clone());
                    for &l in &w[..w.len() - 1] {
                        cur = add_deg(&cur, &self.letter_deg[l]);
                        needed.insert(cur.clone());
                    }
                }
            }
        }
        for nu in needed {
            self.ensure(&nu);
        }
        let piece = self.build(mu);
        self.pieces.insert(mu.to_vec(), piece);
    }

    fn build(&self, mu: &[u32]) -> Piece<F> {
        let mut pre_index = HashMap::new();
        let mut pre_list: Vec<(usize, usize)> = Vec::new();
        for l in 0..self.num_letters() {
            if let Some(nu) = sub_deg(mu, &self.letter_deg[l]) {
                let prev = &self.pieces[&nu];
                for j in 0..prev.dim {
                    pre_index.insert((l, j), pre_list.len());
                    pre_list.push((l, j));
                }
            }
        }
        let mut ech: Echelon<F> = Echelon::new();
        for (d, r) in &self.relations {
            let Some(nu) = sub_deg(mu, d) else { continue };
            let base_dim = self.pieces[&nu].dim;
            for b in 0..base_dim {
                let mut row: BTreeMap<usize, F> = BTreeMap::new();
                for (w, c) in r {
                    let mut cur_deg = nu.clone();
                    let mut v: SparseVec<F> = vec![(b, F::one())];
                    for &l in &w[..w.len() - 1] {
                        v = self.mul_letter_vec(&cur_deg, &v, l);
                        cur_deg = add_deg(&cur_deg, &self.letter_deg[l]);
                    }
                    let last = *w.last().expect("nonempty relation word");
                    for (j, x) in v {
                        let col = pre_index[&(last, j)];
                        let e = row.entry(col).or_insert_with(F::zero);
                        *e = e.add(&x.mul(c));
                    }
                }
                let row: SparseVec<F> = row.into_iter().filter(|(_, x)| !x.is_zero()).collect();
                ech.insert(&row);
            }
        }
        let red = ech.reduced_rows();
        let mut basis_of_col: HashMap<usize, usize> = HashMap::new();
        let mut basis_words = Vec::new();
        for (c, &(l, j)) in pre_list.iter().enumerate() {
            if !red.contains_key(&c) {
                basis_of_col.insert(c, basis_words.len());
                let nu = sub_deg(mu, &self.letter_deg[l]).expect("valid predecessor");
                let mut w = self.pieces[&nu].basis_words[j].clone();
                w.push(l);
                basis_words.push(w);
            }
        }
        let proj = (0..pre_list.len())
            .map(|c| {
                if let Some(&b) = basis_of_col.get(&c) {
                    vec![(b, F::one())]
                } else {
                    let mut v: SparseVec<F> = red[&c]
                        .iter()
                        .filter(|(j, _)| *j != c)
                        .map(|(j, x)| (basis_of_col[j], x.neg()))
                        .collect();
                    v.sort_by_key(|t| t.0);
                    v
                }
            })
            .collect();
        Piece { pre_index, proj, dim: basis_words.len(), basis_words }
    }

    /// Right multiplication of a vector in `A_nu` by a letter.
    fn mul_letter_vec(&self, nu: &[u32], v: &SparseVec<F>, l: usize) -> SparseVec<F> {
        let mu = add_deg(nu, &self.letter_deg[l]);
        let piece = &self.pieces[&mu];
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (j, x) in v {
            let col = piece.pre_index[&(l, *j)];
            for (b, y) in &piece.proj[col] {
                let e = acc.entry(*b).or_insert_with(F::zero);
                *e = e.add(&x.mul(y));
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    pub fn dim(&mut self, mu: &[u32]) -> usize {
        self.ensure(mu);
        self.pieces[mu].dim
    }

    /// Coordinates of a word in the basis of its piece.
    pub fn reduce_word(&mut self, w: &[usize]) -> (Vec<u32>, SparseVec<F>) {
        let mu = self.word_degree(w);
        self.ensure(&mu);
        let k = mu.len();
        let mut cur = vec![0u32; k];
        let mut v: SparseVec<F> = vec![(0, F::one())];
        for &l in w {
            v = self.mul_letter_vec(&cur, &v, l);
            cur = add_deg(&cur, &self.letter_deg[l]);
        }
        (mu, v)
    }

    /// Coordinates of a homogeneous element; `None` for the zero element.
    pub fn reduce(&mut self, e: &FreeElem<F>) -> Option<(Vec<u32>, SparseVec<F>)> {
        let mut mu_out = None;
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (w, c) in e {
            let (mu, v) = self.reduce_word(w);
            if let Some(m) = &mu_out {
                assert_eq!(m, &mu, "inhomogeneous element");
            }
            mu_out = Some(mu);
            for (j, x) in v {
                let t = acc.entry(j).or_insert_with(F::zero);
                *t = t.add(&x.mul(c));
            }
        }
        mu_out.map(|m| (m, acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()))
    }

    /// Multidegrees reachable with exactly `d` letters.
    pub fn degrees_of_length(&self, d: usize) -> BTreeSet<Vec<u32>> {
        let k = self.letter_deg.first().map_or(0, |x| x.len());
        let mut cur: BTreeSet<Vec<u32>> = BTreeSet::from([vec![0; k]]);
        for _ in 0..d {
            cur = cur
                .iter()
                .flat_map(|m| self.letter_deg.iter().map(move |ld| add_deg(m, ld)))
                .collect();
        }
        cur
    }

    /// Dimensions of the pieces spanned by words of length 0..=max_len.
    pub fn dims_by_length(&mut self, max_len: usize) -> Vec<usize> {
        (0..=max_len)
            .map(|d| {
                let degs = self.degrees_of_length(d);
                degs.iter().map(|mu| self.dim(mu)).sum()
            })
            .collect()
    }
}

/// Product of two free-algebra elements (concatenation).
pub fn free_mul<F: Field>(a: &FreeElem<F>, b: &FreeElem<F>) -> FreeElem<F> {
    let mut acc: BTreeMap<Vec<usize>, F> = BTreeMap::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            let e = acc.entry(w).or_insert_with(F::zero);
            *e = e.add(&x.mul(y));
        }
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

pub fn free_lin<F: Field>(terms: &[(F, &FreeElem<F>)]) -> FreeElem<F> {
    let mut acc: BTreeMap<Vec<usize>, F> = BTreeMap::new();
    for (c, e) in terms {
        for (w, x) in e.iter() {
            let t = acc.entry(w.clone()).or_insert_with(F::zero);
            *t = t.add(&c.mul(x));
        }
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Fp;

    #[test]
    fn polynomial_ring_in_two_variables() {
        // x1 x0 - x0 x1 = 0 gives commutative polynomials.
        let rel = vec![(vec![1, 0], Fp(1)), (vec![0, 1], Fp(1).neg())];
        let mut fq = FreeQuotient::new(vec![vec![1, 0], vec![0, 1]], vec![rel]);
        assert_eq!(fq.dims_by_length(4), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn free_algebra_without_relations() {
        let mut fq: FreeQuotient<Fp> = FreeQuotient::new(vec![vec![1], vec![1]], vec![]);
        assert_eq!(fq.dims_by_length(3), vec![1, 2, 4, 8]);
    }
}
