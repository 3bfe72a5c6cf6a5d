//! Cartan data of finite type, weights, the invariant form and reduced words
//! of the longest Weyl group element.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QmaError, Result};

/// Weight in simple-root coordinates. Coordinates are rational so that
/// fundamental weights and the row weights of quantum matrices fit; the
/// pairings that feed q-powers must still be integral.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct Weight(pub Vec<Rational64>);

impl Weight {
    pub fn zero(r: usize) -> Self {
        Weight(vec![Rational64::zero(); r])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Weight(v.iter().map(|&x| Rational64::from_integer(x)).collect())
    }

    pub fn simple_root(r: usize, i: usize) -> Self {
        let mut w = Self::zero(r);
        w.0[i] = Rational64::one();
        w
    }

    pub fn scale(&self, k: i64) -> Self {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Sequence of simple reflection indices (0-based).
pub type Word = Vec<usize>;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CartanData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub c: Vec<Vec<i64>>,
    pub d: Vec<i64>,
}

impl CartanData {
    pub fn new(c: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self> {
        let cd = CartanData { label: None, c, d };
        cd.validate()?;
        Ok(cd)
    }

    pub fn rank(&self) -> usize {
        self.d.len()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.d.len();
        if self.c.len() != r || self.c.iter().any(|row| row.len() != r) {
            return Err(QmaError::Input("Cartan matrix shape does not match symmetrizers".into()));
        }
        for i in 0..r {
            if self.d[i] <= 0 {
                return Err(QmaError::Input(format!("symmetrizer d_{} must be positive", i + 1)));
            }
            if self.c[i][i] != 2 {
                return Err(QmaError::Input(format!("c_{0}{0} must be 2", i + 1)));
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                if self.c[i][j] > 0 {
                    return Err(QmaError::Input(format!("c_{}{} must be nonpositive", i + 1, j + 1)));
                }
                if (self.c[i][j] == 0) != (self.c[j][i] == 0) {
                    return Err(QmaError::Input(format!("zero pattern of c at ({},{}) not symmetric", i + 1, j + 1)));
                }
                if self.d[i] * self.c[i][j] != self.d[j] * self.c[j][i] {
                    return Err(QmaError::Input(format!("d_i c_ij not symmetric at ({},{})", i + 1, j + 1)));
                }
            }
        }
        let b: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| self.d[i] * self.c[i][j]).collect()).collect();
        for k in 1..=r {
            let m: Vec<Vec<i64>> = (0..k).map(|i| b[i][..k].to_vec()).collect();
            if det_i64(&m) <= 0 {
                return Err(QmaError::Input("symmetrized Cartan matrix is not positive definite".into()));
            }
        }
        Ok(())
    }

    /// `(alpha_i, alpha_j) = d_i c_ij`.
    pub fn root_pairing(&self, i: usize, j: usize) -> i64 {
        self.d[i] * self.c[i][j]
    }

    pub fn pairing(&self, l: &Weight, m: &Weight) -> Rational64 {
        let r = self.rank();
        let mut acc = Rational64::zero();
        for i in 0..r {
            if l.0[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if !m.0[j].is_zero() {
                    acc += l.0[i] * m.0[j] * Rational64::from_integer(self.root_pairing(i, j));
                }
            }
        }
        acc
    }

    /// Integral pairing; an error if the value is fractional.
    pub fn int_pairing(&self, l: &Weight, m: &Weight) -> Result<i64> {
        let p = self.pairing(l, m);
        if p.is_integer() {
            Ok(p.to_integer())
        } else {
            Err(QmaError::Domain(format!("pairing ({}, {}) = {} is not integral", l, m, p)))
        }
    }

    /// `(alpha_i, m)`, which must be integral.
    pub fn simple_pairing(&self, i: usize, m: &Weight) -> Result<i64> {
        let mut acc = Rational64::zero();
        for j in 0..self.rank() {
            acc += m.0[j] * Rational64::from_integer(self.root_pairing(i, j));
        }
        if acc.is_integer() {
            Ok(acc.to_integer())
        } else {
            Err(QmaError::Domain(format!("pairing of alpha_{} with {} is not integral", i + 1, m)))
        }
    }

    /// `(alpha_i^vee, m) = (alpha_i, m) / d_i`, which must be integral.
    pub fn coroot_pairing(&self, i: usize, m: &Weight) -> Result<i64> {
        let p = self.simple_pairing(i, m)?;
        if p % self.d[i] != 0 {
            return Err(QmaError::Domain(format!("coroot pairing of alpha_{} with {} is not integral", i + 1, m)));
        }
        Ok(p / self.d[i])
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::simple_root(self.rank(), i)
    }

    /// Fundamental weight `omega_i` in root coordinates (column i of C^-1).
    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let r = self.rank();
        // Gauss-Jordan over Q on [C | e_i].
        let mut m: Vec<Vec<Rational64>> = (0..r)
            .map(|row| {
                let mut v: Vec<Rational64> = self.c[row].iter().map(|&x| Rational64::from_integer(x)).collect();
                v.push(if row == i { Rational64::one() } else { Rational64::zero() });
                v
            })
            .collect();
        for col in 0..r {
            let p = (col..r).find(|&k| !m[k][col].is_zero()).expect("Cartan matrix is invertible");
            m.swap(col, p);
            let lead = m[col][col];
            for x in m[col].iter_mut() {
                *x /= lead;
            }
            for k in 0..r {
                if k != col && !m[k][col].is_zero() {
                    let f = m[k][col];
                    let pivot_row = m[col].clone();
                    for (x, y) in m[k].iter_mut().zip(pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
        Weight((0..r).map(|k| m[k][r]).collect())
    }

    fn reflect_int(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let coef: i64 = (0..self.rank()).map(|j| beta[j] * self.c[i][j]).sum();
        let mut out = beta.to_vec();
        out[i] -= coef;
        out
    }

    /// Positive roots in root coordinates, sorted by height then lexicographically.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(b) = queue.pop_front() {
            for i in 0..r {
                let nb = self.reflect_int(i, &b);
                if nb.iter().all(|&x| x >= 0) && !seen.contains(&nb) {
                    seen.insert(nb.clone());
                    queue.push_back(nb);
                }
            }
        }
        let mut v: Vec<Vec<i64>> = seen.into_iter().collect();
        v.sort_by_key(|b| (b.iter().sum::<i64>(), b.clone()));
        v
    }

    /// Root-tracking test: the word is reduced iff every root
    /// `s_{i_1} ... s_{i_{k-1}} (alpha_{i_k})` is positive.
    pub fn is_reduced(&self, w: &[usize]) -> bool {
        let r = self.rank();
        if w.iter().any(|&i| i >= r) {
            return false;
        }
        for k in 0..w.len() {
            let mut beta = vec![0; r];
            beta[w[k]] = 1;
            for &i in w[..k].iter().rev() {
                beta = self.reflect_int(i, &beta);
            }
            if beta.iter().any(|&x| x < 0) {
                return false;
            }
        }
        true
    }

    /// The roots `beta_k = s_{i_1} ... s_{i_{k-1}} (alpha_{i_k})` of a word.
    pub fn word_roots(&self, w: &[usize]) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..w.len())
            .map(|k| {
                let mut beta = vec![0; r];
                beta[w[k]] = 1;
                for &i in w[..k].iter().rev() {
                    beta = self.reflect_int(i, &beta);
                }
                beta
            })
            .collect()
    }

    fn braid_order(&self, i: usize, j: usize) -> usize {
        match self.c[i][j] * self.c[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            _ => unreachable!("finite type"),
        }
    }

    /// Some reduced word for the longest element, greedily extended.
    pub fn longest_word(&self) -> Word {
        let mut w: Word = Vec::new();
        loop {
            let next = (0..self.rank()).find(|&i| {
                let mut t = w.clone();
                t.push(i);
                self.is_reduced(&t)
            });
            match next {
                Some(i) => w.push(i),
                None => return w,
            }
        }
    }

    /// All reduced words of the longest element, by breadth-first search
    /// over braid moves.
    pub fn reduced_words_longest(&self) -> BTreeSet<Word> {
        let start = self.longest_word();
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank() {
                for j in 0..self.rank() {
                    if i == j {
                        continue;
                    }
                    let m = self.braid_order(i, j);
                    if w.len() < m {
                        continue;
                    }
                    let pat: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
                    let rep: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { j } else { i }).collect();
                    for s in 0..=(w.len() - m) {
                        if w[s..s + m] == pat[..] {
                            let mut nw = w.clone();
                            nw[s..s + m].copy_from_slice(&rep);
                            if seen.insert(nw.clone()) {
                                queue.push_back(nw);
                            }
                        }
                    }
                }
            }
        }
        seen
    }
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
            .collect();
        let s = if j % 2 == 0 { 1 } else { -1 };
        acc += s * m[0][j] * det_i64(&minor);
    }
    acc
}

pub fn preset_cartan(label: &str) -> Result<CartanData> {
    let (c, d) = match label {
        "A1" => (vec![vec![2]], vec![1]),
        "A2" => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1]),
        "A3" => (vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], vec![1, 1, 1]),
        // alpha_1 short, alpha_2 long.
        "B2" => (vec![vec![2, -2], vec![-1, 2]], vec![1, 2]),
        "G2" => (vec![vec![2, -3], vec![-1, 2]], vec![1, 3]),
        other => return Err(QmaError::Input(format!("unknown Cartan type '{}'", other))),
    };
    let mut cd = CartanData::new(c, d)?;
    cd.label = Some(label.to_string());
    Ok(cd)
}

/// Cartan datum of type A_{n-1} (rank 0 when n = 1).
pub fn cartan_type_a(n: usize) -> CartanData {
    let r = n.saturating_sub(1);
    let c = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    CartanData { label: Some(format!("A{}", r)), c, d: vec![1; r] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for l in ["A1", "A2", "A3", "B2", "G2"] {
            preset_cartan(l).unwrap().validate().unwrap();
        }
        assert!(preset_cartan("E9").is_err());
    }

    #[test]
    fn invalid_data_rejected() {
        assert!(CartanData::new(vec![vec![2, -1], vec![-2, 2]], vec![1, 1]).is_err());
        assert!(CartanData::new(vec![vec![2, -2], vec![-2, 2]], vec![1, 1]).is_err());
        assert!(CartanData::new(vec![vec![2, 1], vec![1, 2]], vec![1, 1]).is_err());
    }

    #[test]
    fn pairings_a2() {
        let c = preset_cartan("A2").unwrap();
        let a1 = c.simple_root(0);
        let a2 = c.simple_root(1);
        assert_eq!(c.pairing(&a1, &a1), Rational64::from_integer(2));
        assert_eq!(c.pairing(&a1, &a2), Rational64::from_integer(-1));
        assert_eq!(c.pairing(&a1, &Weight::zero(2)), Rational64::zero());
    }

    #[test]
    fn reduced_words() {
        let a1 = preset_cartan("A1").unwrap();
        let a2 = preset_cartan("A2").unwrap();
        assert!(a2.is_reduced(&[0, 1, 0]));
        assert!(!a1.is_reduced(&[0, 0]));
        assert!(!a2.is_reduced(&[0, 1, 0, 1]));
        assert_eq!(a1.reduced_words_longest().into_iter().collect::<Vec<_>>(), vec![vec![0]]);
        let w: Vec<Word> = a2.reduced_words_longest().into_iter().collect();
        assert_eq!(w, vec![vec![0, 1, 0], vec![1, 0, 1]]);
        let b2 = preset_cartan("B2").unwrap().reduced_words_longest();
        assert_eq!(b2.len(), 2);
        assert!(b2.iter().all(|w| w.len() == 4));
        let g2 = preset_cartan("G2").unwrap().reduced_words_longest();
        assert!(g2.iter().all(|w| w.len() == 6));
        let a3 = preset_cartan("A3").unwrap().reduced_words_longest();
        assert_eq!(a3.len(), 16);
    }

    #[test]
    fn fundamental_weights_pair_to_delta() {
        for l in ["A2", "B2", "G2"] {
            let c = preset_cartan(l).unwrap();
            for i in 0..2 {
                let w = c.fundamental_weight(i);
                for j in 0..2 {
                    assert_eq!(c.coroot_pairing(j, &w).unwrap(), (i == j) as i64);
                }
            }
        }
    }
}
