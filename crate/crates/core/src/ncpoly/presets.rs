//! Built-in presentations.
//!
//! C_q[U] of rank 2 uses root vectors along the convex order of the reduced
//! word (1,2,1,...). A non-simple root vector is the normalized q-commutator
//!
//! ```text
//! x_c = (x_a x_b - q^{(b_a, b_b)} x_b x_a) / (q - q^-1),   a < c < b,
//! ```
//!
//! so in type A2 `x12 = (x1 x2 - q^-1 x2 x1) / (q - q^-1)` and
//! `x2 x1 = q x1 x2 - (q^2 - 1) x12`. Dividing by `q - q^-1` keeps every
//! straightening coefficient regular at q = 1. The straightening rules
//! themselves are solved for in the free algebra modulo the quantum Serre
//! relations, one multidegree at a time.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Rational64;

use super::{GenDecl, Monomial, NcPoly, Presentation, RewriteRule};
use crate::cartan::{cartan_type_a, preset_cartan, CartanData, Weight};
use crate::error::{QmaError, Result};
use crate::freealg::{free_lin, free_mul, FreeElem, FreeQuotient};
use crate::linalg::{solve_columns, Echelon, SparseVec};
use crate::scalar::{q_binomial, q_diff, RatFunc};

/// Root vectors of C_q[U] as elements of the free algebra on the
/// Chevalley generators.
#[derive(Clone, Debug)]
pub struct PbwData {
    /// Generator index of `x_i` for each simple root `i`.
    pub simple: Vec<usize>,
    /// Root (in simple-root coordinates) of each generator.
    pub roots: Vec<Vec<i64>>,
    /// Each generator as a combination of Chevalley words.
    pub expansions: Vec<FreeElem<RatFunc>>,
    /// Index of the first generator of this root-vector family.
    pub offset: usize,
}

/// Quantum Serre relations on Chevalley letters `0..r`.
pub fn serre_relations(c: &CartanData) -> Vec<FreeElem<RatFunc>> {
    let r = c.rank();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let n = (1 - c.c[i][j]) as u32;
            let mut rel = Vec::new();
            for k in 0..=n {
                let mut w = vec![i; k as usize];
                w.push(j);
                w.extend(std::iter::repeat(i).take((n - k) as usize));
                let mut coef = q_binomial(n, k, c.d[i] as u32);
                if k % 2 == 1 {
                    coef = coef.neg();
                }
                rel.push((w, coef));
            }
            out.push(rel);
        }
    }
    out
}

pub fn root_label(beta: &[i64]) -> String {
    let mut s = String::new();
    for (i, &n) in beta.iter().enumerate() {
        for _ in 0..n {
            s.push_str(&(i + 1).to_string());
        }
    }
    s
}

fn neg_root_weight(beta: &[i64]) -> Weight {
    Weight(beta.iter().map(|&x| Rational64::from_integer(-x)).collect())
}

fn free_quotient_for(c: &CartanData) -> FreeQuotient<RatFunc> {
    let r = c.rank();
    let letters = (0..r)
        .map(|i| (0..r).map(|j| (i == j) as u32).collect())
        .collect();
    FreeQuotient::new(letters, serre_relations(c))
}

/// Root vectors and straightening rules for a convex order.
struct Pbw {
    roots: Vec<Vec<i64>>,
    expansions: Vec<FreeElem<RatFunc>>,
    /// `(b, a)` -> coefficients on exponent vectors over the root vectors.
    rules: Vec<((usize, usize), Vec<(Vec<i32>, RatFunc)>)>,
}

fn pbw_exponents(roots: &[Vec<i64>], mu: &[i64]) -> Vec<Vec<i32>> {
    fn go(roots: &[Vec<i64>], k: usize, left: Vec<i64>, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if k == roots.len() {
            if left.iter().all(|&x| x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let mut rem = left.clone();
        let mut e = 0;
        loop {
            cur[k] = e;
            go(roots, k + 1, rem.clone(), cur, out);
            if rem.iter().zip(&roots[k]).any(|(x, y)| x < y) {
                break;
            }
            rem = rem.iter().zip(&roots[k]).map(|(x, y)| x - y).collect();
            e += 1;
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; roots.len()];
    go(roots, 0, mu.to_vec(), &mut cur, &mut out);
    out
}

fn derive_pbw(c: &CartanData) -> Result<Pbw> {
    let r = c.rank();
    if r > 2 {
        return Err(QmaError::OutOfScope("root-vector presets are implemented for rank <= 2".into()));
    }
    let word = c.longest_word();
    let roots = c.word_roots(&word);
    let n = roots.len();
    let mut fq = free_quotient_for(c);
    let pair = |a: &[i64], b: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..r {
            for j in 0..r {
                s += a[i] * b[j] * c.root_pairing(i, j);
            }
        }
        s
    };
    let mut expansions: Vec<Option<FreeElem<RatFunc>>> = vec![None; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| roots[k].iter().sum::<i64>());
    let norm = q_diff(1).inv().expect("nonzero");
    for &k in &order {
        let h: i64 = roots[k].iter().sum();
        if h == 1 {
            let i = roots[k].iter().position(|&x| x == 1).expect("simple");
            expansions[k] = Some(vec![(vec![i], RatFunc::one())]);
            continue;
        }
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for a in 0..k {
            for b in k + 1..n {
                let s: Vec<i64> = roots[a].iter().zip(&roots[b]).map(|(x, y)| x + y).collect();
                if s == roots[k] {
                    cands.push((a, b));
                }
            }
        }
        cands.sort_by_key(|&(a, b)| (b - a, a));
        let mut found = None;
        for (a, b) in cands {
            let (Some(ea), Some(eb)) = (&expansions[a], &expansions[b]) else { continue };
            let ab = free_mul(ea, eb);
            let ba = free_mul(eb, ea);
            let cq = RatFunc::q_pow(pair(&roots[a], &roots[b]) as i32);
            let e = free_lin(&[(norm.clone(), &ab), (norm.mul(&cq).neg(), &ba)]);
            if fq.reduce(&e).is_some_and(|(_, v)| !v.is_empty()) {
                found = Some(e);
                break;
            }
        }
        expansions[k] = Some(found.ok_or_else(|| QmaError::Certification(format!("no root vector for {:?}", roots[k])))?);
    }
    let expansions: Vec<FreeElem<RatFunc>> = expansions.into_iter().map(|e| e.expect("all roots")).collect();

    let product = |exps: &[i32]| -> FreeElem<RatFunc> {
        let mut acc: FreeElem<RatFunc> = vec![(vec![], RatFunc::one())];
        for (k, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                acc = free_mul(&acc, &expansions[k]);
            }
        }
        acc
    };
    let mut rules = Vec::new();
    for b in 0..n {
        for a in 0..b {
            let mu: Vec<i64> = roots[a].iter().zip(&roots[b]).map(|(x, y)| x + y).collect();
            let monos = pbw_exponents(&roots, &mu);
            let mut cols: Vec<SparseVec<RatFunc>> = Vec::new();
            let mut ech: Echelon<RatFunc> = Echelon::new();
            for m in &monos {
                let v = fq.reduce(&product(m)).map(|x| x.1).unwrap_or_default();
                ech.insert(&v);
                cols.push(v);
            }
            let mu_u: Vec<u32> = mu.iter().map(|&x| x as u32).collect();
            let dim = fq.dim(&mu_u);
            if ech.rank() != monos.len() || dim != monos.len() {
                return Err(QmaError::Certification(format!(
                    "ordered root-vector monomials of multidegree {:?} are not a basis ({} monomials, rank {}, dim {})",
                    mu,
                    monos.len(),
                    ech.rank(),
                    dim
                )));
            }
            let target = fq.reduce(&free_mul(&expansions[b], &expansions[a])).map(|x| x.1).unwrap_or_default();
            let sol = solve_columns(&cols, &target).ok_or_else(|| QmaError::Certification("straightening not solvable".into()))?;
            let rhs = sol.into_iter().map(|(j, x)| (monos[j].clone(), x)).collect();
            rules.push(((b, a), rhs));
        }
    }
    Ok(Pbw { roots, expansions, rules })
}

fn pbw_cached(c: &CartanData) -> Result<Arc<Pbw>> {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<Vec<i64>>, Vec<i64>), Arc<Pbw>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (c.c.clone(), c.d.clone());
    if let Some(p) = cache.lock().expect("lock").get(&key) {
        return Ok(p.clone());
    }
    let p = Arc::new(derive_pbw(c)?);
    cache.lock().expect("lock").insert(key, p.clone());
    Ok(p)
}

fn pbw_rules(pbw: &Pbw, offset: usize, ngens: usize) -> Vec<RewriteRule> {
    pbw.rules
        .iter()
        .map(|((b, a), rhs)| {
            let mut p = NcPoly::zero();
            for (e, x) in rhs {
                let mut m = Monomial::one(ngens);
                for (k, &v) in e.iter().enumerate() {
                    m.0[offset + k] = v;
                }
                p.add_term(&m, x);
            }
            RewriteRule { lhs: (offset + b, offset + a), rhs: p }
        })
        .collect()
}

/// C_q[U] by root vectors (rank 1 or 2).
pub fn cq_u(c: &CartanData) -> Result<Presentation> {
    if c.rank() == 0 || c.rank() > 2 {
        return Err(QmaError::OutOfScope("C_q[U] presets need rank 1 or 2".into()));
    }
    let pbw = pbw_cached(c)?;
    let gens: Vec<GenDecl> = pbw
        .roots
        .iter()
        .map(|b| GenDecl::new(&format!("x{}", root_label(b)), neg_root_weight(b)).with_degree(b.iter().sum::<i64>() as u32))
        .collect();
    let name = format!("cqU-{}", c.label.clone().unwrap_or_else(|| "custom".into()));
    let mut p = Presentation::new(&name, c.clone(), gens)?;
    let n = p.ngens();
    p.set_rules(pbw_rules(&pbw, 0, n))?;
    p.pbw = Some(Arc::new(pbw_data(&pbw, 0)));
    Ok(p)
}

fn pbw_data(pbw: &Pbw, offset: usize) -> PbwData {
    let r = pbw.roots[0].len();
    let simple = (0..r)
        .map(|i| offset + pbw.roots.iter().position(|b| b.iter().sum::<i64>() == 1 && b[i] == 1).expect("simple root"))
        .collect();
    PbwData { simple, roots: pbw.roots.clone(), expansions: pbw.expansions.clone(), offset }
}

/// Row weights `eps_1, ..., eps_m` of sl_m in root coordinates.
pub fn eps_weights(m: usize) -> Vec<Weight> {
    let r = m.saturating_sub(1);
    let mut out = Vec::new();
    let mut cur = Weight((0..r).map(|k| Rational64::new((r - k) as i64, m as i64)).collect());
    for j in 0..m {
        out.push(cur.clone());
        if j < r {
            cur.0[j] -= Rational64::from_integer(1);
        }
    }
    out
}

fn qmat_grade(m: usize, n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut g = vec![0i64; m + n];
    g[i] = 1;
    g[m + j] = 1;
    g
}

/// Quantum m x n matrices; generators `x{i}{j}` in row-major order.
pub fn qmatrix(m: usize, n: usize) -> Result<Presentation> {
    if m == 0 || n == 0 || m > 9 || n > 9 {
        return Err(QmaError::Input("quantum matrix sizes must lie in 1..=9".into()));
    }
    let c = cartan_type_a(m);
    let eps = eps_weights(m);
    let mut gens = Vec::new();
    for i in 0..m {
        for j in 0..n {
            gens.push(GenDecl::new(&format!("x{}{}", i + 1, j + 1), eps[i].clone()).with_grade(qmat_grade(m, n, i, j)));
        }
    }
    let mut p = Presentation::new(&format!("qmat-{}-{}", m, n), c, gens)?;
    let idx = |i: usize, j: usize| i * n + j;
    let ng = m * n;
    let mono2 = |a: usize, b: usize| {
        let mut mm = Monomial::one(ng);
        mm.0[a] += 1;
        mm.0[b] += 1;
        mm
    };
    let mut rules = Vec::new();
    for k in 0..m {
        for l in 0..n {
            for i in 0..m {
                for j in 0..n {
                    let (b, a) = (idx(k, l), idx(i, j));
                    if b <= a {
                        continue;
                    }
                    let mut rhs = NcPoly::zero();
                    if k == i || l == j {
                        rhs.add_term(&mono2(a, b), &RatFunc::q_pow(1));
                    } else if l < j {
                        rhs.add_term(&mono2(a, b), &RatFunc::one());
                    } else {
                        rhs.add_term(&mono2(a, b), &RatFunc::one());
                        rhs.add_term(&mono2(idx(i, l), idx(k, j)), &q_diff(1));
                    }
                    rules.push(RewriteRule { lhs: (b, a), rhs });
                }
            }
        }
    }
    p.set_rules(rules)?;
    Ok(p)
}

fn rules_from_text(p: &Presentation, rules: &[(&str, &str, &str)]) -> Result<Vec<RewriteRule>> {
    rules
        .iter()
        .map(|(b, a, rhs)| {
            let bi = p.gen_index(b).ok_or_else(|| QmaError::Input(format!("unknown generator {}", b)))?;
            let ai = p.gen_index(a).ok_or_else(|| QmaError::Input(format!("unknown generator {}", a)))?;
            Ok(RewriteRule { lhs: (bi, ai), rhs: super::parse::parse_normal(rhs, p)? })
        })
        .collect()
}

fn add_alias(p: &mut Presentation, name: &str, expr: &str) -> Result<()> {
    let v = super::parse_expr(expr, p)?;
    p.aliases.push((name.to_string(), v));
    Ok(())
}

/// `C_q[Mat_{3,2}][x11^-1, D^-1]` with `D = x11 x22 - q^-1 x12 x21`.
///
/// `x22` is not a generator: it equals `x11^-1 (D + q^-1 x12 x21)` and is
/// available as an alias, as are `y = x11^-1` and `z = D^-1`.
pub fn localized_qmat32() -> Result<Presentation> {
    let c = cartan_type_a(3);
    let eps = eps_weights(3);
    let g = |i: usize, j: usize| qmat_grade(3, 2, i, j);
    let dgrade: Vec<i64> = g(0, 0).iter().zip(g(1, 1)).map(|(a, b)| a + b).collect();
    let gens = vec![
        GenDecl::new("x11", eps[0].clone()).invertible().with_grade(g(0, 0)),
        GenDecl::new("D", &eps[0] + &eps[1]).invertible().with_degree(2).with_grade(dgrade),
        GenDecl::new("x12", eps[0].clone()).with_grade(g(0, 1)),
        GenDecl::new("x21", eps[1].clone()).with_grade(g(1, 0)),
        GenDecl::new("x31", eps[2].clone()).with_grade(g(2, 0)),
        GenDecl::new("x32", eps[2].clone()).with_grade(g(2, 1)),
    ];
    let mut p = Presentation::new("localized-qmat32", c, gens)?;
    let rules = rules_from_text(
        &p,
        &[
            ("D", "x11", "x11*D"),
            ("x12", "x11", "q*x11*x12"),
            ("x12", "D", "D*x12"),
            ("x21", "x11", "q*x11*x21"),
            ("x21", "D", "D*x21"),
            ("x21", "x12", "x12*x21"),
            ("x31", "x11", "q*x11*x31"),
            ("x31", "D", "q*D*x31"),
            ("x31", "x12", "x12*x31"),
            ("x31", "x21", "q*x21*x31"),
            ("x32", "x11", "x11*x32 + (q-q^-1)*x12*x31"),
            ("x32", "D", "q*D*x32"),
            ("x32", "x12", "q*x12*x32"),
            ("x32", "x21", "x21*x32 + (q-q^-1)*x11^-1*D*x31 + (1-q^-2)*x11^-1*x12*x21*x31"),
            ("x32", "x31", "q*x31*x32"),
        ],
    )?;
    p.set_rules(rules)?;
    add_alias(&mut p, "y", "x11^-1")?;
    add_alias(&mut p, "z", "D^-1")?;
    add_alias(&mut p, "x22", "x11^-1*D + q^-1*x11^-1*x12*x21")?;
    add_alias(&mut p, "Delta2", "D")?;
    Ok(p)
}

/// The highest-weight part `C_q[x11^+-1, x12, D^+-1]` of the localized
/// 3 x 2 quantum matrices.
pub fn qmat32_plus() -> Result<Presentation> {
    let c = cartan_type_a(3);
    let eps = eps_weights(3);
    let g = |i: usize, j: usize| qmat_grade(3, 2, i, j);
    let dgrade: Vec<i64> = g(0, 0).iter().zip(g(1, 1)).map(|(a, b)| a + b).collect();
    let gens = vec![
        GenDecl::new("x11", eps[0].clone()).invertible().with_grade(g(0, 0)),
        GenDecl::new("D", &eps[0] + &eps[1]).invertible().with_degree(2).with_grade(dgrade),
        GenDecl::new("x12", eps[0].clone()).with_grade(g(0, 1)),
    ];
    let mut p = Presentation::new("qmat32-plus", c, gens)?;
    let rules = rules_from_text(&p, &[("D", "x11", "x11*D"), ("x12", "x11", "q*x11*x12"), ("x12", "D", "D*x12")])?;
    p.set_rules(rules)?;
    add_alias(&mut p, "y", "x11^-1")?;
    add_alias(&mut p, "z", "D^-1")?;
    Ok(p)
}

/// Commutative Laurent algebra on `t_i = v_{alpha_i}` with weight `alpha_i`.
pub fn weight_torus(c: &CartanData) -> Result<Presentation> {
    let r = c.rank();
    let gens = (0..r).map(|i| GenDecl::new(&format!("t{}", i + 1), c.simple_root(i)).invertible()).collect();
    let name = format!("torus-{}", c.label.clone().unwrap_or_else(|| "custom".into()));
    let mut p = Presentation::new(&name, c.clone(), gens)?;
    let mut rules = Vec::new();
    for b in 0..r {
        for a in 0..b {
            let mut m = Monomial::one(r);
            m.0[a] = 1;
            m.0[b] = 1;
            rules.push(RewriteRule { lhs: (b, a), rhs: NcPoly::mono(m) });
        }
    }
    p.set_rules(rules)?;
    Ok(p)
}

/// U_q(g*) on `K_i^{+-1}` and two commuting families of root vectors
/// `F{root}_1`, `F{root}_2`, each a copy of C_q[U] (weights `-beta`).
pub fn uqgstar(c: &CartanData) -> Result<Presentation> {
    let r = c.rank();
    if r == 0 || r > 2 {
        return Err(QmaError::OutOfScope("U_q(g*) presets need rank 1 or 2".into()));
    }
    let pbw = pbw_cached(c)?;
    let nr = pbw.roots.len();
    let mut gens: Vec<GenDecl> = (0..r).map(|i| GenDecl::new(&format!("K{}", i + 1), Weight::zero(r)).invertible()).collect();
    for fam in 1..=2 {
        for b in &pbw.roots {
            gens.push(
                GenDecl::new(&format!("F{}_{}", root_label(b), fam), neg_root_weight(b)).with_degree(b.iter().sum::<i64>() as u32),
            );
        }
    }
    let name = format!("uqgstar-{}", c.label.clone().unwrap_or_else(|| "custom".into()));
    let mut p = Presentation::new(&name, c.clone(), gens)?;
    let ng = p.ngens();
    let mono2 = |a: usize, b: usize| {
        let mut m = Monomial::one(ng);
        m.0[a] += 1;
        m.0[b] += 1;
        m
    };
    let mut rules = Vec::new();
    for b in 0..r {
        for a in 0..b {
            rules.push(RewriteRule { lhs: (b, a), rhs: NcPoly::mono(mono2(a, b)) });
        }
    }
    for f in r..ng {
        for i in 0..r {
            let e = -p.k_exp(i, &p.gen_mono(f, 1));
            rules.push(RewriteRule { lhs: (f, i), rhs: NcPoly::term(mono2(i, f), RatFunc::q_pow(e as i32)) });
        }
    }
    rules.extend(pbw_rules(&pbw, r, ng));
    rules.extend(pbw_rules(&pbw, r + nr, ng));
    for b in r + nr..ng {
        for a in r..r + nr {
            rules.push(RewriteRule { lhs: (b, a), rhs: NcPoly::mono(mono2(a, b)) });
        }
    }
    p.set_rules(rules)?;
    p.pbw = Some(Arc::new(pbw_data(&pbw, r)));
    Ok(p)
}

fn build(name: &str) -> Result<Presentation> {
    let lower = name.to_ascii_lowercase();
    if let Some(t) = lower.strip_prefix("cqu-") {
        return cq_u(&preset_cartan(&t.to_ascii_uppercase())?);
    }
    if let Some(t) = lower.strip_prefix("uqgstar-") {
        return uqgstar(&preset_cartan(&t.to_ascii_uppercase())?);
    }
    if let Some(t) = lower.strip_prefix("torus-") {
        return weight_torus(&preset_cartan(&t.to_ascii_uppercase())?);
    }
    if let Some(t) = lower.strip_prefix("qmat-") {
        let parts: Vec<&str> = t.split('-').collect();
        if parts.len() == 2 {
            if let (Ok(m), Ok(n)) = (parts[0].parse(), parts[1].parse()) {
                return qmatrix(m, n);
            }
        }
    }
    match lower.as_str() {
        "localized-qmat32" => localized_qmat32(),
        "qmat32-plus" => qmat32_plus(),
        _ => Err(QmaError::Input(format!("unknown preset '{}'", name))),
    }
}

/// Shared, memoized preset presentations.
pub fn preset(name: &str) -> Result<Arc<Presentation>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Presentation>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = name.to_ascii_lowercase();
    if let Some(p) = cache.lock().expect("lock").get(&key) {
        return Ok(p.clone());
    }
    let p = Arc::new(build(name)?);
    cache.lock().expect("lock").insert(key, p.clone());
    Ok(p)
}

/// Names accepted by [`preset`] that are checked by the integrity suite.
pub fn preset_names() -> Vec<&'static str> {
    vec![
        "cqU-A1",
        "cqU-A2",
        "cqU-B2",
        "cqU-G2",
        "qmat-1-1",
        "qmat-2-2",
        "qmat-3-2",
        "localized-qmat32",
        "qmat32-plus",
        "torus-A1",
        "torus-A2",
        "uqgstar-A1",
        "uqgstar-A2",
    ]
}
