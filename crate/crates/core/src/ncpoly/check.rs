//! Integrity checks for presentations: overlap resolution, and comparison
//! with a free algebra modulo the defining relations evaluated at a random
//! point of a large prime field.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::presets::{preset, serre_relations};
use super::{Monomial, NcPoly, Presentation};
use crate::freealg::{free_mul, FreeElem, FreeQuotient};
use crate::linalg::{Echelon, Field, Fp, SparseVec, FP_MODULUS};
use crate::report::{CheckAcc, VerificationReport};
use crate::scalar::{q_diff, RatFunc};

fn letters(p: &Presentation) -> Vec<(usize, i32)> {
    let mut out = Vec::new();
    for (g, d) in p.gens.iter().enumerate() {
        out.push((g, 1));
        if d.invertible {
            out.push((g, -1));
        }
    }
    out
}

fn letter_str(p: &Presentation, (g, s): (usize, i32)) -> String {
    if s == 1 {
        p.gens[g].name.clone()
    } else {
        format!("{}^-1", p.gens[g].name)
    }
}

/// Overlap resolution: conflicting or missing rules, every letter triple
/// associated both ways, and `(m b) a = m (b a)` for all normal monomials
/// `m` with `fdeg(m) + 2 <= max_deg`.
pub fn check_local_confluence(p: &Presentation, max_deg: u32) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let mut acc = CheckAcc::new(&format!("confluence/{}", p.name), "rewriting system is locally confluent", max_deg);
    let mut seen: BTreeMap<(usize, usize), &NcPoly> = BTreeMap::new();
    for r in &p.rules {
        let w = format!("{}*{}", p.gens[r.lhs.0].name, p.gens[r.lhs.1].name);
        match seen.get(&r.lhs) {
            Some(prev) => {
                let same = *prev == &r.rhs;
                acc.expect(same, || (w.clone(), p.fmt_poly(prev), p.fmt_poly(&r.rhs)));
            }
            None => {
                seen.insert(r.lhs, &r.rhs);
            }
        }
    }
    for b in 0..p.ngens() {
        for a in 0..b {
            let has = seen.contains_key(&(b, a));
            acc.expect(has, || {
                (format!("{}*{}", p.gens[b].name, p.gens[a].name), "a rewrite rule".into(), "none".into())
            });
        }
    }
    if !acc.ok() {
        rep.push(acc.finish());
        return rep;
    }
    let ls = letters(p);
    for &c in &ls {
        for &b in &ls {
            for &a in &ls {
                let pc = p.gen_pow(c.0, c.1);
                let pb = p.gen_pow(b.0, b.1);
                let pa = p.gen_pow(a.0, a.1);
                let left = p.mul(&p.mul(&pc, &pb), &pa);
                let right = p.mul(&pc, &p.mul(&pb, &pa));
                acc.expect(left == right, || {
                    (
                        format!("{}*{}*{}", letter_str(p, c), letter_str(p, b), letter_str(p, a)),
                        p.fmt_poly(&left),
                        p.fmt_poly(&right),
                    )
                });
            }
        }
    }
    for d in 0..=max_deg.saturating_sub(2) {
        for m in p.graded_basis(d) {
            let pm = NcPoly::mono(m.clone());
            for &b in &ls {
                for &a in &ls {
                    if p.gens[b.0].degree + p.gens[a.0].degree + d > max_deg {
                        continue;
                    }
                    let pb = p.gen_pow(b.0, b.1);
                    let pa = p.gen_pow(a.0, a.1);
                    let left = p.mul(&p.mul(&pm, &pb), &pa);
                    let right = p.mul(&pm, &p.mul(&pb, &pa));
                    acc.expect(left == right, || {
                        (
                            format!("{}*{}*{}", p.fmt_mono(&m), letter_str(p, b), letter_str(p, a)),
                            p.fmt_poly(&left),
                            p.fmt_poly(&right),
                        )
                    });
                }
            }
        }
    }
    rep.push(acc.finish());
    rep
}

/// A random evaluation point for q in the prime field, fixed by the seed.
pub fn random_q(seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x71a5_eed0);
    rng.gen_range(2..FP_MODULUS - 1)
}

fn to_fp(e: &FreeElem<RatFunc>, q0: u64) -> FreeElem<Fp> {
    e.iter()
        .map(|(w, c)| (w.clone(), Fp(c.eval_mod(q0, FP_MODULUS).expect("no pole at the sample point"))))
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

/// Dimensions of the free algebra on letters of the given multidegrees
/// modulo the given homogeneous relations, for word lengths `0..=max_len`.
/// Computed over the prime field at a seeded random value of q.
pub fn free_quotient_dims(letter_deg: Vec<Vec<u32>>, relations: &[FreeElem<RatFunc>], max_len: usize, seed: u64) -> Vec<usize> {
    let q0 = random_q(seed);
    let rels = relations.iter().map(|r| to_fp(r, q0)).collect();
    FreeQuotient::new(letter_deg, rels).dims_by_length(max_len)
}

/// Free-algebra model of (part of) a presentation.
pub struct OracleModel {
    pub letter_deg: Vec<Vec<u32>>,
    pub relations: Vec<FreeElem<RatFunc>>,
    /// Presentation generators covered by the model, with their images.
    pub gen_images: Vec<(usize, FreeElem<RatFunc>)>,
}

fn unit(k: usize, i: usize) -> Vec<u32> {
    (0..k).map(|j| (i == j) as u32).collect()
}

/// Relations of quantum m x n matrices written as words, independently of
/// the rewrite rules.
pub fn qmatrix_relations(m: usize, n: usize) -> Vec<FreeElem<RatFunc>> {
    let idx = |i: usize, j: usize| i * n + j;
    let one = RatFunc::one();
    let q = RatFunc::q_pow(1);
    let mut rels = Vec::new();
    for k in 0..m {
        for l in 0..n {
            for i in 0..=k {
                for j in 0..n {
                    let (b, a) = (idx(k, l), idx(i, j));
                    if b <= a {
                        continue;
                    }
                    let mut rel = vec![(vec![b, a], one.clone())];
                    if i == k || j == l {
                        rel.push((vec![a, b], q.neg()));
                    } else if j > l {
                        rel.push((vec![a, b], one.neg()));
                    } else {
                        rel.push((vec![a, b], one.neg()));
                        rel.push((vec![idx(i, l), idx(k, j)], q_diff(1).neg()));
                    }
                    rels.push(rel);
                }
            }
        }
    }
    rels
}

/// The free-quotient model of a preset, when one exists.
pub fn oracle_model(p: &Presentation) -> Option<OracleModel> {
    let r = p.rank();
    if let Some(pbw) = &p.pbw {
        let nr = pbw.roots.len();
        let fams = (p.ngens() - pbw.offset) / nr;
        let serre = serre_relations(&p.cartan);
        let shift = |e: &FreeElem<RatFunc>, s: usize| -> FreeElem<RatFunc> {
            e.iter().map(|(w, c)| (w.iter().map(|l| l + s).collect(), c.clone())).collect()
        };
        let k = r * fams;
        let mut relations = Vec::new();
        for f in 0..fams {
            relations.extend(serre.iter().map(|s| shift(s, f * r)));
        }
        for f2 in 0..fams {
            for f1 in 0..f2 {
                for i in 0..r {
                    for j in 0..r {
                        let (b, a) = (f2 * r + j, f1 * r + i);
                        relations.push(vec![(vec![b, a], RatFunc::one()), (vec![a, b], RatFunc::from_int(-1))]);
                    }
                }
            }
        }
        let mut gen_images = Vec::new();
        for f in 0..fams {
            for (t, e) in pbw.expansions.iter().enumerate() {
                gen_images.push((pbw.offset + f * nr + t, shift(e, f * r)));
            }
        }
        return Some(OracleModel { letter_deg: (0..k).map(|i| unit(k, i)).collect(), relations, gen_images });
    }
    if p.name.starts_with("qmat-") && !p.gens.iter().any(|g| g.invertible) {
        let m = r + 1;
        let n = p.ngens() / m;
        let letter_deg = (0..m * n)
            .map(|g| {
                let mut d = vec![0u32; m + n];
                d[g / n] = 1;
                d[m + g % n] = 1;
                d
            })
            .collect();
        return Some(OracleModel {
            letter_deg,
            relations: qmatrix_relations(m, n),
            gen_images: (0..m * n).map(|g| (g, vec![(vec![g], RatFunc::one())])).collect(),
        });
    }
    None
}

fn mono_image(model_img: &BTreeMap<usize, FreeElem<Fp>>, m: &Monomial) -> Option<FreeElem<Fp>> {
    let mut acc: FreeElem<Fp> = vec![(vec![], Fp(1))];
    for (g, s) in m.letters() {
        if s < 0 {
            return None;
        }
        acc = free_mul(&acc, model_img.get(&g)?);
    }
    Some(acc)
}

fn poly_image(model_img: &BTreeMap<usize, FreeElem<Fp>>, p: &NcPoly, q0: u64) -> Option<FreeElem<Fp>> {
    let mut acc: BTreeMap<Vec<usize>, Fp> = BTreeMap::new();
    for (m, c) in &p.terms {
        let cf = Fp(c.eval_mod(q0, FP_MODULUS)?);
        for (w, x) in mono_image(model_img, m)? {
            let e = acc.entry(w).or_insert(Fp(0));
            *e = e.add(&x.mul(&cf));
        }
    }
    Some(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect())
}

/// Compares a preset with its free-quotient model: graded dimensions up
/// to `max_deg`, validity of every rule, and linear independence of the
/// normal monomials.
pub fn check_oracle(p: &Presentation, max_deg: u32, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new();
    if let Some(model) = oracle_model(p) {
        let q0 = random_q(seed);
        let mut fq = FreeQuotient::new(model.letter_deg.clone(), model.relations.iter().map(|r| to_fp(r, q0)).collect());
        let imgs: BTreeMap<usize, FreeElem<Fp>> = model.gen_images.iter().map(|(g, e)| (*g, to_fp(e, q0))).collect();
        let covered = |m: &Monomial| m.0.iter().enumerate().all(|(g, &e)| e == 0 || imgs.contains_key(&g));

        let mut dims = CheckAcc::new(&format!("oracle-dims/{}", p.name), "graded dimensions of the free quotient", max_deg);
        let oracle = fq.dims_by_length(max_deg as usize);
        let mut counts = Vec::new();
        for d in 0..=max_deg {
            let c = p.graded_basis(d).into_iter().filter(|m| covered(m)).count();
            counts.push(c);
            dims.expect(c == oracle[d as usize], || (format!("degree {}", d), oracle[d as usize].to_string(), c.to_string()));
        }
        dims.note(format!("dims {:?}", counts));
        rep.push(dims.finish());

        let mut rules = CheckAcc::new(&format!("oracle-rules/{}", p.name), "rewrite rules hold in the free quotient", max_deg);
        for rule in &p.rules {
            let (b, a) = rule.lhs;
            if !imgs.contains_key(&b) || !imgs.contains_key(&a) {
                continue;
            }
            let lhs = free_mul(&imgs[&b], &imgs[&a]);
            let rhs = poly_image(&imgs, &rule.rhs, q0).expect("covered rule");
            let mut diff: BTreeMap<Vec<usize>, Fp> = lhs.into_iter().collect();
            for (w, x) in rhs {
                let e = diff.entry(w).or_insert(Fp(0));
                *e = e.sub(&x);
            }
            let diff: FreeElem<Fp> = diff.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            let zero = fq.reduce(&diff).is_none_or(|(_, v)| v.is_empty());
            rules.expect(zero, || {
                (
                    format!("{}*{}", p.gens[b].name, p.gens[a].name),
                    p.fmt_poly(&rule.rhs),
                    "a different element of the free quotient".into(),
                )
            });
        }
        rep.push(rules.finish());

        let mut ind = CheckAcc::new(&format!("oracle-basis/{}", p.name), "normal monomials are linearly independent", max_deg);
        for d in 0..=max_deg {
            let mut groups: BTreeMap<Vec<u32>, Vec<(Monomial, SparseVec<Fp>)>> = BTreeMap::new();
            for m in p.graded_basis(d).into_iter().filter(|m| covered(m)) {
                let img = mono_image(&imgs, &m).expect("covered");
                if let Some((mu, v)) = fq.reduce(&img) {
                    groups.entry(mu).or_default().push((m, v));
                } else {
                    ind.fail(p.fmt_mono(&m), "nonzero".into(), "0".into());
                }
            }
            for (mu, g) in groups {
                let mut e: Echelon<Fp> = Echelon::new();
                for (m, v) in &g {
                    let fresh = e.insert(v);
                    ind.expect(fresh, || (p.fmt_mono(m), format!("independent in multidegree {:?}", mu), "dependent".into()));
                }
            }
        }
        rep.push(ind.finish());
        return rep;
    }
    if p.name.starts_with("torus-") {
        let mut acc = CheckAcc::new(&format!("oracle-dims/{}", p.name), "Laurent monomial count", max_deg);
        let r = p.ngens();
        for d in 0..=max_deg {
            let expected = laurent_count(r, d);
            let got = p.graded_basis(d).len();
            acc.expect(expected == got, || (format!("degree {}", d), expected.to_string(), got.to_string()));
        }
        rep.push(acc.finish());
        return rep;
    }
    if p.name == "localized-qmat32" || p.name == "qmat32-plus" {
        rep.extend(check_clearing(p, max_deg));
        return rep;
    }
    let mut acc = CheckAcc::new(&format!("oracle-dims/{}", p.name), "no free-quotient model", max_deg);
    acc.note("skipped: no oracle model for this presentation".into());
    let mut c = acc.finish();
    c.status = crate::report::Status::Skipped;
    rep.push(c);
    rep
}

fn laurent_count(r: usize, d: u32) -> usize {
    // Integer vectors of length r with sum of absolute values d.
    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    if d == 0 {
        return 1;
    }
    (1..=r.min(d as usize))
        .map(|k| (1u64 << k) * binom(r as u64, k as u64) * binom(d as u64 - 1, k as u64 - 1))
        .sum::<u64>() as usize
}

/// Oracle for the localized 3 x 2 quantum matrices: left multiplication by
/// `x11^A D^B` clears negative exponents, and `D` is sent to
/// `x11 x22 - q^-1 x12 x21` in the unlocalized algebra. Products computed
/// in the localization must agree with products there, and cleared normal
/// monomials must be linearly independent.
pub fn check_clearing(p: &Presentation, max_deg: u32) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let target = preset("qmat-3-2").expect("preset");
    let x11 = p.gen_index("x11").expect("x11");
    let dd = p.gen_index("D").expect("D");
    let delta = super::parse_expr("x11*x22 - q^-1*x12*x21", &target).expect("minor");
    let img = |g: usize| -> NcPoly {
        if g == dd {
            delta.clone()
        } else {
            super::parse_expr(&p.gens[g].name, &target).expect("shared generator")
        }
    };
    let clear = |poly: &NcPoly, a: i32, b: i32| -> Option<NcPoly> {
        let mut out = NcPoly::zero();
        for (m, c) in &poly.terms {
            let mut mm = m.clone();
            mm.0[x11] += a;
            mm.0[dd] += b;
            if mm.0.iter().any(|&e| e < 0) {
                return None;
            }
            let mut cur = target.one();
            for (g, _) in mm.letters() {
                cur = target.mul(&cur, &img(g));
            }
            out.add_scaled(&cur, c);
        }
        Some(out)
    };
    let shift = |poly: &NcPoly| -> (i32, i32) {
        let a = poly.terms.keys().map(|m| -m.0[x11]).max().unwrap_or(0).max(0);
        let b = poly.terms.keys().map(|m| -m.0[dd]).max().unwrap_or(0).max(0);
        (a, b)
    };

    let mut prod = CheckAcc::new(&format!("oracle-clearing/{}", p.name), "products agree after clearing denominators", max_deg);
    let ls = letters(p);
    for d in 0..max_deg {
        for m in p.graded_basis(d) {
            let pm = NcPoly::mono(m.clone());
            for &(g, s) in &ls {
                if d + p.gens[g].degree > max_deg {
                    continue;
                }
                let n = p.mul(&pm, &p.gen_pow(g, s));
                if s == 1 {
                    let (a, b) = shift(&n);
                    let (a0, b0) = shift(&pm);
                    let (a, b) = (a.max(a0), b.max(b0));
                    let left = clear(&n, a, b).expect("cleared");
                    let right = target.mul(&clear(&pm, a, b).expect("cleared"), &img(g));
                    prod.expect(left == right, || {
                        (format!("{}*{}", p.fmt_mono(&m), p.gens[g].name), target.fmt_poly(&right), target.fmt_poly(&left))
                    });
                } else {
                    let back = p.mul(&n, &p.gen(g));
                    prod.expect(back == pm, || {
                        (
                            format!("{}*{}^-1*{}", p.fmt_mono(&m), p.gens[g].name, p.gens[g].name),
                            p.fmt_mono(&m),
                            p.fmt_poly(&back),
                        )
                    });
                }
            }
        }
    }
    rep.push(prod.finish());

    let mut ind = CheckAcc::new(&format!("oracle-basis/{}", p.name), "cleared normal monomials are independent", max_deg);
    let q0 = random_q(0);
    for d in 0..=max_deg {
        let basis = p.graded_basis(d);
        let a = d as i32;
        let b = (d / 2) as i32;
        let mut groups: BTreeMap<Vec<i64>, Vec<(Monomial, NcPoly)>> = BTreeMap::new();
        for m in basis {
            let c = clear(&NcPoly::mono(m.clone()), a, b).expect("shift large enough");
            groups.entry(p.grade(&m)).or_default().push((m, c));
        }
        for (_, g) in groups {
            let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
            let mut e: Echelon<Fp> = Echelon::new();
            for (m, c) in &g {
                let mut v: Vec<(usize, Fp)> = Vec::new();
                for (tm, x) in &c.terms {
                    let n = index.len();
                    let k = *index.entry(tm.clone()).or_insert(n);
                    v.push((k, Fp(x.eval_mod(q0, FP_MODULUS).expect("no pole"))));
                }
                v.sort_by_key(|t| t.0);
                let fresh = e.insert(&v);
                ind.expect(fresh, || (p.fmt_mono(m), "independent".into(), "dependent".into()));
            }
        }
    }
    rep.push(ind.finish());
    rep
}
