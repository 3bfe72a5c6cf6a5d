//! Top divided powers, the nu map along a reduced word, highest-weight
//! bases, adapted bases, and certification of the factorization
//! `A+ (x) A0 -> A`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::action::{ActionTable, HopfGen};
use crate::cartan::Weight;
use crate::error::{QmaError, Result};
use crate::linalg::{kernel_of_columns, Echelon, SparseVec};
use crate::ncpoly::presets::serre_relations;
use crate::ncpoly::{parse_expr, Monomial, NcPoly, Presentation};
use crate::report::{CheckAcc, VerificationReport};
use crate::scalar::RatFunc;

pub type NuVector = Vec<u32>;

/// Weight together with the extra grading.
pub type MDeg = (Weight, Vec<i64>);

fn mdeg_add(a: &MDeg, b: &MDeg) -> MDeg {
    let mut g = a.1.clone();
    if g.len() < b.1.len() {
        g.resize(b.1.len(), 0);
    }
    for (x, y) in g.iter_mut().zip(&b.1) {
        *x += y;
    }
    (&a.0 + &b.0, g)
}

fn mdeg_sub(a: &MDeg, b: &MDeg) -> MDeg {
    let neg = (-&b.0, b.1.iter().map(|x| -x).collect());
    mdeg_add(a, &neg)
}

fn nonzero(a: &NcPoly) -> Result<()> {
    if a.is_zero() {
        Err(QmaError::Domain("the zero element has no top exponent".into()))
    } else {
        Ok(())
    }
}

/// Largest `l` with `E_i^l(a) != 0`.
pub fn ell(t: &ActionTable, i: usize, a: &NcPoly) -> Result<u32> {
    nonzero(a)?;
    let mut cur = t.act(HopfGen::E(i), a);
    let mut l = 0;
    while !cur.is_zero() {
        l += 1;
        cur = t.act(HopfGen::E(i), &cur);
    }
    Ok(l)
}

/// `E_i^{(l)}(a)` with `l = ell(i, a)`, together with `l`.
fn e_top_with_ell(t: &ActionTable, i: usize, a: &NcPoly) -> (NcPoly, u32) {
    let mut prev = a.clone();
    let mut l = 0;
    loop {
        let next = t.act(HopfGen::E(i), &prev);
        if next.is_zero() {
            break;
        }
        prev = next;
        l += 1;
    }
    (prev.scale(&t.factorial(i, l).inv().expect("nonzero")), l)
}

pub fn e_top(t: &ActionTable, i: usize, a: &NcPoly) -> Result<NcPoly> {
    nonzero(a)?;
    Ok(e_top_with_ell(t, i, a).0)
}

/// `E_{i_m}^{(top)} ... E_{i_1}^{(top)}(a)`.
pub fn e_top_word(t: &ActionTable, w: &[usize], a: &NcPoly) -> Result<NcPoly> {
    nonzero(a)?;
    Ok(w.iter().fold(a.clone(), |acc, &i| e_top_with_ell(t, i, &acc).0))
}

fn check_word(t: &ActionTable, w: &[usize]) -> Result<()> {
    if t.alg.cartan.is_reduced(w) {
        Ok(())
    } else {
        let s: Vec<String> = w.iter().map(|i| (i + 1).to_string()).collect();
        Err(QmaError::Input(format!("word ({}) is not reduced", s.join(","))))
    }
}

fn nu_and_top(t: &ActionTable, w: &[usize], a: &NcPoly) -> (NuVector, NcPoly) {
    let mut cur = a.clone();
    let mut out = Vec::with_capacity(w.len());
    for &i in w {
        let (next, l) = e_top_with_ell(t, i, &cur);
        out.push(l);
        cur = next;
    }
    (out, cur)
}

pub fn nu(t: &ActionTable, w: &[usize], a: &NcPoly) -> Result<NuVector> {
    nonzero(a)?;
    check_word(t, w)?;
    Ok(nu_and_top(t, w, a).0)
}

pub fn is_highest_weight(t: &ActionTable, a: &NcPoly) -> bool {
    (0..t.rank()).all(|i| t.act(HopfGen::E(i), a).is_zero())
}

/// Dense bookkeeping between monomials and coordinates.
#[derive(Default)]
pub struct MonoIndex {
    map: HashMap<Monomial, usize>,
    list: Vec<Monomial>,
}

impl MonoIndex {
    pub fn id(&mut self, m: &Monomial) -> usize {
        if let Some(&i) = self.map.get(m) {
            return i;
        }
        self.list.push(m.clone());
        self.map.insert(m.clone(), self.list.len() - 1);
        self.list.len() - 1
    }

    pub fn vec(&mut self, p: &NcPoly) -> SparseVec<RatFunc> {
        let mut v: SparseVec<RatFunc> = p.terms.iter().map(|(m, c)| (self.id(m), c.clone())).collect();
        v.sort_by_key(|x| x.0);
        v
    }

    pub fn poly(&self, v: &SparseVec<RatFunc>) -> NcPoly {
        let mut out = NcPoly::zero();
        for (i, c) in v {
            out.add_term(&self.list[*i], c);
        }
        out
    }
}

/// Basis of the highest-weight vectors inside the span of `monos`.
pub fn hw_in_span(t: &ActionTable, monos: &[Monomial]) -> Vec<NcPoly> {
    let r = t.rank();
    let mut idx = MonoIndex::default();
    let cols: Vec<SparseVec<RatFunc>> = monos
        .iter()
        .map(|m| {
            let a = NcPoly::mono(m.clone());
            let mut col: SparseVec<RatFunc> = Vec::new();
            for i in 0..r {
                for (j, c) in idx.vec(&t.act(HopfGen::E(i), &a)) {
                    col.push((j * r + i, c));
                }
            }
            col.sort_by_key(|x| x.0);
            col
        })
        .collect();
    kernel_of_columns(&cols)
        .into_iter()
        .map(|v| {
            let mut p = NcPoly::zero();
            for (j, c) in v {
                p.add_term(&monos[j], &c);
            }
            p
        })
        .collect()
}

pub fn group_by_mdeg(p: &Presentation, monos: Vec<Monomial>) -> BTreeMap<MDeg, Vec<Monomial>> {
    let mut out: BTreeMap<MDeg, Vec<Monomial>> = BTreeMap::new();
    for m in monos {
        out.entry(p.multidegree(&m)).or_default().push(m);
    }
    out
}

/// Basis of the highest-weight part of the degree-`deg` span, computed
/// piece by piece in the multigrading.
pub fn hw_basis(t: &ActionTable, deg: u32) -> Vec<NcPoly> {
    let p = &t.alg;
    group_by_mdeg(p, p.graded_basis(deg)).values().flat_map(|ms| hw_in_span(t, ms)).collect()
}

/// An algebra map given on generators.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    pub images: Vec<NcPoly>,
}

impl Embedding {
    pub fn new(source: Arc<Presentation>, target: Arc<Presentation>, images: Vec<NcPoly>) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(QmaError::Input("one image per source generator is required".into()));
        }
        if source.gens.iter().any(|g| g.invertible) {
            return Err(QmaError::Input("embeddings of localized sources are not supported".into()));
        }
        Ok(Embedding { source, target, images })
    }

    /// Images given as `(generator, expression)` text pairs.
    pub fn from_exprs(source: Arc<Presentation>, target: Arc<Presentation>, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut images = vec![None; source.ngens()];
        for (g, e) in pairs {
            let gi = source.gen_index(g).ok_or_else(|| QmaError::Input(format!("unknown generator '{}'", g)))?;
            images[gi] = Some(parse_expr(e, &target)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(g, x)| x.ok_or_else(|| QmaError::Input(format!("no image for '{}'", source.gens[g].name))))
            .collect::<Result<Vec<_>>>()?;
        Embedding::new(source, target, images)
    }

    /// The identity embedding of an algebra into itself.
    pub fn identity(p: Arc<Presentation>) -> Result<Self> {
        let images = (0..p.ngens()).map(|g| p.gen(g)).collect();
        Embedding::new(p.clone(), p, images)
    }

    pub fn apply(&self, a: &NcPoly) -> NcPoly {
        self.source.map_into(&self.target, a, &|g, _| self.images[g].clone())
    }

    pub fn apply_mono(&self, m: &Monomial) -> NcPoly {
        self.apply(&NcPoly::mono(m.clone()))
    }

    /// Multidegree of the image of a source monomial.
    pub fn image_mdeg(&self, m: &Monomial) -> Option<MDeg> {
        let mut acc: MDeg = (Weight::zero(self.target.rank()), Vec::new());
        for (g, s) in m.letters() {
            let img = &self.images[g];
            let first = img.terms.keys().next()?;
            let d = self.target.multidegree(first);
            acc = if s > 0 { mdeg_add(&acc, &d) } else { mdeg_sub(&acc, &d) };
        }
        Some(acc)
    }

    /// Images respect the source relations (and Serre relations when the
    /// source carries root-vector data) and are multigraded.
    pub fn check_relations(&self) -> VerificationReport {
        let s = &self.source;
        let t = &self.target;
        let mut rep = VerificationReport::new();
        let mut hom = CheckAcc::new(&format!("embedding-homogeneous/{}", t.name), "images are multigraded", 1);
        for (g, img) in self.images.iter().enumerate() {
            let ok = !img.is_zero() && img.terms.keys().map(|m| t.multidegree(m)).collect::<BTreeSet<_>>().len() == 1;
            hom.expect(ok, || (s.gens[g].name.clone(), "homogeneous nonzero image".into(), t.fmt_poly(img)));
        }
        rep.push(hom.finish());
        let mut rel = CheckAcc::new(&format!("embedding-relations/{}", t.name), "images satisfy the source relations", 2);
        for r in &s.rules {
            let (b, a) = r.lhs;
            let lhs = t.mul(&self.images[b], &self.images[a]);
            let rhs = self.apply(&r.rhs);
            rel.expect(lhs == rhs, || (format!("{}*{}", s.gens[b].name, s.gens[a].name), t.fmt_poly(&rhs), t.fmt_poly(&lhs)));
        }
        rep.push(rel.finish());
        if let Some(pbw) = &s.pbw {
            let mut se = CheckAcc::new(&format!("embedding-serre/{}", t.name), "images satisfy the quantum Serre relations", 3);
            for (k, e) in serre_relations(&s.cartan).iter().enumerate() {
                let mut v = NcPoly::zero();
                for (w, c) in e {
                    let f: Vec<NcPoly> = w.iter().map(|&l| self.images[pbw.simple[l]].clone()).collect();
                    v.add_scaled(&t.mul_all(&f), c);
                }
                se.expect(v.is_zero(), || (format!("Serre relation {}", k + 1), "0".into(), t.fmt_poly(&v)));
            }
            rep.push(se.finish());
        }
        rep
    }

    /// `E_i` and `K_i` commute with the embedding on generators.
    pub fn check_equivariance(&self, src: &ActionTable, dst: &ActionTable) -> VerificationReport {
        let s = &self.source;
        let t = &self.target;
        let mut acc = CheckAcc::new(&format!("embedding-equivariance/{}", t.name), "embedding intertwines E_i and K_i", 1);
        for g in 0..s.ngens() {
            let x = s.gen(g);
            for i in 0..s.rank() {
                for h in [HopfGen::E(i), HopfGen::K(i)] {
                    let lhs = dst.act(h, &self.images[g]);
                    let rhs = self.apply(&src.act(h, &x));
                    acc.expect(lhs == rhs, || (format!("{}({})", h, s.gens[g].name), t.fmt_poly(&rhs), t.fmt_poly(&lhs)));
                }
            }
        }
        let mut rep = VerificationReport::new();
        rep.push(acc.finish());
        rep
    }
}

#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub word: Vec<usize>,
    pub entries: BTreeMap<NuVector, NcPoly>,
}

/// Peels `a` against `entries`, returning the remainder's first new
/// nu-value together with the normalized remainder.
fn peel_new(t: &ActionTable, w: &[usize], entries: &BTreeMap<NuVector, NcPoly>, a: &NcPoly) -> Result<Option<(NuVector, NcPoly)>> {
    let mut r = a.clone();
    let mut guard = 0usize;
    while !r.is_zero() {
        guard += 1;
        if guard > 100_000 {
            return Err(QmaError::Certification("peeling did not terminate".into()));
        }
        let (v, top) = nu_and_top(t, w, &r);
        let Some(c) = top.as_scalar() else {
            return Err(QmaError::Certification(format!("top of {} is not a scalar", t.alg.fmt_poly(&r))));
        };
        match entries.get(&v) {
            Some(b) => r = r.sub(&b.scale(&c)),
            None => return Ok(Some((v, r.scale(&c.inv().expect("nonzero"))))),
        }
    }
    Ok(None)
}

/// One normalized element per nu-value attained in degrees `<= deg`.
pub fn build_adapted_basis(t0: &ActionTable, w: &[usize], deg: u32) -> Result<AdaptedBasis> {
    check_word(t0, w)?;
    let mut entries = BTreeMap::new();
    for m in t0.alg.basis_up_to(deg) {
        if let Some((v, b)) = peel_new(t0, w, &entries, &NcPoly::mono(m))? {
            entries.insert(v, b);
        }
    }
    Ok(AdaptedBasis { word: w.to_vec(), entries })
}

impl AdaptedBasis {
    /// Adds the entries of the weight piece containing nu-value `v`.
    pub fn extend_for(&mut self, t0: &ActionTable, v: &[u32]) -> Result<()> {
        if self.entries.contains_key(v) {
            return Ok(());
        }
        let wt = nu_weight(t0, &self.word, v);
        for (k, b) in piece_entries(t0, &self.word, &wt)? {
            self.entries.entry(k).or_insert(b);
        }
        Ok(())
    }
}

/// Top of the word lands in the highest-weight part, on every basis
/// monomial up to `deg` and on seeded random combinations.
pub fn check_adapted(t: &ActionTable, w: &[usize], deg: u32, samples: usize, seed: u64) -> VerificationReport {
    let p = &t.alg;
    let ws: Vec<String> = w.iter().map(|i| (i + 1).to_string()).collect();
    let mut acc = CheckAcc::new(&format!("adapted/{}/({})", p.name, ws.join(",")), "top divided powers along the word land in A+", deg);
    if !p.cartan.is_reduced(w) {
        acc.fail(format!("({})", ws.join(",")), "reduced word".into(), "not reduced".into());
        let mut rep = VerificationReport::new();
        rep.push(acc.finish());
        return rep;
    }
    let monos = p.basis_up_to(deg);
    for m in &monos {
        let a = NcPoly::mono(m.clone());
        let top = nu_and_top(t, w, &a).1;
        acc.expect(is_highest_weight(t, &top), || (p.fmt_mono(m), "highest weight".into(), p.fmt_poly(&top)));
    }
    let groups: Vec<Vec<Monomial>> = group_by_mdeg(p, monos).into_values().filter(|g| g.len() > 1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        if groups.is_empty() {
            break;
        }
        let g = &groups[rng.gen_range(0..groups.len())];
        let mut a = NcPoly::zero();
        for m in g {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                a.add_term(m, &RatFunc::from_int(c));
            }
        }
        if a.is_zero() {
            continue;
        }
        let top = nu_and_top(t, w, &a).1;
        acc.expect(is_highest_weight(t, &top), || (p.fmt_poly(&a), "highest weight".into(), p.fmt_poly(&top)));
    }
    acc.note(format!("verified on monomials of degree <= {} and {} sampled combinations", deg, samples));
    let mut rep = VerificationReport::new();
    rep.push(acc.finish());
    rep
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    /// Filtration level: total generator degree `<= degree`.
    pub degree: u32,
    /// Monomials of A up to this level.
    pub dim_a: usize,
    /// Pairs `h (x) u` with `level(h) + deg(u) <= degree`.
    pub dim_domain: usize,
    /// Rank of the multiplication map on those pairs.
    pub rank: usize,
    /// Every monomial of A up to this level lies in the image.
    pub surjective: bool,
    /// Domain level at which the last of those monomials was reached.
    pub surj_level: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FactorizationWitness {
    pub rows: Vec<WitnessRow>,
}

impl FactorizationWitness {
    pub fn is_iso(&self) -> bool {
        self.rows.iter().all(|r| r.rank == r.dim_domain && r.surjective)
    }
}

/// Options for [`verify_factorization`].
#[derive(Clone, Debug)]
pub struct FactorizationConfig {
    pub deg: u32,
    /// Domain levels searched for surjectivity are capped at
    /// `surj_factor * degree`.
    pub surj_factor: u32,
}

impl FactorizationConfig {
    pub fn new(deg: u32) -> Self {
        FactorizationConfig { deg, surj_factor: 4 }
    }
}

struct FactorCtx<'a> {
    t: &'a ActionTable,
    emb: &'a Embedding,
    /// A-monomials by multidegree, with their degree.
    pieces: BTreeMap<MDeg, Vec<(u32, Monomial)>>,
    /// A0 basis with degree and image multidegree.
    src: Vec<(u32, Monomial, MDeg)>,
    hw_cache: HashMap<(MDeg, u32), Vec<NcPoly>>,
    img_cache: HashMap<Monomial, NcPoly>,
}

impl<'a> FactorCtx<'a> {
    fn hw_at(&mut self, eta: &MDeg, level: u32) -> Vec<NcPoly> {
        let key = (eta.clone(), level);
        if let Some(v) = self.hw_cache.get(&key) {
            return v.clone();
        }
        let monos: Vec<Monomial> = self.pieces.get(eta).map_or(Vec::new(), |v| v.iter().filter(|(d, _)| *d <= level).map(|(_, m)| m.clone()).collect());
        let out = if monos.is_empty() { Vec::new() } else { hw_in_span(self.t, &monos) };
        self.hw_cache.insert(key, out.clone());
        out
    }

    fn image(&mut self, u: &Monomial) -> NcPoly {
        if let Some(v) = self.img_cache.get(u) {
            return v.clone();
        }
        let v = self.emb.apply_mono(u);
        self.img_cache.insert(u.clone(), v.clone());
        v
    }

    /// Domain pairs of multidegree `omega` up to `level`, as `(h, u)`.
    fn domain(&mut self, omega: &MDeg, level: u32) -> Vec<(NcPoly, Monomial)> {
        let mut out = Vec::new();
        let src = std::mem::take(&mut self.src);
        for (k2, u, mu) in &src {
            if *k2 > level {
                continue;
            }
            let eta = mdeg_sub(omega, mu);
            if !self.pieces.contains_key(&eta) {
                continue;
            }
            for h in self.hw_at(&eta, level - k2) {
                out.push((h, u.clone()));
            }
        }
        self.src = src;
        out
    }

    fn mu(&mut self, h: &NcPoly, u: &Monomial) -> NcPoly {
        let img = self.image(u);
        self.t.alg.mul(h, &img)
    }
}

/// Certifies that multiplication `A+ (x) A0 -> A` is bijective on the
/// tested range. A0 enters through `emb`; degrees on A are generator
/// degrees (inverses count positively), so the check runs on a
/// filtration and surjectivity searches the domain up to
/// `surj_factor * degree`. Also checks the embedding, the E/K
/// equivariance of the multiplication map, and nu-compatibility along `w`.
pub fn verify_factorization(t: &ActionTable, t0: &ActionTable, emb: &Embedding, w: &[usize], cfg: &FactorizationConfig) -> Result<(FactorizationWitness, VerificationReport)> {
    check_word(t, w)?;
    let p = &t.alg;
    let deg = cfg.deg;
    let cap = cfg.surj_factor.max(1) * deg;
    let mut rep = VerificationReport::new();
    rep.extend(emb.check_relations());
    rep.extend(emb.check_equivariance(t0, t));
    if !rep.passed() {
        return Err(QmaError::Certification(format!("embedding rejected:\n{}", rep.summary())));
    }

    let mut pieces: BTreeMap<MDeg, Vec<(u32, Monomial)>> = BTreeMap::new();
    for d in 0..=cap {
        for m in p.graded_basis(d) {
            pieces.entry(p.multidegree(&m)).or_default().push((d, m));
        }
    }
    let mut src = Vec::new();
    for d in 0..=cap {
        for u in t0.alg.graded_basis(d) {
            let mu = emb.image_mdeg(&u).ok_or_else(|| QmaError::Certification("zero image".into()))?;
            src.push((d, u, mu));
        }
    }
    let mut ctx = FactorCtx { t, emb, pieces, src, hw_cache: HashMap::new(), img_cache: HashMap::new() };
    let name = format!("{}<-{}", p.name, t0.alg.name);

    // Injectivity at each level.
    let mut inj = CheckAcc::new(&format!("factorization-injective/{}", name), "multiplication A+ (x) A0 -> A is injective", deg);
    let mut equi = CheckAcc::new(&format!("factorization-equivariant/{}", name), "multiplication map commutes with E_i and K_i", deg);
    let mut rows = Vec::new();
    for d in 0..=deg {
        let mut omegas: BTreeSet<MDeg> = BTreeSet::new();
        let src = ctx.src.clone();
        let keys: Vec<(MDeg, u32)> = ctx.pieces.iter().map(|(k, v)| (k.clone(), v.iter().map(|x| x.0).min().unwrap_or(0))).collect();
        for (k2, _, mu) in src.iter().filter(|x| x.0 <= d) {
            for (eta, lo) in &keys {
                if *lo + k2 <= d {
                    omegas.insert(mdeg_add(eta, mu));
                }
            }
        }
        let (mut dim_dom, mut rank) = (0usize, 0usize);
        for om in &omegas {
            let dom = ctx.domain(om, d);
            let mut idx = MonoIndex::default();
            let mut ech: Echelon<RatFunc> = Echelon::new();
            for (h, u) in &dom {
                let v = ctx.mu(h, u);
                let fresh = ech.insert(&idx.vec(&v));
                if fresh {
                    rank += 1;
                }
                inj.expect(fresh, || (format!("{} (x) {}", p.fmt_poly(h), t0.alg.fmt_mono(u)), "independent image".into(), p.fmt_poly(&v)));
                if d == deg {
                    for i in 0..t.rank() {
                        let lhs = t.act(HopfGen::E(i), &v);
                        let rhs = p.mul(h, &emb.apply(&t0.act(HopfGen::E(i), &NcPoly::mono(u.clone()))));
                        equi.expect(lhs == rhs, || (format!("E{}({} * {})", i + 1, p.fmt_poly(h), t0.alg.fmt_mono(u)), p.fmt_poly(&rhs), p.fmt_poly(&lhs)));
                    }
                }
            }
            dim_dom += dom.len();
        }
        let dim_a: usize = ctx.pieces.values().map(|v| v.iter().filter(|x| x.0 <= d).count()).sum();
        rows.push(WitnessRow { degree: d, dim_a, dim_domain: dim_dom, rank, surjective: true, surj_level: 0 });
    }
    rep.push(inj.finish());
    rep.push(equi.finish());

    // Surjectivity: the level needed for each monomial of degree <= deg.
    let mut sur = CheckAcc::new(&format!("factorization-surjective/{}", name), "multiplication A+ (x) A0 -> A is surjective", deg);
    let targets: Vec<(MDeg, Vec<(u32, Monomial)>)> = ctx
        .pieces
        .iter()
        .filter_map(|(k, v)| {
            let ms: Vec<(u32, Monomial)> = v.iter().filter(|x| x.0 <= deg).cloned().collect();
            (!ms.is_empty()).then(|| (k.clone(), ms))
        })
        .collect();
    let mut needed: Vec<(u32, Option<u32>)> = Vec::new();
    for (om, ms) in targets {
        let mut pending: Vec<(u32, Monomial)> = ms;
        let start = pending.iter().map(|x| x.0).min().unwrap_or(0);
        let mut level = start;
        while !pending.is_empty() && level <= cap {
            let dom = ctx.domain(&om, level);
            let mut idx = MonoIndex::default();
            let mut ech: Echelon<RatFunc> = Echelon::new();
            for (h, u) in &dom {
                let v = ctx.mu(h, u);
                ech.insert(&idx.vec(&v));
            }
            pending.retain(|(d, m)| {
                let hit = ech.contains(&idx.vec(&NcPoly::mono(m.clone())));
                if hit {
                    needed.push((*d, Some(level)));
                }
                !hit
            });
            level += 1;
        }
        for (d, m) in pending {
            needed.push((d, None));
            sur.fail(p.fmt_mono(&m), format!("in the image at level <= {}", cap), "not reached".into());
        }
    }
    for row in rows.iter_mut() {
        let here: Vec<&(u32, Option<u32>)> = needed.iter().filter(|x| x.0 <= row.degree).collect();
        row.surjective = here.iter().all(|x| x.1.is_some());
        row.surj_level = here.iter().filter_map(|x| x.1).max().unwrap_or(0);
        sur.expect(row.surjective, || (format!("level {}", row.degree), "surjective".into(), "not surjective".into()));
    }
    sur.note(format!("domain searched up to level {}", cap));
    rep.push(sur.finish());

    // nu-compatibility: nu of an embedded element equals nu in A0, and
    // every nu-value of a tested monomial of A is attained in A0.
    let mut nuc = CheckAcc::new(&format!("factorization-nu/{}", name), "nu values of A and A0 agree", deg);
    for (_, u, _) in ctx.src.iter().filter(|x| x.0 <= deg) {
        let v0 = nu_and_top(t0, w, &NcPoly::mono(u.clone())).0;
        let v = nu_and_top(t, w, &emb.apply_mono(u)).0;
        nuc.expect(v == v0, || (format!("nu({})", t0.alg.fmt_mono(u)), format!("{:?}", v0), format!("{:?}", v)));
    }
    let mut attained: HashMap<Weight, BTreeSet<NuVector>> = HashMap::new();
    for m in p.basis_up_to(deg) {
        let v = nu_and_top(t, w, &NcPoly::mono(m.clone())).0;
        let wt = nu_weight(t0, w, &v);
        let set = match attained.get(&wt) {
            Some(s) => s,
            None => {
                let s = attained_nu(t0, w, &wt)?;
                attained.entry(wt.clone()).or_insert(s)
            }
        };
        nuc.expect(set.contains(&v), || (format!("nu({})", p.fmt_mono(&m)), "a value attained in A0".into(), format!("{:?}", v)));
    }
    rep.push(nuc.finish());

    let wit = FactorizationWitness { rows };
    let mut w_acc = CheckAcc::new(&format!("factorization-witness/{}", name), "rank equals domain dimension at every level", deg);
    for r in &wit.rows {
        w_acc.expect(r.rank == r.dim_domain, || {
            (format!("level {}", r.degree), format!("rank {}", r.dim_domain), format!("rank {}", r.rank))
        });
    }
    rep.push(w_acc.finish());
    Ok((wit, rep))
}

/// `reassemble(decompose(a)) = a` on `count` seeded random elements built
/// from up to three monomials of degree `<= deg`; every part must be a
/// highest-weight vector.
pub fn check_roundtrip(t: &ActionTable, t0: &ActionTable, emb: &Embedding, w: &[usize], deg: u32, count: usize, seed: u64) -> Result<VerificationReport> {
    check_word(t, w)?;
    let p = &t.alg;
    let monos = p.basis_up_to(deg);
    let mut basis = AdaptedBasis { word: w.to_vec(), entries: BTreeMap::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = CheckAcc::new(&format!("roundtrip/{}", p.name), "decompose then reassemble is the identity", deg);
    for _ in 0..count {
        let mut a = NcPoly::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let m = &monos[rng.gen_range(0..monos.len())];
            a.add_term(m, &RatFunc::from_int(rng.gen_range(1..=5)));
        }
        if a.is_zero() {
            continue;
        }
        let parts = decompose_extending(t, t0, &a, &mut basis, emb)?;
        let hw = parts.iter().all(|(h, _)| is_highest_weight(t, h));
        let back = reassemble(t, &parts, &basis, emb)?;
        acc.expect(hw && back == a, || (p.fmt_poly(&a), p.fmt_poly(&a), if hw { p.fmt_poly(&back) } else { "a part that is not highest weight".into() }));
    }
    acc.note(format!("seed {}, {} samples", seed, count));
    let mut rep = VerificationReport::new();
    rep.push(acc.finish());
    Ok(rep)
}

/// `-sum_k v_k alpha_{w_k}`: the weight of an element of a C_q[U]-type
/// algebra with nu-vector `v` (its top along `w` is a scalar).
fn nu_weight(t0: &ActionTable, w: &[usize], v: &[u32]) -> Weight {
    let r = t0.rank();
    let mut out = Weight::zero(r);
    for (&i, &k) in w.iter().zip(v) {
        out = &out - &Weight::simple_root(r, i).scale(k as i64);
    }
    out
}

/// nu-values attained by nonzero elements of the given weight piece.
fn attained_nu(t0: &ActionTable, w: &[usize], wt: &Weight) -> Result<BTreeSet<NuVector>> {
    Ok(piece_entries(t0, w, wt)?.into_keys().collect())
}

fn piece_entries(t0: &ActionTable, w: &[usize], wt: &Weight) -> Result<BTreeMap<NuVector, NcPoly>> {
    let p = &t0.alg;
    let height: i64 = -wt.0.iter().map(|x| x.to_integer()).sum::<i64>();
    let mut entries = BTreeMap::new();
    if height >= 0 {
        for m in p.graded_basis(height as u32).into_iter().filter(|m| &p.weight(m) == wt) {
            if let Some((v, b)) = peel_new(t0, w, &entries, &NcPoly::mono(m))? {
                entries.insert(v, b);
            }
        }
    }
    Ok(entries)
}

/// Writes `a = sum_k hw_k * emb(b_k)` by repeatedly removing
/// `E_top(a) * emb(b_{nu(a)})`.
pub fn decompose(t: &ActionTable, a: &NcPoly, basis: &AdaptedBasis, emb: &Embedding) -> Result<Vec<(NcPoly, NuVector)>> {
    nonzero(a)?;
    let p = &t.alg;
    let mut r = a.clone();
    let mut out = Vec::new();
    let mut guard = 0usize;
    while !r.is_zero() {
        guard += 1;
        if guard > 100_000 {
            return Err(QmaError::Certification("decomposition did not terminate".into()));
        }
        let (v, top) = nu_and_top(t, &basis.word, &r);
        let b = basis.entries.get(&v).ok_or_else(|| QmaError::Domain(format!("nu value {:?} is outside the adapted basis", v)))?;
        let next = r.sub(&p.mul(&top, &emb.apply(b)));
        if next == r {
            return Err(QmaError::Certification("decomposition step made no progress".into()));
        }
        out.push((top, v));
        r = next;
    }
    Ok(out)
}

/// Like [`decompose`], filling in missing basis entries from `t0`.
pub fn decompose_extending(t: &ActionTable, t0: &ActionTable, a: &NcPoly, basis: &mut AdaptedBasis, emb: &Embedding) -> Result<Vec<(NcPoly, NuVector)>> {
    nonzero(a)?;
    let mut r = a.clone();
    let mut guard = 0usize;
    while !r.is_zero() {
        guard += 1;
        if guard > 100_000 {
            return Err(QmaError::Certification("decomposition did not terminate".into()));
        }
        let (v, top) = nu_and_top(t, &basis.word, &r);
        basis.extend_for(t0, &v)?;
        let b = basis.entries.get(&v).ok_or_else(|| QmaError::Domain(format!("nu value {:?} is not attained in the source", v)))?;
        r = r.sub(&t.alg.mul(&top, &emb.apply(b)));
    }
    decompose(t, a, basis, emb)
}

/// `sum_k hw_k * emb(b_k)`.
pub fn reassemble(t: &ActionTable, parts: &[(NcPoly, NuVector)], basis: &AdaptedBasis, emb: &Embedding) -> Result<NcPoly> {
    let mut out = NcPoly::zero();
    for (h, v) in parts {
        let b = basis.entries.get(v).ok_or_else(|| QmaError::Domain(format!("nu value {:?} is outside the adapted basis", v)))?;
        out = out.add(&t.alg.mul(h, &emb.apply(b)));
    }
    Ok(out)
}

/// Extends images of the simple generators `x_i` of a C_q[U] preset to
/// all root-vector generators through their Chevalley expansions.
pub fn embedding_from_simple(source: Arc<Presentation>, target: Arc<Presentation>, simple_images: &[NcPoly]) -> Result<Embedding> {
    let pbw = source.pbw.clone().ok_or_else(|| QmaError::Input(format!("'{}' has no root-vector data", source.name)))?;
    if simple_images.len() != pbw.simple.len() {
        return Err(QmaError::Input("one image per simple root is required".into()));
    }
    let mut images = vec![NcPoly::zero(); source.ngens()];
    for (k, e) in pbw.expansions.iter().enumerate() {
        let mut v = NcPoly::zero();
        for (w, c) in e {
            let f: Vec<NcPoly> = w.iter().map(|&l| simple_images[l].clone()).collect();
            v.add_scaled(&target.mul_all(&f), c);
        }
        images[pbw.offset + k] = v;
    }
    Embedding::new(source, target, images)
}

/// The embedding of C_q[U](A2) into the localized 3 x 2 quantum matrices:
/// `x1 -> x11^-1 x21`, `x2 -> D^-1 (x11 x32 - q^-1 x12 x31)`.
pub fn qmat32_embedding() -> Result<Embedding> {
    let src = crate::ncpoly::presets::preset("cqU-A2")?;
    let dst = crate::ncpoly::presets::preset("localized-qmat32")?;
    let x1 = parse_expr("y*x21", &dst)?;
    let x2 = parse_expr("z*(x11*x32 - q^-1*x12*x31)", &dst)?;
    embedding_from_simple(src, dst, &[x1, x2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::preset_action;

    fn ex(p: &Presentation, s: &str) -> NcPoly {
        parse_expr(s, p).unwrap()
    }

    #[test]
    fn ell_and_top() {
        let t = preset_action("cqU-A1").unwrap();
        let p = t.alg.clone();
        assert_eq!(ell(&t, 0, &ex(&p, "x1")).unwrap(), 1);
        assert_eq!(ell(&t, 0, &ex(&p, "x1^3")).unwrap(), 3);
        assert_eq!(ell(&t, 0, &ex(&p, "5")).unwrap(), 0);
        assert!(ell(&t, 0, &NcPoly::zero()).is_err());
        assert_eq!(e_top(&t, 0, &ex(&p, "x1^2")).unwrap(), ex(&p, "q^-1"));
    }

    #[test]
    fn nu_vectors_a2() {
        let t = preset_action("cqU-A2").unwrap();
        let p = t.alg.clone();
        let w = vec![0, 1, 0];
        assert_eq!(nu(&t, &w, &p.one()).unwrap(), vec![0, 0, 0]);
        assert_eq!(nu(&t, &w, &ex(&p, "x1")).unwrap(), vec![1, 0, 0]);
        assert_eq!(nu(&t, &w, &ex(&p, "x2")).unwrap(), vec![0, 1, 0]);
        assert!(nu(&t, &[0, 0], &ex(&p, "x1")).is_err());
        let top = e_top_word(&t, &w, &ex(&p, "x1")).unwrap();
        assert!(top.as_scalar().is_some_and(|c| !c.is_zero()));
    }

    #[test]
    fn adapted_basis_a1() {
        let t = preset_action("cqU-A1").unwrap();
        let p = t.alg.clone();
        let b = build_adapted_basis(&t, &[0], 3).unwrap();
        assert_eq!(b.entries[&vec![0]], p.one());
        assert_eq!(b.entries[&vec![2]], ex(&p, "q*x1^2"));
        assert_eq!(b.entries.len(), 4);
    }

    #[test]
    fn adapted_basis_a2_counts() {
        let t = preset_action("cqU-A2").unwrap();
        let b = build_adapted_basis(&t, &[0, 1, 0], 3).unwrap();
        assert_eq!(b.entries.len(), 1 + 2 + 4 + 6);
        for (v, e) in &b.entries {
            assert_eq!(nu(&t, &[0, 1, 0], e).unwrap(), *v);
            assert_eq!(e_top_word(&t, &[0, 1, 0], e).unwrap(), t.alg.one());
        }
    }

    #[test]
    fn hw_of_quantum_matrices() {
        let t = preset_action("qmat-3-2").unwrap();
        let p = t.alg.clone();
        let h1 = hw_basis(&t, 1);
        assert_eq!(h1.len(), 2);
        assert!(h1.contains(&ex(&p, "x11")) && h1.contains(&ex(&p, "x12")));
        let delta = ex(&p, "x11*x22 - q^-1*x12*x21");
        assert!(is_highest_weight(&t, &delta));
        let cq = preset_action("cqU-A1").unwrap();
        assert!(hw_basis(&cq, 2).is_empty());
    }

    #[test]
    fn decompose_roundtrip_cqu() {
        let t = preset_action("cqU-A2").unwrap();
        let p = t.alg.clone();
        let emb = Embedding::identity(p.clone()).unwrap();
        let b = build_adapted_basis(&t, &[0, 1, 0], 3).unwrap();
        let a = ex(&p, "x1*x2 + 3*x12 - x2^2*x1");
        let parts = decompose(&t, &a, &b, &emb).unwrap();
        assert!(parts.iter().all(|(h, _)| h.as_scalar().is_some()));
        assert_eq!(reassemble(&t, &parts, &b, &emb).unwrap(), a);
    }

    #[test]
    fn factorization_over_itself() {
        let t = preset_action("cqU-A2").unwrap();
        let emb = Embedding::identity(t.alg.clone()).unwrap();
        let (wit, rep) = verify_factorization(&t, &t, &emb, &[0, 1, 0], &FactorizationConfig::new(3)).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        assert!(wit.is_iso());
        assert_eq!(wit.rows.last().unwrap().dim_a, 13);
    }
}
