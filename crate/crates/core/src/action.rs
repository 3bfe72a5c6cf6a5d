//! Module-algebra actions: images of generators, extension to products by
//! the coproduct laws, divided powers, and certification.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::cartan::Weight;
use crate::error::{QmaError, Result};
use crate::ncpoly::presets::preset;
use crate::ncpoly::{parse_expr, Monomial, NcPoly, Presentation};
use crate::report::{CheckAcc, VerificationReport};
use crate::scalar::{q_binomial, q_diff, q_factorial, RatFunc};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum HopfGen {
    K(usize),
    E(usize),
    F(usize),
    /// `F_{i,1}` of U_q(g*).
    F1(usize),
    /// `F_{i,2}` of U_q(g*).
    F2(usize),
}

impl HopfGen {
    pub fn index(&self) -> usize {
        match *self {
            HopfGen::K(i) | HopfGen::E(i) | HopfGen::F(i) | HopfGen::F1(i) | HopfGen::F2(i) => i,
        }
    }

    pub fn law(&self) -> Law {
        match self {
            HopfGen::K(_) => Law::Grouplike,
            HopfGen::E(_) => Law::SkewE,
            HopfGen::F(_) | HopfGen::F1(_) => Law::SkewF1,
            HopfGen::F2(_) => Law::SkewF2,
        }
    }

    pub fn parse(s: &str) -> Result<HopfGen> {
        let bad = || QmaError::Input(format!("unknown Hopf generator '{}'", s));
        let (head, rest) = s.split_at(1);
        let (num, fam) = match rest.split_once(['_', ',']) {
            Some((a, b)) => (a, Some(b)),
            None => (rest, None),
        };
        let i: usize = num.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        let i = i - 1;
        match (head, fam) {
            ("K", None) => Ok(HopfGen::K(i)),
            ("E", None) => Ok(HopfGen::E(i)),
            ("F", None) => Ok(HopfGen::F(i)),
            ("F", Some("1")) => Ok(HopfGen::F1(i)),
            ("F", Some("2")) => Ok(HopfGen::F2(i)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for HopfGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HopfGen::K(i) => write!(f, "K{}", i + 1),
            HopfGen::E(i) => write!(f, "E{}", i + 1),
            HopfGen::F(i) => write!(f, "F{}", i + 1),
            HopfGen::F1(i) => write!(f, "F{}_1", i + 1),
            HopfGen::F2(i) => write!(f, "F{}_2", i + 1),
        }
    }
}

/// How an operator acts on a product `x y`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Law {
    /// `K(xy) = K(x) K(y)`.
    Grouplike,
    /// `E(xy) = E(x) K(y) + x E(y)`.
    SkewE,
    /// `F(xy) = F(x) y + K^-1(x) F(y)`.
    SkewF1,
    /// `F(xy) = F(x) K^-1(y) + x F(y)`.
    SkewF2,
    /// `D(xy) = D(x) y + x D(y)`.
    Derivation,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HopfTag {
    UqG,
    UqBPlus,
    UqBMinus,
    UqGstar,
    /// U(g) at q = 1: e_i, f_i act by derivations, h_i by weights.
    UgClassical,
    UbMinusClassical,
}

impl HopfTag {
    pub fn name(&self) -> &'static str {
        match self {
            HopfTag::UqG => "Uq_g",
            HopfTag::UqBPlus => "Uq_b_plus",
            HopfTag::UqBMinus => "Uq_b_minus",
            HopfTag::UqGstar => "Uq_gstar",
            HopfTag::UgClassical => "U_g_classical",
            HopfTag::UbMinusClassical => "U_bminus_classical",
        }
    }

    pub fn parse(s: &str) -> Result<HopfTag> {
        match s {
            "Uq_g" => Ok(HopfTag::UqG),
            "Uq_b_plus" => Ok(HopfTag::UqBPlus),
            "Uq_b_minus" => Ok(HopfTag::UqBMinus),
            "Uq_gstar" => Ok(HopfTag::UqGstar),
            "U_g_classical" => Ok(HopfTag::UgClassical),
            "U_bminus_classical" => Ok(HopfTag::UbMinusClassical),
            _ => Err(QmaError::Input(format!("unknown hopf_tag '{}'", s))),
        }
    }

    /// Non-grouplike generators of the tag for rank r.
    pub fn generators(&self, r: usize) -> Vec<HopfGen> {
        let mut out = Vec::new();
        for i in 0..r {
            match self {
                HopfTag::UqG | HopfTag::UgClassical => {
                    out.push(HopfGen::E(i));
                    out.push(HopfGen::F(i));
                }
                HopfTag::UqBPlus => out.push(HopfGen::E(i)),
                HopfTag::UqBMinus | HopfTag::UbMinusClassical => out.push(HopfGen::F(i)),
                HopfTag::UqGstar => {
                    out.push(HopfGen::F1(i));
                    out.push(HopfGen::F2(i));
                }
            }
        }
        out
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, HopfTag::UgClassical | HopfTag::UbMinusClassical)
    }

    /// Whether the tag contains both E and F.
    pub fn has_ef(&self) -> bool {
        matches!(self, HopfTag::UqG | HopfTag::UgClassical)
    }
}

type ActKey = (HopfGen, Monomial);

pub struct ActionTable {
    pub tag: HopfTag,
    pub alg: Arc<Presentation>,
    /// Images of (positive) generators; missing entries are zero.
    pub images: BTreeMap<(HopfGen, usize), NcPoly>,
    cache: Mutex<HashMap<ActKey, NcPoly>>,
}

impl Clone for ActionTable {
    fn clone(&self) -> Self {
        ActionTable { tag: self.tag, alg: self.alg.clone(), images: self.images.clone(), cache: Mutex::new(HashMap::new()) }
    }
}

impl fmt::Debug for ActionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ActionTable").field("tag", &self.tag).field("alg", &self.alg.name).finish()
    }
}

impl ActionTable {
    pub fn new(tag: HopfTag, alg: Arc<Presentation>, images: BTreeMap<(HopfGen, usize), NcPoly>) -> Self {
        ActionTable { tag, alg, images, cache: Mutex::new(HashMap::new()) }
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }

    fn qi(&self, i: usize) -> u32 {
        self.alg.cartan.d[i] as u32
    }

    /// Extension law of `h` under this tag.
    pub fn law(&self, h: HopfGen) -> Law {
        match h {
            HopfGen::K(_) => Law::Grouplike,
            _ if self.tag.is_classical() => Law::Derivation,
            _ => h.law(),
        }
    }

    /// `[n]_{q_i}!`, or `n!` for classical tags.
    pub fn factorial(&self, i: usize, n: u32) -> RatFunc {
        if self.tag.is_classical() {
            RatFunc::from_int((1..=n as i64).product())
        } else {
            q_factorial(n, self.qi(i))
        }
    }

    /// `[n k]_{q_i}`, or the ordinary binomial for classical tags.
    pub fn binomial(&self, i: usize, n: u32, k: u32) -> RatFunc {
        if self.tag.is_classical() {
            let b = (0..k as i64).fold(1i64, |acc, t| acc * (n as i64 - t) / (t + 1));
            RatFunc::from_int(b)
        } else {
            q_binomial(n, k, self.qi(i))
        }
    }

    /// `h_i` acting by `(alpha_i^vee, weight)`.
    pub fn act_h(&self, i: usize, a: &NcPoly) -> NcPoly {
        let p = &self.alg;
        let d = crate::scalar::rat(p.cartan.d[i]);
        let mut out = NcPoly::zero();
        for (m, c) in &a.terms {
            let v = crate::scalar::rat(p.k_exp(i, m)) / &d;
            out.add_term(m, &c.scale_rat(&v));
        }
        out
    }

    /// Image of a letter `g^s`.
    pub fn letter_image(&self, h: HopfGen, g: usize, s: i32) -> NcPoly {
        let p = &self.alg;
        if let HopfGen::K(i) = h {
            return NcPoly::term(p.gen_mono(g, s), RatFunc::q_pow((p.k_exp(i, &p.gen_mono(g, 1)) * s as i64) as i32));
        }
        let img = self.images.get(&(h, g)).cloned().unwrap_or_default();
        if s == 1 || img.is_zero() {
            return img;
        }
        // Derived from h(g g^-1) = 0 for each law.
        let i = h.index();
        let k = p.k_exp(i, &p.gen_mono(g, 1)) as i32;
        let gi = p.gen_pow(g, -1);
        let core = p.mul(&gi, &p.mul(&img, &gi));
        let c = match self.law(h) {
            Law::SkewE => RatFunc::q_pow(-k),
            Law::SkewF1 | Law::SkewF2 => RatFunc::q_pow(k),
            Law::Derivation => RatFunc::one(),
            Law::Grouplike => unreachable!(),
        };
        core.scale(&c.neg())
    }

    /// Applies the extension law to a product `x y` given the actions on
    /// the factors.
    pub fn law_product(&self, h: HopfGen, x: &NcPoly, hx: &NcPoly, y: &NcPoly, hy: &NcPoly) -> NcPoly {
        let p = &self.alg;
        let i = h.index();
        match self.law(h) {
            Law::Grouplike => p.mul(hx, hy),
            Law::SkewE => p.mul(hx, &p.k_act(i, 1, y)).add(&p.mul(x, hy)),
            Law::SkewF1 => p.mul(hx, y).add(&p.mul(&p.k_act(i, -1, x), hy)),
            Law::SkewF2 => p.mul(hx, &p.k_act(i, -1, y)).add(&p.mul(x, hy)),
            Law::Derivation => p.mul(hx, y).add(&p.mul(x, hy)),
        }
    }

    pub fn act_mono(&self, h: HopfGen, m: &Monomial) -> NcPoly {
        let p = &self.alg;
        if let HopfGen::K(i) = h {
            return NcPoly::term(m.clone(), RatFunc::q_pow(p.k_exp(i, m) as i32));
        }
        let Some(t) = m.top() else { return NcPoly::zero() };
        let s = m.0[t].signum();
        if m.0[t] == s && m.bottom() == Some(t) {
            return self.letter_image(h, t, s);
        }
        let key = (h, m.clone());
        if let Some(v) = self.cache.lock().expect("lock").get(&key) {
            return v.clone();
        }
        let mut rest = m.clone();
        rest.0[t] -= s;
        let x = NcPoly::mono(rest.clone());
        let y = p.gen_pow(t, s);
        let hx = self.act_mono(h, &rest);
        let hy = self.letter_image(h, t, s);
        let out = self.law_product(h, &x, &hx, &y, &hy);
        self.cache.lock().expect("lock").insert(key, out.clone());
        out
    }

    pub fn act(&self, h: HopfGen, a: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (m, c) in &a.terms {
            out.add_scaled(&self.act_mono(h, m), c);
        }
        out
    }

    /// `K_i^{sign}` acting.
    pub fn act_k(&self, i: usize, sign: i32, a: &NcPoly) -> NcPoly {
        self.alg.k_act(i, sign, a)
    }

    pub fn act_pow(&self, h: HopfGen, n: u32, a: &NcPoly) -> NcPoly {
        (0..n).fold(a.clone(), |acc, _| self.act(h, &acc))
    }

    /// `E_i^n(a) / [n]_{q_i}!`.
    pub fn act_divided_e(&self, i: usize, n: u32, a: &NcPoly) -> NcPoly {
        let f = self.factorial(i, n).inv().expect("nonzero");
        self.act_pow(HopfGen::E(i), n, a).scale(&f)
    }

    /// Action on a raw word of letters, by the extension laws only.
    pub fn act_word(&self, h: HopfGen, w: &[(usize, i32)]) -> NcPoly {
        let p = &self.alg;
        match w.len() {
            0 => {
                if let HopfGen::K(_) = h {
                    p.one()
                } else {
                    NcPoly::zero()
                }
            }
            1 => self.letter_image(h, w[0].0, w[0].1),
            n => {
                let x = p.word(&w[..n - 1]);
                let y = p.word(&w[n - 1..]);
                let hx = self.act_word(h, &w[..n - 1]);
                let hy = self.act_word(h, &w[n - 1..]);
                self.law_product(h, &x, &hx, &y, &hy)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let images: Vec<Value> = self
            .images
            .iter()
            .map(|((h, g), e)| json!({"hopf_gen": h.to_string(), "alg_gen": self.alg.gens[*g].name, "expr": self.alg.fmt_poly(e)}))
            .collect();
        json!({"hopf_tag": self.tag.name(), "images": images})
    }

    pub fn from_json(v: &Value, alg: Arc<Presentation>) -> Result<ActionTable> {
        let tag = HopfTag::parse(v.get("hopf_tag").and_then(|x| x.as_str()).unwrap_or("Uq_g"))?;
        let mut images = BTreeMap::new();
        for it in v.get("images").and_then(|x| x.as_array()).cloned().unwrap_or_default() {
            let h = HopfGen::parse(it.get("hopf_gen").and_then(|x| x.as_str()).unwrap_or(""))?;
            let gname = it.get("alg_gen").and_then(|x| x.as_str()).unwrap_or("");
            let g = alg.gen_index(gname).ok_or_else(|| QmaError::Input(format!("unknown generator '{}'", gname)))?;
            let e = parse_expr(it.get("expr").and_then(|x| x.as_str()).unwrap_or("0"), &alg)?;
            images.insert((h, g), e);
        }
        Ok(ActionTable::new(tag, alg, images))
    }
}

fn weight_shift(h: HopfGen, alg: &Presentation) -> Option<Weight> {
    let r = alg.rank();
    match h {
        HopfGen::K(_) => None,
        HopfGen::E(i) => Some(Weight::simple_root(r, i)),
        HopfGen::F(i) | HopfGen::F1(i) | HopfGen::F2(i) => Some(-&Weight::simple_root(r, i)),
    }
}

/// Images have the right weights, rules are respected, and the extension
/// law holds on all products of basis monomials of total degree `<= max_deg`.
pub fn check_action_well_defined(t: &ActionTable, max_deg: u32) -> VerificationReport {
    let p = &t.alg;
    let mut rep = VerificationReport::new();
    let gens = t.tag.generators(t.rank());

    let mut w = CheckAcc::new(&format!("action-weights/{}", p.name), "operators shift weights by simple roots", max_deg);
    for ((h, g), img) in &t.images {
        if img.is_zero() {
            continue;
        }
        let expected = weight_shift(*h, p).map(|s| &p.gens[*g].weight + &s);
        let got = p.poly_weight(img);
        w.expect(expected.is_some() && got == expected, || {
            (format!("{}({})", h, p.gens[*g].name), expected.map_or("-".into(), |x| x.to_string()), p.fmt_poly(img))
        });
    }
    rep.push(w.finish());

    let mut rules = CheckAcc::new(&format!("action-rules/{}", p.name), "action descends through the relations", max_deg);
    for r in &p.rules {
        let (b, a) = r.lhs;
        for &h in &gens {
            let raw = t.act_word(h, &[(b, 1), (a, 1)]);
            let got = t.act(h, &r.rhs);
            rules.expect(raw == got, || {
                (format!("{}({}*{})", h, p.gens[b].name, p.gens[a].name), p.fmt_poly(&raw), p.fmt_poly(&got))
            });
        }
    }
    rep.push(rules.finish());

    let mut law = CheckAcc::new(&format!("module-algebra/{}", p.name), "module-algebra law on products", max_deg);
    let basis: Vec<(u32, Monomial)> = (0..=max_deg).flat_map(|d| p.graded_basis(d).into_iter().map(move |m| (d, m))).collect();
    for (d1, m1) in &basis {
        for (d2, m2) in &basis {
            if d1 + d2 > max_deg || *d1 == 0 || *d2 == 0 {
                continue;
            }
            let x = NcPoly::mono(m1.clone());
            let y = NcPoly::mono(m2.clone());
            let xy = p.mul(&x, &y);
            for &h in &gens {
                let lhs = t.act(h, &xy);
                let rhs = t.law_product(h, &x, &t.act(h, &x), &y, &t.act(h, &y));
                law.expect(lhs == rhs, || {
                    (format!("{}({} * {})", h, p.fmt_mono(m1), p.fmt_mono(m2)), p.fmt_poly(&rhs), p.fmt_poly(&lhs))
                });
            }
        }
    }
    rep.push(law.finish());
    rep
}

fn serre_apply(t: &ActionTable, hi: HopfGen, hj: HopfGen, a: &NcPoly) -> NcPoly {
    let i = hi.index();
    let j = hj.index();
    let c = &t.alg.cartan;
    let n = (1 - c.c[i][j]) as u32;
    let mut out = NcPoly::zero();
    for k in 0..=n {
        let v = t.act_pow(hi, n - k, a);
        let v = t.act(hj, &v);
        let v = t.act_pow(hi, k, &v);
        let mut coef = t.binomial(i, n, k);
        if k % 2 == 1 {
            coef = coef.neg();
        }
        out.add_scaled(&v, &coef);
    }
    out
}

/// Quantum Serre combination `sum_k (-1)^k [n k]_{q_i} h_i^k h_j h_i^{n-k}`
/// with `n = 1 - c_ij`, applied to `a`.
pub fn serre_operator(t: &ActionTable, hi: HopfGen, hj: HopfGen, a: &NcPoly) -> NcPoly {
    serre_apply(t, hi, hj, a)
}

/// Defining relations of U_q(g) as operators on every basis monomial.
pub fn check_hopf_relations(t: &ActionTable, max_deg: u32) -> VerificationReport {
    let p = &t.alg;
    if t.tag == HopfTag::UqGstar {
        return crate::gstar::gstar_suite(p, &|h, a| t.act(h, a), max_deg, None);
    }
    if t.tag.is_classical() {
        return crate::classical::check_g_relations(t, max_deg);
    }
    let r = t.rank();
    let c = &p.cartan;
    let mut rep = VerificationReport::new();
    let basis = p.basis_up_to(max_deg);
    let name = |s: &str| format!("{}/{}", s, p.name);

    let mut kconj = CheckAcc::new(&name("hopf-k-conjugation"), "K_i E_j K_i^-1 = q^(a_i,a_j) E_j and likewise for F", max_deg);
    let mut ef = CheckAcc::new(&name("hopf-ef-commutator"), "[E_i, F_j] = delta_ij (K_i - K_i^-1)/(q_i - q_i^-1)", max_deg);
    let mut serre_e = CheckAcc::new(&name("hopf-serre-e"), "quantum Serre relations for E", max_deg);
    let mut serre_f = CheckAcc::new(&name("hopf-serre-f"), "quantum Serre relations for F", max_deg);
    for m in &basis {
        let a = NcPoly::mono(m.clone());
        for i in 0..r {
            for j in 0..r {
                let cij = c.root_pairing(i, j) as i32;
                let mut ops = Vec::new();
                if t.tag != HopfTag::UqBMinus {
                    ops.push((HopfGen::E(j), cij));
                }
                if t.tag.has_ef() || t.tag == HopfTag::UqBMinus {
                    ops.push((HopfGen::F(j), -cij));
                }
                for (h, e) in ops {
                    let lhs = t.act_k(i, 1, &t.act(h, &t.act_k(i, -1, &a)));
                    let rhs = t.act(h, &a).scale(&RatFunc::q_pow(e));
                    kconj.expect(lhs == rhs, || (format!("K{0} {1} K{0}^-1 ({2})", i + 1, h, p.fmt_mono(m)), p.fmt_poly(&rhs), p.fmt_poly(&lhs)));
                }
                if t.tag == HopfTag::UqG {
                    let lhs = t.act(HopfGen::E(i), &t.act(HopfGen::F(j), &a)).sub(&t.act(HopfGen::F(j), &t.act(HopfGen::E(i), &a)));
                    let rhs = if i == j {
                        let d = c.d[i] as u32;
                        t.act_k(i, 1, &a).sub(&t.act_k(i, -1, &a)).scale(&q_diff(d).inv().expect("nonzero"))
                    } else {
                        NcPoly::zero()
                    };
                    ef.expect(lhs == rhs, || (format!("[E{}, F{}]({})", i + 1, j + 1, p.fmt_mono(m)), p.fmt_poly(&rhs), p.fmt_poly(&lhs)));
                }
                if i != j {
                    if t.tag != HopfTag::UqBMinus {
                        let v = serre_apply(t, HopfGen::E(i), HopfGen::E(j), &a);
                        serre_e.expect(v.is_zero(), || (format!("Serre(E{}, E{})({})", i + 1, j + 1, p.fmt_mono(m)), "0".into(), p.fmt_poly(&v)));
                    }
                    if t.tag.has_ef() || t.tag == HopfTag::UqBMinus {
                        let v = serre_apply(t, HopfGen::F(i), HopfGen::F(j), &a);
                        serre_f.expect(v.is_zero(), || (format!("Serre(F{}, F{})({})", i + 1, j + 1, p.fmt_mono(m)), "0".into(), p.fmt_poly(&v)));
                    }
                }
            }
        }
    }
    rep.push(kconj.finish());
    if t.tag != HopfTag::UqBMinus {
        rep.push(serre_e.finish());
    }
    if t.tag == HopfTag::UqG {
        rep.push(ef.finish());
    }
    if t.tag != HopfTag::UqBPlus {
        rep.push(serre_f.finish());
    }
    rep
}

/// Expands a free-algebra element in Chevalley letters into a polynomial
/// of the presentation using the given generator for each letter.
pub fn expand_chevalley(p: &Presentation, simple: &[usize], e: &crate::freealg::FreeElem<RatFunc>) -> Vec<(Vec<(usize, i32)>, RatFunc)> {
    let _ = p;
    e.iter().map(|(w, c)| (w.iter().map(|&l| (simple[l], 1)).collect(), c.clone())).collect()
}

/// The action of U_q(g) on C_q[U]: `E_i(x_j) = delta_ij`, K through
/// weights, `F_i(x) = (x_i x - K_i^-1(x) x_i)/(q_i - q_i^-1)`; composite
/// root vectors get E-images from their expansion in the x_i.
pub fn preset_action_cqu(alg: Arc<Presentation>) -> Result<ActionTable> {
    let pbw = alg.pbw.clone().ok_or_else(|| QmaError::Input(format!("'{}' has no root-vector data", alg.name)))?;
    let r = alg.rank();
    let mut images = BTreeMap::new();
    for i in 0..r {
        images.insert((HopfGen::E(i), pbw.simple[i]), alg.one());
    }
    let base = ActionTable::new(HopfTag::UqG, alg.clone(), images.clone());
    for (k, e) in pbw.expansions.iter().enumerate() {
        let g = pbw.offset + k;
        if pbw.simple.contains(&g) {
            continue;
        }
        for i in 0..r {
            let mut img = NcPoly::zero();
            for (w, c) in expand_chevalley(&alg, &pbw.simple, e) {
                img.add_scaled(&base.act_word(HopfGen::E(i), &w), &c);
            }
            if !img.is_zero() {
                images.insert((HopfGen::E(i), g), img);
            }
        }
    }
    for i in 0..r {
        let xi = alg.gen(pbw.simple[i]);
        let norm = q_diff(alg.cartan.d[i] as u32).inv().expect("nonzero");
        for g in 0..alg.ngens() {
            let x = alg.gen(g);
            let v = alg.mul(&xi, &x).sub(&alg.mul(&alg.k_act(i, -1, &x), &xi)).scale(&norm);
            if !v.is_zero() {
                images.insert((HopfGen::F(i), g), v);
            }
        }
    }
    Ok(ActionTable::new(HopfTag::UqG, alg, images))
}

/// Row action of U_q(sl_m) on quantum m x n matrices:
/// `E_i(x_{i+1,k}) = x_{i,k}`, `F_i(x_{i,k}) = x_{i+1,k}`.
pub fn preset_action_qmatrix(m: usize, n: usize) -> Result<ActionTable> {
    let alg = preset(&format!("qmat-{}-{}", m, n))?;
    let idx = |i: usize, j: usize| i * n + j;
    let mut images = BTreeMap::new();
    for i in 0..m.saturating_sub(1) {
        for k in 0..n {
            images.insert((HopfGen::E(i), idx(i + 1, k)), alg.gen(idx(i, k)));
            images.insert((HopfGen::F(i), idx(i, k)), alg.gen(idx(i + 1, k)));
        }
    }
    Ok(ActionTable::new(HopfTag::UqG, alg, images))
}

/// Map from qmat(3,2) into the localized algebra (`x22` becomes
/// `x11^-1 (D + q^-1 x12 x21)`).
pub fn qmat32_to_localized(a: &NcPoly) -> NcPoly {
    let src = preset("qmat-3-2").expect("preset");
    let dst = preset("localized-qmat32").expect("preset");
    let imgs: Vec<NcPoly> = src.gens.iter().map(|g| parse_expr(&g.name, &dst).expect("alias or generator")).collect();
    src.map_into(&dst, a, &|g, _| imgs[g].clone())
}

/// The row action on the localized 3 x 2 quantum matrices, with images of
/// `D` computed from the minor in the unlocalized algebra.
pub fn preset_action_localized() -> Result<ActionTable> {
    let base = preset_action_qmatrix(3, 2)?;
    let src = base.alg.clone();
    let dst = preset("localized-qmat32")?;
    let delta = parse_expr("x11*x22 - q^-1*x12*x21", &src)?;
    let mut images = BTreeMap::new();
    for h in HopfTag::UqG.generators(2) {
        for (g, decl) in dst.gens.iter().enumerate() {
            let pre = if decl.name == "D" { delta.clone() } else { parse_expr(&decl.name, &src)? };
            let v = qmat32_to_localized(&base.act(h, &pre));
            if !v.is_zero() {
                images.insert((h, g), v);
            }
        }
    }
    Ok(ActionTable::new(HopfTag::UqG, dst, images))
}

/// Named action presets.
pub fn preset_action(name: &str) -> Result<ActionTable> {
    let lower = name.to_ascii_lowercase();
    if lower.starts_with("cqu-") {
        return preset_action_cqu(preset(name)?);
    }
    if lower == "localized-qmat32" {
        return preset_action_localized();
    }
    if lower.starts_with("torus-") {
        return Ok(ActionTable::new(HopfTag::UqG, preset(name)?, BTreeMap::new()));
    }
    if let Some(t) = lower.strip_prefix("qmat-") {
        let parts: Vec<&str> = t.split('-').collect();
        if let [a, b] = parts[..] {
            if let (Ok(m), Ok(n)) = (a.parse(), b.parse()) {
                return preset_action_qmatrix(m, n);
            }
        }
    }
    Err(QmaError::Input(format!("no action preset for '{}'", name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(p: &Presentation, s: &str) -> NcPoly {
        parse_expr(s, p).unwrap()
    }

    #[test]
    fn cqu_a1_generator_action() {
        let t = preset_action("cqU-A1").unwrap();
        let p = t.alg.clone();
        let x = ex(&p, "x1");
        assert_eq!(t.act(HopfGen::E(0), &x), p.one());
        assert_eq!(t.act(HopfGen::F(0), &x), ex(&p, "-q*x1^2"));
        assert_eq!(t.act(HopfGen::K(0), &x), ex(&p, "q^-2*x1"));
        assert!(t.act(HopfGen::F(0), &p.one()).is_zero());
    }

    #[test]
    fn divided_powers() {
        let t = preset_action("cqU-A1").unwrap();
        let p = t.alg.clone();
        assert_eq!(t.act_divided_e(0, 2, &ex(&p, "x1^2")), ex(&p, "q^-1"));
        assert_eq!(t.act_divided_e(0, 0, &ex(&p, "x1")), ex(&p, "x1"));
        assert!(t.act_divided_e(0, 2, &ex(&p, "x1")).is_zero());
    }

    #[test]
    fn composite_root_vector_images() {
        let t = preset_action("cqU-A2").unwrap();
        let p = t.alg.clone();
        let x12 = ex(&p, "x12");
        assert_eq!(t.act(HopfGen::E(0), &x12), ex(&p, "x2"));
        assert!(t.act(HopfGen::E(1), &x12).is_zero());
    }

    #[test]
    fn localized_inverse_weight() {
        let t = preset_action("localized-qmat32").unwrap();
        let p = t.alg.clone();
        assert_eq!(t.act(HopfGen::K(0), &ex(&p, "y")), ex(&p, "q^-1*y"));
        assert!(t.act(HopfGen::E(0), &ex(&p, "z")).is_zero());
        assert!(t.act(HopfGen::E(1), &ex(&p, "D")).is_zero());
    }

    #[test]
    fn perturbed_image_fails() {
        let t = preset_action("cqU-A1").unwrap();
        let mut images = t.images.clone();
        images.insert((HopfGen::E(0), 0), t.alg.gen(0));
        let bad = ActionTable::new(HopfTag::UqG, t.alg.clone(), images);
        let r = check_action_well_defined(&bad, 3);
        assert!(!r.passed());
    }
}
