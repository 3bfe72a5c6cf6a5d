//! Noncommutative algebras given by ordered generators and two-letter
//! rewrite rules. Elements are finitely supported maps from normal
//! monomials (exponent vectors over the ordered generators) to scalars.
//!
//! Invertible generators come first in the order and may carry negative
//! exponents. Products are normalized by right-multiplying a normal
//! monomial by one letter at a time; the results are memoized.

pub mod check;
mod parse;
pub mod presets;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::Rational64;
use serde_json::{json, Value};

use crate::cartan::{preset_cartan, CartanData, Weight};
use crate::error::{QmaError, Result};
use crate::scalar::RatFunc;

pub use parse::parse_expr;

#[derive(Clone, Debug, PartialEq)]
pub struct GenDecl {
    pub name: String,
    pub weight: Weight,
    pub invertible: bool,
    /// Positive degree used by the filtration (x12 in C_q[U] has degree 2).
    pub degree: u32,
    /// Extra integer grading (row and column counts for quantum matrices).
    pub grade: Vec<i64>,
}

impl GenDecl {
    pub fn new(name: &str, weight: Weight) -> Self {
        GenDecl { name: name.to_string(), weight, invertible: false, degree: 1, grade: Vec::new() }
    }

    pub fn invertible(mut self) -> Self {
        self.invertible = true;
        self
    }

    pub fn with_degree(mut self, d: u32) -> Self {
        self.degree = d;
        self
    }

    pub fn with_grade(mut self, g: Vec<i64>) -> Self {
        self.grade = g;
        self
    }
}

/// Exponent vector over the ordered generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn top(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e != 0)
    }

    pub fn bottom(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }

    /// The letters of the monomial, left to right, as (generator, +-1).
    pub fn letters(&self) -> Vec<(usize, i32)> {
        let mut out = Vec::new();
        for (g, &e) in self.0.iter().enumerate() {
            for _ in 0..e.unsigned_abs() {
                out.push((g, e.signum()));
            }
        }
        out
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|e| e.unsigned_abs()).sum()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NcPoly {
    pub terms: BTreeMap<Monomial, RatFunc>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly { terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: RatFunc) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, RatFunc::one())
    }

    pub fn term(m: Monomial, c: RatFunc) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn mono(m: Monomial) -> Self {
        Self::term(m, RatFunc::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: &Monomial, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(x) => {
                *x = x.add(c);
                if x.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, o: &NcPoly, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &o.terms {
            self.add_term(m, &x.mul(c));
        }
    }

    pub fn add(&self, o: &NcPoly) -> NcPoly {
        let mut r = self.clone();
        r.add_scaled(o, &RatFunc::one());
        r
    }

    pub fn sub(&self, o: &NcPoly) -> NcPoly {
        let mut r = self.clone();
        r.add_scaled(o, &RatFunc::from_int(-1));
        r
    }

    pub fn neg(&self) -> NcPoly {
        self.scale(&RatFunc::from_int(-1))
    }

    pub fn scale(&self, c: &RatFunc) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect() }
    }

    /// The constant term, if the polynomial is a scalar.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> RatFunc {
        self.terms.get(m).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn map_coeffs<E>(&self, f: impl Fn(&RatFunc) -> std::result::Result<RatFunc, E>) -> std::result::Result<NcPoly, E> {
        let mut out = NcPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m, &f(c)?);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteRule {
    /// `(b, a)` with `b > a`: the word `g_b g_a`.
    pub lhs: (usize, usize),
    pub rhs: NcPoly,
}

type LetterKey = (Monomial, usize, i32);

pub struct Presentation {
    pub name: String,
    pub cartan: CartanData,
    pub gens: Vec<GenDecl>,
    pub rules: Vec<RewriteRule>,
    /// Extra names usable in expressions, e.g. `y` for `x11^-1`.
    pub aliases: Vec<(String, NcPoly)>,
    pub certified_degree: u32,
    /// Root-vector data for C_q[U]-type presentations.
    pub pbw: Option<Arc<presets::PbwData>>,
    rule_index: HashMap<(usize, usize), usize>,
    /// `kpair[i][g] = (alpha_i, weight(g))`.
    kpair: Vec<Vec<i64>>,
    cache: Mutex<HashMap<LetterKey, NcPoly>>,
}

impl Clone for Presentation {
    fn clone(&self) -> Self {
        Presentation {
            name: self.name.clone(),
            cartan: self.cartan.clone(),
            gens: self.gens.clone(),
            rules: self.rules.clone(),
            aliases: self.aliases.clone(),
            certified_degree: self.certified_degree,
            pbw: self.pbw.clone(),
            rule_index: self.rule_index.clone(),
            kpair: self.kpair.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation").field("name", &self.name).field("gens", &self.gens.len()).finish()
    }
}

impl Presentation {
    /// Builds a presentation; rules may be added afterwards with
    /// [`Presentation::set_rules`].
    pub fn new(name: &str, cartan: CartanData, gens: Vec<GenDecl>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            if !seen.insert(g.name.clone()) {
                return Err(QmaError::Input(format!("duplicate generator '{}'", g.name)));
            }
            if g.weight.rank() != cartan.rank() {
                return Err(QmaError::Input(format!("weight of '{}' has wrong rank", g.name)));
            }
            if g.degree == 0 {
                return Err(QmaError::Input(format!("generator '{}' has degree 0", g.name)));
            }
        }
        if let Some(k) = gens.iter().position(|g| !g.invertible) {
            if gens[k..].iter().any(|g| g.invertible) {
                return Err(QmaError::Input("invertible generators must come first".into()));
            }
        }
        let kpair = (0..cartan.rank())
            .map(|i| gens.iter().map(|g| cartan.simple_pairing(i, &g.weight)).collect::<Result<Vec<i64>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation {
            name: name.to_string(),
            cartan,
            gens,
            rules: Vec::new(),
            aliases: Vec::new(),
            certified_degree: 0,
            pbw: None,
            rule_index: HashMap::new(),
            kpair,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn set_rules(&mut self, rules: Vec<RewriteRule>) -> Result<()> {
        let mut idx = HashMap::new();
        for (k, r) in rules.iter().enumerate() {
            let (b, a) = r.lhs;
            if b <= a || b >= self.ngens() {
                return Err(QmaError::Input(format!("rule lhs ({}, {}) is not an out-of-order pair", b, a)));
            }
            let lw = &(&self.gens[b].weight + &self.gens[a].weight);
            for m in r.rhs.terms.keys() {
                if &self.weight(m) != lw {
                    return Err(QmaError::Input(format!(
                        "rule {}*{} is not weight-homogeneous",
                        self.gens[b].name, self.gens[a].name
                    )));
                }
            }
            idx.entry((b, a)).or_insert(k);
        }
        self.rules = rules;
        self.rule_index = idx;
        self.cache.lock().expect("cache lock").clear();
        Ok(())
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn alias(&self, name: &str) -> Option<&NcPoly> {
        self.aliases.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn rule(&self, b: usize, a: usize) -> Option<&NcPoly> {
        self.rule_index.get(&(b, a)).map(|&k| &self.rules[k].rhs)
    }

    pub fn one(&self) -> NcPoly {
        NcPoly::one(self.ngens())
    }

    pub fn scalar(&self, c: RatFunc) -> NcPoly {
        NcPoly::scalar(self.ngens(), c)
    }

    pub fn unit_mono(&self) -> Monomial {
        Monomial::one(self.ngens())
    }

    pub fn gen_mono(&self, g: usize, e: i32) -> Monomial {
        let mut m = self.unit_mono();
        m.0[g] = e;
        m
    }

    pub fn gen(&self, g: usize) -> NcPoly {
        NcPoly::mono(self.gen_mono(g, 1))
    }

    pub fn gen_pow(&self, g: usize, e: i32) -> NcPoly {
        NcPoly::mono(self.gen_mono(g, e))
    }

    pub fn named(&self, name: &str) -> Result<NcPoly> {
        parse_expr(name, self)
    }

    pub fn weight(&self, m: &Monomial) -> Weight {
        let mut w = Weight::zero(self.rank());
        for (g, &e) in m.0.iter().enumerate() {
            if e != 0 {
                for (x, y) in w.0.iter_mut().zip(&self.gens[g].weight.0) {
                    *x += y * Rational64::from_integer(e as i64);
                }
            }
        }
        w
    }

    /// Weight of a homogeneous element (`None` if zero or inhomogeneous).
    pub fn poly_weight(&self, p: &NcPoly) -> Option<Weight> {
        let mut it = p.terms.keys().map(|m| self.weight(m));
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }

    /// `(alpha_i, weight(m))`.
    pub fn k_exp(&self, i: usize, m: &Monomial) -> i64 {
        m.0.iter().enumerate().map(|(g, &e)| e as i64 * self.kpair[i][g]).sum()
    }

    /// Filtration degree: sum of |exponent| times generator degree.
    pub fn fdeg(&self, m: &Monomial) -> u32 {
        m.0.iter().enumerate().map(|(g, &e)| e.unsigned_abs() * self.gens[g].degree).sum()
    }

    pub fn poly_fdeg(&self, p: &NcPoly) -> u32 {
        p.terms.keys().map(|m| self.fdeg(m)).max().unwrap_or(0)
    }

    /// Extra grading of a monomial.
    pub fn grade(&self, m: &Monomial) -> Vec<i64> {
        let k = self.gens.iter().map(|g| g.grade.len()).max().unwrap_or(0);
        let mut out = vec![0i64; k];
        for (g, &e) in m.0.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(&self.gens[g].grade) {
                *o += e as i64 * x;
            }
        }
        out
    }

    /// Weight and extra grading together.
    pub fn multidegree(&self, m: &Monomial) -> (Weight, Vec<i64>) {
        (self.weight(m), self.grade(m))
    }

    /// `K_i` acting on a monomial.
    pub fn k_act(&self, i: usize, sign: i32, p: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (m, c) in &p.terms {
            let e = self.k_exp(i, m) * sign as i64;
            out.add_term(m, &c.scale_q(e as i32));
        }
        out
    }

    fn check_letter(&self, g: usize, s: i32) {
        assert!(s == 1 || (s == -1 && self.gens[g].invertible), "inverse of a non-invertible generator");
    }

    /// Normal form of `m * g^s`.
    pub fn mul_letter(&self, m: &Monomial, g: usize, s: i32) -> NcPoly {
        self.check_letter(g, s);
        match m.top() {
            Some(t) if t > g => {}
            _ => {
                let mut r = m.clone();
                r.0[g] += s;
                return NcPoly::mono(r);
            }
        }
        let key = (m.clone(), g, s);
        if let Some(p) = self.cache.lock().expect("cache lock").get(&key) {
            return p.clone();
        }
        let t = m.top().expect("nonempty");
        let e = m.0[t];
        let mut rest = m.clone();
        rest.0[t] = 0;
        let q = self.power_swap(t, e, g, s);
        let out = self.mul_mono_poly(&rest, &q);
        self.cache.lock().expect("cache lock").insert(key, out.clone());
        out
    }

    /// Normal form of `g_t^e g^s` for `t > g`.
    fn power_swap(&self, t: usize, e: i32, g: usize, s: i32) -> NcPoly {
        if self.gens[t].invertible {
            let c = self.pure_commutation(t, g);
            let coef = c.pow(e * s).expect("nonzero commutation factor");
            let mut m = self.unit_mono();
            m.0[g] = s;
            m.0[t] = e;
            return NcPoly::term(m, coef);
        }
        let r = self.letter_swap(t, g, s);
        if e == 1 {
            return r;
        }
        self.mul_mono_poly(&self.gen_mono(t, e - 1), &r)
    }

    /// `c` with `g_t g_a = c g_a g_t`, for a rule that is a pure q-commutation.
    fn pure_commutation(&self, t: usize, a: usize) -> RatFunc {
        let rhs = self.rule(t, a).unwrap_or_else(|| panic!("missing rule for {}*{}", self.gens[t].name, self.gens[a].name));
        let mut m = self.unit_mono();
        m.0[a] = 1;
        m.0[t] = 1;
        assert!(
            rhs.len() == 1 && rhs.terms.contains_key(&m),
            "rule {}*{} between invertible letters must be a q-commutation",
            self.gens[t].name,
            self.gens[a].name
        );
        rhs.terms[&m].clone()
    }

    /// Normal form of `g_t g^s` for `t > g`.
    fn letter_swap(&self, t: usize, g: usize, s: i32) -> NcPoly {
        let rhs = self
            .rule(t, g)
            .unwrap_or_else(|| panic!("missing rule for {}*{}", self.gens[t].name, self.gens[g].name));
        if s == 1 {
            return rhs.clone();
        }
        // t g = c g t + L  gives  t g^-1 = c^-1 g^-1 t - c^-1 g^-1 L g^-1.
        let mut gt = self.unit_mono();
        gt.0[g] = 1;
        gt.0[t] = 1;
        let c = rhs.coeff(&gt);
        let ci = c.inv().expect("Ore rule needs a leading q-commutation term");
        let mut l = rhs.clone();
        l.terms.remove(&gt);
        let mut out = NcPoly::zero();
        let mut lead = self.unit_mono();
        lead.0[g] = -1;
        lead.0[t] = 1;
        out.add_term(&lead, &ci);
        if !l.is_zero() {
            let gi = self.gen_pow(g, -1);
            let inner = self.mul(&gi, &self.mul(&l, &gi));
            out.add_scaled(&inner, &ci.neg());
        }
        out
    }

    /// Normal form of `a * b` for normal monomials.
    pub fn mul_mono(&self, a: &Monomial, b: &Monomial) -> NcPoly {
        if let (Some(ta), Some(bb)) = (a.top(), b.bottom()) {
            if bb < ta {
                let mut cur = NcPoly::mono(a.clone());
                for (g, s) in b.letters() {
                    cur = self.mul_poly_letter(&cur, g, s);
                }
                return cur;
            }
        }
        let mut r = a.clone();
        for (x, y) in r.0.iter_mut().zip(&b.0) {
            *x += y;
        }
        NcPoly::mono(r)
    }

    fn mul_poly_letter(&self, p: &NcPoly, g: usize, s: i32) -> NcPoly {
        let mut out = NcPoly::zero();
        for (m, c) in &p.terms {
            out.add_scaled(&self.mul_letter(m, g, s), c);
        }
        out
    }

    fn mul_mono_poly(&self, a: &Monomial, p: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (m, c) in &p.terms {
            out.add_scaled(&self.mul_mono(a, m), c);
        }
        out
    }

    pub fn mul(&self, a: &NcPoly, b: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_scaled(&self.mul_mono(ma, mb), &ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_all(&self, factors: &[NcPoly]) -> NcPoly {
        factors.iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    pub fn pow(&self, a: &NcPoly, n: u32) -> NcPoly {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Normal form of a raw word of letters `(generator, exponent)`.
    pub fn word(&self, w: &[(usize, i32)]) -> NcPoly {
        let mut cur = self.one();
        for &(g, e) in w {
            for _ in 0..e.unsigned_abs() {
                cur = self.mul_poly_letter(&cur, g, e.signum());
            }
        }
        cur
    }

    /// Left-to-right normal form of a monomial's letter sequence computed
    /// from the right end (used to cross-check associativity).
    pub fn word_from_right(&self, w: &[(usize, i32)]) -> NcPoly {
        let mut cur = self.one();
        for &(g, e) in w.iter().rev() {
            for _ in 0..e.unsigned_abs() {
                cur = self.mul(&self.gen_pow(g, e.signum()), &cur);
            }
        }
        cur
    }

    /// Inverse of a monomial all of whose letters are invertible.
    pub fn inverse_mono(&self, m: &Monomial) -> Option<NcPoly> {
        if m.0.iter().enumerate().any(|(g, &e)| e != 0 && !self.gens[g].invertible) {
            return None;
        }
        let letters: Vec<(usize, i32)> = m.letters().into_iter().rev().map(|(g, s)| (g, -s)).collect();
        Some(self.word(&letters))
    }

    /// All normal monomials of filtration degree exactly `deg`, sorted.
    pub fn graded_basis(&self, deg: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0i32; self.ngens()];
        self.enumerate(0, deg, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, g: usize, left: u32, cur: &mut Vec<i32>, out: &mut Vec<Monomial>) {
        if g == self.ngens() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let d = self.gens[g].degree;
        let maxe = (left / d) as i32;
        for e in 0..=maxe {
            let signs: &[i32] = if e == 0 || !self.gens[g].invertible { &[1] } else { &[1, -1] };
            for &s in signs {
                cur[g] = e * s;
                self.enumerate(g + 1, left - e as u32 * d, cur, out);
            }
        }
        cur[g] = 0;
    }

    /// Graded basis up to and including `deg`.
    pub fn basis_up_to(&self, deg: u32) -> Vec<Monomial> {
        (0..=deg).flat_map(|d| self.graded_basis(d)).collect()
    }

    pub fn fmt_mono(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(g, &e)| if e == 1 { self.gens[g].name.clone() } else { format!("{}^{}", self.gens[g].name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Renders a polynomial in the expression grammar.
    pub fn fmt_poly(&self, p: &NcPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &RatFunc)> = p.terms.iter().collect();
        terms.sort_by(|a, b| (self.fdeg(b.0), b.0).cmp(&(self.fdeg(a.0), a.0)));
        let mut s = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let cs = c.to_string();
            let simple = c.is_laurent() && c.numer().terms().count() == 1;
            let (neg, body) = if simple && cs.starts_with('-') { (true, cs[1..].to_string()) } else { (false, cs) };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let cbody = if simple { body } else { format!("({})", body) };
            if m.is_one() {
                s.push_str(&cbody);
            } else if cbody == "1" {
                s.push_str(&self.fmt_mono(m));
            } else {
                s.push_str(&format!("{}*{}", cbody, self.fmt_mono(m)));
            }
        }
        s
    }

    /// Maps a polynomial through generator images (a homomorphism
    /// defined on generators, with images of inverses supplied).
    pub fn map_into(&self, target: &Presentation, p: &NcPoly, images: &dyn Fn(usize, i32) -> NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (m, c) in &p.terms {
            let mut cur = target.one();
            for (g, s) in m.letters() {
                cur = target.mul(&cur, &images(g, s));
            }
            out.add_scaled(&cur, c);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .gens
            .iter()
            .map(|g| {
                let mut o = json!({
                    "name": g.name,
                    "weight": g.weight.0.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "invertible": g.invertible,
                });
                if g.degree != 1 {
                    o["degree"] = json!(g.degree);
                }
                if !g.grade.is_empty() {
                    o["grade"] = json!(g.grade);
                }
                o
            })
            .collect();
        let rules: Vec<Value> = self
            .rules
            .iter()
            .map(|r| {
                json!({
                    "lhs": [self.gens[r.lhs.0].name.clone(), self.gens[r.lhs.1].name.clone()],
                    "rhs": self.fmt_poly(&r.rhs),
                })
            })
            .collect();
        let cartan = match &self.cartan.label {
            Some(l) if preset_cartan(l).is_ok() => json!({ "type_label": l }),
            _ => json!({ "C": self.cartan.c, "d": self.cartan.d }),
        };
        json!({ "name": self.name, "cartan": cartan, "generators": gens, "rules": rules })
    }

    pub fn from_json(v: &Value) -> Result<Presentation> {
        if let Some(name) = v.get("preset").and_then(|x| x.as_str()) {
            let p = presets::preset(name)?;
            return Ok((*p).clone());
        }
        let cartan = cartan_from_json(v.get("cartan").ok_or_else(|| QmaError::Input("missing 'cartan'".into()))?)?;
        let gens_v = v
            .get("generators")
            .and_then(|x| x.as_array())
            .ok_or_else(|| QmaError::Input("missing 'generators' array".into()))?;
        let mut gens = Vec::new();
        for (k, g) in gens_v.iter().enumerate() {
            let name = g
                .get("name")
                .and_then(|x| x.as_str())
                .ok_or_else(|| QmaError::Input(format!("generator {} has no name", k)))?;
            let wv = g
                .get("weight")
                .and_then(|x| x.as_array())
                .ok_or_else(|| QmaError::Input(format!("generator '{}' has no weight", name)))?;
            let w = wv.iter().map(parse_rational64).collect::<Result<Vec<_>>>()?;
            let mut d = GenDecl::new(name, Weight(w));
            d.invertible = g.get("invertible").and_then(|x| x.as_bool()).unwrap_or(false);
            if let Some(deg) = g.get("degree").and_then(|x| x.as_u64()) {
                d.degree = deg as u32;
            }
            if let Some(gr) = g.get("grade").and_then(|x| x.as_array()) {
                d.grade = gr.iter().filter_map(|x| x.as_i64()).collect();
            }
            gens.push(d);
        }
        let name = v.get("name").and_then(|x| x.as_str()).unwrap_or("custom");
        let mut p = Presentation::new(name, cartan, gens)?;
        let mut rules = Vec::new();
        if let Some(rs) = v.get("rules").and_then(|x| x.as_array()) {
            for r in rs {
                let lhs = r
                    .get("lhs")
                    .and_then(|x| x.as_array())
                    .ok_or_else(|| QmaError::Input("rule without 'lhs'".into()))?;
                if lhs.len() != 2 {
                    return Err(QmaError::Input("rule lhs must have two generators".into()));
                }
                let idx = |x: &Value| -> Result<usize> {
                    let n = x.as_str().ok_or_else(|| QmaError::Input("rule lhs entries must be names".into()))?;
                    p.gen_index(n).ok_or_else(|| QmaError::Input(format!("unknown generator '{}'", n)))
                };
                let b = idx(&lhs[0])?;
                let a = idx(&lhs[1])?;
                let rhs_s = r
                    .get("rhs")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| QmaError::Input("rule without 'rhs'".into()))?;
                let rhs = parse::parse_normal(rhs_s, &p)?;
                rules.push(RewriteRule { lhs: (b, a), rhs });
            }
        }
        p.set_rules(rules)?;
        Ok(p)
    }
}

fn parse_rational64(v: &Value) -> Result<Rational64> {
    if let Some(i) = v.as_i64() {
        return Ok(Rational64::from_integer(i));
    }
    let s = v.as_str().ok_or_else(|| QmaError::Input(format!("bad weight entry {}", v)))?;
    let bad = || QmaError::Input(format!("bad weight entry '{}'", s));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

pub fn cartan_from_json(v: &Value) -> Result<CartanData> {
    if let Some(l) = v.get("type_label").and_then(|x| x.as_str()) {
        return preset_cartan(l);
    }
    let c: Vec<Vec<i64>> = serde_json::from_value(v.get("C").cloned().unwrap_or(Value::Null))
        .map_err(|e| QmaError::Input(format!("bad Cartan matrix: {}", e)))?;
    let d: Vec<i64> = serde_json::from_value(v.get("d").cloned().unwrap_or(Value::Null))
        .map_err(|e| QmaError::Input(format!("bad symmetrizers: {}", e)))?;
    CartanData::new(c, d)
}

#[cfg(test)]
mod tests;
