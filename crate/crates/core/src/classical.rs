//! The classical limit q = 1: commutative algebras with derivation
//! actions of g and b-, the Poisson bracket on C[U], the epsilon
//! recursion, the hat-f operators, classical crossed products with C[T],
//! and Gauss factorization of 3 x 2 matrices.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{check_action_well_defined, check_hopf_relations, preset_action, serre_operator, ActionTable, HopfGen, HopfTag};
use crate::adapted::{hw_basis, verify_factorization, Embedding, FactorizationConfig, FactorizationWitness};
use crate::cartan::CartanData;
use crate::error::{QmaError, Result};
use crate::ncpoly::presets::preset;
use crate::ncpoly::{parse_expr, GenDecl, Monomial, NcPoly, Presentation, RewriteRule};
use crate::report::{CheckAcc, VerificationReport};
use crate::scalar::{rat, rat_frac, RatFunc, Rational};

/// Coefficientwise value at q = 1.
pub fn spec_poly(a: &NcPoly) -> Result<NcPoly> {
    a.map_coeffs(|c| c.specialize_q1().map(RatFunc::from_rational))
}

/// Rules `g_b g_a -> g_a g_b` for all pairs.
fn commutative_rules(p: &Presentation) -> Vec<RewriteRule> {
    let n = p.ngens();
    let mut rules = Vec::new();
    for b in 0..n {
        for a in 0..b {
            let mut m = p.unit_mono();
            m.0[a] = 1;
            m.0[b] = 1;
            rules.push(RewriteRule { lhs: (b, a), rhs: NcPoly::mono(m) });
        }
    }
    rules
}

/// Commutative presentation on the given generators.
pub fn commutative(name: &str, cartan: CartanData, gens: Vec<GenDecl>) -> Result<Presentation> {
    let mut p = Presentation::new(name, cartan, gens)?;
    let rules = commutative_rules(&p);
    p.set_rules(rules)?;
    Ok(p)
}

/// The q = 1 quotient of a presentation. Every rule must become a plain
/// commutation.
pub fn specialize_presentation(p: &Presentation) -> Result<Arc<Presentation>> {
    for r in &p.rules {
        let (b, a) = r.lhs;
        let got = spec_poly(&r.rhs).map_err(|e| QmaError::Specialization(format!("rule {}*{}: {}", p.gens[b].name, p.gens[a].name, e)))?;
        let mut m = p.unit_mono();
        m.0[a] = 1;
        m.0[b] = 1;
        if got != NcPoly::mono(m) {
            return Err(QmaError::Specialization(format!(
                "rule {}*{} -> {} is not a commutation at q = 1",
                p.gens[b].name,
                p.gens[a].name,
                p.fmt_poly(&got)
            )));
        }
    }
    let mut c = commutative(&format!("cl-{}", p.name), p.cartan.clone(), p.gens.clone())?;
    for (name, v) in &p.aliases {
        c.aliases.push((name.clone(), spec_poly(v)?));
    }
    c.certified_degree = p.certified_degree;
    Ok(Arc::new(c))
}

/// A quantum action together with its specialization.
#[derive(Clone, Debug)]
pub struct Classical {
    pub quantum: ActionTable,
    pub t: ActionTable,
}

/// Specializes a U_q(g) or U_q(b-) table to q = 1.
pub fn specialize_algebra(tq: &ActionTable) -> Result<Classical> {
    let tag = match tq.tag {
        HopfTag::UqG => HopfTag::UgClassical,
        HopfTag::UqBMinus => HopfTag::UbMinusClassical,
        other => return Err(QmaError::Input(format!("no classical limit for a {} action", other.name()))),
    };
    let alg = specialize_presentation(&tq.alg)?;
    let mut images = BTreeMap::new();
    for (k, v) in &tq.images {
        let s = spec_poly(v).map_err(|e| QmaError::Specialization(format!("{}({}): {}", k.0, tq.alg.gens[k.1].name, e)))?;
        if !s.is_zero() {
            images.insert(*k, s);
        }
    }
    Ok(Classical { quantum: tq.clone(), t: ActionTable::new(tag, alg, images) })
}

/// Specialization of a named action preset.
pub fn classical_preset(name: &str) -> Result<Classical> {
    specialize_algebra(&preset_action(name)?)
}

impl Classical {
    pub fn alg(&self) -> &Presentation {
        &self.t.alg
    }

    /// Generator index of `x_i` when the algebra is C[U].
    pub fn simple(&self, i: usize) -> Result<usize> {
        let pbw = self.quantum.alg.pbw.clone().ok_or_else(|| QmaError::Input(format!("'{}' is not C[U]", self.quantum.alg.name)))?;
        Ok(pbw.simple[i])
    }

    /// `{f, g}`: the commutator of the quantum lifts divided by `q - 1`,
    /// at q = 1.
    pub fn poisson(&self, f: &NcPoly, g: &NcPoly) -> Result<NcPoly> {
        let qp = &self.quantum.alg;
        let c = qp.mul(f, g).sub(&qp.mul(g, f));
        let den = RatFunc::q_pow(1).sub(&RatFunc::one()).inv()?;
        spec_poly(&c.scale(&den)).map_err(|e| QmaError::Specialization(format!("Poisson bracket: {}", e)))
    }

    /// `eps(i, j, n)` by the recursion
    /// `eps(n+1) = {x_i, eps(n)} - d_i (c_ij + 2n) x_i eps(n)`.
    pub fn epsilon(&self, i: usize, j: usize, n: u32) -> Result<NcPoly> {
        let p = self.alg();
        let xi = p.gen(self.simple(i)?);
        let d = p.cartan.d[i];
        let cij = p.cartan.c[i][j];
        let mut cur = p.gen(self.simple(j)?);
        for k in 0..n as i64 {
            let s = RatFunc::from_int(d * (cij + 2 * k));
            cur = self.poisson(&xi, &cur)?.sub(&p.mul(&xi, &cur).scale(&s));
        }
        Ok(cur)
    }
}

/// `[h_i, e_j] = c_ij e_j`, `[h_i, f_j] = -c_ij f_j`, `[e_i, f_j] = delta_ij h_i`
/// and the classical Serre relations, as operators on every basis
/// monomial of degree `<= max_deg`.
pub fn check_g_relations(t: &ActionTable, max_deg: u32) -> VerificationReport {
    let p = &t.alg;
    let r = t.rank();
    let c = &p.cartan;
    let has_e = t.tag == HopfTag::UgClassical;
    let name = |s: &str| format!("{}/{}", s, p.name);
    let mut hconj = CheckAcc::new(&name("g-h-conjugation"), "[h_i, e_j] = c_ij e_j and [h_i, f_j] = -c_ij f_j", max_deg);
    let mut ef = CheckAcc::new(&name("g-ef-commutator"), "[e_i, f_j] = delta_ij h_i", max_deg);
    let mut serre_e = CheckAcc::new(&name("g-serre-e"), "(ad e_i)^(1-c_ij) e_j = 0", max_deg);
    let mut serre_f = CheckAcc::new(&name("g-serre-f"), "(ad f_i)^(1-c_ij) f_j = 0", max_deg);
    for m in p.basis_up_to(max_deg) {
        let a = NcPoly::mono(m.clone());
        for i in 0..r {
            for j in 0..r {
                let cij = RatFunc::from_int(c.c[i][j]);
                let mut ops = vec![(HopfGen::F(j), cij.neg())];
                if has_e {
                    ops.push((HopfGen::E(j), cij.clone()));
                }
                for (h, s) in ops {
                    let lhs = t.act_h(i, &t.act(h, &a)).sub(&t.act(h, &t.act_h(i, &a)));
                    let rhs = t.act(h, &a).scale(&s);
                    hconj.expect(lhs == rhs, || (format!("[h{}, {}]({})", i + 1, h, p.fmt_mono(&m)), p.fmt_poly(&rhs), p.fmt_poly(&lhs)));
                }
                if has_e {
                    let lhs = t.act(HopfGen::E(i), &t.act(HopfGen::F(j), &a)).sub(&t.act(HopfGen::F(j), &t.act(HopfGen::E(i), &a)));
                    let rhs = if i == j { t.act_h(i, &a) } else { NcPoly::zero() };
                    ef.expect(lhs == rhs, || (format!("[e{}, f{}]({})", i + 1, j + 1, p.fmt_mono(&m)), p.fmt_poly(&rhs), p.fmt_poly(&lhs)));
                }
                if i != j {
                    if has_e {
                        let v = serre_operator(t, HopfGen::E(i), HopfGen::E(j), &a);
                        serre_e.expect(v.is_zero(), || (format!("Serre(e{}, e{})({})", i + 1, j + 1, p.fmt_mono(&m)), "0".into(), p.fmt_poly(&v)));
                    }
                    let v = serre_operator(t, HopfGen::F(i), HopfGen::F(j), &a);
                    serre_f.expect(v.is_zero(), || (format!("Serre(f{}, f{})({})", i + 1, j + 1, p.fmt_mono(&m)), "0".into(), p.fmt_poly(&v)));
                }
            }
        }
    }
    let mut rep = VerificationReport::new();
    rep.push(hconj.finish());
    if has_e {
        rep.push(ef.finish());
        rep.push(serre_e.finish());
    }
    rep.push(serre_f.finish());
    rep
}

/// Specialization commutes with multiplication on all words of length
/// `<= deg`.
pub fn check_functorial(qp: &Presentation, cp: &Presentation, deg: u32) -> VerificationReport {
    let mut letters = Vec::new();
    for (g, d) in qp.gens.iter().enumerate() {
        letters.push((g, 1));
        if d.invertible {
            letters.push((g, -1));
        }
    }
    let mut acc = CheckAcc::new(&format!("specialize-functorial/{}", qp.name), "value at q = 1 of a normal form is the commutative product", deg);
    let mut frontier: Vec<Vec<(usize, i32)>> = vec![Vec::new()];
    for _ in 0..deg {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                let mut v = w.clone();
                v.push(l);
                let got = spec_poly(&qp.word(&v));
                let want = cp.word(&v);
                acc.expect(got.as_ref() == Ok(&want), || {
                    let name = v.iter().map(|&(g, s)| if s > 0 { qp.gens[g].name.clone() } else { format!("{}^-1", qp.gens[g].name) }).collect::<Vec<_>>().join("*");
                    (name, cp.fmt_poly(&want), got.map_or_else(|e| e.to_string(), |x| cp.fmt_poly(&x)))
                });
                next.push(v);
            }
        }
        frontier = next;
    }
    let mut rep = VerificationReport::new();
    rep.push(acc.finish());
    rep
}

/// Functoriality, the q-limit of every operator (including
/// `(K_i - K_i^-1)/(q_i - q_i^-1) -> h_i`), and the classical
/// module-algebra axioms.
pub fn check_specialization(cl: &Classical, deg: u32) -> VerificationReport {
    let qt = &cl.quantum;
    let ct = &cl.t;
    let qp = &qt.alg;
    let cp = &ct.alg;
    let mut rep = check_functorial(qp, cp, deg);
    let mut ops = CheckAcc::new(&format!("specialize-operators/{}", qp.name), "q-limits of the quantum operators are the classical ones", deg);
    for m in qp.basis_up_to(deg) {
        let a = NcPoly::mono(m.clone());
        for h in ct.tag.generators(ct.rank()) {
            let got = spec_poly(&qt.act(h, &a));
            let want = ct.act(h, &a);
            ops.expect(got.as_ref() == Ok(&want), || (format!("{}({})", h, qp.fmt_mono(&m)), cp.fmt_poly(&want), got.map_or_else(|e| e.to_string(), |x| cp.fmt_poly(&x))));
        }
        for i in 0..ct.rank() {
            let d = qp.cartan.d[i] as u32;
            let k = qt.act_k(i, 1, &a).sub(&qt.act_k(i, -1, &a)).scale(&crate::scalar::q_diff(d).inv().expect("nonzero"));
            let got = spec_poly(&k);
            let want = ct.act_h(i, &a);
            ops.expect(got.as_ref() == Ok(&want), || (format!("h{}({})", i + 1, qp.fmt_mono(&m)), cp.fmt_poly(&want), got.map_or_else(|e| e.to_string(), |x| cp.fmt_poly(&x))));
        }
    }
    rep.push(ops.finish());
    rep
}

/// Full classical certification of a specialized action.
pub fn certify_classical(cl: &Classical, deg: u32) -> VerificationReport {
    let mut rep = check_specialization(cl, deg);
    rep.extend(check_action_well_defined(&cl.t, deg));
    rep.extend(check_hopf_relations(&cl.t, deg));
    rep
}

/// Antisymmetry, the identity `{x_i, x} = 2 d_i f_i(x) - d_i x_i h_i(x)`,
/// independence of the lift, and Jacobi on small triples.
pub fn check_poisson(cl: &Classical, deg: u32) -> Result<VerificationReport> {
    let p = cl.alg();
    let t = &cl.t;
    let basis = p.basis_up_to(deg);
    let mut anti = CheckAcc::new(&format!("poisson-antisymmetric/{}", p.name), "{f, g} = -{g, f}", deg);
    let mut ident = CheckAcc::new(&format!("poisson-xi/{}", p.name), "{x_i, x} = 2 d_i f_i(x) - d_i x_i h_i(x)", deg);
    let mut lift = CheckAcc::new(&format!("poisson-lift/{}", p.name), "bracket does not depend on the lift", deg);
    let mut jac = CheckAcc::new(&format!("poisson-jacobi/{}", p.name), "Jacobi identity", deg);
    let small: Vec<NcPoly> = basis.iter().filter(|m| p.fdeg(m) <= 2 && !m.is_one()).map(|m| NcPoly::mono(m.clone())).collect();
    let qm1 = RatFunc::q_pow(1).sub(&RatFunc::one());
    for m in &basis {
        let x = NcPoly::mono(m.clone());
        for i in 0..t.rank() {
            let xi = p.gen(cl.simple(i)?);
            let d = RatFunc::from_int(p.cartan.d[i]);
            let got = cl.poisson(&xi, &x)?;
            let want = t.act(HopfGen::F(i), &x).scale(&d.add(&d)).sub(&p.mul(&xi, &t.act_h(i, &x)).scale(&d));
            ident.expect(got == want, || (format!("{{x{}, {}}}", i + 1, p.fmt_mono(m)), p.fmt_poly(&want), p.fmt_poly(&got)));
            let back = cl.poisson(&x, &xi)?.neg();
            anti.expect(back == got, || (format!("{{{}, x{}}}", p.fmt_mono(m), i + 1), p.fmt_poly(&got), p.fmt_poly(&back)));
            for s in small.iter().take(3) {
                let other = x.add(&s.scale(&qm1));
                let v = cl.poisson(&xi, &other)?;
                lift.expect(v == got, || (format!("{{x{}, {} + (q-1) {}}}", i + 1, p.fmt_mono(m), p.fmt_poly(s)), p.fmt_poly(&got), p.fmt_poly(&v)));
            }
        }
    }
    for a in &small {
        for b in &small {
            for c in &small {
                let v = cl
                    .poisson(a, &cl.poisson(b, c)?)?
                    .add(&cl.poisson(b, &cl.poisson(c, a)?)?)
                    .add(&cl.poisson(c, &cl.poisson(a, b)?)?);
                jac.expect(v.is_zero(), || (format!("({}, {}, {})", p.fmt_poly(a), p.fmt_poly(b), p.fmt_poly(c)), "0".into(), p.fmt_poly(&v)));
            }
        }
    }
    let mut rep = VerificationReport::new();
    rep.push(anti.finish());
    rep.push(ident.finish());
    rep.push(lift.finish());
    rep.push(jac.finish());
    Ok(rep)
}

/// `eps(i, j, 1 - c_ij) = 0` and `eps(i, j, n) = (2 d_i)^n f_i^n(x_j)` for
/// `n <= 1 - c_ij` and all `i != j`.
pub fn check_epsilon(cl: &Classical) -> Result<VerificationReport> {
    let p = cl.alg();
    let t = &cl.t;
    let r = p.rank();
    let mut vanish = CheckAcc::new(&format!("epsilon-vanishes/{}", p.name), "eps(i, j, 1 - c_ij) = 0", 0);
    let mut power = CheckAcc::new(&format!("epsilon-f-power/{}", p.name), "eps(i, j, n) = (2 d_i)^n f_i^n(x_j)", 0);
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let top = (1 - p.cartan.c[i][j]) as u32;
            let xj = p.gen(cl.simple(j)?);
            let two_d = 2 * p.cartan.d[i];
            for n in 0..=top.max(3) {
                let e = cl.epsilon(i, j, n)?;
                let want = t.act_pow(HopfGen::F(i), n, &xj).scale(&RatFunc::from_int(two_d.pow(n)));
                power.expect(e == want, || (format!("eps({}, {}, {})", i + 1, j + 1, n), p.fmt_poly(&want), p.fmt_poly(&e)));
                if n == top {
                    vanish.expect(e.is_zero(), || (format!("eps({}, {}, {})", i + 1, j + 1, n), "0".into(), p.fmt_poly(&e)));
                }
            }
        }
    }
    let mut rep = VerificationReport::new();
    rep.push(vanish.finish());
    rep.push(power.finish());
    Ok(rep)
}

/// The b- action `f_i |> a = f_i(a) - h_i(a) x_i` on an algebra containing
/// C[U].
#[derive(Clone, Debug)]
pub struct HatF {
    pub t: ActionTable,
    /// Images of the `x_i`.
    pub xs: Vec<NcPoly>,
}

impl HatF {
    /// `emb` maps classical C[U] into the algebra of `t`.
    pub fn new(t: ActionTable, cu: &Classical, emb: &Embedding) -> Result<Self> {
        if t.tag != HopfTag::UgClassical {
            return Err(QmaError::Input("hat-f needs a classical g action".into()));
        }
        let mut rep = emb.check_relations();
        rep.extend(emb.check_equivariance(&cu.t, &t));
        if !rep.passed() {
            return Err(QmaError::Certification(format!("embedding rejected:\n{}", rep.summary())));
        }
        let xs = (0..t.rank()).map(|i| cu.simple(i).map(|g| emb.images[g].clone())).collect::<Result<Vec<_>>>()?;
        Ok(HatF { t, xs })
    }

    pub fn act(&self, i: usize, a: &NcPoly) -> NcPoly {
        let p = &self.t.alg;
        self.t.act(HopfGen::F(i), a).sub(&p.mul(&self.t.act_h(i, a), &self.xs[i]))
    }

    fn pow(&self, i: usize, n: u32, a: &NcPoly) -> NcPoly {
        (0..n).fold(a.clone(), |acc, _| self.act(i, &acc))
    }

    /// `(ad f^_i)^n (f^_j)` applied to `a`.
    pub fn serre(&self, i: usize, j: usize, a: &NcPoly) -> NcPoly {
        let n = (1 - self.t.alg.cartan.c[i][j]) as u32;
        let mut out = NcPoly::zero();
        for k in 0..=n {
            let v = self.pow(i, n - k, &self.act(j, &self.pow(i, k, a)));
            let mut c = self.t.binomial(i, n, k);
            if k % 2 == 1 {
                c = c.neg();
            }
            out.add_scaled(&v, &c);
        }
        out
    }
}

/// Serre relations for the hat-f operators on all monomials of degree
/// `<= max_deg`, h-conjugation, and invariance of the highest-weight part.
pub fn check_serre_hatf(hf: &HatF, max_deg: u32) -> VerificationReport {
    let t = &hf.t;
    let p = &t.alg;
    let r = t.rank();
    let mut serre = CheckAcc::new(&format!("hatf-serre/{}", p.name), "(ad f^_i)^(1-c_ij)(f^_j) = 0", max_deg);
    let mut hconj = CheckAcc::new(&format!("hatf-h-conjugation/{}", p.name), "[h_i, f^_j] = -c_ij f^_j", max_deg);
    let mut inv = CheckAcc::new(&format!("hatf-aplus-invariant/{}", p.name), "f^_i maps highest-weight vectors to highest-weight vectors", max_deg);
    for m in p.basis_up_to(max_deg) {
        let a = NcPoly::mono(m.clone());
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    let v = hf.serre(i, j, &a);
                    serre.expect(v.is_zero(), || (format!("Serre(f^{}, f^{})({})", i + 1, j + 1, p.fmt_mono(&m)), "0".into(), p.fmt_poly(&v)));
                }
                let lhs = t.act_h(i, &hf.act(j, &a)).sub(&hf.act(j, &t.act_h(i, &a)));
                let rhs = hf.act(j, &a).scale(&RatFunc::from_int(-p.cartan.c[i][j]));
                hconj.expect(lhs == rhs, || (format!("[h{}, f^{}]({})", i + 1, j + 1, p.fmt_mono(&m)), p.fmt_poly(&rhs), p.fmt_poly(&lhs)));
            }
        }
    }
    for d in 0..=max_deg {
        for a in hw_basis(t, d) {
            for i in 0..r {
                let b = hf.act(i, &a);
                for j in 0..r {
                    let v = t.act(HopfGen::E(j), &b);
                    inv.expect(v.is_zero(), || (format!("e{}(f^{}({}))", j + 1, i + 1, p.fmt_poly(&a)), "0".into(), p.fmt_poly(&v)));
                }
            }
        }
    }
    let mut rep = VerificationReport::new();
    rep.push(serre.finish());
    rep.push(hconj.finish());
    rep.push(inv.finish());
    rep
}

/// Generators of several commutative factors, invertible ones first;
/// later clashing names are upper-cased.
fn merge(name: &str, cartan: &CartanData, parts: &[&Presentation]) -> Result<(Presentation, Vec<Vec<usize>>)> {
    let mut order: Vec<(usize, usize)> = Vec::new();
    for inv in [true, false] {
        for (k, p) in parts.iter().enumerate() {
            for (g, d) in p.gens.iter().enumerate() {
                if d.invertible == inv {
                    order.push((k, g));
                }
            }
        }
    }
    let mut maps: Vec<Vec<usize>> = parts.iter().map(|p| vec![0; p.ngens()]).collect();
    let mut gens: Vec<GenDecl> = Vec::new();
    for (slot, &(k, g)) in order.iter().enumerate() {
        let mut d = parts[k].gens[g].clone();
        if gens.iter().any(|x| x.name == d.name) {
            d.name = d.name.to_uppercase();
        }
        maps[k][g] = slot;
        gens.push(d);
    }
    Ok((commutative(name, cartan.clone(), gens)?, maps))
}

/// Moves a polynomial of a factor into the merged algebra.
fn transport(map: &[usize], n: usize, a: &NcPoly) -> NcPoly {
    let mut out = NcPoly::zero();
    for (m, c) in &a.terms {
        let mut e = Monomial::one(n);
        for (g, &x) in m.0.iter().enumerate() {
            e.0[map[g]] = x;
        }
        out.add_term(&e, c);
    }
    out
}

/// `C[T]` on the fundamental weights: `v_i = v_{omega_i}` invertible,
/// `h_j(v_i) = delta_ij v_i`, `f = 0`.
pub fn torus_classical(c: &CartanData) -> Result<ActionTable> {
    let gens = (0..c.rank()).map(|i| GenDecl::new(&format!("v{}", i + 1), c.fundamental_weight(i)).invertible()).collect();
    let label = c.label.clone().unwrap_or_else(|| "custom".into());
    let p = commutative(&format!("CT-{}", label), c.clone(), gens)?;
    Ok(ActionTable::new(HopfTag::UbMinusClassical, Arc::new(p), BTreeMap::new()))
}

/// Classical scalars with the zero b- action.
pub fn scalars_classical(c: &CartanData) -> Result<ActionTable> {
    Ok(ActionTable::new(HopfTag::UbMinusClassical, crate::gstar::scalars(c)?, BTreeMap::new()))
}

/// Tensor product of commutative b- module algebras (h and f act as
/// derivations on both factors).
pub fn tensor_bminus(a: &ActionTable, b: &ActionTable) -> Result<ActionTable> {
    let c = &a.alg.cartan;
    let (p, maps) = merge(&format!("{}.{}", a.alg.name, b.alg.name), c, &[&a.alg, &b.alg])?;
    let n = p.ngens();
    let mut images = BTreeMap::new();
    for (k, t) in [a, b].iter().enumerate() {
        for ((h, g), v) in &t.images {
            images.insert((*h, maps[k][*g]), transport(&maps[k], n, v));
        }
    }
    Ok(ActionTable::new(HopfTag::UbMinusClassical, Arc::new(p), images))
}

/// `A+ (x) C[U]` with the g action `h(a x) = h(a) x + a h(x)`,
/// `e(a x) = a e(x)`, `f(a x) = f(a) x + h(a) x_i x + a f(x)`.
#[derive(Clone, Debug)]
pub struct ClassicalCrossed {
    pub t: ActionTable,
    pub aplus: ActionTable,
    pub cu: Classical,
    pub map_a: Vec<usize>,
    pub map_u: Vec<usize>,
}

impl ClassicalCrossed {
    pub fn left(&self, a: &NcPoly) -> NcPoly {
        transport(&self.map_a, self.t.alg.ngens(), a)
    }

    pub fn right(&self, x: &NcPoly) -> NcPoly {
        transport(&self.map_u, self.t.alg.ngens(), x)
    }

    /// `a (x) x` as an element of the crossed product.
    pub fn pair(&self, a: &NcPoly, x: &NcPoly) -> NcPoly {
        self.t.alg.mul(&self.left(a), &self.right(x))
    }

    /// `x_i` viewed in the right factor.
    pub fn x(&self, i: usize) -> Result<NcPoly> {
        Ok(self.right(&self.cu.alg().gen(self.cu.simple(i)?)))
    }

    /// Embedding of C[U] as the right factor.
    pub fn embedding(&self) -> Result<Embedding> {
        let cp = self.cu.t.alg.clone();
        let images = (0..cp.ngens()).map(|g| self.right(&cp.gen(g))).collect();
        Embedding::new(cp, self.t.alg.clone(), images)
    }
}

pub fn build_classical_crossed(aplus: &ActionTable) -> Result<ClassicalCrossed> {
    if aplus.tag != HopfTag::UbMinusClassical {
        return Err(QmaError::Input("the first factor needs a classical b- action".into()));
    }
    let c = &aplus.alg.cartan;
    let label = c.label.clone().ok_or_else(|| QmaError::Input("C[U] needs a named Cartan type".into()))?;
    let cu = classical_preset(&format!("cqU-{}", label))?;
    let (p, maps) = merge(&format!("{}#{}", aplus.alg.name, cu.alg().name), c, &[&aplus.alg, &cu.t.alg])?;
    let n = p.ngens();
    let mut cr = ClassicalCrossed {
        t: ActionTable::new(HopfTag::UgClassical, Arc::new(p), BTreeMap::new()),
        aplus: aplus.clone(),
        cu: cu.clone(),
        map_a: maps[0].clone(),
        map_u: maps[1].clone(),
    };
    let mut images = BTreeMap::new();
    for ((h, g), v) in &cu.t.images {
        images.insert((*h, cr.map_u[*g]), cr.right(v));
    }
    for i in 0..c.rank() {
        let xi = cr.x(i)?;
        for g in 0..aplus.alg.ngens() {
            let a = aplus.alg.gen(g);
            let v = cr.left(&aplus.act(HopfGen::F(i), &a)).add(&cr.t.alg.mul(&cr.left(&aplus.act_h(i, &a)), &xi));
            if !v.is_zero() {
                images.insert((HopfGen::F(i), cr.map_a[g]), v);
            }
        }
    }
    let _ = n;
    cr.t = ActionTable::new(HopfTag::UgClassical, cr.t.alg.clone(), images);
    Ok(cr)
}

/// Module-algebra axioms, the g relations, and the displayed h/e/f
/// formulas on all pairs of basis monomials of total degree `<= deg`.
pub fn certify_classical_crossed(cr: &ClassicalCrossed, deg: u32) -> VerificationReport {
    let t = &cr.t;
    let p = &t.alg;
    let mut rep = check_action_well_defined(t, deg);
    rep.extend(check_hopf_relations(t, deg));
    let mut acc = CheckAcc::new(&format!("crossed-formulas/{}", p.name), "h, e, f act on a (x) x by the crossed-product formulas", deg);
    let ap = &cr.aplus.alg;
    let up = cr.cu.alg();
    for da in 0..=deg {
        for ma in ap.graded_basis(da) {
            for mx in up.basis_up_to(deg - da) {
                let a = NcPoly::mono(ma.clone());
                let x = NcPoly::mono(mx.clone());
                let ax = cr.pair(&a, &x);
                for i in 0..t.rank() {
                    let xi = cr.cu.alg().gen(cr.cu.simple(i).expect("C[U]"));
                    let h = cr.pair(&cr.aplus.act_h(i, &a), &x).add(&cr.pair(&a, &cr.cu.t.act_h(i, &x)));
                    let e = cr.pair(&a, &cr.cu.t.act(HopfGen::E(i), &x));
                    let f = cr
                        .pair(&cr.aplus.act(HopfGen::F(i), &a), &x)
                        .add(&cr.pair(&cr.aplus.act_h(i, &a), &up.mul(&xi, &x)))
                        .add(&cr.pair(&a, &cr.cu.t.act(HopfGen::F(i), &x)));
                    for (label, want, got) in [("h", h, t.act_h(i, &ax)), ("e", e, t.act(HopfGen::E(i), &ax)), ("f", f, t.act(HopfGen::F(i), &ax))] {
                        acc.expect(want == got, || (format!("{}{}({} (x) {})", label, i + 1, ap.fmt_mono(&ma), up.fmt_mono(&mx)), p.fmt_poly(&want), p.fmt_poly(&got)));
                    }
                }
            }
        }
    }
    rep.push(acc.finish());
    rep
}

/// `((1 (x) v_{-omega_i}) (x) 1) [f_i |> ((1 (x) v_{omega_i}) (x) 1)] = 1 (x) 1 (x) x_i`
/// in `(A+ (x) C[T]) (x) C[U]`.
pub fn check_torus_identity(aplus: &ActionTable) -> Result<VerificationReport> {
    let c = aplus.alg.cartan.clone();
    let ct = torus_classical(&c)?;
    let base = tensor_bminus(aplus, &ct)?;
    let cr = build_classical_crossed(&base)?;
    let p = &cr.t.alg;
    let mut acc = CheckAcc::new(&format!("torus-identity/{}", p.name), "v_{-omega_i} f_i(v_{omega_i}) = x_i", 1);
    for i in 0..c.rank() {
        let g = p.gen_index(&format!("v{}", i + 1)).or_else(|| p.gen_index(&format!("V{}", i + 1))).expect("torus generator");
        let got = p.mul(&p.gen_pow(g, -1), &cr.t.act(HopfGen::F(i), &p.gen(g)));
        let want = cr.x(i)?;
        acc.expect(got == want, || (format!("v{0}^-1 f{0}(v{0})", i + 1), p.fmt_poly(&want), p.fmt_poly(&got)));
    }
    let mut rep = VerificationReport::new();
    rep.push(acc.finish());
    Ok(rep)
}

/// Factorization over classical tables: the adapted-basis certification
/// with derivation actions and factorial divided powers.
pub fn classical_verify_factorization(t: &ActionTable, t0: &ActionTable, emb: &Embedding, w: &[usize], deg: u32) -> Result<(FactorizationWitness, VerificationReport)> {
    if !t.tag.is_classical() || !t0.tag.is_classical() {
        return Err(QmaError::Input("classical factorization needs classical actions".into()));
    }
    verify_factorization(t, t0, emb, w, &FactorizationConfig::new(deg))
}

/// The specialized embedding of C[U](A2) into the localized classical
/// 3 x 2 matrices, together with both classical tables.
pub fn localized_classical() -> Result<(Classical, Classical, Embedding)> {
    let qe = crate::adapted::qmat32_embedding()?;
    let big = classical_preset("localized-qmat32")?;
    let cu = classical_preset("cqU-A2")?;
    let images = qe.images.iter().map(spec_poly).collect::<Result<Vec<_>>>()?;
    let emb = Embedding::new(cu.t.alg.clone(), big.t.alg.clone(), images)?;
    Ok((big, cu, emb))
}

/// Identity embedding of classical C[U] into itself.
pub fn cu_over_itself(label: &str) -> Result<(Classical, Embedding)> {
    let cu = classical_preset(&format!("cqU-{}", label))?;
    let emb = Embedding::identity(cu.t.alg.clone())?;
    Ok((cu, emb))
}

/// Entries Gauss elimination can run over.
pub trait GaussEntry: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
}

impl GaussEntry for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
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
    fn div(&self, o: &Self) -> Result<Self> {
        if Zero::is_zero(o) {
            Err(QmaError::Domain("division by zero".into()))
        } else {
            Ok(self / o)
        }
    }
}

/// An element of a commutative presentation; division is by units
/// (scalar times a monomial in invertible generators).
#[derive(Clone, Debug)]
pub struct Sym {
    pub alg: Arc<Presentation>,
    pub v: NcPoly,
}

impl PartialEq for Sym {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}

impl Sym {
    pub fn parse(alg: &Arc<Presentation>, s: &str) -> Result<Sym> {
        Ok(Sym { alg: alg.clone(), v: parse_expr(s, alg)? })
    }

    fn with(&self, v: NcPoly) -> Sym {
        Sym { alg: self.alg.clone(), v }
    }
}

impl GaussEntry for Sym {
    fn zero_like(&self) -> Self {
        self.with(NcPoly::zero())
    }
    fn one_like(&self) -> Self {
        self.with(self.alg.one())
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.with(self.v.add(&o.v))
    }
    fn sub(&self, o: &Self) -> Self {
        self.with(self.v.sub(&o.v))
    }
    fn mul(&self, o: &Self) -> Self {
        self.with(self.alg.mul(&self.v, &o.v))
    }
    fn div(&self, o: &Self) -> Result<Self> {
        let bad = || QmaError::Domain(format!("{} is not a unit", self.alg.fmt_poly(&o.v)));
        if o.v.len() != 1 {
            return Err(bad());
        }
        let (m, c) = o.v.terms.iter().next().expect("one term");
        let mi = self.alg.inverse_mono(m).ok_or_else(bad)?;
        Ok(self.with(self.alg.mul(&self.v, &mi).scale(&c.inv()?)))
    }
}

pub type Mat<T> = Vec<Vec<T>>;

/// `L R = M` with `L` lower unitriangular 3 x 3 and `R` upper 3 x 2:
/// `L = [[1,0,0],[a21/a11,1,0],[a31/a11,(a11 a32 - a12 a31)/D,1]]`,
/// `R = [[a11,a12],[0,D/a11],[0,0]]`, `D = a11 a22 - a12 a21`.
pub fn gauss_factor_3x2<T: GaussEntry>(m: &Mat<T>) -> Result<(Mat<T>, Mat<T>)> {
    if m.len() != 3 || m.iter().any(|r| r.len() != 2) {
        return Err(QmaError::Input("a 3 x 2 matrix is required".into()));
    }
    let a = |i: usize, j: usize| &m[i - 1][j - 1];
    if a(1, 1).is_zero() {
        return Err(QmaError::Domain("a11 = 0".into()));
    }
    let det = a(1, 1).mul(a(2, 2)).sub(&a(1, 2).mul(a(2, 1)));
    if det.is_zero() {
        return Err(QmaError::Domain("a11 a22 - a12 a21 = 0".into()));
    }
    let zero = a(1, 1).zero_like();
    let one = a(1, 1).one_like();
    let l = vec![
        vec![one.clone(), zero.clone(), zero.clone()],
        vec![a(2, 1).div(a(1, 1))?, one.clone(), zero.clone()],
        vec![a(3, 1).div(a(1, 1))?, a(1, 1).mul(a(3, 2)).sub(&a(1, 2).mul(a(3, 1))).div(&det)?, one],
    ];
    let r = vec![vec![a(1, 1).clone(), a(1, 2).clone()], vec![zero.clone(), det.div(a(1, 1))?], vec![zero.clone(), zero]];
    Ok((l, r))
}

pub fn mat_mul<T: GaussEntry>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let z = a[0][0].zero_like();
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).fold(z.clone(), |acc, (x, br)| acc.add(&x.mul(&br[j])))).collect())
        .collect()
}

/// Shape of the factors and `L R = M`.
pub fn gauss_holds<T: GaussEntry>(m: &Mat<T>, l: &Mat<T>, r: &Mat<T>) -> bool {
    let unit = (0..3).all(|i| l[i][i] == l[i][i].one_like() && (i + 1..3).all(|j| l[i][j].is_zero()));
    let upper = r[1][0].is_zero() && r[2][0].is_zero() && r[2][1].is_zero();
    unit && upper && &mat_mul(l, r) == m
}

/// Random rational 3 x 2 matrices with nonzero leading minors.
pub fn random_matrices(seed: u64, count: usize) -> Vec<Mat<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let m: Mat<Rational> = (0..3).map(|_| (0..2).map(|_| rat_frac(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect()).collect();
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if !Zero::is_zero(&m[0][0]) && !Zero::is_zero(&det) {
            out.push(m);
        }
    }
    out
}

/// Multiply-back check on seeded random matrices.
pub fn check_gauss_random(seed: u64, count: usize) -> VerificationReport {
    let mut acc = CheckAcc::new("gauss-random", "L R = M with L unitriangular and R upper", 0);
    for m in random_matrices(seed, count) {
        let ok = gauss_factor_3x2(&m).map(|(l, r)| gauss_holds(&m, &l, &r)).unwrap_or(false);
        acc.expect(ok, || (format!("{:?}", m), "L R = M".into(), "mismatch".into()));
    }
    acc.note(format!("seed {}, {} matrices", seed, count));
    let mut rep = VerificationReport::new();
    rep.push(acc.finish());
    rep
}

/// The generic 3 x 2 matrix over the localized classical algebra
/// (`x22` is the alias `x11^-1 (D + x12 x21)`).
pub fn generic_matrix() -> Result<Mat<Sym>> {
    let alg = specialize_presentation(&*preset("localized-qmat32")?)?;
    ["x11", "x12", "x21", "x22", "x31", "x32"]
        .chunks(2)
        .map(|row| row.iter().map(|s| Sym::parse(&alg, s)).collect())
        .collect()
}

pub fn rational_matrix(rows: &[[i64; 2]; 3]) -> Mat<Rational> {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(p: &Presentation, s: &str) -> NcPoly {
        parse_expr(s, p).unwrap()
    }

    #[test]
    fn a1_limit() {
        let cl = classical_preset("cqU-A1").unwrap();
        let p = cl.alg();
        let x = ex(p, "x1");
        assert_eq!(cl.t.act(HopfGen::F(0), &x), ex(p, "-x1^2"));
        assert_eq!(cl.t.act(HopfGen::E(0), &x), p.one());
        assert_eq!(cl.t.act_h(0, &x), ex(p, "-2*x1"));
        assert_eq!(cl.t.act_divided_e(0, 2, &ex(p, "x1^2")), p.one());
    }

    #[test]
    fn commutative_quotient() {
        let cl = classical_preset("cqU-A2").unwrap();
        let p = cl.alg();
        assert_eq!(ex(p, "x2*x1"), ex(p, "x1*x2"));
        assert!(cl.poisson(&ex(p, "x1"), &ex(p, "x1")).unwrap().is_zero());
    }

    #[test]
    fn torus_b_minus() {
        let c = crate::cartan::preset_cartan("A2").unwrap();
        let t = torus_classical(&c).unwrap();
        let v = t.alg.gen(0);
        assert_eq!(t.act_h(0, &v), v);
        assert!(t.act_h(1, &v).is_zero());
    }

    #[test]
    fn gauss_identity_like() {
        let m = rational_matrix(&[[1, 0], [0, 1], [0, 0]]);
        let (l, r) = gauss_factor_3x2(&m).unwrap();
        assert_eq!(r, m);
        let id: Mat<Rational> = (0..3).map(|i| (0..3).map(|j| rat((i == j) as i64)).collect()).collect();
        assert_eq!(l, id);
        assert!(gauss_factor_3x2(&rational_matrix(&[[0, 1], [1, 0], [0, 0]])).is_err());
        assert!(gauss_factor_3x2(&rational_matrix(&[[1, 2], [2, 4], [0, 0]])).is_err());
    }
}
