//! Twisted tensor products of weight module algebras: the Cartan-twist
//! fusion product of U_q(g*)-module algebras, the highest-weight twist,
//! and the rank-1 braided tensor product through the quasi-R-matrix.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::action::{check_action_well_defined, check_hopf_relations, preset_action, preset_action_cqu, ActionTable, HopfGen, HopfTag};
use crate::adapted::{hw_basis, is_highest_weight, verify_factorization, Embedding, FactorizationConfig};
use crate::cartan::Weight;
use crate::error::{QmaError, Result};
use crate::gstar::{check_gstar_table, fmt_tensor, tensor_add, tensor_of, Tensor};
use crate::ncpoly::{GenDecl, Monomial, NcPoly, Presentation, RewriteRule};
use crate::report::{CheckAcc, VerificationReport};
use crate::scalar::{q_diff, q_factorial, RatFunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistMode {
    Fusion,
    HwTwist,
    Sl2Full,
}

/// Coefficients `c_n = sign^n q_a^(e n(n-1)/2) (q_a - q_a^-1)^n / [n]_{q_a}!`
/// of the rank-1 quasi-R-matrix `sum_n c_n E^n (x) F^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuasiR {
    pub sign: i32,
    pub e: i32,
}

impl QuasiR {
    pub const CANDIDATES: [QuasiR; 4] = [QuasiR { sign: 1, e: 1 }, QuasiR { sign: 1, e: -1 }, QuasiR { sign: -1, e: 1 }, QuasiR { sign: -1, e: -1 }];

    pub fn coeff(&self, n: u32, d: u32) -> RatFunc {
        let tri = (n * n.saturating_sub(1) / 2) as i32;
        let mut c = RatFunc::q_pow(self.e * tri * d as i32);
        for _ in 0..n {
            c = c.mul(&q_diff(d));
        }
        if self.sign < 0 && n % 2 == 1 {
            c = c.neg();
        }
        c.div(&q_factorial(n, d)).expect("nonzero")
    }
}

pub struct TwistedTensor {
    pub left: ActionTable,
    pub right: ActionTable,
    pub mode: TwistMode,
    pub quasi_r: QuasiR,
}

fn mono_weight(p: &Presentation, m: &Monomial) -> Weight {
    p.weight(m)
}

impl TwistedTensor {
    pub fn new(left: ActionTable, right: ActionTable, mode: TwistMode) -> Result<Self> {
        if left.alg.cartan != right.alg.cartan {
            return Err(QmaError::Input("tensor factors need the same Cartan data".into()));
        }
        if mode == TwistMode::Sl2Full && left.rank() != 1 {
            return Err(QmaError::OutOfScope("braided products via the quasi-R-matrix are implemented in rank 1 only".into()));
        }
        let quasi_r = if mode == TwistMode::Sl2Full { quasi_r_convention()? } else { QuasiR::CANDIDATES[0] };
        Ok(TwistedTensor { left, right, mode, quasi_r })
    }

    fn twist(&self, l: &Weight, m: &Weight) -> Result<RatFunc> {
        Ok(RatFunc::q_pow(self.left.alg.cartan.int_pairing(l, m)? as i32))
    }

    /// `(a (x) b)(a' (x) b') = q^(|a'|,|b|) aa' (x) bb'`.
    pub fn fusion_mul(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        let (pa, pb) = (&*self.left.alg, &*self.right.alg);
        let mut out = Tensor::new();
        for (k1, c1) in x {
            for (k2, c2) in y {
                let c = c1.mul(c2).mul(&self.twist(&mono_weight(pa, &k2[0]), &mono_weight(pb, &k1[1]))?);
                for (k, v) in tensor_of(&[pa.mul_mono(&k1[0], &k2[0]), pb.mul_mono(&k1[1], &k2[1])]) {
                    tensor_add(&mut out, k, &v.mul(&c));
                }
            }
        }
        Ok(out)
    }

    /// `(1 (x) s)(a (x) 1) = q^(|a|,|s|) a (x) s` for `s` highest weight.
    pub fn hw_twist_mul(&self, s: &NcPoly, a: &NcPoly) -> Result<Tensor> {
        if !is_highest_weight(&self.right, s) {
            return Err(QmaError::Domain(format!("{} is not a highest-weight vector", self.right.alg.fmt_poly(s))));
        }
        let mut out = Tensor::new();
        for (ma, ca) in &a.terms {
            for (ms, cs) in &s.terms {
                let c = ca.mul(cs).mul(&self.twist(&mono_weight(&self.left.alg, ma), &mono_weight(&self.right.alg, ms))?);
                tensor_add(&mut out, vec![ma.clone(), ms.clone()], &c);
            }
        }
        Ok(out)
    }

    /// `(a (x) b)(a' (x) b') = sum_n c_n q^(|E^n b|, |F^n a'|) a F^n(a') (x) E^n(b) b'`.
    pub fn sl2_braided_mul(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        if self.left.rank() != 1 {
            return Err(QmaError::OutOfScope("braided products via the quasi-R-matrix are implemented in rank 1 only".into()));
        }
        let (pa, pb) = (&*self.left.alg, &*self.right.alg);
        let d = pa.cartan.d[0] as u32;
        let alpha = pa.cartan.simple_root(0);
        let mut out = Tensor::new();
        for (k1, c1) in x {
            for (k2, c2) in y {
                let wb = mono_weight(pb, &k1[1]);
                let wa = mono_weight(pa, &k2[0]);
                let mut fa = NcPoly::mono(k2[0].clone());
                let mut eb = NcPoly::mono(k1[1].clone());
                let mut n = 0u32;
                while !fa.is_zero() && !eb.is_zero() {
                    let shift = alpha.scale(n as i64);
                    let tw = self.twist(&(&wb + &shift), &(&wa - &shift))?;
                    let c = c1.mul(c2).mul(&self.quasi_r.coeff(n, d)).mul(&tw);
                    let l = pa.mul(&NcPoly::mono(k1[0].clone()), &fa);
                    let r = pb.mul(&eb, &NcPoly::mono(k2[1].clone()));
                    for (k, v) in tensor_of(&[l, r]) {
                        tensor_add(&mut out, k, &v.mul(&c));
                    }
                    fa = self.left.act(HopfGen::F(0), &fa);
                    eb = self.right.act(HopfGen::E(0), &eb);
                    n += 1;
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        match self.mode {
            TwistMode::Sl2Full => self.sl2_braided_mul(x, y),
            _ => self.fusion_mul(x, y),
        }
    }

    /// U_q(g*) action on the fusion product.
    pub fn fusion_action(&self, h: HopfGen, x: &Tensor) -> Result<Tensor> {
        let (a, b) = (&self.left, &self.right);
        let mut out = Tensor::new();
        for (k, c) in x {
            let ma = NcPoly::mono(k[0].clone());
            let mb = NcPoly::mono(k[1].clone());
            let parts = match h {
                HopfGen::K(i) => [a.act_k(i, 1, &ma), b.act_k(i, 1, &mb)],
                HopfGen::F1(i) => [a.act_k(i, -1, &ma), b.act(h, &mb)],
                HopfGen::F2(i) => [a.act(h, &ma), b.act_k(i, -1, &mb)],
                _ => return Err(QmaError::Input(format!("{} does not act on a fusion product", h))),
            };
            for (kk, v) in tensor_of(&parts) {
                tensor_add(&mut out, kk, &v.mul(c));
            }
        }
        Ok(out)
    }

    /// U_q(g) action through the coproduct.
    pub fn diagonal_action(&self, h: HopfGen, x: &Tensor) -> Tensor {
        let (a, b) = (&self.left, &self.right);
        let mut out = Tensor::new();
        for (k, c) in x {
            let ma = NcPoly::mono(k[0].clone());
            let mb = NcPoly::mono(k[1].clone());
            let pieces: Vec<[NcPoly; 2]> = match h {
                HopfGen::K(i) => vec![[a.act_k(i, 1, &ma), b.act_k(i, 1, &mb)]],
                HopfGen::E(i) => vec![[a.act(h, &ma), b.act_k(i, 1, &mb)], [ma.clone(), b.act(h, &mb)]],
                HopfGen::F(i) => vec![[a.act(h, &ma), mb.clone()], [a.act_k(i, -1, &ma), b.act(h, &mb)]],
                _ => Vec::new(),
            };
            for parts in pieces {
                for (kk, v) in tensor_of(&parts) {
                    tensor_add(&mut out, kk, &v.mul(c));
                }
            }
        }
        out
    }

    pub fn one(&self) -> Tensor {
        tensor_of(&[self.left.alg.one(), self.right.alg.one()])
    }

    pub fn left_elem(&self, a: &NcPoly) -> Tensor {
        tensor_of(&[a.clone(), self.right.alg.one()])
    }

    pub fn right_elem(&self, b: &NcPoly) -> Tensor {
        tensor_of(&[self.left.alg.one(), b.clone()])
    }

    /// Pure tensors of basis monomials with total degree at most `deg`.
    pub fn basis_up_to(&self, deg: u32) -> Vec<Tensor> {
        let (pa, pb) = (&*self.left.alg, &*self.right.alg);
        let mut out = Vec::new();
        for ma in pa.basis_up_to(deg) {
            let da = pa.fdeg(&ma);
            for mb in pb.basis_up_to(deg - da) {
                out.push(tensor_of(&[NcPoly::mono(ma.clone()), NcPoly::mono(mb)]));
            }
        }
        out
    }

    fn tdeg(&self, t: &Tensor) -> u32 {
        t.keys().map(|k| self.left.alg.fdeg(&k[0]) + self.right.alg.fdeg(&k[1])).max().unwrap_or(0)
    }

    pub fn fmt(&self, t: &Tensor) -> String {
        fmt_tensor(&[&self.left.alg, &self.right.alg], t)
    }

    /// The twisted product as an ordinary presentation with its action:
    /// left generators then right generators (or the reverse when only
    /// the right factor has invertible generators), with cross rules read
    /// off from the product of generators.
    pub fn export(&self) -> Result<(ActionTable, Exported)> {
        let (pa, pb) = (&*self.left.alg, &*self.right.alg);
        let inv = |p: &Presentation| p.gens.iter().any(|g| g.invertible);
        let all_inv = |p: &Presentation| p.gens.iter().all(|g| g.invertible);
        let left_first = !inv(pb) || all_inv(pa);
        if !left_first && !(all_inv(pb) || !inv(pa)) {
            return Err(QmaError::OutOfScope("both factors mix invertible and non-invertible generators".into()));
        }
        let clash = pa.gens.iter().any(|g| pb.gen_index(&g.name).is_some());
        let rename = |g: &GenDecl, pre: &str| GenDecl { name: if clash { format!("{}{}", pre, g.name) } else { g.name.clone() }, grade: Vec::new(), ..g.clone() };
        let (na, nb) = (pa.ngens(), pb.ngens());
        let (off_a, off_b) = if left_first { (0, na) } else { (nb, 0) };
        let mut gens: Vec<GenDecl> = Vec::new();
        if left_first {
            gens.extend(pa.gens.iter().map(|g| rename(g, "l")));
            gens.extend(pb.gens.iter().map(|g| rename(g, "r")));
        } else {
            gens.extend(pb.gens.iter().map(|g| rename(g, "r")));
            gens.extend(pa.gens.iter().map(|g| rename(g, "l")));
        }
        let mode = match self.mode {
            TwistMode::Sl2Full => "braided",
            _ => "fused",
        };
        let name = format!("{}({},{})", mode, pa.name, pb.name);
        let mut p = Presentation::new(&name, pa.cartan.clone(), gens)?;
        let ng = na + nb;
        let ex = Exported { n: ng, off_a, off_b };
        let mut rules = Vec::new();
        for r in &pa.rules {
            rules.push(RewriteRule { lhs: (r.lhs.0 + off_a, r.lhs.1 + off_a), rhs: ex.lift(&r.rhs, off_a) });
        }
        for r in &pb.rules {
            rules.push(RewriteRule { lhs: (r.lhs.0 + off_b, r.lhs.1 + off_b), rhs: ex.lift(&r.rhs, off_b) });
        }
        for ga in 0..na {
            for gb in 0..nb {
                let a = self.left_elem(&pa.gen(ga));
                let b = self.right_elem(&pb.gen(gb));
                if left_first {
                    let prod = self.mul(&b, &a)?;
                    let mut rhs = NcPoly::zero();
                    for (k, c) in &prod {
                        let mut v = k[0].0.clone();
                        v.extend(&k[1].0);
                        rhs.add_term(&Monomial(v), c);
                    }
                    rules.push(RewriteRule { lhs: (off_b + gb, ga), rhs });
                } else {
                    let ba = self.mul(&b, &a)?;
                    let want = tensor_of(&[pa.gen(ga), pb.gen(gb)]);
                    let key = vec![pa.gen_mono(ga, 1), pb.gen_mono(gb, 1)];
                    if ba.len() != 1 || !ba.contains_key(&key) {
                        return Err(QmaError::OutOfScope(format!("cross relation for {} and {} is not a pure twist", pa.gens[ga].name, pb.gens[gb].name)));
                    }
                    let c = want[&key].div(&ba[&key])?;
                    let mut v = vec![0i32; ng];
                    v[gb] = 1;
                    v[nb + ga] = 1;
                    rules.push(RewriteRule { lhs: (nb + ga, gb), rhs: NcPoly::term(Monomial(v), c) });
                }
            }
        }
        p.set_rules(rules)?;
        let alg = Arc::new(p);
        let mut images = BTreeMap::new();
        let tag = match self.mode {
            TwistMode::Sl2Full => HopfTag::UqG,
            _ => HopfTag::UqGstar,
        };
        for h in tag.generators(pa.rank()) {
            if let HopfGen::K(_) = h {
                continue;
            }
            for ga in 0..na {
                let img = match (self.mode, h) {
                    (TwistMode::Sl2Full, _) => self.diagonal_action(h, &self.left_elem(&pa.gen(ga))),
                    _ => self.fusion_action(h, &self.left_elem(&pa.gen(ga)))?,
                };
                let v = ex.embed(&alg, &img);
                if !v.is_zero() {
                    images.insert((h, off_a + ga), v);
                }
            }
            for gb in 0..nb {
                let img = match (self.mode, h) {
                    (TwistMode::Sl2Full, _) => self.diagonal_action(h, &self.right_elem(&pb.gen(gb))),
                    _ => self.fusion_action(h, &self.right_elem(&pb.gen(gb)))?,
                };
                let v = ex.embed(&alg, &img);
                if !v.is_zero() {
                    images.insert((h, off_b + gb), v);
                }
            }
        }
        Ok((ActionTable::new(tag, alg, images), ex))
    }
}

/// Index bookkeeping for an exported twisted product.
#[derive(Clone, Copy, Debug)]
pub struct Exported {
    pub n: usize,
    pub off_a: usize,
    pub off_b: usize,
}

impl Exported {
    fn lift(&self, x: &NcPoly, off: usize) -> NcPoly {
        let mut out = NcPoly::zero();
        for (m, c) in &x.terms {
            let mut v = vec![0i32; self.n];
            v[off..off + m.0.len()].copy_from_slice(&m.0);
            out.add_term(&Monomial(v), c);
        }
        out
    }

    /// `a (x) b` as the product `(a (x) 1)(1 (x) b)`.
    pub fn embed(&self, p: &Presentation, t: &Tensor) -> NcPoly {
        let mut out = NcPoly::zero();
        for (k, c) in t {
            let a = self.lift(&NcPoly::mono(k[0].clone()), self.off_a);
            let b = self.lift(&NcPoly::mono(k[1].clone()), self.off_b);
            out.add_scaled(&p.mul(&a, &b), c);
        }
        out
    }
}

/// Module-algebra law of the diagonal action on products of basis tensors.
pub fn diagonal_law(tt: &TwistedTensor, deg: u32, name: &str) -> Result<CheckAcc> {
    let mut acc = CheckAcc::new(name, "U_q(g) acts on the braided product as a module algebra", deg);
    let basis = tt.basis_up_to(deg);
    for x in &basis {
        for y in &basis {
            if tt.tdeg(x) + tt.tdeg(y) > deg {
                continue;
            }
            let xy = tt.mul(x, y)?;
            for h in [HopfGen::E(0), HopfGen::F(0)] {
                let lhs = tt.diagonal_action(h, &xy);
                let (a1, a2) = match h {
                    HopfGen::E(_) => (tt.mul(&tt.diagonal_action(h, x), &tt.diagonal_action(HopfGen::K(0), y))?, tt.mul(x, &tt.diagonal_action(h, y))?),
                    _ => (tt.mul(&tt.diagonal_action(h, x), y)?, tt.mul(&k_inv(tt, x), &tt.diagonal_action(h, y))?),
                };
                let mut rhs = a1;
                for (k, c) in a2 {
                    tensor_add(&mut rhs, k, &c);
                }
                acc.expect(lhs == rhs, || (format!("{}(({})*({}))", h, tt.fmt(x), tt.fmt(y)), tt.fmt(&rhs), tt.fmt(&lhs)));
            }
        }
    }
    Ok(acc)
}

fn k_inv(tt: &TwistedTensor, x: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (k, c) in x {
        let parts = [tt.left.act_k(0, -1, &NcPoly::mono(k[0].clone())), tt.right.act_k(0, -1, &NcPoly::mono(k[1].clone()))];
        for (kk, v) in tensor_of(&parts) {
            tensor_add(&mut out, kk, &v.mul(c));
        }
    }
    out
}

/// The quasi-R coefficient convention, fixed by requiring that
/// `C_q[U](A1) (x) C_q[U](A1)` is a module algebra under the diagonal
/// action.
pub fn quasi_r_convention() -> Result<QuasiR> {
    static CONV: OnceLock<std::result::Result<QuasiR, String>> = OnceLock::new();
    CONV.get_or_init(|| arbitrate_quasi_r(3).map_err(|e| e.to_string())).clone().map_err(QmaError::Certification)
}

/// Tries each candidate convention and returns the first under which the
/// diagonal action is a module-algebra action to degree `deg`.
pub fn arbitrate_quasi_r(deg: u32) -> Result<QuasiR> {
    let t = preset_action("cqU-A1")?;
    for cand in QuasiR::CANDIDATES {
        let tt = TwistedTensor { left: t.clone(), right: t.clone(), mode: TwistMode::Sl2Full, quasi_r: cand };
        if diagonal_law(&tt, deg, "arbitration")?.ok() {
            return Ok(cand);
        }
    }
    Err(QmaError::Certification("no quasi-R convention makes the braided product a module algebra".into()))
}

/// Associativity on basis triples of total degree at most `deg`.
pub fn check_associative(tt: &TwistedTensor, deg: u32) -> Result<Check1> {
    let mode = match tt.mode {
        TwistMode::Sl2Full => "braided",
        TwistMode::Fusion => "fusion",
        TwistMode::HwTwist => "hw-twist",
    };
    let name = format!("{}-associative/{}#{}", mode, tt.left.alg.name, tt.right.alg.name);
    let mut acc = CheckAcc::new(&name, "the twisted product is associative", deg);
    let basis = tt.basis_up_to(deg);
    for x in &basis {
        for y in &basis {
            let dxy = tt.tdeg(x) + tt.tdeg(y);
            if dxy > deg {
                continue;
            }
            let xy = tt.mul(x, y)?;
            for z in &basis {
                if dxy + tt.tdeg(z) > deg {
                    continue;
                }
                let l = tt.mul(&xy, z)?;
                let r = tt.mul(x, &tt.mul(y, z)?)?;
                acc.expect(l == r, || (format!("({})({})({})", tt.fmt(x), tt.fmt(y), tt.fmt(z)), tt.fmt(&l), tt.fmt(&r)));
            }
        }
    }
    Ok(acc.finish())
}

type Check1 = crate::report::Check;

/// Fusion product of two U_q(g*)-module algebras: associativity, the
/// U_q(g*) relation suite on the exported algebra, and agreement of the
/// exported action with the fusion formulas.
pub fn check_fusion(left: ActionTable, right: ActionTable, deg: u32) -> Result<VerificationReport> {
    let tt = TwistedTensor::new(left, right, TwistMode::Fusion)?;
    let mut rep = VerificationReport::new();
    rep.push(check_associative(&tt, deg)?);
    let (t, ex) = tt.export()?;
    rep.extend(check_gstar_table(&t, deg));
    let p = &*t.alg;
    let mut f = CheckAcc::new(&format!("fusion-formulas/{}", p.name), "the exported action matches the fusion formulas", deg);
    let mut m = CheckAcc::new(&format!("fusion-product/{}", p.name), "the exported presentation multiplies like the fusion product", deg);
    let basis = tt.basis_up_to(deg);
    for x in &basis {
        let ex_x = ex.embed(p, x);
        for h in HopfTag::UqGstar.generators(tt.left.rank()) {
            let got = t.act(h, &ex_x);
            let want = ex.embed(p, &tt.fusion_action(h, x)?);
            f.expect(got == want, || (format!("{}({})", h, tt.fmt(x)), p.fmt_poly(&want), p.fmt_poly(&got)));
        }
        for y in &basis {
            if tt.tdeg(x) + tt.tdeg(y) > deg {
                continue;
            }
            let got = p.mul(&ex_x, &ex.embed(p, y));
            let want = ex.embed(p, &tt.fusion_mul(x, y)?);
            m.expect(got == want, || (format!("({})*({})", tt.fmt(x), tt.fmt(y)), p.fmt_poly(&want), p.fmt_poly(&got)));
        }
    }
    rep.push(f.finish());
    rep.push(m.finish());
    Ok(rep)
}

/// Rank-1 braided product of two U_q(g)-module algebras: the product
/// checks of [`check_braided_product`], the diagonal module-algebra law,
/// and certification of the exported presentation.
pub fn check_braided(left: ActionTable, right: ActionTable, deg: u32) -> Result<VerificationReport> {
    let tt = TwistedTensor::new(left, right, TwistMode::Sl2Full)?;
    let tag = format!("{}#{}", tt.left.alg.name, tt.right.alg.name);
    let mut rep = check_braided_product(&tt, deg)?;
    rep.push(diagonal_law(&tt, deg, &format!("braided-module-algebra/{}", tag))?.finish());
    let (t, _) = tt.export()?;
    rep.extend(check_action_well_defined(&t, deg));
    rep.extend(check_hopf_relations(&t, deg));
    Ok(rep)
}

/// Associativity, agreement with the highest-weight twist, and agreement
/// of the exported presentation with the braided product. Only the E and
/// F images enter the product, so weight-only factors such as the torus
/// are allowed here.
pub fn check_braided_product(tt: &TwistedTensor, deg: u32) -> Result<VerificationReport> {
    let tag = format!("{}#{}", tt.left.alg.name, tt.right.alg.name);
    let mut rep = VerificationReport::new();
    rep.push(check_associative(tt, deg)?);
    let mut hw = CheckAcc::new(&format!("braided-hw-twist/{}", tag), "(1 (x) s)(a (x) 1) = q^(|a|,|s|) a (x) s for highest-weight s", deg);
    for ds in 0..=deg {
        for s in hw_basis(&tt.right, ds) {
            for ma in tt.left.alg.basis_up_to(deg - ds) {
                let a = NcPoly::mono(ma);
                let got = tt.sl2_braided_mul(&tt.right_elem(&s), &tt.left_elem(&a))?;
                let want = tt.hw_twist_mul(&s, &a)?;
                hw.expect(got == want, || (format!("s = {}, a = {}", tt.right.alg.fmt_poly(&s), tt.left.alg.fmt_poly(&a)), tt.fmt(&want), tt.fmt(&got)));
            }
        }
    }
    rep.push(hw.finish());
    let (t, ex) = tt.export()?;
    let p = &*t.alg;
    let mut m = CheckAcc::new(&format!("braided-product/{}", p.name), "the exported presentation multiplies like the braided product", deg);
    let basis = tt.basis_up_to(deg);
    for x in &basis {
        for y in &basis {
            if tt.tdeg(x) + tt.tdeg(y) > deg {
                continue;
            }
            let got = p.mul(&ex.embed(p, x), &ex.embed(p, y));
            let want = ex.embed(p, &tt.sl2_braided_mul(x, y)?);
            m.expect(got == want, || (format!("({})*({})", tt.fmt(x), tt.fmt(y)), p.fmt_poly(&want), p.fmt_poly(&got)));
        }
    }
    rep.push(m.finish());
    Ok(rep)
}

/// `C_q[U](A1) (x) C_q[U](A1)` with `C_q[U]` embedded in the right factor
/// factorizes to degree `deg`.
pub fn check_tensor_factorization(deg: u32) -> Result<VerificationReport> {
    let t = preset_action("cqU-A1")?;
    let tt = TwistedTensor::new(t.clone(), t.clone(), TwistMode::Sl2Full)?;
    let (bt, ex) = tt.export()?;
    let src = t.alg.clone();
    let simple = src.pbw.as_ref().expect("root data").simple[0];
    let img = ex.lift(&src.gen(simple), ex.off_b);
    let emb = Embedding::new(src.clone(), bt.alg.clone(), vec![img])?;
    let t0 = preset_action_cqu(src)?;
    let (_, rep) = verify_factorization(&bt, &t0, &emb, &[0], &FactorizationConfig::new(deg))?;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::preset_action;
    use crate::ncpoly::parse_expr;

    #[test]
    fn arbitration_picks_standard_coefficients() {
        assert_eq!(quasi_r_convention().unwrap(), QuasiR { sign: 1, e: 1 });
    }

    #[test]
    fn braided_cross_relation_a1() {
        let t = preset_action("cqU-A1").unwrap();
        let tt = TwistedTensor::new(t.clone(), t, TwistMode::Sl2Full).unwrap();
        let (bt, _) = tt.export().unwrap();
        let p = &bt.alg;
        let got = parse_expr("rx1*lx1", p).unwrap();
        let want = parse_expr("q^2*lx1*rx1 - (q^2-1)*lx1^2", p).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn fusion_twist_on_units() {
        let t = preset_action("cqU-A1").unwrap();
        let tt = TwistedTensor::new(t.clone(), t.clone(), TwistMode::Fusion).unwrap();
        let x = t.alg.gen(0);
        let prod = tt.fusion_mul(&tt.right_elem(&x), &tt.left_elem(&x)).unwrap();
        assert_eq!(prod, tensor_of(&[x.clone(), x.clone()]).into_iter().map(|(k, c)| (k, c.mul(&RatFunc::q_pow(2)))).collect());
        let prod = tt.fusion_mul(&tt.left_elem(&x), &tt.left_elem(&x)).unwrap();
        assert_eq!(prod, tt.left_elem(&t.alg.mul(&x, &x)));
    }

    #[test]
    fn hw_twist_rejects_non_highest_weight() {
        let t = preset_action("cqU-A1").unwrap();
        let tt = TwistedTensor::new(t.clone(), t.clone(), TwistMode::HwTwist).unwrap();
        assert!(tt.hw_twist_mul(&t.alg.gen(0), &t.alg.one()).is_err());
    }

    #[test]
    fn rank_two_braiding_is_out_of_scope() {
        let t = preset_action("cqU-A2").unwrap();
        assert!(matches!(TwistedTensor::new(t.clone(), t, TwistMode::Sl2Full), Err(QmaError::OutOfScope(_))));
    }
}
