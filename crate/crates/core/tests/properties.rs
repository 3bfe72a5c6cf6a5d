use proptest::prelude::*;

use qma_core::action::{preset_action, ActionTable, HopfGen};
use qma_core::braided::{TwistMode, TwistedTensor};
use qma_core::classical::{classical_preset, gauss_factor_3x2, gauss_holds, spec_poly, Mat};
use qma_core::gstar::{tensor_add, Tensor};
use qma_core::ncpoly::NcPoly;
use qma_core::scalar::{q_binomial, rat, rat_frac, QLaurent, RatFunc, Rational};

fn laurent() -> impl Strategy<Value = RatFunc> {
    prop::collection::vec((-3i32..=3, -4i64..=4), 1..4).prop_map(|ts| RatFunc::from_laurent(QLaurent::from_terms(ts.into_iter().map(|(e, c)| (e, rat(c))))))
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (laurent(), laurent()).prop_map(|(a, b)| if b.is_zero() { a } else { a.div(&b).unwrap() })
}

/// Random element: up to four basis monomials of degree `<= deg` with
/// small integer coefficients.
fn element(t: &ActionTable, deg: u32) -> impl Strategy<Value = NcPoly> {
    let basis = t.alg.basis_up_to(deg);
    let n = basis.len();
    prop::collection::vec((0..n, -4i64..=4), 1..5).prop_map(move |ts| {
        let mut a = NcPoly::zero();
        for (k, c) in ts {
            a.add_term(&basis[k], &RatFunc::from_int(c));
        }
        a
    })
}

fn table(name: &str) -> ActionTable {
    preset_action(name).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ratfunc_field_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!(a.mul(&b).bar(), a.bar().mul(&b.bar()));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn specialization_is_multiplicative(a in laurent(), b in laurent()) {
        let ab = a.mul(&b).specialize_q1().unwrap();
        prop_assert_eq!(ab, a.specialize_q1().unwrap() * b.specialize_q1().unwrap());
    }

    #[test]
    fn products_are_associative(x in element(&table("localized-qmat32"), 2), y in element(&table("localized-qmat32"), 2), z in element(&table("localized-qmat32"), 2)) {
        let p = table("localized-qmat32").alg;
        prop_assert_eq!(p.mul(&p.mul(&x, &y), &z), p.mul(&x, &p.mul(&y, &z)));
    }

    #[test]
    fn b2_products_are_associative(x in element(&table("cqU-B2"), 3), y in element(&table("cqU-B2"), 3), z in element(&table("cqU-B2"), 2)) {
        let p = table("cqU-B2").alg;
        prop_assert_eq!(p.mul(&p.mul(&x, &y), &z), p.mul(&x, &p.mul(&y, &z)));
    }

    #[test]
    fn module_algebra_law_on_elements(x in element(&table("cqU-A2"), 3), y in element(&table("cqU-A2"), 3), i in 0usize..2) {
        let t = table("cqU-A2");
        let xy = t.alg.mul(&x, &y);
        for h in [HopfGen::E(i), HopfGen::F(i), HopfGen::K(i)] {
            let want = t.law_product(h, &x, &t.act(h, &x), &y, &t.act(h, &y));
            prop_assert_eq!(t.act(h, &xy), want);
        }
    }

    #[test]
    fn specialization_commutes_with_products(x in element(&table("localized-qmat32"), 3), y in element(&table("localized-qmat32"), 3)) {
        let q = table("localized-qmat32");
        let c = classical_preset("localized-qmat32").unwrap();
        let lhs = spec_poly(&q.alg.mul(&x, &y)).unwrap();
        let rhs = c.alg().mul(&spec_poly(&x).unwrap(), &spec_poly(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_bracket_is_a_biderivation(x in element(&table("cqU-A2"), 2), y in element(&table("cqU-A2"), 2), z in element(&table("cqU-A2"), 2)) {
        let c = classical_preset("cqU-A2").unwrap();
        let p = c.alg();
        let b = |u: &NcPoly, v: &NcPoly| c.poisson(u, v).unwrap();
        prop_assert_eq!(b(&x, &y), b(&y, &x).neg());
        let lhs = b(&x, &p.mul(&y, &z));
        let rhs = p.mul(&b(&x, &y), &z).add(&p.mul(&y, &b(&x, &z)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauss_multiplies_back(entries in prop::collection::vec((-20i64..=20, 1i64..=7), 6)) {
        let m: Mat<Rational> = entries.chunks(2).map(|r| r.iter().map(|&(n, d)| rat_frac(n, d)).collect()).collect();
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        match gauss_factor_3x2(&m) {
            Ok((l, r)) => prop_assert!(gauss_holds(&m, &l, &r)),
            Err(_) => prop_assert!(m[0][0] == rat(0) || det == rat(0)),
        }
    }

    /// Two families satisfying quantum Serre with `z_j y_i = q_i^(c_ij) y_i z_j`
    /// sum to a family satisfying quantum Serre: `y_i = l_i x_i (x) 1`,
    /// `z_i = m_i 1 (x) x_i` in the fusion product.
    #[test]
    fn serre_survives_sums(label in prop::sample::select(vec!["A2", "B2"]), ls in prop::collection::vec(1i64..=5, 2), ms in prop::collection::vec(-5i64..=5, 2)) {
        let t = table(&format!("cqU-{}", label));
        let tt = TwistedTensor::new(t.clone(), t.clone(), TwistMode::Fusion).unwrap();
        let pbw = t.alg.pbw.clone().unwrap();
        let c = &t.alg.cartan;
        let gen = |i: usize| t.alg.gen(pbw.simple[i]);
        let fam: Vec<Tensor> = (0..2)
            .map(|i| {
                let mut s = Tensor::new();
                for (k, v) in tt.left_elem(&gen(i)) {
                    tensor_add(&mut s, k, &v.mul(&RatFunc::from_int(ls[i])));
                }
                for (k, v) in tt.right_elem(&gen(i)) {
                    tensor_add(&mut s, k, &v.mul(&RatFunc::from_int(ms[i])));
                }
                s
            })
            .collect();
        let pow = |a: &Tensor, n: u32| (0..n).fold(tt.one(), |acc, _| tt.mul(&acc, a).unwrap());
        for (i, j) in [(0usize, 1usize), (1, 0)] {
            let n = (1 - c.c[i][j]) as u32;
            let mut total = Tensor::new();
            for k in 0..=n {
                let term = tt.mul(&tt.mul(&pow(&fam[i], n - k), &fam[j]).unwrap(), &pow(&fam[i], k)).unwrap();
                let mut coef = q_binomial(n, k, c.d[i] as u32);
                if k % 2 == 1 {
                    coef = coef.neg();
                }
                for (key, v) in term {
                    tensor_add(&mut total, key, &v.mul(&coef));
                }
            }
            prop_assert!(total.values().all(|v| v.is_zero()), "Serre({}, {}) fails", i + 1, j + 1);
        }
    }
}
