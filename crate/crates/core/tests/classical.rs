use qma_core::action::{preset_action, HopfGen};
use qma_core::cartan::preset_cartan;
use qma_core::classical::*;
use qma_core::ncpoly::presets::{preset, preset_names};
use qma_core::ncpoly::{parse_expr, NcPoly, Presentation};
use qma_core::report::VerificationReport;
use qma_core::scalar::RatFunc;

fn deg(default: u32) -> u32 {
    std::env::var("QMA_DEG").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn ok(rep: &VerificationReport) {
    println!("{}", rep.summary());
    assert!(rep.passed(), "{}", rep.summary());
}

fn ex(p: &Presentation, s: &str) -> NcPoly {
    parse_expr(s, p).unwrap()
}

#[test]
fn every_preset_specializes() {
    for name in preset_names() {
        let q = preset(name).unwrap();
        let c = specialize_presentation(&q).unwrap();
        ok(&check_functorial(&q, &c, deg(3)));
        if let Ok(t) = preset_action(name) {
            let cl = specialize_algebra(&t).unwrap();
            ok(&check_specialization(&cl, deg(3)));
        }
    }
}

#[test]
fn specialized_cqu_matches_closed_form() {
    // e_i(x_j) = delta_ij, h_i(x_j) = -c_ij x_j, f_i(x_i) = -x_i^2 on the
    // simple generators; commutative products.
    for label in ["A1", "A2", "B2", "G2"] {
        let cl = classical_preset(&format!("cqU-{}", label)).unwrap();
        let p = cl.alg();
        let c = &p.cartan;
        for i in 0..p.rank() {
            for j in 0..p.rank() {
                let xj = p.gen(cl.simple(j).unwrap());
                let e = cl.t.act(HopfGen::E(i), &xj);
                assert_eq!(e, if i == j { p.one() } else { NcPoly::zero() });
                assert_eq!(cl.t.act_h(i, &xj), xj.scale(&RatFunc::from_int(-c.c[i][j])));
            }
            let xi = p.gen(cl.simple(i).unwrap());
            assert_eq!(cl.t.act(HopfGen::F(i), &xi), p.mul(&xi, &xi).scale(&RatFunc::from_int(-1)));
        }
        for a in p.basis_up_to(2) {
            for b in p.basis_up_to(2) {
                let (a, b) = (NcPoly::mono(a.clone()), NcPoly::mono(b));
                assert_eq!(p.mul(&a, &b), p.mul(&b, &a));
            }
        }
    }
}

#[test]
fn classical_actions_certify() {
    for name in ["cqU-A1", "cqU-A2", "cqU-B2", "qmat-3-2", "localized-qmat32"] {
        let cl = classical_preset(name).unwrap();
        ok(&certify_classical(&cl, deg(3)));
    }
}

#[test]
fn poisson_bracket_on_cqu() {
    for label in ["A2", "B2"] {
        let cl = classical_preset(&format!("cqU-{}", label)).unwrap();
        ok(&check_poisson(&cl, deg(3)).unwrap());
    }
}

#[test]
fn epsilon_recursion() {
    for label in ["A2", "B2", "G2"] {
        let cl = classical_preset(&format!("cqU-{}", label)).unwrap();
        ok(&check_epsilon(&cl).unwrap());
    }
    let cl = classical_preset("cqU-A2").unwrap();
    let p = cl.alg();
    assert_eq!(cl.epsilon(0, 1, 0).unwrap(), ex(p, "x2"));
    assert!(cl.epsilon(0, 1, 2).unwrap().is_zero());
    let f = cl.t.act(HopfGen::F(0), &ex(p, "x2"));
    assert_eq!(cl.epsilon(0, 1, 1).unwrap(), f.scale(&RatFunc::from_int(2)));
}

#[test]
fn hatf_serre_on_cqu_a2() {
    let (cu, emb) = cu_over_itself("A2").unwrap();
    let hf = HatF::new(cu.t.clone(), &cu, &emb).unwrap();
    assert!(hf.act(0, &cu.alg().one()).is_zero());
    ok(&check_serre_hatf(&hf, deg(5)));
}

#[test]
fn hatf_serre_on_localized() {
    let (big, cu, emb) = localized_classical().unwrap();
    let hf = HatF::new(big.t.clone(), &cu, &emb).unwrap();
    ok(&check_serre_hatf(&hf, deg(3)));
}

#[test]
fn localized_embedding_matches_matrix_entries() {
    let (big, cu, emb) = localized_classical().unwrap();
    let p = big.alg();
    assert_eq!(emb.images[cu.simple(0).unwrap()], ex(p, "x21*x11^-1"));
    assert_eq!(emb.images[cu.simple(1).unwrap()], ex(p, "D^-1*(x11*x32 - x12*x31)"));
}

#[test]
fn classical_crossed_products() {
    let c = preset_cartan("A2").unwrap();
    let s = build_classical_crossed(&scalars_classical(&c).unwrap()).unwrap();
    ok(&certify_classical_crossed(&s, deg(4)));
    let ct = tensor_bminus(&scalars_classical(&c).unwrap(), &torus_classical(&c).unwrap()).unwrap();
    let t = build_classical_crossed(&ct).unwrap();
    ok(&certify_classical_crossed(&t, deg(3)));
    let x = ex(&t.t.alg, "x1");
    let v = ex(&t.t.alg, "v1");
    let a = t.t.alg.mul(&v, &x);
    assert_eq!(t.t.act(HopfGen::E(0), &a), v);
}

#[test]
fn torus_generation_identity() {
    for label in ["A1", "A2", "B2"] {
        let c = preset_cartan(label).unwrap();
        ok(&check_torus_identity(&scalars_classical(&c).unwrap()).unwrap());
    }
}

#[test]
fn classical_factorizations() {
    let (cu, emb) = cu_over_itself("A2").unwrap();
    let (wit, rep) = classical_verify_factorization(&cu.t, &cu.t, &emb, &[0, 1, 0], deg(4)).unwrap();
    ok(&rep);
    assert!(wit.is_iso());

    let (big, cu, emb) = localized_classical().unwrap();
    let (wit, rep) = classical_verify_factorization(&big.t, &cu.t, &emb, &[0, 1, 0], deg(3)).unwrap();
    ok(&rep);
    assert!(wit.is_iso());

    let c = preset_cartan("A2").unwrap();
    let ct = tensor_bminus(&scalars_classical(&c).unwrap(), &torus_classical(&c).unwrap()).unwrap();
    let cr = build_classical_crossed(&ct).unwrap();
    let (wit, rep) = classical_verify_factorization(&cr.t, &cr.cu.t, &cr.embedding().unwrap(), &[0, 1, 0], deg(3)).unwrap();
    ok(&rep);
    assert!(wit.is_iso());
}

#[test]
fn gauss_symbolic_matches_closed_form() {
    let m = generic_matrix().unwrap();
    let (l, r) = gauss_factor_3x2(&m).unwrap();
    assert!(gauss_holds(&m, &l, &r));
    let alg = m[0][0].alg.clone();
    let s = |e: &str| Sym::parse(&alg, e).unwrap();
    let l_want = vec![
        vec![s("1"), s("0"), s("0")],
        vec![s("x21*x11^-1"), s("1"), s("0")],
        vec![s("x31*x11^-1"), s("(x11*x32 - x12*x31)*(x11*x22 - x12*x21)^-1"), s("1")],
    ];
    let r_want = vec![vec![s("x11"), s("x12")], vec![s("0"), s("(x11*x22 - x12*x21)*x11^-1")], vec![s("0"), s("0")]];
    assert_eq!(l, l_want);
    assert_eq!(r, r_want);
}

#[test]
fn gauss_random_matrices() {
    ok(&check_gauss_random(0, 50));
    ok(&check_gauss_random(7, 50));
}
