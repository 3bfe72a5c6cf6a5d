use qma_core::action::preset_action;
use qma_core::adapted::{qmat32_embedding, verify_factorization, FactorizationConfig};

#[test]
fn localized_qmat32_factorizes() {
    let deg: u32 = std::env::var("QMA_DEG").ok().and_then(|s| s.parse().ok()).unwrap_or(2);
    let t = preset_action("localized-qmat32").unwrap();
    let t0 = preset_action("cqU-A2").unwrap();
    let emb = qmat32_embedding().unwrap();
    let (wit, rep) = verify_factorization(&t, &t0, &emb, &[0, 1, 0], &FactorizationConfig::new(deg)).unwrap();
    println!("{}", rep.summary());
    println!("{:?}", wit);
    assert!(rep.passed());
}

#[test]
fn localized_decompose_roundtrip() {
    use qma_core::adapted::{decompose_extending, reassemble, AdaptedBasis};
    use qma_core::ncpoly::NcPoly;
    use qma_core::scalar::RatFunc;
    use rand::{Rng, SeedableRng};
    let t = preset_action("localized-qmat32").unwrap();
    let t0 = preset_action("cqU-A2").unwrap();
    let emb = qmat32_embedding().unwrap();
    let mut basis = AdaptedBasis { word: vec![0, 1, 0], entries: Default::default() };
    let monos = t.alg.basis_up_to(4);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    for _ in 0..100 {
        let mut a = NcPoly::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let m = &monos[rng.gen_range(0..monos.len())];
            a.add_term(m, &RatFunc::from_int(rng.gen_range(1..=5)));
        }
        let parts = decompose_extending(&t, &t0, &a, &mut basis, &emb).unwrap();
        assert!(parts.iter().all(|(h, _)| qma_core::adapted::is_highest_weight(&t, h)));
        assert_eq!(reassemble(&t, &parts, &basis, &emb).unwrap(), a);
    }
}
