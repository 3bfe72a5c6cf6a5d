use qma_core::cartan::preset_cartan;
use qma_core::gstar::*;
use qma_core::ncpoly::presets::preset;

fn deg(default: u32) -> u32 {
    std::env::var("QMA_DEG").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

#[test]
fn gstar_relations_on_cqu_a2() {
    let ctx = GstarContext::over_itself("cqU-A2").unwrap();
    let rep = check_gstar(&ctx, deg(3));
    println!("{}", rep.summary());
    assert!(rep.passed(), "{}", rep.summary());
}

#[test]
fn gstar_relations_on_localized() {
    let ctx = GstarContext::localized_qmat32().unwrap();
    let rep = check_gstar(&ctx, deg(2));
    println!("{}", rep.summary());
    assert!(rep.passed(), "{}", rep.summary());
}

#[test]
fn crossed_products_certify() {
    let c = preset_cartan("A2").unwrap();
    let tables = vec![trivial_gstar(scalars(&c).unwrap()), trivial_gstar(preset("torus-A2").unwrap()), qmat32_plus_gstar().unwrap()];
    for t in &tables {
        let g = check_gstar_table(t, deg(3));
        println!("{}", g.summary());
        assert!(g.passed(), "{}", g.summary());
        let cr = build_crossed(t).unwrap();
        let rep = certify_crossed(&cr, deg(3));
        println!("{}", rep.summary());
        assert!(rep.passed(), "{}", rep.summary());
        let rep = eta_check(&cr, deg(3));
        println!("{}", rep.summary());
        assert!(rep.passed(), "{}", rep.summary());
    }
}

#[test]
fn psi_identifies_crossed_product_with_localized() {
    let ctx = GstarContext::localized_qmat32().unwrap();
    let cr = build_crossed(&qmat32_plus_gstar().unwrap()).unwrap();
    let rep = psi_check(&ctx, &cr, &[0, 1, 0], deg(2)).unwrap();
    println!("{}", rep.summary());
    assert!(rep.passed(), "{}", rep.summary());
}

#[test]
fn coaction_a2() {
    let rep = coaction_generator_check("A2").unwrap();
    println!("{}", rep.summary());
    assert!(rep.passed(), "{}", rep.summary());
}
