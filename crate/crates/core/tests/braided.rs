use qma_core::action::preset_action;
use qma_core::braided::*;
use qma_core::gstar::{qmat32_plus_gstar, trivial_gstar, GstarContext};
use qma_core::ncpoly::presets::preset;

fn deg(default: u32) -> u32 {
    std::env::var("QMA_DEG").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

#[test]
fn braided_a1_square() {
    let t = preset_action("cqU-A1").unwrap();
    let rep = check_braided(t.clone(), t, deg(4)).unwrap();
    println!("{}", rep.summary());
    assert!(rep.passed(), "{}", rep.summary());
}

#[test]
fn half_integral_weights_are_rejected() {
    let plane = preset_action("qmat-2-1").unwrap();
    assert!(check_braided(plane.clone(), plane, 2).is_err());
}

#[test]
fn braided_with_torus_matches_hw_twist() {
    let u = preset_action("cqU-A1").unwrap();
    let tor = preset_action("torus-A1").unwrap();
    for (l, r) in [(u.clone(), tor.clone()), (tor, u)] {
        let tt = TwistedTensor::new(l, r, TwistMode::Sl2Full).unwrap();
        let rep = check_braided_product(&tt, deg(3)).unwrap();
        println!("{}", rep.summary());
        assert!(rep.passed(), "{}", rep.summary());
    }
}

#[test]
fn other_quasi_r_conventions_break_the_module_algebra_law() {
    let t = preset_action("cqU-A1").unwrap();
    let chosen = quasi_r_convention().unwrap();
    for cand in QuasiR::CANDIDATES {
        let tt = TwistedTensor { left: t.clone(), right: t.clone(), mode: TwistMode::Sl2Full, quasi_r: cand };
        let ok = diagonal_law(&tt, 3, "law").unwrap().ok();
        assert_eq!(ok, cand == chosen, "{:?}", cand);
    }
}

#[test]
fn tensor_factorizes_over_right_copy() {
    let rep = check_tensor_factorization(deg(4)).unwrap();
    println!("{}", rep.summary());
    assert!(rep.passed(), "{}", rep.summary());
}

#[test]
fn fusion_products() {
    let tor = trivial_gstar(preset("torus-A2").unwrap());
    let plus = qmat32_plus_gstar().unwrap();
    let u = GstarContext::over_itself("cqU-A2").unwrap().restrict_to(preset("cqU-A2").unwrap()).unwrap();
    for (l, r) in [(tor.clone(), plus.clone()), (plus.clone(), tor.clone()), (u.clone(), tor), (u.clone(), u)] {
        let rep = check_fusion(l, r, deg(3)).unwrap();
        println!("{}", rep.summary());
        assert!(rep.passed(), "{}", rep.summary());
    }
}

#[test]
fn fusion_rejects_fractional_twists() {
    let plus = qmat32_plus_gstar().unwrap();
    assert!(check_fusion(plus.clone(), plus, 2).is_err());
}
