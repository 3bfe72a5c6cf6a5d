use qma_core::action::{check_action_well_defined, check_hopf_relations, preset_action};

fn certify(name: &str, deg: u32) {
    let t = preset_action(name).unwrap();
    let mut rep = check_action_well_defined(&t, deg);
    rep.extend(check_hopf_relations(&t, deg));
    assert!(rep.passed(), "{}:\n{}", name, rep.summary());
}

#[test]
fn cqu_actions_certified() {
    for n in ["cqU-A1", "cqU-A2", "cqU-B2"] {
        certify(n, 4);
    }
}

#[test]
fn cqu_g2_action_certified() {
    certify("cqU-G2", 3);
}

#[test]
fn qmatrix_actions_certified() {
    for n in ["qmat-2-2", "qmat-3-2"] {
        certify(n, 4);
    }
}

#[test]
fn localized_action_certified() {
    certify("localized-qmat32", 4);
}
