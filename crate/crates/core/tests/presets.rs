use qma_core::ncpoly::check::{check_local_confluence, check_oracle};
use qma_core::ncpoly::presets::{preset, preset_names};

#[test]
fn every_preset_is_confluent_and_matches_oracle() {
    for name in preset_names() {
        let t = std::time::Instant::now();
        let p = preset(name).unwrap();
        let deg = 6;
        let c = check_local_confluence(&p, deg);
        assert!(c.passed(), "{}", c.summary());
        let o = check_oracle(&p, deg, 0);
        assert!(o.passed(), "{}", o.summary());
        eprintln!("{} {:?}", name, t.elapsed());
    }
}
