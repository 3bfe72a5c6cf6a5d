use super::presets::*;
use super::*;

fn ex(p: &Presentation, s: &str) -> NcPoly {
    parse_expr(s, p).unwrap()
}

#[test]
fn qmat_same_column_rule() {
    let p = preset("qmat-3-2").unwrap();
    assert_eq!(ex(&p, "x21*x11"), ex(&p, "q*x11*x21"));
    assert_eq!(ex(&p, "x22*x11"), ex(&p, "x11*x22 + (q - q^-1)*x12*x21"));
    assert_eq!(p.ngens(), 6);
    assert_eq!(p.graded_basis(1).len(), 6);
}

#[test]
fn parse_basics() {
    let p = preset("qmat-3-2").unwrap();
    assert!(ex(&p, "0").is_zero());
    let e = ex(&p, "(q - q^-1)*x12*x21");
    assert_eq!(e.len(), 1);
    assert!(matches!(parse_expr("x11 + ", &p), Err(QmaError::Parse { .. })));
    assert!(matches!(parse_expr("w7", &p), Err(QmaError::Parse { pos: 0, .. })));
    assert!(parse_expr("x11/x12", &p).is_err());
    assert_eq!(ex(&p, "3/2*x11"), ex(&p, "x11*3/2"));
}

#[test]
fn cqu_a2_pbw() {
    let p = preset("cqU-A2").unwrap();
    let names: Vec<&str> = p.gens.iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, vec!["x1", "x12", "x2"]);
    assert_eq!(ex(&p, "x2*x1"), ex(&p, "q*x1*x2 - (q^2-1)*x12"));
    let serre = ex(&p, "x1*x1*x2 - (q+q^-1)*x1*x2*x1 + x2*x1*x1");
    assert!(serre.is_zero());
    let dims: Vec<usize> = (0..5).map(|d| p.graded_basis(d).len()).collect();
    assert_eq!(dims, vec![1, 2, 4, 6, 9]);
}

#[test]
fn localized_inverse_rules() {
    let p = preset("localized-qmat32").unwrap();
    assert_eq!(ex(&p, "y*x11"), p.one());
    assert_eq!(ex(&p, "x11*y"), p.one());
    assert_eq!(ex(&p, "x21*y"), ex(&p, "q^-1*y*x21"));
    assert_eq!(ex(&p, "z*D"), p.one());
    let d = ex(&p, "x11*x22 - q^-1*x12*x21");
    assert_eq!(d, ex(&p, "D"));
}

#[test]
fn confluence_small_presets() {
    for name in ["qmat-2-2", "cqU-A2", "localized-qmat32"] {
        let p = preset(name).unwrap();
        let r = check::check_local_confluence(&p, 4);
        assert!(r.passed(), "{}", r.summary());
    }
}

#[test]
fn broken_rules_have_witness() {
    let c = crate::cartan::preset_cartan("A2").unwrap();
    let gens = vec![GenDecl::new("x1", Weight::from_ints(&[-1, 0])), GenDecl::new("x2", Weight::from_ints(&[0, -1]))];
    let mut p = Presentation::new("broken", c, gens).unwrap();
    let m = Monomial(vec![1, 1]);
    p.set_rules(vec![
        RewriteRule { lhs: (1, 0), rhs: NcPoly::mono(m.clone()) },
        RewriteRule { lhs: (1, 0), rhs: NcPoly::term(m, RatFunc::q_pow(1)) },
    ])
    .unwrap();
    let r = check::check_local_confluence(&p, 4);
    assert!(!r.passed());
    assert_eq!(r.checks[0].counterexample.as_ref().unwrap().input, "x2*x1");
}

#[test]
fn oracle_agrees_on_presets() {
    for name in ["cqU-A1", "cqU-A2", "qmat-2-2", "torus-A2", "uqgstar-A1"] {
        let p = preset(name).unwrap();
        let r = check::check_oracle(&p, 4, 0);
        assert!(r.passed(), "{}", r.summary());
    }
}
