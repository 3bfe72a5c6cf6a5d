//! `qma`: run verification suites, tabulate nu-vectors, certify
//! factorizations and crossed products, and factor 3 x 2 matrices.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qma_core::action::{check_action_well_defined, check_hopf_relations, preset_action, ActionTable, HopfTag};
use qma_core::adapted::{check_adapted, check_roundtrip, nu, qmat32_embedding, verify_factorization, Embedding, FactorizationConfig};
use qma_core::braided::{check_braided, check_tensor_factorization};
use qma_core::cartan::preset_cartan;
use qma_core::classical::{self, Classical, Mat, Sym};
use qma_core::gstar::{self, GstarContext};
use qma_core::ncpoly::check::{check_local_confluence, check_oracle};
use qma_core::ncpoly::presets::preset;
use qma_core::ncpoly::{NcPoly, Presentation};
use qma_core::report::VerificationReport;
use qma_core::scalar::Rational;
use qma_core::QmaError;

#[derive(Parser)]
#[command(name = "qma", version, about = "Exact checks for quantum module algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Named algebra/action preset, e.g. cqU-A2, localized-qmat32.
    #[arg(long)]
    preset: Option<String>,
    /// Presentation JSON file.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Action table JSON file (needs --algebra).
    #[arg(long)]
    action: Option<PathBuf>,
    /// Reduced word, 1-based, comma separated.
    #[arg(long)]
    word: Option<String>,
    #[arg(long, default_value_t = 5)]
    max_deg: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON result here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one or more suites: confluence, action, hopf, gstar, adapted,
    /// factorization, roundtrip, classical, crossed, braided, gauss.
    Verify {
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[command(flatten)]
        c: Common,
    },
    /// Tabulate nu-vectors of all basis monomials.
    Nu {
        #[command(flatten)]
        c: Common,
    },
    /// Certify the factorization A+ (x) C_q[U] -> A.
    Factorize {
        #[command(flatten)]
        c: Common,
    },
    /// Build and certify the crossed product A+ (x) C_q[U].
    Crossed {
        #[command(flatten)]
        c: Common,
    },
    /// decompose/reassemble on random elements, plus psi for the
    /// localized matrices.
    Roundtrip {
        #[command(flatten)]
        c: Common,
    },
    /// Factor a 3 x 2 matrix (JSON array of rational strings), or the
    /// generic matrix when no file is given.
    Gauss {
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[command(flatten)]
        c: Common,
    },
    /// Specialize a preset to q = 1 and certify the classical action.
    Specialize {
        #[command(flatten)]
        c: Common,
    },
    /// Serre relations and commutators of the U_q(g*) operators.
    SerreGstar {
        #[command(flatten)]
        c: Common,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<QmaError> for Failure {
    fn from(e: QmaError) -> Self {
        match e {
            QmaError::Certification(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// What a command produced.
struct Outcome {
    passed: bool,
    text: String,
    json: Value,
}

impl Outcome {
    fn report(rep: VerificationReport, config: Value) -> Outcome {
        let rep = rep.with_config(config);
        Outcome { passed: rep.passed(), text: rep.summary(), json: rep.to_json() }
    }
}

fn read_json(path: &PathBuf) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}:{}:{}: {}", path.display(), e.line(), e.column(), e)))
}

fn preset_name(c: &Common) -> Res<String> {
    c.preset.clone().ok_or_else(|| Failure::Input("--preset is required for this command".into()))
}

fn parse_word(c: &Common, p: &Presentation) -> Res<Vec<usize>> {
    match &c.word {
        None => Ok(p.cartan.longest_word()),
        Some(s) => s
            .split(',')
            .map(|x| match x.trim().parse::<usize>() {
                Ok(i) if i >= 1 && i <= p.rank() => Ok(i - 1),
                _ => Err(Failure::Input(format!("bad word entry '{}'", x))),
            })
            .collect(),
    }
}

/// The action table selected by `--preset` or `--algebra`/`--action`.
fn load_table(c: &Common) -> Res<ActionTable> {
    if let Some(path) = &c.algebra {
        let alg = Arc::new(Presentation::from_json(&read_json(path)?).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))?);
        return match &c.action {
            Some(a) => ActionTable::from_json(&read_json(a)?, alg).map_err(|e| Failure::Input(format!("{}: {}", a.display(), e))),
            None => Ok(ActionTable::new(HopfTag::UqG, alg, Default::default())),
        };
    }
    let name = preset_name(c)?;
    if name.eq_ignore_ascii_case("qmat32-plus") {
        return Ok(gstar::qmat32_plus_gstar()?);
    }
    if let Some(label) = name.strip_prefix("scalars-") {
        return Ok(gstar::trivial_gstar(gstar::scalars(&preset_cartan(label)?)?));
    }
    match preset_action(&name) {
        Ok(t) => Ok(t),
        Err(_) => Ok(ActionTable::new(HopfTag::UqG, preset(&name)?, Default::default())),
    }
}

/// `(A, C_q[U], embedding)` for factorization-type commands.
fn factorization_triple(c: &Common) -> Res<(ActionTable, ActionTable, Embedding)> {
    let name = preset_name(c)?;
    if name.eq_ignore_ascii_case("localized-qmat32") {
        return Ok((preset_action(&name)?, preset_action("cqU-A2")?, qmat32_embedding()?));
    }
    if name.to_ascii_lowercase().starts_with("cqu-") {
        let t = preset_action(&name)?;
        let emb = Embedding::identity(t.alg.clone())?;
        return Ok((t.clone(), t, emb));
    }
    Err(Failure::Input(format!("no C_q[U] embedding is known for '{}'", name)))
}

fn gstar_context(c: &Common) -> Res<GstarContext> {
    let name = preset_name(c)?;
    if name.eq_ignore_ascii_case("localized-qmat32") {
        Ok(GstarContext::localized_qmat32()?)
    } else {
        Ok(GstarContext::over_itself(&name)?)
    }
}

fn suite_gstar(c: &Common) -> Res<VerificationReport> {
    let t = load_table(c)?;
    if t.tag == HopfTag::UqGstar {
        return Ok(gstar::check_gstar_table(&t, c.max_deg));
    }
    Ok(gstar::check_gstar(&gstar_context(c)?, c.max_deg))
}

fn suite_factorization(c: &Common) -> Res<(VerificationReport, Value)> {
    let (t, t0, emb) = factorization_triple(c)?;
    let w = parse_word(c, &t0.alg)?;
    let (wit, rep) = verify_factorization(&t, &t0, &emb, &w, &FactorizationConfig::new(c.max_deg))?;
    Ok((rep, serde_json::to_value(&wit).expect("serializable")))
}

fn suite_roundtrip(c: &Common) -> Res<VerificationReport> {
    let (t, t0, emb) = factorization_triple(c)?;
    let w = parse_word(c, &t0.alg)?;
    let mut rep = check_roundtrip(&t, &t0, &emb, &w, c.max_deg, 100, c.seed)?;
    if preset_name(c)?.eq_ignore_ascii_case("localized-qmat32") {
        let ctx = GstarContext::localized_qmat32()?;
        let cr = gstar::build_crossed(&gstar::qmat32_plus_gstar()?)?;
        rep.extend(gstar::psi_check(&ctx, &cr, &w, c.max_deg.min(4))?);
    }
    Ok(rep)
}

fn suite_crossed(c: &Common) -> Res<VerificationReport> {
    let t = load_table(c)?;
    if t.tag != HopfTag::UqGstar {
        return Err(Failure::Input("crossed products need a U_q(g*) table (scalars-X, torus-X, qmat32-plus)".into()));
    }
    let mut rep = gstar::check_gstar_table(&t, c.max_deg);
    let cr = gstar::build_crossed(&t)?;
    rep.extend(gstar::certify_crossed(&cr, c.max_deg));
    rep.extend(gstar::eta_check(&cr, c.max_deg));
    Ok(rep)
}

fn suite_classical(c: &Common) -> Res<VerificationReport> {
    let name = preset_name(c)?;
    let d = c.max_deg;
    if name.eq_ignore_ascii_case("localized-qmat32") {
        let (big, cu, emb) = classical::localized_classical()?;
        let mut rep = classical::certify_classical(&big, d);
        rep.extend(classical::check_serre_hatf(&classical::HatF::new(big.t.clone(), &cu, &emb)?, d));
        let (_, f) = classical::classical_verify_factorization(&big.t, &cu.t, &emb, &parse_word(c, cu.alg())?, d)?;
        rep.extend(f);
        return Ok(rep);
    }
    if name.to_ascii_lowercase().starts_with("cqu-") {
        let cl = classical::classical_preset(&name)?;
        let mut rep = classical::certify_classical(&cl, d);
        rep.extend(classical::check_poisson(&cl, d.min(3))?);
        if cl.alg().rank() == 2 {
            rep.extend(classical::check_epsilon(&cl)?);
        }
        let emb = Embedding::identity(cl.t.alg.clone())?;
        rep.extend(classical::check_serre_hatf(&classical::HatF::new(cl.t.clone(), &cl, &emb)?, d));
        rep.extend(classical::check_torus_identity(&classical::scalars_classical(&cl.alg().cartan)?)?);
        return Ok(rep);
    }
    let t = load_table(c)?;
    Ok(classical::certify_classical(&classical::specialize_algebra(&t)?, d))
}

fn suite_braided(c: &Common) -> Res<VerificationReport> {
    let t = match &c.preset {
        Some(_) => load_table(c)?,
        None => preset_action("cqU-A1")?,
    };
    let mut rep = check_braided(t.clone(), t, c.max_deg)?;
    rep.extend(check_tensor_factorization(c.max_deg)?);
    Ok(rep)
}

fn suite_gauss(c: &Common) -> Res<VerificationReport> {
    let mut rep = classical::check_gauss_random(c.seed, 50);
    let m = classical::generic_matrix()?;
    let (l, r) = classical::gauss_factor_3x2(&m)?;
    let mut acc = qma_core::report::CheckAcc::new("gauss-symbolic", "L R = M for the generic 3 x 2 matrix", 0);
    acc.expect(classical::gauss_holds(&m, &l, &r), || ("generic matrix".into(), "L R = M".into(), "mismatch".into()));
    rep.push(acc.finish());
    Ok(rep)
}

fn cmd_verify(suites: &[String], c: &Common) -> Res<Outcome> {
    let suites: Vec<String> = suites.iter().map(|s| s.trim().to_ascii_lowercase()).filter(|s| !s.is_empty()).collect();
    if suites.is_empty() {
        return Err(Failure::Input(
            "no suite selected; use --suite with any of confluence, action, hopf, gstar, adapted, factorization, roundtrip, classical, crossed, braided, gauss".into(),
        ));
    }
    let mut rep = VerificationReport::new();
    for s in &suites {
        let part = match s.as_str() {
            "confluence" => {
                let t = load_table(c)?;
                let mut r = check_local_confluence(&t.alg, c.max_deg);
                r.extend(check_oracle(&t.alg, c.max_deg, c.seed));
                r
            }
            "action" => check_action_well_defined(&load_table(c)?, c.max_deg),
            "hopf" => check_hopf_relations(&load_table(c)?, c.max_deg),
            "gstar" => suite_gstar(c)?,
            "adapted" => {
                let t = load_table(c)?;
                let w = parse_word(c, &t.alg)?;
                check_adapted(&t, &w, c.max_deg, 20, c.seed)
            }
            "factorization" => suite_factorization(c)?.0,
            "roundtrip" => suite_roundtrip(c)?,
            "classical" => suite_classical(c)?,
            "crossed" => suite_crossed(c)?,
            "braided" => suite_braided(c)?,
            "gauss" => suite_gauss(c)?,
            other => return Err(Failure::Input(format!("unknown suite '{}'", other))),
        };
        rep.extend(part);
    }
    Ok(Outcome::report(rep, config(c, json!({"command": "verify", "suite": suites}))))
}

fn config(c: &Common, extra: Value) -> Value {
    let mut v = json!({
        "preset": c.preset,
        "algebra": c.algebra.as_ref().map(|p| p.display().to_string()),
        "action": c.action.as_ref().map(|p| p.display().to_string()),
        "word": c.word,
        "max_deg": c.max_deg,
        "seed": c.seed,
    });
    if let (Some(o), Value::Object(e)) = (v.as_object_mut(), extra) {
        o.extend(e);
    }
    v
}

fn cmd_nu(c: &Common) -> Res<Outcome> {
    let t = load_table(c)?;
    let p = &t.alg;
    let w = parse_word(c, p)?;
    if !p.cartan.is_reduced(&w) {
        let s: Vec<String> = w.iter().map(|i| (i + 1).to_string()).collect();
        return Err(Failure::Input(format!("word ({}) is not reduced", s.join(","))));
    }
    let mut rows = Vec::new();
    let mut text = String::new();
    for m in p.basis_up_to(c.max_deg) {
        let v = nu(&t, &w, &NcPoly::mono(m.clone()))?;
        text.push_str(&format!("{:<24} {:?}\n", p.fmt_mono(&m), v));
        rows.push(json!({"monomial": p.fmt_mono(&m), "degree": p.fdeg(&m), "nu": v}));
    }
    let json = json!({"config": config(c, json!({"command": "nu"})), "word": w.iter().map(|i| i + 1).collect::<Vec<_>>(), "rows": rows});
    Ok(Outcome { passed: true, text, json })
}

fn cmd_factorize(c: &Common) -> Res<Outcome> {
    let (rep, wit) = suite_factorization(c)?;
    let rep = rep.with_config(config(c, json!({"command": "factorize"})));
    let mut text = rep.summary();
    if let Some(rows) = wit.get("rows").and_then(|r| r.as_array()) {
        for r in rows {
            text.push_str(&format!(
                "level {}: dim A {}, domain {}, rank {}, surjective {}\n",
                r["degree"], r["dim_a"], r["dim_domain"], r["rank"], r["surjective"]
            ));
        }
    }
    Ok(Outcome { passed: rep.passed(), text, json: json!({"report": rep.to_json(), "witness": wit}) })
}

fn parse_matrix(path: &PathBuf) -> Res<Mat<Rational>> {
    let v = read_json(path)?;
    let bad = || Failure::Input(format!("{}: expected a 3 x 2 array of rational strings", path.display()));
    let rows = v.as_array().ok_or_else(bad)?;
    if rows.len() != 3 {
        return Err(bad());
    }
    rows.iter()
        .map(|r| {
            let r = r.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            r.iter()
                .map(|x| {
                    let s = match x {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(bad()),
                    };
                    s.trim().parse::<Rational>().map_err(|_| Failure::Input(format!("{}: '{}' is not a rational", path.display(), s)))
                })
                .collect()
        })
        .collect()
}

fn cmd_gauss(matrix: &Option<PathBuf>, c: &Common) -> Res<Outcome> {
    let show_q = |m: &Mat<Rational>| -> Value { m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect() };
    let show_s = |m: &Mat<Sym>| -> Value { m.iter().map(|r| r.iter().map(|x| x.alg.fmt_poly(&x.v)).collect::<Vec<_>>()).collect() };
    let (input, l, r, ok) = match matrix {
        Some(path) => {
            let m = parse_matrix(path)?;
            let (l, r) = classical::gauss_factor_3x2(&m)?;
            let ok = classical::gauss_holds(&m, &l, &r);
            (show_q(&m), show_q(&l), show_q(&r), ok)
        }
        None => {
            let m = classical::generic_matrix()?;
            let (l, r) = classical::gauss_factor_3x2(&m)?;
            let ok = classical::gauss_holds(&m, &l, &r);
            (show_s(&m), show_s(&l), show_s(&r), ok)
        }
    };
    let check = if ok { "exact_pass" } else { "fail" };
    let json = json!({"config": config(c, json!({"command": "gauss"})), "M": input, "L": l, "R": r, "product_check": check});
    let text = format!("L = {}\nR = {}\nproduct_check: {}\n", json["L"], json["R"], check);
    Ok(Outcome { passed: ok, text, json })
}

fn cmd_specialize(c: &Common) -> Res<Outcome> {
    let t = load_table(c)?;
    let cl: Classical = classical::specialize_algebra(&t)?;
    let rep = classical::certify_classical(&cl, c.max_deg).with_config(config(c, json!({"command": "specialize"})));
    let json = json!({"report": rep.to_json(), "presentation": cl.t.alg.to_json(), "action": cl.t.to_json()});
    Ok(Outcome { passed: rep.passed(), text: rep.summary(), json })
}

fn run(cmd: &Cmd) -> Res<(Outcome, Option<PathBuf>)> {
    Ok(match cmd {
        Cmd::Verify { suite, c } => (cmd_verify(suite, c)?, c.out.clone()),
        Cmd::Nu { c } => (cmd_nu(c)?, c.out.clone()),
        Cmd::Factorize { c } => (cmd_factorize(c)?, c.out.clone()),
        Cmd::Crossed { c } => (Outcome::report(suite_crossed(c)?, config(c, json!({"command": "crossed"}))), c.out.clone()),
        Cmd::Roundtrip { c } => (Outcome::report(suite_roundtrip(c)?, config(c, json!({"command": "roundtrip"}))), c.out.clone()),
        Cmd::Gauss { matrix, c } => (cmd_gauss(matrix, c)?, c.out.clone()),
        Cmd::Specialize { c } => (cmd_specialize(c)?, c.out.clone()),
        Cmd::SerreGstar { c } => (Outcome::report(suite_gstar(c)?, config(c, json!({"command": "serre-gstar"}))), c.out.clone()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.cmd) {
        Ok((o, out)) => {
            print!("{}", o.text);
            if let Some(path) = out {
                let body = serde_json::to_string_pretty(&o.json).expect("serializable") + "\n";
                if let Err(e) = fs::write(&path, body) {
                    eprintln!("error: {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            if o.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {}", m);
            ExitCode::from(1)
        }
    }
}
