//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use mall_bes::base::{derive_atomic, AtomicSequent, Budget, DeriveOutcome};
use mall_bes::completeness::{decide, translate, DecideOutcome};
use mall_bes::nd::{check_nd, normal_form_check, search_nd, CheckOptions, NdDerivation, NdRule, NdSearchConfig, NdSearchOutcome};
use mall_bes::oracle::{prove_sequent, Verdict};
use mall_bes::support::{
    check_lemma, counterexample_base, eval_clause, parse_judgment, EvalLimits, ExtensionFamily, FamilyParams, LemmaId,
    LemmaParams,
};
use mall_bes::syntax::{parse_sequent, sequents_up_to, Atom};

const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const NO_RAA_LIMIT: Duration = Duration::from_secs(30);
const NO_RAA_DEPTH: usize = 12;
const ENVELOPE_LIMIT: Duration = Duration::from_secs(600);
const ENVELOPE_SIZE: usize = 5;
const ENVELOPE_CTX: usize = 2;
const REQUIRED_AGREEMENT: f64 = 1.0;
const LEMMA_LIMIT: Duration = Duration::from_secs(300);
const LEMMA_TRIALS: usize = 200;
const LEMMA_SEED: u64 = 7;
const COUNTEREXAMPLE_LIMIT: Duration = Duration::from_secs(60);
const COUNTEREXAMPLE_FAMILIES: u64 = 50;
const DETERMINISM_RUNS: usize = 3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mall-bes"))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cli(dir: &Path, args: &[&str]) -> (i32, Vec<u8>) {
    let out = bin().args(args).current_dir(dir).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn timed(dir: &Path, args: &[&str]) -> (i32, Duration) {
    let t = Instant::now();
    let (code, _) = cli(dir, args);
    (code, t.elapsed())
}

fn worked_examples(dir: &Path) -> Outcome {
    let (prove_code, prove_time) = timed(dir, &["prove", "~~p |- p", "--out", "dn.nd"]);
    let raa = std::fs::read_to_string(dir.join("dn.nd"))
        .ok()
        .and_then(|t| NdDerivation::from_text(&t).ok())
        .map(|d| d.count_rule(NdRule::Raa))
        .unwrap_or(0);
    let (base_code, base_time) = timed(dir, &["base-derive", &fixture("umbrella.base"), "|- u"]);
    Outcome {
        pass: prove_code == 0 && raa >= 1 && base_code == 0 && prove_time < EXAMPLE_LIMIT && base_time < EXAMPLE_LIMIT,
        detail: format!(
            "prove exit {prove_code}, {raa} Raa node(s), {:.3}s; base-derive exit {base_code}, {:.3}s",
            prove_time.as_secs_f64(),
            base_time.as_secs_f64()
        ),
    }
}

fn raa_needed() -> Outcome {
    let t = Instant::now();
    let s = parse_sequent("~~p |- p").unwrap();
    let cfg = NdSearchConfig {
        max_depth: NO_RAA_DEPTH,
        allow_raa: false,
        ..NdSearchConfig::default()
    };
    let search = search_nd(&s, cfg);
    let exhausted = matches!(search, NdSearchOutcome::Exhausted { .. });
    let raa = match decide(&s, Budget::default()) {
        DecideOutcome::Provable { derivation, simulation } => translate(&derivation, &simulation.mapping)
            .map(|d| d.count_rule(NdRule::Raa))
            .unwrap_or(0),
        _ => 0,
    };
    let elapsed = t.elapsed();
    Outcome {
        pass: exhausted && raa >= 1 && elapsed < NO_RAA_LIMIT,
        detail: format!(
            "Raa-free search to depth {NO_RAA_DEPTH}: {}; decide uses {raa} Raa node(s); {:.2}s",
            match search {
                NdSearchOutcome::Exhausted { nodes, .. } => format!("exhausted after {nodes} nodes"),
                NdSearchOutcome::Found(_) => "FOUND a derivation".into(),
                NdSearchOutcome::BudgetExceeded { nodes } => format!("budget exceeded at {nodes} nodes"),
            },
            elapsed.as_secs_f64()
        ),
    }
}

struct Envelope {
    total: usize,
    agree: usize,
    provable: usize,
    translations_ok: usize,
    first_problem: Option<String>,
    elapsed: Duration,
}

fn envelope() -> Envelope {
    let t = Instant::now();
    let atoms = [Atom::new("p"), Atom::new("q")];
    let sequents = sequents_up_to(&atoms, ENVELOPE_SIZE, ENVELOPE_CTX);
    let mut e = Envelope {
        total: sequents.len(),
        agree: 0,
        provable: 0,
        translations_ok: 0,
        first_problem: None,
        elapsed: Duration::ZERO,
    };
    for s in &sequents {
        let oracle = prove_sequent(s);
        let outcome = decide(s, Budget::default());
        let agrees = matches!(
            (&oracle, &outcome),
            (Ok(Verdict::Provable), DecideOutcome::Provable { .. }) | (Ok(Verdict::Refuted), DecideOutcome::Refuted)
        );
        if agrees {
            e.agree += 1;
        } else if e.first_problem.is_none() {
            e.first_problem = Some(format!("disagreement on {s}"));
        }
        if let DecideOutcome::Provable { derivation, simulation } = &outcome {
            e.provable += 1;
            let ok = translate(derivation, &simulation.mapping)
                .map(|d| d.conclusion == *s && check_nd(&d, CheckOptions::default()).is_ok() && normal_form_check(&d))
                .unwrap_or(false);
            if ok {
                e.translations_ok += 1;
            } else if e.first_problem.is_none() {
                e.first_problem = Some(format!("bad translation for {s}"));
            }
        }
    }
    e.elapsed = t.elapsed();
    e
}

fn agreement(e: &Envelope) -> Outcome {
    let rate = e.agree as f64 / e.total as f64;
    Outcome {
        pass: rate >= REQUIRED_AGREEMENT && e.elapsed < ENVELOPE_LIMIT,
        detail: format!(
            "{}/{} sequents agree ({} provable), {:.1}s{}",
            e.agree,
            e.total,
            e.provable,
            e.elapsed.as_secs_f64(),
            e.first_problem.as_ref().map(|p| format!("; {p}")).unwrap_or_default()
        ),
    }
}

fn translations(e: &Envelope) -> Outcome {
    Outcome {
        pass: e.provable > 0 && e.translations_ok == e.provable,
        detail: format!("{}/{} translations pass check_nd and normal_form_check", e.translations_ok, e.provable),
    }
}

const ACCEPTANCE_LEMMAS: [LemmaId; 6] = [
    LemmaId::BottomSpecial,
    LemmaId::Monotonicity,
    LemmaId::ValidityViaS,
    LemmaId::DerivabilityImpliesSupport,
    LemmaId::FloatingAtom,
    LemmaId::NegatingFormula,
];

fn lemmas() -> Outcome {
    let t = Instant::now();
    let params = LemmaParams::default();
    let reports: Vec<_> = ACCEPTANCE_LEMMAS
        .iter()
        .map(|&id| check_lemma(id, LEMMA_TRIALS, LEMMA_SEED, &params))
        .collect();
    let failures = reports.iter().filter(|r| !r.passed()).count();
    let elapsed = t.elapsed();
    let mut detail: Vec<String> = reports
        .iter()
        .map(|r| format!("{} {}/{}", r.lemma, r.exercised, r.trials))
        .collect();
    detail.push(format!("{failures} counterexample(s), {:.1}s", elapsed.as_secs_f64()));
    for r in reports.iter().filter(|r| !r.passed()) {
        detail.push(r.to_string());
    }
    Outcome {
        pass: failures == 0 && elapsed < LEMMA_LIMIT,
        detail: detail.join("; "),
    }
}

fn counterexample() -> Outcome {
    let t = Instant::now();
    let p = Atom::new("p");
    let base = counterexample_base(&p);
    let underivable = matches!(
        derive_atomic(&base, &AtomicSequent::new([], p.clone()), Budget::default()),
        DeriveOutcome::NotFound { saturated: true }
    );
    let j = parse_judgment("||- p", base.clone()).unwrap();
    let mut holds = 0;
    let mut unsaturated = 0;
    for seed in 0..COUNTEREXAMPLE_FAMILIES {
        let fam = ExtensionFamily::generate(base.clone(), FamilyParams::default(), seed);
        if let Ok(e) = eval_clause(&j, &fam, EvalLimits::default()) {
            unsaturated += e.unsaturated;
            holds += usize::from(e.holds());
        }
    }
    let elapsed = t.elapsed();
    Outcome {
        pass: underivable && holds as u64 == COUNTEREXAMPLE_FAMILIES && elapsed < COUNTEREXAMPLE_LIMIT,
        detail: format!(
            "|- p {} at full budget; ||- p holds on {holds}/{COUNTEREXAMPLE_FAMILIES} families ({unsaturated} unsaturated queries); {:.1}s",
            if underivable { "underivable (saturated)" } else { "NOT refuted" },
            elapsed.as_secs_f64()
        ),
    }
}

fn determinism(dir: &Path) -> Outcome {
    let drop = fixture("drop.base");
    let umbrella = fixture("umbrella.base");
    let commands: Vec<Vec<&str>> = vec![
        vec!["prove", "~~p |- p", "--out", "det.nd"],
        vec!["prove", "p | q |- q | p", "--out", "det2.nd"],
        vec!["oracle", "p |- p * p"],
        vec!["base-derive", &umbrella, "|- u"],
        vec!["support", &drop, "||- p", "--seed", "11"],
        vec!["support", &umbrella, "l ||- u", "--seed", "4"],
        vec!["lemmas", "--trials", "25", "--seed", "9"],
    ];
    let mut mismatches = Vec::new();
    for args in &commands {
        let runs: Vec<(i32, Vec<u8>, Vec<u8>)> = (0..DETERMINISM_RUNS)
            .map(|_| {
                let (code, out) = cli(dir, args);
                let file = args
                    .iter()
                    .position(|a| *a == "--out")
                    .map(|i| std::fs::read(dir.join(args[i + 1])).unwrap_or_default())
                    .unwrap_or_default();
                (code, out, file)
            })
            .collect();
        if runs.windows(2).any(|w| w[0] != w[1]) {
            mismatches.push(args.join(" "));
        }
    }
    let params = LemmaParams::default();
    let a = check_lemma(LemmaId::Monotonicity, 30, 1, &params).to_string();
    let b = check_lemma(LemmaId::Monotonicity, 30, 1, &params).to_string();
    if a != b {
        mismatches.push("check_lemma report".into());
    }
    Outcome {
        pass: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            format!("{} commands x {DETERMINISM_RUNS} runs byte-identical, library report stable", commands.len())
        } else {
            format!("differing output: {}", mismatches.join(", "))
        },
    }
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let env = envelope();
    let results = [
        ("worked examples reproduce", worked_examples(dir.path())),
        ("Raa is necessary for ~~p |- p", raa_needed()),
        ("decide agrees with the oracle on the envelope", agreement(&env)),
        ("translated derivations check and are normal", translations(&env)),
        ("lemma harness finds no counterexamples", lemmas()),
        ("support without derivability", counterexample()),
        ("reports are byte-identical across runs", determinism(dir.path())),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("{} criterion {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/{} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
