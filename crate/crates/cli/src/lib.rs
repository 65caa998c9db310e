//! Command-line front end. Every command writes a line-oriented report and
//! returns an exit code: 0 success/provable/holds, 1 refuted/violation,
//! 2 inconclusive within budget, 64 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use mall_bes::base::{derive_atomic, parse_atomic_sequent, parse_base, verify_atomic, AtomicDerivation, Base, Budget, DeriveOutcome};
use mall_bes::completeness::{build_simulation_base, decide, translate, DecideOutcome};
use mall_bes::nd::{check_nd, normal_form_check, CheckOptions, NdDerivation, NdRule};
use mall_bes::oracle::{prove_sequent, Verdict};
use mall_bes::support::{
    check_lemma, eval_clause, parse_judgment, verify_witness, EvalLimits, ExtensionFamily, FamilyParams, LemmaId,
    LemmaParams, SupportVerdict,
};
use mall_bes::syntax::{parse_formula, parse_sequent, Sequent};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "mall-bes", version, about = "MALL natural deduction, atomic bases and base-extension support")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Shared {
    /// Maximum subgoal nesting for derivation searches.
    #[arg(long, global = true, default_value_t = 24)]
    budget_depth: usize,
    /// Maximum goal expansions for derivation searches.
    #[arg(long, global = true, default_value_t = 200_000)]
    budget_nodes: usize,
    /// Seed for generated families and lemma trials.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of bases in a generated extension family.
    #[arg(long, global = true, default_value_t = 4)]
    fam_size: usize,
    /// Largest quantified atomic multiset [default: 3, or 2 for `lemmas`].
    #[arg(long, global = true)]
    ctx_bound: Option<usize>,
    /// Most rules added per extension step in a generated family.
    #[arg(long, global = true, default_value_t = 2)]
    ext_rules: usize,
}

impl Shared {
    fn budget(&self) -> Budget {
        Budget {
            depth: self.budget_depth,
            nodes: self.budget_nodes,
        }
    }

    fn family(&self) -> FamilyParams {
        FamilyParams {
            size: self.fam_size,
            ext_rules: self.ext_rules,
            ..FamilyParams::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula or sequent and print its canonical form.
    Parse { text: String },
    /// Check an ND derivation file.
    CheckNd {
        file: PathBuf,
        /// Reject Raa nodes.
        #[arg(long)]
        no_raa: bool,
        /// Reject Subs nodes.
        #[arg(long)]
        no_subs: bool,
    },
    /// Decide a sequent through its simulation base and write the ND derivation.
    Prove {
        sequent: String,
        /// Where to write the ND derivation.
        #[arg(long, default_value = "derivation.nd")]
        out: PathBuf,
        /// Also write the atomic derivation to this file.
        #[arg(long)]
        atomic_out: Option<PathBuf>,
    },
    /// Decide a sequent with the cut-free sequent-calculus oracle.
    Oracle { sequent: String },
    /// Evaluate a support judgment over a family generated from a base.
    Support { base: PathBuf, judgment: String },
    /// Search for a derivation of an atomic sequent in a base.
    BaseDerive { base: PathBuf, sequent: String },
    /// Translate an atomic derivation in the simulation base of a sequent into ND.
    Translate {
        derivation: PathBuf,
        sequent: String,
        #[arg(long, default_value = "derivation.nd")]
        out: PathBuf,
    },
    /// Run the seeded lemma harness.
    Lemmas {
        /// Lemma ids; all lemmas when omitted.
        names: Vec<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

type Report = Vec<String>;

/// Runs one command line, writing the report to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mut report = Report::new();
    let code = match execute(&cli, &mut report) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            report.push("VERDICT: error".into());
            EXIT_USAGE
        }
    };
    for line in report {
        let _ = writeln!(out, "{line}");
    }
    code
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn load_base(path: &Path) -> Result<Base, CliError> {
    parse_base(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn sequent(text: &str) -> Result<Sequent, CliError> {
    parse_sequent(text).map_err(input)
}

fn prefixed(report: &mut Report, prefix: &str, text: &str) {
    report.extend(text.lines().map(|l| format!("{prefix}: {l}")));
}

fn execute(cli: &Cli, r: &mut Report) -> Result<i32, CliError> {
    let shared = &cli.shared;
    match &cli.command {
        Command::Parse { text } => {
            let shown = if text.contains("|-") {
                sequent(text)?.to_string()
            } else {
                parse_formula(text).map_err(input)?.to_string()
            };
            r.push(format!("PARSED: {shown}"));
            r.push("VERDICT: ok".into());
            Ok(EXIT_OK)
        }
        Command::CheckNd { file, no_raa, no_subs } => {
            let d = NdDerivation::from_text(&read(file)?).map_err(|e| input(format!("{}: {e}", file.display())))?;
            let opts = CheckOptions {
                allow_raa: !no_raa,
                allow_subs: !no_subs,
            };
            r.push(format!("CONCLUSION: {}", d.conclusion));
            match check_nd(&d, opts) {
                Ok(()) => {
                    r.push(format!("RAA-NODES: {}", d.count_rule(NdRule::Raa)));
                    r.push(format!("NORMAL-FORM: {}", if normal_form_check(&d) { "yes" } else { "no" }));
                    r.push("VERDICT: valid".into());
                    Ok(EXIT_OK)
                }
                Err(v) => {
                    r.push("VERDICT: violation".into());
                    r.push(format!("WITNESS: {v}"));
                    Ok(EXIT_REFUTED)
                }
            }
        }
        Command::Prove { sequent: text, out, atomic_out } => {
            let s = sequent(text)?;
            match decide(&s, shared.budget()) {
                DecideOutcome::Provable { derivation, simulation } => {
                    let nd = translate(&derivation, &simulation.mapping).map_err(input)?;
                    // Guard the file contract: anything written must re-check.
                    check_nd(&nd, CheckOptions::default()).map_err(input)?;
                    write_file(out, &nd.to_text())?;
                    if let Some(path) = atomic_out {
                        write_file(path, &derivation.to_text())?;
                    }
                    r.push("VERDICT: provable".into());
                    prefixed(r, "ATOMIC-DERIVATION", &derivation.to_text());
                    r.push(format!("RAA-NODES: {}", nd.count_rule(NdRule::Raa)));
                    r.push(format!("DERIVATION-FILE: {}", out.display()));
                    Ok(EXIT_OK)
                }
                DecideOutcome::Refuted => {
                    r.push("VERDICT: refuted".into());
                    Ok(EXIT_REFUTED)
                }
                DecideOutcome::NotFoundWithinBudget => {
                    r.push("VERDICT: inconclusive".into());
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::Oracle { sequent: text } => {
            let s = sequent(text)?;
            match prove_sequent(&s) {
                Ok(Verdict::Provable) => {
                    r.push("VERDICT: provable".into());
                    Ok(EXIT_OK)
                }
                Ok(Verdict::Refuted) => {
                    r.push("VERDICT: refuted".into());
                    Ok(EXIT_REFUTED)
                }
                Err(e) => {
                    r.push("VERDICT: inconclusive".into());
                    r.push(format!("REASON: {e}"));
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::Support { base, judgment } => {
            let b = load_base(base)?;
            let j = parse_judgment(judgment, b.clone()).map_err(input)?;
            let fam = ExtensionFamily::generate(b, shared.family(), shared.seed);
            let limits = EvalLimits {
                ctx_bound: shared.ctx_bound.unwrap_or(EvalLimits::default().ctx_bound),
                derive: shared.budget(),
                ..EvalLimits::default()
            };
            let e = eval_clause(&j, &fam, limits).map_err(input)?;
            r.push(format!("FAMILY: {} members, seed {}", fam.len(), shared.seed));
            r.push(format!("UNSATURATED: {}", e.unsaturated));
            match e.verdict {
                SupportVerdict::HoldsRelativeToFamily => {
                    r.push("VERDICT: holds-relative-to-family".into());
                    Ok(EXIT_OK)
                }
                SupportVerdict::Refuted(w) => {
                    let verified = verify_witness(&fam, &w, limits.derive);
                    r.push("VERDICT: refuted".into());
                    prefixed(r, "WITNESS", &w.to_string());
                    for i in std::iter::once(w.member).chain(w.facts().iter().map(|f| f.member)) {
                        let line = format!("MEMBER {i}: {}", fam.members[i].to_text().trim_end().replace('\n', "  "));
                        if !r.contains(&line) {
                            r.push(line);
                        }
                    }
                    r.push(format!("WITNESS-VERIFIED: {}", if verified { "yes" } else { "no" }));
                    Ok(if verified { EXIT_REFUTED } else { EXIT_INCONCLUSIVE })
                }
            }
        }
        Command::BaseDerive { base, sequent: text } => {
            let b = load_base(base)?;
            let goal = parse_atomic_sequent(text).map_err(input)?;
            match derive_atomic(&b, &goal, shared.budget()) {
                DeriveOutcome::Found(d) => {
                    r.push("VERDICT: derivable".into());
                    prefixed(r, "DERIVATION", &d.to_text());
                    Ok(EXIT_OK)
                }
                DeriveOutcome::NotFound { saturated: true } => {
                    r.push("VERDICT: not-derivable".into());
                    Ok(EXIT_REFUTED)
                }
                DeriveOutcome::NotFound { saturated: false } => {
                    r.push("VERDICT: inconclusive".into());
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::Translate { derivation, sequent: text, out } => {
            let s = sequent(text)?;
            let d = AtomicDerivation::from_text(&read(derivation)?)
                .map_err(|e| input(format!("{}: {e}", derivation.display())))?;
            let formulas: Vec<_> = s.context.iter().chain([&s.conclusion]).cloned().collect();
            let sim = build_simulation_base(&formulas);
            if let Err(v) = verify_atomic(&sim.base, &d) {
                r.push("VERDICT: violation".into());
                r.push(format!("WITNESS: {v}"));
                return Ok(EXIT_REFUTED);
            }
            let nd = match translate(&d, &sim.mapping) {
                Ok(nd) => nd,
                Err(e) => {
                    r.push("VERDICT: violation".into());
                    r.push(format!("WITNESS: {e}"));
                    return Ok(EXIT_REFUTED);
                }
            };
            if let Err(v) = check_nd(&nd, CheckOptions::default()) {
                r.push("VERDICT: violation".into());
                r.push(format!("WITNESS: {v}"));
                return Ok(EXIT_REFUTED);
            }
            write_file(out, &nd.to_text())?;
            r.push(format!("CONCLUSION: {}", nd.conclusion));
            r.push(format!("NORMAL-FORM: {}", if normal_form_check(&nd) { "yes" } else { "no" }));
            r.push("VERDICT: translated".into());
            r.push(format!("DERIVATION-FILE: {}", out.display()));
            Ok(EXIT_OK)
        }
        Command::Lemmas { names, trials } => {
            let ids: Vec<LemmaId> = if names.is_empty() {
                LemmaId::ALL.to_vec()
            } else {
                names
                    .iter()
                    .map(|n| LemmaId::from_id(n).ok_or_else(|| input(format!("unknown lemma '{n}'"))))
                    .collect::<Result<_, _>>()?
            };
            let defaults = LemmaParams::default();
            let params = LemmaParams {
                family: shared.family(),
                limits: EvalLimits {
                    ctx_bound: shared.ctx_bound.unwrap_or(defaults.limits.ctx_bound),
                    ..defaults.limits
                },
                ..defaults
            };
            let mut failed = false;
            for id in ids {
                let rep = check_lemma(id, *trials, shared.seed, &params);
                failed |= !rep.passed();
                let mut lines = rep.to_string();
                lines.truncate(lines.trim_end().len());
                let mut it = lines.lines();
                if let Some(first) = it.next() {
                    r.push(format!("LEMMA: {first}"));
                }
                for l in it {
                    r.push(format!("WITNESS: {l}"));
                }
            }
            r.push(format!("VERDICT: {}", if failed { "counterexample" } else { "pass" }));
            Ok(if failed { EXIT_REFUTED } else { EXIT_OK })
        }
    }
}
