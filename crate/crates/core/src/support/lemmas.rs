//! Seeded randomized checks of the support lemmas, relative to generated
//! extension families.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{random, EvalLimits, Evaluator, ExtensionFamily, FamilyParams};
use crate::base::{structural_base, AtomicSequent, Base};
use crate::syntax::{negate, Atom, AtomicMultiset, Formula, FormulaMultiset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LemmaId {
    DerivabilityImpliesSupport,
    BottomSpecial,
    Monotonicity,
    ValidityViaS,
    FloatingAtom,
    InterchangeableSets,
    PartialInf,
    NegatingFormula,
    GenericTensor,
    GenericImplication,
    GenericOne,
    GenericPlus,
    GenericZero,
    SemanticRaa,
}

impl LemmaId {
    pub const ALL: [LemmaId; 14] = [
        LemmaId::DerivabilityImpliesSupport,
        LemmaId::BottomSpecial,
        LemmaId::Monotonicity,
        LemmaId::ValidityViaS,
        LemmaId::FloatingAtom,
        LemmaId::InterchangeableSets,
        LemmaId::PartialInf,
        LemmaId::NegatingFormula,
        LemmaId::GenericTensor,
        LemmaId::GenericImplication,
        LemmaId::GenericOne,
        LemmaId::GenericPlus,
        LemmaId::GenericZero,
        LemmaId::SemanticRaa,
    ];

    pub fn id(self) -> &'static str {
        match self {
            LemmaId::DerivabilityImpliesSupport => "derivability-implies-support",
            LemmaId::BottomSpecial => "bottom-special",
            LemmaId::Monotonicity => "monotonicity",
            LemmaId::ValidityViaS => "validity-via-S",
            LemmaId::FloatingAtom => "floating-atom",
            LemmaId::InterchangeableSets => "interchangeable-sets",
            LemmaId::PartialInf => "partial-inf",
            LemmaId::NegatingFormula => "negating-formula",
            LemmaId::GenericTensor => "generic-tensor",
            LemmaId::GenericImplication => "generic-implication",
            LemmaId::GenericOne => "generic-one",
            LemmaId::GenericPlus => "generic-plus",
            LemmaId::GenericZero => "generic-zero",
            LemmaId::SemanticRaa => "semantic-raa",
        }
    }

    pub fn from_id(s: &str) -> Option<LemmaId> {
        LemmaId::ALL.into_iter().find(|l| l.id() == s)
    }

    pub fn statement(self) -> &'static str {
        match self {
            LemmaId::DerivabilityImpliesSupport => "G |-_B p implies ||-^G_B p",
            LemmaId::BottomSpecial => "||-^G_B bot iff G |-_B bot",
            LemmaId::Monotonicity => "G ||-^D_B phi and C extends B imply G ||-^D_C phi",
            LemmaId::ValidityViaS => "G ||- phi in every member iff G ||-_S phi",
            LemmaId::FloatingAtom => "G_At ||-^D_B bot iff ||-^{G,D}_B bot",
            LemmaId::InterchangeableSets => "G_At ||-_B phi iff ||-^G_B phi",
            LemmaId::PartialInf => "G, phi ||-^D_B psi and ||-^T_C a imply phi ||-^{D,T}_C psi",
            LemmaId::NegatingFormula => "phi ||-^G_B bot iff ||-^G_B ~phi",
            LemmaId::GenericTensor => "||-^G phi*psi and phi, psi ||-^D chi imply ||-^{G,D} chi",
            LemmaId::GenericImplication => "||-^G phi-o psi, ||-^D phi, psi ||-^T chi imply ||-^{G,D,T} chi",
            LemmaId::GenericOne => "||-^G 1 and ||-^D chi imply ||-^{G,D} chi",
            LemmaId::GenericPlus => "||-^G phi+psi, phi ||-^D chi, psi ||-^D chi imply ||-^{G,D} chi",
            LemmaId::GenericZero => "||-^G 0 implies ||-^{G,D} chi",
            LemmaId::SemanticRaa => "G, ~phi ||-_B bot implies G ||-_B phi",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaParams {
    pub family: FamilyParams,
    pub limits: EvalLimits,
    /// Most rules in a generated root base.
    pub max_rules: usize,
    /// Largest generated formula.
    pub formula_size: usize,
    /// Largest generated atomic multiset.
    pub multiset_size: usize,
}

impl Default for LemmaParams {
    fn default() -> Self {
        LemmaParams {
            family: FamilyParams::default(),
            limits: EvalLimits {
                ctx_bound: 2,
                ..EvalLimits::default()
            },
            max_rules: 4,
            formula_size: 3,
            multiset_size: 2,
        }
    }
}

/// A failing instance with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub members: Vec<String>,
    pub instance: String,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trial {}: {}", self.trial, self.instance)?;
        writeln!(f, "  {}", self.detail)?;
        for (i, m) in self.members.iter().enumerate() {
            let rules = if m.is_empty() { "(no rules)".to_string() } else { m.trim_end().replace('\n', "  ") };
            writeln!(f, "  member {i}: {rules}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub trials: usize,
    pub seed: u64,
    /// Trials whose hypotheses held, so the conclusion was actually tested.
    pub exercised: usize,
    /// Derivability queries that ran out of budget.
    pub unsaturated: usize,
    pub counterexample: Option<Counterexample>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(
                f,
                "{}: pass ({} trials, {} exercised, {} unsaturated queries, seed {})",
                self.lemma, self.trials, self.exercised, self.unsaturated, self.seed
            ),
            Some(c) => write!(f, "{}: counterexample (seed {})\n{c}", self.lemma, self.seed),
        }
    }
}

struct Trial {
    exercised: bool,
    unsaturated: usize,
    failure: Option<Counterexample>,
}

pub fn check_lemma(lemma: LemmaId, trials: usize, seed: u64, params: &LemmaParams) -> LemmaReport {
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(lemma, t, seed, params))
        .collect();
    LemmaReport {
        lemma,
        trials,
        seed,
        exercised: results.iter().filter(|r| r.exercised).count(),
        unsaturated: results.iter().map(|r| r.unsaturated).sum(),
        counterexample: results.into_iter().find_map(|r| r.failure),
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn run_trial(lemma: LemmaId, trial: usize, seed: u64, params: &LemmaParams) -> Trial {
    let mut rng = trial_rng(seed, trial);
    let pool = params.family.pool.clone();
    let root = match lemma {
        LemmaId::ValidityViaS => structural_base(),
        _ => random::base(&mut rng, &pool, params.max_rules),
    };
    let fam = ExtensionFamily::generate(root, params.family.clone(), rng.gen());
    let mut ev = Evaluator::new(&fam, params.limits, pool.iter().cloned().collect::<BTreeSet<_>>());
    let mut cx = Ctx {
        rng,
        pool,
        params,
    };
    let outcome = instance(lemma, &mut cx, &mut ev);
    Trial {
        exercised: outcome.exercised,
        unsaturated: ev.unsaturated,
        failure: outcome.failure.map(|(instance, detail)| Counterexample {
            trial,
            members: fam.members.iter().map(Base::to_text).collect(),
            instance,
            detail,
        }),
    }
}

struct Ctx<'p> {
    rng: ChaCha8Rng,
    pool: Vec<Atom>,
    params: &'p LemmaParams,
}

impl Ctx<'_> {
    fn formula(&mut self) -> Formula {
        random::formula(&mut self.rng, &self.pool, self.params.formula_size)
    }

    fn multiset(&mut self, max: usize) -> AtomicMultiset {
        random::multiset(&mut self.rng, &self.pool, max)
    }

    fn nonempty_multiset(&mut self, max: usize) -> AtomicMultiset {
        loop {
            let m = self.multiset(max);
            if !m.is_empty() {
                return m;
            }
        }
    }

    fn formulas(&mut self, max: usize) -> FormulaMultiset {
        let n = self.rng.gen_range(0..=max);
        (0..n).map(|_| self.formula()).collect()
    }

    /// A random quantified multiset satisfying `ok`, if any.
    fn pick(&mut self, ev: &mut Evaluator, mut ok: impl FnMut(&mut Evaluator, &AtomicMultiset) -> bool) -> Option<AtomicMultiset> {
        let deltas = ev.deltas().to_vec();
        let good: Vec<AtomicMultiset> = deltas.into_iter().filter(|d| ok(ev, d)).collect();
        good.choose(&mut self.rng).cloned()
    }
}

#[derive(Default)]
struct Outcome {
    exercised: bool,
    failure: Option<(String, String)>,
}

impl Outcome {
    fn vacuous() -> Self {
        Outcome::default()
    }

    fn check(ok: bool, instance: String, detail: &str) -> Self {
        Outcome {
            exercised: true,
            failure: (!ok).then(|| (instance, detail.to_string())),
        }
    }
}

fn judgment(ants: &FormulaMultiset, sup: &AtomicMultiset, phi: &Formula) -> String {
    super::render(ants, sup, phi)
}

fn atoms_as_formulas(m: &AtomicMultiset) -> FormulaMultiset {
    m.map(|a| Formula::Atom(a.clone()))
}

fn instance(lemma: LemmaId, cx: &mut Ctx, ev: &mut Evaluator) -> Outcome {
    let none = FormulaMultiset::new();
    let empty = AtomicMultiset::new();
    let bot = Formula::bottom();
    let size = cx.params.multiset_size;
    match lemma {
        LemmaId::DerivabilityImpliesSupport | LemmaId::BottomSpecial => {
            let rules: Vec<AtomicSequent> = ev.family().root().rules.iter().map(|r| r.conclusion.clone()).collect();
            let reuse = !rules.is_empty() && cx.rng.gen_bool(0.5);
            let mut s = if reuse {
                rules.choose(&mut cx.rng).expect("nonempty").clone()
            } else {
                random::sequent(&mut cx.rng, &cx.pool, size)
            };
            if lemma == LemmaId::BottomSpecial {
                s.conclusion = Atom::bottom();
            }
            let phi = Formula::Atom(s.conclusion.clone());
            let inst = judgment(&none, &s.context, &phi);
            match (lemma, ev.derivable(0, &s)) {
                (_, None) => Outcome::vacuous(),
                (LemmaId::DerivabilityImpliesSupport, Some(false)) => Outcome::vacuous(),
                (LemmaId::DerivabilityImpliesSupport, Some(true)) => {
                    Outcome::check(ev.holds(0, &none, &s.context, &phi), inst, &format!("{s} is derivable but not supported"))
                }
                (_, Some(d)) => {
                    let h = ev.holds(0, &none, &s.context, &phi);
                    let detail = format!("support {h}, derivability of {s} {d}");
                    Outcome::check(h == d, inst, &detail)
                }
            }
        }
        LemmaId::Monotonicity => {
            let ants = cx.formulas(1);
            let sup = cx.multiset(1);
            let phi = cx.formula();
            let inst = judgment(&ants, &sup, &phi);
            let mut out = Outcome::vacuous();
            for b in 0..ev.family().len() {
                if !ev.holds(b, &ants, &sup, &phi) {
                    continue;
                }
                for c in ev.family().extensions_of(b).to_vec().into_iter().skip(1) {
                    out.exercised = true;
                    if !ev.holds(c, &ants, &sup, &phi) {
                        out.failure = Some((inst, format!("holds at member {b}, fails at its extension {c}")));
                        return out;
                    }
                }
            }
            out
        }
        LemmaId::ValidityViaS => {
            let ants = cx.formulas(1);
            let phi = cx.formula();
            let at_root = ev.holds(0, &ants, &empty, &phi);
            let everywhere = (0..ev.family().len()).all(|c| ev.holds(c, &ants, &empty, &phi));
            let detail = format!("at the structural base {at_root}, at every member {everywhere}");
            Outcome::check(at_root == everywhere, judgment(&ants, &empty, &phi), &detail)
        }
        LemmaId::FloatingAtom => {
            let gamma = cx.nonempty_multiset(size);
            let delta = cx.multiset(1);
            let lhs = ev.holds(0, &atoms_as_formulas(&gamma), &delta, &bot);
            let rhs = ev.holds(0, &none, &gamma.union(&delta), &bot);
            let inst = format!("{} vs {}", judgment(&atoms_as_formulas(&gamma), &delta, &bot), judgment(&none, &gamma.union(&delta), &bot));
            Outcome::check(lhs == rhs, inst, &format!("left {lhs}, right {rhs}"))
        }
        LemmaId::InterchangeableSets => {
            let gamma = cx.nonempty_multiset(size);
            let phi = cx.formula();
            let lhs = ev.holds(0, &atoms_as_formulas(&gamma), &empty, &phi);
            let rhs = ev.holds(0, &none, &gamma, &phi);
            let inst = format!("{} vs {}", judgment(&atoms_as_formulas(&gamma), &empty, &phi), judgment(&none, &gamma, &phi));
            Outcome::check(lhs == rhs, inst, &format!("left {lhs}, right {rhs}"))
        }
        LemmaId::PartialInf => {
            let alpha = cx.formula();
            let phi = cx.formula();
            let psi = cx.formula();
            let delta = cx.multiset(1);
            let both: FormulaMultiset = [alpha.clone(), phi.clone()].into_iter().collect();
            if !ev.holds(0, &both, &delta, &psi) {
                return Outcome::vacuous();
            }
            let inst = format!("{} with {alpha} discharged", judgment(&both, &delta, &psi));
            let only_phi = FormulaMultiset::singleton(phi);
            let mut out = Outcome::vacuous();
            let deltas = ev.deltas().to_vec();
            for c in 0..ev.family().len() {
                for theta in &deltas {
                    if !ev.holds(c, &none, theta, &alpha) {
                        continue;
                    }
                    out.exercised = true;
                    if !ev.holds(c, &only_phi, &delta.union(theta), &psi) {
                        out.failure = Some((inst, format!("member {c}, theta [{theta}]")));
                        return out;
                    }
                }
            }
            out
        }
        LemmaId::NegatingFormula => {
            let phi = cx.formula();
            let gamma = cx.multiset(size);
            let lhs = ev.holds(0, &FormulaMultiset::singleton(phi.clone()), &gamma, &bot);
            let rhs = ev.holds(0, &none, &gamma, &negate(&phi));
            let inst = format!("{} vs {}", judgment(&FormulaMultiset::singleton(phi.clone()), &gamma, &bot), judgment(&none, &gamma, &negate(&phi)));
            Outcome::check(lhs == rhs, inst, &format!("left {lhs}, right {rhs}"))
        }
        LemmaId::GenericTensor => {
            let (phi, psi, chi) = (cx.formula(), cx.formula(), cx.formula());
            let t = Formula::tensor(phi.clone(), psi.clone());
            let ants: FormulaMultiset = [phi, psi].into_iter().collect();
            let Some(gamma) = cx.pick(ev, |ev, d| ev.holds(0, &none, d, &t)) else {
                return Outcome::vacuous();
            };
            let Some(delta) = cx.pick(ev, |ev, d| ev.holds(0, &ants, d, &chi)) else {
                return Outcome::vacuous();
            };
            let goal = gamma.union(&delta);
            let inst = format!("{} and {}", judgment(&none, &gamma, &t), judgment(&ants, &delta, &chi));
            Outcome::check(ev.holds(0, &none, &goal, &chi), inst, &format!("{} fails", judgment(&none, &goal, &chi)))
        }
        LemmaId::GenericImplication => {
            let (phi, psi, chi) = (cx.formula(), cx.formula(), cx.formula());
            let l = Formula::lolli(phi.clone(), psi.clone());
            let psi_ant = FormulaMultiset::singleton(psi);
            let Some(gamma) = cx.pick(ev, |ev, d| ev.holds(0, &none, d, &l)) else {
                return Outcome::vacuous();
            };
            let Some(delta) = cx.pick(ev, |ev, d| ev.holds(0, &none, d, &phi)) else {
                return Outcome::vacuous();
            };
            let Some(theta) = cx.pick(ev, |ev, d| ev.holds(0, &psi_ant, d, &chi)) else {
                return Outcome::vacuous();
            };
            let goal = gamma.union(&delta).union(&theta);
            let inst = format!(
                "{}, {} and {}",
                judgment(&none, &gamma, &l),
                judgment(&none, &delta, &phi),
                judgment(&psi_ant, &theta, &chi)
            );
            Outcome::check(ev.holds(0, &none, &goal, &chi), inst, &format!("{} fails", judgment(&none, &goal, &chi)))
        }
        LemmaId::GenericOne => {
            let chi = cx.formula();
            let Some(gamma) = cx.pick(ev, |ev, d| ev.holds(0, &none, d, &Formula::One)) else {
                return Outcome::vacuous();
            };
            let Some(delta) = cx.pick(ev, |ev, d| ev.holds(0, &none, d, &chi)) else {
                return Outcome::vacuous();
            };
            let goal = gamma.union(&delta);
            let inst = format!("{} and {}", judgment(&none, &gamma, &Formula::One), judgment(&none, &delta, &chi));
            Outcome::check(ev.holds(0, &none, &goal, &chi), inst, &format!("{} fails", judgment(&none, &goal, &chi)))
        }
        LemmaId::GenericPlus => {
            let (phi, psi, chi) = (cx.formula(), cx.formula(), cx.formula());
            let p = Formula::plus(phi.clone(), psi.clone());
            let (fa, fb) = (FormulaMultiset::singleton(phi), FormulaMultiset::singleton(psi));
            let Some(gamma) = cx.pick(ev, |ev, d| ev.holds(0, &none, d, &p)) else {
                return Outcome::vacuous();
            };
            let Some(delta) = cx.pick(ev, |ev, d| ev.holds(0, &fa, d, &chi) && ev.holds(0, &fb, d, &chi)) else {
                return Outcome::vacuous();
            };
            let goal = gamma.union(&delta);
            let inst = format!(
                "{}, {} and {}",
                judgment(&none, &gamma, &p),
                judgment(&fa, &delta, &chi),
                judgment(&fb, &delta, &chi)
            );
            Outcome::check(ev.holds(0, &none, &goal, &chi), inst, &format!("{} fails", judgment(&none, &goal, &chi)))
        }
        LemmaId::GenericZero => {
            let chi = cx.formula();
            let Some(gamma) = cx.pick(ev, |ev, d| ev.holds(0, &none, d, &Formula::Zero)) else {
                return Outcome::vacuous();
            };
            let delta = cx.multiset(1);
            let goal = gamma.union(&delta);
            let inst = judgment(&none, &gamma, &Formula::Zero);
            Outcome::check(ev.holds(0, &none, &goal, &chi), inst, &format!("{} fails", judgment(&none, &goal, &chi)))
        }
        LemmaId::SemanticRaa => {
            let ants = cx.formulas(1);
            let phi = cx.formula();
            let with_neg = ants.with(negate(&phi));
            if !ev.holds(0, &with_neg, &empty, &bot) {
                return Outcome::vacuous();
            }
            let inst = judgment(&with_neg, &empty, &bot);
            Outcome::check(ev.holds(0, &ants, &empty, &phi), inst, &format!("{} fails", judgment(&ants, &empty, &phi)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for l in LemmaId::ALL {
            assert_eq!(LemmaId::from_id(l.id()), Some(l));
        }
        assert_eq!(LemmaId::from_id("nope"), None);
    }

    #[test]
    fn reports_are_reproducible() {
        let p = LemmaParams::default();
        let a = check_lemma(LemmaId::BottomSpecial, 12, 3, &p);
        let b = check_lemma(LemmaId::BottomSpecial, 12, 3, &p);
        assert_eq!(a, b);
        assert!(a.passed(), "{a}");
        assert!(a.exercised > 0);
    }

    #[test]
    fn trial_streams_differ() {
        let x: u64 = trial_rng(1, 0).gen();
        let y: u64 = trial_rng(1, 1).gen();
        assert_ne!(x, y);
    }
}
