//! Base-extension support, evaluated relative to a finite family of
//! extensions with bounded atomic multisets.
//!
//! Every "for all C ⊇ B" ranges over the family members extending the
//! current one and every "for all Δ" over multisets of at most `ctx_bound`
//! atoms from the active vocabulary. A refutation is therefore genuine
//! whenever its derivability facts check; "holds" only speaks for the family.

mod family;
mod lemmas;
pub mod random;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::base::{verify_atomic, AtomicDerivation, AtomicSequent, Base, Budget, DeriveOutcome, Engine, RuleSchema};
use crate::base::{ContextPattern, SequentPattern};
use crate::syntax::{Atom, AtomicMultiset, Formula, FormulaMultiset, Multiset, ParseError, Parser, Tok};

pub use family::{ExtensionFamily, FamilyError, FamilyParams};
pub use lemmas::{check_lemma, Counterexample, LemmaId, LemmaParams, LemmaReport};

/// `Γ ⊩^Δ_B φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportJudgment {
    pub antecedents: FormulaMultiset,
    pub superscript: AtomicMultiset,
    pub base: Base,
    pub conclusion: Formula,
}

impl SupportJudgment {
    pub fn new(antecedents: FormulaMultiset, superscript: AtomicMultiset, base: Base, conclusion: Formula) -> Self {
        SupportJudgment {
            antecedents,
            superscript,
            base,
            conclusion,
        }
    }

    /// `⊩^Δ_B φ`.
    pub fn categorical(superscript: AtomicMultiset, base: Base, conclusion: Formula) -> Self {
        Self::new(FormulaMultiset::new(), superscript, base, conclusion)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out: BTreeSet<Atom> = self.superscript.distinct().cloned().collect();
        for f in self.antecedents.iter().chain([&self.conclusion]) {
            f.atoms(&mut out);
        }
        out
    }
}

fn render(ants: &FormulaMultiset, sup: &AtomicMultiset, phi: &Formula) -> String {
    if ants.is_empty() {
        format!("||-^{{{sup}}} {phi}")
    } else {
        format!("{ants} ||-^{{{sup}}} {phi}")
    }
}

impl fmt::Display for SupportJudgment {
    /// The base is not part of the rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.antecedents, &self.superscript, &self.conclusion))
    }
}

/// Parses `Γ ||-^{Δ} φ`; the superscript is optional and defaults to empty.
pub fn parse_judgment(text: &str, base: Base) -> Result<SupportJudgment, ParseError> {
    let Some(split) = text.find("||-") else {
        return Err(ParseError {
            pos: 0,
            message: "expected '||-'".into(),
        });
    };
    let shift = |e: ParseError, by: usize| ParseError {
        pos: e.pos + by,
        message: e.message,
    };
    let mut left = Parser::new(&text[..split])?;
    let antecedents: FormulaMultiset = if left.at_end() {
        FormulaMultiset::new()
    } else {
        let ctx = left.context()?;
        left.finish()?;
        ctx.into_iter().collect()
    };
    let offset = split + 3;
    let mut right = Parser::new(&text[offset..]).map_err(|e| shift(e, offset))?;
    let superscript = if right.eat(&Tok::Caret) {
        right.expect(&Tok::LBrace, "'{'").map_err(|e| shift(e, offset))?;
        let s = right.atom_list().map_err(|e| shift(e, offset))?;
        right.expect(&Tok::RBrace, "'}'").map_err(|e| shift(e, offset))?;
        s
    } else {
        AtomicMultiset::new()
    };
    let conclusion = right.formula().map_err(|e| shift(e, offset))?;
    right.finish().map_err(|e| shift(e, offset))?;
    Ok(SupportJudgment::new(antecedents, superscript, base, conclusion))
}

/// The base whose only rule is `?T, p ⊢ ⊥ ⇒ ?T ⊢ ⊥`: it supports `p`
/// without deriving it.
pub fn counterexample_base(p: &Atom) -> Base {
    assert!(!p.is_bottom(), "the dropped atom must differ from bot");
    let schema = RuleSchema::new(
        "Drop",
        vec![SequentPattern::new(ContextPattern::new(&["T"], [p.clone()]), Atom::bottom())],
        SequentPattern::new(ContextPattern::new(&["T"], []), Atom::bottom()),
    );
    Base {
        rules: BTreeSet::new(),
        schemas: [schema].into_iter().collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalLimits {
    /// Largest quantified atomic multiset.
    pub ctx_bound: usize,
    /// Largest formula nesting accepted.
    pub depth: usize,
    /// Budget for each derivability query.
    pub derive: Budget,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits {
            ctx_bound: 3,
            depth: 8,
            derive: Budget {
                depth: 16,
                nodes: 20_000,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula nesting {found} exceeds the limit {limit}")]
    TooDeep { found: usize, limit: usize },
    #[error("the family is not rooted at the judgment's base")]
    NotRooted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    At,
    Tensor,
    Lolli,
    One,
    Par,
    With,
    Plus,
    Zero,
    Inf,
}

impl Clause {
    pub fn label(self) -> &'static str {
        match self {
            Clause::At => "(At)",
            Clause::Tensor => "(*)",
            Clause::Lolli => "(-o)",
            Clause::One => "(1)",
            Clause::Par => "(|)",
            Clause::With => "(&)",
            Clause::Plus => "(+)",
            Clause::Zero => "(0)",
            Clause::Inf => "(Inf)",
        }
    }
}

/// A derivability fact at a family member: derivable with the given
/// derivation, or (when `derivation` is `None`) not derivable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub member: usize,
    pub sequent: AtomicSequent,
    pub derivation: Option<AtomicDerivation>,
}

/// Why a judgment fails: the clause, the member and quantified multisets
/// chosen, and either derivability facts or the failing sub-judgment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub clause: Clause,
    pub judgment: String,
    pub member: usize,
    pub choices: Vec<AtomicMultiset>,
    pub facts: Vec<Fact>,
    pub cause: Option<Box<Witness>>,
}

impl Witness {
    fn write_indented(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        let choices: Vec<String> = self.choices.iter().map(|c| format!("[{c}]")).collect();
        writeln!(
            f,
            "{pad}{} fails by {} at member {} with {}",
            self.judgment,
            self.clause.label(),
            self.member,
            if choices.is_empty() { "no choices".to_string() } else { choices.join(" ") }
        )?;
        for fact in &self.facts {
            let verb = if fact.derivation.is_some() { "derivable" } else { "not derivable" };
            writeln!(f, "{pad}  {} {verb} at member {}", fact.sequent, fact.member)?;
        }
        if let Some(c) = &self.cause {
            c.write_indented(f, indent + 1)?;
        }
        Ok(())
    }

    pub fn facts(&self) -> Vec<&Fact> {
        let mut out: Vec<&Fact> = self.facts.iter().collect();
        if let Some(c) = &self.cause {
            out.extend(c.facts());
        }
        out
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

/// Re-checks every derivability fact of a witness: positive facts through
/// [`verify_atomic`], negative ones by a fresh saturated search.
pub fn verify_witness(fam: &ExtensionFamily, w: &Witness, budget: Budget) -> bool {
    w.facts().into_iter().all(|fact| {
        let Some(base) = fam.members.get(fact.member) else {
            return false;
        };
        match &fact.derivation {
            Some(d) => d.conclusion == fact.sequent && verify_atomic(base, d).is_ok(),
            None => matches!(
                crate::base::derive_atomic(base, &fact.sequent, budget),
                DeriveOutcome::NotFound { saturated: true }
            ),
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportVerdict {
    HoldsRelativeToFamily,
    Refuted(Box<Witness>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub verdict: SupportVerdict,
    /// Derivability queries that ran out of budget and were read as
    /// "not derivable".
    pub unsaturated: usize,
}

impl Evaluation {
    pub fn holds(&self) -> bool {
        self.verdict == SupportVerdict::HoldsRelativeToFamily
    }
}

pub fn eval_clause(j: &SupportJudgment, fam: &ExtensionFamily, limits: EvalLimits) -> Result<Evaluation, EvalError> {
    if fam.root() != &j.base {
        return Err(EvalError::NotRooted);
    }
    let mut ev = Evaluator::new(fam, limits, j.atoms());
    let verdict = match ev.eval(0, &j.antecedents, &j.superscript, &j.conclusion)? {
        None => SupportVerdict::HoldsRelativeToFamily,
        Some(w) => SupportVerdict::Refuted(Box::new(w)),
    };
    Ok(Evaluation {
        verdict,
        unsaturated: ev.unsaturated,
    })
}

fn nesting(f: &Formula) -> usize {
    match f.children() {
        Some((a, b)) => 1 + nesting(a).max(nesting(b)),
        None => 0,
    }
}

type Key = (usize, FormulaMultiset, AtomicMultiset, Formula);

/// Memoised support evaluation over one family. Reusable across judgments
/// whose atoms lie in the vocabulary it was built with.
pub struct Evaluator<'f> {
    fam: &'f ExtensionFamily,
    limits: EvalLimits,
    deltas: Vec<AtomicMultiset>,
    engines: Vec<Engine>,
    derived: Vec<HashMap<AtomicSequent, DeriveOutcome>>,
    memo: HashMap<Key, Option<Witness>>,
    pub unsaturated: usize,
}

impl<'f> Evaluator<'f> {
    pub fn new(fam: &'f ExtensionFamily, limits: EvalLimits, extra_atoms: BTreeSet<Atom>) -> Self {
        let mut vocab = fam.vocabulary.clone();
        vocab.extend(extra_atoms);
        vocab.insert(Atom::bottom());
        let vocab: Vec<Atom> = vocab.into_iter().collect();
        Evaluator {
            fam,
            limits,
            deltas: bounded_multisets(&vocab, limits.ctx_bound),
            engines: fam.members.iter().map(|b| Engine::new(b.clone(), limits.derive)).collect(),
            derived: vec![HashMap::new(); fam.members.len()],
            memo: HashMap::new(),
            unsaturated: 0,
        }
    }

    pub fn family(&self) -> &ExtensionFamily {
        self.fam
    }

    /// The quantified multisets, smallest first.
    pub fn deltas(&self) -> &[AtomicMultiset] {
        &self.deltas
    }

    /// `Some(true)` derivable, `Some(false)` refuted, `None` out of budget.
    pub fn derivable(&mut self, member: usize, s: &AtomicSequent) -> Option<bool> {
        match self.derive(member, s) {
            DeriveOutcome::Found(_) => Some(true),
            DeriveOutcome::NotFound { saturated: true } => Some(false),
            DeriveOutcome::NotFound { saturated: false } => None,
        }
    }

    fn derive(&mut self, member: usize, s: &AtomicSequent) -> DeriveOutcome {
        if let Some(o) = self.derived[member].get(s) {
            return o.clone();
        }
        let o = self.engines[member].derive(s);
        if matches!(o, DeriveOutcome::NotFound { saturated: false }) {
            self.unsaturated += 1;
        }
        self.derived[member].insert(s.clone(), o.clone());
        o
    }

    /// `None` if `ants ⊩^sup φ` holds at `member` relative to the family,
    /// otherwise a witness.
    pub fn eval(
        &mut self,
        member: usize,
        ants: &FormulaMultiset,
        sup: &AtomicMultiset,
        phi: &Formula,
    ) -> Result<Option<Witness>, EvalError> {
        let found = ants.iter().chain([phi]).map(nesting).max().unwrap_or(0);
        if found > self.limits.depth {
            return Err(EvalError::TooDeep {
                found,
                limit: self.limits.depth,
            });
        }
        Ok(self.inf(member, ants, sup, phi))
    }

    pub fn holds(&mut self, member: usize, ants: &FormulaMultiset, sup: &AtomicMultiset, phi: &Formula) -> bool {
        self.inf(member, ants, sup, phi).is_none()
    }

    fn ext(&self, member: usize) -> Vec<usize> {
        self.fam.extensions_of(member).to_vec()
    }

    fn inf(&mut self, c: usize, ants: &FormulaMultiset, theta: &AtomicMultiset, phi: &Formula) -> Option<Witness> {
        if ants.is_empty() {
            return self.sup(c, theta, phi);
        }
        let key = (c, ants.clone(), theta.clone(), phi.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let psis: Vec<Formula> = ants.to_vec();
        let deltas = self.deltas.clone();
        let mut result = None;
        'members: for c2 in self.ext(c) {
            let lists: Vec<Vec<&AtomicMultiset>> = psis
                .iter()
                .map(|psi| deltas.iter().filter(|d| self.sup(c2, d, psi).is_none()).collect())
                .collect();
            if lists.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0usize; lists.len()];
            loop {
                let chosen: Vec<AtomicMultiset> = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
                let total = chosen.iter().fold(theta.clone(), |acc, d| acc.union(d));
                if let Some(w) = self.sup(c2, &total, phi) {
                    result = Some(Witness {
                        clause: Clause::Inf,
                        judgment: render(ants, theta, phi),
                        member: c2,
                        choices: chosen,
                        facts: vec![],
                        cause: Some(Box::new(w)),
                    });
                    break 'members;
                }
                // odometer over the cartesian product
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        continue 'members;
                    }
                    idx[k] += 1;
                    if idx[k] < lists[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        }
        self.memo.insert(key, result.clone());
        result
    }

    fn sup(&mut self, c: usize, gamma: &AtomicMultiset, phi: &Formula) -> Option<Witness> {
        let key = (c, FormulaMultiset::new(), gamma.clone(), phi.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let result = self.sup_uncached(c, gamma, phi);
        self.memo.insert(key, result.clone());
        result
    }

    fn refute(&self, clause: Clause, gamma: &AtomicMultiset, phi: &Formula, member: usize, choices: Vec<AtomicMultiset>) -> Witness {
        Witness {
            clause,
            judgment: render(&FormulaMultiset::new(), gamma, phi),
            member,
            choices,
            facts: vec![],
            cause: None,
        }
    }

    fn sup_uncached(&mut self, c: usize, gamma: &AtomicMultiset, phi: &Formula) -> Option<Witness> {
        let deltas = self.deltas.clone();
        let bot = Formula::bottom();
        let one = |f: &Formula| FormulaMultiset::singleton(f.clone());
        match phi {
            Formula::Atom(p) => {
                for c2 in self.ext(c) {
                    for d in &deltas {
                        let hyp = AtomicSequent {
                            context: d.with(p.clone()),
                            conclusion: Atom::bottom(),
                        };
                        let DeriveOutcome::Found(hd) = self.derive(c2, &hyp) else {
                            continue;
                        };
                        let goal = AtomicSequent {
                            context: gamma.union(d),
                            conclusion: Atom::bottom(),
                        };
                        if !self.derive(c2, &goal).is_found() {
                            let mut w = self.refute(Clause::At, gamma, phi, c2, vec![d.clone()]);
                            w.facts = vec![
                                Fact {
                                    member: c2,
                                    sequent: hyp,
                                    derivation: Some(hd),
                                },
                                Fact {
                                    member: c2,
                                    sequent: goal,
                                    derivation: None,
                                },
                            ];
                            return Some(w);
                        }
                    }
                }
                None
            }
            Formula::Top => None,
            Formula::With(a, b) => {
                for side in [a, b] {
                    if let Some(w) = self.sup(c, gamma, side) {
                        let mut out = self.refute(Clause::With, gamma, phi, c, vec![]);
                        out.cause = Some(Box::new(w));
                        return Some(out);
                    }
                }
                None
            }
            Formula::Zero => {
                for d in &deltas {
                    if let Some(w) = self.sup(c, &gamma.union(d), &bot) {
                        let mut out = self.refute(Clause::Zero, gamma, phi, c, vec![d.clone()]);
                        out.cause = Some(Box::new(w));
                        return Some(out);
                    }
                }
                None
            }
            Formula::Tensor(a, b) => {
                let ab: FormulaMultiset = [(**a).clone(), (**b).clone()].into_iter().collect();
                self.single_delta(c, gamma, phi, Clause::Tensor, |ev, c2, d| ev.inf(c2, &ab, d, &bot).is_none())
            }
            Formula::One => self.single_delta(c, gamma, phi, Clause::One, |ev, c2, d| ev.sup(c2, d, &bot).is_none()),
            Formula::Plus(a, b) => {
                let (fa, fb) = (one(a), one(b));
                self.single_delta(c, gamma, phi, Clause::Plus, |ev, c2, d| {
                    ev.inf(c2, &fa, d, &bot).is_none() && ev.inf(c2, &fb, d, &bot).is_none()
                })
            }
            Formula::Lolli(a, b) => {
                let fb = one(b);
                self.double_delta(
                    c,
                    gamma,
                    phi,
                    Clause::Lolli,
                    |ev, c2, d| ev.sup(c2, d, a).is_none(),
                    |ev, c2, t| ev.inf(c2, &fb, t, &bot).is_none(),
                )
            }
            Formula::Par(a, b) => {
                let (fa, fb) = (one(a), one(b));
                self.double_delta(
                    c,
                    gamma,
                    phi,
                    Clause::Par,
                    |ev, c2, d| ev.inf(c2, &fa, d, &bot).is_none(),
                    |ev, c2, t| ev.inf(c2, &fb, t, &bot).is_none(),
                )
            }
        }
    }

    /// For all members `c2 ⊇ c` and Δ: if `hyp(c2, Δ)` then `⊩^{Γ,Δ}_{c2} ⊥`.
    fn single_delta(
        &mut self,
        c: usize,
        gamma: &AtomicMultiset,
        phi: &Formula,
        clause: Clause,
        mut hyp: impl FnMut(&mut Self, usize, &AtomicMultiset) -> bool,
    ) -> Option<Witness> {
        let deltas = self.deltas.clone();
        let bot = Formula::bottom();
        for c2 in self.ext(c) {
            for d in &deltas {
                if hyp(self, c2, d) {
                    if let Some(w) = self.sup(c2, &gamma.union(d), &bot) {
                        let mut out = self.refute(clause, gamma, phi, c2, vec![d.clone()]);
                        out.cause = Some(Box::new(w));
                        return Some(out);
                    }
                }
            }
        }
        None
    }

    /// For all members `c2 ⊇ c`, Δ and Θ: if `left(c2, Δ)` and
    /// `right(c2, Θ)` then `⊩^{Γ,Δ,Θ}_{c2} ⊥`.
    fn double_delta(
        &mut self,
        c: usize,
        gamma: &AtomicMultiset,
        phi: &Formula,
        clause: Clause,
        mut left: impl FnMut(&mut Self, usize, &AtomicMultiset) -> bool,
        mut right: impl FnMut(&mut Self, usize, &AtomicMultiset) -> bool,
    ) -> Option<Witness> {
        let deltas = self.deltas.clone();
        let bot = Formula::bottom();
        for c2 in self.ext(c) {
            let ls: Vec<&AtomicMultiset> = deltas.iter().filter(|d| left(self, c2, d)).collect();
            if ls.is_empty() {
                continue;
            }
            let rs: Vec<&AtomicMultiset> = deltas.iter().filter(|t| right(self, c2, t)).collect();
            for d in &ls {
                for t in &rs {
                    if let Some(w) = self.sup(c2, &gamma.union(d).union(t), &bot) {
                        let mut out = self.refute(clause, gamma, phi, c2, vec![(*d).clone(), (*t).clone()]);
                        out.cause = Some(Box::new(w));
                        return Some(out);
                    }
                }
            }
        }
        None
    }
}

/// Every multiset of at most `bound` atoms from `vocab`, by size then order.
pub fn bounded_multisets(vocab: &[Atom], bound: usize) -> Vec<AtomicMultiset> {
    let mut by_size: Vec<Vec<(usize, AtomicMultiset)>> = vec![vec![(0, Multiset::new())]];
    for _ in 0..bound {
        let mut next = Vec::new();
        for (from, m) in by_size.last().expect("nonempty") {
            for (i, a) in vocab.iter().enumerate().skip(*from) {
                next.push((i, m.with(a.clone())));
            }
        }
        by_size.push(next);
    }
    by_size.into_iter().flatten().map(|(_, m)| m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{derive_atomic, parse_atomic_sequent, parse_base, structural_base};
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn ms(xs: &[&str]) -> AtomicMultiset {
        xs.iter().map(|x| Atom::new(x)).collect()
    }

    fn fam(root: Base, seed: u64) -> ExtensionFamily {
        ExtensionFamily::generate(root, FamilyParams::default(), seed)
    }

    fn eval(j: &SupportJudgment, fam: &ExtensionFamily) -> Evaluation {
        eval_clause(j, fam, EvalLimits::default()).unwrap()
    }

    #[test]
    fn bounded_multisets_count() {
        let v: Vec<Atom> = ["a", "b", "c"].iter().map(|x| Atom::new(x)).collect();
        // 1 + 3 + 6
        assert_eq!(bounded_multisets(&v, 2).len(), 10);
        assert_eq!(bounded_multisets(&v, 0), vec![AtomicMultiset::new()]);
    }

    #[test]
    fn top_always_holds() {
        for seed in 0..5 {
            let j = SupportJudgment::categorical(AtomicMultiset::new(), structural_base(), Formula::Top);
            assert!(eval(&j, &fam(structural_base(), seed)).holds());
        }
    }

    #[test]
    fn atom_supports_itself() {
        let j = SupportJudgment::categorical(ms(&["p"]), structural_base(), f("p"));
        assert!(eval(&j, &fam(structural_base(), 3)).holds());
    }

    #[test]
    fn bottom_is_refuted_on_the_structural_base() {
        let only = ExtensionFamily::from_members(vec![structural_base()], BTreeSet::new()).unwrap();
        let j = SupportJudgment::categorical(AtomicMultiset::new(), structural_base(), Formula::bottom());
        let out = eval(&j, &only);
        let SupportVerdict::Refuted(w) = &out.verdict else {
            panic!("expected a refutation");
        };
        assert_eq!(w.clause, Clause::At);
        assert_eq!(w.choices, vec![AtomicMultiset::new()]);
        assert!(verify_witness(&only, w, Budget::default()));
        // zero is refuted for the empty superscript
        let z = SupportJudgment::categorical(AtomicMultiset::new(), structural_base(), Formula::Zero);
        assert!(!eval(&z, &only).holds());
    }

    #[test]
    fn counterexample_base_supports_without_deriving() {
        let p = Atom::new("p");
        let b = counterexample_base(&p);
        assert_eq!(b.to_text(), "[Drop] ?T, p |- bot ==> ?T |- bot.\n");
        let goal = parse_atomic_sequent("|- p").unwrap();
        assert_eq!(derive_atomic(&b, &goal, Budget::default()), DeriveOutcome::NotFound { saturated: true });
        let j = SupportJudgment::categorical(AtomicMultiset::new(), b.clone(), Formula::Atom(p));
        for seed in 0..3 {
            assert!(eval(&j, &fam(b.clone(), seed)).holds());
        }
    }

    #[test]
    fn witnesses_verify_and_are_deterministic() {
        let b = parse_base("p |- bot.").unwrap();
        let family = fam(b.clone(), 11);
        let j = SupportJudgment::categorical(ms(&["q"]), b, f("p"));
        let out = eval(&j, &family);
        let SupportVerdict::Refuted(w) = &out.verdict else {
            panic!("q does not support p");
        };
        assert!(verify_witness(&family, w, Budget::default()));
        assert_eq!(out, eval(&j, &family));
    }

    #[test]
    fn inf_matches_negation_on_a_small_case() {
        let b = parse_base("p, q |- bot.").unwrap();
        let family = fam(b.clone(), 5);
        let with_ant = SupportJudgment::new(FormulaMultiset::singleton(f("p")), ms(&["q"]), b.clone(), Formula::bottom());
        let neg = SupportJudgment::categorical(ms(&["q"]), b, f("~p"));
        assert!(eval(&with_ant, &family).holds());
        assert!(eval(&neg, &family).holds());
    }

    #[test]
    fn root_must_match() {
        let j = SupportJudgment::categorical(AtomicMultiset::new(), parse_base("p |- q.").unwrap(), f("p"));
        assert_eq!(eval_clause(&j, &fam(structural_base(), 0), EvalLimits::default()), Err(EvalError::NotRooted));
    }

    #[test]
    fn depth_limit() {
        let j = SupportJudgment::categorical(AtomicMultiset::new(), structural_base(), f("((p * p) * p) * p"));
        let limits = EvalLimits {
            depth: 2,
            ..EvalLimits::default()
        };
        assert_eq!(
            eval_clause(&j, &fam(structural_base(), 0), limits),
            Err(EvalError::TooDeep { found: 3, limit: 2 })
        );
    }

    #[test]
    fn judgment_syntax() {
        let j = parse_judgment("p, q * r ||-^{a, b} s", Base::default()).unwrap();
        assert_eq!(j.antecedents.len(), 2);
        assert_eq!(j.superscript, ms(&["a", "b"]));
        assert_eq!(j.to_string(), "p, q * r ||-^{a, b} s");
        let k = parse_judgment("||- ~p", Base::default()).unwrap();
        assert!(k.antecedents.is_empty() && k.superscript.is_empty());
        assert_eq!(k.to_string(), "||-^{} ~p");
        assert_eq!(parse_judgment(&k.to_string(), Base::default()).unwrap(), k);
        let e = parse_judgment("p ||-^{a q", Base::default()).unwrap_err();
        assert_eq!(e.pos, 9);
        assert!(parse_judgment("p |- q", Base::default()).is_err());
    }
}
