//! Backward search for atomic derivations.
//!
//! A sequent `Γ ⊢ r` is derivable iff it is an axiom `r ⊢ r`, or some rule
//! instance with derivable premises concludes `Σ ⊢ r` and `Γ` splits into one
//! part `Γ_s` per occurrence of `s` in `Σ` with each `Γ_s ⊢ s` derivable. The
//! parts are plugged in with Subs. Schema metavariables occurring once in the
//! conclusion are bound directly to parts of `Γ`; this loses nothing because
//! their premises are closed under the same substitution.
//!
//! Goals on the current path are cut (a shortest derivation never repeats a
//! sequent along a branch). Successes are tabled for the lifetime of the
//! engine; failures are tabled when they do not depend on an open ancestor.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{AtomicDerivation, AtomicRule, AtomicSequent, Base, Bindings, RuleSchema, Step};
use crate::syntax::{Atom, AtomicMultiset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum nesting of subgoals.
    pub depth: usize,
    /// Maximum goal expansions per query.
    pub nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            depth: 24,
            nodes: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeriveOutcome {
    Found(AtomicDerivation),
    /// `saturated` means the search space was exhausted with no depth cut,
    /// node cut or schema restriction, so the goal is underivable.
    NotFound { saturated: bool },
}

impl DeriveOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, DeriveOutcome::Found(_))
    }
}

pub fn derive_atomic(base: &Base, goal: &AtomicSequent, budget: Budget) -> DeriveOutcome {
    Engine::new(base.clone(), budget).derive(goal)
}

struct OutOfNodes;

struct Res {
    found: Option<AtomicDerivation>,
    /// Lowest stack index of an ancestor this result assumed to fail.
    low: usize,
    cut: bool,
}

impl Res {
    fn fail(low: usize, cut: bool) -> Res {
        Res {
            found: None,
            low,
            cut,
        }
    }
}

struct Alt {
    step: Step,
    instance: AtomicRule,
    /// `(s, Γ_s)` for each conclusion atom whose part is not just `s`.
    parts: Vec<(Atom, AtomicMultiset)>,
}

impl Alt {
    fn subgoals(&self) -> impl Iterator<Item = AtomicSequent> + '_ {
        self.instance.premises.iter().cloned().chain(
            self.parts
                .iter()
                .map(|(s, g)| AtomicSequent::new(g.iter().cloned(), s.clone())),
        )
    }

    fn weight(&self) -> (usize, usize) {
        let n = self.instance.premises.len() + self.parts.len();
        let size = self
            .subgoals()
            .map(|s| s.context.len())
            .sum::<usize>();
        (n, size)
    }
}

/// A search engine over one base. Tables persist across queries.
pub struct Engine {
    base: Base,
    budget: Budget,
    by_conclusion: HashMap<Atom, (Vec<AtomicRule>, Vec<RuleSchema>)>,
    proven: HashMap<AtomicSequent, AtomicDerivation>,
    refuted: HashSet<AtomicSequent>,
    failed_at: HashMap<AtomicSequent, usize>,
    on_stack: HashMap<AtomicSequent, usize>,
    stack_len: usize,
    nodes: usize,
}

impl Engine {
    pub fn new(base: Base, budget: Budget) -> Engine {
        let mut by_conclusion: HashMap<Atom, (Vec<AtomicRule>, Vec<RuleSchema>)> = HashMap::new();
        for r in &base.rules {
            by_conclusion
                .entry(r.conclusion.conclusion.clone())
                .or_default()
                .0
                .push(r.clone());
        }
        for s in &base.schemas {
            by_conclusion
                .entry(s.conclusion.conclusion.clone())
                .or_default()
                .1
                .push(s.clone());
        }
        Engine {
            base,
            budget,
            by_conclusion,
            proven: HashMap::new(),
            refuted: HashSet::new(),
            failed_at: HashMap::new(),
            on_stack: HashMap::new(),
            stack_len: 0,
            nodes: 0,
        }
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn derive(&mut self, goal: &AtomicSequent) -> DeriveOutcome {
        self.on_stack.clear();
        self.stack_len = 0;
        self.nodes = 0;
        match self.solve(goal, self.budget.depth) {
            Ok(Res { found: Some(d), .. }) => DeriveOutcome::Found(d),
            Ok(Res { cut, .. }) => DeriveOutcome::NotFound { saturated: !cut },
            Err(OutOfNodes) => DeriveOutcome::NotFound { saturated: false },
        }
    }

    /// `Some(true)` if derivable, `Some(false)` if refuted, `None` if the
    /// budget ran out first.
    pub fn decide(&mut self, goal: &AtomicSequent) -> Option<bool> {
        match self.derive(goal) {
            DeriveOutcome::Found(_) => Some(true),
            DeriveOutcome::NotFound { saturated: true } => Some(false),
            DeriveOutcome::NotFound { saturated: false } => None,
        }
    }

    fn solve(&mut self, g: &AtomicSequent, depth: usize) -> Result<Res, OutOfNodes> {
        if let Some(d) = self.proven.get(g) {
            return Ok(Res {
                found: Some(d.clone()),
                low: usize::MAX,
                cut: false,
            });
        }
        if self.refuted.contains(g) {
            return Ok(Res::fail(usize::MAX, false));
        }
        if let Some(&k) = self.on_stack.get(g) {
            return Ok(Res::fail(k, false));
        }
        if depth == 0 || self.failed_at.get(g).is_some_and(|&d| d >= depth) {
            return Ok(Res::fail(usize::MAX, true));
        }
        self.nodes += 1;
        if self.nodes > self.budget.nodes {
            return Err(OutOfNodes);
        }
        if g.is_axiom() {
            let d = AtomicDerivation::axiom(g.conclusion.clone());
            self.proven.insert(g.clone(), d.clone());
            return Ok(Res {
                found: Some(d),
                low: usize::MAX,
                cut: false,
            });
        }

        let k = self.stack_len;
        self.on_stack.insert(g.clone(), k);
        self.stack_len += 1;
        let (alts, incomplete) = self.alternatives(g);
        let mut low = usize::MAX;
        let mut cut = incomplete;
        let mut result = None;
        'alts: for alt in &alts {
            let mut ds = Vec::new();
            for sub in alt.subgoals() {
                let r = self.solve(&sub, depth - 1)?;
                low = low.min(r.low);
                cut |= r.cut;
                match r.found {
                    Some(d) => ds.push(d),
                    None => continue 'alts,
                }
            }
            result = Some(assemble(alt, ds));
            break;
        }
        self.on_stack.remove(g);
        self.stack_len -= 1;

        if let Some(d) = result {
            self.proven.insert(g.clone(), d.clone());
            return Ok(Res {
                found: Some(d),
                low: usize::MAX,
                cut: false,
            });
        }
        if low >= k {
            if cut {
                let e = self.failed_at.entry(g.clone()).or_insert(0);
                *e = (*e).max(depth);
            } else {
                self.refuted.insert(g.clone());
            }
            low = usize::MAX;
        }
        Ok(Res::fail(low, cut))
    }

    /// Candidate rule instances for `g`, cheapest first, and whether a schema
    /// restriction made the list possibly incomplete.
    fn alternatives(&self, g: &AtomicSequent) -> (Vec<Alt>, bool) {
        let Some((rules, schemas)) = self.by_conclusion.get(&g.conclusion) else {
            return (vec![], false);
        };
        let mut alts = Vec::new();
        let mut seen = BTreeSet::new();
        let mut incomplete = false;
        for r in rules {
            for parts in distribute(&g.context, &r.conclusion.context) {
                if seen.insert((Step::Rule.label().to_string(), r.clone(), parts.clone())) {
                    alts.push(Alt {
                        step: Step::Rule,
                        instance: r.clone(),
                        parts,
                    });
                }
            }
        }
        for s in schemas {
            let fresh: Vec<_> = s.fresh_metas().into_iter().collect();
            incomplete |= !fresh.is_empty() || s.has_repeated_conclusion_meta();
            let meta_only = super::ContextPattern {
                metas: s.conclusion.context.metas.clone(),
                atoms: AtomicMultiset::new(),
            };
            for (for_atoms, for_metas) in g.context.splits() {
                for b in meta_only.match_against(&for_metas, &Bindings::new()) {
                    for b in extend_fresh(&fresh, &g.context, b) {
                        let Some(instance) = s.instantiate(&b) else {
                            continue;
                        };
                        for parts in distribute(&for_atoms, &s.conclusion.context.atoms) {
                            if seen.insert((s.name.clone(), instance.clone(), parts.clone())) {
                                alts.push(Alt {
                                    step: Step::Schema(s.name.clone()),
                                    instance: instance.clone(),
                                    parts,
                                });
                            }
                        }
                    }
                }
            }
        }
        alts.sort_by_key(Alt::weight);
        (alts, incomplete)
    }
}

/// Premise-only metavariables range over submultisets of the goal context.
fn extend_fresh(fresh: &[super::Meta], ctx: &AtomicMultiset, b: Bindings) -> Vec<Bindings> {
    let mut out = vec![b];
    for m in fresh {
        let subs = ctx.submultisets();
        out = out
            .into_iter()
            .flat_map(|b| {
                subs.iter().map(move |x| {
                    let mut b2 = b.clone();
                    b2.insert(m.clone(), x.clone());
                    b2
                })
            })
            .collect();
    }
    out
}

/// Ways to split `ctx` into one part per atom occurrence of `sigma`, keeping
/// only the parts that are not trivially `s ⊢ s`.
fn distribute(ctx: &AtomicMultiset, sigma: &AtomicMultiset) -> Vec<Vec<(Atom, AtomicMultiset)>> {
    let slots: Vec<Atom> = sigma.to_vec();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for dist in ctx.distributions(slots.len()) {
        let mut parts: Vec<(Atom, AtomicMultiset)> = slots
            .iter()
            .cloned()
            .zip(dist)
            .filter(|(s, part)| !(part.len() == 1 && part.contains(s)))
            .collect();
        parts.sort();
        if seen.insert(parts.clone()) {
            out.push(parts);
        }
    }
    out
}

fn assemble(alt: &Alt, ds: Vec<AtomicDerivation>) -> AtomicDerivation {
    let n = alt.instance.premises.len();
    let mut it = ds.into_iter();
    let premises: Vec<AtomicDerivation> = it.by_ref().take(n).collect();
    let mut d = AtomicDerivation {
        conclusion: alt.instance.conclusion.clone(),
        step: alt.step.clone(),
        premises,
    };
    for part in it {
        d = AtomicDerivation::subs(part, d).expect("part atom occurs in the instance conclusion");
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::tests::umbrella;
    use crate::base::{parse_atomic_sequent, parse_base, structural_base, verify_atomic};

    fn seq(s: &str) -> AtomicSequent {
        parse_atomic_sequent(s).unwrap()
    }

    #[test]
    fn umbrella_deduction() {
        let b = umbrella();
        let DeriveOutcome::Found(d) = derive_atomic(&b, &seq("|- u"), Budget::default()) else {
            panic!("umbrella not derived");
        };
        assert_eq!(d.conclusion, seq("|- u"));
        assert_eq!(verify_atomic(&b, &d), Ok(()));
        // rule, then Subs composing l |- r with r |- p
        assert_eq!(d.step, Step::Rule);
        assert_eq!(d.premises[0].step, Step::Subs);
        assert_eq!(d.premises[0].conclusion, seq("l |- p"));
    }

    #[test]
    fn structural_base_facts() {
        let s = structural_base();
        assert!(derive_atomic(&s, &seq("p |- p"), Budget::default()).is_found());
        for budget in [Budget { depth: 1, nodes: 10 }, Budget::default()] {
            assert_eq!(
                derive_atomic(&s, &seq("|- p"), budget),
                DeriveOutcome::NotFound { saturated: true }
            );
        }
        assert_eq!(
            derive_atomic(&s, &seq("p, q |- p"), Budget::default()),
            DeriveOutcome::NotFound { saturated: true }
        );
    }

    #[test]
    fn fixed_context_discipline() {
        // the premise l |- p is derivable but l, l |- p is not
        let b = umbrella();
        assert_eq!(
            derive_atomic(&b, &seq("l, l |- p"), Budget::default()),
            DeriveOutcome::NotFound { saturated: true }
        );
        assert!(derive_atomic(&b, &seq("l |- p"), Budget::default()).is_found());
    }

    #[test]
    fn subs_chains_through_contexts() {
        let b = parse_base("a, b |- c.\nx |- a.\ny, z |- b.").unwrap();
        let DeriveOutcome::Found(d) = derive_atomic(&b, &seq("x, y, z |- c"), Budget::default()) else {
            panic!();
        };
        assert_eq!(verify_atomic(&b, &d), Ok(()));
        assert_eq!(
            derive_atomic(&b, &seq("x, y |- c"), Budget::default()),
            DeriveOutcome::NotFound { saturated: true }
        );
    }

    #[test]
    fn cyclic_rules_terminate() {
        let b = parse_base("a |- b.\nb |- a.\nc |- a ==> |- d.").unwrap();
        assert!(derive_atomic(&b, &seq("a |- a"), Budget::default()).is_found());
        assert_eq!(
            derive_atomic(&b, &seq("|- d"), Budget::default()),
            DeriveOutcome::NotFound { saturated: true }
        );
        assert!(derive_atomic(&b, &seq("a |- b"), Budget::default()).is_found());
    }

    #[test]
    fn schema_with_growing_premise_is_not_saturated() {
        let b = parse_base("?G, p |- bot ==> ?G |- bot.").unwrap();
        assert_eq!(
            derive_atomic(&b, &seq("|- p"), Budget::default()),
            DeriveOutcome::NotFound { saturated: true }
        );
        assert_eq!(
            derive_atomic(&b, &seq("|- bot"), Budget { depth: 8, nodes: 10_000 }),
            DeriveOutcome::NotFound { saturated: false }
        );
        let c = b.with_rule(AtomicRule::axiom(seq("p, p |- bot")));
        let DeriveOutcome::Found(d) = derive_atomic(&c, &seq("|- bot"), Budget::default()) else {
            panic!();
        };
        assert_eq!(verify_atomic(&c, &d), Ok(()));
    }

    #[test]
    fn tables_persist_across_queries() {
        let mut e = Engine::new(umbrella(), Budget::default());
        assert_eq!(e.decide(&seq("|- u")), Some(true));
        assert_eq!(e.decide(&seq("|- l")), Some(false));
        assert_eq!(e.decide(&seq("|- u")), Some(true));
    }
}
