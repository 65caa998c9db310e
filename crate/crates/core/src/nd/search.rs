//! Depth-bounded exhaustive search for ND derivations.
//!
//! Elimination rules and Subs need a major or cut formula that does not occur
//! in the goal; those are drawn from the subformula closure of the goal sequent
//! together with the four units. Within that vocabulary and the depth bound the
//! search is exhaustive.
//!
//! With `prune_unprovable` set, subgoals the classical oracle refutes are
//! skipped. Every subgoal of an ND derivation is itself classically provable,
//! so this never discards a derivation.

use std::collections::{BTreeSet, HashMap};

use super::{NdDerivation, NdRule};
use crate::oracle::{self, Verdict};
use crate::syntax::{negate, subformula_closure, Formula, FormulaMultiset, Sequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NdSearchConfig {
    /// Maximum derivation height (a lone axiom has height 1).
    pub max_depth: usize,
    pub max_nodes: usize,
    pub allow_raa: bool,
    pub allow_subs: bool,
    pub prune_unprovable: bool,
}

impl Default for NdSearchConfig {
    fn default() -> Self {
        NdSearchConfig {
            max_depth: 12,
            max_nodes: 5_000_000,
            allow_raa: true,
            allow_subs: true,
            prune_unprovable: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NdSearchOutcome {
    Found(NdDerivation),
    /// Every derivation of height at most `max_depth` over the candidate
    /// vocabulary was ruled out.
    Exhausted { nodes: usize, candidates: usize },
    BudgetExceeded { nodes: usize },
}

pub fn search_nd(goal: &Sequent, cfg: NdSearchConfig) -> NdSearchOutcome {
    let mut seed: Vec<Formula> = goal.context.iter().cloned().collect();
    seed.push(goal.conclusion.clone());
    seed.extend([Formula::bottom(), Formula::One, Formula::Zero, Formula::Top]);
    let candidates: Vec<Formula> = subformula_closure(seed.iter()).into_iter().collect();
    let mut s = Searcher {
        cfg,
        candidates,
        failed: HashMap::new(),
        classical: HashMap::new(),
        nodes: 0,
    };
    match s.prove(&goal.context, &goal.conclusion, cfg.max_depth) {
        Ok(Some(d)) => NdSearchOutcome::Found(d),
        Ok(None) => NdSearchOutcome::Exhausted {
            nodes: s.nodes,
            candidates: s.candidates.len(),
        },
        Err(OutOfNodes) => NdSearchOutcome::BudgetExceeded { nodes: s.nodes },
    }
}

struct OutOfNodes;

type Found = Result<Option<NdDerivation>, OutOfNodes>;

struct Searcher {
    cfg: NdSearchConfig,
    candidates: Vec<Formula>,
    /// Largest depth at which the sequent is known to be underivable.
    failed: HashMap<Sequent, usize>,
    classical: HashMap<Sequent, bool>,
    nodes: usize,
}

fn node(ctx: &FormulaMultiset, concl: &Formula, rule: NdRule, premises: Vec<NdDerivation>) -> NdDerivation {
    NdDerivation::new(
        Sequent {
            context: ctx.clone(),
            conclusion: concl.clone(),
        },
        rule,
        premises,
    )
}

/// Tries each item in order and returns the first success.
macro_rules! first {
    ($e:expr) => {
        if let Some(d) = $e? {
            return Ok(Some(d));
        }
    };
}

impl Searcher {
    fn prove(&mut self, ctx: &FormulaMultiset, concl: &Formula, depth: usize) -> Found {
        if depth == 0 {
            return Ok(None);
        }
        let key = Sequent {
            context: ctx.clone(),
            conclusion: concl.clone(),
        };
        if self.failed.get(&key).is_some_and(|&d| d >= depth) {
            return Ok(None);
        }
        if self.cfg.prune_unprovable {
            let ok = *self
                .classical
                .entry(key.clone())
                .or_insert_with(|| oracle::prove_sequent(&key) != Ok(Verdict::Refuted));
            if !ok {
                return Ok(None);
            }
        }
        self.nodes += 1;
        if self.nodes > self.cfg.max_nodes {
            return Err(OutOfNodes);
        }
        let found = self.try_rules(ctx, concl, depth)?;
        if found.is_none() {
            let e = self.failed.entry(key).or_insert(0);
            *e = (*e).max(depth);
        }
        Ok(found)
    }

    /// Proves each (context, conclusion) pair in turn; all must succeed.
    fn all(&mut self, goals: &[(FormulaMultiset, Formula)], depth: usize) -> Result<Option<Vec<NdDerivation>>, OutOfNodes> {
        let mut out = Vec::with_capacity(goals.len());
        for (c, f) in goals {
            match self.prove(c, f, depth)? {
                Some(d) => out.push(d),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    fn build(&mut self, ctx: &FormulaMultiset, concl: &Formula, rule: NdRule, goals: &[(FormulaMultiset, Formula)], depth: usize) -> Found {
        Ok(self
            .all(goals, depth - 1)?
            .map(|ps| node(ctx, concl, rule, ps)))
    }

    fn try_rules(&mut self, ctx: &FormulaMultiset, concl: &Formula, depth: usize) -> Found {
        if ctx.len() == 1 && ctx.contains(concl) {
            return Ok(Some(node(ctx, concl, NdRule::Ax, vec![])));
        }
        match concl {
            Formula::Top => return Ok(Some(node(ctx, concl, NdRule::TopI, vec![]))),
            Formula::One if ctx.is_empty() => {
                return Ok(Some(node(ctx, concl, NdRule::OneI, vec![])))
            }
            _ => {}
        }
        if depth < 2 {
            return Ok(None);
        }
        let bottom = Formula::bottom();

        // introductions
        match concl {
            Formula::Tensor(a, b) => {
                for (l, r) in ctx.splits() {
                    let goals = [(l, (**a).clone()), (r, (**b).clone())];
                    first!(self.build(ctx, concl, NdRule::TensorI, &goals, depth));
                }
            }
            Formula::With(a, b) => {
                let goals = [(ctx.clone(), (**a).clone()), (ctx.clone(), (**b).clone())];
                first!(self.build(ctx, concl, NdRule::WithI, &goals, depth));
            }
            Formula::Lolli(a, b) => {
                let goals = [(ctx.with((**a).clone()), (**b).clone())];
                first!(self.build(ctx, concl, NdRule::LolliI, &goals, depth));
            }
            Formula::Par(a, b) => {
                let goals = [(ctx.with(negate(a)).with(negate(b)), bottom.clone())];
                first!(self.build(ctx, concl, NdRule::ParI, &goals, depth));
            }
            Formula::Plus(a, b) => {
                let goals = [(ctx.clone(), (**a).clone())];
                first!(self.build(ctx, concl, NdRule::PlusI1, &goals, depth));
                let goals = [(ctx.clone(), (**b).clone())];
                first!(self.build(ctx, concl, NdRule::PlusI2, &goals, depth));
            }
            _ => {}
        }
        if self.cfg.allow_raa {
            let goals = [(ctx.with(negate(concl)), bottom.clone())];
            first!(self.build(ctx, concl, NdRule::Raa, &goals, depth));
        }

        // eliminations, majors drawn from the candidate vocabulary
        let splits = ctx.splits();
        for m in self.candidates.clone() {
            match &m {
                Formula::Tensor(a, b) => {
                    for (l, r) in &splits {
                        let goals = [
                            (l.clone(), m.clone()),
                            (r.with((**a).clone()).with((**b).clone()), concl.clone()),
                        ];
                        first!(self.build(ctx, concl, NdRule::TensorE, &goals, depth));
                    }
                }
                Formula::With(a, b) => {
                    if **a == *concl {
                        let goals = [(ctx.clone(), m.clone())];
                        first!(self.build(ctx, concl, NdRule::WithE1, &goals, depth));
                    }
                    if **b == *concl {
                        let goals = [(ctx.clone(), m.clone())];
                        first!(self.build(ctx, concl, NdRule::WithE2, &goals, depth));
                    }
                }
                Formula::Lolli(a, b) if **b == *concl => {
                    for (l, r) in &splits {
                        let goals = [(l.clone(), m.clone()), (r.clone(), (**a).clone())];
                        first!(self.build(ctx, concl, NdRule::LolliE, &goals, depth));
                    }
                }
                Formula::Par(a, b) if concl.is_bottom() => {
                    for parts in ctx.distributions(3) {
                        let goals = [
                            (parts[0].clone(), m.clone()),
                            (parts[1].with((**a).clone()), bottom.clone()),
                            (parts[2].with((**b).clone()), bottom.clone()),
                        ];
                        first!(self.build(ctx, concl, NdRule::ParE, &goals, depth));
                    }
                }
                Formula::Plus(a, b) => {
                    for (l, r) in &splits {
                        let goals = [
                            (l.clone(), m.clone()),
                            (r.with((**a).clone()), concl.clone()),
                            (r.with((**b).clone()), concl.clone()),
                        ];
                        first!(self.build(ctx, concl, NdRule::PlusE, &goals, depth));
                    }
                }
                _ => {}
            }
        }
        for (l, r) in &splits {
            let goals = [(l.clone(), concl.clone()), (r.clone(), Formula::One)];
            first!(self.build(ctx, concl, NdRule::OneE, &goals, depth));
        }
        let mut seen = BTreeSet::new();
        for (l, _) in &splits {
            if seen.insert(l.clone()) {
                let goals = [(l.clone(), Formula::Zero)];
                first!(self.build(ctx, concl, NdRule::ZeroE, &goals, depth));
            }
        }
        if self.cfg.allow_subs {
            for cut in self.candidates.clone() {
                for (l, r) in &splits {
                    let goals = [(l.clone(), cut.clone()), (r.with(cut.clone()), concl.clone())];
                    first!(self.build(ctx, concl, NdRule::Subs, &goals, depth));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nd::{check_nd, CheckOptions};
    use crate::syntax::parse_sequent;

    fn cfg(depth: usize, raa: bool) -> NdSearchConfig {
        NdSearchConfig {
            max_depth: depth,
            allow_raa: raa,
            ..NdSearchConfig::default()
        }
    }

    #[test]
    fn finds_double_negation_elimination_with_raa() {
        let goal = parse_sequent("~~p |- p").unwrap();
        let NdSearchOutcome::Found(d) = search_nd(&goal, cfg(4, true)) else {
            panic!("expected a derivation");
        };
        assert_eq!(d.conclusion, goal);
        assert!(d.count_rule(NdRule::Raa) >= 1);
        assert!(check_nd(&d, CheckOptions::default()).is_ok());
    }

    #[test]
    fn intuitionistic_search_is_exhausted_at_small_depth() {
        let goal = parse_sequent("~~p |- p").unwrap();
        assert!(matches!(
            search_nd(&goal, cfg(5, false)),
            NdSearchOutcome::Exhausted { .. }
        ));
    }

    #[test]
    fn intuitionistic_theorems_are_found() {
        for s in ["p |- ~~p", "p * q |- q * p", "p & q |- q", "0, q |- r", "|- 1"] {
            let goal = parse_sequent(s).unwrap();
            match search_nd(&goal, cfg(5, false)) {
                NdSearchOutcome::Found(d) => {
                    assert!(check_nd(&d, CheckOptions::intuitionistic()).is_ok(), "{s}");
                    assert_eq!(d.conclusion, goal);
                }
                other => panic!("{s}: {other:?}"),
            }
        }
    }
}
