//! Goal-directed proof search inside a simulation base.
//!
//! Goals are formula sequents `Γ ⊢ χ`; every step is an instance of a
//! simulation schema on the mapped atoms, so a successful search yields an
//! atomic derivation of `σΓ ⊢ σχ` directly. Right goals use their introduction
//! rule (exclusively when it is invertible) and otherwise fall back to Raa.
//! Goals `Γ ⊢ ⊥` first apply an invertible elimination (⊗, 1, ⊕, 0) on some
//! hypothesis, then try the &, ⅋ and ⊸ eliminations over all context splits.
//!
//! Goals repeated on the current branch are cut. Failures that do not depend
//! on an open ancestor are tabled, successes always are.

use std::collections::{HashMap, HashSet};

use super::{build_simulation_base_with, AtomicMapping, SimulationBase};
use crate::base::{verify_atomic, AtomicDerivation, AtomicSequent, Budget, Step};
use crate::nd::NdRule;
use crate::syntax::{negate, Formula, FormulaMultiset, Sequent};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecideOutcome {
    /// A verified derivation of the mapped sequent in the simulation base.
    Provable {
        derivation: AtomicDerivation,
        simulation: Box<SimulationBase>,
    },
    /// The search space was exhausted without any budget cut.
    Refuted,
    NotFoundWithinBudget,
}

impl DecideOutcome {
    pub fn is_provable(&self) -> bool {
        matches!(self, DecideOutcome::Provable { .. })
    }
}

pub fn decide(s: &Sequent, budget: Budget) -> DecideOutcome {
    let formulas = s.context.iter().chain([&s.conclusion]).cloned().collect();
    let mapping = super::make_mapping(&formulas);
    decide_in(s, build_simulation_base_with(formulas, mapping), budget)
}

/// Like [`decide`] with a caller-chosen mapping. Panics if the mapping does
/// not cover the subformula closure of `s`.
pub fn decide_with(s: &Sequent, mapping: AtomicMapping, budget: Budget) -> DecideOutcome {
    let formulas = s.context.iter().chain([&s.conclusion]).cloned().collect();
    let needed = super::mapping_domain(&formulas);
    assert!(
        needed.iter().all(|f| mapping.atom(f).is_some()),
        "mapping does not cover the sequent's closure"
    );
    decide_in(s, build_simulation_base_with(formulas, mapping), budget)
}

fn decide_in(s: &Sequent, simulation: SimulationBase, budget: Budget) -> DecideOutcome {
    let mut search = Search {
        m: &simulation.mapping,
        budget,
        nodes: 0,
        incomplete: false,
        stack: HashMap::new(),
        proven: HashMap::new(),
        refuted: HashSet::new(),
    };
    let goal = (s.context.clone(), s.conclusion.clone());
    match search.prove(&goal) {
        Ok(Res { found: Some(d), .. }) => {
            if let Err(v) = verify_atomic(&simulation.base, &d) {
                panic!("simulation search produced an invalid derivation: {v}");
            }
            DecideOutcome::Provable {
                derivation: d,
                simulation: Box::new(simulation),
            }
        }
        Ok(_) if !search.incomplete => DecideOutcome::Refuted,
        _ => DecideOutcome::NotFoundWithinBudget,
    }
}

type Goal = (FormulaMultiset, Formula);

struct OutOfNodes;

struct Res {
    found: Option<AtomicDerivation>,
    low: usize,
}

type Build<'a> = Box<dyn Fn(Vec<AtomicDerivation>) -> AtomicDerivation + 'a>;

struct Alt<'a> {
    subgoals: Vec<Goal>,
    build: Build<'a>,
}

struct Search<'m> {
    m: &'m AtomicMapping,
    budget: Budget,
    nodes: usize,
    incomplete: bool,
    /// Goals on the current branch with their stack index (from 1).
    stack: HashMap<Goal, usize>,
    proven: HashMap<Goal, AtomicDerivation>,
    refuted: HashSet<Goal>,
}

impl<'m> Search<'m> {
    fn seq(&self, ctx: &FormulaMultiset, concl: &Formula) -> AtomicSequent {
        AtomicSequent {
            context: ctx.map(|f| self.m.at(f)),
            conclusion: self.m.at(concl),
        }
    }

    fn prove(&mut self, g: &Goal) -> Result<Res, OutOfNodes> {
        if let Some(d) = self.proven.get(g) {
            return Ok(Res {
                found: Some(d.clone()),
                low: usize::MAX,
            });
        }
        if self.refuted.contains(g) {
            return Ok(Res {
                found: None,
                low: usize::MAX,
            });
        }
        if let Some(&i) = self.stack.get(g) {
            return Ok(Res { found: None, low: i });
        }
        if self.stack.len() >= self.budget.depth {
            self.incomplete = true;
            return Ok(Res { found: None, low: 0 });
        }
        self.nodes += 1;
        if self.nodes > self.budget.nodes {
            return Err(OutOfNodes);
        }
        let idx = self.stack.len() + 1;
        self.stack.insert(g.clone(), idx);
        let result = self.expand(g, idx);
        self.stack.remove(g);
        let res = result?;
        match &res.found {
            Some(d) => {
                self.proven.insert(g.clone(), d.clone());
            }
            None if res.low >= idx => {
                self.refuted.insert(g.clone());
            }
            None => {}
        }
        Ok(res)
    }

    fn expand(&mut self, g: &Goal, idx: usize) -> Result<Res, OutOfNodes> {
        let mut low = usize::MAX;
        for alt in alternatives(self, g) {
            let mut subs = Vec::with_capacity(alt.subgoals.len());
            for sg in &alt.subgoals {
                let r = self.prove(sg)?;
                low = low.min(r.low);
                match r.found {
                    Some(d) => subs.push(d),
                    None => break,
                }
            }
            if subs.len() == alt.subgoals.len() {
                return Ok(Res {
                    found: Some((alt.build)(subs)),
                    low: usize::MAX,
                });
            }
        }
        // a self-reference is not a dependency on an ancestor
        Ok(Res {
            found: None,
            low: if low >= idx { usize::MAX } else { low },
        })
    }
}

fn node(rule: NdRule, conclusion: AtomicSequent, premises: Vec<AtomicDerivation>) -> AtomicDerivation {
    AtomicDerivation {
        conclusion,
        step: Step::Schema(rule.name().to_string()),
        premises,
    }
}

fn subs(left: AtomicDerivation, right: AtomicDerivation) -> AtomicDerivation {
    AtomicDerivation::subs(left, right).expect("cut atom present by construction")
}

fn alternatives<'a>(s: &Search<'a>, g: &Goal) -> Vec<Alt<'a>> {
    let (ctx, chi) = g;
    let m = s.m;
    let concl = s.seq(ctx, chi);
    let ax = |f: &Formula| AtomicDerivation::axiom(m.at(f));
    let leaf = |d: AtomicDerivation| Alt {
        subgoals: vec![],
        build: Box::new(move |_| d.clone()),
    };
    if ctx.len() == 1 && ctx.contains(chi) {
        return vec![leaf(ax(chi))];
    }
    let bot = Formula::bottom();
    let mut out = Vec::new();
    if !chi.is_bottom() {
        let intro = |rule: NdRule, subgoals: Vec<Goal>, concl: AtomicSequent| Alt {
            subgoals,
            build: Box::new(move |ps| node(rule, concl.clone(), ps)),
        };
        match chi {
            Formula::Top => return vec![leaf(node(NdRule::TopI, concl, vec![]))],
            Formula::One if ctx.is_empty() => return vec![leaf(node(NdRule::OneI, concl, vec![]))],
            Formula::With(a, b) => {
                return vec![intro(
                    NdRule::WithI,
                    vec![(ctx.clone(), (**a).clone()), (ctx.clone(), (**b).clone())],
                    concl,
                )]
            }
            Formula::Lolli(a, b) => {
                return vec![intro(NdRule::LolliI, vec![(ctx.with((**a).clone()), (**b).clone())], concl)]
            }
            Formula::Par(a, b) => {
                let c = ctx.with(negate(a)).with(negate(b));
                return vec![intro(NdRule::ParI, vec![(c, bot)], concl)];
            }
            Formula::Tensor(a, b) => {
                for (l, r) in ctx.splits() {
                    out.push(intro(
                        NdRule::TensorI,
                        vec![(l, (**a).clone()), (r, (**b).clone())],
                        concl.clone(),
                    ));
                }
            }
            Formula::Plus(a, b) => {
                out.push(intro(NdRule::PlusI1, vec![(ctx.clone(), (**a).clone())], concl.clone()));
                out.push(intro(NdRule::PlusI2, vec![(ctx.clone(), (**b).clone())], concl.clone()));
            }
            _ => {}
        }
        out.push(intro(NdRule::Raa, vec![(ctx.with(negate(chi)), bot)], concl));
        return out;
    }

    // goal ⊥: an invertible elimination if one applies
    for h in ctx.distinct() {
        let rest = ctx.without(h).expect("member");
        let concl = concl.clone();
        let hd = ax(h);
        match h {
            Formula::Zero => return vec![leaf(node(NdRule::ZeroE, concl, vec![hd]))],
            Formula::One => {
                return vec![Alt {
                    subgoals: vec![(rest, bot)],
                    build: Box::new(move |mut ps| node(NdRule::OneE, concl.clone(), vec![ps.remove(0), hd.clone()])),
                }]
            }
            Formula::Tensor(a, b) => {
                let c = rest.with((**a).clone()).with((**b).clone());
                return vec![Alt {
                    subgoals: vec![(c, bot)],
                    build: Box::new(move |mut ps| node(NdRule::TensorE, concl.clone(), vec![hd.clone(), ps.remove(0)])),
                }];
            }
            Formula::Plus(a, b) => {
                return vec![Alt {
                    subgoals: vec![(rest.with((**a).clone()), bot.clone()), (rest.with((**b).clone()), bot)],
                    build: Box::new(move |ps| {
                        let mut prem = vec![hd.clone()];
                        prem.extend(ps);
                        node(NdRule::PlusE, concl.clone(), prem)
                    }),
                }];
            }
            _ => {}
        }
    }

    for h in ctx.distinct() {
        let rest = ctx.without(h).expect("member");
        match h {
            Formula::With(a, b) => {
                for (rule, side) in [(NdRule::WithE1, a), (NdRule::WithE2, b)] {
                    let elim = node(rule, s.seq(&FormulaMultiset::singleton(h.clone()), side), vec![ax(h)]);
                    out.push(Alt {
                        subgoals: vec![(rest.with((**side).clone()), bot.clone())],
                        build: Box::new(move |mut ps| subs(elim.clone(), ps.remove(0))),
                    });
                }
            }
            Formula::Par(a, b) => {
                for (d, t) in rest.splits() {
                    let concl = concl.clone();
                    let hd = ax(h);
                    out.push(Alt {
                        subgoals: vec![(d.with((**a).clone()), bot.clone()), (t.with((**b).clone()), bot.clone())],
                        build: Box::new(move |ps| {
                            let mut prem = vec![hd.clone()];
                            prem.extend(ps);
                            node(NdRule::ParE, concl.clone(), prem)
                        }),
                    });
                }
            }
            Formula::Lolli(a, b) => {
                for (d, p) in rest.splits() {
                    let hd = ax(h);
                    let elim_concl = s.seq(&d.with(h.clone()), b);
                    if b.is_bottom() && p.is_empty() {
                        out.push(Alt {
                            subgoals: vec![(d, (**a).clone())],
                            build: Box::new(move |mut ps| node(NdRule::LolliE, elim_concl.clone(), vec![hd.clone(), ps.remove(0)])),
                        });
                    } else {
                        out.push(Alt {
                            subgoals: vec![(d, (**a).clone()), (p.with((**b).clone()), bot.clone())],
                            build: Box::new(move |mut ps| {
                                let right = ps.pop().expect("two premises");
                                let left = node(NdRule::LolliE, elim_concl.clone(), vec![hd.clone(), ps.remove(0)]);
                                subs(left, right)
                            }),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completeness::{make_mapping_seeded, translate};
    use crate::nd::{check_nd, normal_form_check, CheckOptions};
    use crate::syntax::parse_sequent;

    fn run(s: &str) -> DecideOutcome {
        decide(&parse_sequent(s).unwrap(), Budget::default())
    }

    fn nd_of(s: &str) -> crate::nd::NdDerivation {
        match run(s) {
            DecideOutcome::Provable { derivation, simulation } => translate(&derivation, &simulation.mapping).unwrap(),
            other => panic!("{s}: {other:?}"),
        }
    }

    #[test]
    fn double_negation_elimination() {
        let nd = nd_of("~~p |- p");
        assert_eq!(nd.conclusion, parse_sequent("~~p |- p").unwrap());
        assert!(nd.count_rule(NdRule::Raa) >= 1);
        assert_eq!(check_nd(&nd, CheckOptions::default()), Ok(()));
        assert!(normal_form_check(&nd));
    }

    #[test]
    fn contraction_is_refuted() {
        assert_eq!(run("p |- p * p"), DecideOutcome::Refuted);
        assert_eq!(run("p * p |- p"), DecideOutcome::Refuted);
        assert_eq!(run("|- p"), DecideOutcome::Refuted);
        // needs contraction on p
        assert_eq!(run("|- ((p -o q) -o p) -o p"), DecideOutcome::Refuted);
    }

    #[test]
    fn classical_theorems() {
        for s in [
            "|- p | ~p",
            "|- ~~p -o p",
            "p | q |- q | p",
            "~(p & q) |- ~p + ~q",
            "p -o q |- ~q -o ~p",
            "~q -o ~p |- p -o q",
            "p * (q + r) |- (p * q) + (p * r)",
            "0 |- q",
            "p, q |- top",
            "1, p |- p",
            "p |- 1 * p",
            "bot |- bot",
            "|- ~bot",
        ] {
            let nd = nd_of(s);
            assert_eq!(check_nd(&nd, CheckOptions::default()), Ok(()), "{s}");
            assert!(normal_form_check(&nd), "{s}");
        }
    }

    #[test]
    fn verdict_is_independent_of_the_mapping() {
        for s in ["~~p |- p", "p |- p * p", "p & q |- q + p", "|- p | ~p", "p, ~p |- q"] {
            let seq = parse_sequent(s).unwrap();
            let formulas: Vec<Formula> = seq.context.iter().chain([&seq.conclusion]).cloned().collect();
            let base = decide(&seq, Budget::default()).is_provable();
            for seed in 0..4 {
                let m = make_mapping_seeded(&formulas, seed);
                let out = decide_with(&seq, m.clone(), Budget::default());
                assert_eq!(out.is_provable(), base, "{s} seed {seed}");
                if let DecideOutcome::Provable { derivation, .. } = out {
                    assert_eq!(translate(&derivation, &m).unwrap().conclusion, seq);
                }
            }
        }
    }

    #[test]
    fn node_budget_is_reported() {
        let out = decide(
            &parse_sequent("~~p |- p").unwrap(),
            Budget { depth: 24, nodes: 1 },
        );
        assert_eq!(out, DecideOutcome::NotFoundWithinBudget);
    }
}
