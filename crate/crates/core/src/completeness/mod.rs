//! Atomic mappings, simulation bases, deciding sequents through them, and
//! reading atomic derivations back as ND derivations.

mod decide;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::base::{AtomicDerivation, AtomicSequent, Base, ContextPattern, RuleSchema, SequentPattern, Step};
use crate::nd::{NdDerivation, NdRule};
use crate::syntax::{negate, subformula_closure, Atom, Formula, Sequent};

pub use decide::{decide, decide_with, DecideOutcome};

/// An injective map from a closed formula set to atoms, fixing atoms and ⊥.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicMapping {
    table: BTreeMap<Formula, Atom>,
    inverse: BTreeMap<Atom, Formula>,
}

impl AtomicMapping {
    pub fn atom(&self, phi: &Formula) -> Option<&Atom> {
        self.table.get(phi)
    }

    pub fn formula(&self, a: &Atom) -> Option<&Formula> {
        self.inverse.get(a)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Formula> {
        self.table.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Formula, &Atom)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// `p^φ`. Panics outside the domain.
    pub fn at(&self, phi: &Formula) -> Atom {
        self.table
            .get(phi)
            .unwrap_or_else(|| panic!("{phi} is outside the mapping's domain"))
            .clone()
    }

    pub fn map_sequent(&self, s: &Sequent) -> Option<AtomicSequent> {
        Some(AtomicSequent {
            context: s
                .context
                .iter()
                .map(|f| self.atom(f).cloned())
                .collect::<Option<_>>()?,
            conclusion: self.atom(&s.conclusion)?.clone(),
        })
    }
}

fn mapping_domain<'a>(pi: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut seed: Vec<&Formula> = pi.into_iter().collect();
    let bottom = Formula::bottom();
    seed.push(&bottom);
    subformula_closure(seed)
}

fn build_mapping(domain: BTreeSet<Formula>, order: impl FnOnce(&mut Vec<Formula>)) -> AtomicMapping {
    let mut used: BTreeSet<String> = BTreeSet::new();
    for f in &domain {
        let mut atoms = BTreeSet::new();
        f.atoms(&mut atoms);
        used.extend(atoms.iter().map(|a| a.name().to_string()));
    }
    let mut table = BTreeMap::new();
    let mut composite = Vec::new();
    for f in domain {
        match f.as_atom() {
            Some(a) => {
                table.insert(f.clone(), a.clone());
            }
            None => composite.push(f),
        }
    }
    order(&mut composite);
    let mut next = 1usize;
    for f in composite {
        let name = loop {
            let n = format!("s_{next}");
            next += 1;
            if !used.contains(&n) {
                break n;
            }
        };
        table.insert(f, Atom::new(&name));
    }
    let inverse = table.iter().map(|(f, a)| (a.clone(), f.clone())).collect();
    AtomicMapping { table, inverse }
}

/// Total on the subformula closure of `pi ∪ {⊥}`. Fresh atoms are `s_1`,
/// `s_2`, ... in formula order, skipping names already in use.
pub fn make_mapping<'a>(pi: impl IntoIterator<Item = &'a Formula>) -> AtomicMapping {
    build_mapping(mapping_domain(pi), |_| {})
}

/// Like [`make_mapping`] but assigns fresh names in a seeded random order.
pub fn make_mapping_seeded<'a>(pi: impl IntoIterator<Item = &'a Formula>, seed: u64) -> AtomicMapping {
    build_mapping(mapping_domain(pi), |v| {
        v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationBase {
    pub base: Base,
    pub mapping: AtomicMapping,
    pub formulas: BTreeSet<Formula>,
}

fn ctx(metas: &[&str], atoms: impl IntoIterator<Item = Atom>) -> ContextPattern {
    ContextPattern::new(metas, atoms)
}

fn pat(c: ContextPattern, concl: Atom) -> SequentPattern {
    SequentPattern::new(c, concl)
}

fn schema(name: NdRule, premises: Vec<SequentPattern>, conclusion: SequentPattern) -> RuleSchema {
    RuleSchema::new(name.name(), premises, conclusion)
}

pub fn build_simulation_base<'a>(pi: impl IntoIterator<Item = &'a Formula>) -> SimulationBase {
    let formulas: BTreeSet<Formula> = pi.into_iter().cloned().collect();
    let mapping = make_mapping(&formulas);
    build_simulation_base_with(formulas, mapping)
}

/// The schemas mirroring each ND rule at every formula of the mapping's
/// domain. Elimination schemas for ⊗, ⅋, ⊕ and 0 only have ⊥ minor premises.
pub fn build_simulation_base_with(formulas: BTreeSet<Formula>, mapping: AtomicMapping) -> SimulationBase {
    let p = |f: &Formula| mapping.at(f);
    let bot = Atom::bottom();
    let mut schemas = BTreeSet::new();
    let domain: Vec<Formula> = mapping.domain().cloned().collect();
    for phi in &domain {
        let pf = p(phi);
        if let Some(neg) = mapping.atom(&negate(phi)) {
            schemas.insert(schema(
                NdRule::Raa,
                vec![pat(ctx(&["G"], [neg.clone()]), bot.clone())],
                pat(ctx(&["G"], []), pf.clone()),
            ));
        }
        match phi {
            Formula::Top => {
                schemas.insert(schema(NdRule::TopI, vec![], pat(ctx(&["G"], []), pf)));
            }
            Formula::Zero => {
                schemas.insert(schema(
                    NdRule::ZeroE,
                    vec![pat(ctx(&["G"], []), pf)],
                    pat(ctx(&["G", "D"], []), bot.clone()),
                ));
            }
            Formula::One => {
                schemas.insert(schema(NdRule::OneI, vec![], pat(ctx(&[], []), pf.clone())));
                for psi in &domain {
                    let pp = p(psi);
                    schemas.insert(schema(
                        NdRule::OneE,
                        vec![pat(ctx(&["G"], []), pp.clone()), pat(ctx(&["D"], []), pf.clone())],
                        pat(ctx(&["G", "D"], []), pp),
                    ));
                }
            }
            Formula::Tensor(a, b) => {
                schemas.insert(schema(
                    NdRule::TensorI,
                    vec![pat(ctx(&["G"], []), p(a)), pat(ctx(&["D"], []), p(b))],
                    pat(ctx(&["G", "D"], []), pf.clone()),
                ));
                schemas.insert(schema(
                    NdRule::TensorE,
                    vec![
                        pat(ctx(&["G"], []), pf),
                        pat(ctx(&["D"], [p(a), p(b)]), bot.clone()),
                    ],
                    pat(ctx(&["G", "D"], []), bot.clone()),
                ));
            }
            Formula::With(a, b) => {
                schemas.insert(schema(
                    NdRule::WithI,
                    vec![pat(ctx(&["G"], []), p(a)), pat(ctx(&["G"], []), p(b))],
                    pat(ctx(&["G"], []), pf.clone()),
                ));
                schemas.insert(schema(
                    NdRule::WithE1,
                    vec![pat(ctx(&["G"], []), pf.clone())],
                    pat(ctx(&["G"], []), p(a)),
                ));
                schemas.insert(schema(
                    NdRule::WithE2,
                    vec![pat(ctx(&["G"], []), pf)],
                    pat(ctx(&["G"], []), p(b)),
                ));
            }
            Formula::Lolli(a, b) => {
                schemas.insert(schema(
                    NdRule::LolliI,
                    vec![pat(ctx(&["G"], [p(a)]), p(b))],
                    pat(ctx(&["G"], []), pf.clone()),
                ));
                schemas.insert(schema(
                    NdRule::LolliE,
                    vec![pat(ctx(&["G"], []), pf), pat(ctx(&["D"], []), p(a))],
                    pat(ctx(&["G", "D"], []), p(b)),
                ));
            }
            Formula::Par(a, b) => {
                schemas.insert(schema(
                    NdRule::ParI,
                    vec![pat(ctx(&["G"], [p(&negate(a)), p(&negate(b))]), bot.clone())],
                    pat(ctx(&["G"], []), pf.clone()),
                ));
                schemas.insert(schema(
                    NdRule::ParE,
                    vec![
                        pat(ctx(&["G"], []), pf),
                        pat(ctx(&["D"], [p(a)]), bot.clone()),
                        pat(ctx(&["T"], [p(b)]), bot.clone()),
                    ],
                    pat(ctx(&["G", "D", "T"], []), bot.clone()),
                ));
            }
            Formula::Plus(a, b) => {
                schemas.insert(schema(
                    NdRule::PlusI1,
                    vec![pat(ctx(&["G"], []), p(a))],
                    pat(ctx(&["G"], []), pf.clone()),
                ));
                schemas.insert(schema(
                    NdRule::PlusI2,
                    vec![pat(ctx(&["G"], []), p(b))],
                    pat(ctx(&["G"], []), pf.clone()),
                ));
                schemas.insert(schema(
                    NdRule::PlusE,
                    vec![
                        pat(ctx(&["G"], []), pf),
                        pat(ctx(&["D"], [p(a)]), bot.clone()),
                        pat(ctx(&["D"], [p(b)]), bot.clone()),
                    ],
                    pat(ctx(&["G", "D"], []), bot.clone()),
                ));
            }
            Formula::Atom(_) => {}
        }
    }
    SimulationBase {
        base: Base {
            rules: BTreeSet::new(),
            schemas,
        },
        mapping,
        formulas,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("atom {0} is outside the mapping's range")]
    UnmappedAtom(Atom),
    #[error("node labelled '{0}' does not correspond to an ND rule")]
    Structure(String),
}

/// Rewrites every atom `p^ψ` as `ψ` and every schema node as the ND rule of
/// the same name.
pub fn translate(d: &AtomicDerivation, sigma: &AtomicMapping) -> Result<NdDerivation, TranslateError> {
    let back = |a: &Atom| {
        sigma
            .formula(a)
            .cloned()
            .ok_or_else(|| TranslateError::UnmappedAtom(a.clone()))
    };
    let conclusion = Sequent {
        context: d
            .conclusion
            .context
            .iter()
            .map(back)
            .collect::<Result<_, _>>()?,
        conclusion: back(&d.conclusion.conclusion)?,
    };
    let rule = match &d.step {
        Step::Ax => NdRule::Ax,
        Step::Subs => NdRule::Subs,
        Step::Rule => return Err(TranslateError::Structure("Rule".into())),
        Step::Schema(name) => {
            NdRule::from_name(name).ok_or_else(|| TranslateError::Structure(name.clone()))?
        }
    };
    let premises = d
        .premises
        .iter()
        .map(|p| translate(p, sigma))
        .collect::<Result<_, _>>()?;
    Ok(NdDerivation::new(conclusion, rule, premises))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn mapping_of_an_atom() {
        let m = make_mapping([&f("p")]);
        assert_eq!(m.len(), 4);
        assert_eq!(m.at(&f("p")), Atom::new("p"));
        assert_eq!(m.at(&f("bot")), Atom::bottom());
        assert_eq!(m.at(&f("~p")).name(), "s_2");
        assert_eq!(m.at(&f("~bot")).name(), "s_1");
    }

    #[test]
    fn mapping_of_a_tensor() {
        let m = make_mapping([&f("p * q")]);
        // p, q, p*q, their negations, plus bot and ~bot
        assert_eq!(m.len(), 8);
        let fresh: BTreeSet<_> = m.entries().filter(|(k, _)| k.as_atom().is_none()).map(|(_, a)| a.clone()).collect();
        assert_eq!(fresh.len(), 5);
    }

    #[test]
    fn negation_is_syntactic() {
        let m = make_mapping([&f("p -o bot"), &f("~p")]);
        assert_eq!(m.len(), 4 + 1);
        assert_eq!(m.atom(&f("p -o bot")), m.atom(&f("~p")));
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let m = make_mapping([&f("s_1 * s_2")]);
        let names: BTreeSet<String> = m.entries().map(|(_, a)| a.name().to_string()).collect();
        assert_eq!(names.len(), m.len());
        assert_eq!(m.at(&f("s_1")).name(), "s_1");
    }

    #[test]
    fn seeded_mappings_are_injective_and_fix_atoms() {
        for seed in 0..5 {
            let m = make_mapping_seeded([&f("(p -o q) & ~r")], seed);
            let atoms: BTreeSet<_> = m.entries().map(|(_, a)| a.clone()).collect();
            assert_eq!(atoms.len(), m.len());
            assert_eq!(m.at(&f("q")), Atom::new("q"));
        }
        assert_ne!(make_mapping_seeded([&f("p * q")], 1), make_mapping_seeded([&f("p * q")], 2));
    }

    #[test]
    fn simulation_base_for_an_atom_has_only_negation_schemas() {
        let u = build_simulation_base([&f("p")]);
        let names: BTreeSet<&str> = u.base.schemas.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["LolliE", "LolliI", "Raa"].into_iter().collect());
        // Raa at p and at bot
        assert_eq!(u.base.schemas.iter().filter(|s| s.name == "Raa").count(), 2);
    }

    #[test]
    fn simulation_base_for_a_tensor() {
        let u = build_simulation_base([&f("p * q")]);
        let tensor_e = u.base.schemas.iter().find(|s| s.name == "TensorE").unwrap();
        let pt = u.mapping.at(&f("p * q"));
        assert_eq!(tensor_e.to_string(), format!("[TensorE] ?G |- {pt} ; ?D, p, q |- bot ==> ?D, ?G |- bot."));
        assert!(u.base.schemas.iter().any(|s| s.name == "TensorI"));
    }

    #[test]
    fn simulation_base_for_one() {
        let u = build_simulation_base([&f("1")]);
        let one_i = u.base.schemas.iter().find(|s| s.name == "OneI").unwrap();
        let p1 = u.mapping.at(&f("1"));
        assert_eq!(one_i.to_string(), format!("[OneI] ==> |- {p1}."));
    }

    #[test]
    fn translate_axiom() {
        let m = make_mapping([&f("p * q")]);
        let a = m.at(&f("p * q"));
        let nd = translate(&AtomicDerivation::axiom(a), &m).unwrap();
        assert_eq!(nd, NdDerivation::axiom(f("p * q")));
        assert_eq!(
            translate(&AtomicDerivation::axiom(Atom::new("zz")), &m),
            Err(TranslateError::UnmappedAtom(Atom::new("zz")))
        );
    }
}
