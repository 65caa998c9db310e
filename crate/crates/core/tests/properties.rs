//! Cross-module properties on randomly generated inputs.

use std::collections::BTreeSet;

use mall_bes::base::Budget;
use mall_bes::completeness::{decide, decide_with, make_mapping_seeded, translate, DecideOutcome};
use mall_bes::nd::{check_nd, normal_form_check, CheckOptions, NdDerivation};
use mall_bes::oracle::{prove_sequent, Verdict};
use mall_bes::support::{
    eval_clause, random, verify_witness, EvalLimits, ExtensionFamily, FamilyParams, SupportJudgment, SupportVerdict,
};
use mall_bes::syntax::{Atom, FormulaMultiset, Sequent};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pool() -> Vec<Atom> {
    ["p", "q", "r"].into_iter().map(Atom::new).collect()
}

fn random_sequent(seed: u64) -> Sequent {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = pool();
    let n = (seed % 3) as usize;
    let context: FormulaMultiset = (0..n).map(|_| random::formula(&mut rng, &pool, 4)).collect();
    Sequent {
        context,
        conclusion: random::formula(&mut rng, &pool, 5),
    }
}

fn random_judgment(seed: u64) -> (SupportJudgment, ExtensionFamily) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = random::default_pool();
    let base = random::base(&mut rng, &pool, 4);
    let ants: FormulaMultiset = (0..(seed % 2)).map(|_| random::formula(&mut rng, &pool, 3)).collect();
    let sup = random::multiset(&mut rng, &pool, 2);
    let phi = random::formula(&mut rng, &pool, 3);
    let fam = ExtensionFamily::generate(base.clone(), FamilyParams::default(), seed);
    (SupportJudgment::new(ants, sup, base, phi), fam)
}

fn limits() -> EvalLimits {
    EvalLimits {
        ctx_bound: 2,
        ..EvalLimits::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn decide_is_confirmed_by_oracle_and_checker(seed in any::<u64>()) {
        let s = random_sequent(seed);
        match decide(&s, Budget::default()) {
            DecideOutcome::Provable { derivation, simulation } => {
                prop_assert_eq!(prove_sequent(&s), Ok(Verdict::Provable));
                let d = translate(&derivation, &simulation.mapping).unwrap();
                prop_assert_eq!(&d.conclusion, &s);
                prop_assert!(check_nd(&d, CheckOptions::default()).is_ok());
                prop_assert!(normal_form_check(&d));
                prop_assert_eq!(NdDerivation::from_text(&d.to_text()).unwrap(), d);
            }
            DecideOutcome::Refuted => prop_assert_eq!(prove_sequent(&s), Ok(Verdict::Refuted)),
            DecideOutcome::NotFoundWithinBudget => {}
        }
    }

    #[test]
    fn verdict_ignores_fresh_names(seed in any::<u64>(), shuffle in any::<u64>()) {
        let s = random_sequent(seed);
        let formulas: BTreeSet<_> = s.context.iter().chain([&s.conclusion]).cloned().collect();
        let a = decide(&s, Budget::default()).is_provable();
        let b = decide_with(&s, make_mapping_seeded(&formulas, shuffle), Budget::default()).is_provable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn refutations_carry_verifiable_witnesses(seed in any::<u64>()) {
        let (j, fam) = random_judgment(seed);
        let e = eval_clause(&j, &fam, limits()).unwrap();
        if let SupportVerdict::Refuted(w) = &e.verdict {
            prop_assert_eq!(e.unsaturated, 0);
            prop_assert!(verify_witness(&fam, w, limits().derive), "{}", w);
        }
    }

    #[test]
    fn larger_families_only_add_refutations(seed in any::<u64>(), keep in 1usize..4) {
        let (j, fam) = random_judgment(seed);
        let sub = ExtensionFamily::from_members(fam.members[..keep].to_vec(), fam.vocabulary.clone()).unwrap();
        let big = eval_clause(&j, &fam, limits()).unwrap();
        let small = eval_clause(&j, &sub, limits()).unwrap();
        prop_assert!(!big.holds() || small.holds());
    }

    #[test]
    fn evaluation_is_deterministic(seed in any::<u64>()) {
        let (j, fam) = random_judgment(seed);
        prop_assert_eq!(eval_clause(&j, &fam, limits()).unwrap(), eval_clause(&j, &fam, limits()).unwrap());
    }
}
