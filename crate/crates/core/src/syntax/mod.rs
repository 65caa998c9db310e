//! Formulas, atoms, multisets and sequents, with their concrete syntax.

mod enumerate;
mod formula;
mod multiset;
mod parse;

pub use formula::{
    negate, subformula_closure, Atom, AtomicMultiset, Formula, FormulaMultiset, Sequent,
};
pub use enumerate::{formulas_by_size, leaves, sequents_up_to};
pub use multiset::Multiset;
pub use parse::{parse_formula, parse_sequent, ParseError};

pub(crate) use parse::{Parser, Tok};

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["p", "q", "r", "x_1"]).prop_map(Formula::atom),
            Just(Formula::bottom()),
            Just(Formula::One),
            Just(Formula::Top),
            Just(Formula::Zero),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::tensor(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::par(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::with(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::plus(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::lolli(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_formula()) {
            let printed = f.to_string();
            prop_assert_eq!(parse_formula(&printed).unwrap(), f);
        }

        #[test]
        fn closure_stable_and_monotone(f in arb_formula(), g in arb_formula()) {
            let once = subformula_closure([&f]);
            // closing the subformula set again changes nothing; re-closing the
            // negations would add double negations, so that is only an inclusion
            let mut subs = std::collections::BTreeSet::new();
            f.subformulas(&mut subs);
            prop_assert_eq!(subformula_closure(subs.iter()), once.clone());
            let twice = subformula_closure(once.iter());
            prop_assert!(once.is_subset(&twice));
            let both = subformula_closure([&f, &g]);
            prop_assert!(once.is_subset(&both));
            prop_assert_eq!(subformula_closure([&f, &f]), once);
        }
    }
}
