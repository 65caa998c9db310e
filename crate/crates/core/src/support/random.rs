//! Seeded generators for bases, formulas and multisets.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::base::{AtomicRule, AtomicSequent, Base};
use crate::syntax::{Atom, AtomicMultiset, Formula};

pub fn default_pool() -> Vec<Atom> {
    ["p", "q", "r", "s"].iter().map(|a| Atom::new(a)).collect()
}

fn atom_or_bottom<R: Rng>(rng: &mut R, pool: &[Atom]) -> Atom {
    // ⊥ about as often as any pool atom
    if rng.gen_range(0..=pool.len()) == 0 {
        Atom::bottom()
    } else {
        pool.choose(rng).expect("nonempty pool").clone()
    }
}

pub fn multiset<R: Rng>(rng: &mut R, pool: &[Atom], max: usize) -> AtomicMultiset {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| atom_or_bottom(rng, pool)).collect()
}

pub fn sequent<R: Rng>(rng: &mut R, pool: &[Atom], max_ctx: usize) -> AtomicSequent {
    AtomicSequent {
        context: multiset(rng, pool, max_ctx),
        conclusion: atom_or_bottom(rng, pool),
    }
}

/// At most `max_premises` premises, contexts of at most `max_ctx` atoms.
pub fn rule<R: Rng>(rng: &mut R, pool: &[Atom], max_premises: usize, max_ctx: usize) -> AtomicRule {
    let n = rng.gen_range(0..=max_premises);
    AtomicRule {
        premises: (0..n).map(|_| sequent(rng, pool, max_ctx)).collect(),
        conclusion: sequent(rng, pool, max_ctx),
    }
}

/// A base of at most `max_rules` rules with at most 2 premises each.
pub fn base<R: Rng>(rng: &mut R, pool: &[Atom], max_rules: usize) -> Base {
    let n = rng.gen_range(0..=max_rules);
    Base::default().with_rules((0..n).map(|_| rule(rng, pool, 2, 2)))
}

/// Formulas of at most `max_size` atoms, units and connectives.
pub fn formula<R: Rng>(rng: &mut R, pool: &[Atom], max_size: usize) -> Formula {
    if max_size < 3 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..8) {
            0 => Formula::One,
            1 => Formula::Top,
            2 => Formula::Zero,
            _ => Formula::Atom(atom_or_bottom(rng, pool)),
        };
    }
    let left = rng.gen_range(1..=max_size - 2);
    let a = formula(rng, pool, left);
    let b = formula(rng, pool, max_size - 1 - a.size());
    match rng.gen_range(0..5) {
        0 => Formula::tensor(a, b),
        1 => Formula::par(a, b),
        2 => Formula::with(a, b),
        3 => Formula::plus(a, b),
        _ => Formula::lolli(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_bounds() {
        let pool = default_pool();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let b = base(&mut rng, &pool, 4);
            assert!(b.rules.len() <= 4);
            for r in &b.rules {
                assert!(r.premises.len() <= 2);
                assert!(r.premises.iter().chain([&r.conclusion]).all(|s| s.context.len() <= 2));
            }
            assert!(formula(&mut rng, &pool, 5).size() <= 5);
            assert!(multiset(&mut rng, &pool, 2).len() <= 2);
        }
    }

    #[test]
    fn generators_are_seeded() {
        let pool = default_pool();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (base(&mut rng, &pool, 4), formula(&mut rng, &pool, 5))
        };
        assert_eq!(draw(9), draw(9));
    }
}
