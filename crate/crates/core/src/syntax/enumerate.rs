//! Exhaustive enumeration of small formulas and sequents.

use super::{Atom, Formula, FormulaMultiset, Sequent};

/// Leaves over the given atoms: the atoms, then `bot`, `1`, `0`, `top`.
pub fn leaves(atoms: &[Atom]) -> Vec<Formula> {
    let mut out: Vec<Formula> = atoms.iter().cloned().map(Formula::Atom).collect();
    out.extend([Formula::bottom(), Formula::One, Formula::Zero, Formula::Top]);
    out
}

/// `by_size[n]` lists every formula of size exactly `n`, for `n ≤ max_size`.
pub fn formulas_by_size(atoms: &[Atom], max_size: usize) -> Vec<Vec<Formula>> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return by_size;
    }
    by_size[1] = leaves(atoms);
    for n in 2..=max_size {
        let mut here = Vec::new();
        for l in 1..n - 1 {
            let r = n - 1 - l;
            for a in &by_size[l] {
                for b in &by_size[r] {
                    for make in [Formula::tensor, Formula::par, Formula::with, Formula::plus, Formula::lolli] {
                        here.push(make(a.clone(), b.clone()));
                    }
                }
            }
        }
        by_size[n] = here;
    }
    by_size
}

/// Every sequent with total size at most `max_total` and at most `max_ctx`
/// hypotheses, each exactly once, in a fixed order.
pub fn sequents_up_to(atoms: &[Atom], max_total: usize, max_ctx: usize) -> Vec<Sequent> {
    let by_size = formulas_by_size(atoms, max_total);
    let all: Vec<&Formula> = by_size.iter().flatten().collect();
    let mut out = Vec::new();
    let mut ctx: Vec<usize> = Vec::new();
    contexts(&all, 0, max_total, max_ctx, &mut ctx, &mut |ctx, used| {
        for c in by_size.iter().take(max_total - used + 1).flatten() {
            let context: FormulaMultiset = ctx.iter().map(|&i| all[i].clone()).collect();
            out.push(Sequent {
                context,
                conclusion: c.clone(),
            });
        }
    });
    out
}

/// Non-decreasing index sequences, so each multiset is visited once.
fn contexts(
    all: &[&Formula],
    from: usize,
    budget: usize,
    slots: usize,
    cur: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize], usize),
) {
    let used: usize = cur.iter().map(|&i| all[i].size()).sum();
    if used >= budget {
        return;
    }
    visit(cur, used);
    if slots == 0 {
        return;
    }
    for i in from..all.len() {
        if used + all[i].size() < budget {
            cur.push(i);
            contexts(all, i, budget, slots - 1, cur, visit);
            cur.pop();
        }
    }
}
