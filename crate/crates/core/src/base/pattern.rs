use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{Atom, AtomicMultiset, Multiset};

/// A context metavariable, written `?G` in the base file format.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Meta(pub String);

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Debug for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub type Bindings = BTreeMap<Meta, AtomicMultiset>;

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextPattern {
    pub metas: Multiset<Meta>,
    pub atoms: AtomicMultiset,
}

fn scale(x: &AtomicMultiset, n: u32) -> AtomicMultiset {
    let mut out = AtomicMultiset::new();
    for (a, k) in x.entries() {
        out.insert_n(a.clone(), k * n);
    }
    out
}

impl ContextPattern {
    pub fn new(metas: &[&str], atoms: impl IntoIterator<Item = Atom>) -> Self {
        ContextPattern {
            metas: metas.iter().map(|m| Meta(m.to_string())).collect(),
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn instantiate(&self, b: &Bindings) -> Option<AtomicMultiset> {
        let mut out = self.atoms.clone();
        for (m, n) in self.metas.entries() {
            out = out.union(&scale(b.get(m)?, *n));
        }
        Some(out)
    }

    /// Every extension of `bound` under which this pattern instantiates to
    /// exactly `target`.
    pub fn match_against(&self, target: &AtomicMultiset, bound: &Bindings) -> Vec<Bindings> {
        let Some(mut rest) = target.difference(&self.atoms) else {
            return vec![];
        };
        let mut open = Vec::new();
        for (m, n) in self.metas.entries() {
            match bound.get(m) {
                Some(x) => match rest.difference(&scale(x, *n)) {
                    Some(r) => rest = r,
                    None => return vec![],
                },
                None => open.push((m.clone(), *n)),
            }
        }
        let mut out = Vec::new();
        assign(&open, rest, bound.clone(), &mut out);
        out
    }
}

fn assign(open: &[(Meta, u32)], rest: AtomicMultiset, b: Bindings, out: &mut Vec<Bindings>) {
    let Some(((m, n), tail)) = open.split_first() else {
        if rest.is_empty() {
            out.push(b);
        }
        return;
    };
    let choices = if tail.is_empty() {
        // the last open metavariable takes everything that is left
        let mut x = AtomicMultiset::new();
        for (a, k) in rest.entries() {
            if k % n != 0 {
                return;
            }
            x.insert_n(a.clone(), k / n);
        }
        vec![x]
    } else {
        rest.submultisets()
            .into_iter()
            .filter(|x| scale(x, *n).is_submultiset_of(&rest))
            .collect()
    };
    for x in choices {
        let r = rest.difference(&scale(&x, *n)).expect("checked");
        let mut b2 = b.clone();
        b2.insert(m.clone(), x);
        assign(tail, r, b2, out);
    }
}

impl fmt::Display for ContextPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for m in self.metas.iter() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{m}")?;
        }
        for a in self.atoms.iter() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SequentPattern {
    pub context: ContextPattern,
    pub conclusion: Atom,
}

impl SequentPattern {
    pub fn new(context: ContextPattern, conclusion: Atom) -> Self {
        SequentPattern {
            context,
            conclusion,
        }
    }

    pub fn instantiate(&self, b: &Bindings) -> Option<super::AtomicSequent> {
        Some(super::AtomicSequent {
            context: self.context.instantiate(b)?,
            conclusion: self.conclusion.clone(),
        })
    }
}

impl fmt::Display for SequentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.metas.is_empty() && self.context.atoms.is_empty() {
            write!(f, "|- {}", self.conclusion)
        } else {
            write!(f, "{} |- {}", self.context, self.conclusion)
        }
    }
}

impl fmt::Debug for SequentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
