use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::multiset::Multiset;

const BOTTOM_NAME: &str = "bot";

/// A propositional atom. The name `bot` is reserved for the distinguished
/// atom ⊥; the parser never produces an ordinary atom with that name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Self {
        Atom(Arc::from(name))
    }

    pub fn bottom() -> Self {
        Atom(Arc::from(BOTTOM_NAME))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_bottom(&self) -> bool {
        &*self.0 == BOTTOM_NAME
    }

    /// Whether `name` is usable as an ordinary atom in the concrete syntax.
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
            && !matches!(name, "bot" | "top")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type AtomicMultiset = Multiset<Atom>;

/// MALL formulas. ⊥ is `Atom(Atom::bottom())`; there is no separate
/// constructor for it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Tensor(Arc<Formula>, Arc<Formula>),
    Par(Arc<Formula>, Arc<Formula>),
    With(Arc<Formula>, Arc<Formula>),
    Plus(Arc<Formula>, Arc<Formula>),
    Lolli(Arc<Formula>, Arc<Formula>),
    One,
    Top,
    Zero,
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(Atom::new(name))
    }

    pub fn bottom() -> Self {
        Formula::Atom(Atom::bottom())
    }

    pub fn tensor(a: Formula, b: Formula) -> Self {
        Formula::Tensor(Arc::new(a), Arc::new(b))
    }

    pub fn par(a: Formula, b: Formula) -> Self {
        Formula::Par(Arc::new(a), Arc::new(b))
    }

    pub fn with(a: Formula, b: Formula) -> Self {
        Formula::With(Arc::new(a), Arc::new(b))
    }

    pub fn plus(a: Formula, b: Formula) -> Self {
        Formula::Plus(Arc::new(a), Arc::new(b))
    }

    pub fn lolli(a: Formula, b: Formula) -> Self {
        Formula::Lolli(Arc::new(a), Arc::new(b))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Formula::Atom(a) if a.is_bottom())
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// If this formula is `φ ⊸ ⊥`, returns `φ`.
    pub fn negated_body(&self) -> Option<&Formula> {
        match self {
            Formula::Lolli(a, b) if b.is_bottom() => Some(a),
            _ => None,
        }
    }

    /// Number of atoms, units and connectives.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::One | Formula::Top | Formula::Zero => 1,
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b)
            | Formula::Lolli(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn children(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b)
            | Formula::Lolli(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            if let Some((a, b)) = self.children() {
                a.subformulas(out);
                b.subformulas(out);
            }
        }
    }

    pub fn atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            _ => {
                if let Some((a, b)) = self.children() {
                    a.atoms(out);
                    b.atoms(out);
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Lolli(_, b) if b.is_bottom() => 5,
            Formula::Lolli(..) => 0,
            Formula::Plus(..) => 1,
            Formula::With(..) => 2,
            Formula::Par(..) => 3,
            Formula::Tensor(..) => 4,
            _ => 6,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let paren = prec < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::One => f.write_str("1")?,
            Formula::Top => f.write_str("top")?,
            Formula::Zero => f.write_str("0")?,
            Formula::Lolli(a, b) if b.is_bottom() => {
                f.write_str("~")?;
                a.write_at(f, 5)?;
            }
            Formula::Lolli(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" -o ")?;
                b.write_at(f, 0)?;
            }
            Formula::Tensor(a, b) => binary(f, a, b, " * ", prec)?,
            Formula::Par(a, b) => binary(f, a, b, " | ", prec)?,
            Formula::With(a, b) => binary(f, a, b, " & ", prec)?,
            Formula::Plus(a, b) => binary(f, a, b, " + ", prec)?,
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn binary(f: &mut fmt::Formatter<'_>, a: &Formula, b: &Formula, op: &str, prec: u8) -> fmt::Result {
    a.write_at(f, prec)?;
    f.write_str(op)?;
    b.write_at(f, prec + 1)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `φ ⊸ ⊥`. No double-negation collapse.
pub fn negate(phi: &Formula) -> Formula {
    Formula::lolli(phi.clone(), Formula::bottom())
}

/// Every subformula of every member, together with the negation of each.
pub fn subformula_closure<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut subs = BTreeSet::new();
    for f in formulas {
        f.subformulas(&mut subs);
    }
    let negs: Vec<Formula> = subs.iter().map(negate).collect();
    subs.extend(negs);
    subs
}

pub type FormulaMultiset = Multiset<Formula>;

/// `Γ ⊢ φ` with `Γ` a multiset of formulas.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub context: FormulaMultiset,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(context: impl IntoIterator<Item = Formula>, conclusion: Formula) -> Self {
        Sequent {
            context: context.into_iter().collect(),
            conclusion,
        }
    }

    pub fn size(&self) -> usize {
        self.context.iter().map(Formula::size).sum::<usize>() + self.conclusion.size()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.is_empty() {
            write!(f, "|- {}", self.conclusion)
        } else {
            write!(f, "{} |- {}", self.context, self.conclusion)
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn negate_is_lolli_bottom() {
        assert_eq!(negate(&p()), Formula::lolli(p(), Formula::bottom()));
        assert_eq!(
            negate(&Formula::bottom()),
            Formula::lolli(Formula::bottom(), Formula::bottom())
        );
        let nn = negate(&negate(&p()));
        assert_eq!(
            nn,
            Formula::lolli(Formula::lolli(p(), Formula::bottom()), Formula::bottom())
        );
    }

    #[test]
    fn closure_of_tensor() {
        let t = Formula::tensor(p(), q());
        let got = subformula_closure([&t]);
        let want: BTreeSet<Formula> = [p(), q(), t.clone(), negate(&p()), negate(&q()), negate(&t)]
            .into_iter()
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn closure_of_atom() {
        let got = subformula_closure([&p()]);
        let want: BTreeSet<Formula> = [p(), negate(&p())].into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn closure_of_negation_dedups() {
        // subtrees of p -o bot: {p, bot, ~p}; negations: ~p (dup), ~bot, ~~p
        let np = negate(&p());
        let got = subformula_closure([&np]);
        let want: BTreeSet<Formula> = [
            p(),
            Formula::bottom(),
            np.clone(),
            negate(&Formula::bottom()),
            negate(&np),
        ]
        .into_iter()
        .collect();
        assert_eq!(got.len(), 5);
        assert_eq!(got, want);
    }

    #[test]
    fn bottom_has_one_representation() {
        assert!(Formula::bottom().is_bottom());
        assert_eq!(Formula::bottom(), Formula::Atom(Atom::bottom()));
        assert!(!Atom::is_valid_name("bot"));
    }
}
