//! Atomic systems: rules over atomic sequents, schematic rules with context
//! metavariables, extensions, and derivability.

mod engine;
mod file;
mod pattern;
mod verify;

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{Atom, AtomicMultiset, Parser, ParseError, Tok};

pub use engine::{derive_atomic, Budget, DeriveOutcome, Engine};
pub use file::{parse_base, BaseFileError};
pub use pattern::{Bindings, ContextPattern, Meta, SequentPattern};
pub use verify::{verify_atomic, AtomicViolation};

/// `Γ_At ⊢ p`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicSequent {
    pub context: AtomicMultiset,
    pub conclusion: Atom,
}

impl AtomicSequent {
    pub fn new(context: impl IntoIterator<Item = Atom>, conclusion: Atom) -> Self {
        AtomicSequent {
            context: context.into_iter().collect(),
            conclusion,
        }
    }

    pub fn is_axiom(&self) -> bool {
        self.context.len() == 1 && self.context.contains(&self.conclusion)
    }

    pub fn atoms(&self, out: &mut BTreeSet<Atom>) {
        out.extend(self.context.distinct().cloned());
        out.insert(self.conclusion.clone());
    }
}

impl fmt::Display for AtomicSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.is_empty() {
            write!(f, "|- {}", self.conclusion)
        } else {
            write!(f, "{} |- {}", self.context, self.conclusion)
        }
    }
}

impl fmt::Debug for AtomicSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn parse_atomic_sequent(text: &str) -> Result<AtomicSequent, ParseError> {
    let mut p = Parser::new(text)?;
    let context = p.atom_list()?;
    p.expect(&Tok::Turnstile, "'|-'")?;
    let conclusion = p.atom()?;
    p.finish()?;
    Ok(AtomicSequent {
        context,
        conclusion,
    })
}

/// A concrete rule. No premises means axiomatic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicRule {
    pub premises: Vec<AtomicSequent>,
    pub conclusion: AtomicSequent,
}

impl AtomicRule {
    pub fn axiom(conclusion: AtomicSequent) -> Self {
        AtomicRule {
            premises: vec![],
            conclusion,
        }
    }

    pub fn new(premises: Vec<AtomicSequent>, conclusion: AtomicSequent) -> Self {
        AtomicRule {
            premises,
            conclusion,
        }
    }
}

fn write_rule<P: fmt::Display, C: fmt::Display>(f: &mut fmt::Formatter<'_>, premises: &[P], conclusion: &C) -> fmt::Result {
    for (i, p) in premises.iter().enumerate() {
        if i > 0 {
            f.write_str(" ; ")?;
        }
        write!(f, "{p}")?;
    }
    if !premises.is_empty() {
        f.write_str(" ==> ")?;
    }
    write!(f, "{conclusion}.")
}

impl fmt::Display for AtomicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rule(f, &self.premises, &self.conclusion)
    }
}

impl fmt::Debug for AtomicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A rule over sequent patterns. Instantiating every metavariable with an
/// atomic multiset yields an [`AtomicRule`]. Metavariables that occur only in
/// premises are fresh.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleSchema {
    pub name: String,
    pub premises: Vec<SequentPattern>,
    pub conclusion: SequentPattern,
}

impl RuleSchema {
    pub fn new(name: &str, premises: Vec<SequentPattern>, conclusion: SequentPattern) -> Self {
        RuleSchema {
            name: name.to_string(),
            premises,
            conclusion,
        }
    }

    pub fn conclusion_metas(&self) -> BTreeSet<Meta> {
        self.conclusion.context.metas.distinct().cloned().collect()
    }

    pub fn fresh_metas(&self) -> BTreeSet<Meta> {
        let bound = self.conclusion_metas();
        self.premises
            .iter()
            .flat_map(|p| p.context.metas.distinct().cloned())
            .filter(|m| !bound.contains(m))
            .collect()
    }

    /// Whether some conclusion metavariable occurs more than once.
    pub fn has_repeated_conclusion_meta(&self) -> bool {
        self.conclusion.context.metas.entries().iter().any(|(_, n)| *n > 1)
    }

    pub fn instantiate(&self, b: &Bindings) -> Option<AtomicRule> {
        Some(AtomicRule {
            premises: self
                .premises
                .iter()
                .map(|p| p.instantiate(b))
                .collect::<Option<_>>()?,
            conclusion: self.conclusion.instantiate(b)?,
        })
    }

    pub fn atoms(&self, out: &mut BTreeSet<Atom>) {
        for p in self.premises.iter().chain([&self.conclusion]) {
            out.extend(p.context.atoms.distinct().cloned());
            out.insert(p.conclusion.clone());
        }
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.name)?;
        if self.premises.is_empty() {
            f.write_str("==> ")?;
        }
        write_rule(f, &self.premises, &self.conclusion)
    }
}

impl fmt::Debug for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A base. Ax and Subs are implicit and never stored.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Base {
    pub rules: BTreeSet<AtomicRule>,
    pub schemas: BTreeSet<RuleSchema>,
}

impl Base {
    pub fn with_rule(&self, r: AtomicRule) -> Base {
        let mut b = self.clone();
        b.rules.insert(r);
        b
    }

    pub fn with_rules(&self, rs: impl IntoIterator<Item = AtomicRule>) -> Base {
        let mut b = self.clone();
        b.rules.extend(rs);
        b
    }

    pub fn union(&self, other: &Base) -> Base {
        let mut b = self.clone();
        b.rules.extend(other.rules.iter().cloned());
        b.schemas.extend(other.schemas.iter().cloned());
        b
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.schemas.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rules.len() + self.schemas.len()
    }

    /// Every atom mentioned by a rule or schema.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            for s in r.premises.iter().chain([&r.conclusion]) {
                s.atoms(&mut out);
            }
        }
        for s in &self.schemas {
            s.atoms(&mut out);
        }
        out
    }

    /// One rule per line in the base file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        for s in &self.schemas {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.rules.iter().map(|r| r as &dyn fmt::Debug))
            .entries(self.schemas.iter().map(|s| s as &dyn fmt::Debug))
            .finish()
    }
}

/// The base with no rules of its own.
pub fn structural_base() -> Base {
    Base::default()
}

/// Whether `c` contains every rule and schema of `b`.
pub fn is_extension(c: &Base, b: &Base) -> bool {
    b.rules.is_subset(&c.rules) && b.schemas.is_subset(&c.schemas)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Ax,
    Subs,
    /// A concrete rule of the base.
    Rule,
    /// An instance of the named schema.
    Schema(String),
}

impl Step {
    pub fn label(&self) -> &str {
        match self {
            Step::Ax => "Ax",
            Step::Subs => "Subs",
            Step::Rule => "Rule",
            Step::Schema(n) => n,
        }
    }

    fn from_label(l: &str) -> Step {
        match l {
            "Ax" => Step::Ax,
            "Subs" => Step::Subs,
            "Rule" => Step::Rule,
            other => Step::Schema(other.to_string()),
        }
    }
}

impl fmt::Debug for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomicDerivation {
    pub conclusion: AtomicSequent,
    pub step: Step,
    pub premises: Vec<AtomicDerivation>,
}

impl AtomicDerivation {
    pub fn axiom(p: Atom) -> Self {
        AtomicDerivation {
            conclusion: AtomicSequent::new([p.clone()], p),
            step: Step::Ax,
            premises: vec![],
        }
    }

    /// Composes `left : Γ ⊢ p` into `right : Π, p ⊢ r`.
    pub fn subs(left: AtomicDerivation, right: AtomicDerivation) -> Option<Self> {
        let rest = right.conclusion.context.without(&left.conclusion.conclusion)?;
        Some(AtomicDerivation {
            conclusion: AtomicSequent {
                context: left.conclusion.context.union(&rest),
                conclusion: right.conclusion.conclusion.clone(),
            },
            step: Step::Subs,
            premises: vec![left, right],
        })
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(AtomicDerivation::size).sum::<usize>()
    }

    pub fn to_node(&self) -> crate::sexpr::Node {
        crate::sexpr::Node {
            label: self.step.label().to_string(),
            text: self.conclusion.to_string(),
            children: self.premises.iter().map(AtomicDerivation::to_node).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        crate::sexpr::render(&self.to_node())
    }

    pub fn from_node(node: &crate::sexpr::Node) -> Result<Self, crate::nd::FormatError> {
        Ok(AtomicDerivation {
            conclusion: parse_atomic_sequent(&node.text)?,
            step: Step::from_label(&node.label),
            premises: node
                .children
                .iter()
                .map(AtomicDerivation::from_node)
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn from_text(src: &str) -> Result<Self, crate::nd::FormatError> {
        AtomicDerivation::from_node(&crate::sexpr::parse(src)?)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const UMBRELLA: &str = "\
# rain and umbrellas
l |- r.
r |- p.
l |- p ==> |- u.
";

    pub(crate) fn umbrella() -> Base {
        parse_base(UMBRELLA).unwrap()
    }

    #[test]
    fn structural_base_is_empty_and_extended_by_all() {
        let s = structural_base();
        assert!(s.is_empty());
        let b = umbrella();
        assert!(is_extension(&b, &s));
        assert!(is_extension(&b, &b));
        assert!(!is_extension(&s, &b));
        let r = AtomicRule::axiom(parse_atomic_sequent("|- q").unwrap());
        assert!(is_extension(&b.with_rule(r), &b));
    }

    #[test]
    fn base_text_round_trip() {
        let b = umbrella();
        assert_eq!(b.rules.len(), 3);
        assert_eq!(parse_base(&b.to_text()).unwrap(), b);
        let atoms: Vec<String> = b.atoms().iter().map(|a| a.to_string()).collect();
        assert_eq!(atoms, ["l", "p", "r", "u"]);
    }

    #[test]
    fn atomic_sequent_syntax() {
        let s = parse_atomic_sequent("l, l |- bot").unwrap();
        assert_eq!(s.context.count(&Atom::new("l")), 2);
        assert!(s.conclusion.is_bottom());
        assert_eq!(s.to_string(), "l, l |- bot");
        assert!(parse_atomic_sequent("p * q |- r").is_err());
        assert!(parse_atomic_sequent("|- top").is_err());
    }

    #[test]
    fn derivation_text_round_trip() {
        let d = AtomicDerivation::subs(
            AtomicDerivation::axiom(Atom::new("p")),
            AtomicDerivation::axiom(Atom::new("p")),
        )
        .unwrap();
        assert_eq!(d.conclusion.to_string(), "p |- p");
        assert_eq!(AtomicDerivation::from_text(&d.to_text()).unwrap(), d);
    }
}
