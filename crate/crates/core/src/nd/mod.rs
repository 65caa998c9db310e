//! Sequent-style natural deduction for classical MALL.

mod search;

use std::fmt;

use thiserror::Error;

use crate::sexpr::{self, Node, SexprError};
use crate::syntax::{negate, parse_sequent, Formula, FormulaMultiset, ParseError, Sequent};

pub use search::{search_nd, NdSearchConfig, NdSearchOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NdRule {
    Ax,
    Raa,
    TensorI,
    TensorE,
    OneI,
    OneE,
    WithI,
    WithE1,
    WithE2,
    TopI,
    LolliI,
    LolliE,
    ParI,
    ParE,
    PlusI1,
    PlusI2,
    PlusE,
    ZeroE,
    /// Composition. Admissible rather than primitive.
    Subs,
}

impl NdRule {
    pub const ALL: [NdRule; 19] = [
        NdRule::Ax,
        NdRule::Raa,
        NdRule::TensorI,
        NdRule::TensorE,
        NdRule::OneI,
        NdRule::OneE,
        NdRule::WithI,
        NdRule::WithE1,
        NdRule::WithE2,
        NdRule::TopI,
        NdRule::LolliI,
        NdRule::LolliE,
        NdRule::ParI,
        NdRule::ParE,
        NdRule::PlusI1,
        NdRule::PlusI2,
        NdRule::PlusE,
        NdRule::ZeroE,
        NdRule::Subs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NdRule::Ax => "Ax",
            NdRule::Raa => "Raa",
            NdRule::TensorI => "TensorI",
            NdRule::TensorE => "TensorE",
            NdRule::OneI => "OneI",
            NdRule::OneE => "OneE",
            NdRule::WithI => "WithI",
            NdRule::WithE1 => "WithE1",
            NdRule::WithE2 => "WithE2",
            NdRule::TopI => "TopI",
            NdRule::LolliI => "LolliI",
            NdRule::LolliE => "LolliE",
            NdRule::ParI => "ParI",
            NdRule::ParE => "ParE",
            NdRule::PlusI1 => "PlusI1",
            NdRule::PlusI2 => "PlusI2",
            NdRule::PlusE => "PlusE",
            NdRule::ZeroE => "ZeroE",
            NdRule::Subs => "Subs",
        }
    }

    pub fn from_name(name: &str) -> Option<NdRule> {
        NdRule::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn is_admissible(self) -> bool {
        self == NdRule::Subs
    }

    pub fn arity(self) -> usize {
        match self {
            NdRule::Ax | NdRule::OneI | NdRule::TopI => 0,
            NdRule::Raa
            | NdRule::WithE1
            | NdRule::WithE2
            | NdRule::LolliI
            | NdRule::ParI
            | NdRule::PlusI1
            | NdRule::PlusI2
            | NdRule::ZeroE => 1,
            NdRule::TensorI
            | NdRule::TensorE
            | NdRule::OneE
            | NdRule::WithI
            | NdRule::LolliE
            | NdRule::Subs => 2,
            NdRule::ParE | NdRule::PlusE => 3,
        }
    }
}

impl fmt::Display for NdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NdDerivation {
    pub conclusion: Sequent,
    pub rule: NdRule,
    pub premises: Vec<NdDerivation>,
}

impl NdDerivation {
    pub fn new(conclusion: Sequent, rule: NdRule, premises: Vec<NdDerivation>) -> Self {
        NdDerivation {
            conclusion,
            rule,
            premises,
        }
    }

    pub fn axiom(phi: Formula) -> Self {
        NdDerivation::new(Sequent::new([phi.clone()], phi), NdRule::Ax, vec![])
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&NdDerivation> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let n = out[i];
            out.extend(n.premises.iter());
            i += 1;
        }
        out
    }

    pub fn count_rule(&self, rule: NdRule) -> usize {
        self.nodes().iter().filter(|n| n.rule == rule).count()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(NdDerivation::height).max().unwrap_or(0)
    }

    pub fn to_node(&self) -> Node {
        Node {
            label: self.rule.name().to_string(),
            text: self.conclusion.to_string(),
            children: self.premises.iter().map(NdDerivation::to_node).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        sexpr::render(&self.to_node())
    }

    pub fn from_node(node: &Node) -> Result<Self, FormatError> {
        let rule = NdRule::from_name(&node.label)
            .ok_or_else(|| FormatError::UnknownRule(node.label.clone()))?;
        let conclusion = parse_sequent(&node.text)?;
        let premises = node
            .children
            .iter()
            .map(NdDerivation::from_node)
            .collect::<Result<_, _>>()?;
        Ok(NdDerivation::new(conclusion, rule, premises))
    }

    pub fn from_text(src: &str) -> Result<Self, FormatError> {
        NdDerivation::from_node(&sexpr::parse(src)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error(transparent)]
    Sexpr(#[from] SexprError),
    #[error("in sequent: {0}")]
    Sequent(#[from] ParseError),
    #[error("unknown rule label '{0}'")]
    UnknownRule(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub allow_subs: bool,
    pub allow_raa: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            allow_subs: true,
            allow_raa: true,
        }
    }
}

impl CheckOptions {
    pub fn intuitionistic() -> Self {
        CheckOptions {
            allow_subs: true,
            allow_raa: false,
        }
    }
}

/// A rule instance that does not match its figure. `path` lists child
/// indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} at node {path:?}: expected {expected}, found {found}")]
pub struct NdViolation {
    pub path: Vec<usize>,
    pub rule: NdRule,
    pub expected: String,
    pub found: String,
}

pub fn check_nd(d: &NdDerivation, opts: CheckOptions) -> Result<(), NdViolation> {
    let mut path = Vec::new();
    check_at(d, opts, &mut path)
}

fn check_at(d: &NdDerivation, opts: CheckOptions, path: &mut Vec<usize>) -> Result<(), NdViolation> {
    check_node(d, opts).map_err(|(expected, found)| NdViolation {
        path: path.clone(),
        rule: d.rule,
        expected,
        found,
    })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_at(p, opts, path)?;
        path.pop();
    }
    Ok(())
}

type Mismatch = (String, String);

fn mismatch(expected: impl fmt::Display, found: impl fmt::Display) -> Mismatch {
    (expected.to_string(), found.to_string())
}

fn same_formula(expected: &Formula, found: &Formula, what: &str) -> Result<(), Mismatch> {
    if expected == found {
        Ok(())
    } else {
        Err((format!("{what} {expected}"), format!("{what} {found}")))
    }
}

fn same_context(expected: &FormulaMultiset, found: &FormulaMultiset, what: &str) -> Result<(), Mismatch> {
    if expected == found {
        Ok(())
    } else {
        Err((format!("{what} [{expected}]"), format!("{what} [{found}]")))
    }
}

/// Removes one occurrence of `phi` from a premise context.
fn discharge(ctx: &FormulaMultiset, phi: &Formula) -> Result<FormulaMultiset, Mismatch> {
    ctx.without(phi)
        .ok_or_else(|| mismatch(format!("premise context containing {phi}"), format!("[{ctx}]")))
}

fn check_node(d: &NdDerivation, opts: CheckOptions) -> Result<(), Mismatch> {
    let rule = d.rule;
    if d.premises.len() != rule.arity() {
        return Err(mismatch(
            format!("{} premises", rule.arity()),
            format!("{} premises", d.premises.len()),
        ));
    }
    if rule == NdRule::Raa && !opts.allow_raa {
        return Err(mismatch("no Raa (intuitionistic mode)", "Raa"));
    }
    if rule == NdRule::Subs && !opts.allow_subs {
        return Err(mismatch("no Subs", "Subs"));
    }
    let ctx = &d.conclusion.context;
    let concl = &d.conclusion.conclusion;
    let prem = |i: usize| &d.premises[i].conclusion;
    let bottom = Formula::bottom();

    match rule {
        NdRule::Ax => {
            same_context(&FormulaMultiset::singleton(concl.clone()), ctx, "context")
        }
        NdRule::Raa => {
            same_formula(&bottom, &prem(0).conclusion, "premise conclusion")?;
            same_context(&ctx.with(negate(concl)), &prem(0).context, "premise context")
        }
        NdRule::TensorI => {
            let Formula::Tensor(a, b) = concl else {
                return Err(mismatch("conclusion A * B", concl));
            };
            same_formula(a, &prem(0).conclusion, "left premise conclusion")?;
            same_formula(b, &prem(1).conclusion, "right premise conclusion")?;
            same_context(&prem(0).context.union(&prem(1).context), ctx, "context")
        }
        NdRule::TensorE => {
            let Formula::Tensor(a, b) = &prem(0).conclusion else {
                return Err(mismatch("major premise A * B", &prem(0).conclusion));
            };
            same_formula(concl, &prem(1).conclusion, "minor premise conclusion")?;
            let delta = discharge(&prem(1).context, a)?;
            let delta = discharge(&delta, b)?;
            same_context(&prem(0).context.union(&delta), ctx, "context")
        }
        NdRule::OneI => {
            same_formula(&Formula::One, concl, "conclusion")?;
            same_context(&FormulaMultiset::new(), ctx, "context")
        }
        NdRule::OneE => {
            same_formula(concl, &prem(0).conclusion, "left premise conclusion")?;
            same_formula(&Formula::One, &prem(1).conclusion, "right premise conclusion")?;
            same_context(&prem(0).context.union(&prem(1).context), ctx, "context")
        }
        NdRule::WithI => {
            let Formula::With(a, b) = concl else {
                return Err(mismatch("conclusion A & B", concl));
            };
            same_formula(a, &prem(0).conclusion, "left premise conclusion")?;
            same_formula(b, &prem(1).conclusion, "right premise conclusion")?;
            same_context(ctx, &prem(0).context, "left premise context")?;
            same_context(ctx, &prem(1).context, "right premise context")
        }
        NdRule::WithE1 | NdRule::WithE2 => {
            let Formula::With(a, b) = &prem(0).conclusion else {
                return Err(mismatch("premise A & B", &prem(0).conclusion));
            };
            let picked = if rule == NdRule::WithE1 { a } else { b };
            same_formula(picked, concl, "conclusion")?;
            same_context(&prem(0).context, ctx, "context")
        }
        NdRule::TopI => same_formula(&Formula::Top, concl, "conclusion"),
        NdRule::LolliI => {
            let Formula::Lolli(a, b) = concl else {
                return Err(mismatch("conclusion A -o B", concl));
            };
            same_formula(b, &prem(0).conclusion, "premise conclusion")?;
            same_context(&ctx.with((**a).clone()), &prem(0).context, "premise context")
        }
        NdRule::LolliE => {
            let Formula::Lolli(a, b) = &prem(0).conclusion else {
                return Err(mismatch("major premise A -o B", &prem(0).conclusion));
            };
            same_formula(a, &prem(1).conclusion, "minor premise conclusion")?;
            same_formula(b, concl, "conclusion")?;
            same_context(&prem(0).context.union(&prem(1).context), ctx, "context")
        }
        NdRule::ParI => {
            let Formula::Par(a, b) = concl else {
                return Err(mismatch("conclusion A | B", concl));
            };
            same_formula(&bottom, &prem(0).conclusion, "premise conclusion")?;
            let want = ctx.with(negate(a)).with(negate(b));
            same_context(&want, &prem(0).context, "premise context")
        }
        NdRule::ParE => {
            let Formula::Par(a, b) = &prem(0).conclusion else {
                return Err(mismatch("major premise A | B", &prem(0).conclusion));
            };
            same_formula(&bottom, concl, "conclusion")?;
            same_formula(&bottom, &prem(1).conclusion, "second premise conclusion")?;
            same_formula(&bottom, &prem(2).conclusion, "third premise conclusion")?;
            let delta = discharge(&prem(1).context, a)?;
            let theta = discharge(&prem(2).context, b)?;
            same_context(&prem(0).context.union(&delta).union(&theta), ctx, "context")
        }
        NdRule::PlusI1 | NdRule::PlusI2 => {
            let Formula::Plus(a, b) = concl else {
                return Err(mismatch("conclusion A + B", concl));
            };
            let picked = if rule == NdRule::PlusI1 { a } else { b };
            same_formula(picked, &prem(0).conclusion, "premise conclusion")?;
            same_context(&prem(0).context, ctx, "context")
        }
        NdRule::PlusE => {
            let Formula::Plus(a, b) = &prem(0).conclusion else {
                return Err(mismatch("major premise A + B", &prem(0).conclusion));
            };
            same_formula(concl, &prem(1).conclusion, "second premise conclusion")?;
            same_formula(concl, &prem(2).conclusion, "third premise conclusion")?;
            let delta = discharge(&prem(1).context, a)?;
            let delta2 = discharge(&prem(2).context, b)?;
            same_context(&delta, &delta2, "shared minor context")?;
            same_context(&prem(0).context.union(&delta), ctx, "context")
        }
        NdRule::ZeroE => {
            same_formula(&Formula::Zero, &prem(0).conclusion, "premise conclusion")?;
            if prem(0).context.is_submultiset_of(ctx) {
                Ok(())
            } else {
                Err(mismatch(
                    format!("context containing [{}]", prem(0).context),
                    format!("[{ctx}]"),
                ))
            }
        }
        NdRule::Subs => {
            let cut = &prem(0).conclusion;
            same_formula(concl, &prem(1).conclusion, "right premise conclusion")?;
            let rest = discharge(&prem(1).context, cut)?;
            same_context(&prem(0).context.union(&rest), ctx, "context")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("cut formula {0} does not occur in the right derivation's context")]
    PremiseMismatch(Formula),
    #[error("input derivation is invalid: {0}")]
    Invalid(#[from] NdViolation),
}

/// Composes `d1 : Γ ⊢ φ` with `d2 : Δ, φ ⊢ ψ` into a Subs node concluding
/// `Γ, Δ ⊢ ψ`.
pub fn compose(d1: &NdDerivation, d2: &NdDerivation) -> Result<NdDerivation, ComposeError> {
    check_nd(d1, CheckOptions::default())?;
    check_nd(d2, CheckOptions::default())?;
    let phi = &d1.conclusion.conclusion;
    let rest = d2
        .conclusion
        .context
        .without(phi)
        .ok_or_else(|| ComposeError::PremiseMismatch(phi.clone()))?;
    let conclusion = Sequent {
        context: d1.conclusion.context.union(&rest),
        conclusion: d2.conclusion.conclusion.clone(),
    };
    Ok(NdDerivation::new(
        conclusion,
        NdRule::Subs,
        vec![d1.clone(), d2.clone()],
    ))
}

/// Whether every ⊗E, ⊕E and ⅋E node has minor premises concluding ⊥.
/// ⅋E forces this by its own shape; 0E has no minor premise.
pub fn normal_form_check(d: &NdDerivation) -> bool {
    d.nodes().iter().all(|n| match n.rule {
        NdRule::TensorE => n.premises[1].conclusion.conclusion.is_bottom(),
        NdRule::PlusE => n.premises[1..]
            .iter()
            .all(|p| p.conclusion.conclusion.is_bottom()),
        NdRule::ParE => n.premises[1..]
            .iter()
            .all(|p| p.conclusion.conclusion.is_bottom()),
        _ => true,
    })
}
