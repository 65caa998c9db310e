use thiserror::Error;

use super::{AtomicDerivation, AtomicRule, AtomicSequent, Base, Bindings, RuleSchema, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {path:?} ({node}): {message}")]
pub struct AtomicViolation {
    /// Child indices from the root.
    pub path: Vec<usize>,
    pub node: String,
    pub message: String,
    /// Rules of the base with the same conclusion atom, for diagnosis.
    pub nearest: Vec<String>,
}

pub fn verify_atomic(base: &Base, d: &AtomicDerivation) -> Result<(), AtomicViolation> {
    let mut path = Vec::new();
    verify_at(base, d, &mut path)
}

fn verify_at(base: &Base, d: &AtomicDerivation, path: &mut Vec<usize>) -> Result<(), AtomicViolation> {
    check_node(base, d).map_err(|message| AtomicViolation {
        path: path.clone(),
        node: format!("{} {}", d.step.label(), d.conclusion),
        message,
        nearest: nearest(base, &d.conclusion),
    })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        verify_at(base, p, path)?;
        path.pop();
    }
    Ok(())
}

fn nearest(base: &Base, s: &AtomicSequent) -> Vec<String> {
    let rules = base
        .rules
        .iter()
        .filter(|r| r.conclusion.conclusion == s.conclusion)
        .map(|r| r.to_string());
    let schemas = base
        .schemas
        .iter()
        .filter(|r| r.conclusion.conclusion == s.conclusion)
        .map(|r| r.to_string());
    rules.chain(schemas).take(3).collect()
}

fn check_node(base: &Base, d: &AtomicDerivation) -> Result<(), String> {
    let s = &d.conclusion;
    let prem: Vec<&AtomicSequent> = d.premises.iter().map(|p| &p.conclusion).collect();
    match &d.step {
        Step::Ax => {
            if !prem.is_empty() {
                return Err("Ax takes no premises".into());
            }
            if !s.is_axiom() {
                return Err(format!("expected {0} |- {0}", s.conclusion));
            }
            Ok(())
        }
        Step::Subs => {
            let [left, right] = prem.as_slice() else {
                return Err(format!("Subs takes 2 premises, found {}", prem.len()));
            };
            if right.conclusion != s.conclusion {
                return Err(format!("right premise concludes {}, expected {}", right.conclusion, s.conclusion));
            }
            let Some(rest) = right.context.without(&left.conclusion) else {
                return Err(format!("cut atom {} missing from right premise context", left.conclusion));
            };
            if left.context.union(&rest) != s.context {
                return Err(format!(
                    "context must be [{}], found [{}]",
                    left.context.union(&rest),
                    s.context
                ));
            }
            Ok(())
        }
        Step::Rule => {
            let inst = AtomicRule {
                premises: prem.iter().map(|p| (*p).clone()).collect(),
                conclusion: s.clone(),
            };
            if base.rules.contains(&inst) {
                Ok(())
            } else {
                Err(format!("no rule '{inst}' in the base"))
            }
        }
        Step::Schema(name) => {
            let candidates: Vec<&RuleSchema> = base.schemas.iter().filter(|r| &r.name == name).collect();
            if candidates.is_empty() {
                return Err(format!("no schema named {name}"));
            }
            if candidates.iter().any(|r| schema_matches(r, s, &prem)) {
                Ok(())
            } else {
                Err(format!("no instance of schema {name} matches"))
            }
        }
    }
}

pub(crate) fn schema_matches(r: &RuleSchema, s: &AtomicSequent, prem: &[&AtomicSequent]) -> bool {
    if r.conclusion.conclusion != s.conclusion || r.premises.len() != prem.len() {
        return false;
    }
    let mut frontier: Vec<Bindings> = r.conclusion.context.match_against(&s.context, &Bindings::new());
    for (pat, p) in r.premises.iter().zip(prem) {
        if pat.conclusion != p.conclusion {
            return false;
        }
        frontier = frontier
            .iter()
            .flat_map(|b| pat.context.match_against(&p.context, b))
            .collect();
        if frontier.is_empty() {
            return false;
        }
    }
    !frontier.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::tests::umbrella;
    use crate::base::{parse_atomic_sequent, parse_base};
    use crate::syntax::Atom;

    fn seq(s: &str) -> AtomicSequent {
        parse_atomic_sequent(s).unwrap()
    }

    fn rule(s: &str, premises: Vec<AtomicDerivation>) -> AtomicDerivation {
        AtomicDerivation {
            conclusion: seq(s),
            step: Step::Rule,
            premises,
        }
    }

    #[test]
    fn umbrella_deduction_verifies() {
        let lp = AtomicDerivation::subs(rule("l |- r", vec![]), rule("r |- p", vec![])).unwrap();
        let d = rule("|- u", vec![lp]);
        assert_eq!(verify_atomic(&umbrella(), &d), Ok(()));
    }

    #[test]
    fn subs_split() {
        // Γ,Π ⊢ r from Γ ⊢ p and Π,p ⊢ r
        let b = parse_base("g |- p.\nh, p |- r.").unwrap();
        let d = AtomicDerivation::subs(rule("g |- p", vec![]), rule("h, p |- r", vec![])).unwrap();
        assert_eq!(d.conclusion, seq("g, h |- r"));
        assert_eq!(verify_atomic(&b, &d), Ok(()));
    }

    #[test]
    fn premise_context_must_match_exactly() {
        // l, l |- p is not the premise l |- p
        let b = umbrella().with_rule(AtomicRule::axiom(seq("l, l |- p")));
        let d = rule("|- u", vec![rule("l, l |- p", vec![])]);
        let err = verify_atomic(&b, &d).unwrap_err();
        assert!(err.path.is_empty());
        assert!(err.nearest.iter().any(|r| r.contains("==> |- u")));
    }

    #[test]
    fn bad_subs_and_ax() {
        let b = umbrella();
        let mut d = AtomicDerivation::subs(AtomicDerivation::axiom(Atom::new("q")), AtomicDerivation::axiom(Atom::new("q"))).unwrap();
        d.conclusion = seq("q, q |- q");
        assert!(verify_atomic(&b, &d).is_err());
        let ax = AtomicDerivation {
            conclusion: seq("p, q |- p"),
            step: Step::Ax,
            premises: vec![],
        };
        assert!(verify_atomic(&b, &ax).is_err());
    }

    #[test]
    fn schema_instances() {
        let b = parse_base("[Drop] ?G, p |- bot ==> ?G |- bot.").unwrap();
        let d = AtomicDerivation {
            conclusion: seq("q |- bot"),
            step: Step::Schema("Drop".into()),
            premises: vec![AtomicDerivation {
                conclusion: seq("q, p |- bot"),
                step: Step::Schema("Missing".into()),
                premises: vec![],
            }],
        };
        let err = verify_atomic(&b, &d).unwrap_err();
        assert_eq!(err.path, vec![0]);
        let mut bad = d.clone();
        bad.premises[0].conclusion = seq("r, p |- bot");
        assert_eq!(verify_atomic(&b, &bad).unwrap_err().path, Vec::<usize>::new());
    }
}
