//! Cut-free one-sided sequent calculus for classical MALL, searched
//! exhaustively. Independent of the ND and base machinery.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{Atom, Formula, Multiset, Sequent};

/// Negation normal form. The distinguished atom ⊥ becomes the
/// multiplicative unit `Bot`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nnf {
    Pos(Atom),
    Neg(Atom),
    Tensor(Arc<Nnf>, Arc<Nnf>),
    Par(Arc<Nnf>, Arc<Nnf>),
    With(Arc<Nnf>, Arc<Nnf>),
    Plus(Arc<Nnf>, Arc<Nnf>),
    One,
    Bot,
    Top,
    Zero,
}

impl Nnf {
    pub fn dual(&self) -> Nnf {
        let bin = |a: &Arc<Nnf>, b: &Arc<Nnf>| (Arc::new(a.dual()), Arc::new(b.dual()));
        match self {
            Nnf::Pos(a) => Nnf::Neg(a.clone()),
            Nnf::Neg(a) => Nnf::Pos(a.clone()),
            Nnf::Tensor(a, b) => {
                let (a, b) = bin(a, b);
                Nnf::Par(a, b)
            }
            Nnf::Par(a, b) => {
                let (a, b) = bin(a, b);
                Nnf::Tensor(a, b)
            }
            Nnf::With(a, b) => {
                let (a, b) = bin(a, b);
                Nnf::Plus(a, b)
            }
            Nnf::Plus(a, b) => {
                let (a, b) = bin(a, b);
                Nnf::With(a, b)
            }
            Nnf::One => Nnf::Bot,
            Nnf::Bot => Nnf::One,
            Nnf::Top => Nnf::Zero,
            Nnf::Zero => Nnf::Top,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Nnf::Tensor(a, b) | Nnf::Par(a, b) | Nnf::With(a, b) | Nnf::Plus(a, b) => {
                1 + a.size() + b.size()
            }
            _ => 1,
        }
    }

    pub fn from_formula(phi: &Formula) -> Nnf {
        let bin = |a: &Formula, b: &Formula| (Arc::new(Nnf::from_formula(a)), Arc::new(Nnf::from_formula(b)));
        match phi {
            Formula::Atom(a) if a.is_bottom() => Nnf::Bot,
            Formula::Atom(a) => Nnf::Pos(a.clone()),
            Formula::Tensor(a, b) => {
                let (a, b) = bin(a, b);
                Nnf::Tensor(a, b)
            }
            Formula::Par(a, b) => {
                let (a, b) = bin(a, b);
                Nnf::Par(a, b)
            }
            Formula::With(a, b) => {
                let (a, b) = bin(a, b);
                Nnf::With(a, b)
            }
            Formula::Plus(a, b) => {
                let (a, b) = bin(a, b);
                Nnf::Plus(a, b)
            }
            Formula::Lolli(a, b) => Nnf::Par(
                Arc::new(Nnf::from_formula(a).dual()),
                Arc::new(Nnf::from_formula(b)),
            ),
            Formula::One => Nnf::One,
            Formula::Top => Nnf::Top,
            Formula::Zero => Nnf::Zero,
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Nnf::Plus(..) => 1,
            Nnf::With(..) => 2,
            Nnf::Par(..) => 3,
            Nnf::Tensor(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            f.write_str("(")?;
        }
        let mut bin = |a: &Nnf, b: &Nnf, op: &str| -> fmt::Result {
            a.write_at(f, p)?;
            f.write_str(op)?;
            b.write_at(f, p + 1)
        };
        match self {
            Nnf::Pos(a) => write!(f, "{a}")?,
            Nnf::Neg(a) => write!(f, "{a}^")?,
            Nnf::Tensor(a, b) => bin(a, b, " * ")?,
            Nnf::Par(a, b) => bin(a, b, " | ")?,
            Nnf::With(a, b) => bin(a, b, " & ")?,
            Nnf::Plus(a, b) => bin(a, b, " + ")?,
            Nnf::One => f.write_str("1")?,
            Nnf::Bot => f.write_str("bot")?,
            Nnf::Top => f.write_str("top")?,
            Nnf::Zero => f.write_str("0")?,
        }
        if p < min {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Debug for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub type NnfMultiset = Multiset<Nnf>;

/// `Γ ⊢ φ` becomes `⊢ Γ^⊥, φ`.
pub fn to_one_sided(s: &Sequent) -> NnfMultiset {
    let mut out: NnfMultiset = s
        .context
        .iter()
        .map(|g| Nnf::from_formula(g).dual())
        .collect();
    out.insert(Nnf::from_formula(&s.conclusion));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Provable,
    Refuted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("oracle step cap of {cap} exceeded")]
pub struct Overflow {
    pub cap: usize,
}

pub const DEFAULT_STEP_CAP: usize = 2_000_000;

pub fn prove(goal: &NnfMultiset) -> Result<Verdict, Overflow> {
    prove_with_cap(goal, DEFAULT_STEP_CAP)
}

pub fn prove_with_cap(goal: &NnfMultiset, cap: usize) -> Result<Verdict, Overflow> {
    let mut o = Oracle {
        memo: HashMap::new(),
        steps: 0,
        cap,
    };
    Ok(if o.provable(goal.clone())? {
        Verdict::Provable
    } else {
        Verdict::Refuted
    })
}

pub fn prove_sequent(s: &Sequent) -> Result<Verdict, Overflow> {
    prove(&to_one_sided(s))
}

struct Oracle {
    memo: HashMap<NnfMultiset, bool>,
    steps: usize,
    cap: usize,
}

impl Oracle {
    fn provable(&mut self, goal: NnfMultiset) -> Result<bool, Overflow> {
        if let Some(&v) = self.memo.get(&goal) {
            return Ok(v);
        }
        self.steps += 1;
        if self.steps > self.cap {
            return Err(Overflow { cap: self.cap });
        }
        let v = self.search(&goal)?;
        self.memo.insert(goal, v);
        Ok(v)
    }

    fn search(&mut self, goal: &NnfMultiset) -> Result<bool, Overflow> {
        if goal.contains(&Nnf::Top) {
            return Ok(true);
        }
        // invertible rules first, one at a time
        for f in goal.distinct() {
            let rest = goal.without(f).expect("member");
            match f {
                Nnf::Bot => return self.provable(rest),
                Nnf::Par(a, b) => {
                    return self.provable(rest.with((**a).clone()).with((**b).clone()));
                }
                Nnf::With(a, b) => {
                    return Ok(self.provable(rest.with((**a).clone()))?
                        && self.provable(rest.with((**b).clone()))?);
                }
                _ => {}
            }
        }
        let items: Vec<&Nnf> = goal.iter().collect();
        match items.as_slice() {
            [Nnf::One] => return Ok(true),
            [Nnf::Pos(a), Nnf::Neg(b)] | [Nnf::Neg(b), Nnf::Pos(a)] if a == b => return Ok(true),
            _ => {}
        }
        for f in goal.distinct().cloned().collect::<Vec<_>>() {
            let rest = goal.without(&f).expect("member");
            match &f {
                Nnf::Plus(a, b) => {
                    if self.provable(rest.with((**a).clone()))?
                        || self.provable(rest.with((**b).clone()))?
                    {
                        return Ok(true);
                    }
                }
                Nnf::Tensor(a, b) => {
                    for (l, r) in rest.splits() {
                        if self.provable(l.with((**a).clone()))?
                            && self.provable(r.with((**b).clone()))?
                        {
                            return Ok(true);
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(false)
    }
}
