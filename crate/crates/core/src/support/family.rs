use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::random;
use crate::base::{is_extension, Base};
use crate::syntax::Atom;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    /// Number of members, the root included.
    pub size: usize,
    /// Most rules added when a member is grown from its parent.
    pub ext_rules: usize,
    pub pool: Vec<Atom>,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams {
            size: 4,
            ext_rules: 2,
            pool: random::default_pool(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("a family needs at least its root")]
    Empty,
    #[error("member {0} does not extend the root")]
    NotAnExtension(usize),
}

/// A finite stand-in for the extensions of `members[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionFamily {
    pub members: Vec<Base>,
    /// Atoms the bounded multisets are drawn from (⊥ is always added).
    pub vocabulary: BTreeSet<Atom>,
    pub seed: Option<u64>,
    /// `extends[i]`: members extending member `i`, `i` first.
    extends: Vec<Vec<usize>>,
}

impl ExtensionFamily {
    pub fn from_members(members: Vec<Base>, vocabulary: BTreeSet<Atom>) -> Result<Self, FamilyError> {
        let root = members.first().ok_or(FamilyError::Empty)?;
        if let Some(i) = members.iter().position(|m| !is_extension(m, root)) {
            return Err(FamilyError::NotAnExtension(i));
        }
        let mut vocabulary = vocabulary;
        for m in &members {
            vocabulary.extend(m.atoms());
        }
        let extends = (0..members.len())
            .map(|i| {
                let mut v = vec![i];
                v.extend((0..members.len()).filter(|&j| j != i && is_extension(&members[j], &members[i])));
                v
            })
            .collect();
        Ok(ExtensionFamily {
            members,
            vocabulary,
            seed: None,
            extends,
        })
    }

    /// Grows `size - 1` members, each from a random earlier member by adding
    /// between one and `ext_rules` random rules.
    pub fn generate(root: Base, params: FamilyParams, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut members = vec![root];
        for i in 1..params.size.max(1) {
            let parent = rng.gen_range(0..i);
            let n = rng.gen_range(1..=params.ext_rules.max(1));
            let added = (0..n).map(|_| random::rule(&mut rng, &params.pool, 2, 2));
            members.push(members[parent].with_rules(added.collect::<Vec<_>>()));
        }
        let mut fam = Self::from_members(members, params.pool.iter().cloned().collect()).expect("grown from the root");
        fam.seed = Some(seed);
        fam
    }

    pub fn root(&self) -> &Base {
        &self.members[0]
    }

    pub fn extensions_of(&self, member: usize) -> &[usize] {
        &self.extends[member]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
