//! Classical MALL: natural deduction, atomic bases, base-extension support,
//! and the simulation-base route from support to derivability.

pub mod base;
pub mod completeness;
pub mod nd;
pub mod oracle;
pub mod sexpr;
pub mod support;
pub mod syntax;
