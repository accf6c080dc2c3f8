//! Solver for abstract argumentation frameworks that carry an explicit
//! subargument relation alongside direct attacks.
//!
//! The library models frameworks where accepting an argument commits one to
//! its structural components: conflict and defence quantify over subargument
//! closures, extensions come from a fixpoint-friendly characteristic
//! operator, and every optimized computation can be cross-checked against a
//! brute-force reference in [`oracle`].
//!
//! Modules:
//! - [`framework`]: validated framework types and closure queries
//! - [`semantics`]: conflict, defence, and extension computation
//! - [`projection`]: forgetting structure and what it preserves or loses
//! - [`core`]: conflict-handling core decomposition and status lifting
//! - [`explanation`]: minimal justification witnesses and principle checks
//! - [`oracle`]: definition-literal exhaustive reference solver
//! - [`corpus`]: deterministic random instance generation
//! - [`cli`]: text format parsing and the command-line front end

mod bitset;

pub mod cli;
pub mod core;
pub mod corpus;
pub mod explanation;
pub mod framework;
pub mod oracle;
pub mod projection;
pub mod semantics;

pub use framework::{ArgumentId, DungAf, Saf, UnknownArgument, ValidationError};
pub use semantics::{
    ExtensionSet, InstanceTooLarge, SemanticsLabel, DEFAULT_ENUM_BOUND, MAX_ENUM_BOUND,
};

#[cfg(test)]
pub(crate) mod testutil {
    use crate::framework::Saf;
    use crate::semantics::ExtensionSet;

    /// Six-argument fixture: a chain b1 ⊆ b2 ⊆ ... ⊆ b5 attacked at its base
    /// by `a`, which is in turn attacked by the chain's top.
    pub fn motivating() -> Saf {
        Saf::build(
            &["a", "b1", "b2", "b3", "b4", "b5"],
            &[("a", "b1"), ("b5", "a")],
            &[("b1", "b2"), ("b2", "b3"), ("b3", "b4"), ("b4", "b5")],
        )
        .unwrap()
    }

    /// Three-argument fixture: one attack, one status-dependent argument.
    pub fn core_example() -> Saf {
        Saf::build(&["a", "b", "c"], &[("a", "b")], &[("b", "c")]).unwrap()
    }

    pub fn ext_names(exts: &ExtensionSet) -> Vec<Vec<String>> {
        exts.extensions()
            .iter()
            .map(|ext| ext.iter().map(|a| a.to_string()).collect())
            .collect()
    }
}
