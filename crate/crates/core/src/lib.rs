//! All-vs-all maximal exact matches (MEMs) over a string collection, computed on a
//! fix-free locally-consistent grammar.
//!
//! The pipeline is:
//!
//! 1. [`textio`] loads the collection and wraps every string as `$T$#`.
//! 2. [`grammar::Grammar::build`] runs rounds of [`lcparse`] until no string has an
//!    interior local minimum, producing a fully-balanced grammar whose per-level
//!    expansions are prefix- and suffix-free.
//! 3. [`prmem::find_prmems`] scans the grammar level by level with a sparse suffix
//!    array and satellite LCP/LCS arrays, emitting primary-MEM tuples without
//!    expanding nonterminals.
//! 4. [`grammar::simplify`] inlines nonterminals used once and [`report`] lifts each tuple
//!    through the occurrence buckets to text coordinates.
//!
//! [`oracle`] is an independent brute-force reference used by the tests and the
//! `verify` subcommand.

pub mod cli;
pub mod error;
#[cfg(test)]
mod fixtures;
pub mod grammar;
pub mod lcparse;
pub mod oracle;
pub mod prmem;
pub mod report;
pub mod sufstruct;
pub mod textio;

pub use error::{Error, Result};
pub use grammar::Grammar;
pub use prmem::PrMemTuple;
pub use report::MemRecord;
pub use textio::{Format, TextCollection};

/// Runs the whole pipeline on an in-memory collection.
pub fn find_mems(tc: &TextCollection, tau: u64, seed: u64) -> Vec<MemRecord> {
    let g = Grammar::build(tc, seed);
    mems_from_grammar(&g, tau, true)
}

/// Detects and reports MEMs of length `>= tau` on an already built grammar.
pub fn mems_from_grammar(g: &Grammar, tau: u64, simplify: bool) -> Vec<MemRecord> {
    let tuples = prmem::find_prmems(g, tau);
    if simplify {
        let (sg, tuples) = grammar::simplify(g, &tuples);
        report::report(&tuples, &sg)
    } else {
        let sg = grammar::SimpleGrammar::from_grammar(g);
        report::report(&tuples, &sg)
    }
}
