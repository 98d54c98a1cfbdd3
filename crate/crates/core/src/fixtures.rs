//! Shared builders for the unit tests.

use crate::grammar::{Grammar, Ranking};
use crate::lcparse::ExplicitOrder;
use crate::textio::TextCollection;

pub const RUNNING: &str = "gtaatagtagtacc";

/// The three-round grammar of `gtaatagtagtacc` with fixed orders per round.
pub fn running_grammar() -> Grammar {
    let tc = TextCollection::from_strings([RUNNING]).unwrap();
    let orders: [Vec<u32>; 3] =
        [b"acgt".iter().map(|&c| c as u32).collect(), vec![256, 258, 257, 259, 260], vec![263, 261, 262]];
    Grammar::build_with(&tc, Ranking::Symbols, |round, _| ExplicitOrder::new(&orders[round]))
}
