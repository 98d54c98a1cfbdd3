//! One round of fix-free locally-consistent parsing.
//!
//! Strings are sentinel-wrapped symbol sequences `$ w $ #` where `$` is symbol 0 and
//! `#` is symbol 1. A random order `h` ranks the live alphabet; local minima of `h`
//! cut the string into phrases that overlap their neighbours by one symbol on the left
//! and two on the right.

use std::collections::{HashMap, HashSet};

use rand::Rng;

pub const DOLLAR: u32 = 0;
pub const HASH: u32 = 1;

/// A total order on the symbols of one round, given as integer values.
pub trait SymbolOrder {
    /// Value of a non-sentinel symbol.
    fn rank(&self, sym: u32) -> u64;
    /// Upper bound on every value returned by [`SymbolOrder::rank`].
    fn top(&self) -> u64;

    fn value(&self, sym: u32) -> u64 {
        match sym {
            DOLLAR => 0,
            HASH => self.top() + 1,
            s => self.rank(s),
        }
    }
}

/// `h(c) = (a*c + b) mod p` with `h($) = 0` and `h(#) = p + 1`.
///
/// `c` is the 1-based code of a symbol in the sorted live alphabet, so distinct symbols
/// always get distinct values once `a` is not a multiple of `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashOrder {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    alphabet: Vec<u32>,
}

impl HashOrder {
    /// Draws `(a, b)` until `h` is injective and non-zero on `alphabet`.
    pub fn draw<R: Rng + ?Sized>(alphabet: &[u32], rng: &mut R) -> HashOrder {
        let mut alphabet = alphabet.to_vec();
        alphabet.sort_unstable();
        alphabet.dedup();
        let k = alphabet.len().max(1) as u64;
        let p = next_prime((2 * k * k).max(2));
        let mut seen = HashSet::with_capacity(alphabet.len());
        loop {
            let h = HashOrder { a: rng.random_range(1..=p), b: rng.random_range(1..=p), p, alphabet };
            seen.clear();
            if (1..=k).all(|c| {
                let v = h.hash(c);
                v != 0 && seen.insert(v)
            }) {
                return h;
            }
            alphabet = h.alphabet;
        }
    }

    fn hash(&self, code: u64) -> u64 {
        ((self.a as u128 * code as u128 + self.b as u128) % self.p as u128) as u64
    }

    pub fn alphabet(&self) -> &[u32] {
        &self.alphabet
    }
}

impl SymbolOrder for HashOrder {
    fn rank(&self, sym: u32) -> u64 {
        let code = self.alphabet.binary_search(&sym).unwrap_or_else(|_| panic!("symbol {sym} outside the alphabet"));
        self.hash(code as u64 + 1)
    }

    fn top(&self) -> u64 {
        self.p
    }
}

/// An explicit order: symbols listed from smallest to largest.
#[derive(Debug, Clone, Default)]
pub struct ExplicitOrder {
    ranks: HashMap<u32, u64>,
}

impl ExplicitOrder {
    pub fn new(ascending: &[u32]) -> Self {
        ExplicitOrder { ranks: ascending.iter().enumerate().map(|(i, &s)| (s, i as u64 + 1)).collect() }
    }
}

impl SymbolOrder for ExplicitOrder {
    fn rank(&self, sym: u32) -> u64 {
        *self.ranks.get(&sym).unwrap_or_else(|| panic!("symbol {sym} missing from explicit order"))
    }

    fn top(&self) -> u64 {
        self.ranks.len() as u64 + 1
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n;
    while !is_prime(c) {
        c += 1;
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosType {
    L,
    S,
    Lms,
}

/// SAIS-style L/S/LMS types for the interior positions `1..n-1` (0-based) of a wrapped
/// string; the first and last positions are `None`.
pub fn classify(s: &[u32], ord: &impl SymbolOrder) -> Vec<Option<PosType>> {
    let n = s.len();
    let mut small = vec![false; n];
    for j in (1..n.saturating_sub(1)).rev() {
        let (a, b) = (ord.value(s[j]), ord.value(s[j + 1]));
        small[j] = a < b || (a == b && small[j + 1]);
    }
    (0..n)
        .map(|j| {
            if j == 0 || j + 1 >= n {
                None
            } else if !small[j] {
                Some(PosType::L)
            } else if j >= 2 && !small[j - 1] {
                Some(PosType::Lms)
            } else {
                Some(PosType::S)
            }
        })
        .collect()
}

/// Positions `j` (0-based, `1 <= j <= n-2`) with `h(s[j-1]) > h(s[j]) <= h(s[j+1])`.
///
/// Every LMS position is such a minimum; the converse fails only at the head of an
/// equal run entered by a descent, where cutting keeps the phrase set fix-free.
pub fn local_minima(s: &[u32], ord: &impl SymbolOrder) -> Vec<usize> {
    let n = s.len();
    if n < 3 {
        return Vec::new();
    }
    let mut prev = ord.value(s[0]);
    let mut cur = ord.value(s[1]);
    let mut out = Vec::new();
    for j in 1..n - 1 {
        let next = ord.value(s[j + 1]);
        if prev > cur && cur <= next {
            out.push(j);
        }
        prev = cur;
        cur = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("string has no local minima")]
pub struct NoMinima;

/// Phrase intervals (0-based, inclusive) induced by a sorted list of minima.
pub fn phrases_from_minima(n: usize, minima: &[usize]) -> Result<Vec<(usize, usize)>, NoMinima> {
    let (&first, &last) = match (minima.first(), minima.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(NoMinima),
    };
    let mut out = Vec::with_capacity(minima.len() + 1);
    out.push((0, first + 1));
    for w in minima.windows(2) {
        out.push((w[0] - 1, w[1] + 1));
    }
    if last + 2 < n {
        out.push((last - 1, n - 1));
    }
    Ok(out)
}

pub fn parse(s: &[u32], ord: &impl SymbolOrder) -> Result<Vec<(usize, usize)>, NoMinima> {
    phrases_from_minima(s.len(), &local_minima(s, ord))
}

/// The result of parsing every string of one round with a shared order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRound {
    pub minima: Vec<Vec<usize>>,
    pub phrases: Vec<Vec<(usize, usize)>>,
}

impl ParseRound {
    pub fn run(strings: &[Vec<u32>], ord: &(impl SymbolOrder + Sync)) -> Result<ParseRound, NoMinima> {
        use rayon::prelude::*;
        let minima: Vec<Vec<usize>> = strings.par_iter().map(|s| local_minima(s, ord)).collect();
        let phrases = strings
            .iter()
            .zip(&minima)
            .map(|(s, m)| phrases_from_minima(s.len(), m))
            .collect::<Result<_, _>>()?;
        Ok(ParseRound { minima, phrases })
    }

    /// True when some string has a minimum other than the `$` before `#`.
    pub fn has_interior_minima(&self) -> bool {
        self.minima.iter().any(|m| m.len() > 1)
    }

    /// Distinct phrase strings.
    pub fn phrase_set<'a>(&self, strings: &'a [Vec<u32>]) -> Vec<&'a [u32]> {
        let mut set: Vec<&[u32]> = strings
            .iter()
            .zip(&self.phrases)
            .flat_map(|(s, ph)| ph.iter().map(move |&(a, b)| &s[a..=b]))
            .collect();
        set.sort_unstable();
        set.dedup();
        set
    }
}

/// Exact check that no phrase is a proper prefix or suffix of another.
pub fn is_fix_free<T: Ord + Clone>(set: &[Vec<T>]) -> bool {
    let mut v: Vec<Vec<T>> = set.to_vec();
    v.sort();
    v.dedup();
    let prefix_free = v.windows(2).all(|w| !w[1].starts_with(&w[0]));
    let mut r: Vec<Vec<T>> = v.iter().map(|s| s.iter().rev().cloned().collect()).collect();
    r.sort();
    let suffix_free = r.windows(2).all(|w| !w[1].starts_with(&w[0]));
    prefix_free && suffix_free
}
