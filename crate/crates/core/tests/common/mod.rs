//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use ffmem::grammar::{Grammar, Ranking};
use ffmem::lcparse::{is_fix_free, ExplicitOrder};
use ffmem::prmem::{build_satellites, LevelView, Lower};
use ffmem::TextCollection;
use rand::Rng;

pub const DNA: &[u8] = b"acgt";

pub fn random_string<R: Rng>(rng: &mut R, alphabet: &[u8], len: usize) -> Vec<u8> {
    (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
}

/// `1..=max_strings` random DNA strings with total length at most `max_total`.
pub fn random_collection<R: Rng>(rng: &mut R, max_strings: usize, max_total: usize) -> TextCollection {
    let m = rng.random_range(1..=max_strings);
    let cap = (max_total / m).max(1);
    let strings: Vec<Vec<u8>> = (0..m)
        .map(|_| {
            let len = rng.random_range(1..=cap);
            random_string(rng, DNA, len)
        })
        .collect();
    TextCollection::from_strings(strings).unwrap()
}

/// Applies about `rate * len` point substitutions.
pub fn mutate<R: Rng>(rng: &mut R, s: &[u8], rate: f64) -> Vec<u8> {
    let mut out = s.to_vec();
    let k = (rate * s.len() as f64).round() as usize;
    for _ in 0..k {
        let p = rng.random_range(0..out.len());
        let c = out[p];
        out[p] = *DNA.iter().filter(|&&d| d != c).nth(rng.random_range(0..3)).unwrap();
    }
    out
}

/// `copies` mutated copies of one random base string.
pub fn repetitive_collection<R: Rng>(rng: &mut R, copies: usize, base_len: usize, rate: f64) -> TextCollection {
    let base = random_string(rng, DNA, base_len);
    TextCollection::from_strings((0..copies).map(|_| mutate(rng, &base, rate))).unwrap()
}

/// The grammar of `gtaatagtagtacc` under fixed per-round orders.
pub fn running_grammar() -> Grammar {
    let tc = TextCollection::from_strings(["gtaatagtagtacc"]).unwrap();
    let orders: [Vec<u32>; 3] =
        [b"acgt".iter().map(|&c| c as u32).collect(), vec![256, 258, 257, 259, 260], vec![263, 261, 262]];
    Grammar::build_with(&tc, Ranking::Symbols, |round, _| ExplicitOrder::new(&orders[round]))
}

/// Levels whose expansion set is not prefix- and suffix-free.
pub fn fix_free_violations(g: &Grammar) -> usize {
    (1..=g.height())
        .filter(|&i| {
            let lv = g.level(i);
            let set: Vec<Vec<u8>> = (0..lv.num_rules()).map(|j| g.exp_str(lv.first + j as u32)).collect();
            !is_fix_free(&set)
        })
        .count()
}

/// Fully balanced, offsets consistent, and the start cores decompress to the input.
pub fn balanced_and_tiled(g: &Grammar, tc: &TextCollection) -> bool {
    g.is_fully_balanced() && g.offsets_consistent() && g.expand_strings() == tc.strings
}

fn real(s: &[u8]) -> Vec<u8> {
    s.iter().copied().filter(|&c| c > 1).collect()
}

pub fn lcp(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).take_while(|(x, y)| x == y).count() as u64
}

pub fn lcs(a: &[u8], b: &[u8]) -> u64 {
    a.iter().rev().zip(b.iter().rev()).take_while(|(x, y)| x == y).count() as u64
}

/// Compares every satellite `lcs`/`lcp` answer and every transformed GLCP entry with
/// values computed on expanded strings; returns `(checks, mismatches)`.
pub fn satellite_mismatches(g: &Grammar) -> (usize, usize) {
    let sats = build_satellites(g);
    let (mut checks, mut bad) = (0, 0);
    for (k, s) in sats.iter().enumerate() {
        let lv = g.level(k + 1);
        let syms: Vec<u32> = (0..lv.num_rules() as u32).map(|j| lv.first + j).collect();
        let lx: Vec<Vec<u8>> = syms.iter().map(|&a| real(&g.lexp_str(a))).collect();
        let rx: Vec<Vec<u8>> = syms.iter().map(|&a| real(&g.rexp_str(a))).collect();
        let lower = Lower::Level(s);
        for (u, &a) in syms.iter().enumerate() {
            for (v, &b) in syms.iter().enumerate() {
                checks += 2;
                bad += (lower.lcs(g, a, b) != lcs(&lx[u], &lx[v])) as usize;
                bad += (lower.lcp(g, a, b) != lcp(&rx[u], &rx[v])) as usize;
            }
        }
    }
    for i in 1..=g.height() + 1 {
        let lower = if i == 1 { Lower::Terminals } else { Lower::Level(&sats[i - 2]) };
        let view = LevelView::new(g, i, lower);
        let (anchors, t) = view.sparse_sa();
        let glcp = view.transform_glcp(&anchors, &t);
        let lv = g.level(i);
        let suffix = |p: usize| {
            let end = lv.rule_range(lv.rule_of(p)).end - 1;
            let mut out: Vec<u8> = lv.r[p..end].iter().flat_map(|&c| g.efexp_str(c)).collect();
            out.extend(real(&g.rexp_str(lv.r[end])));
            out
        };
        let texts: Vec<Vec<u8>> = anchors.iter().map(|&p| suffix(p as usize)).collect();
        for j in 1..anchors.len() {
            checks += 1;
            bad += (glcp[j] != lcp(&texts[j - 1], &texts[j]) || texts[j - 1] > texts[j]) as usize;
        }
    }
    (checks, bad)
}

pub fn lcp_u32(a: &[u32], b: &[u32]) -> u64 {
    a.iter().zip(b).take_while(|(x, y)| x == y).count() as u64
}
