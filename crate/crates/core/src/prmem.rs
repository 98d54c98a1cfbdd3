//! Level-by-level detection of primary MEMs on the grammar.
//!
//! Level `i` anchors every core child of its rules. A suffix `A_k..A_x` of a rule stands
//! for the text `efexp(A_k..A_{x-1}) rexp(A_x)`; sorting the anchored suffixes by the
//! classes of their symbols sorts these texts, and the symbol-level LCP is turned into a
//! text LCP with the satellite arrays of level `i - 1`. Pairs of anchors that meet at a
//! node of the implicit trie are extended to the left through `lexp` of the preceding
//! symbols, and kept when both ends are certified.

use std::collections::BTreeMap;
use std::fmt;

use crate::grammar::{Grammar, SymInfo};
use crate::lcparse::HASH;
use crate::sufstruct::{suffix_array_with_lcp, IntText, RmqArray};

/// A primary MEM anchored at two symbols: it starts `ox` characters after the start of
/// `efexp(x)` (negative when it begins in the left overlap) and has length `len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrMemTuple {
    pub x: u32,
    pub y: u32,
    pub ox: i64,
    pub oy: i64,
    pub len: u64,
}

impl PrMemTuple {
    /// The same tuple with its two sides ordered.
    pub fn canonical(self) -> PrMemTuple {
        if (self.y, self.oy) < (self.x, self.ox) {
            PrMemTuple { x: self.y, y: self.x, ox: self.oy, oy: self.ox, len: self.len }
        } else {
            self
        }
    }
}

impl fmt::Display for PrMemTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}\t{}", self.x, self.y, self.ox, self.oy, self.len)
    }
}

/// Classes, colexicographic permutation and LCS/LCP arrays of one level.
#[derive(Debug, Clone)]
pub struct SatelliteLevel {
    pub level: usize,
    pub first: u32,
    /// Class of `rexp`, indexed by `map`; equal classes mean equal expansions.
    pub rclass: Vec<u32>,
    /// Class of `lexp`, indexed by `map`.
    pub lclass: Vec<u32>,
    /// Colexicographic rank of `lexp`, indexed by `map`.
    pub p: Vec<u32>,
    /// LCS of `lexp` between neighbours in colexicographic order.
    pub lcs: RmqArray,
    /// LCP of `rexp` between neighbours in symbol order.
    pub lcpv: RmqArray,
}

/// The satellite information for the children of a level.
#[derive(Debug, Clone, Copy)]
pub enum Lower<'a> {
    Terminals,
    Level(&'a SatelliteLevel),
}

impl Lower<'_> {
    pub fn rclass(&self, sym: u32) -> u32 {
        match self {
            Lower::Level(s) if sym > HASH => s.rclass[(sym - s.first) as usize],
            _ => sym,
        }
    }

    pub fn lclass(&self, sym: u32) -> u32 {
        match self {
            Lower::Level(s) if sym > HASH => s.lclass[(sym - s.first) as usize],
            _ => sym,
        }
    }

    /// Longest common prefix of `rexp(a)` and `rexp(b)`.
    pub fn lcp(&self, g: &Grammar, a: u32, b: u32) -> u64 {
        if a <= HASH || b <= HASH {
            return 0;
        }
        match self {
            Lower::Terminals => (a == b) as u64,
            Lower::Level(_) if a == b => g.info(a).rexp,
            Lower::Level(s) => {
                let (ma, mb) = ((a - s.first) as usize, (b - s.first) as usize);
                s.lcpv.min(ma.min(mb) + 1, ma.max(mb))
            }
        }
    }

    /// Longest common suffix of `lexp(a)` and `lexp(b)`.
    pub fn lcs(&self, g: &Grammar, a: u32, b: u32) -> u64 {
        if a <= HASH || b <= HASH {
            return 0;
        }
        match self {
            Lower::Terminals => (a == b) as u64,
            Lower::Level(_) if a == b => g.info(a).lexp,
            Lower::Level(s) => {
                let (ra, rb) = (s.p[(a - s.first) as usize] as usize, s.p[(b - s.first) as usize] as usize);
                s.lcs.min(ra.min(rb) + 1, ra.max(rb))
            }
        }
    }
}

/// Builds the satellite arrays of level `i` from those of level `i - 1`.
pub fn build_satellite(g: &Grammar, i: usize, lower: Lower<'_>) -> SatelliteLevel {
    let lv = g.level(i);
    let n = lv.num_rules();
    let rules: Vec<&[u32]> = (0..n).map(|j| lv.rule(j)).collect();
    let info = |s: u32| g.info(s);

    let mut rclass = Vec::with_capacity(n);
    let mut c = 1;
    for j in 0..n {
        let key = |f: &[u32]| f[1..].iter().map(|&s| lower.rclass(s)).collect::<Vec<_>>();
        if j == 0 || key(rules[j]) != key(rules[j - 1]) {
            c += 1;
        }
        rclass.push(c);
    }

    let mut lcpv = vec![0u64; n];
    for j in 1..n {
        let (f, q) = (rules[j - 1], rules[j]);
        let mut acc = 0;
        let mut k = 1;
        loop {
            let last = k + 1 == f.len() || k + 1 == q.len();
            if !last && lower.rclass(f[k]) == lower.rclass(q[k]) {
                acc += info(f[k]).ef;
                k += 1;
            } else {
                acc += lower.lcp(g, f[k], q[k]);
                break;
            }
        }
        let x = g.info(lv.first + j as u32 - 1).rexp.min(g.info(lv.first + j as u32).rexp);
        lcpv[j] = acc.min(x);
    }

    let lkey = |f: &[u32]| f[..f.len() - 2].iter().rev().map(|&s| lower.lclass(s)).collect::<Vec<_>>();
    let keys: Vec<Vec<u32>> = rules.iter().map(|f| lkey(f)).collect();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| keys[a as usize].cmp(&keys[b as usize]).then(a.cmp(&b)));
    let mut p = vec![0u32; n];
    let mut lclass = vec![0u32; n];
    let mut lcs = vec![0u64; n];
    let mut c = 1;
    for (r, &j) in order.iter().enumerate() {
        p[j as usize] = r as u32;
        if r == 0 || keys[j as usize] != keys[order[r - 1] as usize] {
            c += 1;
        }
        lclass[j as usize] = c;
        if r == 0 {
            continue;
        }
        let (f, q) = (rules[order[r - 1] as usize], rules[j as usize]);
        let (mut ka, mut kb) = (f.len() - 3, q.len() - 3);
        let mut acc = 0;
        loop {
            if ka > 0 && kb > 0 && lower.lclass(f[ka]) == lower.lclass(q[kb]) {
                acc += info(f[ka]).ef;
                ka -= 1;
                kb -= 1;
            } else {
                acc += lower.lcs(g, f[ka], q[kb]);
                break;
            }
        }
        let x = g.info(lv.first + order[r - 1]).lexp.min(g.info(lv.first + j).lexp);
        lcs[r] = acc.min(x);
    }

    SatelliteLevel {
        level: i,
        first: lv.first,
        rclass,
        lclass,
        p,
        lcs: RmqArray::new(lcs),
        lcpv: RmqArray::new(lcpv),
    }
}

/// Builds the satellites of levels `1..=h`.
pub fn build_satellites(g: &Grammar) -> Vec<SatelliteLevel> {
    let mut sats: Vec<SatelliteLevel> = Vec::with_capacity(g.height());
    for i in 1..=g.height() {
        let lower = sats.last().map_or(Lower::Terminals, Lower::Level);
        let s = build_satellite(g, i, lower);
        sats.push(s);
    }
    sats
}

/// Per-position view of one level used during detection.
pub struct LevelView<'a> {
    pub g: &'a Grammar,
    pub i: usize,
    pub lower: Lower<'a>,
    r: &'a [u32],
    o: &'a [i64],
    /// Position of the last symbol of the enclosing rule.
    end: Vec<u32>,
}

impl<'a> LevelView<'a> {
    pub fn new(g: &'a Grammar, i: usize, lower: Lower<'a>) -> Self {
        let lv = g.level(i);
        let mut end = vec![0u32; lv.len()];
        for j in 0..lv.num_rules() {
            let range = lv.rule_range(j);
            let e = range.end as u32 - 1;
            end[range].iter_mut().for_each(|x| *x = e);
        }
        LevelView { g, i, lower, r: &lv.r, o: &lv.o, end }
    }

    fn info(&self, sym: u32) -> &SymInfo {
        self.g.info(sym)
    }

    /// Whether `p` is a core position (neither the first nor one of the last two).
    pub fn is_anchor(&self, p: usize) -> bool {
        p > 0 && self.end[p - 1] == self.end[p] && (p as u32) + 2 <= self.end[p]
    }

    /// Text length of the children `start..p` (with `p` at most the last position).
    fn cum(&self, p: usize) -> i64 {
        if p as u32 == self.end[p] {
            self.o[p - 1] + self.info(self.r[p - 1]).ef as i64
        } else {
            self.o[p]
        }
    }

    /// Length of `efexp(A_k..A_{x-1}) rexp(A_x)` for the suffix starting at `p`.
    pub fn suffix_len(&self, p: usize) -> u64 {
        let e = self.end[p] as usize;
        (self.cum(e) - self.o[p]) as u64 + self.info(self.r[e]).rexp
    }

    pub fn suffix_open(&self, p: usize) -> bool {
        self.info(self.r[self.end[p] as usize]).right_open
    }

    pub fn offset(&self, p: usize) -> i64 {
        self.o[p]
    }

    pub fn symbol(&self, p: usize) -> u32 {
        self.r[p]
    }

    /// Anchors in sorted order with the number of equal leading classes between
    /// neighbours.
    pub fn sparse_sa(&self) -> (Vec<u32>, Vec<u32>) {
        let lv = self.g.level(self.i);
        let classes: Vec<u32> = self.r.iter().map(|&c| self.lower.rclass(c)).collect();
        let sigma = classes.iter().copied().max().unwrap_or(0) + 1;
        let text = IntText::from_strings((0..lv.num_rules()).map(|j| &classes[lv.rule_range(j)]), sigma);
        let (sa, lcp) = suffix_array_with_lcp(&text);
        let mut anchors = Vec::new();
        let mut t = Vec::new();
        let mut run = u32::MAX;
        for (j, &p) in sa.iter().enumerate() {
            run = run.min(lcp[j]);
            if self.is_anchor(p as usize) {
                t.push(if anchors.is_empty() { 0 } else { run });
                anchors.push(p);
                run = u32::MAX;
            }
        }
        (anchors, t)
    }

    /// Text LCP of the suffixes at `a` and `b` given that their first `t` symbols have
    /// equal classes.
    pub fn text_lcp(&self, a: usize, b: usize, t: usize) -> u64 {
        let a_done = a + t > self.end[a] as usize;
        let b_done = b + t > self.end[b] as usize;
        if a_done {
            self.suffix_len(a)
        } else if b_done {
            self.suffix_len(b)
        } else {
            (self.cum(a + t) - self.o[a]) as u64 + self.lower.lcp(self.g, self.r[a + t], self.r[b + t])
        }
    }

    /// Turns symbol-level LCPs into text LCPs.
    pub fn transform_glcp(&self, anchors: &[u32], t: &[u32]) -> Vec<u64> {
        (0..anchors.len())
            .map(|j| if j == 0 { 0 } else { self.text_lcp(anchors[j - 1] as usize, anchors[j] as usize, t[j] as usize) })
            .collect()
    }

    /// Certifies a trie pair and extends it to the left; returns the tuple if both ends
    /// are maximal and the length reaches `tau`.
    pub fn emit(&self, u: usize, v: usize, l: u64, tau: u64) -> Option<PrMemTuple> {
        let right = |p: usize| l < self.suffix_len(p) || self.suffix_open(p);
        if l == 0 || !right(u) || !right(v) {
            return None;
        }
        let (a, b) = (self.r[u - 1], self.r[v - 1]);
        let o = self.lower.lcs(self.g, a, b);
        let left = |s: u32| {
            let inf = self.info(s);
            o < inf.lexp || inf.left_open
        };
        if !left(a) || !left(b) || l + o < tau {
            return None;
        }
        Some(PrMemTuple {
            x: self.g.parent(self.i, u),
            y: self.g.parent(self.i, v),
            ox: self.o[u] - o as i64,
            oy: self.o[v] - o as i64,
            len: l + o,
        })
    }

    /// Colexicographic key of the symbol left of anchor `p`; `None` for a sentinel.
    pub fn left_key(&self, p: usize) -> Option<u64> {
        let c = self.r[p - 1];
        if c <= HASH {
            return None;
        }
        Some(match self.lower {
            Lower::Terminals => c as u64,
            Lower::Level(s) => s.p[(c - s.first) as usize] as u64,
        })
    }

    /// Keys whose `lexp` shares a suffix of length at least `need >= 1` with the left
    /// symbol of anchor `p`, as an inclusive range.
    pub fn left_range(&self, p: usize, need: u64) -> Option<(u64, u64)> {
        let key = self.left_key(p)?;
        if self.info(self.r[p - 1]).lexp < need {
            return None;
        }
        match self.lower {
            Lower::Terminals => Some((key, key)),
            Lower::Level(s) => {
                let k = key as usize;
                let (mut lo, mut b) = (0usize, k);
                while lo < b {
                    let m = (lo + b) / 2;
                    if s.lcs.min(m + 1, k) >= need {
                        b = m
                    } else {
                        lo = m + 1
                    }
                }
                let n = s.lcs.len();
                let (mut a, mut hi) = (k, n - 1);
                while a < hi {
                    let m = (a + hi).div_ceil(2);
                    if s.lcs.min(k + 1, m) >= need {
                        a = m
                    } else {
                        hi = m - 1
                    }
                }
                Some((lo as u64, hi as u64))
            }
        }
    }

    /// All prMEM tuples of this level.
    pub fn detect(&self, tau: u64) -> Vec<PrMemTuple> {
        let (anchors, t) = self.sparse_sa();
        let glcp = self.transform_glcp(&anchors, &t);
        let keys: Vec<Option<u64>> = anchors.iter().map(|&p| self.left_key(p as usize)).collect();
        let mut out = Vec::new();
        enumerate_mems(
            &glcp,
            &keys,
            tau,
            |j, need| self.left_range(anchors[j] as usize, need),
            |a, b, l| {
                let (u, v) = (anchors[a] as usize, anchors[b] as usize);
                if let Some(tu) = self.emit(u, v, l, tau) {
                    out.push(tu);
                }
            },
        );
        out
    }
}

#[derive(Default)]
struct Group {
    depth: u64,
    size: usize,
    /// Leaves by left key; `None` collects leaves that cannot extend to the left.
    leaves: BTreeMap<Option<u64>, Vec<u32>>,
}

impl Group {
    fn leaf(j: usize, key: Option<u64>) -> Group {
        Group { depth: 0, size: 1, leaves: BTreeMap::from([(key, vec![j as u32])]) }
    }

    fn absorb(&mut self, mut other: Group) {
        if other.size > self.size {
            std::mem::swap(&mut self.leaves, &mut other.leaves);
        }
        self.size += other.size;
        for (k, mut v) in other.leaves {
            self.leaves.entry(k).or_default().append(&mut v);
        }
    }
}

/// Bottom-up traversal of the LCP intervals of `glcp`.
///
/// Calls `visit(a, b, l)` with `a < b` for leaves whose longest common prefix is
/// `l >= 1` and whose left extensions can make up the difference to `tau`: when
/// `l < tau`, `b`'s key must fall in `range(a, tau - l)` (a symmetric relation).
pub fn enumerate_mems(
    glcp: &[u64],
    keys: &[Option<u64>],
    tau: u64,
    range: impl Fn(usize, u64) -> Option<(u64, u64)>,
    mut visit: impl FnMut(usize, usize, u64),
) {
    let m = glcp.len();
    let mut stack = vec![Group::default()];
    let mut merge = |node: &mut Group, carried: Group| {
        let d = node.depth;
        if d > 0 {
            let (small, large) = if carried.size <= node.size { (&carried, &*node) } else { (&*node, &carried) };
            let need = tau.saturating_sub(d);
            for &b in small.leaves.values().flatten() {
                let b = b as usize;
                let mut pair = |a: u32| visit((a as usize).min(b), (a as usize).max(b), d);
                if need == 0 {
                    large.leaves.values().flatten().for_each(|&a| pair(a));
                } else if let Some((lo, hi)) = range(b, need) {
                    large.leaves.range(Some(lo)..=Some(hi)).flat_map(|(_, v)| v).for_each(|&a| pair(a));
                }
            }
        }
        node.absorb(carried);
    };
    for j in 0..m {
        let next = if j + 1 < m { glcp[j + 1] } else { 0 };
        let mut carried = Group::leaf(j, keys[j]);
        while stack.last().unwrap().depth > next {
            let mut node = stack.pop().unwrap();
            merge(&mut node, carried);
            carried = node;
        }
        let top = stack.last_mut().unwrap();
        if top.depth == next {
            merge(top, carried);
        } else {
            carried.depth = next;
            stack.push(carried);
        }
    }
}

/// Runs detection on levels `1..=h+1`.
pub fn find_prmems(g: &Grammar, tau: u64) -> Vec<PrMemTuple> {
    let sats = build_satellites(g);
    let mut out = Vec::new();
    for i in 1..=g.height() + 1 {
        let lower = if i == 1 { Lower::Terminals } else { Lower::Level(&sats[i - 2]) };
        out.extend(LevelView::new(g, i, lower).detect(tau));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::running_grammar;
    use crate::textio::TextCollection;

    fn tuple(x: u32, y: u32, ox: i64, oy: i64, len: u64) -> PrMemTuple {
        PrMemTuple { x, y, ox, oy, len }
    }

    #[test]
    fn level_one_detection() {
        let g = running_grammar();
        let view = LevelView::new(&g, 1, Lower::Terminals);
        let (anchors, _) = view.sparse_sa();
        assert_eq!(anchors, [1, 7, 13, 19, 2, 9, 8, 25, 14, 20, 26, 15, 3, 21]);
        let mut got = view.detect(3);
        got.sort();
        assert_eq!(got, [tuple(260, 258, 0, 1, 3), tuple(260, 259, 0, 1, 3)]);
    }

    #[test]
    fn level_two_detection() {
        let g = running_grammar();
        let sats = build_satellites(&g);
        assert_eq!(sats[0].p, [1, 0, 3, 4, 2]);
        assert_eq!(Lower::Level(&sats[0]).lcs(&g, 259, 256), 1);
        assert_eq!(Lower::Level(&sats[0]).lcp(&g, 258, 259), 4);
        let view = LevelView::new(&g, 2, Lower::Level(&sats[0]));
        let (anchors, t) = view.sparse_sa();
        assert_eq!(anchors, [1, 7, 6, 2, 11]);
        assert_eq!(view.transform_glcp(&anchors, &t), [0, 1, 1, 4, 0]);
        let mut got = view.detect(3);
        got.sort();
        assert_eq!(got, [tuple(261, 262, -2, -2, 3), tuple(261, 262, -2, 1, 3), tuple(262, 261, -1, 2, 5)]);
    }

    #[test]
    fn all_levels() {
        let g = running_grammar();
        let got = find_prmems(&g, 3);
        assert_eq!(got.len(), 6);
        assert!(got.contains(&tuple(264, 264, 0, 6, 3)));
        assert!(find_prmems(&g, 6).is_empty());
    }

    #[test]
    fn identical_strings() {
        let tc = TextCollection::from_strings(["acgtac", "acgtac"]).unwrap();
        let g = Grammar::build(&tc, 2);
        let mut got = find_prmems(&g, 6);
        got.dedup();
        let s = g.start_symbol();
        assert_eq!(got, [tuple(s, s, 0, 6, 6)]);
    }

    #[test]
    fn enumeration_without_pruning() {
        // Three leaves: 0 and 1 share 2 characters, all three share 1.
        let mut seen = Vec::new();
        enumerate_mems(&[0, 2, 1], &[None, None, None], 1, |_, _| None, |a, b, l| seen.push((a, b, l)));
        seen.sort();
        assert_eq!(seen, [(0, 1, 2), (0, 2, 1), (1, 2, 1)]);
    }

    #[test]
    fn enumeration_prunes_by_key() {
        let mut seen = Vec::new();
        let keys = [Some(1), Some(2), Some(1)];
        enumerate_mems(&[0, 3, 3], &keys, 5, |j, _| keys[j].map(|k| (k, k)), |a, b, l| seen.push((a, b, l)));
        assert_eq!(seen, [(0, 2, 3)]);
    }
}
