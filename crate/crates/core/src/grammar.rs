//! The fully-balanced fix-free grammar built by repeated parsing rounds.
//!
//! Symbol ids: `0` is `$`, `1` is `#`, `2..256` are terminal bytes, and nonterminals
//! follow level by level from `256`. The sentinels are shared by every level. Each level
//! stores its rules back to back in `r`, with a rule-start bitvector and the offset row
//! `o` of every rule (`o[k]` is the length of `efexp` of the core children before `k`).
//! The last level holds one pseudo-rule `$ w $ #` per string, all owned by the start
//! symbol, with offsets measured in the concatenated text.

use std::collections::HashMap;
use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lcparse::{HashOrder, ParseRound, SymbolOrder, DOLLAR, HASH};
use crate::prmem::PrMemTuple;
use crate::sufstruct::BitVec;
use crate::textio::TextCollection;

pub const SIGMA: u32 = 256;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 58;

const MAGIC: &[u8; 4] = b"FFG1";
const VERSION: u32 = 1;

/// What the per-round order ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ranking {
    /// Each symbol separately.
    Symbols,
    /// Groups of symbols linked by an equal `rexp` or an equal `lexp`. Cuts then depend
    /// only on expansions, so distinct `rexp` stay prefix-free and distinct `lexp`
    /// suffix-free at every level, which detection needs to be exact.
    #[default]
    Components,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    /// Symbol id of the first rule; on the start level, the start symbol.
    pub first: u32,
    pub r: Vec<u32>,
    pub o: Vec<i64>,
    pub starts: BitVec,
}

impl Level {
    fn new(first: u32, rules: &[&[u32]], offsets: impl Fn(usize, &[u32]) -> Vec<i64>) -> Level {
        let total: usize = rules.iter().map(|r| r.len()).sum();
        let mut r = Vec::with_capacity(total);
        let mut o = Vec::with_capacity(total);
        let mut bits = vec![false; total];
        for (j, rule) in rules.iter().enumerate() {
            bits[r.len()] = true;
            r.extend_from_slice(rule);
            o.extend(offsets(j, rule));
        }
        Level { first, r, o, starts: BitVec::from_bools(&bits) }
    }

    pub fn num_rules(&self) -> usize {
        self.starts.count_ones()
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Positions of the `j`-th rule (0-based) in `r`.
    pub fn rule_range(&self, j: usize) -> Range<usize> {
        let a = self.starts.select1(j + 1).expect("rule index out of range");
        let b = self.starts.select1(j + 2).unwrap_or(self.r.len());
        a..b
    }

    /// Index of the rule containing position `b`.
    pub fn rule_of(&self, b: usize) -> usize {
        self.starts.rank1(b + 1) - 1
    }

    pub fn rule(&self, j: usize) -> &[u32] {
        &self.r[self.rule_range(j)]
    }
}

/// Per-symbol expansion lengths. Lengths count real characters only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SymInfo {
    pub level: u32,
    pub ef: u64,
    pub lexp: u64,
    pub rexp: u64,
    /// `lexp` reaches the start of its string.
    pub left_open: bool,
    /// `rexp` reaches the end of its string.
    pub right_open: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub sigma: u32,
    /// Levels `1..=h+1`; the last one is the start level.
    pub levels: Vec<Level>,
    pub text_base: Vec<u64>,
    pub text_lens: Vec<u64>,
    pub ids: Vec<String>,
    info: Vec<SymInfo>,
}

impl Grammar {
    /// Builds the grammar with hash orders drawn from a seeded generator.
    pub fn build(tc: &TextCollection, seed: u64) -> Grammar {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::build_with(tc, Ranking::Components, |_, alphabet| HashOrder::draw(alphabet, &mut rng))
    }

    /// Builds the grammar with a caller-supplied order per round.
    ///
    /// `order(round, keys)` receives the 0-based round and the sorted live ranking keys
    /// (see [`Ranking`]); at round 0 the keys are the byte values.
    pub fn build_with<O, F>(tc: &TextCollection, ranking: Ranking, mut order: F) -> Grammar
    where
        O: SymbolOrder + Sync,
        F: FnMut(usize, &[u32]) -> O,
    {
        let mut info = terminal_info();
        let mut class: Vec<u32> = (0..SIGMA).collect();
        let mut lclass: Vec<u32> = (0..SIGMA).collect();
        let mut comp: Vec<u32> = (0..SIGMA).collect();
        let mut cur: Vec<Vec<u32>> = tc
            .strings
            .iter()
            .map(|s| {
                let mut w = Vec::with_capacity(s.len() + 3);
                w.push(DOLLAR);
                w.extend(s.iter().map(|&c| c as u32));
                w.extend([DOLLAR, HASH]);
                w
            })
            .collect();
        let mut levels = Vec::new();
        let mut next = SIGMA;
        let mut round = 0;
        loop {
            let key = |c: u32| match ranking {
                Ranking::Symbols => c,
                Ranking::Components => comp[c as usize],
            };
            let classes: Vec<Vec<u32>> = cur.iter().map(|w| w.iter().map(|&c| key(c)).collect()).collect();
            let alphabet = live_alphabet(&classes, next);
            let ord = order(round, &alphabet);
            let pr = ParseRound::run(&classes, &ord).expect("wrapped strings always have a minimum");
            if !pr.has_interior_minima() {
                break;
            }
            let mut index: HashMap<&[u32], u32> = HashMap::new();
            let mut distinct: Vec<&[u32]> = Vec::new();
            let per_string: Vec<Vec<u32>> = cur
                .iter()
                .zip(&pr.phrases)
                .map(|(s, ph)| {
                    ph.iter()
                        .map(|&(a, b)| {
                            let f = &s[a..=b];
                            *index.entry(f).or_insert_with(|| {
                                distinct.push(f);
                                distinct.len() as u32 - 1
                            })
                        })
                        .collect()
                })
                .collect();
            let mut order_idx: Vec<u32> = (0..distinct.len() as u32).collect();
            order_idx.sort_by(|&x, &y| {
                let (f, q) = (distinct[x as usize], distinct[y as usize]);
                f[1..]
                    .iter()
                    .map(|&c| class[c as usize])
                    .cmp(q[1..].iter().map(|&c| class[c as usize]))
                    .then_with(|| f[1..].cmp(&q[1..]))
                    .then_with(|| ord.value(key(f[0])).cmp(&ord.value(key(q[0]))))
                    .then_with(|| f[0].cmp(&q[0]))
            });
            let mut id_of = vec![0u32; distinct.len()];
            for (rank, &t) in order_idx.iter().enumerate() {
                id_of[t as usize] = next + rank as u32;
            }
            let rules: Vec<&[u32]> = order_idx.iter().map(|&t| distinct[t as usize]).collect();
            let level = Level::new(next, &rules, |_, f| rule_offsets(f, &info, 0));
            push_level_info(&level, &mut info, levels.len() as u32 + 1);
            let mut c = 1u32;
            for (j, f) in rules.iter().enumerate() {
                if j == 0 || !f[1..].iter().map(|&s| class[s as usize]).eq(rules[j - 1][1..].iter().map(|&s| class[s as usize])) {
                    c += 1;
                }
                class.push(c);
            }
            let lkeys: Vec<Vec<u32>> =
                rules.iter().map(|f| f[..f.len() - 2].iter().rev().map(|&c| lclass[c as usize]).collect()).collect();
            let mut lorder: Vec<usize> = (0..rules.len()).collect();
            lorder.sort_by(|&a, &b| lkeys[a].cmp(&lkeys[b]));
            let mut lc = vec![0u32; rules.len()];
            let mut c = 1u32;
            for (r, &j) in lorder.iter().enumerate() {
                if r == 0 || lkeys[j] != lkeys[lorder[r - 1]] {
                    c += 1;
                }
                lc[j] = c;
            }
            lclass.extend_from_slice(&lc);
            comp.extend(expansion_components(&class[next as usize..], &lc));
            levels.push(level);
            next += rules.len() as u32;
            cur = per_string
                .into_iter()
                .map(|ids| {
                    let mut w = Vec::with_capacity(ids.len() + 3);
                    w.push(DOLLAR);
                    w.extend(ids.into_iter().map(|t| id_of[t as usize]));
                    w.extend([DOLLAR, HASH]);
                    w
                })
                .collect();
            round += 1;
        }
        let rules: Vec<&[u32]> = cur.iter().map(|w| w.as_slice()).collect();
        let start = Level::new(next, &rules, |j, f| rule_offsets(f, &info, tc.base[j] as i64));
        info.push(SymInfo { level: levels.len() as u32 + 1, ..Default::default() });
        levels.push(start);
        Grammar {
            sigma: SIGMA,
            levels,
            text_base: tc.base.clone(),
            text_lens: tc.strings.iter().map(|s| s.len() as u64).collect(),
            ids: tc.ids.clone(),
            info,
        }
    }

    /// Number of parsing rounds `h`.
    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    /// Level `i` (1-based; `h + 1` is the start level).
    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i - 1]
    }

    pub fn start_level(&self) -> &Level {
        self.levels.last().unwrap()
    }

    pub fn start_symbol(&self) -> u32 {
        self.start_level().first
    }

    /// Positions in the start level where each string's pseudo-rule begins.
    pub fn start_bounds(&self) -> Vec<usize> {
        let s = self.start_level();
        (0..s.num_rules()).map(|j| s.rule_range(j).start).collect()
    }

    pub fn num_symbols(&self) -> usize {
        self.info.len()
    }

    pub fn info(&self, sym: u32) -> &SymInfo {
        &self.info[sym as usize]
    }

    pub fn symbol_level(&self, sym: u32) -> usize {
        self.info[sym as usize].level as usize
    }

    pub fn efexp_len(&self, sym: u32) -> u64 {
        self.info[sym as usize].ef
    }

    pub fn is_nonterminal(&self, sym: u32) -> bool {
        sym >= self.sigma && sym < self.start_symbol()
    }

    /// 0-based ordinal of nonterminal `sym` within its level.
    pub fn map(&self, sym: u32) -> usize {
        assert!(self.is_nonterminal(sym), "symbol {sym} is not a nonterminal");
        (sym - self.level(self.symbol_level(sym)).first) as usize
    }

    /// Symbol whose rule encloses position `b` of level `i`.
    pub fn parent(&self, i: usize, b: usize) -> u32 {
        let lv = self.level(i);
        assert!(b < lv.len(), "position {b} out of range on level {i}");
        if i == self.levels.len() {
            lv.first
        } else {
            lv.first + lv.rule_of(b) as u32
        }
    }

    /// Right-hand side of nonterminal `sym`.
    pub fn rhs(&self, sym: u32) -> &[u32] {
        self.level(self.symbol_level(sym)).rule(self.map(sym))
    }

    /// Total grammar size `G` (sum of right-hand side lengths, start level included).
    pub fn size(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    /// Number of nonterminals `g`, the start symbol included.
    pub fn num_rules(&self) -> usize {
        self.levels[..self.height()].iter().map(|l| l.num_rules()).sum::<usize>() + 1
    }

    pub fn text_len(&self) -> u64 {
        self.text_lens.iter().sum()
    }

    pub fn efexp_str(&self, sym: u32) -> Vec<u8> {
        let mut out = Vec::new();
        self.push_efexp(sym, &mut out);
        out
    }

    fn push_efexp(&self, sym: u32, out: &mut Vec<u8>) {
        if sym < self.sigma {
            if sym > HASH {
                out.push(sym as u8);
            }
            return;
        }
        let f = self.rhs(sym);
        for &c in &f[1..f.len() - 2] {
            self.push_efexp(c, out);
        }
    }

    /// `lexp(sym)`; an expansion that reaches the string start begins with a `$` byte.
    pub fn lexp_str(&self, sym: u32) -> Vec<u8> {
        if sym < self.sigma {
            return vec![if sym > HASH { sym as u8 } else { DOLLAR as u8 }];
        }
        let f = self.rhs(sym);
        let mut out = self.lexp_str(f[0]);
        for &c in &f[1..f.len() - 2] {
            self.push_efexp(c, &mut out);
        }
        out
    }

    /// `rexp(sym)`; an expansion that reaches the string end finishes with a `#` byte.
    pub fn rexp_str(&self, sym: u32) -> Vec<u8> {
        if sym < self.sigma {
            return vec![if sym > HASH { sym as u8 } else { HASH as u8 }];
        }
        let f = self.rhs(sym);
        let mut out = Vec::new();
        for &c in &f[1..f.len() - 1] {
            self.push_efexp(c, &mut out);
        }
        out.extend(self.rexp_str(f[f.len() - 1]));
        out
    }

    /// Full expansion with sentinel bytes kept.
    pub fn exp_str(&self, sym: u32) -> Vec<u8> {
        if sym < self.sigma {
            return vec![sym as u8];
        }
        self.rhs(sym).iter().flat_map(|&c| self.exp_str(c)).collect()
    }

    /// Decompresses every string from the cores of the start level.
    pub fn expand_strings(&self) -> Vec<Vec<u8>> {
        let s = self.start_level();
        (0..s.num_rules())
            .map(|j| {
                let f = s.rule(j);
                let mut out = Vec::new();
                for &c in &f[1..f.len() - 2] {
                    self.push_efexp(c, &mut out);
                }
                out
            })
            .collect()
    }

    /// Every right-hand-side symbol of level `i` is a sentinel or has level `i - 1`.
    pub fn is_fully_balanced(&self) -> bool {
        self.levels.iter().enumerate().all(|(k, lv)| {
            lv.r.iter().all(|&c| c <= HASH || self.symbol_level(c) == k) && lv.starts.get(0)
        })
    }

    /// Recomputes every offset row from `efexp_len`.
    pub fn offsets_consistent(&self) -> bool {
        let h = self.levels.len();
        self.levels.iter().enumerate().all(|(k, lv)| {
            (0..lv.num_rules()).all(|j| {
                let range = lv.rule_range(j);
                let base = if k + 1 == h { self.text_base[j] as i64 } else { 0 };
                rule_offsets(&lv.r[range.clone()], &self.info, base) == lv.o[range]
            })
        })
    }

    pub fn serialize(&self) -> Vec<u8> {
        let mut w = Vec::new();
        w.extend_from_slice(MAGIC);
        put_u32(&mut w, VERSION);
        put_u32(&mut w, self.sigma);
        put_u32(&mut w, self.height() as u32);
        for lv in &self.levels {
            put_u64(&mut w, lv.num_rules() as u64);
            put_u64(&mut w, lv.len() as u64);
            for &c in &lv.r {
                put_u32(&mut w, c);
            }
            for &o in &lv.o {
                w.extend_from_slice(&o.to_le_bytes());
            }
            for &x in lv.starts.words() {
                put_u64(&mut w, x);
            }
        }
        put_u64(&mut w, self.text_base.len() as u64);
        for &b in &self.start_bounds() {
            put_u64(&mut w, b as u64);
        }
        for &b in &self.text_base {
            put_u64(&mut w, b);
        }
        for &l in &self.text_lens {
            put_u64(&mut w, l);
        }
        for id in &self.ids {
            put_u32(&mut w, id.len() as u32);
            w.extend_from_slice(id.as_bytes());
        }
        w
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Grammar> {
        let mut rd = Reader { b: bytes, pos: 0 };
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(Error::BadMagic);
        }
        rd.pos = 4;
        let version = rd.u32()?;
        if version != VERSION {
            return Err(Error::UnsupportedVersion(version));
        }
        let sigma = rd.u32()?;
        if sigma != SIGMA {
            return Err(Error::Corrupt(format!("sigma {sigma}")));
        }
        let h = rd.u32()? as usize;
        let mut levels = Vec::with_capacity(h + 1);
        let mut next = SIGMA;
        for _ in 0..=h {
            let g = rd.u64()? as usize;
            let len = rd.u64()? as usize;
            rd.need(len.saturating_mul(12))?;
            let r = (0..len).map(|_| rd.u32()).collect::<Result<Vec<_>>>()?;
            let o = (0..len).map(|_| rd.u64().map(|x| x as i64)).collect::<Result<Vec<_>>>()?;
            let words = (0..len.div_ceil(64)).map(|_| rd.u64()).collect::<Result<Vec<_>>>()?;
            let starts = BitVec::from_words(words, len);
            if starts.count_ones() != g || (len > 0 && !starts.get(0)) || r.iter().any(|&c| c >= next) {
                return Err(Error::Corrupt("level layout".into()));
            }
            levels.push(Level { first: next, r, o, starts });
            next += g as u32;
        }
        let m = rd.u64()? as usize;
        rd.need(m.saturating_mul(24))?;
        let bounds = (0..m).map(|_| rd.u64()).collect::<Result<Vec<_>>>()?;
        let text_base = (0..m).map(|_| rd.u64()).collect::<Result<Vec<_>>>()?;
        let text_lens = (0..m).map(|_| rd.u64()).collect::<Result<Vec<_>>>()?;
        let mut ids = Vec::with_capacity(m);
        for _ in 0..m {
            let l = rd.u32()? as usize;
            let s = rd.take(l)?;
            ids.push(String::from_utf8(s.to_vec()).map_err(|_| Error::Corrupt("string id".into()))?);
        }
        if rd.pos != bytes.len() {
            return Err(Error::Corrupt("trailing bytes".into()));
        }
        let start = levels.last().unwrap();
        if start.num_rules() != m || (0..m).any(|j| start.rule_range(j).start as u64 != bounds[j]) {
            return Err(Error::Corrupt("start bounds".into()));
        }
        if levels.iter().any(|lv| (0..lv.num_rules()).any(|j| lv.rule_range(j).len() < 3)) {
            return Err(Error::Corrupt("short rule".into()));
        }
        let mut info = terminal_info();
        for (k, lv) in levels[..h].iter().enumerate() {
            if lv.r.iter().any(|&c| c > HASH && c >= lv.first) {
                return Err(Error::Corrupt("forward reference".into()));
            }
            push_level_info(lv, &mut info, k as u32 + 1);
        }
        info.push(SymInfo { level: h as u32 + 1, ..Default::default() });
        Ok(Grammar { sigma, levels, text_base, text_lens, ids, info })
    }
}

fn terminal_info() -> Vec<SymInfo> {
    (0..SIGMA)
        .map(|c| {
            if c <= HASH {
                SymInfo { level: 0, ef: 0, lexp: 0, rexp: 0, left_open: true, right_open: true }
            } else {
                SymInfo { level: 0, ef: 1, lexp: 1, rexp: 1, left_open: false, right_open: false }
            }
        })
        .collect()
}

/// Groups the symbols of one level that are linked by an equal right class or an equal
/// left class; returns a component id (at least 2) per symbol.
fn expansion_components(rclass: &[u32], lclass: &[u32]) -> Vec<u32> {
    let n = rclass.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for classes in [rclass, lclass] {
        let mut first: HashMap<u32, usize> = HashMap::new();
        for (j, &c) in classes.iter().enumerate() {
            let r = *first.entry(c).or_insert(j);
            let (a, b) = (find(&mut parent, r), find(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..n).map(|j| find(&mut parent, j) as u32 + 2).collect()
}

fn live_alphabet(cur: &[Vec<u32>], next: u32) -> Vec<u32> {
    let mut seen = vec![false; next as usize];
    for s in cur {
        for &c in s {
            seen[c as usize] = true;
        }
    }
    (HASH + 1..next).filter(|&c| seen[c as usize]).collect()
}

/// Offset row of one rule: `c1 = c2 = 0`, `c_j` sums `efexp` of children `2..j-1`,
/// `c_x = c_{x-1}`; every value is shifted by `base`.
fn rule_offsets(f: &[u32], info: &[SymInfo], base: i64) -> Vec<i64> {
    let x = f.len();
    let mut o = vec![base; x];
    for j in 2..x - 1 {
        o[j] = o[j - 1] + info[f[j - 1] as usize].ef as i64;
    }
    o[x - 1] = o[x - 2];
    o
}

fn push_level_info(level: &Level, info: &mut Vec<SymInfo>, lvl: u32) {
    for j in 0..level.num_rules() {
        let f = level.rule(j);
        let x = f.len();
        let ef: u64 = f[1..x - 2].iter().map(|&c| info[c as usize].ef).sum();
        let first = info[f[0] as usize];
        let last = info[f[x - 1] as usize];
        info.push(SymInfo {
            level: lvl,
            ef,
            lexp: first.lexp + ef,
            rexp: ef + info[f[x - 2] as usize].ef + last.rexp,
            left_open: first.left_open,
            right_open: last.right_open,
        });
    }
}

fn put_u32(w: &mut Vec<u8>, x: u32) {
    w.extend_from_slice(&x.to_le_bytes());
}

fn put_u64(w: &mut Vec<u8>, x: u64) {
    w.extend_from_slice(&x.to_le_bytes());
}

struct Reader<'a> {
    b: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn need(&self, n: usize) -> Result<()> {
        if self.b.len() - self.pos < n {
            Err(Error::Truncated)
        } else {
            Ok(())
        }
    }

    fn take(&mut self, n: usize) -> Result<&[u8]> {
        self.need(n)?;
        let s = &self.b[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// A grammar flattened into one rule array, as used for reporting.
///
/// Rule `j` belongs to symbol `first + j`; the last rule is the start symbol. Positions
/// marked in `core` are the occurrences that own their text (overlap children do not).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGrammar {
    pub first: u32,
    pub r: Vec<u32>,
    pub o: Vec<i64>,
    pub core: Vec<bool>,
    pub starts: BitVec,
    pub text_base: Vec<u64>,
    pub text_lens: Vec<u64>,
}

impl SimpleGrammar {
    pub fn from_grammar(g: &Grammar) -> SimpleGrammar {
        let mut r = Vec::with_capacity(g.size());
        let mut o = Vec::with_capacity(g.size());
        let mut core = Vec::with_capacity(g.size());
        let mut bits = Vec::with_capacity(g.size());
        let h = g.height();
        for (k, lv) in g.levels.iter().enumerate() {
            for j in 0..lv.num_rules() {
                let range = lv.rule_range(j);
                let x = range.len();
                bits.push(k < h || j == 0);
                bits.extend(std::iter::repeat_n(false, x - 1));
                r.extend_from_slice(&lv.r[range.clone()]);
                o.extend_from_slice(&lv.o[range]);
                core.extend((0..x).map(|p| p >= 1 && p + 2 < x));
            }
        }
        SimpleGrammar {
            first: g.sigma,
            r,
            o,
            core,
            starts: BitVec::from_bools(&bits),
            text_base: g.text_base.clone(),
            text_lens: g.text_lens.clone(),
        }
    }

    pub fn num_rules(&self) -> usize {
        self.starts.count_ones()
    }

    pub fn start_symbol(&self) -> u32 {
        self.first + self.num_rules() as u32 - 1
    }

    pub fn num_symbols(&self) -> usize {
        self.start_symbol() as usize + 1
    }

    pub fn size(&self) -> usize {
        self.r.len()
    }

    pub fn parent(&self, b: usize) -> u32 {
        self.first + self.starts.rank1(b + 1) as u32 - 1
    }

    pub fn rule_range(&self, sym: u32) -> Range<usize> {
        let j = (sym - self.first) as usize;
        let a = self.starts.select1(j + 1).expect("unknown symbol");
        a..self.starts.select1(j + 2).unwrap_or(self.r.len())
    }

    /// Text of the core of `sym`.
    pub fn expand(&self, sym: u32) -> Vec<u8> {
        let mut out = Vec::new();
        self.push_expand(sym, &mut out);
        out
    }

    fn push_expand(&self, sym: u32, out: &mut Vec<u8>) {
        if sym < self.first {
            if sym > HASH {
                out.push(sym as u8);
            }
            return;
        }
        for p in self.rule_range(sym) {
            if self.core[p] {
                self.push_expand(self.r[p], out);
            }
        }
    }

    pub fn total_len(&self) -> u64 {
        self.text_lens.iter().sum()
    }

    /// Maps a global offset to `(string index, local offset)`.
    pub fn locate(&self, global: i64) -> Option<(usize, u64)> {
        if global < 0 || global as u64 >= self.total_len() {
            return None;
        }
        let g = global as u64;
        let x = self.text_base.partition_point(|&b| b <= g) - 1;
        Some((x, g - self.text_base[x]))
    }
}

/// Inlines every nonterminal with a single occurrence and renumbers the survivors.
///
/// Each tuple is rewritten to the surviving symbol that now encloses its anchor, with
/// the offset of the inlined body added.
pub fn simplify(g: &Grammar, tuples: &[PrMemTuple]) -> (SimpleGrammar, Vec<PrMemTuple>) {
    let flat = SimpleGrammar::from_grammar(g);
    let nsym = flat.num_symbols();
    let start = flat.start_symbol();
    let mut count = vec![0u32; nsym];
    for &c in &flat.r {
        count[c as usize] += 1;
    }
    let inline: Vec<bool> = (0..nsym as u32).map(|s| s >= flat.first && s != start && count[s as usize] == 1).collect();
    let mut new_id = vec![u32::MAX; nsym];
    let mut next = flat.first;
    for s in flat.first..=start {
        if !inline[s as usize] {
            new_id[s as usize] = next;
            next += 1;
        }
    }
    let mut k_of: Vec<u32> = (0..nsym as u32).map(|s| if s < flat.first { s } else { new_id[s as usize] }).collect();
    let mut shift = vec![0i64; nsym];

    struct Splice<'a> {
        flat: &'a SimpleGrammar,
        inline: &'a [bool],
        k_of: &'a mut [u32],
        shift: &'a mut [i64],
        r: Vec<u32>,
        o: Vec<i64>,
        core: Vec<bool>,
    }
    impl Splice<'_> {
        fn rule(&mut self, sym: u32, base: i64, mask: bool, root: u32) {
            for p in self.flat.rule_range(sym) {
                let c = self.flat.r[p];
                let at = base + self.flat.o[p];
                let keep = mask && self.flat.core[p];
                if self.inline[c as usize] {
                    self.k_of[c as usize] = root;
                    self.shift[c as usize] = at;
                    self.rule(c, at, keep, root);
                } else {
                    self.r.push(c);
                    self.o.push(at);
                    self.core.push(keep);
                }
            }
        }
    }
    let mut sp = Splice {
        flat: &flat,
        inline: &inline,
        k_of: &mut k_of,
        shift: &mut shift,
        r: Vec::with_capacity(flat.size()),
        o: Vec::with_capacity(flat.size()),
        core: Vec::with_capacity(flat.size()),
    };
    let mut bits = Vec::with_capacity(flat.size());
    for s in flat.first..=start {
        if inline[s as usize] {
            continue;
        }
        bits.push(true);
        let before = sp.r.len();
        sp.rule(s, 0, true, new_id[s as usize]);
        bits.extend(std::iter::repeat_n(false, sp.r.len() - before - 1));
    }
    let Splice { mut r, o, core, .. } = sp;
    for c in r.iter_mut() {
        *c = k_of[*c as usize];
    }
    let sg = SimpleGrammar {
        first: flat.first,
        r,
        o,
        core,
        starts: BitVec::from_bools(&bits),
        text_base: flat.text_base,
        text_lens: flat.text_lens,
    };
    let rewritten = tuples
        .iter()
        .map(|t| PrMemTuple {
            x: k_of[t.x as usize],
            y: k_of[t.y as usize],
            ox: t.ox + shift[t.x as usize],
            oy: t.oy + shift[t.y as usize],
            len: t.len,
        })
        .collect();
    (sg, rewritten)
}
