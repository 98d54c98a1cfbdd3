//! Lifting prMEM tuples to text coordinates through the occurrence buckets.

use std::collections::HashSet;
use std::fmt;

use crate::grammar::SimpleGrammar;
use crate::prmem::PrMemTuple;

/// A MEM between `T_sx[px..px+len)` and `T_sy[py..py+len)`; ids and positions are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemRecord {
    pub sx: usize,
    pub sy: usize,
    pub px: u64,
    pub py: u64,
    pub len: u64,
}

impl MemRecord {
    /// Orders the two sides so that `(sx, px) < (sy, py)`; `None` for an identity pair.
    pub fn canonical(sx: usize, px: u64, sy: usize, py: u64, len: u64) -> Option<MemRecord> {
        match (sx, px).cmp(&(sy, py)) {
            std::cmp::Ordering::Less => Some(MemRecord { sx, sy, px, py, len }),
            std::cmp::Ordering::Greater => Some(MemRecord { sx: sy, sy: sx, px: py, py: px, len }),
            std::cmp::Ordering::Equal => None,
        }
    }
}

impl fmt::Display for MemRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}\t{}", self.sx, self.sy, self.px, self.py, self.len)
    }
}

/// Core positions of the flattened rule array, bucketed by symbol.
#[derive(Debug, Clone)]
pub struct OccIndex {
    pub n: Vec<u32>,
    /// `c[s]..c[s + 1]` is the bucket of symbol `s`.
    pub c: Vec<u32>,
}

impl OccIndex {
    pub fn build(g: &SimpleGrammar) -> OccIndex {
        let nsym = g.num_symbols();
        let mut c = vec![0u32; nsym + 1];
        for (p, &s) in g.r.iter().enumerate() {
            if g.core[p] {
                c[s as usize + 1] += 1;
            }
        }
        for s in 0..nsym {
            c[s + 1] += c[s];
        }
        let mut fill = c.clone();
        let mut n = vec![0u32; c[nsym] as usize];
        for (p, &s) in g.r.iter().enumerate() {
            if g.core[p] {
                n[fill[s as usize] as usize] = p as u32;
                fill[s as usize] += 1;
            }
        }
        OccIndex { n, c }
    }

    pub fn bucket(&self, sym: u32) -> &[u32] {
        &self.n[self.c[sym as usize] as usize..self.c[sym as usize + 1] as usize]
    }
}

/// Expands every tuple to all its occurrences and returns the sorted, deduplicated records.
pub fn report(tuples: &[PrMemTuple], g: &SimpleGrammar) -> Vec<MemRecord> {
    let idx = OccIndex::build(g);
    let s = g.start_symbol();
    let lift = |sym: u32, off: i64| -> Vec<(u32, i64)> {
        if sym == s {
            vec![(sym, off)]
        } else {
            idx.bucket(sym).iter().map(|&u| (g.parent(u as usize), g.o[u as usize] + off)).collect()
        }
    };
    let mut out = HashSet::new();
    let mut stack: Vec<PrMemTuple> = tuples.to_vec();
    while let Some(t) = stack.pop() {
        if t.x == s && t.y == s {
            let (x, px) = g.locate(t.ox).expect("offset inside the text");
            let (y, py) = g.locate(t.oy).expect("offset inside the text");
            if let Some(rec) = MemRecord::canonical(x + 1, px + 1, y + 1, py + 1, t.len) {
                out.insert(rec);
            }
            continue;
        }
        let ys = lift(t.y, t.oy);
        for (x, ox) in lift(t.x, t.ox) {
            for &(y, oy) in &ys {
                stack.push(PrMemTuple { x, y, ox, oy, len: t.len });
            }
        }
    }
    let mut v: Vec<MemRecord> = out.into_iter().collect();
    v.sort_unstable();
    v
}

/// Writes records as tab-separated lines.
pub fn write_records(w: &mut impl std::io::Write, recs: &[MemRecord]) -> std::io::Result<()> {
    for r in recs {
        writeln!(w, "{r}")?;
    }
    Ok(())
}
