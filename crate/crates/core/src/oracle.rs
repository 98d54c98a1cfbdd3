//! Reference MEM enumeration straight from the definition.

use crate::report::MemRecord;
use crate::textio::TextCollection;

/// Every MEM of length `>= tau`, by extending each left-maximal position pair.
pub fn brute_mems(tc: &TextCollection, tau: u64) -> Vec<MemRecord> {
    let tau = tau.max(1) as usize;
    let mut out = Vec::new();
    let ss = &tc.strings;
    for x in 0..ss.len() {
        for y in x..ss.len() {
            let (s, t) = (&ss[x], &ss[y]);
            for p in 0..s.len() {
                let q0 = if x == y { p + 1 } else { 0 };
                for q in q0..t.len() {
                    if p > 0 && q > 0 && s[p - 1] == t[q - 1] {
                        continue;
                    }
                    let l = s[p..].iter().zip(&t[q..]).take_while(|(a, b)| a == b).count();
                    if l >= tau {
                        out.push(MemRecord { sx: x + 1, sy: y + 1, px: p as u64 + 1, py: q as u64 + 1, len: l as u64 });
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Same result through a suffix array and LCP array of the concatenation.
///
/// The suffix array is built by prefix doubling so that it shares no code with the
/// grammar pipeline.
pub fn sa_mems(tc: &TextCollection, tau: u64) -> Vec<MemRecord> {
    let tau = tau.max(1);
    let mut text: Vec<u32> = Vec::new();
    let mut owner: Vec<(usize, u64)> = Vec::new();
    let m = tc.len() as u32;
    for (x, s) in tc.strings.iter().enumerate() {
        for (p, &c) in s.iter().enumerate() {
            text.push(c as u32 + m);
            owner.push((x, p as u64));
        }
        text.push(x as u32);
        owner.push((usize::MAX, 0));
    }
    let sa = doubling_sa(&text);
    let n = text.len();
    let mut lcp = vec![0u64; n];
    for j in 1..n {
        let (a, b) = (sa[j - 1], sa[j]);
        lcp[j] = text[a..].iter().zip(&text[b..]).take_while(|(c, d)| c == d && **c >= m).count() as u64;
    }
    let mut out = Vec::new();
    for i in 0..n {
        let a = sa[i];
        if owner[a].0 == usize::MAX {
            continue;
        }
        let mut run = u64::MAX;
        for j in i + 1..n {
            run = run.min(lcp[j]);
            if run < tau {
                break;
            }
            let b = sa[j];
            let left_max = a == 0 || b == 0 || text[a - 1] < m || text[b - 1] < m || text[a - 1] != text[b - 1];
            if left_max {
                let ((x, p), (y, q)) = (owner[a], owner[b]);
                if let Some(r) = MemRecord::canonical(x + 1, p + 1, y + 1, q + 1, run) {
                    out.push(r);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn doubling_sa(t: &[u32]) -> Vec<usize> {
    let n = t.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<u64> = t.iter().map(|&c| c as u64).collect();
    let mut tmp = vec![0u64; n];
    let mut k = 1;
    loop {
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0]] = 0;
        for j in 1..n {
            tmp[sa[j]] = tmp[sa[j - 1]] + (key(sa[j - 1]) != key(sa[j])) as u64;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] as usize == n - 1 {
            return sa;
        }
        k *= 2;
    }
}

/// Checks one record directly against the text: two distinct occurrences of one
/// substring that extend in neither direction.
pub fn is_mem(tc: &TextCollection, r: &MemRecord) -> bool {
    let (Some(s), Some(t)) = (tc.strings.get(r.sx.wrapping_sub(1)), tc.strings.get(r.sy.wrapping_sub(1))) else {
        return false;
    };
    let (p, q, l) = (r.px as usize, r.py as usize, r.len as usize);
    if (r.sx, r.px) == (r.sy, r.py) || p == 0 || q == 0 || l == 0 || p - 1 + l > s.len() || q - 1 + l > t.len() {
        return false;
    }
    let (p, q) = (p - 1, q - 1);
    s[p..p + l] == t[q..q + l]
        && (p == 0 || q == 0 || s[p - 1] != t[q - 1])
        && (p + l == s.len() || q + l == t.len() || s[p + l] != t[q + l])
}
