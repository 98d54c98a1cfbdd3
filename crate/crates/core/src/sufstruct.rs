//! Suffix arrays, LCP arrays, range-minimum queries and rank/select bitvectors.

/// A generalized integer text: several strings over `[0, sigma)` stored back to back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntText {
    pub symbols: Vec<u32>,
    /// Start offset of each string in `symbols`, followed by `symbols.len()`.
    pub bounds: Vec<usize>,
    pub sigma: u32,
}

impl IntText {
    pub fn single(symbols: Vec<u32>, sigma: u32) -> Self {
        let n = symbols.len();
        IntText { symbols, bounds: vec![0, n], sigma }
    }

    pub fn from_strings<I, S>(strings: I, sigma: u32) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut symbols = Vec::new();
        let mut bounds = vec![0];
        for s in strings {
            symbols.extend_from_slice(s.as_ref());
            bounds.push(symbols.len());
        }
        IntText { symbols, bounds, sigma }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn num_strings(&self) -> usize {
        self.bounds.len() - 1
    }

    /// Maps to a single text with a distinct separator after every string and a final 0.
    /// Separators are `1..=m` (string order) and sort below every real symbol.
    fn terminated(&self) -> (Vec<u32>, Vec<u32>, u32) {
        let m = self.num_strings() as u32;
        let mut t = Vec::with_capacity(self.len() + self.num_strings() + 1);
        let mut back = Vec::with_capacity(t.capacity());
        for s in 0..self.num_strings() {
            for p in self.bounds[s]..self.bounds[s + 1] {
                t.push(self.symbols[p] + m + 1);
                back.push(p as u32);
            }
            t.push(s as u32 + 1);
            back.push(u32::MAX);
        }
        t.push(0);
        back.push(u32::MAX);
        (t, back, self.sigma + m + 1)
    }
}

/// Suffix array of a generalized text.
///
/// Suffixes stop at their string's end; a string end sorts before every symbol, and ties
/// between equal suffixes of different strings are broken by string order.
pub fn suffix_array(t: &IntText) -> Vec<u32> {
    suffix_array_with_lcp(t).0
}

/// LCP array aligned with `sa`; `lcp[0] = 0` and matches never cross a string end.
pub fn lcp_array(t: &IntText, sa: &[u32]) -> Vec<u32> {
    let n = t.len();
    let mut rank = vec![0u32; n];
    for (j, &p) in sa.iter().enumerate() {
        rank[p as usize] = j as u32;
    }
    let mut lcp = vec![0u32; n];
    for s in 0..t.num_strings() {
        let end = t.bounds[s + 1];
        let mut h = 0usize;
        for (i, &r) in rank.iter().enumerate().take(end).skip(t.bounds[s]) {
            let r = r as usize;
            if r == 0 {
                h = 0;
                continue;
            }
            let j = sa[r - 1] as usize;
            let j_end = t.bounds[t.bounds.partition_point(|&b| b <= j)];
            while i + h < end && j + h < j_end && t.symbols[i + h] == t.symbols[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        }
    }
    lcp
}

/// Suffix array and LCP array in one pass (SA-IS followed by Kasai).
pub fn suffix_array_with_lcp(t: &IntText) -> (Vec<u32>, Vec<u32>) {
    let (full, back, sigma) = t.terminated();
    let sa_full = sais(&full, sigma as usize);
    let lcp_full = kasai(&full, &sa_full);
    let mut sa = Vec::with_capacity(t.len());
    let mut lcp = Vec::with_capacity(t.len());
    let mut run = u32::MAX;
    for (j, &p) in sa_full.iter().enumerate() {
        run = run.min(lcp_full[j]);
        let orig = back[p as usize];
        if orig != u32::MAX {
            lcp.push(if sa.is_empty() { 0 } else { run });
            sa.push(orig);
            run = u32::MAX;
        }
    }
    (sa, lcp)
}

/// Kasai et al. LCP over a text whose last symbol is a unique minimum.
pub fn kasai(text: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut rank = vec![0u32; n];
    for (j, &p) in sa.iter().enumerate() {
        rank[p as usize] = j as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

/// SA-IS (Nong, Zhang and Chan). `text` must end with a unique 0.
pub fn sais(text: &[u32], sigma: usize) -> Vec<u32> {
    let n = text.len();
    debug_assert!(n > 0 && text[n - 1] == 0);
    if n == 1 {
        return vec![0];
    }
    let mut is_s = vec![false; n];
    is_s[n - 1] = true;
    for i in (0..n - 1).rev() {
        is_s[i] = text[i] < text[i + 1] || (text[i] == text[i + 1] && is_s[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];

    let mut counts = vec![0u32; sigma];
    for &c in text {
        counts[c as usize] += 1;
    }
    let bucket_heads = |counts: &[u32]| {
        let mut b = vec![0u32; counts.len()];
        let mut sum = 0;
        for (c, &k) in counts.iter().enumerate() {
            b[c] = sum;
            sum += k;
        }
        b
    };
    let bucket_tails = |counts: &[u32]| {
        let mut b = vec![0u32; counts.len()];
        let mut sum = 0;
        for (c, &k) in counts.iter().enumerate() {
            sum += k;
            b[c] = sum;
        }
        b
    };

    const EMPTY: u32 = u32::MAX;
    let mut sa = vec![EMPTY; n];

    let induce = |sa: &mut Vec<u32>| {
        let mut heads = bucket_heads(&counts);
        for j in 0..n {
            let p = sa[j];
            if p != EMPTY && p > 0 && !is_s[p as usize - 1] {
                let c = text[p as usize - 1] as usize;
                sa[heads[c] as usize] = p - 1;
                heads[c] += 1;
            }
        }
        let mut tails = bucket_tails(&counts);
        for j in (0..n).rev() {
            let p = sa[j];
            if p != EMPTY && p > 0 && is_s[p as usize - 1] {
                let c = text[p as usize - 1] as usize;
                tails[c] -= 1;
                sa[tails[c] as usize] = p - 1;
            }
        }
    };

    let mut tails = bucket_tails(&counts);
    for i in (1..n).rev() {
        if is_lms(i) {
            let c = text[i] as usize;
            tails[c] -= 1;
            sa[tails[c] as usize] = i as u32;
        }
    }
    induce(&mut sa);

    // Name LMS substrings in sorted order.
    let lms_sorted: Vec<u32> = sa.iter().copied().filter(|&p| is_lms(p as usize)).collect();
    let mut names = vec![EMPTY; n];
    let mut name = 0u32;
    let mut prev: Option<usize> = None;
    for &p in &lms_sorted {
        let p = p as usize;
        if let Some(q) = prev {
            if !lms_equal(text, &is_s, p, q) {
                name += 1;
            }
        }
        names[p] = name;
        prev = Some(p);
    }
    let lms_positions: Vec<u32> = (1..n).filter(|&i| is_lms(i)).map(|i| i as u32).collect();
    let reduced: Vec<u32> = lms_positions.iter().map(|&p| names[p as usize]).collect();

    let reduced_sa = if (name as usize + 1) < reduced.len() {
        sais(&reduced, name as usize + 1)
    } else {
        let mut s = vec![0u32; reduced.len()];
        for (i, &c) in reduced.iter().enumerate() {
            s[c as usize] = i as u32;
        }
        s
    };

    sa.iter_mut().for_each(|x| *x = EMPTY);
    let mut tails = bucket_tails(&counts);
    for &r in reduced_sa.iter().rev() {
        let p = lms_positions[r as usize];
        let c = text[p as usize] as usize;
        tails[c] -= 1;
        sa[tails[c] as usize] = p;
    }
    induce(&mut sa);
    sa
}

fn lms_equal(text: &[u32], is_s: &[bool], a: usize, b: usize) -> bool {
    let n = text.len();
    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];
    if a == n - 1 || b == n - 1 {
        return a == b;
    }
    let mut k = 0;
    loop {
        if text[a + k] != text[b + k] || is_s[a + k] != is_s[b + k] {
            return false;
        }
        if k > 0 && (is_lms(a + k) || is_lms(b + k)) {
            return is_lms(a + k) && is_lms(b + k);
        }
        k += 1;
    }
}

/// Sparse-table range-minimum structure over a fixed array.
#[derive(Debug, Clone)]
pub struct RmqArray {
    values: Vec<u64>,
    table: Vec<Vec<u32>>,
}

impl RmqArray {
    pub fn new(values: Vec<u64>) -> Self {
        let n = values.len();
        let mut table: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
        let mut w = 1;
        while 2 * w <= n {
            let prev = table.last().unwrap();
            let row: Vec<u32> = (0..=n - 2 * w)
                .map(|i| {
                    let (x, y) = (prev[i], prev[i + w]);
                    if values[y as usize] < values[x as usize] {
                        y
                    } else {
                        x
                    }
                })
                .collect();
            table.push(row);
            w *= 2;
        }
        RmqArray { values, table }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Minimum over the inclusive 0-based range `[l, r]`, with its leftmost argmin.
    pub fn rmq(&self, l: usize, r: usize) -> (u64, usize) {
        assert!(l <= r && r < self.values.len(), "rmq range [{l}, {r}] out of bounds");
        let k = (usize::BITS - 1 - (r - l + 1).leading_zeros()) as usize;
        let x = self.table[k][l] as usize;
        let y = self.table[k][r + 1 - (1 << k)] as usize;
        if self.values[y] < self.values[x] {
            (self.values[y], y)
        } else {
            (self.values[x], x)
        }
    }

    pub fn min(&self, l: usize, r: usize) -> u64 {
        self.rmq(l, r).0
    }
}

/// Plain bitvector with constant-time rank and logarithmic select.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
    ranks: Vec<u32>,
}

impl BitVec {
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_words(words, bits.len())
    }

    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            if let Some(w) = words.last_mut() {
                *w &= (1u64 << (len % 64)) - 1;
            }
        }
        let mut ranks = Vec::with_capacity(words.len() + 1);
        let mut acc = 0u32;
        for w in &words {
            ranks.push(acc);
            acc += w.count_ones();
        }
        ranks.push(acc);
        BitVec { words, len, ranks }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        *self.ranks.last().unwrap_or(&0) as usize
    }

    /// Number of ones in positions `[0, i)`.
    pub fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len);
        let w = i / 64;
        let mut r = self.ranks[w] as usize;
        if !i.is_multiple_of(64) {
            r += (self.words[w] & ((1u64 << (i % 64)) - 1)).count_ones() as usize;
        }
        r
    }

    /// Position of the `k`-th one (`k` counted from 1), or `None` if there are fewer ones.
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.count_ones() {
            return None;
        }
        let w = self.ranks.partition_point(|&r| (r as usize) < k) - 1;
        let mut need = k - self.ranks[w] as usize;
        let mut word = self.words[w];
        loop {
            let b = word.trailing_zeros() as usize;
            need -= 1;
            if need == 0 {
                return Some(w * 64 + b);
            }
            word &= word - 1;
        }
    }
}
