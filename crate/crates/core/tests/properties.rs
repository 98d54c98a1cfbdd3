mod common;

use common::*;
use ffmem::grammar::{simplify, SimpleGrammar};
use ffmem::lcparse::{classify, local_minima, ExplicitOrder, PosType, SymbolOrder};
use ffmem::oracle::{brute_mems, is_mem, sa_mems};
use ffmem::prmem::enumerate_mems;
use ffmem::sufstruct::{lcp_array, suffix_array, BitVec, IntText, RmqArray};
use ffmem::textio::{unwrap, wrap};
use ffmem::{find_mems, mems_from_grammar, Grammar, TextCollection};
use proptest::prelude::*;

fn dna_strings(max_strings: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(prop::sample::select(DNA.to_vec()), 1..=max_len), 1..=max_strings)
}

fn binary_strings() -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(prop::sample::select(b"ab".to_vec()), 1..=30), 1..=4)
}

fn naive_sa(t: &IntText) -> Vec<u32> {
    let owner = |p: usize| t.bounds.partition_point(|&b| b <= p) - 1;
    let mut idx: Vec<u32> = (0..t.len() as u32).collect();
    idx.sort_by_key(|&p| {
        let s = owner(p as usize);
        (t.symbols[p as usize..t.bounds[s + 1]].to_vec(), s)
    });
    idx
}

fn wrapped(s: &[u32]) -> Vec<u32> {
    let mut w = vec![0];
    w.extend_from_slice(s);
    w.extend([0, 1]);
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn locate_round_trip(strings in dna_strings(6, 20)) {
        let tc = TextCollection::from_strings(&strings).unwrap();
        let mut g = 0u64;
        for (x, s) in strings.iter().enumerate() {
            for p in 0..s.len() as u64 {
                prop_assert_eq!(tc.locate(g).unwrap(), (x, p));
                g += 1;
            }
        }
        prop_assert!(tc.locate(g).is_err());
    }

    #[test]
    fn wrap_is_reversible(s in prop::collection::vec(2u8..=255, 1..50)) {
        let w = wrap(&s);
        prop_assert_eq!(w.len(), s.len() + 3);
        prop_assert_eq!(unwrap(&w), &s[..]);
    }

    #[test]
    fn classify_matches_suffix_comparison(s in prop::collection::vec(2u32..6, 1..30)) {
        let ord = ExplicitOrder::new(&[2, 3, 4, 5]);
        let w = wrapped(&s);
        let vals: Vec<u64> = w.iter().map(|&c| ord.value(c)).collect();
        let types = classify(&w, &ord);
        let small = |j: usize| vals[j..] < vals[j + 1..];
        for (j, &ty) in types.iter().enumerate().take(w.len() - 1).skip(1) {
            let want = if !small(j) {
                PosType::L
            } else if j >= 2 && !small(j - 1) {
                PosType::Lms
            } else {
                PosType::S
            };
            prop_assert_eq!(ty, Some(want));
        }
        let minima = local_minima(&w, &ord);
        for j in 1..w.len() - 1 {
            let is_min = vals[j - 1] > vals[j] && vals[j] <= vals[j + 1];
            prop_assert_eq!(minima.contains(&j), is_min);
            if types[j] == Some(PosType::Lms) {
                prop_assert!(is_min);
            }
        }
    }

    #[test]
    fn grammar_is_fix_free_balanced_and_tiles(strings in dna_strings(5, 60), seed in 0u64..1000) {
        let tc = TextCollection::from_strings(&strings).unwrap();
        let g = Grammar::build(&tc, seed);
        prop_assert_eq!(fix_free_violations(&g), 0);
        prop_assert!(balanced_and_tiled(&g, &tc));
        prop_assert_eq!(Grammar::deserialize(&g.serialize()).unwrap(), g.clone());
        let (sg, _) = simplify(&g, &[]);
        prop_assert_eq!(sg.expand(sg.start_symbol()), tc.strings.concat());
    }

    #[test]
    fn satellites_match_expansions(strings in dna_strings(4, 40), seed in 0u64..1000) {
        let tc = TextCollection::from_strings(&strings).unwrap();
        let g = Grammar::build(&tc, seed);
        prop_assert_eq!(satellite_mismatches(&g).1, 0);
    }

    #[test]
    fn sa_and_lcp_match_naive(strings in prop::collection::vec(prop::collection::vec(0u32..4, 0..25), 1..4)) {
        let t = IntText::from_strings(&strings, 4);
        let sa = suffix_array(&t);
        prop_assert_eq!(&sa, &naive_sa(&t));
        let lcp = lcp_array(&t, &sa);
        for j in 1..sa.len() {
            let end = |p: usize| t.bounds[t.bounds.partition_point(|&b| b <= p)];
            let (a, b) = (sa[j - 1] as usize, sa[j] as usize);
            let l = t.symbols[a..end(a)].iter().zip(&t.symbols[b..end(b)]).take_while(|(x, y)| x == y).count();
            prop_assert_eq!(lcp[j] as usize, l);
        }
    }

    #[test]
    fn rmq_matches_naive(v in prop::collection::vec(0u64..50, 1..60), qs in prop::collection::vec((0usize..60, 0usize..60), 1..20)) {
        let r = RmqArray::new(v.clone());
        for (a, b) in qs {
            let (l, h) = (a.min(b) % v.len(), a.max(b) % v.len());
            let (l, h) = (l.min(h), l.max(h));
            let m = *v[l..=h].iter().min().unwrap();
            let arg = l + v[l..=h].iter().position(|&x| x == m).unwrap();
            prop_assert_eq!(r.rmq(l, h), (m, arg));
        }
    }

    #[test]
    fn rank_select_match_naive(bits in prop::collection::vec(any::<bool>(), 0..300)) {
        let bv = BitVec::from_bools(&bits);
        let mut ones = 0;
        for (i, &b) in bits.iter().enumerate() {
            prop_assert_eq!(bv.rank1(i), ones);
            prop_assert_eq!(bv.get(i), b);
            if b {
                ones += 1;
                prop_assert_eq!(bv.select1(ones), Some(i));
            }
        }
        prop_assert_eq!(bv.rank1(bits.len()), ones);
        prop_assert_eq!(bv.select1(ones + 1), None);
    }

    #[test]
    fn enumeration_visits_exactly_the_qualifying_pairs(
        glcp in prop::collection::vec(0u64..6, 1..25),
        keys in prop::collection::vec(prop::option::of(0u64..3), 25),
        tau in 1u64..8,
    ) {
        let m = glcp.len();
        let mut glcp = glcp;
        glcp[0] = 0;
        let keys = &keys[..m];
        let mut seen = Vec::new();
        enumerate_mems(&glcp, keys, tau, |j, _| keys[j].map(|k| (k, k)), |a, b, l| seen.push((a, b, l)));
        seen.sort();
        let mut want = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let d = *glcp[a + 1..=b].iter().min().unwrap();
                if d >= 1 && (d >= tau || (keys[a].is_some() && keys[a] == keys[b])) {
                    want.push((a, b, d));
                }
            }
        }
        prop_assert_eq!(seen, want);
    }

    #[test]
    fn pipeline_matches_brute_force(strings in dna_strings(6, 50), tau in 1u64..7, seed in 0u64..1000) {
        let tc = TextCollection::from_strings(&strings).unwrap();
        let want = brute_mems(&tc, tau);
        prop_assert_eq!(&sa_mems(&tc, tau), &want);
        prop_assert_eq!(&find_mems(&tc, tau, seed), &want);
        let g = Grammar::build(&tc, seed);
        prop_assert_eq!(&mems_from_grammar(&g, tau, false), &want);
        prop_assert!(want.iter().all(|r| is_mem(&tc, r)));
    }

    #[test]
    fn pipeline_matches_brute_force_on_binary(strings in binary_strings(), tau in 1u64..9, seed in 0u64..1000) {
        let tc = TextCollection::from_strings(&strings).unwrap();
        prop_assert_eq!(find_mems(&tc, tau, seed), brute_mems(&tc, tau));
    }

    #[test]
    fn simplified_grammar_has_no_single_use_rules(strings in dna_strings(4, 60), seed in 0u64..1000) {
        let tc = TextCollection::from_strings(&strings).unwrap();
        let g = Grammar::build(&tc, seed);
        let (sg, _) = simplify(&g, &[]);
        prop_assert!(sg.size() <= SimpleGrammar::from_grammar(&g).size());
        let mut count = vec![0; sg.num_symbols()];
        sg.r.iter().for_each(|&c| count[c as usize] += 1);
        prop_assert!((sg.first..sg.start_symbol()).all(|s| count[s as usize] >= 2));
    }
}
