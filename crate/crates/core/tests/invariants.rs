use proptest::prelude::*;

use witsets::analysis::{mean_stats, min_witness, SearchMode};
use witsets::io::CodeFile;
use witsets::{has_w_witness_property, is_witness, Code, Codeword, CoordSet, Permutation};

/// Independent check: every word has some window of size exactly min(w, n)
/// on which no other word agrees with it.
fn naive_property(n: usize, words: &[u64], w: usize) -> bool {
    let w = w.min(n);
    let windows: Vec<u64> = (0..1u64 << n).filter(|m| m.count_ones() as usize == w).collect();
    words.iter().all(|&c| {
        windows
            .iter()
            .any(|&m| words.iter().all(|&d| d == c || (d ^ c) & m != 0))
    })
}

fn code_strategy(max_n: usize) -> impl Strategy<Value = (usize, Vec<u64>)> {
    (1..=max_n).prop_flat_map(|n| {
        let words = proptest::collection::btree_set(0..1u64 << n, 0..=(1usize << n).min(24));
        (Just(n), words.prop_map(|s| s.into_iter().collect::<Vec<_>>()))
    })
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn property_matches_naive((n, words) in code_strategy(6), w in 0usize..=6) {
        let code = Code::from_bits(n, words.clone()).unwrap();
        prop_assert_eq!(has_w_witness_property(&code, w).holds(), naive_property(n, &words, w));
    }

    #[test]
    fn witnesses_are_closed_under_supersets((n, words) in code_strategy(6), seed in any::<u64>(), extra in any::<u64>()) {
        prop_assume!(!words.is_empty());
        let code = Code::from_bits(n, words.clone()).unwrap();
        let full = (1u64 << n) - 1;
        let c = Codeword::new(n, words[(seed as usize) % words.len()]).unwrap();
        let w = CoordSet::new(n, seed & full).unwrap();
        let sup = CoordSet::new(n, (seed | extra) & full).unwrap();
        if is_witness(&code, &c, &w).unwrap() {
            prop_assert!(is_witness(&code, &c, &sup).unwrap());
        }
    }

    #[test]
    fn subcodes_inherit_the_property((n, words) in code_strategy(6), keep in any::<u32>(), w in 0usize..=6) {
        let code = Code::from_bits(n, words.clone()).unwrap();
        let sub: Vec<u64> = words.iter().enumerate().filter(|(i, _)| keep >> (i % 32) & 1 == 1).map(|(_, &b)| b).collect();
        let sub = Code::from_bits(n, sub).unwrap();
        if has_w_witness_property(&code, w).holds() {
            prop_assert!(has_w_witness_property(&sub, w).holds());
        }
    }

    #[test]
    fn translates_and_permutations_preserve_the_property(
        ((n, words), perm) in code_strategy(6).prop_flat_map(|(n, w)| (Just((n, w)), perm_strategy(n))),
        x in any::<u64>(),
        w in 0usize..=6,
    ) {
        let code = Code::from_bits(n, words).unwrap();
        let holds = has_w_witness_property(&code, w).holds();
        let t = code.translate(&Codeword::new(n, x & ((1u64 << n) - 1)).unwrap()).unwrap();
        let p = code.permute(&Permutation::from_images(&perm).unwrap()).unwrap();
        prop_assert_eq!(has_w_witness_property(&t, w).holds(), holds);
        prop_assert_eq!(has_w_witness_property(&p, w).holds(), holds);
        prop_assert_eq!(t.size(), code.size());
        prop_assert_eq!(p.size(), code.size());
    }

    #[test]
    fn double_count_identity((n, words) in code_strategy(8), w in 0usize..=8) {
        let code = Code::from_bits(n, words).unwrap();
        let stats = mean_stats(&code, w.min(n)).unwrap();
        prop_assert!(stats.identity_holds());
        prop_assert_eq!(stats.pairs_by_word(), stats.pairs_by_window());
    }

    #[test]
    fn min_witness_is_minimum((n, words) in code_strategy(6), pick in any::<usize>()) {
        prop_assume!(!words.is_empty());
        let code = Code::from_bits(n, words.clone()).unwrap();
        let c = Codeword::new(n, words[pick % words.len()]).unwrap();
        let exact = min_witness(&code, &c, SearchMode::Exact).unwrap();
        let greedy = min_witness(&code, &c, SearchMode::Greedy).unwrap();
        prop_assert!(is_witness(&code, &c, &exact).unwrap());
        prop_assert!(is_witness(&code, &c, &greedy).unwrap());
        prop_assert!(exact.size() <= greedy.size());
        let smaller = (0..1u64 << n)
            .filter(|m| (m.count_ones() as usize) < exact.size())
            .any(|m| is_witness(&code, &c, &CoordSet::new(n, m).unwrap()).unwrap());
        prop_assert!(!smaller);
    }

    #[test]
    fn code_files_round_trip((n, words) in code_strategy(10)) {
        let code = Code::from_bits(n, words).unwrap();
        let text = CodeFile::from_code(&code).render();
        let back = CodeFile::parse(&text).unwrap();
        prop_assert_eq!(back.render(), text);
        prop_assert_eq!(back.to_code().unwrap(), code);
    }

    #[test]
    fn code_json_round_trip((n, words) in code_strategy(10)) {
        let code = Code::from_bits(n, words).unwrap();
        let json = serde_json::to_string(&code).unwrap();
        let back: Code = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, code);
    }
}
