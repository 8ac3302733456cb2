mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use websplit::eval::{bleu4_multi_ref, tokenize, BleuStats};

fn random_text<R: Rng>(rng: &mut R, vocab: usize) -> String {
    let len = rng.gen_range(1..=30);
    (0..len)
        .map(|_| format!("w{}", rng.gen_range(0..vocab)))
        .collect::<Vec<_>>()
        .join(" ")
}

#[test]
fn agrees_with_oracle_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nonzero = 0;
    for case in 0..1000 {
        let vocab = [3, 5, 8][case % 3];
        let hyp = random_text(&mut rng, vocab);
        let n_refs = rng.gen_range(1..=3);
        let refs: Vec<String> = (0..n_refs).map(|_| random_text(&mut rng, vocab)).collect();
        let refs: Vec<&str> = refs.iter().map(String::as_str).collect();
        let ours = bleu4_multi_ref(&hyp, &refs);
        let oracle = common::bleu_oracle(&hyp, &refs);
        assert!((ours - oracle).abs() < 1e-9, "{hyp:?} vs {refs:?}: {ours} != {oracle}");
        nonzero += usize::from(oracle > 0.0);
    }
    assert!(nonzero > 200, "too few non-zero cases ({nonzero}) to exercise the formula");
}

#[test]
fn corpus_level_sums_statistics() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut stats = BleuStats::default();
    let mut matches = [0usize; 4];
    let mut totals = [0usize; 4];
    let (mut hyp_len, mut ref_len) = (0usize, 0usize);
    for _ in 0..50 {
        let hyp = random_text(&mut rng, 4);
        let refs = [random_text(&mut rng, 4), random_text(&mut rng, 4)];
        let h: Vec<&str> = hyp.split_whitespace().collect();
        let rs: Vec<Vec<&str>> = refs.iter().map(|r| r.split_whitespace().collect()).collect();
        for (n, (m, t)) in common::clipped_counts(&h, &rs).into_iter().enumerate() {
            matches[n] += m;
            totals[n] += t;
        }
        hyp_len += h.len();
        let closest = rs
            .iter()
            .map(Vec::len)
            .min_by_key(|&l| (l.abs_diff(h.len()), l))
            .unwrap();
        ref_len += closest;
        stats += BleuStats::from_tokens(&tokenize(&hyp), &[tokenize(&refs[0]), tokenize(&refs[1])]);
    }
    assert_eq!(stats.matches.map(|x| x as usize), matches);
    assert_eq!(stats.totals.map(|x| x as usize), totals);
    assert_eq!((stats.hyp_len as usize, stats.ref_len as usize), (hyp_len, ref_len));

    let log_mean: f64 = (0..4).map(|n| (matches[n] as f64 / totals[n] as f64).ln()).sum::<f64>() / 4.0;
    let bp = if hyp_len < ref_len { (1.0 - ref_len as f64 / hyp_len as f64).exp() } else { 1.0 };
    assert!((stats.score() - 100.0 * bp * log_mean.exp()).abs() < 1e-9);
}

#[test]
fn hand_example() {
    let expected = 100.0 * (0.8f64 * 0.75 * (2.0 / 3.0) * 0.5).powf(0.25);
    let score = bleu4_multi_ref("a b c d e", &["a b c d f"]);
    assert!((score - expected).abs() < 1e-12);
    assert!((score - 66.87).abs() < 0.01);
}

#[test]
fn no_shared_four_gram_scores_zero() {
    assert_eq!(bleu4_multi_ref("a b c d e", &["e d c b a"]), 0.0);
    assert_eq!(bleu4_multi_ref("", &["a"]), 0.0);
}

#[test]
fn tokenizer_examples() {
    assert_eq!(
        tokenize("John Madin was born in Birmingham."),
        ["John", "Madin", "was", "born", "in", "Birmingham", "."]
    );
    assert!(tokenize("").is_empty());
    assert_eq!(tokenize("a  b"), ["a", "b"]);
}

/// With closest-length brevity, an extra reference can pull the effective
/// reference length above the hypothesis length and lower the score. The
/// clipped counts themselves never drop.
#[test]
fn extra_reference_can_lower_brevity() {
    let hyp = "a b c d a b c d";
    let before = bleu4_multi_ref(hyp, &["a b c d a b"]);
    let after = bleu4_multi_ref(hyp, &["a b c d a b", "q q q q q q q q q"]);
    assert!(before > 0.0);
    assert!(after < before);
    assert!((after - common::bleu_oracle(hyp, &["a b c d a b", "q q q q q q q q q"])).abs() < 1e-9);
}

fn words() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e"]), 1..20).prop_map(|v| v.join(" "))
}

proptest! {
    #[test]
    fn identity_scores_100(t in words()) {
        prop_assert_eq!(bleu4_multi_ref(&t, &[t.as_str()]), 100.0);
    }

    #[test]
    fn reference_order_is_irrelevant(h in words(), refs in prop::collection::vec(words(), 1..4)) {
        let mut reversed = refs.clone();
        reversed.reverse();
        prop_assert_eq!(bleu4_multi_ref(&h, &refs), bleu4_multi_ref(&h, &reversed));
    }

    #[test]
    fn bounded(h in words(), refs in prop::collection::vec(words(), 1..4)) {
        let s = bleu4_multi_ref(&h, &refs);
        prop_assert!((0.0..=100.0).contains(&s));
    }

    #[test]
    fn clipped_matches_grow_with_references(h in words(), refs in prop::collection::vec(words(), 1..4), extra in words()) {
        let tok = |s: &str| tokenize(s);
        let base: Vec<Vec<String>> = refs.iter().map(|r| tok(r)).collect();
        let mut more = base.clone();
        more.push(tok(&extra));
        let a = BleuStats::from_tokens(&tok(&h), &base);
        let b = BleuStats::from_tokens(&tok(&h), &more);
        for n in 0..4 {
            prop_assert!(b.matches[n] >= a.matches[n]);
        }
    }
}
