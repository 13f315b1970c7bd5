use std::collections::HashMap;
use std::sync::LazyLock;

use proptest::prelude::*;

use subcorpus::capalign::{align_captions, CaptionMatch};
use subcorpus::docalign::{temporal_distance, title_similarity, DocumentPair};
use subcorpus::filter::{assign_splits, build_corpus, threshold_cut, FilterConfig, Split};
use subcorpus::ingest::{decode_bytes, parse_srt, write_srt, Encoding};
use subcorpus::normalize::{normalize_caption, RuleSet};
use subcorpus::oracle::{brute_force_caption_matches, brute_force_ratcliff_obershelp};
use subcorpus::spellcheck::{correct_token, LanguageModel, SpellChecker};
use subcorpus::synthbench::{BilingualPhrase, ToyWorld};
use subcorpus::{AlignmentResourcesF64, Caption, CaptionMatchF64, Language, SubtitleDocument};

const CASES: u32 = 1000;

fn config() -> ProptestConfig {
    ProptestConfig { cases: CASES, ..ProptestConfig::default() }
}

struct Toy {
    world: ToyWorld,
    align: AlignmentResourcesF64,
    phrases: Vec<BilingualPhrase>,
}

static TOY: LazyLock<Toy> = LazyLock::new(|| {
    let world = ToyWorld::new();
    let align = world.alignment_resources();
    let phrases = world.phrase_table(200, 99).unwrap();
    Toy { world, align, phrases }
});

fn caption_text() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![
            "[a-zA-Z]{1,6}",
            "[ぁ-んァ-ヶ]{1,4}",
            "[猫犬魚食走見]{1,3}",
            Just("(laughs)".to_string()),
            Just("[music]".to_string()),
            Just("<i>".to_string()),
            Just("</i>".to_string()),
            Just("{\\an8}".to_string()),
            Just("♪".to_string()),
            Just("...".to_string()),
            Just("!?".to_string()),
            Just("、".to_string()),
            Just("。".to_string()),
            Just("（笑）".to_string()),
            Just("subs by xyz".to_string()),
            " {1,3}",
            "[0-9]{1,3}",
            "[а-я]{1,4}",
        ],
        0..12,
    )
    .prop_map(|parts| parts.concat())
}

fn language() -> impl Strategy<Value = Language> {
    prop_oneof![Just(Language::En), Just(Language::Ja)]
}

/// Captions with increasing starts and plain single-line text.
fn cue_list() -> impl Strategy<Value = Vec<Caption>> {
    prop::collection::vec((0u64..5_000, 0u64..8_000, "[a-z]{1,8}( [a-z]{1,8}){0,4}|[ぁ-ん猫犬]{1,10}"), 5..30).prop_map(
        |cues| {
            let mut t = 0;
            cues.into_iter()
                .enumerate()
                .map(|(i, (gap, len, text))| {
                    t += gap;
                    let c = Caption { index: i + 1, start_ms: t, end_ms: t + len, text };
                    t += len;
                    c
                })
                .collect()
        },
    )
}

fn matches_strategy() -> impl Strategy<Value = Vec<CaptionMatchF64>> {
    prop::collection::vec((0usize..12, 0usize..12, 0.0f64..1.0, any::<bool>()), 2..80).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (e, j, sim, latin_ja))| CaptionMatch {
                en_doc_id: "en/a.srt".into(),
                ja_doc_id: "ja/a.srt".into(),
                ja_index: i + 1,
                en_index: e + 1,
                similarity: sim,
                en_text: format!("sentence number {e}"),
                ja_text: if latin_ja { format!("latin {j}") } else { format!("文{j}番") },
            })
            .collect()
    })
}

/// A random document pair built from toy phrases: captions on a shared
/// clock, some parallel, some unrelated, with jittered Japanese starts.
fn doc_pair() -> impl Strategy<Value = (SubtitleDocument, SubtitleDocument)> {
    prop::collection::vec((0usize..200, 0usize..200, 0u8..4, 0u64..3_000, -1_500i64..1_500), 1..25).prop_map(|slots| {
        let toy = &*TOY;
        let mut en = Vec::new();
        let mut ja = Vec::new();
        let mut t = 1_000u64;
        for (a, b, kind, gap, jitter) in slots {
            t += gap;
            let js = (t as i64 + jitter).max(0) as u64;
            match kind {
                0 => {
                    en.push(Caption { index: 0, start_ms: t, end_ms: t + 2_000, text: toy.phrases[a].en.clone() });
                    ja.push(Caption { index: 0, start_ms: js, end_ms: js + 2_000, text: toy.phrases[a].ja.clone() });
                }
                1 => {
                    en.push(Caption { index: 0, start_ms: t, end_ms: t + 2_000, text: toy.phrases[a].en.clone() });
                    ja.push(Caption { index: 0, start_ms: js, end_ms: js + 2_000, text: toy.phrases[b].ja.clone() });
                }
                2 => en.push(Caption { index: 0, start_ms: t, end_ms: t + 2_000, text: toy.phrases[b].en.clone() }),
                _ => ja.push(Caption { index: 0, start_ms: js, end_ms: js + 2_000, text: toy.phrases[b].ja.clone() }),
            }
        }
        (
            SubtitleDocument::new("en/p.srt", "p", Language::En, en),
            SubtitleDocument::new("ja/p.srt", "p", Language::Ja, ja),
        )
    })
}

fn pair_for(shift: i64) -> DocumentPair {
    DocumentPair {
        en_doc_id: "en/p.srt".into(),
        ja_doc_id: "ja/p.srt".into(),
        title_similarity: 1.0,
        temporal_distance: 0.0,
        best_shift_s: shift,
    }
}

fn starts_doc(seconds: &[i64], language: Language) -> SubtitleDocument {
    let caps = seconds
        .iter()
        .map(|&s| Caption { index: 0, start_ms: s as u64 * 1000, end_ms: s as u64 * 1000 + 900, text: "x".into() })
        .collect();
    SubtitleDocument::new(format!("{language}/t.srt"), "t", language, caps)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn normalization_is_idempotent(text in caption_text(), lang in language()) {
        let rules = RuleSet::default();
        let (once, _) = normalize_caption(&text, lang, &rules);
        let (twice, _) = normalize_caption(&once, lang, &rules);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn subrip_round_trip(cues in cue_list()) {
        let text = write_srt(&cues);
        let parsed = parse_srt(&text).unwrap();
        prop_assert_eq!(parsed.skipped, 0);
        prop_assert_eq!(&parsed.captions, &cues);
        for enc in [Encoding::Utf8, Encoding::ShiftJis] {
            let (decoded, _) = decode_bytes(&enc.encode(&text)).unwrap();
            prop_assert_eq!(&parse_srt(&decoded).unwrap().captions, &cues);
        }
    }

    #[test]
    fn filter_only_contracts(matches in matches_strategy(), seed in any::<u64>()) {
        let cfg = FilterConfig { val_size: 0, test_size: 0, seed, ..FilterConfig::default() };
        let Ok((corpus, counts)) = build_corpus(&matches, &cfg) else { return Ok(()) };
        prop_assert!(counts.after_language <= counts.after_dedup);
        prop_assert!(counts.after_dedup <= counts.after_threshold);
        prop_assert!(counts.after_threshold <= counts.input);
        prop_assert_eq!(counts.input, matches.len());
        prop_assert_eq!(corpus.len(), counts.after_language);
        for p in &corpus.pairs {
            prop_assert!(p.similarity >= corpus.threshold);
            prop_assert!(matches.iter().any(|m| m.en_text == p.en_text && m.ja_text == p.ja_text && m.similarity == p.similarity));
        }
        let cut = threshold_cut(&matches, corpus.threshold);
        prop_assert_eq!(threshold_cut(&cut, corpus.threshold), cut);
    }

    #[test]
    fn splits_are_deterministic(n in 0usize..3_000, val in 0usize..500, test in 0usize..500, seed in any::<u64>()) {
        let a = assign_splits(n, val, test, seed);
        prop_assert_eq!(&a, &assign_splits(n, val, test, seed));
        match a {
            Ok(s) => {
                prop_assert_eq!(s.len(), n);
                prop_assert_eq!(s.iter().filter(|&&x| x == Split::Val).count(), val);
                prop_assert_eq!(s.iter().filter(|&&x| x == Split::Test).count(), test);
            }
            Err(_) => prop_assert!(val + test > n),
        }
    }

    #[test]
    fn embedding_scale_leaves_argmax(docs in doc_pair(), shift in -3i64..3, scale in 0.05f64..50.0) {
        let (en, ja) = docs;
        let pair = pair_for(shift);
        let base = align_captions(&pair, &en, &ja, 12.5, &TOY.align);
        let scaled_res = TOY.world.alignment_resources().map_embeddings(|t| t.scaled(scale));
        let scaled = align_captions(&pair, &en, &ja, 12.5, &scaled_res);
        prop_assert_eq!(base.len(), scaled.len());
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert_eq!((a.ja_index, a.en_index), (b.ja_index, b.en_index));
            prop_assert!((a.similarity - b.similarity).abs() < 1e-9);
        }
    }

    #[test]
    fn caption_matching_equals_brute_force(docs in doc_pair(), shift in -2i64..2, window in 0.0f64..15.0) {
        let (en, ja) = docs;
        let pair = pair_for(shift);
        let got: Vec<(usize, usize, f64)> = align_captions(&pair, &en, &ja, window, &TOY.align)
            .into_iter()
            .map(|m| (m.ja_index, m.en_index, m.similarity))
            .collect();
        prop_assert_eq!(got, brute_force_caption_matches(&pair, &en, &ja, window, &TOY.align));
    }

    #[test]
    fn planted_shift_is_recovered(
        seconds in prop::collection::btree_set(200i64..5_000, 5..60),
        shift in -120i64..=120,
    ) {
        let seconds: Vec<i64> = seconds.into_iter().collect();
        let en = starts_doc(&seconds, Language::En);
        let moved: Vec<i64> = seconds.iter().map(|s| s + shift).collect();
        let ja = starts_doc(&moved, Language::Ja);
        prop_assert_eq!(temporal_distance(&en, &ja, 120), (0.0, -shift));
    }

    #[test]
    fn common_shift_leaves_distance(
        en in prop::collection::vec(300i64..3_000, 5..40),
        ja in prop::collection::vec(300i64..3_000, 5..40),
        offset in 0i64..200,
    ) {
        let base = temporal_distance(&starts_doc(&en, Language::En), &starts_doc(&ja, Language::Ja), 60);
        let en2: Vec<i64> = en.iter().map(|s| s + offset).collect();
        let ja2: Vec<i64> = ja.iter().map(|s| s + offset).collect();
        let moved = temporal_distance(&starts_doc(&en2, Language::En), &starts_doc(&ja2, Language::Ja), 60);
        prop_assert_eq!(base, moved);
    }

    #[test]
    fn title_similarity_symmetric_and_bounded(a in "[a-h]{0,20}", b in "[a-h]{0,20}") {
        let s = title_similarity(&a, &b);
        prop_assert_eq!(s, title_similarity(&b, &a));
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(title_similarity(&a, &a), 1.0);
        prop_assert_eq!(s, brute_force_ratcliff_obershelp(&a, &b));
    }

    #[test]
    fn language_model_distributions_sum_to_one(
        rows in prop::collection::hash_map("[a-e]{1,3}", prop::collection::hash_map("[a-e]{1,3}", 1u64..20, 0..5), 1..10),
        extra in prop::collection::hash_map("[f-h]{1,3}", 1u64..20, 0..4),
    ) {
        // Unigram counts equal bigram row totals, so each conditional
        // distribution over the vocabulary is complete.
        let mut uni: HashMap<String, u64> = extra.clone();
        let mut bi = Vec::new();
        for (p, row) in &rows {
            *uni.entry(p.clone()).or_default() += row.values().sum::<u64>().max(1);
            for (w, c) in row {
                uni.entry(w.clone()).or_default();
                bi.push(((p.clone(), w.clone()), *c));
            }
        }
        for (p, row) in &rows {
            if row.is_empty() {
                bi.push(((p.clone(), p.clone()), 1));
            }
        }
        let uni: Vec<(String, u64)> = uni.into_iter().map(|(w, c)| (w, c.max(1))).collect();
        let lm = LanguageModel::from_counts(uni, bi.clone()).unwrap();
        let vocab: Vec<String> = lm.words().map(str::to_string).collect();
        let total: f64 = vocab.iter().map(|w| lm.unigram_probability(w)).sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "unigram mass {}", total);
        for p in &vocab {
            let row_total: u64 = vocab.iter().map(|w| lm.bigram_count(p, w)).sum();
            let mass: f64 = vocab.iter().map(|w| lm.bigram_probability(p, w)).sum();
            prop_assert!(mass <= 1.0 + 1e-9);
            if row_total == lm.unigram_count(p) {
                prop_assert!((mass - 1.0).abs() < 1e-9, "bigram mass after {} = {}", p, mass);
            }
        }
    }

    #[test]
    fn correction_never_touches_known_words(idx in 0usize..10_000, typo in "[a-z]{1,9}", prev in "[a-z]{1,6}") {
        let sc = &*SPELL;
        let words: Vec<&str> = sc.dictionary.words().collect();
        let known = words[idx % words.len()];
        prop_assert_eq!(sc.correct_token(known, &prev), known);
        let out = sc.correct_token(&typo, &prev);
        prop_assert!(out == typo || sc.dictionary.contains(&out));
        prop_assert_eq!(
            correct_token(&typo, &prev, &sc.error_model, &sc.language_model, &sc.dictionary),
            out
        );
    }
}

static SPELL: LazyLock<SpellChecker> = LazyLock::new(|| TOY.world.spell_checker());
