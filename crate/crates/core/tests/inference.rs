mod common;

use common::{oracle_max, oracle_sum, random_lines, relative_error};
use phraselm::{
    enumerate_segmentations, segmentation_prior, tokenize, Corpus, Error, Mode, ModelConfig, PriorMode,
    ScoreOptions, TrainedModel,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const PRIORS: [PriorMode; 3] = [PriorMode::Exact, PriorMode::HalfPerWord, PriorMode::None];

fn train(lines: &[String], order: usize, max_phrase_len: Option<usize>) -> TrainedModel {
    let corpus = Corpus::from_lines(lines.iter().map(String::as_str), None);
    let config = ModelConfig {
        order,
        word_order: order,
        max_phrase_len,
        ..ModelConfig::default()
    };
    TrainedModel::train(&corpus, config, 1).unwrap()
}

#[test]
fn dynamic_programs_match_enumeration() {
    let mut rng = StdRng::seed_from_u64(21);
    let mut checked = 0;
    for round in 0..200 {
        let vocab = rng.random_range(2..=4);
        let count = rng.random_range(1..=6);
        let lines = random_lines(&mut rng, vocab, count, 8);
        let order = 1 + round % 3;
        let max_len = [None, Some(2), Some(3)][round % 3 / 2 + (round / 3) % 2];
        let model = train(&lines, order, max_len);
        let tests = random_lines(&mut rng, vocab, 5, 8);
        for smoothing in [false, true] {
            let prior = PRIORS[round % 3];
            let opts = ScoreOptions {
                smoothing,
                prior,
                lambda: rng.random_range(0.0..=1.0),
                ..model.default_options()
            };
            let scorer = model.scorer(opts).unwrap();
            for line in lines.iter().chain(&tests) {
                let s = tokenize(line).unwrap();
                match (oracle_sum(&scorer, line), scorer.sum_logprob(&s)) {
                    (Some(want), Ok(got)) => assert!(relative_error(want, got) <= 1e-9, "{line}: {want} vs {got}"),
                    (None, Err(Error::ZeroProbability { .. })) => {}
                    (want, got) => panic!("{line}: {want:?} vs {got:?}"),
                }
                match (oracle_max(&scorer, line), scorer.max_logprob(&s)) {
                    (Some((want, bounds)), Ok((got, seg))) => {
                        assert_eq!(seg.boundaries(), &bounds[..], "{line}");
                        assert!(relative_error(want, got) <= 1e-9, "{line}: {want} vs {got}");
                    }
                    (None, Err(Error::ZeroProbability { .. })) => {}
                    (want, got) => panic!("{line}: {want:?} vs {got:?}"),
                }
                for mode in [Mode::Sum, Mode::Max] {
                    let fast = scorer.score(&s, mode);
                    let slow = scorer.brute_force(&s, mode);
                    match (fast, slow) {
                        (Ok(a), Ok(b)) => {
                            assert!(relative_error(a.log_prob, b.log_prob) <= 1e-9);
                            assert_eq!(a.segmentation, b.segmentation);
                            assert_eq!(a.units, b.units);
                        }
                        (Err(Error::ZeroProbability { .. }), Err(Error::ZeroProbability { .. })) => {}
                        (a, b) => panic!("{line} {mode}: {a:?} vs {b:?}"),
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn max_never_exceeds_sum() {
    let mut rng = StdRng::seed_from_u64(22);
    for _ in 0..100 {
        let lines = random_lines(&mut rng, 4, 5, 8);
        let model = train(&lines, 2, None);
        for smoothing in [false, true] {
            let scorer = model
                .scorer(ScoreOptions {
                    smoothing,
                    ..model.default_options()
                })
                .unwrap();
            for line in &lines {
                let s = tokenize(line).unwrap();
                let sum = scorer.sum_logprob(&s).unwrap();
                let (max, _) = scorer.max_logprob(&s).unwrap();
                assert!(max <= sum + 1e-12, "{line}: {max} > {sum}");
            }
        }
    }
}

#[test]
fn single_word_phrases_reduce_to_word_model() {
    let mut rng = StdRng::seed_from_u64(23);
    for order in 1..=3 {
        let lines = random_lines(&mut rng, 5, 40, 8);
        let model = train(&lines, order, Some(1));
        for smoothing in [false, true] {
            let scorer = model
                .scorer(ScoreOptions {
                    smoothing,
                    prior: PriorMode::None,
                    ..model.default_options()
                })
                .unwrap();
            for line in &lines {
                let s = tokenize(line).unwrap();
                let word = scorer.word_lm_logprob(&s).unwrap();
                let sum = scorer.sum_logprob(&s).unwrap();
                assert!((word - sum).abs() <= 1e-12, "{line}: {word} vs {sum}");
                let base = scorer.sentence_ppl(&s, Mode::Base).unwrap();
                let phrase = scorer.sentence_ppl(&s, Mode::Sum).unwrap();
                assert!(relative_error(base, phrase) <= 1e-12);
            }
        }
    }
}

#[test]
fn max_choice_is_repeatable_and_prior_free() {
    let mut rng = StdRng::seed_from_u64(24);
    for _ in 0..50 {
        let lines = random_lines(&mut rng, 3, 6, 8);
        let model = train(&lines, 3, None);
        for line in &lines {
            let s = tokenize(line).unwrap();
            let choices: Vec<_> = PRIORS
                .iter()
                .map(|&prior| {
                    let scorer = model
                        .scorer(ScoreOptions {
                            prior,
                            ..model.default_options()
                        })
                        .unwrap();
                    let first = scorer.max_logprob(&s).unwrap();
                    assert_eq!(scorer.max_logprob(&s).unwrap(), first);
                    first.1
                })
                .collect();
            assert!(choices.windows(2).all(|w| w[0] == w[1]), "{line}");
        }
    }
}

#[test]
fn tied_segmentations_resolve_to_fewest_phrases() {
    // every phrase factor is 1/2 under a uniform word model, so all
    // segmentations tie per phrase
    let lines: Vec<String> = vec!["a".into(), "b".into()];
    let model = train(&lines, 1, None);
    let scorer = model
        .scorer(ScoreOptions {
            lambda: 0.0,
            ..model.default_options()
        })
        .unwrap();
    let (_, seg) = scorer.max_logprob(&tokenize("a b").unwrap()).unwrap();
    assert_eq!(seg.boundaries(), &[1, 2]);
    let (_, seg) = scorer.max_logprob(&tokenize("a b a").unwrap()).unwrap();
    assert_eq!(seg.boundaries(), &[1, 2, 3]);
}

#[test]
fn exact_prior_sums_to_one() {
    for len in 1..=14 {
        let total: f64 = enumerate_segmentations(len)
            .map(|s| segmentation_prior(PriorMode::Exact, len, s.phrase_count()))
            .sum();
        assert!((total - 1.0).abs() <= 1e-12, "I={len}: {total}");
        assert_eq!(enumerate_segmentations(len).count(), 1 << (len - 1));
    }
}

#[test]
fn own_text_does_not_lower_unsmoothed_sum() {
    let mut rng = StdRng::seed_from_u64(25);
    let mut violations = Vec::new();
    let mut trials = 0;
    for _ in 0..200 {
        let lines = random_lines(&mut rng, 3, 4, 6);
        let target = random_lines(&mut rng, 3, 1, 6).remove(0);
        let before = train(&lines, 2, None);
        let mut grown = lines.clone();
        grown.push(target.clone());
        let after = train(&grown, 2, None);
        let s = tokenize(&target).unwrap();
        let score = |m: &TrainedModel| {
            m.scorer(ScoreOptions {
                smoothing: false,
                ..m.default_options()
            })
            .unwrap()
            .sum_logprob(&s)
            .unwrap_or(f64::NEG_INFINITY)
        };
        let (b, a) = (score(&before), score(&after));
        trials += 1;
        if a < b - 1e-12 {
            violations.push(format!("{lines:?} + {target:?}: {b} -> {a}"));
        }
    }
    eprintln!("monotone data fit: {} violations in {trials} trials", violations.len());
    for v in violations.iter().take(5) {
        eprintln!("  {v}");
    }
    assert!(violations.is_empty());
}
