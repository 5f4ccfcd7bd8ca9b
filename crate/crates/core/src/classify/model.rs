use std::collections::BTreeMap;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{apply_rules, tokenize, ClassifyError, LabeledExample, LabeledTweet, TopicClassifier, TopicLabel};
use crate::ingest::Tweet;

pub const DEFAULT_ALPHA: f64 = 1.0;

const N_CLASSES: usize = TopicLabel::ALL.len();

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub corpus_size: usize,
    pub class_counts: Vec<usize>,
    /// Timestamp of the newest training tweet.
    pub corpus_until: Option<DateTime<Utc>>,
}

/// Multinomial naive Bayes over [`tokenize`] counts.
///
/// Rows of `log_likelihoods` follow [`TopicLabel::ALL`]; columns follow
/// `vocabulary` indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub vocabulary: BTreeMap<String, usize>,
    pub log_priors: Vec<f64>,
    pub log_likelihoods: Vec<Vec<f64>>,
    pub smoothing_alpha: f64,
    pub training_meta: TrainingMeta,
}

/// Fits the model. Token likelihoods use additive smoothing `alpha`, class
/// priors use add-one smoothing so absent classes keep a nonzero prior.
pub fn train(corpus: &[LabeledExample], alpha: f64) -> Result<ClassifierModel, ClassifyError> {
    if corpus.is_empty() {
        return Err(ClassifyError::EmptyCorpus);
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(ClassifyError::InvalidAlpha(alpha));
    }

    let mut class_counts = vec![0usize; N_CLASSES];
    let mut token_counts: Vec<BTreeMap<String, u64>> = vec![BTreeMap::new(); N_CLASSES];
    for ex in corpus {
        let c = ex.label.index();
        class_counts[c] += 1;
        for tok in tokenize(&ex.tweet.text) {
            *token_counts[c].entry(tok).or_default() += 1;
        }
    }

    // BTreeMap ordering makes indices independent of corpus order.
    let vocabulary: BTreeMap<String, usize> = {
        let mut all: Vec<&String> = token_counts.iter().flat_map(|m| m.keys()).collect();
        all.sort();
        all.dedup();
        all.into_iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()
    };
    let v = vocabulary.len() as f64;

    let n = corpus.len() as f64;
    let log_priors = class_counts
        .iter()
        .map(|&c| ((c as f64 + 1.0) / (n + N_CLASSES as f64)).ln())
        .collect();

    let log_likelihoods = token_counts
        .iter()
        .map(|counts| {
            let total: u64 = counts.values().sum();
            let denom = total as f64 + alpha * v;
            let mut row = vec![(alpha / denom).ln(); vocabulary.len()];
            for (tok, &c) in counts {
                row[vocabulary[tok]] = ((c as f64 + alpha) / denom).ln();
            }
            row
        })
        .collect();

    Ok(ClassifierModel {
        vocabulary,
        log_priors,
        log_likelihoods,
        smoothing_alpha: alpha,
        training_meta: TrainingMeta {
            corpus_size: corpus.len(),
            class_counts,
            corpus_until: corpus.iter().map(|e| e.tweet.time_utc).max(),
        },
    })
}

impl ClassifierModel {
    /// Per-class log posteriors (unnormalized), or `None` when no token of
    /// `text` is in the vocabulary.
    pub fn log_posteriors(&self, text: &str) -> Option<[f64; N_CLASSES]> {
        let indices: Vec<usize> = tokenize(text)
            .iter()
            .filter_map(|t| self.vocabulary.get(t).copied())
            .collect();
        if indices.is_empty() {
            return None;
        }
        let mut scores = [0.0; N_CLASSES];
        for (c, score) in scores.iter_mut().enumerate() {
            *score = self.log_priors[c] + indices.iter().map(|&i| self.log_likelihoods[c][i]).sum::<f64>();
        }
        Some(scores)
    }

    /// The statistical layer alone.
    pub fn classify_statistical(&self, tweet: &Tweet) -> LabeledTweet {
        let Some(scores) = self.log_posteriors(&tweet.text) else {
            return LabeledTweet {
                tweet_id: tweet.id.clone(),
                label: TopicLabel::Other,
                confidence: Some(0.0),
                rule_fired: None,
            };
        };
        // strict comparison keeps the earliest class on ties
        let mut best = 0;
        for c in 1..N_CLASSES {
            if scores[c] > scores[best] {
                best = c;
            }
        }
        let max = scores[best];
        let norm: f64 = scores.iter().map(|s| (s - max).exp()).sum();
        LabeledTweet {
            tweet_id: tweet.id.clone(),
            label: TopicLabel::ALL[best],
            confidence: Some(1.0 / norm),
            rule_fired: None,
        }
    }

    pub fn to_json(&self) -> Result<String, ClassifyError> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifyError> {
        let model: ClassifierModel = serde_json::from_str(text)?;
        let bad = |m: &str| ClassifyError::Parse { line: 1, reason: m.to_string() };
        if model.log_priors.len() != N_CLASSES || model.log_likelihoods.len() != N_CLASSES {
            return Err(bad("model must have six classes"));
        }
        if model.log_likelihoods.iter().any(|r| r.len() != model.vocabulary.len()) {
            return Err(bad("likelihood rows do not match vocabulary size"));
        }
        if model.vocabulary.values().any(|&i| i >= model.vocabulary.len()) {
            return Err(bad("vocabulary index out of range"));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ClassifyError> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ClassifyError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl TopicClassifier for ClassifierModel {
    fn classify(&self, tweet: &Tweet) -> LabeledTweet {
        match apply_rules(tweet) {
            Some((label, rule)) => LabeledTweet {
                tweet_id: tweet.id.clone(),
                label,
                confidence: None,
                rule_fired: Some(rule.name().to_string()),
            },
            None => self.classify_statistical(tweet),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use chrono::TimeZone;
    use proptest::prelude::*;

    use super::*;
    use crate::ingest::{extract_urls, Tweet};

    pub(crate) fn tweet(id: &str, text: &str) -> Tweet {
        Tweet {
            id: id.into(),
            time_utc: Utc.with_ymd_and_hms(2021, 3, 1, 12, 0, 0).unwrap(),
            username: "u".into(),
            text: text.into(),
            hashtags: BTreeSet::new(),
            mentions: BTreeSet::new(),
            urls: extract_urls(text),
            likes: 0,
            retweets: 0,
            replies: 0,
            language: "en".into(),
            source_tags: BTreeSet::new(),
        }
    }

    fn ex(text: &str, label: TopicLabel) -> LabeledExample {
        LabeledExample { tweet: tweet("x", text), label }
    }

    fn toy() -> ClassifierModel {
        train(
            &[ex("cfp cfp", TopicLabel::CallForPapers), ex("paper paper", TopicLabel::NewPaper)],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn empty_corpus() {
        assert!(matches!(train(&[], 1.0), Err(ClassifyError::EmptyCorpus)));
    }

    #[test]
    fn single_class_prior() {
        let m = train(&[ex("hello", TopicLabel::Other)], 1.0).unwrap();
        let best = (0..6).max_by(|&a, &b| m.log_priors[a].total_cmp(&m.log_priors[b])).unwrap();
        assert_eq!(TopicLabel::ALL[best], TopicLabel::Other);
    }

    #[test]
    fn normalization() {
        let m = toy();
        let prior_sum: f64 = m.log_priors.iter().map(|p| p.exp()).sum();
        assert!((prior_sum - 1.0).abs() < 1e-9);
        for row in &m.log_likelihoods {
            let s: f64 = row.iter().map(|p| p.exp()).sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn toy_posteriors_match_hand_computation() {
        // V = {cfp, paper}, alpha = 1, n = 2.
        // priors: CFP = NP = 2/8, others 1/8.
        // P(paper|NP) = 3/4, P(paper|CFP) = 1/4, P(paper|empty class) = 1/2.
        let m = toy();
        let post = m.log_posteriors("paper").unwrap();
        let expect = [
            (2.0f64 / 8.0 * 3.0 / 4.0).ln(),
            (2.0f64 / 8.0 * 1.0 / 4.0).ln(),
            (1.0f64 / 8.0 * 1.0 / 2.0).ln(),
            (1.0f64 / 8.0 * 1.0 / 2.0).ln(),
            (1.0f64 / 8.0 * 1.0 / 2.0).ln(),
            (1.0f64 / 8.0 * 1.0 / 2.0).ln(),
        ];
        for (a, b) in post.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(m.classify(&tweet("1", "paper")).label, TopicLabel::NewPaper);
        assert_eq!(m.classify_statistical(&tweet("1", "cfp")).label, TopicLabel::CallForPapers);
        assert_eq!(m.classify(&tweet("1", "cfp")).label, TopicLabel::CallForPapers);
        // 0.1875 / (0.1875 + 0.0625 * 5)
        let conf = m.classify(&tweet("1", "paper")).confidence.unwrap();
        assert!((conf - 0.375).abs() < 1e-12);
    }

    #[test]
    fn empty_and_oov_fall_back_to_other() {
        let m = toy();
        for text in ["", "zzz qqq"] {
            let l = m.classify(&tweet("1", text));
            assert_eq!(l.label, TopicLabel::Other);
            assert_eq!(l.confidence, Some(0.0));
            assert_eq!(l.rule_fired, None);
        }
    }

    #[test]
    fn rule_layer_sets_rule_name() {
        let l = toy().classify(&tweet("1", "call for papers #acl"));
        assert_eq!(l.label, TopicLabel::CallForPapers);
        assert_eq!(l.rule_fired.as_deref(), Some("cfp-phrase"));
        assert_eq!(l.confidence, None);
    }

    #[test]
    fn json_round_trip() {
        let m = toy();
        assert_eq!(ClassifierModel::from_json(&m.to_json().unwrap()).unwrap(), m);
    }

    fn arb_label() -> impl Strategy<Value = TopicLabel> {
        (0usize..6).prop_map(|i| TopicLabel::ALL[i])
    }

    proptest! {
        #[test]
        fn permutation_invariant(
            docs in prop::collection::vec(("[a-c ]{0,12}", arb_label()), 1..12),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let corpus: Vec<_> = docs.iter().map(|(t, l)| ex(t, *l)).collect();
            let mut shuffled = corpus.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(train(&corpus, 1.0).unwrap(), train(&shuffled, 1.0).unwrap());
        }

        #[test]
        fn never_fails_on_arbitrary_text(text in any::<String>()) {
            let l = toy().classify(&tweet("1", &text));
            prop_assert!(TopicLabel::ALL.contains(&l.label));
            if let Some(c) = l.confidence {
                prop_assert!((0.0..=1.0).contains(&c));
            }
        }

        #[test]
        fn whitespace_perturbation_invariant(words in prop::collection::vec("[a-z]{1,6}", 0..8)) {
            let m = toy();
            let a = m.classify(&tweet("1", &words.join(" ")));
            let b = m.classify(&tweet("1", &words.join("  \t ")));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn rules_dominate(alpha in 0.01f64..10.0, filler in "[a-z ]{0,20}") {
            let m = train(&[ex("paper paper paper", TopicLabel::NewPaper)], alpha).unwrap();
            let t = tweet("1", &format!("{filler} call for papers {filler}"));
            let (label, _) = apply_rules(&t).unwrap();
            prop_assert_eq!(m.classify(&t).label, label);
        }
    }
}
