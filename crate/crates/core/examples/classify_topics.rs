//! Trains the topic model on the labeled fixture, scores it on the clean
//! held-out set and labels a few ad-hoc texts.
//!
//! ```text
//! cargo run --example classify_topics
//! ```

use chrono::Utc;
use nlpulse::classify::{cohen_kappa, evaluate, load_labeled, train, TopicClassifier, DEFAULT_ALPHA};
use nlpulse::ingest::{normalize_tweet, RawTweetRecord};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = load_labeled(format!("{FIXTURES}/labeled.jsonl"))?;
    let model = train(&corpus, DEFAULT_ALPHA)?;
    let heldout = load_labeled(format!("{FIXTURES}/heldout_clean.jsonl"))?;
    let report = evaluate(&model, &heldout)?;
    println!("held-out accuracy {:.3} on {}", report.accuracy, report.n);
    for m in &report.per_class {
        println!("  {:<18} p={:.2} r={:.2} f1={:.2} n={}", m.label.as_str(), m.precision, m.recall, m.f1, m.support);
    }

    let gold: Vec<_> = heldout.iter().map(|e| e.label).collect();
    let predicted: Vec<_> = heldout.iter().map(|e| model.classify(&e.tweet).label).collect();
    println!("kappa(gold, model) = {:.3}", cohen_kappa(&gold, &predicted)?);

    for (i, text) in [
        "Our #acl2020nlp paper on robust parsing is out: https://aclanthology.org/2020.acl-main.1",
        "CFP: WiNLP 2021 workshop, submissions due March 1st",
        "We're hiring a postdoc in multilingual NLP!",
        "Anyone else watching the football match tonight",
    ]
    .iter()
    .enumerate()
    {
        let raw = RawTweetRecord {
            id: format!("{}", 100 + i),
            username: "demo".into(),
            text: (*text).into(),
            created_at: Utc::now().to_rfc3339(),
            likes: 0,
            retweets: 0,
            replies: 0,
            language: None,
            source_tag: String::new(),
        };
        let out = model.classify(&normalize_tweet(&raw)?);
        let why = out.rule_fired.unwrap_or_else(|| format!("p={:.2}", out.confidence.unwrap_or(0.0)));
        println!("{:<18} ({why})  {text}", out.label.as_str());
    }
    Ok(())
}
