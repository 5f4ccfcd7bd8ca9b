//! Seeded generators for template tweets and synthetic corpora.
//!
//! The template corpus backs the bundled classifier fixture; the synthetic
//! corpus exercises the full pipeline at scale.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{LabeledExample, TopicLabel};
use crate::ingest::{normalize_tweet, PaperRecord, RawTweetRecord, VenueRecord};

const TASKS: &[&str] = &[
    "machine translation",
    "question answering",
    "summarization",
    "dialogue systems",
    "named entity recognition",
    "parsing",
    "sentiment analysis",
    "language modeling",
    "speech recognition",
    "information extraction",
    "multilingual NLP",
    "commonsense reasoning",
];

const VENUES: &[&str] = &["ACL", "EMNLP", "NAACL", "EACL", "COLING", "CoNLL", "LREC", "AACL"];
const USERS: &[&str] = &["jane_doe", "nlp_lab", "ml_prof", "grad_student", "acl_org", "bert_fan", "lingfan"];
const LABS: &[&str] = &["our lab", "the NLP group", "our team", "the language technologies institute"];
const MONTHS: &[&str] = &["January", "February", "March", "April", "May", "June", "July", "August", "September", "October", "November", "December"];
const FILLERS: &[&str] = &[
    "#NLProc",
    "#nlproc",
    "Please share!",
    "RT appreciated",
    "so excited",
    "thoughts welcome",
    "",
    "",
    "",
    "with @jane_doe",
    "#ML",
    "#AI",
];

// short phrases that cut across topics
const DISTRACTORS: &[&str] = &[
    "paper link in bio",
    "see you at the conference",
    "slides coming soon",
    "great discussion at the talk",
    "deadline stress is real",
    "our group is growing",
    "read the thread",
    "submission went in",
    "poster session was fun",
];

const TEMPLATES: [&[&str]; 6] = [
    // NewPaper
    &[
        "Our new paper on {task} is out! {url}",
        "New paper: we study {task} with fewer labels {url}",
        "Excited that our work on {task} was accepted at {venue} {year}! {url}",
        "Preprint alert: rethinking {task} benchmarks. joint work with @{user} {url}",
        "Happy to share our {venue} paper on {task}, code and data released",
        "Our latest preprint shows {task} models ignore word order. Paper and code below {url}",
        "Just posted to arXiv: a simple baseline for {task} that beats prior work",
        "Our {venue} {year} paper proposes a new dataset for {task} {url}",
    ],
    // CallForPapers
    &[
        "Call for papers: {venue} {year} workshop on {task}. Deadline {month} {day}",
        "The {venue} {year} submission deadline is {month} {day}! Submit your work on {task}",
        "CFP: workshop on {task} at {venue} {year}, papers due {month} {day} {url}",
        "Submissions are open for the {venue} {year} shared task on {task}. Due {day} {month}",
        "Reminder: {venue} {year} papers due {month} {day}, short and long papers welcome",
        "We invite submissions on {task} to the {venue} {year} workshop. Deadline extended to {month} {day}",
        "Only two weeks left to submit to {venue} {year}! Abstract deadline {month} {day}",
    ],
    // ReadingMaterial
    &[
        "Great blog post explaining {task} from scratch {url}",
        "Slides from my lecture on {task} are online {url}",
        "A free course on {task} with exercises and notebooks {url}",
        "This survey of {task} is a must read for new students {url}",
        "Wrote a tutorial on {task} in PyTorch {url}",
        "Nice thread summarizing ten years of {task} research",
        "Reading list for {task}: classic and recent papers {url}",
        "An illustrated guide to attention for {task} {url}",
    ],
    // CareerOpportunity
    &[
        "We are hiring! {lab} has openings for research scientists in {task}",
        "PhD positions available in {lab} working on {task}. Apply by {month} {day}",
        "Looking for summer interns interested in {task} {url}",
        "Postdoc opening in {lab} on {task}, start date flexible",
        "Job alert: {lab} is recruiting a research engineer for {task} {url}",
        "Fully funded PhD studentship in {task}, applications close {month} {day}",
        "Our team has an internship opening on {task}, DM me",
    ],
    // TalkSeminar
    &[
        "Join us tomorrow at 3pm for a talk by @{user} on {task}",
        "Seminar today at 16:00: advances in {task}. Zoom link {url}",
        "Keynote by @{user} on {task} starting now at {venue} {year}",
        "Next week's reading group: invited speaker @{user} presents work on {task}",
        "Recording of my invited lecture on {task} at the colloquium is up {url}",
        "Don't miss the panel on {task} at {venue} {year} on Friday",
        "Our webinar series continues with a session on {task}, register here {url}",
    ],
    // Other
    &[
        "Congrats to @{user} on the best thesis award!",
        "Anyone else stuck debugging tokenizers all day?",
        "Coffee break thoughts: {task} is harder than it looks",
        "Happy new year to the whole research community",
        "Reviewing season again. Be kind to authors please",
        "Thanks everyone who came by our poster at {venue} {year}",
        "Is it just me or are GPUs impossible to get these days",
        "Does anyone have a good LaTeX template for rebuttals?",
        "Hot take: {task} leaderboards need error bars",
    ],
];

fn fill(template: &str, rng: &mut ChaCha8Rng, year: i32) -> String {
    let mut out = template.to_string();
    let pick = |rng: &mut ChaCha8Rng, xs: &[&str]| xs.choose(rng).unwrap().to_string();
    let slots: [(&str, String); 8] = [
        ("{task}", pick(rng, TASKS)),
        ("{venue}", pick(rng, VENUES)),
        ("{user}", pick(rng, USERS)),
        ("{lab}", pick(rng, LABS)),
        ("{month}", pick(rng, MONTHS)),
        ("{day}", rng.gen_range(1..=28).to_string()),
        ("{year}", year.to_string()),
        ("{url}", format!("https://example.org/p/{}", rng.gen_range(1000..9999))),
    ];
    for (slot, val) in slots {
        out = out.replace(slot, &val);
    }
    if rng.gen_bool(0.3) {
        out.push_str(". ");
        out.push_str(&pick(rng, DISTRACTORS));
    }
    // drop a few words, never a URL
    let words: Vec<&str> = out.split(' ').collect();
    out = words
        .into_iter()
        .filter(|w| w.starts_with("http") || !rng.gen_bool(0.1))
        .collect::<Vec<_>>()
        .join(" ");
    let filler = pick(rng, FILLERS);
    if !filler.is_empty() {
        out.push(' ');
        out.push_str(&filler);
    }
    out
}

fn raw(id: String, at: DateTime<Utc>, text: String, rng: &mut ChaCha8Rng, source_tag: &str) -> RawTweetRecord {
    let likes = (rng.gen::<f64>().powi(3) * 500.0) as i64;
    RawTweetRecord {
        id,
        created_at: at.to_rfc3339(),
        username: USERS.choose(rng).unwrap().to_string(),
        text,
        likes,
        retweets: likes / rng.gen_range(2..8),
        replies: rng.gen_range(0..10),
        language: Some(["en", "en", "en", "en", "de", "fr", "zh", "es"].choose(rng).unwrap().to_string()),
        source_tag: source_tag.to_string(),
    }
}

/// `per_class` template tweets for each topic, shuffled.
pub fn template_corpus(per_class: usize, seed: u64) -> Vec<LabeledExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Utc.with_ymd_and_hms(2019, 1, 1, 0, 0, 0).unwrap();
    let mut out = Vec::with_capacity(per_class * 6);
    for label in TopicLabel::ALL {
        for i in 0..per_class {
            let template = TEMPLATES[label.index()].choose(&mut rng).unwrap();
            let at = start + Duration::minutes(rng.gen_range(0..3 * 365 * 24 * 60));
            let text = fill(template, &mut rng, at.format("%Y").to_string().parse().unwrap());
            let id = format!("{}{:04}", 1_000 + label.index(), i);
            let r = raw(id, at, text, &mut rng, "nlproc");
            let tweet = normalize_tweet(&r).expect("template tweets normalize");
            out.push(LabeledExample { tweet, label });
        }
    }
    out.shuffle(&mut rng);
    out
}

/// A synthetic world: venues, papers, and raw tweets that mention them.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub venues: Vec<VenueRecord>,
    pub papers: Vec<PaperRecord>,
    pub tweets: Vec<RawTweetRecord>,
}

impl SyntheticCorpus {
    /// Writes `tweets.jsonl`, `venues.json` and `papers.json` into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut w = BufWriter::new(File::create(dir.join("tweets.jsonl"))?);
        for t in &self.tweets {
            serde_json::to_writer(&mut w, t)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        serde_json::to_writer_pretty(File::create(dir.join("venues.json"))?, &self.venues)?;
        serde_json::to_writer_pretty(File::create(dir.join("papers.json"))?, &self.papers)?;
        Ok(())
    }
}

/// `n` tweets over 2020 referencing `n_papers` generated papers. About one
/// in five tweets carries a conference hashtag.
pub fn synthetic_corpus(n: usize, n_papers: usize, seed: u64) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let venues: Vec<VenueRecord> = VENUES
        .iter()
        .map(|v| VenueRecord {
            key: v.to_lowercase(),
            display_name: v.to_string(),
            aliases: vec![v.to_uppercase()],
            is_workshop: false,
            url: Some(format!("https://{}.example.org", v.to_lowercase())),
        })
        .collect();
    let mut titles = BTreeSet::new();
    let mut papers = Vec::with_capacity(n_papers);
    while papers.len() < n_papers {
        let i = papers.len();
        let title = format!(
            "{} {} for {} with {} supervision",
            ["Robust", "Efficient", "Scalable", "Simple", "Faithful", "Neural"].choose(&mut rng).unwrap(),
            ["Models", "Methods", "Pretraining", "Evaluation", "Representations"].choose(&mut rng).unwrap(),
            TASKS.choose(&mut rng).unwrap(),
            ["weak", "distant", "minimal", "cross-lingual", "self"].choose(&mut rng).unwrap(),
        );
        if !titles.insert(title.clone()) {
            continue;
        }
        let id = format!("2020.acl-main.{}", i + 1);
        papers.push(PaperRecord {
            url: format!("https://aclanthology.org/{id}"),
            paper_id: id,
            title,
            year: 2020,
            venue_key: "acl".into(),
        });
    }

    let start = Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap();
    let conf_tags = ["acl2020", "emnlp2020", "coling2020"];
    let mut tweets = Vec::with_capacity(n);
    for i in 0..n {
        let label = *TopicLabel::ALL.choose(&mut rng).unwrap();
        let template = TEMPLATES[label.index()].choose(&mut rng).unwrap();
        let at = start + Duration::seconds(rng.gen_range(0..366 * 24 * 3600));
        let mut text = fill(template, &mut rng, 2020);
        let r = rng.gen::<f64>();
        if r < 0.1 && !papers.is_empty() {
            let p = papers.choose(&mut rng).unwrap();
            text.push_str(&format!(" https://www.aclweb.org/anthology/{}/", p.paper_id));
        } else if r < 0.15 && !papers.is_empty() {
            let p = papers.choose(&mut rng).unwrap();
            text.push_str(&format!(" Loved reading \"{}\"", p.title));
        }
        let tag = if rng.gen_bool(0.2) {
            let t = conf_tags.choose(&mut rng).unwrap();
            text.push_str(&format!(" #{t}"));
            *t
        } else {
            "nlproc"
        };
        tweets.push(raw(format!("{}", 1_200_000_000_000_000_000u64 + i as u64), at, text, &mut rng, tag));
    }
    SyntheticCorpus { venues, papers, tweets }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_corpus_is_balanced_and_seeded() {
        let a = template_corpus(10, 7);
        assert_eq!(a.len(), 60);
        for l in TopicLabel::ALL {
            assert_eq!(a.iter().filter(|e| e.label == l).count(), 10);
        }
        let b = template_corpus(10, 7);
        assert_eq!(a.iter().map(|e| &e.tweet).collect::<Vec<_>>(), b.iter().map(|e| &e.tweet).collect::<Vec<_>>());
    }

    #[test]
    fn synthetic_ids_are_unique() {
        let c = synthetic_corpus(500, 20, 1);
        let ids: BTreeSet<_> = c.tweets.iter().map(|t| &t.id).collect();
        assert_eq!(ids.len(), 500);
        assert_eq!(c.papers.len(), 20);
        for t in &c.tweets {
            normalize_tweet(t).unwrap();
        }
    }
}
