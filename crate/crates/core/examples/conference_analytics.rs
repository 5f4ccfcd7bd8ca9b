//! Conference statistics, paper popularity and popular tweets over the
//! fixture corpus.
//!
//! ```text
//! cargo run --example conference_analytics [tag]
//! ```

use std::collections::HashMap;

use nlpulse::analytics::{
    conference_stats, paper_popularity, popular_tweets, rank_scores, tag_conference, EngagementWeights, Metric,
    TimeWindow,
};
use nlpulse::config::Config;
use nlpulse::ingest::{dedupe, load_papers, load_tweet_fixtures, normalize_tweet};
use nlpulse::linker::{link_corpus, PaperIndex};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tag = std::env::args().nth(1).unwrap_or_else(|| "acl2020".into());
    let config = Config::load(format!("{FIXTURES}/config.json"))?;
    let weights: EngagementWeights = config.weights;
    let load = load_tweet_fixtures(format!("{FIXTURES}/tweets.jsonl"))?;
    let parsed = load.records.iter().filter_map(|r| normalize_tweet(r).ok()).collect();
    let tweets = dedupe(parsed, &HashMap::new()).inserts;
    let links = link_corpus(&tweets, &PaperIndex::build(&load_papers(format!("{FIXTURES}/papers.json"))?));

    let members = tweets.iter().filter(|t| tag_conference(t, &config.conferences).contains(&tag));
    let stats = conference_stats(&tag, members, &links, &weights, config.k);
    println!("{}", serde_json::to_string_pretty(&stats)?);

    let by_id: HashMap<&str, _> = tweets.iter().map(|t| (t.id.as_str(), t)).collect();
    let scores = paper_popularity(&links.by_paper, |id| by_id.get(id).copied(), &weights)?;
    println!("\npopular papers:");
    for r in rank_scores(&scores).iter().take(5) {
        println!("  {:>6.1}  {}", r.score, r.paper_id);
    }
    println!("\nmost liked tweets, all time:");
    for t in popular_tweets(&tweets, &TimeWindow::all_time(), Metric::Likes, 5, &weights) {
        println!("  {:>4}  @{:<12} {}", t.likes, t.username, t.text.chars().take(60).collect::<String>());
    }
    Ok(())
}
