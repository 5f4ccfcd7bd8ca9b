//! Links fixture tweets to anthology papers by URL and by title.
//!
//! ```text
//! cargo run --example link_papers
//! ```

use nlpulse::ingest::{load_papers, load_tweet_fixtures, normalize_tweet};
use nlpulse::linker::{link_corpus, normalize_title, normalize_url, PaperIndex};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for raw in [
        "https://www.aclweb.org/anthology/2020.acl-main.442/",
        "http://aclanthology.org/P19-1001.pdf",
        "https://arxiv.org/pdf/2004.12345v2?utm_source=twitter",
    ] {
        let c = normalize_url(raw)?;
        println!("{raw}\n  -> {} {:?}", c.canonical, c.anthology_id.as_ref().map(|i| i.as_str()));
    }
    println!("{:?}", normalize_title("BERT:  Pre-training of Deep   Bidirectional Transformers"));

    let papers = load_papers(format!("{FIXTURES}/papers.json"))?;
    let index = PaperIndex::build(&papers);
    let load = load_tweet_fixtures(format!("{FIXTURES}/tweets.jsonl"))?;
    let tweets: Vec<_> = load.records.iter().filter_map(|r| normalize_tweet(r).ok()).collect();
    let links = link_corpus(&tweets, &index);
    println!("\n{} links to {} of {} papers", links.links.len(), links.unique_papers(), index.len());
    for l in &links.links {
        println!("  {:<22} tweet {:<8} {:?}  {}", l.paper_id, l.tweet_id, l.method, l.evidence);
    }
    Ok(())
}
