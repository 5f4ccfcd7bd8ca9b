//! Extracts call-for-papers deadlines from the tweet fixture and prints the
//! timeline plus its iCalendar export.
//!
//! ```text
//! cargo run --example cfp_timeline [now, RFC 3339]
//! ```

use chrono::{DateTime, Utc};
use nlpulse::cfp::{build_cfp_entry, build_timeline, extract_dates, timeline_to_ics};
use nlpulse::ingest::{load_tweet_fixtures, load_venues, normalize_tweet};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let now: DateTime<Utc> = match std::env::args().nth(1) {
        Some(s) => s.parse()?,
        None => "2020-07-07T00:00:00Z".parse()?,
    };
    let venues = load_venues(format!("{FIXTURES}/venues.json"))?;
    let load = load_tweet_fixtures(format!("{FIXTURES}/tweets.jsonl"))?;
    let tweets: Vec<_> = load.records.iter().filter_map(|r| normalize_tweet(r).ok()).collect();

    let sample = "abstracts due 21st June 2021, full papers due 2021-06-28";
    for m in extract_dates(sample, now) {
        println!("{:?} {} from {:?}", m.pattern, m.date, &sample[m.span.0..m.span.1]);
    }

    let entries: Vec<_> = tweets.iter().filter_map(|t| build_cfp_entry(t, &venues).ok()).collect();
    let timeline = build_timeline(&entries, now);
    println!("\n{} entries, {} upcoming, {} past as of {now}", entries.len(), timeline.upcoming.len(), timeline.past.len());
    for e in &timeline.upcoming {
        println!("  {}  {:<10} tweet {}", e.deadline, e.venue_key, e.tweet_id);
    }
    println!("\n{}", timeline_to_ics(&timeline));
    Ok(())
}
