use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use super::{engagement, rank_scores, EngagementWeights};
use crate::ingest::Tweet;
use crate::linker::{normalize_url, LinkSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedCount {
    pub item: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedScore {
    pub paper_id: String,
    pub score: f64,
}

/// Dashboard payload for one conference tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConferenceStats {
    pub tag: String,
    pub tweet_count: u64,
    pub total_likes: u64,
    pub total_retweets: u64,
    pub total_replies: u64,
    pub unique_mentions: u64,
    pub unique_paper_mentions: u64,
    pub top_hashtags: Vec<RankedCount>,
    pub top_mentions: Vec<RankedCount>,
    pub top_urls: Vec<RankedCount>,
    pub top_papers: Vec<RankedScore>,
    pub top_users: Vec<RankedCount>,
    /// `YYYY-MM` to tweet count.
    pub monthly_histogram: BTreeMap<String, u64>,
    /// The month holding the busiest day, as `YYYY-MM`.
    pub conference_month: Option<String>,
    /// `YYYY-MM-DD` to tweet count, within `conference_month`.
    pub daily_histogram: BTreeMap<String, u64>,
    /// Language code to count, English and unknown excluded.
    pub language_histogram: BTreeMap<String, u64>,
    pub weights: EngagementWeights,
}

/// Mergeable partial aggregate behind [`ConferenceStats`].
///
/// Accumulators built over disjoint partitions merge into the accumulator of
/// their union.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatsAccumulator {
    pub tweet_count: u64,
    pub likes: u64,
    pub retweets: u64,
    pub replies: u64,
    pub hashtags: HashMap<String, u64>,
    pub mentions: HashMap<String, u64>,
    pub urls: HashMap<String, u64>,
    pub users: HashMap<String, u64>,
    pub languages: HashMap<String, u64>,
    pub days: BTreeMap<NaiveDate, u64>,
    pub paper_scores: BTreeMap<String, f64>,
}

fn bump<K: Into<String>>(map: &mut HashMap<String, u64>, key: K) {
    *map.entry(key.into()).or_default() += 1;
}

fn merge_counts(into: &mut HashMap<String, u64>, from: HashMap<String, u64>) {
    for (k, v) in from {
        *into.entry(k).or_default() += v;
    }
}

fn top_k(counts: &HashMap<String, u64>, k: usize) -> Vec<RankedCount> {
    let mut items: Vec<(&String, &u64)> = counts.iter().collect();
    items.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    items
        .into_iter()
        .take(k)
        .map(|(item, count)| RankedCount {
            item: item.clone(),
            count: *count,
        })
        .collect()
}

impl StatsAccumulator {
    /// Adds one tweet. `papers` are the papers it links to.
    pub fn add(&mut self, tweet: &Tweet, papers: &[&str], weights: &EngagementWeights) {
        self.tweet_count += 1;
        self.likes += tweet.likes;
        self.retweets += tweet.retweets;
        self.replies += tweet.replies;
        for h in &tweet.hashtags {
            bump(&mut self.hashtags, h.as_str());
        }
        for m in &tweet.mentions {
            bump(&mut self.mentions, m.as_str());
        }
        let urls: BTreeSet<String> = tweet
            .urls
            .iter()
            .map(|u| normalize_url(u).map(|c| c.canonical).unwrap_or_else(|_| u.clone()))
            .collect();
        for u in urls {
            bump(&mut self.urls, u);
        }
        bump(&mut self.users, tweet.username.as_str());
        if tweet.language != "en" && tweet.language != "und" {
            bump(&mut self.languages, tweet.language.as_str());
        }
        *self.days.entry(tweet.time_utc.date_naive()).or_default() += 1;
        let e = engagement(tweet, weights);
        let distinct: BTreeSet<&str> = papers.iter().copied().collect();
        for p in distinct {
            *self.paper_scores.entry(p.to_string()).or_default() += e;
        }
    }

    pub fn merge(&mut self, other: StatsAccumulator) {
        self.tweet_count += other.tweet_count;
        self.likes += other.likes;
        self.retweets += other.retweets;
        self.replies += other.replies;
        merge_counts(&mut self.hashtags, other.hashtags);
        merge_counts(&mut self.mentions, other.mentions);
        merge_counts(&mut self.urls, other.urls);
        merge_counts(&mut self.users, other.users);
        merge_counts(&mut self.languages, other.languages);
        for (d, c) in other.days {
            *self.days.entry(d).or_default() += c;
        }
        for (p, s) in other.paper_scores {
            *self.paper_scores.entry(p).or_default() += s;
        }
    }

    pub fn finish(&self, tag: &str, k: usize, weights: &EngagementWeights) -> ConferenceStats {
        let mut monthly = BTreeMap::new();
        for (d, c) in &self.days {
            *monthly.entry(d.format("%Y-%m").to_string()).or_default() += c;
        }
        // busiest day, earliest on ties
        let modal = self
            .days
            .iter()
            .fold(None::<(NaiveDate, u64)>, |best, (d, c)| match best {
                Some((_, bc)) if bc >= *c => best,
                _ => Some((*d, *c)),
            })
            .map(|(d, _)| d);
        let daily = modal
            .map(|m| {
                self.days
                    .iter()
                    .filter(|(d, _)| d.year() == m.year() && d.month() == m.month())
                    .map(|(d, c)| (d.format("%Y-%m-%d").to_string(), *c))
                    .collect()
            })
            .unwrap_or_default();
        let mut top_papers = rank_scores(&self.paper_scores);
        top_papers.truncate(k);

        ConferenceStats {
            tag: tag.to_string(),
            tweet_count: self.tweet_count,
            total_likes: self.likes,
            total_retweets: self.retweets,
            total_replies: self.replies,
            unique_mentions: self.mentions.len() as u64,
            unique_paper_mentions: self.paper_scores.len() as u64,
            top_hashtags: top_k(&self.hashtags, k),
            top_mentions: top_k(&self.mentions, k),
            top_urls: top_k(&self.urls, k),
            top_papers,
            top_users: top_k(&self.users, k),
            monthly_histogram: monthly,
            conference_month: modal.map(|d| d.format("%Y-%m").to_string()),
            daily_histogram: daily,
            language_histogram: self.languages.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            weights: *weights,
        }
    }
}

/// Statistics over tweets already filtered to one conference tag.
pub fn conference_stats<'a>(
    tag: &str,
    tweets: impl IntoIterator<Item = &'a Tweet>,
    links: &LinkSet,
    weights: &EngagementWeights,
    k: usize,
) -> ConferenceStats {
    let mut papers_of: HashMap<&str, Vec<&str>> = HashMap::new();
    for l in &links.links {
        papers_of.entry(l.tweet_id.as_str()).or_default().push(l.paper_id.as_str());
    }
    let mut acc = StatsAccumulator::default();
    for t in tweets {
        let papers = papers_of.get(t.id.as_str()).map(Vec::as_slice).unwrap_or(&[]);
        acc.add(t, papers, weights);
    }
    acc.finish(tag, k, weights)
}

#[cfg(test)]
mod tests {
    use chrono::{TimeZone, Utc};

    use super::*;
    use crate::analytics::test_support::tweet;

    #[test]
    fn empty_is_zeroed() {
        let s = conference_stats("acl2020", [], &LinkSet::default(), &Default::default(), 10);
        assert_eq!(s.tweet_count, 0);
        assert_eq!(s.total_likes, 0);
        assert!(s.top_hashtags.is_empty() && s.daily_histogram.is_empty() && s.monthly_histogram.is_empty());
        assert_eq!(s.conference_month, None);
    }

    #[test]
    fn histograms_and_languages() {
        let mk = |id: &str, m: u32, d: u32, lang: &str| {
            let mut t = tweet(id, Utc.with_ymd_and_hms(2020, m, d, 10, 0, 0).unwrap(), 1, 0, 0);
            t.language = lang.into();
            t
        };
        let ts = [
            mk("1", 6, 30, "en"),
            mk("2", 7, 6, "und"),
            mk("3", 7, 6, "es"),
            mk("4", 7, 7, "hi"),
            mk("5", 8, 1, "es"),
        ];
        let s = conference_stats("acl2020", &ts, &LinkSet::default(), &Default::default(), 10);
        assert_eq!(s.conference_month.as_deref(), Some("2020-07"));
        assert_eq!(s.daily_histogram, BTreeMap::from([("2020-07-06".into(), 2), ("2020-07-07".into(), 1)]));
        assert_eq!(s.monthly_histogram.values().sum::<u64>(), 5);
        assert_eq!(s.language_histogram, BTreeMap::from([("es".into(), 2), ("hi".into(), 1)]));
        assert_eq!(s.top_users, vec![RankedCount { item: "u".into(), count: 5 }]);
    }

    #[test]
    fn urls_counted_canonically_once_per_tweet() {
        let mut t = tweet("1", Utc.with_ymd_and_hms(2020, 7, 6, 0, 0, 0).unwrap(), 0, 0, 0);
        t.urls = vec!["https://virtual.acl2020.org/socials.html".into(), "http://www.virtual.acl2020.org/socials.html/".into()];
        let s = conference_stats("acl2020", [&t], &LinkSet::default(), &Default::default(), 10);
        assert_eq!(s.top_urls, vec![RankedCount { item: "virtual.acl2020.org/socials.html".into(), count: 1 }]);
    }
}
