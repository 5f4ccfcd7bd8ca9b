use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::Tweet;

/// Engagement counters of a tweet, used to detect refreshed records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Engagement {
    pub likes: u64,
    pub retweets: u64,
    pub replies: u64,
}

/// Result of [`dedupe`]: new tweets and counter refreshes of known ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DedupeOutcome {
    pub inserts: Vec<Tweet>,
    pub updates: Vec<Tweet>,
}

/// Splits a batch against the already-stored tweets.
///
/// `known` maps stored tweet ids to their last seen counters. Unknown ids go
/// to `inserts`; known ids with different counters go to `updates`; the rest
/// are dropped. Within the batch only the first occurrence of an id counts.
pub fn dedupe(batch: Vec<Tweet>, known: &HashMap<String, Engagement>) -> DedupeOutcome {
    let mut seen = HashSet::new();
    let mut out = DedupeOutcome::default();
    for tweet in batch {
        if !seen.insert(tweet.id.clone()) {
            continue;
        }
        match known.get(&tweet.id) {
            None => out.inserts.push(tweet),
            Some(prev) if *prev != tweet.engagement_counts() => out.updates.push(tweet),
            Some(_) => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use chrono::{TimeZone, Utc};
    use proptest::prelude::*;

    use super::*;

    fn tweet(id: &str, likes: u64) -> Tweet {
        Tweet {
            id: id.into(),
            time_utc: Utc.with_ymd_and_hms(2021, 1, 1, 0, 0, 0).unwrap(),
            username: "u".into(),
            text: String::new(),
            hashtags: BTreeSet::new(),
            mentions: BTreeSet::new(),
            urls: vec![],
            likes,
            retweets: 0,
            replies: 0,
            language: "en".into(),
            source_tags: BTreeSet::new(),
        }
    }

    fn ids(v: &[Tweet]) -> Vec<&str> {
        v.iter().map(|t| t.id.as_str()).collect()
    }

    #[test]
    fn distinct_ids_all_inserted() {
        let out = dedupe(vec![tweet("a", 0), tweet("b", 0)], &HashMap::new());
        assert_eq!(ids(&out.inserts), ["a", "b"]);
        assert!(out.updates.is_empty());
    }

    #[test]
    fn within_batch_first_wins() {
        let out = dedupe(vec![tweet("a", 1), tweet("a", 9)], &HashMap::new());
        assert_eq!(out.inserts.len(), 1);
        assert_eq!(out.inserts[0].likes, 1);
    }

    #[test]
    fn changed_counts_become_updates() {
        let known = HashMap::from([
            ("a".to_string(), Engagement { likes: 3, ..Default::default() }),
            ("b".to_string(), Engagement { likes: 2, ..Default::default() }),
        ]);
        let out = dedupe(vec![tweet("a", 7), tweet("b", 2), tweet("c", 0)], &known);
        assert_eq!(ids(&out.inserts), ["c"]);
        assert_eq!(ids(&out.updates), ["a"]);
        assert_eq!(out.updates[0].likes, 7);
    }

    proptest! {
        #[test]
        fn second_pass_inserts_nothing(raw in prop::collection::vec((0u8..20, 0u64..5), 0..40)) {
            let batch: Vec<Tweet> = raw.iter().map(|(i, l)| tweet(&i.to_string(), *l)).collect();
            let first = dedupe(batch.clone(), &HashMap::new());
            prop_assert!(first.inserts.len() <= batch.len());
            let known: HashMap<_, _> = first
                .inserts
                .iter()
                .map(|t| (t.id.clone(), t.engagement_counts()))
                .collect();
            let second = dedupe(batch, &known);
            prop_assert!(second.inserts.is_empty());
        }
    }
}
