use std::collections::{BTreeMap, BTreeSet};

use crate::ingest::Tweet;

/// Conference tag (e.g. `acl2020`) to its lowercase hashtag aliases.
pub type ConferenceRegistry = BTreeMap<String, BTreeSet<String>>;

/// Conference tags whose aliases appear among the tweet's hashtags or source
/// tags. Empty means general discussion.
pub fn tag_conference(tweet: &Tweet, registry: &ConferenceRegistry) -> BTreeSet<String> {
    registry
        .iter()
        .filter(|(_, aliases)| {
            aliases
                .iter()
                .any(|a| tweet.hashtags.contains(a) || tweet.source_tags.contains(a))
        })
        .map(|(tag, _)| tag.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use chrono::{TimeZone, Utc};

    use super::*;
    use crate::analytics::test_support::tweet;

    fn registry() -> ConferenceRegistry {
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        BTreeMap::from([
            ("acl2020".to_string(), set(&["acl2020", "acl2020nlp"])),
            ("emnlp2020".to_string(), set(&["emnlp2020"])),
        ])
    }

    fn with_tags(tags: &[&str]) -> Tweet {
        let mut t = tweet("1", Utc.with_ymd_and_hms(2020, 7, 6, 0, 0, 0).unwrap(), 0, 0, 0);
        t.hashtags = tags.iter().map(|s| s.to_string()).collect();
        t
    }

    #[test]
    fn tags() {
        assert_eq!(tag_conference(&with_tags(&["acl2020nlp"]), &registry()), BTreeSet::from(["acl2020".to_string()]));
        assert!(tag_conference(&with_tags(&["nlproc"]), &registry()).is_empty());
        assert_eq!(tag_conference(&with_tags(&["acl2020", "emnlp2020"]), &registry()).len(), 2);
    }

    #[test]
    fn source_tag_counts() {
        let mut t = with_tags(&[]);
        t.source_tags.insert("emnlp2020".into());
        assert_eq!(tag_conference(&t, &registry()), BTreeSet::from(["emnlp2020".to_string()]));
    }
}
