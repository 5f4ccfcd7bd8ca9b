use std::collections::BTreeSet;
use std::sync::LazyLock;

use chrono::{DateTime, NaiveDate, NaiveDateTime, TimeZone, Timelike, Utc};
use regex::Regex;
use thiserror::Error;

use super::{RawTweetRecord, Tweet};

static URL_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)https?://\S+").unwrap());
// The leading group stands in for a lookbehind: a tag must not continue a word.
static HASHTAG_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?:^|[^\w])#(\w+)").unwrap());
static MENTION_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?:^|[^\w])@(\w+)").unwrap());

const URL_TRAILING: &[char] = &['.', ',', ';', ':', '!', '?', ')'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("tweet id is empty")]
    EmptyId,
    #[error("invalid timestamp {0:?}")]
    InvalidTimestamp(String),
    #[error("invalid {field} count {value} on tweet {id}")]
    InvalidCount {
        id: String,
        field: &'static str,
        value: i64,
    },
}

/// Byte spans of every URL in `text`, trailing punctuation excluded.
pub(crate) fn url_spans(text: &str) -> Vec<(usize, usize)> {
    URL_RE
        .find_iter(text)
        .filter_map(|m| {
            let trimmed = m.as_str().trim_end_matches(URL_TRAILING);
            // "https://" alone is not a URL
            (trimmed.len() > trimmed.find("://").unwrap_or(0) + 3)
                .then(|| (m.start(), m.start() + trimmed.len()))
        })
        .collect()
}

pub fn extract_urls(text: &str) -> Vec<String> {
    url_spans(text)
        .into_iter()
        .map(|(s, e)| text[s..e].to_string())
        .collect()
}

/// `text` with URL spans blanked out, so fragments like `#section` are not
/// read as hashtags.
fn mask_urls(text: &str) -> String {
    let mut masked = String::with_capacity(text.len());
    let mut last = 0;
    for (s, e) in url_spans(text) {
        masked.push_str(&text[last..s]);
        masked.extend(std::iter::repeat_n(' ', text[s..e].chars().count()));
        last = e;
    }
    masked.push_str(&text[last..]);
    masked
}

fn extract_marked(re: &Regex, text: &str) -> BTreeSet<String> {
    let masked = mask_urls(text);
    re.captures_iter(&masked)
        .map(|c| c[1].to_lowercase())
        .collect()
}

pub fn extract_hashtags(text: &str) -> BTreeSet<String> {
    extract_marked(&HASHTAG_RE, text)
}

pub fn extract_mentions(text: &str) -> BTreeSet<String> {
    extract_marked(&MENTION_RE, text)
}

fn earliest_valid() -> DateTime<Utc> {
    Utc.from_utc_datetime(&NaiveDate::from_ymd_opt(2006, 1, 1).unwrap().into())
}

/// Parses the timestamp shapes seen in tweet dumps. Zone-less values are UTC.
pub fn parse_timestamp(raw: &str) -> Result<DateTime<Utc>, NormalizeError> {
    let invalid = || NormalizeError::InvalidTimestamp(raw.to_string());
    let s = raw.trim();
    if s.is_empty() {
        return Err(invalid());
    }

    let parsed = parse_zoned(s)
        .or_else(|| {
            let stripped = s
                .strip_suffix(" UTC")
                .or_else(|| s.strip_suffix(" GMT"))
                .or_else(|| s.strip_suffix('Z'))
                .unwrap_or(s);
            parse_naive(stripped).map(|n| Utc.from_utc_datetime(&n))
        })
        .or_else(|| {
            s.parse::<i64>()
                .ok()
                .and_then(|secs| DateTime::from_timestamp(secs, 0))
        })
        .ok_or_else(invalid)?;

    let parsed = parsed.with_nanosecond(0).ok_or_else(invalid)?;
    if parsed < earliest_valid() {
        return Err(invalid());
    }
    Ok(parsed)
}

fn parse_zoned(s: &str) -> Option<DateTime<Utc>> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.with_timezone(&Utc));
    }
    const ZONED: &[&str] = &[
        "%Y-%m-%d %H:%M:%S %z",
        "%Y-%m-%d %H:%M:%S%.f %z",
        "%Y-%m-%dT%H:%M:%S%.f%z",
        "%a %b %d %H:%M:%S %z %Y",
    ];
    ZONED
        .iter()
        .find_map(|f| DateTime::parse_from_str(s, f).ok())
        .map(|dt| dt.with_timezone(&Utc))
}

fn parse_naive(s: &str) -> Option<NaiveDateTime> {
    const NAIVE: &[&str] = &[
        "%Y-%m-%d %H:%M:%S%.f",
        "%Y-%m-%dT%H:%M:%S%.f",
        "%Y-%m-%d %H:%M",
        "%Y-%m-%dT%H:%M",
    ];
    NAIVE
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
        .or_else(|| {
            NaiveDate::parse_from_str(s, "%Y-%m-%d")
                .ok()
                .map(|d| d.into())
        })
}

fn count(id: &str, field: &'static str, value: i64) -> Result<u64, NormalizeError> {
    u64::try_from(value).map_err(|_| NormalizeError::InvalidCount {
        id: id.to_string(),
        field,
        value,
    })
}

pub fn normalize_tweet(raw: &RawTweetRecord) -> Result<Tweet, NormalizeError> {
    let id = raw.id.trim();
    if id.is_empty() {
        return Err(NormalizeError::EmptyId);
    }
    let time_utc = parse_timestamp(&raw.created_at)?;
    let likes = count(id, "likes", raw.likes)?;
    let retweets = count(id, "retweets", raw.retweets)?;
    let replies = count(id, "replies", raw.replies)?;

    let language = raw
        .language
        .as_deref()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_lowercase)
        .unwrap_or_else(|| "und".to_string());

    let source_tags = raw
        .source_tag
        .split(',')
        .map(|t| t.trim().trim_start_matches('#').to_lowercase())
        .filter(|t| !t.is_empty())
        .collect();

    Ok(Tweet {
        id: id.to_string(),
        time_utc,
        username: raw.username.trim().trim_start_matches('@').to_lowercase(),
        text: raw.text.clone(),
        hashtags: extract_hashtags(&raw.text),
        mentions: extract_mentions(&raw.text),
        urls: extract_urls(&raw.text),
        likes,
        retweets,
        replies,
        language,
        source_tags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(text: &str) -> RawTweetRecord {
        RawTweetRecord {
            id: "1".into(),
            created_at: "2020-07-06 10:00:00".into(),
            username: "Jane".into(),
            text: text.into(),
            likes: 0,
            retweets: 0,
            replies: 0,
            language: None,
            source_tag: "nlproc".into(),
        }
    }

    #[test]
    fn extracts_tags_mentions_and_urls() {
        let t = normalize_tweet(&raw("New #NLProc paper by @jane: https://x.y/z.")).unwrap();
        assert_eq!(t.hashtags, BTreeSet::from(["nlproc".to_string()]));
        assert_eq!(t.mentions, BTreeSet::from(["jane".to_string()]));
        assert_eq!(t.urls, vec!["https://x.y/z".to_string()]);
    }

    #[test]
    fn plain_text_has_no_entities() {
        let t = normalize_tweet(&raw("just some words here")).unwrap();
        assert!(t.hashtags.is_empty());
        assert!(t.mentions.is_empty());
        assert!(t.urls.is_empty());
    }

    #[test]
    fn missing_language_is_und() {
        let t = normalize_tweet(&raw("x")).unwrap();
        assert_eq!(t.language, "und");
        let mut r = raw("x");
        r.language = Some("DE".into());
        assert_eq!(normalize_tweet(&r).unwrap().language, "de");
    }

    #[test]
    fn url_fragments_and_emails_are_not_entities() {
        let t = normalize_tweet(&raw("mail me at a@b.org, see https://ex.com/p#sec (https://a.b/c)")).unwrap();
        assert!(t.hashtags.is_empty());
        assert!(t.mentions.is_empty());
        assert_eq!(t.urls, vec!["https://ex.com/p#sec", "https://a.b/c"]);
    }

    #[test]
    fn timestamps() {
        let expect = Utc.with_ymd_and_hms(2020, 7, 6, 10, 0, 0).unwrap();
        for s in [
            "2020-07-06 10:00:00",
            "2020-07-06T10:00:00Z",
            "2020-07-06T12:00:00+02:00",
            "2020-07-06 10:00:00 +0000",
            "2020-07-06 10:00:00 UTC",
            "2020-07-06T10:00:00.734",
            "Mon Jul 06 10:00:00 +0000 2020",
            "1594029600",
        ] {
            assert_eq!(parse_timestamp(s).unwrap(), expect, "{s}");
        }
        assert!(matches!(
            parse_timestamp("yesterday"),
            Err(NormalizeError::InvalidTimestamp(_))
        ));
        assert!(parse_timestamp("2005-12-31 23:59:59").is_err());
    }

    #[test]
    fn negative_counts_rejected() {
        let mut r = raw("x");
        r.retweets = -1;
        assert!(matches!(
            normalize_tweet(&r),
            Err(NormalizeError::InvalidCount { field: "retweets", .. })
        ));
    }

    #[test]
    fn empty_id_rejected() {
        let mut r = raw("x");
        r.id = " ".into();
        assert_eq!(normalize_tweet(&r), Err(NormalizeError::EmptyId));
    }
}
