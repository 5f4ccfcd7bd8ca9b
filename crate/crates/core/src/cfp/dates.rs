use std::sync::LazyLock;

use chrono::{DateTime, Datelike, NaiveDate, Utc};
use regex::{Captures, Regex};
use serde::{Deserialize, Serialize};

/// Which grammar rule produced a date. Declaration order is priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatePattern {
    /// `March 1`, `Mar. 1st, 2022`
    MonthDay,
    /// `15 January 2022`, `2nd of March`
    DayMonth,
    /// `2022-01-15`
    Iso,
    /// `15/01/2022`, always day first
    DayFirstSlash,
}

impl DatePattern {
    fn priority(self) -> u8 {
        match self {
            DatePattern::MonthDay | DatePattern::DayMonth => 0,
            DatePattern::Iso => 1,
            DatePattern::DayFirstSlash => 2,
        }
    }
}

/// A calendar date found in text. `span` is a byte range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DateMention {
    pub date: NaiveDate,
    pub span: (usize, usize),
    pub year_inferred: bool,
    pub pattern: DatePattern,
}

const MONTHS: &str = "january|february|march|april|may|june|july|august|september|october|november|december|sept|jan|feb|mar|apr|jun|jul|aug|sep|oct|nov|dec";

static MONTH_DAY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"(?i)\b(?P<month>{MONTHS})\b\.?\s+(?P<day>\d{{1,2}})(?:st|nd|rd|th)?\b(?:,?\s+(?P<year>\d{{4}})\b)?"
    ))
    .unwrap()
});
static DAY_MONTH: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"(?i)\b(?P<day>\d{{1,2}})(?:st|nd|rd|th)?\s+(?:of\s+)?(?P<month>{MONTHS})\b\.?(?:,?\s+(?P<year>\d{{4}})\b)?"
    ))
    .unwrap()
});
static ISO: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?P<year>\d{4})-(?P<month>\d{2})-(?P<day>\d{2})").unwrap());
static SLASH: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?P<day>\d{1,2})/(?P<month>\d{1,2})/(?P<year>\d{4})").unwrap());

fn month_number(name: &str) -> Option<u32> {
    let prefix: String = name.chars().take(3).collect::<String>().to_ascii_lowercase();
    let idx = ["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"]
        .iter()
        .position(|m| *m == prefix)?;
    Some(idx as u32 + 1)
}

/// Next occurrence of `month`/`day` strictly after `reference` and at most
/// 366 days later. A Feb 29 with no leap day in that range is dropped.
fn infer_year(month: u32, day: u32, reference: NaiveDate) -> Option<NaiveDate> {
    [reference.year(), reference.year() + 1]
        .into_iter()
        .filter_map(|y| NaiveDate::from_ymd_opt(y, month, day))
        .find(|d| *d > reference)
        .filter(|d| (*d - reference).num_days() <= 366)
}

/// Numeric fields must not run into neighbouring digits or separators.
fn isolated(text: &str, start: usize, end: usize, seps: &[char]) -> bool {
    let blocked = |c: Option<char>| c.is_some_and(|c| c.is_ascii_digit() || seps.contains(&c));
    !blocked(text[..start].chars().next_back()) && !blocked(text[end..].chars().next())
}

struct Candidate {
    mention: DateMention,
}

fn resolve(caps: &Captures, month: u32, pattern: DatePattern, reference: NaiveDate) -> Option<DateMention> {
    let m = caps.get(0)?;
    let day: u32 = caps.name("day")?.as_str().parse().ok()?;
    let (date, year_inferred) = match caps.name("year") {
        Some(y) => (NaiveDate::from_ymd_opt(y.as_str().parse().ok()?, month, day)?, false),
        None => (infer_year(month, day, reference)?, true),
    };
    Some(DateMention {
        date,
        span: (m.start(), m.end()),
        year_inferred,
        pattern,
    })
}

fn candidates(text: &str, reference: NaiveDate) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (re, pattern) in [(&*MONTH_DAY, DatePattern::MonthDay), (&*DAY_MONTH, DatePattern::DayMonth)] {
        for caps in re.captures_iter(text) {
            let Some(month) = caps.name("month").and_then(|m| month_number(m.as_str())) else {
                continue;
            };
            if let Some(mention) = resolve(&caps, month, pattern, reference) {
                out.push(Candidate { mention });
            }
        }
    }
    for (re, pattern, seps) in [
        (&*ISO, DatePattern::Iso, &['-'][..]),
        (&*SLASH, DatePattern::DayFirstSlash, &['/'][..]),
    ] {
        for caps in re.captures_iter(text) {
            let whole = caps.get(0).unwrap();
            if !isolated(text, whole.start(), whole.end(), seps) {
                continue;
            }
            let Some(month) = caps.name("month").and_then(|m| m.as_str().parse().ok()) else {
                continue;
            };
            if let Some(mention) = resolve(&caps, month, pattern, reference) {
                out.push(Candidate { mention });
            }
        }
    }
    out
}

/// Extracts calendar dates from `text`, in text order.
///
/// `reference` (the tweet time) anchors year-less dates: they resolve to the
/// next occurrence strictly after the reference date. Impossible dates are
/// dropped. Where matches overlap, month-name forms beat ISO, which beats
/// slashed day-first dates.
pub fn extract_dates(text: &str, reference: DateTime<Utc>) -> Vec<DateMention> {
    let reference = reference.date_naive();
    let mut cands = candidates(text, reference);
    cands.sort_by_key(|c| (c.mention.pattern.priority(), c.mention.span.0, std::cmp::Reverse(c.mention.span.1)));

    let mut accepted: Vec<DateMention> = Vec::new();
    for Candidate { mention } in cands {
        let (s, e) = mention.span;
        if accepted.iter().all(|a| e <= a.span.0 || s >= a.span.1) {
            accepted.push(mention);
        }
    }
    accepted.sort_by_key(|m| m.span.0);
    accepted
}
