use serde::{Deserialize, Serialize};

use crate::ingest::VenueRecord;

const WORKSHOP_WINDOW_CHARS: usize = 30;

/// A venue alias found in a tweet. `span` is a byte range into the text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VenueMatch {
    pub venue_key: String,
    pub matched_alias: String,
    pub year: Option<i32>,
    pub is_workshop: bool,
    pub span: (usize, usize),
}

fn char_before(s: &str, i: usize) -> Option<char> {
    s[..i].chars().next_back()
}

fn plausible_year(digits: &str) -> Option<i32> {
    (digits.len() == 4 && (digits.starts_with("19") || digits.starts_with("20")))
        .then(|| digits.parse().ok())
        .flatten()
}

/// Four leading ASCII digits of `rest` when they form a 19xx/20xx year not
/// followed by another digit.
fn leading_year(rest: &str) -> Option<i32> {
    let b = rest.as_bytes();
    if b.len() < 4 || !b[..4].iter().all(u8::is_ascii_digit) {
        return None;
    }
    if b.get(4).is_some_and(u8::is_ascii_digit) {
        return None;
    }
    plausible_year(&rest[..4])
}

/// Checks the boundary after an alias ending at `end`. Returns `None` when the
/// alias continues a longer word, otherwise the year attached to it.
fn trailing(lower: &str, end: usize) -> Option<Option<i32>> {
    let rest = &lower[end..];
    match rest.chars().next() {
        None => Some(None),
        Some(c) if c.is_ascii_digit() => leading_year(rest).map(Some),
        Some(c) if c.is_alphanumeric() => None,
        Some(c) => {
            let year = if matches!(c, ' ' | '-' | '_' | '\'') {
                leading_year(&rest[1..])
            } else {
                None
            };
            Some(year)
        }
    }
}

fn near_workshop(lower: &str, span: (usize, usize)) -> bool {
    lower.match_indices("workshop").any(|(s, m)| {
        let e = s + m.len();
        let gap = if e <= span.0 {
            lower[e..span.0].chars().count()
        } else if s >= span.1 {
            lower[span.1..s].chars().count()
        } else {
            0
        };
        gap <= WORKSHOP_WINDOW_CHARS
    })
}

/// Finds the best venue alias in `text`.
///
/// Aliases match case-insensitively as whole words, except that a directly
/// attached year (`acl2022`, `#acl2020nlp`) is allowed. Among several hits the
/// longest alias wins, then the earliest. The workshop flag comes from the
/// venue record, or is forced on by the word "workshop" nearby.
pub fn match_venue(text: &str, venues: &[VenueRecord]) -> Option<VenueMatch> {
    // ASCII lowercasing keeps byte offsets aligned with `text`.
    let lower = text.to_ascii_lowercase();
    let mut best: Option<(usize, usize, &VenueRecord, &String, Option<i32>)> = None;

    for venue in venues {
        for alias in &venue.aliases {
            let needle = alias.to_ascii_lowercase();
            if needle.is_empty() {
                continue;
            }
            let alias_len = needle.chars().count();
            for (start, _) in lower.match_indices(&needle) {
                if char_before(&lower, start).is_some_and(char::is_alphanumeric) {
                    continue;
                }
                let Some(year) = trailing(&lower, start + needle.len()) else {
                    continue;
                };
                let better = match &best {
                    None => true,
                    Some((blen, bstart, bvenue, _, _)) => {
                        (alias_len, std::cmp::Reverse(start), std::cmp::Reverse(&venue.key))
                            > (*blen, std::cmp::Reverse(*bstart), std::cmp::Reverse(&bvenue.key))
                    }
                };
                if better {
                    best = Some((alias_len, start, venue, alias, year));
                }
            }
        }
    }

    best.map(|(_, start, venue, alias, year)| {
        let span = (start, start + alias.len());
        VenueMatch {
            venue_key: venue.key.clone(),
            matched_alias: alias.clone(),
            year,
            is_workshop: venue.is_workshop || near_workshop(&lower, span),
            span,
        }
    })
}
