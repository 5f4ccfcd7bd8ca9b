use std::collections::BTreeMap;

use chrono::{DateTime, Duration, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use super::CfpEntry;

/// Deadlines split into those still open and those already passed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timeline {
    /// Ascending by `(deadline, venue_key)`.
    pub upcoming: Vec<CfpEntry>,
    /// Most recent deadline first.
    pub past: Vec<CfpEntry>,
}

impl Timeline {
    pub fn is_empty(&self) -> bool {
        self.upcoming.is_empty() && self.past.is_empty()
    }

    /// Upcoming entries followed by past ones.
    pub fn entries(&self) -> impl Iterator<Item = &CfpEntry> {
        self.upcoming.iter().chain(&self.past)
    }
}

/// Anywhere-on-Earth: a deadline date stays open until it has ended at UTC−12.
pub fn deadline_is_open(deadline: NaiveDate, now: DateTime<Utc>) -> bool {
    deadline >= (now - Duration::hours(12)).date_naive()
}

pub fn build_timeline(entries: &[CfpEntry], now: DateTime<Utc>) -> Timeline {
    // last write wins per (venue, deadline)
    let mut latest: BTreeMap<(&str, NaiveDate), &CfpEntry> = BTreeMap::new();
    for e in entries {
        latest
            .entry((e.venue_key.as_str(), e.deadline))
            .and_modify(|cur| {
                if (e.extracted_at, &e.tweet_id) > (cur.extracted_at, &cur.tweet_id) {
                    *cur = e;
                }
            })
            .or_insert(e);
    }

    let (mut upcoming, mut past): (Vec<CfpEntry>, Vec<CfpEntry>) = latest
        .into_values()
        .cloned()
        .partition(|e| deadline_is_open(e.deadline, now));
    upcoming.sort_by(|a, b| (a.deadline, &a.venue_key).cmp(&(b.deadline, &b.venue_key)));
    past.sort_by(|a, b| b.deadline.cmp(&a.deadline).then_with(|| a.venue_key.cmp(&b.venue_key)));
    Timeline { upcoming, past }
}
