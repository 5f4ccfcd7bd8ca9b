//! Call-for-papers extraction: venue matching, deadline date grammar, and
//! the deadline timeline with its iCalendar export.

mod dates;
mod entry;
mod ics;
mod timeline;
mod venue;

pub use dates::{extract_dates, DateMention, DatePattern};
pub use entry::{build_cfp_entry, CfpEntry, CfpSkip};
pub use ics::timeline_to_ics;
pub use timeline::{build_timeline, deadline_is_open, Timeline};
pub use venue::{match_venue, VenueMatch};
