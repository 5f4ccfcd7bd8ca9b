use std::fmt::Write;

use chrono::Duration;

use super::Timeline;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            ';' => out.push_str("\\;"),
            ',' => out.push_str("\\,"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out
}

/// Appends a content line folded at 75 octets.
fn push_line(out: &mut String, line: &str) {
    let mut width = 0;
    for c in line.chars() {
        let len = c.len_utf8();
        if width + len > 75 {
            out.push_str("\r\n ");
            width = 1;
        }
        out.push(c);
        width += len;
    }
    out.push_str("\r\n");
}

/// One all-day event per upcoming deadline. UIDs are `venue_key-YYYYMMDD`.
pub fn timeline_to_ics(timeline: &Timeline) -> String {
    let mut out = String::new();
    push_line(&mut out, "BEGIN:VCALENDAR");
    push_line(&mut out, "VERSION:2.0");
    push_line(&mut out, "PRODID:-//nlpulse//cfp timeline//EN");
    push_line(&mut out, "CALSCALE:GREGORIAN");
    for e in &timeline.upcoming {
        let day = e.deadline.format("%Y%m%d");
        let next = (e.deadline + Duration::days(1)).format("%Y%m%d");
        let mut summary = format!("{} submission deadline", e.venue_display);
        if e.is_workshop {
            summary.push_str(" (workshop)");
        }
        push_line(&mut out, "BEGIN:VEVENT");
        push_line(&mut out, &format!("UID:{}-{day}", e.venue_key));
        push_line(&mut out, &format!("DTSTAMP:{}", e.extracted_at.format("%Y%m%dT%H%M%SZ")));
        push_line(&mut out, &format!("DTSTART;VALUE=DATE:{day}"));
        push_line(&mut out, &format!("DTEND;VALUE=DATE:{next}"));
        push_line(&mut out, &format!("SUMMARY:{}", escape(&summary)));
        if let Some(site) = &e.website {
            push_line(&mut out, &format!("URL:{site}"));
        }
        let mut desc = String::new();
        let _ = write!(desc, "Announced in tweet {}", e.tweet_id);
        push_line(&mut out, &format!("DESCRIPTION:{}", escape(&desc)));
        push_line(&mut out, "END:VEVENT");
    }
    push_line(&mut out, "END:VCALENDAR");
    out
}
