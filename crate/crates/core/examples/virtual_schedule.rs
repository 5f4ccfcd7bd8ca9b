//! Runs the refresh scheduler against a virtual clock across a live
//! conference day. One run is slow, so the tick after it is skipped.
//!
//! ```text
//! cargo run --example virtual_schedule
//! ```

use chrono::{DateTime, Duration, NaiveDate, NaiveTime, TimeZone, Utc};
use nlpulse::config::{LiveConference, ScheduleConfig};
use nlpulse::pipeline::{PipelineError, RunReport};
use nlpulse::schedule::{Job, Scheduler, VirtualClock};

struct Demo<'c>(&'c VirtualClock);

impl Job for Demo<'_> {
    fn run(&self, now: DateTime<Utc>) -> Result<RunReport, PipelineError> {
        if now.format("%H:%M").to_string() == "14:00" {
            // pretend the pull took 75 minutes
            self.0.advance(Duration::minutes(75));
        }
        Ok(RunReport { pulled: 1, ..RunReport::default() })
    }
}

fn main() {
    let config = ScheduleConfig {
        daily_at: NaiveTime::from_hms_opt(9, 30, 0).unwrap(),
        live_conferences: vec![LiveConference {
            tag: "acl2020".into(),
            start: NaiveDate::from_ymd_opt(2020, 7, 5).unwrap(),
            end: NaiveDate::from_ymd_opt(2020, 7, 10).unwrap(),
        }],
        live_interval_secs: 3600,
        enabled: true,
    };
    let start = Utc.with_ymd_and_hms(2020, 7, 6, 0, 0, 0).unwrap();
    let clock = VirtualClock::new(start);
    let log = Scheduler::new(config, &clock).run_until(&Demo(&clock), start + Duration::days(1));
    for r in &log.runs {
        let kind = if r.tick.daily { "daily" } else { "live" };
        println!("{}  {kind:<5} took {} min", r.tick.at.format("%H:%M"), (r.finished - r.started).num_minutes());
    }
    for s in &log.skipped {
        println!("{}  skipped", s.at.format("%H:%M"));
    }
    println!("{} daily, {} live, {} skipped", log.daily_runs(), log.live_runs(), log.skipped.len());
}
