mod common;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use chrono::{DateTime, Duration, NaiveDate, NaiveTime, TimeZone, Utc};
use common::fixture::fixture_config;
use nlpulse::config::{LiveConference, ScheduleConfig};
use nlpulse::pipeline::{Pipeline, PipelineError, RunReport};
use nlpulse::schedule::{Clock, Job, RunOutcome, Scheduler, VirtualClock};
use nlpulse::store::Store;

fn at(d: u32, h: u32, m: u32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2020, 7, d, h, m, 0).unwrap()
}

fn acl_live() -> ScheduleConfig {
    ScheduleConfig {
        daily_at: NaiveTime::from_hms_opt(9, 30, 0).unwrap(),
        live_conferences: vec![LiveConference {
            tag: "acl2020".into(),
            start: NaiveDate::from_ymd_opt(2020, 7, 5).unwrap(),
            end: NaiveDate::from_ymd_opt(2020, 7, 10).unwrap(),
        }],
        live_interval_secs: 3600,
        enabled: true,
    }
}

/// Records the times it was run at; optionally holds the clock for a while.
struct Probe<'c> {
    clock: &'c VirtualClock,
    hold: Duration,
    hold_at: Option<DateTime<Utc>>,
    calls: Mutex<Vec<DateTime<Utc>>>,
}

impl<'c> Probe<'c> {
    fn new(clock: &'c VirtualClock) -> Self {
        Self {
            clock,
            hold: Duration::zero(),
            hold_at: None,
            calls: Mutex::new(vec![]),
        }
    }
}

impl Job for Probe<'_> {
    fn run(&self, now: DateTime<Utc>) -> Result<RunReport, PipelineError> {
        self.calls.lock().unwrap().push(now);
        if self.hold_at.is_none_or(|t| t == now) {
            self.clock.advance(self.hold);
        }
        Ok(RunReport::default())
    }
}

#[test]
fn one_run_per_day_outside_conferences() {
    let clock = VirtualClock::new(at(20, 0, 0));
    let probe = Probe::new(&clock);
    let s = Scheduler::new(acl_live(), &clock);
    let log = s.run_until(&probe, at(23, 0, 0));
    assert_eq!(log.runs.len(), 3);
    assert_eq!(log.daily_runs(), 3);
    assert_eq!(log.live_runs(), 0);
    assert_eq!(*probe.calls.lock().unwrap(), [at(20, 9, 30), at(21, 9, 30), at(22, 9, 30)]);
}

#[test]
fn six_hour_live_window() {
    let clock = VirtualClock::new(at(6, 6, 0));
    let probe = Probe::new(&clock);
    let s = Scheduler::new(acl_live(), &clock);
    let log = s.run_until(&probe, at(6, 12, 0));
    assert_eq!(log.daily_runs(), 1);
    assert_eq!(log.live_runs(), 6);
    assert_eq!(log.runs.len(), 7);
    assert!(log.skipped.is_empty());
    let calls = probe.calls.lock().unwrap();
    let expected: Vec<_> = [(7, 0), (8, 0), (9, 0), (9, 30), (10, 0), (11, 0), (12, 0)]
        .iter()
        .map(|(h, m)| at(6, *h, *m))
        .collect();
    assert_eq!(*calls, expected);
}

#[test]
fn overlapping_tick_is_skipped_not_queued() {
    let clock = VirtualClock::new(at(6, 6, 0));
    let mut probe = Probe::new(&clock);
    // the 07:00 run lasts 90 minutes and swallows the 08:00 tick
    probe.hold = Duration::minutes(90);
    probe.hold_at = Some(at(6, 7, 0));
    let s = Scheduler::new(acl_live(), &clock);
    let log = s.run_until(&probe, at(6, 12, 0));
    assert_eq!(log.skipped.len(), 1);
    assert_eq!(log.skipped[0].at, at(6, 8, 0));
    assert_eq!(log.runs.len(), 6);
    let calls = probe.calls.lock().unwrap();
    assert!(!calls.contains(&at(6, 8, 0)));
    assert_eq!(calls[1], at(6, 9, 0));
    assert_eq!(log.runs[0].finished - log.runs[0].started, Duration::minutes(90));
}

struct Flaky(AtomicUsize);

impl Job for Flaky {
    fn run(&self, _: DateTime<Utc>) -> Result<RunReport, PipelineError> {
        match self.0.fetch_add(1, Ordering::SeqCst) {
            0 => Err(PipelineError::Busy),
            1 => Err(PipelineError::Source(nlpulse::ingest::SourceError::Io {
                path: "dump.jsonl".into(),
                source: std::io::Error::other("disk on fire"),
            })),
            _ => Ok(RunReport::default()),
        }
    }
}

#[test]
fn failures_are_logged_and_the_loop_continues() {
    let clock = VirtualClock::new(at(20, 0, 0));
    let s = Scheduler::new(acl_live(), &clock);
    let log = s.run_until(&Flaky(AtomicUsize::new(0)), at(24, 0, 0));
    assert_eq!(log.skipped.len(), 1);
    assert_eq!(log.failures(), 1);
    assert_eq!(log.runs.len(), 3);
    assert!(matches!(log.runs[0].outcome, RunOutcome::Failed(ref m) if m.contains("disk on fire")));
    assert!(matches!(log.runs[2].outcome, RunOutcome::Ok(_)));
}

#[test]
fn drives_the_real_pipeline() {
    let config = fixture_config();
    let store = Arc::new(Store::in_memory());
    let pipeline = Pipeline::from_config(&config, store.clone()).unwrap();
    let clock = VirtualClock::new(at(7, 6, 0));
    let s = Scheduler::new(config.schedule.clone(), &clock);
    let log = s.run_until(&pipeline, at(7, 10, 0));
    // 07:00, 08:00, 09:00, 09:30 daily, 10:00
    assert_eq!(log.runs.len(), 5);
    let reports: Vec<_> = log
        .runs
        .iter()
        .map(|r| match &r.outcome {
            RunOutcome::Ok(rep) => rep.clone(),
            RunOutcome::Failed(e) => panic!("{e}"),
        })
        .collect();
    assert_eq!(reports[0].inserted, 38);
    assert!(reports[1..].iter().all(|r| r.inserted == 0 && r.labeled == 0));
    assert_eq!(store.snapshot().version(), 5);
    assert_eq!(store.snapshot().derived().computed_at, Some(at(7, 10, 0)));
    assert_eq!(clock.now(), at(7, 10, 0));
}
