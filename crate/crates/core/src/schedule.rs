//! Daily and live-conference run scheduling against a pluggable clock.
//!
//! Ticks fire at `daily_at` every day and, while inside a live conference's
//! date range, every `live_interval` counted from the conference's first
//! midnight. Ticks that coincide collapse into one run. A tick whose time
//! passes while a run is still in progress is skipped, not queued.

use std::sync::Mutex;

use chrono::{DateTime, Duration, NaiveTime, Utc};
use serde::Serialize;

use crate::config::ScheduleConfig;
use crate::pipeline::{Pipeline, PipelineError, RunReport};

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
    /// Blocks until `t`; returns immediately when `t` has passed.
    fn sleep_until(&self, t: DateTime<Utc>);
}

impl<C: Clock + ?Sized> Clock for &C {
    fn now(&self) -> DateTime<Utc> {
        (**self).now()
    }

    fn sleep_until(&self, t: DateTime<Utc>) {
        (**self).sleep_until(t)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }

    fn sleep_until(&self, t: DateTime<Utc>) {
        if let Ok(d) = (t - Utc::now()).to_std() {
            std::thread::sleep(d);
        }
    }
}

/// A clock that only moves when told to. Sleeping jumps straight to the
/// wake-up time.
#[derive(Debug)]
pub struct VirtualClock {
    now: Mutex<DateTime<Utc>>,
}

impl VirtualClock {
    pub fn new(start: DateTime<Utc>) -> Self {
        Self { now: Mutex::new(start) }
    }

    pub fn advance(&self, d: Duration) {
        *self.now.lock().unwrap() += d;
    }
}

impl Clock for VirtualClock {
    fn now(&self) -> DateTime<Utc> {
        *self.now.lock().unwrap()
    }

    fn sleep_until(&self, t: DateTime<Utc>) {
        let mut now = self.now.lock().unwrap();
        if t > *now {
            *now = t;
        }
    }
}

/// The work a tick triggers.
pub trait Job {
    fn run(&self, now: DateTime<Utc>) -> Result<RunReport, PipelineError>;
}

impl Job for Pipeline {
    fn run(&self, now: DateTime<Utc>) -> Result<RunReport, PipelineError> {
        Pipeline::run(self, now)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Tick {
    pub at: DateTime<Utc>,
    pub daily: bool,
    pub live: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RunOutcome {
    Ok(RunReport),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub tick: Tick,
    pub started: DateTime<Utc>,
    pub finished: DateTime<Utc>,
    pub outcome: RunOutcome,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScheduleLog {
    pub runs: Vec<RunRecord>,
    /// Ticks dropped because a run was in flight.
    pub skipped: Vec<Tick>,
}

impl ScheduleLog {
    pub fn daily_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.tick.daily).count()
    }

    pub fn live_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.tick.live).count()
    }

    pub fn failures(&self) -> usize {
        self.runs.iter().filter(|r| matches!(r.outcome, RunOutcome::Failed(_))).count()
    }
}

pub struct Scheduler<C: Clock> {
    config: ScheduleConfig,
    clock: C,
}

impl<C: Clock> Scheduler<C> {
    pub fn new(config: ScheduleConfig, clock: C) -> Self {
        Self { config, clock }
    }

    pub fn clock(&self) -> &C {
        &self.clock
    }

    fn next_daily(&self, from: DateTime<Utc>) -> DateTime<Utc> {
        let today = from.date_naive().and_time(self.config.daily_at).and_utc();
        if today >= from {
            today
        } else {
            today + Duration::days(1)
        }
    }

    fn next_live(&self, from: DateTime<Utc>) -> Option<DateTime<Utc>> {
        let step = self.config.live_interval_secs.max(60) as i64;
        self.config
            .live_conferences
            .iter()
            .filter_map(|c| {
                let start = c.start.and_time(NaiveTime::MIN).and_utc();
                let end = (c.end + Duration::days(1)).and_time(NaiveTime::MIN).and_utc();
                let t = if from <= start {
                    start
                } else {
                    let n = ((from - start).num_seconds() + step - 1) / step;
                    start + Duration::seconds(n * step)
                };
                (t < end).then_some(t)
            })
            .min()
    }

    /// The first tick at or after `from`.
    pub fn next_tick(&self, from: DateTime<Utc>) -> Tick {
        let daily = self.next_daily(from);
        match self.next_live(from) {
            Some(live) if live < daily => Tick { at: live, daily: false, live: true },
            Some(live) if live == daily => Tick { at: daily, daily: true, live: true },
            _ => Tick { at: daily, daily: true, live: false },
        }
    }

    /// Runs every tick in `(clock.now(), end]`.
    pub fn run_until(&self, job: &dyn Job, end: DateTime<Utc>) -> ScheduleLog {
        let mut log = ScheduleLog::default();
        let mut cursor = self.clock.now() + Duration::seconds(1);
        loop {
            let tick = self.next_tick(cursor);
            if tick.at > end {
                break;
            }
            self.step(job, tick, &mut log);
            cursor = self.clock.now().max(tick.at + Duration::seconds(1));
        }
        log
    }

    /// Runs forever.
    pub fn run_forever(&self, job: &dyn Job) -> ! {
        let mut log = ScheduleLog::default();
        let mut cursor = self.clock.now();
        loop {
            let tick = self.next_tick(cursor);
            self.step(job, tick, &mut log);
            cursor = self.clock.now().max(tick.at + Duration::seconds(1));
            // keep memory flat; the log is for tests
            log.runs.clear();
            log.skipped.clear();
        }
    }

    fn step(&self, job: &dyn Job, tick: Tick, log: &mut ScheduleLog) {
        self.clock.sleep_until(tick.at);
        let started = self.clock.now();
        let outcome = match job.run(started) {
            Ok(report) => {
                tracing::info!(
                    at = %tick.at, daily = tick.daily, live = tick.live,
                    version = report.version, inserted = report.inserted, updated = report.updated,
                    labeled = report.labeled, linked = report.linked, cfp = report.cfp_entries,
                    "pipeline run finished"
                );
                RunOutcome::Ok(report)
            }
            Err(PipelineError::Busy) => {
                tracing::warn!(at = %tick.at, "tick skipped: run already in progress");
                log.skipped.push(tick);
                return;
            }
            Err(e) => {
                tracing::error!(at = %tick.at, error = %e, "pipeline run failed");
                RunOutcome::Failed(e.to_string())
            }
        };
        let finished = self.clock.now();
        log.runs.push(RunRecord {
            tick,
            started,
            finished,
            outcome,
        });
        // ticks that came due while the run was in flight
        let mut t = self.next_tick(tick.at + Duration::seconds(1));
        while t.at < finished {
            tracing::warn!(at = %t.at, "tick skipped: run still in flight");
            log.skipped.push(t);
            t = self.next_tick(t.at + Duration::seconds(1));
        }
    }
}

/// Runs the pipeline on the configured schedule with the system clock.
pub fn run_schedule(config: &ScheduleConfig, pipeline: &Pipeline) -> ! {
    Scheduler::new(config.clone(), SystemClock).run_forever(pipeline)
}
