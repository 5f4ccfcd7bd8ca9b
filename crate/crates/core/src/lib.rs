//! Curation and analytics for research-community tweets.
//!
//! The pipeline ingests tweet dumps and anthology metadata, classifies tweets
//! into six discussion topics, extracts call-for-papers deadlines, links
//! tweets to papers, aggregates conference statistics, and commits everything
//! to a versioned snapshot store served over a JSON API.

pub mod analytics;
pub mod api;
pub mod cfp;
pub mod classify;
pub mod cli;
pub mod config;
pub mod ingest;
pub mod linker;
pub mod pipeline;
pub mod schedule;
pub mod store;
pub mod synth;
