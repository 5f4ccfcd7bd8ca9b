//! Writes seeded synthetic data.
//!
//! ```text
//! cargo run --example synthetic_corpus -- labeled out.jsonl [per_class] [seed]
//! cargo run --example synthetic_corpus -- corpus out_dir [tweets] [papers] [seed]
//! ```
//!
//! `labeled` produces a topic-balanced training file; `corpus` produces
//! `tweets.jsonl`, `venues.json` and `papers.json` for a pipeline run.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use nlpulse::classify::write_labeled;
use nlpulse::synth::{synthetic_corpus, template_corpus};

fn arg<T: std::str::FromStr>(args: &[String], i: usize, default: T) -> T {
    args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("labeled") => {
            let out = PathBuf::from(args.get(1).ok_or("missing output path")?);
            let corpus = template_corpus(arg(&args, 2, 100), arg(&args, 3, 2020));
            write_labeled(BufWriter::new(File::create(&out)?), &corpus)?;
            eprintln!("wrote {} examples to {}", corpus.len(), out.display());
        }
        Some("corpus") => {
            let dir = PathBuf::from(args.get(1).ok_or("missing output dir")?);
            let c = synthetic_corpus(arg(&args, 2, 5000), arg(&args, 3, 50), arg(&args, 4, 7));
            c.write(&dir)?;
            eprintln!("wrote {} tweets, {} papers to {}", c.tweets.len(), c.papers.len(), dir.display());
        }
        _ => return Err("usage: synthetic_corpus labeled|corpus <path> ...".into()),
    }
    Ok(())
}
