use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use aho_corasick::AhoCorasick;
use serde::{Deserialize, Serialize};

use super::{normalize_url, AnthologyId};
use crate::ingest::{PaperRecord, Tweet};

pub const MIN_TITLE_TOKENS: usize = 4;
pub const MIN_TITLE_CHARS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkMethod {
    Url,
    Title,
}

/// Evidence that a tweet discusses a paper. This is the payload a paper page
/// embeds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PaperLink {
    pub paper_id: String,
    pub tweet_id: String,
    pub method: LinkMethod,
    /// The tweet URL for url links, the normalized title for title links.
    pub evidence: String,
}

/// Lowercase, punctuation to spaces, whitespace collapsed.
pub fn normalize_title(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect::<String>()
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Short titles never match by title.
pub fn title_qualifies(normalized: &str) -> bool {
    normalized.split(' ').count() >= MIN_TITLE_TOKENS && normalized.chars().count() >= MIN_TITLE_CHARS
}

/// Lookup tables over the paper registry.
pub struct PaperIndex {
    papers: BTreeMap<String, PaperRecord>,
    by_url: HashMap<String, BTreeSet<String>>,
    by_anthology: HashMap<AnthologyId, BTreeSet<String>>,
    titles: Vec<(String, Vec<String>)>,
    title_matcher: Option<AhoCorasick>,
}

impl PaperIndex {
    pub fn build(papers: &[PaperRecord]) -> Self {
        let mut by_url: HashMap<String, BTreeSet<String>> = HashMap::new();
        let mut by_anthology: HashMap<AnthologyId, BTreeSet<String>> = HashMap::new();
        let mut titles: BTreeMap<String, Vec<String>> = BTreeMap::new();

        for p in papers {
            if let Ok(c) = normalize_url(&p.url) {
                by_url.entry(c.canonical).or_default().insert(p.paper_id.clone());
                if let Some(id) = c.anthology_id {
                    by_anthology.entry(id).or_default().insert(p.paper_id.clone());
                }
            }
            if let Some(id) = AnthologyId::parse(&p.paper_id) {
                by_anthology.entry(id).or_default().insert(p.paper_id.clone());
            }
            let title = normalize_title(&p.title);
            if title_qualifies(&title) {
                titles.entry(title).or_default().push(p.paper_id.clone());
            }
        }

        let titles: Vec<(String, Vec<String>)> = titles.into_iter().collect();
        let title_matcher = (!titles.is_empty()).then(|| {
            AhoCorasick::new(titles.iter().map(|(t, _)| format!(" {t} "))).expect("title automaton")
        });
        Self {
            papers: papers.iter().map(|p| (p.paper_id.clone(), p.clone())).collect(),
            by_url,
            by_anthology,
            titles,
            title_matcher,
        }
    }

    pub fn get(&self, paper_id: &str) -> Option<&PaperRecord> {
        self.papers.get(paper_id)
    }

    pub fn papers(&self) -> impl Iterator<Item = &PaperRecord> {
        self.papers.values()
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }
}

/// Papers whose canonical URL or anthology id equals one of the tweet's URLs.
pub fn match_by_url(tweet: &Tweet, index: &PaperIndex) -> Vec<PaperLink> {
    let mut found: BTreeMap<&str, &str> = BTreeMap::new();
    for raw in &tweet.urls {
        let Ok(c) = normalize_url(raw) else { continue };
        let by_id = c.anthology_id.as_ref().and_then(|id| index.by_anthology.get(id));
        for paper_id in index.by_url.get(&c.canonical).into_iter().chain(by_id).flatten() {
            found.entry(paper_id).or_insert(raw);
        }
    }
    found
        .into_iter()
        .map(|(paper_id, raw)| PaperLink {
            paper_id: paper_id.to_string(),
            tweet_id: tweet.id.clone(),
            method: LinkMethod::Url,
            evidence: raw.to_string(),
        })
        .collect()
}

/// Papers whose normalized title appears, on token boundaries, in the
/// normalized tweet text.
pub fn match_by_title(tweet: &Tweet, index: &PaperIndex) -> Vec<PaperLink> {
    let Some(matcher) = &index.title_matcher else {
        return Vec::new();
    };
    let text = format!(" {} ", normalize_title(&tweet.text));
    let mut found: BTreeMap<&str, &str> = BTreeMap::new();
    for m in matcher.find_overlapping_iter(&text) {
        let (title, ids) = &index.titles[m.pattern().as_usize()];
        for id in ids {
            found.insert(id, title);
        }
    }
    found
        .into_iter()
        .map(|(paper_id, title)| PaperLink {
            paper_id: paper_id.to_string(),
            tweet_id: tweet.id.clone(),
            method: LinkMethod::Title,
            evidence: title.to_string(),
        })
        .collect()
}

/// All links of a corpus, one per (tweet, paper), with the inverse index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkSet {
    /// Ordered by `(paper_id, tweet_id)`.
    pub links: Vec<PaperLink>,
    /// Paper id to sorted tweet ids.
    pub by_paper: BTreeMap<String, Vec<String>>,
}

impl LinkSet {
    pub fn from_links(links: impl IntoIterator<Item = PaperLink>) -> Self {
        // url evidence wins over title evidence for the same pair
        let mut best: BTreeMap<(String, String), PaperLink> = BTreeMap::new();
        for link in links {
            let key = (link.paper_id.clone(), link.tweet_id.clone());
            match best.get(&key) {
                Some(cur) if (cur.method, &cur.evidence) <= (link.method, &link.evidence) => {}
                _ => {
                    best.insert(key, link);
                }
            }
        }
        let mut by_paper: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (paper, tweet) in best.keys() {
            by_paper.entry(paper.clone()).or_default().push(tweet.clone());
        }
        LinkSet {
            links: best.into_values().collect(),
            by_paper,
        }
    }

    pub fn unique_papers(&self) -> usize {
        self.by_paper.len()
    }
}

pub fn link_corpus<'a>(tweets: impl IntoIterator<Item = &'a Tweet>, index: &PaperIndex) -> LinkSet {
    LinkSet::from_links(
        tweets
            .into_iter()
            .flat_map(|t| match_by_url(t, index).into_iter().chain(match_by_title(t, index))),
    )
}

pub fn write_links<W: Write>(mut w: W, links: &[PaperLink]) -> std::io::Result<()> {
    for link in links {
        serde_json::to_writer(&mut w, link)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
