use std::sync::LazyLock;

use regex::Regex;

use super::TopicLabel;
use crate::ingest::normalize::url_spans;
use crate::ingest::Tweet;

/// Phrase rules, checked in declaration order; the first match decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    CallForPapers,
    Career,
    NewPaperWithUrl,
    TalkWithTime,
    ReadingMaterial,
}

impl Rule {
    pub const PRIORITY: [Rule; 5] = [
        Rule::CallForPapers,
        Rule::Career,
        Rule::NewPaperWithUrl,
        Rule::TalkWithTime,
        Rule::ReadingMaterial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::CallForPapers => "cfp-phrase",
            Rule::Career => "career-phrase",
            Rule::NewPaperWithUrl => "new-paper-with-url",
            Rule::TalkWithTime => "talk-with-time",
            Rule::ReadingMaterial => "reading-material",
        }
    }

    /// 1-based position in the priority order.
    pub fn number(self) -> usize {
        Self::PRIORITY.iter().position(|r| *r == self).unwrap() + 1
    }

    pub fn label(self) -> TopicLabel {
        match self {
            Rule::CallForPapers => TopicLabel::CallForPapers,
            Rule::Career => TopicLabel::CareerOpportunity,
            Rule::NewPaperWithUrl => TopicLabel::NewPaper,
            Rule::TalkWithTime => TopicLabel::TalkSeminar,
            Rule::ReadingMaterial => TopicLabel::ReadingMaterial,
        }
    }

    fn matches(self, text: &str, has_url: bool) -> bool {
        match self {
            Rule::CallForPapers => CFP_RE.is_match(text),
            Rule::Career => CAREER_RE.is_match(text),
            Rule::NewPaperWithUrl => has_url && NEW_PAPER_RE.is_match(text),
            Rule::TalkWithTime => TALK_RE.is_match(text) && TIME_RE.is_match(text),
            Rule::ReadingMaterial => READING_RE.is_match(text),
        }
    }
}

fn re(s: &str) -> Regex {
    Regex::new(s).unwrap()
}

static CFP_RE: LazyLock<Regex> =
    LazyLock::new(|| re(r"\b(call for papers|cfps?|submission deadlines?)\b"));
static CAREER_RE: LazyLock<Regex> =
    LazyLock::new(|| re(r"\b(we are hiring|phd positions?|internships?|postdocs?)\b"));
static NEW_PAPER_RE: LazyLock<Regex> =
    LazyLock::new(|| re(r"\b(our new paper|new paper|accepted at)\b"));
static TALK_RE: LazyLock<Regex> = LazyLock::new(|| re(r"\b(talks?|seminars?|keynotes?)\b"));
// clock times, "3pm", and relative day words
static TIME_RE: LazyLock<Regex> = LazyLock::new(|| {
    re(r"\b(\d{1,2}:\d{2}|\d{1,2}(:\d{2})?\s?(am|pm)|today|tomorrow|tonight|monday|tuesday|wednesday|thursday|friday|saturday|sunday)\b")
});
static READING_RE: LazyLock<Regex> =
    LazyLock::new(|| re(r"\b(tutorials?|courses?|slides|blog posts?)\b"));

fn rule_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for (s, e) in url_spans(text) {
        out.push_str(&text[last..s]);
        out.push(' ');
        last = e;
    }
    out.push_str(&text[last..]);
    out.to_lowercase()
}

pub(crate) fn first_rule(text: &str, has_url: bool) -> Option<Rule> {
    let text = rule_text(text);
    Rule::PRIORITY.into_iter().find(|r| r.matches(&text, has_url))
}

/// The first rule that fires on this tweet, with its label.
pub fn apply_rules(tweet: &Tweet) -> Option<(TopicLabel, Rule)> {
    first_rule(&tweet.text, !tweet.urls.is_empty()).map(|r| (r.label(), r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fire(text: &str) -> Option<Rule> {
        first_rule(text, text.contains("http"))
    }

    #[test]
    fn examples() {
        assert_eq!(fire("Call for papers: SIGDIAL 2022"), Some(Rule::CallForPapers));
        assert_eq!(Rule::CallForPapers.number(), 1);
        assert_eq!(fire("random musings about coffee"), None);
        assert_eq!(fire("We are hiring! Also call for papers!"), Some(Rule::CallForPapers));
    }

    #[test]
    fn each_rule() {
        assert_eq!(fire("#CFP for the workshop is out"), Some(Rule::CallForPapers));
        assert_eq!(fire("Two PhD positions open in Edinburgh"), Some(Rule::Career));
        assert_eq!(fire("Our new paper on probing https://arxiv.org/abs/1"), Some(Rule::NewPaperWithUrl));
        assert_eq!(fire("Our new paper on probing, link soon"), None);
        assert_eq!(fire("Keynote by Kathy McKeown at 10:00 UTC"), Some(Rule::TalkWithTime));
        assert_eq!(fire("Great talk yesterday"), None);
        assert_eq!(fire("Seminar tomorrow on parsing"), Some(Rule::TalkWithTime));
        assert_eq!(fire("Slides from my tutorial are online"), Some(Rule::ReadingMaterial));
    }

    #[test]
    fn urls_do_not_trigger() {
        assert_eq!(fire("look https://example.com/slides/talk"), None);
    }
}
