//! Links tweets to anthology papers by canonical URL and by quoted title.

mod matching;
mod url;

pub use self::url::{normalize_url, AnthologyId, CanonicalUrl, UrlError};
pub use matching::{
    link_corpus, match_by_title, match_by_url, normalize_title, title_qualifies, write_links, LinkMethod,
    LinkSet, PaperIndex, PaperLink, MIN_TITLE_CHARS, MIN_TITLE_TOKENS,
};
