use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed url {0:?}")]
pub struct UrlError(pub String);

static MODERN_ID: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\d{4}\.[a-z0-9]+-[a-z0-9]+\.\d+$").unwrap());
static LEGACY_ID: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[A-Z]\d{2}-\d{4}$").unwrap());
static ARXIV_VERSION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"v\d+$").unwrap());

/// An ACL Anthology paper id: `2020.acl-main.442` or legacy `P19-1001`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AnthologyId(String);

impl AnthologyId {
    /// Accepts either id shape, case-insensitively, and stores the
    /// conventional casing.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        if MODERN_ID.is_match(&lower) {
            return Some(Self(lower));
        }
        let upper = s.to_ascii_uppercase();
        LEGACY_ID.is_match(&upper).then_some(Self(upper))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AnthologyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for AnthologyId {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Self::parse(&s).ok_or_else(|| format!("not an anthology id: {s:?}"))
    }
}

impl From<AnthologyId> for String {
    fn from(id: AnthologyId) -> Self {
        id.0
    }
}

/// A URL reduced to `host/path[?query]`, plus the anthology id it names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalUrl {
    pub canonical: String,
    pub anthology_id: Option<AnthologyId>,
}

fn anthology_id_in(path: &str) -> Option<AnthologyId> {
    path.split('/')
        .filter(|s| !s.is_empty())
        .filter_map(|seg| {
            let seg = seg.strip_suffix(".pdf").or_else(|| seg.strip_suffix(".bib")).unwrap_or(seg);
            AnthologyId::parse(seg)
        })
        .next_back()
}

fn arxiv_path(path: &str) -> Option<String> {
    let rest = path.strip_prefix("/abs/").or_else(|| path.strip_prefix("/pdf/"))?;
    let rest = rest.strip_suffix(".pdf").unwrap_or(rest);
    let id = ARXIV_VERSION.replace(rest, "");
    (!id.is_empty()).then(|| format!("/abs/{id}"))
}

/// Canonical form used for all URL comparisons.
///
/// Drops scheme, `www.`, fragment, `utm_*` parameters and trailing slashes;
/// lowercases the host; folds `aclweb.org/anthology/…` into
/// `aclanthology.org/…`; reduces arXiv abs/pdf links to the unversioned abs
/// page. Scheme-less input is accepted, so the function is idempotent.
pub fn normalize_url(raw: &str) -> Result<CanonicalUrl, UrlError> {
    let malformed = || UrlError(raw.to_string());
    let s = raw.trim();
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(malformed());
    }
    let with_scheme = match s.find("://") {
        Some(i) => {
            let scheme = s[..i].to_ascii_lowercase();
            if scheme != "http" && scheme != "https" {
                return Err(malformed());
            }
            s.to_string()
        }
        None => format!("http://{s}"),
    };
    let url = Url::parse(&with_scheme).map_err(|_| malformed())?;
    let host = url.host_str().filter(|h| !h.is_empty()).ok_or_else(malformed)?;
    let mut host = host.strip_prefix("www.").unwrap_or(host).to_string();
    let mut path = url.path().trim_end_matches('/').to_string();

    if host == "aclweb.org" && (path == "/anthology" || path.starts_with("/anthology/")) {
        host = "aclanthology.org".into();
        path = path["/anthology".len()..].to_string();
    }

    let mut anthology_id = None;
    if host == "aclanthology.org" {
        anthology_id = anthology_id_in(&path);
        if let Some(id) = &anthology_id {
            path = format!("/{id}");
        }
    } else if host == "arxiv.org" || host == "export.arxiv.org" {
        host = "arxiv.org".into();
        if let Some(p) = arxiv_path(&path) {
            path = p.trim_end_matches('/').to_string();
        }
    }

    if let Some(port) = url.port() {
        host = format!("{host}:{port}");
    }

    let query: Vec<&str> = url
        .query()
        .unwrap_or("")
        .split('&')
        .filter(|kv| !kv.is_empty())
        .filter(|kv| {
            let key = kv.split('=').next().unwrap_or("");
            !key.to_ascii_lowercase().starts_with("utm_")
        })
        .collect();

    let mut canonical = host + &path;
    if !query.is_empty() {
        canonical.push('?');
        canonical.push_str(&query.join("&"));
    }
    Ok(CanonicalUrl {
        canonical,
        anthology_id,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn anthology_url_from_coverage_table() {
        let c = normalize_url("https://www.aclweb.org/anthology/2020.acl-main.442/").unwrap();
        assert_eq!(c.anthology_id.unwrap().as_str(), "2020.acl-main.442");
        assert_eq!(c.canonical, "aclanthology.org/2020.acl-main.442");
    }

    #[test]
    fn anthology_hosts_unify() {
        let a = normalize_url("https://aclanthology.org/2020.acl-main.442").unwrap();
        let b = normalize_url("http://www.aclweb.org/anthology/2020.acl-main.442.pdf").unwrap();
        assert_eq!(a, b);
        let legacy = normalize_url("https://www.aclweb.org/anthology/P/P19/p19-1001.pdf").unwrap();
        assert_eq!(legacy.anthology_id.unwrap().as_str(), "P19-1001");
    }

    #[test]
    fn tracking_params_stripped() {
        let c = normalize_url("https://example.com/foo?utm_source=x").unwrap();
        assert_eq!(c.canonical, "example.com/foo");
        assert_eq!(c.anthology_id, None);
        let c = normalize_url("https://Example.COM/Foo/?id=3&utm_medium=t#top").unwrap();
        assert_eq!(c.canonical, "example.com/Foo?id=3");
    }

    #[test]
    fn arxiv_variants() {
        let want = "arxiv.org/abs/2004.10964";
        for u in [
            "https://arxiv.org/abs/2004.10964",
            "https://arxiv.org/abs/2004.10964v3",
            "http://arxiv.org/pdf/2004.10964v1.pdf",
            "https://export.arxiv.org/pdf/2004.10964",
        ] {
            assert_eq!(normalize_url(u).unwrap().canonical, want, "{u}");
        }
    }

    #[test]
    fn malformed() {
        for u in ["", "   ", "mailto:a@b.c://", "ftp://x.org/a", "http://", "has space.com"] {
            assert!(normalize_url(u).is_err(), "{u:?}");
        }
    }

    #[test]
    fn id_shapes() {
        assert!(AnthologyId::parse("2021.findings-acl.12").is_some());
        assert!(AnthologyId::parse("2021.acl.12").is_none());
        assert!(AnthologyId::parse("P19-100").is_none());
        assert_eq!(AnthologyId::parse("w18-5446").unwrap().as_str(), "W18-5446");
    }

    proptest! {
        #[test]
        fn idempotent(
            scheme in prop::sample::select(vec!["http://", "https://", ""]),
            www in any::<bool>(),
            host in prop::sample::select(vec!["aclweb.org/anthology", "aclanthology.org", "Example.com", "arxiv.org", "blog.io:8080"]),
            segs in prop::collection::vec("[A-Za-z0-9._-]{1,10}", 0..4),
            query in prop::collection::vec(("(utm_)?[a-z]{1,4}", "[a-z0-9]{0,4}"), 0..3),
            slash in any::<bool>(),
            frag in "(#[a-z]{0,4})?",
        ) {
            let mut u = format!("{scheme}{}{host}", if www { "www." } else { "" });
            for s in &segs {
                u.push('/');
                u.push_str(s);
            }
            if slash {
                u.push('/');
            }
            if !query.is_empty() {
                u.push('?');
                u.push_str(&query.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join("&"));
            }
            u.push_str(&frag);
            if let Ok(once) = normalize_url(&u) {
                let twice = normalize_url(&once.canonical).unwrap();
                prop_assert_eq!(once, twice);
            }
        }
    }
}
