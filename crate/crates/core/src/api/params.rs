use std::collections::BTreeMap;

use super::HttpError;
use crate::store::MAX_PAGE_LIMIT;

pub(crate) const DEFAULT_LIMIT: usize = 20;

/// Query-string parameters checked against an allow-list.
pub(crate) struct Params(BTreeMap<String, String>);

impl Params {
    pub fn parse(raw: Option<&str>, allowed: &[&str]) -> Result<Self, HttpError> {
        let mut out = BTreeMap::new();
        for (k, v) in url::form_urlencoded::parse(raw.unwrap_or("").as_bytes()) {
            if !allowed.contains(&k.as_ref()) {
                return Err(HttpError::bad_request(format!(
                    "unknown parameter {k:?}; expected one of {}",
                    allowed.join(", ")
                )));
            }
            if out.insert(k.to_string(), v.to_string()).is_some() {
                return Err(HttpError::bad_request(format!("parameter {k:?} given twice")));
            }
        }
        Ok(Self(out))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str).filter(|v| !v.is_empty())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().filter(|(_, v)| !v.is_empty()).map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize, HttpError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| HttpError::bad_request(format!("{key} must be a non-negative integer, got {v:?}"))),
        }
    }

    /// `(offset, limit)` with the page cap enforced.
    pub fn page(&self) -> Result<(usize, usize), HttpError> {
        let offset = self.usize("offset", 0)?;
        let limit = self.usize("limit", DEFAULT_LIMIT)?;
        if limit > MAX_PAGE_LIMIT {
            return Err(HttpError::bad_request(format!("limit {limit} exceeds {MAX_PAGE_LIMIT}")));
        }
        Ok((offset, limit))
    }

    /// A top-k size between 1 and the page cap.
    pub fn k(&self, default: usize) -> Result<usize, HttpError> {
        let k = self.usize("k", default)?;
        if k == 0 || k > MAX_PAGE_LIMIT {
            return Err(HttpError::bad_request(format!("k must be in 1..={MAX_PAGE_LIMIT}, got {k}")));
        }
        Ok(k)
    }
}
