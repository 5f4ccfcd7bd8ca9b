use crate::ingest::normalize::url_spans;

pub const URL_TOKEN: &str = "<url>";

fn split_plain(segment: &str, out: &mut Vec<String>) {
    let lower = segment.to_lowercase();
    out.extend(
        lower
            .split(|c: char| !matches!(c, 'a'..='z' | '0'..='9' | '#' | '@'))
            .filter(|t| !t.is_empty())
            .map(str::to_string),
    );
}

/// Lowercased word tokens; `#tag` and `@user` stay whole and every URL
/// becomes [`URL_TOKEN`].
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut last = 0;
    for (start, end) in url_spans(text) {
        split_plain(&text[last..start], &mut out);
        out.push(URL_TOKEN.to_string());
        last = end;
    }
    split_plain(&text[last..], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("Call for Papers! #NLProc"), ["call", "for", "papers", "#nlproc"]);
        assert_eq!(tokenize("see https://a.b/c now"), ["see", "<url>", "now"]);
    }

    #[test]
    fn mentions_and_unicode() {
        assert_eq!(tokenize("Thanks @Jane_Doe … café 2022"), ["thanks", "@jane", "doe", "caf", "2022"]);
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(tokenize("a  b\t\tc\n"), tokenize("a b c"));
    }
}
