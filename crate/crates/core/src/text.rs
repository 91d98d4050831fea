//! Shared helpers for the line-oriented text formats.

use crate::error::{syntax, Error, Result};

/// A word is a sequence of symbol names.
pub type Word = Vec<String>;

/// Keyword spelling of the empty input in transition lines.
pub const EPS: &str = "eps";

/// Top-of-stack wildcard in transition lines.
pub const ANY_TOP: &str = "*";

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Symbol names are runs of printable non-whitespace characters. Structured
/// names such as `[p,Z,q,1,a1a2]` are legal; `|`, `->` and the reserved
/// words `eps` and `*` are not.
pub fn is_token(s: &str) -> bool {
    !s.is_empty()
        && s != "->"
        && s != EPS
        && s != ANY_TOP
        && !s.contains('|')
        && !s.ends_with(':')
        && s.chars().all(|c| !c.is_whitespace() && !c.is_control())
}

pub(crate) fn check_token(line: usize, s: &str) -> Result<()> {
    if is_token(s) {
        Ok(())
    } else {
        Err(syntax(line, format!("`{s}` is not a valid symbol name")))
    }
}

/// Splits `key: rest` header lines.
pub(crate) fn header(line: &str) -> Option<(&str, &str)> {
    let (key, rest) = line.split_once(':')?;
    let key = key.trim();
    if key.is_empty() || key.contains(char::is_whitespace) {
        return None;
    }
    Some((key, rest.trim()))
}

/// Renders a word as space-separated symbols; the empty word is `eps`.
pub fn fmt_word(w: &[String]) -> String {
    if w.is_empty() {
        EPS.to_string()
    } else {
        w.join(" ")
    }
}

/// Parses a word written as whitespace-separated symbols, each optionally
/// raised to a power (`a1^3 a2^2`). `eps` or an empty string is the empty word.
pub fn parse_word(s: &str) -> Result<Word> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        if tok == EPS {
            continue;
        }
        match tok.split_once('^') {
            Some((sym, pow)) => {
                let n: usize = pow
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad exponent in `{tok}`")))?;
                if !is_token(sym) {
                    return Err(Error::Invalid(format!("bad symbol in `{tok}`")));
                }
                out.extend(std::iter::repeat(sym.to_string()).take(n));
            }
            None => out.push(tok.to_string()),
        }
    }
    Ok(out)
}

/// Builds `a_1^{k_1} ... a_m^{k_m}`.
pub fn bounded_word(alphabet: &[String], exponents: &[usize]) -> Word {
    alphabet
        .iter()
        .zip(exponents)
        .flat_map(|(a, &k)| std::iter::repeat(a.clone()).take(k))
        .collect()
}

/// Splits a comma-separated alphabet order (`a1,a2,a3`).
pub fn parse_alphabet(s: &str) -> Result<Vec<String>> {
    let out: Vec<String> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect();
    if out.is_empty() {
        return Err(Error::Invalid("empty alphabet".into()));
    }
    for (i, a) in out.iter().enumerate() {
        if !is_token(a) {
            return Err(Error::Invalid(format!("bad letter `{a}`")));
        }
        if out[..i].contains(a) {
            return Err(Error::Invalid(format!("letter `{a}` repeated")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_expand() {
        let w = parse_word("a1^2 a2 a3^0").unwrap();
        assert_eq!(w, vec!["a1", "a1", "a2"]);
        assert!(parse_word("eps").unwrap().is_empty());
        assert!(parse_word("a^x").is_err());
    }

    #[test]
    fn tokens() {
        assert!(is_token("Z0"));
        assert!(is_token("[p,Z,q,1,a1a2]"));
        assert!(!is_token("a|b"));
        assert!(!is_token("->"));
        assert!(!is_token("eps"));
        assert!(!is_token("start:"));
    }

    #[test]
    fn alphabet_rejects_repeats() {
        assert_eq!(parse_alphabet("a1,a2 a3").unwrap().len(), 3);
        assert!(parse_alphabet("a,a").is_err());
    }
}
