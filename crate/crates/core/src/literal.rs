//! Small helpers shared by the element literal parsers.

use crate::error::{Error, Result};

fn opens(c: char) -> bool {
    matches!(c, '(' | '[' | '{' | '<')
}

fn closes(c: char) -> bool {
    matches!(c, ')' | ']' | '}' | '>')
}

/// Splits `s` at every occurrence of `sep` that is not nested inside brackets.
/// Each piece is returned with its byte offset into `s`.
pub fn split_top(s: &str, sep: char) -> Result<Vec<(usize, &str)>> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        if opens(c) {
            depth += 1;
        } else if closes(c) {
            depth -= 1;
            if depth < 0 {
                return Err(Error::parse(i, format!("unbalanced `{c}`")));
            }
        } else if c == sep && depth == 0 {
            out.push((start, &s[start..i]));
            start = i + c.len_utf8();
        }
    }
    if depth != 0 {
        return Err(Error::parse(s.len(), "unclosed bracket"));
    }
    out.push((start, &s[start..]));
    Ok(out)
}

/// Strips one pair of enclosing brackets if the opening bracket at the front
/// matches the closing one at the very end.
pub fn strip_enclosing(s: &str, open: char, close: char) -> Option<&str> {
    let t = s.trim();
    if !(t.starts_with(open) && t.ends_with(close)) || t.len() < 2 {
        return None;
    }
    let mut depth = 0i32;
    for (i, c) in t.char_indices() {
        if opens(c) {
            depth += 1;
        } else if closes(c) {
            depth -= 1;
            if depth == 0 && i + c.len_utf8() != t.len() {
                return None;
            }
        }
    }
    Some(&t[open.len_utf8()..t.len() - close.len_utf8()])
}

pub fn parse_i64(s: &str, offset: usize) -> Result<i64> {
    let t = s.trim();
    t.parse::<i64>()
        .map_err(|_| Error::parse(offset, format!("expected an integer, found `{t}`")))
}

/// Parses a `;`-separated list of items with a per-item parser, shifting
/// parse-error positions to be relative to the whole list.
pub fn parse_list<T>(s: &str, mut item: impl FnMut(&str) -> Result<T>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (off, piece) in split_top(s, ';')? {
        if piece.trim().is_empty() {
            continue;
        }
        out.push(item(piece).map_err(|e| shift(e, off))?);
    }
    Ok(out)
}

pub fn shift(e: Error, off: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse {
            pos: pos + off,
            msg,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_only_at_top_level() {
        let parts = split_top("(1,0),2", ',').unwrap();
        assert_eq!(parts, vec![(0, "(1,0)"), (6, "2")]);
        assert!(split_top("(1,0", ',').is_err());
        assert!(split_top("1)", ',').is_err());
    }

    #[test]
    fn enclosing_brackets_must_match_whole_string() {
        assert_eq!(strip_enclosing("((1,0),2)", '(', ')'), Some("(1,0),2"));
        assert_eq!(strip_enclosing("(1,0),(2,3)", '(', ')'), None);
    }

    #[test]
    fn list_errors_carry_absolute_positions() {
        let err = parse_list("1;x", |p| parse_i64(p, 0)).unwrap_err();
        assert_eq!(err, Error::parse(2, "expected an integer, found `x`"));
    }
}
