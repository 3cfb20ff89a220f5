//! Braid word text grammar.
//!
//! Whitespace-separated tokens, each either `s<i>` / `s<i>'` (σ_i, σ_i^{-1})
//! or a nonzero signed integer (`-2` is σ_2^{-1}). Forms may be mixed.

use thiserror::Error;

use super::{BraidError, BraidWord, Letter, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidParseError {
    #[error("unrecognized braid token {token:?} at byte {offset}")]
    BadToken { offset: usize, token: String },
    #[error("generator index {index} at byte {offset} does not fit {strands} strands")]
    IndexTooLarge { offset: usize, index: usize, strands: usize },
    #[error(transparent)]
    Braid(#[from] BraidError),
}

impl BraidParseError {
    /// Byte offset of the offending token, when one exists.
    pub fn offset(&self) -> Option<usize> {
        match self {
            BraidParseError::BadToken { offset, .. } | BraidParseError::IndexTooLarge { offset, .. } => {
                Some(*offset)
            }
            BraidParseError::Braid(_) => None,
        }
    }
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = text;
    let mut base = 0;
    std::iter::from_fn(move || {
        let trimmed = rest.trim_start();
        base += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            return None;
        }
        let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let tok = &trimmed[..end];
        let at = base;
        base += end;
        rest = &trimmed[end..];
        Some((at, tok))
    })
}

fn parse_token(tok: &str) -> Option<Letter> {
    if let Some(body) = tok.strip_prefix('s') {
        let (digits, sign) = match body.strip_suffix('\'') {
            Some(d) => (d, Sign::Negative),
            None => (body, Sign::Positive),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let index: usize = digits.parse().ok()?;
        (index >= 1).then(|| Letter::new(index, sign))
    } else {
        let (digits, sign) = match tok.as_bytes().first()? {
            b'-' => (&tok[1..], Sign::Negative),
            b'+' => (&tok[1..], Sign::Positive),
            _ => (tok, Sign::Positive),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let index: usize = digits.parse().ok()?;
        (index >= 1).then(|| Letter::new(index, sign))
    }
}

/// Parses a braid word. With `strands = None` the strand count is the
/// largest generator index plus one (1 for the empty word).
pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<BraidWord, BraidParseError> {
    let mut letters = Vec::new();
    let mut offsets = Vec::new();
    for (offset, tok) in tokens(text) {
        let letter = parse_token(tok).ok_or_else(|| BraidParseError::BadToken { offset, token: tok.to_string() })?;
        letters.push(letter);
        offsets.push(offset);
    }
    let k = match strands {
        Some(k) => {
            if k == 0 {
                return Err(BraidError::NoStrands.into());
            }
            if let Some((l, &offset)) = letters.iter().zip(&offsets).find(|(l, _)| l.index >= k) {
                return Err(BraidParseError::IndexTooLarge { offset, index: l.index, strands: k });
            }
            k
        }
        None => letters.iter().map(|l| l.index + 1).max().unwrap_or(1),
    };
    Ok(BraidWord::new(k, letters)?)
}
