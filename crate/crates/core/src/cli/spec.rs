//! Surface specifications: `P(3,-5,-7)` or a JSON record.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::braidzel::{Braidzel, BraidzelRecord, SurfaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid surface: {0}")]
    Surface(#[from] SurfaceError),
}

impl SpecError {
    fn at(offset: usize, message: impl Into<String>) -> Self {
        SpecError::Syntax { offset, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceForm {
    Pretzel,
    Record,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub braidzel: Braidzel,
    pub source: String,
    pub form: SourceForm,
}

impl SurfaceSpec {
    pub fn canonical(&self) -> String {
        self.braidzel.to_string()
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

pub fn parse_surface(text: &str) -> Result<SurfaceSpec, SpecError> {
    let start = text.len() - text.trim_start().len();
    let body = text.trim();
    let (braidzel, form) = match body.chars().next() {
        Some('P') => (parse_pretzel(text, start)?, SourceForm::Pretzel),
        Some('{') => (parse_record(text)?, SourceForm::Record),
        Some(_) => return Err(SpecError::at(start, "expected `P(` or `{`")),
        None => return Err(SpecError::at(0, "empty input")),
    };
    Ok(SurfaceSpec { braidzel, source: text.to_string(), form })
}

fn parse_pretzel(text: &str, start: usize) -> Result<Braidzel, SpecError> {
    let bytes = text.as_bytes();
    let mut pos = start + 1;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if bytes.get(pos) != Some(&b'(') {
        return Err(SpecError::at(pos, "expected `(`"));
    }
    pos += 1;
    let mut twists = Vec::new();
    loop {
        skip_ws(&mut pos);
        let num_start = pos;
        if matches!(bytes.get(pos), Some(b'-' | b'+')) {
            pos += 1;
        }
        let digits = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == digits {
            return Err(SpecError::at(num_start, "expected an integer twist"));
        }
        let t: i64 = text[num_start..pos].parse().map_err(|_| SpecError::at(num_start, "twist out of range"))?;
        twists.push(t);
        skip_ws(&mut pos);
        match bytes.get(pos) {
            Some(b',') => pos += 1,
            Some(b')') => {
                pos += 1;
                break;
            }
            _ => return Err(SpecError::at(pos, "expected `,` or `)`")),
        }
    }
    skip_ws(&mut pos);
    if pos != bytes.len() {
        return Err(SpecError::at(pos, "trailing input"));
    }
    Ok(Braidzel::pretzel(&twists)?)
}

fn line_col_to_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

fn parse_record(text: &str) -> Result<Braidzel, SpecError> {
    let record: BraidzelRecord = serde_json::from_str(text)
        .map_err(|e| SpecError::at(line_col_to_offset(text, e.line(), e.column()), e.to_string()))?;
    if record.k != record.twists.len() {
        return Err(SurfaceError::LengthMismatch { strands: record.k, twists: record.twists.len() }.into());
    }
    match Braidzel::try_from(&record) {
        Ok(b) => Ok(b),
        Err(SurfaceError::BraidText(e)) => {
            let braid_at = text.find("\"braid\"").and_then(|i| text[i + 7..].find('"').map(|j| i + 7 + j + 1));
            match (braid_at, e.offset()) {
                (Some(base), Some(off)) => Err(SpecError::at(base + off, e.to_string())),
                _ => Err(SurfaceError::BraidText(e).into()),
            }
        }
        Err(e) => Err(e.into()),
    }
}
