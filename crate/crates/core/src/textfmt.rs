//! Strict line-oriented reader shared by the hypergraph, design and packing
//! text formats: decimal tokens separated by single spaces, LF line endings,
//! no leading or trailing whitespace.

use std::io::BufRead;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number; 0 for errors not tied to a line (I/O, truncation).
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

pub(crate) struct LineReader<R> {
    inner: R,
    line_no: usize,
    buf: String,
}

impl<R: BufRead> LineReader<R> {
    pub(crate) fn new(inner: R) -> Self {
        Self {
            inner,
            line_no: 0,
            buf: String::new(),
        }
    }

    pub(crate) fn line_no(&self) -> usize {
        self.line_no
    }

    /// Next line without its LF, or `None` at end of input.
    pub(crate) fn next_line(&mut self) -> Result<Option<&str>, ParseError> {
        self.buf.clear();
        let read = self
            .inner
            .read_line(&mut self.buf)
            .map_err(|e| ParseError::at(self.line_no + 1, format!("read failed: {e}")))?;
        if read == 0 {
            return Ok(None);
        }
        self.line_no += 1;
        if self.buf.ends_with('\n') {
            self.buf.pop();
        }
        Ok(Some(&self.buf))
    }

    /// Next line parsed as exactly `expected` unsigned integers
    /// (`None` = any count ≥ 1).
    pub(crate) fn numbers(&mut self, expected: Option<usize>, what: &str) -> Result<Vec<usize>, ParseError> {
        let line_no = self.line_no + 1;
        let line = self
            .next_line()?
            .ok_or_else(|| ParseError::at(line_no, format!("unexpected end of input, expected {what}")))?;
        let nums = parse_numbers(line).map_err(|m| ParseError::at(line_no, format!("{what}: {m}")))?;
        if let Some(want) = expected {
            if nums.len() != want {
                return Err(ParseError::at(
                    line_no,
                    format!("{what}: expected {want} values, found {}", nums.len()),
                ));
            }
        }
        Ok(nums)
    }

    /// Next line must be `keyword` followed by exactly `expected` numbers.
    pub(crate) fn keyword_numbers(&mut self, keyword: &str, expected: usize) -> Result<Vec<usize>, ParseError> {
        let line_no = self.line_no + 1;
        let line = self
            .next_line()?
            .ok_or_else(|| ParseError::at(line_no, format!("unexpected end of input, expected \"{keyword}\"")))?;
        let rest = line
            .strip_prefix(keyword)
            .and_then(|r| r.strip_prefix(' '))
            .ok_or_else(|| ParseError::at(line_no, format!("expected \"{keyword} ...\"")))?;
        let nums = parse_numbers(rest).map_err(|m| ParseError::at(line_no, m))?;
        if nums.len() != expected {
            return Err(ParseError::at(
                line_no,
                format!("expected {expected} values after \"{keyword}\", found {}", nums.len()),
            ));
        }
        Ok(nums)
    }

    /// Fails unless the input is exhausted.
    pub(crate) fn expect_end(&mut self) -> Result<(), ParseError> {
        let line_no = self.line_no + 1;
        if self.next_line()?.is_some() {
            return Err(ParseError::at(line_no, "unexpected trailing content"));
        }
        Ok(())
    }
}

fn parse_numbers(line: &str) -> Result<Vec<usize>, String> {
    if line.is_empty() {
        return Err("empty line".into());
    }
    line.split(' ')
        .map(|tok| {
            if tok.is_empty() {
                return Err("extra whitespace".to_string());
            }
            if !tok.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("invalid token {tok:?}"));
            }
            if tok.len() > 1 && tok.starts_with('0') {
                return Err(format!("leading zero in {tok:?}"));
            }
            tok.parse::<usize>().map_err(|_| format!("number out of range: {tok}"))
        })
        .collect()
}

/// Validates an `r`-set read from a file: distinct, in range. Returns it sorted.
pub(crate) fn checked_set(mut vs: Vec<usize>, n: usize, line: usize) -> Result<Vec<usize>, ParseError> {
    if let Some(&v) = vs.iter().find(|&&v| v >= n) {
        return Err(ParseError::at(line, format!("vertex {v} out of range 0..{n}")));
    }
    vs.sort_unstable();
    if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
        return Err(ParseError::at(line, format!("repeated vertex {}", w[0])));
    }
    Ok(vs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_sloppy_whitespace() {
        assert!(parse_numbers("1  2").is_err());
        assert!(parse_numbers(" 1 2").is_err());
        assert!(parse_numbers("1 2 ").is_err());
        assert!(parse_numbers("1 2\r").is_err());
        assert!(parse_numbers("01").is_err());
        assert_eq!(parse_numbers("0 10 3").unwrap(), vec![0, 10, 3]);
    }
}
