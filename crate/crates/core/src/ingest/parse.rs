use std::io::{self, BufRead};

use serde::{Deserialize, Serialize};

/// One line of a Google 1-gram (version 2) export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub surface: String,
    pub year: i32,
    pub match_count: u64,
    pub volume_count: u64,
}

/// Parses one line. `None` for anything other than four well-formed
/// tab-separated fields.
pub fn parse_line(line: &str) -> Option<RawRecord> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    let mut fields = line.split('\t');
    let surface = fields.next()?;
    let year = fields.next()?.parse().ok()?;
    let match_count = fields.next()?.parse().ok()?;
    let volume_count = fields.next()?.parse().ok()?;
    if fields.next().is_some() || surface.is_empty() {
        return None;
    }
    Some(RawRecord { surface: surface.to_owned(), year, match_count, volume_count })
}

/// Iterator over the records of a decompressed 1-gram stream, in file order.
///
/// Lines that are not valid UTF-8 or do not parse are skipped and counted in
/// [`malformed`](Self::malformed). Blank lines are ignored. A read error ends
/// the iteration with `Some(Err(..))`.
pub struct NgramRecords<R> {
    reader: R,
    buf: Vec<u8>,
    lines: u64,
    malformed: u64,
    failed: bool,
}

pub fn parse_ngram_stream<R: BufRead>(reader: R) -> NgramRecords<R> {
    NgramRecords { reader, buf: Vec::new(), lines: 0, malformed: 0, failed: false }
}

impl<R> NgramRecords<R> {
    /// Non-blank lines seen so far.
    pub fn lines(&self) -> u64 {
        self.lines
    }

    pub fn malformed(&self) -> u64 {
        self.malformed
    }
}

impl<R: BufRead> Iterator for NgramRecords<R> {
    type Item = io::Result<RawRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            }
            let bytes = self.buf.strip_suffix(b"\n").unwrap_or(&self.buf);
            if bytes.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            self.lines += 1;
            match std::str::from_utf8(bytes).ok().and_then(parse_line) {
                Some(record) => return Some(Ok(record)),
                None => self.malformed += 1,
            }
        }
    }
}
