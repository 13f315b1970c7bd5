//! SubRip parsing and serialization.

use std::fmt::Write as _;
use std::sync::LazyLock;

use regex::Regex;

use super::{Caption, IngestError};
use crate::text::collapse_whitespace;

/// Files with fewer well-formed cues than this are rejected as illegitimate.
pub const MIN_CUES: usize = 5;

static TIMING: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^\s*(\d{1,3}):(\d{1,2}):(\d{1,2})[,.](\d{1,3})\s*-->\s*(\d{1,3}):(\d{1,2}):(\d{1,2})[,.](\d{1,3})(?:\s.*)?$",
    )
    .unwrap()
});
static MARKUP: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<[^>]*>|\{\\[^}]*\}").unwrap());

/// Outcome of a lenient parse: the recovered cues and how many were skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SrtParse {
    pub captions: Vec<Caption>,
    pub skipped: usize,
}

enum Timing {
    Valid(u64, u64),
    Invalid,
}

fn clock_ms(h: &str, m: &str, s: &str, frac: &str) -> Option<u64> {
    let (h, m, s): (u64, u64, u64) = (h.parse().ok()?, m.parse().ok()?, s.parse().ok()?);
    if m >= 60 || s >= 60 {
        return None;
    }
    // "1,5" means half a second: the fraction is decimal, padded on the right.
    let ms: u64 = format!("{frac:0<3}").parse().ok()?;
    Some(((h * 60 + m) * 60 + s) * 1000 + ms)
}

fn parse_timing(line: &str) -> Option<Timing> {
    let c = TIMING.captures(line)?;
    let start = clock_ms(&c[1], &c[2], &c[3], &c[4]);
    let end = clock_ms(&c[5], &c[6], &c[7], &c[8]);
    Some(match (start, end) {
        (Some(s), Some(e)) if e >= s => Timing::Valid(s, e),
        _ => Timing::Invalid,
    })
}

fn is_index_line(line: &str) -> bool {
    let t = line.trim();
    !t.is_empty() && t.chars().all(|c| c.is_ascii_digit())
}

/// Cleans cue text: markup removed, lines joined by single spaces.
fn cue_text(lines: &[&str]) -> String {
    let joined = lines.join(" ");
    collapse_whitespace(&MARKUP.replace_all(&joined, " "))
}

/// Parses every well-formed cue, whatever their number.
pub fn parse_cues(text: &str) -> SrtParse {
    let text = text.strip_prefix('\u{FEFF}').unwrap_or(text);
    let text = text.replace("\r\n", "\n").replace('\r', "\n");
    let lines: Vec<&str> = text.split('\n').collect();

    let mut out = SrtParse::default();
    let mut raw: Vec<(u64, u64, String)> = Vec::new();
    let mut block: Vec<&str> = Vec::new();
    for line in lines.iter().copied().chain(std::iter::once("")) {
        if line.trim().is_empty() {
            if !block.is_empty() {
                parse_block(&block, &mut raw, &mut out.skipped);
                block.clear();
            }
        } else {
            block.push(line);
        }
    }

    raw.sort_by_key(|&(s, _, _)| s);
    out.captions = raw
        .into_iter()
        .enumerate()
        .map(|(i, (start_ms, end_ms, text))| Caption { index: i + 1, start_ms, end_ms, text })
        .collect();
    out
}

/// One blank-line-delimited block. Usually a single cue, but a missing blank
/// separator can glue several cues together, so split at every timing line.
fn parse_block(block: &[&str], raw: &mut Vec<(u64, u64, String)>, skipped: &mut usize) {
    let timings: Vec<(usize, Timing)> =
        block.iter().enumerate().filter_map(|(i, l)| parse_timing(l).map(|t| (i, t))).collect();
    if timings.is_empty() {
        *skipped += 1;
        return;
    }
    for (k, (at, timing)) in timings.iter().enumerate() {
        let mut stop = timings.get(k + 1).map_or(block.len(), |(next, _)| *next);
        if stop < block.len() && stop > at + 1 && is_index_line(block[stop - 1]) {
            stop -= 1;
        }
        let text = cue_text(&block[at + 1..stop]);
        match timing {
            Timing::Valid(s, e) if !text.is_empty() && parse_timing(&text).is_none() => {
                raw.push((*s, *e, text));
            }
            _ => *skipped += 1,
        }
    }
}

/// Parses and rejects the file when fewer than `min_cues` cues survive.
pub fn parse_srt_with_min(text: &str, min_cues: usize) -> Result<SrtParse, IngestError> {
    let parsed = parse_cues(text);
    if parsed.skipped > 0 {
        log::warn!("skipped {} malformed cue(s)", parsed.skipped);
    }
    if parsed.captions.len() < min_cues {
        return Err(IngestError::Rejected {
            path: None,
            recovered: parsed.captions.len(),
            reason: format!("fewer than {min_cues} well-formed cues"),
        });
    }
    Ok(parsed)
}

/// [`parse_srt_with_min`] at the default [`MIN_CUES`] floor.
pub fn parse_srt(text: &str) -> Result<SrtParse, IngestError> {
    parse_srt_with_min(text, MIN_CUES)
}

pub fn format_timestamp(ms: u64) -> String {
    let (h, rem) = (ms / 3_600_000, ms % 3_600_000);
    let (m, rem) = (rem / 60_000, rem % 60_000);
    let (s, ms) = (rem / 1000, rem % 1000);
    format!("{h:02}:{m:02}:{s:02},{ms:03}")
}

/// Serializes captions as SubRip, numbering cues 1..n in list order.
pub fn write_srt(captions: &[Caption]) -> String {
    let mut out = String::new();
    for (i, c) in captions.iter().enumerate() {
        let _ = write!(
            out,
            "{}\n{} --> {}\n{}\n\n",
            i + 1,
            format_timestamp(c.start_ms),
            format_timestamp(c.end_ms),
            c.text
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cue_multiline() {
        let p = parse_cues("1\n00:00:01,000 --> 00:00:02,500\nHello\nworld\n\n");
        assert_eq!(
            p.captions,
            vec![Caption { index: 1, start_ms: 1000, end_ms: 2500, text: "Hello world".into() }]
        );
        assert_eq!(p.skipped, 0);
    }

    #[test]
    fn end_before_start_is_skipped() {
        let p = parse_cues("1\n00:00:05,000 --> 00:00:01,000\nBackwards\n\n2\n00:00:06,000 --> 00:00:07,000\nOk\n");
        assert_eq!(p.captions.len(), 1);
        assert_eq!(p.skipped, 1);
        assert_eq!(p.captions[0].text, "Ok");
    }

    #[test]
    fn out_of_order_cues_are_sorted_and_reindexed() {
        let p = parse_cues("1\n00:00:09,000 --> 00:00:10,000\nSecond\n\n2\n00:00:01,000 --> 00:00:02,000\nFirst\n");
        let got: Vec<_> = p.captions.iter().map(|c| (c.index, c.text.as_str())).collect();
        assert_eq!(got, vec![(1, "First"), (2, "Second")]);
    }

    #[test]
    fn crlf_bom_period_separator_and_tags() {
        let src = "\u{FEFF}1\r\n00:00:01.200 --> 00:00:03.000 X1:10\r\n<i>Hi</i> <font color=\"red\">there</font>\r\n\r\n";
        let p = parse_cues(src);
        assert_eq!(p.captions[0].start_ms, 1200);
        assert_eq!(p.captions[0].text, "Hi there");
    }

    #[test]
    fn missing_blank_line_between_cues() {
        let src = "1\n00:00:01,000 --> 00:00:02,000\nOne\n2\n00:00:03,000 --> 00:00:04,000\nTwo\n";
        let p = parse_cues(src);
        let texts: Vec<_> = p.captions.iter().map(|c| c.text.as_str()).collect();
        assert_eq!(texts, vec!["One", "Two"]);
    }

    #[test]
    fn short_fraction_and_bad_clock() {
        let p = parse_cues("1\n00:00:01,5 --> 00:00:02,25\nA\n\n2\n00:61:00,000 --> 00:62:00,000\nB\n");
        assert_eq!((p.captions[0].start_ms, p.captions[0].end_ms), (1500, 2250));
        assert_eq!(p.skipped, 1);
    }

    #[test]
    fn rejects_fewer_than_five() {
        let err = parse_srt("1\n00:00:01,000 --> 00:00:02,500\nHello\n").unwrap_err();
        assert!(matches!(err, IngestError::Rejected { recovered: 1, .. }));
    }

    #[test]
    fn empty_text_cue_skipped() {
        let p = parse_cues("1\n00:00:01,000 --> 00:00:02,000\n<i></i>\n\n");
        assert!(p.captions.is_empty());
        assert_eq!(p.skipped, 1);
    }

    #[test]
    fn timestamp_format() {
        assert_eq!(format_timestamp(3_723_004), "01:02:03,004");
    }
}
