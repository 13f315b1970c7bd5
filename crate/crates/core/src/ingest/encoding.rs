//! Encoding detection over a fixed set of encodings seen in subtitle crawls.
//!
//! A byte-order mark decides outright. Otherwise every supported encoding
//! decodes the input, encodings that fail on more than 1% of the bytes are
//! dropped, and the survivors are ranked by how much the decoded text looks
//! like natural subtitle text: a per-character class score plus penalties
//! for class transitions that only mis-decoded text produces (Latin letters
//! glued to kana, letter/digit alternation, runs of accented letters).

use std::fmt;

use super::IngestError;
use crate::text;

/// Decoding must cover at least this share of the input bytes.
pub const MIN_VALID_FRACTION: f64 = 0.99;

/// Detection looks at no more than this many leading bytes.
const SAMPLE_BYTES: usize = 256 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    Utf8,
    Utf16Le,
    Utf16Be,
    ShiftJis,
    EucJp,
    Cp1252,
}

impl Encoding {
    /// Candidates in preference order; earlier entries win exact score ties.
    pub const ALL: [Encoding; 6] = [
        Encoding::Utf8,
        Encoding::ShiftJis,
        Encoding::EucJp,
        Encoding::Cp1252,
        Encoding::Utf16Le,
        Encoding::Utf16Be,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Encoding::Utf8 => "utf-8",
            Encoding::Utf16Le => "utf-16le",
            Encoding::Utf16Be => "utf-16be",
            Encoding::ShiftJis => "shift-jis",
            Encoding::EucJp => "euc-jp",
            Encoding::Cp1252 => "cp1252",
        }
    }

    fn codec(self) -> &'static encoding_rs::Encoding {
        match self {
            Encoding::Utf8 => encoding_rs::UTF_8,
            Encoding::Utf16Le => encoding_rs::UTF_16LE,
            Encoding::Utf16Be => encoding_rs::UTF_16BE,
            Encoding::ShiftJis => encoding_rs::SHIFT_JIS,
            Encoding::EucJp => encoding_rs::EUC_JP,
            Encoding::Cp1252 => encoding_rs::WINDOWS_1252,
        }
    }

    /// Decodes with replacement characters; a leading BOM for this encoding is dropped.
    pub fn decode(self, bytes: &[u8]) -> String {
        let body = strip_bom(bytes, self);
        self.codec().decode_without_bom_handling(body).0.into_owned()
    }

    /// Encodes text, used for writing fixtures in a given encoding.
    pub fn encode(self, s: &str) -> Vec<u8> {
        match self {
            Encoding::Utf16Le => s.encode_utf16().flat_map(u16::to_le_bytes).collect(),
            Encoding::Utf16Be => s.encode_utf16().flat_map(u16::to_be_bytes).collect(),
            _ => self.codec().encode(s).0.into_owned(),
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodingGuess {
    pub encoding: Encoding,
    /// In `[0, 1]`.
    pub confidence: f64,
}

fn bom_encoding(bytes: &[u8]) -> Option<Encoding> {
    if bytes.starts_with(&[0xEF, 0xBB, 0xBF]) {
        Some(Encoding::Utf8)
    } else if bytes.starts_with(&[0xFF, 0xFE]) {
        Some(Encoding::Utf16Le)
    } else if bytes.starts_with(&[0xFE, 0xFF]) {
        Some(Encoding::Utf16Be)
    } else {
        None
    }
}

fn strip_bom(bytes: &[u8], enc: Encoding) -> &[u8] {
    match (bom_encoding(bytes), enc) {
        (Some(Encoding::Utf8), Encoding::Utf8) => &bytes[3..],
        (Some(b), e) if b == e => &bytes[2..],
        _ => bytes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Space,
    Letter,
    Digit,
    Punct,
    Accented,
    Typographic,
    Symbol,
    Hiragana,
    Katakana,
    Kanji,
    CjkPunct,
    HalfKana,
    Other,
}

impl Class {
    fn of(c: char) -> Class {
        if c.is_whitespace() {
            Class::Space
        } else if c.is_ascii_alphabetic() {
            Class::Letter
        } else if c.is_ascii_digit() {
            Class::Digit
        } else if c.is_ascii_punctuation() {
            Class::Punct
        } else if c == '\u{FFFD}' || c.is_control() {
            Class::Other
        } else if text::is_hiragana(c) {
            Class::Hiragana
        } else if text::is_katakana(c) {
            Class::Katakana
        } else if text::is_kanji(c) {
            Class::Kanji
        } else if text::is_halfwidth_katakana(c) {
            Class::HalfKana
        } else if text::is_cjk_punct(c) || text::is_fullwidth_latin(c) || ('\u{FF10}'..='\u{FF19}').contains(&c) {
            Class::CjkPunct
        } else if text::is_latin_letter(c) {
            Class::Accented
        } else if matches!(c, '‘' | '’' | '“' | '”' | '–' | '—' | '…' | '€' | '•' | '«' | '»' | '¡' | '¿' | '\u{A0}') {
            Class::Typographic
        } else if ('\u{A1}'..='\u{2BF}').contains(&c) || ('\u{2000}'..='\u{2BFF}').contains(&c) {
            Class::Symbol
        } else {
            Class::Other
        }
    }

    fn weight(self) -> f64 {
        match self {
            Class::Space | Class::Letter | Class::Hiragana => 0.0,
            Class::Katakana => -0.2,
            Class::Digit | Class::Punct | Class::CjkPunct => -0.3,
            Class::Kanji => -0.5,
            Class::Accented | Class::Typographic => -1.5,
            Class::Symbol | Class::HalfKana => -4.0,
            Class::Other => -8.0,
        }
    }

    fn latin(self) -> bool {
        matches!(self, Class::Letter | Class::Accented)
    }

    fn japanese(self) -> bool {
        matches!(self, Class::Hiragana | Class::Katakana | Class::Kanji)
    }
}

fn transition_penalty(prev: Class, cur: Class) -> f64 {
    if (prev.latin() && cur.japanese()) || (prev.japanese() && cur.latin()) {
        -3.0
    } else if matches!((prev, cur), (Class::Letter, Class::Digit) | (Class::Digit, Class::Letter)) {
        -1.0
    } else if prev == Class::Accented && cur == Class::Accented {
        -1.0
    } else if prev == Class::Symbol && matches!(cur, Class::Symbol | Class::Accented)
        || cur == Class::Symbol && prev == Class::Accented
    {
        -1.0
    } else {
        0.0
    }
}

/// Mean per-character plausibility; 0 is best, -8 is pure junk.
fn plausibility(decoded: &str) -> f64 {
    let mut total = 0.0;
    let mut n = 0usize;
    let mut prev = Class::Space;
    for c in decoded.chars() {
        let cls = Class::of(c);
        total += cls.weight() + transition_penalty(prev, cls);
        prev = cls;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        total / n as f64
    }
}

/// Characters that only show up when bytes were decoded with the wrong
/// codec: replacement characters, control codes other than ordinary
/// whitespace, private-use code points.
fn is_undecodable_char(c: char) -> bool {
    c == '\u{FFFD}'
        || (c.is_control() && !matches!(c, '\t' | '\n' | '\r' | '\u{0C}'))
        || ('\u{E000}'..='\u{F8FF}').contains(&c)
}

struct Trial {
    encoding: Encoding,
    valid: f64,
    score: f64,
}

fn trial(bytes: &[u8], encoding: Encoding) -> Trial {
    let decoded = encoding.decode(bytes);
    let invalid = decoded.chars().filter(|&c| is_undecodable_char(c)).count();
    let valid = 1.0 - (invalid as f64 / bytes.len().max(1) as f64).min(1.0);
    Trial { encoding, valid, score: plausibility(&decoded) }
}

/// Picks the most plausible encoding of `bytes` among [`Encoding::ALL`].
pub fn detect_encoding(bytes: &[u8]) -> Result<EncodingGuess, IngestError> {
    if bytes.is_empty() {
        return Err(IngestError::Undecodable { path: None, best_valid: 0.0 });
    }
    if let Some(encoding) = bom_encoding(bytes) {
        return Ok(EncodingGuess { encoding, confidence: 1.0 });
    }
    let sample = &bytes[..bytes.len().min(SAMPLE_BYTES)];
    let trials: Vec<Trial> = Encoding::ALL.iter().map(|&e| trial(sample, e)).collect();
    let best_valid = trials.iter().map(|t| t.valid).fold(0.0, f64::max);
    // Strict `>` keeps the earlier (preferred) encoding on ties.
    let mut best: Option<&Trial> = None;
    for t in trials.iter().filter(|t| t.valid >= MIN_VALID_FRACTION) {
        if best.is_none_or(|b| t.score > b.score) {
            best = Some(t);
        }
    }
    let best = best.ok_or(IngestError::Undecodable { path: None, best_valid })?;
    let confidence = (best.valid * (1.0 + best.score / 8.0)).clamp(0.0, 1.0);
    Ok(EncodingGuess { encoding: best.encoding, confidence })
}

/// Detects the encoding and decodes, dropping any BOM.
pub fn decode_bytes(bytes: &[u8]) -> Result<(String, EncodingGuess), IngestError> {
    let guess = detect_encoding(bytes)?;
    Ok((guess.encoding.decode(bytes), guess))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn utf8_bom_is_decisive() {
        let g = detect_encoding(&[0xEF, 0xBB, 0xBF, 0x61]).unwrap();
        assert_eq!(g, EncodingGuess { encoding: Encoding::Utf8, confidence: 1.0 });
    }

    #[test]
    fn utf16_boms() {
        assert_eq!(detect_encoding(&[0xFF, 0xFE, 0x61, 0x00]).unwrap().encoding, Encoding::Utf16Le);
        assert_eq!(detect_encoding(&[0xFE, 0xFF, 0x00, 0x61]).unwrap().encoding, Encoding::Utf16Be);
    }

    #[test]
    fn ascii_srt_is_utf8() {
        let g = detect_encoding(b"1\n00:00:01,000 --> 00:00:02,000\nHello there\n\n").unwrap();
        assert_eq!(g.encoding, Encoding::Utf8);
        assert!(g.confidence >= 0.9, "{g:?}");
    }

    #[test]
    fn konnichiwa_shift_jis() {
        let bytes = [0x82, 0xB1, 0x82, 0xF1, 0x82, 0xC9, 0x82, 0xBF, 0x82, 0xCD];
        assert_eq!(Encoding::ShiftJis.encode("こんにちは"), bytes);
        let g = detect_encoding(&bytes).unwrap();
        assert_eq!(g.encoding, Encoding::ShiftJis);
        assert!(g.confidence >= 0.9, "{g:?}");
    }

    #[test]
    fn euc_jp_japanese() {
        let bytes = Encoding::EucJp.encode("今日はとても良い天気ですね。散歩に行きましょう。");
        assert_eq!(detect_encoding(&bytes).unwrap().encoding, Encoding::EucJp);
    }

    #[test]
    fn cp1252_western() {
        let bytes = Encoding::Cp1252.encode("Le garçon a mangé une pêche à côté de l'église, très élégant.");
        assert_eq!(detect_encoding(&bytes).unwrap().encoding, Encoding::Cp1252);
    }

    #[test]
    fn utf16_without_bom() {
        let s = "1\n00:00:01,000 --> 00:00:02,000\nありがとうございました\n";
        assert_eq!(detect_encoding(&Encoding::Utf16Le.encode(s)).unwrap().encoding, Encoding::Utf16Le);
        assert_eq!(detect_encoding(&Encoding::Utf16Be.encode(s)).unwrap().encoding, Encoding::Utf16Be);
    }

    #[test]
    fn empty_is_undecodable() {
        assert!(matches!(detect_encoding(&[]), Err(IngestError::Undecodable { .. })));
    }

    #[test]
    fn binary_garbage_is_undecodable() {
        // xorshift noise
        let mut x = 0x2545_F491_4F6C_DD1Du64;
        let junk: Vec<u8> = (0..4096)
            .map(|_| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                (x >> 24) as u8
            })
            .collect();
        assert!(matches!(detect_encoding(&junk), Err(IngestError::Undecodable { .. })));
    }
}
