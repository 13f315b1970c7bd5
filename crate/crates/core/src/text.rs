//! Character classification shared by the normalizer, the filters and the
//! Japanese segmenter.

pub fn is_hiragana(c: char) -> bool {
    ('\u{3041}'..='\u{309F}').contains(&c)
}

pub fn is_katakana(c: char) -> bool {
    ('\u{30A0}'..='\u{30FF}').contains(&c) || ('\u{31F0}'..='\u{31FF}').contains(&c)
}

pub fn is_halfwidth_katakana(c: char) -> bool {
    ('\u{FF61}'..='\u{FF9F}').contains(&c)
}

pub fn is_kanji(c: char) -> bool {
    ('\u{4E00}'..='\u{9FFF}').contains(&c)
        || ('\u{3400}'..='\u{4DBF}').contains(&c)
        || ('\u{F900}'..='\u{FAFF}').contains(&c)
        || c == '々'
}

pub fn is_japanese_script(c: char) -> bool {
    is_hiragana(c) || is_katakana(c) || is_kanji(c) || is_halfwidth_katakana(c)
}

/// CJK symbols and punctuation plus the fullwidth ASCII-variant punctuation.
pub fn is_cjk_punct(c: char) -> bool {
    ('\u{3000}'..='\u{303F}').contains(&c)
        || (('\u{FF01}'..='\u{FF65}').contains(&c) && !is_fullwidth_latin(c) && !c.is_numeric())
}

pub fn is_fullwidth_latin(c: char) -> bool {
    ('\u{FF21}'..='\u{FF3A}').contains(&c) || ('\u{FF41}'..='\u{FF5A}').contains(&c)
}

/// Latin-script letter: ASCII, Latin-1 supplement, Latin extended A/B and
/// additional, plus fullwidth forms.
pub fn is_latin_letter(c: char) -> bool {
    if c.is_ascii_alphabetic() {
        return true;
    }
    let latin_block = ('\u{00C0}'..='\u{024F}').contains(&c)
        || ('\u{1E00}'..='\u{1EFF}').contains(&c)
        || is_fullwidth_latin(c);
    latin_block && c.is_alphabetic()
}

/// Punctuation in the broad sense: ASCII punctuation, Latin-1 punctuation,
/// general punctuation, CJK punctuation.
pub fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || ('\u{00A1}'..='\u{00BF}').contains(&c)
        || ('\u{2000}'..='\u{206F}').contains(&c)
        || is_cjk_punct(c)
}

pub fn is_music_glyph(c: char) -> bool {
    matches!(c, '♪' | '♫' | '♬' | '♩')
}

/// Collapses every whitespace run to one ASCII space and trims both ends.
pub fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert!(is_hiragana('こ'));
        assert!(is_katakana('ー'));
        assert!(is_kanji('猫'));
        assert!(is_latin_letter('é'));
        assert!(!is_latin_letter('×'));
        assert!(is_latin_letter('Ｚ'));
        assert!(is_punct('。'));
        assert!(is_punct('…'));
        assert!(!is_punct('a'));
    }

    #[test]
    fn collapse() {
        assert_eq!(collapse_whitespace("  a \t b\u{3000}c "), "a b c");
        assert_eq!(collapse_whitespace("   "), "");
    }
}
