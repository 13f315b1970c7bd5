//! Title metadata: show/movie name plus season and episode numbers, pulled
//! out of release-style file names.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::text::collapse_whitespace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitleMeta {
    pub normalized_title: String,
    pub season: Option<u32>,
    pub episode: Option<u32>,
}

static EXTENSION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\.(srt|ass|ssa|sub|vtt|txt|smi)$").unwrap());
static GROUP: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[[^\]]*\]|【[^】]*】").unwrap());
static SEASON_EPISODE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bs(\d{1,2})\s*e(\d{1,4})\b").unwrap());
static CROSS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b(\d{1,2})x(\d{1,4})\b").unwrap());
static EPISODE_WORD: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bepisode\s*(\d{1,4})\b").unwrap());
static EP: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\bep\s*(\d{1,4})\b").unwrap());
static E: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\be(\d{1,4})\b").unwrap());
static TRAILING_DASH: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s-\s*(\d{1,4})\s*$").unwrap());
static JA_EPISODE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"第\s*(\d{1,4})\s*話").unwrap());

const RELEASE_TAGS: &[&str] = &[
    "480p", "576p", "720p", "1080p", "1080i", "2160p", "4k", "x264", "x265", "h264", "h265", "hevc", "avc", "xvid",
    "divx", "bluray", "blu-ray", "bdrip", "brrip", "bd", "dvdrip", "dvd", "webrip", "web-dl", "webdl", "web", "hdtv",
    "hdrip", "aac", "ac3", "flac", "mp3", "dts", "10bit", "8bit", "proper", "repack", "internal", "ws",
];
const LANGUAGE_SUFFIXES: &[&str] = &["en", "eng", "english", "ja", "jp", "jpn", "japanese"];

/// Extracts normalized title, season and episode from a raw file title.
pub fn extract_title_meta(title_raw: &str) -> TitleMeta {
    let mut s = title_raw.trim().to_lowercase();
    s = EXTENSION.replace(&s, "").into_owned();
    s = GROUP.replace_all(&s, " ").into_owned();
    s = s.replace(['.', '_'], " ");

    let mut tokens: Vec<&str> = s.split_whitespace().filter(|t| !RELEASE_TAGS.contains(t)).collect();
    while tokens.last().is_some_and(|t| LANGUAGE_SUFFIXES.contains(t)) {
        tokens.pop();
    }
    let mut s = tokens.join(" ");

    let mut season = None;
    let mut episode = None;
    let mut take = |re: &Regex, s: &mut String, has_season: bool| -> bool {
        let Some(c) = re.captures(s) else { return false };
        if has_season {
            season = c[1].parse().ok();
            episode = c[2].parse().ok();
        } else {
            episode = c[1].parse().ok();
        }
        let range = c.get(0).unwrap().range();
        s.replace_range(range, " ");
        true
    };
    let _ = take(&SEASON_EPISODE, &mut s, true)
        || take(&CROSS, &mut s, true)
        || take(&EPISODE_WORD, &mut s, false)
        || take(&EP, &mut s, false)
        || take(&JA_EPISODE, &mut s, false)
        || take(&E, &mut s, false)
        || take(&TRAILING_DASH, &mut s, false);

    let s = s.replace(['-', '(', ')', '（', '）'], " ");
    let mut normalized_title = collapse_whitespace(&s);
    if normalized_title.is_empty() {
        normalized_title = collapse_whitespace(&title_raw.to_lowercase());
    }
    if normalized_title.is_empty() {
        normalized_title = "untitled".to_string();
    }
    TitleMeta { normalized_title, season, episode }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(s: &str) -> (String, Option<u32>, Option<u32>) {
        let m = extract_title_meta(s);
        (m.normalized_title, m.season, m.episode)
    }

    #[test]
    fn release_name() {
        assert_eq!(meta("Show.Name.S02E07.720p.en"), ("show name".into(), Some(2), Some(7)));
    }

    #[test]
    fn movie_with_year() {
        assert_eq!(meta("movie title (1997)"), ("movie title 1997".into(), None, None));
    }

    #[test]
    fn ep_keyword() {
        let (t, _, e) = meta("drama ep 05 字幕");
        assert_eq!(e, Some(5));
        assert_eq!(t, "drama 字幕");
    }

    #[test]
    fn other_patterns() {
        assert_eq!(meta("show 3x12"), ("show".into(), Some(3), Some(12)));
        assert_eq!(meta("Show Episode 4"), ("show".into(), None, Some(4)));
        assert_eq!(meta("show_e09.srt"), ("show".into(), None, Some(9)));
        assert_eq!(meta("[Group] Some Anime - 05 [1080p].ja.srt"), ("some anime".into(), None, Some(5)));
        assert_eq!(meta("アニメ 第3話"), ("アニメ".into(), None, Some(3)));
        assert_eq!(meta("show.s01e02.en"), ("show".into(), Some(1), Some(2)));
    }

    #[test]
    fn never_empty() {
        assert_eq!(meta("S01E01").0, "s01e01");
        assert_eq!(meta("[x]").0, "[x]");
    }
}
