//! Line-oriented document interchange format used for checkpoints.
//!
//! ```text
//! #doc<TAB>doc_id<TAB>language<TAB>title_raw
//! start_ms<TAB>end_ms<TAB>text
//! ```

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Caption, IngestError, Language, SubtitleDocument};

fn field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

pub fn write_documents<W: Write>(mut w: W, docs: &[SubtitleDocument]) -> std::io::Result<()> {
    for d in docs {
        writeln!(w, "#doc\t{}\t{}\t{}", field(&d.doc_id), d.language, field(&d.title_raw))?;
        for c in &d.captions {
            writeln!(w, "{}\t{}\t{}", c.start_ms, c.end_ms, field(&c.text))?;
        }
    }
    Ok(())
}

pub fn read_documents<R: BufRead>(r: R) -> Result<Vec<SubtitleDocument>, IngestError> {
    let mut docs: Vec<SubtitleDocument> = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let lineno = n + 1;
        let line = line.map_err(|e| IngestError::Format { line: lineno, msg: e.to_string() })?;
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| IngestError::Format { line: lineno, msg: msg.to_string() };
        if let Some(rest) = line.strip_prefix("#doc\t") {
            let parts: Vec<&str> = rest.splitn(3, '\t').collect();
            let [id, lang, title] = parts[..] else {
                return Err(bad("document header needs id, language and title"));
            };
            let language: Language = lang.parse().map_err(|e: String| bad(&e))?;
            docs.push(SubtitleDocument {
                doc_id: id.to_string(),
                title_raw: title.to_string(),
                language,
                captions: Vec::new(),
            });
        } else {
            let doc = docs.last_mut().ok_or_else(|| bad("caption before any document header"))?;
            let parts: Vec<&str> = line.splitn(3, '\t').collect();
            let [s, e, text] = parts[..] else {
                return Err(bad("caption line needs start, end and text"));
            };
            let start_ms: u64 = s.parse().map_err(|_| bad("start is not an integer"))?;
            let end_ms: u64 = e.parse().map_err(|_| bad("end is not an integer"))?;
            if end_ms < start_ms {
                return Err(bad("caption ends before it starts"));
            }
            let index = doc.captions.len() + 1;
            doc.captions.push(Caption { index, start_ms, end_ms, text: text.to_string() });
        }
    }
    Ok(docs)
}

pub fn write_documents_file(path: &Path, docs: &[SubtitleDocument]) -> std::io::Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    write_documents(&mut w, docs)?;
    w.flush()
}

pub fn read_documents_file(path: &Path) -> Result<Vec<SubtitleDocument>, IngestError> {
    let f = std::fs::File::open(path).map_err(|source| IngestError::Io { path: path.to_path_buf(), source })?;
    read_documents(BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let docs = vec![
            SubtitleDocument::new(
                "en/a.srt",
                "a",
                Language::En,
                vec![
                    Caption { index: 1, start_ms: 10, end_ms: 20, text: "hi\tthere".into() },
                    Caption { index: 2, start_ms: 30, end_ms: 40, text: "bye".into() },
                ],
            ),
            SubtitleDocument::new("ja/b.srt", "b", Language::Ja, vec![]),
        ];
        let mut buf = Vec::new();
        write_documents(&mut buf, &docs).unwrap();
        let back = read_documents(&buf[..]).unwrap();
        assert_eq!(back[0].captions[0].text, "hi there");
        assert_eq!(back[0].captions[1], docs[0].captions[1]);
        assert_eq!(back[1].doc_id, "ja/b.srt");
    }

    #[test]
    fn header_format_is_exact() {
        let d = SubtitleDocument::new("x", "Show.S01", Language::Ja, vec![Caption { index: 1, start_ms: 5, end_ms: 6, text: "猫".into() }]);
        let mut buf = Vec::new();
        write_documents(&mut buf, &[d]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "#doc\tx\tja\tShow.S01\n5\t6\t猫\n");
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(read_documents(&b"1\t2\tx\n"[..]), Err(IngestError::Format { line: 1, .. })));
        assert!(matches!(read_documents(&b"#doc\ta\tfr\tt\n"[..]), Err(IngestError::Format { .. })));
        assert!(matches!(read_documents(&b"#doc\ta\ten\tt\nx\t2\ty\n"[..]), Err(IngestError::Format { line: 2, .. })));
    }
}
