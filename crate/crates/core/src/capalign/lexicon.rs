use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use super::ResourceError;

/// Japanese surface form to English glosses, in file order.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, Vec<String>>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds glosses for `japanese`; duplicates and blank glosses are ignored.
    pub fn insert<S: AsRef<str>>(&mut self, japanese: &str, glosses: impl IntoIterator<Item = S>) {
        let japanese = japanese.trim();
        if japanese.is_empty() {
            return;
        }
        let mut fresh: Vec<String> = Vec::new();
        for g in glosses {
            let g = g.as_ref().trim().to_lowercase();
            if !g.is_empty() && !fresh.contains(&g) {
                fresh.push(g);
            }
        }
        if fresh.is_empty() {
            return;
        }
        let slot = self.entries.entry(japanese.to_string()).or_default();
        for g in fresh {
            if !slot.contains(&g) {
                slot.push(g);
            }
        }
    }

    /// Reads `japanese<TAB>english1/english2/...` lines. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn from_reader(reader: impl BufRead) -> Result<Self, ResourceError> {
        let mut lex = Lexicon::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| ResourceError::Read { path: None, source: e })?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((ja, en)) = line.split_once('\t') else {
                return Err(ResourceError::format(n + 1, "expected `japanese<TAB>glosses`"));
            };
            let glosses: Vec<&str> = en.split('/').filter(|g| !g.trim().is_empty()).collect();
            if ja.trim().is_empty() || glosses.is_empty() {
                return Err(ResourceError::format(n + 1, "empty headword or gloss list"));
            }
            lex.insert(ja, glosses);
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self, ResourceError> {
        Self::from_reader(super::open(path)?).map_err(|e| e.in_file(path))
    }

    pub fn get(&self, japanese: &str) -> Option<&[String]> {
        self.entries.get(japanese).map(Vec::as_slice)
    }

    pub fn contains(&self, japanese: &str) -> bool {
        self.entries.contains_key(japanese)
    }

    pub fn headwords(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse() {
        let lex = Lexicon::from_reader("猫\tcat/Cat/kitty\n\n# c\n犬\tdog\n".as_bytes()).unwrap();
        assert_eq!(lex.get("猫").unwrap(), ["cat", "kitty"]);
        assert_eq!(lex.get("犬").unwrap(), ["dog"]);
        assert_eq!(lex.len(), 2);
    }

    #[test]
    fn malformed() {
        assert!(matches!(
            Lexicon::from_reader("猫 cat\n".as_bytes()),
            Err(ResourceError::Format { line: 1, .. })
        ));
        assert!(Lexicon::from_reader("猫\t/\n".as_bytes()).is_err());
    }
}
