use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use super::ResourceError;
use crate::Scalar;

/// Word vectors of one fixed dimension.
#[derive(Debug, Clone)]
pub struct EmbeddingTable<S> {
    dim: usize,
    vectors: HashMap<String, Vec<S>>,
}

impl<S: Scalar> EmbeddingTable<S> {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        EmbeddingTable { dim, vectors: HashMap::new() }
    }

    pub fn insert(&mut self, word: impl Into<String>, vector: Vec<S>) -> Result<(), ResourceError> {
        if vector.len() != self.dim {
            return Err(ResourceError::Dimension { path: None, line: 0, expected: self.dim, found: vector.len() });
        }
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(ResourceError::NonFinite { path: None, line: 0 });
        }
        self.vectors.insert(word.into(), vector);
        Ok(())
    }

    /// Reads `word v1 ... vd` lines. A leading `count dim` header, as
    /// written by word2vec tools, is skipped.
    pub fn from_reader(reader: impl BufRead) -> Result<Self, ResourceError> {
        let mut dim = None;
        let mut vectors = HashMap::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| ResourceError::Read { path: None, source: e })?;
            let mut fields = line.split_whitespace();
            let Some(word) = fields.next() else { continue };
            let rest: Vec<&str> = fields.collect();
            if n == 0 && rest.len() == 1 && word.parse::<u64>().is_ok() && rest[0].parse::<u64>().is_ok() {
                continue;
            }
            let mut v = Vec::with_capacity(rest.len());
            for f in &rest {
                let x: S = f.parse().map_err(|_| ResourceError::format(n + 1, format!("bad component `{f}`")))?;
                if !x.is_finite() {
                    return Err(ResourceError::NonFinite { path: None, line: n + 1 });
                }
                v.push(x);
            }
            match dim {
                None if v.is_empty() => return Err(ResourceError::format(n + 1, "vector has no components")),
                None => dim = Some(v.len()),
                Some(d) if d != v.len() => {
                    return Err(ResourceError::Dimension { path: None, line: n + 1, expected: d, found: v.len() })
                }
                Some(_) => {}
            }
            vectors.insert(word.to_string(), v);
        }
        let dim = dim.ok_or(ResourceError::Empty { path: None })?;
        Ok(EmbeddingTable { dim, vectors })
    }

    pub fn load(path: &Path) -> Result<Self, ResourceError> {
        Self::from_reader(super::open(path)?).map_err(|e| e.in_file(path))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.vectors.keys().map(String::as_str)
    }

    pub fn get(&self, word: &str) -> Option<&[S]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    /// Same table with every vector multiplied by `factor`.
    pub fn scaled(&self, factor: S) -> Self {
        let vectors = self.vectors.iter().map(|(w, v)| (w.clone(), v.iter().map(|&x| x * factor).collect())).collect();
        EmbeddingTable { dim: self.dim, vectors }
    }

    /// Arithmetic mean of the vectors of `words` found in the table,
    /// duplicates counted. Vectors are summed in word order so equal
    /// multisets give bit-identical means.
    pub fn mean<'a>(&self, words: impl IntoIterator<Item = &'a str>) -> Option<Vec<S>> {
        let mut found: Vec<(&str, &[S])> = words.into_iter().filter_map(|w| self.get(w).map(|v| (w, v))).collect();
        if found.is_empty() {
            return None;
        }
        found.sort_unstable_by(|a, b| a.0.cmp(b.0));
        let mut sum = vec![S::zero(); self.dim];
        for (_, v) in &found {
            for (s, &x) in sum.iter_mut().zip(v.iter()) {
                *s = *s + x;
            }
        }
        let n = S::from_count(found.len());
        Some(sum.into_iter().map(|s| s / n).collect())
    }
}

/// Mean embedding of `words`; `None` when none of them is in the table.
pub fn caption_embedding<S: Scalar>(words: &[String], table: &EmbeddingTable<S>) -> Option<Vec<S>> {
    table.mean(words.iter().map(String::as_str))
}

/// Cosine similarity clamped to `[-1, 1]`; `None` if either vector has zero norm.
pub fn cosine<S: Scalar>(a: &[S], b: &[S]) -> Option<S> {
    let mut dot = S::zero();
    let mut na = S::zero();
    let mut nb = S::zero();
    for (&x, &y) in a.iter().zip(b) {
        dot = dot + x * y;
        na = na + x * x;
        nb = nb + y * y;
    }
    if na == S::zero() || nb == S::zero() {
        return None;
    }
    let c = dot / (na.sqrt() * nb.sqrt());
    Some(c.max(-S::one()).min(S::one()))
}
