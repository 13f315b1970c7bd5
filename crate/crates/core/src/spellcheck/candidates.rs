//! Candidate generation: every dictionary word within `max_cost` unit edits
//! (insert, delete, substitute, adjacent transpose) of the token.
//!
//! The dictionary is a trie. Search is uniform-cost over trie nodes: each
//! node carries one row of the Lowrance–Wagner (unrestricted
//! Damerau–Levenshtein) table for the prefix it spells, keyed by the row
//! minimum. Row minima never decrease along a path, so a node whose minimum
//! exceeds `max_cost` has no reachable descendant and is pruned, and words
//! come off the queue in ascending edit cost.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::io::BufRead;
use std::path::Path;

use super::{open, ModelError};

pub const DEFAULT_MAX_COST: u32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub word: String,
    /// Minimal number of unit edits from the token, at most `max_cost`.
    pub edit_cost: u32,
    /// Log-probability under the noisy-channel model; 0 until scored.
    pub score: f64,
}

#[derive(Debug, Clone, Default)]
struct TrieNode {
    children: Vec<(char, u32)>,
    word: Option<u32>,
}

/// Spelling dictionary: membership set plus a character trie.
#[derive(Debug, Clone)]
pub struct Dictionary {
    words: Vec<String>,
    set: HashSet<String>,
    nodes: Vec<TrieNode>,
}

impl Default for Dictionary {
    fn default() -> Self {
        Dictionary { words: Vec::new(), set: HashSet::new(), nodes: vec![TrieNode::default()] }
    }
}

impl Dictionary {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut d = Dictionary::default();
        for w in words {
            d.insert(w.as_ref());
        }
        d
    }

    pub fn insert(&mut self, word: &str) {
        let word = word.trim().to_lowercase();
        if word.is_empty() || self.set.contains(&word) {
            return;
        }
        let mut at = 0usize;
        for c in word.chars() {
            at = match self.nodes[at].children.binary_search_by_key(&c, |&(ch, _)| ch) {
                Ok(k) => self.nodes[at].children[k].1 as usize,
                Err(k) => {
                    let id = self.nodes.len() as u32;
                    self.nodes.push(TrieNode::default());
                    self.nodes[at].children.insert(k, (c, id));
                    id as usize
                }
            };
        }
        self.nodes[at].word = Some(self.words.len() as u32);
        self.words.push(word.clone());
        self.set.insert(word);
    }

    /// One word per line.
    pub fn from_reader<R: BufRead>(r: R) -> Result<Self, ModelError> {
        let mut d = Dictionary::default();
        for (n, line) in r.lines().enumerate() {
            let line = line.map_err(|e| ModelError::format(n + 1, e.to_string()))?;
            d.insert(&line);
        }
        Ok(d)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        Self::from_reader(open(path)?).map_err(|e| e.in_file(path))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.set.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

struct SearchNode {
    trie: u32,
    depth: usize,
    parent: Option<usize>,
    /// Distance row for this prefix against token positions 0..=n.
    row: Vec<u32>,
    /// For each token column j, the last prefix row r < depth + 1 whose
    /// character equals token[j]; 0 when there is none.
    last: Vec<usize>,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Entry {
    // Expansions sort before emissions of the same cost, so every word of
    // cost c is known before the first one is emitted.
    Expand(usize),
    Emit(String),
}

/// Every dictionary word within `max_cost` edits, ordered by (cost, word).
pub fn generate_candidates(token: &str, dictionary: &Dictionary, max_cost: u32) -> Vec<Candidate> {
    let b: Vec<char> = token.chars().collect();
    let n = b.len();
    let mut arena: Vec<SearchNode> = vec![SearchNode {
        trie: 0,
        depth: 0,
        parent: None,
        row: (0..=n as u32).collect(),
        last: vec![0; n + 1],
    }];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u32, Entry::Expand(0))));
    let mut out = Vec::new();

    while let Some(Reverse((cost, entry))) = heap.pop() {
        let id = match entry {
            Entry::Emit(word) => {
                out.push(Candidate { word, edit_cost: cost, score: 0.0 });
                continue;
            }
            Entry::Expand(id) => id,
        };
        let trie_id = arena[id].trie as usize;
        if let Some(w) = dictionary.nodes[trie_id].word {
            let d = arena[id].row[n];
            if d <= max_cost {
                heap.push(Reverse((d, Entry::Emit(dictionary.words[w as usize].clone()))));
            }
        }
        for &(ch, child) in &dictionary.nodes[trie_id].children {
            let (row, last) = next_row(&arena, id, ch, &b);
            let min = row.iter().copied().min().unwrap_or(u32::MAX);
            if min > max_cost {
                continue;
            }
            let depth = arena[id].depth + 1;
            arena.push(SearchNode { trie: child, depth, parent: Some(id), row, last });
            heap.push(Reverse((min, Entry::Expand(arena.len() - 1))));
        }
    }
    out
}

fn ancestor_row(arena: &[SearchNode], mut id: usize, depth: usize) -> &[u32] {
    while arena[id].depth > depth {
        id = arena[id].parent.expect("ancestor above root");
    }
    &arena[id].row
}

/// Row `i = parent.depth + 1` of the Lowrance–Wagner table for prefix+`ch`.
fn next_row(arena: &[SearchNode], parent: usize, ch: char, b: &[char]) -> (Vec<u32>, Vec<usize>) {
    let n = b.len();
    let p = &arena[parent];
    let i = p.depth + 1;
    let prev = &p.row;
    let mut row = vec![0u32; n + 1];
    row[0] = i as u32;
    let mut db = 0usize;
    for j in 1..=n {
        let k = p.last[j];
        let l = db;
        let cost = if ch == b[j - 1] {
            db = j;
            0
        } else {
            1
        };
        let mut v = (prev[j - 1] + cost).min(row[j - 1] + 1).min(prev[j] + 1);
        if k >= 1 && l >= 1 {
            let base = ancestor_row(arena, parent, k - 1)[l - 1];
            v = v.min(base + (i - k - 1) as u32 + 1 + (j - l - 1) as u32);
        }
        row[j] = v;
    }
    let last = (0..=n).map(|j| if j >= 1 && b[j - 1] == ch { i } else { p.last[j] }).collect();
    (row, last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_candidates;

    fn words(c: &[Candidate]) -> Vec<(&str, u32)> {
        c.iter().map(|c| (c.word.as_str(), c.edit_cost)).collect()
    }

    #[test]
    fn teh_examples() {
        let d = Dictionary::new(["the", "tea", "ten"]);
        let got = generate_candidates("teh", &d, 4);
        assert_eq!(words(&got), vec![("tea", 1), ("ten", 1), ("the", 1)]);
        assert_eq!(brute_force_candidates("teh", &["the", "tea", "ten"], 4), vec![
            ("tea".to_string(), 1),
            ("ten".to_string(), 1),
            ("the".to_string(), 1)
        ]);
    }

    #[test]
    fn identity_and_unreachable() {
        let d = Dictionary::new(["the"]);
        assert_eq!(words(&generate_candidates("the", &d, 4)), vec![("the", 0)]);
        assert!(generate_candidates("aaaaaaaa", &d, 4).is_empty());
    }

    #[test]
    fn unrestricted_transposition() {
        // "ca" -> "abc": transpose then insert between the swapped pair.
        let d = Dictionary::new(["abc"]);
        assert_eq!(words(&generate_candidates("ca", &d, 4)), vec![("abc", 2)]);
    }

    #[test]
    fn cost_ascending_order() {
        let d = Dictionary::new(["cart", "cat", "at", "coats", "dog"]);
        let got = generate_candidates("cta", &d, 4);
        let costs: Vec<u32> = got.iter().map(|c| c.edit_cost).collect();
        let mut sorted = costs.clone();
        sorted.sort();
        assert_eq!(costs, sorted);
    }

    #[test]
    fn matches_oracle_on_fixed_cases() {
        let dict = ["abcd", "bacd", "dcba", "ab", "a", "", "abdc", "cabd", "aabbcc"];
        let d = Dictionary::new(dict);
        for token in ["abcd", "ba", "dcab", "aaaa", "c", "abcdabcd"] {
            let got: Vec<(String, u32)> =
                generate_candidates(token, &d, 4).into_iter().map(|c| (c.word, c.edit_cost)).collect();
            assert_eq!(got, brute_force_candidates(token, &dict, 4), "token {token}");
        }
    }
}
