//! Brute-force reference implementations used by the test suites.
//!
//! These deliberately share no code with the production paths they check.

use std::collections::{BTreeSet, HashMap, VecDeque};

/// All strings within `radius` unit edits of `s` over `alphabet`, with their
/// exact edit distance, by breadth-first search on strings.
pub fn edit_ball(s: &str, radius: u32, alphabet: &[char]) -> HashMap<String, u32> {
    let mut dist: HashMap<String, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(s.to_string(), 0);
    queue.push_back(s.to_string());
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        if d == radius {
            continue;
        }
        let chars: Vec<char> = cur.chars().collect();
        let mut next: Vec<Vec<char>> = Vec::new();
        for i in 0..chars.len() {
            let mut del = chars.clone();
            del.remove(i);
            next.push(del);
            for &a in alphabet {
                if a != chars[i] {
                    let mut sub = chars.clone();
                    sub[i] = a;
                    next.push(sub);
                }
            }
            if i + 1 < chars.len() && chars[i] != chars[i + 1] {
                let mut tr = chars.clone();
                tr.swap(i, i + 1);
                next.push(tr);
            }
        }
        for i in 0..=chars.len() {
            for &a in alphabet {
                let mut ins = chars.clone();
                ins.insert(i, a);
                next.push(ins);
            }
        }
        for n in next {
            let n: String = n.into_iter().collect();
            if !dist.contains_key(&n) {
                dist.insert(n.clone(), d + 1);
                queue.push_back(n);
            }
        }
    }
    dist
}

/// Dictionary words reachable from `token` by at most `max_cost` edit
/// operations, with minimal cost, sorted by (cost, word). Meets in the
/// middle: the edit graph is symmetric, so a word is within `max_cost` iff
/// the two balls of half the radius intersect.
pub fn brute_force_candidates<S: AsRef<str>>(token: &str, dictionary: &[S], max_cost: u32) -> Vec<(String, u32)> {
    let words: BTreeSet<&str> = dictionary.iter().map(|w| w.as_ref()).filter(|w| !w.is_empty()).collect();
    let mut alphabet: BTreeSet<char> = token.chars().collect();
    for w in &words {
        alphabet.extend(w.chars());
    }
    let alphabet: Vec<char> = alphabet.into_iter().collect();
    let forward = edit_ball(token, max_cost.div_ceil(2), &alphabet);
    let mut out = Vec::new();
    for w in words {
        let back = edit_ball(w, max_cost / 2, &alphabet);
        let best = back.iter().filter_map(|(s, d2)| forward.get(s).map(|d1| d1 + d2)).min();
        if let Some(d) = best.filter(|&d| d <= max_cost) {
            out.push((w.to_string(), d));
        }
    }
    out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    out
}

/// Longest common substring by enumerating every substring pair. Ties go to
/// the smallest start in `a`, then the smallest start in `b`.
fn brute_longest_common(a: &[char], b: &[char]) -> (usize, usize, usize) {
    for len in (1..=a.len().min(b.len())).rev() {
        for i in 0..=a.len() - len {
            for j in 0..=b.len() - len {
                if a[i..i + len] == b[j..j + len] {
                    return (i, j, len);
                }
            }
        }
    }
    (0, 0, 0)
}

fn brute_matched(a: &[char], b: &[char]) -> usize {
    let (i, j, len) = brute_longest_common(a, b);
    if len == 0 {
        return 0;
    }
    len + brute_matched(&a[..i], &b[..j]) + brute_matched(&a[i + len..], &b[j + len..])
}

/// Ratcliff–Obershelp similarity through brute-force substring search,
/// maximized over both argument orders.
pub fn brute_force_ratcliff_obershelp(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let m = brute_matched(&a, &b).max(brute_matched(&b, &a));
    2.0 * m as f64 / (a.len() + b.len()) as f64
}

/// Nearest-rank empirical percentile (`q` in (0, 1)) of the values.
pub fn empirical_percentile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

/// Caption matching by scoring every Japanese caption against every English
/// caption. Candidates outside the window are discarded afterwards; the
/// winner is the maximum of (similarity, -|Δ|, -en_index).
pub fn brute_force_caption_matches(
    pair: &crate::docalign::DocumentPair,
    en_doc: &crate::SubtitleDocument,
    ja_doc: &crate::SubtitleDocument,
    window_s: f64,
    resources: &crate::AlignmentResourcesF64,
) -> Vec<(usize, usize, f64)> {
    let window_ms = (window_s * 1000.0).floor() as i64;
    let mut out = Vec::new();
    for ja in &ja_doc.captions {
        let t = ja.start_ms as i64 + pair.best_shift_s * 1000;
        let mut scored: Vec<(f64, i64, usize)> = en_doc
            .captions
            .iter()
            .filter_map(|en| {
                let sim = crate::capalign::caption_similarity(&ja.text, &en.text, resources)?;
                Some((sim, (en.start_ms as i64 - t).abs(), en.index))
            })
            .filter(|&(_, delta, _)| delta <= window_ms)
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        if let Some(&(sim, _, en_index)) = scored.first() {
            out.push((ja.index, en_index, sim));
        }
    }
    out
}
