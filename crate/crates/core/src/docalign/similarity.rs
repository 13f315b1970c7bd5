//! Ratcliff–Obershelp ("gestalt pattern matching") similarity.

/// Longest common substring of `a` and `b` as `(start_a, start_b, len)`.
/// Among equally long ones the smallest start in `a` wins, then the
/// smallest start in `b`.
fn longest_common_substring(a: &[char], b: &[char]) -> (usize, usize, usize) {
    let mut best = (0, 0, 0);
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            cur[j] = if a[i - 1] == b[j - 1] { prev[j - 1] + 1 } else { 0 };
            if cur[j] > best.2 {
                best = (i - cur[j], j - cur[j], cur[j]);
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    best
}

fn matched_chars(a: &[char], b: &[char]) -> usize {
    let mut total = 0;
    let mut stack = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let (i, j, len) = longest_common_substring(a, b);
        if len == 0 {
            continue;
        }
        total += len;
        stack.push((&a[..i], &b[..j]));
        stack.push((&a[i + len..], &b[j + len..]));
    }
    total
}

/// `2·M / (|a| + |b|)` where `M` counts characters matched by recursive
/// longest-common-substring decomposition; 1.0 for two empty strings.
///
/// The decomposition depends on which of several equally long substrings
/// is taken first, so both argument orders are tried and the larger match
/// is used. That makes the measure symmetric.
pub fn title_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let m = matched_chars(&a, &b).max(matched_chars(&b, &a));
    2.0 * m as f64 / (a.len() + b.len()) as f64
}

/// Length of the longest common substring, in characters.
pub fn longest_common_substring_len(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    longest_common_substring(&a, &b).2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_ratcliff_obershelp;

    #[test]
    fn basics() {
        assert_eq!(title_similarity("abc", "abc"), 1.0);
        assert_eq!(title_similarity("abc", "xyz"), 0.0);
        assert_eq!(title_similarity("", ""), 1.0);
        assert_eq!(title_similarity("a", ""), 0.0);
    }

    #[test]
    fn wikimedia() {
        let expected = 14.0 / 18.0;
        assert!((brute_force_ratcliff_obershelp("wikimedia", "wikimania") - expected).abs() < 1e-12);
        assert!((title_similarity("wikimedia", "wikimania") - expected).abs() < 1e-12);
    }

    #[test]
    fn unicode_titles() {
        let s = title_similarity("進撃の巨人", "進撃の巨人 完結編");
        assert!((s - 10.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn lcs_len() {
        assert_eq!(longest_common_substring_len("xabcy", "zabcq"), 3);
    }
}
