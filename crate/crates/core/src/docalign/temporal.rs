//! Temporal fingerprints: one bit per second of video, set where a caption
//! starts.

use crate::ingest::SubtitleDocument;

/// Number of one-second bins in a fingerprint.
pub const VECTOR_BITS: usize = 10_000;
const WORDS: usize = VECTOR_BITS.div_ceil(64);

#[derive(Clone, PartialEq, Eq)]
pub struct TemporalVector {
    words: Box<[u64; WORDS]>,
    pub shift_s: i64,
}

impl std::fmt::Debug for TemporalVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TemporalVector")
            .field("shift_s", &self.shift_s)
            .field("set_bits", &self.set_bits().collect::<Vec<_>>())
            .finish()
    }
}

/// Nearest whole second, halves rounded up.
pub fn rounded_second(start_ms: u64) -> i64 {
    ((start_ms + 500) / 1000) as i64
}

impl TemporalVector {
    pub fn from_seconds(seconds: impl IntoIterator<Item = i64>, shift_s: i64) -> Self {
        let mut words = Box::new([0u64; WORDS]);
        for s in seconds {
            let k = s + shift_s;
            if (1..=VECTOR_BITS as i64).contains(&k) {
                let bit = (k - 1) as usize;
                words[bit / 64] |= 1 << (bit % 64);
            }
        }
        TemporalVector { words, shift_s }
    }

    /// Whether second `k` (1-based) is set.
    pub fn get(&self, k: usize) -> bool {
        if !(1..=VECTOR_BITS).contains(&k) {
            return false;
        }
        let bit = k - 1;
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    /// Set seconds in ascending order, 1-based.
    pub fn set_bits(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=VECTOR_BITS).filter(|&k| self.get(k))
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Number of differing bits.
    pub fn hamming(&self, other: &TemporalVector) -> u32 {
        self.words.iter().zip(other.words.iter()).map(|(a, b)| (a ^ b).count_ones()).sum()
    }
}

/// Fingerprint of `doc` with every caption start moved by `shift_s` seconds.
pub fn temporal_vector(doc: &SubtitleDocument, shift_s: i64) -> TemporalVector {
    TemporalVector::from_seconds(doc.captions.iter().map(|c| rounded_second(c.start_ms)), shift_s)
}

/// Shifts in search order: 0, -1, 1, -2, 2, ... so that the first minimum
/// found is the one with the smallest magnitude, negative first.
fn shifts(range: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=range).flat_map(|s| [-s, s]))
}

/// Minimum normalized Hamming distance between the English fingerprint and
/// the Japanese fingerprint shifted over `[-shift_range_s, shift_range_s]`,
/// with the shift that achieves it.
pub fn temporal_distance(en: &SubtitleDocument, ja: &SubtitleDocument, shift_range_s: u32) -> (f64, i64) {
    let en_vec = temporal_vector(en, 0);
    let ja_seconds: Vec<i64> = ja.captions.iter().map(|c| rounded_second(c.start_ms)).collect();
    let mut best = (u32::MAX, 0);
    for shift in shifts(shift_range_s as i64) {
        let ja_vec = TemporalVector::from_seconds(ja_seconds.iter().copied(), shift);
        let d = en_vec.hamming(&ja_vec);
        if d < best.0 {
            best = (d, shift);
            if d == 0 {
                break;
            }
        }
    }
    (best.0 as f64 / VECTOR_BITS as f64, best.1)
}
