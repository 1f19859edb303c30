//! Multiset words over index letters.
//!
//! A word such as `a³b²c` is a multiset: only the multiplicity of each
//! letter matters. Letters are dense ids (`a` = 0, `b` = 1, ...), so a word
//! is stored as a count vector with trailing zeros trimmed, which makes
//! structural equality coincide with multiset equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest number of distinct letters a word may use (`a` through `z`).
pub const MAX_LETTERS: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u8);

impl Letter {
    pub fn id(self) -> usize {
        self.0 as usize
    }

    pub fn as_char(self) -> char {
        (b'a' + self.0) as char
    }

    pub fn from_char(c: char) -> Option<Letter> {
        c.is_ascii_lowercase().then(|| Letter(c as u8 - b'a'))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MultisetWord {
    counts: Vec<u32>,
}

impl MultisetWord {
    /// The null word.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: impl Into<Vec<u32>>) -> Self {
        let mut counts = counts.into();
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Self { counts }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut counts = Vec::new();
        for l in letters {
            if counts.len() <= l.id() {
                counts.resize(l.id() + 1, 0);
            }
            counts[l.id()] += 1;
        }
        Self::from_counts(counts)
    }

    /// Word made of `len` distinct letters `a, b, c, ...`.
    pub fn all_distinct(len: usize) -> Self {
        Self::from_counts(vec![1; len])
    }

    /// Multiplicity vector indexed by letter id (no trailing zeros).
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, letter: Letter) -> u32 {
        self.counts.get(letter.id()).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct letters in ascending id order.
    pub fn distinct_letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| Letter(i as u8))
    }

    pub fn distinct_count(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Letters with repetition, in ascending order (`a3b` yields a, a, a, b).
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(Letter(i as u8), c as usize))
    }

    pub fn contains(&self, sub: &MultisetWord) -> bool {
        sub.counts
            .iter()
            .enumerate()
            .all(|(i, &c)| c <= self.counts.get(i).copied().unwrap_or(0))
    }

    /// Multiset union `self · other`.
    pub fn concat(&self, other: &MultisetWord) -> MultisetWord {
        let n = self.counts.len().max(other.counts.len());
        let counts: Vec<u32> = (0..n)
            .map(|i| {
                self.counts.get(i).copied().unwrap_or(0) + other.counts.get(i).copied().unwrap_or(0)
            })
            .collect();
        MultisetWord::from_counts(counts)
    }

    pub fn with_letter(&self, letter: Letter) -> MultisetWord {
        let mut counts = self.counts.clone();
        if counts.len() <= letter.id() {
            counts.resize(letter.id() + 1, 0);
        }
        counts[letter.id()] += 1;
        MultisetWord { counts }
    }

    /// Applies a letter relabeling: letter `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[u8]) -> MultisetWord {
        let mut counts = vec![0u32; perm.iter().map(|&p| p as usize + 1).max().unwrap_or(0)];
        for (i, &c) in self.counts.iter().enumerate() {
            counts[perm[i] as usize] += c;
        }
        MultisetWord::from_counts(counts)
    }

    /// Run-length form, e.g. `a3b2c1`. The null word renders as `0`.
    pub fn to_run_length(&self) -> String {
        if self.is_empty() {
            return "0".to_string();
        }
        self.distinct_letters()
            .map(|l| format!("{}{}", l, self.count(l)))
            .collect()
    }
}

/// Letter-run form, e.g. `aaabbc`. The null word renders as `0`.
impl fmt::Display for MultisetWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for l in self.letters() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Ordered as the sorted letter strings compare, so `aa < ab < ac < bb`.
/// For words of one length this is descending lexicographic order on count
/// vectors.
impl Ord for MultisetWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters().cmp(other.letters())
    }
}

impl PartialOrd for MultisetWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Accepts both `a3b2c` (run-length, count defaults to 1) and `aaabbc`.
/// `0` and the empty string denote the null word.
impl FromStr for MultisetWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(MultisetWord::empty());
        }
        let bad = |reason: &str| Error::ParseWord {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut counts = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let letter = Letter::from_char(c).ok_or_else(|| bad("expected a lowercase letter"))?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let n: u32 = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| bad("multiplicity too large"))?
            };
            if n == 0 {
                return Err(bad("zero multiplicity"));
            }
            if counts.len() <= letter.id() {
                counts.resize(letter.id() + 1, 0);
            }
            counts[letter.id()] += n;
        }
        Ok(MultisetWord::from_counts(counts))
    }
}

impl Serialize for MultisetWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_run_length())
    }
}

impl<'de> Deserialize<'de> for MultisetWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exponent signature of a word, sorted non-increasing (`a³b²cd` is `[3,2,1,1]`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pattern(Vec<u32>);

impl Pattern {
    pub fn new(mut exponents: Vec<u32>) -> Result<Self> {
        exponents.retain(|&e| e > 0);
        if exponents.is_empty() {
            return Err(Error::EmptyWord);
        }
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Pattern(exponents))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Representative word: letter `a` takes the largest exponent, `b` the next, ...
    pub fn representative(&self) -> MultisetWord {
        MultisetWord::from_counts(self.0.clone())
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn canonical_pattern(w: &MultisetWord) -> Result<Pattern> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Pattern::new(w.counts().to_vec())
}

/// All distinct sub-multisets of `w` of size `r`, in ascending word order.
pub fn sub_multisets(w: &MultisetWord, r: usize) -> Result<Vec<MultisetWord>> {
    let len = w.len();
    if r > len {
        return Err(Error::SubsetTooLarge { size: r, len });
    }
    let caps = w.counts();
    // remaining[i] = letters available from position i onward
    let mut remaining = vec![0usize; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        remaining[i] = remaining[i + 1] + caps[i] as usize;
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; caps.len()];
    fill_sub_multisets(caps, &remaining, 0, r, &mut current, &mut out);
    Ok(out)
}

fn fill_sub_multisets(
    caps: &[u32],
    remaining: &[usize],
    pos: usize,
    left: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<MultisetWord>,
) {
    if left == 0 {
        out.push(MultisetWord::from_counts(current.clone()));
        return;
    }
    if pos == caps.len() || remaining[pos] < left {
        return;
    }
    let hi = (caps[pos] as usize).min(left);
    // at least this many must be taken here for the tail to cover the rest
    let lo = left.saturating_sub(remaining[pos + 1]);
    for take in (lo..=hi).rev() {
        current[pos] = take as u32;
        fill_sub_multisets(caps, remaining, pos + 1, left - take, current, out);
    }
    current[pos] = 0;
}

/// `w / s`: removes the letters of `s` from `w`.
pub fn quotient(w: &MultisetWord, s: &MultisetWord) -> Result<MultisetWord> {
    if !w.contains(s) {
        return Err(Error::NotSubMultiset {
            sub: s.to_string(),
            word: w.to_string(),
        });
    }
    let counts: Vec<u32> = w
        .counts()
        .iter()
        .enumerate()
        .map(|(i, &c)| c - s.counts().get(i).copied().unwrap_or(0))
        .collect();
    Ok(MultisetWord::from_counts(counts))
}

/// Removes one copy of `a`, returning the shortened word and the original
/// multiplicity of `a` (the coefficient a derivative contributes).
pub fn remove_one(w: &MultisetWord, a: Letter) -> Result<(MultisetWord, u32)> {
    let m = w.count(a);
    if m == 0 {
        return Err(Error::LetterNotPresent(a.as_char()));
    }
    let mut counts = w.counts().to_vec();
    counts[a.id()] -= 1;
    Ok((MultisetWord::from_counts(counts), m))
}

/// Integer partitions of `n` in reverse lexicographic order:
/// `[5], [4,1], [3,2], [3,1,1], ...`.
pub fn partitions(n: usize) -> Vec<Pattern> {
    fn go(n: usize, max: usize, current: &mut Vec<u32>, out: &mut Vec<Pattern>) {
        if n == 0 {
            out.push(Pattern(current.clone()));
            return;
        }
        for part in (1..=n.min(max)).rev() {
            current.push(part as u32);
            go(n - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> MultisetWord {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_pattern_examples() {
        assert_eq!(canonical_pattern(&w("a3b2cd")).unwrap().exponents(), &[3, 2, 1, 1]);
        assert_eq!(canonical_pattern(&w("abc")).unwrap().exponents(), &[1, 1, 1]);
        assert_eq!(canonical_pattern(&w("bba3")).unwrap().exponents(), &[3, 2]);
        assert_eq!(canonical_pattern(&MultisetWord::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn sub_multiset_examples() {
        let subs = sub_multisets(&w("aab"), 1).unwrap();
        assert_eq!(subs, vec![w("a"), w("b")]);
        assert_eq!(sub_multisets(&w("abcde"), 3).unwrap().len(), 10);
        let subs: Vec<String> = sub_multisets(&w("a2b2c"), 2)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(subs, ["aa", "ab", "ac", "bb", "bc"]);
        assert!(matches!(
            sub_multisets(&w("ab"), 3),
            Err(Error::SubsetTooLarge { size: 3, len: 2 })
        ));
        assert_eq!(sub_multisets(&w("ab"), 0).unwrap(), vec![MultisetWord::empty()]);
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient(&w("a3b2c"), &w("ab")).unwrap(), w("a2bc"));
        assert!(quotient(&w("abc"), &w("abc")).unwrap().is_empty());
        assert!(matches!(
            quotient(&w("a2b"), &w("c")),
            Err(Error::NotSubMultiset { .. })
        ));
    }

    #[test]
    fn remove_one_examples() {
        assert_eq!(remove_one(&w("aaa"), Letter(0)).unwrap(), (w("aa"), 3));
        assert_eq!(remove_one(&w("aab"), Letter(1)).unwrap(), (w("aa"), 1));
        assert_eq!(remove_one(&w("a2b2"), Letter(1)).unwrap(), (w("a2b"), 2));
        assert_eq!(remove_one(&w("ab"), Letter(2)), Err(Error::LetterNotPresent('c')));
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(w("a3b2c1"), w("aaabbc"));
        assert_eq!(w("a3b2c1").to_run_length(), "a3b2c1");
        assert_eq!(w("cab").to_string(), "abc");
        assert_eq!(w("0"), MultisetWord::empty());
        assert_eq!(MultisetWord::empty().to_string(), "0");
        assert!("aB".parse::<MultisetWord>().is_err());
        assert!("a0".parse::<MultisetWord>().is_err());
        assert!("3a".parse::<MultisetWord>().is_err());
        let json = serde_json::to_string(&w("aab")).unwrap();
        assert_eq!(json, "\"a2b1\"");
        assert_eq!(serde_json::from_str::<MultisetWord>(&json).unwrap(), w("aab"));
    }

    #[test]
    fn word_order_is_string_order() {
        let mut v = [w("bc"), w("aa"), w("bb"), w("ac"), w("ab")];
        v.sort();
        let s: Vec<String> = v.iter().map(ToString::to_string).collect();
        assert_eq!(s, ["aa", "ab", "ac", "bb", "bc"]);
    }

    #[test]
    fn partitions_of_five() {
        let p: Vec<String> = partitions(5).iter().map(ToString::to_string).collect();
        assert_eq!(
            p,
            ["[5]", "[4,1]", "[3,2]", "[3,1,1]", "[2,2,1]", "[2,1,1,1]", "[1,1,1,1,1]"]
        );
        let counts: Vec<usize> = (1..=9).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn all_distinct_subset_count_is_central_binomial() {
        for k in 1..=7 {
            let word = MultisetWord::all_distinct(2 * k + 1);
            let n = sub_multisets(&word, k + 1).unwrap().len();
            assert_eq!(n, binom(2 * k + 1, k));
        }
    }

    /// Coefficient of x^r in prod (1 + x + ... + x^m_i).
    fn generating_coefficient(counts: &[u32], r: usize) -> usize {
        let mut poly = vec![1usize];
        for &m in counts {
            let mut next = vec![0usize; poly.len() + m as usize];
            for (i, &c) in poly.iter().enumerate() {
                for j in 0..=m as usize {
                    next[i + j] += c;
                }
            }
            poly = next;
        }
        poly.get(r).copied().unwrap_or(0)
    }

    /// Brute force: every letter sequence choice, deduplicated.
    fn brute_force_subsets(word: &MultisetWord, r: usize) -> std::collections::BTreeSet<MultisetWord> {
        let letters: Vec<Letter> = word.letters().collect();
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << letters.len()) {
            if mask.count_ones() as usize == r {
                seen.insert(MultisetWord::from_letters(
                    (0..letters.len()).filter(|i| mask >> i & 1 == 1).map(|i| letters[i]),
                ));
            }
        }
        seen
    }

    fn small_word() -> impl Strategy<Value = MultisetWord> {
        prop::collection::vec(0u32..4, 1..5)
            .prop_filter("length 1..=8", |c| (1..=8).contains(&c.iter().sum::<u32>()))
            .prop_map(MultisetWord::from_counts)
    }

    proptest! {
        #[test]
        fn sub_multiset_count_matches_generating_function(word in small_word(), r in 0usize..9) {
            prop_assume!(r <= word.len());
            let subs = sub_multisets(&word, r).unwrap();
            prop_assert_eq!(subs.len(), generating_coefficient(word.counts(), r));
            let brute = brute_force_subsets(&word, r);
            prop_assert_eq!(subs.iter().cloned().collect::<std::collections::BTreeSet<_>>(), brute);
            prop_assert!(subs.windows(2).all(|p| p[0] < p[1]));
            for s in &subs {
                prop_assert_eq!(quotient(&word, s).unwrap().concat(s), word.clone());
            }
        }

        #[test]
        fn pattern_is_relabeling_invariant(word in small_word(), seed in any::<u64>()) {
            let n = word.counts().len();
            let mut perm: Vec<u8> = (0..n as u8).collect();
            // Fisher-Yates driven by the seed
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let relabeled = word.relabel(&perm);
            prop_assert_eq!(canonical_pattern(&relabeled).unwrap(), canonical_pattern(&word).unwrap());
            prop_assert_eq!(relabeled.len(), word.len());
        }

        #[test]
        fn run_length_round_trip(word in small_word()) {
            prop_assert_eq!(word.to_run_length().parse::<MultisetWord>().unwrap(), word.clone());
            prop_assert_eq!(word.to_string().parse::<MultisetWord>().unwrap(), word);
        }
    }
}
