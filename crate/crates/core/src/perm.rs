//! Permutations in one-line notation and the elementary operations on them.
//!
//! Positions are 1-based in the public API (`descent_set` returns indices in
//! `1..n`), values are always exactly `{1, ..., n}`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest permutation accepted in the compact (digit string) format.
pub const COMPACT_MAX_LEN: usize = 9;

/// A permutation of `{1, ..., n}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Checks that `values` is exactly a rearrangement of `1..=n`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            let idx = v as usize;
            if idx == 0 || idx > n {
                return Err(Error::InvalidInput(format!(
                    "value {v} outside 1..={n} in {values:?}"
                )));
            }
            if std::mem::replace(&mut seen[idx - 1], true) {
                return Err(Error::InvalidInput(format!(
                    "value {v} repeated in {values:?}"
                )));
            }
        }
        Ok(Self { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Self::new(values.clone()).is_ok(), "{values:?}");
        Self { values }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `Id_n = 12...n`.
    pub fn identity(n: usize) -> Self {
        Self {
            values: (1..=n as u32).collect(),
        }
    }

    /// `n(n-1)...1`.
    pub fn reverse_identity(n: usize) -> Self {
        Self {
            values: (1..=n as u32).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    /// Value at the 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    pub fn reverse(&self) -> Self {
        reverse(self)
    }

    pub fn descent_set(&self) -> BTreeSet<usize> {
        descent_set(self)
    }

    pub fn ascent_set(&self) -> BTreeSet<usize> {
        ascent_set(self)
    }

    pub fn is_ballot(&self) -> bool {
        is_ballot_values(&self.values)
    }

    pub fn descent_word(&self) -> StepWord {
        descent_word(self)
    }

    /// Comma-separated form, valid for any length.
    pub fn to_separated(&self) -> String {
        self.values
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Digit-string form; `None` when `n > 9`.
    pub fn to_compact(&self) -> Option<String> {
        if self.len() > COMPACT_MAX_LEN {
            return None;
        }
        Some(
            self.values
                .iter()
                .map(|&v| char::from_digit(v, 10).expect("single digit"))
                .collect(),
        )
    }

    pub fn parse_compact(s: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            what: "compact permutation",
            input: s.to_string(),
            reason,
        };
        if s.chars().count() > COMPACT_MAX_LEN {
            return Err(err(format!(
                "compact form is limited to n <= {COMPACT_MAX_LEN}; use the comma-separated form"
            )));
        }
        let values = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| err(format!("{c:?} is not a digit")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values).map_err(|e| err(e.to_string()))
    }

    pub fn parse_separated(s: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            what: "separated permutation",
            input: s.to_string(),
            reason,
        };
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        let values = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|e| err(format!("{tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values).map_err(|e| err(e.to_string()))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_compact() {
            Some(s) => f.write_str(&s),
            None => f.write_str(&self.to_separated()),
        }
    }
}

/// Accepts either textual format: a string containing a comma is read as
/// separated, anything else as compact digits.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(',') {
            Self::parse_separated(s)
        } else {
            Self::parse_compact(s)
        }
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The permutation with the same relative order as `word`.
pub fn standardize<T: PartialOrd>(word: &[T]) -> Result<Permutation> {
    let mut order: Vec<usize> = (0..word.len()).collect();
    let mut incomparable = false;
    order.sort_by(|&a, &b| {
        word[a].partial_cmp(&word[b]).unwrap_or_else(|| {
            incomparable = true;
            Ordering::Equal
        })
    });
    if incomparable {
        return Err(Error::InvalidInput(
            "word contains incomparable entries".into(),
        ));
    }
    if order
        .windows(2)
        .any(|w| word[w[0]].partial_cmp(&word[w[1]]) != Some(Ordering::Less))
    {
        return Err(Error::InvalidInput("word has repeated entries".into()));
    }
    let mut values = vec![0u32; word.len()];
    for (rank, &pos) in order.iter().enumerate() {
        values[pos] = rank as u32 + 1;
    }
    Ok(Permutation { values })
}

pub fn reverse(p: &Permutation) -> Permutation {
    Permutation {
        values: p.values.iter().rev().copied().collect(),
    }
}

/// `a ⊖ b`: `a` shifted above `b`, then `b`.
pub fn skew_sum(a: &Permutation, b: &Permutation) -> Permutation {
    let shift = b.len() as u32;
    let values = a
        .values
        .iter()
        .map(|&v| v + shift)
        .chain(b.values.iter().copied())
        .collect();
    Permutation { values }
}

/// `a ⊕ b`: `a`, then `b` shifted above `a`.
pub fn direct_sum(a: &Permutation, b: &Permutation) -> Permutation {
    let shift = a.len() as u32;
    let values = a
        .values
        .iter()
        .copied()
        .chain(b.values.iter().map(|&v| v + shift))
        .collect();
    Permutation { values }
}

pub fn descent_set(p: &Permutation) -> BTreeSet<usize> {
    p.values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] > w[1])
        .map(|(i, _)| i + 1)
        .collect()
}

pub fn ascent_set(p: &Permutation) -> BTreeSet<usize> {
    p.values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < w[1])
        .map(|(i, _)| i + 1)
        .collect()
}

pub fn is_ballot(p: &Permutation) -> bool {
    is_ballot_values(&p.values)
}

/// Ballot test on a raw sequence of distinct values.
pub fn is_ballot_values(values: &[u32]) -> bool {
    let mut height = 0i64;
    for w in values.windows(2) {
        height += if w[0] < w[1] { 1 } else { -1 };
        if height < 0 {
            return false;
        }
    }
    true
}

/// `U` at every ascent, `D` at every descent. The empty permutation maps to
/// the empty word as well.
pub fn descent_word(p: &Permutation) -> StepWord {
    StepWord(
        p.values
            .windows(2)
            .map(|w| if w[0] < w[1] { Step::U } else { Step::D })
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    U,
    D,
}

/// A word over `{U, D}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StepWord(pub Vec<Step>);

impl StepWord {
    pub fn new(steps: Vec<Step>) -> Self {
        Self(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, step: Step) -> usize {
        self.0.iter().filter(|&&s| s == step).count()
    }

    /// Every prefix has at least as many `U` as `D`.
    pub fn is_ballot(&self) -> bool {
        let mut height = 0i64;
        for &s in &self.0 {
            height += if s == Step::U { 1 } else { -1 };
            if height < 0 {
                return false;
            }
        }
        true
    }

    /// All ballot words of length `m`, in lexicographic order (`U < D`).
    pub fn ballot_words(m: usize) -> Vec<StepWord> {
        fn go(m: usize, height: usize, cur: &mut Vec<Step>, out: &mut Vec<StepWord>) {
            if cur.len() == m {
                out.push(StepWord(cur.clone()));
                return;
            }
            cur.push(Step::U);
            go(m, height + 1, cur, out);
            cur.pop();
            if height > 0 {
                cur.push(Step::D);
                go(m, height - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(m, 0, &mut Vec::with_capacity(m), &mut out);
        out
    }
}

impl fmt::Display for StepWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Step::U => "U",
                Step::D => "D",
            })?;
        }
        Ok(())
    }
}

impl FromStr for StepWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'U' => Ok(Step::U),
                'D' => Ok(Step::D),
                other => Err(Error::Parse {
                    what: "step word",
                    input: s.to_string(),
                    reason: format!("{other:?} is not U or D"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(StepWord)
    }
}

/// Lexicographic successor of `values` in place; returns `false` at the last
/// permutation.
pub(crate) fn next_permutation(values: &mut [u32]) -> bool {
    let n = values.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}
