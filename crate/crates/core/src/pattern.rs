//! Classical pattern containment and avoidance classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{Permutation, COMPACT_MAX_LEN};

/// A pattern of length 1 to 9.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(Permutation);

impl Pattern {
    pub fn new(perm: Permutation) -> Result<Self> {
        if perm.is_empty() || perm.len() > COMPACT_MAX_LEN {
            return Err(Error::InvalidInput(format!(
                "pattern length must be in 1..={COMPACT_MAX_LEN}, got {}",
                perm.len()
            )));
        }
        Ok(Self(perm))
    }

    pub fn perm(&self) -> &Permutation {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[u32] {
        self.0.values()
    }

    /// All patterns of length `k` in lexicographic order.
    pub fn all_of_length(k: usize) -> Vec<Pattern> {
        let mut cur: Vec<u32> = (1..=k as u32).collect();
        let mut out = vec![Pattern(Permutation::from_vec_unchecked(cur.clone()))];
        while crate::perm::next_permutation(&mut cur) {
            out.push(Pattern(Permutation::from_vec_unchecked(cur.clone())));
        }
        out
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pattern::new(Permutation::parse_compact(s.trim())?)
    }
}

/// A set of patterns in canonical form: sorted, without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PatternSet(Vec<Pattern>);

impl PatternSet {
    pub fn new(patterns: impl IntoIterator<Item = Pattern>) -> Self {
        let mut v: Vec<Pattern> = patterns.into_iter().collect();
        v.sort();
        v.dedup();
        Self(v)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Length of the shortest member, `None` for the empty set.
    pub fn min_pattern_len(&self) -> Option<usize> {
        self.0.iter().map(Pattern::len).min()
    }

    /// The 6 single, 15 pair and 20 triple classes of length-3 patterns, in
    /// that order, each group lexicographic.
    pub fn catalogued() -> Vec<PatternSet> {
        let all = Pattern::all_of_length(3);
        let mut out = Vec::with_capacity(41);
        out.extend(all.iter().map(|a| PatternSet(vec![a.clone()])));
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                out.push(PatternSet(vec![all[a].clone(), all[b].clone()]));
            }
        }
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                for c in b + 1..all.len() {
                    out.push(PatternSet(vec![
                        all[a].clone(),
                        all[b].clone(),
                        all[c].clone(),
                    ]));
                }
            }
        }
        out
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("none");
        }
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            p.fmt(f)?;
        }
        Ok(())
    }
}

/// `"132,213"`; the empty class is written `none` (an empty string is also
/// accepted).
impl FromStr for PatternSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "none" {
            return Ok(Self::empty());
        }
        s.split(',')
            .map(str::parse::<Pattern>)
            .collect::<Result<Vec<_>>>()
            .map(PatternSet::new)
    }
}

impl Serialize for PatternSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PatternSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn contains(p: &Permutation, q: &Pattern) -> bool {
    contains_values(p.values(), q.values())
}

/// Lexicographically least 1-based index tuple of an occurrence of `q` in `p`.
pub fn find_occurrence(p: &Permutation, q: &Pattern) -> Option<Vec<usize>> {
    let mut chosen = Vec::with_capacity(q.len());
    if search(p.values(), q.values(), p.len(), &mut chosen) {
        Some(chosen.into_iter().map(|i| i + 1).collect())
    } else {
        None
    }
}

pub fn avoids_all(p: &Permutation, s: &PatternSet) -> bool {
    avoids_all_values(p.values(), s)
}

pub fn avoids_all_values(values: &[u32], s: &PatternSet) -> bool {
    s.patterns()
        .iter()
        .all(|q| !contains_values(values, q.values()))
}

/// Containment on raw value slices; both must be sequences of distinct values.
pub fn contains_values(p: &[u32], q: &[u32]) -> bool {
    match q.len() {
        0 => true,
        k if k > p.len() => false,
        1 => true,
        3 => contains3(p, [q[0], q[1], q[2]]),
        _ => contains_generic(p, q),
    }
}

/// Backtracking subsequence search, without the length-3 fast path.
pub fn contains_generic(p: &[u32], q: &[u32]) -> bool {
    let mut chosen = Vec::with_capacity(q.len());
    search(p, q, p.len(), &mut chosen)
}

/// Whether some occurrence of `q` in `p` uses the final position of `p`.
pub fn occurs_ending_at_last(p: &[u32], q: &[u32]) -> bool {
    let k = q.len();
    let n = p.len();
    if k == 0 || k > n {
        return k == 0;
    }
    if k == 3 {
        return ends_at_last3(p, [q[0], q[1], q[2]]);
    }
    occurs_ending_at_last_generic(p, q)
}

pub fn occurs_ending_at_last_generic(p: &[u32], q: &[u32]) -> bool {
    let k = q.len();
    let n = p.len();
    if k == 0 || k > n {
        return k == 0;
    }
    // Fix the last pattern entry to position n-1 and search the rest in the prefix.
    let mut chosen = Vec::with_capacity(k);
    let last = n - 1;
    let prefix_ok = search_with_tail(p, q, last, &mut chosen);
    debug_assert!(!prefix_ok || chosen.len() == k);
    prefix_ok
}

fn consistent(p: &[u32], q: &[u32], chosen: &[usize], t: usize, idx: usize) -> bool {
    chosen
        .iter()
        .enumerate()
        .all(|(s, &c)| (p[c] < p[idx]) == (q[s] < q[t]))
}

/// Depth-first search over increasing index tuples within `0..limit`,
/// smallest indices first. `chosen` holds the witness on success.
fn search(p: &[u32], q: &[u32], limit: usize, chosen: &mut Vec<usize>) -> bool {
    let t = chosen.len();
    let k = q.len();
    if t == k {
        return true;
    }
    let start = chosen.last().map_or(0, |&c| c + 1);
    // Leave room for the remaining k - t - 1 entries.
    let end = limit.saturating_sub(k - t - 1);
    for idx in start..end {
        if consistent(p, q, chosen, t, idx) {
            chosen.push(idx);
            if search(p, q, limit, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn search_with_tail(p: &[u32], q: &[u32], tail: usize, chosen: &mut Vec<usize>) -> bool {
    let k = q.len();
    let t = chosen.len();
    if t == k - 1 {
        if consistent(p, q, chosen, t, tail) {
            chosen.push(tail);
            return true;
        }
        return false;
    }
    let start = chosen.last().map_or(0, |&c| c + 1);
    let end = tail.saturating_sub(k - 1 - t - 1);
    for idx in start..end {
        if consistent(p, q, chosen, t, idx) {
            chosen.push(idx);
            if search_with_tail(p, q, tail, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// O(n^2): for each middle position pick the most favourable left entry and
/// scan the right entries.
fn contains3(p: &[u32], q: [u32; 3]) -> bool {
    let n = p.len();
    let left_below_mid = q[0] < q[1];
    let right_below_mid = q[2] < q[1];
    let left_below_right = q[0] < q[2];
    for j in 1..n.saturating_sub(1) {
        let mid = p[j];
        // Among admissible left values, the one most likely to satisfy the
        // left/right relation: the minimum if left < right is wanted.
        let best_left = p[..j]
            .iter()
            .copied()
            .filter(|&v| (v < mid) == left_below_mid);
        let best_left = if left_below_right {
            best_left.min()
        } else {
            best_left.max()
        };
        let Some(left) = best_left else { continue };
        if p[j + 1..]
            .iter()
            .any(|&v| (v < mid) == right_below_mid && (left < v) == left_below_right)
        {
            return true;
        }
    }
    false
}

fn ends_at_last3(p: &[u32], q: [u32; 3]) -> bool {
    let last = p.len() - 1;
    let z = p[last];
    for j in 1..last {
        if (p[j] < z) != (q[1] < q[2]) {
            continue;
        }
        let y = p[j];
        if p[..j]
            .iter()
            .any(|&x| (x < y) == (q[0] < q[1]) && (x < z) == (q[0] < q[2]))
        {
            return true;
        }
    }
    false
}
