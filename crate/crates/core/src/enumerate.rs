//! Enumeration of `B_n(S)` and `S_n(S)`.
//!
//! Two independent routes: [`enumerate_oracle`] filters all `n!`
//! permutations, [`enumerate_pruned`] grows permutations one entry at a time
//! and abandons a prefix as soon as it breaks the ballot condition or contains
//! a forbidden pattern. Both prune conditions are monotone under extension, so
//! the pruned search loses nothing. Both return lexicographic order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::error::{Error, Result};
use crate::pattern::{avoids_all_values, occurs_ending_at_last, PatternSet};
use crate::perm::{is_ballot_values, next_permutation, Permutation};

pub const DEFAULT_ORACLE_MAX_N: usize = 10;
pub const DEFAULT_PRUNED_MAX_N: usize = 16;

/// Below this length the search is cheaper than spawning tasks.
const PARALLEL_MIN_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Pruned,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::Pruned => "pruned",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "pruned" => Ok(Method::Pruned),
            _ => Err(Error::Parse {
                what: "enumeration method",
                input: s.into(),
                reason: "expected oracle or pruned".into(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub oracle_max_n: usize,
    pub pruned_max_n: usize,
    pub parallel: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            oracle_max_n: DEFAULT_ORACLE_MAX_N,
            pruned_max_n: DEFAULT_PRUNED_MAX_N,
            parallel: true,
        }
    }
}

impl Limits {
    pub fn sequential(self) -> Self {
        Self {
            parallel: false,
            ..self
        }
    }

    pub fn with_pruned_max_n(self, pruned_max_n: usize) -> Self {
        Self {
            pruned_max_n,
            ..self
        }
    }

    fn check(&self, method: Method, n: usize) -> Result<()> {
        let cap = match method {
            Method::Oracle => self.oracle_max_n,
            Method::Pruned => self.pruned_max_n,
        };
        if n > cap {
            return Err(Error::CapExceeded {
                method: match method {
                    Method::Oracle => "oracle",
                    Method::Pruned => "pruned",
                },
                n,
                cap,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationRequest {
    pub n: usize,
    pub pset: PatternSet,
    pub ballot_required: bool,
    pub method: Method,
}

impl EnumerationRequest {
    /// `B_n(pset)` via the pruned search.
    pub fn ballot(n: usize, pset: PatternSet) -> Self {
        Self {
            n,
            pset,
            ballot_required: true,
            method: Method::Pruned,
        }
    }

    /// `S_n(pset)`, no ballot condition.
    pub fn unrestricted(n: usize, pset: PatternSet) -> Self {
        Self {
            n,
            pset,
            ballot_required: false,
            method: Method::Pruned,
        }
    }

    pub fn with_method(self, method: Method) -> Self {
        Self { method, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Oracle,
    Pruned,
    Formula,
    /// Vendored published prefix.
    #[serde(rename = "paper-table")]
    Published,
}

impl From<Method> for Provenance {
    fn from(m: Method) -> Self {
        match m {
            Method::Oracle => Provenance::Oracle,
            Method::Pruned => Provenance::Pruned,
        }
    }
}

/// Counts `a_1, a_2, ...` of one class, with where they came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRecord {
    pub class: PatternSet,
    #[serde(with = "bigjson::vec")]
    pub counts: Vec<BigUint>,
    pub provenance: Provenance,
}

impl SequenceRecord {
    /// `a_n`, with `n` starting at 1.
    pub fn get(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|i| self.counts.get(i))
    }

    /// OEIS b-file body: one `n a(n)` line per term, newline-terminated.
    pub fn to_bfile(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{} {}\n", i + 1, c));
        }
        out
    }
}

pub fn enumerate(req: &EnumerationRequest, limits: &Limits) -> Result<Vec<Permutation>> {
    match req.method {
        Method::Oracle => enumerate_oracle(req, limits),
        Method::Pruned => enumerate_pruned(req, limits),
    }
}

pub fn count(req: &EnumerationRequest, limits: &Limits) -> Result<u64> {
    match req.method {
        Method::Oracle => Ok(enumerate_oracle(req, limits)?.len() as u64),
        Method::Pruned => count_pruned(req, limits),
    }
}

/// Filters every permutation of `[n]`.
pub fn enumerate_oracle(req: &EnumerationRequest, limits: &Limits) -> Result<Vec<Permutation>> {
    limits.check(Method::Oracle, req.n)?;
    let n = req.n;
    if n == 0 {
        return Ok(keep(&[], req)
            .then(Permutation::empty)
            .into_iter()
            .collect());
    }
    let block = |first: u32| -> Vec<Permutation> {
        let mut buf: Vec<u32> = std::iter::once(first)
            .chain((1..=n as u32).filter(|&v| v != first))
            .collect();
        let mut out = Vec::new();
        loop {
            if keep(&buf, req) {
                out.push(Permutation::from_vec_unchecked(buf.clone()));
            }
            if !next_permutation(&mut buf[1..]) {
                break;
            }
        }
        out
    };
    let firsts: Vec<u32> = (1..=n as u32).collect();
    let blocks: Vec<Vec<Permutation>> = if limits.parallel && n >= PARALLEL_MIN_N {
        firsts.into_par_iter().map(block).collect()
    } else {
        firsts.into_iter().map(block).collect()
    };
    Ok(blocks.into_iter().flatten().collect())
}

fn keep(values: &[u32], req: &EnumerationRequest) -> bool {
    (!req.ballot_required || is_ballot_values(values)) && avoids_all_values(values, &req.pset)
}

/// Position-by-position search, values tried in increasing order.
pub fn enumerate_pruned(req: &EnumerationRequest, limits: &Limits) -> Result<Vec<Permutation>> {
    limits.check(Method::Pruned, req.n)?;
    let run = |first: Option<u32>| {
        let mut out = Vec::new();
        Search::new(req).run(first, &mut |v| {
            out.push(Permutation::from_vec_unchecked(v.to_vec()))
        });
        out
    };
    Ok(partitioned(req.n, limits, run)
        .into_iter()
        .flatten()
        .collect())
}

/// Same traversal as [`enumerate_pruned`], keeping only the tally.
pub fn count_pruned(req: &EnumerationRequest, limits: &Limits) -> Result<u64> {
    limits.check(Method::Pruned, req.n)?;
    let run = |first: Option<u32>| {
        let mut c = 0u64;
        Search::new(req).run(first, &mut |_| c += 1);
        c
    };
    Ok(partitioned(req.n, limits, run).into_iter().sum())
}

/// Sequential pruned search handing each member to `visit` in lexicographic
/// order, without collecting.
pub fn stream_pruned(
    req: &EnumerationRequest,
    limits: &Limits,
    mut visit: impl FnMut(&[u32]),
) -> Result<()> {
    limits.check(Method::Pruned, req.n)?;
    Search::new(req).run(None, &mut visit);
    Ok(())
}

/// Splits the search tree at its first level. Results come back in
/// first-value order, so the merge is canonical regardless of scheduling.
fn partitioned<T: Send>(
    n: usize,
    limits: &Limits,
    run: impl Fn(Option<u32>) -> T + Sync,
) -> Vec<T> {
    if limits.parallel && n >= PARALLEL_MIN_N {
        (1..=n as u32)
            .into_par_iter()
            .map(|f| run(Some(f)))
            .collect()
    } else {
        vec![run(None)]
    }
}

struct Search<'a> {
    n: usize,
    req: &'a EnumerationRequest,
    prefix: Vec<u32>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(req: &'a EnumerationRequest) -> Self {
        Self {
            n: req.n,
            req,
            prefix: Vec::with_capacity(req.n),
            used: vec![false; req.n + 1],
        }
    }

    fn run(&mut self, first: Option<u32>, visit: &mut dyn FnMut(&[u32])) {
        if self.n == 0 {
            if keep(&[], self.req) {
                visit(&[]);
            }
            return;
        }
        match first {
            Some(v) => self.try_push(v, 0, visit),
            None => self.extend(0, visit),
        }
    }

    fn extend(&mut self, height: i64, visit: &mut dyn FnMut(&[u32])) {
        if self.prefix.len() == self.n {
            visit(&self.prefix);
            return;
        }
        for v in 1..=self.n as u32 {
            if !self.used[v as usize] {
                self.try_push(v, height, visit);
            }
        }
    }

    fn try_push(&mut self, v: u32, height: i64, visit: &mut dyn FnMut(&[u32])) {
        let height = match self.prefix.last() {
            Some(&last) if last < v => height + 1,
            Some(_) => height - 1,
            None => height,
        };
        if self.req.ballot_required && height < 0 {
            return;
        }
        self.prefix.push(v);
        // Any new occurrence must end at the entry just added.
        let clean = self
            .req
            .pset
            .patterns()
            .iter()
            .all(|q| !occurs_ending_at_last(&self.prefix, q.values()));
        let clean = clean && {
            self.used[v as usize] = true;
            let open = self
                .req
                .pset
                .patterns()
                .iter()
                .all(|q| !forced_completion(&self.prefix, q.values(), &self.used));
            self.used[v as usize] = false;
            open
        };
        if clean {
            self.used[v as usize] = true;
            self.extend(height, visit);
            self.used[v as usize] = false;
        }
        self.prefix.pop();
    }
}

/// `a_1..a_{n_max}` of `B_n(pset)` by the chosen enumerator.
pub fn count_sequence(
    pset: &PatternSet,
    n_max: usize,
    method: Method,
    limits: &Limits,
) -> Result<SequenceRecord> {
    if n_max < 1 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let counts = (1..=n_max)
        .map(|n| {
            let req = EnumerationRequest::ballot(n, pset.clone()).with_method(method);
            count(&req, limits).map(BigUint::from)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceRecord {
        class: pset.clone(),
        counts,
        provenance: method.into(),
    })
}

/// Whether the entry just added ends an occurrence of `q` minus its last
/// letter for which some unused value would finish the pattern. Every unused
/// value lands after the prefix, so such a prefix has no avoiding completion.
fn forced_completion(prefix: &[u32], q: &[u32], used: &[bool]) -> bool {
    let k = q.len();
    if k < 2 || prefix.len() < k - 1 {
        return false;
    }
    let mut chosen = Vec::with_capacity(k - 1);
    completes(prefix, q, used, &mut chosen)
}

fn completes(prefix: &[u32], q: &[u32], used: &[bool], chosen: &mut Vec<usize>) -> bool {
    let k = q.len();
    let last = prefix.len() - 1;
    let t = chosen.len();
    if t == k - 1 {
        let top = q[k - 1];
        let mut lo = 0;
        let mut hi = used.len() as u32;
        for (s, &c) in chosen.iter().enumerate() {
            if q[s] < top {
                lo = lo.max(prefix[c]);
            } else {
                hi = hi.min(prefix[c]);
            }
        }
        return (lo + 1..hi).any(|r| !used[r as usize]);
    }
    let fits = |chosen: &[usize], idx: usize| {
        chosen
            .iter()
            .enumerate()
            .all(|(s, &c)| (prefix[c] < prefix[idx]) == (q[s] < q[t]))
    };
    if t == k - 2 {
        if !fits(chosen, last) {
            return false;
        }
        chosen.push(last);
        let hit = completes(prefix, q, used, chosen);
        chosen.pop();
        return hit;
    }
    let start = chosen.last().map_or(0, |&c| c + 1);
    for idx in start..last.saturating_sub(k - 3 - t) {
        if fits(chosen, idx) {
            chosen.push(idx);
            let hit = completes(prefix, q, used, chosen);
            chosen.pop();
            if hit {
                return true;
            }
        }
    }
    false
}
