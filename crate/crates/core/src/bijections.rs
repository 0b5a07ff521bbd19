//! Constructive maps between avoidance classes.
//!
//! For the nine classes below, a member of `B_n(S)` is determined by its
//! descent word, so every class-to-class map goes through the word: read the
//! word off the source permutation and rebuild the unique target member with
//! [`perm_from_word`].

use std::collections::HashSet;

use crate::enumerate::{enumerate_pruned, EnumerationRequest, Limits};
use crate::error::{Error, Result};
use crate::pattern::{find_occurrence, PatternSet};
use crate::perm::{descent_word, direct_sum, skew_sum, standardize, Permutation, Step, StepWord};

/// How a class rebuilds a member from its descent word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Builder {
    /// Skew sum of increasing runs, a run ending at every `D`.
    SkewOfRuns,
    /// Each entry is the least (`U`) or greatest (`D`) value not yet used.
    SuffixExtremes,
    /// Direct sum of decreasing runs, a run ending at every `U`.
    DirectOfFalls,
    /// Each entry after the first is a new maximum (`U`) or new minimum (`D`)
    /// of the prefix.
    PrefixExtremes,
}

/// Which descent words a class realises beyond the ballot condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Any,
    /// `U^a D^b`.
    RiseThenFall,
    /// At most one `D`.
    SingleDescent,
}

const DESCENT_WORD_CLASSES: &[(&str, Builder, Shape)] = &[
    ("132,213", Builder::SkewOfRuns, Shape::Any),
    ("213,231", Builder::SuffixExtremes, Shape::Any),
    ("231,312", Builder::DirectOfFalls, Shape::Any),
    ("132,312", Builder::PrefixExtremes, Shape::Any),
    ("132,213,312", Builder::SkewOfRuns, Shape::RiseThenFall),
    ("213,231,312", Builder::DirectOfFalls, Shape::RiseThenFall),
    ("132,213,321", Builder::SkewOfRuns, Shape::SingleDescent),
    ("132,312,321", Builder::PrefixExtremes, Shape::SingleDescent),
    ("213,231,321", Builder::SuffixExtremes, Shape::SingleDescent),
];

fn descent_word_class(pset: &PatternSet) -> Option<(Builder, Shape)> {
    DESCENT_WORD_CLASSES
        .iter()
        .find(|(c, _, _)| c.parse::<PatternSet>().ok().as_ref() == Some(pset))
        .map(|&(_, b, s)| (b, s))
}

/// Classes whose ballot members are in descent-preserving bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WilfFamily {
    pub members: Vec<PatternSet>,
    pub canonical_member: PatternSet,
}

impl WilfFamily {
    pub fn all() -> Vec<WilfFamily> {
        crate::formulas::wilf_families()
            .into_iter()
            .map(|members| WilfFamily {
                canonical_member: members[0].clone(),
                members,
            })
            .collect()
    }

    pub fn of(pset: &PatternSet) -> Option<WilfFamily> {
        Self::all().into_iter().find(|f| f.members.contains(pset))
    }
}

/// `Ok` when `p` avoids `pset` (and is ballot, if asked); otherwise a
/// `NotMember` error naming the first violated pattern and its witness.
pub fn require_member(p: &Permutation, pset: &PatternSet, ballot: bool) -> Result<()> {
    let class = if ballot {
        format!("B({pset})")
    } else {
        format!("S({pset})")
    };
    for q in pset.patterns() {
        if let Some(at) = find_occurrence(p, q) {
            return Err(Error::NotMember {
                perm: p.to_string(),
                class,
                reason: format!("contains {q} at positions {at:?}"),
            });
        }
    }
    if ballot && !p.is_ballot() {
        return Err(Error::NotMember {
            perm: p.to_string(),
            class,
            reason: "not a ballot permutation".into(),
        });
    }
    Ok(())
}

fn runs(w: &StepWord, cut: Step) -> Vec<usize> {
    let mut sizes = vec![1];
    for &s in w.steps() {
        if s == cut {
            sizes.push(1);
        } else {
            *sizes.last_mut().unwrap() += 1;
        }
    }
    sizes
}

fn build(builder: Builder, w: &StepWord) -> Vec<u32> {
    let n = w.len() as u32 + 1;
    match builder {
        Builder::SkewOfRuns => {
            let mut top = n;
            let mut out = Vec::with_capacity(n as usize);
            for k in runs(w, Step::D) {
                let k = k as u32;
                out.extend(top - k + 1..=top);
                top -= k;
            }
            out
        }
        Builder::DirectOfFalls => {
            let mut bottom = 0;
            let mut out = Vec::with_capacity(n as usize);
            for k in runs(w, Step::U) {
                let k = k as u32;
                out.extend((bottom + 1..=bottom + k).rev());
                bottom += k;
            }
            out
        }
        Builder::SuffixExtremes => {
            let (mut lo, mut hi) = (1, n);
            let mut out = Vec::with_capacity(n as usize);
            for &s in w.steps() {
                if s == Step::U {
                    out.push(lo);
                    lo += 1;
                } else {
                    out.push(hi);
                    hi -= 1;
                }
            }
            out.push(lo);
            out
        }
        Builder::PrefixExtremes => {
            let first = w.count(Step::D) as u32 + 1;
            let (mut lo, mut hi) = (first, first);
            let mut out = vec![first];
            for &s in w.steps() {
                if s == Step::U {
                    hi += 1;
                    out.push(hi);
                } else {
                    lo -= 1;
                    out.push(lo);
                }
            }
            out
        }
    }
}

fn shape_ok(shape: Shape, w: &StepWord) -> bool {
    let s = w.steps();
    match shape {
        Shape::Any => true,
        Shape::RiseThenFall => s.windows(2).all(|p| !(p[0] == Step::D && p[1] == Step::U)),
        Shape::SingleDescent => w.count(Step::D) <= 1,
    }
}

/// The unique member of `B_{|w|+1}(pset)` with descent word `w`.
pub fn perm_from_word(pset: &PatternSet, w: &StepWord) -> Result<Permutation> {
    let (builder, shape) = descent_word_class(pset).ok_or_else(|| Error::UnsupportedClass {
        class: pset.clone(),
        operation: "perm_from_word",
    })?;
    if !w.is_ballot() || !shape_ok(shape, w) {
        return Err(Error::UnrealizableWord {
            class: pset.clone(),
            word: w.to_string(),
        });
    }
    let p = Permutation::from_vec_unchecked(build(builder, w));
    debug_assert_eq!(descent_word(&p), *w);
    debug_assert!(require_member(&p, pset, true).is_ok(), "{p} {pset}");
    Ok(p)
}

/// Moves `p` between classes of one family, keeping every descent in place.
pub fn wilf_transport(p: &Permutation, from: &PatternSet, to: &PatternSet) -> Result<Permutation> {
    let family = WilfFamily::of(from).ok_or_else(|| Error::UnsupportedClass {
        class: from.clone(),
        operation: "wilf_transport",
    })?;
    if !family.members.contains(to) {
        return Err(Error::UnsupportedClass {
            class: to.clone(),
            operation: "wilf_transport (target outside the source family)",
        });
    }
    require_member(p, from, true)?;
    if p.is_empty() {
        return Ok(Permutation::empty());
    }
    perm_from_word(to, &descent_word(p))
}

fn dyck_class() -> PatternSet {
    "132,213".parse().unwrap()
}

/// Member of `B_n(132,213)` to its ballot word of length `n - 1`.
pub fn to_dyck_prefix(p: &Permutation) -> Result<StepWord> {
    if p.is_empty() {
        return Err(Error::InvalidInput("the Dyck map needs n >= 1".into()));
    }
    require_member(p, &dyck_class(), true)?;
    Ok(descent_word(p))
}

pub fn from_dyck_prefix(w: &StepWord) -> Result<Permutation> {
    if !w.is_ballot() {
        return Err(Error::InvalidInput(format!("{w} is not a ballot word")));
    }
    perm_from_word(&dyck_class(), w)
}

fn require_nonempty(p: &Permutation, what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{what} needs a nonempty permutation"
        )));
    }
    Ok(())
}

/// `S_n(132,321) -> B_{n+1}(132,321)`: put `s(1) + 1` in second position,
/// raising every larger value by one.
pub fn insert_132_321(s: &Permutation) -> Result<Permutation> {
    require_nonempty(s, "insert_132_321")?;
    require_member(s, &"132,321".parse().unwrap(), false)?;
    let first = s.at(1);
    let mut out = Vec::with_capacity(s.len() + 1);
    out.push(first);
    out.push(first + 1);
    out.extend(
        s.values()[1..]
            .iter()
            .map(|&v| if v > first { v + 1 } else { v }),
    );
    Ok(Permutation::from_vec_unchecked(out))
}

/// Inverse of [`insert_132_321`]: drop the second entry and standardize.
pub fn remove_132_321(t: &Permutation) -> Result<Permutation> {
    if t.len() < 2 {
        return Err(Error::InvalidInput("remove_132_321 needs n >= 2".into()));
    }
    require_member(t, &"132,321".parse().unwrap(), true)?;
    let rest: Vec<u32> = std::iter::once(t.at(1))
        .chain(t.values()[2..].iter().copied())
        .collect();
    standardize(&rest)
}

/// `S_n(231,321) -> B_{n+1}(231,321)`: prepend a new minimum.
pub fn prepend_231_321(s: &Permutation) -> Result<Permutation> {
    require_member(s, &"231,321".parse().unwrap(), false)?;
    Ok(direct_sum(&Permutation::identity(1), s))
}

/// Inverse of [`prepend_231_321`]; members of `B_{n+1}(231,321)` start with 1.
pub fn behead_231_321(t: &Permutation) -> Result<Permutation> {
    require_nonempty(t, "behead_231_321")?;
    require_member(t, &"231,321".parse().unwrap(), true)?;
    if t.at(1) != 1 {
        return Err(Error::InvalidInput(format!("{t} does not start with 1")));
    }
    Ok(Permutation::from_vec_unchecked(
        t.values()[1..].iter().map(|&v| v - 1).collect(),
    ))
}

/// `n 1 2 ... (n-1)`, the one member of `S_n(213,321)` that is not ballot.
pub fn excluded_element_213_321(n: usize) -> Result<Permutation> {
    if n < 2 {
        return Err(Error::InvalidInput("excluded element needs n >= 2".into()));
    }
    Ok(Permutation::from_vec_unchecked(
        std::iter::once(n as u32).chain(1..n as u32).collect(),
    ))
}

fn small_class(n: usize, class: &str) -> Vec<Permutation> {
    let req = EnumerationRequest::ballot(n, class.parse().unwrap());
    enumerate_pruned(&req, &Limits::default().sequential()).expect("n <= 3")
}

/// `B_n(312,321)` by inserting the new maximum just before or just after the
/// last entry of each member of `B_{n-1}(312,321)`. Sizes up to 3 are
/// enumerated directly.
pub fn generate_312_321(n: usize) -> Vec<Permutation> {
    if n <= 3 {
        return small_class(n, "312,321");
    }
    let mut level = small_class(3, "312,321");
    for m in 3..n {
        let top = m as u32 + 1;
        let mut next = Vec::with_capacity(level.len() * 2);
        for sigma in &level {
            let v = sigma.values();
            let (body, last) = v.split_at(v.len() - 1);
            let mut before: Vec<u32> = body.to_vec();
            before.push(top);
            before.push(last[0]);
            let mut after = v.to_vec();
            after.push(top);
            next.push(Permutation::from_vec_unchecked(before));
            next.push(Permutation::from_vec_unchecked(after));
        }
        debug_assert_eq!(
            next.iter().collect::<HashSet<_>>().len(),
            next.len(),
            "children of distinct parents collide"
        );
        level = next;
    }
    level
}

/// `B_n(231,312,321)` as `{σ n : σ ∈ B_{n-1}} ∪ {τ n (n-1) : τ ∈ B_{n-2}}`.
pub fn generate_fib(n: usize) -> Vec<Permutation> {
    match n {
        0 => return vec![Permutation::empty()],
        1 => return vec![Permutation::identity(1)],
        _ => {}
    }
    let mut older = vec![Permutation::identity(1)];
    let mut newer = vec![Permutation::identity(2)];
    for m in 3..=n as u32 {
        let mut next = Vec::with_capacity(older.len() + newer.len());
        for sigma in &newer {
            let mut v = sigma.values().to_vec();
            v.push(m);
            next.push(Permutation::from_vec_unchecked(v));
        }
        for tau in &older {
            let mut v = tau.values().to_vec();
            v.push(m);
            v.push(m - 1);
            next.push(Permutation::from_vec_unchecked(v));
        }
        older = std::mem::replace(&mut newer, next);
    }
    newer
}

/// `(12) ⊖ (12) ⊖ ... ⊖ (12)` with `pairs` factors.
fn chain_of_pairs(pairs: usize) -> Permutation {
    let twelve = Permutation::identity(2);
    (0..pairs).fold(Permutation::empty(), |acc, _| skew_sum(&acc, &twelve))
}

fn stairs(n: usize) -> Permutation {
    if n.is_multiple_of(2) {
        chain_of_pairs(n / 2)
    } else {
        skew_sum(&chain_of_pairs(n / 2), &Permutation::identity(1))
    }
}

/// Explicit members of the classes whose ballot members are one or two
/// specific permutations.
pub fn unique_members(pset: &PatternSet, n: usize) -> Result<Vec<Permutation>> {
    let key = pset.to_string();
    let mut out = match key.as_str() {
        "123,132" | "123,132,213" => vec![stairs(n)],
        "123,213" => {
            let mut v = vec![stairs(n)];
            if n % 2 == 1 && n >= 3 {
                let tail: Permutation = "132".parse().unwrap();
                v.push(skew_sum(&chain_of_pairs((n - 3) / 2), &tail));
            }
            v
        }
        "132,231" | "132,213,231" | "132,231,312" | "132,231,321" => {
            vec![Permutation::identity(n)]
        }
        _ => {
            return Err(Error::UnsupportedClass {
                class: pset.clone(),
                operation: "unique_members",
            })
        }
    };
    out.sort();
    Ok(out)
}
