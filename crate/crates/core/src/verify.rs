//! Cross-checking harness: published tables, counting rules and bijections
//! against enumeration.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::bijections::{
    behead_231_321, excluded_element_213_321, from_dyck_prefix, generate_312_321, generate_fib,
    insert_132_321, perm_from_word, prepend_231_321, remove_132_321, to_dyck_prefix,
    unique_members, wilf_transport, WilfFamily,
};
use crate::enumerate::{self, EnumerationRequest, Limits, Method};
use crate::error::{Error, Result};
use crate::formulas::{self, binomial};
use crate::pattern::PatternSet;
use crate::perm::{descent_set, Permutation, StepWord};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Tables,
    Formulas,
    Bijections,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Tables => "tables",
            Suite::Formulas => "formulas",
            Suite::Bijections => "bijections",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tables" => Ok(Suite::Tables),
            "formulas" => Ok(Suite::Formulas),
            "bijections" => Ok(Suite::Bijections),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse {
                what: "suite",
                input: s.into(),
                reason: "expected tables, formulas, bijections or all".into(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One row of a report: one class under one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassResult {
    pub check: String,
    pub class: PatternSet,
    pub n_min: usize,
    pub n_max: usize,
    #[serde(with = "bigjson::option_vec", default)]
    pub oracle_counts: Option<Vec<BigUint>>,
    #[serde(with = "bigjson::option_vec", default)]
    pub pruned_counts: Option<Vec<BigUint>>,
    #[serde(with = "bigjson::option_vec", default)]
    pub formula_counts: Option<Vec<BigUint>>,
    #[serde(with = "bigjson::option_vec", default)]
    pub table_prefix: Option<Vec<BigUint>>,
    pub status: Status,
    /// Smallest `n` at which the check failed.
    pub first_failure: Option<usize>,
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub class: PatternSet,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: Suite,
    pub n_max: usize,
    pub results: Vec<ClassResult>,
    pub pass: bool,
    pub minimal_failure: Option<Failure>,
}

impl VerificationReport {
    fn from_results(suite: Suite, n_max: usize, results: Vec<ClassResult>) -> Self {
        let pass = results.iter().all(|r| r.status == Status::Pass);
        let minimal_failure = results
            .iter()
            .filter_map(|r| {
                r.first_failure.map(|n| Failure {
                    check: r.check.clone(),
                    class: r.class.clone(),
                    n,
                })
            })
            .min_by_key(|f| f.n);
        Self {
            schema_version: SCHEMA_VERSION,
            suite,
            n_max,
            results,
            pass,
            minimal_failure,
        }
    }
}

pub fn run(suite: Suite, n_max: usize, limits: &Limits) -> Result<VerificationReport> {
    let results = match suite {
        Suite::Tables => tables(n_max, limits)?,
        Suite::Formulas => formula_rows(n_max, limits)?,
        Suite::Bijections => bijection_rows(n_max, limits)?,
        Suite::All => {
            let mut v = tables(n_max, limits)?;
            v.extend(formula_rows(n_max, limits)?);
            v.extend(bijection_rows(n_max, limits)?);
            v
        }
    };
    Ok(VerificationReport::from_results(suite, n_max, results))
}

fn counts(pset: &PatternSet, upto: usize, method: Method, limits: &Limits) -> Result<Vec<BigUint>> {
    (1..=upto)
        .map(|n| {
            let req = EnumerationRequest::ballot(n, pset.clone()).with_method(method);
            enumerate::count(&req, limits).map(BigUint::from)
        })
        .collect()
}

/// First 1-based index at which two available sequences differ.
fn first_disagreement(sources: &[&Option<Vec<BigUint>>]) -> Option<usize> {
    let present: Vec<&Vec<BigUint>> = sources.iter().filter_map(|s| s.as_ref()).collect();
    let len = present.iter().map(|s| s.len()).max().unwrap_or(0);
    (0..len).find_map(|i| {
        let mut vals = present.iter().filter_map(|s| s.get(i));
        let first = vals.next()?;
        vals.any(|v| v != first).then_some(i + 1)
    })
}

/// Every catalogued class over the printed range of its table row.
fn tables(n_max: usize, limits: &Limits) -> Result<Vec<ClassResult>> {
    let mut rows = Vec::new();
    for class in PatternSet::catalogued() {
        let start = Instant::now();
        let table = formulas::reference_prefix(&class).expect("catalogued");
        let upto = n_max.min(table.counts.len());
        let oracle = Some(counts(
            &class,
            upto.min(limits.oracle_max_n),
            Method::Oracle,
            limits,
        )?);
        let pruned = Some(counts(&class, upto, Method::Pruned, limits)?);
        let formula = formulas::lookup(&class)
            .filter(|f| f.kind != formulas::RuleKind::ReferencePrefixOnly)
            .map(|f| (1..=upto).map(|n| f.eval(n).expect("registered")).collect());
        let table_prefix = Some(table.counts[..upto].to_vec());
        let first_failure = first_disagreement(&[&oracle, &pruned, &formula, &table_prefix]);
        rows.push(ClassResult {
            check: "table".into(),
            class,
            n_min: 1,
            n_max: upto,
            oracle_counts: oracle,
            pruned_counts: pruned,
            formula_counts: formula,
            table_prefix,
            status: if first_failure.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            first_failure,
            detail: None,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
    Ok(rows)
}

fn formula_rows(n_max: usize, limits: &Limits) -> Result<Vec<ClassResult>> {
    let mut rows = Vec::new();
    for class in formulas::registered_classes() {
        let start = Instant::now();
        let pruned = Some(counts(&class, n_max, Method::Pruned, limits)?);
        let formula = Some(
            (1..=n_max)
                .map(|n| formulas::formula_count(&class, n).map(|c| c.expect("registered")))
                .collect::<Result<Vec<_>>>()?,
        );
        let first_failure = first_disagreement(&[&pruned, &formula]);
        rows.push(ClassResult {
            check: "formula".into(),
            class,
            n_min: 1,
            n_max,
            oracle_counts: None,
            pruned_counts: pruned,
            formula_counts: formula,
            table_prefix: None,
            status: if first_failure.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            first_failure,
            detail: None,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
    Ok(rows)
}

/// Reference enumeration for the bijection checks: the oracle where the cap
/// allows it, the pruned search beyond.
fn members(
    n: usize,
    class: &PatternSet,
    ballot: bool,
    limits: &Limits,
) -> Result<Vec<Permutation>> {
    let method = if n <= limits.oracle_max_n {
        Method::Oracle
    } else {
        Method::Pruned
    };
    let req = EnumerationRequest {
        n,
        pset: class.clone(),
        ballot_required: ballot,
        method,
    };
    enumerate::enumerate(&req, limits)
}

type Check<'a> = Box<dyn Fn(usize) -> Result<std::result::Result<(), String>> + 'a>;

fn bijection_row(
    check: &str,
    class: &str,
    n_min: usize,
    n_max: usize,
    f: Check<'_>,
) -> Result<ClassResult> {
    let start = Instant::now();
    let mut first_failure = None;
    let mut detail = None;
    for n in n_min..=n_max {
        if let Err(why) = f(n)? {
            first_failure = Some(n);
            detail = Some(why);
            break;
        }
    }
    Ok(ClassResult {
        check: check.into(),
        class: class.parse()?,
        n_min,
        n_max,
        oracle_counts: None,
        pruned_counts: None,
        formula_counts: None,
        table_prefix: None,
        status: if first_failure.is_some() {
            Status::Fail
        } else {
            Status::Pass
        },
        first_failure,
        detail,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn sorted(mut v: Vec<Permutation>) -> Vec<Permutation> {
    v.sort();
    v
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Checks that `map` sends `domain` bijectively onto `codomain` and that
/// `inverse` undoes it.
fn bijects(
    domain: &[Permutation],
    codomain: &[Permutation],
    map: impl Fn(&Permutation) -> Result<Permutation>,
    inverse: impl Fn(&Permutation) -> Result<Permutation>,
) -> Result<std::result::Result<(), String>> {
    let mut image = Vec::with_capacity(domain.len());
    for p in domain {
        let q = map(p)?;
        if inverse(&q)? != *p {
            return Ok(Err(format!("inverse does not undo the map at {p}")));
        }
        image.push(q);
    }
    Ok(ensure(sorted(image) == sorted(codomain.to_vec()), || {
        "image differs from the target class".into()
    }))
}

fn bijection_rows(n_max: usize, limits: &Limits) -> Result<Vec<ClassResult>> {
    let mut rows = Vec::new();
    let dyck: PatternSet = "132,213".parse()?;

    rows.push(bijection_row(
        "dyck-bijection",
        "132,213",
        1,
        n_max,
        Box::new(|n| {
            let ms = members(n, &dyck, true, limits)?;
            for p in &ms {
                if from_dyck_prefix(&to_dyck_prefix(p)?)? != *p {
                    return Ok(Err(format!("round trip fails at {p}")));
                }
            }
            let words = StepWord::ballot_words(n - 1);
            for w in &words {
                if to_dyck_prefix(&from_dyck_prefix(w)?)? != *w {
                    return Ok(Err(format!("round trip fails at word {w}")));
                }
            }
            let expected = binomial(n as u64 - 1, (n as u64 - 1) / 2);
            Ok(ensure(
                BigUint::from(ms.len()) == expected && words.len() == ms.len(),
                || {
                    format!(
                        "|B_n| = {}, ballot words = {}, binomial = {expected}",
                        ms.len(),
                        words.len()
                    )
                },
            ))
        }),
    )?);

    for family in WilfFamily::all() {
        for class in &family.members {
            let key = class.to_string();
            rows.push(bijection_row(
                "descent-word-round-trip",
                &key,
                1,
                n_max,
                Box::new(|n| {
                    for p in members(n, class, true, limits)? {
                        if perm_from_word(class, &p.descent_word())? != p {
                            return Ok(Err(format!("word of {p} rebuilds something else")));
                        }
                    }
                    Ok(Ok(()))
                }),
            )?);
            for target in family.members.iter().filter(|t| *t != class) {
                let key = format!("{class}");
                let check = format!("wilf-transport-to:{target}");
                rows.push(bijection_row(
                    &check,
                    &key,
                    1,
                    n_max,
                    Box::new(|n| {
                        let src = members(n, class, true, limits)?;
                        let dst = members(n, target, true, limits)?;
                        for p in &src {
                            let q = wilf_transport(p, class, target)?;
                            if descent_set(&q) != descent_set(p) {
                                return Ok(Err(format!("{p} -> {q} moves a descent")));
                            }
                        }
                        bijects(
                            &src,
                            &dst,
                            |p| wilf_transport(p, class, target),
                            |q| wilf_transport(q, target, class),
                        )
                    }),
                )?);
            }
        }
    }

    let c132_321: PatternSet = "132,321".parse()?;
    rows.push(bijection_row(
        "insert-second-entry",
        "132,321",
        1,
        n_max.saturating_sub(1),
        Box::new(|n| {
            let dom = members(n, &c132_321, false, limits)?;
            let cod = members(n + 1, &c132_321, true, limits)?;
            let expected = binomial(n as u64, 2) + 1u32;
            if BigUint::from(cod.len()) != expected {
                return Ok(Err(format!(
                    "|B_(n+1)| = {} but binom(n,2)+1 = {expected}",
                    cod.len()
                )));
            }
            bijects(&dom, &cod, insert_132_321, remove_132_321)
        }),
    )?);

    let c231_321: PatternSet = "231,321".parse()?;
    rows.push(bijection_row(
        "prepend-minimum",
        "231,321",
        1,
        n_max.saturating_sub(1),
        Box::new(|n| {
            let dom = members(n, &c231_321, false, limits)?;
            let cod = members(n + 1, &c231_321, true, limits)?;
            if cod.len() != 1 << (n - 1) {
                return Ok(Err(format!(
                    "|B_(n+1)| = {} but 2^(n-1) = {}",
                    cod.len(),
                    1u64 << (n - 1)
                )));
            }
            bijects(&dom, &cod, prepend_231_321, behead_231_321)
        }),
    )?);

    let c213_321: PatternSet = "213,321".parse()?;
    rows.push(bijection_row(
        "excluded-element",
        "213,321",
        2,
        n_max,
        Box::new(|n| {
            let all: BTreeSet<Permutation> =
                members(n, &c213_321, false, limits)?.into_iter().collect();
            let ballot: BTreeSet<Permutation> =
                members(n, &c213_321, true, limits)?.into_iter().collect();
            let missing: Vec<&Permutation> = all.difference(&ballot).collect();
            let excluded = excluded_element_213_321(n)?;
            Ok(ensure(missing == [&excluded], || {
                format!("non-ballot members: {missing:?}")
            }))
        }),
    )?);

    let c312_321: PatternSet = "312,321".parse()?;
    rows.push(bijection_row(
        "max-insertion-generator",
        "312,321",
        1,
        n_max,
        Box::new(|n| {
            let generated = generate_312_321(n);
            let expected = members(n, &c312_321, true, limits)?;
            Ok(ensure(sorted(generated) == expected, || {
                "generated set differs".into()
            }))
        }),
    )?);

    let fib: PatternSet = "231,312,321".parse()?;
    rows.push(bijection_row(
        "fibonacci-generator",
        "231,312,321",
        1,
        n_max,
        Box::new(|n| {
            let generated = generate_fib(n);
            let expected = members(n, &fib, true, limits)?;
            Ok(ensure(sorted(generated) == expected, || {
                "generated set differs".into()
            }))
        }),
    )?);

    for class in [
        "123,132",
        "123,213",
        "132,231",
        "123,132,213",
        "132,213,231",
        "132,231,312",
        "132,231,321",
    ] {
        let pset: PatternSet = class.parse()?;
        rows.push(bijection_row(
            "unique-members",
            class,
            1,
            n_max,
            Box::new(move |n| {
                let built = unique_members(&pset, n)?;
                let expected = members(n, &pset, true, limits)?;
                Ok(ensure(built == expected, || {
                    format!("built {built:?}, enumerated {expected:?}")
                }))
            }),
        )?);
    }

    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_table_pass() {
        let r = run(Suite::Tables, 1, &Limits::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.results.len(), 41);
        assert!(r
            .results
            .iter()
            .all(|row| row.pruned_counts.as_deref() == Some(&[BigUint::from(1u32)][..])));
    }

    #[test]
    fn bijection_suite_passes() {
        let r = run(Suite::Bijections, 7, &Limits::default()).unwrap();
        let failing: Vec<_> = r
            .results
            .iter()
            .filter(|x| x.status == Status::Fail)
            .collect();
        assert!(failing.is_empty(), "{failing:#?}");
    }

    #[test]
    fn report_round_trips() {
        let r = run(Suite::Formulas, 4, &Limits::default()).unwrap();
        assert!(r.pass);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            serde_json::from_str::<VerificationReport>(&json).unwrap(),
            r
        );
    }

    #[test]
    fn disagreement_index() {
        let a = Some(vec![BigUint::from(1u32), BigUint::from(2u32)]);
        let b = Some(vec![BigUint::from(1u32), BigUint::from(3u32)]);
        assert_eq!(first_disagreement(&[&a, &None, &b]), Some(2));
        assert_eq!(first_disagreement(&[&a, &a]), None);
    }
}
