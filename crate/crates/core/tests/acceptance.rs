//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use ballotkit::bijections::{
    behead_231_321, excluded_element_213_321, from_dyck_prefix, insert_132_321, prepend_231_321,
    remove_132_321, to_dyck_prefix, unique_members, wilf_transport, WilfFamily,
};
use ballotkit::enumerate::{count_sequence, enumerate_oracle, enumerate_pruned};
use ballotkit::formulas::{
    binomial, caption_rule_132, formula_count, reference_prefix, registered_classes,
    stated_rule_213_312,
};
use ballotkit::{EnumerationRequest, Limits, Method, PatternSet, Permutation, StepWord};
use num_bigint::BigUint;

type Outcome = Result<(), String>;
type Check = fn() -> Outcome;
type Map = fn(&Permutation) -> ballotkit::Result<Permutation>;

fn pset(s: &str) -> PatternSet {
    s.parse().unwrap()
}

fn oracle(n: usize, class: &PatternSet, ballot: bool) -> Vec<Permutation> {
    let req = if ballot {
        EnumerationRequest::ballot(n, class.clone())
    } else {
        EnumerationRequest::unrestricted(n, class.clone())
    };
    enumerate_oracle(&req, &Limits::default()).unwrap()
}

fn pruned(n: usize, class: &PatternSet, limits: &Limits) -> Vec<Permutation> {
    enumerate_pruned(&EnumerationRequest::ballot(n, class.clone()), limits).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_reproduction() -> Outcome {
    let limits = Limits::default();
    let mut bad = Vec::new();
    for class in PatternSet::catalogued() {
        let table = reference_prefix(&class).ok_or(format!("no table row for {class}"))?;
        let len = table.counts.len();
        let got =
            count_sequence(&class, len, Method::Pruned, &limits).map_err(|e| e.to_string())?;
        if let Some(n) = (1..=len).find(|&n| got.get(n) != table.get(n)) {
            bad.push(format!(
                "{class} at n = {n}: enumerated {}, printed {}",
                got.get(n).unwrap(),
                table.get(n).unwrap()
            ));
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))
}

fn oracle_equivalence() -> Outcome {
    let limits = Limits::default();
    let mut classes = PatternSet::catalogued();
    classes.push(PatternSet::empty());
    for class in &classes {
        for n in 1..=8 {
            let o = oracle(n, class, true);
            let p = pruned(n, class, &limits);
            ensure(o == p, || {
                format!(
                    "{class} at n = {n}: oracle {} vs pruned {}",
                    o.len(),
                    p.len()
                )
            })?;
        }
    }
    Ok(())
}

fn formula_agreement() -> Outcome {
    let limits = Limits::default();
    for class in registered_classes() {
        let n_max = if class == pset("132") { 11 } else { 12 };
        let counted =
            count_sequence(&class, n_max, Method::Pruned, &limits).map_err(|e| e.to_string())?;
        for n in 1..=n_max {
            let f = formula_count(&class, n).map_err(|e| e.to_string())?;
            ensure(f.as_ref() == counted.get(n), || {
                format!(
                    "{class} at n = {n}: formula {f:?}, enumerated {:?}",
                    counted.get(n)
                )
            })?;
        }
    }
    for n in 3..=12u64 {
        let expect = BigUint::from(3u32) * binomial(2 * n - 2, n - 2) / BigUint::from(n + 1);
        ensure(
            formula_count(&pset("321"), n as usize).unwrap() == Some(expect),
            || format!("321 closed form at n = {n}"),
        )?;
        let expect = BigUint::from(3u32) << (n - 3);
        ensure(
            formula_count(&pset("312,321"), n as usize).unwrap() == Some(expect),
            || format!("312,321 closed form at n = {n}"),
        )?;
    }
    let fib = pset("231,312,321");
    let deep = limits.with_pruned_max_n(20);
    let counted = count_sequence(&fib, 20, Method::Pruned, &deep).map_err(|e| e.to_string())?;
    for n in 3..=20 {
        let (a, b, c) = (
            counted.get(n - 2).unwrap(),
            counted.get(n - 1).unwrap(),
            counted.get(n).unwrap(),
        );
        ensure(a + b == *c, || {
            format!("Fibonacci recurrence breaks at n = {n}")
        })?;
    }
    ensure(*counted.get(20).unwrap() == BigUint::from(6765u32), || {
        format!("a_20 = {}", counted.get(20).unwrap())
    })
}

fn dyck_bijection() -> Outcome {
    let limits = Limits::default();
    let class = pset("132,213");
    let golden: Permutation = "456312".parse().unwrap();
    let word: StepWord = "UUDDU".parse().unwrap();
    ensure(to_dyck_prefix(&golden).ok() == Some(word.clone()), || {
        "456312 -> UUDDU".into()
    })?;
    ensure(from_dyck_prefix(&word).ok() == Some(golden), || {
        "UUDDU -> 456312".into()
    })?;
    for n in 1..=12 {
        let members = pruned(n, &class, &limits);
        let expect = binomial(n as u64 - 1, (n as u64 - 1) / 2);
        ensure(BigUint::from(members.len()) == expect, || {
            format!("|B_{n}(132,213)| = {}, expected {expect}", members.len())
        })?;
        let mut words = BTreeSet::new();
        for p in &members {
            let w = to_dyck_prefix(p).map_err(|e| e.to_string())?;
            ensure(from_dyck_prefix(&w).ok().as_ref() == Some(p), || {
                format!("round trip of {p}")
            })?;
            words.insert(w.to_string());
        }
        let all: BTreeSet<String> = StepWord::ballot_words(n - 1)
            .iter()
            .map(|w| w.to_string())
            .collect();
        ensure(words == all, || {
            format!("image at n = {n} is not every ballot word")
        })?;
        for w in StepWord::ballot_words(n - 1) {
            let p = from_dyck_prefix(&w).map_err(|e| e.to_string())?;
            ensure(to_dyck_prefix(&p).ok() == Some(w.clone()), || {
                format!("round trip of {w}")
            })?;
        }
    }
    Ok(())
}

fn wilf_transports() -> Outcome {
    for family in WilfFamily::all() {
        for n in 1..=10 {
            let sets: Vec<Vec<Permutation>> =
                family.members.iter().map(|c| oracle(n, c, true)).collect();
            for (i, from) in family.members.iter().enumerate() {
                for (j, to) in family.members.iter().enumerate() {
                    let mut image = Vec::with_capacity(sets[i].len());
                    for p in &sets[i] {
                        let q = wilf_transport(p, from, to).map_err(|e| e.to_string())?;
                        ensure(q.descent_set() == p.descent_set(), || {
                            format!("{from} -> {to}: {p} -> {q} moves a descent")
                        })?;
                        image.push(q);
                    }
                    image.sort();
                    let before = image.len();
                    image.dedup();
                    ensure(before == image.len(), || {
                        format!("{from} -> {to} not injective at n = {n}")
                    })?;
                    ensure(image == sets[j], || {
                        format!("{from} -> {to} not onto at n = {n}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn insertion_maps() -> Outcome {
    for (class, forward, backward, size) in [
        (
            "132,321",
            insert_132_321 as Map,
            remove_132_321 as Map,
            (|n: u64| binomial(n, 2) + 1u32) as fn(u64) -> BigUint,
        ),
        ("231,321", prepend_231_321, behead_231_321, |n: u64| {
            BigUint::from(1u32) << (n - 1)
        }),
    ] {
        let class = pset(class);
        for n in 1..=8 {
            let source = oracle(n, &class, false);
            let target = oracle(n + 1, &class, true);
            let mut image = Vec::new();
            for s in &source {
                let t = forward(s).map_err(|e| e.to_string())?;
                ensure(backward(&t).ok().as_ref() == Some(s), || {
                    format!("{class}: {s} does not come back")
                })?;
                image.push(t);
            }
            image.sort();
            image.dedup();
            ensure(image == target, || {
                format!("{class} at n = {n}: image is not B_{}", n + 1)
            })?;
            ensure(BigUint::from(image.len()) == size(n as u64), || {
                format!("{class} at n = {n}: {} images", image.len())
            })?;
        }
    }
    ensure(excluded_element_213_321(2).is_ok(), || {
        "excluded element at n = 2".into()
    })
}

fn odd_123_property() -> Outcome {
    let limits = Limits::default();
    let class = pset("123");
    for n in (3..=11).step_by(2) {
        for p in pruned(n, &class, &limits) {
            ensure(p.at(n) == 1 || p.at(n - 2) == 1, || {
                format!("{p} has 1 elsewhere")
            })?;
        }
    }
    Ok(())
}

fn offset_corrections() -> Outcome {
    for (class, literal) in [
        ("132", caption_rule_132 as fn(usize) -> BigUint),
        ("213,312", stated_rule_213_312),
    ] {
        let class = pset(class);
        let counts: Vec<BigUint> = (1..=9)
            .map(|n| BigUint::from(oracle(n, &class, true).len()))
            .collect();
        for n in 1..=9 {
            let f = formula_count(&class, n).map_err(|e| e.to_string())?;
            ensure(f.as_ref() == Some(&counts[n - 1]), || {
                format!("{class} corrected rule at n = {n}")
            })?;
        }
        for (n, next) in counts.iter().enumerate().skip(1) {
            ensure(literal(n) == *next, || {
                format!("{class} literal rule at n = {n} is not a_{}", n + 1)
            })?;
        }
        ensure((1..=9).any(|n| literal(n) != counts[n - 1]), || {
            format!("{class} literal rule unexpectedly matches unshifted")
        })?;
    }
    Ok(())
}

fn unique_member_constructions() -> Outcome {
    for class in [
        "123,132",
        "123,213",
        "132,231",
        "132,213,231",
        "132,231,312",
        "132,231,321",
        "123,132,213",
    ] {
        let class = pset(class);
        for n in 1..=10 {
            let built = unique_members(&class, n).map_err(|e| e.to_string())?;
            let found = oracle(n, &class, true);
            ensure(built == found, || {
                format!(
                    "{class} at n = {n}: built {} members, oracle found {}",
                    built.len(),
                    found.len()
                )
            })?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("table reproduction", table_reproduction),
        ("oracle equivalence", oracle_equivalence),
        ("formula agreement", formula_agreement),
        ("Dyck bijection", dyck_bijection),
        ("Wilf transports", wilf_transports),
        ("insertion maps", insertion_maps),
        ("odd-length 123 property", odd_123_property),
        ("offset corrections", offset_corrections),
        ("unique-member constructions", unique_member_constructions),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
