use ballotkit::enumerate::enumerate_oracle;
use ballotkit::pattern::{
    contains, find_occurrence, occurs_ending_at_last, occurs_ending_at_last_generic,
};
use ballotkit::perm::{direct_sum, skew_sum, standardize};
use ballotkit::{EnumerationRequest, Limits, Pattern, PatternSet, Permutation, Step, StepWord};
use proptest::prelude::*;

/// Containment by trying every subsequence, independent of the library search.
fn naive_contains(p: &[u32], q: &[u32]) -> bool {
    let (n, k) = (p.len(), q.len());
    if k > n {
        return false;
    }
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .any(|mask| {
            let sub: Vec<u32> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| p[i])
                .collect();
            (0..k).all(|a| (0..k).all(|b| (sub[a] < sub[b]) == (q[a] < q[b])))
        })
}

fn perm_strategy(max: usize) -> impl Strategy<Value = Permutation> {
    (0..=max)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn all_perms(n: usize) -> Vec<Permutation> {
    enumerate_oracle(
        &EnumerationRequest::unrestricted(n, PatternSet::empty()),
        &Limits::default(),
    )
    .unwrap()
}

#[test]
fn ballot_iff_descent_word_is_ballot() {
    for n in 0..=8 {
        for p in all_perms(n) {
            assert_eq!(p.is_ballot(), p.descent_word().is_ballot(), "{p}");
        }
    }
}

#[test]
fn ballot_members_start_with_an_ascent() {
    for n in 2..=8 {
        for p in all_perms(n).into_iter().filter(|p| p.is_ballot()) {
            assert!(p.at(1) < p.at(2), "{p}");
        }
    }
}

#[test]
fn containment_agrees_with_naive_check() {
    let patterns: Vec<Pattern> = (1..=4).flat_map(Pattern::all_of_length).collect();
    for n in 0..=6 {
        for p in all_perms(n) {
            for q in &patterns {
                assert_eq!(
                    contains(&p, q),
                    naive_contains(p.values(), q.values()),
                    "{p} vs {q}"
                );
            }
        }
    }
}

#[test]
fn ballot_word_count_matches_central_binomial() {
    let expect = [1usize, 1, 2, 3, 6, 10, 20, 35, 70];
    for (m, &e) in expect.iter().enumerate() {
        let words = StepWord::ballot_words(m);
        assert_eq!(words.len(), e);
        assert!(words.windows(2).all(|w| w[0] < w[1]));
        assert!(words.iter().all(|w| w.count(Step::U) >= w.count(Step::D)));
    }
}

proptest! {
    #[test]
    fn reverse_is_an_involution(p in perm_strategy(10)) {
        prop_assert_eq!(p.reverse().reverse(), p.clone());
        let d: Vec<usize> = p.descent_set().into_iter().collect();
        let mut a: Vec<usize> = p.reverse().ascent_set().into_iter().map(|i| p.len() - i).collect();
        a.sort();
        prop_assert_eq!(d, a);
    }

    #[test]
    fn sums_are_associative(a in perm_strategy(5), b in perm_strategy(5), c in perm_strategy(5)) {
        prop_assert_eq!(skew_sum(&skew_sum(&a, &b), &c), skew_sum(&a, &skew_sum(&b, &c)));
        prop_assert_eq!(direct_sum(&direct_sum(&a, &b), &c), direct_sum(&a, &direct_sum(&b, &c)));
        prop_assert_eq!(skew_sum(&a, &b).len(), a.len() + b.len());
        prop_assert_eq!(skew_sum(&a, &b).reverse(), direct_sum(&b.reverse(), &a.reverse()));
    }

    #[test]
    fn standardize_is_idempotent(words in proptest::collection::hash_set(0i64..1000, 0..12)) {
        let words: Vec<i64> = words.into_iter().collect();
        let p = standardize(&words).unwrap();
        prop_assert_eq!(standardize(p.values()).unwrap(), p.clone());
        for i in 0..words.len() {
            for j in 0..words.len() {
                prop_assert_eq!(words[i] < words[j], p.values()[i] < p.values()[j]);
            }
        }
    }

    #[test]
    fn containment_is_monotone(p in perm_strategy(9), q in perm_strategy(4), extra in 0u32..20) {
        prop_assume!(!q.is_empty());
        let q = Pattern::new(q).unwrap();
        let pos = extra as usize % (p.len() + 1);
        let v = extra % (p.len() as u32 + 1);
        let mut bigger: Vec<f64> = p.values().iter().map(|&x| x as f64).collect();
        bigger.insert(pos, v as f64 + 0.5);
        let bigger = standardize(&bigger).unwrap();
        if contains(&p, &q) {
            prop_assert!(contains(&bigger, &q));
        }
    }

    #[test]
    fn occurrence_witness_is_an_occurrence(p in perm_strategy(9), q in perm_strategy(4)) {
        prop_assume!(!q.is_empty());
        let q = Pattern::new(q).unwrap();
        match find_occurrence(&p, &q) {
            Some(pos) => {
                prop_assert!(pos.windows(2).all(|w| w[0] < w[1]));
                let sub: Vec<u32> = pos.iter().map(|&i| p.at(i)).collect();
                prop_assert_eq!(standardize(&sub).unwrap(), q.perm().clone());
            }
            None => prop_assert!(!naive_contains(p.values(), q.values())),
        }
    }

    #[test]
    fn incremental_check_matches_generic(p in perm_strategy(9), q in perm_strategy(4)) {
        prop_assume!(!q.is_empty());
        prop_assert_eq!(
            occurs_ending_at_last(p.values(), q.values()),
            occurs_ending_at_last_generic(p.values(), q.values())
        );
    }

    #[test]
    fn text_forms_round_trip(p in perm_strategy(14)) {
        prop_assert_eq!(Permutation::parse_separated(&p.to_separated()).unwrap(), p.clone());
        prop_assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p.clone());
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Permutation>(&json).unwrap(), p);
    }
}
