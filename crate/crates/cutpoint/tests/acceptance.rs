//! Acceptance suite: one test per criterion, each printing a pass line and
//! enforcing its time budget. All comparisons are exact — there is no
//! tolerance anywhere because nothing is approximated.

use std::time::{Duration, Instant};

use cutpoint::binarize::{two_matrix_pfa, TwoMatrixOptions};
use cutpoint::construction::{
    backward_pfa, forward_pfa, gadget_words, probe_end, stochastic_pair_matrix, zero_sum_start,
    ForwardOptions,
};
use cutpoint::matrix::Matrix;
use cutpoint::pcp::{IndexSequence, PcpInstance, SearchLimits, SearchResult, WordPair};
use cutpoint::pfa::{Comparison, StochasticKind, WeightedAutomaton};
use cutpoint::rational::Rational;
use cutpoint::semithue::{
    binarize_alphabet, gpcp_from_word_problem, gpcp_to_pcp, RewriteRule, SemiThueSystem,
    WordProblem,
};
use cutpoint::verify::{
    binary_reduction, classic_toy, code_uniqueness, column_stochastic, counterexample,
    equality_detection, multiplicative_law, pipeline_algebra, DEFAULT_SEED,
};

fn finish(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("criterion {criterion}: PASS ({elapsed:.2?})");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its budget: {elapsed:?} >= {budget:?}"
    );
}

/// Every index sequence over `1..=k` with length in `min_len..=max_len`.
fn index_sequences(k: usize, min_len: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    if min_len == 0 {
        out.push(vec![]);
    }
    for len in 1..=max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 1..=k {
                let mut w2 = w.clone();
                w2.push(i);
                next.push(w2);
            }
        }
        if len >= min_len {
            out.extend(next.iter().cloned());
        }
        layer = next;
    }
    out
}

fn index_word(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|&i| char::from_digit(i as u32, 36).unwrap())
        .collect()
}

#[test]
fn criterion_01_multiplicative_law() {
    let started = Instant::now();
    let outcome = multiplicative_law(1000, DEFAULT_SEED);
    assert!(outcome.passed, "{}", outcome.details);
    finish("1 (multiplicative law)", started, Duration::from_secs(10));
}

#[test]
fn criterion_02_equality_detection() {
    let started = Instant::now();
    let outcome = equality_detection(8);
    assert!(outcome.passed, "{}", outcome.details);
    finish("2 (equality detection)", started, Duration::from_secs(30));
}

#[test]
fn criterion_03_column_stochastic_gadgets() {
    let started = Instant::now();
    let outcome = column_stochastic(500, DEFAULT_SEED);
    assert!(outcome.passed, "{}", outcome.details);
    finish(
        "3 (column sums and positivity)",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_04_pipeline_algebra() {
    let started = Instant::now();
    let outcome = pipeline_algebra(4);
    assert!(outcome.passed, "{}", outcome.details);
    finish("4 (pipeline algebra)", started, Duration::from_secs(30));
}

#[test]
fn criterion_05_forward_end_to_end() {
    let started = Instant::now();
    let toy = classic_toy();
    let build = forward_pfa(&toy, &ForwardOptions::default()).expect("pipeline succeeds");
    let pfa = &build.pfa;

    assert_eq!(pfa.automaton.dim(), 7);
    assert_eq!(pfa.automaton.alphabet(), ['1', '2', '3']);
    assert_eq!(pfa.cutpoint, Rational::new(1, 7));
    assert_eq!(pfa.stochastic_kind, StochasticKind::Doubly);
    let report = pfa.validate();
    assert!(report.is_ok(), "validation failed: {report:?}");
    assert!(pfa.automaton.matrices().iter().all(Matrix::is_positive));

    // Exhaustive over every nonempty index word of length at most 5:
    // accepted exactly when the index sequence solves the instance, and
    // the value never equals the cutpoint, so strict and weak acceptance
    // agree everywhere.
    let mut accepted = 0usize;
    let mut words_seen = 0usize;
    for (word, value) in pfa.automaton.enumerate_values(5) {
        if word.is_empty() {
            continue;
        }
        words_seen += 1;
        assert_ne!(value, pfa.cutpoint, "value hit the cutpoint on {word:?}");
        let strict = value > pfa.cutpoint;
        let weak = value >= pfa.cutpoint;
        assert_eq!(strict, weak, "strict/weak disagree on {word:?}");
        let indices: Vec<usize> = word
            .chars()
            .map(|c| c.to_digit(10).unwrap() as usize)
            .collect();
        let seq = IndexSequence::new(indices).unwrap();
        let solves = toy.is_solution(&seq).unwrap();
        assert_eq!(strict, solves, "acceptance mismatch on {word:?}");
        if strict {
            accepted += 1;
        }
    }
    assert_eq!(words_seen, 363);
    assert_eq!(accepted, 1, "exactly [1,3,2,3] is accepted within length 5");
    finish("5 (forward end-to-end)", started, Duration::from_secs(120));
}

#[test]
fn criterion_06_binary_reduction_equivalence() {
    let started = Instant::now();
    let outcome = binary_reduction(4, 8);
    assert!(outcome.passed, "{}", outcome.details);
    finish(
        "6 (binary reduction equivalence)",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_07_two_matrix_pipeline() {
    let started = Instant::now();
    let toy = classic_toy();
    let built = two_matrix_pfa(&toy, &TwoMatrixOptions::default()).expect("pipeline succeeds");
    assert_eq!(built.pfa.automaton.dim(), 13);
    assert_eq!(built.pfa.automaton.alphabet(), ['a', 'b']);
    assert_eq!(built.pfa.cutpoint, Rational::new(1, 13));
    assert!(built.pfa.validate().is_ok());

    // Within length 8, a binary word is accepted exactly when its longest
    // decodable prefix spells a solution — or decodes to no symbol at all,
    // in which case it carries the value of the empty input, which is why
    // unmerged builds must exclude the empty word at search time.
    let mut checked = 0usize;
    let mut witness_seen = false;
    for (word, value) in built.pfa.automaton.enumerate_values(8) {
        if word.is_empty() {
            continue;
        }
        let accepted = value > built.pfa.cutpoint;
        let decoded = built.decode_pairs(&word).unwrap();
        let expected = if decoded.indices.is_empty() {
            true // value of the empty input: 1/99 above the shifted threshold
        } else {
            let seq = IndexSequence::new(decoded.indices.clone()).unwrap();
            toy.is_solution(&seq).unwrap()
        };
        assert_eq!(
            accepted, expected,
            "word {word:?} decodes to {:?}",
            decoded.indices
        );
        if accepted && !decoded.indices.is_empty() {
            witness_seen = true;
            assert!(word.starts_with(&built.code.encode(&[1]).unwrap()));
        }
        checked += 1;
    }
    assert_eq!(checked, 510);
    assert!(
        witness_seen,
        "the encoded solution word lies within length 8"
    );
    let solution_word = built.code.encode(&[1, 3, 2, 3]).unwrap();
    assert!(built.pfa.accepts(&solution_word).unwrap());

    // Structured five-pair instance: merge drops one pair, the reduction
    // multiplies out to 16, and the two fix-up states land on 18.
    let structured = PcpInstance::new(
        vec!['0', '1'],
        vec![
            WordPair::new("1", "101"),
            WordPair::new("10", "00"),
            WordPair::new("011", "11"),
            WordPair::new("0", "10"),
            WordPair::new("110", "1"),
        ],
    )
    .unwrap()
    .with_structure(Some(1), Some(5))
    .unwrap();
    let big = two_matrix_pfa(&structured, &TwoMatrixOptions::default()).expect("pipeline succeeds");
    assert_eq!(big.pfa.automaton.dim(), 18);
    assert_eq!(big.pfa.cutpoint, Rational::new(1, 18));
    assert!(big.pfa.validate().is_ok());
    assert_eq!(big.report.merged_pair, Some(5));
    finish("7 (two-matrix pipeline)", started, Duration::from_secs(120));
}

#[test]
fn criterion_08_backward_variant() {
    let started = Instant::now();
    let toy = classic_toy();
    let build = backward_pfa(&toy, Comparison::Strict).expect("pipeline succeeds");
    let pfa = &build.pfa;

    assert_eq!(pfa.automaton.dim(), 6);
    assert_eq!(pfa.cutpoint, Rational::new(1, 6));
    assert_eq!(pfa.stochastic_kind, StochasticKind::Row);
    assert!(pfa.validate().is_ok());
    assert!(pfa.automaton.matrices().iter().all(Matrix::is_positive));
    let end = pfa.automaton.end();
    assert_eq!(end.sum(), Rational::one());
    assert!(end
        .entries()
        .iter()
        .all(|x| !x.is_negative() && *x <= Rational::one()));

    // The forward weighted chain this mirrors: zero-sum start, gadget
    // matrices with column sums 1, unit end vector.
    let words = gadget_words(&toy).unwrap();
    let matrices: Vec<Matrix> = words
        .iter()
        .map(|(v, w)| stochastic_pair_matrix(v, w).unwrap())
        .collect();
    let forward =
        WeightedAutomaton::new(vec!['1', '2', '3'], matrices, zero_sum_start(), probe_end())
            .unwrap();

    let sixth = Rational::new(1, 6);
    let twelfth = Rational::from_int(12);
    for indices in index_sequences(toy.len(), 0, 4) {
        let forward_value = forward.value(&index_word(&indices)).unwrap();
        let reversed: Vec<usize> = indices.iter().rev().copied().collect();
        let backward_value = pfa.value(&index_word(&reversed)).unwrap();
        assert_eq!(
            backward_value,
            &sixth + &(&forward_value / &twelfth),
            "identity fails on {indices:?}"
        );
    }

    // Moving the cutpoint must not change the accepted set.
    for target in [Rational::new(1, 12), Rational::new(1, 2)] {
        let shifted = pfa.shift_cutpoint(&target).expect("shift succeeds");
        assert_eq!(shifted.cutpoint, target);
        assert!(shifted.validate().is_ok());
        for indices in index_sequences(toy.len(), 0, 4) {
            let word = index_word(&indices);
            assert_eq!(
                pfa.accepts(&word).unwrap(),
                shifted.accepts(&word).unwrap(),
                "acceptance changed at cutpoint {target} on {indices:?}"
            );
        }
    }
    finish("8 (backward variant)", started, Duration::from_secs(60));
}

#[test]
fn criterion_09_rewriting_chain() {
    let started = Instant::now();
    let system = SemiThueSystem::new(vec!['a', 'b'], vec![RewriteRule::new("ab", "ba")]).unwrap();

    let reachable = WordProblem {
        system: system.clone(),
        source: "ab".into(),
        target: "ba".into(),
    };
    assert_eq!(
        system.bounded_derives("ab", "ba", 4),
        SearchResult::Found(vec!["ab".to_string(), "ba".to_string()])
    );
    let gpcp = gpcp_from_word_problem(&reachable).unwrap();
    let gpcp_solution = gpcp
        .bounded_solve(&SearchLimits::new(20).with_overhang(64))
        .found()
        .expect("generalized instance solvable within bounds");
    assert!(gpcp.is_solution(&gpcp_solution).unwrap());

    let five = gpcp_to_pcp(&gpcp).unwrap();
    let five_solution = five
        .bounded_solve(&SearchLimits::new(20).with_overhang(128))
        .found()
        .expect("bracket image solvable within bounds");
    assert!(five.is_solution(&five_solution).unwrap());
    let s = five_solution.as_slice();
    assert_eq!(s[0], 1, "image solutions start with the start pair");
    assert_eq!(
        *s.last().unwrap(),
        2,
        "image solutions end with the end pair"
    );
    assert!(s[1..s.len() - 1].iter().all(|&i| i >= 3));

    let binary = binarize_alphabet(&five).unwrap();
    let binary_solution = binary
        .bounded_solve(&SearchLimits::new(20).with_overhang(384))
        .found()
        .expect("binary image solvable within bounds");
    assert!(binary.is_solution(&binary_solution).unwrap());

    // The same index sequence solves all three stages.
    assert!(five.is_solution(&gpcp_solution).unwrap());
    assert!(binary.is_solution(&gpcp_solution).unwrap());

    // Unreachable direction: every stage closes with no solution.
    let unreachable = WordProblem {
        system: system.clone(),
        source: "ba".into(),
        target: "ab".into(),
    };
    assert_eq!(system.bounded_derives("ba", "ab", 8), SearchResult::Closed);
    let gpcp_u = gpcp_from_word_problem(&unreachable).unwrap();
    assert_eq!(
        gpcp_u.bounded_solve(&SearchLimits::new(24).with_overhang(64)),
        SearchResult::Closed
    );
    let five_u = gpcp_to_pcp(&gpcp_u).unwrap();
    assert_eq!(
        five_u.bounded_solve(&SearchLimits::new(24).with_overhang(128)),
        SearchResult::Closed
    );
    let binary_u = binarize_alphabet(&five_u).unwrap();
    assert_eq!(
        binary_u.bounded_solve(&SearchLimits::new(24).with_overhang(384)),
        SearchResult::Closed
    );

    // Substring uniqueness of the symbol code, exhaustively for |u| ≤ 3.
    let outcome = code_uniqueness(3);
    assert!(outcome.passed, "{}", outcome.details);
    finish("9 (rewriting chain)", started, Duration::from_secs(60));
}

#[test]
fn criterion_10_counterexample_regression() {
    let started = Instant::now();
    let outcome = counterexample();
    assert!(outcome.passed, "{}", outcome.details);
    finish(
        "10 (empty-word counterexample)",
        started,
        Duration::from_secs(5),
    );
}
