//! Named verification suites.
//!
//! Each suite checks one family of exact invariants and reports a
//! machine-readable outcome. The CLI exposes them under `check`; the
//! acceptance tests run the same code. Randomized suites take an explicit
//! seed (default [`DEFAULT_SEED`]) so every run is reproducible.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::binarize::reduce_to_two;
use crate::construction::{
    add_sink_state, blend_with_uniform, default_alpha, gadget_words, normalize_start, pair_matrix,
    pair_matrix_raw, probe_end, probe_start, probe_value, stochastic_pair_matrix, zero_sum_start,
    GADGET_DIM,
};
use crate::digits::DigitWord;
use crate::matrix::{Matrix, RowVector};
use crate::pcp::{PcpInstance, SearchLimits, WordPair};
use crate::pfa::WeightedAutomaton;
use crate::rational::Rational;
use crate::semithue::{
    check_chain_parity, decode_split, empty_word_counterexample, gpcp_from_word_problem,
    RewriteRule, SemiThueSystem, SymbolCode, WordProblem,
};

pub const DEFAULT_SEED: u64 = 1729;

/// Outcome of one named suite.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl CheckOutcome {
    fn pass(name: &str, details: String) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: true,
            details,
        }
    }

    fn fail(name: &str, details: String) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: false,
            details,
        }
    }
}

/// Tuning knobs shared by the suites; every field has a sensible default.
#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_len: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            trials: 1000,
            seed: DEFAULT_SEED,
            max_len: 8,
        }
    }
}

/// The textbook three-pair instance used as the desk-scale example
/// throughout: pairs (1,101), (10,00), (011,11) over {0,1}. Its shortest
/// solution is [1, 3, 2, 3].
pub fn classic_toy() -> PcpInstance {
    PcpInstance::new(
        vec!['0', '1'],
        vec![
            WordPair::new("1", "101"),
            WordPair::new("10", "00"),
            WordPair::new("011", "11"),
        ],
    )
    .expect("classic instance is well formed")
}

fn random_pair_word(rng: &mut StdRng, max_pairs: usize, min_pairs: usize) -> DigitWord {
    let pairs = rng.gen_range(min_pairs..=max_pairs);
    let mut digits = Vec::with_capacity(2 * pairs);
    for _ in 0..pairs {
        digits.push(1);
        digits.push(if rng.gen_bool(0.5) { 1 } else { 2 });
    }
    DigitWord::from_digits(digits).expect("digits in range")
}

/// Product law of the gadgets on randomized quadruples: the matrix of the
/// concatenation equals the product of the matrices. Checked on the raw
/// gadget every trial; conjugation preserves the law, which is spot-checked
/// on the margined and column-transformed gadgets every tenth trial.
pub fn multiplicative_law(trials: usize, seed: u64) -> CheckOutcome {
    const NAME: &str = "multiplicative";
    let mut rng = StdRng::seed_from_u64(seed);
    for trial in 0..trials {
        let v1 = random_pair_word(&mut rng, 5, 0);
        let w1 = random_pair_word(&mut rng, 5, 0);
        let v2 = random_pair_word(&mut rng, 5, 0);
        let w2 = random_pair_word(&mut rng, 5, 0);
        let product = &pair_matrix_raw(&v1, &w1).expect("pair words")
            * &pair_matrix_raw(&v2, &w2).expect("pair words");
        let direct = pair_matrix_raw(&v1.concat(&v2), &w1.concat(&w2)).expect("pair words");
        if product != direct {
            return CheckOutcome::fail(
                NAME,
                format!(
                    "trial {trial}: product of gadgets for ({v1},{w1}),({v2},{w2}) differs from the gadget of the concatenation"
                ),
            );
        }
        if trial % 10 == 0 {
            let margined = &pair_matrix(&v1, &w1).expect("pair words")
                * &pair_matrix(&v2, &w2).expect("pair words");
            if margined != pair_matrix(&v1.concat(&v2), &w1.concat(&w2)).expect("pair words") {
                return CheckOutcome::fail(
                    NAME,
                    format!("trial {trial}: margined gadget breaks the product law"),
                );
            }
            let stochastic = &stochastic_pair_matrix(&v1, &w1).expect("pair words")
                * &stochastic_pair_matrix(&v2, &w2).expect("pair words");
            if stochastic
                != stochastic_pair_matrix(&v1.concat(&v2), &w1.concat(&w2)).expect("pair words")
            {
                return CheckOutcome::fail(
                    NAME,
                    format!("trial {trial}: column-transformed gadget breaks the product law"),
                );
            }
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("{trials} random quadruples with words of up to 10 digits; conjugated gadgets spot-checked"),
    )
}

fn all_pair_words(max_pairs: usize) -> Vec<DigitWord> {
    let mut out = vec![DigitWord::empty()];
    let mut layer = vec![Vec::<u8>::new()];
    for _ in 0..max_pairs {
        let mut next = Vec::new();
        for digits in &layer {
            for second in [1u8, 2u8] {
                let mut d = digits.clone();
                d.push(1);
                d.push(second);
                next.push(d);
            }
        }
        out.extend(
            next.iter()
                .map(|d| DigitWord::from_digits(d.clone()).expect("digits in range")),
        );
        layer = next;
    }
    out
}

/// Exhaustive equality detection: the probe value of `(v, w)` is positive
/// exactly when `v = w`, negative otherwise, and never zero, over all pair
/// words of at most `max_digits` digits.
pub fn equality_detection(max_digits: usize) -> CheckOutcome {
    const NAME: &str = "equality-detection";
    let words = all_pair_words(max_digits / 2);
    let mut checked = 0usize;
    for v in &words {
        for w in &words {
            let value = probe_value(v, w).expect("pair words");
            checked += 1;
            if value.is_zero() {
                return CheckOutcome::fail(NAME, format!("probe of ({v},{w}) is zero"));
            }
            if (v == w) != value.is_positive() {
                return CheckOutcome::fail(
                    NAME,
                    format!("probe of ({v},{w}) has the wrong sign: {value}"),
                );
            }
        }
    }
    CheckOutcome::pass(
        NAME,
        format!(
            "{checked} pairs (v,w) with up to {max_digits} digits each, sign exact, never zero"
        ),
    )
}

/// Column sums of the column-transformed gadget are exactly 1, and the
/// matrix is strictly positive whenever both words are nonempty.
pub fn column_stochastic(trials: usize, seed: u64) -> CheckOutcome {
    const NAME: &str = "column-stochastic";
    let mut rng = StdRng::seed_from_u64(seed);
    let one = Rational::one();
    let mut positives = 0usize;
    for trial in 0..trials {
        // Empty words now and then; positivity is only claimed when both
        // sides are nonempty.
        let v = random_pair_word(&mut rng, 4, 0);
        let w = random_pair_word(&mut rng, 4, 0);
        let m = stochastic_pair_matrix(&v, &w).expect("pair words");
        if m.col_sums().iter().any(|s| *s != one) {
            return CheckOutcome::fail(
                NAME,
                format!("trial {trial}: column sums of ({v},{w}) are not all 1"),
            );
        }
        if !v.is_empty() && !w.is_empty() {
            positives += 1;
            if !m.is_positive() {
                return CheckOutcome::fail(
                    NAME,
                    format!("trial {trial}: gadget of nonempty ({v},{w}) is not strictly positive"),
                );
            }
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("{trials} random gadgets; column sums exact, {positives} nonempty cases strictly positive"),
    )
}

fn index_word(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|&i| char::from_digit(i as u32, 36).expect("small index"))
        .collect()
}

fn all_index_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 1..=k {
                let mut w2 = w.clone();
                w2.push(i);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The algebra that carries the pipeline: the sunk start annihilates the
/// uniform matrix, blending scales values by exactly `α^m`, and start
/// normalization shifts them to `1/n + value/(c·n)`.
pub fn pipeline_algebra(max_word_len: usize) -> CheckOutcome {
    const NAME: &str = "pipeline-algebra";
    let toy = classic_toy();
    let words = gadget_words(&toy).expect("binary toy alphabet");
    let stochastic: Vec<Matrix> = words
        .iter()
        .map(|(v, w)| stochastic_pair_matrix(v, w).expect("pair words"))
        .collect();
    let (sunk, start, end) =
        add_sink_state(&stochastic, &zero_sum_start(), &probe_end()).expect("column sums 1");
    let n = start.len();

    let uniform = Matrix::uniform(n);
    if start.mul_matrix(&uniform) != RowVector::zeros(n) {
        return CheckOutcome::fail(
            NAME,
            "sunk start does not annihilate the uniform matrix".into(),
        );
    }
    // Same annihilation when the sink has to absorb a nonzero sum.
    let (_, seeded, _) =
        add_sink_state(&stochastic, &probe_start(), &probe_end()).expect("column sums 1");
    if seeded.mul_matrix(&uniform) != RowVector::zeros(n) || !seeded.sum().is_zero() {
        return CheckOutcome::fail(
            NAME,
            "seeded sink start does not annihilate the uniform matrix".into(),
        );
    }

    let alpha = default_alpha(&sunk);
    let blended = blend_with_uniform(&sunk, &alpha).expect("alpha is feasible");
    let norm = normalize_start(&start).expect("sunk start sums to zero");

    let symbols: Vec<char> = (1..=stochastic.len())
        .map(|i| char::from_digit(i as u32, 36).expect("small index"))
        .collect();
    let plain = WeightedAutomaton::new(symbols.clone(), sunk, start.clone(), end.clone())
        .expect("consistent dimensions");
    let scaled = WeightedAutomaton::new(symbols.clone(), blended.clone(), start, end.clone())
        .expect("consistent dimensions");
    let normalized = WeightedAutomaton::new(symbols, blended, norm.start.clone(), end)
        .expect("consistent dimensions");

    let mut checked = 0usize;
    for indices in all_index_words(toy.len(), max_word_len) {
        let word = index_word(&indices);
        let base = plain.value(&word).expect("word over alphabet");
        let blend_value = scaled.value(&word).expect("word over alphabet");
        let expected = alpha.pow(indices.len()) * &base;
        if blend_value != expected {
            return CheckOutcome::fail(
                NAME,
                format!("blend identity fails on {indices:?}: {blend_value} vs {expected}"),
            );
        }
        let norm_value = normalized.value(&word).expect("word over alphabet");
        let expected = &norm.cutpoint + &(&blend_value / &norm.divisor);
        if norm_value != expected {
            return CheckOutcome::fail(
                NAME,
                format!("normalization identity fails on {indices:?}: {norm_value} vs {expected}"),
            );
        }
        checked += 1;
    }
    CheckOutcome::pass(
        NAME,
        format!(
            "sink annihilation, blend scaling and start normalization exact on {checked} words up to length {max_word_len} (alpha {alpha}, divisor {})",
            norm.divisor
        ),
    )
}

fn reduction_toy(k: usize) -> WeightedAutomaton {
    let source: Vec<(&str, &str)> = vec![
        ("1", "101"),
        ("10", "00"),
        ("011", "11"),
        ("0", "1"),
        ("00", "0"),
        ("11", "1"),
    ];
    let instance = PcpInstance::new(
        vec!['0', '1'],
        source[..k]
            .iter()
            .map(|(t, b)| WordPair::new(*t, *b))
            .collect(),
    )
    .expect("toy instance is well formed");
    let words = gadget_words(&instance).expect("binary alphabet");
    let matrices: Vec<Matrix> = words
        .iter()
        .map(|(v, w)| pair_matrix(v, w).expect("pair words"))
        .collect();
    let symbols: Vec<char> = (1..=k)
        .map(|i| char::from_digit(i as u32, 36).expect("small index"))
        .collect();
    WeightedAutomaton::new(symbols, matrices, probe_start(), probe_end())
        .expect("consistent dimensions")
}

fn all_binary_words(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for c in ['a', 'b'] {
                let mut w2 = w.clone();
                w2.push(c);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The alphabet reduction preserves values: encoded index words evaluate
/// identically, arbitrary binary words evaluate like their longest
/// decodable prefix, and the output dimension is `(k-1)(d-1)+1`.
pub fn binary_reduction(max_index_len: usize, max_binary_len: usize) -> CheckOutcome {
    const NAME: &str = "binary-reduction";
    for (k, expected_dim) in [(4usize, 16usize), (6, 26)] {
        let aut = reduction_toy(k);
        let (reduced, _) = match reduce_to_two(&aut) {
            Ok(r) => r,
            Err(e) => return CheckOutcome::fail(NAME, format!("reduction failed: {e}")),
        };
        if reduced.dim() != expected_dim {
            return CheckOutcome::fail(
                NAME,
                format!(
                    "k={k}, d={GADGET_DIM} produced dimension {}, expected {expected_dim}",
                    reduced.dim()
                ),
            );
        }
    }

    let aut = reduction_toy(4);
    let (reduced, code) = reduce_to_two(&aut).expect("absorbing first state");
    let mut checked = 0usize;
    for indices in all_index_words(4, max_index_len) {
        let word = index_word(&indices);
        let encoded = code.encode(&indices).expect("indices in range");
        if aut.value(&word).expect("word over alphabet")
            != reduced.value(&encoded).expect("binary word")
        {
            return CheckOutcome::fail(NAME, format!("value mismatch on index word {indices:?}"));
        }
        checked += 1;
    }
    let mut binary_checked = 0usize;
    for word in all_binary_words(max_binary_len) {
        let decoded = code.decode(&word).expect("binary word");
        let prefix_word = index_word(&decoded.indices);
        if reduced.value(&word).expect("binary word")
            != aut.value(&prefix_word).expect("word over alphabet")
        {
            return CheckOutcome::fail(
                NAME,
                format!(
                    "binary word {word:?} does not match its decodable prefix {:?}",
                    decoded.indices
                ),
            );
        }
        binary_checked += 1;
    }
    CheckOutcome::pass(
        NAME,
        format!(
            "dimensions 16 and 26 as expected; {checked} encoded index words and {binary_checked} binary words evaluate exactly"
        ),
    )
}

/// Exhaustive substring-uniqueness of the symbol code: every occurrence of
/// a codeword inside an encoded word splits it into decodable flanks.
pub fn code_uniqueness(max_len: usize) -> CheckOutcome {
    const NAME: &str = "code-uniqueness";
    let sigma = ['x', 'y'];
    let code = SymbolCode::for_alphabet(&sigma).expect("no separator inside");
    let symbols = code.symbols().to_vec();

    let mut words: Vec<String> = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &s in &symbols {
                let mut w2 = w.clone();
                w2.push(s);
                next.push(w2);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }

    let mut occurrences = 0usize;
    for u in &words {
        let encoded = code.encode(u).expect("symbols in range");
        let encoded_chars: Vec<char> = encoded.chars().collect();
        for &alpha in &symbols {
            let cw: Vec<char> = code
                .codeword(alpha)
                .expect("symbol in range")
                .chars()
                .collect();
            if encoded_chars.len() < cw.len() {
                continue;
            }
            for p in 0..=encoded_chars.len() - cw.len() {
                if encoded_chars[p..p + cw.len()] != cw[..] {
                    continue;
                }
                occurrences += 1;
                let x: String = encoded_chars[..p].iter().collect();
                let y: String = encoded_chars[p + cw.len()..].iter().collect();
                match decode_split(&code, u, &x, alpha, &y) {
                    Ok((v, w)) => {
                        if format!("{v}{alpha}{w}") != *u {
                            return CheckOutcome::fail(
                                NAME,
                                format!("split of {u:?} at {alpha:?} reassembles wrongly"),
                            );
                        }
                    }
                    Err(e) => {
                        return CheckOutcome::fail(
                            NAME,
                            format!(
                            "occurrence of {alpha:?} in encode({u:?}) at {p} does not decode: {e}"
                        ),
                        )
                    }
                }
            }
        }
    }
    CheckOutcome::pass(
        NAME,
        format!(
            "{} words up to length {max_len} over 3 symbols, {occurrences} codeword occurrences, all splits decode",
            words.len()
        ),
    )
}

/// Separator bookkeeping along every partial solution of the toy chain.
pub fn chain_parity() -> CheckOutcome {
    const NAME: &str = "chain-parity";
    let problem = WordProblem {
        system: SemiThueSystem::new(vec!['a', 'b'], vec![RewriteRule::new("ab", "ba")])
            .expect("toy system is well formed"),
        source: "ab".to_string(),
        target: "ba".to_string(),
    };
    let gpcp = match gpcp_from_word_problem(&problem) {
        Ok(g) => g,
        Err(e) => return CheckOutcome::fail(NAME, format!("reduction failed: {e}")),
    };
    match check_chain_parity(&gpcp, &SearchLimits::new(12).with_overhang(64)) {
        Ok(report) => CheckOutcome::pass(
            NAME,
            format!(
                "one extra separator below and strict prefix above on {} partial solutions",
                report.partials_checked
            ),
        ),
        Err(e) => CheckOutcome::fail(NAME, e.to_string()),
    }
}

/// The published three-pair instance whose solution starts with pair 2.
pub fn counterexample() -> CheckOutcome {
    const NAME: &str = "counterexample";
    let (instance, witness) = empty_word_counterexample();
    match instance.is_solution(&witness) {
        Ok(true) => {}
        Ok(false) => {
            return CheckOutcome::fail(NAME, format!("witness {witness} is not a solution"))
        }
        Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
    }
    if witness.as_slice()[0] == 1 {
        return CheckOutcome::fail(NAME, "witness starts with pair 1 after all".into());
    }
    if !instance.pairs()[1].bottom.is_empty() {
        return CheckOutcome::fail(NAME, "pair 2 lost its empty bottom word".into());
    }
    CheckOutcome::pass(
        NAME,
        format!("witness {witness} verified; first index is 2 and pair 2 has an empty bottom word"),
    )
}

/// Runs one suite by name, or all of them for `"all"`. `None` means the
/// name is unknown.
pub fn run_suite(name: &str, config: &CheckConfig) -> Option<Vec<CheckOutcome>> {
    let outcome = match name {
        "multiplicative" => vec![multiplicative_law(config.trials, config.seed)],
        "equality-detection" => vec![equality_detection(config.max_len)],
        "column-stochastic" => vec![column_stochastic(config.trials, config.seed)],
        "pipeline-algebra" => vec![pipeline_algebra(4)],
        "binary-reduction" => vec![binary_reduction(4, config.max_len)],
        "code-uniqueness" => vec![code_uniqueness(3)],
        "chain-parity" => vec![chain_parity()],
        "counterexample" => vec![counterexample()],
        "all" => {
            let mut all = Vec::new();
            for suite in SUITES {
                all.extend(run_suite(suite, config).expect("known suite"));
            }
            all
        }
        _ => return None,
    };
    Some(outcome)
}

/// All individual suite names, in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "multiplicative",
    "equality-detection",
    "column-stochastic",
    "pipeline-algebra",
    "binary-reduction",
    "code-uniqueness",
    "chain-parity",
    "counterexample",
];
