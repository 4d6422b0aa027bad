//! Reduction of a k-symbol automaton to a binary input alphabet.
//!
//! The reduction needs the first state to be absorbing (first row
//! `(1,0,…,0)` in every matrix). The remaining `d-1` states are replicated
//! `k-1` times; reading `a` shifts one replica block further, reading `b`
//! (or the `(k-1)`-th consecutive `a`) performs the transition of the
//! symbol spelled so far and returns to the first block. Words arrive
//! through the prefix-free code `b, ab, aab, …, a^{k-2}b, a^{k-1}`.
//!
//! Inputs that end in an unfinished codeword `a^i` (1 ≤ i ≤ k-2) are worth
//! exactly as much as if the unfinished tail were dropped: the end vector
//! replicates the original tail across all blocks, which is what makes the
//! partial-codeword semantics come out right.

use thiserror::Error;

use crate::construction::{
    add_sink_state, blend_with_uniform, default_alpha, gadget_words, index_symbols,
    normalize_start, pair_matrix, probe_end, probe_start, ConstructionError, PipelineBuild,
    GADGET_DIM,
};
use crate::matrix::{ColVector, Matrix, RowVector};
use crate::pcp::PcpInstance;
use crate::pfa::{Comparison, Pfa, PfaError, StochasticKind, WeightedAutomaton};
use crate::rational::Rational;
use crate::report::{BuildReport, CodeEntry};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BinarizeError {
    #[error("alphabet reduction needs at least 2 symbols, got {0}")]
    TooFewSymbols(usize),
    #[error("matrix for symbol {0:?} does not have the absorbing first row (1,0,…,0)")]
    FirstRowNotAbsorbing(char),
    #[error("code index {index} out of range 1..={k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("codeword character {0:?} is not 'a' or 'b'")]
    NotBinary(char),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Automaton(#[from] PfaError),
}

/// The prefix-free code `1 ↦ b, 2 ↦ ab, …, (k-1) ↦ a^{k-2}b, k ↦ a^{k-1}`
/// used to spell 1-based symbol positions over `{a, b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexCode {
    k: usize,
}

/// A decoded binary word: the complete symbol positions, plus the length
/// of a trailing unfinished run of `a`s (always `< k-1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub indices: Vec<usize>,
    pub partial: usize,
}

impl IndexCode {
    pub fn new(k: usize) -> Result<Self, BinarizeError> {
        if k < 2 {
            return Err(BinarizeError::TooFewSymbols(k));
        }
        Ok(IndexCode { k })
    }

    pub fn symbols(&self) -> usize {
        self.k
    }

    pub fn codeword(&self, index: usize) -> Result<String, BinarizeError> {
        if index == 0 || index > self.k {
            return Err(BinarizeError::IndexOutOfRange { index, k: self.k });
        }
        let mut word = "a".repeat(index - 1);
        if index < self.k {
            word.push('b');
        }
        Ok(word)
    }

    pub fn encode(&self, indices: &[usize]) -> Result<String, BinarizeError> {
        let mut out = String::new();
        for &i in indices {
            out.push_str(&self.codeword(i)?);
        }
        Ok(out)
    }

    /// Greedy decoding; the prefix property makes it unambiguous.
    pub fn decode(&self, word: &str) -> Result<Decoded, BinarizeError> {
        let mut indices = Vec::new();
        let mut run = 0usize;
        for ch in word.chars() {
            match ch {
                'a' => {
                    run += 1;
                    if run == self.k - 1 {
                        indices.push(self.k);
                        run = 0;
                    }
                }
                'b' => {
                    indices.push(run + 1);
                    run = 0;
                }
                other => return Err(BinarizeError::NotBinary(other)),
            }
        }
        Ok(Decoded {
            indices,
            partial: run,
        })
    }

    pub fn table(&self) -> Vec<(usize, String)> {
        (1..=self.k)
            .map(|i| (i, self.codeword(i).expect("index in range")))
            .collect()
    }
}

fn has_absorbing_first_row(m: &Matrix) -> bool {
    *m.get(0, 0) == Rational::one() && (1..m.dim()).all(|j| m.get(0, j).is_zero())
}

/// Rebuilds a k-symbol automaton whose first state is absorbing as an
/// automaton over `{a, b}` of dimension `(k-1)(d-1)+1` with the same
/// values: `value(u) = value'(encode(u))` for every index word `u`, and
/// `value'(u')` equals the value of the longest decodable prefix of `u'`
/// for every binary word.
///
/// Nonnegativity, row-stochasticity and a distribution start vector all
/// carry over. A 2-symbol automaton passes through unchanged up to the
/// relabeling `1 ↦ b, 2 ↦ a`.
pub fn reduce_to_two(
    automaton: &WeightedAutomaton,
) -> Result<(WeightedAutomaton, IndexCode), BinarizeError> {
    let k = automaton.alphabet().len();
    let code = IndexCode::new(k)?;
    for (&symbol, m) in automaton.alphabet().iter().zip(automaton.matrices()) {
        if !has_absorbing_first_row(m) {
            return Err(BinarizeError::FirstRowNotAbsorbing(symbol));
        }
    }

    if k == 2 {
        let matrices = vec![
            automaton.matrices()[1].clone(), // 2 ↦ a^{k-1} = "a"
            automaton.matrices()[0].clone(), // 1 ↦ "b"
        ];
        let reduced = WeightedAutomaton::new(
            vec!['a', 'b'],
            matrices,
            automaton.start().clone(),
            automaton.end().clone(),
        )?;
        return Ok((reduced, code));
    }

    let d = automaton.dim();
    let out_dim = (k - 1) * (d - 1) + 1;
    let block = |j: usize| 1 + (j - 1) * (d - 1); // first out-coordinate of block j

    // Reading `a`: blocks 1..k-2 shift one block to the right; the last
    // block performs the transition of symbol k and returns to block 1.
    let mut m_a = Matrix::zero(out_dim);
    m_a.set(0, 0, Rational::one());
    for j in 1..=k - 2 {
        for r in 0..d - 1 {
            m_a.set(block(j) + r, block(j + 1) + r, Rational::one());
        }
    }
    let last = automaton.matrices()[k - 1].clone();
    for r in 0..d - 1 {
        m_a.set(block(k - 1) + r, 0, last.get(r + 1, 0).clone());
        for s in 0..d - 1 {
            m_a.set(block(k - 1) + r, 1 + s, last.get(r + 1, s + 1).clone());
        }
    }

    // Reading `b`: block j performs the transition of symbol j and returns
    // to block 1.
    let mut m_b = Matrix::zero(out_dim);
    m_b.set(0, 0, Rational::one());
    for j in 1..=k - 1 {
        let m = &automaton.matrices()[j - 1];
        for r in 0..d - 1 {
            m_b.set(block(j) + r, 0, m.get(r + 1, 0).clone());
            for s in 0..d - 1 {
                m_b.set(block(j) + r, 1 + s, m.get(r + 1, s + 1).clone());
            }
        }
    }

    // Start: original entries in block 1, zero elsewhere.
    let mut start = Vec::with_capacity(out_dim);
    start.push(automaton.start().get(0).clone());
    for i in 1..d {
        start.push(automaton.start().get(i).clone());
    }
    start.resize(out_dim, Rational::zero());

    // End: the original tail is replicated into every block, so inputs
    // parked mid-codeword still read the right outputs.
    let mut end = Vec::with_capacity(out_dim);
    end.push(automaton.end().get(0).clone());
    for _ in 1..k {
        for i in 1..d {
            end.push(automaton.end().get(i).clone());
        }
    }

    let reduced = WeightedAutomaton::new(
        vec!['a', 'b'],
        vec![m_a, m_b],
        RowVector::new(start),
        ColVector::new(end),
    )?;
    Ok((reduced, code))
}

/// Adds one state that tops every column sum up to exactly 1: the new row
/// holds the deficits, the new column is `(0,…,0,1)ᵀ`, and the padded
/// start/end coordinates are 0, so no word changes value.
pub fn column_fix(
    matrices: &[Matrix],
    start: &RowVector,
    end: &ColVector,
) -> (Vec<Matrix>, RowVector, ColVector) {
    let one = Rational::one();
    let fixed = matrices
        .iter()
        .map(|m| {
            let d = m.dim();
            let mut out = Matrix::zero(d + 1);
            for i in 0..d {
                for j in 0..d {
                    out.set(i, j, m.get(i, j).clone());
                }
            }
            for (j, sum) in m.col_sums().into_iter().enumerate() {
                out.set(d, j, &one - &sum);
            }
            out.set(d, d, one.clone());
            out
        })
        .collect();
    (
        fixed,
        start.push(Rational::zero()),
        end.push(Rational::zero()),
    )
}

/// Options for [`two_matrix_pfa`].
#[derive(Clone, Debug)]
pub struct TwoMatrixOptions {
    pub alpha: Option<Rational>,
    pub comparison: Comparison,
}

impl Default for TwoMatrixOptions {
    fn default() -> Self {
        TwoMatrixOptions {
            alpha: None,
            comparison: Comparison::Strict,
        }
    }
}

/// A two-matrix build: the automaton, its report, the index code, and the
/// original 1-based pair index spelled by each code position.
#[derive(Clone, Debug)]
pub struct TwoMatrixBuild {
    pub pfa: Pfa,
    pub report: BuildReport,
    pub code: IndexCode,
    /// `pair_order[p]` is the source pair spelled by codeword `p+1`.
    pub pair_order: Vec<usize>,
}

impl TwoMatrixBuild {
    /// Decodes a binary input into source pair indices plus the length of
    /// any unfinished trailing codeword.
    pub fn decode_pairs(&self, word: &str) -> Result<Decoded, BinarizeError> {
        let decoded = self.code.decode(word)?;
        let indices = decoded
            .indices
            .iter()
            .map(|&p| self.pair_order[p - 1])
            .collect();
        Ok(Decoded {
            indices,
            partial: decoded.partial,
        })
    }
}

/// Builds the two-symbol stochastic automaton of a binary instance.
///
/// With a forced end pair the words are reversed, the forced pair merged
/// into the start vector, and the rest reduced to two matrices; a k-pair
/// structured instance lands on `(k-2)·5 + 3` states. Unstructured
/// instances skip the merge (empty inputs then have to be excluded at
/// search time) and land on `(k-1)·5 + 3` states.
pub fn two_matrix_pfa(
    instance: &PcpInstance,
    options: &TwoMatrixOptions,
) -> Result<TwoMatrixBuild, BinarizeError> {
    let (working, merge) = if instance.forced_end().is_some() {
        (instance.reverse(), true)
    } else {
        (instance.clone(), false)
    };
    let words = gadget_words(&working)?;
    let k = words.len();
    let symbols = index_symbols(k)?;

    let mut matrices: Vec<Matrix> = words
        .iter()
        .map(|(v, w)| pair_matrix(v, w))
        .collect::<Result<_, _>>()?;
    let mut start = probe_start();
    let mut pair_order: Vec<usize> = (1..=k).collect();
    let mut alphabet = symbols;
    let mut merged_pair = None;

    if merge {
        let pair = working
            .forced_start()
            .expect("reversal turned the forced end into a forced start");
        start = start.mul_matrix(&matrices[pair - 1]);
        matrices.remove(pair - 1);
        alphabet.remove(pair - 1);
        pair_order.remove(pair - 1);
        merged_pair = Some(pair);
    }

    let interim = WeightedAutomaton::new(alphabet, matrices, start, probe_end())?;
    let (reduced, code) = reduce_to_two(&interim)?;
    let reduced_dim = reduced.dim();

    let (fixed, start, end) = column_fix(reduced.matrices(), reduced.start(), reduced.end());
    let (sunk, start, end) = add_sink_state(&fixed, &start, &end)?;
    let alpha = match &options.alpha {
        Some(a) => a.clone(),
        None => default_alpha(&sunk),
    };
    let blended = blend_with_uniform(&sunk, &alpha)?;
    let norm = normalize_start(&start)?;
    let automaton = WeightedAutomaton::new(vec!['a', 'b'], blended, norm.start.clone(), end)?;
    let pfa = Pfa {
        automaton,
        cutpoint: norm.cutpoint.clone(),
        comparison: options.comparison,
        stochastic_kind: StochasticKind::Doubly,
    };

    let mut report = BuildReport::new(
        "two-matrix",
        working.alphabet(),
        norm.cutpoint.clone(),
        pfa.automaton.dim(),
    );
    report.stage("pair gadgets", GADGET_DIM);
    report.stage("binary alphabet", reduced_dim);
    report.stage("column sums 1", reduced_dim + 1);
    report.stage("sink state", reduced_dim + 2);
    report.stage("uniform blend", reduced_dim + 2);
    report.stage("start distribution", reduced_dim + 2);
    report.alpha = Some(alpha);
    report.normalization_constant = Some(norm.constant.clone());
    report.value_divisor = Some(norm.divisor.clone());
    report.merged_pair = merged_pair;
    report.empty_word_excluded_by_merge = merged_pair.is_some();
    report.index_code = Some(
        pair_order
            .iter()
            .enumerate()
            .map(|(pos, &pair_index)| CodeEntry {
                pair_index,
                codeword: code.codeword(pos + 1).expect("position in range"),
            })
            .collect(),
    );
    report.finish_with(&pfa);

    Ok(TwoMatrixBuild {
        pfa,
        report,
        code,
        pair_order,
    })
}

/// Convenience wrapper returning only the automaton and report.
pub fn two_matrix_build(
    instance: &PcpInstance,
    options: &TwoMatrixOptions,
) -> Result<PipelineBuild, BinarizeError> {
    let built = two_matrix_pfa(instance, options)?;
    Ok(PipelineBuild {
        pfa: built.pfa,
        report: built.report,
    })
}
