//! The 6-state word-pair gadgets and the pipeline that turns a binary
//! correspondence instance into a small stochastic automaton.
//!
//! The gadget encodes a pair of digit words `(v, w)` as a 6×6 matrix whose
//! product law mirrors word concatenation: the matrix of `(v1·v2, w1·w2)`
//! is exactly the product of the matrices of `(v1, w1)` and `(v2, w2)`.
//! A fixed probe `start · M · end` of the gadget is positive exactly when
//! `v = w` and negative otherwise — never zero — so matrix products can
//! detect matching concatenations.
//!
//! The pipeline then massages the gadgets into genuinely stochastic
//! matrices without disturbing the sign of the probe:
//!
//! 1. a similarity makes all column sums 1,
//! 2. a sink state makes all row sums 1 as well,
//! 3. blending with the uniform transition makes every entry positive,
//! 4. an affine shift turns the start vector into a probability
//!    distribution, moving the acceptance threshold from 0 to `1/states`.
//!
//! A forced pair of a structured instance can finally be merged into the
//! start vector, which also removes the spurious empty input.

use thiserror::Error;

use crate::digits::{pow10_neg, recode_binary, DigitWord, DigitsError};
use crate::matrix::{ColVector, Matrix, RowVector};
use crate::pcp::PcpInstance;
use crate::pfa::{Comparison, Pfa, PfaError, StochasticKind, WeightedAutomaton};
use crate::rational::Rational;
use crate::report::BuildReport;

/// Dimension of the word-pair gadget.
pub const GADGET_DIM: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("gadget words must use only digits 1 and 2 and have even length, got {0:?}")]
    NotPairWord(String),
    #[error(transparent)]
    Digits(#[from] DigitsError),
    #[error(transparent)]
    Automaton(#[from] PfaError),
    #[error("matrix {matrix} column {column} sums to {sum}, expected exactly 1")]
    ColumnSumNotOne {
        matrix: usize,
        column: usize,
        sum: Rational,
    },
    #[error("matrix {matrix} row {row} sums to {sum}, expected exactly 1")]
    RowSumNotOne {
        matrix: usize,
        row: usize,
        sum: Rational,
    },
    #[error("blend constant must lie strictly between 0 and 1, got {0}")]
    AlphaOutOfRange(Rational),
    #[error(
        "blend constant {alpha} is too large: matrix {matrix} entry ({row},{col}) becomes {value}"
    )]
    AlphaTooLarge {
        alpha: Rational,
        matrix: usize,
        row: usize,
        col: usize,
        value: Rational,
    },
    #[error("start vector sums to {0}, expected exactly 0")]
    StartSumNotZero(Rational),
    #[error("this variant needs a structured instance with a forced end pair")]
    MissingForcedEnd,
    #[error("pair {pair} contains an empty word; this variant needs all words nonempty")]
    EmptyWordInPair { pair: usize },
    #[error("at most 35 pairs are supported, got {0}")]
    TooManyPairs(usize),
}

// ---------------------------------------------------------------------------
// Gadget constants
// ---------------------------------------------------------------------------

/// Similarity transform that plants the positive margin term in the probe,
/// together with its inverse.
pub fn margin_transform() -> (Matrix, Matrix) {
    let mut u = Matrix::identity(GADGET_DIM);
    u.set(2, 0, Rational::new(1, 99));
    u.set(4, 4, Rational::new(99, 105));
    let mut u_inv = Matrix::identity(GADGET_DIM);
    u_inv.set(2, 0, Rational::new(-1, 99));
    u_inv.set(4, 4, Rational::new(105, 99));
    (u, u_inv)
}

/// Similarity transform that makes gadget column sums 1, with its inverse.
pub fn column_transform() -> (Matrix, Matrix) {
    let mut v = Matrix::identity(GADGET_DIM);
    let mut v_inv = Matrix::identity(GADGET_DIM);
    for j in 1..GADGET_DIM {
        v.set(0, j, Rational::one());
        v_inv.set(0, j, Rational::from_int(-1));
    }
    (v, v_inv)
}

/// Probe start vector for the raw gadget: paired with [`probe_end`] it
/// yields `-(0.v - 0.w)^2`.
pub fn probe_start_raw() -> RowVector {
    RowVector::new(vec![
        Rational::zero(),
        Rational::zero(),
        Rational::from_int(-1),
        Rational::zero(),
        Rational::from_int(-1),
        Rational::from_int(2),
    ])
}

/// Probe start vector for the margined gadget: paired with [`probe_end`]
/// it yields `-(0.v - 0.w)^2 + 10^{-2|v|}/99`, whose sign detects equality.
pub fn probe_start() -> RowVector {
    RowVector::new(vec![
        Rational::new(1, 99),
        Rational::zero(),
        Rational::from_int(-1),
        Rational::zero(),
        Rational::new(-105, 99),
        Rational::from_int(2),
    ])
}

/// Probe end vector: the first unit column.
pub fn probe_end() -> ColVector {
    ColVector::unit(GADGET_DIM, 0)
}

/// The probe start vector carried through the column-sum transform. Its
/// entries sum to exactly zero, which later annihilates the uniform part
/// of the blended matrices.
pub fn zero_sum_start() -> RowVector {
    let (v, _) = column_transform();
    probe_start().mul_matrix(&v)
}

// ---------------------------------------------------------------------------
// Gadget matrices
// ---------------------------------------------------------------------------

fn require_pair_word(word: &DigitWord) -> Result<(), ConstructionError> {
    if word.is_pair_word() {
        Ok(())
    } else {
        Err(ConstructionError::NotPairWord(word.to_string()))
    }
}

/// The raw 6×6 gadget for a pair of digit words. Satisfies the product law
/// `raw(v1,w1) · raw(v2,w2) = raw(v1·v2, w1·w2)` exactly.
pub fn pair_matrix_raw(v: &DigitWord, w: &DigitWord) -> Result<Matrix, ConstructionError> {
    require_pair_word(v)?;
    require_pair_word(w)?;
    let pv = v.fractional_value();
    let pw = w.fractional_value();
    let qv = pow10_neg(v.len());
    let qw = pow10_neg(w.len());
    let zero = Rational::zero;
    let two = Rational::from_int(2);
    Ok(Matrix::from_rows(vec![
        vec![Rational::one(), zero(), zero(), zero(), zero(), zero()],
        vec![pv.clone(), qv.clone(), zero(), zero(), zero(), zero()],
        vec![
            &pv * &pv,
            &two * &qv * &pv,
            &qv * &qv,
            zero(),
            zero(),
            zero(),
        ],
        vec![pw.clone(), zero(), zero(), qw.clone(), zero(), zero()],
        vec![
            &pw * &pw,
            zero(),
            zero(),
            &two * &qw * &pw,
            &qw * &qw,
            zero(),
        ],
        vec![&pv * &pw, &qv * &pw, zero(), &qw * &pv, zero(), &qv * &qw],
    ]))
}

/// The margined gadget: the raw gadget conjugated by [`margin_transform`].
/// Same product law; its first column picks up the tiny positive term that
/// makes the probe sign strict.
pub fn pair_matrix(v: &DigitWord, w: &DigitWord) -> Result<Matrix, ConstructionError> {
    let raw = pair_matrix_raw(v, w)?;
    let (u, u_inv) = margin_transform();
    Ok(&(&u * &raw) * &u_inv)
}

/// The margined gadget conjugated by [`column_transform`]: all column sums
/// are exactly 1, and the matrix is strictly positive whenever both words
/// are nonempty.
pub fn stochastic_pair_matrix(v: &DigitWord, w: &DigitWord) -> Result<Matrix, ConstructionError> {
    let a = pair_matrix(v, w)?;
    let (vt, vt_inv) = column_transform();
    Ok(&(&vt_inv * &a) * &vt)
}

/// `probe_start · pair_matrix(v,w) · probe_end`, the equality detector:
/// positive iff `v = w`, negative otherwise, never zero.
pub fn probe_value(v: &DigitWord, w: &DigitWord) -> Result<Rational, ConstructionError> {
    let a = pair_matrix(v, w)?;
    Ok(probe_start().mul_matrix(&a).dot(&probe_end()))
}

// ---------------------------------------------------------------------------
// Pipeline steps
// ---------------------------------------------------------------------------

/// Adds a sink state to matrices whose column sums are exactly 1: each
/// matrix gains a final column that tops its row sums up to 1 and a final
/// row `(0,…,0,1)`, so row and column sums all become 1.
///
/// The start vector gains a sink coordinate holding the negative of its
/// sum, so the extended start always sums to 0; since the sink never feeds
/// back and the end vector is padded with 0, word values are unchanged.
pub fn add_sink_state(
    matrices: &[Matrix],
    start: &RowVector,
    end: &ColVector,
) -> Result<(Vec<Matrix>, RowVector, ColVector), ConstructionError> {
    let one = Rational::one();
    let mut out = Vec::with_capacity(matrices.len());
    for (mi, m) in matrices.iter().enumerate() {
        for (j, sum) in m.col_sums().into_iter().enumerate() {
            if sum != one {
                return Err(ConstructionError::ColumnSumNotOne {
                    matrix: mi + 1,
                    column: j + 1,
                    sum,
                });
            }
        }
        let d = m.dim();
        let mut c = Matrix::zero(d + 1);
        for i in 0..d {
            for j in 0..d {
                c.set(i, j, m.get(i, j).clone());
            }
            c.set(i, d, &one - &m.row_sum(i));
        }
        c.set(d, d, one.clone());
        out.push(c);
    }
    let start = start.push(-start.sum());
    let end = end.push(Rational::zero());
    Ok((out, start, end))
}

/// Blends doubly-sum-1 matrices with the uniform transition:
/// `D = (1-α)·J + α·C`. Every output must come out strictly positive, so
/// the result is doubly stochastic; otherwise the offending entry is
/// reported. For a start vector of sum 0 the value of a length-m word
/// shrinks by exactly the factor `α^m`, leaving its sign untouched.
pub fn blend_with_uniform(
    matrices: &[Matrix],
    alpha: &Rational,
) -> Result<Vec<Matrix>, ConstructionError> {
    let one = Rational::one();
    if !alpha.is_positive() || *alpha >= one {
        return Err(ConstructionError::AlphaOutOfRange(alpha.clone()));
    }
    let mut out = Vec::with_capacity(matrices.len());
    for (mi, m) in matrices.iter().enumerate() {
        for (i, sum) in m.row_sums().into_iter().enumerate() {
            if sum != one {
                return Err(ConstructionError::RowSumNotOne {
                    matrix: mi + 1,
                    row: i + 1,
                    sum,
                });
            }
        }
        for (j, sum) in m.col_sums().into_iter().enumerate() {
            if sum != one {
                return Err(ConstructionError::ColumnSumNotOne {
                    matrix: mi + 1,
                    column: j + 1,
                    sum,
                });
            }
        }
        let j = Matrix::uniform(m.dim());
        let blended = j.scale(&(&one - alpha)).add(&m.scale(alpha));
        if let Some((row, col, value)) = blended
            .entries()
            .find(|(_, _, x)| !x.is_positive())
            .map(|(i, j, x)| (i, j, x.clone()))
        {
            return Err(ConstructionError::AlphaTooLarge {
                alpha: alpha.clone(),
                matrix: mi + 1,
                row: row + 1,
                col: col + 1,
                value,
            });
        }
        out.push(blended);
    }
    Ok(out)
}

/// The largest `10^{-p}` with `p ≥ 2` for which every blended entry stays
/// strictly positive. Deterministic, and reported in build metadata.
pub fn default_alpha(matrices: &[Matrix]) -> Rational {
    let mut p = 2;
    loop {
        let alpha = pow10_neg(p);
        if blend_with_uniform(matrices, &alpha).is_ok() {
            return alpha;
        }
        p += 1;
        assert!(p <= 4096, "no feasible blend constant found");
    }
}

/// Output of [`normalize_start`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedStart {
    /// `(c·1 + start) / (c·n)` — a probability distribution.
    pub start: RowVector,
    /// `1/n`: the threshold that the value of every word shifts by, under
    /// column-stochastic matrices and an end vector of total weight 1.
    pub cutpoint: Rational,
    /// The smallest positive integer `c ≥ -min(start)`.
    pub constant: Rational,
    /// `c·n`: old word values are scaled down by this divisor on top of
    /// the cutpoint shift.
    pub divisor: Rational,
}

/// Turns a start vector of sum 0 into a probability distribution by an
/// affine shift. New value = `1/n + old value / (c·n)` exactly, so the old
/// comparison against 0 becomes a comparison against the cutpoint `1/n`.
pub fn normalize_start(start: &RowVector) -> Result<NormalizedStart, ConstructionError> {
    let sum = start.sum();
    if !sum.is_zero() {
        return Err(ConstructionError::StartSumNotZero(sum));
    }
    let n = start.len();
    let min = start.min_entry();
    let constant = if min.is_negative() {
        let c = (-min).ceil_int();
        Rational::from_bigint(c)
    } else {
        Rational::one()
    };
    let constant = if constant < Rational::one() {
        Rational::one()
    } else {
        constant
    };
    let divisor = &constant * &Rational::from_int(n as i64);
    let entries = start
        .entries()
        .iter()
        .map(|x| (&constant + x) / &divisor)
        .collect();
    Ok(NormalizedStart {
        start: RowVector::new(entries),
        cutpoint: Rational::new(1, n as i64),
        constant,
        divisor,
    })
}

/// Folds the matrix of `symbol` into the start vector and drops the symbol
/// from the alphabet: the new automaton's value on `s` equals the old
/// automaton's value on `symbol · s`.
pub fn merge_start(
    automaton: &WeightedAutomaton,
    symbol: char,
) -> Result<WeightedAutomaton, PfaError> {
    let merged = automaton.matrix(symbol)?;
    let start = automaton.start().mul_matrix(merged);
    let mut alphabet = Vec::new();
    let mut matrices = Vec::new();
    for (&c, m) in automaton.alphabet().iter().zip(automaton.matrices()) {
        if c != symbol {
            alphabet.push(c);
            matrices.push(m.clone());
        }
    }
    WeightedAutomaton::new(alphabet, matrices, start, automaton.end().clone())
}

// ---------------------------------------------------------------------------
// Instance plumbing shared by the pipelines
// ---------------------------------------------------------------------------

/// Symbol used for the 1-based pair index `i` in automaton alphabets:
/// digits 1–9, then lowercase letters.
pub fn index_symbol(i: usize) -> Option<char> {
    char::from_digit(i as u32, 36)
}

pub(crate) fn index_symbols(k: usize) -> Result<Vec<char>, ConstructionError> {
    (1..=k)
        .map(|i| index_symbol(i).ok_or(ConstructionError::TooManyPairs(k)))
        .collect()
}

/// Recodes every pair of an instance over a two-letter alphabet into
/// gadget digit words.
pub fn gadget_words(
    instance: &PcpInstance,
) -> Result<Vec<(DigitWord, DigitWord)>, ConstructionError> {
    instance
        .pairs()
        .iter()
        .map(|pair| {
            let v = recode_binary(&pair.top, instance.alphabet())?;
            let w = recode_binary(&pair.bottom, instance.alphabet())?;
            Ok((v, w))
        })
        .collect()
}

/// Options for [`forward_pfa`].
#[derive(Clone, Debug)]
pub struct ForwardOptions {
    /// Reverse all words first (turning a forced end pair into a forced
    /// start pair) and merge that pair's matrix into the start vector.
    pub reverse_and_merge: bool,
    /// Blend constant override; defaults to [`default_alpha`].
    pub alpha: Option<Rational>,
    pub comparison: Comparison,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        ForwardOptions {
            reverse_and_merge: false,
            alpha: None,
            comparison: Comparison::Strict,
        }
    }
}

/// A constructed automaton together with its build report.
#[derive(Clone, Debug)]
pub struct PipelineBuild {
    pub pfa: Pfa,
    pub report: BuildReport,
}

/// Builds the 7-state forward automaton of a binary instance: positive
/// doubly stochastic matrices, cutpoint 1/7, and value above the cutpoint
/// exactly on index words that solve the instance.
///
/// Without merging, the empty input also scores above the cutpoint and has
/// to be excluded at search time; `reverse_and_merge` removes it along
/// with the forced pair.
pub fn forward_pfa(
    instance: &PcpInstance,
    options: &ForwardOptions,
) -> Result<PipelineBuild, ConstructionError> {
    let instance = if options.reverse_and_merge {
        if instance.forced_end().is_none() {
            return Err(ConstructionError::MissingForcedEnd);
        }
        instance.reverse()
    } else {
        instance.clone()
    };
    let words = gadget_words(&instance)?;
    let k = words.len();
    let symbols = index_symbols(k)?;

    let stochastic: Vec<Matrix> = words
        .iter()
        .map(|(v, w)| stochastic_pair_matrix(v, w))
        .collect::<Result<_, _>>()?;
    let (sunk, start, end) = add_sink_state(&stochastic, &zero_sum_start(), &probe_end())?;
    let alpha = match &options.alpha {
        Some(a) => a.clone(),
        None => default_alpha(&sunk),
    };
    let blended = blend_with_uniform(&sunk, &alpha)?;
    let norm = normalize_start(&start)?;
    let mut automaton = WeightedAutomaton::new(symbols.clone(), blended, norm.start.clone(), end)?;

    let mut merged_pair = None;
    if options.reverse_and_merge {
        let pair = instance
            .forced_start()
            .expect("reversal turned the forced end into a forced start");
        automaton = merge_start(&automaton, symbols[pair - 1])?;
        merged_pair = Some(pair);
    }

    let pfa = Pfa {
        automaton,
        cutpoint: norm.cutpoint.clone(),
        comparison: options.comparison,
        stochastic_kind: StochasticKind::Doubly,
    };

    let mut report = BuildReport::new(
        "forward7",
        instance.alphabet(),
        norm.cutpoint.clone(),
        pfa.automaton.dim(),
    );
    report.stage("pair gadgets", GADGET_DIM);
    report.stage("column sums 1", GADGET_DIM);
    report.stage("sink state", GADGET_DIM + 1);
    report.stage("uniform blend", GADGET_DIM + 1);
    report.stage("start distribution", GADGET_DIM + 1);
    report.alpha = Some(alpha);
    report.normalization_constant = Some(norm.constant.clone());
    report.value_divisor = Some(norm.divisor.clone());
    report.merged_pair = merged_pair;
    report.empty_word_excluded_by_merge = merged_pair.is_some();
    report.finish_with(&pfa);
    Ok(PipelineBuild { pfa, report })
}

/// Builds the 6-state backward automaton: the column-stochastic gadgets are
/// transposed into row-stochastic matrices, which reverses the reading
/// order and swaps the roles of the start and end vectors. The start
/// becomes a deterministic unit vector, the end a probability vector, and
/// the cutpoint 1/6.
///
/// Requires every word nonempty (that is what makes the gadgets strictly
/// positive). When the instance has a forced start pair, its transposed
/// matrix is folded into the end vector and the pair dropped from the
/// alphabet.
pub fn backward_pfa(
    instance: &PcpInstance,
    comparison: Comparison,
) -> Result<PipelineBuild, ConstructionError> {
    for (i, pair) in instance.pairs().iter().enumerate() {
        if pair.top.is_empty() || pair.bottom.is_empty() {
            return Err(ConstructionError::EmptyWordInPair { pair: i + 1 });
        }
    }
    let words = gadget_words(instance)?;
    let k = words.len();
    let symbols = index_symbols(k)?;

    let transposed: Vec<Matrix> = words
        .iter()
        .map(|(v, w)| Ok(stochastic_pair_matrix(v, w)?.transpose()))
        .collect::<Result<_, ConstructionError>>()?;
    debug_assert!(transposed.iter().all(Matrix::is_positive));

    let start = probe_end().transpose();
    let norm = normalize_start(&zero_sum_start())?;
    let mut end = norm.start.transpose();

    let mut alphabet = symbols;
    let mut matrices = transposed;
    let mut merged_pair = None;
    if let Some(pair) = instance.forced_start() {
        end = end.premul_matrix(&matrices[pair - 1]);
        alphabet.remove(pair - 1);
        matrices.remove(pair - 1);
        merged_pair = Some(pair);
    }

    let automaton = WeightedAutomaton::new(alphabet, matrices, start, end)?;
    let pfa = Pfa {
        automaton,
        cutpoint: norm.cutpoint.clone(),
        comparison,
        stochastic_kind: StochasticKind::Row,
    };

    let mut report = BuildReport::new(
        "backward6",
        instance.alphabet(),
        norm.cutpoint.clone(),
        GADGET_DIM,
    );
    report.stage("pair gadgets", GADGET_DIM);
    report.stage("column sums 1", GADGET_DIM);
    report.stage("transpose", GADGET_DIM);
    report.normalization_constant = Some(norm.constant.clone());
    report.value_divisor = Some(norm.divisor.clone());
    report.merged_pair = merged_pair;
    report.empty_word_excluded_by_merge = merged_pair.is_some();
    report.finish_with(&pfa);
    Ok(PipelineBuild { pfa, report })
}
