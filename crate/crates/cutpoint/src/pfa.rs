//! Weighted automata, stochastic automata with a cutpoint, and their
//! runtime: exact word values, acceptance, validation, cutpoint shifting,
//! bounded emptiness search, and a JSON wire format.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{ColVector, Matrix, RowVector};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfaError {
    #[error("alphabet has {alphabet} symbols but {matrices} matrices were supplied")]
    AlphabetMismatch { alphabet: usize, matrices: usize },
    #[error("alphabet symbol {0:?} declared twice")]
    DuplicateSymbol(char),
    #[error("matrix for {symbol:?} is {got}x{got}, expected {want}x{want}")]
    DimensionMismatch {
        symbol: char,
        got: usize,
        want: usize,
    },
    #[error("start vector has length {got}, expected {want}")]
    StartLength { got: usize, want: usize },
    #[error("end vector has length {got}, expected {want}")]
    EndLength { got: usize, want: usize },
    #[error("symbol {0:?} is not in the automaton's alphabet")]
    UnknownSymbol(char),
    #[error("cutpoint {0} is outside the open interval (0,1)")]
    CutpointOutOfRange(Rational),
    #[error("raising the cutpoint needs row-stochastic matrices and a start vector of sum 1")]
    ShiftNeedsRowStochastic,
    #[error("malformed automaton file: {0}")]
    Schema(String),
    #[error("unsupported file version {0}")]
    Version(u32),
}

/// An automaton with one square rational matrix per input symbol, a start
/// row vector and an end column vector. The value of a word is
/// `start · M(w_1) · … · M(w_m) · end`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedAutomaton {
    alphabet: Vec<char>,
    matrices: Vec<Matrix>,
    start: RowVector,
    end: ColVector,
}

impl WeightedAutomaton {
    pub fn new(
        alphabet: Vec<char>,
        matrices: Vec<Matrix>,
        start: RowVector,
        end: ColVector,
    ) -> Result<Self, PfaError> {
        if alphabet.len() != matrices.len() {
            return Err(PfaError::AlphabetMismatch {
                alphabet: alphabet.len(),
                matrices: matrices.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for &c in &alphabet {
            if !seen.insert(c) {
                return Err(PfaError::DuplicateSymbol(c));
            }
        }
        let dim = start.len();
        for (&symbol, m) in alphabet.iter().zip(&matrices) {
            if m.dim() != dim {
                return Err(PfaError::DimensionMismatch {
                    symbol,
                    got: m.dim(),
                    want: dim,
                });
            }
        }
        if end.len() != dim {
            return Err(PfaError::EndLength {
                got: end.len(),
                want: dim,
            });
        }
        Ok(WeightedAutomaton {
            alphabet,
            matrices,
            start,
            end,
        })
    }

    pub fn dim(&self) -> usize {
        self.start.len()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn start(&self) -> &RowVector {
        &self.start
    }

    pub fn end(&self) -> &ColVector {
        &self.end
    }

    pub fn matrix(&self, symbol: char) -> Result<&Matrix, PfaError> {
        self.alphabet
            .iter()
            .position(|&c| c == symbol)
            .map(|i| &self.matrices[i])
            .ok_or(PfaError::UnknownSymbol(symbol))
    }

    /// Replaces the end vector, keeping everything else.
    pub fn with_end(&self, end: ColVector) -> Result<Self, PfaError> {
        WeightedAutomaton::new(
            self.alphabet.clone(),
            self.matrices.clone(),
            self.start.clone(),
            end,
        )
    }

    /// Exact value of a word.
    pub fn value(&self, word: &str) -> Result<Rational, PfaError> {
        let mut state = self.start.clone();
        for symbol in word.chars() {
            state = state.mul_matrix(self.matrix(symbol)?);
        }
        Ok(state.dot(&self.end))
    }

    /// Exhaustively enumerates `(word, value)` for every word of length at
    /// most `max_len`, ordered by length and then alphabet order. Desk-scale
    /// only: the list grows like `|Σ|^max_len`.
    pub fn enumerate_values(&self, max_len: usize) -> Vec<(String, Rational)> {
        let mut out = Vec::new();
        let mut layer: Vec<(String, RowVector)> = vec![(String::new(), self.start.clone())];
        out.push((String::new(), self.start.dot(&self.end)));
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.alphabet.len());
            for (word, state) in &layer {
                for (&symbol, matrix) in self.alphabet.iter().zip(&self.matrices) {
                    let state2 = state.mul_matrix(matrix);
                    let mut word2 = word.clone();
                    word2.push(symbol);
                    out.push((word2.clone(), state2.dot(&self.end)));
                    next.push((word2, state2));
                }
            }
            layer = next;
        }
        out
    }
}

/// Acceptance comparison against the cutpoint.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Comparison {
    /// `value > cutpoint`
    Strict,
    /// `value ≥ cutpoint`
    Weak,
}

/// What kind of stochasticity the transition matrices are claimed to have.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StochasticKind {
    Row,
    Column,
    Doubly,
    None,
}

/// A weighted automaton together with a cutpoint, a comparison mode, and a
/// stochasticity claim. The claim is validated by [`Pfa::validate`], not by
/// construction, so broken inputs can be loaded and reported on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pfa {
    pub automaton: WeightedAutomaton,
    pub cutpoint: Rational,
    pub comparison: Comparison,
    pub stochastic_kind: StochasticKind,
}

/// Result of a bounded emptiness search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Emptiness {
    /// Shortest accepted word within the bound (lexicographically least
    /// among those of equal length).
    Witness(String),
    /// No accepted word of length ≤ `max_len`. Says nothing beyond the bound.
    EmptyWithinBound { max_len: usize },
}

impl Pfa {
    pub fn value(&self, word: &str) -> Result<Rational, PfaError> {
        self.automaton.value(word)
    }

    pub fn accepts(&self, word: &str) -> Result<bool, PfaError> {
        let value = self.value(word)?;
        Ok(match self.comparison {
            Comparison::Strict => value > self.cutpoint,
            Comparison::Weak => value >= self.cutpoint,
        })
    }

    fn accepts_value(&self, value: &Rational) -> bool {
        match self.comparison {
            Comparison::Strict => *value > self.cutpoint,
            Comparison::Weak => *value >= self.cutpoint,
        }
    }

    /// Breadth-first scan for the shortest accepted word of length at most
    /// `max_len`. Words of equal length are tried in alphabet order, so the
    /// result is deterministic.
    pub fn bounded_emptiness(&self, max_len: usize, exclude_empty: bool) -> Emptiness {
        let start = &self.automaton.start;
        if !exclude_empty {
            let value = start.dot(&self.automaton.end);
            if self.accepts_value(&value) {
                return Emptiness::Witness(String::new());
            }
        }
        let mut layer: Vec<(String, RowVector)> = vec![(String::new(), start.clone())];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.automaton.alphabet.len());
            for (word, state) in &layer {
                for (&symbol, matrix) in
                    self.automaton.alphabet.iter().zip(&self.automaton.matrices)
                {
                    let state2 = state.mul_matrix(matrix);
                    let value = state2.dot(&self.automaton.end);
                    let mut word2 = word.clone();
                    word2.push(symbol);
                    if self.accepts_value(&value) {
                        return Emptiness::Witness(word2);
                    }
                    next.push((word2, state2));
                }
            }
            layer = next;
        }
        Emptiness::EmptyWithinBound { max_len }
    }

    /// Moves the cutpoint to `target` by transforming the end vector
    /// affinely; the accepted language is unchanged.
    ///
    /// Lowering scales the end vector by `target/cutpoint`. Raising maps
    /// `f ↦ (1-a) + a·f` with `a = (1-target)/(1-cutpoint)`, which needs
    /// row-stochastic matrices and a start vector of sum 1 so that the
    /// all-ones end vector is worth exactly 1 on every word.
    pub fn shift_cutpoint(&self, target: &Rational) -> Result<Pfa, PfaError> {
        let one = Rational::one();
        if !target.is_positive() || *target >= one {
            return Err(PfaError::CutpointOutOfRange(target.clone()));
        }
        if *target == self.cutpoint {
            return Ok(self.clone());
        }
        let end = self.automaton.end();
        let new_end = if *target < self.cutpoint {
            let factor = target / &self.cutpoint;
            ColVector::new(end.entries().iter().map(|x| x * &factor).collect())
        } else {
            let row_stochastic = matches!(
                self.stochastic_kind,
                StochasticKind::Row | StochasticKind::Doubly
            );
            if !row_stochastic || self.automaton.start().sum() != one {
                return Err(PfaError::ShiftNeedsRowStochastic);
            }
            let factor = (&one - target) / (&one - &self.cutpoint);
            let offset = &one - &factor;
            ColVector::new(
                end.entries()
                    .iter()
                    .map(|x| &offset + &(x * &factor))
                    .collect(),
            )
        };
        Ok(Pfa {
            automaton: self.automaton.with_end(new_end)?,
            cutpoint: target.clone(),
            comparison: self.comparison,
            stochastic_kind: self.stochastic_kind,
        })
    }

    /// Checks every invariant of the declared shape and reports exact
    /// violations instead of failing.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let one = Rational::one();
        let aut = &self.automaton;

        let (need_rows, need_cols) = match self.stochastic_kind {
            StochasticKind::Row => (true, false),
            StochasticKind::Column => (false, true),
            StochasticKind::Doubly => (true, true),
            StochasticKind::None => (false, false),
        };
        if self.stochastic_kind != StochasticKind::None {
            for (&symbol, m) in aut.alphabet.iter().zip(&aut.matrices) {
                for (i, j, x) in m.entries() {
                    if x.is_negative() {
                        report.violation(
                            format!("matrix {symbol:?} entry ({},{})", i + 1, j + 1),
                            format!("negative entry {x}"),
                        );
                    }
                }
                if need_rows {
                    for (i, sum) in m.row_sums().into_iter().enumerate() {
                        if sum != one {
                            report.violation(
                                format!("matrix {symbol:?} row {}", i + 1),
                                format!("sum is {sum}, off by {}", &sum - &one),
                            );
                        }
                    }
                }
                if need_cols {
                    for (j, sum) in m.col_sums().into_iter().enumerate() {
                        if sum != one {
                            report.violation(
                                format!("matrix {symbol:?} column {}", j + 1),
                                format!("sum is {sum}, off by {}", &sum - &one),
                            );
                        }
                    }
                }
            }
        }

        for (i, x) in aut.start.entries().iter().enumerate() {
            if x.is_negative() {
                report.violation(format!("start entry {}", i + 1), format!("negative: {x}"));
            }
        }
        let start_sum = aut.start.sum();
        if start_sum != one {
            report.violation(
                "start vector".to_string(),
                format!("entries sum to {start_sum}, not 1/1"),
            );
        }

        for (i, x) in aut.end.entries().iter().enumerate() {
            if x.is_negative() || *x > one {
                report.violation(
                    format!("output entry {}", i + 1),
                    format!("outside [0,1]: {x}"),
                );
            }
        }

        if !self.cutpoint.is_positive() || self.cutpoint >= one {
            report.violation(
                "cutpoint".to_string(),
                format!("outside (0,1): {}", self.cutpoint),
            );
        }

        if aut.start.entries().iter().filter(|x| !x.is_zero()).count() == 1 && start_sum == one {
            report.note("start vector is a unit vector (deterministic start state)");
        }
        if aut.matrices.iter().all(|m| m.is_positive()) {
            report.note("all transition matrices are strictly positive");
        }
        if aut.end.entries().iter().all(|x| x.is_zero() || *x == one) {
            report.note("output vector is a 0-1 vector");
        }
        report
    }
}

/// One exact invariant violation: where, and by how much.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub location: String,
    pub problem: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn violation(&mut self, location: String, problem: String) {
        self.violations.push(Violation { location, problem });
    }

    fn note(&mut self, text: &str) {
        self.notes.push(text.to_string());
    }
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

const FILE_VERSION: u32 = 1;

/// Serialized shape of a [`Pfa`]. Matrices are keyed by symbol in alphabet
/// order; every number is an exact `"p/q"` string; start vectors are rows
/// applied from the left. Round trips are bit-exact.
#[derive(Serialize, Deserialize)]
struct PfaFile {
    version: u32,
    states: usize,
    alphabet: Vec<String>,
    matrices: IndexMap<String, Vec<Vec<Rational>>>,
    start: Vec<Rational>,
    output: Vec<Rational>,
    cutpoint: Rational,
    strict: bool,
    stochastic_kind: StochasticKind,
}

impl Pfa {
    pub fn to_json(&self) -> String {
        let aut = &self.automaton;
        let mut matrices = IndexMap::new();
        for (&symbol, m) in aut.alphabet.iter().zip(&aut.matrices) {
            let rows: Vec<Vec<Rational>> = m.rows().map(|r| r.to_vec()).collect();
            matrices.insert(symbol.to_string(), rows);
        }
        let file = PfaFile {
            version: FILE_VERSION,
            states: aut.dim(),
            alphabet: aut.alphabet.iter().map(|c| c.to_string()).collect(),
            matrices,
            start: aut.start.entries().to_vec(),
            output: aut.end.entries().to_vec(),
            cutpoint: self.cutpoint.clone(),
            strict: matches!(self.comparison, Comparison::Strict),
            stochastic_kind: self.stochastic_kind,
        };
        serde_json::to_string_pretty(&file).expect("automaton serializes")
    }

    pub fn from_json(json: &str) -> Result<Pfa, PfaError> {
        let file: PfaFile =
            serde_json::from_str(json).map_err(|e| PfaError::Schema(e.to_string()))?;
        if file.version != FILE_VERSION {
            return Err(PfaError::Version(file.version));
        }
        let mut alphabet = Vec::with_capacity(file.alphabet.len());
        for s in &file.alphabet {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => alphabet.push(c),
                _ => {
                    return Err(PfaError::Schema(format!(
                        "alphabet entries must be single characters, got {s:?}"
                    )))
                }
            }
        }
        let mut matrices = Vec::with_capacity(alphabet.len());
        for (symbol, s) in alphabet.iter().zip(&file.alphabet) {
            let rows = file
                .matrices
                .get(s)
                .ok_or_else(|| PfaError::Schema(format!("missing matrix for symbol {s:?}")))?;
            if rows.len() != file.states || rows.iter().any(|r| r.len() != file.states) {
                return Err(PfaError::Schema(format!(
                    "matrix for {symbol:?} is not {0}x{0}",
                    file.states
                )));
            }
            matrices.push(Matrix::from_rows(rows.clone()));
        }
        if file.matrices.len() != alphabet.len() {
            return Err(PfaError::Schema(
                "matrices present for symbols outside the alphabet".to_string(),
            ));
        }
        if file.start.len() != file.states {
            return Err(PfaError::Schema(format!(
                "start vector has length {}, expected {}",
                file.start.len(),
                file.states
            )));
        }
        if file.output.len() != file.states {
            return Err(PfaError::Schema(format!(
                "output vector has length {}, expected {}",
                file.output.len(),
                file.states
            )));
        }
        let automaton = WeightedAutomaton::new(
            alphabet,
            matrices,
            RowVector::new(file.start),
            ColVector::new(file.output),
        )?;
        Ok(Pfa {
            automaton,
            cutpoint: file.cutpoint,
            comparison: if file.strict {
                Comparison::Strict
            } else {
                Comparison::Weak
            },
            stochastic_kind: file.stochastic_kind,
        })
    }
}
