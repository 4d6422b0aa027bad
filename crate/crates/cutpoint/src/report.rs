//! Machine-readable build reports emitted alongside constructed automata:
//! stage-by-stage dimensions, the blend constant, the start-normalization
//! constant, the cutpoint, and a checksum per transition matrix.

use indexmap::IndexMap;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::matrix::Matrix;
use crate::pfa::Pfa;
use crate::rational::Rational;

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeEntry {
    /// 1-based pair index in the source instance.
    pub pair_index: usize,
    pub codeword: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    pub version: u32,
    pub variant: String,
    /// Alphabet of the source instance, in declaration order; the first
    /// letter recodes to the digit pair 11, the second to 12.
    pub source_alphabet: Vec<String>,
    pub stages: Vec<Stage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Rational>,
    /// The integer `c` used to lift the start vector into a distribution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization_constant: Option<Rational>,
    /// Word values were divided by this (`c · states`) when the start was
    /// normalized; the sign against the cutpoint is what carries meaning.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_divisor: Option<Rational>,
    pub cutpoint: Rational,
    pub states: usize,
    pub input_symbols: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merged_pair: Option<usize>,
    /// True when a forced pair was merged away, which also removes the
    /// spurious empty-input acceptance; otherwise empty inputs must be
    /// excluded at search time.
    pub empty_word_excluded_by_merge: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_code: Option<Vec<CodeEntry>>,
    pub matrix_checksums: IndexMap<String, String>,
}

impl BuildReport {
    pub fn new(variant: &str, source_alphabet: &[char], cutpoint: Rational, states: usize) -> Self {
        BuildReport {
            version: 1,
            variant: variant.to_string(),
            source_alphabet: source_alphabet.iter().map(|c| c.to_string()).collect(),
            stages: Vec::new(),
            alpha: None,
            normalization_constant: None,
            value_divisor: None,
            cutpoint,
            states,
            input_symbols: Vec::new(),
            merged_pair: None,
            empty_word_excluded_by_merge: false,
            index_code: None,
            matrix_checksums: IndexMap::new(),
        }
    }

    pub fn stage(&mut self, name: &str, dimension: usize) {
        self.stages.push(Stage {
            name: name.to_string(),
            dimension,
        });
    }

    pub fn finish_with(&mut self, pfa: &Pfa) {
        let aut = &pfa.automaton;
        self.input_symbols = aut.alphabet().iter().map(|c| c.to_string()).collect();
        for (&symbol, matrix) in aut.alphabet().iter().zip(aut.matrices()) {
            self.matrix_checksums
                .insert(symbol.to_string(), matrix_checksum(matrix));
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// SHA-256 over the canonical row-major `"p/q"` rendering.
pub fn matrix_checksum(matrix: &Matrix) -> String {
    let mut hasher = Sha256::new();
    for row in matrix.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        hasher.update(cells.join(","));
        hasher.update(";");
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
