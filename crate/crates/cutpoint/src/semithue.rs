//! String rewriting systems and their reduction to correspondence
//! instances over a binary alphabet.
//!
//! The chain has three stages. First the individual word problem
//! `source →* target` becomes a generalized instance over `{a, b}`: a
//! start pair, an end pair, one pair per rewrite rule (padded with a `b`
//! so no word is empty), and two copying pairs. Symbols travel through the
//! codewords `bab, baab, baaab, …`, whose strong substring-uniqueness
//! property keeps the simulation honest. Second, bracket and separator
//! symbols force the start and end pairs to their places, turning the
//! generalized instance into a plain one over five letters. Third, a
//! fixed-length code brings the alphabet back down to `{a, b}`.
//!
//! The module also ships a published three-pair instance showing how the
//! start-pair argument breaks when a word is empty — the reason
//! [`gpcp_to_pcp`] insists on nonempty words.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pcp::{
    walk_gpcp_partials, GpcpInstance, IndexSequence, PcpError, PcpInstance, SearchLimits,
    SearchResult, WordPair,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiThueError {
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("alphabet symbol {0:?} declared twice")]
    DuplicateSymbol(char),
    #[error("the separator '#' may not be part of the alphabet")]
    SeparatorInAlphabet,
    #[error("alphabet entries must be single characters, got {0:?}")]
    NotAChar(String),
    #[error("pair {pair} has an empty word; the bracket construction needs nonempty words")]
    EmptyWordInPair { pair: usize },
    #[error("symbol {0:?} is reserved for the bracket construction")]
    ReservedSymbol(char),
    #[error("expected the alphabet a, b, [, ], * in this order, got {0:?}")]
    WrongAlphabet(String),
    #[error("binary segment {0:?} is not a concatenation of codewords")]
    Undecodable(String),
    #[error("split does not reassemble the encoded word")]
    BadSplit,
    #[error("partial solution {path:?} breaks the separator-count invariant: {detail}")]
    ParityViolated { path: Vec<usize>, detail: String },
    #[error("malformed file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Pcp(#[from] PcpError),
}

/// One replacement rule `lhs ⟶ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteRule {
    #[serde(rename = "l")]
    pub lhs: String,
    #[serde(rename = "r")]
    pub rhs: String,
}

impl RewriteRule {
    pub fn new(lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        RewriteRule {
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }
}

/// A string rewriting system: an alphabet and replacement rules. A rule
/// with an empty left side inserts its right side at any position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiThueSystem {
    alphabet: Vec<char>,
    rules: Vec<RewriteRule>,
}

impl SemiThueSystem {
    pub fn new(alphabet: Vec<char>, rules: Vec<RewriteRule>) -> Result<Self, SemiThueError> {
        let mut seen = HashSet::new();
        for &c in &alphabet {
            if !seen.insert(c) {
                return Err(SemiThueError::DuplicateSymbol(c));
            }
        }
        for rule in &rules {
            for word in [&rule.lhs, &rule.rhs] {
                if let Some(bad) = word.chars().find(|c| !seen.contains(c)) {
                    return Err(SemiThueError::UnknownSymbol(bad));
                }
            }
        }
        Ok(SemiThueSystem { alphabet, rules })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    /// All words reachable from `u` in exactly one replacement step.
    pub fn one_step(&self, u: &str) -> BTreeSet<String> {
        let chars: Vec<char> = u.chars().collect();
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            let lhs: Vec<char> = rule.lhs.chars().collect();
            if lhs.is_empty() {
                for p in 0..=chars.len() {
                    let mut next: String = chars[..p].iter().collect();
                    next.push_str(&rule.rhs);
                    next.extend(&chars[p..]);
                    out.insert(next);
                }
            } else if chars.len() >= lhs.len() {
                for p in 0..=chars.len() - lhs.len() {
                    if chars[p..p + lhs.len()] == lhs[..] {
                        let mut next: String = chars[..p].iter().collect();
                        next.push_str(&rule.rhs);
                        next.extend(&chars[p + lhs.len()..]);
                        out.insert(next);
                    }
                }
            }
        }
        out
    }

    /// Breadth-first search for a shortest derivation `from →* to` of at
    /// most `max_depth` steps. Derivation words are explored in sorted
    /// order, so the result is deterministic. A derivation of length 0 is
    /// the word itself (the relation is reflexive).
    pub fn bounded_derives(
        &self,
        from: &str,
        to: &str,
        max_depth: usize,
    ) -> SearchResult<Vec<String>> {
        if from == to {
            return SearchResult::Found(vec![from.to_string()]);
        }
        struct Node {
            word: String,
            parent: Option<usize>,
        }
        let mut arena = vec![Node {
            word: from.to_string(),
            parent: None,
        }];
        let mut visited: HashSet<String> = HashSet::from([from.to_string()]);
        let mut frontier = vec![0usize];
        for _ in 0..max_depth {
            let mut next = Vec::new();
            for &slot in &frontier {
                let word = arena[slot].word.clone();
                for succ in self.one_step(&word) {
                    if !visited.insert(succ.clone()) {
                        continue;
                    }
                    arena.push(Node {
                        word: succ.clone(),
                        parent: Some(slot),
                    });
                    if succ == to {
                        let mut path = Vec::new();
                        let mut at = arena.len() - 1;
                        loop {
                            path.push(arena[at].word.clone());
                            match arena[at].parent {
                                Some(p) => at = p,
                                None => break,
                            }
                        }
                        path.reverse();
                        return SearchResult::Found(path);
                    }
                    next.push(arena.len() - 1);
                }
            }
            if next.is_empty() {
                return SearchResult::Closed;
            }
            frontier = next;
        }
        if frontier.is_empty() {
            SearchResult::Closed
        } else {
            SearchResult::Exhausted
        }
    }
}

// ---------------------------------------------------------------------------
// Binary symbol code
// ---------------------------------------------------------------------------

/// The separator added in front of the rewriting alphabet.
pub const SEPARATOR: char = '#';

/// The binary code `bab, baab, baaab, …` over the symbols `#, σ1, σ2, …`
/// (separator first, then the alphabet in declaration order). No codeword
/// occurs inside a concatenation of codewords except where a symbol was
/// encoded, which is the property the reduction leans on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolCode {
    symbols: Vec<char>,
}

impl SymbolCode {
    /// Code for `Σ ∪ {#}` with `#` first, then `Σ` in declaration order.
    pub fn for_alphabet(alphabet: &[char]) -> Result<Self, SemiThueError> {
        if alphabet.contains(&SEPARATOR) {
            return Err(SemiThueError::SeparatorInAlphabet);
        }
        let mut symbols = vec![SEPARATOR];
        symbols.extend_from_slice(alphabet);
        Ok(SymbolCode { symbols })
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn codeword(&self, symbol: char) -> Result<String, SemiThueError> {
        let pos = self
            .symbols
            .iter()
            .position(|&c| c == symbol)
            .ok_or(SemiThueError::UnknownSymbol(symbol))?;
        let mut word = String::with_capacity(pos + 3);
        word.push('b');
        for _ in 0..=pos {
            word.push('a');
        }
        word.push('b');
        Ok(word)
    }

    /// Concatenation of the codewords of `word`.
    pub fn encode(&self, word: &str) -> Result<String, SemiThueError> {
        let mut out = String::new();
        for symbol in word.chars() {
            out.push_str(&self.codeword(symbol)?);
        }
        Ok(out)
    }

    /// Exact decoding of a full concatenation of codewords.
    pub fn decode(&self, binary: &str) -> Option<String> {
        let chars: Vec<char> = binary.chars().collect();
        let mut out = String::new();
        let mut at = 0;
        while at < chars.len() {
            if chars[at] != 'b' {
                return None;
            }
            let mut run = 0;
            let mut i = at + 1;
            while i < chars.len() && chars[i] == 'a' {
                run += 1;
                i += 1;
            }
            if run == 0 || i >= chars.len() || chars[i] != 'b' {
                return None;
            }
            out.push(*self.symbols.get(run - 1)?);
            at = i + 1;
        }
        Some(out)
    }
}

/// Witness for an occurrence of a codeword inside an encoded word: given
/// `encode(u) = x · codeword(symbol) · y`, both flanks decode, and the
/// decodings `v, w` satisfy `u = v · symbol · w`. Returns `(v, w)`.
pub fn decode_split(
    code: &SymbolCode,
    u: &str,
    x: &str,
    symbol: char,
    y: &str,
) -> Result<(String, String), SemiThueError> {
    let encoded = code.encode(u)?;
    let middle = code.codeword(symbol)?;
    if format!("{x}{middle}{y}") != encoded {
        return Err(SemiThueError::BadSplit);
    }
    let v = code
        .decode(x)
        .ok_or_else(|| SemiThueError::Undecodable(x.to_string()))?;
    let w = code
        .decode(y)
        .ok_or_else(|| SemiThueError::Undecodable(y.to_string()))?;
    if format!("{v}{symbol}{w}") != u {
        return Err(SemiThueError::BadSplit);
    }
    Ok((v, w))
}

// ---------------------------------------------------------------------------
// The reduction chain
// ---------------------------------------------------------------------------

/// An individual word problem: does `source` rewrite to `target`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordProblem {
    pub system: SemiThueSystem,
    pub source: String,
    pub target: String,
}

#[derive(Serialize, Deserialize)]
struct SemiThueFile {
    alphabet: Vec<String>,
    rules: Vec<RewriteRule>,
    source: String,
    target: String,
}

pub fn word_problem_from_json(json: &str) -> Result<WordProblem, SemiThueError> {
    let file: SemiThueFile =
        serde_json::from_str(json).map_err(|e| SemiThueError::Malformed(e.to_string()))?;
    let mut alphabet = Vec::with_capacity(file.alphabet.len());
    for s in &file.alphabet {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => alphabet.push(c),
            _ => return Err(SemiThueError::NotAChar(s.clone())),
        }
    }
    let system = SemiThueSystem::new(alphabet, file.rules)?;
    let known: HashSet<char> = system.alphabet().iter().copied().collect();
    for word in [&file.source, &file.target] {
        if let Some(bad) = word.chars().find(|c| !known.contains(c)) {
            return Err(SemiThueError::UnknownSymbol(bad));
        }
    }
    Ok(WordProblem {
        system,
        source: file.source,
        target: file.target,
    })
}

/// Encodes the word problem as a generalized instance over `{a, b}` with
/// `k + 4` nonempty pairs: the start pair `(⟨#⟩, ⟨#·source·#⟩)`, the end
/// pair `(⟨#·target·#⟩, ⟨#⟩)`, one `b`-padded pair `(⟨l⟩b, ⟨r⟩b)` per
/// rule, and the copying pairs `(a,a)` and `(b,b)`.
pub fn gpcp_from_word_problem(problem: &WordProblem) -> Result<GpcpInstance, SemiThueError> {
    let code = SymbolCode::for_alphabet(problem.system.alphabet())?;
    let wrap = |w: &str| format!("{SEPARATOR}{w}{SEPARATOR}");
    let mut pairs = vec![
        WordPair::new(
            code.codeword(SEPARATOR)?,
            code.encode(&wrap(&problem.source))?,
        ),
        WordPair::new(
            code.encode(&wrap(&problem.target))?,
            code.codeword(SEPARATOR)?,
        ),
    ];
    for rule in problem.system.rules() {
        pairs.push(WordPair::new(
            format!("{}b", code.encode(&rule.lhs)?),
            format!("{}b", code.encode(&rule.rhs)?),
        ));
    }
    pairs.push(WordPair::new("a", "a"));
    pairs.push(WordPair::new("b", "b"));
    Ok(GpcpInstance::new(vec!['a', 'b'], pairs)?)
}

const LEFT_BRACKET: char = '[';
const RIGHT_BRACKET: char = ']';
const STAR: char = '*';

fn interleave_before(word: &str) -> String {
    let mut out = String::with_capacity(2 * word.len());
    for c in word.chars() {
        out.push(STAR);
        out.push(c);
    }
    out
}

fn interleave_after(word: &str) -> String {
    let mut out = String::with_capacity(2 * word.len());
    for c in word.chars() {
        out.push(c);
        out.push(STAR);
    }
    out
}

/// Forces the start and end pairs of a generalized instance to their
/// places, producing a plain instance over the alphabet extended with
/// `[`, `]` and `*`.
///
/// Every word of the input must be nonempty: with an empty word the image
/// instance admits solutions that do not start with pair 1 — see
/// [`empty_word_counterexample`].
pub fn gpcp_to_pcp(instance: &GpcpInstance) -> Result<PcpInstance, SemiThueError> {
    for (i, pair) in instance.pairs().iter().enumerate() {
        if pair.top.is_empty() || pair.bottom.is_empty() {
            return Err(SemiThueError::EmptyWordInPair { pair: i + 1 });
        }
    }
    for &reserved in &[LEFT_BRACKET, RIGHT_BRACKET, STAR] {
        if instance.alphabet().contains(&reserved) {
            return Err(SemiThueError::ReservedSymbol(reserved));
        }
    }

    let mut alphabet = instance.alphabet().to_vec();
    alphabet.extend([LEFT_BRACKET, RIGHT_BRACKET, STAR]);

    let mut pairs = Vec::with_capacity(instance.len());
    for (i, pair) in instance.pairs().iter().enumerate() {
        let mapped = match i {
            0 => WordPair::new(
                format!("{LEFT_BRACKET}{}", interleave_before(&pair.top)),
                format!("{LEFT_BRACKET}{}{STAR}", interleave_before(&pair.bottom)),
            ),
            1 => WordPair::new(
                format!("{STAR}{}{RIGHT_BRACKET}", interleave_after(&pair.top)),
                format!("{}{RIGHT_BRACKET}", interleave_after(&pair.bottom)),
            ),
            _ => WordPair::new(interleave_before(&pair.top), interleave_after(&pair.bottom)),
        };
        pairs.push(mapped);
    }

    Ok(PcpInstance::new(alphabet, pairs)?.with_structure(Some(1), Some(2))?)
}

/// Recodes a five-letter instance produced by [`gpcp_to_pcp`] back onto
/// `{a, b}` with the fixed-length codewords
/// `a ↦ aaa, b ↦ bbb, [ ↦ bba, ] ↦ aba, * ↦ bab`. The code is injective
/// and fixed-length, so solvability and solution indices are untouched.
pub fn binarize_alphabet(instance: &PcpInstance) -> Result<PcpInstance, SemiThueError> {
    let expected = ['a', 'b', LEFT_BRACKET, RIGHT_BRACKET, STAR];
    if instance.alphabet() != expected {
        return Err(SemiThueError::WrongAlphabet(
            instance.alphabet().iter().collect(),
        ));
    }
    let encode_char = |c: char| match c {
        'a' => "aaa",
        'b' => "bbb",
        LEFT_BRACKET => "bba",
        RIGHT_BRACKET => "aba",
        _ => "bab",
    };
    let encode = |w: &str| w.chars().map(encode_char).collect::<String>();
    let pairs = instance
        .pairs()
        .iter()
        .map(|p| WordPair::new(encode(&p.top), encode(&p.bottom)))
        .collect();
    Ok(PcpInstance::new(vec!['a', 'b'], pairs)?
        .with_structure(instance.forced_start(), instance.forced_end())?)
}

/// All three stages of the reduction for one word problem.
#[derive(Clone, Debug)]
pub struct ReductionChain {
    pub gpcp: GpcpInstance,
    pub five_letter: PcpInstance,
    pub binary: PcpInstance,
}

pub fn reduction_chain(problem: &WordProblem) -> Result<ReductionChain, SemiThueError> {
    let gpcp = gpcp_from_word_problem(problem)?;
    let five_letter = gpcp_to_pcp(&gpcp)?;
    let binary = binarize_alphabet(&five_letter)?;
    Ok(ReductionChain {
        gpcp,
        five_letter,
        binary,
    })
}

// ---------------------------------------------------------------------------
// Invariants along partial solutions
// ---------------------------------------------------------------------------

fn count_occurrences(haystack: &str, needle: &str) -> usize {
    let h: Vec<char> = haystack.chars().collect();
    let n: Vec<char> = needle.chars().collect();
    if n.is_empty() || h.len() < n.len() {
        return 0;
    }
    (0..=h.len() - n.len())
        .filter(|&p| h[p..p + n.len()] == n[..])
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityReport {
    pub partials_checked: usize,
}

/// Walks every partial solution the generalized solver visits (start pair,
/// then middle pairs, before any end pair) and checks the bookkeeping the
/// encoding is supposed to maintain: the bottom row contains exactly one
/// more separator codeword than the top row, and the top row is a strict
/// prefix of the bottom row.
pub fn check_chain_parity(
    instance: &GpcpInstance,
    limits: &SearchLimits,
) -> Result<ParityReport, SemiThueError> {
    let marker = {
        // ⟨#⟩ is always the first codeword, independent of the alphabet.
        let code = SymbolCode::for_alphabet(&[])?;
        code.codeword(SEPARATOR)?
    };
    let checked = walk_gpcp_partials(instance, limits, |path| {
        let seq = IndexSequence::new(path.to_vec()).expect("walker paths are nonempty");
        let (top, bottom) = instance.apply(&seq)?;
        if !bottom.starts_with(&top) || top.len() >= bottom.len() {
            return Err(SemiThueError::ParityViolated {
                path: path.to_vec(),
                detail: format!(
                    "top row (length {}) is not a strict prefix of the bottom row (length {})",
                    top.len(),
                    bottom.len()
                ),
            });
        }
        let top_count = count_occurrences(&top, &marker);
        let bottom_count = count_occurrences(&bottom, &marker);
        if bottom_count != top_count + 1 {
            return Err(SemiThueError::ParityViolated {
                path: path.to_vec(),
                detail: format!(
                    "top row holds {top_count} separators, bottom row {bottom_count}; expected one more below"
                ),
            });
        }
        Ok(())
    })?;
    Ok(ParityReport {
        partials_checked: checked,
    })
}

// ---------------------------------------------------------------------------
// The published empty-word counterexample
// ---------------------------------------------------------------------------

/// A three-pair instance, built with the codewords `ab^{i+1}a` over the
/// symbols `*, u, v, w`, that follows the structured start/end pattern yet
/// has the solution `[2, 1, 3]` — one that does not start with pair 1.
/// The culprit is the empty bottom word of pair 2. Returns the instance
/// and that witness.
pub fn empty_word_counterexample() -> (PcpInstance, IndexSequence) {
    let phi_star = "aba";
    let phi_u = "abba";
    let phi_v = "abbba";
    let phi_w = "abbbba";
    let pairs = vec![
        // Start pair: top spells *v*w, bottom spells *.
        WordPair::new(
            format!("{phi_star}{phi_v}{phi_star}{phi_w}"),
            phi_star.to_string(),
        ),
        // Middle pair: top spells *u, bottom is empty.
        WordPair::new(format!("{phi_star}{phi_u}"), String::new()),
        // End pair: top spells **, bottom spells u*v*w**.
        WordPair::new(
            format!("{phi_star}{phi_star}"),
            format!("{phi_u}{phi_star}{phi_v}{phi_star}{phi_w}{phi_star}{phi_star}"),
        ),
    ];
    let instance =
        PcpInstance::new(vec!['a', 'b'], pairs).expect("counterexample instance is well formed");
    let witness = IndexSequence::new(vec![2, 1, 3]).expect("witness is nonempty");
    (instance, witness)
}
