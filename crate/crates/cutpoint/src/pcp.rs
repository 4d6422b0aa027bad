//! Word-pair correspondence instances and a bounded configuration search.
//!
//! A plain instance asks for a nonempty index sequence whose top and bottom
//! concatenations agree. The generalized form (GPCP) fixes pair 1 as the
//! mandatory first pair and pair 2 as the mandatory last pair, with all
//! middle indices drawn from `3..=k`.
//!
//! The solver works on configurations `(leading side, overhang)`: the side
//! whose concatenation is currently longer, plus the unmatched suffix. It
//! deduplicates configurations, so when the reachable configuration graph
//! is finite the search can genuinely close, and "no solution within the
//! explored space" is reported separately from "limits hit".

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcpError {
    #[error("instance needs at least {need} pairs, got {got}")]
    TooFewPairs { need: usize, got: usize },
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet symbol {0:?} declared twice")]
    DuplicateSymbol(char),
    #[error("alphabet entries must be single characters, got {0:?}")]
    NotAChar(String),
    #[error("word {word:?} of pair {pair} uses symbol {symbol:?} outside the alphabet")]
    WordNotOverAlphabet {
        pair: usize,
        word: String,
        symbol: char,
    },
    #[error("pair index {index} out of range 1..={k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("index sequence must be nonempty")]
    EmptySequence,
    #[error("structure marker {index} out of range 1..={k}")]
    BadMarker { index: usize, k: usize },
    #[error("unknown instance kind {0:?}")]
    UnknownKind(String),
    #[error("malformed instance file: {0}")]
    Malformed(String),
}

/// One top/bottom word pair.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WordPair {
    pub top: String,
    pub bottom: String,
}

impl WordPair {
    pub fn new(top: impl Into<String>, bottom: impl Into<String>) -> Self {
        WordPair {
            top: top.into(),
            bottom: bottom.into(),
        }
    }

    fn reversed(&self) -> WordPair {
        WordPair {
            top: self.top.chars().rev().collect(),
            bottom: self.bottom.chars().rev().collect(),
        }
    }
}

/// A nonempty sequence of 1-based pair indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexSequence(Vec<usize>);

impl IndexSequence {
    pub fn new(indices: Vec<usize>) -> Result<Self, PcpError> {
        if indices.is_empty() {
            return Err(PcpError::EmptySequence);
        }
        Ok(IndexSequence(indices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn reversed(&self) -> IndexSequence {
        IndexSequence(self.0.iter().rev().copied().collect())
    }

    /// Concatenation of two index sequences.
    pub fn concat(&self, other: &IndexSequence) -> IndexSequence {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        IndexSequence(v)
    }
}

impl std::fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, "]")
    }
}

/// A plain correspondence instance, optionally with structure markers that
/// record a pair every solution must start with and/or end with.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PcpInstance {
    alphabet: Vec<char>,
    pairs: Vec<WordPair>,
    forced_start: Option<usize>,
    forced_end: Option<usize>,
}

/// The generalized form: pair 1 is the start pair, pair 2 the end pair,
/// and solutions have the shape `1, m_2 … m_{j}, 2` with middles in `3..=k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GpcpInstance {
    alphabet: Vec<char>,
    pairs: Vec<WordPair>,
}

fn check_alphabet(alphabet: &[char]) -> Result<(), PcpError> {
    if alphabet.is_empty() {
        return Err(PcpError::EmptyAlphabet);
    }
    let mut seen = HashSet::new();
    for &c in alphabet {
        if !seen.insert(c) {
            return Err(PcpError::DuplicateSymbol(c));
        }
    }
    Ok(())
}

fn check_words(alphabet: &[char], pairs: &[WordPair]) -> Result<(), PcpError> {
    let set: HashSet<char> = alphabet.iter().copied().collect();
    for (i, pair) in pairs.iter().enumerate() {
        for word in [&pair.top, &pair.bottom] {
            if let Some(symbol) = word.chars().find(|c| !set.contains(c)) {
                return Err(PcpError::WordNotOverAlphabet {
                    pair: i + 1,
                    word: word.clone(),
                    symbol,
                });
            }
        }
    }
    Ok(())
}

impl PcpInstance {
    pub fn new(alphabet: Vec<char>, pairs: Vec<WordPair>) -> Result<Self, PcpError> {
        if pairs.is_empty() {
            return Err(PcpError::TooFewPairs { need: 1, got: 0 });
        }
        check_alphabet(&alphabet)?;
        check_words(&alphabet, &pairs)?;
        Ok(PcpInstance {
            alphabet,
            pairs,
            forced_start: None,
            forced_end: None,
        })
    }

    pub fn with_structure(
        mut self,
        forced_start: Option<usize>,
        forced_end: Option<usize>,
    ) -> Result<Self, PcpError> {
        let k = self.pairs.len();
        for marker in [forced_start, forced_end].into_iter().flatten() {
            if marker == 0 || marker > k {
                return Err(PcpError::BadMarker { index: marker, k });
            }
        }
        self.forced_start = forced_start;
        self.forced_end = forced_end;
        Ok(self)
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn pairs(&self) -> &[WordPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn forced_start(&self) -> Option<usize> {
        self.forced_start
    }

    pub fn forced_end(&self) -> Option<usize> {
        self.forced_end
    }

    pub fn pair(&self, index: usize) -> Result<&WordPair, PcpError> {
        if index == 0 || index > self.pairs.len() {
            return Err(PcpError::IndexOutOfRange {
                index,
                k: self.pairs.len(),
            });
        }
        Ok(&self.pairs[index - 1])
    }

    /// Concatenates the top and bottom words along an index sequence.
    pub fn apply(&self, indices: &IndexSequence) -> Result<(String, String), PcpError> {
        apply_pairs(&self.pairs, indices)
    }

    /// True when the two concatenations agree.
    pub fn is_solution(&self, indices: &IndexSequence) -> Result<bool, PcpError> {
        let (top, bottom) = self.apply(indices)?;
        Ok(top == bottom)
    }

    /// Reverses every word. Structure markers swap roles: a pair that had
    /// to end every solution must start every solution of the reversed
    /// instance, and vice versa.
    pub fn reverse(&self) -> PcpInstance {
        PcpInstance {
            alphabet: self.alphabet.clone(),
            pairs: self.pairs.iter().map(WordPair::reversed).collect(),
            forced_start: self.forced_end,
            forced_end: self.forced_start,
        }
    }

    /// Breadth-first search for a shortest solution, ties broken by the
    /// lexicographically least index sequence.
    pub fn bounded_solve(&self, limits: &SearchLimits) -> SearchResult<IndexSequence> {
        let k = self.pairs.len();
        let all: Vec<usize> = (1..=k).collect();
        bfs(&self.pairs, &all, &all, None, limits)
    }
}

impl GpcpInstance {
    pub fn new(alphabet: Vec<char>, pairs: Vec<WordPair>) -> Result<Self, PcpError> {
        if pairs.len() < 2 {
            return Err(PcpError::TooFewPairs {
                need: 2,
                got: pairs.len(),
            });
        }
        check_alphabet(&alphabet)?;
        check_words(&alphabet, &pairs)?;
        Ok(GpcpInstance { alphabet, pairs })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn pairs(&self) -> &[WordPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start_pair(&self) -> &WordPair {
        &self.pairs[0]
    }

    pub fn end_pair(&self) -> &WordPair {
        &self.pairs[1]
    }

    pub fn apply(&self, indices: &IndexSequence) -> Result<(String, String), PcpError> {
        apply_pairs(&self.pairs, indices)
    }

    /// Shape of a generalized solution: starts with 1, ends with 2, all
    /// middle indices in `3..=k`, length at least 2.
    pub fn has_solution_shape(&self, indices: &IndexSequence) -> bool {
        let s = indices.as_slice();
        s.len() >= 2
            && s[0] == 1
            && *s.last().unwrap() == 2
            && s[1..s.len() - 1]
                .iter()
                .all(|&i| (3..=self.len()).contains(&i))
    }

    /// True when the shape constraint holds and the concatenations agree.
    pub fn is_solution(&self, indices: &IndexSequence) -> Result<bool, PcpError> {
        if !self.has_solution_shape(indices) {
            // Still validate the indices themselves.
            for &i in indices.as_slice() {
                if i == 0 || i > self.len() {
                    return Err(PcpError::IndexOutOfRange {
                        index: i,
                        k: self.len(),
                    });
                }
            }
            return Ok(false);
        }
        let (top, bottom) = self.apply(indices)?;
        Ok(top == bottom)
    }

    /// Bounded search restricted to the generalized solution shape.
    pub fn bounded_solve(&self, limits: &SearchLimits) -> SearchResult<IndexSequence> {
        let middles: Vec<usize> = (3..=self.pairs.len()).collect();
        bfs(&self.pairs, &[1], &middles, Some(2), limits)
    }
}

fn apply_pairs(pairs: &[WordPair], indices: &IndexSequence) -> Result<(String, String), PcpError> {
    let mut top = String::new();
    let mut bottom = String::new();
    for &i in indices.as_slice() {
        if i == 0 || i > pairs.len() {
            return Err(PcpError::IndexOutOfRange {
                index: i,
                k: pairs.len(),
            });
        }
        top.push_str(&pairs[i - 1].top);
        bottom.push_str(&pairs[i - 1].bottom);
    }
    Ok((top, bottom))
}

/// Hard limits for the bounded search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of pairs in a returned solution.
    pub max_steps: usize,
    /// Maximum overhang length kept in a configuration; longer overhangs
    /// are pruned (and closure can then no longer be claimed).
    pub max_overhang: usize,
}

impl SearchLimits {
    pub fn new(max_steps: usize) -> Self {
        SearchLimits {
            max_steps,
            max_overhang: 64,
        }
    }

    pub fn with_overhang(mut self, max_overhang: usize) -> Self {
        self.max_overhang = max_overhang;
        self
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_steps: 32,
            max_overhang: 64,
        }
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult<T> {
    /// Shortest witness within the limits (lexicographically least on ties).
    Found(T),
    /// The entire reachable configuration space was explored without
    /// hitting any limit; no solution exists at all.
    Closed,
    /// A limit cut the search off before the space was exhausted.
    Exhausted,
}

impl<T> SearchResult<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchResult::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, SearchResult::Closed)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Lead {
    Top,
    Bottom,
}

/// `(leading side, unmatched suffix)`. An empty overhang is canonically
/// `Bottom`-led, so equal-concatenation states deduplicate.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Config {
    lead: Lead,
    overhang: String,
}

impl Config {
    fn balanced() -> Self {
        Config {
            lead: Lead::Bottom,
            overhang: String::new(),
        }
    }

    fn is_balanced(&self) -> bool {
        self.overhang.is_empty()
    }

    fn make(lead: Lead, overhang: String) -> Self {
        if overhang.is_empty() {
            Config::balanced()
        } else {
            Config { lead, overhang }
        }
    }
}

/// Appends one pair to a configuration; `None` means the words clash.
fn extend(cfg: &Config, pair: &WordPair) -> Option<Config> {
    let (ahead, behind, behind_lead) = match cfg.lead {
        // Bottom is ahead: the top word must chase `overhang + bottom`.
        Lead::Bottom => {
            let target = format!("{}{}", cfg.overhang, pair.bottom);
            (target, &pair.top, Lead::Top)
        }
        // Top is ahead: the bottom word must chase `overhang + top`.
        Lead::Top => {
            let target = format!("{}{}", cfg.overhang, pair.top);
            (target, &pair.bottom, Lead::Bottom)
        }
    };
    if let Some(rest) = ahead.strip_prefix(behind.as_str()) {
        Some(Config::make(cfg.lead.clone(), rest.to_string()))
    } else {
        behind
            .strip_prefix(ahead.as_str())
            .map(|rest| Config::make(behind_lead, rest.to_string()))
    }
}

struct Node {
    config: Config,
    parent: Option<usize>,
    index: usize,
}

fn path_of(arena: &[Node], mut slot: usize) -> Vec<usize> {
    let mut rev = Vec::new();
    loop {
        let node = &arena[slot];
        rev.push(node.index);
        match node.parent {
            Some(p) => slot = p,
            None => break,
        }
    }
    rev.reverse();
    rev
}

/// Level-by-level search. `first` are the indices allowed in position 1,
/// `middle` everywhere after, and `close` (when present) is an index that
/// may only terminate a solution — the generalized end pair.
///
/// The frontier is processed in discovery order and successor indices in
/// ascending order, so the first solution reported is the shortest and,
/// among those, the lexicographically least.
fn bfs(
    pairs: &[WordPair],
    first: &[usize],
    middle: &[usize],
    close: Option<usize>,
    limits: &SearchLimits,
) -> SearchResult<IndexSequence> {
    let mut arena: Vec<Node> = Vec::new();
    let mut visited: HashSet<Config> = HashSet::new();
    let mut frontier: Vec<usize> = Vec::new();
    let mut pruned = false;

    if limits.max_steps == 0 {
        return SearchResult::Exhausted;
    }

    // Level 1: the allowed opening pairs.
    for &i in first {
        let cfg = match extend(&Config::balanced(), &pairs[i - 1]) {
            Some(c) => c,
            None => continue,
        };
        if close.is_none() && cfg.is_balanced() {
            return SearchResult::Found(IndexSequence(vec![i]));
        }
        if cfg.overhang.chars().count() > limits.max_overhang {
            pruned = true;
            continue;
        }
        if visited.insert(cfg.clone()) {
            arena.push(Node {
                config: cfg,
                parent: None,
                index: i,
            });
            frontier.push(arena.len() - 1);
        }
    }

    let mut level = 1;
    while !frontier.is_empty() {
        if level == limits.max_steps {
            return SearchResult::Exhausted;
        }
        let mut next = Vec::new();
        for &slot in &frontier {
            let cfg = arena[slot].config.clone();
            // The closing pair is tried first: its index (2) precedes all
            // middle indices, which keeps the tie-break lexicographic.
            if let Some(c) = close {
                if let Some(done) = extend(&cfg, &pairs[c - 1]) {
                    if done.is_balanced() {
                        let mut path = path_of(&arena, slot);
                        path.push(c);
                        return SearchResult::Found(IndexSequence(path));
                    }
                }
            }
            for &i in middle {
                let succ = match extend(&cfg, &pairs[i - 1]) {
                    Some(c) => c,
                    None => continue,
                };
                if close.is_none() && succ.is_balanced() {
                    let mut path = path_of(&arena, slot);
                    path.push(i);
                    return SearchResult::Found(IndexSequence(path));
                }
                if succ.overhang.chars().count() > limits.max_overhang {
                    pruned = true;
                    continue;
                }
                if visited.insert(succ.clone()) {
                    arena.push(Node {
                        config: succ,
                        parent: Some(slot),
                        index: i,
                    });
                    next.push(arena.len() - 1);
                }
            }
        }
        frontier = next;
        level += 1;
    }

    if pruned {
        SearchResult::Exhausted
    } else {
        SearchResult::Closed
    }
}

/// Walks every configuration the generalized solver would visit (start pair
/// plus middle pairs, before any end pair) and hands the partial index
/// sequence to `inspect`. Used by property suites that must hold along all
/// partial solutions.
pub fn walk_gpcp_partials<E>(
    instance: &GpcpInstance,
    limits: &SearchLimits,
    mut inspect: impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<usize, E> {
    let pairs = instance.pairs();
    let mut arena: Vec<Node> = Vec::new();
    let mut visited: HashSet<Config> = HashSet::new();
    let mut frontier: Vec<usize> = Vec::new();
    let mut checked = 0;

    if let Some(cfg) = extend(&Config::balanced(), &pairs[0]) {
        inspect(&[1])?;
        checked += 1;
        if cfg.overhang.chars().count() <= limits.max_overhang && visited.insert(cfg.clone()) {
            arena.push(Node {
                config: cfg,
                parent: None,
                index: 1,
            });
            frontier.push(0);
        }
    }

    let mut level = 1;
    while !frontier.is_empty() && level < limits.max_steps {
        let mut next = Vec::new();
        for &slot in &frontier {
            let cfg = arena[slot].config.clone();
            for i in 3..=pairs.len() {
                let succ = match extend(&cfg, &pairs[i - 1]) {
                    Some(c) => c,
                    None => continue,
                };
                if succ.overhang.chars().count() > limits.max_overhang {
                    continue;
                }
                if visited.insert(succ.clone()) {
                    let mut path = path_of(&arena, slot);
                    path.push(i);
                    inspect(&path)?;
                    checked += 1;
                    arena.push(Node {
                        config: succ,
                        parent: Some(slot),
                        index: i,
                    });
                    next.push(arena.len() - 1);
                }
            }
        }
        frontier = next;
        level += 1;
    }
    Ok(checked)
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

/// Either kind of instance, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Pcp(PcpInstance),
    Gpcp(GpcpInstance),
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    alphabet: Vec<String>,
    pairs: Vec<WordPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end_index: Option<usize>,
}

fn alphabet_from_strings(strings: &[String]) -> Result<Vec<char>, PcpError> {
    strings
        .iter()
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(PcpError::NotAChar(s.clone())),
            }
        })
        .collect()
}

/// Parses an instance from its JSON form. `"kind"` defaults to `"pcp"`;
/// `start_index`/`end_index` are 1-based structure markers.
pub fn instance_from_json(json: &str) -> Result<Instance, PcpError> {
    let file: InstanceFile =
        serde_json::from_str(json).map_err(|e| PcpError::Malformed(e.to_string()))?;
    let alphabet = alphabet_from_strings(&file.alphabet)?;
    match file.kind.as_deref().unwrap_or("pcp") {
        "pcp" => {
            let instance = PcpInstance::new(alphabet, file.pairs)?
                .with_structure(file.start_index, file.end_index)?;
            Ok(Instance::Pcp(instance))
        }
        "gpcp" => Ok(Instance::Gpcp(GpcpInstance::new(alphabet, file.pairs)?)),
        other => Err(PcpError::UnknownKind(other.to_string())),
    }
}

pub fn pcp_to_json(instance: &PcpInstance) -> String {
    let file = InstanceFile {
        kind: Some("pcp".to_string()),
        alphabet: instance.alphabet.iter().map(|c| c.to_string()).collect(),
        pairs: instance.pairs.clone(),
        start_index: instance.forced_start,
        end_index: instance.forced_end,
    };
    serde_json::to_string_pretty(&file).expect("instance serializes")
}

pub fn gpcp_to_json(instance: &GpcpInstance) -> String {
    let file = InstanceFile {
        kind: Some("gpcp".to_string()),
        alphabet: instance.alphabet.iter().map(|c| c.to_string()).collect(),
        pairs: instance.pairs.clone(),
        start_index: None,
        end_index: None,
    };
    serde_json::to_string_pretty(&file).expect("instance serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn classic() -> PcpInstance {
        PcpInstance::new(
            vec!['0', '1'],
            vec![
                WordPair::new("1", "101"),
                WordPair::new("10", "00"),
                WordPair::new("011", "11"),
            ],
        )
        .unwrap()
    }

    fn seq(v: &[usize]) -> IndexSequence {
        IndexSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn apply_concatenates() {
        let inst = classic();
        let (top, bottom) = inst.apply(&seq(&[1, 3, 2, 3])).unwrap();
        assert_eq!(top, "101110011");
        assert_eq!(bottom, "101110011");

        let single = PcpInstance::new(vec!['a'], vec![WordPair::new("a", "a")]).unwrap();
        assert_eq!(
            single.apply(&seq(&[1])).unwrap(),
            ("a".to_string(), "a".to_string())
        );

        let two = PcpInstance::new(
            vec!['0', '1'],
            vec![WordPair::new("1", "101"), WordPair::new("10", "00")],
        )
        .unwrap();
        assert_eq!(
            two.apply(&seq(&[2])).unwrap(),
            ("10".to_string(), "00".to_string())
        );
    }

    #[test]
    fn apply_rejects_out_of_range() {
        let inst = classic();
        assert!(matches!(
            inst.apply(&seq(&[4])),
            Err(PcpError::IndexOutOfRange { index: 4, k: 3 })
        ));
    }

    #[test]
    fn is_solution_examples() {
        let inst = classic();
        assert!(inst.is_solution(&seq(&[1, 3, 2, 3])).unwrap());
        assert!(!inst.is_solution(&seq(&[1])).unwrap());
    }

    #[test]
    fn gpcp_shape_is_enforced() {
        let g = GpcpInstance::new(
            vec!['a', 'b'],
            vec![
                WordPair::new("a", "abb"),
                WordPair::new("bb", "b"),
                WordPair::new("bb", "b"),
            ],
        )
        .unwrap();
        assert!(g.is_solution(&seq(&[1, 3, 2])).unwrap());
        assert!(!g.is_solution(&seq(&[1, 2])).unwrap());
        // [1, 2, 2] concatenates equal words but violates the required
        // shape: the end pair may not appear in the middle.
        let (top, bottom) = g.apply(&seq(&[1, 2, 2])).unwrap();
        assert_eq!(top, bottom);
        assert!(!g.is_solution(&seq(&[1, 2, 2])).unwrap());
        let found = g
            .bounded_solve(&SearchLimits::new(5))
            .found()
            .expect("solution");
        assert_eq!(found, seq(&[1, 3, 2]));
    }

    #[test]
    fn bounded_solve_finds_classic_solution() {
        let inst = classic();
        let result = inst.bounded_solve(&SearchLimits::new(6).with_overhang(8));
        assert_eq!(result, SearchResult::Found(seq(&[1, 3, 2, 3])));
    }

    #[test]
    fn bounded_solve_closes_when_no_first_letter_matches() {
        let inst = PcpInstance::new(vec!['a', 'b'], vec![WordPair::new("a", "b")]).unwrap();
        assert_eq!(
            inst.bounded_solve(&SearchLimits::new(10)),
            SearchResult::Closed
        );
    }

    #[test]
    fn bounded_solve_single_identity_pair() {
        let inst = PcpInstance::new(vec!['a'], vec![WordPair::new("a", "a")]).unwrap();
        assert_eq!(
            inst.bounded_solve(&SearchLimits::new(10)),
            SearchResult::Found(seq(&[1]))
        );
    }

    #[test]
    fn bounded_solve_reports_exhaustion() {
        // Overhang grows forever; the space never closes.
        let inst = PcpInstance::new(vec!['a'], vec![WordPair::new("a", "aa")]).unwrap();
        assert_eq!(
            inst.bounded_solve(&SearchLimits::new(5).with_overhang(3)),
            SearchResult::Exhausted
        );
        assert_eq!(
            inst.bounded_solve(&SearchLimits::new(3).with_overhang(1000)),
            SearchResult::Exhausted
        );
    }

    #[test]
    fn solver_output_is_a_solution() {
        let inst = classic();
        let found = inst
            .bounded_solve(&SearchLimits::new(6))
            .found()
            .expect("solution");
        assert!(inst.is_solution(&found).unwrap());
    }

    #[test]
    fn reverse_swaps_markers_and_words() {
        let inst = PcpInstance::new(vec!['a', 'b'], vec![WordPair::new("ab", "b")])
            .unwrap()
            .with_structure(None, Some(1))
            .unwrap();
        let rev = inst.reverse();
        assert_eq!(rev.pairs()[0], WordPair::new("ba", "b"));
        assert_eq!(rev.forced_start(), Some(1));
        assert_eq!(rev.forced_end(), None);

        let palindromic =
            PcpInstance::new(vec!['a', 'b'], vec![WordPair::new("aba", "aa")]).unwrap();
        assert_eq!(palindromic.reverse().pairs(), palindromic.pairs());
    }

    #[test]
    fn reversed_solution_solves_reversed_instance() {
        let inst = classic();
        let rev = inst.reverse();
        assert!(rev.is_solution(&seq(&[3, 2, 3, 1])).unwrap());
        let found = rev
            .bounded_solve(&SearchLimits::new(6))
            .found()
            .expect("solution");
        assert_eq!(found, seq(&[3, 2, 3, 1]));
    }

    #[test]
    fn concatenated_solutions_stay_solutions() {
        let inst = classic();
        let s = seq(&[1, 3, 2, 3]);
        assert!(inst.is_solution(&s.concat(&s)).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let inst = classic().with_structure(Some(1), Some(3)).unwrap();
        let json = pcp_to_json(&inst);
        match instance_from_json(&json).unwrap() {
            Instance::Pcp(back) => assert_eq!(back, inst),
            _ => panic!("expected plain instance"),
        }
    }

    #[test]
    fn json_rejects_bad_words() {
        let json = r#"{"alphabet":["a"],"pairs":[{"top":"ab","bottom":"a"}]}"#;
        assert!(instance_from_json(json).is_err());
    }

    fn arb_instance() -> impl Strategy<Value = PcpInstance> {
        let word = proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 0..4)
            .prop_map(|cs| cs.into_iter().collect::<String>());
        proptest::collection::vec((word.clone(), word), 1..4).prop_map(|pairs| {
            PcpInstance::new(
                vec!['a', 'b'],
                pairs
                    .into_iter()
                    .map(|(t, b)| WordPair::new(t, b))
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        /// Solutions and reversal commute.
        #[test]
        fn reversal_preserves_solutions(
            inst in arb_instance(),
            raw in proptest::collection::vec(1usize..4, 1..7),
        ) {
            let indices: Vec<usize> = raw.into_iter().map(|i| (i - 1) % inst.len() + 1).collect();
            let s = IndexSequence::new(indices).unwrap();
            let forward = inst.is_solution(&s).unwrap();
            let backward = inst.reverse().is_solution(&s.reversed()).unwrap();
            prop_assert_eq!(forward, backward);
        }

        /// Whatever the solver returns really is a solution, and a closed
        /// search space really contains none: exhaustive enumeration up to
        /// the same length bound agrees.
        #[test]
        fn solver_is_sound_and_closure_is_honest(inst in arb_instance()) {
            let limits = SearchLimits::new(4).with_overhang(16);
            match inst.bounded_solve(&limits) {
                SearchResult::Found(s) => {
                    prop_assert!(s.len() <= limits.max_steps);
                    prop_assert!(inst.is_solution(&s).unwrap());
                }
                SearchResult::Closed => {
                    let mut layer: Vec<Vec<usize>> = vec![vec![]];
                    for _ in 0..limits.max_steps {
                        let mut next = Vec::new();
                        for w in &layer {
                            for i in 1..=inst.len() {
                                let mut w2 = w.clone();
                                w2.push(i);
                                let s = IndexSequence::new(w2.clone()).unwrap();
                                prop_assert!(!inst.is_solution(&s).unwrap(),
                                    "closed search missed the solution {w2:?}");
                                next.push(w2);
                            }
                        }
                        layer = next;
                    }
                }
                SearchResult::Exhausted => {}
            }
        }
    }
}
