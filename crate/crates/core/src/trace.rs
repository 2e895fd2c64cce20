//! Words over the generators, the commutation monoid, and the
//! Cartier-Foata normal form, plus the factor searches (squares and
//! alternating runs) phrased over the dependence order of a trace.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::CoxeterGraph;

/// A word is a flat sequence of generator indices.
pub type Word = Vec<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("generator {0} is not in the left block")]
    NotInLeftBlock(usize),
    #[error("generator {0} is not in the right block")]
    NotInRightBlock(usize),
    #[error("commutation class larger than cap {0}")]
    CapExceeded(usize),
    #[error("generators {0} and {1} commute")]
    CommutingPair(usize, usize),
}

/// The Cartier-Foata normal form of a commutation class: a sequence of
/// blocks, each a sorted set of pairwise commuting generators, where every
/// generator of a block is blocked by the previous one.
///
/// This is the canonical representative used for equality, hashing,
/// ordering, and JSON (an array of integer arrays).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace {
    blocks: Vec<Vec<usize>>,
}

/// Compute the Cartier-Foata normal form of a word: each letter lands in
/// the earliest block after every earlier letter that blocks it.
pub fn cartier_foata(g: &CoxeterGraph, word: &[usize]) -> Trace {
    let mut depth = vec![0usize; word.len()];
    let mut max_depth = 0;
    for (i, &s) in word.iter().enumerate() {
        assert!(s < g.rank(), "generator {s} out of range");
        let mut d = 0;
        for j in 0..i {
            if g.blocks(word[j], s) {
                d = d.max(depth[j] + 1);
            }
        }
        depth[i] = d;
        max_depth = max_depth.max(d + 1);
    }
    let mut blocks = vec![Vec::new(); max_depth];
    for (i, &s) in word.iter().enumerate() {
        blocks[depth[i]].push(s);
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    Trace { blocks }
}

impl Trace {
    pub fn empty() -> Self {
        Trace::default()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// The canonical linearization: blocks concatenated in order.
    pub fn linearize(&self) -> Word {
        self.blocks.iter().flatten().copied().collect()
    }

    /// The set of possible first letters.
    pub fn left_block(&self) -> Vec<usize> {
        self.blocks.first().cloned().unwrap_or_default()
    }

    /// The set of possible last letters: occurrences nothing blocks from
    /// the right.
    pub fn right_block(&self, g: &CoxeterGraph) -> Vec<usize> {
        let word = self.linearize();
        let mut out = BTreeSet::new();
        for (i, &s) in word.iter().enumerate() {
            if word[i + 1..].iter().all(|&t| !g.blocks(s, t)) {
                out.insert(s);
            }
        }
        out.into_iter().collect()
    }

    /// The unique trace `t` with `s . t = self`, when `s` is a possible
    /// first letter.
    pub fn strip_left(&self, g: &CoxeterGraph, s: usize) -> Result<Trace, TraceError> {
        if !self.left_block().contains(&s) {
            return Err(TraceError::NotInLeftBlock(s));
        }
        let word = self.linearize();
        let pos = word.iter().position(|&x| x == s).unwrap();
        let rest: Word = word
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, &x)| x)
            .collect();
        Ok(cartier_foata(g, &rest))
    }

    /// The unique trace `t` with `t . s = self`, when `s` is a possible
    /// last letter.
    pub fn strip_right(&self, g: &CoxeterGraph, s: usize) -> Result<Trace, TraceError> {
        if !self.right_block(g).contains(&s) {
            return Err(TraceError::NotInRightBlock(s));
        }
        let word = self.linearize();
        let pos = word.iter().rposition(|&x| x == s).unwrap();
        let rest: Word = word
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, &x)| x)
            .collect();
        Ok(cartier_foata(g, &rest))
    }

    /// Reverse the trace (normal form of the reversed word).
    pub fn reversed(&self, g: &CoxeterGraph) -> Trace {
        let mut word = self.linearize();
        word.reverse();
        cartier_foata(g, &word)
    }
}

/// Normal form of the concatenation; the monoid product.
pub fn trace_concat(g: &CoxeterGraph, a: &Trace, b: &Trace) -> Trace {
    let mut word = a.linearize();
    word.extend(b.linearize());
    cartier_foata(g, &word)
}

/// The dependence order on the letter occurrences of a trace, with the
/// searches for square factors and alternating braid factors.
///
/// Occurrence `i` precedes `j` when `i` comes first in the canonical
/// linearization and there is a chain of blocking letters from one to the
/// other; linearizations of the trace are exactly the linear extensions.
pub struct Heap<'g> {
    g: &'g CoxeterGraph,
    word: Word,
    below: Vec<Vec<bool>>, // below[i][j]: i strictly precedes j
}

impl<'g> Heap<'g> {
    pub fn new(g: &'g CoxeterGraph, trace: &Trace) -> Self {
        Self::from_word(g, trace.linearize())
    }

    pub fn from_word(g: &'g CoxeterGraph, word: Word) -> Self {
        let n = word.len();
        let mut below = vec![vec![false; n]; n];
        // direct dependence, then transitive closure in position order
        for j in 0..n {
            for i in 0..j {
                if g.blocks(word[i], word[j]) {
                    below[i][j] = true;
                }
            }
        }
        for j in 0..n {
            for k in 0..j {
                if below[k][j] {
                    for i in 0..k {
                        if below[i][k] {
                            below[i][j] = true;
                        }
                    }
                }
            }
        }
        Heap { g, word, below }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.below[i][j]
    }

    /// Is any occurrence outside `window` strictly between `lo` and `hi`?
    fn blocked_between(&self, lo: usize, hi: usize, window: &[usize]) -> bool {
        (lo + 1..hi).any(|x| self.below[lo][x] && self.below[x][hi] && !window.contains(&x))
    }

    /// All square factors, as `(generator, first occurrence, second)` in
    /// position order: consecutive occurrences of one generator with no
    /// occurrence strictly between them in the dependence order.
    pub fn square_occurrences(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.word.len() {
            let s = self.word[i];
            if let Some(j) = (i + 1..self.word.len()).find(|&j| self.word[j] == s) {
                if !self.blocked_between(i, j, &[i, j]) {
                    out.push((s, i, j));
                }
            }
        }
        out.sort_by_key(|&(_, i, j)| (i, j));
        out
    }

    pub fn first_square(&self) -> Option<(usize, usize, usize)> {
        self.square_occurrences().into_iter().next()
    }

    /// Occurrence positions of `s` and `u` merged; these are totally
    /// ordered, and position order realizes that chain.
    fn merged_chain(&self, s: usize, u: usize) -> Vec<usize> {
        (0..self.word.len())
            .filter(|&i| self.word[i] == s || self.word[i] == u)
            .collect()
    }

    /// All alternating `{s, u}` factors of the given length: windows of
    /// `len` consecutive chain occurrences, alternating in label, convex in
    /// the dependence order (so some linearization has them adjacent).
    pub fn braid_windows(&self, s: usize, u: usize, len: usize) -> Vec<Vec<usize>> {
        assert!(self.g.noncommuting(s, u), "braid factors need a bond");
        assert!(len >= 2);
        let chain = self.merged_chain(s, u);
        let mut out = Vec::new();
        if chain.len() < len {
            return out;
        }
        'windows: for window in chain.windows(len) {
            for pair in window.windows(2) {
                if self.word[pair[0]] == self.word[pair[1]] {
                    continue 'windows;
                }
            }
            if !self.blocked_between(window[0], window[len - 1], window) {
                out.push(window.to_vec());
            }
        }
        out
    }

    pub fn first_braid_window(&self, s: usize, u: usize, len: usize) -> Option<Vec<usize>> {
        self.braid_windows(s, u, len).into_iter().next()
    }

    /// The word with the given occurrence positions removed.
    pub fn delete_positions(&self, positions: &[usize]) -> Word {
        self.word
            .iter()
            .enumerate()
            .filter(|(i, _)| !positions.contains(i))
            .map(|(_, &s)| s)
            .collect()
    }
}

/// Square factor search on a trace: some linearization contains `s s`.
pub fn find_square_factor(g: &CoxeterGraph, t: &Trace) -> Option<(usize, (usize, usize))> {
    Heap::new(g, t)
        .first_square()
        .map(|(s, i, j)| (s, (i, j)))
}

/// Alternating factor search: some linearization contains an alternating
/// `s u s u ...` factor of length `len`. Positions index the canonical
/// linearization.
pub fn find_braid_factor(
    g: &CoxeterGraph,
    t: &Trace,
    s: usize,
    u: usize,
    len: usize,
) -> Result<Option<Vec<usize>>, TraceError> {
    if !g.noncommuting(s, u) {
        return Err(TraceError::CommutingPair(s, u));
    }
    Ok(Heap::new(g, t).first_braid_window(s, u, len))
}

/// Every word reachable from `w` by adjacent commuting swaps. A test
/// oracle; production paths use the dependence-order criteria.
pub fn commutation_class(
    g: &CoxeterGraph,
    w: &[usize],
    cap: usize,
) -> Result<BTreeSet<Word>, TraceError> {
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut queue: VecDeque<Word> = VecDeque::new();
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    while let Some(cur) = queue.pop_front() {
        for i in 0..cur.len().saturating_sub(1) {
            if cur[i] != cur[i + 1] && !g.noncommuting(cur[i], cur[i + 1]) {
                let mut next = cur.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(TraceError::CapExceeded(cap));
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(seen)
}
