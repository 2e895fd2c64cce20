//! Fully commutative elements as canonical traces, their enumeration, the
//! bounded word-problem oracle, complexity predicates, and the normal-shape
//! classifier for arbitrary reduced words.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{classify_star_reducible, induced_subgraph, CoxeterGraph};
use crate::trace::{cartier_foata, Heap, Trace, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElementsError {
    #[error("word is not a reduced expression of a fully commutative element")]
    NotReducedFc,
    #[error("word is not reduced")]
    NotReduced,
    #[error("word problem cap {0} exceeded; verdict unknown")]
    CapExceeded(usize),
    #[error("generators {0} and {1} commute")]
    CommutingPair(usize, usize),
    #[error("graph is not star reducible")]
    NotStarReducible,
    #[error("no normal shape case applies")]
    NoShapeCase,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A fully commutative element, stored as its canonical trace. Ordering is
/// by length, then lexicographically on the block sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct FcElement {
    length: usize,
    trace: Trace,
}

impl FcElement {
    pub fn identity() -> Self {
        FcElement {
            length: 0,
            trace: Trace::empty(),
        }
    }

    /// Canonicalize a word, requiring it to be a reduced expression of a
    /// fully commutative element.
    pub fn from_word(g: &CoxeterGraph, word: &[usize]) -> Result<Self, ElementsError> {
        if !is_reduced_fc(g, word) {
            return Err(ElementsError::NotReducedFc);
        }
        Ok(Self::from_trace_unchecked(cartier_foata(g, word)))
    }

    pub(crate) fn from_trace_unchecked(trace: Trace) -> Self {
        FcElement {
            length: trace.len(),
            trace,
        }
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    /// The canonical reduced expression (blocks concatenated).
    pub fn word(&self) -> Word {
        self.trace.linearize()
    }

    /// For a fully commutative element the left descent set is exactly the
    /// first normal-form block.
    pub fn left_descents(&self) -> Vec<usize> {
        self.trace.left_block()
    }

    pub fn right_descents(&self, g: &CoxeterGraph) -> Vec<usize> {
        self.trace.right_block(g)
    }
}

/// The Stembridge criterion on the trace: `word` is a reduced expression of
/// a fully commutative element iff its trace has no square factor and, for
/// every finite bond `m(s, t) >= 3`, no alternating factor of length
/// `m(s, t)`. Infinite bonds admit no braid relation and are skipped.
pub fn is_reduced_fc(g: &CoxeterGraph, word: &[usize]) -> bool {
    let heap = Heap::from_word(g, word.to_vec());
    if heap.first_square().is_some() {
        return false;
    }
    for (s, t, m) in g.edges() {
        if let Some(m) = m.finite() {
            if (m as usize) <= word.len() && heap.first_braid_window(s, t, m as usize).is_some() {
                return false;
            }
        }
    }
    true
}

/// Extend a fully commutative element by one letter on the right, if the
/// extension is reduced and stays fully commutative.
///
/// Only patterns ending at the new occurrence need checking: a square
/// appears iff `s` was already a possible last letter, and a braid factor
/// must use the final window of the merged `{s, t}` chain.
pub fn fc_extend_right(g: &CoxeterGraph, w: &FcElement, s: usize) -> Option<FcElement> {
    if w.trace().right_block(g).contains(&s) {
        return None;
    }
    let mut word = w.word();
    word.push(s);
    let heap = Heap::from_word(g, word);
    let last = heap.len() - 1;
    for t in g.neighbors(s) {
        let Some(m) = g.bond(s, t).and_then(|b| b.finite()) else {
            continue;
        };
        let m = m as usize;
        let chain: Vec<usize> = (0..=last)
            .filter(|&i| heap.word()[i] == s || heap.word()[i] == t)
            .collect();
        if chain.len() < m {
            continue;
        }
        let window = &chain[chain.len() - m..];
        let alternating = window
            .windows(2)
            .all(|p| heap.word()[p[0]] != heap.word()[p[1]]);
        if !alternating {
            continue;
        }
        let blocked = (window[0] + 1..last)
            .any(|x| heap.precedes(window[0], x) && heap.precedes(x, last) && !window.contains(&x));
        if !blocked {
            return None;
        }
    }
    Some(FcElement::from_trace_unchecked(cartier_foata(
        g,
        heap.word(),
    )))
}

/// Breadth-first enumeration of fully commutative elements by length, one
/// stratum per length from 0 to `max_len`. `exhaustive` reports whether
/// the search closed before the cutoff.
pub fn enumerate_fc_strata(g: &CoxeterGraph, max_len: usize) -> (Vec<Vec<FcElement>>, bool) {
    enumerate_fc_strata_jobs(g, max_len, 1)
}

pub fn enumerate_fc_strata_jobs(
    g: &CoxeterGraph,
    max_len: usize,
    jobs: usize,
) -> (Vec<Vec<FcElement>>, bool) {
    let jobs = jobs.max(1);
    let mut strata: Vec<Vec<FcElement>> = vec![vec![FcElement::identity()]];
    let mut exhaustive = false;
    for len in 0..max_len {
        let frontier = &strata[len];
        let extend = |slice: &[FcElement]| -> BTreeSet<FcElement> {
            let mut out = BTreeSet::new();
            for w in slice {
                for s in 0..g.rank() {
                    if let Some(x) = fc_extend_right(g, w, s) {
                        out.insert(x);
                    }
                }
            }
            out
        };
        let next: BTreeSet<FcElement> = if jobs == 1 || frontier.len() < 2 * jobs {
            extend(frontier)
        } else {
            let chunk = frontier.len().div_ceil(jobs);
            std::thread::scope(|scope| {
                let handles: Vec<_> = frontier
                    .chunks(chunk)
                    .map(|slice| scope.spawn(move || extend(slice)))
                    .collect();
                let mut merged = BTreeSet::new();
                for h in handles {
                    merged.extend(h.join().expect("enumeration worker"));
                }
                merged
            })
        };
        if next.is_empty() {
            exhaustive = true;
            break;
        }
        strata.push(next.into_iter().collect());
    }
    (strata, exhaustive)
}

/// All fully commutative elements of length at most `max_len`, sorted by
/// (length, canonical trace), plus exhaustiveness.
pub fn enumerate_fc(g: &CoxeterGraph, max_len: usize) -> (Vec<FcElement>, bool) {
    let (strata, exhaustive) = enumerate_fc_strata(g, max_len);
    (strata.into_iter().flatten().collect(), exhaustive)
}

/// Greedy coset decomposition of a fully commutative element with respect
/// to a noncommuting pair: on the left, `w = w_I . rest` with `w_I` the
/// maximal alternating `{s, t}` prefix; on the right, `w = rest . w_I`
/// with the alternating suffix returned in reading order.
pub fn coset_decompose(
    g: &CoxeterGraph,
    w: &FcElement,
    pair: (usize, usize),
    side: Side,
) -> Result<(Word, FcElement), ElementsError> {
    let (s, t) = pair;
    if !g.noncommuting(s, t) {
        return Err(ElementsError::CommutingPair(s, t));
    }
    let mut cur = w.trace().clone();
    let mut letters: Word = Vec::new();
    loop {
        let block = match side {
            Side::Left => cur.left_block(),
            Side::Right => cur.right_block(g),
        };
        let expected: Vec<usize> = match letters.last() {
            None => vec![s, t],
            Some(&prev) => vec![if prev == s { t } else { s }],
        };
        let Some(&next) = expected.iter().find(|&&x| block.contains(&x)) else {
            break;
        };
        cur = match side {
            Side::Left => cur.strip_left(g, next),
            Side::Right => cur.strip_right(g, next),
        }
        .expect("letter drawn from the block");
        letters.push(next);
    }
    if side == Side::Right {
        letters.reverse();
    }
    Ok((letters, FcElement::from_trace_unchecked(cur)))
}

/// Verdict of the bounded word-problem search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TitsVerdict {
    Reduced,
    NotReduced,
    Unknown,
}

fn adjacent_square(w: &[usize]) -> bool {
    w.windows(2).any(|p| p[0] == p[1])
}

fn word_moves(g: &CoxeterGraph, w: &[usize], out: &mut Vec<Word>) {
    out.clear();
    for i in 0..w.len().saturating_sub(1) {
        if w[i] != w[i + 1] && !g.noncommuting(w[i], w[i + 1]) {
            let mut next = w.to_vec();
            next.swap(i, i + 1);
            out.push(next);
        }
    }
    // long braid substitutions: alternating m(s, t) run reversed
    for start in 0..w.len().saturating_sub(1) {
        let (s, t) = (w[start], w[start + 1]);
        if s == t {
            continue;
        }
        let Some(m) = g.bond(s, t).and_then(|b| b.finite()) else {
            continue;
        };
        let m = m as usize;
        if start + m > w.len() {
            continue;
        }
        let alternating = (0..m).all(|k| w[start + k] == if k % 2 == 0 { s } else { t });
        if alternating {
            let mut next = w.to_vec();
            for (k, slot) in next[start..start + m].iter_mut().enumerate() {
                *slot = if k % 2 == 0 { t } else { s };
            }
            out.push(next);
        }
    }
}

/// Decide reducedness by closing the word under commutation and braid
/// moves: a word is non-reduced exactly when the closure reaches a word
/// with two equal adjacent letters.
pub fn tits_is_reduced(g: &CoxeterGraph, w: &[usize], cap: usize) -> TitsVerdict {
    if adjacent_square(w) {
        return TitsVerdict::NotReduced;
    }
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue: VecDeque<Word> = VecDeque::new();
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    let mut moves = Vec::new();
    while let Some(cur) = queue.pop_front() {
        word_moves(g, &cur, &mut moves);
        for next in moves.drain(..) {
            if adjacent_square(&next) {
                return TitsVerdict::NotReduced;
            }
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return TitsVerdict::Unknown;
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    TitsVerdict::Reduced
}

/// The full set of reduced expressions of the element represented by the
/// reduced word `w` (its braid-and-commutation closure).
pub fn reduced_word_closure(
    g: &CoxeterGraph,
    w: &[usize],
    cap: usize,
) -> Result<BTreeSet<Word>, ElementsError> {
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut queue: VecDeque<Word> = VecDeque::new();
    if adjacent_square(w) {
        return Err(ElementsError::NotReduced);
    }
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    let mut moves = Vec::new();
    while let Some(cur) = queue.pop_front() {
        word_moves(g, &cur, &mut moves);
        for next in moves.drain(..) {
            if adjacent_square(&next) {
                return Err(ElementsError::NotReduced);
            }
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(ElementsError::CapExceeded(cap));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

struct ClosureInfo {
    canonical: Word,
    last_letters: Vec<usize>,
}

fn closure_scan(g: &CoxeterGraph, w: &[usize], cap: usize) -> Result<ClosureInfo, ElementsError> {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue: VecDeque<Word> = VecDeque::new();
    if adjacent_square(w) {
        return Err(ElementsError::NotReduced);
    }
    let mut canonical = w.to_vec();
    let mut last: BTreeSet<usize> = w.last().copied().into_iter().collect();
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    let mut moves = Vec::new();
    while let Some(cur) = queue.pop_front() {
        word_moves(g, &cur, &mut moves);
        for next in moves.drain(..) {
            if adjacent_square(&next) {
                return Err(ElementsError::NotReduced);
            }
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(ElementsError::CapExceeded(cap));
                }
                if next < canonical {
                    canonical = next.clone();
                }
                if let Some(&l) = next.last() {
                    last.insert(l);
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(ClosureInfo {
        canonical,
        last_letters: last.into_iter().collect(),
    })
}

/// Enumerate group elements up to `max_len` by the word-problem closure,
/// one canonical (lexicographically least) reduced word per element,
/// sorted by (length, word). `exhaustive` reports whether the group was
/// exhausted below the cutoff.
pub fn enumerate_group_elements(
    g: &CoxeterGraph,
    max_len: usize,
    cap: usize,
) -> Result<(Vec<Word>, bool), ElementsError> {
    let mut levels: Vec<Vec<(Word, Vec<usize>)>> = vec![vec![(Vec::new(), Vec::new())]];
    let mut seen: HashSet<Word> = HashSet::new();
    seen.insert(Vec::new());
    let mut exhaustive = false;
    for len in 0..max_len {
        let mut next: Vec<(Word, Vec<usize>)> = Vec::new();
        let frontier = &levels[len];
        for (w, rdesc) in frontier {
            for s in 0..g.rank() {
                if rdesc.contains(&s) {
                    continue;
                }
                let mut ext = w.clone();
                ext.push(s);
                let info = closure_scan(g, &ext, cap)?;
                if seen.insert(info.canonical.clone()) {
                    next.push((info.canonical, info.last_letters));
                }
            }
        }
        if next.is_empty() {
            exhaustive = true;
            break;
        }
        next.sort();
        levels.push(next);
    }
    let mut out = Vec::new();
    for level in levels {
        for (w, _) in level {
            out.push(w);
        }
    }
    Ok((out, exhaustive))
}

/// Complexity of a reduced word: complex means not fully commutative.
pub fn is_complex_word(g: &CoxeterGraph, w: &[usize], cap: usize) -> Result<bool, ElementsError> {
    match tits_is_reduced(g, w, cap) {
        TitsVerdict::NotReduced => Err(ElementsError::NotReduced),
        TitsVerdict::Unknown => Err(ElementsError::CapExceeded(cap)),
        TitsVerdict::Reduced => Ok(!is_reduced_fc(g, w)),
    }
}

/// Weakly complex: complex, and stripping some left descent of the trace
/// leaves a fully commutative element.
pub fn is_weakly_complex(g: &CoxeterGraph, w: &[usize], cap: usize) -> Result<bool, ElementsError> {
    if !is_complex_word(g, w, cap)? {
        return Ok(false);
    }
    let trace = cartier_foata(g, w);
    for s in trace.left_block() {
        let stripped = trace.strip_left(g, s).expect("left block letter");
        if is_reduced_fc(g, &stripped.linearize()) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The four reduced-expression shapes available in a star reducible group.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NormalShapeCase {
    /// (i) a product of commuting generators
    CommutingProduct,
    /// (ii) some reduced expression begins `s t` with `m(s, t) != 2`
    BeginsPair(usize, usize),
    /// (iii) some reduced expression ends `t s` with `m(t, s) != 2`
    EndsPair(usize, usize),
    /// (iv) some reduced expression begins `s u t` with `m(s, t) != 2`,
    /// `m(t, u) != 2`, `m(s, u) = 2`
    BeginsTriple(usize, usize, usize),
}

impl NormalShapeCase {
    pub fn tag(&self) -> &'static str {
        match self {
            NormalShapeCase::CommutingProduct => "i",
            NormalShapeCase::BeginsPair(..) => "ii",
            NormalShapeCase::EndsPair(..) => "iii",
            NormalShapeCase::BeginsTriple(..) => "iv",
        }
    }
}

/// Assign a reduced word its normal-shape case, with a witness reduced
/// expression exhibiting it. The search runs over the full set of reduced
/// expressions, bounded by `cap`.
pub fn normal_shape_case(
    g: &CoxeterGraph,
    w: &[usize],
    cap: usize,
) -> Result<(NormalShapeCase, Word), ElementsError> {
    if !classify_star_reducible(g).star_reducible {
        return Err(ElementsError::NotStarReducible);
    }
    let trace = cartier_foata(g, w);
    if trace.blocks().len() <= 1 {
        return Ok((NormalShapeCase::CommutingProduct, trace.linearize()));
    }
    let closure = reduced_word_closure(g, w, cap)?;
    for u in &closure {
        if g.noncommuting(u[0], u[1]) {
            return Ok((NormalShapeCase::BeginsPair(u[0], u[1]), u.clone()));
        }
    }
    for u in &closure {
        let n = u.len();
        if g.noncommuting(u[n - 2], u[n - 1]) {
            return Ok((NormalShapeCase::EndsPair(u[n - 2], u[n - 1]), u.clone()));
        }
    }
    for u in &closure {
        if u.len() >= 3 {
            let (s, mid, t) = (u[0], u[1], u[2]);
            if s != mid
                && !g.noncommuting(s, mid)
                && g.noncommuting(s, t)
                && g.noncommuting(mid, t)
            {
                return Ok((NormalShapeCase::BeginsTriple(s, mid, t), u.clone()));
            }
        }
    }
    Err(ElementsError::NoShapeCase)
}

/// The induced labelled subgraphs on consecutive normal-form blocks.
pub fn cf_block_subgraphs(g: &CoxeterGraph, w: &FcElement) -> Vec<CoxeterGraph> {
    let blocks = w.trace().blocks();
    let mut out = Vec::new();
    for i in 0..blocks.len().saturating_sub(1) {
        let mut verts: Vec<usize> = blocks[i].clone();
        verts.extend(&blocks[i + 1]);
        let (sub, _) = induced_subgraph(g, &verts).expect("block letters are valid");
        out.push(sub);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Bond, FamilySpec};

    fn a2() -> CoxeterGraph {
        FamilySpec::A(2).graph().unwrap()
    }
    fn a3() -> CoxeterGraph {
        FamilySpec::A(3).graph().unwrap()
    }
    fn b2() -> CoxeterGraph {
        FamilySpec::B(2).graph().unwrap()
    }

    #[test]
    fn fc_basics() {
        assert!(!is_reduced_fc(&a2(), &[0, 1, 0]));
        assert!(is_reduced_fc(&b2(), &[0, 1, 0]));
        assert!(!is_reduced_fc(&b2(), &[0, 0]));
        // the hidden braid across a commuting letter
        assert!(!is_reduced_fc(&a3(), &[0, 1, 2, 0]));
    }

    #[test]
    fn enumerate_counts() {
        let (els, exhaustive) = enumerate_fc(&b2(), 10);
        assert_eq!(els.len(), 7);
        assert!(exhaustive);
        let (els, exhaustive) = enumerate_fc(&a3(), 10);
        assert_eq!(els.len(), 14);
        assert!(exhaustive);
        let (els, _) = enumerate_fc(&a3(), 0);
        assert_eq!(els, vec![FcElement::identity()]);
    }

    #[test]
    fn enumerate_matches_extension_oracle() {
        // the localized extension check agrees with the full test
        for g in [b2(), a3(), FamilySpec::CTilde(4).graph().unwrap()] {
            let (els, _) = enumerate_fc(&g, 6);
            for w in &els {
                for s in 0..g.rank() {
                    let mut word = w.word();
                    word.push(s);
                    let full = is_reduced_fc(&g, &word);
                    let incr = fc_extend_right(&g, w, s).is_some();
                    assert_eq!(full, incr, "word {word:?}");
                }
            }
        }
    }

    #[test]
    fn descents() {
        let g = b2();
        let w = FcElement::from_word(&g, &[1, 0]).unwrap();
        assert_eq!(w.left_descents(), vec![1]);
        assert_eq!(w.right_descents(&g), vec![0]);
        let e = FcElement::identity();
        assert!(e.left_descents().is_empty());
        let g3 = a3();
        let w = FcElement::from_word(&g3, &[0, 2]).unwrap();
        assert_eq!(w.left_descents(), vec![0, 2]);
        assert_eq!(w.right_descents(&g3), vec![0, 2]);
    }

    #[test]
    fn coset_examples() {
        let g = b2();
        let w = FcElement::from_word(&g, &[1, 0]).unwrap();
        let (wi, rest) = coset_decompose(&g, &w, (0, 1), Side::Left).unwrap();
        assert_eq!(wi, vec![1, 0]);
        assert!(rest.is_identity());

        let g3 = a3();
        let w = FcElement::from_word(&g3, &[1, 0, 2]).unwrap();
        let (wi, rest) = coset_decompose(&g3, &w, (0, 1), Side::Left).unwrap();
        assert_eq!(wi, vec![1, 0]);
        assert_eq!(rest.word(), vec![2]);

        // neither s nor t is a descent
        let w = FcElement::from_word(&g3, &[2]).unwrap();
        let (wi, rest) = coset_decompose(&g3, &w, (0, 1), Side::Left).unwrap();
        assert!(wi.is_empty());
        assert_eq!(rest.word(), vec![2]);

        assert_eq!(
            coset_decompose(&g3, &w, (0, 2), Side::Left),
            Err(ElementsError::CommutingPair(0, 2))
        );
    }

    #[test]
    fn coset_right_side() {
        let g = b2();
        // tst: right string has k = 3
        let w = FcElement::from_word(&g, &[1, 0, 1]).unwrap();
        let (wi, rest) = coset_decompose(&g, &w, (0, 1), Side::Right).unwrap();
        assert_eq!(wi, vec![1, 0, 1]);
        assert!(rest.is_identity());
    }

    #[test]
    fn lengths_add_in_coset_decomposition() {
        let g = FamilySpec::CTilde(4).graph().unwrap();
        let (els, _) = enumerate_fc(&g, 6);
        for w in &els {
            for (s, t) in g.noncommuting_pairs() {
                for side in [Side::Left, Side::Right] {
                    let (wi, rest) = coset_decompose(&g, w, (s, t), side).unwrap();
                    assert_eq!(wi.len() + rest.len(), w.len());
                }
            }
        }
    }

    #[test]
    fn tits_verdicts() {
        let g = b2();
        assert_eq!(tits_is_reduced(&g, &[0, 1, 0, 1], 10_000), TitsVerdict::Reduced);
        assert_eq!(
            tits_is_reduced(&g, &[0, 1, 0, 1, 0], 10_000),
            TitsVerdict::NotReduced
        );
        assert_eq!(tits_is_reduced(&g, &[], 10), TitsVerdict::Reduced);
        assert_eq!(tits_is_reduced(&g, &[0, 1, 0, 1], 1), TitsVerdict::Unknown);
    }

    #[test]
    fn complexity_predicates() {
        let g = a2();
        assert!(is_complex_word(&g, &[0, 1, 0], 10_000).unwrap());
        assert!(is_weakly_complex(&g, &[0, 1, 0], 10_000).unwrap());
        let g = b2();
        assert!(is_weakly_complex(&g, &[0, 1, 0, 1], 10_000).unwrap());
        assert!(!is_complex_word(&g, &[0, 1, 0], 10_000).unwrap());
        assert_eq!(
            is_complex_word(&g, &[0, 0], 10_000),
            Err(ElementsError::NotReduced)
        );
    }

    #[test]
    fn group_enumeration_orders() {
        let (els, exhaustive) = enumerate_group_elements(&b2(), 20, 100_000).unwrap();
        assert_eq!(els.len(), 8);
        assert!(exhaustive);
        let (els, exhaustive) = enumerate_group_elements(&a3(), 20, 100_000).unwrap();
        assert_eq!(els.len(), 24);
        assert!(exhaustive);
    }

    #[test]
    fn enumeration_agrees_with_fc_filter() {
        // FC enumeration = group enumeration filtered by the trace test
        for g in [
            b2(),
            a3(),
            FamilySpec::I2(Bond::Finite(5)).graph().unwrap(),
        ] {
            let (all, ex) = enumerate_group_elements(&g, 30, 200_000).unwrap();
            assert!(ex);
            let fc_filtered: usize = all.iter().filter(|w| is_reduced_fc(&g, w)).count();
            let (fc, ex2) = enumerate_fc(&g, 30);
            assert!(ex2);
            assert_eq!(fc.len(), fc_filtered);
        }
    }

    #[test]
    fn descent_agrees_with_tits() {
        let g = FamilySpec::B(3).graph().unwrap();
        let (els, _) = enumerate_fc(&g, 5);
        for w in &els {
            for s in 0..g.rank() {
                let mut sw = vec![s];
                sw.extend(w.word());
                let is_descent = w.left_descents().contains(&s);
                let longer = tits_is_reduced(&g, &sw, 100_000) == TitsVerdict::Reduced;
                assert_eq!(is_descent, !longer);
            }
        }
    }

    #[test]
    fn shape_cases() {
        let g = a3();
        let w = [0, 2];
        let (case, _) = normal_shape_case(&g, &w, 100_000).unwrap();
        assert_eq!(case, NormalShapeCase::CommutingProduct);

        let g = b2();
        let (case, witness) = normal_shape_case(&g, &[0, 1, 0, 1], 100_000).unwrap();
        assert_eq!(case, NormalShapeCase::BeginsPair(0, 1));
        assert_eq!(witness, vec![0, 1, 0, 1]);

        // rejected on a graph that is not star reducible
        let bad = CoxeterGraph::from_edges(
            3,
            &[(0, 1, Bond::Finite(3)), (1, 2, Bond::Finite(6))],
        )
        .unwrap();
        assert_eq!(
            normal_shape_case(&bad, &[0], 100).unwrap_err(),
            ElementsError::NotStarReducible
        );
    }

    #[test]
    fn block_subgraphs() {
        let g = b2();
        let single = FcElement::from_word(&g, &[0]).unwrap();
        assert!(cf_block_subgraphs(&g, &single).is_empty());
        let w = FcElement::from_word(&g, &[1, 0]).unwrap();
        let subs = cf_block_subgraphs(&g, &w);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].bond(0, 1), Some(Bond::Finite(4)));

        // Ctilde3 element with blocks {s1, s3}, {s2}: three-vertex path
        // with labels 4, 3
        let g = FamilySpec::CTilde(4).graph().unwrap();
        let w = FcElement::from_word(&g, &[0, 2, 1]).unwrap();
        assert_eq!(w.trace().blocks(), &[vec![0, 2], vec![1]]);
        let subs = cf_block_subgraphs(&g, &w);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].rank(), 3);
        assert_eq!(subs[0].bond(0, 1), Some(Bond::Finite(4)));
        assert_eq!(subs[0].bond(1, 2), Some(Bond::Finite(3)));
    }
}
