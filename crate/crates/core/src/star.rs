//! Strings, the four star maps, and star-reducibility search with
//! certificate paths.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::elements::{coset_decompose, enumerate_fc, FcElement, Side};
use crate::graph::{Bond, CoxeterGraph};
use crate::trace::Trace;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StarError {
    #[error("generators {0} and {1} commute; no string exists")]
    CommutingPair(usize, usize),
}

/// Position of a fully commutative element on an `{s, t}`-string: the
/// length `k` of its alternating coset part and that part's outer and
/// inner end letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringPosition {
    pub pair: (usize, usize),
    pub side: Side,
    pub m: Bond,
    pub k: usize,
    pub first: Option<usize>,
    pub last: Option<usize>,
}

pub fn string_position(
    g: &CoxeterGraph,
    w: &FcElement,
    pair: (usize, usize),
    side: Side,
) -> Result<StringPosition, StarError> {
    let (s, t) = pair;
    let m = g.bond(s, t).ok_or(StarError::CommutingPair(s, t))?;
    let (letters, _) =
        coset_decompose(g, w, pair, side).map_err(|_| StarError::CommutingPair(s, t))?;
    Ok(StringPosition {
        pair,
        side,
        m,
        k: letters.len(),
        first: letters.first().copied(),
        last: letters.last().copied(),
    })
}

fn other(pair: (usize, usize), x: usize) -> usize {
    if x == pair.0 {
        pair.1
    } else {
        pair.0
    }
}

/// The length-increasing star map: defined for `1 <= k <= m - 2` (any
/// `k >= 1` on an infinite bond), extending the alternating coset part by
/// one letter on the outside.
pub fn star_up(
    g: &CoxeterGraph,
    w: &FcElement,
    pair: (usize, usize),
    side: Side,
) -> Result<Option<FcElement>, StarError> {
    let pos = string_position(g, w, pair, side)?;
    let in_range = match pos.m {
        Bond::Finite(m) => pos.k >= 1 && pos.k + 2 <= m as usize,
        Bond::Infinite => pos.k >= 1,
    };
    if !in_range {
        return Ok(None);
    }
    let mut word = w.word();
    match side {
        Side::Left => {
            let outer = other(pair, pos.first.expect("k >= 1"));
            word.insert(0, outer);
        }
        Side::Right => {
            let outer = other(pair, pos.last.expect("k >= 1"));
            word.push(outer);
        }
    }
    let up = FcElement::from_word(g, &word)
        .expect("star operations respect the fully commutative partition");
    Ok(Some(up))
}

/// The length-decreasing star map: defined for `2 <= k <= m - 1`, stripping
/// the outer letter of the alternating coset part.
pub fn star_down(
    g: &CoxeterGraph,
    w: &FcElement,
    pair: (usize, usize),
    side: Side,
) -> Result<Option<FcElement>, StarError> {
    let pos = string_position(g, w, pair, side)?;
    if pos.k < 2 {
        return Ok(None);
    }
    let trace = match side {
        Side::Left => w.trace().strip_left(g, pos.first.expect("k >= 2")),
        Side::Right => w.trace().strip_right(g, pos.last.expect("k >= 2")),
    }
    .expect("outer letter is strippable");
    Ok(Some(FcElement::from_trace_unchecked(trace)))
}

/// A product of commuting generators is a one-block trace.
pub fn is_commuting_product(w: &FcElement) -> bool {
    w.trace().blocks().len() <= 1
}

/// One step of a star reduction certificate.
#[derive(Clone, Debug, Serialize)]
pub struct StarStep {
    pub pair: (usize, usize),
    pub side: Side,
    pub result: FcElement,
}

/// Memoized search for chains of length-decreasing star operations down to
/// a product of commuting generators. Deterministic: pairs in ascending
/// order, left side before right.
pub struct StarReducer {
    g: Arc<CoxeterGraph>,
    memo: Mutex<HashMap<Trace, Option<(usize, usize, Side, Trace)>>>,
}

impl StarReducer {
    pub fn new(g: Arc<CoxeterGraph>) -> Self {
        StarReducer {
            g,
            memo: Mutex::new(HashMap::new()),
        }
    }

    fn down_moves(&self, w: &FcElement) -> Vec<(usize, usize, Side, FcElement)> {
        let mut out = Vec::new();
        for (s, t) in self.g.noncommuting_pairs() {
            for side in [Side::Left, Side::Right] {
                if let Ok(Some(d)) = star_down(&self.g, w, (s, t), side) {
                    out.push((s, t, side, d));
                }
            }
        }
        out
    }

    fn solve(&self, w: &FcElement) -> bool {
        if is_commuting_product(w) {
            return true;
        }
        if let Some(v) = self.memo.lock().unwrap().get(w.trace()) {
            return v.is_some();
        }
        let mut found = None;
        for (s, t, side, down) in self.down_moves(w) {
            if self.solve(&down) {
                found = Some((s, t, side, down.trace().clone()));
                break;
            }
        }
        let ok = found.is_some();
        self.memo.lock().unwrap().insert(w.trace().clone(), found);
        ok
    }

    /// The certificate path from `w` down to a commuting product, or
    /// `None` when no such chain exists. Commuting products get the empty
    /// path.
    pub fn reduce_path(&self, w: &FcElement) -> Option<Vec<StarStep>> {
        if !self.solve(w) {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = w.clone();
        while !is_commuting_product(&cur) {
            let step = self
                .memo
                .lock()
                .unwrap()
                .get(cur.trace())
                .cloned()
                .flatten()
                .expect("solved elements have a recorded move");
            let (s, t, side, next) = step;
            let next = FcElement::from_trace_unchecked(next);
            path.push(StarStep {
                pair: (s, t),
                side,
                result: next.clone(),
            });
            cur = next;
        }
        Some(path)
    }
}

/// One-shot search without a shared memo table.
pub fn star_reduce_path(g: &CoxeterGraph, w: &FcElement) -> Option<Vec<StarStep>> {
    StarReducer::new(Arc::new(g.clone())).reduce_path(w)
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub witnesses: Vec<FcElement>,
    pub exhaustive: bool,
}

/// Enumerate fully commutative elements up to `max_len` and report those
/// with no star reduction chain.
pub fn audit_graph(g: &CoxeterGraph, max_len: usize) -> AuditReport {
    let (els, exhaustive) = enumerate_fc(g, max_len);
    let reducer = StarReducer::new(Arc::new(g.clone()));
    let witnesses = els
        .into_iter()
        .filter(|w| reducer.reduce_path(w).is_none())
        .collect();
    AuditReport {
        witnesses,
        exhaustive,
    }
}
