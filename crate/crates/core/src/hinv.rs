//! The trace invariant `h`, computed by the confluent rewriting
//! `ss -> s` (counted) and `sts -> s` (free), with a seeded strategy so
//! confluence is a tested property rather than an assumption.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::elements::is_reduced_fc;
use crate::graph::{classify_star_reducible, CoxeterGraph};
use crate::trace::{cartier_foata, Heap, Trace, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HError {
    #[error("graph is not star reducible; the invariant is only defined there")]
    NotStarReducible,
    #[error("rewriting terminated at a trace that is not reduced fully commutative")]
    TerminalNotReducedFc,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HMoveKind {
    #[serde(rename = "ss")]
    Square,
    #[serde(rename = "sts")]
    Braid,
}

/// One applied rewriting move, with the occurrence positions in the
/// canonical linearization current at the time of the move.
#[derive(Clone, Debug, Serialize)]
pub struct HMove {
    pub kind: HMoveKind,
    pub pair: Vec<usize>,
    pub position: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct HOutcome {
    pub h: u64,
    pub log: Vec<HMove>,
    pub terminal: Trace,
}

/// Rewrite until neither `ss` nor `sts` occurs, choosing among applicable
/// moves by a seeded pseudo-random strategy. Returns the count of square
/// moves (the invariant) and the move log; the terminal trace is checked
/// to be reduced fully commutative.
pub fn h_value(g: &CoxeterGraph, word: &[usize], seed: u64) -> Result<HOutcome, HError> {
    if !classify_star_reducible(g).star_reducible {
        return Err(HError::NotStarReducible);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur: Word = cartier_foata(g, word).linearize();
    let mut h = 0u64;
    let mut log = Vec::new();
    loop {
        let heap = Heap::from_word(g, cur.clone());
        let mut moves: Vec<HMove> = Vec::new();
        for (s, i, j) in heap.square_occurrences() {
            moves.push(HMove {
                kind: HMoveKind::Square,
                pair: vec![s],
                position: vec![i, j],
            });
        }
        for (s, t) in g.noncommuting_pairs() {
            for window in heap.braid_windows(s, t, 3) {
                let outer = heap.word()[window[0]];
                let inner = heap.word()[window[1]];
                moves.push(HMove {
                    kind: HMoveKind::Braid,
                    pair: vec![outer, inner],
                    position: window,
                });
            }
        }
        if moves.is_empty() {
            break;
        }
        let chosen = moves.swap_remove(rng.gen_range(0..moves.len()));
        match chosen.kind {
            HMoveKind::Square => {
                cur = heap.delete_positions(&chosen.position[1..]);
                h += 1;
            }
            HMoveKind::Braid => {
                cur = heap.delete_positions(&chosen.position[1..]);
            }
        }
        cur = cartier_foata(g, &cur).linearize();
        log.push(chosen);
    }
    if !is_reduced_fc(g, &cur) {
        return Err(HError::TerminalNotReducedFc);
    }
    Ok(HOutcome {
        h,
        log,
        terminal: cartier_foata(g, &cur),
    })
}

/// Acyclic means the invariant vanishes.
pub fn is_acyclic(g: &CoxeterGraph, word: &[usize]) -> Result<bool, HError> {
    Ok(h_value(g, word, 0)?.h == 0)
}
