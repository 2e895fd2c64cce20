//! The generalized Temperley-Lieb algebra of a Coxeter graph: reduction of
//! monomials in the bar-fixed generators, the standard and canonical bases
//! as views over the monomial basis, the lattice predicates, and structure
//! constant analysis.
//!
//! All internal arithmetic happens in monomial (`b`) coordinates, where the
//! bar involution acts coefficientwise; the other bases are reached through
//! memoized unitriangular changes of coordinates.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elements::{
    enumerate_fc, is_reduced_fc, tits_is_reduced, FcElement, Side, TitsVerdict,
};
use crate::graph::{classify_star_reducible, CoxeterGraph};
use crate::laurent::LaurentInt;
use crate::star::star_down;
use crate::trace::{cartier_foata, Heap, Trace, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TlError {
    #[error("elements live over different graphs")]
    GraphMismatch,
    #[error("graph is not star reducible")]
    NotStarReducible,
    #[error("canonical basis defining property violated: {0}")]
    DefiningPropertyViolated(String),
    #[error("word is not reduced")]
    NotReduced,
    #[error("word problem cap {0} exceeded")]
    CapExceeded(usize),
    #[error("generators {0} and {1} commute")]
    CommutingPair(usize, usize),
    #[error("element lies outside the lattice; projection undefined")]
    NotInLattice,
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    B,
    Ttilde,
    C,
}

type Terms = BTreeMap<FcElement, LaurentInt>;

fn terms_add(acc: &mut Terms, w: FcElement, c: &LaurentInt) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match acc.entry(w) {
        Entry::Occupied(mut e) => {
            e.get_mut().add_assign(c);
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
    }
}

fn terms_add_scaled(acc: &mut Terms, other: &Terms, scale: &LaurentInt) {
    for (w, c) in other {
        terms_add(acc, w.clone(), &scale.mul(c));
    }
}

/// An element of the algebra: a finite map from fully commutative elements
/// to coefficients, interpreted in a declared basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TlElement {
    basis: Basis,
    graph: Arc<CoxeterGraph>,
    terms: Terms,
}

impl TlElement {
    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn graph(&self) -> &Arc<CoxeterGraph> {
        &self.graph
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FcElement, &LaurentInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &FcElement) -> LaurentInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TlElement) -> Result<TlElement, TlError> {
        if self.graph != other.graph || self.basis != other.basis {
            return Err(TlError::GraphMismatch);
        }
        let mut terms = self.terms.clone();
        terms_add_scaled(&mut terms, &other.terms, &LaurentInt::one());
        Ok(TlElement {
            basis: self.basis,
            graph: self.graph.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &TlElement) -> Result<TlElement, TlError> {
        if self.graph != other.graph || self.basis != other.basis {
            return Err(TlError::GraphMismatch);
        }
        let mut terms = self.terms.clone();
        terms_add_scaled(&mut terms, &other.terms, &LaurentInt::from_int(-1));
        Ok(TlElement {
            basis: self.basis,
            graph: self.graph.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &LaurentInt) -> TlElement {
        let mut terms = Terms::new();
        terms_add_scaled(&mut terms, &self.terms, c);
        TlElement {
            basis: self.basis,
            graph: self.graph.clone(),
            terms,
        }
    }

    pub fn to_json(&self) -> TlElementJson {
        TlElementJson {
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TlTermJson {
                    trace: w.trace().clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct TlTermJson {
    pub trace: Trace,
    pub coeff: LaurentInt,
}

#[derive(Serialize, Deserialize)]
pub struct TlElementJson {
    pub basis: Basis,
    pub terms: Vec<TlTermJson>,
}

/// Integer coefficients of `x * P_{m-1}(x)`, the relation satisfied by an
/// alternating product of `m` noncommuting generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebyshevRelation {
    m: u32,
    coeffs: Vec<BigInt>,
}

impl ChebyshevRelation {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Coefficient of degree `d`, for `0 <= d <= m`.
    pub fn coeff(&self, d: usize) -> &BigInt {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
}

/// The recurrence `P_n = x P_{n-1} - P_{n-2}` with `P_0 = 1`, `P_1 = x`,
/// returning the coefficients of `x * P_{m-1}`.
pub fn chebyshev_relation(m: u32) -> Result<ChebyshevRelation, TlError> {
    if m < 3 {
        return Err(TlError::BadParameter(format!("chebyshev relation needs m >= 3, got {m}")));
    }
    let mut prev: Vec<BigInt> = vec![BigInt::one()]; // P_0
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()]; // P_1
    for _ in 2..m {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (d, c) in cur.iter().enumerate() {
            next[d + 1] += c;
        }
        for (d, c) in prev.iter().enumerate() {
            next[d] -= c;
        }
        prev = cur;
        cur = next;
    }
    let mut coeffs = vec![BigInt::zero(); m as usize + 1];
    for (d, c) in cur.into_iter().enumerate() {
        coeffs[d + 1] = c;
    }
    debug_assert!(coeffs[m as usize].is_one());
    Ok(ChebyshevRelation { m, coeffs })
}

enum Strategy {
    Leftmost,
    Seeded(ChaCha8Rng),
}

enum ReduceMove {
    Square { delete: Vec<usize> },
    Braid { m: u32, window: Vec<usize> },
}

/// Context for computations over one graph: owns the classification flag
/// and the memo tables for the standard and canonical basis expansions.
pub struct TlContext {
    graph: Arc<CoxeterGraph>,
    star_reducible: bool,
    ttilde_memo: Mutex<HashMap<Trace, Terms>>,
    c_memo: Mutex<HashMap<Trace, Terms>>,
}

impl TlContext {
    pub fn new(graph: CoxeterGraph) -> Self {
        let graph = Arc::new(graph);
        let star_reducible = classify_star_reducible(&graph).star_reducible;
        TlContext {
            graph,
            star_reducible,
            ttilde_memo: Mutex::new(HashMap::new()),
            c_memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &Arc<CoxeterGraph> {
        &self.graph
    }

    pub fn is_star_reducible(&self) -> bool {
        self.star_reducible
    }

    pub fn zero(&self, basis: Basis) -> TlElement {
        TlElement {
            basis,
            graph: self.graph.clone(),
            terms: Terms::new(),
        }
    }

    pub fn element(&self, basis: Basis, terms: Vec<(FcElement, LaurentInt)>) -> TlElement {
        let mut map = Terms::new();
        for (w, c) in terms {
            terms_add(&mut map, w, &c);
        }
        TlElement {
            basis,
            graph: self.graph.clone(),
            terms: map,
        }
    }

    /// The monomial basis element at `w`.
    pub fn b_of(&self, w: &FcElement) -> TlElement {
        self.element(Basis::B, vec![(w.clone(), LaurentInt::one())])
    }

    /// The identity of the algebra.
    pub fn one(&self) -> TlElement {
        self.b_of(&FcElement::identity())
    }

    /// Express the monomial `b(s_1) b(s_2) ... b(s_r)` in the monomial
    /// basis, applying the square relation (picking up `delta`) and the
    /// alternating relation of length `m(s, t)` until the trace is reduced
    /// fully commutative. Deterministic leftmost order.
    pub fn reduce_b_monomial(&self, word: &[usize]) -> TlElement {
        self.reduce_with(word, &mut Strategy::Leftmost)
    }

    /// Randomized reduction order; the result must agree with the
    /// deterministic one (tested, backed by the basis theorem).
    pub fn reduce_b_monomial_seeded(&self, word: &[usize], seed: u64) -> TlElement {
        self.reduce_with(word, &mut Strategy::Seeded(ChaCha8Rng::seed_from_u64(seed)))
    }

    fn reduce_with(&self, word: &[usize], strategy: &mut Strategy) -> TlElement {
        let mut out = Terms::new();
        let mut stack: Vec<(LaurentInt, Word)> = vec![(LaurentInt::one(), word.to_vec())];
        while let Some((coeff, w)) = stack.pop() {
            let trace = cartier_foata(&self.graph, &w);
            let heap = Heap::new(&self.graph, &trace);
            let mut moves: Vec<ReduceMove> = Vec::new();
            for (_, _, j) in heap.square_occurrences() {
                moves.push(ReduceMove::Square { delete: vec![j] });
            }
            for (s, t) in self.graph.noncommuting_pairs() {
                let Some(m) = self.graph.bond(s, t).and_then(|b| b.finite()) else {
                    continue;
                };
                for window in heap.braid_windows(s, t, m as usize) {
                    moves.push(ReduceMove::Braid { m, window });
                }
            }
            if moves.is_empty() {
                debug_assert!(is_reduced_fc(&self.graph, heap.word()));
                terms_add(&mut out, FcElement::from_trace_unchecked(trace), &coeff);
                continue;
            }
            let chosen = match strategy {
                Strategy::Leftmost => moves.swap_remove(self.leftmost_index(&moves)),
                Strategy::Seeded(rng) => {
                    let i = rng.gen_range(0..moves.len());
                    moves.swap_remove(i)
                }
            };
            match chosen {
                ReduceMove::Square { delete, .. } => {
                    stack.push((coeff.mul(&LaurentInt::delta()), heap.delete_positions(&delete)));
                }
                ReduceMove::Braid { m, window } => {
                    let rel = chebyshev_relation(m).expect("bond labels are at least 3");
                    for d in 1..m as usize {
                        let a = rel.coeff(d);
                        if a.is_zero() {
                            continue;
                        }
                        let shorter = heap.delete_positions(&window[d..]);
                        stack.push((coeff.scale(&-a), shorter));
                    }
                }
            }
        }
        TlElement {
            basis: Basis::B,
            graph: self.graph.clone(),
            terms: out,
        }
    }

    fn leftmost_index(&self, moves: &[ReduceMove]) -> usize {
        let key = |m: &ReduceMove| match m {
            ReduceMove::Square { delete, .. } => (0usize, delete[0], 0usize),
            ReduceMove::Braid { window, .. } => (1usize, window[0], window[1]),
        };
        moves
            .iter()
            .enumerate()
            .min_by_key(|(_, m)| key(m))
            .map(|(i, _)| i)
            .expect("nonempty move list")
    }

    /// Bilinear product, computed in monomial coordinates.
    pub fn multiply(&self, x: &TlElement, y: &TlElement) -> Result<TlElement, TlError> {
        if x.graph != self.graph || y.graph != self.graph {
            return Err(TlError::GraphMismatch);
        }
        let xb = self.change_basis(x, Basis::B)?;
        let yb = self.change_basis(y, Basis::B)?;
        let mut out = Terms::new();
        for (wx, cx) in &xb.terms {
            let mut word = wx.word();
            for (wy, cy) in &yb.terms {
                word.truncate(wx.len());
                word.extend(wy.word());
                let prod = self.reduce_b_monomial(&word);
                terms_add_scaled(&mut out, &prod.terms, &cx.mul(cy));
            }
        }
        Ok(TlElement {
            basis: Basis::B,
            graph: self.graph.clone(),
            terms: out,
        })
    }

    fn mul_generator(&self, terms: &Terms, s: usize, side: Side) -> Terms {
        let mut out = Terms::new();
        for (w, c) in terms {
            let word = match side {
                Side::Left => {
                    let mut v = vec![s];
                    v.extend(w.word());
                    v
                }
                Side::Right => {
                    let mut v = w.word();
                    v.push(s);
                    v
                }
            };
            let prod = self.reduce_b_monomial(&word);
            terms_add_scaled(&mut out, &prod.terms, c);
        }
        out
    }

    /// Monomial coordinates of the standard basis element at `w`, via the
    /// recursion along any left descent.
    pub fn ttilde_of(&self, w: &FcElement) -> TlElement {
        TlElement {
            basis: Basis::B,
            graph: self.graph.clone(),
            terms: self.ttilde_terms(w),
        }
    }

    fn ttilde_terms(&self, w: &FcElement) -> Terms {
        if w.is_identity() {
            let mut t = Terms::new();
            t.insert(FcElement::identity(), LaurentInt::one());
            return t;
        }
        if let Some(hit) = self.ttilde_memo.lock().unwrap().get(w.trace()) {
            return hit.clone();
        }
        let s = w.left_descents()[0];
        let rest = FcElement::from_trace_unchecked(
            w.trace().strip_left(&self.graph, s).expect("left descent"),
        );
        let sub = self.ttilde_terms(&rest);
        let mut out = self.mul_generator(&sub, s, Side::Left);
        terms_add_scaled(&mut out, &sub, &LaurentInt::v_pow(-1).neg());
        self.ttilde_memo
            .lock()
            .unwrap()
            .insert(w.trace().clone(), out.clone());
        out
    }

    /// Monomial coordinates of the canonical basis element at `w`.
    ///
    /// Commuting products are monomial basis elements; otherwise one
    /// length-decreasing star move drives the recursion, and the defining
    /// property (bar invariance plus unitriangular congruence to the
    /// standard basis element) is verified on every constructed element.
    pub fn c_of(&self, w: &FcElement) -> Result<TlElement, TlError> {
        Ok(TlElement {
            basis: Basis::B,
            graph: self.graph.clone(),
            terms: self.c_terms(w)?,
        })
    }

    fn c_terms(&self, w: &FcElement) -> Result<Terms, TlError> {
        if !self.star_reducible {
            return Err(TlError::NotStarReducible);
        }
        if w.trace().blocks().len() <= 1 {
            let mut t = Terms::new();
            t.insert(w.clone(), LaurentInt::one());
            return Ok(t);
        }
        if let Some(hit) = self.c_memo.lock().unwrap().get(w.trace()) {
            return Ok(hit.clone());
        }
        let mut chosen = None;
        'outer: for (s, t) in self.graph.noncommuting_pairs() {
            for side in [Side::Left, Side::Right] {
                if let Ok(Some(down)) = star_down(&self.graph, w, (s, t), side) {
                    chosen = Some(((s, t), side, down));
                    break 'outer;
                }
            }
        }
        let Some((pair, side, down)) = chosen else {
            return Err(TlError::DefiningPropertyViolated(format!(
                "no star-down move on {:?} over a star reducible graph",
                w.word()
            )));
        };
        // the outer letter: the generator extending `down` back to `w`
        let pos = crate::star::string_position(&self.graph, w, pair, side)
            .expect("pair is noncommuting");
        let outer = match side {
            Side::Left => pos.first.expect("k >= 2"),
            Side::Right => pos.last.expect("k >= 2"),
        };
        let down2 = star_down(&self.graph, &down, pair, side).expect("pair is noncommuting");
        let c_down = self.c_terms(&down)?;
        let mut out = self.mul_generator(&c_down, outer, side);
        if let Some(d2) = down2 {
            let c_down2 = self.c_terms(&d2)?;
            terms_add_scaled(&mut out, &c_down2, &LaurentInt::from_int(-1));
        }
        self.verify_c_defining_property(w, &out)?;
        self.c_memo
            .lock()
            .unwrap()
            .insert(w.trace().clone(), out.clone());
        Ok(out)
    }

    fn verify_c_defining_property(&self, w: &FcElement, terms: &Terms) -> Result<(), TlError> {
        let fail = |msg: String| Err(TlError::DefiningPropertyViolated(msg));
        for (y, c) in terms {
            if c.bar() != *c {
                return fail(format!(
                    "coefficient {c} at {:?} is not bar symmetric",
                    y.word()
                ));
            }
        }
        let ttilde_coords = self.b_terms_to_ttilde(terms);
        for (y, c) in &ttilde_coords {
            if y == w {
                if *c != LaurentInt::one() {
                    return fail(format!("leading standard coefficient is {c}, not 1"));
                }
            } else if !c.in_vinv_a_minus() {
                return fail(format!(
                    "standard coefficient {c} at {:?} escapes v^-1 A^-",
                    y.word()
                ));
            }
        }
        if !ttilde_coords.contains_key(w) {
            return fail("leading standard coefficient missing".to_string());
        }
        Ok(())
    }

    fn b_terms_to_ttilde(&self, terms: &Terms) -> Terms {
        let mut rem = terms.clone();
        let mut out = Terms::new();
        while let Some((w, c)) = rem.iter().next_back().map(|(w, c)| (w.clone(), c.clone())) {
            // the maximal key has maximal length; the change is strictly
            // length-unitriangular
            let expansion = self.ttilde_terms(&w);
            terms_add_scaled(&mut rem, &expansion, &c.neg());
            debug_assert!(rem.get(&w).is_none());
            terms_add(&mut out, w, &c);
        }
        out
    }

    fn ttilde_terms_to_b(&self, terms: &Terms) -> Terms {
        let mut out = Terms::new();
        for (w, c) in terms {
            terms_add_scaled(&mut out, &self.ttilde_terms(w), c);
        }
        out
    }

    fn b_terms_to_c(&self, terms: &Terms) -> Result<Terms, TlError> {
        let mut rem = terms.clone();
        let mut out = Terms::new();
        while let Some((w, c)) = rem.iter().next_back().map(|(w, c)| (w.clone(), c.clone())) {
            let expansion = self.c_terms(&w)?;
            terms_add_scaled(&mut rem, &expansion, &c.neg());
            terms_add(&mut out, w, &c);
        }
        Ok(out)
    }

    fn c_terms_to_b(&self, terms: &Terms) -> Result<Terms, TlError> {
        let mut out = Terms::new();
        for (w, c) in terms {
            terms_add_scaled(&mut out, &self.c_terms(w)?, c);
        }
        Ok(out)
    }

    /// Exact coordinate change between any two of the three bases.
    pub fn change_basis(&self, x: &TlElement, target: Basis) -> Result<TlElement, TlError> {
        if x.graph != self.graph {
            return Err(TlError::GraphMismatch);
        }
        if x.basis == target {
            return Ok(x.clone());
        }
        let b_terms = match x.basis {
            Basis::B => x.terms.clone(),
            Basis::Ttilde => self.ttilde_terms_to_b(&x.terms),
            Basis::C => self.c_terms_to_b(&x.terms)?,
        };
        let terms = match target {
            Basis::B => b_terms,
            Basis::Ttilde => self.b_terms_to_ttilde(&b_terms),
            Basis::C => self.b_terms_to_c(&b_terms)?,
        };
        Ok(TlElement {
            basis: target,
            graph: self.graph.clone(),
            terms,
        })
    }

    /// The bar involution: monomial basis elements are fixed, so bar acts
    /// coefficientwise in monomial coordinates.
    pub fn bar_element(&self, x: &TlElement) -> Result<TlElement, TlError> {
        let xb = self.change_basis(x, Basis::B)?;
        let terms = xb
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.bar()))
            .collect();
        Ok(TlElement {
            basis: Basis::B,
            graph: self.graph.clone(),
            terms,
        })
    }

    /// The image of the scaled standard basis element of an arbitrary
    /// reduced word: the product of `(b_s - v^-1)` over its letters.
    pub fn theta_ttilde_of_word(&self, word: &[usize], cap: usize) -> Result<TlElement, TlError> {
        match tits_is_reduced(&self.graph, word, cap) {
            TitsVerdict::NotReduced => return Err(TlError::NotReduced),
            TitsVerdict::Unknown => return Err(TlError::CapExceeded(cap)),
            TitsVerdict::Reduced => {}
        }
        let mut terms = Terms::new();
        terms.insert(FcElement::identity(), LaurentInt::one());
        for &s in word {
            let mut next = self.mul_generator(&terms, s, Side::Right);
            terms_add_scaled(&mut next, &terms, &LaurentInt::v_pow(-1).neg());
            terms = next;
        }
        Ok(TlElement {
            basis: Basis::B,
            graph: self.graph.clone(),
            terms,
        })
    }

    /// Lattice membership: all standard-basis coordinates in `A^-`.
    pub fn in_lattice(&self, x: &TlElement) -> Result<bool, TlError> {
        let t = self.change_basis(x, Basis::Ttilde)?;
        Ok(t.terms.values().all(LaurentInt::in_a_minus))
    }

    /// Membership in `v^-1 L`: all standard coordinates in `v^-1 A^-`.
    pub fn in_vinv_lattice(&self, x: &TlElement) -> Result<bool, TlError> {
        let t = self.change_basis(x, Basis::Ttilde)?;
        Ok(t.terms.values().all(LaurentInt::in_vinv_a_minus))
    }

    /// The projection to `L / v^-1 L`: the degree-zero part of each
    /// standard coordinate. Defined only on lattice elements.
    pub fn pi_project(&self, x: &TlElement) -> Result<BTreeMap<FcElement, BigInt>, TlError> {
        let t = self.change_basis(x, Basis::Ttilde)?;
        if !t.terms.values().all(LaurentInt::in_a_minus) {
            return Err(TlError::NotInLattice);
        }
        Ok(t
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.coeff(0)))
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }

    fn in_sublattice<F>(&self, x: &TlElement, in_subset: F) -> Result<bool, TlError>
    where
        F: Fn(&FcElement) -> bool,
    {
        let t = self.change_basis(x, Basis::Ttilde)?;
        Ok(t.terms.iter().all(|(w, c)| {
            if in_subset(w) {
                c.in_a_minus()
            } else {
                c.in_vinv_a_minus()
            }
        }))
    }

    /// The left descent sublattice for `s`: standard coordinates in `A^-`
    /// on elements with `s w < w`, in `v^-1 A^-` elsewhere.
    pub fn in_l_left(&self, x: &TlElement, s: usize) -> Result<bool, TlError> {
        self.in_sublattice(x, |w| w.left_descents().contains(&s))
    }

    pub fn in_l_right(&self, x: &TlElement, s: usize) -> Result<bool, TlError> {
        self.in_sublattice(x, |w| w.right_descents(&self.graph).contains(&s))
    }

    /// The sublattice for elements with a reduced expression beginning
    /// `s t` (noncommuting pair).
    pub fn in_l_left_st(&self, x: &TlElement, s: usize, t: usize) -> Result<bool, TlError> {
        if !self.graph.noncommuting(s, t) {
            return Err(TlError::CommutingPair(s, t));
        }
        self.in_sublattice(x, |w| self.begins_with(w, s, t))
    }

    pub fn in_l_right_ts(&self, x: &TlElement, t: usize, s: usize) -> Result<bool, TlError> {
        if !self.graph.noncommuting(s, t) {
            return Err(TlError::CommutingPair(s, t));
        }
        self.in_sublattice(x, |w| self.ends_with(w, t, s))
    }

    fn begins_with(&self, w: &FcElement, s: usize, t: usize) -> bool {
        if !w.left_descents().contains(&s) {
            return false;
        }
        let rest = w.trace().strip_left(&self.graph, s).expect("descent");
        rest.left_block().contains(&t)
    }

    fn ends_with(&self, w: &FcElement, t: usize, s: usize) -> bool {
        if !w.right_descents(&self.graph).contains(&s) {
            return false;
        }
        let rest = w.trace().strip_right(&self.graph, s).expect("descent");
        rest.right_block(&self.graph).contains(&t)
    }

    /// Structure constants of the canonical basis: the expansion of
    /// `c_x c_y` in canonical coordinates.
    pub fn structure_constants(
        &self,
        x: &FcElement,
        y: &FcElement,
    ) -> Result<BTreeMap<FcElement, LaurentInt>, TlError> {
        let cx = self.c_of(x)?;
        let cy = self.c_of(y)?;
        let prod = self.multiply(&cx, &cy)?;
        self.b_terms_to_c(&prod.terms)
    }

    /// Exhaustively check the structure-constant shape over all pairs of
    /// enumerated fully commutative elements: every nonzero constant must
    /// be a positive integer multiple of a power of delta, with one power
    /// per pair.
    pub fn positivity_report(
        &self,
        max_len: usize,
        jobs: usize,
    ) -> Result<PositivityReport, TlError> {
        let (els, exhaustive) = enumerate_fc(&self.graph, max_len);
        let mut pairs: Vec<(FcElement, FcElement)> = Vec::new();
        for x in &els {
            for y in &els {
                pairs.push((x.clone(), y.clone()));
            }
        }
        // warm the canonical table sequentially so workers share it
        for w in &els {
            self.c_of(w)?;
        }
        let jobs = jobs.max(1);
        let chunk = pairs.len().div_ceil(jobs).max(1);
        let results: Vec<Result<Vec<PairOutcome>, TlError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = pairs
                .chunks(chunk)
                .map(|slice| {
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        for (x, y) in slice {
                            let sc = self.structure_constants(x, y)?;
                            out.push(PairOutcome {
                                x: x.clone(),
                                y: y.clone(),
                                constants: sc,
                            });
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker")).collect()
        });
        let mut report = PositivityReport {
            pairs: pairs.len(),
            max_delta_power: 0,
            violations: Vec::new(),
            exhaustive,
            table: Vec::new(),
        };
        for chunk in results {
            for outcome in chunk? {
                let mut power: Option<u32> = None;
                for (w, f) in &outcome.constants {
                    report.table.push((
                        outcome.x.clone(),
                        outcome.y.clone(),
                        w.clone(),
                        f.clone(),
                    ));
                    match f.delta_power_decompose() {
                        Some((n, k)) if n.is_positive() => {
                            report.max_delta_power = report.max_delta_power.max(k);
                            match power {
                                None => power = Some(k),
                                Some(p) if p == k => {}
                                Some(p) => report.violations.push(PositivityViolation {
                                    x: outcome.x.word(),
                                    y: outcome.y.word(),
                                    w: w.word(),
                                    coeff: f.clone(),
                                    reason: format!("delta power {k} differs from {p}"),
                                }),
                            }
                        }
                        Some((n, _)) => report.violations.push(PositivityViolation {
                            x: outcome.x.word(),
                            y: outcome.y.word(),
                            w: w.word(),
                            coeff: f.clone(),
                            reason: format!("integer factor {n} is not positive"),
                        }),
                        None => report.violations.push(PositivityViolation {
                            x: outcome.x.word(),
                            y: outcome.y.word(),
                            w: w.word(),
                            coeff: f.clone(),
                            reason: "not an integer multiple of a delta power".to_string(),
                        }),
                    }
                }
            }
        }
        Ok(report)
    }

    /// Seed the standard-basis memo (for cache warm starts). Entries are
    /// trusted as-is; callers must pair this with a fingerprint check.
    pub fn seed_ttilde(&self, entries: Vec<(Trace, Vec<(Trace, LaurentInt)>)>) {
        let mut memo = self.ttilde_memo.lock().unwrap();
        for (key, terms) in entries {
            let map = terms
                .into_iter()
                .map(|(t, c)| (FcElement::from_trace_unchecked(t), c))
                .collect();
            memo.insert(key, map);
        }
    }

    pub fn seed_c(&self, entries: Vec<(Trace, Vec<(Trace, LaurentInt)>)>) {
        let mut memo = self.c_memo.lock().unwrap();
        for (key, terms) in entries {
            let map = terms
                .into_iter()
                .map(|(t, c)| (FcElement::from_trace_unchecked(t), c))
                .collect();
            memo.insert(key, map);
        }
    }

    pub fn dump_ttilde(&self) -> Vec<(Trace, Vec<(Trace, LaurentInt)>)> {
        let memo = self.ttilde_memo.lock().unwrap();
        let mut out: Vec<_> = memo
            .iter()
            .map(|(k, v)| {
                (
                    k.clone(),
                    v.iter()
                        .map(|(w, c)| (w.trace().clone(), c.clone()))
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out
    }

    pub fn dump_c(&self) -> Vec<(Trace, Vec<(Trace, LaurentInt)>)> {
        let memo = self.c_memo.lock().unwrap();
        let mut out: Vec<_> = memo
            .iter()
            .map(|(k, v)| {
                (
                    k.clone(),
                    v.iter()
                        .map(|(w, c)| (w.trace().clone(), c.clone()))
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out
    }
}

struct PairOutcome {
    x: FcElement,
    y: FcElement,
    constants: BTreeMap<FcElement, LaurentInt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityViolation {
    pub x: Word,
    pub y: Word,
    pub w: Word,
    pub coeff: LaurentInt,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct PositivityReport {
    pub pairs: usize,
    pub max_delta_power: u32,
    pub violations: Vec<PositivityViolation>,
    pub exhaustive: bool,
    /// Rows (x, y, w, coefficient) of the full table.
    pub table: Vec<(FcElement, FcElement, FcElement, LaurentInt)>,
}
