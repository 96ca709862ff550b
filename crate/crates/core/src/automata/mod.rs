//! Weighted word and tree automata, the lazily built automaton `B_k` that
//! simulates a tiling system over k-words and k-tree-terms, and the
//! decomposition-based evaluation pipelines.

mod bk;
mod explicit;
mod pipeline;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hash};

use thiserror::Error;

use crate::decomp::DecompError;
use crate::semiring::{Semiring, Weight};
use crate::term::{RankedTerm, TermNode};
use crate::wts::WtsError;

pub use bk::{omega_k, render_op, render_symbol, BkState, LazyBk, PartialTileMap};
pub use explicit::{
    materialize_tree_bk, materialize_word_bk, ExplicitTreeAutomaton, ExplicitWordAutomaton, SparseMatrix,
    DEFAULT_MATERIALIZE_BUDGET,
};
pub use pipeline::{eval_pw, eval_tw, EvalOptions, EvalReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error(transparent)]
    Wts(#[from] WtsError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error("symbol {0} is outside the automaton's alphabet")]
    Alphabet(String),
    #[error("automaton has more than {budget} states or transitions")]
    BudgetExceeded { budget: usize },
}

/// Sparse vector over states; absent entries are `0_S`.
pub type StateVector<Q> = HashMap<Q, Weight, BuildHasherDefault<DefaultHasher>>;

/// Counters collected while folding state vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Sum of the state-vector support sizes over all steps.
    pub reachable_states: usize,
    /// Largest single state-vector support.
    pub max_states: usize,
}

impl EvalStats {
    fn record(&mut self, support: usize) {
        self.reachable_states += support;
        self.max_states = self.max_states.max(support);
    }
}

pub trait WeightedWordAutomaton {
    type State: Clone + Eq + Hash;
    type Letter;

    fn semiring(&self) -> Semiring;
    fn initial_states(&mut self) -> Vec<Self::State>;
    fn is_final(&self, q: &Self::State) -> bool;
    fn check_letter(&self, _letter: &Self::Letter) -> Result<(), AutomataError> {
        Ok(())
    }
    /// Appends the weighted successors of `q` on `letter` to `out`.
    fn successors(&mut self, q: &Self::State, letter: &Self::Letter, out: &mut Vec<(Self::State, Weight)>);
}

pub trait WeightedTreeAutomaton {
    type State: Clone + Eq + Hash;
    type Symbol;

    fn semiring(&self) -> Semiring;
    fn is_final(&self, q: &Self::State) -> bool;
    fn check_symbol(&self, _symbol: &Self::Symbol, _arity: usize) -> Result<(), AutomataError> {
        Ok(())
    }
    fn leaf(&mut self, symbol: &Self::Symbol, out: &mut Vec<(Self::State, Weight)>);
    fn unary(&mut self, symbol: &Self::Symbol, q: &Self::State, out: &mut Vec<(Self::State, Weight)>);
    fn binary(
        &mut self,
        symbol: &Self::Symbol,
        left: &Self::State,
        right: &Self::State,
        out: &mut Vec<(Self::State, Weight)>,
    );

    /// Binary case of the bottom-up evaluation. Automata with structure to
    /// exploit may override it; the result must be the same.
    fn combine(
        &mut self,
        symbol: &Self::Symbol,
        left: &StateVector<Self::State>,
        right: &StateVector<Self::State>,
    ) -> StateVector<Self::State> {
        pairwise_combine(self, symbol, left, right)
    }
}

/// The binary case of bottom-up evaluation over every pair of states,
/// with products taken as `left × weight × right`.
pub(crate) fn pairwise_combine<A: WeightedTreeAutomaton + ?Sized>(
    a: &mut A,
    symbol: &A::Symbol,
    left: &StateVector<A::State>,
    right: &StateVector<A::State>,
) -> StateVector<A::State> {
    let s = a.semiring();
    let mut next = StateVector::default();
    let mut out = Vec::new();
    for (q1, v1) in left {
        for (q2, v2) in right {
            out.clear();
            a.binary(symbol, q1, q2, &mut out);
            for (q, w) in out.drain(..) {
                let term = s.mul(&s.mul(v1, &w), v2);
                accumulate(s, &mut next, q, term);
            }
        }
    }
    next
}

fn accumulate<Q: Eq + Hash>(s: Semiring, v: &mut StateVector<Q>, q: Q, w: Weight) {
    match v.entry(q) {
        std::collections::hash_map::Entry::Occupied(mut e) => s.add_assign(e.get_mut(), &w),
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(w);
        }
    }
}

/// `w1 × w2`, skipping the product when `w2` is the unit.
fn times(s: Semiring, w1: &Weight, w2: &Weight, one: &Weight) -> Weight {
    if w2 == one {
        w1.clone()
    } else {
        s.mul(w1, w2)
    }
}

fn drop_zeros<Q>(s: Semiring, v: &mut StateVector<Q>) {
    v.retain(|_, w| !s.is_zero(w));
}

/// Sum over the weights of all accepting runs on `word`.
pub fn eval_word_automaton<A: WeightedWordAutomaton>(a: &mut A, word: &[A::Letter]) -> Result<Weight, AutomataError> {
    run_word_automaton(a, word).map(|(w, _)| w)
}

/// As [`eval_word_automaton`], also returning state-vector statistics.
pub fn run_word_automaton<A: WeightedWordAutomaton>(
    a: &mut A,
    word: &[A::Letter],
) -> Result<(Weight, EvalStats), AutomataError> {
    for letter in word {
        a.check_letter(letter)?;
    }
    let s = a.semiring();
    let one = s.one();
    let mut stats = EvalStats::default();
    let mut current: StateVector<A::State> = StateVector::default();
    for q in a.initial_states() {
        accumulate(s, &mut current, q, s.one());
    }
    stats.record(current.len());
    let mut out = Vec::new();
    for letter in word {
        let mut next = StateVector::default();
        for (q, v) in &current {
            out.clear();
            a.successors(q, letter, &mut out);
            for (q2, w) in out.drain(..) {
                accumulate(s, &mut next, q2, times(s, v, &w, &one));
            }
        }
        drop_zeros(s, &mut next);
        stats.record(next.len());
        current = next;
    }
    Ok((final_sum(a.semiring(), &current, |q| a.is_final(q)), stats))
}

fn final_sum<Q>(s: Semiring, v: &StateVector<Q>, is_final: impl Fn(&Q) -> bool) -> Weight {
    s.sum(v.iter().filter(|(q, _)| is_final(q)).map(|(_, w)| w))
}

/// Bottom-up evaluation of a ranked term: the sum over accepting runs.
pub fn tree_eval<A: WeightedTreeAutomaton>(a: &mut A, term: &RankedTerm<A::Symbol>) -> Result<Weight, AutomataError> {
    run_tree_automaton(a, term).map(|(w, _)| w)
}

/// As [`tree_eval`], also returning state-vector statistics.
pub fn run_tree_automaton<A: WeightedTreeAutomaton>(
    a: &mut A,
    term: &RankedTerm<A::Symbol>,
) -> Result<(Weight, EvalStats), AutomataError> {
    for node in term.nodes() {
        a.check_symbol(node.symbol(), node.children().count())?;
    }
    let s = a.semiring();
    let one = s.one();
    let mut stats = EvalStats::default();
    let mut vals: Vec<Option<StateVector<A::State>>> = (0..term.len()).map(|_| None).collect();
    let mut out = Vec::new();
    for (i, node) in term.nodes().iter().enumerate() {
        let mut val = StateVector::default();
        match node {
            TermNode::Leaf(sym) => {
                out.clear();
                a.leaf(sym, &mut out);
                for (q, w) in out.drain(..) {
                    accumulate(s, &mut val, q, w);
                }
            }
            TermNode::Unary(sym, c) => {
                let child = vals[*c].take().expect("children precede parents");
                for (q1, v1) in &child {
                    out.clear();
                    a.unary(sym, q1, &mut out);
                    for (q, w) in out.drain(..) {
                        accumulate(s, &mut val, q, times(s, v1, &w, &one));
                    }
                }
            }
            TermNode::Binary(sym, l, r) => {
                let left = vals[*l].take().expect("children precede parents");
                let right = vals[*r].take().expect("children precede parents");
                val = a.combine(sym, &left, &right);
            }
        }
        drop_zeros(s, &mut val);
        stats.record(val.len());
        vals[i] = Some(val);
    }
    let root = vals[term.root()].take().expect("root evaluated");
    Ok((final_sum(s, &root, |q| a.is_final(q)), stats))
}
