use std::collections::{BTreeMap, HashMap, VecDeque};

use serde_json::{json, Value};

use super::bk::{omega_k, render_op, BkState, LazyBk};
use super::{AutomataError, WeightedTreeAutomaton, WeightedWordAutomaton};
use crate::decomp::{KSymbol, Op};
use crate::graph::Signature;
use crate::semiring::{Semiring, Weight};
use crate::wts::Wts;

pub const DEFAULT_MATERIALIZE_BUDGET: usize = 1_000_000;

/// Square matrix over a semiring with zero entries omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    semiring: Semiring,
    n: usize,
    entries: BTreeMap<(usize, usize), Weight>,
}

impl SparseMatrix {
    pub fn zero(semiring: Semiring, n: usize) -> Self {
        SparseMatrix {
            semiring,
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(semiring: Semiring, n: usize) -> Self {
        let entries = (0..n).map(|i| ((i, i), semiring.one())).collect();
        SparseMatrix { semiring, n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Weight {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| self.semiring.zero())
    }

    pub fn add_entry(&mut self, i: usize, j: usize, w: &Weight) {
        let s = self.semiring;
        let e = self.entries.entry((i, j)).or_insert_with(|| s.zero());
        s.add_assign(e, w);
        if s.is_zero(e) {
            self.entries.remove(&(i, j));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Weight)> {
        self.entries.iter()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let s = self.semiring;
        let mut rows: Vec<Vec<(usize, &Weight)>> = vec![Vec::new(); other.n];
        for (&(k, j), w) in &other.entries {
            rows[k].push((j, w));
        }
        let mut out = SparseMatrix::zero(s, self.n);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &rows[k] {
                out.add_entry(i, j, &s.mul(a, b));
            }
        }
        out
    }
}

/// A word automaton with an explicit state set and transition list.
#[derive(Clone, Debug)]
pub struct ExplicitWordAutomaton {
    semiring: Semiring,
    states: Vec<String>,
    initial: Vec<usize>,
    finals: Vec<bool>,
    transitions: Vec<(usize, Op, usize, Weight)>,
    by_source: HashMap<(usize, Op), Vec<usize>>,
}

impl ExplicitWordAutomaton {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn transitions(&self) -> &[(usize, Op, usize, Weight)] {
        &self.transitions
    }

    /// The matrix μ(letter).
    pub fn letter_matrix(&self, letter: &Op) -> SparseMatrix {
        let mut m = SparseMatrix::zero(self.semiring, self.num_states());
        for i in 0..self.num_states() {
            for &t in self.by_source.get(&(i, *letter)).into_iter().flatten() {
                let (_, _, j, ref w) = self.transitions[t];
                m.add_entry(i, j, w);
            }
        }
        m
    }

    /// μ(w) as the product of the letter matrices.
    pub fn word_matrix(&self, word: &[Op]) -> SparseMatrix {
        word.iter()
            .fold(SparseMatrix::identity(self.semiring, self.num_states()), |acc, a| {
                acc.mul(&self.letter_matrix(a))
            })
    }

    pub fn to_json(&self, signature: &Signature) -> Value {
        let finals: Vec<usize> = (0..self.num_states()).filter(|&i| self.finals[i]).collect();
        let transitions: Vec<Value> = self
            .transitions
            .iter()
            .map(|(from, op, to, w)| {
                json!({"from": from, "letter": render_op(signature, op), "to": to, "weight": self.semiring.render(w)})
            })
            .collect();
        json!({"states": self.states, "initial": self.initial, "final": finals, "transitions": transitions})
    }
}

impl WeightedWordAutomaton for ExplicitWordAutomaton {
    type State = usize;
    type Letter = Op;

    fn semiring(&self) -> Semiring {
        self.semiring
    }

    fn initial_states(&mut self) -> Vec<usize> {
        self.initial.clone()
    }

    fn is_final(&self, q: &usize) -> bool {
        self.finals[*q]
    }

    fn successors(&mut self, q: &usize, letter: &Op, out: &mut Vec<(usize, Weight)>) {
        for &t in self.by_source.get(&(*q, *letter)).into_iter().flatten() {
            let (_, _, j, ref w) = self.transitions[t];
            out.push((j, w.clone()));
        }
    }
}

/// Reachable states of `B_k` from the empty map over all of Ω_k, with
/// pruned partial tiles excluded.
pub fn materialize_word_bk(wts: &Wts, k: usize, budget: usize) -> Result<ExplicitWordAutomaton, AutomataError> {
    let mut bk = LazyBk::new(wts, k);
    let letters = omega_k(wts.signature(), k);
    let mut states: Vec<BkState> = vec![bk.empty_state()];
    let mut index: HashMap<BkState, usize> = HashMap::from([(bk.empty_state(), 0)]);
    let mut transitions = Vec::new();
    let mut by_source: HashMap<(usize, Op), Vec<usize>> = HashMap::new();
    let mut queue = VecDeque::from([0usize]);
    let mut out = Vec::new();
    while let Some(i) = queue.pop_front() {
        for letter in &letters {
            out.clear();
            let from = states[i].clone();
            bk.op_successors(&from, letter, &mut out);
            for (next, w) in out.drain(..) {
                let j = *index.entry(next.clone()).or_insert_with(|| {
                    states.push(next);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                if states.len() > budget || transitions.len() >= budget {
                    return Err(AutomataError::BudgetExceeded { budget });
                }
                by_source.entry((i, *letter)).or_default().push(transitions.len());
                transitions.push((i, *letter, j, w));
            }
        }
    }
    let names = states.iter().map(|q| bk.decode(q).encode(wts)).collect();
    let finals = states.iter().map(|q| q.iter().all(|&id| id == u32::MAX)).collect();
    Ok(ExplicitWordAutomaton {
        semiring: wts.semiring(),
        states: names,
        initial: vec![0],
        finals,
        transitions,
        by_source,
    })
}

/// A tree automaton with explicit leaf, unary and binary transitions.
#[derive(Clone, Debug)]
pub struct ExplicitTreeAutomaton {
    semiring: Semiring,
    states: Vec<String>,
    finals: Vec<bool>,
    leaf: Vec<(Op, usize, Weight)>,
    unary: Vec<(usize, Op, usize, Weight)>,
    binary: Vec<(usize, usize, usize, Weight)>,
    leaf_index: HashMap<Op, Vec<usize>>,
    unary_index: HashMap<(usize, Op), Vec<usize>>,
    binary_index: HashMap<(usize, usize), Vec<usize>>,
}

impl ExplicitTreeAutomaton {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn num_transitions(&self) -> usize {
        self.leaf.len() + self.unary.len() + self.binary.len()
    }

    pub fn to_json(&self, signature: &Signature) -> Value {
        let s = self.semiring;
        let finals: Vec<usize> = (0..self.num_states()).filter(|&i| self.finals[i]).collect();
        let mut transitions = Vec::new();
        for (op, to, w) in &self.leaf {
            transitions.push(json!({"from": [], "letter": render_op(signature, op), "to": to, "weight": s.render(w)}));
        }
        for (from, op, to, w) in &self.unary {
            transitions
                .push(json!({"from": [from], "letter": render_op(signature, op), "to": to, "weight": s.render(w)}));
        }
        for (l, r, to, w) in &self.binary {
            transitions.push(json!({"from": [l, r], "letter": "union", "to": to, "weight": s.render(w)}));
        }
        json!({"states": self.states, "initial": [], "final": finals, "transitions": transitions})
    }
}

impl WeightedTreeAutomaton for ExplicitTreeAutomaton {
    type State = usize;
    type Symbol = KSymbol;

    fn semiring(&self) -> Semiring {
        self.semiring
    }

    fn is_final(&self, q: &usize) -> bool {
        self.finals[*q]
    }

    fn leaf(&mut self, symbol: &KSymbol, out: &mut Vec<(usize, Weight)>) {
        if let KSymbol::Op(op) = symbol {
            for &t in self.leaf_index.get(op).into_iter().flatten() {
                out.push((self.leaf[t].1, self.leaf[t].2.clone()));
            }
        }
    }

    fn unary(&mut self, symbol: &KSymbol, q: &usize, out: &mut Vec<(usize, Weight)>) {
        if let KSymbol::Op(op) = symbol {
            for &t in self.unary_index.get(&(*q, *op)).into_iter().flatten() {
                out.push((self.unary[t].2, self.unary[t].3.clone()));
            }
        }
    }

    fn binary(&mut self, symbol: &KSymbol, left: &usize, right: &usize, out: &mut Vec<(usize, Weight)>) {
        if *symbol == KSymbol::Union {
            for &t in self.binary_index.get(&(*left, *right)).into_iter().flatten() {
                out.push((self.binary[t].2, self.binary[t].3.clone()));
            }
        }
    }
}

/// Closure of the leaf transitions of `B_k` under its unary and binary
/// transitions. Pairs of states tried at `⊕` also count against the budget.
pub fn materialize_tree_bk(wts: &Wts, k: usize, budget: usize) -> Result<ExplicitTreeAutomaton, AutomataError> {
    let mut bk = LazyBk::new(wts, k);
    let letters = omega_k(wts.signature(), k);
    let mut states: Vec<BkState> = Vec::new();
    let mut index: HashMap<BkState, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut a = ExplicitTreeAutomaton {
        semiring: wts.semiring(),
        states: Vec::new(),
        finals: Vec::new(),
        leaf: Vec::new(),
        unary: Vec::new(),
        binary: Vec::new(),
        leaf_index: HashMap::new(),
        unary_index: HashMap::new(),
        binary_index: HashMap::new(),
    };
    let mut work = 0usize;
    let mut intern =
        |q: BkState, states: &mut Vec<BkState>, queue: &mut VecDeque<usize>| -> Result<usize, AutomataError> {
            if let Some(&i) = index.get(&q) {
                return Ok(i);
            }
            if states.len() >= budget {
                return Err(AutomataError::BudgetExceeded { budget });
            }
            index.insert(q.clone(), states.len());
            states.push(q);
            queue.push_back(states.len() - 1);
            Ok(states.len() - 1)
        };
    let mut out = Vec::new();
    let empty = bk.empty_state();
    for op in letters.iter().filter(|op| matches!(op, Op::Node { .. })) {
        out.clear();
        bk.op_successors(&empty, op, &mut out);
        for (q, w) in out.drain(..) {
            let to = intern(q, &mut states, &mut queue)?;
            a.leaf_index.entry(*op).or_default().push(a.leaf.len());
            a.leaf.push((*op, to, w));
        }
    }
    while let Some(i) = queue.pop_front() {
        for op in letters.iter().filter(|op| !matches!(op, Op::Node { .. })) {
            out.clear();
            let from = states[i].clone();
            bk.op_successors(&from, op, &mut out);
            for (q, w) in out.drain(..) {
                let to = intern(q, &mut states, &mut queue)?;
                a.unary_index.entry((i, *op)).or_default().push(a.unary.len());
                a.unary.push((i, *op, to, w));
            }
        }
        // pair the new state with every state discovered so far, both ways
        for j in 0..=i {
            let pairs: &[(usize, usize)] = if i == j { &[(i, i)] } else { &[(i, j), (j, i)] };
            for &(l, r) in pairs {
                work += 1;
                if work > budget.saturating_mul(64) || a.binary.len() >= budget {
                    return Err(AutomataError::BudgetExceeded { budget });
                }
                let (ql, qr) = (states[l].clone(), states[r].clone());
                if let Some(q) = bk.union_successor(&ql, &qr) {
                    let to = intern(q, &mut states, &mut queue)?;
                    a.binary_index.entry((l, r)).or_default().push(a.binary.len());
                    a.binary.push((l, r, to, wts.semiring().one()));
                }
            }
        }
    }
    a.states = states.iter().map(|q| bk.decode(q).encode(wts)).collect();
    a.finals = states.iter().map(|q| q.iter().all(|&id| id == u32::MAX)).collect();
    Ok(a)
}
