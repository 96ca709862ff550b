use std::collections::HashMap;

use smallvec::SmallVec;

use super::{accumulate, pairwise_combine, AutomataError, StateVector, WeightedTreeAutomaton, WeightedWordAutomaton};
use crate::decomp::{Color, KSymbol, Op};
use crate::graph::{EdgeName, Label, Signature};
use crate::semiring::{Semiring, Weight};
use crate::wts::{StateId, Tile, Wts};

/// Marks a color without a tile in a [`BkState`].
const NONE: u32 = u32::MAX;

/// A state of `B_k`: for each color `0..=k`, the id of its partial tile in
/// the automaton's tile table, or `u32::MAX`.
pub type BkState = SmallVec<[u32; 6]>;

/// A partial map from colors to partial tiles, in color order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialTileMap(pub Vec<Option<Tile>>);

impl PartialTileMap {
    pub fn empty(k: usize) -> Self {
        PartialTileMap(vec![None; k + 1])
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(Option::is_none)
    }

    /// Canonical text form, entries in increasing color order.
    pub fn encode(&self, wts: &Wts) -> String {
        let entries: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter_map(|(c, t)| t.as_ref().map(|t| format!("{c}: {}", wts.describe_tile(t))))
            .collect();
        format!("{{{}}}", entries.join(", "))
    }
}

/// Every letter of Ω_k over a signature.
pub fn omega_k(signature: &Signature, k: usize) -> Vec<Op> {
    let mut letters = Vec::new();
    for color in 0..=k {
        for label in signature.labels() {
            letters.push(Op::Node { color, label });
        }
    }
    for name in signature.edge_names() {
        for src in 0..=k {
            for dst in 0..=k {
                if src != dst {
                    letters.push(Op::Add { name, src, dst });
                }
            }
        }
    }
    letters.extend((0..=k).map(|color| Op::Forget { color }));
    letters
}

pub fn render_op(signature: &Signature, op: &Op) -> String {
    match *op {
        Op::Node { color, label } => format!("node({color},{})", signature.label_str(label)),
        Op::Add { name, src, dst } => format!("add({},{src},{dst})", signature.edge_name_str(name)),
        Op::Forget { color } => format!("forget({color})"),
    }
}

pub fn render_symbol(signature: &Signature, symbol: &KSymbol) -> String {
    match symbol {
        KSymbol::Op(op) => render_op(signature, op),
        KSymbol::Union => "union".to_string(),
    }
}

/// `B_k` built on demand: states are created only when a transition reaches
/// them. Partial tiles are interned, and with pruning enabled a partial tile
/// that extends to no listed tile of nonzero weight is discarded as soon as
/// it appears.
pub struct LazyBk<'w> {
    wts: &'w Wts,
    k: usize,
    prune: bool,
    tiles: Vec<Tile>,
    ids: HashMap<Tile, u32>,
    viable: Vec<bool>,
    extend_cache: HashMap<(u32, bool, EdgeName, StateId), Option<u32>>,
    union_cache: HashMap<(u32, u32), Option<u32>>,
    forget_cache: HashMap<u32, Option<Weight>>,
}

impl<'w> LazyBk<'w> {
    pub fn new(wts: &'w Wts, k: usize) -> Self {
        Self::with_pruning(wts, k, true)
    }

    pub fn with_pruning(wts: &'w Wts, k: usize, prune: bool) -> Self {
        LazyBk {
            wts,
            k,
            prune,
            tiles: Vec::new(),
            ids: HashMap::new(),
            viable: Vec::new(),
            extend_cache: HashMap::new(),
            union_cache: HashMap::new(),
            forget_cache: HashMap::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn wts(&self) -> &'w Wts {
        self.wts
    }

    /// Number of distinct partial tiles seen so far.
    pub fn interned_tiles(&self) -> usize {
        self.tiles.len()
    }

    pub fn empty_state(&self) -> BkState {
        SmallVec::from_elem(NONE, self.k + 1)
    }

    pub fn decode(&self, state: &BkState) -> PartialTileMap {
        PartialTileMap(
            state
                .iter()
                .map(|&id| (id != NONE).then(|| self.tiles[id as usize].clone()))
                .collect(),
        )
    }

    /// Inverse of [`decode`](Self::decode). Fails if the map has the wrong
    /// length or a tile would be pruned.
    pub fn encode(&mut self, map: &PartialTileMap) -> Option<BkState> {
        if map.0.len() != self.k + 1 {
            return None;
        }
        let mut state = self.empty_state();
        for (c, t) in map.0.iter().enumerate() {
            if let Some(t) = t {
                state[c] = self.intern_viable(t.clone())?;
            }
        }
        Some(state)
    }

    fn intern_viable(&mut self, t: Tile) -> Option<u32> {
        let id = match self.ids.get(&t) {
            Some(&id) => id,
            None => {
                let id = self.tiles.len() as u32;
                self.viable.push(!self.prune || self.wts.is_extendable(&t));
                self.ids.insert(t.clone(), id);
                self.tiles.push(t);
                id
            }
        };
        self.viable[id as usize].then_some(id)
    }

    fn extend(&mut self, id: u32, outgoing: bool, name: EdgeName, q: StateId) -> Option<u32> {
        let key = (id, outgoing, name, q);
        if let Some(&r) = self.extend_cache.get(&key) {
            return r;
        }
        let t = &self.tiles[id as usize];
        let side = if outgoing { &t.f_out } else { &t.f_in };
        let r = if side.contains(name) {
            None
        } else {
            let mut t = t.clone();
            if outgoing {
                t.f_out.set(name, q);
            } else {
                t.f_in.set(name, q);
            }
            self.intern_viable(t)
        };
        self.extend_cache.insert(key, r);
        r
    }

    fn merge(&mut self, a: u32, b: u32) -> Option<u32> {
        if let Some(&r) = self.union_cache.get(&(a, b)) {
            return r;
        }
        let (ta, tb) = (&self.tiles[a as usize], &self.tiles[b as usize]);
        let r = if ta.state != tb.state || ta.label != tb.label {
            None
        } else {
            match (ta.f_in.disjoint_union(&tb.f_in), ta.f_out.disjoint_union(&tb.f_out)) {
                (Some(f_in), Some(f_out)) => {
                    let t = Tile::new(f_in, ta.state, ta.label, f_out);
                    self.intern_viable(t)
                }
                _ => None,
            }
        };
        self.union_cache.insert((a, b), r);
        r
    }

    fn forget_weight(&mut self, id: u32) -> Option<Weight> {
        if let Some(w) = self.forget_cache.get(&id) {
            return w.clone();
        }
        let s = self.wts.semiring();
        let w = self
            .wts
            .tile_weight(&self.tiles[id as usize])
            .filter(|w| !s.is_zero(w))
            .cloned();
        self.forget_cache.insert(id, w.clone());
        w
    }

    fn color_ok(&self, c: Color) -> bool {
        c <= self.k
    }

    pub fn check_op(&self, op: &Op) -> Result<(), AutomataError> {
        let sig = self.wts.signature();
        let ok = match *op {
            Op::Node { color, label } => self.color_ok(color) && sig.has_label(label),
            Op::Add { name, src, dst } => self.color_ok(src) && self.color_ok(dst) && sig.has_edge_name(name),
            Op::Forget { color } => self.color_ok(color),
        };
        if ok {
            Ok(())
        } else {
            Err(AutomataError::Alphabet(format!("{op:?} (k = {})", self.k)))
        }
    }

    /// Successors on a single letter. Transitions on `(i,a)` and `Add` have
    /// weight `1_S`; `Forget_i` has the weight of the completed tile.
    pub fn op_successors(&mut self, state: &BkState, op: &Op, out: &mut Vec<(BkState, Weight)>) {
        let one = || self.wts.semiring().one();
        match *op {
            Op::Node { color, label } => {
                if state[color] != NONE {
                    return;
                }
                for q in self.wts.state_ids() {
                    if let Some(id) = self.intern_viable(Tile::bare(q, label)) {
                        let mut next = state.clone();
                        next[color] = id;
                        out.push((next, one()));
                    }
                }
            }
            Op::Add { name, src, dst } => {
                let (a, b) = (state[src], state[dst]);
                if src == dst || a == NONE || b == NONE {
                    return;
                }
                let (qa, qb) = (self.tiles[a as usize].state, self.tiles[b as usize].state);
                let Some(na) = self.extend(a, true, name, qb) else {
                    return;
                };
                let Some(nb) = self.extend(b, false, name, qa) else {
                    return;
                };
                let mut next = state.clone();
                next[src] = na;
                next[dst] = nb;
                out.push((next, one()));
            }
            Op::Forget { color } => {
                let id = state[color];
                if id == NONE {
                    return;
                }
                if let Some(w) = self.forget_weight(id) {
                    let mut next = state.clone();
                    next[color] = NONE;
                    out.push((next, w));
                }
            }
        }
    }

    /// Successor of `⊕`: colors present on both sides must carry tiles with
    /// the same state and label and disjoint edge-name domains.
    pub fn union_successor(&mut self, left: &BkState, right: &BkState) -> Option<BkState> {
        let mut next = left.clone();
        for c in 0..=self.k {
            match (left[c], right[c]) {
                (NONE, b) => next[c] = b,
                (_, NONE) => {}
                (a, b) => next[c] = self.merge(a, b)?,
            }
        }
        Some(next)
    }

    fn head(&self, id: u32) -> (StateId, Label) {
        let t = &self.tiles[id as usize];
        (t.state, t.label)
    }
}

impl WeightedWordAutomaton for LazyBk<'_> {
    type State = BkState;
    type Letter = Op;

    fn semiring(&self) -> Semiring {
        self.wts.semiring()
    }

    fn initial_states(&mut self) -> Vec<BkState> {
        vec![self.empty_state()]
    }

    fn is_final(&self, q: &BkState) -> bool {
        q.iter().all(|&id| id == NONE)
    }

    fn check_letter(&self, letter: &Op) -> Result<(), AutomataError> {
        self.check_op(letter)
    }

    fn successors(&mut self, q: &BkState, letter: &Op, out: &mut Vec<(BkState, Weight)>) {
        self.op_successors(q, letter, out);
    }
}

impl WeightedTreeAutomaton for LazyBk<'_> {
    type State = BkState;
    type Symbol = KSymbol;

    fn semiring(&self) -> Semiring {
        self.wts.semiring()
    }

    fn is_final(&self, q: &BkState) -> bool {
        q.iter().all(|&id| id == NONE)
    }

    fn check_symbol(&self, symbol: &KSymbol, arity: usize) -> Result<(), AutomataError> {
        match (symbol, arity) {
            (KSymbol::Op(op @ Op::Node { .. }), 0) | (KSymbol::Op(op @ (Op::Add { .. } | Op::Forget { .. })), 1) => {
                self.check_op(op)
            }
            (KSymbol::Union, 2) => Ok(()),
            _ => Err(AutomataError::Alphabet(format!("{symbol:?} with {arity} children"))),
        }
    }

    fn leaf(&mut self, symbol: &KSymbol, out: &mut Vec<(BkState, Weight)>) {
        if let KSymbol::Op(op @ Op::Node { .. }) = symbol {
            let empty = self.empty_state();
            self.op_successors(&empty, op, out);
        }
    }

    fn unary(&mut self, symbol: &KSymbol, q: &BkState, out: &mut Vec<(BkState, Weight)>) {
        if let KSymbol::Op(op) = symbol {
            self.op_successors(q, op, out);
        }
    }

    fn binary(&mut self, symbol: &KSymbol, left: &BkState, right: &BkState, out: &mut Vec<(BkState, Weight)>) {
        if *symbol == KSymbol::Union {
            if let Some(next) = self.union_successor(left, right) {
                out.push((next, self.wts.semiring().one()));
            }
        }
    }

    /// Groups the right operand by the (state, label) pairs on the shared
    /// colors so that only compatible pairs are merged.
    fn combine(
        &mut self,
        symbol: &KSymbol,
        left: &StateVector<BkState>,
        right: &StateVector<BkState>,
    ) -> StateVector<BkState> {
        let mut next = StateVector::default();
        if *symbol != KSymbol::Union || left.is_empty() || right.is_empty() {
            return next;
        }
        let domain = |q: &BkState| q.iter().map(|&id| id != NONE).collect::<SmallVec<[bool; 6]>>();
        let (dl, dr) = (
            domain(left.keys().next().unwrap()),
            domain(right.keys().next().unwrap()),
        );
        if left.keys().any(|q| domain(q) != dl) || right.keys().any(|q| domain(q) != dr) {
            return pairwise_combine(self, symbol, left, right);
        }
        let shared: SmallVec<[usize; 6]> = (0..=self.k).filter(|&c| dl[c] && dr[c]).collect();
        let key = |this: &Self, q: &BkState| shared.iter().map(|&c| this.head(q[c])).collect::<SmallVec<[_; 6]>>();
        let mut buckets: HashMap<_, Vec<(&BkState, &Weight)>> = HashMap::new();
        for (q, w) in right {
            buckets.entry(key(self, q)).or_default().push((q, w));
        }
        let s = self.wts.semiring();
        for (q1, v1) in left {
            let Some(bucket) = buckets.get(&key(self, q1)) else {
                continue;
            };
            for &(q2, v2) in bucket {
                if let Some(q) = self.union_successor(q1, q2) {
                    accumulate(s, &mut next, q, s.mul(v1, v2));
                }
            }
        }
        next
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Signature;
    use crate::semiring::SemiringId;
    use crate::wts::NameMap;

    fn two_state_wts() -> Wts {
        let sig = Signature::new(["e"], ["a"]).unwrap();
        let s = Semiring::new(SemiringId::Natural);
        let (p, q, a, e) = (StateId(0), StateId(1), Label(0), EdgeName(0));
        let tiles = vec![
            (Tile::bare(p, a), s.from_i64(3).unwrap()),
            (
                Tile::new(NameMap::new(), p, a, NameMap::from_pairs([(e, q)])),
                s.from_i64(2).unwrap(),
            ),
            (
                Tile::new(NameMap::from_pairs([(e, p)]), q, a, NameMap::new()),
                s.from_i64(5).unwrap(),
            ),
        ];
        Wts::new(sig, s, vec!["p".into(), "q".into()], tiles).unwrap()
    }

    #[test]
    fn node_creates_one_state_per_q() {
        let t = two_state_wts();
        let mut b = LazyBk::with_pruning(&t, 1, false);
        let mut out = Vec::new();
        let empty = b.empty_state();
        b.op_successors(
            &empty,
            &Op::Node {
                color: 0,
                label: Label(0),
            },
            &mut out,
        );
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|(_, w)| *w == t.semiring().one()));
    }

    #[test]
    fn forget_weighs_the_completed_tile() {
        let t = two_state_wts();
        let mut b = LazyBk::new(&t, 0);
        let map = PartialTileMap(vec![Some(Tile::bare(StateId(0), Label(0)))]);
        let state = b.encode(&map).unwrap();
        let mut out = Vec::new();
        b.op_successors(&state, &Op::Forget { color: 0 }, &mut out);
        assert_eq!(out, vec![(b.empty_state(), t.semiring().from_i64(3).unwrap())]);
    }

    #[test]
    fn forget_of_unlisted_tile_is_pruned() {
        let t = two_state_wts();
        let mut b = LazyBk::with_pruning(&t, 0, false);
        let map = PartialTileMap(vec![Some(Tile::bare(StateId(1), Label(0)))]);
        let state = b.encode(&map).unwrap();
        let mut out = Vec::new();
        b.op_successors(&state, &Op::Forget { color: 0 }, &mut out);
        assert!(out.is_empty());
    }

    #[test]
    fn add_needs_distinct_colors_and_fresh_names() {
        let t = two_state_wts();
        let mut b = LazyBk::with_pruning(&t, 1, false);
        let map = PartialTileMap(vec![
            Some(Tile::bare(StateId(0), Label(0))),
            Some(Tile::bare(StateId(1), Label(0))),
        ]);
        let state = b.encode(&map).unwrap();
        let mut out = Vec::new();
        b.op_successors(
            &state,
            &Op::Add {
                name: EdgeName(0),
                src: 0,
                dst: 0,
            },
            &mut out,
        );
        assert!(out.is_empty());
        b.op_successors(
            &state,
            &Op::Add {
                name: EdgeName(0),
                src: 0,
                dst: 1,
            },
            &mut out,
        );
        assert_eq!(out.len(), 1);
        let after = out.pop().unwrap().0;
        b.op_successors(
            &after,
            &Op::Add {
                name: EdgeName(0),
                src: 0,
                dst: 1,
            },
            &mut out,
        );
        assert!(out.is_empty());
        let decoded = b.decode(&after);
        assert_eq!(decoded.0[0].as_ref().unwrap().f_out.get(EdgeName(0)), Some(StateId(1)));
        assert_eq!(decoded.0[1].as_ref().unwrap().f_in.get(EdgeName(0)), Some(StateId(0)));
    }

    #[test]
    fn union_guards() {
        let t = two_state_wts();
        let mut b = LazyBk::with_pruning(&t, 0, false);
        let p = b
            .encode(&PartialTileMap(vec![Some(Tile::bare(StateId(0), Label(0)))]))
            .unwrap();
        let q = b
            .encode(&PartialTileMap(vec![Some(Tile::bare(StateId(1), Label(0)))]))
            .unwrap();
        assert!(b.union_successor(&p, &q).is_none());
        let e = EdgeName(0);
        let with_in = |q: StateId| Tile::new(NameMap::from_pairs([(e, q)]), StateId(1), Label(0), NameMap::new());
        let x = b.encode(&PartialTileMap(vec![Some(with_in(StateId(0)))])).unwrap();
        let y = b.encode(&PartialTileMap(vec![Some(with_in(StateId(1)))])).unwrap();
        assert!(b.union_successor(&x, &y).is_none());
        assert_eq!(b.union_successor(&q, &x), Some(x.clone()));
    }

    #[test]
    fn pruning_drops_dead_partial_tiles() {
        let t = two_state_wts();
        let mut b = LazyBk::new(&t, 0);
        // q never occurs without an incoming edge, but (∅,q,a,∅) is a subtile
        // of a listed tile, so it survives
        assert!(b
            .encode(&PartialTileMap(vec![Some(Tile::bare(StateId(1), Label(0)))]))
            .is_some());
        let dead = Tile::new(
            NameMap::new(),
            StateId(1),
            Label(0),
            NameMap::from_pairs([(EdgeName(0), StateId(0))]),
        );
        assert!(b.encode(&PartialTileMap(vec![Some(dead)])).is_none());
    }

    #[test]
    fn alphabet() {
        let t = two_state_wts();
        assert_eq!(omega_k(t.signature(), 1).len(), 2 + 2 + 2);
        let b = LazyBk::new(&t, 1);
        assert!(b.check_op(&Op::Forget { color: 2 }).is_err());
        assert!(b
            .check_op(&Op::Node {
                color: 0,
                label: Label(3)
            })
            .is_err());
        assert_eq!(
            render_op(
                t.signature(),
                &Op::Add {
                    name: EdgeName(0),
                    src: 0,
                    dst: 1
                }
            ),
            "add(e,0,1)"
        );
    }
}
