//! Weighted tiling systems, runs, and the enumerative evaluator.

use std::collections::{HashMap, HashSet};

use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::{Direction, EdgeName, Graph, Label, NameSet, Signature, VertexId, VertexType};
use crate::semiring::{Semiring, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WtsError {
    #[error("state index {0} is outside the state set")]
    UnknownState(usize),
    #[error("unknown state `{0}`")]
    UnknownStateName(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("no states declared")]
    NoStates,
    #[error("tile uses an edge name or label outside the signature: {0}")]
    OutsideSignature(String),
    #[error("duplicate tile {0}")]
    DuplicateTile(String),
    #[error("weight {weight:?} is not an element of {semiring}")]
    BadWeight { weight: Weight, semiring: String },
    #[error("graph signature does not match the tiling system signature")]
    SignatureMismatch,
    #[error("labeling has {found} entries for a graph with {expected} vertices")]
    LabelingLength { expected: usize, found: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("enumeration budget of {budget} labelings exceeded")]
    BudgetExceeded { budget: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u16);

/// A partial map from edge names to states, kept sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NameMap(SmallVec<[(EdgeName, StateId); 2]>);

impl NameMap {
    pub fn new() -> Self {
        NameMap::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (EdgeName, StateId)>>(pairs: I) -> Self {
        let mut m = NameMap::new();
        for (n, q) in pairs {
            m.set(n, q);
        }
        m
    }

    pub fn get(&self, name: EdgeName) -> Option<StateId> {
        self.0.iter().find(|(n, _)| *n == name).map(|(_, q)| *q)
    }

    pub fn set(&mut self, name: EdgeName, q: StateId) {
        match self.0.binary_search_by_key(&name, |(n, _)| *n) {
            Ok(i) => self.0[i].1 = q,
            Err(i) => self.0.insert(i, (name, q)),
        }
    }

    pub fn with(&self, name: EdgeName, q: StateId) -> NameMap {
        let mut m = self.clone();
        m.set(name, q);
        m
    }

    pub fn domain(&self) -> NameSet {
        self.0.iter().fold(NameSet::EMPTY, |s, (n, _)| s.with(*n))
    }

    pub fn contains(&self, name: EdgeName) -> bool {
        self.get(name).is_some()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeName, StateId)> + '_ {
        self.0.iter().copied()
    }

    /// True if every entry of `self` also occurs in `other`.
    pub fn is_restriction_of(&self, other: &NameMap) -> bool {
        self.0.iter().all(|(n, q)| other.get(*n) == Some(*q))
    }

    /// Union of two maps with disjoint domains; `None` if the domains overlap.
    pub fn disjoint_union(&self, other: &NameMap) -> Option<NameMap> {
        if self.domain().0 & other.domain().0 != 0 {
            return None;
        }
        let mut m = self.clone();
        for (n, q) in other.iter() {
            m.set(n, q);
        }
        Some(m)
    }
}

/// A tile `(f_in, q, a, f_out)`. The same type also serves as a partial tile
/// when the two maps cover only part of a vertex type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub f_in: NameMap,
    pub state: StateId,
    pub label: Label,
    pub f_out: NameMap,
}

impl Tile {
    pub fn new(f_in: NameMap, state: StateId, label: Label, f_out: NameMap) -> Self {
        Tile {
            f_in,
            state,
            label,
            f_out,
        }
    }

    /// `(f_∅, q, a, f_∅)`.
    pub fn bare(state: StateId, label: Label) -> Self {
        Tile::new(NameMap::new(), state, label, NameMap::new())
    }

    pub fn vertex_type(&self) -> VertexType {
        VertexType {
            incoming: self.f_in.domain(),
            outgoing: self.f_out.domain(),
        }
    }

    /// True if `self` is a subtile of `other`: same state and label, and both
    /// maps are restrictions of the corresponding maps of `other`.
    pub fn is_subtile_of(&self, other: &Tile) -> bool {
        self.state == other.state
            && self.label == other.label
            && self.f_in.is_restriction_of(&other.f_in)
            && self.f_out.is_restriction_of(&other.f_out)
    }
}

/// A state labeling of a graph's vertices, indexed by vertex id.
pub type Labeling = Vec<StateId>;

/// A weighted tiling system `(Q, Δ, wgt)` over a signature and a semiring.
#[derive(Clone, Debug)]
pub struct Wts {
    signature: Signature,
    semiring: Semiring,
    states: Vec<String>,
    tiles: Vec<(Tile, Weight)>,
    index: HashMap<Tile, usize>,
    // (state, label) -> tiles with a nonzero weight
    nonzero_by_head: HashMap<(StateId, Label), Vec<usize>>,
    // (state, label, type) -> listed tiles of that type
    by_head_and_type: HashMap<(StateId, Label, VertexType), Vec<usize>>,
}

impl Wts {
    pub fn new(
        signature: Signature,
        semiring: Semiring,
        states: Vec<String>,
        tiles: Vec<(Tile, Weight)>,
    ) -> Result<Wts, WtsError> {
        if states.is_empty() {
            return Err(WtsError::NoStates);
        }
        let mut seen = HashSet::new();
        for s in &states {
            if !seen.insert(s.as_str()) {
                return Err(WtsError::DuplicateState(s.clone()));
            }
        }
        let mut wts = Wts {
            signature,
            semiring,
            states,
            tiles: Vec::with_capacity(tiles.len()),
            index: HashMap::with_capacity(tiles.len()),
            nonzero_by_head: HashMap::new(),
            by_head_and_type: HashMap::new(),
        };
        for (tile, weight) in tiles {
            wts.check_tile(&tile)?;
            if !semiring.check(&weight) {
                return Err(WtsError::BadWeight {
                    weight,
                    semiring: semiring.id().to_string(),
                });
            }
            if wts.index.contains_key(&tile) {
                return Err(WtsError::DuplicateTile(wts.describe_tile(&tile)));
            }
            let i = wts.tiles.len();
            wts.index.insert(tile.clone(), i);
            if !semiring.is_zero(&weight) {
                wts.nonzero_by_head.entry((tile.state, tile.label)).or_default().push(i);
            }
            wts.by_head_and_type
                .entry((tile.state, tile.label, tile.vertex_type()))
                .or_default()
                .push(i);
            wts.tiles.push((tile, weight));
        }
        Ok(wts)
    }

    fn check_tile(&self, t: &Tile) -> Result<(), WtsError> {
        let q = self.states.len();
        let bad_state = |s: StateId| (s.0 as usize) >= q;
        if bad_state(t.state) {
            return Err(WtsError::UnknownState(t.state.0 as usize));
        }
        if !self.signature.has_label(t.label) {
            return Err(WtsError::OutsideSignature(format!("label index {}", t.label.0)));
        }
        for (name, s) in t.f_in.iter().chain(t.f_out.iter()) {
            if !self.signature.has_edge_name(name) {
                return Err(WtsError::OutsideSignature(format!("edge name index {}", name.0)));
            }
            if bad_state(s) {
                return Err(WtsError::UnknownState(s.0 as usize));
            }
        }
        Ok(())
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u16).map(StateId)
    }

    pub fn state(&self, name: &str) -> Result<StateId, WtsError> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u16))
            .ok_or_else(|| WtsError::UnknownStateName(name.to_string()))
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0 as usize]
    }

    pub fn tiles(&self) -> &[(Tile, Weight)] {
        &self.tiles
    }

    pub fn contains_tile(&self, t: &Tile) -> bool {
        self.index.contains_key(t)
    }

    /// The weight of a listed tile; `None` if the tile is not listed.
    pub fn tile_weight(&self, t: &Tile) -> Option<&Weight> {
        self.index.get(t).map(|&i| &self.tiles[i].1)
    }

    /// Weight with unlisted tiles counted as zero.
    pub fn weight_or_zero(&self, t: &Tile) -> Weight {
        self.tile_weight(t).cloned().unwrap_or_else(|| self.semiring.zero())
    }

    /// True if `partial` extends to some listed tile of nonzero weight.
    pub fn is_extendable(&self, partial: &Tile) -> bool {
        self.nonzero_by_head
            .get(&(partial.state, partial.label))
            .is_some_and(|ids| ids.iter().any(|&i| partial.is_subtile_of(&self.tiles[i].0)))
    }

    /// True if `partial` extends to some listed tile of exactly type `ty`.
    pub fn is_extendable_to_type(&self, partial: &Tile, ty: VertexType) -> bool {
        self.by_head_and_type
            .get(&(partial.state, partial.label, ty))
            .is_some_and(|ids| ids.iter().any(|&i| partial.is_subtile_of(&self.tiles[i].0)))
    }

    pub fn describe_tile(&self, t: &Tile) -> String {
        let map = |m: &NameMap| {
            m.iter()
                .map(|(n, q)| format!("{}:{}", self.signature.edge_name_str(n), self.states[q.0 as usize]))
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "([{}], {}, {}, [{}])",
            map(&t.f_in),
            self.states.get(t.state.0 as usize).map_or("?", String::as_str),
            self.signature
                .sigma()
                .get(t.label.0 as usize)
                .map_or("?", String::as_str),
            map(&t.f_out)
        )
    }

    pub fn check_graph(&self, g: &Graph) -> Result<(), WtsError> {
        if g.signature() != &self.signature {
            return Err(WtsError::SignatureMismatch);
        }
        Ok(())
    }

    /// Copy of this system with one more tile.
    pub fn with_tile(&self, tile: Tile, weight: Weight) -> Result<Wts, WtsError> {
        let mut tiles = self.tiles.clone();
        tiles.push((tile, weight));
        Wts::new(self.signature.clone(), self.semiring, self.states.clone(), tiles)
    }
}

fn check_labeling(g: &Graph, rho: &[StateId]) -> Result<(), WtsError> {
    if rho.len() != g.num_vertices() {
        return Err(WtsError::LabelingLength {
            expected: g.num_vertices(),
            found: rho.len(),
        });
    }
    Ok(())
}

/// The tile of `v` under the labeling `rho`.
pub fn tile_of(g: &Graph, rho: &[StateId], v: VertexId) -> Result<Tile, WtsError> {
    check_labeling(g, rho)?;
    if v >= g.num_vertices() {
        return Err(WtsError::UnknownVertex(v));
    }
    Ok(tile_at(g, rho, v))
}

fn tile_at(g: &Graph, rho: &[StateId], v: VertexId) -> Tile {
    let mut f_in = NameMap::new();
    let mut f_out = NameMap::new();
    for name in g.signature().edge_names() {
        if let Some(u) = g.neighbor(v, name, Direction::In) {
            f_in.set(name, rho[u]);
        }
        if let Some(u) = g.neighbor(v, name, Direction::Out) {
            f_out.set(name, rho[u]);
        }
    }
    Tile::new(f_in, rho[v], g.label(v), f_out)
}

/// True iff every vertex's tile is a listed tile.
pub fn is_run(t: &Wts, g: &Graph, rho: &[StateId]) -> Result<bool, WtsError> {
    check_labeling(g, rho)?;
    Ok(g.vertices().all(|v| t.contains_tile(&tile_at(g, rho, v))))
}

/// Product of the tile weights; a labeling that is not a run weighs `0_S`.
pub fn run_weight(t: &Wts, g: &Graph, rho: &[StateId]) -> Result<Weight, WtsError> {
    check_labeling(g, rho)?;
    run_weight_in_order(t, g, rho, g.vertices())
}

/// [`run_weight`] with the product taken in a caller-chosen vertex order.
pub fn run_weight_in_order<I: IntoIterator<Item = VertexId>>(
    t: &Wts,
    g: &Graph,
    rho: &[StateId],
    order: I,
) -> Result<Weight, WtsError> {
    check_labeling(g, rho)?;
    let s = t.semiring();
    let mut acc = s.one();
    for v in order {
        match t.tile_weight(&tile_at(g, rho, v)) {
            Some(w) => acc = s.mul(&acc, w),
            None => return Ok(s.zero()),
        }
    }
    Ok(acc)
}

pub const DEFAULT_BRUTE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug)]
pub struct BruteOptions {
    /// Maximum number of (partial) labelings visited before refusing.
    pub budget: u64,
    /// Cut off a partial labeling as soon as some vertex's partial tile
    /// cannot be completed to a listed tile of its type.
    pub prune: bool,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions {
            budget: DEFAULT_BRUTE_BUDGET,
            prune: true,
        }
    }
}

/// `⟦T⟧(G)`: the sum over all runs of their weights, with default options.
pub fn eval_brute(t: &Wts, g: &Graph) -> Result<Weight, WtsError> {
    eval_brute_with(t, g, BruteOptions::default())
}

/// Enumerates labelings in lexicographic order (vertex 0 most significant).
///
/// Without pruning every one of the `|Q|^|V|` labelings is visited and the
/// budget bounds that count up front. With pruning the same order is used,
/// but a prefix is abandoned once an assigned vertex's partial tile has no
/// listed completion; such prefixes only extend to non-runs. The budget then
/// bounds the number of visited prefixes.
pub fn eval_brute_with(t: &Wts, g: &Graph, opts: BruteOptions) -> Result<Weight, WtsError> {
    t.check_graph(g)?;
    let n = g.num_vertices();
    let s = t.semiring();
    if n == 0 {
        return Ok(s.one());
    }
    let q = t.num_states() as u64;
    if !opts.prune {
        let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(q).filter(|&x| x <= opts.budget));
        if total.is_none() {
            return Err(WtsError::BudgetExceeded { budget: opts.budget });
        }
        let mut rho = vec![StateId(0); n];
        let mut sum = s.zero();
        loop {
            let w = run_weight(t, g, &rho)?;
            s.add_assign(&mut sum, &w);
            // mixed-radix increment, last vertex least significant
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(sum);
                }
                i -= 1;
                if (rho[i].0 as u64) + 1 < q {
                    rho[i].0 += 1;
                    break;
                }
                rho[i] = StateId(0);
            }
        }
    }
    let mut search = PrunedSearch {
        t,
        g,
        types: g.vertices().map(|v| g.type_of(v)).collect(),
        neighbors: g.adjacency(),
        rho: vec![None; n],
        visited: 0,
        budget: opts.budget,
        sum: s.zero(),
    };
    search.descend(0)?;
    Ok(search.sum)
}

struct PrunedSearch<'a> {
    t: &'a Wts,
    g: &'a Graph,
    types: Vec<VertexType>,
    neighbors: Vec<Vec<VertexId>>,
    rho: Vec<Option<StateId>>,
    visited: u64,
    budget: u64,
    sum: Weight,
}

impl PrunedSearch<'_> {
    fn partial_tile(&self, v: VertexId) -> Tile {
        let mut f_in = NameMap::new();
        let mut f_out = NameMap::new();
        for name in self.g.signature().edge_names() {
            if let Some(q) = self.g.neighbor(v, name, Direction::In).and_then(|u| self.rho[u]) {
                f_in.set(name, q);
            }
            if let Some(q) = self.g.neighbor(v, name, Direction::Out).and_then(|u| self.rho[u]) {
                f_out.set(name, q);
            }
        }
        Tile::new(f_in, self.rho[v].expect("assigned"), self.g.label(v), f_out)
    }

    fn consistent(&self, v: VertexId) -> bool {
        std::iter::once(v)
            .chain(self.neighbors[v].iter().copied())
            .filter(|&u| self.rho[u].is_some())
            .all(|u| self.t.is_extendable_to_type(&self.partial_tile(u), self.types[u]))
    }

    fn descend(&mut self, v: VertexId) -> Result<(), WtsError> {
        if v == self.rho.len() {
            let rho: Labeling = self.rho.iter().map(|q| q.expect("complete")).collect();
            let w = run_weight(self.t, self.g, &rho)?;
            self.t.semiring().add_assign(&mut self.sum, &w);
            return Ok(());
        }
        for q in self.t.state_ids() {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(WtsError::BudgetExceeded { budget: self.budget });
            }
            self.rho[v] = Some(q);
            if self.consistent(v) {
                self.descend(v + 1)?;
            }
        }
        self.rho[v] = None;
        Ok(())
    }
}
