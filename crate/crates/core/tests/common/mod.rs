//! Reference computations written independently of the library's own
//! oracles and evaluators.
#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wts_core::automata::WeightedTreeAutomaton;
use wts_core::decomp::*;
use wts_core::generators::random_instance;
use wts_core::term::{RankedTerm, TermBuilder, TermNode};
use wts_core::wts::NameMap;
use wts_core::{Graph, Label, Semiring, SemiringId, Signature, StateId, Tile, VertexId, Weight, Wts};

/// Permanent by Ryser's inclusion-exclusion formula.
pub fn ryser(matrix: &[Vec<u64>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::from(0);
    for mask in 1u32..1 << n {
        let mut product = BigInt::from(1);
        for row in matrix {
            let s: u64 = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| row[j]).sum();
            product *= s;
        }
        let sign = if (n - mask.count_ones() as usize).is_multiple_of(2) {
            1
        } else {
            -1
        };
        total += product * sign;
    }
    total
}

pub fn ryser_bool(matrix: &[Vec<bool>]) -> BigInt {
    ryser(
        &matrix
            .iter()
            .map(|r| r.iter().map(|&b| b as u64).collect())
            .collect::<Vec<_>>(),
    )
}

/// Largest clique by branching on the lowest remaining candidate.
pub fn max_clique(adj: &[Vec<bool>]) -> usize {
    fn grow(adj: &[Vec<bool>], size: usize, candidates: Vec<usize>) -> usize {
        let mut best = size;
        for (i, &v) in candidates.iter().enumerate() {
            let rest: Vec<usize> = candidates[i + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
            best = best.max(grow(adj, size + 1, rest));
        }
        best
    }
    grow(adj, 0, (0..adj.len()).collect())
}

/// Model count by splitting on variables and simplifying clauses.
pub fn count_models(num_vars: usize, clauses: &[Vec<i32>]) -> u64 {
    fn go(var: i32, num_vars: i32, clauses: Vec<Vec<i32>>) -> u64 {
        if clauses.iter().any(|c| c.is_empty()) {
            return 0;
        }
        if var > num_vars {
            return 1;
        }
        [var, -var]
            .iter()
            .map(|&lit| {
                let reduced = clauses
                    .iter()
                    .filter(|c| !c.contains(&lit))
                    .map(|c| c.iter().copied().filter(|&l| l != -lit).collect())
                    .collect();
                go(var + 1, num_vars, reduced)
            })
            .sum()
    }
    go(1, num_vars as i32, clauses.to_vec())
}

/// Sum over every labeling of the product of its tile weights, unlisted
/// tiles weighing zero.
pub fn all_runs(t: &Wts, g: &Graph) -> Weight {
    let s = t.semiring();
    let n = g.num_vertices();
    let q = t.num_states();
    let mut rho = vec![0usize; n];
    let mut total = s.zero();
    loop {
        let mut w = s.one();
        for v in g.vertices() {
            let f_in = NameMap::from_pairs(
                g.edges()
                    .filter(|e| e.dst == v)
                    .map(|e| (e.name, StateId(rho[e.src] as u16))),
            );
            let f_out = NameMap::from_pairs(
                g.edges()
                    .filter(|e| e.src == v)
                    .map(|e| (e.name, StateId(rho[e.dst] as u16))),
            );
            let tile = Tile::new(f_in, StateId(rho[v] as u16), g.label(v), f_out);
            match t.tile_weight(&tile) {
                Some(x) => w = s.mul(&w, x),
                None => {
                    w = s.zero();
                    break;
                }
            }
        }
        total = s.add(&total, &w);
        let mut i = 0;
        loop {
            if i == n {
                return total;
            }
            rho[i] += 1;
            if rho[i] < q {
                break;
            }
            rho[i] = 0;
            i += 1;
        }
    }
}

pub fn int(s: Semiring, n: i64) -> Weight {
    s.from_i64(n).expect("representable")
}

pub fn big(s: Semiring, n: BigInt) -> Weight {
    s.parse(&n.to_string()).expect("representable")
}

/// A five-vertex graph A..E with edges AB, BC, AD, BE, AE, DC, CE, BD;
/// its clique number is 3.
pub fn five_vertex_graph() -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; 5]; 5];
    for (a, b) in [(0, 1), (1, 2), (0, 3), (1, 4), (0, 4), (3, 2), (2, 4), (1, 3)] {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    adj
}

/// A 5 x 5 0/1 matrix used as a fixed permanent example.
pub fn five_by_five() -> Vec<Vec<bool>> {
    [
        [1, 1, 1, 1, 1],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 1, 1],
        [0, 1, 1, 0, 0],
        [0, 0, 0, 1, 0],
    ]
    .iter()
    .map(|r| r.iter().map(|&x| x == 1).collect())
    .collect()
}

/// Symbols of the small ranked alphabet used for generic tree automata:
/// leaves `0..LEAVES`, then unary, then binary symbols.
pub const LEAVES: u8 = 2;
pub const UNARIES: u8 = 2;
pub const BINARIES: u8 = 2;

/// A weighted tree automaton given by full transition tables.
pub struct TableAutomaton {
    pub semiring: Semiring,
    pub states: usize,
    pub finals: Vec<bool>,
    /// `leaf[a][q]`
    pub leaf: Vec<Vec<Weight>>,
    /// `unary[f][q1][q]`
    pub unary: Vec<Vec<Vec<Weight>>>,
    /// `binary[g][q1][q2][q]`
    pub binary: Vec<Vec<Vec<Vec<Weight>>>>,
}

impl TableAutomaton {
    pub fn random<R: Rng>(rng: &mut R, semiring: Semiring, states: usize) -> Self {
        let w = |rng: &mut R| semiring.random_weight(rng);
        let leaf = (0..LEAVES).map(|_| (0..states).map(|_| w(rng)).collect()).collect();
        let unary = (0..UNARIES)
            .map(|_| (0..states).map(|_| (0..states).map(|_| w(rng)).collect()).collect())
            .collect();
        let binary = (0..BINARIES)
            .map(|_| {
                (0..states)
                    .map(|_| (0..states).map(|_| (0..states).map(|_| w(rng)).collect()).collect())
                    .collect()
            })
            .collect();
        let finals = (0..states).map(|_| rng.gen_bool(0.5)).collect();
        TableAutomaton {
            semiring,
            states,
            finals,
            leaf,
            unary,
            binary,
        }
    }

    /// Sum over every state assignment to the nodes of `term` of the
    /// product of its transition weights, for accepting root states.
    pub fn all_runs(&self, term: &RankedTerm<u8>) -> Weight {
        let s = self.semiring;
        let n = term.len();
        let mut rho = vec![0usize; n];
        let mut total = s.zero();
        loop {
            if self.finals[rho[term.root()]] {
                let mut w = s.one();
                for (i, node) in term.nodes().iter().enumerate() {
                    let t = match *node {
                        TermNode::Leaf(a) => &self.leaf[a as usize][rho[i]],
                        TermNode::Unary(f, c) => &self.unary[(f - LEAVES) as usize][rho[c]][rho[i]],
                        TermNode::Binary(g, l, r) => {
                            &self.binary[(g - LEAVES - UNARIES) as usize][rho[l]][rho[r]][rho[i]]
                        }
                    };
                    w = s.mul(&w, t);
                }
                total = s.add(&total, &w);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return total;
                }
                rho[i] += 1;
                if rho[i] < self.states {
                    break;
                }
                rho[i] = 0;
                i += 1;
            }
        }
    }
}

impl WeightedTreeAutomaton for TableAutomaton {
    type State = usize;
    type Symbol = u8;

    fn semiring(&self) -> Semiring {
        self.semiring
    }

    fn is_final(&self, q: &usize) -> bool {
        self.finals[*q]
    }

    fn leaf(&mut self, a: &u8, out: &mut Vec<(usize, Weight)>) {
        out.extend(self.leaf[*a as usize].iter().cloned().enumerate());
    }

    fn unary(&mut self, f: &u8, q: &usize, out: &mut Vec<(usize, Weight)>) {
        out.extend(self.unary[(f - LEAVES) as usize][*q].iter().cloned().enumerate());
    }

    fn binary(&mut self, g: &u8, l: &usize, r: &usize, out: &mut Vec<(usize, Weight)>) {
        out.extend(
            self.binary[(g - LEAVES - UNARIES) as usize][*l][*r]
                .iter()
                .cloned()
                .enumerate(),
        );
    }
}

/// A random term with exactly `size` nodes over the table alphabet.
pub fn random_term<R: Rng>(rng: &mut R, size: usize) -> RankedTerm<u8> {
    fn build<R: Rng>(rng: &mut R, size: usize, b: &mut TermBuilder<u8>) -> usize {
        match size {
            1 => b.leaf(rng.gen_range(0..LEAVES)),
            2 => {
                let c = build(rng, 1, b);
                b.unary(LEAVES + rng.gen_range(0..UNARIES), c)
            }
            _ if rng.gen_bool(0.4) => {
                let c = build(rng, size - 1, b);
                b.unary(LEAVES + rng.gen_range(0..UNARIES), c)
            }
            _ => {
                let left = rng.gen_range(1..size - 1);
                let l = build(rng, left, b);
                let r = build(rng, size - 1 - left, b);
                b.binary(LEAVES + UNARIES + rng.gen_range(0..BINARIES), l, r)
            }
        }
    }
    let mut b = TermBuilder::new();
    let root = build(rng, size.max(1), &mut b);
    b.finish(root).expect("children precede parents")
}

fn ensure(ok: bool, what: &str) -> Result<(), String> {
    ok.then_some(()).ok_or_else(|| what.to_string())
}

/// A random well-formed k-word whose graph respects the degree bounds.
pub fn random_kword(seed: u64, k: usize, len: usize) -> KWord {
    let sig = Signature::new(["a", "b"], ["x", "y"]).unwrap();
    let names: Vec<_> = sig.edge_names().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut active = vec![false; k + 1];
    let mut used = HashSet::new();
    let mut ops = Vec::new();
    for _ in 0..len {
        let colored: Vec<usize> = (0..=k).filter(|&c| active[c]).collect();
        let free: Vec<usize> = (0..=k).filter(|&c| !active[c]).collect();
        let choice = rng.gen_range(0..3);
        if choice == 0 && !free.is_empty() {
            let c = *free.choose(&mut rng).unwrap();
            active[c] = true;
            used.retain(|&(_, v, _)| v != c);
            ops.push(Op::Node {
                color: c,
                label: Label(rng.gen_range(0..2)),
            });
        } else if choice == 1 && colored.len() >= 2 {
            let pair: Vec<_> = colored.choose_multiple(&mut rng, 2).copied().collect();
            let name = *names.choose(&mut rng).unwrap();
            if !used.contains(&(name, pair[0], true)) && !used.contains(&(name, pair[1], false)) {
                used.insert((name, pair[0], true));
                used.insert((name, pair[1], false));
                ops.push(Op::Add {
                    name,
                    src: pair[0],
                    dst: pair[1],
                });
            }
        } else if !colored.is_empty() {
            let c = *colored.choose(&mut rng).unwrap();
            active[c] = false;
            ops.push(Op::Forget { color: c });
        }
    }
    KWord::new(k, ops)
}

/// Path decomposition to k-word and back to an isomorphic graph.
pub fn kword_round_trip(g: &Graph, pd: &PathDecomposition) -> Result<(), String> {
    let width = validate_path_decomposition(g, pd).map_err(|e| e.to_string())?;
    let c = kword_from_path_decomposition(g, pd).map_err(|e| e.to_string())?;
    ensure(c.term.k <= width, "k-word wider than its decomposition")?;
    ensure(is_well_formed_kword(&c.term).is_ok(), "k-word is ill-formed")?;
    let cg = kword_semantics(g.signature(), &c.term).map_err(|e| e.to_string())?;
    ensure(
        verify_correspondence(g, &cg, &c.correspondence),
        "k-word denotes another graph",
    )?;
    ensure(!cg.has_active_colors(), "k-word leaves colors active")
}

/// k-word to path decomposition of its own graph, no wider than k.
pub fn path_round_trip(w: &KWord) -> Result<(), String> {
    ensure(is_well_formed_kword(w).is_ok(), "k-word is ill-formed")?;
    let sig = Signature::new(["a", "b"], ["x", "y"]).unwrap();
    let cg = kword_semantics(&sig, w).map_err(|e| e.to_string())?;
    let pd = path_decomposition_from_kword(w).map_err(|e| e.to_string())?;
    if cg.graph.is_empty() {
        return ensure(pd.bags.iter().all(|b| b.is_empty()), "bags of an empty graph");
    }
    let width = validate_path_decomposition(&cg.graph, &pd).map_err(|e| e.to_string())?;
    ensure(width <= w.k, "decomposition wider than k")
}

/// An order bounded by k yields a k-word with colors in `0..=k` for the
/// same graph, and k is the least such bound.
pub fn order_coherence(g: &Graph, order: &[VertexId]) -> Result<(), String> {
    let k = linearization_width(g, order).map_err(|e| e.to_string())?;
    ensure(
        check_k_bounded(g, order, k).map_err(|e| e.to_string())?,
        "order not k-bounded at its width",
    )?;
    if k > 0 {
        ensure(
            !check_k_bounded(g, order, k - 1).map_err(|e| e.to_string())?,
            "width is not minimal",
        )?;
    }
    let c = kword_from_linearization_with(g, order, k).map_err(|e| e.to_string())?;
    let in_range = c.term.ops.iter().all(|op| match *op {
        Op::Node { color, .. } | Op::Forget { color } => color <= k,
        Op::Add { src, dst, .. } => src <= k && dst <= k,
    });
    ensure(c.term.k <= k && in_range, "colors exceed the bound")?;
    ensure(is_well_formed_kword(&c.term).is_ok(), "k-word is ill-formed")?;
    let cg = kword_semantics(g.signature(), &c.term).map_err(|e| e.to_string())?;
    ensure(
        verify_correspondence(g, &cg, &c.correspondence),
        "k-word denotes another graph",
    )
}

/// Tree decomposition to k-tree-term and back to an isomorphic graph.
pub fn ktt_round_trip(g: &Graph, td: &TreeDecomposition) -> Result<(), String> {
    let width = validate_tree_decomposition(g, td).map_err(|e| e.to_string())?;
    let c = ktt_from_tree_decomposition(g, td).map_err(|e| e.to_string())?;
    ensure(c.term.k <= width, "term wider than its decomposition")?;
    ensure(is_well_formed_ktt(&c.term).is_ok(), "term is ill-formed")?;
    let cg = ktt_semantics(g.signature(), &c.term).map_err(|e| e.to_string())?;
    ensure(
        verify_correspondence(g, &cg, &c.correspondence),
        "term denotes another graph",
    )?;
    ensure(!cg.has_active_colors(), "term leaves colors active")
}

/// All round trips on one seeded random instance.
pub fn decomposition_round_trips(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_instance(&mut rng, Semiring::new(SemiringId::Boolean), 10, 1, 3);
    let g = &inst.graph;
    kword_round_trip(g, &inst.path)?;
    let (order, _) = heuristic_linear_order(g);
    kword_round_trip(g, &path_decomposition_from_order(g, &order).map_err(|e| e.to_string())?)?;
    let mut shuffled: Vec<VertexId> = g.vertices().collect();
    shuffled.shuffle(&mut rng);
    order_coherence(g, &order)?;
    order_coherence(g, &shuffled)?;
    ktt_round_trip(g, &inst.tree)?;
    ktt_round_trip(g, &heuristic_tree_decomposition(g, None).map_err(|e| e.to_string())?)?;
    let k = rng.gen_range(0..4);
    let len = rng.gen_range(0..40);
    path_round_trip(&random_kword(rng.gen(), k, len))
}
