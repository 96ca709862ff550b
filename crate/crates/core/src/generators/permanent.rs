use crate::graph::{grid_signature, Edge, EdgeName, Graph, Label, NameSet, Signature, VertexType};
use crate::semiring::{Semiring, SemiringId};
use crate::wts::{NameMap, StateId, Tile, Wts};

use super::{all_types, enumerate_tiles, nat_to_bits, GenError};

const RIGHT: EdgeName = EdgeName(0);
const DOWN: EdgeName = EdgeName(1);

/// The selected cell of its row and column.
const CIRCLE: StateId = StateId(0);
const PERMANENT_STATES: [&str; 5] = ["O", "nwse", "nesw", "senw", "swne"];

/// Where a cell's row and column selections lie, as (up, right).
fn pointer(q: StateId) -> Option<(bool, bool)> {
    match q.0 {
        1 => Some((true, true)),
        2 => Some((false, true)),
        3 => Some((false, false)),
        4 => Some((true, false)),
        _ => None,
    }
}

/// Known boundary flags of a grid cell; `None` when a neighbour's tile
/// cannot tell.
#[derive(Clone, Copy)]
struct Position {
    first_row: Option<bool>,
    last_row: Option<bool>,
    first_col: Option<bool>,
    last_col: Option<bool>,
}

impl Position {
    fn of(ty: VertexType) -> Self {
        Position {
            first_row: Some(!ty.incoming.contains(DOWN)),
            last_row: Some(!ty.outgoing.contains(DOWN)),
            first_col: Some(!ty.incoming.contains(RIGHT)),
            last_col: Some(!ty.outgoing.contains(RIGHT)),
        }
    }

    fn left(self) -> Self {
        Position {
            first_col: None,
            last_col: Some(false),
            ..self
        }
    }

    fn right(self) -> Self {
        Position {
            first_col: Some(false),
            last_col: None,
            ..self
        }
    }

    fn above(self) -> Self {
        Position {
            first_row: None,
            last_row: Some(false),
            ..self
        }
    }

    fn below(self) -> Self {
        Position {
            first_row: Some(false),
            last_row: None,
            ..self
        }
    }

    fn admits(self, q: StateId) -> bool {
        match pointer(q) {
            None => q == CIRCLE,
            Some((up, right)) => {
                let col_ok = if up {
                    self.first_row != Some(true)
                } else {
                    self.last_row != Some(true)
                };
                let row_ok = if right {
                    self.last_col != Some(true)
                } else {
                    self.first_col != Some(true)
                };
                col_ok && row_ok
            }
        }
    }
}

/// `u` immediately left of `v` in a row.
fn row_flow(u: StateId, v: StateId) -> bool {
    match (pointer(u), pointer(v)) {
        (None, Some((_, r))) => !r,
        (None, None) => false,
        (Some((_, false)), p) => matches!(p, Some((_, false))),
        (Some((_, true)), p) => p.is_none_or(|(_, r)| r),
    }
}

/// `u` immediately above `v` in a column.
fn column_flow(u: StateId, v: StateId) -> bool {
    match (pointer(u), pointer(v)) {
        (None, Some((up, _))) => up,
        (None, None) => false,
        (Some((true, _)), p) => matches!(p, Some((true, _))),
        (Some((false, _)), p) => p.is_none_or(|(up, _)| !up),
    }
}

/// Whether the grid part of `t` is consistent. Only the `right` and `down`
/// entries of its maps are inspected.
fn grid_tile_ok(t: &Tile) -> bool {
    let names = |m: &NameMap| {
        m.iter()
            .filter(|(n, _)| *n == RIGHT || *n == DOWN)
            .fold(NameSet::EMPTY, |s, (n, _)| s.with(n))
    };
    let pos = Position::of(VertexType {
        incoming: names(&t.f_in),
        outgoing: names(&t.f_out),
    });
    let q = t.state;
    pos.admits(q)
        && t.f_in.get(RIGHT).is_none_or(|u| pos.left().admits(u) && row_flow(u, q))
        && t.f_in
            .get(DOWN)
            .is_none_or(|u| pos.above().admits(u) && column_flow(u, q))
        && t.f_out
            .get(RIGHT)
            .is_none_or(|v| pos.right().admits(v) && row_flow(q, v))
        && t.f_out
            .get(DOWN)
            .is_none_or(|v| pos.below().admits(v) && column_flow(q, v))
}

/// Natural-number tiling system whose value on [`crate::graph::boolean_grid`]
/// is the permanent of the matrix.
///
/// The state `O` marks the one cell chosen in each row and column; every
/// other cell points towards the chosen cells of its row and column.
pub fn permanent_wts() -> Wts {
    let sig = grid_signature(["0", "1"]).expect("valid signature");
    let s = Semiring::new(SemiringId::Natural);
    let tiles = enumerate_tiles(&sig, PERMANENT_STATES.len(), &all_types(&[RIGHT, DOWN]), |t| {
        grid_tile_ok(t).then(|| {
            if t.state == CIRCLE && t.label == Label(0) {
                s.zero()
            } else {
                s.one()
            }
        })
    });
    Wts::new(sig, s, PERMANENT_STATES.map(String::from).to_vec(), tiles).expect("valid tiling system")
}

const ENTRY: EdgeName = EdgeName(2);
const NEXT: EdgeName = EdgeName(3);
const Q0: StateId = StateId(5);
const Q1: StateId = StateId(6);
const Q2: StateId = StateId(7);
const FROZEN: StateId = StateId(8);

fn path_tile_ok(t: &Tile) -> bool {
    let from_entry = t.f_in.get(ENTRY);
    let from_prev = t.f_in.get(NEXT);
    let next = t.f_out.get(NEXT);
    let is_grid = |q: StateId| q.0 < 5;
    match t.state {
        FROZEN => {
            let ok_in = match (from_entry, from_prev) {
                (Some(g), None) => is_grid(g) && g != CIRCLE,
                (None, Some(p)) => p == FROZEN,
                _ => false,
            };
            ok_in && next.is_none_or(|n| n == FROZEN)
        }
        Q0 => {
            let ok_in = matches!((from_entry, from_prev), (Some(CIRCLE), None) | (None, Some(Q0)));
            let ends_here = t.label == Label(2) && next.is_none_or(|n| n == Q1 || n == Q2);
            ok_in && (next == Some(Q0) || ends_here)
        }
        Q1 | Q2 => {
            from_entry.is_none() && matches!(from_prev, Some(Q0 | Q1 | Q2)) && next.is_none_or(|n| n == Q1 || n == Q2)
        }
        _ => false,
    }
}

/// A square natural matrix as a grid whose every cell carries a path
/// spelling its entry in binary, together with a tiling system whose value
/// is the permanent.
///
/// Grid cells are labelled `X` and reach their path through an `entry`
/// edge; path vertices are linked by `next`. Paths behind chosen cells are
/// counted as in [`super::binary_path_wts`], all others are frozen in `q4`.
pub fn natural_permanent_encoding(matrix: &[Vec<u64>]) -> Result<(Wts, Graph), GenError> {
    let n = matrix.len();
    if n == 0 || matrix.iter().any(|r| r.len() != n) {
        return Err(GenError::NotSquare);
    }
    let sig = Signature::new(["right", "down", "entry", "next"], ["X", "0", "1"])?;
    let s = Semiring::new(SemiringId::Natural);
    let mut labels = vec![Label(0); n * n];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = i * n + j;
            if j + 1 < n {
                edges.push(Edge {
                    name: RIGHT,
                    src: v,
                    dst: v + 1,
                });
            }
            if i + 1 < n {
                edges.push(Edge {
                    name: DOWN,
                    src: v,
                    dst: v + n,
                });
            }
            let mut prev = None;
            for bit in nat_to_bits(matrix[i][j]).chars() {
                let u = labels.len();
                labels.push(Label(if bit == '1' { 2 } else { 1 }));
                let (name, src) = prev.map_or((ENTRY, v), |p| (NEXT, p));
                edges.push(Edge { name, src, dst: u });
                prev = Some(u);
            }
        }
    }
    let graph = Graph::build(sig.clone(), labels, &edges)?;

    let grid_types = all_types(&[RIGHT, DOWN]).into_iter().map(|ty| VertexType {
        outgoing: ty.outgoing.with(ENTRY),
        ..ty
    });
    let path_types = [NameSet::EMPTY.with(ENTRY), NameSet::EMPTY.with(NEXT)]
        .into_iter()
        .flat_map(|incoming| {
            [NameSet::EMPTY, NameSet::EMPTY.with(NEXT)]
                .into_iter()
                .map(move |outgoing| VertexType { incoming, outgoing })
        });
    let grid_tiles = enumerate_tiles(&sig, 9, &grid_types.collect::<Vec<_>>(), |t| {
        let entry = t.f_out.get(ENTRY)?;
        let expected = if t.state == CIRCLE { Q0 } else { FROZEN };
        (t.state.0 < 5 && t.label == Label(0) && entry == expected && grid_tile_ok(t)).then(|| s.one())
    });
    let path_tiles = enumerate_tiles(&sig, 9, &path_types.collect::<Vec<_>>(), |t| {
        (t.label != Label(0) && path_tile_ok(t)).then(|| s.one())
    });
    let states = PERMANENT_STATES
        .iter()
        .chain(&["q0", "q1", "q2", "q4"])
        .map(|q| q.to_string())
        .collect();
    let wts = Wts::new(sig, s, states, grid_tiles.into_iter().chain(path_tiles).collect())?;
    Ok((wts, graph))
}
