use crate::graph::{Edge, EdgeName, Graph, Label, Signature};
use crate::semiring::{Semiring, SemiringId};
use crate::wts::{StateId, Tile, Wts};

use super::{all_types, enumerate_tiles, GenError};

const NEXT: EdgeName = EdgeName(0);
const Q0: StateId = StateId(0);
const Q1: StateId = StateId(1);
const Q2: StateId = StateId(2);

fn path_signature() -> Signature {
    Signature::new(["next"], ["0", "1"]).expect("valid signature")
}

/// Binary digits of `n`, most significant first; `0` is `"0"`.
pub fn nat_to_bits(n: u64) -> String {
    format!("{n:b}")
}

/// A directed path with one vertex per bit, most significant first.
pub fn nat_to_path_graph(bits: &str) -> Result<Graph, GenError> {
    if bits.is_empty() {
        return Err(GenError::EmptyBits);
    }
    let labels = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(Label(0)),
            '1' => Ok(Label(1)),
            _ => Err(GenError::BadBit(c)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let edges: Vec<Edge> = (1..labels.len())
        .map(|v| Edge {
            name: NEXT,
            src: v - 1,
            dst: v,
        })
        .collect();
    Ok(Graph::build(path_signature(), labels, &edges)?)
}

/// Natural-number tiling system counting, on a bit path, the number it
/// spells.
///
/// A run labels a prefix ending at a 1 with `q0` and the remaining suffix
/// freely with `q1`/`q2`, so a 1 at distance `i` from the end contributes
/// `2^i` runs.
pub fn binary_path_wts() -> Wts {
    let sig = path_signature();
    let s = Semiring::new(SemiringId::Natural);
    let tiles = enumerate_tiles(&sig, 3, &all_types(&[NEXT]), |t: &Tile| {
        let prev = t.f_in.get(NEXT);
        let next = t.f_out.get(NEXT);
        let free = |q: Option<StateId>| q.is_none_or(|q| q == Q1 || q == Q2);
        let ok = if t.state == Q0 {
            prev.is_none_or(|p| p == Q0) && (next == Some(Q0) || (t.label == Label(1) && free(next)))
        } else {
            prev.is_some() && free(next)
        };
        ok.then(|| s.one())
    });
    Wts::new(sig, s, ["q0", "q1", "q2"].map(String::from).to_vec(), tiles).expect("valid tiling system")
}
