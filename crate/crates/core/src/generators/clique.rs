use crate::graph::{grid_signature, EdgeName, Label};
use crate::semiring::{Semiring, SemiringId};
use crate::wts::{StateId, Tile, Wts};

use super::{all_types, enumerate_tiles};

const BOTH: StateId = StateId(0);
const COLUMN: StateId = StateId(1);
const ROW: StateId = StateId(2);
const NEITHER: StateId = StateId(3);

fn row_selected(q: StateId) -> bool {
    q == BOTH || q == ROW
}

fn column_selected(q: StateId) -> bool {
    q == BOTH || q == COLUMN
}

/// Max-plus tiling system whose value on [`crate::graph::triangular_grid`]
/// is the clique number of the encoded graph.
///
/// A diagonal cell selects its vertex (`plus`) or not (`empty`). The choice
/// travels along the vertex's row and column; an off-diagonal cell records
/// which of its row and column vertices are selected and must be labelled 1
/// when both are. Each selected vertex contributes weight 1.
pub fn clique_wts() -> Wts {
    let sig = grid_signature(["0", "1"]).expect("valid signature");
    let s = Semiring::new(SemiringId::MaxPlusNat);
    let right = EdgeName(0);
    let down = EdgeName(1);
    let one_label = Label(1);
    let types = all_types(&[right, down]);
    let tiles = enumerate_tiles(&sig, 4, &types, |t: &Tile| {
        let diagonal = t.f_in.is_empty();
        if diagonal {
            if t.label != one_label || !(t.state == BOTH || t.state == NEITHER) {
                return None;
            }
            let w = if t.state == BOTH { 1 } else { 0 };
            return s.from_i64(w);
        }
        let (left, below) = (t.f_in.get(right)?, t.f_in.get(down)?);
        let ok = row_selected(left) == row_selected(t.state)
            && column_selected(below) == column_selected(t.state)
            && (t.state != BOTH || t.label == one_label);
        ok.then(|| s.one())
    });
    Wts::new(
        sig,
        s,
        ["plus", "vminus", "minus", "empty"].map(String::from).to_vec(),
        tiles,
    )
    .expect("valid tiling system")
}
