use crate::graph::{grid_graph, grid_signature, EdgeName, Graph, Label};
use crate::semiring::{Semiring, SemiringId, Weight};
use crate::wts::{StateId, Tile, Wts};

use super::{all_types, enumerate_tiles, Cnf, GenError};

const RIGHT: EdgeName = EdgeName(0);
const DOWN: EdgeName = EdgeName(1);

#[derive(Clone, Copy, PartialEq, Eq)]
enum Literal {
    Pos,
    Neg,
    Absent,
}

impl Literal {
    fn of(label: Label) -> Self {
        match label.0 % 3 {
            0 => Literal::Pos,
            1 => Literal::Neg,
            _ => Literal::Absent,
        }
    }
}

/// An assignment/evaluation pair: the variable's value, and whether the
/// clause is known to be satisfied at this cell.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Pair {
    value: bool,
    sat: bool,
}

impl Pair {
    const ALL: [Pair; 4] = [
        Pair { value: true, sat: true },
        Pair {
            value: true,
            sat: false,
        },
        Pair {
            value: false,
            sat: true,
        },
        Pair {
            value: false,
            sat: false,
        },
    ];

    fn of(id: u16) -> Pair {
        Pair::ALL[id as usize % 4]
    }

    fn name(self) -> String {
        format!(
            "{}{}",
            if self.value { 'T' } else { 'F' },
            if self.sat { 't' } else { 'f' }
        )
    }
}

/// The evaluation rule of one grid cell. `left` is the left neighbour in
/// the same formula, `above` the cell above.
fn pair_ok(
    q: Pair,
    lit: Literal,
    left: Option<Pair>,
    above: Option<Pair>,
    right: Option<Pair>,
    last_row: bool,
) -> bool {
    let local = (lit == Literal::Pos && q.value) || (lit == Literal::Neg && !q.value);
    let column = local || above.is_some_and(|p| p.sat);
    let expected = if last_row {
        left.is_none_or(|p| p.sat) && column
    } else {
        column
    };
    let row_constant = left.is_none_or(|p| p.value == q.value) && right.is_none_or(|p| p.value == q.value);
    row_constant && q.sat == expected
}

fn check_formula(phi: &Cnf) -> Result<(), GenError> {
    if phi.num_vars == 0 || phi.clauses.is_empty() {
        return Err(GenError::EmptyFormula);
    }
    if let Some((clause, var)) = phi.tautology() {
        return Err(GenError::Tautology { clause, var });
    }
    Ok(())
}

fn cell_label(phi: &Cnf, var: usize, clause: usize) -> u16 {
    let v = var as i32 + 1;
    let c = &phi.clauses[clause];
    if c.contains(&v) {
        0
    } else if c.contains(&-v) {
        1
    } else {
        2
    }
}

/// The `n x m` grid of a formula with `n` variables and `m` clauses: cell
/// (i, j) is `p`, `n` or `*` as variable i occurs positively, negatively or
/// not at all in clause j.
pub fn cnf_to_grid(phi: &Cnf) -> Result<Graph, GenError> {
    check_formula(phi)?;
    let labels: Vec<Vec<Label>> = (0..phi.num_vars)
        .map(|i| (0..phi.clauses.len()).map(|j| Label(cell_label(phi, i, j))).collect())
        .collect();
    Ok(grid_graph(&["p", "n", "*"], &labels)?)
}

/// Natural-number tiling system whose value on [`cnf_to_grid`] is the number
/// of satisfying assignments.
///
/// Each row carries one truth value. A cell is marked satisfied when its
/// literal holds or the cell above is; in the last row the mark also
/// requires the left neighbour's, so the bottom-right cell is satisfied
/// exactly when every clause is.
pub fn sharp_sat_wts() -> Wts {
    let sig = grid_signature(["p", "n", "*"]).expect("valid signature");
    let s = Semiring::new(SemiringId::Natural);
    let tiles = enumerate_tiles(&sig, 4, &all_types(&[RIGHT, DOWN]), |t: &Tile| {
        let q = Pair::of(t.state.0);
        let at = |m: &crate::wts::NameMap, n| m.get(n).map(|x: StateId| Pair::of(x.0));
        let last_row = !t.f_out.contains(DOWN);
        let ok = pair_ok(
            q,
            Literal::of(t.label),
            at(&t.f_in, RIGHT),
            at(&t.f_in, DOWN),
            at(&t.f_out, RIGHT),
            last_row,
        );
        let last = last_row && !t.f_out.contains(RIGHT);
        ok.then(|| if last && !q.sat { s.zero() } else { s.one() })
    });
    let states = Pair::ALL.iter().map(|p| p.name()).collect();
    Wts::new(sig, s, states, tiles).expect("valid tiling system")
}

const SKIP1: u16 = 8;
const SKIP2: u16 = 9;

/// Which formula a gap run evaluates, and the formula a cell belongs to.
fn gap_mode_and_tag(q: StateId) -> (u8, u8) {
    match q.0 {
        SKIP1 => (2, 1),
        SKIP2 => (1, 2),
        id => {
            let tag = if id < 4 { 1 } else { 2 };
            (tag, tag)
        }
    }
}

fn gap_pair(q: StateId) -> Option<Pair> {
    (q.0 < SKIP1).then(|| Pair::of(q.0))
}

/// Integer tiling system whose value on [`gap_encoding`]'s grid is the
/// number of models of the first formula minus that of the second.
///
/// Each run evaluates one formula on its cells, as in [`sharp_sat_wts`],
/// and marks every cell of the other formula as skipped. The last cell of
/// each formula carries the sign.
pub fn gap_wts() -> Wts {
    let sig = grid_signature(["p1", "n1", "*1", "p2", "n2", "*2"]).expect("valid signature");
    let s = Semiring::new(SemiringId::Integer);
    let minus_one = s.from_i64(-1).expect("integer");
    let tiles = enumerate_tiles(&sig, 10, &all_types(&[RIGHT, DOWN]), |t: &Tile| -> Option<Weight> {
        let (mode, tag) = gap_mode_and_tag(t.state);
        if tag != (t.label.0 / 3 + 1) as u8 {
            return None;
        }
        if t.f_in
            .iter()
            .chain(t.f_out.iter())
            .any(|(_, u)| gap_mode_and_tag(u).0 != mode)
        {
            return None;
        }
        let tag_of = |u: StateId| gap_mode_and_tag(u).1;
        let left = t.f_in.get(RIGHT);
        let right = t.f_out.get(RIGHT);
        let vertical = t.f_in.get(DOWN).into_iter().chain(t.f_out.get(DOWN));
        let ordered = left.is_none_or(|u| tag_of(u) <= tag)
            && right.is_none_or(|u| tag_of(u) >= tag)
            && vertical.into_iter().all(|u| tag_of(u) == tag);
        if !ordered {
            return None;
        }
        let last_row = !t.f_out.contains(DOWN);
        let same = |u: Option<StateId>| u.filter(|&u| tag_of(u) == tag).and_then(gap_pair);
        let pair = gap_pair(t.state);
        if let Some(q) = pair {
            let above = t.f_in.get(DOWN).and_then(gap_pair);
            if !pair_ok(q, Literal::of(t.label), same(left), above, same(right), last_row) {
                return None;
            }
        }
        let formula_end = last_row && right.is_none_or(|u| tag_of(u) != tag);
        if !formula_end {
            return Some(s.one());
        }
        Some(match (tag, pair) {
            (_, None) => s.one(),
            (_, Some(q)) if !q.sat => s.zero(),
            (1, Some(_)) => s.one(),
            _ => minus_one.clone(),
        })
    });
    let mut states: Vec<String> = Vec::with_capacity(10);
    for tag in 1..=2 {
        states.extend(Pair::ALL.iter().map(|p| format!("{}{tag}", p.name())));
    }
    states.extend(["skip1".to_string(), "skip2".to_string()]);
    Wts::new(sig, s, states, tiles).expect("valid tiling system")
}

/// The two formulas' grids side by side: `n x (m1 + m2)` with the labels of
/// the first formula tagged 1 and those of the second tagged 2.
pub fn gap_encoding(phi1: &Cnf, phi2: &Cnf) -> Result<(Wts, Graph), GenError> {
    if phi1.num_vars != phi2.num_vars {
        return Err(GenError::VariableMismatch(phi1.num_vars, phi2.num_vars));
    }
    check_formula(phi1)?;
    check_formula(phi2)?;
    let labels: Vec<Vec<Label>> = (0..phi1.num_vars)
        .map(|i| {
            let first = (0..phi1.clauses.len()).map(|j| Label(cell_label(phi1, i, j)));
            let second = (0..phi2.clauses.len()).map(|j| Label(3 + cell_label(phi2, i, j)));
            first.chain(second).collect()
        })
        .collect();
    let graph = grid_graph(&["p1", "n1", "*1", "p2", "n2", "*2"], &labels)?;
    Ok((gap_wts(), graph))
}
