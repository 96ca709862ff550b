use super::{run_tree_automaton, run_word_automaton, AutomataError, EvalStats, LazyBk};
use crate::decomp::{
    heuristic_linear_order, heuristic_tree_decomposition, ktt_from_tree_decomposition, kword_from_linearization_with,
    kword_from_path_decomposition, validate_path_decomposition, validate_tree_decomposition, DecompError,
    PathDecomposition, TreeDecomposition,
};
use crate::graph::Graph;
use crate::semiring::Weight;
use crate::wts::Wts;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Reject decompositions wider than this.
    pub max_width: Option<usize>,
    /// Discard partial tiles that extend to no listed tile of nonzero weight.
    pub prune: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_width: None,
            prune: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalReport {
    pub value: Weight,
    pub width: usize,
    /// Letters in the k-word or nodes in the k-tree-term.
    pub term_size: usize,
    pub reachable_states: usize,
    pub max_states: usize,
}

impl EvalReport {
    fn new(value: Weight, width: usize, term_size: usize, stats: EvalStats) -> Self {
        EvalReport {
            value,
            width,
            term_size,
            reachable_states: stats.reachable_states,
            max_states: stats.max_states,
        }
    }
}

fn check_width(width: usize, opts: &EvalOptions) -> Result<(), DecompError> {
    match opts.max_width {
        Some(limit) if width > limit => Err(DecompError::WidthExceeded { width, limit }),
        _ => Ok(()),
    }
}

/// Evaluates `T` on `G` by running `B_k` over a k-word for `G`. Without a
/// supplied decomposition the k-word comes from a heuristic vertex order.
pub fn eval_pw(
    t: &Wts,
    g: &Graph,
    decomposition: Option<&PathDecomposition>,
    opts: EvalOptions,
) -> Result<EvalReport, AutomataError> {
    t.check_graph(g)?;
    if g.is_empty() {
        return Ok(EvalReport::new(t.semiring().one(), 0, 0, EvalStats::default()));
    }
    let construction = match decomposition {
        Some(pd) => {
            check_width(validate_path_decomposition(g, pd)?, &opts)?;
            kword_from_path_decomposition(g, pd)?
        }
        None => {
            let (order, width) = heuristic_linear_order(g);
            check_width(width, &opts)?;
            kword_from_linearization_with(g, &order, width)?
        }
    };
    let word = construction.term;
    let mut bk = LazyBk::with_pruning(t, word.k, opts.prune);
    let (value, stats) = run_word_automaton(&mut bk, &word.ops)?;
    Ok(EvalReport::new(value, word.k, word.len(), stats))
}

/// Evaluates `T` on `G` by running `B_k` bottom-up over a k-tree-term for
/// `G`. Without a supplied decomposition a min-fill decomposition is used.
pub fn eval_tw(
    t: &Wts,
    g: &Graph,
    decomposition: Option<&TreeDecomposition>,
    opts: EvalOptions,
) -> Result<EvalReport, AutomataError> {
    t.check_graph(g)?;
    if g.is_empty() {
        return Ok(EvalReport::new(t.semiring().one(), 0, 0, EvalStats::default()));
    }
    let heuristic;
    let td = match decomposition {
        Some(td) => {
            check_width(validate_tree_decomposition(g, td)?, &opts)?;
            td
        }
        None => {
            heuristic = heuristic_tree_decomposition(g, opts.max_width)?;
            &heuristic
        }
    };
    let term = ktt_from_tree_decomposition(g, td)?.term;
    let mut bk = LazyBk::with_pruning(t, term.k, opts.prune);
    let (value, stats) = run_tree_automaton(&mut bk, term.term())?;
    Ok(EvalReport::new(value, term.k, term.len(), stats))
}
