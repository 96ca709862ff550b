use std::path::PathBuf;

use clap::{Args, ValueEnum};
use wts_core::decomp::{
    heuristic_linear_order, heuristic_tree_decomposition, ktt_from_tree_decomposition, kword_from_linearization_with,
    kword_from_path_decomposition, path_decomposition_from_order, validate_path_decomposition, DecompError,
};
use wts_core::io::{parse_decomposition, parse_graph, render_decomposition, render_term, Decomposition, TermFile};

use crate::files::{read_input, write_output};
use crate::{core, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    /// Path decomposition.
    Path,
    /// Tree decomposition.
    Tree,
    /// k-word.
    Kword,
    /// k-tree-term.
    Ktt,
}

#[derive(Args)]
pub struct DecomposeArgs {
    /// Graph file.
    graph: PathBuf,
    #[arg(long = "as", value_enum, default_value_t = Output::Tree)]
    output: Output,
    /// Build the term from this decomposition instead of a heuristic one.
    #[arg(long)]
    decomposition: Option<PathBuf>,
    /// Fail if the result is wider than this.
    #[arg(long)]
    max_width: Option<usize>,
    #[arg(long, short, default_value = "-")]
    out: PathBuf,
}

pub fn run(a: DecomposeArgs) -> Result<(), CliError> {
    let g = parse_graph(&read_input(&a.graph)?).map_err(core)?;
    let supplied = match &a.decomposition {
        Some(p) => Some(parse_decomposition(&read_input(p)?).map_err(core)?),
        None => None,
    };
    let sig = g.signature();
    let check = |width: usize| match a.max_width {
        Some(limit) if width > limit => Err(core(DecompError::WidthExceeded { width, limit })),
        _ => Ok(width),
    };
    let (text, width) = match (a.output, supplied) {
        (Output::Path, _) => {
            let (order, _) = heuristic_linear_order(&g);
            let pd = path_decomposition_from_order(&g, &order).map_err(core)?;
            let w = check(pd.width())?;
            (render_decomposition(&Decomposition::Path(pd)), w)
        }
        (Output::Tree, _) => {
            let td = heuristic_tree_decomposition(&g, a.max_width).map_err(core)?;
            let w = check(td.width())?;
            (render_decomposition(&Decomposition::Tree(td)), w)
        }
        (Output::Kword, Some(Decomposition::Path(pd))) => {
            check(validate_path_decomposition(&g, &pd).map_err(core)?)?;
            let w = kword_from_path_decomposition(&g, &pd).map_err(core)?.term;
            let k = w.k;
            (render_term(sig, &TermFile::Word(w)), k)
        }
        (Output::Kword, Some(Decomposition::Tree(_))) => {
            return Err(CliError::Usage("a k-word needs a path decomposition".into()))
        }
        (Output::Kword, None) => {
            let (order, width) = heuristic_linear_order(&g);
            check(width)?;
            let w = kword_from_linearization_with(&g, &order, width).map_err(core)?.term;
            let k = w.k;
            (render_term(sig, &TermFile::Word(w)), k)
        }
        (Output::Ktt, supplied) => {
            let td = match supplied {
                Some(d) => d.into_tree(),
                None => heuristic_tree_decomposition(&g, a.max_width).map_err(core)?,
            };
            let t = ktt_from_tree_decomposition(&g, &td).map_err(core)?.term;
            let k = check(t.k)?;
            (render_term(sig, &TermFile::Tree(t)), k)
        }
    };
    write_output(&a.out, &text)?;
    eprintln!("width {width}");
    Ok(())
}
