use std::path::PathBuf;

use clap::Args;
use wts_core::decomp::{
    is_well_formed_ktt, is_well_formed_kword, ktt_semantics, kword_semantics, validate_path_decomposition,
    validate_tree_decomposition, DecompError,
};
use wts_core::io::{parse_decomposition, parse_graph, parse_term, parse_wts, Decomposition, TermFile};
use wts_core::Graph;

use crate::files::read_input;
use crate::{core, CliError};

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    wts: Option<PathBuf>,
    /// k-word or k-tree-term; needs --graph for its signature.
    #[arg(long)]
    term: Option<PathBuf>,
    /// Path or tree decomposition; needs --graph.
    #[arg(long)]
    decomposition: Option<PathBuf>,
}

fn need_graph(g: &Option<Graph>, what: &str) -> Result<(), CliError> {
    match g {
        Some(_) => Ok(()),
        None => Err(CliError::Usage(format!("checking a {what} needs --graph"))),
    }
}

pub fn run(a: CheckArgs) -> Result<(), CliError> {
    if a.graph.is_none() && a.wts.is_none() && a.term.is_none() && a.decomposition.is_none() {
        return Err(CliError::Usage("nothing to check".into()));
    }
    let graph = match &a.graph {
        Some(p) => {
            let g = parse_graph(&read_input(p)?).map_err(core)?;
            println!("graph: ok, {} vertices, {} edges", g.num_vertices(), g.num_edges());
            Some(g)
        }
        None => None,
    };
    if let Some(p) = &a.wts {
        let t = parse_wts(&read_input(p)?).map_err(core)?;
        if let Some(g) = &graph {
            t.check_graph(g).map_err(core)?;
        }
        println!(
            "wts: ok, {} states, {} tiles, semiring {}",
            t.num_states(),
            t.tiles().len(),
            t.semiring().id()
        );
    }
    if let Some(p) = &a.term {
        need_graph(&graph, "term")?;
        let g = graph.as_ref().expect("checked");
        let term = parse_term(g.signature(), &read_input(p)?).map_err(core)?;
        let (kind, k, len, built) = match &term {
            TermFile::Word(w) => {
                is_well_formed_kword(w).map_err(|v| core(DecompError::IllFormed(v)))?;
                ("k-word", w.k, w.len(), kword_semantics(g.signature(), w).map_err(core)?)
            }
            TermFile::Tree(t) => {
                is_well_formed_ktt(t).map_err(|v| core(DecompError::IllFormed(v)))?;
                (
                    "k-tree-term",
                    t.k,
                    t.len(),
                    ktt_semantics(g.signature(), t).map_err(core)?,
                )
            }
        };
        let (n, m) = (built.graph.num_vertices(), built.graph.num_edges());
        if (n, m) != (g.num_vertices(), g.num_edges()) {
            return Err(CliError::Usage(format!(
                "{kind} builds {n} vertices and {m} edges, the graph has {} and {}",
                g.num_vertices(),
                g.num_edges()
            )));
        }
        println!("term: ok, {kind} with k = {k}, {len} symbols");
    }
    if let Some(p) = &a.decomposition {
        need_graph(&graph, "decomposition")?;
        let g = graph.as_ref().expect("checked");
        let (kind, width) = match parse_decomposition(&read_input(p)?).map_err(core)? {
            Decomposition::Path(pd) => ("path", validate_path_decomposition(g, &pd).map_err(core)?),
            Decomposition::Tree(td) => ("tree", validate_tree_decomposition(g, &td).map_err(core)?),
        };
        println!("decomposition: ok, {kind} of width {width}");
    }
    Ok(())
}
