use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde_json::json;
use wts_core::automata::{eval_pw, eval_tw, EvalOptions};
use wts_core::io::{parse_decomposition, parse_graph, parse_wts, Decomposition};
use wts_core::wts::{eval_brute_with, BruteOptions, DEFAULT_BRUTE_BUDGET};
use wts_core::{Graph, Weight, Wts};

use crate::files::read_input;
use crate::{core, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Pathwidth,
    Treewidth,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Pathwidth => "pathwidth",
            Method::Treewidth => "treewidth",
        }
    }
}

#[derive(Args)]
pub struct EvalArgs {
    /// Tiling system file.
    #[arg(long)]
    wts: PathBuf,
    /// Graph file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Treewidth)]
    method: Method,
    /// Path or tree decomposition to use instead of the heuristic one.
    #[arg(long)]
    decomposition: Option<PathBuf>,
    /// Refuse decompositions wider than this.
    #[arg(long)]
    max_width: Option<usize>,
    /// Labelings the brute-force method may visit.
    #[arg(long, default_value_t = DEFAULT_BRUTE_BUDGET)]
    budget: u64,
    /// Keep partial tiles that cannot be completed to a weighted tile.
    #[arg(long)]
    no_prune: bool,
    /// Print evaluation statistics as JSON on standard error.
    #[arg(long)]
    stats: bool,
}

/// Outcome of one evaluation, with the pipeline statistics when available.
pub struct Evaluation {
    pub value: Weight,
    pub width: Option<usize>,
    pub term_size: Option<usize>,
    pub reachable_states: Option<usize>,
}

pub fn evaluate(
    t: &Wts,
    g: &Graph,
    method: Method,
    decomposition: Option<Decomposition>,
    max_width: Option<usize>,
    prune: bool,
    budget: u64,
) -> Result<Evaluation, CliError> {
    let opts = EvalOptions { max_width, prune };
    let report = match (method, decomposition) {
        (Method::Brute, _) => {
            let value = eval_brute_with(t, g, BruteOptions { budget, prune }).map_err(core)?;
            return Ok(Evaluation {
                value,
                width: None,
                term_size: None,
                reachable_states: None,
            });
        }
        (Method::Pathwidth, Some(Decomposition::Tree(_))) => {
            return Err(CliError::Usage(
                "the pathwidth method needs a path decomposition".into(),
            ))
        }
        (Method::Pathwidth, Some(Decomposition::Path(pd))) => eval_pw(t, g, Some(&pd), opts),
        (Method::Pathwidth, None) => eval_pw(t, g, None, opts),
        (Method::Treewidth, Some(d)) => eval_tw(t, g, Some(&d.into_tree()), opts),
        (Method::Treewidth, None) => eval_tw(t, g, None, opts),
    }
    .map_err(core)?;
    Ok(Evaluation {
        value: report.value,
        width: Some(report.width),
        term_size: Some(report.term_size),
        reachable_states: Some(report.reachable_states),
    })
}

pub fn run(a: EvalArgs) -> Result<(), CliError> {
    let t = parse_wts(&read_input(&a.wts)?).map_err(core)?;
    let g = parse_graph(&read_input(&a.graph)?).map_err(core)?;
    let d = match &a.decomposition {
        Some(p) => Some(parse_decomposition(&read_input(p)?).map_err(core)?),
        None => None,
    };
    let start = Instant::now();
    let e = evaluate(&t, &g, a.method, d, a.max_width, !a.no_prune, a.budget)?;
    let elapsed = start.elapsed();
    println!("{}", t.semiring().render(&e.value));
    if a.stats {
        let stats = json!({
            "method": a.method.name(),
            "width_used": e.width,
            "term_size": e.term_size,
            "reachable_states": e.reachable_states,
            "wall_time_ms": elapsed.as_secs_f64() * 1e3,
        });
        eprintln!("{stats}");
    }
    Ok(())
}
