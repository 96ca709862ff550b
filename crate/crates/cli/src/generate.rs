use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wts_core::generators::{
    binary_path_wts, clique_wts, cnf_to_grid, gap_encoding, natural_permanent_encoding, parse_dimacs, permanent_wts,
    random_adjacency, random_bits, random_cnf, random_matrix, sharp_sat_wts, Cnf,
};
use wts_core::graph::{boolean_grid, triangular_grid};
use wts_core::io::{graph_to_json, render_graph, render_json, render_wts, wts_to_json};
use wts_core::{Graph, Wts};

use crate::files::{read_input, write_output};
use crate::{core, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Permanent of a random 0/1 matrix on a grid.
    Permanent,
    /// Permanent of a random matrix with entries 0..=3 as bit paths.
    PermanentNat,
    /// Clique number of a random graph on its triangular adjacency grid.
    Clique,
    /// Model count of a CNF on its variable/clause grid.
    Sat,
    /// Difference of the model counts of two CNFs.
    Gap,
    /// The number spelled by a bit path.
    Binary,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    /// Matrix dimension, vertex count, variable/clause count or bit length.
    #[arg(long, default_value_t = 4)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// DIMACS formula for `sat` and the first formula of `gap`.
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// DIMACS formula for the second formula of `gap`.
    #[arg(long)]
    cnf2: Option<PathBuf>,
    /// Writes PREFIX.wts.json and PREFIX.graph.json; `-` prints both as one
    /// JSON document.
    #[arg(long, short, default_value = "-")]
    out: PathBuf,
}

fn formula(path: &Option<PathBuf>, rng: &mut ChaCha8Rng, size: usize) -> Result<Cnf, CliError> {
    match path {
        Some(p) => parse_dimacs(&read_input(p)?).map_err(core),
        None => Ok(random_cnf(rng, size.max(1), size.max(1), 3)),
    }
}

/// The fixture pair of a family; identical arguments give identical output.
pub fn fixture(
    family: Family,
    size: usize,
    seed: u64,
    cnf: &Option<PathBuf>,
    cnf2: &Option<PathBuf>,
) -> Result<(Wts, Graph), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = size.max(1);
    Ok(match family {
        Family::Permanent => (
            permanent_wts(),
            boolean_grid(&random_matrix(&mut rng, size, 0.6)).map_err(core)?,
        ),
        Family::PermanentNat => {
            let m: Vec<Vec<u64>> = (0..size)
                .map(|_| (0..size).map(|_| rng.gen_range(0..=3)).collect())
                .collect();
            natural_permanent_encoding(&m).map_err(core)?
        }
        Family::Clique => (
            clique_wts(),
            triangular_grid(&random_adjacency(&mut rng, size, 0.5)).map_err(core)?,
        ),
        Family::Sat => (
            sharp_sat_wts(),
            cnf_to_grid(&formula(cnf, &mut rng, size)?).map_err(core)?,
        ),
        Family::Gap => {
            let phi1 = formula(cnf, &mut rng, size)?;
            let phi2 = formula(cnf2, &mut rng, size)?;
            gap_encoding(&phi1, &phi2).map_err(core)?
        }
        Family::Binary => {
            let bits = random_bits(&mut rng, size);
            (
                binary_path_wts(),
                wts_core::generators::nat_to_path_graph(&bits).map_err(core)?,
            )
        }
    })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn run(a: GenerateArgs) -> Result<(), CliError> {
    let (t, g) = fixture(a.family, a.size, a.seed, &a.cnf, &a.cnf2)?;
    if a.out.as_os_str() == "-" {
        let doc = json!({"wts": wts_to_json(&t), "graph": graph_to_json(&g)});
        return write_output(&a.out, &render_json(&doc));
    }
    let wts_path = with_suffix(&a.out, ".wts.json");
    let graph_path = with_suffix(&a.out, ".graph.json");
    write_output(&wts_path, &render_wts(&t))?;
    write_output(&graph_path, &render_graph(&g))?;
    eprintln!("wrote {} and {}", wts_path.display(), graph_path.display());
    Ok(())
}
