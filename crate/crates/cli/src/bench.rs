use std::time::{Duration, Instant};

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use wts_core::generators::{
    binary_path_wts, clique_wts, cnf_to_grid, nat_to_path_graph, permanent_wts, random_adjacency, random_bits,
    random_cnf, sharp_sat_wts, Cnf,
};
use wts_core::graph::{boolean_grid, triangular_grid};
use wts_core::wts::DEFAULT_BRUTE_BUDGET;
use wts_core::{Graph, Wts};

use crate::eval::{evaluate, Method};
use crate::{core, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchFamily {
    /// Model counting on a 3 x N variable/clause grid of a satisfiable formula.
    #[value(name = "grid3xN", alias = "sat3xN")]
    Grid3xN,
    /// The permanent system on an all-ones 3 x N grid.
    #[value(name = "perm3xN")]
    Perm3xN,
    /// Clique number on triangular grids of N-vertex graphs.
    Clique,
    /// The bit path of a random N-bit number.
    Binary,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = BenchFamily::Grid3xN)]
    family: BenchFamily,
    /// Sizes: `a,b,c`, a single size, or `a..b` for a, 2a, 4a, ... up to b.
    #[arg(long, default_value = "50..400")]
    n: String,
    #[arg(long, value_enum, default_value_t = Method::Pathwidth)]
    method: Method,
    /// Timed runs per size; the fastest is reported.
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid size list `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo == 0 || lo > hi {
            return Err(bad());
        }
        return Ok(std::iter::successors(Some(lo), |&n| Some(n * 2))
            .take_while(|&n| n <= hi)
            .collect());
    }
    let sizes = text.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(bad());
    }
    Ok(sizes)
}

fn instance(family: BenchFamily, n: usize, seed: u64) -> Result<(Wts, Graph), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
    Ok(match family {
        BenchFamily::Grid3xN => (sharp_sat_wts(), cnf_to_grid(&planted_cnf(&mut rng, n)).map_err(core)?),
        BenchFamily::Perm3xN => (permanent_wts(), boolean_grid(&vec![vec![true; n]; 3]).map_err(core)?),
        BenchFamily::Clique => (
            clique_wts(),
            triangular_grid(&random_adjacency(&mut rng, n, 0.5)).map_err(core)?,
        ),
        BenchFamily::Binary => (
            binary_path_wts(),
            nat_to_path_graph(&random_bits(&mut rng, n)).map_err(core)?,
        ),
    })
}

/// Random 2-clauses over three variables, each made true under a fixed
/// random assignment so the count stays positive.
fn planted_cnf(rng: &mut ChaCha8Rng, n: usize) -> Cnf {
    let mut phi = random_cnf(rng, 3, n, 2);
    let assignment: u64 = rng.gen_range(0..8);
    for clause in &mut phi.clauses {
        if !(Cnf {
            num_vars: 3,
            clauses: vec![clause.clone()],
        })
        .satisfied_by(assignment)
        {
            clause[0] = -clause[0];
        }
    }
    phi
}

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn run(a: BenchArgs) -> Result<(), CliError> {
    let sizes = parse_sizes(&a.n)?;
    println!("size,vertices,time_ms,value_digest");
    for n in sizes {
        let (t, g) = instance(a.family, n, a.seed)?;
        let mut best = Duration::MAX;
        let mut rendered = String::new();
        for _ in 0..a.repeats.max(1) {
            let start = Instant::now();
            let e = evaluate(&t, &g, a.method, None, None, true, DEFAULT_BRUTE_BUDGET)?;
            best = best.min(start.elapsed());
            rendered = t.semiring().render(&e.value);
        }
        println!(
            "{n},{},{:.3},{}",
            g.num_vertices(),
            best.as_secs_f64() * 1e3,
            digest(&rendered)
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("50..400").unwrap(), vec![50, 100, 200, 400]);
        assert_eq!(parse_sizes("10..200").unwrap(), vec![10, 20, 40, 80, 160]);
        assert_eq!(parse_sizes("3,5,8").unwrap(), vec![3, 5, 8]);
        assert!(parse_sizes("0..4").is_err());
        assert!(parse_sizes("x").is_err());
    }
}
