//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wts_core::generators::*;
use wts_core::graph::{boolean_grid, triangular_grid};
use wts_core::semiring::{check_semiring_laws, SemiringOps};
use wts_core::{eval_brute, eval_pw, eval_tw, tree_eval, EvalOptions, Graph, Semiring, SemiringId, Weight, Wts};

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn pw(t: &Wts, g: &Graph) -> Result<Weight, String> {
    eval_pw(t, g, None, EvalOptions::default())
        .map(|r| r.value)
        .map_err(|e| e.to_string())
}

fn tw(t: &Wts, g: &Graph) -> Result<Weight, String> {
    eval_tw(t, g, None, EvalOptions::default())
        .map(|r| r.value)
        .map_err(|e| e.to_string())
}

fn brute(t: &Wts, g: &Graph) -> Result<Weight, String> {
    eval_brute(t, g).map_err(|e| e.to_string())
}

/// Compares every listed method against `expected`.
fn agree(case: &str, expected: &Weight, results: &[(&str, Result<Weight, String>)]) -> Result<(), String> {
    for (method, got) in results {
        let got = got.as_ref().map_err(|e| format!("{case}: {method} failed: {e}"))?;
        check(got == expected, || {
            format!("{case}: {method} gave {got:?}, expected {expected:?}")
        })?;
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    let ids = [
        SemiringId::Boolean,
        SemiringId::Natural,
        SemiringId::Integer,
        SemiringId::Rational,
        SemiringId::MaxPlusInt,
        SemiringId::MinPlusNat,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..200 {
        let s = Semiring::new(ids[i % ids.len()]);
        let inst = random_instance(&mut rng, s, 8, 3, 3);
        let (t, g) = (&inst.wts, &inst.graph);
        let b = brute(t, g)?;
        let opts = EvalOptions {
            max_width: Some(3),
            ..EvalOptions::default()
        };
        let p = eval_pw(t, g, Some(&inst.path), opts)
            .map(|r| r.value)
            .map_err(|e| e.to_string());
        let r = eval_tw(t, g, Some(&inst.tree), opts)
            .map(|r| r.value)
            .map_err(|e| e.to_string());
        agree(
            &format!("triple {i} over {}", s.id().name()),
            &b,
            &[("pathwidth", p), ("treewidth", r)],
        )?;
    }
    Ok("200 triples, brute = pathwidth = treewidth".into())
}

fn permanents() -> Outcome {
    let t = permanent_wts();
    let s = t.semiring();
    let as_u64 =
        |m: &[Vec<bool>]| -> Vec<Vec<u64>> { m.iter().map(|r| r.iter().map(|&b| b as u64).collect()).collect() };
    let mut cases: Vec<(String, Vec<Vec<bool>>)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..20 {
        let n = rng.gen_range(1..=5);
        cases.push((format!("random matrix {i}"), random_matrix(&mut rng, n, 0.6)));
    }
    for n in 1..=5 {
        cases.push((format!("all-ones {n}x{n}"), vec![vec![true; n]; n]));
        cases.push((
            format!("identity {n}x{n}"),
            (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect(),
        ));
    }
    cases.push(("fixed 5x5 matrix".into(), five_by_five()));
    for (case, m) in &cases {
        let oracle = BigInt::from(permanent_oracle(&as_u64(m)).map_err(|e| e.to_string())?);
        check(oracle == ryser_bool(m), || format!("{case}: oracles disagree"))?;
        let n = m.len();
        if case.starts_with("all-ones") {
            let fact: u64 = (1..=n as u64).product();
            check(oracle == BigInt::from(fact), || {
                format!("{case}: permanent is not {n}!")
            })?;
        }
        if case.starts_with("identity") {
            check(oracle == BigInt::from(1), || format!("{case}: permanent is not 1"))?;
        }
        let g = boolean_grid(m).map_err(|e| e.to_string())?;
        agree(
            case,
            &big(s, oracle),
            &[("brute", brute(&t, &g)), ("treewidth", tw(&t, &g))],
        )?;
    }
    Ok(format!("{} matrices", cases.len()))
}

fn clique_numbers() -> Outcome {
    let t = clique_wts();
    let s = t.semiring();
    let mut cases = vec![("five-vertex graph".to_string(), five_vertex_graph())];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..20 {
        let n = rng.gen_range(1..=7);
        cases.push((format!("random graph {i}"), random_adjacency(&mut rng, n, 0.5)));
    }
    for (case, adj) in &cases {
        let oracle = clique_oracle(adj).map_err(|e| e.to_string())?;
        check(oracle == max_clique(adj), || format!("{case}: oracles disagree"))?;
        let g = triangular_grid(adj).map_err(|e| e.to_string())?;
        agree(
            case,
            &int(s, oracle as i64),
            &[("pathwidth", pw(&t, &g)), ("treewidth", tw(&t, &g))],
        )?;
    }
    check(clique_oracle(&five_vertex_graph()) == Ok(3), || {
        "five-vertex graph: clique number is not 3".into()
    })?;
    Ok(format!("{} graphs", cases.len()))
}

fn model_counts() -> Outcome {
    let t = sharp_sat_wts();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..20 {
        let (n, m) = (rng.gen_range(1..=8), rng.gen_range(1..=6));
        let phi = random_cnf(&mut rng, n, m, 3);
        let oracle = count_sat_oracle(&phi).map_err(|e| e.to_string())?;
        check(oracle == count_models(n, &phi.clauses), || {
            format!("formula {i}: oracles disagree")
        })?;
        let g = cnf_to_grid(&phi).map_err(|e| e.to_string())?;
        let case = format!("formula {i} ({n} vars, {m} clauses)");
        agree(
            &case,
            &int(t.semiring(), oracle as i64),
            &[("pathwidth", pw(&t, &g)), ("treewidth", tw(&t, &g))],
        )?;
    }
    for i in 0..10 {
        let n = rng.gen_range(1..=6);
        let (m1, m2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let phi1 = random_cnf(&mut rng, n, m1, 3);
        let phi2 = random_cnf(&mut rng, n, m2, 3);
        let expected = count_sat_oracle(&phi1).unwrap() as i64 - count_sat_oracle(&phi2).unwrap() as i64;
        let (t, g) = gap_encoding(&phi1, &phi2).map_err(|e| e.to_string())?;
        agree(
            &format!("pair {i}"),
            &int(t.semiring(), expected),
            &[("pathwidth", pw(&t, &g)), ("treewidth", tw(&t, &g))],
        )?;
    }
    Ok("20 formulas, 10 gap pairs".into())
}

fn binary_counts() -> Outcome {
    let t = binary_path_wts();
    let s = t.semiring();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut strings: Vec<String> = (0..30)
        .map(|_| {
            let len = rng.gen_range(1..=12);
            random_bits(&mut rng, len)
        })
        .collect();
    strings.push("000000000000".into());
    for bits in &strings {
        let value: u64 = bits
            .chars()
            .rev()
            .enumerate()
            .map(|(i, b)| if b == '1' { 1 << i } else { 0 })
            .sum();
        let g = nat_to_path_graph(bits).map_err(|e| e.to_string())?;
        agree(
            bits,
            &int(s, value as i64),
            &[
                ("brute", brute(&t, &g)),
                ("pathwidth", pw(&t, &g)),
                ("treewidth", tw(&t, &g)),
            ],
        )?;
    }
    Ok(format!("{} bit strings", strings.len()))
}

/// Integers with subtraction in place of multiplication.
struct Broken;

impl SemiringOps for Broken {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn add(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a - b
    }
    fn equal(&self, a: &i64, b: &i64) -> bool {
        a == b
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        rng.gen_range(-50..=50)
    }
}

fn semiring_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for id in SemiringId::ALL {
        let report = check_semiring_laws(&Semiring::new(id), 10_000, &mut rng);
        if let Some(v) = report.violations.first() {
            return Err(format!("{}: {:?} fails on {:?}", id.name(), v.law, v.witness));
        }
    }
    let broken = check_semiring_laws(&Broken, 10_000, &mut rng);
    let witness = broken.violations.first().ok_or("the broken stub passed every law")?;
    Ok(format!(
        "9 semirings pass; stub fails {:?} on {:?}",
        witness.law, witness.witness
    ))
}

fn decomposition_round_trips() -> Outcome {
    for seed in 0..100 {
        common::decomposition_round_trips(seed).map_err(|e| format!("graph {seed}: {e}"))?;
    }
    Ok("100 graphs".into())
}

fn linear_scaling() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_wts"))
        .args([
            "bench",
            "--family",
            "grid3xN",
            "--n",
            "50,100,200,400",
            "--repeats",
            "5",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    let csv = String::from_utf8_lossy(&out.stdout);
    let times: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .nth(2)
                .and_then(|t| t.parse().ok())
                .ok_or(format!("bad row `{l}`"))
        })
        .collect::<Result<_, _>>()?;
    check(times.len() == 4, || format!("expected 4 rows, got {}", times.len()))?;
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1] / w[0]).collect();
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    check(ratios.iter().all(|&r| r <= 3.0), || {
        format!("doubling ratios {}", shown.join(", "))
    })?;
    Ok(format!("doubling ratios {}", shown.join(", ")))
}

fn tree_automata() -> Outcome {
    let ids = [
        SemiringId::Natural,
        SemiringId::Integer,
        SemiringId::Rational,
        SemiringId::MaxPlusInt,
        SemiringId::MinPlusNat,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..50 {
        let s = Semiring::new(ids[i % ids.len()]);
        let states = rng.gen_range(1..=4);
        let mut a = TableAutomaton::random(&mut rng, s, states);
        let size = rng.gen_range(1..=5);
        let term = random_term(&mut rng, size);
        let got = tree_eval(&mut a, &term).map_err(|e| e.to_string())?;
        let expected = a.all_runs(&term);
        check(got == expected, || format!("automaton {i}: {got:?} != {expected:?}"))?;
    }
    Ok("50 automata".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("oracle equivalence", Duration::from_secs(60), oracle_equivalence),
        ("permanent", Duration::from_secs(30), permanents),
        ("clique number", Duration::from_secs(30), clique_numbers),
        ("model counting", Duration::from_secs(60), model_counts),
        ("binary encoding", Duration::from_secs(10), binary_counts),
        ("semiring laws", Duration::from_secs(10), semiring_laws),
        (
            "decomposition round trips",
            Duration::from_secs(30),
            decomposition_round_trips,
        ),
        ("linear scaling", Duration::from_secs(120), linear_scaling),
        ("tree automaton runs", Duration::from_secs(10), tree_automata),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {elapsed:.2?})", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({reason})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
