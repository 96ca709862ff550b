use std::fmt::Write as _;

use super::GenError;

/// A CNF formula over variables `1..=num_vars`. Literals are nonzero
/// integers, negative for negated variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, GenError> {
        for (i, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > num_vars {
                    return Err(GenError::Dimacs {
                        line: 0,
                        reason: format!("literal {lit} in clause {} is out of range", i + 1),
                    });
                }
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// The first clause, 0-based, mentioning a variable with both signs.
    pub fn tautology(&self) -> Option<(usize, usize)> {
        self.clauses.iter().enumerate().find_map(|(i, clause)| {
            clause
                .iter()
                .find(|&&l| clause.contains(&-l))
                .map(|&l| (i, l.unsigned_abs() as usize))
        })
    }

    /// Whether the assignment, bit `i` for variable `i + 1`, satisfies
    /// every clause.
    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&l| {
                let value = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
                value == (l > 0)
            })
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for l in clause {
                write!(out, "{l} ").expect("write to string");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF: `c` comment lines, a `p cnf n m` header, then `m`
/// clauses of nonzero literals each terminated by `0`. Clauses may span
/// lines.
pub fn parse_dimacs(text: &str) -> Result<Cnf, GenError> {
    let err = |line: usize, reason: &str| GenError::Dimacs {
        line,
        reason: reason.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line == "%" {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate header"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["p", "cnf", n, m] => {
                    let n = n.parse().map_err(|_| err(line_no, "bad variable count"))?;
                    let m = m.parse().map_err(|_| err(line_no, "bad clause count"))?;
                    header = Some((n, m));
                }
                _ => return Err(err(line_no, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let (n, _) = header.ok_or_else(|| err(line_no, "clause before header"))?;
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| err(line_no, &format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > n {
                return Err(err(line_no, &format!("literal {lit} exceeds {n} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let (n, m) = header.ok_or_else(|| err(last_line.max(1), "missing header"))?;
    if !current.is_empty() {
        return Err(err(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(err(
            last_line.max(1),
            &format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    Cnf::new(n, clauses)
}
