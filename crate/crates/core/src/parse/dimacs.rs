use crate::error::{Error, Result};

/// A 3-CNF over variables `1..=num_vars`; literal `-k` is the negation of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeSat {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl ThreeSat {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Self {
        debug_assert!(clauses
            .iter()
            .flatten()
            .all(|&l| l != 0 && l.unsigned_abs() as usize <= num_vars));
        Self { num_vars, clauses }
    }

    pub fn is_satisfied_by(&self, alpha: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| alpha[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// Brute force over all `2^num_vars` assignments; first hit in binary
    /// counting order (variable 1 is the least significant bit).
    pub fn solve_brute_force(&self) -> Option<Vec<bool>> {
        assert!(self.num_vars < 32, "brute force is for small instances");
        (0u64..1 << self.num_vars)
            .map(|bits| (0..self.num_vars).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
            .find(|alpha| self.is_satisfied_by(alpha))
    }
}

/// Parses DIMACS CNF where every clause has exactly three literals.
pub fn parse_dimacs_3sat(text: &str) -> Result<ThreeSat> {
    let err = |line: usize, message: String| Error::Dimacs { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut current_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate header".into()));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| err(line_no, format!("malformed header `{line}`, expected `p cnf N M`")))?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err(line_no, "clause before `p cnf` header".into()));
        };
        for word in line.split_whitespace() {
            let lit: i64 = word
                .parse()
                .map_err(|_| err(line_no, format!("`{word}` is not an integer literal")))?;
            if current.is_empty() {
                current_line = line_no;
            }
            if lit == 0 {
                let clause: [i32; 3] = current.as_slice().try_into().map_err(|_| {
                    err(
                        current_line,
                        format!("clause has {} literals; exactly 3 are required", current.len()),
                    )
                })?;
                clauses.push(clause);
                current.clear();
            } else if lit.unsigned_abs() as usize > n {
                return Err(err(line_no, format!("literal {lit} exceeds the declared {n} variables")));
            } else {
                current.push(lit as i32);
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(err(0, "missing `p cnf` header".into()));
    };
    if !current.is_empty() {
        return Err(err(current_line, "last clause is not terminated by 0".into()));
    }
    if clauses.len() != m {
        return Err(err(0, format!("header declares {m} clauses, found {}", clauses.len())));
    }
    Ok(ThreeSat::new(n, clauses))
}
