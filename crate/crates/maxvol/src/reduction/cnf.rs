//! DIMACS CNF parsing and the 3SAT(5) shape checks.

use serde::{Deserialize, Serialize};

use super::ReduceError;

/// A signed reference to a 0-based variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

/// A 3-CNF formula: every clause has exactly three distinct variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, ReduceError> {
        if num_vars == 0 {
            return Err(ReduceError::NotSat5("formula has no variables".into()));
        }
        for (idx, clause) in clauses.iter().enumerate() {
            for lit in clause {
                if lit.var >= num_vars {
                    return Err(ReduceError::VariableOutOfRange {
                        line: idx + 1,
                        var: lit.var + 1,
                        num_vars,
                    });
                }
            }
            if clause[0].var == clause[1].var
                || clause[0].var == clause[2].var
                || clause[1].var == clause[2].var
            {
                return Err(ReduceError::RepeatedVariable {
                    line: idx + 1,
                    var: clause[0].var + 1,
                });
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn clause_satisfied(&self, clause: usize, assignment: &[bool]) -> bool {
        self.clauses[clause].iter().any(|l| l.evaluate(assignment))
    }

    pub fn count_satisfied(&self, assignment: &[bool]) -> usize {
        (0..self.clauses.len())
            .filter(|&c| self.clause_satisfied(c, assignment))
            .count()
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.count_satisfied(assignment) == self.clauses.len()
    }
}

/// Parses a DIMACS CNF document into a 3-CNF formula. Comment lines start
/// with `c`; the header is `p cnf <vars> <clauses>`; clauses are
/// 0-terminated and may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ReduceError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_number = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ReduceError::Dimacs {
                    line: line_number,
                    message: "duplicate header".into(),
                });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(ReduceError::Dimacs {
                    line: line_number,
                    message: format!("malformed header `{line}`"),
                });
            }
            let vars: usize = parts[2].parse().map_err(|e| ReduceError::Dimacs {
                line: line_number,
                message: format!("bad variable count: {e}"),
            })?;
            let count: usize = parts[3].parse().map_err(|e| ReduceError::Dimacs {
                line: line_number,
                message: format!("bad clause count: {e}"),
            })?;
            header = Some((vars, count));
            continue;
        }
        let (num_vars, _) = header.ok_or(ReduceError::Dimacs {
            line: line_number,
            message: "clause before `p cnf` header".into(),
        })?;
        for tok in line.split_whitespace() {
            let value: i64 = tok.parse().map_err(|e| ReduceError::Dimacs {
                line: line_number,
                message: format!("bad literal `{tok}`: {e}"),
            })?;
            if value == 0 {
                if pending.len() != 3 {
                    return Err(ReduceError::ClauseArity {
                        line: line_number,
                        got: pending.len(),
                    });
                }
                let clause = [pending[0], pending[1], pending[2]];
                for i in 0..3 {
                    for j in (i + 1)..3 {
                        if clause[i].var == clause[j].var {
                            return Err(ReduceError::RepeatedVariable {
                                line: line_number,
                                var: clause[i].var + 1,
                            });
                        }
                    }
                }
                clauses.push(clause);
                pending.clear();
                continue;
            }
            let var = value.unsigned_abs() as usize;
            if var > num_vars {
                return Err(ReduceError::VariableOutOfRange {
                    line: line_number,
                    var,
                    num_vars,
                });
            }
            pending.push(Literal {
                var: var - 1,
                positive: value > 0,
            });
        }
    }

    let (num_vars, declared) = header.ok_or(ReduceError::Dimacs {
        line: 1,
        message: "missing `p cnf` header".into(),
    })?;
    if !pending.is_empty() {
        return Err(ReduceError::Dimacs {
            line: text.lines().count(),
            message: "unterminated clause at end of input".into(),
        });
    }
    if clauses.len() != declared {
        return Err(ReduceError::Dimacs {
            line: text.lines().count(),
            message: format!("header declares {declared} clauses, found {}", clauses.len()),
        });
    }
    CnfFormula::new(num_vars, clauses)
}

/// Report of 3SAT(5) shape violations; empty means the formula qualifies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sat5Validation {
    pub violations: Vec<String>,
}

impl Sat5Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the 3SAT(5) counting rules: every variable occurs in exactly five
/// clauses and the clause count is `5n/3` for `n` variables.
pub fn validate_3sat5(formula: &CnfFormula) -> Sat5Validation {
    let mut violations = Vec::new();
    let n = formula.num_vars;
    if !(5 * n).is_multiple_of(3) {
        violations.push(format!("variable count {n} is incompatible with 5n/3 clauses"));
    } else {
        let expected = 5 * n / 3;
        if formula.clauses.len() != expected {
            violations.push(format!(
                "expected {expected} clauses for {n} variables, found {}",
                formula.clauses.len()
            ));
        }
    }
    let mut occurrences = vec![0usize; n];
    for clause in &formula.clauses {
        for lit in clause {
            occurrences[lit.var] += 1;
        }
    }
    for (var, &count) in occurrences.iter().enumerate() {
        if count != 5 {
            violations.push(format!(
                "variable {} occurs in {count} clauses, expected 5",
                var + 1
            ));
        }
    }
    Sat5Validation { violations }
}

/// Exhaustive satisfiability search; feasible only for small variable
/// counts, so anything beyond the cap is rejected.
pub fn find_satisfying_assignment(formula: &CnfFormula) -> Result<Option<Vec<bool>>, ReduceError> {
    const MAX_VARS: usize = 30;
    if formula.num_vars > MAX_VARS {
        return Err(ReduceError::SizeOverflow(format!(
            "satisfiability search enumerates 2^{} assignments (cap 2^{MAX_VARS})",
            formula.num_vars
        )));
    }
    let n = formula.num_vars;
    for bits in 0u64..(1u64 << n) {
        let assignment: Vec<bool> = (0..n).map(|v| (bits >> v) & 1 == 1).collect();
        if formula.is_satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}
