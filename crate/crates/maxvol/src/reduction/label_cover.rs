//! Bipartite Label Cover instances with projection constraints, the
//! canonical reduction from 3SAT(5), and Cartesian-power repetition.

use serde::{Deserialize, Serialize};

use super::cnf::CnfFormula;
use super::ReduceError;

/// Default ceiling on `|E^ell| * sigma_v^ell` constraint-table cells built
/// by [`repeat`].
pub const DEFAULT_REPEAT_CELL_CAP: usize = 100_000_000;

/// A biregular bipartite constraint graph. Every edge `e = (v, w)` carries a
/// total projection `pi_e: [sigma_v] -> [sigma_w]`; a labeling satisfies `e`
/// when `pi_e(label(v)) == label(w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelCoverInstance {
    pub v_count: usize,
    pub w_count: usize,
    pub sigma_v: usize,
    pub sigma_w: usize,
    pub edges: Vec<(usize, usize)>,
    /// `constraints[e][i]` is the W-label forced by V-label `i` across edge `e`.
    pub constraints: Vec<Vec<usize>>,
    pub v_degree: usize,
    pub w_degree: usize,
}

impl LabelCoverInstance {
    /// Validates endpoints, table shapes, simplicity, and biregularity;
    /// degrees are derived from the edge list.
    pub fn new(
        v_count: usize,
        w_count: usize,
        sigma_v: usize,
        sigma_w: usize,
        edges: Vec<(usize, usize)>,
        constraints: Vec<Vec<usize>>,
    ) -> Result<Self, ReduceError> {
        let fail = |msg: String| Err(ReduceError::InvalidLabelCover(msg));
        if v_count == 0 || w_count == 0 || sigma_v == 0 || sigma_w == 0 {
            return fail("vertex counts and alphabet sizes must be positive".into());
        }
        if edges.is_empty() {
            return fail("edge set is empty".into());
        }
        if constraints.len() != edges.len() {
            return fail(format!(
                "{} constraint tables for {} edges",
                constraints.len(),
                edges.len()
            ));
        }
        let mut v_deg = vec![0usize; v_count];
        let mut w_deg = vec![0usize; w_count];
        let mut seen = std::collections::HashSet::new();
        for (idx, &(v, w)) in edges.iter().enumerate() {
            if v >= v_count || w >= w_count {
                return fail(format!("edge {idx} = ({v}, {w}) out of range"));
            }
            if !seen.insert((v, w)) {
                return fail(format!("duplicate edge ({v}, {w})"));
            }
            v_deg[v] += 1;
            w_deg[w] += 1;
            let table = &constraints[idx];
            if table.len() != sigma_v {
                return fail(format!(
                    "edge {idx} constraint table has {} entries, expected {sigma_v}",
                    table.len()
                ));
            }
            if let Some(&bad) = table.iter().find(|&&t| t >= sigma_w) {
                return fail(format!("edge {idx} maps into label {bad} >= sigma_w = {sigma_w}"));
            }
        }
        let v_degree = v_deg[0];
        let w_degree = w_deg[0];
        if v_deg.iter().any(|&d| d != v_degree) || w_deg.iter().any(|&d| d != w_degree) {
            return fail("graph is not biregular".into());
        }
        Ok(Self {
            v_count,
            w_count,
            sigma_v,
            sigma_w,
            edges,
            constraints,
            v_degree,
            w_degree,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges incident to each V vertex, in edge order.
    pub fn v_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::with_capacity(self.v_degree); self.v_count];
        for (idx, &(v, _)) in self.edges.iter().enumerate() {
            adj[v].push(idx);
        }
        adj
    }

    /// Edges incident to each W vertex, in edge order.
    pub fn w_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::with_capacity(self.w_degree); self.w_count];
        for (idx, &(_, w)) in self.edges.iter().enumerate() {
            adj[w].push(idx);
        }
        adj
    }

    pub fn to_json(&self) -> String {
        let doc = LabelCoverJson {
            v_count: self.v_count,
            w_count: self.w_count,
            sigma_v: self.sigma_v,
            sigma_w: self.sigma_w,
            edges: self
                .edges
                .iter()
                .zip(&self.constraints)
                .map(|(&(v, w), pi)| EdgeJson {
                    v,
                    w,
                    pi: pi.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, ReduceError> {
        let doc: LabelCoverJson = serde_json::from_str(text)
            .map_err(|e| ReduceError::InvalidLabelCover(format!("JSON parse: {e}")))?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        let mut constraints = Vec::with_capacity(doc.edges.len());
        for e in doc.edges {
            edges.push((e.v, e.w));
            constraints.push(e.pi);
        }
        Self::new(
            doc.v_count,
            doc.w_count,
            doc.sigma_v,
            doc.sigma_w,
            edges,
            constraints,
        )
    }
}

#[derive(Serialize, Deserialize)]
struct LabelCoverJson {
    v_count: usize,
    w_count: usize,
    sigma_v: usize,
    sigma_w: usize,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    v: usize,
    w: usize,
    pi: Vec<usize>,
}

/// A total assignment of labels to both vertex sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Labeling {
    pub v_labels: Vec<usize>,
    pub w_labels: Vec<usize>,
}

impl Labeling {
    pub fn validate_for(&self, lc: &LabelCoverInstance) -> Result<(), ReduceError> {
        if self.v_labels.len() != lc.v_count || self.w_labels.len() != lc.w_count {
            return Err(ReduceError::InvalidLabeling(format!(
                "labeling covers {}/{} vertices, instance has {}/{}",
                self.v_labels.len(),
                self.w_labels.len(),
                lc.v_count,
                lc.w_count
            )));
        }
        if let Some(&bad) = self.v_labels.iter().find(|&&l| l >= lc.sigma_v) {
            return Err(ReduceError::InvalidLabeling(format!(
                "V label {bad} out of range [0, {})",
                lc.sigma_v
            )));
        }
        if let Some(&bad) = self.w_labels.iter().find(|&&l| l >= lc.sigma_w) {
            return Err(ReduceError::InvalidLabeling(format!(
                "W label {bad} out of range [0, {})",
                lc.sigma_w
            )));
        }
        Ok(())
    }
}

/// Fraction of edges satisfied by the labeling.
pub fn evaluate_labeling(lc: &LabelCoverInstance, sigma: &Labeling) -> Result<f64, ReduceError> {
    sigma.validate_for(lc)?;
    let satisfied = lc
        .edges
        .iter()
        .zip(&lc.constraints)
        .filter(|(&(v, w), table)| table[sigma.v_labels[v]] == sigma.w_labels[w])
        .count();
    Ok(satisfied as f64 / lc.edge_count() as f64)
}

/// Canonical reduction from a valid 3SAT(5) formula: V = clauses with the 7
/// satisfying assignments of each clause as labels, W = variables with
/// boolean labels, one edge per (clause, variable) incidence, and each edge
/// projecting a clause assignment to the truth value it gives the variable.
///
/// The 7 satisfying assignments of a clause are indexed by the 3-bit value
/// of the literal truth pattern `(lit1, lit2, lit3)` in ascending order;
/// pattern 0 (all literals false) is the one falsifying assignment, so label
/// `i` corresponds to pattern `i + 1`.
pub fn sat_to_labelcover(formula: &CnfFormula) -> Result<LabelCoverInstance, ReduceError> {
    let report = super::cnf::validate_3sat5(formula);
    if !report.is_valid() {
        return Err(ReduceError::NotSat5(report.violations.join("; ")));
    }
    let v_count = formula.clauses.len();
    let w_count = formula.num_vars;
    let sigma_v = 7;
    let sigma_w = 2;
    let mut edges = Vec::with_capacity(3 * v_count);
    let mut constraints = Vec::with_capacity(3 * v_count);
    for (c, clause) in formula.clauses.iter().enumerate() {
        for (position, lit) in clause.iter().enumerate() {
            edges.push((c, lit.var));
            let table: Vec<usize> = (0..sigma_v)
                .map(|label| {
                    let pattern = label + 1;
                    let literal_truth = (pattern >> (2 - position)) & 1 == 1;
                    let value = literal_truth == lit.positive;
                    value as usize
                })
                .collect();
            constraints.push(table);
        }
    }
    LabelCoverInstance::new(v_count, w_count, sigma_v, sigma_w, edges, constraints)
}

/// The labeling induced by a satisfying assignment: each clause gets the
/// index of the satisfying assignment the global assignment restricts to,
/// each variable its truth value.
pub fn labeling_from_assignment(
    formula: &CnfFormula,
    assignment: &[bool],
) -> Result<Labeling, ReduceError> {
    if assignment.len() != formula.num_vars {
        return Err(ReduceError::InvalidLabeling(format!(
            "assignment covers {} variables, formula has {}",
            assignment.len(),
            formula.num_vars
        )));
    }
    let mut v_labels = Vec::with_capacity(formula.clauses.len());
    for (c, clause) in formula.clauses.iter().enumerate() {
        let mut pattern = 0usize;
        for (position, lit) in clause.iter().enumerate() {
            if lit.evaluate(assignment) {
                pattern |= 1 << (2 - position);
            }
        }
        if pattern == 0 {
            return Err(ReduceError::UnsatisfiedClause { clause: c });
        }
        v_labels.push(pattern - 1);
    }
    let w_labels = assignment.iter().map(|&b| b as usize).collect();
    Ok(Labeling { v_labels, w_labels })
}

fn checked_pow(base: usize, exp: usize, what: &str) -> Result<usize, ReduceError> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .ok_or_else(|| ReduceError::SizeOverflow(format!("{what}: {base}^{exp} overflows")))?;
    }
    Ok(acc)
}

/// Digits of `index` in the given base, most significant coordinate first.
pub(crate) fn decode_tuple(index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % base;
        rest /= base;
    }
    digits
}

/// Inverse of [`decode_tuple`].
pub(crate) fn encode_tuple(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// The `ell`-fold Cartesian power: vertices, edges, and alphabets are
/// `ell`-tuples encoded as mixed-radix integers (first coordinate most
/// significant), and a tuple edge is satisfied exactly when every coordinate
/// edge is.
pub fn repeat(
    lc: &LabelCoverInstance,
    ell: usize,
    cell_cap: usize,
) -> Result<LabelCoverInstance, ReduceError> {
    if ell == 0 {
        return Err(ReduceError::BadParameters("ell must be >= 1".into()));
    }
    let v_count = checked_pow(lc.v_count, ell, "|V^ell|")?;
    let w_count = checked_pow(lc.w_count, ell, "|W^ell|")?;
    let edge_count = checked_pow(lc.edge_count(), ell, "|E^ell|")?;
    let sigma_v = checked_pow(lc.sigma_v, ell, "sigma_v^ell")?;
    let sigma_w = checked_pow(lc.sigma_w, ell, "sigma_w^ell")?;
    let cells = edge_count
        .checked_mul(sigma_v)
        .ok_or_else(|| ReduceError::SizeOverflow("constraint cells overflow".into()))?;
    if cells > cell_cap {
        return Err(ReduceError::SizeOverflow(format!(
            "{cells} constraint cells exceed the cap of {cell_cap}"
        )));
    }

    let mut edges = Vec::with_capacity(edge_count);
    let mut constraints = Vec::with_capacity(edge_count);
    for edge_index in 0..edge_count {
        let edge_digits = decode_tuple(edge_index, lc.edge_count(), ell);
        let v_digits: Vec<usize> = edge_digits.iter().map(|&e| lc.edges[e].0).collect();
        let w_digits: Vec<usize> = edge_digits.iter().map(|&e| lc.edges[e].1).collect();
        edges.push((
            encode_tuple(&v_digits, lc.v_count),
            encode_tuple(&w_digits, lc.w_count),
        ));
        let table: Vec<usize> = (0..sigma_v)
            .map(|label| {
                let label_digits = decode_tuple(label, lc.sigma_v, ell);
                let out_digits: Vec<usize> = edge_digits
                    .iter()
                    .zip(&label_digits)
                    .map(|(&e, &i)| lc.constraints[e][i])
                    .collect();
                encode_tuple(&out_digits, lc.sigma_w)
            })
            .collect();
        constraints.push(table);
    }
    LabelCoverInstance::new(v_count, w_count, sigma_v, sigma_w, edges, constraints)
}

/// Lifts a base labeling to the `ell`-fold power coordinatewise.
pub fn lift_labeling(
    lc: &LabelCoverInstance,
    sigma: &Labeling,
    ell: usize,
) -> Result<Labeling, ReduceError> {
    sigma.validate_for(lc)?;
    let v_count = checked_pow(lc.v_count, ell, "|V^ell|")?;
    let w_count = checked_pow(lc.w_count, ell, "|W^ell|")?;
    let v_labels = (0..v_count)
        .map(|v| {
            let digits = decode_tuple(v, lc.v_count, ell);
            let labels: Vec<usize> = digits.iter().map(|&d| sigma.v_labels[d]).collect();
            encode_tuple(&labels, lc.sigma_v)
        })
        .collect();
    let w_labels = (0..w_count)
        .map(|w| {
            let digits = decode_tuple(w, lc.w_count, ell);
            let labels: Vec<usize> = digits.iter().map(|&d| sigma.w_labels[d]).collect();
            encode_tuple(&labels, lc.sigma_w)
        })
        .collect();
    Ok(Labeling { v_labels, w_labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::reduction::cnf::{find_satisfying_assignment, parse_dimacs};

    fn fixture_lc() -> LabelCoverInstance {
        sat_to_labelcover(&parse_dimacs(fixtures::SAT5_N3_DIMACS).unwrap()).unwrap()
    }

    #[test]
    fn fixture_shape() {
        let lc = fixture_lc();
        assert_eq!(lc.v_count, 5);
        assert_eq!(lc.w_count, 3);
        assert_eq!(lc.edge_count(), 15);
        assert_eq!(lc.sigma_v, 7);
        assert_eq!(lc.sigma_w, 2);
        assert_eq!(lc.v_degree, 3);
        assert_eq!(lc.w_degree, 5);
    }

    #[test]
    fn projection_tables_match_enumeration() {
        // Clause (x1 or not-x2 or x3): the assignment (T, T, F) makes the
        // literal pattern (T, F, F) = 4, so it has label 3; the x2 edge must
        // project label 3 to "true".
        let f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n").unwrap();
        let clause = &f.clauses[0];
        let assignment = [true, true, false];
        let mut pattern = 0usize;
        for (p, lit) in clause.iter().enumerate() {
            if lit.evaluate(&assignment) {
                pattern |= 1 << (2 - p);
            }
        }
        assert_eq!(pattern, 4);
        let lc = LabelCoverInstance::new(
            1,
            3,
            7,
            2,
            vec![(0, 0), (0, 1), (0, 2)],
            sat_to_labelcover_tables(&f),
        )
        .unwrap();
        // Edge 1 is the x2 incidence; label 3 (= pattern 4) gives x2 "true".
        assert_eq!(lc.constraints[1][3], 1);
    }

    fn sat_to_labelcover_tables(f: &CnfFormula) -> Vec<Vec<usize>> {
        let mut tables = Vec::new();
        for clause in &f.clauses {
            for (position, lit) in clause.iter().enumerate() {
                tables.push(
                    (0..7)
                        .map(|label| {
                            let pattern = label + 1;
                            let truth = (pattern >> (2 - position)) & 1 == 1;
                            (truth == lit.positive) as usize
                        })
                        .collect(),
                );
            }
        }
        tables
    }

    #[test]
    fn satisfying_assignment_satisfies_all_edges() {
        let f = parse_dimacs(fixtures::SAT5_N3_DIMACS).unwrap();
        let lc = sat_to_labelcover(&f).unwrap();
        let a = find_satisfying_assignment(&f).unwrap().unwrap();
        let sigma = labeling_from_assignment(&f, &a).unwrap();
        assert_eq!(evaluate_labeling(&lc, &sigma).unwrap(), 1.0);
    }

    #[test]
    fn repeat_once_is_identity() {
        let lc = fixture_lc();
        let lifted = repeat(&lc, 1, DEFAULT_REPEAT_CELL_CAP).unwrap();
        assert_eq!(lc, lifted);
    }

    #[test]
    fn repeat_twice_shape() {
        let lc = fixture_lc();
        let squared = repeat(&lc, 2, DEFAULT_REPEAT_CELL_CAP).unwrap();
        assert_eq!(squared.v_count, 25);
        assert_eq!(squared.w_count, 9);
        assert_eq!(squared.edge_count(), 225);
        assert_eq!(squared.sigma_v, 49);
        assert_eq!(squared.sigma_w, 4);
        assert_eq!(squared.v_degree, 9);
        assert_eq!(squared.w_degree, 25);
    }

    #[test]
    fn lifted_labeling_satisfies_power() {
        let f = parse_dimacs(fixtures::SAT5_N3_DIMACS).unwrap();
        let lc = sat_to_labelcover(&f).unwrap();
        let a = find_satisfying_assignment(&f).unwrap().unwrap();
        let sigma = labeling_from_assignment(&f, &a).unwrap();
        let squared = repeat(&lc, 2, DEFAULT_REPEAT_CELL_CAP).unwrap();
        let lifted = lift_labeling(&lc, &sigma, 2).unwrap();
        assert_eq!(evaluate_labeling(&squared, &lifted).unwrap(), 1.0);
    }

    #[test]
    fn repeat_cell_cap_enforced() {
        let lc = fixture_lc();
        assert!(matches!(
            repeat(&lc, 3, 1000),
            Err(ReduceError::SizeOverflow(_))
        ));
    }

    #[test]
    fn brute_force_optimum_on_toy_instance() {
        // 2x2 complete bipartite with one anti-identity constraint: the best
        // of the 16 labelings satisfies 3 of 4 edges.
        let lc = LabelCoverInstance::new(
            2,
            2,
            2,
            2,
            vec![(0, 0), (0, 1), (1, 0), (1, 1)],
            vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let mut best = 0.0f64;
        for bits in 0..16usize {
            let sigma = Labeling {
                v_labels: vec![bits & 1, (bits >> 1) & 1],
                w_labels: vec![(bits >> 2) & 1, (bits >> 3) & 1],
            };
            best = best.max(evaluate_labeling(&lc, &sigma).unwrap());
        }
        assert!((best - 0.75).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let lc = fixture_lc();
        let parsed = LabelCoverInstance::from_json(&lc.to_json()).unwrap();
        assert_eq!(lc, parsed);
    }

    #[test]
    fn rejects_non_biregular() {
        let err = LabelCoverInstance::new(
            2,
            1,
            2,
            2,
            vec![(0, 0)],
            vec![vec![0, 1]],
        )
        .unwrap_err();
        assert!(matches!(err, ReduceError::InvalidLabelCover(_)));
    }

    #[test]
    fn label_out_of_range_rejected() {
        let lc = fixture_lc();
        let sigma = Labeling {
            v_labels: vec![7; 5],
            w_labels: vec![0; 3],
        };
        assert!(matches!(
            evaluate_labeling(&lc, &sigma),
            Err(ReduceError::InvalidLabeling(_))
        ));
    }
}
