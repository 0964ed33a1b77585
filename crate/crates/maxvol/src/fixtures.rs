//! Built-in instances used by the test suites and the CLI verification
//! commands.

use crate::reduction::LabelCoverInstance;

/// Satisfiable 3SAT(5) formula with 3 variables and 5 clauses; every clause
/// contains all three variables, so each variable occurs exactly five
/// times. The all-true literal positions are arranged so the assignment
/// (T, F, F) satisfies every clause.
pub const SAT5_N3_DIMACS: &str = "\
c satisfiable 3SAT(5) instance: 3 variables, 5 clauses
p cnf 3 5
2 3 1 0
3 2 1 0
-1 3 -2 0
3 -1 -2 0
-1 2 -3 0
";

/// Parsed form of [`SAT5_N3_DIMACS`].
pub fn sat5_n3() -> crate::reduction::CnfFormula {
    crate::reduction::parse_dimacs(SAT5_N3_DIMACS).expect("fixture is well-formed")
}

/// Tiny biregular Label Cover instances for brute-force probes, each paired
/// with a descriptive name. All fit the order-4 gadget (`ell = 1`) and give
/// matrix instances with at most 10 columns.
pub fn tiny_label_covers() -> Vec<(String, LabelCoverInstance)> {
    let id = vec![0, 1];
    let swap = vec![1, 0];
    let zero = vec![0, 0];
    let one = vec![1, 1];

    // Single edge, identity constraint: trivially satisfiable.
    let mut out = vec![(
        "single-edge-identity".to_string(),
        LabelCoverInstance::new(1, 1, 2, 2, vec![(0, 0)], vec![id.clone()]).unwrap(),
    )];

    // Two V vertices forcing one W vertex to opposite labels: optimum 1/2.
    out.push((
        "conflicting-constants".to_string(),
        LabelCoverInstance::new(
            2,
            1,
            2,
            2,
            vec![(0, 0), (1, 0)],
            vec![zero.clone(), one.clone()],
        )
        .unwrap(),
    ));

    // Complete 2x2 bipartite graph, all identity: satisfiable.
    out.push((
        "k22-identity".to_string(),
        LabelCoverInstance::new(
            2,
            2,
            2,
            2,
            vec![(0, 0), (0, 1), (1, 0), (1, 1)],
            vec![id.clone(), id.clone(), id.clone(), id.clone()],
        )
        .unwrap(),
    ));

    // Complete 2x2 bipartite graph with one anti-identity edge: optimum 3/4.
    out.push((
        "k22-one-swap".to_string(),
        LabelCoverInstance::new(
            2,
            2,
            2,
            2,
            vec![(0, 0), (0, 1), (1, 0), (1, 1)],
            vec![id.clone(), id.clone(), id.clone(), swap.clone()],
        )
        .unwrap(),
    ));

    // Three V vertices pulling one W vertex both ways: optimum 2/3.
    out.push((
        "three-against-one".to_string(),
        LabelCoverInstance::new(
            3,
            1,
            2,
            2,
            vec![(0, 0), (1, 0), (2, 0)],
            vec![zero.clone(), one.clone(), zero.clone()],
        )
        .unwrap(),
    ));

    // Single clause-variable edge with the 7-letter alphabet, projecting
    // parity: satisfiable.
    out.push((
        "seven-letter-edge".to_string(),
        LabelCoverInstance::new(
            1,
            1,
            7,
            2,
            vec![(0, 0)],
            vec![(0..7).map(|i| i % 2).collect()],
        )
        .unwrap(),
    ));

    out
}
