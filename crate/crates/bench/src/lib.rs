//! Benchmark fixtures shared by the criterion targets.

use wavefem::{assemble_vector, GeneralizedEigenProblem, Order, Scenario, ScenarioKind, TriMesh};

/// Mesh and field system of a reference guide, ready to solve.
pub fn reference_problem(kind: ScenarioKind, order: Order, cells: usize) -> (TriMesh, GeneralizedEigenProblem) {
    let s = Scenario::new(kind, order).with_cells(cells, cells);
    let mesh = s.mesh().expect("reference mesh");
    let sys = assemble_vector(&mesh, &s.materials, s.kz).expect("reference system");
    let prob = GeneralizedEigenProblem::new(sys.a, sys.b).expect("square system");
    (mesh, prob)
}
