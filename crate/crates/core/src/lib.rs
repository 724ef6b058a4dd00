//! Finite-element mode solver for rectangular waveguide cross sections.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`] builds structured, one-directional triangulations of a rectangle
//!   with globally numbered quadratic or cubic Lagrange nodes.
//! * [`element`] holds the Lagrange basis on a triangle, the closed-form cubic
//!   elemental matrices and an independent exact-integration oracle.
//! * [`assembly`] scatters elemental matrices into the scalar Helmholtz system
//!   and the three-component magnetic-field system.
//! * [`eigen`] solves the dense generalized symmetric-definite eigenproblem.
//! * [`scenarios`] defines the benchmark guides and their reference solutions.

pub mod assembly;
pub mod eigen;
pub mod element;
pub mod error;
pub mod mesh;
pub mod scenarios;

pub use element::{ElementGeometry, ElementMatrices, MatrixKind, Order};
pub use error::{Error, Result};
pub use mesh::{generate_rect_mesh, Diagonal, Point2, TriMesh};

pub use assembly::{assemble_scalar, assemble_vector, MaterialSpec, ScalarSystem, VectorSystem};
pub use eigen::{filter_modes, solve_gen_sym, DistinctMode, GeneralizedEigenProblem, ModeSet};
pub use scenarios::{run_scenario, ComparisonReport, Scenario, ScenarioKind, ScenarioRun};
