//! Tropical linear algebra over selective idempotent semifields, with a
//! complete solver for the two-sided equation `A ⊗ x = B ⊗ y`.
//!
//! ```
//! use tropsolve_core::{parse_matrix, solve_all, Semifield, SolveOptions};
//!
//! let sf = Semifield::max_plus();
//! let a = parse_matrix(sf, "3 . 0\n1 1 0\n. 1 2").unwrap();
//! let b = parse_matrix(sf, "1 1\n3 2\n3 1").unwrap();
//! let report = solve_all(&a, &b, &SolveOptions::default()).unwrap();
//! assert!(report.feasible);
//! ```

pub mod error;
pub mod inequality;
pub mod matrix;
pub mod oracle;
pub mod semifield;
pub mod text;
pub mod twosided;

pub use error::{Error, Result};
pub use inequality::{
    block_kleene, block_matrix, solve_pair_system, solve_x_leq, ConeBasis, Outcome, PairBasis,
};
pub use matrix::{Matrix, Vector};
pub use oracle::{
    grid_oracle, membership_test, principal_y, verify_solution, GridReport, VerifyResult,
    VerifyStatus,
};
pub use semifield::{Arithmetic, Scalar, Semifield, SemifieldKind, DEFAULT_TOLERANCE};
pub use text::{parse_matrices, parse_matrix, parse_vector};
pub use twosided::{
    build_basis, check_condition, enumerate_selections, sample_solution, solve_all, BasisRecord,
    Enumeration, RowSelection, Sample, SelectionPair, Side, SolutionBasis, SolveOptions,
    SolveReport, Strategy, Witness,
};
