//! Test-matrix generators, experiment runners and the flat-file formats
//! behind the command-line tool.

mod experiment;
mod io;
mod recipe;
mod suites;

pub use experiment::{
    execute, run_experiment, verify_reports, ExperimentKind, ExperimentSpec, ARTIFACT_VERSION,
};
pub use io::{
    matrix_to_string, parse_matrix, read_matrix, write_matrix, write_table, Cell, ResultTable,
};
pub use recipe::{
    generate_matrix, generate_start, Matrix, MatrixKind, MatrixRecipe, StartKind,
    StartVectorRecipe, SCOTT_LIKE_SCALE,
};
pub use suites::{
    adversary_suite, chebyshev_worst_case, linear_witness_case, projection_lemma_suite,
    relative_residual, ChebyshevCase, LinearWitness, SuiteReport,
};
