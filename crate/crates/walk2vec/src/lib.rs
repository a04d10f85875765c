//! File formats, grid experiments and the command-line front end for
//! [`walk2vec_core`].

pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod manifest;

pub use error::{ExperimentError, FormatError};
pub use experiments::{run_cell, run_cell_methods, run_grid, CellResult, ExperimentGrid, Method, Problem};
