//! Model-spec files, observation files and the `tele` command surface over
//! [`finality_core`].

pub mod commands;
pub mod dataset;
pub mod dsl;
pub mod render;
pub mod table;

pub use dataset::{load_dataset, DatasetError};
pub use dsl::{load_model, parse_model, Document, ModelSpec, SpecError};
