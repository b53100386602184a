//! World-view semantics for ground epistemic logic programs.
//!
//! The crate parses and grounds programs with `K`/`M` subjective literals,
//! computes world views under G91, G11, K15, S17, F15 and C19, and checks
//! epistemic splitting and related properties over fixtures and random
//! programs.

pub mod eht;
pub mod error;
pub mod fixtures;
pub mod founded;
pub mod generate;
pub mod modal;
pub mod objective;
pub mod oracle;
pub mod planning;
pub mod properties;
pub mod reduct;
pub mod semantics;
pub mod splitting;
pub mod syntax;

pub use error::{Error, Result};
pub use modal::{is_s5_model, modal_satisfies, project, subjective_reduct, WorldView};
pub use objective::{
    classical_satisfies, objective_reduct, objective_solutions, objective_split, stable_models,
    Interpretation, Placement, Side,
};
pub use semantics::{solve, Limits, Semantics};
pub use syntax::{load_program, parse_program, Atom, Literal, Program, Rule};
