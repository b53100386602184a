use thiserror::Error;

use crate::semantics::Semantics;
use crate::syntax::{Rule, SourcePos};

#[derive(Debug, Error)]
pub enum Error {
    #[error("{pos}: {message}")]
    Syntax { pos: SourcePos, message: String },

    #[error("program has variables but no constants to instantiate them with")]
    NoConstants,

    #[error("{what} needs {size} but the limit is {cap}")]
    Capacity {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("not a splitting set: rule `{0}` violates both conditions")]
    NotASplittingSet(Rule),

    #[error("not an epistemic splitting set: rule `{0}` violates both conditions")]
    NotAnEpistemicSplittingSet(Rule),

    #[error("subjective literal in `{0}` where an objective construct is required")]
    SubjectiveLiteral(String),

    #[error("{semantics} is defined for K only; `{literal}` uses M (eliminate M first)")]
    MUnsupported {
        semantics: Semantics,
        literal: String,
    },

    #[error("program is not epistemically stratified: {0}")]
    NotStratified(String),

    #[error("point is not a member of the world view")]
    PointNotInView,

    #[error("layered evaluation disagrees with direct solving under {semantics}")]
    LayeredMismatch { semantics: Semantics },

    #[error("{0}")]
    Fixture(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
