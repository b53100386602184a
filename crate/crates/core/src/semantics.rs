use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::modal::WorldView;
use crate::syntax::Program;
use crate::{eht, founded, reduct};

/// The six world-view semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    G91,
    G11,
    F15,
    K15,
    S17,
    C19,
}

impl Semantics {
    /// Column order of the property matrix.
    pub const ALL: [Semantics; 6] = [
        Semantics::G91,
        Semantics::G11,
        Semantics::F15,
        Semantics::K15,
        Semantics::S17,
        Semantics::C19,
    ];

    /// Whether `M` literals are handled natively.
    pub fn supports_m(self) -> bool {
        matches!(self, Semantics::G91 | Semantics::F15 | Semantics::C19)
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::G91 => "G91",
            Semantics::G11 => "G11",
            Semantics::F15 => "F15",
            Semantics::K15 => "K15",
            Semantics::S17 => "S17",
            Semantics::C19 => "C19",
        })
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "g91" => Ok(Semantics::G91),
            "g11" => Ok(Semantics::G11),
            "f15" => Ok(Semantics::F15),
            "k15" => Ok(Semantics::K15),
            "s17" => Ok(Semantics::S17),
            "c19" => Ok(Semantics::C19),
            other => Err(format!(
                "unknown semantics `{other}` (expected g91, g11, k15, s17, f15 or c19)"
            )),
        }
    }
}

/// Caps on the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Atoms in a stable-model search.
    pub max_atoms: usize,
    /// Distinct subjective-literal cores in a guess enumeration.
    pub max_guess_cores: usize,
    /// Atoms for enumerating every candidate world view directly.
    pub max_brute_force_atoms: usize,
    /// Atoms for the EHT searches.
    pub max_eht_atoms: usize,
    /// Candidate ⟨X, I⟩ pairs in the unfounded-set fixpoint.
    pub max_unfounded_pairs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_atoms: 20,
            max_guess_cores: 20,
            max_brute_force_atoms: 4,
            max_eht_atoms: 4,
            max_unfounded_pairs: 1 << 22,
        }
    }
}

/// World views of a ground program under any of the six semantics.
pub fn solve(
    program: &Program,
    semantics: Semantics,
    limits: &Limits,
) -> Result<BTreeSet<WorldView>> {
    match semantics {
        Semantics::G91 | Semantics::G11 | Semantics::K15 => {
            reduct::world_views(program, semantics, limits)
        }
        Semantics::S17 => reduct::s17_world_views(program, limits),
        Semantics::F15 => eht::f15_world_views(program, limits),
        Semantics::C19 => founded::c19_world_views(program, limits),
    }
}
