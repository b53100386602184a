//! Unfounded sets and C19 world views.
//!
//! Candidate pairs ⟨X, I⟩ are restricted to I ∈ W and X ∩ I ≠ ∅. The
//! greatest unfounded set is found by deleting justified pairs until
//! nothing changes: deleting a pair only shrinks Y, which only makes the
//! subjective condition harder to meet for the survivors.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modal::{body_at, WorldView};
use crate::objective::{Interpretation, Universe};
use crate::reduct::world_views;
use crate::semantics::{Limits, Semantics};
use crate::syntax::{Atom, Program, Rule};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct UnfoundedPair {
    #[serde(rename = "X")]
    pub x: BTreeSet<Atom>,
    #[serde(rename = "I")]
    pub i: Interpretation,
}

impl fmt::Display for UnfoundedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x: Vec<String> = self.x.iter().map(Atom::to_string).collect();
        write!(f, "<{{{}}}, {}>", x.join(", "), self.i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnfoundedSet {
    pub pairs: BTreeSet<UnfoundedPair>,
    #[serde(rename = "Y")]
    pub y: BTreeSet<Atom>,
}

impl UnfoundedSet {
    /// `None` for an empty pair set.
    pub fn new(pairs: BTreeSet<UnfoundedPair>) -> Option<Self> {
        if pairs.is_empty() {
            return None;
        }
        let y = pairs.iter().flat_map(|p| p.x.iter().cloned()).collect();
        Some(UnfoundedSet { pairs, y })
    }
}

fn justifies(r: &Rule, wv: &WorldView, pair: &UnfoundedPair, y: &BTreeSet<Atom>) -> bool {
    r.head.iter().any(|a| pair.x.contains(a))
        && body_at(wv, &pair.i, r)
        && r.positive_body_atoms().is_disjoint(&pair.x)
        && r.head
            .iter()
            .all(|a| pair.x.contains(a) || !pair.i.contains(a))
        && r.positive_subjective_atoms().is_disjoint(y)
}

/// Whether some rule with a head atom in X justifies the pair w.r.t. `y`.
pub fn has_justifying_rule(
    program: &Program,
    wv: &WorldView,
    pair: &UnfoundedPair,
    y: &BTreeSet<Atom>,
) -> bool {
    program.rules().iter().any(|r| justifies(r, wv, pair, y))
}

struct MaskRule {
    head: u64,
    pos_obj: u64,
    pos_sub: u64,
    /// body truth at each point of the view
    body: Vec<bool>,
}

fn universe_of(program: &Program, wv: &WorldView) -> Universe {
    let mut atoms = program.atom_universe();
    for i in wv.iter() {
        atoms.extend(i.iter().cloned());
    }
    Universe::new(atoms)
}

fn pair_count(n: usize, points: &[u64]) -> usize {
    points
        .iter()
        .map(|i| (1usize << n) - (1usize << (n - i.count_ones() as usize)))
        .sum()
}

/// The ⊆-greatest set of eligible pairs that is unfounded, or `None`.
pub fn greatest_unfounded_set(
    program: &Program,
    wv: &WorldView,
    limits: &Limits,
) -> Result<Option<UnfoundedSet>> {
    let u = universe_of(program, wv);
    u.check(
        "unfounded-set search over the atom universe",
        limits.max_atoms.min(24),
    )?;
    let n = u.len();
    let points: Vec<u64> = wv.iter().map(|i| u.encode(i)).collect();
    let total = pair_count(n, &points);
    if total > limits.max_unfounded_pairs {
        return Err(Error::Capacity {
            what: "unfounded-set candidate pairs",
            size: total,
            cap: limits.max_unfounded_pairs,
        });
    }
    let rules: Vec<MaskRule> = program
        .rules()
        .iter()
        .filter(|r| !r.head.is_empty())
        .map(|r| MaskRule {
            head: u.mask_of(r.head.iter()),
            pos_obj: u.mask_of(r.positive_body_atoms().iter()),
            pos_sub: u.mask_of(r.positive_subjective_atoms().iter()),
            body: wv.iter().map(|i| body_at(wv, i, r)).collect(),
        })
        .collect();

    // (point index, X)
    let mut alive: Vec<(usize, u64)> = Vec::with_capacity(total);
    for (k, &i) in points.iter().enumerate() {
        for x in 1..=u.full() {
            if x & i != 0 {
                alive.push((k, x));
            }
        }
    }
    loop {
        let y = alive.iter().fold(0u64, |acc, &(_, x)| acc | x);
        let before = alive.len();
        alive.retain(|&(k, x)| {
            let i = points[k];
            !rules.iter().any(|r| {
                r.head & x != 0
                    && r.body[k]
                    && r.pos_obj & x == 0
                    && r.head & !x & i == 0
                    && r.pos_sub & y == 0
            })
        });
        if alive.len() == before {
            break;
        }
    }
    let wv_points: Vec<&Interpretation> = wv.iter().collect();
    Ok(UnfoundedSet::new(
        alive
            .into_iter()
            .map(|(k, x)| UnfoundedPair {
                x: u.decode(x).atoms().clone(),
                i: wv_points[k].clone(),
            })
            .collect(),
    ))
}

pub fn is_founded(program: &Program, wv: &WorldView, limits: &Limits) -> Result<bool> {
    Ok(greatest_unfounded_set(program, wv, limits)?.is_none())
}

/// C19: the founded G91 world views.
pub fn c19_world_views(program: &Program, limits: &Limits) -> Result<BTreeSet<WorldView>> {
    let mut out = BTreeSet::new();
    for wv in world_views(program, Semantics::G91, limits)? {
        if is_founded(program, &wv, limits)? {
            out.insert(wv);
        }
    }
    Ok(out)
}
