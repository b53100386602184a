//! Slow reference implementations used to cross-check the solvers.
//!
//! Nothing here shares search code with the main solvers: stable models are
//! found by trying every subset against the textual reduct, and world views
//! by trying every non-empty set of interpretations as a candidate.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::founded::{has_justifying_rule, UnfoundedPair};
use crate::modal::{subjective_reduct, WorldView};
use crate::objective::{classical_satisfies, objective_reduct, Interpretation};
use crate::semantics::{Limits, Semantics};
use crate::syntax::{Atom, Base, Literal, Modality, ObjectiveLiteral, Program, Rule};

fn subsets(atoms: &[Atom]) -> Vec<Interpretation> {
    (0u64..1 << atoms.len())
        .map(|m| {
            Interpretation::new(
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| m >> k & 1 == 1)
                    .map(|(_, a)| a.clone()),
            )
        })
        .collect()
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Capacity { what, size: n, cap });
    }
    Ok(())
}

/// Stable models by testing every subset of the atom universe.
pub fn stable_models_all_subsets(program: &Program) -> Result<BTreeSet<Interpretation>> {
    let atoms: Vec<Atom> = program.atom_universe().into_iter().collect();
    check_cap("subset enumeration of stable models", atoms.len(), 12)?;
    let candidates = subsets(&atoms);
    let mut out = BTreeSet::new();
    for i in &candidates {
        let reduct = objective_reduct(program, i)?;
        if !classical_satisfies(i, &reduct)? {
            continue;
        }
        let mut minimal = true;
        for j in &candidates {
            if j != i && j.is_subset(i) && classical_satisfies(j, &reduct)? {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.insert(i.clone());
        }
    }
    Ok(out)
}

fn constant(negated: bool, value: bool) -> Literal {
    Literal::Objective(ObjectiveLiteral {
        negations: negated as u8,
        base: if value { Base::True } else { Base::False },
    })
}

/// The reduct written directly against a candidate view.
fn reduct_for_view(program: &Program, wv: &WorldView, semantics: Semantics) -> Program {
    if semantics == Semantics::G91 {
        return subjective_reduct(program, wv, None);
    }
    program
        .rules()
        .iter()
        .map(|r| Rule {
            head: r.head.clone(),
            body: r
                .body
                .iter()
                .map(|l| match l {
                    Literal::Subjective(s) => {
                        let k = wv.satisfies(&s.core());
                        match (semantics, k, s.negated) {
                            (_, false, neg) => constant(neg, false),
                            (Semantics::G11, true, true) => constant(true, true),
                            (Semantics::K15, true, true) => Literal::Objective(s.inner.negated()),
                            _ => Literal::Objective(s.inner.clone()),
                        }
                    }
                    other => other.clone(),
                })
                .collect(),
            pos: r.pos,
        })
        .collect()
}

/// World views found by testing every non-empty set of interpretations W
/// for W = SM(Π_W).
pub fn brute_force_world_views(
    program: &Program,
    semantics: Semantics,
    limits: &Limits,
) -> Result<BTreeSet<WorldView>> {
    let atoms: Vec<Atom> = program.atom_universe().into_iter().collect();
    check_cap(
        "brute-force world-view enumeration",
        atoms.len(),
        limits.max_brute_force_atoms.min(4),
    )?;
    if semantics != Semantics::G91 {
        for r in program.rules() {
            if let Some(s) = r.body_sub().find(|s| s.modality == Modality::M) {
                return Err(Error::MUnsupported {
                    semantics,
                    literal: s.to_string(),
                });
            }
        }
    }
    let base = match semantics {
        Semantics::G91 | Semantics::G11 | Semantics::K15 => semantics,
        Semantics::S17 => Semantics::K15,
        other => panic!("no brute-force oracle for {other}"),
    };
    let points = subsets(&atoms);
    let mut out = BTreeSet::new();
    for mask in 1u64..1 << points.len() {
        let wv = WorldView::new(
            points
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, i)| i.clone()),
        )
        .expect("non-empty mask");
        let reduct = reduct_for_view(program, &wv, base);
        if stable_models_all_subsets(&reduct)? == *wv.interpretations() {
            out.insert(wv);
        }
    }
    if semantics == Semantics::S17 {
        let phi = |w: &WorldView| -> BTreeSet<String> {
            program
                .rules()
                .iter()
                .flat_map(|r| r.body_sub())
                .filter(|s| s.modality == Modality::K)
                .map(|s| s.core().not())
                .filter(|l| w.satisfies(l))
                .map(|l| l.to_string())
                .collect()
        };
        let all: Vec<(WorldView, BTreeSet<String>)> = out
            .into_iter()
            .map(|w| {
                let p = phi(&w);
                (w, p)
            })
            .collect();
        out = all
            .iter()
            .filter(|(_, p)| !all.iter().any(|(_, q)| q.is_superset(p) && q != p))
            .map(|(w, _)| w.clone())
            .collect();
    }
    Ok(out)
}

/// Whether an unfounded set of eligible pairs exists, by trying every
/// candidate Y: such a set exists iff, for some Y, the eligible pairs with
/// X ⊆ Y that are unjustified w.r.t. Y cover Y.
pub fn unfounded_set_exists(program: &Program, wv: &WorldView) -> Result<bool> {
    let mut atoms = program.atom_universe();
    for i in wv.iter() {
        atoms.extend(i.iter().cloned());
    }
    let atoms: Vec<Atom> = atoms.into_iter().collect();
    check_cap("brute-force unfounded-set search", atoms.len(), 8)?;
    let all = subsets(&atoms);
    for y in all.iter().filter(|y| !y.is_empty()) {
        let mut covered: BTreeSet<Atom> = BTreeSet::new();
        for x in all.iter().filter(|x| !x.is_empty() && x.is_subset(y)) {
            for i in wv.iter() {
                if x.atoms().is_disjoint(i.atoms()) {
                    continue;
                }
                let pair = UnfoundedPair {
                    x: x.atoms().clone(),
                    i: i.clone(),
                };
                if !has_justifying_rule(program, wv, &pair, y.atoms()) {
                    covered.extend(x.iter().cloned());
                }
            }
        }
        if covered == *y.atoms() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::stable_models;
    use crate::syntax::parse_program;

    fn wv(sets: &[&[&str]]) -> WorldView {
        WorldView::new(
            sets.iter()
                .map(|s| s.iter().map(|a| Atom::prop(*a)).collect::<Interpretation>()),
        )
        .unwrap()
    }

    #[test]
    fn subset_stable_models_match() {
        for text in [
            "a | b. c :- a, not d. d :- b.",
            "a :- not b. b :- not a.",
            "a :- a.",
            "a :- not not a.",
        ] {
            let p = parse_program(text).unwrap();
            assert_eq!(
                stable_models_all_subsets(&p).unwrap(),
                stable_models(&p, &Limits::default()).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn brute_force_counterexamples() {
        let limits = Limits::default();
        let pi5 = parse_program("a | b. c :- K a. :- not c.").unwrap();
        assert!(brute_force_world_views(&pi5, Semantics::G91, &limits)
            .unwrap()
            .is_empty());
        assert_eq!(
            brute_force_world_views(&pi5, Semantics::G11, &limits).unwrap(),
            [wv(&[&["a", "c"]])].into()
        );
        let ka = parse_program("a :- K a.").unwrap();
        assert_eq!(
            brute_force_world_views(&ka, Semantics::G91, &limits).unwrap(),
            [wv(&[&[]]), wv(&[&["a"]])].into()
        );
    }

    #[test]
    fn unfounded_oracle() {
        let ka = parse_program("a :- K a.").unwrap();
        assert!(unfounded_set_exists(&ka, &wv(&[&["a"]])).unwrap());
        assert!(!unfounded_set_exists(&ka, &wv(&[&[]])).unwrap());
    }
}
