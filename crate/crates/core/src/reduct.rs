//! Reduct-based semantics (G91, G11, K15) and the S17 selection.
//!
//! A reduct depends on a candidate world view only through the truth of the
//! distinct subjective cores (`K l` / `M l` with the outer `not` stripped)
//! occurring in the program. The solver therefore guesses one boolean per
//! core, builds the reduct, computes its stable models `W`, and keeps `W`
//! when it is non-empty and re-evaluating every core against `W` reproduces
//! the guess.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::modal::WorldView;
use crate::objective::stable_models;
use crate::semantics::{Limits, Semantics};
use crate::syntax::{Base, Literal, Modality, ObjectiveLiteral, Program, Rule, SubjectiveLiteral};

/// Truth values for subjective cores.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModalGuess {
    assignment: BTreeMap<SubjectiveLiteral, bool>,
}

impl ModalGuess {
    pub fn new(assignment: impl IntoIterator<Item = (SubjectiveLiteral, bool)>) -> Self {
        ModalGuess {
            assignment: assignment.into_iter().map(|(l, v)| (l.core(), v)).collect(),
        }
    }

    /// The values `wv` actually gives to every core of `program`.
    pub fn from_view(program: &Program, wv: &WorldView) -> Self {
        ModalGuess::new(subjective_cores(program).into_iter().map(|c| {
            let v = wv.satisfies(&c);
            (c, v)
        }))
    }

    /// Value of a literal; the outer `not` flips the core's value. Cores
    /// missing from the guess read as false.
    pub fn value(&self, l: &SubjectiveLiteral) -> bool {
        self.assignment.get(&l.core()).copied().unwrap_or(false) != l.negated
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SubjectiveLiteral, bool)> {
        self.assignment.iter().map(|(k, v)| (k, *v))
    }

    /// `K l` true with `M l` false cannot happen in a non-empty view.
    fn consistent(&self) -> bool {
        self.assignment.iter().all(|(core, &v)| {
            if core.modality != Modality::K || !v {
                return true;
            }
            let m = SubjectiveLiteral::m(core.inner.clone());
            self.assignment.get(&m).copied().unwrap_or(true)
        })
    }
}

/// Distinct cores, in canonical order.
pub fn subjective_cores(program: &Program) -> BTreeSet<SubjectiveLiteral> {
    program
        .rules()
        .iter()
        .flat_map(|r| r.body_sub().map(SubjectiveLiteral::core))
        .collect()
}

fn constant(negated: bool, value: bool) -> Literal {
    Literal::Objective(ObjectiveLiteral {
        negations: negated as u8,
        base: if value { Base::True } else { Base::False },
    })
}

fn check_k_only(program: &Program, semantics: Semantics) -> Result<()> {
    for r in program.rules() {
        if let Some(s) = r.body_sub().find(|s| s.modality == Modality::M) {
            return Err(Error::MUnsupported {
                semantics,
                literal: s.to_string(),
            });
        }
    }
    Ok(())
}

fn reduce_literal(s: &SubjectiveLiteral, guess: &ModalGuess, semantics: Semantics) -> Literal {
    let core = guess.value(&s.core());
    match semantics {
        Semantics::G11 => {
            if !core {
                // K l false: `K l` -> #false, `not K l` -> not #false
                constant(s.negated, false)
            } else if s.negated {
                // `not K l` with K l true is unsatisfied; the rule goes
                constant(true, true)
            } else {
                Literal::Objective(s.inner.clone())
            }
        }
        Semantics::K15 => {
            if !core {
                constant(s.negated, false)
            } else if s.negated {
                Literal::Objective(s.inner.negated())
            } else {
                Literal::Objective(s.inner.clone())
            }
        }
        _ => constant(s.negated, core),
    }
}

/// The reduct of `program` for `semantics` ∈ {G91, G11, K15} under the
/// core values in `guess`.
///
/// * G91: every subjective literal becomes a truth constant.
/// * G11: false `K l` becomes `#false`; `not K l` with `K l` true makes the
///   body false; true `K l` becomes `l`.
/// * K15: false `K l` becomes `#false`; true `K l` becomes `l`, keeping an
///   outer `not`.
pub fn semantics_reduct(
    program: &Program,
    guess: &ModalGuess,
    semantics: Semantics,
) -> Result<Program> {
    match semantics {
        Semantics::G91 => {}
        Semantics::G11 | Semantics::K15 => check_k_only(program, semantics)?,
        other => panic!("{other} is not defined by a reduct"),
    }
    let mut out = Program::default();
    out.extra_atoms = program.extra_atoms.clone();
    for r in program.rules() {
        out.push(Rule {
            head: r.head.clone(),
            body: r
                .body
                .iter()
                .map(|l| match l {
                    Literal::Subjective(s) => reduce_literal(s, guess, semantics),
                    other => other.clone(),
                })
                .collect(),
            pos: r.pos,
        });
    }
    Ok(out)
}

/// World views under G91, G11 or K15 by guessing core values.
pub fn world_views(
    program: &Program,
    semantics: Semantics,
    limits: &Limits,
) -> Result<BTreeSet<WorldView>> {
    if semantics != Semantics::G91 {
        check_k_only(program, semantics)?;
    }
    let cores: Vec<SubjectiveLiteral> = subjective_cores(program).into_iter().collect();
    if cores.len() > limits.max_guess_cores.min(62) {
        return Err(Error::Capacity {
            what: "guess enumeration over subjective cores",
            size: cores.len(),
            cap: limits.max_guess_cores.min(62),
        });
    }
    let mut out = BTreeSet::new();
    for bits in 0u64..(1u64 << cores.len()) {
        let guess = ModalGuess::new(
            cores
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), bits >> i & 1 == 1)),
        );
        if !guess.consistent() {
            continue;
        }
        let reduct = semantics_reduct(program, &guess, semantics)?;
        let Some(wv) = WorldView::new(stable_models(&reduct, limits)?) else {
            continue;
        };
        if cores.iter().all(|c| wv.satisfies(c) == guess.value(c)) {
            out.insert(wv);
        }
    }
    Ok(out)
}

/// E_Π and the subset Φ_W satisfied by a view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicNegationSet {
    /// `not K l` for every `K l` core in the program.
    pub e_pi: BTreeSet<SubjectiveLiteral>,
    pub phi: BTreeSet<SubjectiveLiteral>,
}

impl EpistemicNegationSet {
    pub fn of(program: &Program, wv: &WorldView) -> Self {
        let e_pi: BTreeSet<SubjectiveLiteral> = subjective_cores(program)
            .into_iter()
            .filter(|c| c.modality == Modality::K)
            .map(SubjectiveLiteral::not)
            .collect();
        let phi = e_pi.iter().filter(|l| wv.satisfies(l)).cloned().collect();
        EpistemicNegationSet { e_pi, phi }
    }
}

/// Keeps the views whose Φ is not strictly contained in another's.
pub fn select_phi_maximal(program: &Program, views: BTreeSet<WorldView>) -> BTreeSet<WorldView> {
    let phis: Vec<(WorldView, BTreeSet<SubjectiveLiteral>)> = views
        .into_iter()
        .map(|w| {
            let phi = EpistemicNegationSet::of(program, &w).phi;
            (w, phi)
        })
        .collect();
    phis.iter()
        .filter(|(_, phi)| {
            !phis
                .iter()
                .any(|(_, other)| other.is_superset(phi) && other.len() > phi.len())
        })
        .map(|(w, _)| w.clone())
        .collect()
}

/// S17: K15 world views with ⊆-maximal Φ.
pub fn s17_world_views(program: &Program, limits: &Limits) -> Result<BTreeSet<WorldView>> {
    check_k_only(program, Semantics::S17)?;
    let k15 = world_views(program, Semantics::K15, limits)?;
    Ok(select_phi_maximal(program, k15))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Interpretation;
    use crate::syntax::{parse_program, Atom};

    fn prog(text: &str) -> Program {
        parse_program(text).unwrap()
    }

    fn wv(sets: &[&[&str]]) -> WorldView {
        WorldView::new(
            sets.iter()
                .map(|s| s.iter().map(|a| Atom::prop(*a)).collect::<Interpretation>()),
        )
        .unwrap()
    }

    fn views(list: &[&[&[&str]]]) -> BTreeSet<WorldView> {
        list.iter().map(|w| wv(w)).collect()
    }

    fn solve(text: &str, s: Semantics) -> BTreeSet<WorldView> {
        match s {
            Semantics::S17 => s17_world_views(&prog(text), &Limits::default()).unwrap(),
            _ => world_views(&prog(text), s, &Limits::default()).unwrap(),
        }
    }

    const PI4: &str = "a | b. c :- K a.";
    const PI5: &str = "a | b. c :- K a. :- not c.";
    const PI6: &str = "a | b. :- not K a.";

    fn k_a_true() -> ModalGuess {
        ModalGuess::new([(
            SubjectiveLiteral::k(ObjectiveLiteral::atom(Atom::prop("a"))),
            true,
        )])
    }

    #[test]
    fn g11_reducts() {
        let r = semantics_reduct(&prog(PI5), &k_a_true(), Semantics::G11).unwrap();
        assert_eq!(r, prog("a | b. c :- a. :- not c."));
        let r = semantics_reduct(&prog(PI4), &k_a_true(), Semantics::G11).unwrap();
        assert_eq!(r, prog("a | b. c :- a."));
    }

    #[test]
    fn g91_all_false_guess() {
        let p = prog("x :- K a, not K b, M c, not M d.");
        let r = semantics_reduct(&p, &ModalGuess::default(), Semantics::G91).unwrap();
        assert_eq!(
            r.to_string(),
            "x :- #false, not #false, #false, not #false.\n"
        );
    }

    #[test]
    fn k15_keeps_outer_not() {
        let p = prog("x :- not K a, not K not b.");
        let guess = ModalGuess::new([
            (
                SubjectiveLiteral::k(ObjectiveLiteral::atom(Atom::prop("a"))),
                true,
            ),
            (
                SubjectiveLiteral::k(ObjectiveLiteral::not(Atom::prop("b"))),
                true,
            ),
        ]);
        let r = semantics_reduct(&p, &guess, Semantics::K15).unwrap();
        assert_eq!(r.to_string(), "x :- not a, not not b.\n");
        let r = semantics_reduct(&p, &guess, Semantics::G11).unwrap();
        assert_eq!(r.to_string(), "x :- not #true, not #true.\n");
    }

    #[test]
    fn m_rejected_outside_g91() {
        let p = prog("a :- M b.");
        for s in [Semantics::G11, Semantics::K15] {
            assert!(matches!(
                semantics_reduct(&p, &ModalGuess::default(), s),
                Err(Error::MUnsupported { .. })
            ));
            assert!(matches!(
                world_views(&p, s, &Limits::default()),
                Err(Error::MUnsupported { .. })
            ));
        }
        assert!(s17_world_views(&p, &Limits::default()).is_err());
    }

    #[test]
    fn pi4_unique_view() {
        for s in [
            Semantics::G91,
            Semantics::G11,
            Semantics::K15,
            Semantics::S17,
        ] {
            assert_eq!(solve(PI4, s), views(&[&[&["a"], &["b"]]]), "{s}");
        }
    }

    #[test]
    fn pi5() {
        assert!(solve(PI5, Semantics::G91).is_empty());
        for s in [Semantics::G11, Semantics::K15, Semantics::S17] {
            assert_eq!(solve(PI5, s), views(&[&[&["a", "c"]]]), "{s}");
        }
    }

    #[test]
    fn self_support() {
        assert_eq!(
            solve("a :- K a.", Semantics::G91),
            views(&[&[&[]], &[&["a"]]])
        );
    }

    #[test]
    fn pi6() {
        assert!(solve(PI6, Semantics::G91).is_empty());
        assert_eq!(solve(PI6, Semantics::K15), views(&[&[&["a"]]]));
        assert_eq!(solve(PI6, Semantics::S17), views(&[&[&["a"]]]));
        assert!(solve(PI6, Semantics::G11).is_empty());
    }

    #[test]
    fn s17_without_k15_views() {
        assert!(solve("a :- not a.", Semantics::S17).is_empty());
    }

    #[test]
    fn s17_prefers_larger_phi() {
        // K15 views: [{a}] with Φ = {not K b} and [{b}] with Φ = {not K a};
        // incomparable, so both survive.
        let p = "a :- not K b. b :- not K a.";
        assert_eq!(solve(p, Semantics::K15), views(&[&[&["a"]], &[&["b"]]]));
        assert_eq!(solve(p, Semantics::K15), solve(p, Semantics::S17));
    }

    #[test]
    fn epistemic_negations() {
        let p = prog("a :- not K b, M c. d :- K b.");
        let e = EpistemicNegationSet::of(&p, &wv(&[&["a"]]));
        assert_eq!(e.e_pi.len(), 1);
        assert_eq!(e.phi.len(), 1);
        assert!(e.phi.is_subset(&e.e_pi));
    }
}
