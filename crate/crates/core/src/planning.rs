//! Conformant planning as world-view existence.
//!
//! A plan (a set of action facts) is conformant when the domain plus the
//! actions plus `:- not K goal.` has a world view. In generate-define-test
//! form each action gets a choice rule `a :- not K not a`, objective uses of
//! actions in the domain are read through `K`, and the goal constraint
//! prunes the world views that do not reach the goal in every belief set.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::modal::WorldView;
use crate::semantics::{solve, Limits, Semantics};
use crate::syntax::{Atom, Literal, ObjectiveLiteral, Program, Rule, SubjectiveLiteral};

/// `:- not K goal.`
pub fn goal_constraint(goal: &Atom) -> Rule {
    Rule::constraint([Literal::Subjective(
        SubjectiveLiteral::k(ObjectiveLiteral::atom(goal.clone())).not(),
    )])
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanVerdict {
    pub actions: Vec<String>,
    pub conformant: bool,
    pub world_views: Vec<WorldView>,
}

/// Checks one candidate plan.
pub fn check_plan(
    domain: &Program,
    actions: &BTreeSet<Atom>,
    goal: &Atom,
    semantics: Semantics,
    limits: &Limits,
) -> Result<PlanVerdict> {
    let mut p = domain.clone();
    p.extend(actions.iter().cloned().map(Rule::fact));
    p.push(goal_constraint(goal));
    let views = solve(&p, semantics, limits)?;
    Ok(PlanVerdict {
        actions: actions.iter().map(Atom::to_string).collect(),
        conformant: !views.is_empty(),
        world_views: views.into_iter().collect(),
    })
}

/// Checks every subset of `actions`, smallest first.
pub fn check_all_plans(
    domain: &Program,
    actions: &[Atom],
    goal: &Atom,
    semantics: Semantics,
    limits: &Limits,
) -> Result<Vec<PlanVerdict>> {
    let mut subsets: Vec<BTreeSet<Atom>> = (0u64..1 << actions.len())
        .map(|m| {
            actions
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect();
    subsets.sort_by_key(|s| s.len());
    subsets
        .iter()
        .map(|s| check_plan(domain, s, goal, semantics, limits))
        .collect()
}

fn through_k(l: &Literal, actions: &BTreeSet<Atom>) -> Literal {
    match l {
        Literal::Objective(o) => match o.get_atom() {
            Some(a) if actions.contains(a) => {
                let k = SubjectiveLiteral::k(ObjectiveLiteral::atom(a.clone()));
                Literal::Subjective(if o.negations == 1 { k.not() } else { k })
            }
            _ => l.clone(),
        },
        other => other.clone(),
    }
}

/// Choice rules for the actions, the domain with action atoms read through
/// `K`, and the goal constraint.
pub fn generate_define_test(domain: &Program, actions: &[Atom], goal: &Atom) -> Program {
    let set: BTreeSet<Atom> = actions.iter().cloned().collect();
    let mut out = Program::default();
    for a in actions {
        out.push(Rule::new(
            [a.clone()],
            [Literal::Subjective(
                SubjectiveLiteral::k(ObjectiveLiteral::not(a.clone())).not(),
            )],
        ));
    }
    for r in domain.rules() {
        out.push(Rule {
            head: r.head.clone(),
            body: r.body.iter().map(|l| through_k(l, &set)).collect(),
            pos: r.pos,
        });
    }
    out.push(goal_constraint(goal));
    out
}

/// World views of the generate-define-test program.
pub fn generate_define_test_views(
    domain: &Program,
    actions: &[Atom],
    goal: &Atom,
    semantics: Semantics,
    limits: &Limits,
) -> Result<BTreeSet<WorldView>> {
    solve(
        &generate_define_test(domain, actions, goal),
        semantics,
        limits,
    )
}

/// Atoms of `program` whose predicate is `name`.
pub fn atoms_named(program: &Program, name: &str) -> Vec<Atom> {
    program
        .atom_universe()
        .into_iter()
        .filter(|a| a.name == name && !a.strong_neg)
        .collect()
}
