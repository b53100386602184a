use std::collections::BTreeSet;

use super::{Atom, Base, Literal, ObjectiveLiteral, Program, Rule, SubjectiveLiteral, Term};
use crate::error::{Error, Result};

/// Full Herbrand instantiation: every variable ranges over every constant in
/// the program. No safety condition is imposed, so `p(X) :- K q(X).` is fine.
pub fn ground(program: &Program) -> Result<Program> {
    if program.is_ground() {
        return Ok(program.clone());
    }
    let constants = constants(program);
    if constants.is_empty() {
        return Err(Error::NoConstants);
    }
    let constants: Vec<String> = constants.into_iter().collect();
    let mut out = Program {
        rules: Vec::new(),
        extra_atoms: program.extra_atoms.clone(),
    };
    for rule in program.rules() {
        let vars: Vec<String> = variables(rule).into_iter().collect();
        if vars.is_empty() {
            out.push(rule.clone());
            continue;
        }
        let combos = constants.len().pow(vars.len() as u32);
        for n in 0..combos {
            let mut rest = n;
            let chosen: Vec<&String> = vars
                .iter()
                .map(|_| {
                    let c = &constants[rest % constants.len()];
                    rest /= constants.len();
                    c
                })
                .collect();
            let binding = |v: &str| {
                let i = vars.iter().position(|x| x == v).expect("bound variable");
                chosen[i].clone()
            };
            out.push(substitute(rule, &binding));
        }
    }
    Ok(out)
}

fn constants(program: &Program) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for r in program.rules() {
        for a in r.head.iter().chain(r.body.iter().filter_map(Literal::atom)) {
            for t in &a.args {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        }
    }
    out
}

fn variables(rule: &Rule) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for a in rule
        .head
        .iter()
        .chain(rule.body.iter().filter_map(Literal::atom))
    {
        for t in &a.args {
            if let Term::Var(v) = t {
                out.insert(v.clone());
            }
        }
    }
    out
}

fn substitute(rule: &Rule, binding: &dyn Fn(&str) -> String) -> Rule {
    let atom = |a: &Atom| Atom {
        name: a.name.clone(),
        args: a
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => Term::Const(binding(v)),
                c => c.clone(),
            })
            .collect(),
        strong_neg: a.strong_neg,
    };
    let objective = |o: &ObjectiveLiteral| ObjectiveLiteral {
        negations: o.negations,
        base: match &o.base {
            Base::Atom(a) => Base::Atom(atom(a)),
            other => other.clone(),
        },
    };
    Rule {
        head: rule.head.iter().map(atom).collect(),
        body: rule
            .body
            .iter()
            .map(|l| match l {
                Literal::Objective(o) => Literal::Objective(objective(o)),
                Literal::Subjective(s) => Literal::Subjective(SubjectiveLiteral {
                    negated: s.negated,
                    modality: s.modality,
                    inner: objective(&s.inner),
                }),
            })
            .collect(),
        pos: rule.pos,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    #[test]
    fn two_constant_instantiation() {
        let p = parse_program("p(X) :- q(X). q(c1). q(c2).").unwrap();
        let g = ground(&p).unwrap();
        let expected = parse_program("p(c1) :- q(c1). p(c2) :- q(c2). q(c1). q(c2).").unwrap();
        assert_eq!(g.rule_set(), expected.rule_set());
    }

    #[test]
    fn ground_input_unchanged() {
        let p = parse_program("a :- not b. b | c.").unwrap();
        assert_eq!(ground(&p).unwrap(), p);
    }

    #[test]
    fn idempotent() {
        let p = parse_program("r(X,Y) :- s(X), not K t(Y). s(a). t(b).").unwrap();
        let once = ground(&p).unwrap();
        assert_eq!(once.len(), 4 + 2);
        assert_eq!(ground(&once).unwrap(), once);
    }

    #[test]
    fn variables_without_constants_rejected() {
        let p = parse_program("p(X) :- q(X).").unwrap();
        assert!(matches!(ground(&p), Err(Error::NoConstants)));
    }

    #[test]
    fn unsafe_variable_under_k_is_instantiated() {
        let p = parse_program("interview(X) :- not K eligible(X). eligible(mike) | fair(mike).")
            .unwrap();
        let g = ground(&p).unwrap();
        assert!(g.is_ground());
        assert_eq!(g.len(), 2);
    }
}
