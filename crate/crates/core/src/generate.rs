//! Seeded random ground programs for the property harness.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::syntax::{Atom, Literal, ObjectiveLiteral, Program, Rule, SubjectiveLiteral};

/// Shape of generated programs. Recorded alongside every report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GenParams {
    pub atoms: usize,
    pub rules: usize,
    pub max_body: usize,
    pub max_head: usize,
    /// Chance that a body literal is subjective.
    pub subjective: f64,
    /// Chance that a subjective literal uses M rather than K.
    pub m: f64,
    /// Chance of a default negation on a literal.
    pub negation: f64,
    /// Chance that a rule has no head.
    pub constraint: f64,
}

impl GenParams {
    pub fn epistemic(atoms: usize, rules: usize) -> Self {
        GenParams {
            atoms,
            rules,
            max_body: 3,
            max_head: 2,
            subjective: 0.4,
            m: 0.25,
            negation: 0.4,
            constraint: 0.15,
        }
    }

    pub fn objective(atoms: usize, rules: usize) -> Self {
        GenParams {
            subjective: 0.0,
            ..GenParams::epistemic(atoms, rules)
        }
    }

    pub fn k_only(self) -> Self {
        GenParams { m: 0.0, ..self }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atom_pool(n: usize) -> Vec<Atom> {
    (0..n)
        .map(|k| Atom::prop(char::from(b'a' + k as u8).to_string()))
        .collect()
}

fn objective_literal(rng: &mut impl Rng, atom: Atom, p: &GenParams) -> ObjectiveLiteral {
    if rng.gen_bool(p.negation) {
        if rng.gen_bool(0.15) {
            ObjectiveLiteral::not_not(atom)
        } else {
            ObjectiveLiteral::not(atom)
        }
    } else {
        ObjectiveLiteral::atom(atom)
    }
}

fn subjective_literal(rng: &mut impl Rng, atom: Atom, p: &GenParams) -> SubjectiveLiteral {
    let inner = if rng.gen_bool(0.2) {
        ObjectiveLiteral::not(atom)
    } else {
        ObjectiveLiteral::atom(atom)
    };
    let l = if rng.gen_bool(p.m) {
        SubjectiveLiteral::m(inner)
    } else {
        SubjectiveLiteral::k(inner)
    };
    if rng.gen_bool(0.5) {
        l.not()
    } else {
        l
    }
}

fn head(rng: &mut impl Rng, pool: &[Atom], p: &GenParams) -> Vec<Atom> {
    if rng.gen_bool(p.constraint) || pool.is_empty() {
        return Vec::new();
    }
    let n = rng.gen_range(1..=p.max_head.max(1));
    pool.choose_multiple(rng, n).cloned().collect()
}

/// A random ground program over the first `p.atoms` letters.
pub fn random_program(rng: &mut impl Rng, p: &GenParams) -> Program {
    let pool = atom_pool(p.atoms);
    let mut out = Program::default();
    for _ in 0..p.rules {
        let head = head(rng, &pool, p);
        let len = rng.gen_range(0..=p.max_body);
        let body: Vec<Literal> = (0..len)
            .map(|_| {
                let a = pool.choose(rng).expect("non-empty pool").clone();
                if rng.gen_bool(p.subjective) {
                    subjective_literal(rng, a, p).into()
                } else {
                    objective_literal(rng, a, p).into()
                }
            })
            .collect();
        if head.is_empty() && body.is_empty() {
            continue;
        }
        out.push(Rule::new(head, body));
    }
    out
}

/// A program that is epistemically stratified by construction: atoms are
/// dealt into layers, objective parts of a rule stay in one layer, and
/// subjective literals only look at lower layers.
pub fn random_stratified_program(rng: &mut impl Rng, p: &GenParams, layers: usize) -> Program {
    let pool = atom_pool(p.atoms);
    let layers = layers.clamp(1, p.atoms.max(1));
    let mut by_layer: Vec<Vec<Atom>> = vec![Vec::new(); layers];
    for (k, a) in pool.iter().enumerate() {
        // every layer gets at least one atom
        let l = if k < layers {
            k
        } else {
            rng.gen_range(0..layers)
        };
        by_layer[l].push(a.clone());
    }
    let mut out = Program::default();
    for _ in 0..p.rules {
        let l = rng.gen_range(0..layers);
        let lower: Vec<Atom> = by_layer[..l].iter().flatten().cloned().collect();
        let subjective_constraint = l > 0 && rng.gen_bool(p.constraint);
        let head = if subjective_constraint {
            Vec::new()
        } else {
            head(rng, &by_layer[l], p)
        };
        let len = rng.gen_range(0..=p.max_body);
        let mut body: Vec<Literal> = Vec::new();
        for _ in 0..len {
            let use_sub =
                !lower.is_empty() && (subjective_constraint || rng.gen_bool(p.subjective));
            if use_sub {
                let a = lower.choose(rng).expect("non-empty").clone();
                body.push(subjective_literal(rng, a, p).into());
            } else {
                let a = by_layer[l].choose(rng).expect("non-empty layer").clone();
                body.push(objective_literal(rng, a, p).into());
            }
        }
        if head.is_empty() && body.is_empty() {
            continue;
        }
        out.push(Rule::new(head, body));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::stratify;

    #[test]
    fn deterministic() {
        let p = GenParams::epistemic(4, 5);
        let a = random_program(&mut rng(7), &p);
        let b = random_program(&mut rng(7), &p);
        assert_eq!(a, b);
        assert!(a.atoms().len() <= 4);
    }

    #[test]
    fn objective_programs_have_no_modalities() {
        let p = GenParams::objective(5, 6);
        let mut r = rng(1);
        for _ in 0..50 {
            assert!(random_program(&mut r, &p).is_objective());
        }
    }

    #[test]
    fn stratified_by_construction() {
        let p = GenParams::epistemic(5, 6);
        let mut r = rng(3);
        for _ in 0..100 {
            let prog = random_stratified_program(&mut r, &p, 3);
            assert!(stratify(&prog).is_ok(), "{prog}");
        }
    }
}
