//! Classical satisfaction, the Gelfond–Lifschitz reduct, stable models and
//! Lifschitz–Turner splitting for objective programs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::semantics::Limits;
use crate::syntax::{Atom, Base, Literal, ObjectiveLiteral, Program, Rule};

/// A set of atoms: one candidate belief set.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation(BTreeSet<Atom>);

impl Interpretation {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Interpretation(atoms.into_iter().collect())
    }

    pub fn empty() -> Self {
        Interpretation::default()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.0
    }

    pub fn intersect(&self, u: &BTreeSet<Atom>) -> Interpretation {
        Interpretation(self.0.intersection(u).cloned().collect())
    }

    pub fn minus(&self, u: &BTreeSet<Atom>) -> Interpretation {
        Interpretation(self.0.difference(u).cloned().collect())
    }

    pub fn union(&self, other: &Interpretation) -> Interpretation {
        Interpretation(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Atom names rendered and sorted as strings.
    pub fn to_strings(&self) -> Vec<String> {
        let mut v: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        v.sort();
        v
    }
}

impl FromIterator<Atom> for Interpretation {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        Interpretation::new(iter)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

impl Serialize for Interpretation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// Sorted atom table used to pack interpretations into `u64` bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    atoms: Vec<Atom>,
}

pub const MAX_MASK_ATOMS: usize = 63;

impl Universe {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let set: BTreeSet<Atom> = atoms.into_iter().collect();
        Universe {
            atoms: set.into_iter().collect(),
        }
    }

    pub fn of(program: &Program) -> Self {
        Universe::new(program.atom_universe())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn index_of(&self, atom: &Atom) -> Option<usize> {
        self.atoms.binary_search(atom).ok()
    }

    pub fn bit(&self, atom: &Atom) -> u64 {
        self.index_of(atom).map_or(0, |i| 1 << i)
    }

    pub fn mask_of<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> u64 {
        atoms.into_iter().fold(0, |m, a| m | self.bit(a))
    }

    pub fn full(&self) -> u64 {
        if self.atoms.len() >= 64 {
            u64::MAX
        } else {
            (1u64 << self.atoms.len()) - 1
        }
    }

    pub fn encode(&self, i: &Interpretation) -> u64 {
        self.mask_of(i.iter())
    }

    pub fn decode(&self, mask: u64) -> Interpretation {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect()
    }

    pub fn check(&self, what: &'static str, cap: usize) -> Result<()> {
        let cap = cap.min(MAX_MASK_ATOMS);
        if self.atoms.len() > cap {
            Err(Error::Capacity {
                what,
                size: self.atoms.len(),
                cap,
            })
        } else {
            Ok(())
        }
    }
}

/// An objective rule packed into bitmasks. `dead` marks a body containing a
/// false constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PackedRule {
    pub head: u64,
    pub pos: u64,
    pub neg: u64,
    pub dneg: u64,
    pub dead: bool,
}

impl PackedRule {
    pub fn body_holds(&self, i: u64) -> bool {
        !self.dead && self.pos & !i == 0 && self.neg & i == 0 && self.dneg & !i == 0
    }

    pub fn holds(&self, i: u64) -> bool {
        !self.body_holds(i) || self.head & i != 0
    }

    /// Survives the reduct w.r.t. `i` (all negated literals true).
    pub fn in_reduct(&self, i: u64) -> bool {
        !self.dead && self.neg & i == 0 && self.dneg & !i == 0
    }

    /// Satisfaction of the reduct rule `head :- pos` by `j`.
    pub fn positive_holds(&self, j: u64) -> bool {
        self.pos & !j != 0 || self.head & j != 0
    }
}

pub(crate) fn pack_objective(rule: &Rule, u: &Universe) -> Result<PackedRule> {
    let mut packed = PackedRule {
        head: u.mask_of(rule.head.iter()),
        pos: 0,
        neg: 0,
        dneg: 0,
        dead: false,
    };
    for l in &rule.body {
        let o = match l {
            Literal::Objective(o) => o,
            Literal::Subjective(_) => return Err(Error::SubjectiveLiteral(rule.to_string())),
        };
        match (&o.base, o.negations) {
            (Base::Atom(a), 0) => packed.pos |= u.bit(a),
            (Base::Atom(a), 1) => packed.neg |= u.bit(a),
            (Base::Atom(a), _) => packed.dneg |= u.bit(a),
            _ => {
                if o.constant_value() == Some(false) {
                    packed.dead = true;
                }
            }
        }
    }
    Ok(packed)
}

pub(crate) fn pack_program(program: &Program, u: &Universe) -> Result<Vec<PackedRule>> {
    program
        .rules()
        .iter()
        .map(|r| pack_objective(r, u))
        .collect()
}

/// Something that can be checked classically against an interpretation.
pub enum Objective<'a> {
    Literal(&'a ObjectiveLiteral),
    Rule(&'a Rule),
    Program(&'a Program),
}

impl<'a> From<&'a ObjectiveLiteral> for Objective<'a> {
    fn from(l: &'a ObjectiveLiteral) -> Self {
        Objective::Literal(l)
    }
}

impl<'a> From<&'a Rule> for Objective<'a> {
    fn from(r: &'a Rule) -> Self {
        Objective::Rule(r)
    }
}

impl<'a> From<&'a Program> for Objective<'a> {
    fn from(p: &'a Program) -> Self {
        Objective::Program(p)
    }
}

fn rule_classically(i: &Interpretation, r: &Rule) -> Result<bool> {
    let mut body = true;
    for l in &r.body {
        match l {
            Literal::Objective(o) => body &= o.holds_in(|a| i.contains(a)),
            Literal::Subjective(_) => return Err(Error::SubjectiveLiteral(r.to_string())),
        }
    }
    Ok(!body || r.head.iter().any(|a| i.contains(a)))
}

/// Classical truth: commas are conjunction, `not` is negation, `:-` is
/// reversed implication.
pub fn classical_satisfies<'a>(
    i: &Interpretation,
    construct: impl Into<Objective<'a>>,
) -> Result<bool> {
    match construct.into() {
        Objective::Literal(l) => Ok(l.holds_in(|a| i.contains(a))),
        Objective::Rule(r) => rule_classically(i, r),
        Objective::Program(p) => {
            for r in p.rules() {
                if !rule_classically(i, r)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Π^I: every literal under at least one `not` becomes `#true` or `#false`
/// according to `I`. Positive literals are untouched.
pub fn objective_reduct(program: &Program, i: &Interpretation) -> Result<Program> {
    let mut out = Program::default();
    out.extra_atoms = program.extra_atoms.clone();
    for r in program.rules() {
        let mut body = Vec::with_capacity(r.body.len());
        for l in &r.body {
            match l {
                Literal::Objective(o) if o.negations > 0 => {
                    body.push(ObjectiveLiteral::constant(o.holds_in(|a| i.contains(a))).into())
                }
                Literal::Objective(_) => body.push(l.clone()),
                Literal::Subjective(_) => return Err(Error::SubjectiveLiteral(r.to_string())),
            }
        }
        out.push(Rule {
            head: r.head.clone(),
            body,
            pos: r.pos,
        });
    }
    Ok(out)
}

/// Bitmask stable models of packed rules over `n` atoms, in increasing mask
/// order.
pub(crate) fn stable_model_masks(rules: &[PackedRule], n: usize) -> Vec<u64> {
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    let mut candidate = 0u64;
    loop {
        if is_stable(rules, candidate) {
            out.push(candidate);
        }
        if candidate == full {
            break;
        }
        candidate += 1;
    }
    out
}

pub(crate) fn is_stable(rules: &[PackedRule], i: u64) -> bool {
    if !rules.iter().all(|r| r.holds(i)) {
        return false;
    }
    // Every true atom needs a rule whose body holds without it and whose
    // head meets I only in that atom; a cheap necessary condition.
    let mut rest = i;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest &= rest - 1;
        let supported = rules
            .iter()
            .any(|r| r.head & bit != 0 && r.pos & bit == 0 && r.head & i == bit && r.body_holds(i));
        if !supported {
            return false;
        }
    }
    let reduct: Vec<&PackedRule> = rules.iter().filter(|r| r.in_reduct(i)).collect();
    // no proper subset of I may be a model of the reduct
    if i == 0 {
        return true;
    }
    let mut j = (i - 1) & i;
    loop {
        if reduct.iter().all(|r| r.positive_holds(j)) {
            return false;
        }
        if j == 0 {
            break;
        }
        j = (j - 1) & i;
    }
    true
}

/// SM[Π]: interpretations that are ⊆-minimal models of their own reduct.
pub fn stable_models(program: &Program, limits: &Limits) -> Result<BTreeSet<Interpretation>> {
    let u = Universe::of(program);
    u.check(
        "stable model search over the atom universe",
        limits.max_atoms,
    )?;
    let rules = pack_program(program, &u)?;
    Ok(stable_model_masks(&rules, u.len())
        .into_iter()
        .map(|m| u.decode(m))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bottom,
    Top,
}

/// Where rules that qualify for both the bottom and the top go.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Placement {
    #[default]
    Bottom,
    Top,
    /// Bit `k` set sends the `k`-th ambiguous rule (in program order) to
    /// the top.
    Pattern(u64),
}

impl Placement {
    pub(crate) fn side(&self, k: usize) -> Side {
        match self {
            Placement::Bottom => Side::Bottom,
            Placement::Top => Side::Top,
            Placement::Pattern(bits) => {
                if k < 64 && bits >> k & 1 == 1 {
                    Side::Top
                } else {
                    Side::Bottom
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ObjectiveSplit {
    pub u: BTreeSet<Atom>,
    pub bottom: Program,
    pub top: Program,
    /// Rules that could have gone either way and where they went.
    pub placement: Vec<(Rule, Side)>,
}

/// Partitions by the splitting-set conditions: (i) all atoms in `U`, or
/// (ii) no head atom in `U`.
pub fn objective_split(
    program: &Program,
    u: &BTreeSet<Atom>,
    placement: Placement,
) -> Result<ObjectiveSplit> {
    let mut split = ObjectiveSplit {
        u: u.clone(),
        bottom: Program::default(),
        top: Program::default(),
        placement: Vec::new(),
    };
    for r in program.rules() {
        let inside = r.atoms().is_subset(u);
        let head_outside = r.head.is_disjoint(u);
        let side = match (inside, head_outside) {
            (true, true) => {
                let side = placement.side(split.placement.len());
                split.placement.push((r.clone(), side));
                side
            }
            (true, false) => Side::Bottom,
            (false, true) => Side::Top,
            (false, false) => return Err(Error::NotASplittingSet(r.clone())),
        };
        match side {
            Side::Bottom => split.bottom.push(r.clone()),
            Side::Top => split.top.push(r.clone()),
        };
    }
    Ok(split)
}

/// e_U(Π, I): atoms of `U` in the top replaced by `#true` if in `I`, else
/// `#false`. Head atoms are never in `U`.
pub fn simplify_top(top: &Program, u: &BTreeSet<Atom>, bottom_model: &Interpretation) -> Program {
    top.rules()
        .iter()
        .map(|r| Rule {
            head: r.head.clone(),
            body: r
                .body
                .iter()
                .map(|l| match l {
                    Literal::Objective(ObjectiveLiteral {
                        negations,
                        base: Base::Atom(a),
                    }) if u.contains(a) => Literal::Objective(ObjectiveLiteral {
                        negations: *negations,
                        base: if bottom_model.contains(a) {
                            Base::True
                        } else {
                            Base::False
                        },
                    }),
                    other => other.clone(),
                })
                .collect(),
            pos: r.pos,
        })
        .collect()
}

/// All pairs ⟨I_b, I_t⟩ with I_b ∈ SM[bottom] and I_t ∈ SM[e_U(Π, I_b)].
pub fn objective_solutions(
    program: &Program,
    u: &BTreeSet<Atom>,
    placement: Placement,
    limits: &Limits,
) -> Result<BTreeSet<(Interpretation, Interpretation)>> {
    let split = objective_split(program, u, placement)?;
    let mut out = BTreeSet::new();
    for ib in stable_models(&split.bottom, limits)? {
        let top = simplify_top(&split.top, u, &ib);
        for it in stable_models(&top, limits)? {
            out.insert((ib.clone(), it));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn prog(text: &str) -> Program {
        parse_program(text).unwrap()
    }

    fn interp(atoms: &[&str]) -> Interpretation {
        atoms.iter().map(|a| Atom::prop(*a)).collect()
    }

    fn atoms(names: &[&str]) -> BTreeSet<Atom> {
        names.iter().map(|a| Atom::prop(*a)).collect()
    }

    const PI1: &str = "a :- not b. b :- not a. c | d :- not a. d :- a, not b.";

    #[test]
    fn classical_rules() {
        let p = prog("a :- not b.");
        let r = &p.rules()[0];
        assert!(classical_satisfies(&interp(&["a"]), r).unwrap());
        assert!(classical_satisfies(&interp(&["b"]), r).unwrap());
        let disj = prog("a | b.");
        assert!(!classical_satisfies(&interp(&[]), &disj.rules()[0]).unwrap());
        let l = ObjectiveLiteral::not_not(Atom::prop("a"));
        assert!(classical_satisfies(&interp(&["a"]), &l).unwrap());
    }

    #[test]
    fn classical_rejects_subjective() {
        let p = prog("a :- K b.");
        assert!(matches!(
            classical_satisfies(&interp(&[]), &p),
            Err(Error::SubjectiveLiteral(_))
        ));
    }

    #[test]
    fn reduct_of_pi1() {
        let r = objective_reduct(&prog(PI1), &interp(&["a"])).unwrap();
        assert_eq!(r.rules()[0].to_string(), "a :- #true.");
        assert_eq!(r.rules()[1].to_string(), "b :- #false.");
        let positive = prog("a :- b. c | d.");
        assert_eq!(
            objective_reduct(&positive, &interp(&["a"])).unwrap(),
            positive
        );
    }

    #[test]
    fn reduct_double_negation_is_one_unit() {
        let r = objective_reduct(&prog("a :- not not a."), &interp(&["a"])).unwrap();
        assert_eq!(r.to_string(), "a :- #true.\n");
        let r = objective_reduct(&prog("a :- not not a."), &interp(&[])).unwrap();
        assert_eq!(r.to_string(), "a :- #false.\n");
    }

    #[test]
    fn pi1_stable_models() {
        let sm = stable_models(&prog(PI1), &Limits::default()).unwrap();
        let expected: BTreeSet<_> = [
            interp(&["a", "d"]),
            interp(&["b", "c"]),
            interp(&["b", "d"]),
        ]
        .into();
        assert_eq!(sm, expected);
    }

    #[test]
    fn empty_program_has_empty_model() {
        let sm = stable_models(&Program::default(), &Limits::default()).unwrap();
        assert_eq!(sm, [Interpretation::empty()].into());
    }

    #[test]
    fn double_negation_choice() {
        let sm = stable_models(&prog("a :- not not a."), &Limits::default()).unwrap();
        assert_eq!(sm, [interp(&[]), interp(&["a"])].into());
    }

    #[test]
    fn capacity_is_enforced() {
        let limits = Limits {
            max_atoms: 2,
            ..Limits::default()
        };
        assert!(matches!(
            stable_models(&prog("a | b | c."), &limits),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn pi1_split() {
        let p = prog(PI1);
        let split = objective_split(&p, &atoms(&["a", "b"]), Placement::Bottom).unwrap();
        assert_eq!(split.bottom.rules(), &p.rules()[..2]);
        assert_eq!(split.top.rules(), &p.rules()[2..]);

        let whole = objective_split(&p, &p.atoms(), Placement::Bottom).unwrap();
        assert_eq!(whole.bottom.len(), 4);
        assert!(whole.top.is_empty());
    }

    #[test]
    fn pi1_invalid_split_names_rule() {
        let p = prog(PI1);
        match objective_split(&p, &atoms(&["d"]), Placement::Bottom) {
            Err(Error::NotASplittingSet(r)) => assert_eq!(r.to_string(), "c | d :- not a."),
            other => panic!("unexpected {other:?}"),
        }
        // a depends on b
        assert!(matches!(
            objective_split(&p, &atoms(&["a"]), Placement::Bottom),
            Err(Error::NotASplittingSet(r)) if r.to_string() == "a :- not b."
        ));
    }

    #[test]
    fn pi1_top_simplification() {
        let p = prog(PI1);
        let split = objective_split(&p, &atoms(&["a", "b"]), Placement::Bottom).unwrap();
        let e = simplify_top(&split.top, &split.u, &interp(&["a"]));
        assert_eq!(
            e.to_string(),
            "c | d :- not #true.\nd :- #true, not #false.\n"
        );
    }

    #[test]
    fn pi1_solutions() {
        let p = prog(PI1);
        let sols = objective_solutions(
            &p,
            &atoms(&["a", "b"]),
            Placement::Bottom,
            &Limits::default(),
        )
        .unwrap();
        let expected: BTreeSet<_> = [
            (interp(&["a"]), interp(&["d"])),
            (interp(&["b"]), interp(&["c"])),
            (interp(&["b"]), interp(&["d"])),
        ]
        .into();
        assert_eq!(sols, expected);
        let composed: BTreeSet<_> = sols.iter().map(|(b, t)| b.union(t)).collect();
        assert_eq!(composed, stable_models(&p, &Limits::default()).unwrap());
    }

    #[test]
    fn no_bottom_models_means_no_solutions() {
        let p = prog("a :- not a. b :- a.");
        let sols =
            objective_solutions(&p, &atoms(&["a"]), Placement::Bottom, &Limits::default()).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn constraint_placement() {
        let p = prog("a | b. :- a. c :- b.");
        let top = objective_split(&p, &atoms(&["a", "b"]), Placement::Top).unwrap();
        assert_eq!(top.placement.len(), 1);
        assert_eq!(top.placement[0].1, Side::Top);
        assert_eq!(top.top.len(), 2);
        let a = objective_solutions(
            &p,
            &atoms(&["a", "b"]),
            Placement::Bottom,
            &Limits::default(),
        )
        .unwrap();
        let b = objective_solutions(&p, &atoms(&["a", "b"]), Placement::Top, &Limits::default())
            .unwrap();
        let ca: BTreeSet<_> = a.iter().map(|(x, y)| x.union(y)).collect();
        let cb: BTreeSet<_> = b.iter().map(|(x, y)| x.union(y)).collect();
        assert_eq!(ca, cb);
    }
}
