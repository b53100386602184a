//! World views, modal satisfaction and the subjective reduct.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::objective::Interpretation;
use crate::syntax::{Atom, Literal, Modality, ObjectiveLiteral, Program, Rule, SubjectiveLiteral};

/// A non-empty set of interpretations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldView(BTreeSet<Interpretation>);

impl WorldView {
    /// `None` for an empty collection.
    pub fn new(interps: impl IntoIterator<Item = Interpretation>) -> Option<Self> {
        let set: BTreeSet<Interpretation> = interps.into_iter().collect();
        if set.is_empty() {
            None
        } else {
            Some(WorldView(set))
        }
    }

    pub fn singleton(i: Interpretation) -> Self {
        WorldView([i].into())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interpretation> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, i: &Interpretation) -> bool {
        self.0.contains(i)
    }

    pub fn interpretations(&self) -> &BTreeSet<Interpretation> {
        &self.0
    }

    pub fn is_subset(&self, other: &WorldView) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn with(&self, i: Interpretation) -> WorldView {
        let mut set = self.0.clone();
        set.insert(i);
        WorldView(set)
    }

    /// W ⊨ L for a subjective literal; the evaluation point is irrelevant.
    pub fn satisfies(&self, l: &SubjectiveLiteral) -> bool {
        let core = match l.modality {
            Modality::K => self.0.iter().all(|i| holds_at(i, &l.inner)),
            Modality::M => self.0.iter().any(|i| holds_at(i, &l.inner)),
        };
        core != l.negated
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = self.0.iter().map(Interpretation::to_strings).collect();
        v.sort();
        v
    }
}

impl fmt::Display for WorldView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, interp) in self.to_strings().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{{{}}}", interp.join(", "))?;
        }
        f.write_str("]")
    }
}

impl Serialize for WorldView {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

fn holds_at(i: &Interpretation, l: &ObjectiveLiteral) -> bool {
    l.holds_in(|a| i.contains(a))
}

/// Something that can be evaluated at a modal interpretation ⟨W, I⟩.
pub enum Modal<'a> {
    Literal(&'a Literal),
    Rule(&'a Rule),
    Program(&'a Program),
}

impl<'a> From<&'a Literal> for Modal<'a> {
    fn from(l: &'a Literal) -> Self {
        Modal::Literal(l)
    }
}

impl<'a> From<&'a Rule> for Modal<'a> {
    fn from(r: &'a Rule) -> Self {
        Modal::Rule(r)
    }
}

impl<'a> From<&'a Program> for Modal<'a> {
    fn from(p: &'a Program) -> Self {
        Modal::Program(p)
    }
}

pub(crate) fn literal_at(wv: &WorldView, point: &Interpretation, l: &Literal) -> bool {
    match l {
        Literal::Objective(o) => holds_at(point, o),
        Literal::Subjective(s) => wv.satisfies(s),
    }
}

pub(crate) fn body_at(wv: &WorldView, point: &Interpretation, r: &Rule) -> bool {
    r.body.iter().all(|l| literal_at(wv, point, l))
}

fn rule_at(wv: &WorldView, point: &Interpretation, r: &Rule) -> bool {
    !body_at(wv, point, r) || r.head.iter().any(|a| point.contains(a))
}

/// ⟨W, I⟩ ⊨ construct. `point` need not belong to `wv`.
pub fn modal_satisfies<'a>(
    wv: &WorldView,
    point: &Interpretation,
    construct: impl Into<Modal<'a>>,
) -> bool {
    match construct.into() {
        Modal::Literal(l) => literal_at(wv, point, l),
        Modal::Rule(r) => rule_at(wv, point, r),
        Modal::Program(p) => p.rules().iter().all(|r| rule_at(wv, point, r)),
    }
}

/// W ⊨ Π in S5: every rule holds at every member of W.
pub fn is_s5_model(wv: &WorldView, program: &Program) -> bool {
    wv.iter().all(|i| modal_satisfies(wv, i, program))
}

/// W|U = { I ∩ U : I ∈ W }.
pub fn project(wv: &WorldView, u: &BTreeSet<Atom>) -> WorldView {
    WorldView::new(wv.iter().map(|i| i.intersect(u))).expect("projection of a non-empty view")
}

/// Π^W_U: each subjective literal whose atom is in `u` (all of them when
/// `u` is `None`) replaced by its truth in `wv`. The outer `not` is kept
/// around the constant, so `not K a` with `K a` false reads `not #false`.
pub fn subjective_reduct(program: &Program, wv: &WorldView, u: Option<&BTreeSet<Atom>>) -> Program {
    let mut out = Program::default();
    out.extra_atoms = program.extra_atoms.clone();
    for r in program.rules() {
        out.push(Rule {
            head: r.head.clone(),
            body: r
                .body
                .iter()
                .map(|l| match l {
                    Literal::Subjective(s) if u.is_none_or(|u| u.contains(s.atom())) => {
                        let core = wv.satisfies(&s.core());
                        Literal::Objective(ObjectiveLiteral {
                            negations: s.negated as u8,
                            base: if core {
                                crate::syntax::Base::True
                            } else {
                                crate::syntax::Base::False
                            },
                        })
                    }
                    other => other.clone(),
                })
                .collect(),
            pos: r.pos,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{load_program, parse_program};

    fn interp(atoms: &[&str]) -> Interpretation {
        atoms.iter().map(|a| Atom::prop(*a)).collect()
    }

    fn wv(sets: &[&[&str]]) -> WorldView {
        WorldView::new(sets.iter().map(|s| interp(s))).unwrap()
    }

    fn lit(text: &str) -> Literal {
        parse_program(&format!(":- {text}.")).unwrap().rules()[0].body[0].clone()
    }

    #[test]
    fn k_and_m() {
        let w = wv(&[&["a"], &["b"]]);
        let any = interp(&[]);
        assert!(!modal_satisfies(&w, &any, &lit("K a")));
        assert!(modal_satisfies(&w, &any, &lit("M a")));
        assert!(modal_satisfies(&w, &any, &lit("not K a")));
        assert!(modal_satisfies(&wv(&[&["a"]]), &any, &lit("K a")));
    }

    #[test]
    fn subjective_literals_are_point_independent() {
        let w = wv(&[&["a"], &["a", "b"]]);
        for l in ["K a", "M b", "not K b", "not M not a", "K not not a"] {
            let l = lit(l);
            let values: BTreeSet<bool> = [interp(&[]), interp(&["a"]), interp(&["b"])]
                .iter()
                .map(|i| modal_satisfies(&w, i, &l))
                .collect();
            assert_eq!(values.len(), 1);
        }
    }

    #[test]
    fn college_view_satisfies_interview_constraint() {
        let w = WorldView::new([
            Interpretation::new([
                Atom::with_args("fair", ["mike"]),
                Atom::with_args("interview", ["mike"]),
            ]),
            Interpretation::new([
                Atom::with_args("high", ["mike"]),
                Atom::with_args("eligible", ["mike"]),
                Atom::with_args("interview", ["mike"]),
            ]),
        ])
        .unwrap();
        let p = parse_program(":- not K interview(mike).").unwrap();
        assert!(modal_satisfies(&w, &Interpretation::empty(), &p.rules()[0]));
    }

    #[test]
    fn s5_models() {
        let pi4 = parse_program("a | b. c :- K a.").unwrap();
        assert!(is_s5_model(&wv(&[&["a"], &["b"]]), &pi4));
        let fact = parse_program("a.").unwrap();
        assert!(!is_s5_model(&wv(&[&[]]), &fact));
        assert!(is_s5_model(&wv(&[&["a"]]), &fact));
    }

    #[test]
    fn projections() {
        let ab: BTreeSet<Atom> = [Atom::prop("a"), Atom::prop("b")].into();
        assert_eq!(
            project(&wv(&[&["a", "c"], &["b", "c"]]), &ab),
            wv(&[&["a"], &["b"]])
        );
        let w = wv(&[&["a", "c"], &["b"]]);
        let all: BTreeSet<Atom> = ["a", "b", "c"].iter().map(|a| Atom::prop(*a)).collect();
        assert_eq!(project(&w, &all), w);
        let a: BTreeSet<Atom> = [Atom::prop("a")].into();
        assert_eq!(project(&wv(&[&["a"], &["a", "b"]]), &a), wv(&[&["a"]]));
    }

    #[test]
    fn reduct_of_pi4() {
        let pi4 = parse_program("a | b. c :- K a.").unwrap();
        let r = subjective_reduct(&pi4, &wv(&[&["a"], &["b"]]), None);
        assert_eq!(r.to_string(), "a | b.\nc :- #false.\n");
        let objective = parse_program("a :- not b.").unwrap();
        assert_eq!(
            subjective_reduct(&objective, &wv(&[&["a"]]), None),
            objective
        );
    }

    #[test]
    fn reduct_respects_signature() {
        let p = load_program("c :- K a, not M d.").unwrap();
        let a: BTreeSet<Atom> = [Atom::prop("a")].into();
        let r = subjective_reduct(&p, &wv(&[&["a"]]), Some(&a));
        assert_eq!(r.to_string(), "c :- #true, not M d.\n");
    }

    #[test]
    fn json_rendering_sorted() {
        let w = wv(&[&["b", "a"], &["a"]]);
        assert_eq!(
            w.to_strings(),
            vec![vec!["a".to_string()], vec!["a".into(), "b".into()]]
        );
        assert_eq!(w.to_string(), "[{a}, {a, b}]");
    }
}
