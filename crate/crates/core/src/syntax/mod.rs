//! Abstract syntax for epistemic logic programs.
//!
//! A program is a list of rules `h1 | ... | hn :- L1, ..., Lm.` whose body
//! literals are either objective (an atom or truth constant under at most two
//! default negations) or subjective (`K l`, `M l`, optionally preceded by one
//! `not`). Strong negation `-p` is a flag on the atom: `p` and `-p` are two
//! distinct atoms tied together only by the constraint `:- p, -p.` that
//! [`Program::normalize`] adds.

mod ground;
mod parser;
mod transform;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

pub use ground::ground;
pub use parser::{parse_atom, parse_atom_list, parse_program};
pub use transform::{eliminate_m, eliminate_m_rule};

/// Line/column of a rule in its source text, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SourcePos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) | Term::Var(c) => f.write_str(c),
        }
    }
}

/// A (possibly strongly negated) predicate applied to terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Term>,
    pub strong_neg: bool,
}

impl Atom {
    /// A propositional atom with no arguments.
    pub fn prop(name: impl Into<String>) -> Self {
        Atom {
            name: name.into(),
            args: Vec::new(),
            strong_neg: false,
        }
    }

    pub fn with_args<I, S>(name: impl Into<String>, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Atom {
            name: name.into(),
            args: args.into_iter().map(|a| Term::Const(a.into())).collect(),
            strong_neg: false,
        }
    }

    pub fn strongly_negated(mut self) -> Self {
        self.strong_neg = !self.strong_neg;
        self
    }

    /// The atom with the strong-negation flag flipped.
    pub fn complement(&self) -> Self {
        self.clone().strongly_negated()
    }

    pub fn is_ground(&self) -> bool {
        !self.args.iter().any(Term::is_var)
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strong_neg {
            f.write_str("-")?;
        }
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// What sits under the default negations of an objective literal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    True,
    False,
    Atom(Atom),
}

/// An atom or truth constant under zero, one or two default negations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectiveLiteral {
    pub negations: u8,
    pub base: Base,
}

impl ObjectiveLiteral {
    pub fn atom(atom: Atom) -> Self {
        ObjectiveLiteral {
            negations: 0,
            base: Base::Atom(atom),
        }
    }

    pub fn not(atom: Atom) -> Self {
        ObjectiveLiteral {
            negations: 1,
            base: Base::Atom(atom),
        }
    }

    pub fn not_not(atom: Atom) -> Self {
        ObjectiveLiteral {
            negations: 2,
            base: Base::Atom(atom),
        }
    }

    pub fn constant(value: bool) -> Self {
        ObjectiveLiteral {
            negations: 0,
            base: if value { Base::True } else { Base::False },
        }
    }

    pub fn top() -> Self {
        Self::constant(true)
    }

    pub fn bottom() -> Self {
        Self::constant(false)
    }

    pub fn get_atom(&self) -> Option<&Atom> {
        match &self.base {
            Base::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// `true` for a plain (non-negated) atom.
    pub fn is_positive_atom(&self) -> bool {
        self.negations == 0 && matches!(self.base, Base::Atom(_))
    }

    /// Truth value when the literal mentions no atom.
    pub fn constant_value(&self) -> Option<bool> {
        let base = match self.base {
            Base::True => true,
            Base::False => false,
            Base::Atom(_) => return None,
        };
        Some(base ^ (self.negations % 2 == 1))
    }

    /// One more default negation, collapsing `not not not a` to `not a`.
    pub fn negated(&self) -> Self {
        let negations = if self.negations >= 2 {
            1
        } else {
            self.negations + 1
        };
        ObjectiveLiteral {
            negations,
            base: self.base.clone(),
        }
    }

    /// Truth in a propositional interpretation, reading `not` classically.
    pub fn holds_in(&self, contains: impl Fn(&Atom) -> bool) -> bool {
        let base = match &self.base {
            Base::True => true,
            Base::False => false,
            Base::Atom(a) => contains(a),
        };
        base ^ (self.negations % 2 == 1)
    }
}

impl fmt::Display for ObjectiveLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.negations {
            f.write_str("not ")?;
        }
        match &self.base {
            Base::True => f.write_str("#true"),
            Base::False => f.write_str("#false"),
            Base::Atom(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    K,
    M,
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modality::K => "K",
            Modality::M => "M",
        })
    }
}

/// A modal query on an objective literal, with its stripped core being
/// `modality inner`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubjectiveLiteral {
    pub negated: bool,
    pub modality: Modality,
    pub inner: ObjectiveLiteral,
}

impl SubjectiveLiteral {
    pub fn k(inner: ObjectiveLiteral) -> Self {
        SubjectiveLiteral {
            negated: false,
            modality: Modality::K,
            inner,
        }
    }

    pub fn m(inner: ObjectiveLiteral) -> Self {
        SubjectiveLiteral {
            negated: false,
            modality: Modality::M,
            inner,
        }
    }

    pub fn not(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    /// The literal without its outer `not`.
    pub fn core(&self) -> SubjectiveLiteral {
        SubjectiveLiteral {
            negated: false,
            ..self.clone()
        }
    }

    pub fn atom(&self) -> &Atom {
        self.inner
            .get_atom()
            .expect("subjective literal over a truth constant")
    }

    /// `K a` or `M a` for a plain atom `a`.
    pub fn is_positive(&self) -> bool {
        !self.negated && self.inner.is_positive_atom()
    }
}

impl fmt::Display for SubjectiveLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{} {}", self.modality, self.inner)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Objective(ObjectiveLiteral),
    Subjective(SubjectiveLiteral),
}

impl Literal {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Literal::Objective(o) => o.get_atom(),
            Literal::Subjective(s) => s.inner.get_atom(),
        }
    }

    pub fn is_subjective(&self) -> bool {
        matches!(self, Literal::Subjective(_))
    }
}

impl From<ObjectiveLiteral> for Literal {
    fn from(l: ObjectiveLiteral) -> Self {
        Literal::Objective(l)
    }
}

impl From<SubjectiveLiteral> for Literal {
    fn from(l: SubjectiveLiteral) -> Self {
        Literal::Subjective(l)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Objective(o) => write!(f, "{o}"),
            Literal::Subjective(s) => write!(f, "{s}"),
        }
    }
}

/// `head :- body.` An empty head is `#false`.
///
/// Equality, ordering and hashing ignore the source position.
#[derive(Clone, Debug)]
pub struct Rule {
    pub head: BTreeSet<Atom>,
    pub body: Vec<Literal>,
    pub pos: Option<SourcePos>,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && self.body == other.body
    }
}

impl Eq for Rule {}

impl PartialOrd for Rule {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rule {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.head, &self.body).cmp(&(&other.head, &other.body))
    }
}

impl std::hash::Hash for Rule {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.head.hash(state);
        self.body.hash(state);
    }
}

impl Rule {
    pub fn new(
        head: impl IntoIterator<Item = Atom>,
        body: impl IntoIterator<Item = Literal>,
    ) -> Self {
        Rule {
            head: head.into_iter().collect(),
            body: body.into_iter().collect(),
            pos: None,
        }
    }

    pub fn fact(atom: Atom) -> Self {
        Rule::new([atom], [])
    }

    pub fn constraint(body: impl IntoIterator<Item = Literal>) -> Self {
        Rule::new([], body)
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn body_obj(&self) -> impl Iterator<Item = &ObjectiveLiteral> {
        self.body.iter().filter_map(|l| match l {
            Literal::Objective(o) => Some(o),
            Literal::Subjective(_) => None,
        })
    }

    pub fn body_sub(&self) -> impl Iterator<Item = &SubjectiveLiteral> {
        self.body.iter().filter_map(|l| match l {
            Literal::Subjective(s) => Some(s),
            Literal::Objective(_) => None,
        })
    }

    /// Headless with a purely subjective body.
    pub fn is_subjective_constraint(&self) -> bool {
        self.head.is_empty() && self.body.iter().all(Literal::is_subjective)
    }

    pub fn is_objective(&self) -> bool {
        !self.body.iter().any(Literal::is_subjective)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.head.clone();
        out.extend(self.body.iter().filter_map(Literal::atom).cloned());
        out
    }

    /// Head atoms plus atoms of objective body literals.
    pub fn objective_atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.head.clone();
        out.extend(
            self.body_obj()
                .filter_map(ObjectiveLiteral::get_atom)
                .cloned(),
        );
        out
    }

    /// Atoms appearing inside subjective body literals.
    pub fn subjective_atoms(&self) -> BTreeSet<Atom> {
        self.body_sub().map(|s| s.atom().clone()).collect()
    }

    /// Atoms of plain positive objective body literals.
    pub fn positive_body_atoms(&self) -> BTreeSet<Atom> {
        self.body_obj()
            .filter(|o| o.is_positive_atom())
            .filter_map(ObjectiveLiteral::get_atom)
            .cloned()
            .collect()
    }

    /// Atoms under unnegated `K a`. `M a` is `not K not a` and does not count.
    pub fn positive_subjective_atoms(&self) -> BTreeSet<Atom> {
        self.body_sub()
            .filter(|s| s.is_positive() && s.modality == Modality::K)
            .map(|s| s.atom().clone())
            .collect()
    }

    pub fn is_ground(&self) -> bool {
        self.head.iter().all(Atom::is_ground)
            && self
                .body
                .iter()
                .filter_map(Literal::atom)
                .all(Atom::is_ground)
    }

    pub fn mentions_m(&self) -> bool {
        self.body_sub().any(|s| s.modality == Modality::M)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.head.is_empty() && self.body.is_empty() {
            return f.write_str("#false.");
        }
        for (i, a) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{a}")?;
        }
        if !self.body.is_empty() {
            if self.head.is_empty() {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l}")?;
            }
        }
        f.write_str(".")
    }
}

/// A finite list of rules without duplicates, plus atoms declared to be in
/// the universe even when no rule mentions them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    rules: Vec<Rule>,
    pub extra_atoms: BTreeSet<Atom>,
}

impl Program {
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Self {
        let mut p = Program::default();
        p.extend(rules);
        p
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Adds a rule unless an equal one is already present.
    pub fn push(&mut self, rule: Rule) -> bool {
        if self.rules.contains(&rule) {
            false
        } else {
            self.rules.push(rule);
            true
        }
    }

    pub fn extend(&mut self, rules: impl IntoIterator<Item = Rule>) {
        for r in rules {
            self.push(r);
        }
    }

    pub fn union(&self, other: &Program) -> Program {
        let mut out = self.clone();
        out.extend(other.rules.iter().cloned());
        out.extra_atoms.extend(other.extra_atoms.iter().cloned());
        out
    }

    pub fn contains(&self, rule: &Rule) -> bool {
        self.rules.contains(rule)
    }

    /// Atoms(Π): every atom mentioned by some rule.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().flat_map(Rule::atoms).collect()
    }

    pub fn atom_universe(&self) -> BTreeSet<Atom> {
        let mut out = self.atoms();
        out.extend(self.extra_atoms.iter().cloned());
        out
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(Rule::is_ground)
    }

    pub fn is_objective(&self) -> bool {
        self.rules.iter().all(Rule::is_objective)
    }

    pub fn mentions_m(&self) -> bool {
        self.rules.iter().any(Rule::mentions_m)
    }

    /// Rules as a set, for order-insensitive comparison.
    pub fn rule_set(&self) -> BTreeSet<Rule> {
        self.rules.iter().cloned().collect()
    }

    /// Adds `:- a, -a.` for every strongly negated atom `-a` in the program.
    pub fn normalize(&self) -> Program {
        let mut out = self.clone();
        let negated: Vec<Atom> = self
            .atom_universe()
            .into_iter()
            .filter(|a| a.strong_neg)
            .collect();
        for neg in negated {
            let pos = neg.complement();
            out.push(Rule::constraint([
                ObjectiveLiteral::atom(pos).into(),
                ObjectiveLiteral::atom(neg).into(),
            ]));
        }
        out
    }

    /// Evaluates constant body literals: drops true ones, drops rules with a
    /// false one. Two programs that differ only in how their reducts were
    /// written compare equal after this pass.
    pub fn simplify(&self) -> Program {
        let mut out = Program {
            rules: Vec::new(),
            extra_atoms: self.extra_atoms.clone(),
        };
        'rules: for r in &self.rules {
            let mut body = Vec::with_capacity(r.body.len());
            for l in &r.body {
                match l {
                    Literal::Objective(o) => match o.constant_value() {
                        Some(true) => {}
                        Some(false) => continue 'rules,
                        None => body.push(l.clone()),
                    },
                    Literal::Subjective(_) => body.push(l.clone()),
                }
            }
            out.push(Rule {
                head: r.head.clone(),
                body,
                pos: r.pos,
            });
        }
        out
    }

    pub fn retain(&mut self, f: impl FnMut(&Rule) -> bool) {
        self.rules.retain(f);
    }
}

impl FromIterator<Rule> for Program {
    fn from_iter<T: IntoIterator<Item = Rule>>(iter: T) -> Self {
        Program::new(iter)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Parses, grounds and normalizes program text in one go.
pub fn load_program(text: &str) -> crate::Result<Program> {
    let parsed = parse_program(text)?;
    Ok(ground(&parsed)?.normalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strong_negation_is_distinct_atom() {
        let a = Atom::prop("a");
        assert_ne!(a, a.complement());
        assert_eq!(a, a.complement().complement());
        assert_eq!(a.complement().to_string(), "-a");
    }

    #[test]
    fn negation_collapses_past_two() {
        let a = ObjectiveLiteral::atom(Atom::prop("a"));
        assert_eq!(a.negated().negations, 1);
        assert_eq!(a.negated().negated().negations, 2);
        assert_eq!(a.negated().negated().negated().negations, 1);
    }

    #[test]
    fn constant_values() {
        assert_eq!(
            ObjectiveLiteral::top().negated().constant_value(),
            Some(false)
        );
        assert_eq!(
            ObjectiveLiteral::bottom().negated().constant_value(),
            Some(true)
        );
        assert_eq!(
            ObjectiveLiteral::atom(Atom::prop("a")).constant_value(),
            None
        );
    }

    #[test]
    fn normalize_adds_consistency_constraints() {
        let p = parse_program("-a. b :- a.").unwrap().normalize();
        assert!(p.contains(&Rule::constraint([
            ObjectiveLiteral::atom(Atom::prop("a")).into(),
            ObjectiveLiteral::atom(Atom::prop("a").complement()).into(),
        ])));
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn simplify_drops_true_conjuncts_and_dead_rules() {
        let p = parse_program("a :- not #false, b. c :- #false. :- not #true.").unwrap();
        let s = p.simplify();
        assert_eq!(s.to_string(), "a :- b.\n");
    }

    #[test]
    fn rule_partitions() {
        let p = parse_program("a | b :- c, not d, K e, not M -f.").unwrap();
        let r = &p.rules()[0];
        assert_eq!(r.body_obj().count(), 2);
        assert_eq!(r.body_sub().count(), 2);
        assert_eq!(r.objective_atoms().len(), 4);
        assert_eq!(r.subjective_atoms().len(), 2);
        assert_eq!(r.positive_subjective_atoms().len(), 1);
        assert!(!r.is_subjective_constraint());
        let parsed = parse_program(":- not K a, M b.").unwrap();
        let c = &parsed.rules()[0];
        assert!(c.is_subjective_constraint());
    }
}
