//! Epistemic here-and-there models and F15 world views.
//!
//! Whether a non-total "here" valuation h exists is a propositional question
//! with one variable per pair (I, a), a ∈ I: each rule at each point compiles
//! to clauses over those variables, since `not ...` is evaluated at the
//! total valuation and so contributes only constants. A small DPLL search
//! answers it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modal::{is_s5_model, modal_satisfies, WorldView};
use crate::objective::{classical_satisfies, Interpretation};
use crate::semantics::Limits;
use crate::syntax::{Atom, Base, Literal, Modality, ObjectiveLiteral, Program, Rule};

/// A world view with a "here" valuation below each of its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhtInterpretation {
    wv: WorldView,
    h: BTreeMap<Interpretation, Interpretation>,
}

impl EhtInterpretation {
    /// Points missing from `h` are mapped to themselves.
    pub fn new(
        wv: WorldView,
        h: impl IntoIterator<Item = (Interpretation, Interpretation)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Interpretation, Interpretation> =
            wv.iter().map(|i| (i.clone(), i.clone())).collect();
        for (there, here) in h {
            if !wv.contains(&there) {
                return Err(Error::PointNotInView);
            }
            assert!(
                here.is_subset(&there),
                "h({there}) = {here} is not a subset"
            );
            map.insert(there, here);
        }
        Ok(EhtInterpretation { wv, h: map })
    }

    pub fn total(wv: WorldView) -> Self {
        EhtInterpretation::new(wv, []).expect("identity is well formed")
    }

    pub fn world_view(&self) -> &WorldView {
        &self.wv
    }

    pub fn here(&self, point: &Interpretation) -> Option<&Interpretation> {
        self.h.get(point)
    }

    pub fn is_total_on<'a>(&self, points: impl IntoIterator<Item = &'a Interpretation>) -> bool {
        points.into_iter().all(|i| self.h.get(i) == Some(i))
    }

    pub fn is_total(&self) -> bool {
        self.h.iter().all(|(t, h)| t == h)
    }

    /// Points where h differs from the identity, with their h values.
    pub fn shrunk(&self) -> impl Iterator<Item = (&Interpretation, &Interpretation)> {
        self.h.iter().filter(|(t, h)| t != h)
    }
}

pub enum Eht<'a> {
    Literal(&'a Literal),
    Rule(&'a Rule),
}

impl<'a> From<&'a Literal> for Eht<'a> {
    fn from(l: &'a Literal) -> Self {
        Eht::Literal(l)
    }
}

impl<'a> From<&'a Rule> for Eht<'a> {
    fn from(r: &'a Rule) -> Self {
        Eht::Rule(r)
    }
}

fn objective_here(eht: &EhtInterpretation, point: &Interpretation, l: &ObjectiveLiteral) -> bool {
    if l.negations > 0 {
        return l.holds_in(|a| point.contains(a));
    }
    match &l.base {
        Base::True => true,
        Base::False => false,
        Base::Atom(a) => eht.h[point].contains(a),
    }
}

fn literal_here(eht: &EhtInterpretation, point: &Interpretation, l: &Literal) -> bool {
    match l {
        Literal::Objective(o) => objective_here(eht, point, o),
        Literal::Subjective(s) if s.negated => eht.wv.satisfies(s),
        Literal::Subjective(s) => match s.modality {
            Modality::K => eht.wv.iter().all(|i| objective_here(eht, i, &s.inner)),
            Modality::M => eht.wv.iter().any(|i| objective_here(eht, i, &s.inner)),
        },
    }
}

/// ⟨W, h, I⟩ ⊨ construct.
pub fn eht_satisfies<'a>(
    eht: &EhtInterpretation,
    point: &Interpretation,
    construct: impl Into<Eht<'a>>,
) -> Result<bool> {
    if !eht.wv.contains(point) {
        return Err(Error::PointNotInView);
    }
    Ok(match construct.into() {
        Eht::Literal(l) => literal_here(eht, point, l),
        Eht::Rule(r) => {
            !r.body.iter().all(|l| literal_here(eht, point, l))
                || r.head.iter().any(|a| eht.h[point].contains(a))
        }
    })
}

/// ⟨W, h⟩ ⊨ Π at every point.
pub fn is_eht_model(eht: &EhtInterpretation, program: &Program) -> bool {
    eht.wv.iter().all(|i| {
        program
            .rules()
            .iter()
            .all(|r| eht_satisfies(eht, i, r).expect("point of the view"))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    Const(bool),
    Var(usize),
}

/// A clause `∨ pos ∨ ¬neg` over at most 64 variables.
#[derive(Clone, Copy, Debug)]
struct Clause {
    pos: u64,
    neg: u64,
}

struct Encoding<'a> {
    points: Vec<&'a Interpretation>,
    /// (point index, atom) -> variable
    vars: Vec<(usize, Atom)>,
    index: HashMap<(usize, &'a Atom), usize>,
    free: Vec<bool>,
}

impl<'a> Encoding<'a> {
    fn new(wv: &'a WorldView, free: impl Fn(&Interpretation) -> bool) -> Result<Self> {
        let points: Vec<&Interpretation> = wv.iter().collect();
        let free: Vec<bool> = points.iter().map(|i| free(i)).collect();
        let mut vars = Vec::new();
        let mut index = HashMap::new();
        for (k, i) in points.iter().enumerate() {
            if !free[k] {
                continue;
            }
            for a in i.iter() {
                index.insert((k, a), vars.len());
                vars.push((k, a.clone()));
            }
        }
        if vars.len() > 64 {
            return Err(Error::Capacity {
                what: "here-valuation variables",
                size: vars.len(),
                cap: 64,
            });
        }
        Ok(Encoding {
            points,
            vars,
            index,
            free,
        })
    }

    fn atom(&self, k: usize, a: &Atom) -> Val {
        if !self.points[k].contains(a) {
            Val::Const(false)
        } else if !self.free[k] {
            Val::Const(true)
        } else {
            Val::Var(self.index[&(k, a)])
        }
    }

    /// Value of an objective literal at point k, as a single value.
    fn objective(&self, k: usize, l: &ObjectiveLiteral) -> Val {
        if l.negations > 0 {
            return Val::Const(l.holds_in(|a| self.points[k].contains(a)));
        }
        match &l.base {
            Base::True => Val::Const(true),
            Base::False => Val::Const(false),
            Base::Atom(a) => self.atom(k, a),
        }
    }

    /// Pushes a body literal as disjunctions of values; `K` expands into
    /// one entry per point.
    fn literal(&self, wv: &WorldView, k: usize, l: &Literal, out: &mut Vec<Vec<Val>>) {
        let all = || 0..self.points.len();
        match l {
            Literal::Objective(o) => out.push(vec![self.objective(k, o)]),
            Literal::Subjective(s) if s.negated => out.push(vec![Val::Const(wv.satisfies(s))]),
            Literal::Subjective(s) => match s.modality {
                Modality::K => out.extend(all().map(|j| vec![self.objective(j, &s.inner)])),
                Modality::M => out.push(all().map(|j| self.objective(j, &s.inner)).collect()),
            },
        }
    }

    fn clauses(&self, wv: &WorldView, program: &Program) -> Option<Vec<Clause>> {
        let mut out = Vec::new();
        for k in 0..self.points.len() {
            'rules: for r in program.rules() {
                let mut head = 0u64;
                for a in &r.head {
                    match self.atom(k, a) {
                        Val::Const(true) => continue 'rules,
                        Val::Const(false) => {}
                        Val::Var(v) => head |= 1 << v,
                    }
                }
                let mut raw = Vec::new();
                for l in &r.body {
                    self.literal(wv, k, l, &mut raw);
                }
                // conjunction of disjunctions, constants folded
                let mut body: Vec<Vec<usize>> = Vec::new();
                for d in raw {
                    if d.contains(&Val::Const(true)) {
                        continue;
                    }
                    let vars: Vec<usize> = d
                        .into_iter()
                        .filter_map(|v| match v {
                            Val::Var(v) => Some(v),
                            Val::Const(_) => None,
                        })
                        .collect();
                    if vars.is_empty() {
                        continue 'rules;
                    }
                    body.push(vars);
                }
                // ¬D1 ∨ … ∨ ¬Dm ∨ head, one clause per choice of a disjunct
                let mut partial = vec![0u64];
                for d in &body {
                    partial = partial
                        .iter()
                        .flat_map(|&neg| d.iter().map(move |&v| neg | 1 << v))
                        .collect();
                }
                for neg in partial {
                    if neg & head != 0 {
                        continue;
                    }
                    if neg == 0 && head == 0 {
                        return None;
                    }
                    out.push(Clause { pos: head, neg });
                }
            }
        }
        Some(out)
    }

    fn decode(&self, wv: &WorldView, value: u64) -> EhtInterpretation {
        let mut h: BTreeMap<Interpretation, BTreeSet<Atom>> = BTreeMap::new();
        for (k, i) in self.points.iter().enumerate() {
            if self.free[k] {
                h.insert((*i).clone(), BTreeSet::new());
            }
        }
        for (v, (k, a)) in self.vars.iter().enumerate() {
            if value >> v & 1 == 1 {
                h.get_mut(self.points[*k])
                    .expect("free point")
                    .insert(a.clone());
            }
        }
        EhtInterpretation::new(
            wv.clone(),
            h.into_iter()
                .map(|(t, here)| (t, Interpretation::new(here))),
        )
        .expect("points come from the view")
    }
}

fn dpll(clauses: &[Clause], mut assigned: u64, mut value: u64) -> Option<u64> {
    loop {
        let mut unit = None;
        let mut branch = None;
        for c in clauses {
            if c.pos & assigned & value != 0 || c.neg & assigned & !value != 0 {
                continue;
            }
            let open_pos = c.pos & !assigned;
            let open_neg = c.neg & !assigned;
            match (open_pos | open_neg).count_ones() {
                0 => return None,
                1 => {
                    unit = Some((open_pos | open_neg, open_pos != 0));
                    break;
                }
                _ => {
                    if branch.is_none() {
                        branch = Some(open_pos | open_neg);
                    }
                }
            }
        }
        match (unit, branch) {
            (Some((bit, v)), _) => {
                assigned |= bit;
                if v {
                    value |= bit;
                }
            }
            (None, Some(open)) => {
                let bit = open & open.wrapping_neg();
                // false first: the search is after a non-total valuation
                return dpll(clauses, assigned | bit, value & !bit)
                    .or_else(|| dpll(clauses, assigned | bit, value | bit));
            }
            (None, None) => return Some(value | !assigned),
        }
    }
}

/// A non-total EHT model ⟨W, h⟩ of Π that is total outside the points
/// picked by `free`, if one exists.
fn nontotal_model(
    wv: &WorldView,
    program: &Program,
    free: impl Fn(&Interpretation) -> bool,
) -> Result<Option<EhtInterpretation>> {
    let enc = Encoding::new(wv, free)?;
    if enc.vars.is_empty() {
        return Ok(None);
    }
    let Some(mut clauses) = enc.clauses(wv, program) else {
        return Ok(None);
    };
    let n = enc.vars.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    clauses.push(Clause { pos: 0, neg: all });
    Ok(dpll(&clauses, 0, 0).map(|v| enc.decode(wv, v & all)))
}

/// A countermodel refuting that W is an equilibrium EHT model, if any.
pub fn equilibrium_countermodel(
    wv: &WorldView,
    program: &Program,
) -> Result<Option<EhtInterpretation>> {
    nontotal_model(wv, program, |_| true)
}

/// ⟨W, id⟩ ⊨ Π and no non-total h gives an EHT model.
pub fn is_equilibrium(wv: &WorldView, program: &Program) -> Result<bool> {
    Ok(is_s5_model(wv, program) && equilibrium_countermodel(wv, program)?.is_none())
}

fn check_atoms(program: &Program, limits: &Limits) -> Result<Vec<Atom>> {
    let atoms: Vec<Atom> = program.atom_universe().into_iter().collect();
    let cap = limits.max_eht_atoms.min(6);
    if atoms.len() > cap {
        return Err(Error::Capacity {
            what: "EHT search over the atom universe",
            size: atoms.len(),
            cap,
        });
    }
    Ok(atoms)
}

/// Interpretations that satisfy the objective rules classically; every
/// point of an S5 model is one.
fn candidate_points(program: &Program, atoms: &[Atom]) -> Result<Vec<Interpretation>> {
    let objective: Program = program
        .rules()
        .iter()
        .filter(|r| r.is_objective())
        .cloned()
        .collect();
    let mut out = Vec::new();
    for m in 0u64..1 << atoms.len() {
        let i = Interpretation::new(
            atoms
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, a)| a.clone()),
        );
        if classical_satisfies(&i, &objective)? {
            out.push(i);
        }
    }
    Ok(out)
}

fn s5_models(program: &Program, limits: &Limits) -> Result<Vec<WorldView>> {
    let atoms = check_atoms(program, limits)?;
    let points = candidate_points(program, &atoms)?;
    let mut out = Vec::new();
    for mask in 1u64..1 << points.len() {
        let wv = WorldView::new(
            points
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, i)| i.clone()),
        )
        .expect("non-empty");
        if is_s5_model(&wv, program) {
            out.push(wv);
        }
    }
    Ok(out)
}

/// All equilibrium EHT models of Π.
pub fn equilibrium_eht_models(program: &Program, limits: &Limits) -> Result<BTreeSet<WorldView>> {
    let mut out = BTreeSet::new();
    for wv in s5_models(program, limits)? {
        if equilibrium_countermodel(&wv, program)?.is_none() {
            out.insert(wv);
        }
    }
    Ok(out)
}

/// Every S5 model of Π that is not an equilibrium, with the non-total EHT
/// model refuting it.
pub fn eht_trace(program: &Program, limits: &Limits) -> Result<Vec<EhtInterpretation>> {
    let mut out = Vec::new();
    for wv in s5_models(program, limits)? {
        if let Some(h) = equilibrium_countermodel(&wv, program)? {
            out.push(h);
        }
    }
    Ok(out)
}

/// W, X ⊨* Π. The second condition asks that no non-total EHT model of Π
/// (at all points of W) be total on W \ X.
pub fn models_star(
    wv: &WorldView,
    x: &BTreeSet<Interpretation>,
    program: &Program,
) -> Result<bool> {
    if !x.iter().all(|i| wv.contains(i)) {
        return Err(Error::PointNotInView);
    }
    if !x.iter().all(|i| modal_satisfies(wv, i, program)) {
        return Ok(false);
    }
    Ok(nontotal_model(wv, program, |i| x.contains(i))?.is_none())
}

/// Which interpretations ≤_Π quantifies over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreorderDomain {
    /// Members of any equilibrium EHT model of Π.
    #[default]
    Program,
    /// Members of the two views being compared.
    Pair,
}

struct Preorder<'a> {
    program: &'a Program,
    cache: HashMap<(usize, Interpretation), bool>,
}

impl Preorder<'_> {
    /// W ∪ {I}, W ⊨* Π for the k-th equilibrium model W.
    fn star(&mut self, k: usize, w: &WorldView, i: &Interpretation) -> Result<bool> {
        if let Some(&v) = self.cache.get(&(k, i.clone())) {
            return Ok(v);
        }
        let v = models_star(&w.with(i.clone()), w.interpretations(), self.program)?;
        self.cache.insert((k, i.clone()), v);
        Ok(v)
    }

    fn leq(
        &mut self,
        views: &[WorldView],
        a: usize,
        b: usize,
        domain: &BTreeSet<Interpretation>,
    ) -> Result<bool> {
        for i in domain {
            if self.star(a, &views[a], i)? && !self.star(b, &views[b], i)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// F15 world views with the default ≤_Π domain.
pub fn f15_world_views(program: &Program, limits: &Limits) -> Result<BTreeSet<WorldView>> {
    f15_world_views_with(program, limits, PreorderDomain::Program)
}

/// Equilibrium models W with no other equilibrium W' such that W ⊂ W' or
/// W <_Π W'.
pub fn f15_world_views_with(
    program: &Program,
    limits: &Limits,
    domain: PreorderDomain,
) -> Result<BTreeSet<WorldView>> {
    let views: Vec<WorldView> = equilibrium_eht_models(program, limits)?
        .into_iter()
        .collect();
    let everywhere: BTreeSet<Interpretation> =
        views.iter().flat_map(|w| w.iter().cloned()).collect();
    let mut order = Preorder {
        program,
        cache: HashMap::new(),
    };
    let mut out = BTreeSet::new();
    'views: for a in 0..views.len() {
        for b in 0..views.len() {
            if a == b {
                continue;
            }
            if views[a].is_subset(&views[b]) {
                continue 'views;
            }
            let pair: BTreeSet<Interpretation>;
            let dom = match domain {
                PreorderDomain::Program => &everywhere,
                PreorderDomain::Pair => {
                    pair = views[a].iter().chain(views[b].iter()).cloned().collect();
                    &pair
                }
            };
            if order.leq(&views, a, b, dom)? && !order.leq(&views, b, a, dom)? {
                continue 'views;
            }
        }
        out.insert(views[a].clone());
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

    fn wv(sets: &[&[&str]]) -> WorldView {
        WorldView::new(sets.iter().map(|s| interp(s))).unwrap()
    }

    fn lit(text: &str) -> Literal {
        parse_program(&format!(":- {text}.")).unwrap().rules()[0].body[0].clone()
    }

    #[test]
    fn here_reads_atoms_there_reads_negation() {
        let e = EhtInterpretation::new(wv(&[&["a"]]), [(interp(&["a"]), interp(&[]))]).unwrap();
        assert!(!eht_satisfies(&e, &interp(&["a"]), &lit("a")).unwrap());
        assert!(!eht_satisfies(&e, &interp(&["a"]), &lit("not a")).unwrap());
        assert!(!eht_satisfies(&e, &interp(&["a"]), &lit("K a")).unwrap());
        assert!(!eht_satisfies(&e, &interp(&["a"]), &lit("not K a")).unwrap());
        assert!(eht_satisfies(&e, &interp(&[]), &lit("a")).is_err());
    }

    #[test]
    fn counterexample_models() {
        let limits = Limits::default();
        let ab = prog("a | b.");
        assert_eq!(
            equilibrium_eht_models(&ab, &limits).unwrap(),
            [wv(&[&["a"]]), wv(&[&["b"]]), wv(&[&["a"], &["b"]])].into()
        );
        assert_eq!(
            f15_world_views(&ab, &limits).unwrap(),
            [wv(&[&["a"], &["b"]])].into()
        );
        let pi6 = prog("a | b. :- not K a.");
        assert_eq!(
            equilibrium_eht_models(&pi6, &limits).unwrap(),
            [wv(&[&["a"]])].into()
        );
        assert_eq!(
            f15_world_views(&pi6, &limits).unwrap(),
            [wv(&[&["a"]])].into()
        );
        let fact = prog("a.");
        assert_eq!(
            f15_world_views(&fact, &limits).unwrap(),
            [wv(&[&["a"]])].into()
        );
    }

    #[test]
    fn self_support_is_not_equilibrium() {
        let p = prog("a :- K a.");
        let limits = Limits::default();
        assert_eq!(
            equilibrium_eht_models(&p, &limits).unwrap(),
            [wv(&[&[]])].into()
        );
        let trace = eht_trace(&p, &limits).unwrap();
        // [{a}] and [{}, {a}] are S5 models but not equilibria
        assert_eq!(trace.len(), 2);
        assert!(trace.iter().all(|h| !h.is_total() && is_eht_model(h, &p)));
    }

    #[test]
    fn m_body_compiles_to_clauses() {
        // b is derivable at {a, b} through M a only if a is kept somewhere
        let p = prog("a | c. b :- M a.");
        let w = wv(&[&["a", "b"], &["c", "b"]]);
        assert!(is_s5_model(&w, &p));
        assert!(is_equilibrium(&w, &p).unwrap());
        let w = wv(&[&["a", "b"], &["a", "c", "b"]]);
        assert!(!is_equilibrium(&w, &p).unwrap());
    }

    #[test]
    fn star_examples() {
        let fact = prog("a.");
        let w = wv(&[&["a"]]);
        assert!(models_star(&w, w.interpretations(), &fact).unwrap());
        let ab = prog("a | b.");
        let both = wv(&[&["a"], &["b"]]);
        let x: BTreeSet<Interpretation> = [interp(&["a"])].into();
        assert!(models_star(&both, &x, &ab).unwrap());
        assert!(models_star(&wv(&[&["a", "b"]]), &BTreeSet::new(), &ab).unwrap());
        assert!(!models_star(
            &wv(&[&["a", "b"]]),
            wv(&[&["a", "b"]]).interpretations(),
            &ab
        )
        .unwrap());
    }

    #[test]
    fn pair_domain_agrees_on_counterexample() {
        let limits = Limits::default();
        for text in ["a | b.", "a | b. :- not K a."] {
            let p = prog(text);
            assert_eq!(
                f15_world_views_with(&p, &limits, PreorderDomain::Pair).unwrap(),
                f15_world_views(&p, &limits).unwrap()
            );
        }
    }

    #[test]
    fn capacity() {
        let p = prog("a | b | c | d | e.");
        assert!(matches!(
            equilibrium_eht_models(&p, &Limits::default()),
            Err(Error::Capacity { .. })
        ));
    }
}
