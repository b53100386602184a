//! Epistemic splitting sets, bottom/top composition, and epistemic
//! stratification with layer-by-layer evaluation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modal::{subjective_reduct, WorldView};
use crate::objective::{stable_models, Interpretation, Placement, Side};
use crate::semantics::{solve, Limits, Semantics};
use crate::syntax::{Atom, Program, Rule};

/// dep(a, b): a occurs in the head or objective body of a rule whose
/// subjective body mentions b.
pub fn dep_relation(program: &Program) -> BTreeSet<(Atom, Atom)> {
    let mut out = BTreeSet::new();
    for r in program.rules() {
        let sub = r.subjective_atoms();
        for a in r.objective_atoms() {
            for b in &sub {
                out.insert((a.clone(), b.clone()));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct EpistemicSplit {
    pub u: BTreeSet<Atom>,
    pub bottom: Program,
    pub top: Program,
    /// Subjective constraints on `u` and the side each went to.
    pub placement: Vec<(Rule, Side)>,
}

fn inside(r: &Rule, u: &BTreeSet<Atom>) -> bool {
    r.atoms().is_subset(u)
}

fn refers_only_subjectively(r: &Rule, u: &BTreeSet<Atom>) -> bool {
    r.objective_atoms().is_disjoint(u)
}

pub fn is_epistemic_splitting_set(program: &Program, u: &BTreeSet<Atom>) -> bool {
    program
        .rules()
        .iter()
        .all(|r| inside(r, u) || refers_only_subjectively(r, u))
}

/// Partitions Π into B_U (all atoms in U) and T_U (U reached only through
/// subjective literals). Rules meeting both conditions follow `placement`.
pub fn epistemic_split(
    program: &Program,
    u: &BTreeSet<Atom>,
    placement: Placement,
) -> Result<EpistemicSplit> {
    let mut split = EpistemicSplit {
        u: u.clone(),
        bottom: Program::default(),
        top: Program::default(),
        placement: Vec::new(),
    };
    for r in program.rules() {
        let side = match (inside(r, u), refers_only_subjectively(r, u)) {
            (true, true) => {
                let side = placement.side(split.placement.len());
                split.placement.push((r.clone(), side));
                side
            }
            (true, false) => Side::Bottom,
            (false, true) => Side::Top,
            (false, false) => return Err(Error::NotAnEpistemicSplittingSet(r.clone())),
        };
        match side {
            Side::Bottom => split.bottom.push(r.clone()),
            Side::Top => split.top.push(r.clone()),
        };
    }
    Ok(split)
}

/// E_U(Π, W_b): subjective literals over U in the top replaced by their
/// value in `wv_b`.
pub fn top_simplification(split: &EpistemicSplit, wv_b: &WorldView) -> Program {
    subjective_reduct(&split.top, wv_b, Some(&split.u))
}

/// W_b ⊔ W_t.
pub fn combine(wv_b: &WorldView, wv_t: &WorldView) -> WorldView {
    WorldView::new(
        wv_b.iter()
            .flat_map(|b| wv_t.iter().map(move |t| b.union(t))),
    )
    .expect("both sides non-empty")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpistemicSolution {
    pub wv_b: WorldView,
    pub wv_t: WorldView,
}

impl EpistemicSolution {
    pub fn combined(&self) -> WorldView {
        combine(&self.wv_b, &self.wv_t)
    }
}

/// Every pair ⟨W_b, W_t⟩ with W_b a world view of B_U and W_t one of
/// E_U(Π, W_b), both under `semantics`.
pub fn epistemic_solutions(
    program: &Program,
    u: &BTreeSet<Atom>,
    semantics: Semantics,
    placement: Placement,
    limits: &Limits,
) -> Result<Vec<EpistemicSolution>> {
    let split = epistemic_split(program, u, placement)?;
    solutions_of(&split, semantics, limits)
}

pub fn solutions_of(
    split: &EpistemicSplit,
    semantics: Semantics,
    limits: &Limits,
) -> Result<Vec<EpistemicSolution>> {
    let mut out = Vec::new();
    for wv_b in solve(&split.bottom, semantics, limits)? {
        let e = top_simplification(split, &wv_b);
        for wv_t in solve(&e, semantics, limits)? {
            out.push(EpistemicSolution {
                wv_b: wv_b.clone(),
                wv_t,
            });
        }
    }
    Ok(out)
}

/// All U with ∅ ⊂ U ⊂ At that are epistemic splitting sets.
pub fn enumerate_epistemic_splitting_sets(
    program: &Program,
    limits: &Limits,
) -> Result<Vec<BTreeSet<Atom>>> {
    let atoms: Vec<Atom> = program.atom_universe().into_iter().collect();
    let cap = limits.max_atoms.min(20);
    if atoms.len() > cap {
        return Err(Error::Capacity {
            what: "splitting-set enumeration over the atom universe",
            size: atoms.len(),
            cap,
        });
    }
    let full = (1u64 << atoms.len()) - 1;
    let mut out = Vec::new();
    for m in 1..full {
        let u: BTreeSet<Atom> = atoms
            .iter()
            .enumerate()
            .filter(|(k, _)| m >> k & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect();
        if is_epistemic_splitting_set(program, &u) {
            out.push(u);
        }
    }
    Ok(out)
}

/// Layers λ with λ(a) = λ(b) for atoms sharing a rule outside subjective
/// literals and λ(a) > λ(b) whenever dep(a, b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratification {
    pub lambda: BTreeMap<Atom, usize>,
    pub groups: Vec<BTreeSet<Atom>>,
}

impl Stratification {
    pub fn layers(&self) -> usize {
        self.lambda.values().max().map_or(0, |m| m + 1)
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut x = x;
    while parent[x] != root {
        let next = parent[x];
        parent[x] = root;
        x = next;
    }
    root
}

pub fn stratify(program: &Program) -> Result<Stratification> {
    let atoms: Vec<Atom> = program.atom_universe().into_iter().collect();
    let index: BTreeMap<&Atom, usize> = atoms.iter().enumerate().map(|(k, a)| (a, k)).collect();
    let mut parent: Vec<usize> = (0..atoms.len()).collect();
    for r in program.rules() {
        let obj: Vec<usize> = r.objective_atoms().iter().map(|a| index[a]).collect();
        for w in obj.windows(2) {
            let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[x] = y;
        }
    }
    let roots: Vec<usize> = (0..atoms.len()).map(|k| find(&mut parent, k)).collect();
    let mut group_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut groups: Vec<BTreeSet<Atom>> = Vec::new();
    for (k, &root) in roots.iter().enumerate() {
        let g = *group_of_root.entry(root).or_insert_with(|| {
            groups.push(BTreeSet::new());
            groups.len() - 1
        });
        groups[g].insert(atoms[k].clone());
    }
    let group = |a: &Atom| group_of_root[&roots[index[a]]];

    let mut edges: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); groups.len()];
    for (a, b) in dep_relation(program) {
        let (ga, gb) = (group(&a), group(&b));
        if ga == gb {
            return Err(Error::NotStratified(format!(
                "{a} depends on {b} through a subjective literal but both must share a layer"
            )));
        }
        edges[ga].insert(gb);
    }

    // longest path to a sink, with cycle detection
    let mut level: Vec<Option<usize>> = vec![None; groups.len()];
    let mut on_stack = vec![false; groups.len()];
    fn visit(
        g: usize,
        edges: &[BTreeSet<usize>],
        level: &mut [Option<usize>],
        on_stack: &mut [bool],
        groups: &[BTreeSet<Atom>],
    ) -> Result<usize> {
        if let Some(l) = level[g] {
            return Ok(l);
        }
        if on_stack[g] {
            let a = groups[g].iter().next().expect("groups are non-empty");
            return Err(Error::NotStratified(format!(
                "cyclic subjective dependence through {a}"
            )));
        }
        on_stack[g] = true;
        let mut l = 0;
        for &h in &edges[g] {
            l = l.max(visit(h, edges, level, on_stack, groups)? + 1);
        }
        on_stack[g] = false;
        level[g] = Some(l);
        Ok(l)
    }
    for g in 0..groups.len() {
        visit(g, &edges, &mut level, &mut on_stack, &groups)?;
    }
    let lambda = atoms
        .iter()
        .map(|a| (a.clone(), level[group(a)].expect("all visited")))
        .collect();
    Ok(Stratification { lambda, groups })
}

/// The layer a rule is evaluated in: that of its objective atoms, or one
/// above its highest subjective atom for a subjective constraint.
fn rule_layer(r: &Rule, s: &Stratification) -> usize {
    match r.objective_atoms().iter().next() {
        Some(a) => s.lambda[a],
        None => r
            .subjective_atoms()
            .iter()
            .map(|a| s.lambda[a] + 1)
            .max()
            .unwrap_or(0),
    }
}

/// Bottom-up evaluation of a stratified program: each layer is simplified
/// against the view built so far and solved as an objective program. The
/// result is compared with direct solving.
pub fn layered_world_view(
    program: &Program,
    semantics: Semantics,
    limits: &Limits,
) -> Result<Option<WorldView>> {
    let layered = layered_evaluation(program, limits)?;
    let direct = solve(program, semantics, limits)?;
    let expected: BTreeSet<WorldView> = layered.iter().cloned().collect();
    if direct != expected {
        return Err(Error::LayeredMismatch { semantics });
    }
    Ok(layered)
}

/// The layered computation alone.
pub fn layered_evaluation(program: &Program, limits: &Limits) -> Result<Option<WorldView>> {
    let strat = stratify(program)?;
    let mut by_layer: BTreeMap<usize, Program> = BTreeMap::new();
    for r in program.rules() {
        by_layer
            .entry(rule_layer(r, &strat))
            .or_default()
            .push(r.clone());
    }
    let mut view = WorldView::singleton(Interpretation::empty());
    let mut below: BTreeSet<Atom> = BTreeSet::new();
    let top_layer = by_layer.keys().next_back().copied().unwrap_or(0);
    for layer in 0..=top_layer {
        if let Some(rules) = by_layer.get(&layer) {
            let e = subjective_reduct(rules, &view, Some(&below));
            let Some(models) = WorldView::new(stable_models(&e, limits)?) else {
                return Ok(None);
            };
            view = combine(&view, &models);
        }
        below.extend(
            strat
                .lambda
                .iter()
                .filter(|(_, &l)| l == layer)
                .map(|(a, _)| a.clone()),
        );
    }
    Ok(Some(view))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn prog(text: &str) -> Program {
        parse_program(text).unwrap()
    }

    fn atoms(names: &[&str]) -> BTreeSet<Atom> {
        names.iter().map(|a| Atom::prop(*a)).collect()
    }

    fn wv(sets: &[&[&str]]) -> WorldView {
        WorldView::new(
            sets.iter()
                .map(|s| s.iter().map(|a| Atom::prop(*a)).collect::<Interpretation>()),
        )
        .unwrap()
    }

    #[test]
    fn dependencies() {
        let d = dep_relation(&prog("a | b. c :- K a."));
        assert_eq!(d, [(Atom::prop("c"), Atom::prop("a"))].into());
        assert!(dep_relation(&prog("a :- not b.")).is_empty());
    }

    #[test]
    fn split_and_reject() {
        let p = prog("p | q. s :- p, K q.");
        match epistemic_split(&p, &atoms(&["p", "q"]), Placement::Bottom) {
            Err(Error::NotAnEpistemicSplittingSet(r)) => assert_eq!(r.to_string(), "s :- p, K q."),
            other => panic!("unexpected {other:?}"),
        }
        let whole = epistemic_split(&p, &p.atoms(), Placement::Bottom).unwrap();
        assert_eq!(whole.bottom, p);
        assert!(whole.top.is_empty());
    }

    #[test]
    fn pi5_top() {
        let p = prog("a | b. c :- K a. :- not c.");
        let split = epistemic_split(&p, &atoms(&["a", "b"]), Placement::Bottom).unwrap();
        let e = top_simplification(&split, &wv(&[&["a"], &["b"]]));
        assert_eq!(e.to_string(), "c :- #false.\n:- not c.\n");
        let sols = epistemic_solutions(
            &p,
            &atoms(&["a", "b"]),
            Semantics::G91,
            Placement::Bottom,
            &Limits::default(),
        );
        assert!(sols.unwrap().is_empty());
    }

    #[test]
    fn combination() {
        assert_eq!(
            combine(&wv(&[&["a"]]), &wv(&[&["c"], &["d"]])),
            wv(&[&["a", "c"], &["a", "d"]])
        );
        let w = wv(&[&["a"], &["b"]]);
        assert_eq!(combine(&w, &wv(&[&[]])), w);
    }

    #[test]
    fn splitting_set_enumeration() {
        let sets =
            enumerate_epistemic_splitting_sets(&prog("a | b. c :- K a."), &Limits::default())
                .unwrap();
        assert!(sets.contains(&atoms(&["a", "b"])));
        let sets =
            enumerate_epistemic_splitting_sets(&prog("a :- b."), &Limits::default()).unwrap();
        assert!(!sets.contains(&atoms(&["b"])));
        assert!(sets.is_empty());
    }

    #[test]
    fn strata() {
        assert!(matches!(
            stratify(&prog("a :- K a.")),
            Err(Error::NotStratified(_))
        ));
        assert!(matches!(
            stratify(&prog("a :- K b. b :- K a.")),
            Err(Error::NotStratified(_))
        ));
        let s = stratify(&prog("a :- not b. c :- a.")).unwrap();
        assert!(s.lambda.values().all(|&l| l == 0));
        let s = stratify(&prog("a | b. c :- K a. d :- K c, not K b.")).unwrap();
        assert_eq!(s.lambda[&Atom::prop("a")], 0);
        assert_eq!(s.lambda[&Atom::prop("c")], 1);
        assert_eq!(s.lambda[&Atom::prop("d")], 2);
        assert_eq!(s.layers(), 3);
    }

    #[test]
    fn layered() {
        let limits = Limits::default();
        let p = prog("a | b. c :- not K a. d :- K c.");
        let w = layered_world_view(&p, Semantics::G91, &limits).unwrap();
        assert_eq!(w, Some(wv(&[&["a", "c", "d"], &["b", "c", "d"]])));
        let none = prog("a :- not a. c :- K a.");
        assert_eq!(
            layered_world_view(&none, Semantics::C19, &limits).unwrap(),
            None
        );
        let filtered = prog("a | b. :- not K a.");
        assert_eq!(
            layered_world_view(&filtered, Semantics::G91, &limits).unwrap(),
            None
        );
    }
}
