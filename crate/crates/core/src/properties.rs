//! Property checks over world-view semantics and the property matrix.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::{random_program, random_stratified_program, rng, GenParams};
use crate::modal::{is_s5_model, WorldView};
use crate::objective::{stable_models, Placement, Side};
use crate::semantics::{solve, Limits, Semantics};
use crate::splitting::{enumerate_epistemic_splitting_sets, epistemic_split, solutions_of};
use crate::syntax::{
    eliminate_m, Atom, Literal, ObjectiveLiteral, Program, Rule, SubjectiveLiteral,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    SupraS5,
    SupraAsp,
    SubjectiveConstraintMonotonicity,
    EpistemicSplitting,
}

impl Property {
    /// Row order of the matrix.
    pub const ALL: [Property; 4] = [
        Property::SupraS5,
        Property::SupraAsp,
        Property::SubjectiveConstraintMonotonicity,
        Property::EpistemicSplitting,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Property::SupraS5 => "Supra-S5",
            Property::SupraAsp => "Supra-ASP",
            Property::SubjectiveConstraintMonotonicity => "Subjective constraint monotonicity",
            Property::EpistemicSplitting => "Splitting",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
}

/// One check. `lhs` and `rhs` are the two sides compared; on a violation
/// they are the witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub semantics: Semantics,
    pub program: String,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub placement: Option<Side>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
    pub verdict: Verdict,
    pub lhs: Vec<WorldView>,
    pub rhs: Vec<WorldView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<GenParams>,
}

impl PropertyReport {
    fn new(
        property: Property,
        semantics: Semantics,
        program: &Program,
        lhs: BTreeSet<WorldView>,
        rhs: BTreeSet<WorldView>,
    ) -> Self {
        PropertyReport {
            property,
            semantics,
            program: program.to_string(),
            u: None,
            placement: None,
            constraint: None,
            verdict: if lhs == rhs {
                Verdict::Holds
            } else {
                Verdict::Violated
            },
            lhs: lhs.into_iter().collect(),
            rhs: rhs.into_iter().collect(),
            seed: None,
            params: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// The two sides when they differ.
    pub fn witness(&self) -> Option<(&[WorldView], &[WorldView])> {
        (!self.holds()).then_some((&self.lhs, &self.rhs))
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let views = |v: &[WorldView]| {
            let s: Vec<String> = v.iter().map(WorldView::to_string).collect();
            format!("{{{}}}", s.join(", "))
        };
        write!(
            f,
            "{} under {}: {:?}",
            self.property.label(),
            self.semantics,
            self.verdict
        )?;
        if let Some(u) = &self.u {
            write!(f, " U={{{}}}", u.join(","))?;
        }
        if let Some(p) = self.placement {
            write!(f, " placement={p:?}")?;
        }
        if let Some(c) = &self.constraint {
            write!(f, " r=`{c}`")?;
        }
        if let Some(s) = self.seed {
            write!(f, " seed={s}")?;
        }
        writeln!(f)?;
        for line in self.program.lines() {
            writeln!(f, "    {line}")?;
        }
        write!(f, "  lhs {}\n  rhs {}", views(&self.lhs), views(&self.rhs))
    }
}

/// Semantics without native `M` see programs with `M` eliminated.
fn prepared(program: &Program, semantics: Semantics) -> Program {
    if !semantics.supports_m() && program.mentions_m() {
        eliminate_m(program)
    } else {
        program.clone()
    }
}

/// World views of Π directly versus those of the bottom/top composition.
pub fn check_epistemic_splitting(
    program: &Program,
    u: &BTreeSet<Atom>,
    semantics: Semantics,
    placement: Placement,
    limits: &Limits,
) -> Result<PropertyReport> {
    let program = prepared(program, semantics);
    let split = epistemic_split(&program, u, placement)?;
    let lhs = solve(&program, semantics, limits)?;
    let rhs = solutions_of(&split, semantics, limits)?
        .iter()
        .map(|s| s.combined())
        .collect();
    let mut report =
        PropertyReport::new(Property::EpistemicSplitting, semantics, &program, lhs, rhs);
    report.u = Some(u.iter().map(Atom::to_string).collect());
    report.placement = match placement {
        Placement::Bottom => Some(Side::Bottom),
        Placement::Top => Some(Side::Top),
        Placement::Pattern(_) => None,
    };
    Ok(report)
}

/// WV(Π ∪ {r}) versus the views of Π that falsify the body of r.
pub fn check_constraint_monotonicity(
    program: &Program,
    r: &Rule,
    semantics: Semantics,
    limits: &Limits,
) -> Result<PropertyReport> {
    assert!(
        r.is_subjective_constraint(),
        "`{r}` is not a subjective constraint"
    );
    let program = prepared(program, semantics);
    let r = prepared(&Program::new([r.clone()]), semantics).rules()[0].clone();
    let mut with_r = program.clone();
    with_r.push(r.clone());
    let lhs = solve(&with_r, semantics, limits)?;
    let rhs = solve(&program, semantics, limits)?
        .into_iter()
        .filter(|w| {
            !r.body.iter().all(|l| match l {
                Literal::Subjective(s) => w.satisfies(s),
                Literal::Objective(_) => unreachable!("subjective constraint"),
            })
        })
        .collect();
    let mut report = PropertyReport::new(
        Property::SubjectiveConstraintMonotonicity,
        semantics,
        &program,
        lhs,
        rhs,
    );
    report.constraint = Some(r.to_string());
    Ok(report)
}

/// For an objective program: the only world view is SM(Π), or none when
/// Π has no stable model.
pub fn check_supra_asp(
    program: &Program,
    semantics: Semantics,
    limits: &Limits,
) -> Result<PropertyReport> {
    if !program.is_objective() {
        return Err(Error::SubjectiveLiteral(program.to_string()));
    }
    let lhs = solve(program, semantics, limits)?;
    let rhs = WorldView::new(stable_models(program, limits)?)
        .into_iter()
        .collect();
    Ok(PropertyReport::new(
        Property::SupraAsp,
        semantics,
        program,
        lhs,
        rhs,
    ))
}

/// Every world view is an S5 model.
pub fn check_supra_s5(
    program: &Program,
    semantics: Semantics,
    limits: &Limits,
) -> Result<PropertyReport> {
    let program = prepared(program, semantics);
    let lhs = solve(&program, semantics, limits)?;
    let rhs = lhs
        .iter()
        .filter(|w| is_s5_model(w, &program))
        .cloned()
        .collect();
    Ok(PropertyReport::new(
        Property::SupraS5,
        semantics,
        &program,
        lhs,
        rhs,
    ))
}

/// Single-literal subjective constraints over the atoms of Π.
pub fn candidate_constraints(program: &Program, semantics: Semantics) -> Vec<Rule> {
    let mut out = Vec::new();
    for a in program.atom_universe() {
        let inner = ObjectiveLiteral::atom(a);
        let mut cores = vec![SubjectiveLiteral::k(inner.clone())];
        if semantics.supports_m() {
            cores.push(SubjectiveLiteral::m(inner));
        }
        for c in cores {
            out.push(Rule::constraint([Literal::Subjective(c.clone())]));
            out.push(Rule::constraint([Literal::Subjective(c.not())]));
        }
    }
    out
}

/// Matrix cell status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    Check,
    Blank,
    Untested,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::Check => "✓",
            Mark::Blank => "",
            Mark::Untested => "untested",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub property: Property,
    pub semantics: Semantics,
    pub mark: Mark,
    /// Checks run to completion.
    pub checks: usize,
    /// Checks skipped on a capacity limit.
    pub skipped: usize,
    pub violations: usize,
    /// First violation, in input order.
    pub witness: Option<PropertyReport>,
}

/// The expected pattern: every semantics is supra-S5 and supra-ASP;
/// monotonicity holds for G91, G11 and C19; splitting for G91 and C19.
pub fn expected_mark(property: Property, semantics: Semantics) -> Mark {
    use Semantics::*;
    let holds = match property {
        Property::SupraS5 | Property::SupraAsp => true,
        Property::SubjectiveConstraintMonotonicity => matches!(semantics, G91 | G11 | C19),
        Property::EpistemicSplitting => matches!(semantics, G91 | C19),
    };
    if holds {
        Mark::Check
    } else {
        Mark::Blank
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyMatrix {
    pub semantics: Vec<Semantics>,
    pub cells: Vec<Cell>,
}

impl PropertyMatrix {
    pub fn cell(&self, property: Property, semantics: Semantics) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.property == property && c.semantics == semantics)
    }

    /// Cells whose mark differs from the expected pattern.
    pub fn deviations(&self) -> Vec<&Cell> {
        self.cells
            .iter()
            .filter(|c| c.mark != expected_mark(c.property, c.semantics))
            .collect()
    }

    pub fn matches_expected(&self) -> bool {
        self.deviations().is_empty()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &PropertyReport> {
        self.cells.iter().filter_map(|c| c.witness.as_ref())
    }
}

impl fmt::Display for PropertyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = Property::ALL
            .iter()
            .map(|p| p.label().len())
            .max()
            .unwrap_or(0);
        write!(f, "{:width$}", "")?;
        for s in &self.semantics {
            write!(f, " | {:^8}", s.to_string())?;
        }
        writeln!(f)?;
        for p in Property::ALL {
            write!(f, "{:width$}", p.label())?;
            for &s in &self.semantics {
                let mark = self.cell(p, s).map_or(Mark::Untested, |c| c.mark);
                write!(f, " | {:^8}", mark.to_string())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Inputs for one harness run.
#[derive(Clone, Debug)]
pub struct Harness {
    pub semantics: Vec<Semantics>,
    pub seed: u64,
    /// Random programs per cell.
    pub count: usize,
    pub limits: Limits,
    pub epistemic: GenParams,
    pub objective: GenParams,
    /// Smaller programs for F15, whose search is exponential in the
    /// number of candidate views.
    pub f15_atoms: usize,
}

impl Default for Harness {
    fn default() -> Self {
        Harness {
            semantics: Semantics::ALL.to_vec(),
            seed: 0,
            count: 100,
            limits: Limits::default(),
            epistemic: GenParams::epistemic(3, 4),
            objective: GenParams::objective(4, 5),
            f15_atoms: 3,
        }
    }
}

/// A program to check, with where it came from.
#[derive(Clone, Debug)]
pub struct Subject {
    pub program: Program,
    pub seed: Option<u64>,
    pub params: Option<GenParams>,
}

impl Subject {
    pub fn fixed(program: Program) -> Self {
        Subject {
            program,
            seed: None,
            params: None,
        }
    }
}

enum Outcome {
    Done(PropertyReport),
    Skipped,
}

fn run_one(check: impl FnOnce() -> Result<PropertyReport>) -> Result<Outcome> {
    match check() {
        Ok(r) => Ok(Outcome::Done(r)),
        Err(Error::Capacity { .. }) => Ok(Outcome::Skipped),
        Err(e) => Err(e),
    }
}

/// Every check of one property under one semantics on one program.
pub fn checks_for(
    property: Property,
    semantics: Semantics,
    program: &Program,
    limits: &Limits,
) -> Result<Vec<Result<PropertyReport>>> {
    Ok(match property {
        Property::SupraS5 => vec![check_supra_s5(program, semantics, limits)],
        Property::SupraAsp => {
            if program.is_objective() {
                vec![check_supra_asp(program, semantics, limits)]
            } else {
                Vec::new()
            }
        }
        Property::SubjectiveConstraintMonotonicity => candidate_constraints(program, semantics)
            .iter()
            .map(|r| check_constraint_monotonicity(program, r, semantics, limits))
            .collect(),
        Property::EpistemicSplitting => {
            let sets = match enumerate_epistemic_splitting_sets(program, limits) {
                Ok(s) => s,
                Err(Error::Capacity { .. }) => {
                    return Ok(vec![Err(Error::Capacity {
                        what: "splitting-set enumeration",
                        size: program.atom_universe().len(),
                        cap: limits.max_atoms,
                    })])
                }
                Err(e) => return Err(e),
            };
            let mut sets = sets;
            // U = At splits off the subjective constraints when they go on top
            if program.rules().iter().any(Rule::is_subjective_constraint) {
                sets.push(program.atom_universe());
            }
            let mut out = Vec::new();
            for u in sets {
                for placement in [Placement::Bottom, Placement::Top] {
                    out.push(check_epistemic_splitting(
                        program, &u, semantics, placement, limits,
                    ));
                }
            }
            out
        }
    })
}

fn random_subjects(property: Property, semantics: Semantics, h: &Harness) -> Vec<Subject> {
    let base = if property == Property::SupraAsp {
        h.objective
    } else {
        h.epistemic
    };
    let mut params = base;
    if semantics == Semantics::F15 {
        params.atoms = params.atoms.min(h.f15_atoms);
    }
    if !semantics.supports_m() {
        params = params.k_only();
    }
    (0..h.count as u64)
        .map(|k| {
            let seed = h.seed.wrapping_add(k);
            let mut r = rng(seed);
            // layered programs always admit splitting sets
            let program = if property == Property::EpistemicSplitting && k % 2 == 1 {
                random_stratified_program(&mut r, &params, 2)
            } else {
                random_program(&mut r, &params)
            };
            Subject {
                program,
                seed: Some(seed),
                params: Some(params),
            }
        })
        .collect()
}

/// Runs one cell over the fixed subjects followed by `count` random ones.
pub fn run_cell(
    property: Property,
    semantics: Semantics,
    fixed: &[Subject],
    h: &Harness,
) -> Result<Cell> {
    let subjects: Vec<Subject> = fixed
        .iter()
        .cloned()
        .chain(random_subjects(property, semantics, h))
        .collect();
    let results: Vec<Result<Vec<Outcome>>> = subjects
        .par_iter()
        .map(|s| {
            checks_for(property, semantics, &s.program, &h.limits)?
                .into_iter()
                .map(|c| {
                    run_one(|| c).map(|o| match o {
                        Outcome::Done(mut r) => {
                            r.seed = s.seed;
                            r.params = s.params;
                            Outcome::Done(r)
                        }
                        skipped => skipped,
                    })
                })
                .collect()
        })
        .collect();
    let mut cell = Cell {
        property,
        semantics,
        mark: Mark::Untested,
        checks: 0,
        skipped: 0,
        violations: 0,
        witness: None,
    };
    for outcomes in results {
        for o in outcomes? {
            match o {
                Outcome::Skipped => cell.skipped += 1,
                Outcome::Done(r) => {
                    cell.checks += 1;
                    if !r.holds() {
                        cell.violations += 1;
                        if cell.witness.is_none() {
                            cell.witness = Some(r);
                        }
                    }
                }
            }
        }
    }
    cell.mark = if cell.violations > 0 {
        Mark::Blank
    } else if cell.checks > 0 {
        Mark::Check
    } else {
        Mark::Untested
    };
    Ok(cell)
}

/// The full matrix. Fixed subjects come first so their witnesses win.
pub fn run_matrix(fixed: &[Subject], h: &Harness) -> Result<PropertyMatrix> {
    let coords: Vec<(Property, Semantics)> = Property::ALL
        .iter()
        .flat_map(|&p| h.semantics.iter().map(move |&s| (p, s)))
        .collect();
    let cells = coords
        .into_par_iter()
        .map(|(p, s)| run_cell(p, s, fixed, h))
        .collect::<Result<Vec<Cell>>>()?;
    Ok(PropertyMatrix {
        semantics: h.semantics.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn prog(text: &str) -> Program {
        parse_program(text).unwrap()
    }

    fn ab() -> BTreeSet<Atom> {
        [Atom::prop("a"), Atom::prop("b")].into()
    }

    #[test]
    fn splitting_counterexamples() {
        let l = Limits::default();
        let pi5 = prog("a | b. c :- K a. :- not c.");
        assert!(
            check_epistemic_splitting(&pi5, &ab(), Semantics::G91, Placement::Bottom, &l)
                .unwrap()
                .holds()
        );
        let r =
            check_epistemic_splitting(&pi5, &ab(), Semantics::G11, Placement::Bottom, &l).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.lhs.len(), 1);
        assert!(r.rhs.is_empty());
        let pi6 = prog("a | b. :- not K a.");
        for s in [Semantics::K15, Semantics::S17, Semantics::F15] {
            let r = check_epistemic_splitting(&pi6, &ab(), s, Placement::Top, &l).unwrap();
            assert_eq!(r.verdict, Verdict::Violated, "{s}");
            assert!(
                check_epistemic_splitting(&pi6, &ab(), s, Placement::Bottom, &l)
                    .unwrap()
                    .holds()
            );
        }
    }

    #[test]
    fn monotonicity_counterexample() {
        let l = Limits::default();
        let p = prog("a | b.");
        let r = prog(":- not K a.").rules()[0].clone();
        for s in Semantics::ALL {
            let report = check_constraint_monotonicity(&p, &r, s, &l).unwrap();
            let expected = !matches!(s, Semantics::K15 | Semantics::S17 | Semantics::F15);
            assert_eq!(report.holds(), expected, "{s}");
        }
    }

    #[test]
    fn report_json_shape() {
        let l = Limits::default();
        let p = prog("a | b. c :- K a. :- not c.");
        let r =
            check_epistemic_splitting(&p, &ab(), Semantics::G11, Placement::Bottom, &l).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        for key in [
            "property",
            "semantics",
            "program",
            "U",
            "verdict",
            "lhs",
            "rhs",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["verdict"], "violated");
        assert_eq!(json["lhs"], serde_json::json!([[["a", "c"]]]));
    }

    #[test]
    fn supra_asp_rejects_epistemic() {
        assert!(check_supra_asp(&prog("a :- K a."), Semantics::G91, &Limits::default()).is_err());
    }
}
