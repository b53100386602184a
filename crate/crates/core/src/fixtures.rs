//! The example corpus and its expectations.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::modal::WorldView;
use crate::objective::{Interpretation, Placement, Side};
use crate::properties::{
    check_constraint_monotonicity, check_epistemic_splitting, Property, Verdict,
};
use crate::semantics::{solve, Limits, Semantics};
use crate::splitting::is_epistemic_splitting_set;
use crate::syntax::{load_program, parse_atom, parse_program, Atom, Program, Rule};

const EXPECTATIONS: &str = include_str!("../fixtures/expectations.toml");

const FILES: &[(&str, &str)] = &[
    ("pi1.elp", include_str!("../fixtures/pi1.elp")),
    ("college.elp", include_str!("../fixtures/college.elp")),
    (
        "college_appointment.elp",
        include_str!("../fixtures/college_appointment.elp"),
    ),
    ("ce1a.elp", include_str!("../fixtures/ce1a.elp")),
    ("ce1b.elp", include_str!("../fixtures/ce1b.elp")),
    ("ce2.elp", include_str!("../fixtures/ce2.elp")),
    ("ce3.elp", include_str!("../fixtures/ce3.elp")),
    ("ka.elp", include_str!("../fixtures/ka.elp")),
    ("dependence.elp", include_str!("../fixtures/dependence.elp")),
    ("lamps.elp", include_str!("../fixtures/lamps.elp")),
];

#[derive(Deserialize)]
struct RawCorpus {
    #[serde(default)]
    fixture: Vec<RawFixture>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFixture {
    name: String,
    file: String,
    note: String,
    #[serde(default)]
    world_views: BTreeMap<Semantics, Vec<Vec<Vec<String>>>>,
    #[serde(default)]
    property: Vec<RawProperty>,
    #[serde(default)]
    not_splitting_sets: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProperty {
    property: Property,
    semantics: Semantics,
    #[serde(rename = "U")]
    u: Option<Vec<String>>,
    placement: Option<Side>,
    constraint: Option<String>,
    verdict: Verdict,
    note: String,
}

/// An expected verdict for one property check.
#[derive(Clone, Debug)]
pub struct PropertyExpectation {
    pub property: Property,
    pub semantics: Semantics,
    pub u: Option<BTreeSet<Atom>>,
    pub placement: Side,
    pub constraint: Option<Rule>,
    pub verdict: Verdict,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub file: String,
    pub source: String,
    /// Parsed, grounded and normalized.
    pub program: Program,
    /// Where the expectations come from.
    pub note: String,
    pub world_views: BTreeMap<Semantics, BTreeSet<WorldView>>,
    pub properties: Vec<PropertyExpectation>,
    pub not_splitting_sets: Vec<BTreeSet<Atom>>,
}

fn atoms(names: &[String]) -> Result<BTreeSet<Atom>> {
    names.iter().map(|a| parse_atom(a)).collect()
}

fn views(raw: &[Vec<Vec<String>>]) -> Result<BTreeSet<WorldView>> {
    raw.iter()
        .map(|w| {
            let interps = w
                .iter()
                .map(|i| atoms(i).map(Interpretation::new))
                .collect::<Result<Vec<_>>>()?;
            WorldView::new(interps)
                .ok_or_else(|| Error::Fixture("a world view must be non-empty".into()))
        })
        .collect()
}

fn fixture(raw: RawFixture, source: String) -> Result<Fixture> {
    let context = |e: Error| Error::Fixture(format!("{}: {e}", raw.file));
    let program = load_program(&source).map_err(context)?;
    let world_views = raw
        .world_views
        .iter()
        .map(|(s, w)| Ok((*s, views(w)?)))
        .collect::<Result<_>>()
        .map_err(context)?;
    let properties = raw
        .property
        .into_iter()
        .map(|p| {
            let constraint = match &p.constraint {
                Some(text) => {
                    let parsed = parse_program(text)?;
                    match parsed.rules() {
                        [r] => Some(r.clone()),
                        _ => return Err(Error::Fixture(format!("`{text}` is not a single rule"))),
                    }
                }
                None => None,
            };
            Ok(PropertyExpectation {
                property: p.property,
                semantics: p.semantics,
                u: p.u.as_deref().map(atoms).transpose()?,
                placement: p.placement.unwrap_or(Side::Bottom),
                constraint,
                verdict: p.verdict,
                note: p.note,
            })
        })
        .collect::<Result<_>>()
        .map_err(context)?;
    let not_splitting_sets = raw
        .not_splitting_sets
        .iter()
        .map(|u| atoms(u))
        .collect::<Result<_>>()
        .map_err(context)?;
    Ok(Fixture {
        name: raw.name,
        file: raw.file,
        source,
        program,
        note: raw.note,
        world_views,
        properties,
        not_splitting_sets,
    })
}

fn parse_corpus(expectations: &str, read: impl Fn(&str) -> Result<String>) -> Result<Vec<Fixture>> {
    let raw: RawCorpus =
        toml::from_str(expectations).map_err(|e| Error::Fixture(format!("expectations: {e}")))?;
    raw.fixture
        .into_iter()
        .map(|f| {
            let source = read(&f.file)?;
            fixture(f, source)
        })
        .collect()
}

/// The corpus compiled into the crate.
pub fn builtin_corpus() -> Result<Vec<Fixture>> {
    parse_corpus(EXPECTATIONS, |file| {
        FILES
            .iter()
            .find(|(name, _)| *name == file)
            .map(|(_, text)| text.to_string())
            .ok_or_else(|| Error::Fixture(format!("no built-in file {file}")))
    })
}

/// A corpus directory: `expectations.toml` naming `.elp` files beside it.
/// Programs without an entry are loaded with no expectations.
pub fn load_corpus(dir: &Path) -> Result<Vec<Fixture>> {
    let io = |p: &Path, e: std::io::Error| Error::Fixture(format!("{}: {e}", p.display()));
    let exp_path = dir.join("expectations.toml");
    let expectations = if exp_path.exists() {
        fs::read_to_string(&exp_path).map_err(|e| io(&exp_path, e))?
    } else {
        String::new()
    };
    let mut corpus = parse_corpus(&expectations, |file| {
        let p = dir.join(file);
        fs::read_to_string(&p).map_err(|e| io(&p, e))
    })?;
    let mut extra: Vec<_> = fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "elp"))
        .collect();
    extra.sort();
    for path in extra {
        let file = path
            .file_name()
            .expect("file")
            .to_string_lossy()
            .into_owned();
        if corpus.iter().any(|f| f.file == file) {
            continue;
        }
        let source = fs::read_to_string(&path).map_err(|e| io(&path, e))?;
        let raw = RawFixture {
            name: path
                .file_stem()
                .expect("stem")
                .to_string_lossy()
                .into_owned(),
            file,
            note: "no expectations".into(),
            world_views: BTreeMap::new(),
            property: Vec::new(),
            not_splitting_sets: Vec::new(),
        };
        corpus.push(fixture(raw, source)?);
    }
    Ok(corpus)
}

fn show(views: &BTreeSet<WorldView>) -> String {
    let s: Vec<String> = views.iter().map(WorldView::to_string).collect();
    format!("{{{}}}", s.join(", "))
}

/// Differences between a fixture's expectations and what the solvers
/// compute. Empty when everything matches.
pub fn check_fixture(f: &Fixture, limits: &Limits) -> Result<Vec<String>> {
    let mut diffs = Vec::new();
    for (&s, expected) in &f.world_views {
        let got = solve(&f.program, s, limits)?;
        if got != *expected {
            diffs.push(format!(
                "{} under {s}: expected {} got {}",
                f.name,
                show(expected),
                show(&got)
            ));
        }
    }
    for p in &f.properties {
        let placement = match p.placement {
            Side::Bottom => Placement::Bottom,
            Side::Top => Placement::Top,
        };
        let report = match (p.property, &p.u, &p.constraint) {
            (Property::EpistemicSplitting, Some(u), _) => {
                check_epistemic_splitting(&f.program, u, p.semantics, placement, limits)?
            }
            (Property::SubjectiveConstraintMonotonicity, _, Some(r)) => {
                check_constraint_monotonicity(&f.program, r, p.semantics, limits)?
            }
            _ => {
                return Err(Error::Fixture(format!(
                    "{}: {:?} needs U (splitting) or a constraint (monotonicity)",
                    f.name, p.property
                )))
            }
        };
        if report.verdict != p.verdict {
            diffs.push(format!(
                "{}: {:?} under {} expected {:?} got {:?}\n{report}",
                f.name, p.property, p.semantics, p.verdict, report.verdict
            ));
        }
    }
    for u in &f.not_splitting_sets {
        if is_epistemic_splitting_set(&f.program, u) {
            diffs.push(format!(
                "{}: {u:?} should not be an epistemic splitting set",
                f.name
            ));
        }
    }
    Ok(diffs)
}
