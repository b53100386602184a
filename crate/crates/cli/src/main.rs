use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use elp_core::eht::{eht_trace, f15_world_views_with, PreorderDomain};
use elp_core::fixtures::{builtin_corpus, load_corpus};
use elp_core::founded::greatest_unfounded_set;
use elp_core::planning::{
    atoms_named, check_all_plans, check_plan, generate_define_test, generate_define_test_views,
};
use elp_core::properties::{run_matrix, Harness, Subject};
use elp_core::splitting::{
    enumerate_epistemic_splitting_sets, epistemic_split, solutions_of, top_simplification,
};
use elp_core::syntax::{eliminate_m, parse_atom, parse_atom_list};
use elp_core::{load_program, solve, Atom, Limits, Placement, Program, Semantics, WorldView};

#[derive(Parser)]
#[command(
    name = "elp",
    version,
    about = "World views of ground epistemic logic programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the world views of a program, one per line.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// For G91 views that are not founded, print the greatest unfounded set.
        #[arg(long)]
        explain_unfounded: bool,
        /// Print every EHT interpretation visited by the F15 search.
        #[arg(long)]
        trace_eht: bool,
        /// Interpretations the F15 preorder ranges over.
        #[arg(long, value_enum, default_value_t = Domain::Program)]
        f15_domain: Domain,
    },
    /// Solve a program bottom-up through an epistemic splitting set.
    Split {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// The splitting set, as `U=a,b` or `a,b`.
        #[arg(long, required_unless_present = "enumerate_splits")]
        split: Option<String>,
        /// List every epistemic splitting set instead.
        #[arg(long)]
        enumerate_splits: bool,
        /// Side for subjective constraints whose atoms are all in U.
        #[arg(long, value_enum, default_value_t = Side::Bottom)]
        placement: Side,
    },
    /// Check the property matrix over a corpus plus random programs.
    Properties {
        /// Corpus directory; the built-in corpus when omitted.
        dir: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        semantics: Option<Vec<Semantics>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random programs per cell.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, env = "ELP_MAX_ATOMS")]
        max_atoms: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Check plans for conformance: does the goal hold in every belief set?
    Conformant {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        goal: String,
        /// Action atoms, comma separated.
        #[arg(long, conflicts_with = "action_predicate")]
        actions: Option<String>,
        /// Take every atom of this predicate as an action.
        #[arg(long)]
        action_predicate: Option<String>,
        /// Generate plans with choice rules instead of checking each subset.
        #[arg(long)]
        gdt: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "g91")]
    semantics: Semantics,
    /// Rewrite `M l` as `not K not l` first.
    #[arg(long)]
    eliminate_m: bool,
    #[arg(long, env = "ELP_MAX_ATOMS")]
    max_atoms: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Program,
    Pair,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Bottom,
    Top,
}

fn limits(max_atoms: Option<usize>) -> Limits {
    let mut l = Limits::default();
    if let Some(n) = max_atoms {
        l.max_atoms = n;
    }
    l
}

impl Common {
    fn limits(&self) -> Limits {
        limits(self.max_atoms)
    }

    fn load(&self, file: &Path) -> anyhow::Result<Program> {
        let text =
            fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        let p = load_program(&text).with_context(|| format!("in {}", file.display()))?;
        Ok(if self.eliminate_m { eliminate_m(&p) } else { p })
    }
}

/// `[[a,c],[b]]`
fn compact(wv: &WorldView) -> String {
    let sets: Vec<String> = wv
        .to_strings()
        .iter()
        .map(|i| format!("[{}]", i.join(",")))
        .collect();
    format!("[{}]", sets.join(","))
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    );
}

fn parse_u(text: &str) -> anyhow::Result<BTreeSet<Atom>> {
    let list = text.strip_prefix("U=").unwrap_or(text);
    Ok(parse_atom_list(list)?.into_iter().collect())
}

fn show_u(u: &BTreeSet<Atom>) -> String {
    let names: Vec<String> = u.iter().map(Atom::to_string).collect();
    format!("{{{}}}", names.join(", "))
}

fn indent(p: &Program) -> String {
    if p.rules().is_empty() {
        return "  (empty)\n".into();
    }
    p.to_string().lines().map(|l| format!("  {l}\n")).collect()
}

fn cmd_solve(
    file: &Path,
    c: &Common,
    explain: bool,
    trace: bool,
    domain: Domain,
) -> anyhow::Result<ExitCode> {
    let p = c.load(file)?;
    let limits = c.limits();
    let views = match (c.semantics, domain) {
        (Semantics::F15, Domain::Pair) => f15_world_views_with(&p, &limits, PreorderDomain::Pair)?,
        (s, _) => solve(&p, s, &limits)?,
    };
    let trace = if trace && c.semantics == Semantics::F15 {
        eht_trace(&p, &limits)?
    } else {
        Vec::new()
    };
    let unfounded = if explain {
        let mut out = Vec::new();
        for w in solve(&p, Semantics::G91, &limits)? {
            if let Some(set) = greatest_unfounded_set(&p, &w, &limits)? {
                out.push((w, set));
            }
        }
        out
    } else {
        Vec::new()
    };

    if c.json {
        let trace: Vec<_> = trace
            .iter()
            .map(|e| {
                let shrunk: Vec<_> = e
                    .shrunk()
                    .map(|(t, h)| json!({"there": t, "here": h}))
                    .collect();
                json!({"world_view": e.world_view(), "shrunk": shrunk})
            })
            .collect();
        let unfounded: Vec<_> = unfounded
            .iter()
            .map(|(w, s)| json!({"world_view": w, "unfounded": s}))
            .collect();
        print_json(&json!({
            "semantics": c.semantics.to_string(),
            "world_views": views,
            "eht_trace": trace,
            "unfounded": unfounded,
        }));
    } else {
        for w in &views {
            println!("{}", compact(w));
        }
        for e in &trace {
            let shrunk: Vec<String> = e.shrunk().map(|(t, h)| format!("{t} -> {h}")).collect();
            if shrunk.is_empty() {
                println!("eht {} total", e.world_view());
            } else {
                println!("eht {} with {}", e.world_view(), shrunk.join(", "));
            }
        }
        for (w, set) in &unfounded {
            let pairs: Vec<String> = set.pairs.iter().map(|x| x.to_string()).collect();
            println!("unfounded {}: {}", w, pairs.join(" "));
        }
    }
    Ok(if views.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_split(
    file: &Path,
    c: &Common,
    u: Option<&str>,
    enumerate: bool,
    side: Side,
) -> anyhow::Result<ExitCode> {
    let p = c.load(file)?;
    let limits = c.limits();
    if enumerate {
        let sets = enumerate_epistemic_splitting_sets(&p, &limits)?;
        if c.json {
            print_json(&json!(sets));
        } else {
            for u in &sets {
                println!("{}", show_u(u));
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    let Some(u) = u else {
        bail!("--split is required");
    };
    let u = parse_u(u)?;
    let placement = match side {
        Side::Bottom => Placement::Bottom,
        Side::Top => Placement::Top,
    };
    let split = epistemic_split(&p, &u, placement)?;
    let solutions = solutions_of(&split, c.semantics, &limits)?;
    let combined: BTreeSet<WorldView> = solutions.iter().map(|s| s.combined()).collect();
    let direct = solve(&p, c.semantics, &limits)?;
    let agree = combined == direct;

    if c.json {
        let sols: Vec<_> = solutions
            .iter()
            .map(|s| {
                json!({
                    "wv_b": s.wv_b,
                    "E_U": top_simplification(&split, &s.wv_b).to_string(),
                    "wv_t": s.wv_t,
                    "combined": s.combined(),
                })
            })
            .collect();
        print_json(&json!({
            "U": u,
            "bottom": split.bottom.to_string(),
            "top": split.top.to_string(),
            "solutions": sols,
            "combined": combined,
            "direct": direct,
            "agree": agree,
        }));
    } else {
        println!("U = {}", show_u(&u));
        print!("B_U:\n{}", indent(&split.bottom));
        print!("T_U:\n{}", indent(&split.top));
        let bottoms: BTreeSet<WorldView> = solve(&split.bottom, c.semantics, &limits)?;
        for wv_b in &bottoms {
            println!("wv_b {wv_b}");
            print!("E_U:\n{}", indent(&top_simplification(&split, wv_b)));
            for s in solutions.iter().filter(|s| &s.wv_b == wv_b) {
                println!("  wv_t {}", s.wv_t);
            }
        }
        println!("combined:");
        for w in &combined {
            println!("{}", compact(w));
        }
        if !agree {
            println!("MISMATCH: solving directly under {} gives:", c.semantics);
            for w in &direct {
                println!("{}", compact(w));
            }
        }
    }
    Ok(if agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_properties(
    dir: Option<&Path>,
    semantics: Option<Vec<Semantics>>,
    seed: u64,
    count: usize,
    max_atoms: Option<usize>,
    json_out: bool,
) -> anyhow::Result<ExitCode> {
    let corpus = match dir {
        Some(d) => load_corpus(d)?,
        None => builtin_corpus()?,
    };
    let fixed: Vec<Subject> = corpus
        .iter()
        .map(|f| Subject::fixed(f.program.clone()))
        .collect();
    let h = Harness {
        semantics: semantics.unwrap_or_else(|| Semantics::ALL.to_vec()),
        seed,
        count,
        limits: limits(max_atoms),
        ..Harness::default()
    };
    let m = run_matrix(&fixed, &h)?;
    let ok = m.deviations().is_empty();
    if json_out {
        print_json(&json!({"matrix": m, "matches_expected": ok}));
    } else {
        println!("{m}");
        for w in m.witnesses() {
            println!("{w}\n");
        }
        for c in m.deviations() {
            println!(
                "unexpected: {:?} under {} is {:?}",
                c.property, c.semantics, c.mark
            );
        }
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_conformant(
    file: &Path,
    c: &Common,
    goal: &str,
    actions: Option<&str>,
    predicate: Option<&str>,
    gdt: bool,
) -> anyhow::Result<ExitCode> {
    if !matches!(c.semantics, Semantics::G91 | Semantics::C19) {
        eprintln!("warning: conformant planning is only meaningful under G91 and C19");
    }
    let domain = c.load(file)?;
    let limits = c.limits();
    let goal = parse_atom(goal)?;
    let actions: Vec<Atom> = match (actions, predicate) {
        (Some(a), _) => parse_atom_list(a)?,
        (None, Some(name)) => atoms_named(&domain, name),
        (None, None) => bail!("give --actions or --action-predicate"),
    };
    if gdt {
        let views = generate_define_test_views(&domain, &actions, &goal, c.semantics, &limits)?;
        if c.json {
            print_json(&json!({
                "program": generate_define_test(&domain, &actions, &goal).to_string(),
                "world_views": views,
            }));
        } else {
            for w in &views {
                println!("{}", compact(w));
            }
        }
        return Ok(if views.is_empty() {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        });
    }
    let verdicts = if actions.is_empty() {
        vec![check_plan(
            &domain,
            &BTreeSet::new(),
            &goal,
            c.semantics,
            &limits,
        )?]
    } else {
        check_all_plans(&domain, &actions, &goal, c.semantics, &limits)?
    };
    let any = verdicts.iter().any(|v| v.conformant);
    if c.json {
        print_json(&json!(verdicts));
    } else {
        for v in &verdicts {
            let verdict = if v.conformant {
                "conformant"
            } else {
                "not conformant"
            };
            println!("{{{}}}: {verdict}", v.actions.join(", "));
        }
    }
    Ok(if any {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve {
            file,
            common,
            explain_unfounded,
            trace_eht,
            f15_domain,
        } => cmd_solve(&file, &common, explain_unfounded, trace_eht, f15_domain),
        Command::Split {
            file,
            common,
            split,
            enumerate_splits,
            placement,
        } => cmd_split(
            &file,
            &common,
            split.as_deref(),
            enumerate_splits,
            placement,
        ),
        Command::Properties {
            dir,
            semantics,
            seed,
            count,
            max_atoms,
            json,
        } => cmd_properties(dir.as_deref(), semantics, seed, count, max_atoms, json),
        Command::Conformant {
            file,
            common,
            goal,
            actions,
            action_predicate,
            gdt,
        } => cmd_conformant(
            &file,
            &common,
            &goal,
            actions.as_deref(),
            action_predicate.as_deref(),
            gdt,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
