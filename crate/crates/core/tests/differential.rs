use elp_core::founded::{greatest_unfounded_set, is_founded};
use elp_core::generate::{random_program, rng, GenParams};
use elp_core::objective::stable_models;
use elp_core::oracle::{brute_force_world_views, stable_models_all_subsets, unfounded_set_exists};
use elp_core::reduct::world_views;
use elp_core::{Limits, Semantics};

#[test]
fn guess_path_matches_brute_force() {
    let limits = Limits::default();
    let mut r = rng(11);
    for n in 0..300 {
        let p = if n % 2 == 0 {
            GenParams::epistemic(3, 4)
        } else {
            GenParams::epistemic(3, 4).k_only()
        };
        let prog = random_program(&mut r, &p);
        for s in [
            Semantics::G91,
            Semantics::G11,
            Semantics::K15,
            Semantics::S17,
        ] {
            if prog.mentions_m() && s != Semantics::G91 {
                continue;
            }
            let fast = elp_core::solve(&prog, s, &limits).unwrap();
            let slow = brute_force_world_views(&prog, s, &limits).unwrap();
            assert_eq!(fast, slow, "{s} on\n{prog}");
        }
    }
}

#[test]
fn stable_models_match_subset_search() {
    let limits = Limits::default();
    let mut r = rng(12);
    for _ in 0..300 {
        let prog = random_program(&mut r, &GenParams::objective(5, 6));
        assert_eq!(
            stable_models(&prog, &limits).unwrap(),
            stable_models_all_subsets(&prog).unwrap(),
            "{prog}"
        );
    }
}

#[test]
fn fixpoint_matches_unfounded_search() {
    let limits = Limits::default();
    let mut r = rng(13);
    for _ in 0..300 {
        let prog = random_program(&mut r, &GenParams::epistemic(3, 4));
        for wv in world_views(&prog, Semantics::G91, &limits).unwrap() {
            assert_eq!(
                is_founded(&prog, &wv, &limits).unwrap(),
                !unfounded_set_exists(&prog, &wv).unwrap(),
                "{wv} of\n{prog}"
            );
            if let Some(s) = greatest_unfounded_set(&prog, &wv, &limits).unwrap() {
                assert!(s
                    .pairs
                    .iter()
                    .all(|p| wv.contains(&p.i) && !p.x.is_disjoint(p.i.atoms())));
            }
        }
    }
}

#[test]
fn objective_views_are_founded() {
    let limits = Limits::default();
    let mut r = rng(14);
    for _ in 0..200 {
        let prog = random_program(&mut r, &GenParams::objective(4, 5));
        for wv in world_views(&prog, Semantics::G91, &limits).unwrap() {
            assert!(is_founded(&prog, &wv, &limits).unwrap(), "{wv} of\n{prog}");
        }
    }
}
