//! Benchmark inputs shared by the criterion targets.

use elp_core::Program;

/// A chain of `n` self-referencing epistemic rules over fresh atoms.
pub fn chain(n: usize) -> Program {
    let mut text = String::from("p0 | q0.\n");
    for k in 1..n {
        text.push_str(&format!(
            "p{k} :- K p{}.\nq{k} :- not K p{}.\n",
            k - 1,
            k - 1
        ));
    }
    elp_core::load_program(&text).expect("generated program parses")
}
