//! Instance families used by the benchmarks and scaling tests.

use crate::instance::CspInstance;
use crate::parse::parse_instance;

/// A chain of `n` pairs `(a_i, b_i)` with `a_i ⊑ b_i`, a seed `b_0 ⊑ a_0`,
/// and links "`a_i = b_i` implies `b_{i+1} ⊑ a_{i+1}`". The solver learns
/// one equality per pass, so it needs `n` passes. With `unsat`, a final
/// disequality `a_{n-1} ≠ b_{n-1}` makes the instance unsatisfiable.
pub fn chain_instance(n: usize, unsat: bool) -> CspInstance {
    assert!(n > 0);
    let mut text = String::from(
        "rel Sub(x, y) := ~x | y == 1\n\
         rel Link(a, b, c, d) := a != b or ~c | d == 1\n\
         builtin Neq\n",
    );
    for i in 0..n {
        text.push_str(&format!("Sub(a{i}, b{i})\n"));
    }
    text.push_str("Sub(b0, a0)\n");
    for i in 0..n - 1 {
        let j = i + 1;
        text.push_str(&format!("Link(a{i}, b{i}, b{j}, a{j})\n"));
    }
    if unsat {
        let last = n - 1;
        text.push_str(&format!("Neq(a{last}, b{last})\n"));
    }
    parse_instance(&text).expect("generated instance parses")
}

/// A description-logic style TBox with `4k + 1` (or `4k + 2`) axioms:
/// `c_i ⊑ d_i`, `c_i ⊓ d_i ⊑ c_{i+1}`, `c_i ⊓ e_i = 0`, `e_i ≠ 0`, and
/// `c_0 ≠ 0`. The inconsistent variant adds `c_k ⊓ c_0 = 0`, which clashes
/// with `c_0 ⊑ c_k`.
pub fn dl_instance(k: usize, inconsistent: bool) -> CspInstance {
    let mut text = String::from(
        "rel Sub(x, y) := ~x | y == 1\n\
         rel Sub2(x, y, z) := ~x | ~y | z == 1\n\
         rel Disjoint(x, y) := x & y == 0\n\
         rel NonEmpty(x) := x != 0\n\
         NonEmpty(c0)\n",
    );
    for i in 0..k {
        let j = i + 1;
        text.push_str(&format!(
            "Sub(c{i}, d{i})\nSub2(c{i}, d{i}, c{j})\nDisjoint(c{i}, e{i})\nNonEmpty(e{i})\n"
        ));
    }
    if inconsistent {
        text.push_str(&format!("Disjoint(c{k}, c0)\n"));
    }
    parse_instance(&text).expect("generated instance parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{solve_language_instance, TemplateMode};

    #[test]
    fn chain_verdicts() {
        let sat = solve_language_instance(&chain_instance(20, false), TemplateMode::default()).unwrap();
        assert!(sat.outcome.is_sat());
        assert_eq!(sat.outcome.stats().iterations, 20);
        let unsat = solve_language_instance(&chain_instance(20, true), TemplateMode::default()).unwrap();
        assert!(!unsat.outcome.is_sat());
    }

    #[test]
    fn dl_verdicts() {
        assert!(solve_language_instance(&dl_instance(50, false), TemplateMode::default()).unwrap().outcome.is_sat());
        assert!(!solve_language_instance(&dl_instance(50, true), TemplateMode::default()).unwrap().outcome.is_sat());
    }
}
