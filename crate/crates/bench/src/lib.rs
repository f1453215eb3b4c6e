//! Inputs shared by the benchmarks.

use setcsp_core::parse::parse_instance;
use setcsp_core::CspInstance;

/// Disjunctions of up to three disequalities with an inclusion,
/// disjointness or disequality base literal.
pub fn disjunctive_language() -> CspInstance {
    let mut text = String::new();
    let bases = [("Sub", "~u | v == 1"), ("Dis", "u & v == 0"), ("Neq", "u != v")];
    for k in 0..=3 {
        for (name, base) in bases {
            let mut params: Vec<String> = (1..=k).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect();
            params.extend(["u".to_string(), "v".to_string()]);
            let mut parts: Vec<String> = (1..=k).map(|i| format!("x{i} != y{i}")).collect();
            parts.push(base.to_string());
            text.push_str(&format!("rel {name}{k}({}) := {}\n", params.join(", "), parts.join(" or ")));
        }
    }
    parse_instance(&text).expect("fixed text parses")
}

/// Formulas on four variables for the brute-force oracle.
pub const ORACLE_FORMULAS: [&str; 3] = [
    "~a | b == 1 and ~b | c == 1 and ~c | d == 1 and a != d",
    "(a | b) & (c | ~d) != 1 or a & b & c == 0",
    "a != b and b != c and c != d and d != a and a & c == 0",
];

#[cfg(test)]
mod tests {
    use super::*;
    use setcsp_core::{reduce_language, ReduceConfig};

    #[test]
    fn language_reduces() {
        let inst = disjunctive_language();
        assert_eq!(inst.defs().len(), 12);
        assert_eq!(reduce_language(inst.defs(), ReduceConfig::default()).unwrap().len(), 12);
    }
}
