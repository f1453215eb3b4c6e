//! Acceptance criteria 1-8. Runs without the libtest harness so each
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any FAIL.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use setcsp_core::formula::{InnerClause, InnerLiteral, OuterClause, OuterLiteral, Term, Var};
use setcsp_core::membership::{finite_e, finite_i};
use setcsp_core::oracle::{brute_force_points, oracle_entails, oracle_sat};
use setcsp_core::parse::{parse_formula, ThreeSat};
use setcsp_core::workload::{chain_instance, dl_instance};
use setcsp_core::{
    check_formula_membership, entails_clause, eval_block_model, extract_boolean_model, gadget_from_3sat, inner_res,
    lift_boolean_model, outer_res, replay_unsat_trace, solve_language_instance, to_clausal, ClausalFormula,
    FiniteAssignment, MembershipConfig, SolveOutcome, TemplateMode,
};

type Check = Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("inner resolution agrees with the oracle", criterion_1),
        ("inner entailment agrees with the oracle", criterion_2),
        ("outer resolution agrees with the oracle", criterion_3),
        ("membership verdicts on the worked examples", criterion_4),
        ("finite e/i laws", criterion_5),
        ("hardness gadget equivalence", criterion_6),
        ("quadratic scaling", criterion_7),
        ("description logic smoke test", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail}; {secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Every inner clause over `n` variables (each variable absent, positive
/// or negative), including the empty clause.
fn all_inner_clauses(n: usize) -> Vec<InnerClause> {
    (0..3usize.pow(n as u32))
        .map(|mut code| {
            let mut lits = Vec::new();
            for v in 0..n {
                match code % 3 {
                    1 => lits.push(InnerLiteral::pos(Var::new(v))),
                    2 => lits.push(InnerLiteral::neg(Var::new(v))),
                    _ => {}
                }
                code /= 3;
            }
            InnerClause::new(lits)
        })
        .collect()
}

fn horn_inner_clauses(n: usize) -> Vec<InnerClause> {
    all_inner_clauses(n).into_iter().filter(InnerClause::is_horn).collect()
}

/// All sets of at most `max` distinct clauses from `pool`.
fn subsets<T: Clone>(pool: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<T>)> = vec![(0, Vec::new())];
    for _ in 0..max {
        let mut next = Vec::new();
        for (start, set) in &frontier {
            for (i, c) in pool.iter().enumerate().skip(*start) {
                let mut s = set.clone();
                s.push(c.clone());
                next.push((i + 1, s));
            }
        }
        out.extend(next.iter().map(|(_, s)| s.clone()));
        frontier = next;
    }
    out
}

fn as_formula(n: usize, clauses: &[InnerClause]) -> ClausalFormula {
    ClausalFormula::new(
        names(n),
        clauses
            .iter()
            .map(|c| OuterClause::unit(OuterLiteral::eq_one(Term::from_raw(vec![c.clone()]))))
            .collect(),
    )
}

fn criterion_1() -> Check {
    let sets = subsets(&horn_inner_clauses(3), 4);
    for set in &sets {
        let ours = inner_res(3, set).is_accept();
        let oracle = oracle_sat(&as_formula(3, set)).map_err(|e| e.to_string())?.is_some();
        if ours != oracle {
            return Err(format!("disagreement on {}", as_formula(3, set)));
        }
    }
    Ok(format!("{} clause sets", sets.len()))
}

fn criterion_2() -> Check {
    let sets = subsets(&horn_inner_clauses(3), 4);
    let queries = all_inner_clauses(3);
    let mut checked = 0u64;
    for set in &sets {
        let psi = as_formula(3, set);
        for q in &queries {
            let ours = entails_clause(3, set, q);
            let oracle = oracle_entails(&psi, &as_formula(3, std::slice::from_ref(q))).map_err(|e| e.to_string())?;
            if ours != oracle {
                return Err(format!("disagreement on {psi} entails {}", as_formula(3, std::slice::from_ref(q))));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} queries"))
}

fn literal_pools(n: usize) -> (Vec<OuterLiteral>, Vec<OuterLiteral>) {
    let horn: Vec<InnerClause> = horn_inner_clauses(n).into_iter().filter(|c| !c.is_empty()).collect();
    let positives = horn.iter().map(|c| OuterLiteral::eq_one(Term::new([c.clone()]))).collect();
    let mut negatives: Vec<OuterLiteral> = all_inner_clauses(n)
        .into_iter()
        .filter(|c| !c.is_empty())
        .map(|c| OuterLiteral::ne_one(Term::new([c])))
        .collect();
    // Equalities x_i = x_j as two-clause terms.
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (Var::new(i), Var::new(j));
            let term = Term::new([
                InnerClause::new([InnerLiteral::neg(a), InnerLiteral::pos(b)]),
                InnerClause::new([InnerLiteral::pos(a), InnerLiteral::neg(b)]),
            ]);
            negatives.push(OuterLiteral::ne_one(term));
        }
    }
    (positives, negatives)
}

fn check_outer(phi: &ClausalFormula) -> Result<bool, String> {
    let oracle = oracle_sat(phi).map_err(|e| e.to_string())?.is_some();
    match outer_res(phi).map_err(|e| format!("{phi}: {e}"))? {
        SolveOutcome::Sat { model, .. } => {
            if !oracle {
                return Err(format!("solver says SAT, oracle UNSAT: {phi}"));
            }
            if !eval_block_model(phi, &model).map_err(|e| e.to_string())? {
                return Err(format!("model fails verification: {phi}"));
            }
        }
        SolveOutcome::Unsat { trace, .. } => {
            if oracle {
                return Err(format!("solver says UNSAT, oracle SAT: {phi}"));
            }
            replay_unsat_trace(phi, &trace).map_err(|e| format!("{phi}: {e}"))?;
        }
    }
    Ok(oracle)
}

fn random_horn_horn(rng: &mut StdRng, n: usize, pos: &[OuterLiteral], neg: &[OuterLiteral]) -> ClausalFormula {
    let clauses = (0..2 + rng.gen_range(0..4))
        .map(|_| {
            let mut lits = Vec::new();
            if rng.gen_range(0..2) == 0 {
                lits.push(pos[rng.gen_range(0..pos.len())].clone());
            }
            for _ in 0..rng.gen_range(0..3) + usize::from(lits.is_empty()) {
                lits.push(neg[rng.gen_range(0..neg.len())].clone());
            }
            OuterClause::new(lits)
        })
        .collect();
    ClausalFormula::new(names(n), clauses)
}

fn criterion_3() -> Check {
    let (pos, neg) = literal_pools(3);
    // Clauses containing a negative literal: units, one positive plus one
    // negative, and two negatives.
    let mut mixed: Vec<OuterClause> = neg.iter().map(|l| OuterClause::unit(l.clone())).collect();
    for p in &pos {
        for q in &neg {
            mixed.push(OuterClause::new(vec![p.clone(), q.clone()]));
        }
    }
    for (i, p) in neg.iter().enumerate() {
        for q in &neg[i + 1..] {
            mixed.push(OuterClause::new(vec![p.clone(), q.clone()]));
        }
    }
    let units: Vec<Vec<OuterClause>> = subsets(&pos, 2)
        .into_iter()
        .map(|s| s.into_iter().map(OuterClause::unit).collect())
        .collect();
    let (mut total, mut sat) = (0u64, 0u64);
    for base in &units {
        for c in &mixed {
            let mut clauses = base.clone();
            clauses.push(c.clone());
            let phi = ClausalFormula::new(names(3), clauses);
            sat += u64::from(check_outer(&phi)?);
            total += 1;
        }
    }
    let structured = total;
    let mut rng = StdRng::seed_from_u64(0x5e7c5);
    for n in [3usize, 4] {
        let (pos, neg) = literal_pools(n);
        let count = 10_000;
        for _ in 0..count {
            let phi = random_horn_horn(&mut rng, n, &pos, &neg);
            sat += u64::from(check_outer(&phi)?);
            total += 1;
        }
    }
    Ok(format!(
        "{structured} structured + {} random formulas, {sat} satisfiable",
        total - structured
    ))
}

fn criterion_4() -> Check {
    let examples: [(&str, &str, bool); 8] = [
        ("disjointness", "~x | ~y == 1", true),
        ("disequality", "(y | ~x) & (x | ~y) != 1", true),
        ("implied equality", "x != y or u == v", true),
        ("two-set inclusion", "~x | ~y | z == 1", true),
        ("union is full", "(x | y) == 1", false),
        ("equality disjunction", "x == y or y == z", false),
        (
            "overlap with covering",
            "(x & y != x) and (x & y != y) and (v == 1 or u == 1 or x | y != 1)",
            true,
        ),
        (
            "complement pair",
            "(x | y != 1 or u | v == 1) and (~x | y != 1) and (x | ~y != 1)",
            true,
        ),
    ];
    let mut forms: Vec<(String, String, bool)> =
        examples.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), *c)).collect();
    let bases = ["", "~u | v == 1", "u & v == 0", "u != v"];
    for k in 0..=3 {
        for base in bases {
            let mut parts: Vec<String> = (1..=k).map(|i| format!("x{i} != y{i}")).collect();
            if !base.is_empty() {
                parts.push(base.to_string());
            }
            if parts.is_empty() {
                continue;
            }
            forms.push((format!("DJ k={k} base={base:?}"), parts.join(" or "), true));
        }
    }
    // Shared variables between the disjuncts.
    for text in ["x != y or ~x | y == 1", "x != y or y != z or x & z == 0", "x != y or y != x or ~y | x == 1"] {
        forms.push((format!("DJ shared {text:?}"), text.to_string(), true));
    }
    let config = MembershipConfig::default();
    for (name, text, expected) in &forms {
        let phi = to_clausal(&parse_formula(text).map_err(|e| e.to_string())?);
        let verdict = check_formula_membership(&phi, config).map_err(|e| format!("{name}: {e}"))?;
        if verdict.is_in() != *expected {
            return Err(format!("{name}: got {verdict}"));
        }
        if !expected {
            // The OUT certificate must come with a concrete violation too.
            let (cex, _) = setcsp_core::search_ei_counterexample(&phi, 1, 1_000_000).map_err(|e| e.to_string())?;
            if !cex.is_some_and(|c| c.replays(&phi)) {
                return Err(format!("{name}: no replayable ei violation"));
            }
        }
    }
    Ok(format!("{} relations", forms.len()))
}

fn criterion_5() -> Check {
    let mut cases = 0u64;
    for m in 1..=2usize {
        let full = FiniteAssignment::full_of(m);
        let top = FiniteAssignment::full_of(1 << m);
        let xs: Vec<u64> = (0..=full).collect();
        let g = |x: u64| finite_e(x, m);
        // Injective, strongly preserves meet, 0 and 1.
        if g(0) != 0 || g(full) != top {
            return Err(format!("|A|={m}: constants not preserved"));
        }
        for &x in &xs {
            for &y in &xs {
                cases += 1;
                if (g(x) == g(y)) != (x == y) {
                    return Err(format!("|A|={m}: not injective at {x},{y}"));
                }
                if g(x & y) != g(x) & g(y) {
                    return Err(format!("|A|={m}: meet not preserved at {x},{y}"));
                }
                // Strict inclusion for incomparable arguments.
                if x & y != x && x & y != y {
                    let (a, b) = (g(x) | g(y), g(x | y));
                    if a & b != a || a == b {
                        return Err(format!("|A|={m}: no strict inclusion at {x},{y}"));
                    }
                }
            }
        }
        // Forgets unions, k <= 2 and l <= 2, plus the k = 0 case.
        let tuples = |len: usize| -> Vec<Vec<u64>> {
            (0..xs.len().pow(len as u32))
                .map(|mut c| {
                    (0..len)
                        .map(|_| {
                            let v = xs[c % xs.len()];
                            c /= xs.len();
                            v
                        })
                        .collect()
                })
                .collect()
        };
        for k in 0..=2 {
            for l in 0..=2 {
                for xk in tuples(k) {
                    for yl in tuples(l) {
                        cases += 1;
                        let neg_img = yl.iter().fold(0, |acc, &y| acc | (!g(y) & top));
                        let neg = yl.iter().fold(0, |acc, &y| acc | (!y & full));
                        let lhs = xk.iter().fold(neg_img, |acc, &x| acc | g(x)) == top;
                        let rhs = if k == 0 { neg == full } else { xk.iter().any(|&x| (x | neg) == full) };
                        if lhs != rhs {
                            return Err(format!("|A|={m}: forgets-unions fails at x={xk:?} y={yl:?}"));
                        }
                    }
                }
            }
        }
        // finite_i is an isomorphism P(A) x P(A) -> P(A + A).
        let both = FiniteAssignment::full_of(2 * m);
        let mut seen = BTreeSet::new();
        for &u1 in &xs {
            for &v1 in &xs {
                let w1 = finite_i(u1, v1, m);
                seen.insert(w1);
                if (!w1 & both) != finite_i(!u1 & full, !v1 & full, m) {
                    return Err(format!("|A|={m}: complement not preserved"));
                }
                for &u2 in &xs {
                    for &v2 in &xs {
                        cases += 1;
                        let w2 = finite_i(u2, v2, m);
                        if finite_i(u1 & u2, v1 & v2, m) != w1 & w2 || finite_i(u1 | u2, v1 | v2, m) != w1 | w2 {
                            return Err(format!("|A|={m}: finite_i not a homomorphism"));
                        }
                    }
                }
            }
        }
        if seen.len() != 1 << (2 * m) || finite_i(0, 0, m) != 0 || finite_i(full, full, m) != both {
            return Err(format!("|A|={m}: finite_i not bijective"));
        }
    }
    Ok(format!("{cases} cases"))
}

/// All 3-literal clauses over `n` variables up to literal order.
fn clause_multisets(n: usize) -> Vec<[i32; 3]> {
    let lits: Vec<i32> = (1..=n as i32).flat_map(|v| [v, -v]).collect();
    let mut out = Vec::new();
    for a in 0..lits.len() {
        for b in a..lits.len() {
            for c in b..lits.len() {
                out.push([lits[a], lits[b], lits[c]]);
            }
        }
    }
    out
}

fn criterion_6() -> Check {
    let mut instances = 0u64;
    for n in 1..=3usize {
        let pool = clause_multisets(n);
        let mut cnfs: Vec<Vec<[i32; 3]>> = vec![Vec::new()];
        for i in 0..pool.len() {
            cnfs.push(vec![pool[i]]);
            for j in i..pool.len() {
                cnfs.push(vec![pool[i], pool[j]]);
            }
        }
        for clauses in cnfs {
            instances += 1;
            let cnf = ThreeSat::new(n, clauses);
            let g = gadget_from_3sat(&cnf).map_err(|e| e.to_string())?;
            let sat = cnf.solve_brute_force().is_some();
            let model = brute_force_points(&g.instance, 1, 1 << 20).map_err(|e| e.to_string())?;
            if sat != model.is_some() {
                return Err(format!("{cnf:?}: 3SAT {sat}, gadget {}", model.is_some()));
            }
            if let Some(m) = model {
                let alpha = extract_boolean_model(&g, &m).map_err(|e| e.to_string())?;
                if !cnf.is_satisfied_by(&alpha) {
                    return Err(format!("{cnf:?}: extracted assignment fails"));
                }
            }
            for code in 0..1u32 << n {
                let alpha: Vec<bool> = (0..n).map(|i| code >> i & 1 == 1).collect();
                if !cnf.is_satisfied_by(&alpha) {
                    continue;
                }
                let m = lift_boolean_model(&g, &cnf, &alpha).map_err(|e| e.to_string())?;
                if extract_boolean_model(&g, &m).map_err(|e| e.to_string())? != alpha {
                    return Err(format!("{cnf:?}: round trip fails for {alpha:?}"));
                }
            }
        }
    }
    Ok(format!("{instances} instances"))
}

fn time_chain(n: usize) -> Result<Duration, String> {
    let inst = chain_instance(n, false);
    let mut best = Duration::MAX;
    let runs = if n >= 8000 { 3 } else { 5 };
    for _ in 0..runs {
        let start = Instant::now();
        let sol = solve_language_instance(&inst, TemplateMode::default()).map_err(|e| e.to_string())?;
        best = best.min(start.elapsed());
        if !sol.outcome.is_sat() || sol.outcome.stats().iterations != n {
            return Err(format!("n={n}: unexpected outcome"));
        }
    }
    Ok(best)
}

fn criterion_7() -> Check {
    let sizes = [1000, 2000, 4000, 8000];
    let times: Vec<Duration> = sizes.iter().map(|&n| time_chain(n)).collect::<Result<_, _>>()?;
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].as_secs_f64() / w[0].as_secs_f64()).collect();
    let detail = format!(
        "times {:?} ms, ratios {:?}",
        times.iter().map(|t| t.as_millis()).collect::<Vec<_>>(),
        ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>()
    );
    if ratios.iter().all(|&r| r <= 5.0) && times[3] < Duration::from_secs(10) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_8() -> Check {
    let consistent = dl_instance(2500, false);
    let constraints = consistent.constraints().len();
    let sol = solve_language_instance(&consistent, TemplateMode::default()).map_err(|e| e.to_string())?;
    let witness = sol.witness.ok_or("consistent TBox reported UNSAT")?;
    let definitions = consistent.compile_definitions().map_err(|e| e.to_string())?;
    if !eval_block_model(&definitions, &witness).map_err(|e| e.to_string())? {
        return Err("witness fails verification".into());
    }
    let inconsistent = dl_instance(2500, true);
    let sol = solve_language_instance(&inconsistent, TemplateMode::default()).map_err(|e| e.to_string())?;
    let SolveOutcome::Unsat { trace, .. } = &sol.outcome else {
        return Err("inconsistent TBox reported SAT".into());
    };
    replay_unsat_trace(&sol.compiled, trace).map_err(|e| e.to_string())?;
    Ok(format!(
        "{constraints} constraints, witness with {} blocks, refutation of {} steps",
        witness.blocks(),
        trace.len()
    ))
}
