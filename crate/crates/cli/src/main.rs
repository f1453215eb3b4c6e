use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use setcsp_core::membership::{search_ei_counterexample, DEFAULT_SEARCH_BUDGET};
use setcsp_core::oracle::{first_false_clause, pattern_to_block_model, DEFAULT_VAR_CAP};
use setcsp_core::parse::{
    decode_witness, encode_witness, parse_dimacs_3sat, parse_formula_bytes, parse_instance_bytes, render_instance,
};
use setcsp_core::reduce::DEFAULT_REDUCE_VAR_CAP;
use setcsp_core::{
    check_membership, gadget_from_3sat, reduce_relation, replay_unsat_trace, solve_language_instance, to_clausal,
    ClausalFormula, Error, MembershipConfig, MembershipVerdict, Oracle, OutReason, ReduceConfig, ReductionOutcome,
    SolveOutcome, TemplateMode, TraceEvent,
};

#[derive(Parser)]
#[command(name = "setcsp", version, about = "Set constraint satisfaction over the powerset Boolean algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance file.
    Solve {
        instance: PathBuf,
        /// Write the witness of a satisfiable instance here instead of stdout.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Use the definitions as templates without the membership check.
        #[arg(long)]
        raw_horn_horn: bool,
        #[arg(long)]
        stats: bool,
        /// Arity limit for the reduction pipeline.
        #[arg(long, default_value_t = DEFAULT_REDUCE_VAR_CAP)]
        reduce_cap: usize,
    },
    /// Classify every relation of a file as IN or OUT.
    CheckLanguage {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_REDUCE_VAR_CAP)]
        reduce_cap: usize,
    },
    /// Print the reduced template of every relation with its rewrite log.
    Reduce {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_REDUCE_VAR_CAP)]
        reduce_cap: usize,
    },
    /// Brute-force satisfiability or equivalence of formulas.
    Oracle {
        mode: OracleMode,
        formula: String,
        other: Option<String>,
        /// Variable cap (at most 6).
        #[arg(long, env = "SETCSP_ORACLE_CAP", default_value_t = DEFAULT_VAR_CAP)]
        cap: usize,
    },
    /// Translate a DIMACS 3-CNF file into an instance over U, I and Neq.
    Gadget {
        dimacs: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a witness file against an instance.
    Verify { instance: PathBuf, witness: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    Sat,
    Equiv,
}

/// Failures that end the command with a nonzero status.
enum Failure {
    Input(String),
    Refusal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_capability_refusal() {
            Failure::Refusal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve {
            instance,
            witness,
            raw_horn_horn,
            stats,
            reduce_cap,
        } => solve(&instance, witness.as_deref(), raw_horn_horn, stats, reduce_cap),
        Command::CheckLanguage { file, reduce_cap } => check_language(&file, reduce_cap),
        Command::Reduce { file, reduce_cap } => reduce(&file, reduce_cap),
        Command::Oracle {
            mode,
            formula,
            other,
            cap,
        } => oracle(mode, &formula, other.as_deref(), cap),
        Command::Gadget { dimacs, output } => gadget(&dimacs, output.as_deref()),
        Command::Verify { instance, witness } => verify(&instance, &witness),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Refusal(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<setcsp_core::CspInstance, Failure> {
    parse_instance_bytes(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn solve(path: &Path, witness: Option<&Path>, raw: bool, stats: bool, reduce_cap: usize) -> Outcome {
    let inst = load_instance(path)?;
    let mode = if raw {
        eprintln!(
            "warning: --raw-horn-horn skips the membership check; answers are only guaranteed \
             when every relation is preserved by ei"
        );
        TemplateMode::Raw
    } else {
        TemplateMode::Reduced(ReduceConfig { var_cap: reduce_cap })
    };
    let solution = solve_language_instance(&inst, mode)?;
    let s = solution.outcome.stats();
    let stats_line = format!(
        "stats: iterations={} inner_res_calls={} inner_clauses_removed={} literals_removed={}",
        s.iterations, s.inner_res_calls, s.inner_clauses_removed, s.literals_removed
    );
    match &solution.outcome {
        SolveOutcome::Sat { .. } => {
            let model = solution.witness.as_ref().expect("SAT carries a witness");
            let text = encode_witness(model);
            // Self-check the serialized form against the definitions.
            let definitions = inst.compile_definitions()?;
            let reread = decode_witness(&text)?;
            if first_false_clause(&definitions, &reread)?.is_some() {
                return Err(Failure::Input("internal error: witness failed self-verification".into()));
            }
            println!("SAT");
            println!("blocks: {}{}", model.blocks(), if solution.lifted { " (lifted)" } else { "" });
            match witness {
                Some(p) => {
                    write(p, &(text + "\n"))?;
                    println!("witness: {}", p.display());
                }
                None => println!("witness: {text}"),
            }
            if stats {
                println!("{stats_line}");
            }
            Ok(true)
        }
        SolveOutcome::Unsat { trace, .. } => {
            replay_unsat_trace(&solution.compiled, trace)?;
            println!("UNSAT");
            for event in trace {
                println!("  {}", describe(event, &solution.compiled));
            }
            if stats {
                println!("{stats_line}");
            }
            Ok(false)
        }
    }
}

fn describe(event: &TraceEvent, phi: &ClausalFormula) -> String {
    match event {
        TraceEvent::LiteralRemoved {
            pass,
            clause,
            literal,
            inner,
        } => format!(
            "pass {pass}: removed literal {literal} of clause {clause} (entailed inner clauses {inner:?})"
        ),
        TraceEvent::PsiRejected {
            pass,
            clause,
            inner,
            propagated,
        } => {
            let names: Vec<&str> = propagated.iter().map(|v| phi.vars()[v.index()].as_str()).collect();
            format!(
                "pass {pass}: positive units are contradictory at inner clause {inner} of clause {clause} \
                 (propagated {})",
                names.join(" ")
            )
        }
        TraceEvent::EmptyClause { pass, clause } => format!("pass {pass}: clause {clause} became empty"),
    }
}

fn check_language(path: &Path, reduce_cap: usize) -> Outcome {
    let inst = load_instance(path)?;
    let config = MembershipConfig {
        reduce: ReduceConfig { var_cap: reduce_cap },
        ..MembershipConfig::default()
    };
    let mut all_in = true;
    for def in inst.defs() {
        let verdict = check_membership(def, config)?;
        println!("{}: {verdict}", def.name);
        if let MembershipVerdict::Out(OutReason::NotOuterHorn { .. }) = verdict {
            all_in = false;
            let phi = def.to_clausal()?;
            // A concrete violation, when one is small enough to find.
            if let Ok((Some(c), _)) = search_ei_counterexample(&phi, 1, DEFAULT_SEARCH_BUDGET) {
                for line in c.report(&phi).lines() {
                    println!("  {line}");
                }
            }
        } else if !verdict.is_in() {
            all_in = false;
        }
    }
    Ok(all_in)
}

fn reduce(path: &Path, reduce_cap: usize) -> Outcome {
    let inst = load_instance(path)?;
    let config = ReduceConfig { var_cap: reduce_cap };
    let mut all = true;
    for def in inst.defs() {
        let outcome = reduce_relation(def, config)?;
        match &outcome {
            ReductionOutcome::HornHorn { template, .. } => {
                println!("{}: HORN_HORN {}", def.name, template.formula());
            }
            ReductionOutcome::NotOuterHorn { reduced, clause, .. } => {
                all = false;
                println!("{}: NOT_OUTER_HORN {reduced} (clause {clause})", def.name);
            }
        }
        for step in outcome.log() {
            println!("  {step}");
        }
    }
    Ok(all)
}

fn parse_clausal(text: &str) -> Result<ClausalFormula, Failure> {
    Ok(to_clausal(&parse_formula_bytes(text.as_bytes())?))
}

fn oracle(mode: OracleMode, formula: &str, other: Option<&str>, cap: usize) -> Outcome {
    let oracle = Oracle::with_cap(cap);
    let phi = parse_clausal(formula)?;
    match (mode, other) {
        (OracleMode::Sat, None) => match oracle.sat(&phi)? {
            Some(b) => {
                println!("SAT");
                println!("pattern: {:#x}", b.bits());
                println!("witness: {}", encode_witness(&pattern_to_block_model(&b, phi.vars())));
                Ok(true)
            }
            None => {
                println!("UNSAT");
                Ok(false)
            }
        },
        (OracleMode::Equiv, Some(g)) => {
            let psi = parse_clausal(g)?;
            let eq = oracle.equiv(&phi, &psi)?;
            println!("{}", if eq { "EQUIVALENT" } else { "NOT_EQUIVALENT" });
            Ok(eq)
        }
        (OracleMode::Sat, Some(_)) => Err(Failure::Input("`oracle sat` takes one formula".into())),
        (OracleMode::Equiv, None) => Err(Failure::Input("`oracle equiv` takes two formulas".into())),
    }
}

fn gadget(path: &Path, output: Option<&Path>) -> Outcome {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let cnf = parse_dimacs_3sat(text)?;
    let g = gadget_from_3sat(&cnf)?;
    let rendered = render_instance(&g.instance);
    match output {
        Some(p) => write(p, &rendered)?,
        None => print!("{rendered}"),
    }
    Ok(true)
}

fn verify(instance: &Path, witness: &Path) -> Outcome {
    let inst = load_instance(instance)?;
    let bytes = read(witness)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", witness.display())))?;
    let model = decode_witness(text)?;
    let definitions = inst.compile_definitions()?;
    match first_false_clause(&definitions, &model)? {
        None => {
            println!("VALID");
            Ok(true)
        }
        Some(k) => {
            let clause = ClausalFormula::new(definitions.vars().to_vec(), vec![definitions.clauses()[k].clone()]);
            println!("INVALID clause {k}: {clause}");
            Ok(false)
        }
    }
}
