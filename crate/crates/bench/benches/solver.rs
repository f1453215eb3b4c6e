use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use setcsp_bench::{disjunctive_language, ORACLE_FORMULAS};
use setcsp_core::parse::parse_formula;
use setcsp_core::workload::{chain_instance, dl_instance};
use setcsp_core::{
    build_templates, oracle::oracle_sat, reduce_language, solve_instance, solve_language_instance, to_clausal,
    ReduceConfig, TemplateMode,
};

fn chain(c: &mut Criterion) {
    let mut group = c.benchmark_group("chain");
    group.sample_size(10);
    for n in [250, 500, 1000, 2000] {
        let inst = chain_instance(n, false);
        let templates = build_templates(&inst, TemplateMode::default()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| solve_instance(inst, &templates).unwrap())
        });
    }
    group.finish();
}

fn description_logic(c: &mut Criterion) {
    let mut group = c.benchmark_group("dl");
    group.sample_size(10);
    for inconsistent in [false, true] {
        let inst = dl_instance(2500, inconsistent);
        let label = if inconsistent { "inconsistent" } else { "consistent" };
        group.bench_function(label, |b| b.iter(|| solve_language_instance(&inst, TemplateMode::default()).unwrap()));
    }
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let inst = disjunctive_language();
    c.bench_function("reduce_disjunctive_language", |b| {
        b.iter(|| reduce_language(inst.defs(), ReduceConfig::default()).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let formulas: Vec<_> = ORACLE_FORMULAS.iter().map(|t| to_clausal(&parse_formula(t).unwrap())).collect();
    c.bench_function("oracle_sat_4_vars", |b| {
        b.iter(|| formulas.iter().map(|f| oracle_sat(f).unwrap().is_some()).count())
    });
}

criterion_group!(benches, chain, description_logic, reduction, oracle);
criterion_main!(benches);
