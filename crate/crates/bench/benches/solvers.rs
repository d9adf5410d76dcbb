use agenda_control::gen::{random_agenda, random_election, random_instance, rng_from_seed, InstanceShape};
use agenda_control::reductions::{build_reduction, random_source, verify_reduction, ReductionKind, ReductionTag, SourceBounds};
use agenda_control::solvers::{brute_force_solve, dispatch_solve_with, SolveOptions};
use agenda_control::{winner, Agenda, ControlInstance, ProcedureSpec, Problem};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn instances(problem: Problem, spec: ProcedureSpec, m: usize, count: u64) -> Vec<ControlInstance> {
    (0..count)
        .map(|s| {
            let mut shape = InstanceShape::new(problem, spec, m, 5);
            shape.max_budget = 3;
            random_instance(&mut rng_from_seed(s), &shape).unwrap()
        })
        .collect()
}

fn winners(c: &mut Criterion) {
    let mut group = c.benchmark_group("winner");
    for m in [4, 8, 16] {
        let mut rng = rng_from_seed(m as u64);
        let e = random_election(&mut rng, m, 25);
        let agenda = Agenda::new(&random_agenda(&mut rng, &e)).unwrap();
        for (name, spec) in [("amendment", ProcedureSpec::AMENDMENT), ("full", ProcedureSpec::FULL), ("successive", ProcedureSpec::Successive)] {
            group.bench_with_input(BenchmarkId::new(name, m), &m, |b, _| b.iter(|| winner(black_box(&e), &agenda, spec).unwrap()));
        }
    }
    group.finish();
}

fn dedicated_vs_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    let cells = [
        ("ccdc-amendment", Problem::Ccdc, ProcedureSpec::AMENDMENT),
        ("ccac-amendment", Problem::Ccac, ProcedureSpec::AMENDMENT),
        ("dcac-full", Problem::Dcac, ProcedureSpec::FULL),
        ("ccav-successive", Problem::Ccav, ProcedureSpec::Successive),
        ("dcdv-successive", Problem::Dcdv, ProcedureSpec::Successive),
    ];
    for (name, problem, spec) in cells {
        let insts = instances(problem, spec, 6, 8);
        group.bench_function(BenchmarkId::new("dispatch", name), |b| {
            b.iter(|| insts.iter().filter(|i| dispatch_solve_with(i, SolveOptions::default()).unwrap().decision).count())
        });
        group.bench_function(BenchmarkId::new("brute-force", name), |b| {
            b.iter(|| insts.iter().filter(|i| brute_force_solve(i).unwrap().decision).count())
        });
    }
    group.finish();
}

fn reductions(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduction");
    group.sample_size(20);
    for tag in [ReductionTag::CcavAmd, ReductionTag::DcdvMh, ReductionTag::CcacMh, ReductionTag::CcdcSuccClique] {
        let kind = ReductionKind::with_h(tag, 1);
        let src = random_source(&mut rng_from_seed(1), kind, SourceBounds::default()).unwrap();
        group.bench_function(BenchmarkId::new("build", tag.as_str()), |b| b.iter(|| build_reduction(kind, black_box(&src)).unwrap()));
        group.bench_function(BenchmarkId::new("verify", tag.as_str()), |b| b.iter(|| verify_reduction(kind, black_box(&src)).unwrap().agree));
    }
    group.finish();
}

criterion_group!(benches, winners, dedicated_vs_oracle, reductions);
criterion_main!(benches);
