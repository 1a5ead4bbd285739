use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ratliff_core::report::plan_ideal;
use ratliff_core::session::parse_polynomial;
use ratliff_core::{analyze, parse_session, Filtration, FiltrationOptions, HilbertData, HilbertOptions, PowerTower, Settings};

const EX_3_10: &str = "vars x y\nideal I = x^7, x^6*y, x^2*y^5, y^7\nideal J = x^7, x^6*y + y^7\noption reduction.I J\n";

fn gens(list: &[&str]) -> Vec<ratliff_core::Polynomial> {
    let names = vec!["x".to_string(), "y".to_string()];
    list.iter().map(|g| parse_polynomial(g, &names).unwrap()).collect()
}

fn engine(c: &mut Criterion) {
    let i = plan_ideal(&gens(&["x^7", "x^6*y", "x^2*y^5", "y^7"]), 2, 64).unwrap();

    c.bench_function("hilbert_coefficients", |b| {
        b.iter(|| {
            let mut tower = PowerTower::new(i.clone());
            black_box(HilbertData::of_powers(&mut tower, 2, &HilbertOptions::default()).unwrap())
        })
    });

    c.bench_function("closure_of_third_power", |b| {
        b.iter(|| {
            let mut f = Filtration::new(PowerTower::new(i.clone()), FiltrationOptions::default());
            black_box(f.closure(3).unwrap().closure.colength())
        })
    });

    let session = parse_session(EX_3_10).unwrap();
    let settings = Settings::from_session(&session);
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("analyze_supplied_reduction", |b| b.iter(|| black_box(analyze(&session, &settings))));
    let generated = parse_session("vars x y\nideal I = x^7, x^6*y, x^3*y^4, x^2*y^5, y^7\n").unwrap();
    group.bench_function("analyze_generated_reduction", |b| b.iter(|| black_box(analyze(&generated, &settings))));
    group.finish();
}

criterion_group!(benches, engine);
criterion_main!(benches);
