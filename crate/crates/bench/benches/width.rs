use criterion::{black_box, criterion_group, criterion_main, Criterion};
use torwidth_bench::{parabola_polygon, scattered_points, skew_simplex};
use torwidth_core::{lattice_width, lattice_width_bruteforce, normal_fan, resolve_smooth, LatticePolytope};

fn hull(c: &mut Criterion) {
    let pts2 = scattered_points(2, 400, 50, 7);
    let pts3 = scattered_points(3, 60, 12, 11);
    c.bench_function("hull/rank2_400pts", |b| {
        b.iter(|| LatticePolytope::hull(black_box(&pts2)).unwrap())
    });
    c.bench_function("hull/rank3_60pts", |b| {
        b.iter(|| LatticePolytope::hull(black_box(&pts3)).unwrap())
    });
}

fn width(c: &mut Criterion) {
    let poly = parabola_polygon(12);
    c.bench_function("width/candidates_parabola12", |b| {
        b.iter(|| lattice_width(black_box(&poly)).unwrap())
    });
    c.bench_function("width/bruteforce_parabola12_box8", |b| {
        b.iter(|| lattice_width_bruteforce(black_box(&poly), 8).unwrap())
    });
    let simplex = skew_simplex(3, 7);
    c.bench_function("width/candidates_simplex3", |b| {
        b.iter(|| lattice_width(black_box(&simplex)).unwrap())
    });
}

fn resolve(c: &mut Criterion) {
    let (fan2, _) = normal_fan(&parabola_polygon(12)).unwrap();
    let (fan3, _) = normal_fan(&skew_simplex(3, 7)).unwrap();
    c.bench_function("resolve/rank2_parabola12", |b| {
        b.iter(|| resolve_smooth(black_box(&fan2)).unwrap())
    });
    c.bench_function("resolve/rank3_simplex", |b| {
        b.iter(|| resolve_smooth(black_box(&fan3)).unwrap())
    });
}

criterion_group!(benches, hull, width, resolve);
criterion_main!(benches);
