//! Deterministic workloads shared by the benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use torwidth_core::{LatticePolytope, LatticeVector};

/// The polygon with vertices `(k, k²)` for `k = 0..count`, which has many
/// edges and a normal fan with many singular cones.
pub fn parabola_polygon(count: i64) -> LatticePolytope {
    let pts: Vec<LatticeVector> = (0..count).map(|k| LatticeVector::m([k, k * k])).collect();
    LatticePolytope::hull(&pts).expect("nonempty point set")
}

/// Seeded pseudo-random integer points in `[0, side]^rank`.
pub fn scattered_points(rank: usize, count: usize, side: i64, seed: u64) -> Vec<LatticeVector> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| LatticeVector::m((0..rank).map(|_| rng.gen_range(0..=side)).collect::<Vec<_>>()))
        .collect()
}

/// A lattice simplex `conv{0, a·e_1, b·e_2, …}` stretched along one axis.
pub fn skew_simplex(rank: usize, stretch: i64) -> LatticePolytope {
    let mut pts = vec![LatticeVector::m(vec![0; rank])];
    for k in 0..rank {
        let mut v = vec![0; rank];
        v[k] = if k == 0 { stretch } else { 1 + k as i64 };
        pts.push(LatticeVector::m(v));
    }
    LatticePolytope::hull(&pts).expect("nonempty point set")
}
