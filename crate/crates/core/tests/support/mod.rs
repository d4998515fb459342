//! Generators, exact oracles and the pair-level property checks shared by
//! the property tests and the acceptance harness.

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use torwidth_core::*;

pub fn pts2(max: i64, lo: usize, hi: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0..=max, 0..=max), lo..hi)
}

pub fn polygon(p: &[(i64, i64)]) -> LatticePolytope {
    let v: Vec<LatticeVector> = p.iter().map(|&(x, y)| LatticeVector::m([x, y])).collect();
    LatticePolytope::hull(&v).unwrap()
}

pub fn full_polygon(p: &[(i64, i64)]) -> Option<LatticePolytope> {
    let poly = polygon(p);
    poly.is_full_dimensional().then_some(poly)
}

pub fn det2(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Refines a complete rank-2 fan by inserting `u + w` into the cones picked
/// by `picks` (taken modulo the current cone count).
pub fn blow_up(fan: &Fan, picks: &[usize]) -> Fan {
    let mut rays: Vec<Vec<i64>> = fan.rays().iter().map(|r| r.coords().to_vec()).collect();
    let mut cones: Vec<Vec<usize>> = fan.cones().iter().map(|c| c.rays().to_vec()).collect();
    for &k in picks {
        let c = cones.remove(k % cones.len());
        let s: Vec<i64> = rays[c[0]].iter().zip(&rays[c[1]]).map(|(a, b)| a + b).collect();
        let g = s.iter().fold(0i64, |g, &x| num_gcd(g, x));
        let s: Vec<i64> = s.iter().map(|x| x / g).collect();
        rays.push(s);
        let idx = rays.len() - 1;
        cones.push(vec![c[0], idx]);
        cones.push(vec![c[1], idx]);
    }
    Fan::new(fan.rank(), rays.into_iter().map(LatticeVector::n).collect(), cones).unwrap()
}

pub fn num_gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A complete smooth rank-2 fan carrying a globally generated divisor whose
/// polytope is `poly`.
pub fn smooth_pair(poly: &LatticePolytope, picks: &[usize]) -> ToricDivisor {
    let (fan, d) = normal_fan(poly).unwrap();
    let res = resolve_smooth(&fan).unwrap();
    let fine = Arc::new(blow_up(&res.fan, picks));
    pullback_divisor(&LatticeMap::identity(2), &d, fine).unwrap()
}

pub fn nonzero_dir() -> impl Strategy<Value = (i64, i64)> {
    ((-5i64..=5), (-5i64..=5)).prop_filter("nonzero", |&v| v != (0, 0))
}

/// Exact membership of `p` in the convex hull of `pts` (rank ≤ 3) by
/// Carathéodory: some affinely independent subset of at most `n + 1` points
/// contains it.
pub fn in_hull_oracle(p: &[i64], pts: &[Vec<i64>]) -> bool {
    let n = p.len();
    let m = pts.len();
    let mut subset = Vec::new();
    fn rec(start: usize, m: usize, n: usize, subset: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if !subset.is_empty() && f(subset) {
            return true;
        }
        if subset.len() == n + 1 {
            return false;
        }
        for i in start..m {
            subset.push(i);
            if rec(i + 1, m, n, subset, f) {
                return true;
            }
            subset.pop();
        }
        false
    }
    let mut check = |s: &[usize]| -> bool {
        let q0 = &pts[s[0]];
        let k = s.len() - 1;
        let dirs: Vec<Vec<i128>> = s[1..]
            .iter()
            .map(|&i| (0..n).map(|c| (pts[i][c] - q0[c]) as i128).collect())
            .collect();
        let target: Vec<i128> = (0..n).map(|c| (p[c] - q0[c]) as i128).collect();
        if k == 0 {
            return target.iter().all(|&x| x == 0);
        }
        // pick k coordinates with a nonzero minor and solve by Cramer's rule
        let combos = coordinate_subsets(n, k);
        for cols in combos {
            let mat: Vec<Vec<i128>> = (0..k).map(|r| cols.iter().map(|&c| dirs[r][c]).collect()).collect();
            let d = det(&mat);
            if d == 0 {
                continue;
            }
            let rhs: Vec<i128> = cols.iter().map(|&c| target[c]).collect();
            let mut lam = Vec::with_capacity(k);
            for r in 0..k {
                let mut mr = mat.clone();
                mr[r] = rhs.clone();
                lam.push(det(&mr));
            }
            // λ_r = lam[r] / d; verify every coordinate
            for c in 0..n {
                let s: i128 = (0..k).map(|r| lam[r] * dirs[r][c]).sum();
                if s != target[c] * d {
                    return false;
                }
            }
            let sign = d.signum();
            let total: i128 = lam.iter().map(|x| x * sign).sum();
            return lam.iter().all(|x| x * sign >= 0) && total <= d.abs();
        }
        false
    };
    rec(0, m, n, &mut subset, &mut check)
}

pub fn coordinate_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|&i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

pub fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

pub fn check_extreme_points(pts: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let v: Vec<LatticeVector> = pts.iter().map(|p| LatticeVector::m(p.clone())).collect();
    let p = LatticePolytope::hull(&v).unwrap();
    let mut uniq = pts.to_vec();
    uniq.sort();
    uniq.dedup();
    let mut expected: Vec<Vec<i64>> = Vec::new();
    for (i, q) in uniq.iter().enumerate() {
        let others: Vec<Vec<i64>> = uniq
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, x)| x.clone())
            .collect();
        if !in_hull_oracle(q, &others) {
            expected.push(q.clone());
        }
    }
    let got: Vec<Vec<i64>> = p.vertices().iter().map(|x| x.coords().to_vec()).collect();
    prop_assert_eq!(got, expected);
    Ok(())
}

/// Lattice points on the compact boundary of `conv(σ ∩ Z² \ 0)` strictly
/// between the rays `u` and `w`. The hull of the closed fundamental
/// parallelogram's nonzero points plus far points on both rays has the same
/// boundary near the origin.
pub fn boundary_oracle(u: &[i64], w: &[i64]) -> Vec<Vec<i64>> {
    let m = det2(u, w);
    let bound = u[0].abs() + u[1].abs() + w[0].abs() + w[1].abs();
    let mut pts = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let p = [x, y];
            // p = a·u + b·w with a = det(p,w)/m, b = det(u,p)/m in [0,1]
            let a = det2(&p, w);
            let b = det2(u, &p);
            if (x, y) != (0, 0) && (0..=m).contains(&a) && (0..=m).contains(&b) {
                pts.push(LatticeVector::m([x, y]));
            }
        }
    }
    let far = 1000;
    let near = pts.clone();
    pts.push(LatticeVector::m([u[0] * far, u[1] * far]));
    pts.push(LatticeVector::m([w[0] * far, w[1] * far]));
    let hull = LatticePolytope::hull(&pts).unwrap();
    let on_boundary = |q: &LatticeVector| {
        hull.facets()
            .iter()
            .any(|f| pairing(q, &f.normal).unwrap() + f.offset == 0)
    };
    near.iter()
        .filter(|q| on_boundary(q))
        .map(|q| q.coords().to_vec())
        .filter(|v| v.as_slice() != u && v.as_slice() != w)
        .collect()
}

/// Vertex lists of full-dimensional lattice polygons in `[0, max]²`.
pub fn full_pts2(max: i64) -> impl Strategy<Value = Vec<(i64, i64)>> {
    pts2(max, 3, 9).prop_filter("full-dimensional", |p| polygon(p).is_full_dimensional())
}

pub fn picks() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..3)
}

/// `[C_v] · D` equals the width of `P_D` in direction `v`, computed both
/// from the support function and from the curve class.
pub fn check_intersection_width(pts: &[(i64, i64)], picks: &[usize], v: (i64, i64)) -> Result<(), TestCaseError> {
    let p = polygon(pts);
    let d = smooth_pair(&p, picks);
    prop_assert!(d.fan().is_smooth().unwrap());
    prop_assert!(d.is_globally_generated().unwrap());
    let v = LatticeVector::n([v.0, v.1]);
    let width = p.width_in_direction(&v).unwrap();
    prop_assert_eq!(one_param_intersection(&d, &v).unwrap(), width);
    let c = curve_class_of_direction(d.fan(), &v).unwrap();
    prop_assert!(validate_curve_class(d.fan(), c.coeffs()).unwrap().is_valid());
    prop_assert_eq!(degree_against_divisor(&c, &d).unwrap(), width);
    Ok(())
}

/// The candidate-ray minimum equals the brute-force minimum over the box
/// of half-side the largest candidate norm.
pub fn check_candidates_match_bruteforce(pts: &[(i64, i64)]) -> Result<(), TestCaseError> {
    let p = polygon(pts);
    let w = lattice_width(&p).unwrap();
    prop_assert!(w.certified);
    prop_assert_eq!(p.width_in_direction(&w.witness).unwrap(), w.width);
    let (cands, ok) = candidate_directions(&p, DEFAULT_CONE_BUDGET).unwrap();
    prop_assert!(ok);
    let bound = cands.iter().map(|c| c.max_norm()).max().unwrap();
    let b = lattice_width_bruteforce(&p, bound).unwrap();
    prop_assert!(b.certified);
    prop_assert_eq!(b.width, w.width);
    prop_assert_eq!(p.width_in_direction(&b.witness).unwrap(), b.width);
    Ok(())
}

pub fn check_rays_meet_curves_once(pts: &[(i64, i64)], picks: &[usize]) -> Result<(), TestCaseError> {
    let d = smooth_pair(&polygon(pts), picks);
    for i in 0..d.fan().num_rays() {
        let di = ToricDivisor::prime(d.fan().clone(), i).unwrap();
        prop_assert_eq!(one_param_intersection(&di, d.fan().ray(i)).unwrap(), 1);
    }
    Ok(())
}

pub fn check_principal(pts: &[(i64, i64)], m: (i64, i64), v: (i64, i64)) -> Result<(), TestCaseError> {
    let (fan, _) = normal_fan(&polygon(pts)).unwrap();
    let res = resolve_smooth(&fan).unwrap();
    let d = ToricDivisor::principal(res.fan.clone(), &LatticeVector::m([m.0, m.1])).unwrap();
    prop_assert_eq!(one_param_intersection(&d, &LatticeVector::n([v.0, v.1])).unwrap(), 0);
    Ok(())
}

pub fn check_support_round_trip(pts: &[(i64, i64)], picks: &[usize]) -> Result<(), TestCaseError> {
    let p = polygon(pts);
    let d = smooth_pair(&p, picks);
    let poly = d.polytope().unwrap();
    prop_assert_eq!(&poly, &p);
    let from_poly = SupportFunction::of_polytope(&poly, d.fan().clone()).unwrap();
    let from_div = d.support_function().unwrap();
    prop_assert_eq!(&from_poly, &from_div);
    prop_assert_eq!(from_poly.to_divisor().unwrap(), d);
    Ok(())
}

/// For an injective `a: Z² → Z²`, every vertex `u` of the pulled-back
/// polytope has an exact preimage `m ∈ P` with `aᵀ m = u`.
pub fn check_pullback_surjective(pts: &[(i64, i64)], a: &[i64]) -> Result<(), TestCaseError> {
    let p = polygon(pts);
    let map = LatticeMap::new(2, 2, LatticeMatrix::new(2, 2, a.to_vec()).unwrap()).unwrap();
    prop_assume!(map.is_injective().unwrap());
    let target = smooth_pair(&p, &[]);
    let source = resolve_smooth(&map.induced_fan(target.fan()).unwrap()).unwrap().fan;
    prop_assert!(source.is_smooth().unwrap() && source.is_complete());
    let pulled = pullback_divisor(&map, &target, source).unwrap();
    let ps = pulled.polytope().unwrap();
    prop_assert_eq!(&polytope_pullback_map(&map, &p).unwrap(), &ps);
    let (a11, a12, a21, a22) = (a[0] as i128, a[1] as i128, a[2] as i128, a[3] as i128);
    let det = a11 * a22 - a12 * a21;
    for u in ps.vertices() {
        let (u0, u1) = (u.coords()[0] as i128, u.coords()[1] as i128);
        // m = adj(aᵀ) u / det
        let m0 = a22 * u0 - a21 * u1;
        let m1 = -a12 * u0 + a11 * u1;
        let inside = p.inequalities().iter().all(|f| {
            let w = f.normal.coords();
            let lhs = (w[0] as i128 * m0 + w[1] as i128 * m1) * det.signum();
            lhs + f.offset as i128 * det.abs() >= 0
        });
        prop_assert!(inside, "vertex {:?} has no preimage", u.coords());
    }
    Ok(())
}

/// Nonnegative combinations of direction classes that pass the
/// nonnegativity screen.
pub fn check_beat_the_curve(pts: &[(i64, i64)], dirs: &[((i64, i64), i64)]) -> Result<(), TestCaseError> {
    let d = smooth_pair(&polygon(pts), &[]);
    let mut class = CurveClass::zero(d.fan().clone());
    for &((x, y), k) in dirs {
        let c = curve_class_of_direction(d.fan(), &LatticeVector::n([x, y])).unwrap();
        if c.is_nonnegative() {
            class = class.checked_add(&c.checked_scale(k).unwrap()).unwrap();
        }
    }
    prop_assume!(class.coeffs().iter().any(|&x| x != 0));
    let best = beat_the_curve(&d, &class).unwrap();
    prop_assert!(best.degree <= best.bound);
    prop_assert_eq!(best.bound, degree_against_divisor(&class, &d).unwrap());
    for (i, &ci) in class.coeffs().iter().enumerate() {
        if ci > 0 {
            let alt = beat_the_curve_at(&d, &class, i).unwrap();
            prop_assert!(best.degree <= alt.degree && alt.degree <= alt.bound);
        }
    }
    Ok(())
}

/// On the (usually singular) normal fan of a random polygon, the minimal
/// fibering degree agrees with the one computed on the resolution and with
/// the lattice width.
pub fn check_resolution_invariance(pts: &[(i64, i64)]) -> Result<(), TestCaseError> {
    let p = polygon(pts);
    let (_, d) = normal_fan(&p).unwrap();
    let (w, fib) = mfd(&d).unwrap();
    let (wr, _) = mfd_on_resolution(&d).unwrap();
    prop_assert_eq!(w.width, wr.width);
    prop_assert_eq!(w.width, lattice_width(&p).unwrap().width);
    prop_assert_eq!(fib.degree, w.width);
    for u in &fib.characters {
        prop_assert_eq!(pairing(u, &fib.direction).unwrap(), 0);
    }
    Ok(())
}
