//! Lattice width, minimal fibering degree and the fibrations realizing it.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intersection::{degree_against_divisor, CurveClass};
use crate::lattice::{self, canonical_slice, kernel_basis, LatticeVector, Space};
use crate::polytope::LatticePolytope;
use crate::toric::{
    normal_fan, pullback_divisor, resolve_smooth_with_budget, Fan, LatticeMap, ToricDivisor, DEFAULT_CONE_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WidthMethod {
    /// Minimum over the rays of a smooth refinement of a fan.
    RayCandidates,
    /// Exhaustive search over a box of directions.
    BruteForce,
    /// The polytope is not full-dimensional; the witness is normal to its span.
    Degenerate,
}

impl WidthMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            WidthMethod::RayCandidates => "ray-candidates",
            WidthMethod::BruteForce => "brute-force",
            WidthMethod::Degenerate => "degenerate",
        }
    }
}

/// A width together with a canonical primitive direction attaining it.
///
/// `certified` is false only when the value is an upper bound: the cone
/// budget ran out before a smooth refinement was reached, or a brute-force
/// box was too small to contain every candidate ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthResult {
    pub width: i64,
    pub witness: LatticeVector,
    pub method: WidthMethod,
    pub certified: bool,
}

/// The equivariant fibration `t ↦ (χ^{u_1}(t), …, χ^{u_{n−1}}(t))` whose
/// general fiber closure is the one-parameter curve of `direction`,
/// post-composed with a degree-`multiplicity` map when the requested
/// direction was not primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationDescription {
    pub direction: LatticeVector,
    pub multiplicity: i64,
    pub characters: Vec<LatticeVector>,
    pub degree: i64,
}

/// Result of [`beat_the_curve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveBeater {
    pub ray: usize,
    pub direction: LatticeVector,
    pub degree: i64,
    pub bound: i64,
}

fn check_polytope_direction(p: &LatticePolytope, v: &[i64]) -> Result<i64> {
    p.width_coords(v)
}

/// Minimum of the width over `candidates`, ties broken by canonical witness.
fn min_over(p: &LatticePolytope, candidates: impl Iterator<Item = Vec<i64>>) -> Result<Option<(i64, Vec<i64>)>> {
    let mut best: Option<(i64, Vec<i64>)> = None;
    for v in candidates {
        let c = canonical_slice(&v)?;
        let w = check_polytope_direction(p, &c)?;
        let better = match &best {
            None => true,
            Some((bw, bc)) => (w, &c) < (*bw, bc),
        };
        if better {
            best = Some((w, c));
        }
    }
    Ok(best)
}

fn degenerate_width(p: &LatticePolytope) -> Result<WidthResult> {
    let (w, c) = min_over(p, p.equalities().iter().map(|e| e.normal.coords().to_vec()))?.ok_or(Error::EmptyInput)?;
    debug_assert_eq!(w, 0);
    Ok(WidthResult {
        width: w,
        witness: LatticeVector::from_raw(Space::N, c),
        method: WidthMethod::Degenerate,
        certified: true,
    })
}

/// Ray generators of a smooth refinement of `fan`, and whether the
/// refinement completed within `budget` (otherwise the rays of `fan`).
fn smooth_rays(fan: &Fan, budget: usize) -> Result<(Vec<Vec<i64>>, bool)> {
    match resolve_smooth_with_budget(fan, budget) {
        Ok(res) => Ok((res.fan.rays().iter().map(|r| r.coords().to_vec()).collect(), true)),
        Err(Error::BudgetExceeded(_)) => Ok((fan.rays().iter().map(|r| r.coords().to_vec()).collect(), false)),
        Err(e) => Err(e),
    }
}

/// Candidate directions for [`lattice_width`]: the rays of a smooth
/// refinement of the normal fan, and whether that refinement completed.
pub fn candidate_directions(p: &LatticePolytope, budget: usize) -> Result<(Vec<LatticeVector>, bool)> {
    let (fan, _) = normal_fan(p)?;
    let (rays, ok) = smooth_rays(&fan, budget)?;
    Ok((
        rays.into_iter().map(|r| LatticeVector::from_raw(Space::N, r)).collect(),
        ok,
    ))
}

pub fn lattice_width(p: &LatticePolytope) -> Result<WidthResult> {
    lattice_width_with_budget(p, DEFAULT_CONE_BUDGET)
}

/// `ℓw(P)`, minimized over the rays of a smooth refinement of the normal fan.
pub fn lattice_width_with_budget(p: &LatticePolytope, budget: usize) -> Result<WidthResult> {
    if !p.is_full_dimensional() {
        return degenerate_width(p);
    }
    let (fan, _) = normal_fan(p)?;
    let (rays, certified) = smooth_rays(&fan, budget)?;
    let (width, c) = min_over(p, rays.into_iter())?.ok_or(Error::EmptyInput)?;
    Ok(WidthResult {
        width,
        witness: LatticeVector::from_raw(Space::N, c),
        method: WidthMethod::RayCandidates,
        certified,
    })
}

/// Minimum width over all canonical primitive directions with max-norm at
/// most `bound`, searched in parallel with a deterministic reduction.
///
/// The value is flagged certified when it is zero or when `bound` covers
/// every candidate ray used by [`lattice_width`].
pub fn lattice_width_bruteforce(p: &LatticePolytope, bound: u64) -> Result<WidthResult> {
    let n = p.rank();
    let b = i64::try_from(bound.max(1)).map_err(|_| Error::Overflow)?;
    // slabs: leading nonzero position k with value t ∈ [1, b]
    let slabs: Vec<(usize, i64)> = (0..n).flat_map(|k| (1..=b).map(move |t| (k, t))).collect();
    let best = slabs.par_iter().map(|&(k, t)| slab_min(p, n, k, t, b)).try_reduce(
        || None,
        |a, c| {
            Ok(match (a, c) {
                (None, x) | (x, None) => x,
                (Some(x), Some(y)) => Some(if y < x { y } else { x }),
            })
        },
    )?;
    let (width, c) = best.ok_or(Error::EmptyInput)?;
    let certified = width == 0
        || (p.is_full_dimensional()
            && match candidate_directions(p, DEFAULT_CONE_BUDGET) {
                Ok((rays, true)) => rays.iter().all(|r| r.max_norm() <= bound),
                _ => false,
            });
    Ok(WidthResult {
        width,
        witness: LatticeVector::from_raw(Space::N, c),
        method: WidthMethod::BruteForce,
        certified,
    })
}

fn slab_min(p: &LatticePolytope, n: usize, k: usize, t: i64, b: i64) -> Result<Option<(i64, Vec<i64>)>> {
    let mut v = vec![0i64; n];
    v[k] = t;
    for x in v.iter_mut().skip(k + 1) {
        *x = -b;
    }
    let mut best: Option<(i64, Vec<i64>)> = None;
    loop {
        if lattice::content(&v) == 1 {
            let w = p.width_coords(&v)?;
            let better = match &best {
                None => true,
                Some((bw, bc)) => (w, &v) < (*bw, bc),
            };
            if better {
                best = Some((w, v.clone()));
            }
        }
        let mut j = n;
        loop {
            if j == k + 1 {
                return Ok(best);
            }
            j -= 1;
            if v[j] < b {
                v[j] += 1;
                break;
            }
            v[j] = -b;
        }
    }
}

fn require_pair(d: &ToricDivisor) -> Result<()> {
    if !d.fan().is_complete() {
        return Err(Error::IncompleteFan);
    }
    d.cartier_data()?;
    if !d.is_globally_generated()? {
        return Err(Error::NotGloballyGenerated);
    }
    Ok(())
}

/// Minimal fibering degree of `(X_Σ, O(D))`: the width of `P_D` minimized
/// over the rays of a smooth refinement of `Σ`, with the fibration for the
/// witness.
pub fn mfd(d: &ToricDivisor) -> Result<(WidthResult, FibrationDescription)> {
    mfd_with_budget(d, DEFAULT_CONE_BUDGET)
}

pub fn mfd_with_budget(d: &ToricDivisor, budget: usize) -> Result<(WidthResult, FibrationDescription)> {
    require_pair(d)?;
    let p = d.polytope()?;
    let (rays, certified) = smooth_rays(d.fan(), budget)?;
    let (width, c) = min_over(&p, rays.into_iter())?.ok_or(Error::EmptyInput)?;
    let witness = LatticeVector::from_raw(Space::N, c);
    let fib = fibration_in(&p, &witness)?;
    Ok((
        WidthResult {
            width,
            witness,
            method: WidthMethod::RayCandidates,
            certified,
        },
        fib,
    ))
}

fn fibration_in(p: &LatticePolytope, v: &LatticeVector) -> Result<FibrationDescription> {
    let direction = v.primitive()?;
    let multiplicity = lattice::content(v.coords());
    let characters = if direction.rank() == 1 {
        Vec::new()
    } else {
        kernel_basis(&direction)?
    };
    Ok(FibrationDescription {
        direction,
        multiplicity,
        characters,
        degree: p.width_in_direction(v)?,
    })
}

/// The fibration attached to `v` and its `O(D)`-degree `ℓw_v(P_D)`.
pub fn fibration_for_direction(d: &ToricDivisor, v: &LatticeVector) -> Result<FibrationDescription> {
    if v.space() != Space::N {
        return Err(Error::SpaceMismatch {
            expected: Space::N,
            found: v.space(),
        });
    }
    if v.rank() != d.fan().rank() {
        return Err(Error::RankMismatch {
            expected: d.fan().rank(),
            found: v.rank(),
        });
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    require_pair(d)?;
    fibration_in(&d.polytope()?, v)
}

fn check_beat(d: &ToricDivisor, c: &CurveClass) -> Result<LatticePolytope> {
    if !crate::toric::same_fan(d.fan(), c.fan()) {
        return Err(Error::FanMismatch);
    }
    if !d.fan().is_smooth()? {
        return Err(Error::NotSmooth);
    }
    require_pair(d)?;
    if let Some(i) = c.coeffs().iter().position(|&x| x < 0) {
        return Err(Error::NegativeCurveClass(i));
    }
    if c.coeffs().iter().all(|&x| x == 0) {
        return Err(Error::ZeroCurveClass);
    }
    d.polytope()
}

/// A ray `v_i` with `c_i > 0` minimizing `ℓw_{v_i}(P_D)`, ties broken by the
/// canonical ray and then by index. The returned degree never exceeds
/// `bound = [C] · D`.
pub fn beat_the_curve(d: &ToricDivisor, c: &CurveClass) -> Result<CurveBeater> {
    let p = check_beat(d, c)?;
    let bound = degree_against_divisor(c, d)?;
    let fan = d.fan();
    let mut best: Option<(i64, Vec<i64>, usize)> = None;
    for (i, &ci) in c.coeffs().iter().enumerate() {
        if ci <= 0 {
            continue;
        }
        let v = fan.ray(i).coords();
        let key = (p.width_coords(v)?, canonical_slice(v)?, i);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    let (degree, _, ray) = best.ok_or(Error::ZeroCurveClass)?;
    Ok(CurveBeater {
        ray,
        direction: fan.ray(ray).clone(),
        degree,
        bound,
    })
}

/// The same comparison at a caller-chosen ray, which must meet the class
/// positively.
pub fn beat_the_curve_at(d: &ToricDivisor, c: &CurveClass, ray: usize) -> Result<CurveBeater> {
    let p = check_beat(d, c)?;
    let len = c.coeffs().len();
    if ray >= len {
        return Err(Error::IndexOutOfRange { index: ray, len });
    }
    if c.coeffs()[ray] <= 0 {
        return Err(Error::RayNotPositive(ray));
    }
    let v = d.fan().ray(ray);
    Ok(CurveBeater {
        ray,
        direction: v.clone(),
        degree: p.width_in_direction(v)?,
        bound: degree_against_divisor(c, d)?,
    })
}

/// `mfd` of the pair pulled back to a smooth refinement of its fan.
pub fn mfd_on_resolution(d: &ToricDivisor) -> Result<(WidthResult, FibrationDescription)> {
    let res = crate::toric::resolve_smooth(d.fan())?;
    let pulled = pullback_divisor(&LatticeMap::identity(d.fan().rank()), d, Arc::clone(&res.fan))?;
    mfd(&pulled)
}
