use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::dd;
use crate::error::{Error, Result};
use crate::lattice::{
    self, hermite_basis, primitive_slice, rank_of_rows, saturation_index, LatticeVector, Space, SpanCoordinates,
};

use super::fan::Fan;

/// Default cap on the number of maximal cones created while resolving.
pub const DEFAULT_CONE_BUDGET: usize = 100_000;

/// A smooth refinement together with, for each of its maximal cones, the
/// index of the original maximal cone containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub fan: Arc<Fan>,
    pub refinement: Vec<usize>,
}

impl Resolution {
    /// Rays of the refinement that were not rays of the original fan.
    pub fn inserted_rays<'a>(&'a self, original: &Fan) -> &'a [LatticeVector] {
        &self.fan.rays()[original.num_rays()..]
    }
}

/// Negative-regular continued fraction `m/q = b₁ − 1/(b₂ − ⋯)` with every
/// `b_i ≥ 2`, for coprime `0 < q < m`.
pub fn hirzebruch_jung(m: i64, q: i64) -> Vec<i64> {
    let (mut a, mut b) = (m, q);
    let mut out = Vec::new();
    while b > 0 {
        // ceil(a/b)
        let c = (a + b - 1) / b;
        out.push(c);
        let r = c * b - a;
        a = b;
        b = r;
    }
    out
}

pub fn resolve_smooth(fan: &Fan) -> Result<Resolution> {
    resolve_smooth_with_budget(fan, DEFAULT_CONE_BUDGET)
}

/// Smooth refinement of `fan`, keeping the original rays at their indices
/// and appending new rays.
///
/// In rank 2 every singular cone is subdivided by its Hirzebruch–Jung rays.
/// In higher rank the fan is first triangulated without new rays by a
/// pulling triangulation, then cones of largest multiplicity are stellarly
/// subdivided at the lattice point of the fundamental parallelepiped that
/// minimizes the largest multiplicity created.
pub fn resolve_smooth_with_budget(fan: &Fan, budget: usize) -> Result<Resolution> {
    let n = fan.rank();
    let mut rays: Vec<Vec<i64>> = fan.rays().iter().map(|r| r.coords().to_vec()).collect();
    let mut cones: Vec<(Vec<usize>, usize)> = Vec::new();
    if n == 2 {
        for (ci, cone) in fan.cones().iter().enumerate() {
            for c in hirzebruch_jung_subdivision(&mut rays, cone.rays())? {
                cones.push((c, ci));
            }
        }
        if cones.len() > budget {
            return Err(Error::BudgetExceeded(budget));
        }
    } else {
        for (ci, cone) in fan.cones().iter().enumerate() {
            for c in pulling_triangulation(&rays, cone.rays(), n)? {
                cones.push((c, ci));
            }
        }
        stellar_loop(&mut rays, &mut cones, n, budget)?;
    }
    if rays.len() == fan.num_rays() && cones.len() == fan.cones().len() {
        let same = cones
            .iter()
            .zip(fan.cones())
            .all(|((c, _), d)| c.as_slice() == d.rays());
        if same {
            return Ok(Resolution {
                fan: Arc::new(fan.clone()),
                refinement: (0..cones.len()).collect(),
            });
        }
    }
    let refinement = cones.iter().map(|(_, o)| *o).collect();
    let new_fan = Fan::new_trusted(
        n,
        rays.into_iter().map(|r| LatticeVector::from_raw(Space::N, r)).collect(),
        cones.into_iter().map(|(c, _)| c).collect(),
    )?;
    Ok(Resolution {
        fan: Arc::new(new_fan),
        refinement,
    })
}

fn det2(u: &[i64], w: &[i64]) -> Result<i64> {
    lattice::sub(lattice::mul(u[0], w[1])?, lattice::mul(u[1], w[0])?)
}

/// Subdivides a cone of a rank-2 fan; returns its smooth pieces in order
/// from one boundary ray to the other.
fn hirzebruch_jung_subdivision(rays: &mut Vec<Vec<i64>>, cone: &[usize]) -> Result<Vec<Vec<usize>>> {
    if cone.len() < 2 {
        return Ok(vec![cone.to_vec()]);
    }
    let (mut a, b) = (cone[0], cone[1]);
    let mut d = det2(&rays[a], &rays[b])?;
    d = d.abs();
    let mut pieces = Vec::new();
    let w = rays[b].clone();
    while d > 1 {
        // r = (w + k·u)/d is integral for a unique k in [0, d), and det(u, r) = ±1
        let u = rays[a].clone();
        let k = (0..d)
            .find(|&k| {
                u.iter()
                    .zip(&w)
                    .all(|(&ui, &wi)| (wi as i128 + k as i128 * ui as i128) % d as i128 == 0)
            })
            .ok_or(Error::Overflow)?;
        let r: Vec<i64> = u
            .iter()
            .zip(&w)
            .map(|(&ui, &wi)| lattice::add(wi, lattice::mul(k, ui)?).map(|x| x / d))
            .collect::<Result<_>>()?;
        let idx = rays.len();
        rays.push(r);
        let mut piece = vec![a, idx];
        piece.sort_unstable();
        pieces.push(piece);
        a = idx;
        d = k;
    }
    let mut last = vec![a, b];
    last.sort_unstable();
    pieces.push(last);
    Ok(pieces)
}

/// Pulling triangulation of the cone spanned by `face` using the global ray
/// order; consistent on shared faces of neighbouring cones.
fn pulling_triangulation(rays: &[Vec<i64>], face: &[usize], n: usize) -> Result<Vec<Vec<usize>>> {
    let gens: Vec<Vec<i64>> = face.iter().map(|&i| rays[i].clone()).collect();
    if rank_of_rows(&gens, n)? == face.len() {
        return Ok(vec![face.to_vec()]);
    }
    let apex = face[0];
    let h = dd::cone_hrep(&gens, n)?;
    let mut out = Vec::new();
    for f in &h.facets {
        let mut sub = Vec::new();
        for &i in face {
            if lattice::dot(f, &rays[i])? == 0 {
                sub.push(i);
            }
        }
        if sub.contains(&apex) {
            continue;
        }
        for s in pulling_triangulation(rays, &sub, n)? {
            let mut c = s;
            c.push(apex);
            c.sort_unstable();
            out.push(c);
        }
    }
    Ok(out)
}

type Q = Ratio<i128>;

/// Score, primitive point, containing cone and barycentric coefficients.
type Candidate = (Q, Vec<i64>, Vec<usize>, Vec<Q>);

/// Inverse of a square integer matrix over `Q`.
fn rational_inverse(rows: &[Vec<i64>]) -> Result<Vec<Vec<Q>>> {
    let d = rows.len();
    let mut a: Vec<Vec<Q>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Q> = r.iter().map(|&x| Q::from_integer(x as i128)).collect();
            row.extend((0..d).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    let ovf = |x: Option<Q>| x.ok_or(Error::Overflow);
    for col in 0..d {
        let p = (col..d).find(|&r| !a[r][col].is_zero()).ok_or(Error::Overflow)?;
        a.swap(col, p);
        let piv = a[col][col];
        for x in a[col].iter_mut() {
            *x = ovf(x.checked_div(&piv))?;
        }
        for r in 0..d {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col];
            let pivot = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot) {
                let t = ovf(f.checked_mul(p))?;
                *x = ovf(x.checked_sub(&t))?;
            }
        }
    }
    Ok(a.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// Nonzero lattice points `Σ λ_i v_i`, `λ ∈ [0,1)^k`, of the half-open
/// parallelepiped of a simplicial cone, returned with their coefficients.
fn parallelepiped_points(gens: &[Vec<i64>], n: usize) -> Result<Vec<(Vec<i64>, Vec<Q>)>> {
    let span = SpanCoordinates::new(gens, n)?;
    let proj: Vec<Vec<i64>> = gens.iter().map(|g| span.project(g)).collect::<Result<_>>()?;
    let k = proj.len();
    let inv = rational_inverse(&proj)?;
    let h = hermite_basis(&proj, k)?;
    let diag: Vec<i64> = (0..k).map(|j| h[j][j]).collect();
    let mut out = Vec::new();
    let mut rep = vec![0i64; k];
    let ovf = |x: Option<Q>| x.ok_or(Error::Overflow);
    loop {
        if rep.iter().any(|&x| x != 0) {
            // λ = rep · inv, reduced to [0,1)
            let mut lambda = vec![Q::zero(); k];
            for (&x, row) in rep.iter().zip(&inv) {
                for (s, q) in lambda.iter_mut().zip(row) {
                    *s = ovf(s.checked_add(&ovf(q.checked_mul(&Q::from_integer(x as i128)))?))?;
                }
            }
            for s in lambda.iter_mut() {
                *s -= s.floor();
            }
            if lambda.iter().any(|l| !l.is_zero()) {
                let mut p = vec![Q::zero(); n];
                for (l, g) in lambda.iter().zip(gens) {
                    for (pc, &gc) in p.iter_mut().zip(g) {
                        *pc = ovf(pc.checked_add(&ovf(l.checked_mul(&Q::from_integer(gc as i128)))?))?;
                    }
                }
                let p = p
                    .iter()
                    .map(|x| {
                        debug_assert!(x.is_integer());
                        i64::try_from(x.to_integer()).map_err(|_| Error::Overflow)
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push((p, lambda));
            }
        }
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if rep[j] + 1 < diag[j] {
                rep[j] += 1;
                break;
            }
            rep[j] = 0;
        }
    }
}

fn multiplicity(rays: &[Vec<i64>], cone: &[usize], n: usize) -> Result<i64> {
    let gens: Vec<Vec<i64>> = cone.iter().map(|&i| rays[i].clone()).collect();
    saturation_index(&gens, n)
}

fn stellar_loop(rays: &mut Vec<Vec<i64>>, cones: &mut Vec<(Vec<usize>, usize)>, n: usize, budget: usize) -> Result<()> {
    let mut mults: Vec<i64> = cones
        .iter()
        .map(|(c, _)| multiplicity(rays, c, n))
        .collect::<Result<_>>()?;
    loop {
        if cones.len() > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let Some((target, &worst)) = mults
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        else {
            return Ok(());
        };
        if worst <= 1 {
            return Ok(());
        }
        let cone = cones[target].0.clone();
        let gens: Vec<Vec<i64>> = cone.iter().map(|&i| rays[i].clone()).collect();
        let mut best: Option<Candidate> = None;
        for (p, lambda) in parallelepiped_points(&gens, n)? {
            let g = lattice::content(&p);
            let prim = primitive_slice(&p)?;
            let lambda: Vec<Q> = lambda.iter().map(|l| *l / Q::from_integer(g as i128)).collect();
            let support: Vec<usize> = cone
                .iter()
                .zip(&lambda)
                .filter(|(_, l)| l.is_positive())
                .map(|(&i, _)| i)
                .collect();
            let max_lambda = lambda.iter().copied().max().unwrap_or_else(Q::zero);
            let around = cones
                .iter()
                .zip(&mults)
                .filter(|((c, _), _)| support.iter().all(|r| c.binary_search(r).is_ok()))
                .map(|(_, &m)| m)
                .max()
                .unwrap_or(worst);
            let score = max_lambda * Q::from_integer(around as i128);
            let better = match &best {
                None => true,
                Some((s, q, _, _)) => score < *s || (score == *s && prim < *q),
            };
            if better {
                best = Some((score, prim, support, lambda));
            }
        }
        let (_, p, support, _) = best.ok_or(Error::Overflow)?;
        let idx = rays.len();
        rays.push(p);
        let mut next_cones = Vec::with_capacity(cones.len() + support.len());
        let mut next_mults = Vec::with_capacity(cones.len() + support.len());
        for ((c, origin), m) in cones.drain(..).zip(mults.drain(..)) {
            if support.iter().all(|r| c.binary_search(r).is_ok()) {
                for r in &support {
                    let mut piece: Vec<usize> = c.iter().copied().filter(|x| x != r).collect();
                    piece.push(idx);
                    piece.sort_unstable();
                    let pm = multiplicity(rays, &piece, n)?;
                    next_cones.push((piece, origin));
                    next_mults.push(pm);
                }
            } else {
                next_cones.push((c, origin));
                next_mults.push(m);
            }
        }
        *cones = next_cones;
        mults = next_mults;
    }
}
