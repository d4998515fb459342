//! Exact double description: extreme rays of a pointed polyhedral cone
//! `{x ∈ R^d : a_i · x ≥ 0}` with integer constraint rows.
//!
//! This is the engine behind facet enumeration of polytopes (extreme rays of
//! the homogenized polar cone), vertex enumeration of divisor polytopes, and
//! H-representations of fan cones.

use crate::error::{Error, Result};
use crate::lattice::{self, integer_kernel, primitive_slice, rank_of_rows};

/// Fixed-size bitset over constraint indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains_all(&self, sub: &Bits) -> bool {
        self.0.iter().zip(&sub.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<i64>,
    zeros: Bits,
}

fn combine(p: &[i64], vp: i64, q: &[i64], vq: i64) -> Result<Vec<i64>> {
    // vp > 0 > vq; vp·q − vq·p is a positive combination on the hyperplane.
    let mut out = Vec::with_capacity(p.len());
    for (&pi, &qi) in p.iter().zip(q) {
        let x = (vp as i128) * (qi as i128) - (vq as i128) * (pi as i128);
        out.push(x);
    }
    let g = out.iter().fold(0i128, |g, &x| num_integer::Integer::gcd(&g, &x));
    if g == 0 {
        return Err(Error::Overflow);
    }
    out.into_iter()
        .map(|x| i64::try_from(x / g).map_err(|_| Error::Overflow))
        .collect()
}

/// Extreme rays (primitive, sorted) of `{x : rows[i]·x ≥ 0}` in `Z^dim`.
///
/// The constraint matrix must have rank `dim` (the cone is pointed);
/// otherwise [`Error::Unbounded`] is returned since the cone contains a line.
pub(crate) fn extreme_rays(rows: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    if dim == 0 {
        return Ok(Vec::new());
    }
    // Greedy choice of `dim` independent rows for the initial simplicial cone.
    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    let mut chosen_rows: Vec<Vec<i64>> = Vec::with_capacity(dim);
    for (i, r) in rows.iter().enumerate() {
        if r.iter().all(|&x| x == 0) {
            continue;
        }
        chosen_rows.push(r.clone());
        if rank_of_rows(&chosen_rows, dim)? == chosen_rows.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        } else {
            chosen_rows.pop();
        }
    }
    if basis.len() < dim {
        return Err(Error::Unbounded);
    }

    let m = rows.len();
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for k in 0..dim {
        let others: Vec<Vec<i64>> = basis
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &i)| rows[i].clone())
            .collect();
        let ker = integer_kernel(&others, dim)?;
        debug_assert_eq!(ker.len(), 1);
        let mut v = ker.into_iter().next().ok_or(Error::Overflow)?;
        if lattice::dot(&rows[basis[k]], &v)? < 0 {
            for x in v.iter_mut() {
                *x = lattice::neg(*x)?;
            }
        }
        let mut zeros = Bits::new(m);
        for (j, &i) in basis.iter().enumerate() {
            if j != k {
                zeros.set(i);
            }
        }
        rays.push(Ray { v, zeros });
    }

    let mut processed = vec![false; m];
    for &i in &basis {
        processed[i] = true;
    }
    for (i, row) in rows.iter().enumerate() {
        if processed[i] {
            continue;
        }
        processed[i] = true;
        let vals: Vec<i64> = rays.iter().map(|r| lattice::dot(row, &r.v)).collect::<Result<_>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j] < 0).collect();
        if neg.is_empty() {
            for (j, r) in rays.iter_mut().enumerate() {
                if vals[j] == 0 {
                    r.zeros.set(i);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(j, r)| j == p || j == q || !r.zeros.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let v = combine(&rays[p].v, vals[p], &rays[q].v, vals[q])?;
                let mut zeros = common;
                zeros.set(i);
                next.push(Ray { v, zeros });
            }
        }
        for (j, mut r) in rays.into_iter().enumerate() {
            if vals[j] > 0 {
                next.push(r);
            } else if vals[j] == 0 {
                r.zeros.set(i);
                next.push(r);
            }
        }
        rays = next;
    }

    let mut out: Vec<Vec<i64>> = rays.into_iter().map(|r| primitive_slice(&r.v)).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// H-representation of the cone generated by `generators` in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct ConeHRep {
    /// Linear dimension of the cone.
    pub dim: usize,
    /// Primitive inward facet normals, lifted to `Z^n`.
    pub facets: Vec<Vec<i64>>,
    /// Hermite basis of the annihilator of the cone's span.
    pub equalities: Vec<Vec<i64>>,
}

impl ConeHRep {
    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        for e in &self.equalities {
            if lattice::dot(e, x)? != 0 {
                return Ok(false);
            }
        }
        for f in &self.facets {
            if lattice::dot(f, x)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All inequalities `w·x ≥ 0` describing the cone, equalities as pairs.
    pub fn inequalities(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = self.facets.clone();
        for e in &self.equalities {
            out.push(e.clone());
            out.push(e.iter().map(|&x| lattice::neg(x)).collect::<Result<_>>()?);
        }
        Ok(out)
    }
}

/// Facets of the cone spanned by `generators` (assumed pointed).
pub(crate) fn cone_hrep(generators: &[Vec<i64>], n: usize) -> Result<ConeHRep> {
    let span = lattice::SpanCoordinates::new(generators, n)?;
    let d = span.dim;
    let projected: Vec<Vec<i64>> = generators
        .iter()
        .filter(|g| g.iter().any(|&x| x != 0))
        .map(|g| span.project(g))
        .collect::<Result<_>>()?;
    let facets = match d {
        0 => Vec::new(),
        1 => {
            // A half-line; its only facet is the origin.
            vec![span.lift(&[projected[0][0].signum()], n)?]
        }
        _ => {
            let dual = extreme_rays(&projected, d)?;
            let mut f: Vec<Vec<i64>> = dual.iter().map(|w| span.lift(w, n)).collect::<Result<_>>()?;
            f.sort();
            f
        }
    };
    Ok(ConeHRep {
        dim: d,
        facets,
        equalities: span.orthogonal,
    })
}
