//! Exact lattice polytopes in `M_R`.
//!
//! A [`LatticePolytope`] keeps both representations: the lexicographically
//! sorted vertex list and an irredundant list of facet inequalities
//! `⟨m, normal⟩ ≥ −offset`. When the polytope is not full-dimensional the
//! affine span is recorded separately as equations, each of which counts as a
//! pair of opposite inequalities.

use crate::dd;
use crate::error::{Error, Result};
use crate::lattice::{self, rank_of_rows, reduce_modulo, LatticeVector, Space, SpanCoordinates};

/// Largest supported ambient rank.
pub const RANK_CAP: usize = 8;

/// One inequality `⟨m, normal⟩ ≥ −offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: i64,
}

impl Facet {
    /// `⟨m, normal⟩ + offset`; nonnegative exactly on the half-space.
    pub fn slack(&self, m: &[i64]) -> Result<i64> {
        lattice::add(lattice::dot(self.normal.coords(), m)?, self.offset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePolytope {
    rank: usize,
    affine_dim: usize,
    vertices: Vec<LatticeVector>,
    facets: Vec<Facet>,
    equalities: Vec<Facet>,
}

impl LatticePolytope {
    /// Convex hull of a nonempty list of points of `M`.
    ///
    /// Rank 2 polygons use a monotone chain; everything else goes through
    /// exact double description on the homogenized polar cone.
    pub fn hull(points: &[LatticeVector]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let n = first.rank();
        if n > RANK_CAP {
            return Err(Error::RankCapExceeded { rank: n, cap: RANK_CAP });
        }
        for p in points {
            if p.space() != Space::M {
                return Err(Error::SpaceMismatch {
                    expected: Space::M,
                    found: p.space(),
                });
            }
            if p.rank() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    found: p.rank(),
                });
            }
        }
        let mut pts: Vec<Vec<i64>> = points.iter().map(|p| p.coords().to_vec()).collect();
        pts.sort();
        pts.dedup();
        hull_of_coords(n, pts)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.rank
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    /// Proper facets. In rank 2 they are listed counterclockwise starting
    /// from the edge that leaves the lexicographically smallest vertex;
    /// otherwise they are sorted by normal.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Affine-span equations `⟨m, normal⟩ = −offset` (empty when full-dimensional).
    pub fn equalities(&self) -> &[Facet] {
        &self.equalities
    }

    /// Every inequality of the H-representation, equations as opposite pairs.
    pub fn inequalities(&self) -> Vec<Facet> {
        let mut out = self.facets.clone();
        for e in &self.equalities {
            out.push(e.clone());
            out.push(Facet {
                normal: e.normal.checked_neg().expect("primitive normals negate"),
                offset: -e.offset,
            });
        }
        out
    }

    fn check_point(&self, m: &LatticeVector) -> Result<()> {
        if m.space() != Space::M {
            return Err(Error::SpaceMismatch {
                expected: Space::M,
                found: m.space(),
            });
        }
        if m.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: m.rank(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, m: &LatticeVector) -> Result<bool> {
        self.check_point(m)?;
        self.contains_coords(m.coords())
    }

    pub(crate) fn contains_coords(&self, m: &[i64]) -> Result<bool> {
        for e in &self.equalities {
            if e.slack(m)? != 0 {
                return Ok(false);
            }
        }
        for f in &self.facets {
            if f.slack(m)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(min, max)` of `⟨m, v⟩` over the polytope.
    pub fn pairing_range(&self, v: &LatticeVector) -> Result<(i64, i64)> {
        if v.space() != Space::N {
            return Err(Error::SpaceMismatch {
                expected: Space::N,
                found: v.space(),
            });
        }
        if v.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: v.rank(),
            });
        }
        self.pairing_range_coords(v.coords())
    }

    pub(crate) fn pairing_range_coords(&self, v: &[i64]) -> Result<(i64, i64)> {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for m in &self.vertices {
            let x = lattice::dot(m.coords(), v)?;
            lo = lo.min(x);
            hi = hi.max(x);
        }
        Ok((lo, hi))
    }

    /// `max ⟨m,v⟩ − min ⟨m,v⟩` over the vertices.
    pub fn width_in_direction(&self, v: &LatticeVector) -> Result<i64> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let (lo, hi) = self.pairing_range(v)?;
        lattice::sub(hi, lo)
    }

    pub(crate) fn width_coords(&self, v: &[i64]) -> Result<i64> {
        let (lo, hi) = self.pairing_range_coords(v)?;
        lattice::sub(hi, lo)
    }

    /// Axis-aligned bounding box of the vertices.
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = self.vertices[0].coords().to_vec();
        let mut hi = lo.clone();
        for v in &self.vertices[1..] {
            for (k, &x) in v.coords().iter().enumerate() {
                lo[k] = lo[k].min(x);
                hi[k] = hi[k].max(x);
            }
        }
        (lo, hi)
    }

    /// All lattice points, sorted lexicographically, by a bounding-box scan.
    pub fn lattice_points(&self) -> Result<Vec<LatticeVector>> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains_coords(&cur)? {
                out.push(LatticeVector::from_raw(Space::M, cur.clone()));
            }
            // odometer, last coordinate fastest: yields lexicographic order
            let mut k = self.rank;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k];
            }
        }
    }

    /// The face on which every listed facet normal is tight.
    pub fn face_for_tight_normals(&self, normals: &[LatticeVector]) -> Result<PolytopeFace<'_>> {
        let ineqs = self.inequalities();
        let mut tight = Vec::with_capacity(normals.len());
        for w in normals {
            let idx = ineqs
                .iter()
                .position(|f| &f.normal == w)
                .ok_or_else(|| Error::NotAFacetNormal(w.coords().to_vec()))?;
            tight.push(idx);
        }
        tight.sort_unstable();
        tight.dedup();
        let mut vertices = Vec::new();
        for v in &self.vertices {
            let mut on = true;
            for &i in &tight {
                if ineqs[i].slack(v.coords())? != 0 {
                    on = false;
                    break;
                }
            }
            if on {
                vertices.push(v.clone());
            }
        }
        Ok(PolytopeFace {
            parent: self,
            tight,
            vertices,
        })
    }

    /// Image under an integral linear map given by its rows (target rank = rows).
    pub(crate) fn map_vertices(&self, rows: &[Vec<i64>]) -> Result<Self> {
        let pts: Vec<LatticeVector> = self
            .vertices
            .iter()
            .map(|v| {
                let c = rows
                    .iter()
                    .map(|r| lattice::dot(r, v.coords()))
                    .collect::<Result<Vec<_>>>()?;
                LatticeVector::new(Space::M, c)
            })
            .collect::<Result<_>>()?;
        Self::hull(&pts)
    }
}

/// A face of a polytope: the tight inequality indices (into
/// [`LatticePolytope::inequalities`]) and the vertices lying on all of them.
#[derive(Debug, Clone)]
pub struct PolytopeFace<'a> {
    pub parent: &'a LatticePolytope,
    pub tight: Vec<usize>,
    pub vertices: Vec<LatticeVector>,
}

impl PolytopeFace<'_> {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        let base = self.vertices.first()?;
        let diffs: Vec<Vec<i64>> = self.vertices[1..]
            .iter()
            .map(|v| v.checked_sub(base).map(LatticeVector::into_coords))
            .collect::<Result<_>>()
            .ok()?;
        rank_of_rows(&diffs, self.parent.rank).ok()
    }
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> Result<i64> {
    let ax = lattice::sub(a[0], o[0])?;
    let ay = lattice::sub(a[1], o[1])?;
    let bx = lattice::sub(b[0], o[0])?;
    let by = lattice::sub(b[1], o[1])?;
    lattice::sub(lattice::mul(ax, by)?, lattice::mul(ay, bx)?)
}

/// Counterclockwise hull of sorted, deduplicated 2D points spanning the
/// plane, starting at the lexicographically smallest one.
fn monotone_chain(pts: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p)? <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p)? <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower)
}

fn hull_of_coords(n: usize, pts: Vec<Vec<i64>>) -> Result<LatticePolytope> {
    let base = pts[0].clone();
    let diffs: Vec<Vec<i64>> = pts
        .iter()
        .map(|p| p.iter().zip(&base).map(|(&a, &b)| lattice::sub(a, b)).collect())
        .collect::<Result<_>>()?;
    let span = SpanCoordinates::new(&diffs, n)?;
    let d = span.dim;

    let mut equalities = Vec::with_capacity(n - d);
    for e in &span.orthogonal {
        let offset = lattice::neg(lattice::dot(e, &base)?)?;
        equalities.push(Facet {
            normal: LatticeVector::from_raw(Space::N, e.clone()),
            offset,
        });
    }

    let normals: Vec<Vec<i64>> = if d == 0 {
        Vec::new()
    } else if d == 2 && n == 2 {
        let ring = monotone_chain(&pts)?;
        let mut out = Vec::with_capacity(ring.len());
        for k in 0..ring.len() {
            let p = &ring[k];
            let q = &ring[(k + 1) % ring.len()];
            let dx = lattice::sub(q[0], p[0])?;
            let dy = lattice::sub(q[1], p[1])?;
            out.push(lattice::primitive_slice(&[lattice::neg(dy)?, dx])?);
        }
        out
    } else {
        let projected: Vec<Vec<i64>> = pts
            .iter()
            .map(|p| {
                let mut h = vec![1i64];
                h.extend(span.project(p)?);
                Ok(h)
            })
            .collect::<Result<_>>()?;
        let polar = dd::extreme_rays(&projected, d + 1)?;
        let mut out: Vec<Vec<i64>> = polar
            .iter()
            .filter(|w| w[1..].iter().any(|&x| x != 0))
            .map(|w| reduce_modulo(&span.lift(&w[1..], n)?, &span.orthogonal))
            .collect::<Result<_>>()?;
        out.sort();
        out
    };

    let mut facets = Vec::with_capacity(normals.len());
    for w in normals {
        let mut lo = i64::MAX;
        for p in &pts {
            lo = lo.min(lattice::dot(&w, p)?);
        }
        facets.push(Facet {
            normal: LatticeVector::from_raw(Space::N, w),
            offset: lattice::neg(lo)?,
        });
    }

    let mut vertices = Vec::new();
    for p in &pts {
        let tight: Vec<Vec<i64>> = facets
            .iter()
            .filter_map(|f| match f.slack(p) {
                Ok(0) => Some(Ok(f.normal.coords().to_vec())),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            })
            .collect::<Result<_>>()?;
        if rank_of_rows(&tight, n)? == d {
            vertices.push(LatticeVector::from_raw(Space::M, p.clone()));
        }
    }

    Ok(LatticePolytope {
        rank: n,
        affine_dim: d,
        vertices,
        facets,
        equalities,
    })
}

/// Builds a polytope from an H-representation `⟨m, normal_i⟩ ≥ −offset_i`.
///
/// Fails with [`Error::Unbounded`] when the normals do not positively span,
/// [`Error::EmptyPolytope`] when the system is infeasible, and
/// [`Error::NonLatticeVertex`] when some vertex is not integral.
pub(crate) fn from_inequalities(n: usize, ineqs: &[(Vec<i64>, i64)]) -> Result<LatticePolytope> {
    if n > RANK_CAP {
        return Err(Error::RankCapExceeded { rank: n, cap: RANK_CAP });
    }
    // homogenize: (t, m) with t·offset + ⟨m, normal⟩ ≥ 0 and t ≥ 0
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(ineqs.len() + 1);
    let mut t_row = vec![0i64; n + 1];
    t_row[0] = 1;
    rows.push(t_row);
    for (w, c) in ineqs {
        let mut r = Vec::with_capacity(n + 1);
        r.push(*c);
        r.extend_from_slice(w);
        rows.push(r);
    }
    if rank_of_rows(&rows, n + 1)? < n + 1 {
        return Err(Error::Unbounded);
    }
    let rays = dd::extreme_rays(&rows, n + 1)?;
    let mut verts = Vec::new();
    for r in rays {
        if r[0] == 0 {
            return Err(Error::Unbounded);
        }
        if r[1..].iter().any(|&x| x % r[0] != 0) {
            return Err(Error::NonLatticeVertex);
        }
        verts.push(LatticeVector::from_raw(
            Space::M,
            r[1..].iter().map(|&x| x / r[0]).collect(),
        ));
    }
    if verts.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    LatticePolytope::hull(&verts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        let v: Vec<LatticeVector> = pts.iter().map(|p| LatticeVector::m(p.to_vec())).collect();
        LatticePolytope::hull(&v).unwrap()
    }

    fn n(c: &[i64]) -> LatticeVector {
        LatticeVector::n(c.to_vec())
    }

    fn m(c: &[i64]) -> LatticeVector {
        LatticeVector::m(c.to_vec())
    }

    #[test]
    fn figure_triangle_hull() {
        let p = poly(&[&[6, 0], &[9, 6], &[1, 5]]);
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.facets().len(), 3);
        assert!(p.is_full_dimensional());
    }

    #[test]
    fn duplicates_and_interior_points_dropped() {
        let p = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[0, 0]]);
        assert_eq!(p.vertices(), &[m(&[0, 0]), m(&[0, 1]), m(&[1, 0]), m(&[1, 1])]);
        let p = poly(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1], &[1, 0], &[0, 1]]);
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn conic_triangle_facets() {
        let p = poly(&[&[0, 0], &[1, 0], &[1, 2]]);
        let got: Vec<(Vec<i64>, i64)> = p
            .facets()
            .iter()
            .map(|f| (f.normal.coords().to_vec(), f.offset))
            .collect();
        assert_eq!(got, vec![(vec![0, 1], 0), (vec![-1, 0], 1), (vec![2, -1], 0)]);
    }

    #[test]
    fn empty_and_capped_inputs() {
        assert_eq!(LatticePolytope::hull(&[]), Err(Error::EmptyInput));
        let big = LatticeVector::m(vec![0; 9]);
        assert!(matches!(
            LatticePolytope::hull(&[big]),
            Err(Error::RankCapExceeded { .. })
        ));
        let mixed = vec![m(&[0, 0]), m(&[1, 0, 0])];
        assert!(matches!(LatticePolytope::hull(&mixed), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn lattice_point_counts() {
        assert_eq!(poly(&[&[0, 0], &[1, 0], &[0, 1]]).lattice_points().unwrap().len(), 3);
        let seg = poly(&[&[0], &[3]]);
        assert_eq!(seg.lattice_points().unwrap(), vec![m(&[0]), m(&[1]), m(&[2]), m(&[3])]);
        assert_eq!(poly(&[&[0, 0], &[3, 0], &[0, 3]]).lattice_points().unwrap().len(), 10);
    }

    #[test]
    fn widths() {
        let t = poly(&[&[6, 0], &[9, 6], &[1, 5]]);
        assert_eq!(t.width_in_direction(&n(&[0, 1])).unwrap(), 6);
        let pt = poly(&[&[4, -2]]);
        assert_eq!(pt.width_in_direction(&n(&[3, 7])).unwrap(), 0);
        let d = poly(&[&[0, 0], &[3, 0], &[0, 3]]);
        assert_eq!(d.width_in_direction(&n(&[1, 0])).unwrap(), 3);
        assert_eq!(d.width_in_direction(&n(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn affine_dims() {
        assert_eq!(poly(&[&[1, 1]]).affine_dim(), 0);
        assert_eq!(poly(&[&[0, 0], &[2, 4]]).affine_dim(), 1);
        assert_eq!(poly(&[&[6, 0], &[9, 6], &[1, 5]]).affine_dim(), 2);
    }

    #[test]
    fn degenerate_segment_has_equation_pair() {
        let s = poly(&[&[0, 0], &[2, 4]]);
        assert_eq!(s.equalities().len(), 1);
        assert_eq!(s.equalities()[0].normal, n(&[2, -1]));
        assert_eq!(s.inequalities().len(), 4);
        assert!(s.contains(&m(&[1, 2])).unwrap());
        assert!(!s.contains(&m(&[1, 1])).unwrap());
        assert_eq!(s.width_in_direction(&n(&[2, -1])).unwrap(), 0);
        assert_eq!(s.lattice_points().unwrap().len(), 3);
    }

    #[test]
    fn faces() {
        let p = poly(&[&[0, 0], &[2, 0], &[2, 2], &[1, 3], &[0, 3]]);
        let f = p.face_for_tight_normals(&[n(&[-1, -1])]).unwrap();
        assert_eq!(f.vertices, vec![m(&[1, 3]), m(&[2, 2])]);
        assert_eq!(f.dim(), Some(1));
        let all = p.face_for_tight_normals(&[]).unwrap();
        assert_eq!(all.vertices, p.vertices());
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let v = sq.face_for_tight_normals(&[n(&[1, 0]), n(&[0, 1])]).unwrap();
        assert_eq!(v.vertices, vec![m(&[0, 0])]);
        assert!(matches!(
            sq.face_for_tight_normals(&[n(&[1, 1])]),
            Err(Error::NotAFacetNormal(_))
        ));
    }

    #[test]
    fn containment() {
        let t = poly(&[&[6, 0], &[9, 6], &[1, 5]]);
        assert!(t.contains(&m(&[5, 3])).unwrap());
        assert!(!t.contains(&m(&[0, 0])).unwrap());
        for v in t.vertices() {
            assert!(t.contains(v).unwrap());
        }
    }

    #[test]
    fn cube_in_rank_three() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(m(&[x, y, z]));
                }
            }
        }
        pts.push(m(&[0, 1, 1]));
        let c = LatticePolytope::hull(&pts).unwrap();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.facets().len(), 6);
        assert_eq!(c.lattice_points().unwrap().len(), 8);
    }

    #[test]
    fn square_in_three_space() {
        let s = poly(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert_eq!(s.affine_dim(), 2);
        assert_eq!(s.facets().len(), 4);
        assert_eq!(s.equalities().len(), 1);
        assert_eq!(s.vertices().len(), 4);
    }

    #[test]
    fn degenerate_facets_do_not_depend_on_the_input_points() {
        let tri = [m(&[0, 5, 2]), m(&[2, 0, 4]), m(&[2, 5, 2])];
        let a = LatticePolytope::hull(&tri).unwrap();
        let mut more = tri.to_vec();
        more.push(m(&[1, 5, 2]));
        let b = LatticePolytope::hull(&more).unwrap();
        assert_eq!(a, b);
        assert_eq!(LatticePolytope::hull(b.vertices()).unwrap(), b);
    }

    #[test]
    fn from_inequalities_roundtrip() {
        let t = poly(&[&[0, 0], &[3, 0], &[0, 3]]);
        let ineqs: Vec<(Vec<i64>, i64)> = t
            .facets()
            .iter()
            .map(|f| (f.normal.coords().to_vec(), f.offset))
            .collect();
        assert_eq!(from_inequalities(2, &ineqs).unwrap(), t);
        // x ≥ 0, y ≥ 0 only: unbounded
        assert_eq!(
            from_inequalities(2, &[(vec![1, 0], 0), (vec![0, 1], 0)]),
            Err(Error::Unbounded)
        );
        // x ≥ 1 and x ≤ 0
        assert_eq!(
            from_inequalities(1, &[(vec![1], -1), (vec![-1], 0)]),
            Err(Error::EmptyPolytope)
        );
        // 2x ≤ 1, x ≥ 0: vertex 1/2
        assert_eq!(
            from_inequalities(1, &[(vec![1], 0), (vec![-2], 1)]),
            Err(Error::NonLatticeVertex)
        );
    }
}
