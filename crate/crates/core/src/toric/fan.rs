use std::collections::{BTreeMap, BTreeSet};

use crate::dd::{self, ConeHRep};
use crate::error::{Error, Result};
use crate::lattice::{self, rank_of_rows, saturation_index, LatticeVector, Space};
use crate::polytope::RANK_CAP;

/// A cone of a fan, given by sorted indices into the fan's ray list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    rays: Vec<usize>,
}

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Self { rays }
    }

    /// The zero cone `{0}`.
    pub fn zero() -> Self {
        Self { rays: Vec::new() }
    }

    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn contains_ray(&self, i: usize) -> bool {
        self.rays.binary_search(&i).is_ok()
    }
}

/// A fan in `N_R`: primitive ray generators plus maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<Cone>,
    hreps: Vec<ConeHRep>,
    complete: bool,
}

impl Fan {
    /// Validates and builds a fan.
    ///
    /// Checks that rays are primitive and distinct, every ray is used, every
    /// cone is strongly convex with exactly the listed rays as extreme rays,
    /// no listed cone is a face of another, and any two cones meet in a
    /// common face.
    pub fn new(rank: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Self> {
        let fan = Self::build(rank, rays, cones)?;
        fan.check_fan_condition()?;
        Ok(fan)
    }

    /// Builds a fan produced by an algorithm that guarantees the fan
    /// condition; only the per-cone checks run.
    pub(crate) fn new_trusted(rank: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Self> {
        let fan = Self::build(rank, rays, cones)?;
        debug_assert!(fan.check_fan_condition().is_ok());
        Ok(fan)
    }

    fn build(rank: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if rank > RANK_CAP {
            return Err(Error::RankCapExceeded { rank, cap: RANK_CAP });
        }
        let mut seen = BTreeSet::new();
        for r in &rays {
            if r.space() != Space::N {
                return Err(Error::SpaceMismatch {
                    expected: Space::N,
                    found: r.space(),
                });
            }
            if r.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: r.rank(),
                });
            }
            if !r.is_primitive() {
                return Err(Error::InvalidFan(format!("ray {r} is not primitive")));
            }
            if !seen.insert(r.coords().to_vec()) {
                return Err(Error::InvalidFan(format!("ray {r} is listed twice")));
            }
        }
        let mut used = vec![false; rays.len()];
        let mut cone_list = Vec::with_capacity(cones.len());
        for (ci, c) in cones.into_iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidFan(format!("cone {ci} has no rays")));
            }
            let len = c.len();
            let cone = Cone::new(c);
            if cone.rays.len() != len {
                return Err(Error::InvalidFan(format!("cone {ci} repeats a ray")));
            }
            for &i in &cone.rays {
                if i >= rays.len() {
                    return Err(Error::IndexOutOfRange {
                        index: i,
                        len: rays.len(),
                    });
                }
                used[i] = true;
            }
            cone_list.push(cone);
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidFan(format!("ray {i} lies in no cone")));
        }
        for (i, a) in cone_list.iter().enumerate() {
            for (j, b) in cone_list.iter().enumerate() {
                if i != j && a.rays.iter().all(|r| b.contains_ray(*r)) {
                    return Err(Error::InvalidFan(format!("cone {i} is contained in cone {j}")));
                }
            }
        }

        let mut hreps = Vec::with_capacity(cone_list.len());
        for (ci, cone) in cone_list.iter().enumerate() {
            let gens: Vec<Vec<i64>> = cone.rays.iter().map(|&i| rays[i].coords().to_vec()).collect();
            let h = dd::cone_hrep(&gens, rank)?;
            check_cone(ci, &gens, &h, rank)?;
            hreps.push(h);
        }
        let mut fan = Self {
            rank,
            rays,
            cones: cone_list,
            hreps,
            complete: false,
        };
        fan.complete = fan.compute_completeness()?;
        Ok(fan)
    }

    fn check_fan_condition(&self) -> Result<()> {
        for i in 0..self.cones.len() {
            for j in i + 1..self.cones.len() {
                let common: Vec<usize> = self.cones[i]
                    .rays
                    .iter()
                    .copied()
                    .filter(|r| self.cones[j].contains_ray(*r))
                    .collect();
                if !self.is_face(i, &common)? || !self.is_face(j, &common)? {
                    return Err(Error::InvalidFan(format!(
                        "cones {i} and {j} do not meet along a common face"
                    )));
                }
                let mut rows = self.hreps[i].inequalities()?;
                rows.extend(self.hreps[j].inequalities()?);
                for r in dd::extreme_rays(&rows, self.rank)? {
                    let hit = common.iter().any(|&c| self.rays[c].coords() == r.as_slice());
                    if !hit {
                        return Err(Error::InvalidFan(format!("cones {i} and {j} overlap")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the rays `sub` of cone `ci` span a face of it.
    fn is_face(&self, ci: usize, sub: &[usize]) -> Result<bool> {
        let h = &self.hreps[ci];
        let mut tight = Vec::new();
        for f in &h.facets {
            let mut on = true;
            for &r in sub {
                if lattice::dot(f, self.rays[r].coords())? != 0 {
                    on = false;
                    break;
                }
            }
            if on {
                tight.push(f);
            }
        }
        let mut face = Vec::new();
        for &r in &self.cones[ci].rays {
            let mut on = true;
            for f in &tight {
                if lattice::dot(f, self.rays[r].coords())? != 0 {
                    on = false;
                    break;
                }
            }
            if on {
                face.push(r);
            }
        }
        Ok(face == sub)
    }

    /// Ray subsets of cone `ci` cut out by its facets.
    pub(crate) fn cone_facet_rays(&self, ci: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::with_capacity(self.hreps[ci].facets.len());
        for f in &self.hreps[ci].facets {
            let mut sub = Vec::new();
            for &r in &self.cones[ci].rays {
                if lattice::dot(f, self.rays[r].coords())? == 0 {
                    sub.push(r);
                }
            }
            out.push(sub);
        }
        Ok(out)
    }

    fn compute_completeness(&self) -> Result<bool> {
        if self.hreps.iter().any(|h| h.dim != self.rank) {
            return Ok(false);
        }
        let mut owners: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for ci in 0..self.cones.len() {
            for sub in self.cone_facet_rays(ci)? {
                owners.entry(sub).or_default().push(ci);
            }
        }
        if owners.values().any(|o| o.len() != 2) {
            return Ok(false);
        }
        // adjacency through shared facets must connect all cones
        let mut reached = vec![false; self.cones.len()];
        let mut stack = vec![0usize];
        reached[0] = true;
        while let Some(c) = stack.pop() {
            for o in owners.values() {
                if o.contains(&c) {
                    for &d in o {
                        if !reached[d] {
                            reached[d] = true;
                            stack.push(d);
                        }
                    }
                }
            }
        }
        Ok(reached.iter().all(|&r| r))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// Maximal cones.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Every maximal cone is full-dimensional, each facet of a maximal cone
    /// is shared by exactly two maximal cones, and the cones are connected
    /// through shared facets.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub(crate) fn hrep(&self, ci: usize) -> &ConeHRep {
        &self.hreps[ci]
    }

    pub fn cone_dim(&self, ci: usize) -> usize {
        self.hreps[ci].dim
    }

    pub(crate) fn ray_rows(&self, cone: &Cone) -> Vec<Vec<i64>> {
        cone.rays.iter().map(|&i| self.rays[i].coords().to_vec()).collect()
    }

    fn check_direction(&self, v: &LatticeVector) -> Result<()> {
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
        Ok(())
    }

    pub fn max_cone_contains(&self, ci: usize, v: &LatticeVector) -> Result<bool> {
        self.check_direction(v)?;
        self.hreps[ci].contains(v.coords())
    }

    /// Index of the first maximal cone containing `v`.
    pub fn find_max_cone(&self, v: &LatticeVector) -> Result<Option<usize>> {
        self.check_direction(v)?;
        self.find_max_cone_coords(v.coords())
    }

    pub(crate) fn find_max_cone_coords(&self, v: &[i64]) -> Result<Option<usize>> {
        for (ci, h) in self.hreps.iter().enumerate() {
            if h.contains(v)? {
                return Ok(Some(ci));
            }
        }
        Ok(None)
    }

    /// The unique cone having `v` in its relative interior.
    pub fn smallest_cone_containing(&self, v: &LatticeVector) -> Result<Cone> {
        self.check_direction(v)?;
        if v.is_zero() {
            return Ok(Cone::zero());
        }
        let ci = self
            .find_max_cone_coords(v.coords())?
            .ok_or_else(|| Error::OutsideSupport(v.coords().to_vec()))?;
        let mut tight = Vec::new();
        for f in &self.hreps[ci].facets {
            if lattice::dot(f, v.coords())? == 0 {
                tight.push(f);
            }
        }
        let mut face = Vec::new();
        for &r in &self.cones[ci].rays {
            let mut on = true;
            for f in &tight {
                if lattice::dot(f, self.rays[r].coords())? != 0 {
                    on = false;
                    break;
                }
            }
            if on {
                face.push(r);
            }
        }
        Ok(Cone::new(face))
    }

    pub fn is_simplicial(&self, cone: &Cone) -> Result<bool> {
        Ok(rank_of_rows(&self.ray_rows(cone), self.rank)? == cone.rays.len())
    }

    /// Index of the lattice spanned by the rays of a simplicial cone inside
    /// its saturation; 1 exactly when the cone is smooth.
    pub fn cone_multiplicity(&self, cone: &Cone) -> Result<i64> {
        for &i in &cone.rays {
            if i >= self.rays.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.rays.len(),
                });
            }
        }
        if !self.is_simplicial(cone)? {
            return Err(Error::NonSimplicialCone(cone.rays.clone()));
        }
        saturation_index(&self.ray_rows(cone), self.rank)
    }

    /// Multiplicity of every maximal cone, `None` for non-simplicial ones.
    pub fn multiplicities(&self) -> Result<Vec<Option<i64>>> {
        self.cones
            .iter()
            .map(|c| match self.cone_multiplicity(c) {
                Ok(m) => Ok(Some(m)),
                Err(Error::NonSimplicialCone(_)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect()
    }

    /// Every maximal cone is simplicial with multiplicity 1.
    pub fn is_smooth(&self) -> Result<bool> {
        Ok(self.multiplicities()?.iter().all(|m| *m == Some(1)))
    }

    /// Index of the ray equal to `v`, if any.
    pub fn ray_index(&self, v: &[i64]) -> Option<usize> {
        self.rays.iter().position(|r| r.coords() == v)
    }
}

fn check_cone(ci: usize, gens: &[Vec<i64>], h: &ConeHRep, n: usize) -> Result<()> {
    // pointed: the sum of the dual extreme rays is strictly positive on every generator
    let mut s = vec![0i64; n];
    for f in &h.facets {
        for (a, &b) in s.iter_mut().zip(f) {
            *a = lattice::add(*a, b)?;
        }
    }
    for g in gens {
        if lattice::dot(&s, g)? <= 0 {
            return Err(Error::InvalidFan(format!("cone {ci} is not strongly convex")));
        }
    }
    for g in gens {
        let tight: Vec<Vec<i64>> = h
            .facets
            .iter()
            .filter(|f| lattice::dot(f, g).map(|x| x == 0).unwrap_or(false))
            .cloned()
            .collect();
        let mut rows = tight;
        rows.extend(h.equalities.iter().cloned());
        if rank_of_rows(&rows, n)? != n - 1 {
            return Err(Error::InvalidFan(format!(
                "a listed ray of cone {ci} is not an extreme ray"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Fan> {
        Fan::new(
            rank,
            rays.iter().map(|r| LatticeVector::n(r.to_vec())).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    fn p2() -> Fan {
        fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]).unwrap()
    }

    #[test]
    fn p2_is_complete_and_smooth() {
        let f = p2();
        assert!(f.is_complete());
        assert!(f.is_smooth().unwrap());
        assert_eq!(f.multiplicities().unwrap(), vec![Some(1); 3]);
    }

    #[test]
    fn p1_is_complete() {
        let f = fan(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
        assert!(f.is_complete());
        assert!(f.is_smooth().unwrap());
    }

    #[test]
    fn single_cone_is_incomplete() {
        let f = fan(2, &[&[0, 1], &[2, -1]], &[&[0, 1]]).unwrap();
        assert!(!f.is_complete());
        assert_eq!(f.cone_multiplicity(&f.cones()[0]).unwrap(), 2);
        assert!(!f.is_smooth().unwrap());
    }

    #[test]
    fn f2_is_smooth() {
        let f = fan(
            2,
            &[&[0, 1], &[1, 0], &[0, -1], &[-1, 2]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .unwrap();
        assert!(f.is_complete());
        assert!(f.is_smooth().unwrap());
    }

    #[test]
    fn rejects_bad_fans() {
        assert!(matches!(
            fan(2, &[&[2, 0], &[0, 1]], &[&[0, 1]]),
            Err(Error::InvalidFan(_))
        ));
        assert!(matches!(
            fan(2, &[&[1, 0], &[1, 0]], &[&[0, 1]]),
            Err(Error::InvalidFan(_))
        ));
        assert!(matches!(
            fan(2, &[&[1, 0], &[0, 1], &[-1, 0]], &[&[0, 1]]),
            Err(Error::InvalidFan(_))
        ));
        assert!(matches!(
            fan(2, &[&[1, 0], &[-1, 0]], &[&[0, 1]]),
            Err(Error::InvalidFan(_))
        ));
        // overlapping cones
        assert!(matches!(
            fan(2, &[&[1, 0], &[0, 1], &[1, 1], &[-1, 2]], &[&[0, 1], &[2, 3]]),
            Err(Error::InvalidFan(_))
        ));
        // (1,1) is not extreme in cone((1,0),(0,1),(1,1))
        assert!(matches!(
            fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 1, 2]]),
            Err(Error::InvalidFan(_))
        ));
        assert!(matches!(
            fan(2, &[&[1, 0]], &[&[3]]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn smallest_cone_examples() {
        let f = p2();
        assert_eq!(
            f.smallest_cone_containing(&LatticeVector::n([0, 1])).unwrap(),
            Cone::new(vec![1])
        );
        // (-1,-2) = 2·(-1,-1) + (1,0)
        assert_eq!(
            f.smallest_cone_containing(&LatticeVector::n([-1, -2])).unwrap(),
            Cone::new(vec![0, 2])
        );
        assert_eq!(
            f.smallest_cone_containing(&LatticeVector::n([1, 1])).unwrap(),
            Cone::new(vec![0, 1])
        );
        assert_eq!(
            f.smallest_cone_containing(&LatticeVector::n([0, 0])).unwrap(),
            Cone::zero()
        );
        let half = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        assert!(matches!(
            half.smallest_cone_containing(&LatticeVector::n([-1, 0])),
            Err(Error::OutsideSupport(_))
        ));
    }

    #[test]
    fn three_dimensional_fans() {
        // fan of P¹×P¹×P¹
        let mut rays = Vec::new();
        for k in 0..3 {
            for s in [1, -1] {
                let mut r = vec![0; 3];
                r[k] = s;
                rays.push(LatticeVector::n(r));
            }
        }
        let mut cones = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    cones.push(vec![a, 2 + b, 4 + c]);
                }
            }
        }
        let f = Fan::new(3, rays.clone(), cones).unwrap();
        assert!(f.is_complete());
        assert!(f.is_smooth().unwrap());
        // dropping a cone leaves a hole
        let mut cones: Vec<Vec<usize>> = f.cones().iter().map(|c| c.rays().to_vec()).collect();
        cones.pop();
        let g = Fan::new(3, rays, cones).unwrap();
        assert!(!g.is_complete());
    }

    #[test]
    fn non_simplicial_cone() {
        // cone over a square
        let f = fan(
            3,
            &[&[1, 1, 1], &[-1, 1, 1], &[-1, -1, 1], &[1, -1, 1]],
            &[&[0, 1, 2, 3]],
        )
        .unwrap();
        assert!(!f.is_simplicial(&f.cones()[0]).unwrap());
        assert!(matches!(
            f.cone_multiplicity(&f.cones()[0]),
            Err(Error::NonSimplicialCone(_))
        ));
        assert_eq!(f.multiplicities().unwrap(), vec![None]);
    }
}
