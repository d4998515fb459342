use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dd;
use crate::error::{Error, Result};
use crate::lattice::{self, LatticeMatrix, LatticeVector, Space};
use crate::polytope::LatticePolytope;

use super::divisor::{SupportFunction, ToricDivisor};
use super::fan::Fan;

/// A map of lattices `N_X → N_Y`, stored as a `target × source` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    source_rank: usize,
    target_rank: usize,
    matrix: LatticeMatrix,
}

impl LatticeMap {
    pub fn new(source_rank: usize, target_rank: usize, matrix: LatticeMatrix) -> Result<Self> {
        if source_rank == 0 || target_rank == 0 {
            return Err(Error::ZeroRank);
        }
        if matrix.rows() != target_rank || matrix.cols() != source_rank {
            return Err(Error::ShapeMismatch(format!(
                "expected a {target_rank}×{source_rank} matrix, found {}×{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self {
            source_rank,
            target_rank,
            matrix,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            source_rank: n,
            target_rank: n,
            matrix: LatticeMatrix::identity(n),
        }
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn matrix(&self) -> &LatticeMatrix {
        &self.matrix
    }

    fn check(&self, v: &LatticeVector, space: Space, rank: usize) -> Result<()> {
        if v.space() != space {
            return Err(Error::SpaceMismatch {
                expected: space,
                found: v.space(),
            });
        }
        if v.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                found: v.rank(),
            });
        }
        Ok(())
    }

    /// `π̄(v)` for `v ∈ N_X`.
    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        self.check(v, Space::N, self.source_rank)?;
        Ok(LatticeVector::from_raw(Space::N, self.matrix.mul_vec(v.coords())?))
    }

    /// `π̄^∨(m)` for `m ∈ M_Y`.
    pub fn dual_apply(&self, m: &LatticeVector) -> Result<LatticeVector> {
        self.check(m, Space::M, self.target_rank)?;
        Ok(LatticeVector::from_raw(
            Space::M,
            self.matrix.transpose().mul_vec(m.coords())?,
        ))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &LatticeMap) -> Result<LatticeMap> {
        if first.target_rank != self.source_rank {
            return Err(Error::RankMismatch {
                expected: self.source_rank,
                found: first.target_rank,
            });
        }
        Ok(LatticeMap {
            source_rank: first.source_rank,
            target_rank: self.target_rank,
            matrix: self.matrix.checked_mul(&first.matrix)?,
        })
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(lattice::matrix_rank(&self.matrix)? == self.source_rank)
    }

    fn check_fans(&self, source: &Fan, target: &Fan) -> Result<()> {
        if source.rank() != self.source_rank {
            return Err(Error::RankMismatch {
                expected: self.source_rank,
                found: source.rank(),
            });
        }
        if target.rank() != self.target_rank {
            return Err(Error::RankMismatch {
                expected: self.target_rank,
                found: target.rank(),
            });
        }
        Ok(())
    }

    /// For each maximal cone of `source`, the first maximal cone of `target`
    /// containing its image.
    pub fn cone_images(&self, source: &Fan, target: &Fan) -> Result<Vec<usize>> {
        self.check_fans(source, target)?;
        let mut out = Vec::with_capacity(source.cones().len());
        for (ci, cone) in source.cones().iter().enumerate() {
            let images: Vec<Vec<i64>> = cone
                .rays()
                .iter()
                .map(|&i| self.matrix.mul_vec(source.ray(i).coords()))
                .collect::<Result<_>>()?;
            let mut found = None;
            'targets: for tj in 0..target.cones().len() {
                for x in &images {
                    if !target.hrep(tj).contains(x)? {
                        continue 'targets;
                    }
                }
                found = Some(tj);
                break;
            }
            out.push(found.ok_or(Error::NotAMorphism { cone: ci })?);
        }
        Ok(out)
    }

    /// The fan `{π̄⁻¹(τ) : τ ∈ target}` on the source lattice.
    ///
    /// Requires an injective map so that every preimage is strongly convex.
    /// Rays are listed in order of first appearance over the target cones.
    pub fn induced_fan(&self, target: &Fan) -> Result<Fan> {
        if target.rank() != self.target_rank {
            return Err(Error::RankMismatch {
                expected: self.target_rank,
                found: target.rank(),
            });
        }
        if !self.is_injective()? {
            return Err(Error::NotInjective);
        }
        let t = self.matrix.transpose();
        let mut rays: Vec<Vec<i64>> = Vec::new();
        let mut index: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for tj in 0..target.cones().len() {
            let rows: Vec<Vec<i64>> = target
                .hrep(tj)
                .inequalities()?
                .iter()
                .map(|w| t.mul_vec(w))
                .collect::<Result<_>>()?;
            let mut cone = Vec::new();
            for r in dd::extreme_rays(&rows, self.source_rank)? {
                let next = rays.len();
                let i = *index.entry(r.clone()).or_insert(next);
                if i == next {
                    rays.push(r);
                }
                cone.push(i);
            }
            cone.sort_unstable();
            if !cone.is_empty() {
                cones.push(cone);
            }
        }
        cones.sort();
        cones.dedup();
        let maximal: Vec<Vec<usize>> = cones
            .iter()
            .filter(|c| {
                !cones
                    .iter()
                    .any(|d| d.len() > c.len() && c.iter().all(|x| d.binary_search(x).is_ok()))
            })
            .cloned()
            .collect();
        Fan::new(
            self.source_rank,
            rays.into_iter().map(|r| LatticeVector::from_raw(Space::N, r)).collect(),
            maximal,
        )
    }

    /// `ψ ∘ π̄` as a support function on `source`.
    pub fn pullback_support_function(&self, psi: &SupportFunction, source: Arc<Fan>) -> Result<SupportFunction> {
        let images = self.cone_images(&source, psi.fan())?;
        let data = images
            .iter()
            .map(|&tj| self.dual_apply(&psi.data()[tj]))
            .collect::<Result<_>>()?;
        SupportFunction::new(source, data)
    }
}

/// The divisor on `source` whose support function is `ψ_D ∘ π̄`.
pub fn pullback_divisor(map: &LatticeMap, d: &ToricDivisor, source: Arc<Fan>) -> Result<ToricDivisor> {
    let psi = d.support_function()?;
    map.pullback_support_function(&psi, source)?.to_divisor()
}

/// `conv{π̄^∨(m) : m vertex of P}`.
pub fn polytope_pullback_map(map: &LatticeMap, p: &LatticePolytope) -> Result<LatticePolytope> {
    if p.rank() != map.target_rank {
        return Err(Error::RankMismatch {
            expected: map.target_rank,
            found: p.rank(),
        });
    }
    p.map_vertices(&map.matrix.transpose().to_rows())
}

/// `π̄^∨` applied to the lattice points of `p`, sorted and deduplicated.
pub fn lattice_point_images(map: &LatticeMap, p: &LatticePolytope) -> Result<Vec<LatticeVector>> {
    let mut out = p
        .lattice_points()?
        .iter()
        .map(|m| map.dual_apply(m))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Arc<Fan> {
        Arc::new(
            Fan::new(
                rank,
                rays.iter().map(|r| LatticeVector::n(r.to_vec())).collect(),
                cones.iter().map(|c| c.to_vec()).collect(),
            )
            .unwrap(),
        )
    }

    fn p2() -> Arc<Fan> {
        fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
    }

    fn curve_map() -> LatticeMap {
        LatticeMap::new(1, 2, LatticeMatrix::new(2, 1, vec![1, 3]).unwrap()).unwrap()
    }

    #[test]
    fn twisted_line_in_the_plane() {
        let map = curve_map();
        let source = Arc::new(map.induced_fan(&p2()).unwrap());
        let rays: Vec<&[i64]> = source.rays().iter().map(|r| r.coords()).collect();
        assert_eq!(rays, vec![&[1][..], &[-1]]);
        assert!(source.is_complete());
        let h = ToricDivisor::new(p2(), vec![0, 0, 1]).unwrap();
        let pulled = pullback_divisor(&map, &h, source).unwrap();
        assert_eq!(pulled.coeffs(), &[0, 3]);
        let seg = pulled.polytope().unwrap();
        assert_eq!(seg.lattice_points().unwrap().len(), 4);

        let tri = h.polytope().unwrap();
        assert_eq!(tri.lattice_points().unwrap().len(), 3);
        let img = lattice_point_images(&map, &tri).unwrap();
        assert_eq!(
            img,
            vec![LatticeVector::m([0]), LatticeVector::m([1]), LatticeVector::m([3])]
        );
        assert_eq!(polytope_pullback_map(&map, &tri).unwrap(), seg);
    }

    #[test]
    fn identity_pullback() {
        let d = ToricDivisor::new(p2(), vec![1, -2, 4]).unwrap();
        let id = LatticeMap::identity(2);
        assert_eq!(pullback_divisor(&id, &d, p2()).unwrap(), d);
        let p = ToricDivisor::new(p2(), vec![0, 0, 2]).unwrap().polytope().unwrap();
        assert_eq!(polytope_pullback_map(&id, &p).unwrap(), p);
    }

    #[test]
    fn resolution_map_keeps_polytope() {
        let conic = fan(2, &[&[0, 1], &[-1, 0], &[2, -1]], &[&[0, 2], &[0, 1], &[1, 2]]);
        let f2 = fan(
            2,
            &[&[0, 1], &[-1, 0], &[2, -1], &[1, 0]],
            &[&[0, 3], &[2, 3], &[0, 1], &[1, 2]],
        );
        let d = ToricDivisor::new(conic, vec![0, 1, 0]).unwrap();
        let pulled = pullback_divisor(&LatticeMap::identity(2), &d, f2).unwrap();
        assert_eq!(pulled.coeffs(), &[0, 1, 0, 0]);
        assert_eq!(pulled.polytope().unwrap(), d.polytope().unwrap());
        assert!(pulled.is_globally_generated().unwrap());
    }

    #[test]
    fn morphism_condition() {
        // e1 ↦ (1,1) lands in cone {0,1}; −e1 ↦ (−1,−1) is the ray shared by cones 1 and 2
        let map = LatticeMap::new(1, 2, LatticeMatrix::new(2, 1, vec![1, 1]).unwrap()).unwrap();
        let p1 = fan(1, &[&[1], &[-1]], &[&[0], &[1]]);
        assert_eq!(map.cone_images(&p1, &p2()).unwrap(), vec![0, 1]);
        // the 2D identity is not a morphism from P¹×P¹ to P²
        let sq = fan(
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        );
        assert_eq!(
            LatticeMap::identity(2).cone_images(&sq, &p2()),
            Err(Error::NotAMorphism { cone: 2 })
        );
    }

    #[test]
    fn composition() {
        let a = LatticeMap::new(2, 2, LatticeMatrix::from_rows(&[vec![1, 1], vec![0, 1]], 2).unwrap()).unwrap();
        let b = curve_map();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.apply(&LatticeVector::n([1])).unwrap(), LatticeVector::n([4, 3]));
        assert_eq!(
            ab.dual_apply(&LatticeVector::m([1, 0])).unwrap(),
            b.dual_apply(&a.dual_apply(&LatticeVector::m([1, 0])).unwrap()).unwrap()
        );
        assert!(b.compose(&a).is_err());
        let zero = LatticeMap::new(1, 2, LatticeMatrix::zeros(2, 1)).unwrap();
        assert_eq!(zero.induced_fan(&p2()), Err(Error::NotInjective));
    }
}
