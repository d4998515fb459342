use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{self, reduce_modulo, solve_integral, IntegralSolution, LatticeMatrix, LatticeVector, Space};
use crate::polytope::{self, LatticePolytope};

use super::fan::Fan;

pub(crate) fn same_fan(a: &Arc<Fan>, b: &Arc<Fan>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A torus-invariant Weil divisor `Σ a_i D_i`, one coefficient per ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDivisor {
    fan: Arc<Fan>,
    coeffs: Vec<i64>,
}

/// Result of [`ToricDivisor::is_cartier`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CartierCertificate {
    /// One character per maximal cone, reduced modulo the cone's annihilator.
    Cartier(Vec<LatticeVector>),
    /// The first maximal cone without an integral local datum.
    NotCartier { cone: usize, rational_only: bool },
}

impl CartierCertificate {
    pub fn is_cartier(&self) -> bool {
        matches!(self, CartierCertificate::Cartier(_))
    }
}

impl ToricDivisor {
    pub fn new(fan: Arc<Fan>, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != fan.num_rays() {
            return Err(Error::LengthMismatch {
                expected: fan.num_rays(),
                found: coeffs.len(),
            });
        }
        Ok(Self { fan, coeffs })
    }

    pub fn zero(fan: Arc<Fan>) -> Self {
        let coeffs = vec![0; fan.num_rays()];
        Self { fan, coeffs }
    }

    /// The prime divisor `D_i`.
    pub fn prime(fan: Arc<Fan>, i: usize) -> Result<Self> {
        let len = fan.num_rays();
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        let mut coeffs = vec![0; len];
        coeffs[i] = 1;
        Ok(Self { fan, coeffs })
    }

    /// `div(χ^m) = Σ ⟨m, v_i⟩ D_i`.
    pub fn principal(fan: Arc<Fan>, m: &LatticeVector) -> Result<Self> {
        let coeffs = fan
            .rays()
            .iter()
            .map(|v| lattice::pairing(m, v))
            .collect::<Result<_>>()?;
        Ok(Self { fan, coeffs })
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !same_fan(&self.fan, &other.fan) {
            return Err(Error::FanMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| lattice::add(a, b))
            .collect::<Result<_>>()?;
        Ok(Self {
            fan: self.fan.clone(),
            coeffs,
        })
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|&a| lattice::mul(a, k)).collect::<Result<_>>()?;
        Ok(Self {
            fan: self.fan.clone(),
            coeffs,
        })
    }

    /// Solves `⟨m_σ, v_i⟩ = −a_i` on every maximal cone.
    pub fn is_cartier(&self) -> Result<CartierCertificate> {
        let n = self.fan.rank();
        let mut data = Vec::with_capacity(self.fan.cones().len());
        for (ci, cone) in self.fan.cones().iter().enumerate() {
            let rows = self.fan.ray_rows(cone);
            let a = LatticeMatrix::from_rows(&rows, n)?;
            let b: Vec<i64> = cone
                .rays()
                .iter()
                .map(|&i| lattice::neg(self.coeffs[i]))
                .collect::<Result<_>>()?;
            match solve_integral(&a, &b)? {
                IntegralSolution::Integral(m) => {
                    let m = reduce_modulo(&m, &self.fan.hrep(ci).equalities)?;
                    data.push(LatticeVector::from_raw(Space::M, m));
                }
                IntegralSolution::RationalOnly => {
                    return Ok(CartierCertificate::NotCartier {
                        cone: ci,
                        rational_only: true,
                    })
                }
                IntegralSolution::Inconsistent => {
                    return Ok(CartierCertificate::NotCartier {
                        cone: ci,
                        rational_only: false,
                    })
                }
            }
        }
        Ok(CartierCertificate::Cartier(data))
    }

    /// The Cartier data, or [`Error::NotCartier`] naming the failing cone.
    pub fn cartier_data(&self) -> Result<Vec<LatticeVector>> {
        match self.is_cartier()? {
            CartierCertificate::Cartier(d) => Ok(d),
            CartierCertificate::NotCartier { cone, rational_only } => Err(Error::NotCartier { cone, rational_only }),
        }
    }

    pub fn support_function(&self) -> Result<SupportFunction> {
        SupportFunction::of_divisor(self)
    }

    /// `P_D = {m : ⟨m, v_i⟩ ≥ −a_i}`.
    pub fn polytope(&self) -> Result<LatticePolytope> {
        let ineqs: Vec<(Vec<i64>, i64)> = self
            .fan
            .rays()
            .iter()
            .zip(&self.coeffs)
            .map(|(v, &a)| (v.coords().to_vec(), a))
            .collect();
        polytope::from_inequalities(self.fan.rank(), &ineqs)
    }

    /// Every Cartier datum `m_σ` satisfies all ray inequalities of `P_D`.
    pub fn is_globally_generated(&self) -> Result<bool> {
        let psi = self.support_function()?;
        for m in &psi.data {
            for (v, &a) in self.fan.rays().iter().zip(&self.coeffs) {
                if lattice::add(lattice::dot(m.coords(), v.coords())?, a)? < 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A piecewise-linear function on the support of a fan, linear on each
/// maximal cone `σ` as `⟨m_σ, ·⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFunction {
    fan: Arc<Fan>,
    data: Vec<LatticeVector>,
}

impl SupportFunction {
    /// Checks shapes and continuity across shared rays.
    pub fn new(fan: Arc<Fan>, data: Vec<LatticeVector>) -> Result<Self> {
        if data.len() != fan.cones().len() {
            return Err(Error::LengthMismatch {
                expected: fan.cones().len(),
                found: data.len(),
            });
        }
        for m in &data {
            if m.space() != Space::M {
                return Err(Error::SpaceMismatch {
                    expected: Space::M,
                    found: m.space(),
                });
            }
            if m.rank() != fan.rank() {
                return Err(Error::RankMismatch {
                    expected: fan.rank(),
                    found: m.rank(),
                });
            }
        }
        let mut value: Vec<Option<i64>> = vec![None; fan.num_rays()];
        for (cone, m) in fan.cones().iter().zip(&data) {
            for &i in cone.rays() {
                let x = lattice::dot(m.coords(), fan.ray(i).coords())?;
                match value[i] {
                    Some(y) if y != x => return Err(Error::Discontinuous(i)),
                    _ => value[i] = Some(x),
                }
            }
        }
        let data = data
            .into_iter()
            .enumerate()
            .map(|(ci, m)| {
                reduce_modulo(m.coords(), &fan.hrep(ci).equalities).map(|c| LatticeVector::from_raw(Space::M, c))
            })
            .collect::<Result<_>>()?;
        Ok(Self { fan, data })
    }

    /// The globally linear function `⟨m, ·⟩`.
    pub fn linear(fan: Arc<Fan>, m: &LatticeVector) -> Result<Self> {
        let data = vec![m.clone(); fan.cones().len()];
        Self::new(fan, data)
    }

    /// `ψ_D` with `ψ_D(v_i) = −a_i`. Every maximal cone must be
    /// full-dimensional, so that `m_σ` is unique.
    pub fn of_divisor(d: &ToricDivisor) -> Result<Self> {
        for ci in 0..d.fan.cones().len() {
            if d.fan.cone_dim(ci) != d.fan.rank() {
                return Err(Error::NonFullDimensionalCone { cone: ci });
            }
        }
        let data = d.cartier_data()?;
        Ok(Self {
            fan: d.fan.clone(),
            data,
        })
    }

    /// `ψ(v) = min_{m∈P} ⟨m, v⟩`, provided this is linear on every maximal
    /// cone of the complete fan `fan`.
    pub fn of_polytope(p: &LatticePolytope, fan: Arc<Fan>) -> Result<Self> {
        if p.rank() != fan.rank() {
            return Err(Error::RankMismatch {
                expected: fan.rank(),
                found: p.rank(),
            });
        }
        if !fan.is_complete() {
            return Err(Error::IncompleteFan);
        }
        let mut data = Vec::with_capacity(fan.cones().len());
        for (ci, cone) in fan.cones().iter().enumerate() {
            let mut w = vec![0i64; fan.rank()];
            for &i in cone.rays() {
                for (a, &b) in w.iter_mut().zip(fan.ray(i).coords()) {
                    *a = lattice::add(*a, b)?;
                }
            }
            let mut best: Option<(i64, &LatticeVector)> = None;
            for m in p.vertices() {
                let x = lattice::dot(m.coords(), &w)?;
                if best.is_none_or(|(b, _)| x < b) {
                    best = Some((x, m));
                }
            }
            let m = best.map(|(_, m)| m.clone()).ok_or(Error::EmptyPolytope)?;
            // a concave function agreeing with ⟨m,·⟩ on every ray of σ equals it on σ
            for &i in cone.rays() {
                let (lo, _) = p.pairing_range_coords(fan.ray(i).coords())?;
                if lattice::dot(m.coords(), fan.ray(i).coords())? != lo {
                    return Err(Error::NotRefining { cone: ci });
                }
            }
            data.push(m);
        }
        Ok(Self { fan, data })
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    /// `m_σ` per maximal cone.
    pub fn data(&self) -> &[LatticeVector] {
        &self.data
    }

    pub fn evaluate(&self, v: &LatticeVector) -> Result<i64> {
        let ci = self
            .fan
            .find_max_cone(v)?
            .ok_or_else(|| Error::OutsideSupport(v.coords().to_vec()))?;
        lattice::dot(self.data[ci].coords(), v.coords())
    }

    pub(crate) fn evaluate_coords(&self, v: &[i64]) -> Result<i64> {
        let ci = self
            .fan
            .find_max_cone_coords(v)?
            .ok_or_else(|| Error::OutsideSupport(v.to_vec()))?;
        lattice::dot(self.data[ci].coords(), v)
    }

    /// The divisor with `a_i = −ψ(v_i)`.
    pub fn to_divisor(&self) -> Result<ToricDivisor> {
        let mut coeffs = vec![0i64; self.fan.num_rays()];
        for (cone, m) in self.fan.cones().iter().zip(&self.data) {
            for &i in cone.rays() {
                coeffs[i] = lattice::neg(lattice::dot(m.coords(), self.fan.ray(i).coords())?)?;
            }
        }
        ToricDivisor::new(self.fan.clone(), coeffs)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !same_fan(&self.fan, &other.fan) {
            return Err(Error::FanMismatch);
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_>>()?;
        Self::new(self.fan.clone(), data)
    }
}

/// The normal fan of a full-dimensional polytope together with the divisor
/// whose polytope is `p`.
///
/// Rays are the facet normals in facet order; maximal cones are the vertex
/// cones in vertex order; `a_i` is the offset of facet `i`.
pub fn normal_fan(p: &LatticePolytope) -> Result<(Arc<Fan>, ToricDivisor)> {
    if !p.is_full_dimensional() {
        return Err(Error::Degenerate {
            affine_dim: p.affine_dim(),
            rank: p.rank(),
        });
    }
    let rays: Vec<LatticeVector> = p.facets().iter().map(|f| f.normal.clone()).collect();
    let coeffs: Vec<i64> = p.facets().iter().map(|f| f.offset).collect();
    let mut cones = Vec::with_capacity(p.vertices().len());
    for v in p.vertices() {
        let mut cone = Vec::new();
        for (i, f) in p.facets().iter().enumerate() {
            if f.slack(v.coords())? == 0 {
                cone.push(i);
            }
        }
        cones.push(cone);
    }
    let fan = Arc::new(Fan::new_trusted(p.rank(), rays, cones)?);
    let d = ToricDivisor::new(fan.clone(), coeffs)?;
    Ok((fan, d))
}
