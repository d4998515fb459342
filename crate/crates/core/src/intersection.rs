//! Intersection numbers of one-parameter curves `C_v` with torus-invariant
//! Cartier divisors, and curve classes as ray-indexed intersection vectors.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{self, LatticeVector, Space};
use crate::toric::{same_fan, Fan, SupportFunction, ToricDivisor};

fn check_direction(fan: &Fan, v: &LatticeVector) -> Result<()> {
    if v.space() != Space::N {
        return Err(Error::SpaceMismatch {
            expected: Space::N,
            found: v.space(),
        });
    }
    if v.rank() != fan.rank() {
        return Err(Error::RankMismatch {
            expected: fan.rank(),
            found: v.rank(),
        });
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !fan.is_complete() {
        return Err(Error::IncompleteFan);
    }
    Ok(())
}

fn local_from_psi(psi: &SupportFunction, v: &[i64]) -> Result<(i64, i64)> {
    let neg: Vec<i64> = v.iter().map(|&x| lattice::neg(x)).collect::<Result<_>>()?;
    Ok((
        lattice::neg(psi.evaluate_coords(v)?)?,
        lattice::neg(psi.evaluate_coords(&neg)?)?,
    ))
}

/// Local intersection numbers `(−ψ_D(v), −ψ_D(−v))` of `C_v` with `D` at the
/// two torus-fixed points of the curve.
pub fn local_intersection_numbers(d: &ToricDivisor, v: &LatticeVector) -> Result<(i64, i64)> {
    check_direction(d.fan(), v)?;
    let psi = d.support_function()?;
    local_from_psi(&psi, v.coords())
}

/// `[C_v] · D = −(ψ_D(v) + ψ_D(−v))`.
pub fn one_param_intersection(d: &ToricDivisor, v: &LatticeVector) -> Result<i64> {
    let (a, b) = local_intersection_numbers(d, v)?;
    lattice::add(a, b)
}

/// A curve class recorded by its intersection numbers `c_i = [C] · D_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    fan: Arc<Fan>,
    c: Vec<i64>,
}

/// Outcome of [`validate_curve_class`]: the residues `Σ_i ⟨e_k, v_i⟩ c_i`
/// for each basis character `e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClassCheck {
    pub residues: Vec<i64>,
}

impl CurveClassCheck {
    pub fn is_valid(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    /// Index of the first basis character pairing nontrivially with the class.
    pub fn failing_character(&self) -> Option<usize> {
        self.residues.iter().position(|&r| r != 0)
    }
}

/// Checks that `c` annihilates every principal divisor.
pub fn validate_curve_class(fan: &Fan, c: &[i64]) -> Result<CurveClassCheck> {
    if c.len() != fan.num_rays() {
        return Err(Error::LengthMismatch {
            expected: fan.num_rays(),
            found: c.len(),
        });
    }
    let mut residues = vec![0i64; fan.rank()];
    for (v, &ci) in fan.rays().iter().zip(c) {
        for (r, &x) in residues.iter_mut().zip(v.coords()) {
            *r = lattice::add(*r, lattice::mul(x, ci)?)?;
        }
    }
    Ok(CurveClassCheck { residues })
}

impl CurveClass {
    /// Validates the principal-divisor relations.
    pub fn new(fan: Arc<Fan>, c: Vec<i64>) -> Result<Self> {
        let check = validate_curve_class(&fan, &c)?;
        if let Some(k) = check.failing_character() {
            return Err(Error::InvalidCurveClass(format!(
                "character e{} pairs to {} with the class",
                k + 1,
                check.residues[k]
            )));
        }
        Ok(Self { fan, c })
    }

    pub fn zero(fan: Arc<Fan>) -> Self {
        let c = vec![0; fan.num_rays()];
        Self { fan, c }
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    pub fn is_nonnegative(&self) -> bool {
        self.c.iter().all(|&x| x >= 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !same_fan(&self.fan, &other.fan) {
            return Err(Error::FanMismatch);
        }
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| lattice::add(a, b))
            .collect::<Result<_>>()?;
        Ok(Self {
            fan: self.fan.clone(),
            c,
        })
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self> {
        let c = self.c.iter().map(|&a| lattice::mul(a, k)).collect::<Result<_>>()?;
        Ok(Self {
            fan: self.fan.clone(),
            c,
        })
    }
}

/// The class of `C_v`: `c_i = −(ψ_{D_i}(v) + ψ_{D_i}(−v))`.
///
/// Every prime divisor must be Cartier, so singular fans are refused.
pub fn curve_class_of_direction(fan: &Arc<Fan>, v: &LatticeVector) -> Result<CurveClass> {
    check_direction(fan, v)?;
    let mut c = Vec::with_capacity(fan.num_rays());
    for i in 0..fan.num_rays() {
        let psi = ToricDivisor::prime(fan.clone(), i)?.support_function()?;
        let (a, b) = local_from_psi(&psi, v.coords())?;
        c.push(lattice::add(a, b)?);
    }
    Ok(CurveClass { fan: fan.clone(), c })
}

/// `[C] · D = Σ_i a_i c_i`.
pub fn degree_against_divisor(c: &CurveClass, d: &ToricDivisor) -> Result<i64> {
    if !same_fan(&c.fan, d.fan()) {
        return Err(Error::FanMismatch);
    }
    lattice::dot(&c.c, d.coeffs())
}
