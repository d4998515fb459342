//! Input file formats and their canonical emission.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;
use torwidth_core::{Fan, LatticeMap, LatticeMatrix, LatticePolytope, LatticeVector, ToricDivisor};

use crate::doc::Doc;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricPairFile {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub divisor: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeMapFile {
    pub source_dim: usize,
    pub target_dim: usize,
    pub matrix: Vec<Vec<i64>>,
}

pub fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn check_lengths(what: &str, dim: usize, rows: &[Vec<i64>]) -> Result<(), CliError> {
    if dim == 0 {
        return Err(CliError::Malformed("dim must be at least 1".into()));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != dim {
            return Err(CliError::Malformed(format!(
                "{what} {i} has {} coordinates, expected {dim}",
                r.len()
            )));
        }
    }
    Ok(())
}

fn gcd(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PolytopeFile {
    pub fn to_polytope(&self) -> Result<LatticePolytope, CliError> {
        if self.points.is_empty() {
            return Err(CliError::Malformed("points must be nonempty".into()));
        }
        check_lengths("point", self.dim, &self.points)?;
        let pts: Vec<LatticeVector> = self.points.iter().map(|p| LatticeVector::m(p.clone())).collect();
        Ok(LatticePolytope::hull(&pts)?)
    }

    /// Points sorted and deduplicated.
    pub fn canonical(&self) -> Self {
        let mut points = self.points.clone();
        points.sort();
        points.dedup();
        Self { dim: self.dim, points }
    }

    pub fn to_doc(&self) -> Doc {
        Doc::new().field("dim", self.dim).field("points", self.points.clone())
    }
}

impl ToricPairFile {
    pub fn to_fan(&self) -> Result<Arc<Fan>, CliError> {
        check_lengths("ray", self.dim, &self.rays)?;
        for (i, r) in self.rays.iter().enumerate() {
            let g = r.iter().fold(0, |g, &x| gcd(g as i64, x));
            if g != 1 {
                return Err(CliError::Malformed(format!("ray {i} {r:?} is not primitive")));
            }
            if self.rays[..i].contains(r) {
                return Err(CliError::Malformed(format!("ray {i} {r:?} is repeated")));
            }
        }
        for (ci, c) in self.max_cones.iter().enumerate() {
            if let Some(&j) = c.iter().find(|&&j| j >= self.rays.len()) {
                return Err(CliError::Malformed(format!("cone {ci} refers to missing ray {j}")));
            }
        }
        let rays = self.rays.iter().map(|r| LatticeVector::n(r.clone())).collect();
        Ok(Arc::new(Fan::new(self.dim, rays, self.max_cones.clone())?))
    }

    pub fn to_divisor(&self) -> Result<ToricDivisor, CliError> {
        let fan = self.to_fan()?;
        if self.divisor.len() != self.rays.len() {
            return Err(CliError::Malformed(format!(
                "divisor has {} entries for {} rays",
                self.divisor.len(),
                self.rays.len()
            )));
        }
        Ok(ToricDivisor::new(fan, self.divisor.clone())?)
    }

    /// Rays and divisor in the order of `d`'s fan; cones sorted.
    pub fn from_divisor(d: &ToricDivisor) -> Self {
        let fan = d.fan();
        let mut max_cones: Vec<Vec<usize>> = fan.cones().iter().map(|c| c.rays().to_vec()).collect();
        max_cones.sort();
        Self {
            dim: fan.rank(),
            rays: fan.rays().iter().map(|r| r.coords().to_vec()).collect(),
            max_cones,
            divisor: d.coeffs().to_vec(),
        }
    }

    pub fn canonical(&self) -> Self {
        let mut max_cones: Vec<Vec<usize>> = self
            .max_cones
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        max_cones.sort();
        Self {
            max_cones,
            ..self.clone()
        }
    }

    pub fn to_doc(&self) -> Doc {
        Doc::new()
            .field("dim", self.dim)
            .field("rays", self.rays.clone())
            .field("max_cones", Value::from(self.max_cones.clone()))
            .field("divisor", self.divisor.clone())
    }
}

impl LatticeMapFile {
    pub fn to_map(&self) -> Result<LatticeMap, CliError> {
        if self.matrix.len() != self.target_dim {
            return Err(CliError::Malformed(format!(
                "matrix has {} rows, expected target_dim = {}",
                self.matrix.len(),
                self.target_dim
            )));
        }
        check_lengths("matrix row", self.source_dim, &self.matrix)?;
        let m = LatticeMatrix::from_rows(&self.matrix, self.source_dim)?;
        Ok(LatticeMap::new(self.source_dim, self.target_dim, m)?)
    }

    pub fn to_doc(&self) -> Doc {
        Doc::new()
            .field("source_dim", self.source_dim)
            .field("target_dim", self.target_dim)
            .field("matrix", self.matrix.clone())
    }
}
