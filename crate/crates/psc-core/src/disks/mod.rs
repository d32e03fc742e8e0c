//! The little n-disks operad.

mod svg;
mod text;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm;
use crate::tol;

pub use svg::render_svg;
pub use text::{parse_config_table, print_config_table, ConfigTable, ParseError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        Disk { center, radius }
    }
}

/// Ordered disjoint round disks inside the unit disk of dimension `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskConfig {
    pub dim: usize,
    pub disks: Vec<Disk>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    Dimension {
        index: usize,
        found: usize,
    },
    Radius {
        index: usize,
        radius: f64,
    },
    Containment {
        index: usize,
        reach: f64,
    },
    Overlap {
        first: usize,
        second: usize,
        gap: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiskError {
    #[error("expected {expected} inner configurations, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("configuration {index} is invalid: {violations:?}")]
    InvalidInput {
        index: usize,
        violations: Vec<Violation>,
    },
    #[error("permutation of size {found} does not match arity {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("{0:?} is not a permutation")]
    NotAPermutation(Vec<usize>),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl DiskConfig {
    pub fn new(dim: usize, disks: Vec<Disk>) -> Self {
        DiskConfig { dim, disks }
    }

    pub fn empty(dim: usize) -> Self {
        DiskConfig::new(dim, Vec::new())
    }

    /// The unit disk as its own single little disk.
    pub fn identity(dim: usize) -> Self {
        DiskConfig::new(dim, vec![Disk::new(vec![0.0; dim], 1.0)])
    }

    pub fn arity(&self) -> usize {
        self.disks.len()
    }

    pub fn is_identity(&self) -> bool {
        self.disks.len() == 1
            && self.disks[0].radius == 1.0
            && self.disks[0].center.iter().all(|&x| x == 0.0)
    }

    /// All violations of containment and disjointness, compared exactly.
    /// Touching disks are allowed.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, d) in self.disks.iter().enumerate() {
            if d.center.len() != self.dim {
                out.push(Violation::Dimension {
                    index: i,
                    found: d.center.len(),
                });
                continue;
            }
            if !(d.radius > 0.0 && d.radius <= 1.0) {
                out.push(Violation::Radius {
                    index: i,
                    radius: d.radius,
                });
                continue;
            }
            let reach = norm(&d.center) + d.radius;
            if !(reach <= 1.0) {
                out.push(Violation::Containment { index: i, reach });
            }
        }
        for i in 0..self.disks.len() {
            for k in i + 1..self.disks.len() {
                let (a, b) = (&self.disks[i], &self.disks[k]);
                if a.center.len() != self.dim || b.center.len() != self.dim {
                    continue;
                }
                let gap = dist(&a.center, &b.center) - (a.radius + b.radius);
                if !(dist(&a.center, &b.center) >= a.radius + b.radius) {
                    out.push(Violation::Overlap {
                        first: i,
                        second: k,
                        gap,
                    });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// Every radius is at most 1/2.
    pub fn all_small(&self) -> bool {
        self.disks.iter().all(|d| d.radius <= tol::SMALL_RADIUS)
    }

    /// Some radius is at least 3/4.
    pub fn has_big(&self) -> bool {
        self.big_disk().is_some()
    }

    /// Index of the first disk of radius at least 3/4.
    pub fn big_disk(&self) -> Option<usize> {
        self.disks.iter().position(|d| d.radius >= tol::BIG_RADIUS)
    }

    /// Image of a point of the unit disk under the affine map onto disk `i`.
    pub fn embed_point(&self, i: usize, p: &[f64]) -> Vec<f64> {
        let d = &self.disks[i];
        d.center
            .iter()
            .zip(p)
            .map(|(c, x)| c + d.radius * x)
            .collect()
    }
}

/// Operad composition: disk `m` of `inner[i]` is shrunk and moved into
/// disk `i` of `outer`. Output blocks follow the order of `outer`.
pub fn gamma(outer: &DiskConfig, inner: &[DiskConfig]) -> Result<DiskConfig, DiskError> {
    if inner.len() != outer.arity() {
        return Err(DiskError::ArityMismatch {
            expected: outer.arity(),
            found: inner.len(),
        });
    }
    outer
        .validate()
        .map_err(|violations| DiskError::InvalidInput {
            index: 0,
            violations,
        })?;
    for (i, d) in inner.iter().enumerate() {
        if d.dim != outer.dim {
            return Err(DiskError::DimensionMismatch(outer.dim, d.dim));
        }
        d.validate().map_err(|violations| DiskError::InvalidInput {
            index: i + 1,
            violations,
        })?;
    }
    Ok(gamma_unchecked(outer, inner))
}

pub(crate) fn gamma_unchecked(outer: &DiskConfig, inner: &[DiskConfig]) -> DiskConfig {
    let mut disks = Vec::new();
    for (i, d) in inner.iter().enumerate() {
        let host = &outer.disks[i];
        for little in &d.disks {
            disks.push(Disk::new(
                outer.embed_point(i, &little.center),
                host.radius * little.radius,
            ));
        }
    }
    DiskConfig::new(outer.dim, disks)
}

/// Partial composition `x ∘_i y`: `y` goes into disk `i`, every other disk
/// of `x` is composed with the identity.
pub fn partial_compose(x: &DiskConfig, i: usize, y: &DiskConfig) -> DiskConfig {
    let inner: Vec<DiskConfig> = (0..x.arity())
        .map(|k| {
            if k == i {
                y.clone()
            } else {
                DiskConfig::identity(x.dim)
            }
        })
        .collect();
    gamma_unchecked(x, &inner)
}

/// Relabelling: disk `i` of `c` ends up at position `sigma[i]`.
pub fn act_sigma(c: &DiskConfig, sigma: &[usize]) -> Result<DiskConfig, DiskError> {
    if sigma.len() != c.arity() {
        return Err(DiskError::SizeMismatch {
            expected: c.arity(),
            found: sigma.len(),
        });
    }
    if !perm::is_permutation(sigma) {
        return Err(DiskError::NotAPermutation(sigma.to_vec()));
    }
    Ok(DiskConfig::new(c.dim, perm::permute(&c.disks, sigma)))
}

pub fn identity_config(dim: usize) -> DiskConfig {
    DiskConfig::identity(dim)
}
