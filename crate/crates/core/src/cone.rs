//! Order and projective-metric primitives on the standard orthant `R^n_+`.
//!
//! Everything here works with exact zero tests: two cone vectors are
//! comparable (lie in the same part) iff they have the same support, and
//! the ratio `M(y/x)` is `+inf` as soon as `y` charges a coordinate that `x`
//! does not. No epsilon is ever used to decide support.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the nonnegative orthant together with its cached support.
#[derive(Clone, PartialEq)]
pub struct ConeVector {
    coords: Vec<f64>,
    support: Vec<bool>,
}

impl ConeVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
            if value < 0.0 {
                return Err(Error::NotInCone { index, value });
            }
        }
        // -0.0 compares equal to 0.0 and is normalized so it never leaks out.
        let coords: Vec<f64> = coords.into_iter().map(|v| if v == 0.0 { 0.0 } else { v }).collect();
        let support = coords.iter().map(|&v| v > 0.0).collect();
        Ok(Self { coords, support })
    }

    /// Nonzero cone vector, as required by the ratio functions.
    pub fn nonzero(coords: Vec<f64>) -> Result<Self> {
        let v = Self::new(coords)?;
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(v)
    }

    /// Interior point (every coordinate strictly positive).
    pub fn interior(coords: Vec<f64>) -> Result<Self> {
        let v = Self::new(coords)?;
        v.require_interior()?;
        Ok(v)
    }

    pub fn zeros(n: usize) -> Self {
        Self { coords: vec![0.0; n], support: vec![false; n] }
    }

    pub fn ones(n: usize) -> Self {
        Self { coords: vec![1.0; n], support: vec![true; n] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.iter().all(|&s| !s)
    }

    pub fn is_interior(&self) -> bool {
        self.support.iter().all(|&s| s)
    }

    pub fn require_interior(&self) -> Result<()> {
        match self.support.iter().position(|&s| !s) {
            Some(index) => Err(Error::NotInterior { index }),
            None => Ok(()),
        }
    }

    /// Two vectors are comparable (same part of the orthant) iff their supports agree.
    pub fn comparable(&self, other: &ConeVector) -> bool {
        self.support == other.support
    }

    pub fn scaled(&self, t: f64) -> Result<ConeVector> {
        ConeVector::new(self.coords.iter().map(|&v| v * t).collect())
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.coords)
    }

    /// Componentwise order `self <= other`.
    pub fn le(&self, other: &ConeVector) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }
}

impl fmt::Debug for ConeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ConeVector").field(&self.coords).finish()
    }
}

impl Serialize for ConeVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConeVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        ConeVector::new(coords).map_err(serde::de::Error::custom)
    }
}

/// A value in `[0, +inf]`. `+inf` is stored as `f64::INFINITY`, never as a
/// large sentinel.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ExtendedRatio(f64);

impl ExtendedRatio {
    pub const INFINITE: ExtendedRatio = ExtendedRatio(f64::INFINITY);
    pub const ZERO: ExtendedRatio = ExtendedRatio(0.0);

    pub fn finite(value: f64) -> Self {
        debug_assert!(value >= 0.0 && value.is_finite());
        ExtendedRatio(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/x` with `1/+inf = 0` and `1/0 = +inf`.
    pub fn recip(self) -> Self {
        if self.0 == 0.0 {
            Self::INFINITE
        } else if self.0.is_infinite() {
            Self::ZERO
        } else {
            ExtendedRatio(1.0 / self.0)
        }
    }
}

impl fmt::Display for ExtendedRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "+inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn check_dims(x: &ConeVector, y: &ConeVector) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    Ok(())
}

/// `M(y/x) = inf { b >= 0 : y <= b x }`.
pub fn upper_ratio(x: &ConeVector, y: &ConeVector) -> Result<ExtendedRatio> {
    check_dims(x, y)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut best = 0.0f64;
    for i in 0..x.dim() {
        let (xi, yi) = (x.coords[i], y.coords[i]);
        if xi > 0.0 {
            best = best.max(yi / xi);
        } else if yi > 0.0 {
            return Ok(ExtendedRatio::INFINITE);
        }
    }
    Ok(ExtendedRatio::finite(best))
}

/// `m(y/x) = sup { a >= 0 : a x <= y }`.
pub fn lower_ratio(x: &ConeVector, y: &ConeVector) -> Result<ExtendedRatio> {
    check_dims(x, y)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let best = x
        .coords
        .iter()
        .zip(&y.coords)
        .filter(|(&xi, _)| xi > 0.0)
        .map(|(&xi, &yi)| yi / xi)
        .fold(f64::INFINITY, f64::min);
    Ok(ExtendedRatio::finite(best))
}

/// Hilbert's projective metric `log M(y/x) - log m(y/x)`; `+inf` for
/// incomparable vectors and `0` for `(0, 0)`.
pub fn hilbert_dist(x: &ConeVector, y: &ConeVector) -> Result<f64> {
    check_dims(x, y)?;
    match ratio_pair(x, y) {
        Some((big, small)) => Ok((big / small).ln().max(0.0)),
        None if x.is_zero() && y.is_zero() => Ok(0.0),
        None => Ok(f64::INFINITY),
    }
}

/// Thompson's metric `max(log M(y/x), -log m(y/x))`.
pub fn thompson_dist(x: &ConeVector, y: &ConeVector) -> Result<f64> {
    check_dims(x, y)?;
    match ratio_pair(x, y) {
        Some((big, small)) => Ok(big.ln().max(-small.ln()).max(0.0)),
        None if x.is_zero() && y.is_zero() => Ok(0.0),
        None => Ok(f64::INFINITY),
    }
}

/// `(M(y/x), m(y/x))` for nonzero comparable vectors, otherwise `None`.
fn ratio_pair(x: &ConeVector, y: &ConeVector) -> Option<(f64, f64)> {
    if x.is_zero() || y.is_zero() || !x.comparable(y) {
        return None;
    }
    Some(ratio_pair_slices(&x.coords, &y.coords))
}

/// Max and min of `y_i / x_i` over the support of `x`. Callers guarantee
/// that `x` and `y` have equal, nonempty support.
pub(crate) fn ratio_pair_slices(x: &[f64], y: &[f64]) -> (f64, f64) {
    let mut big = 0.0f64;
    let mut small = f64::INFINITY;
    for (&xi, &yi) in x.iter().zip(y) {
        if xi > 0.0 {
            let r = yi / xi;
            big = big.max(r);
            small = small.min(r);
        }
    }
    (big, small)
}

/// Hilbert distance between two interior points given as raw slices.
pub(crate) fn hilbert_dist_interior(x: &[f64], y: &[f64]) -> f64 {
    let (big, small) = ratio_pair_slices(x, y);
    (big / small).ln().max(0.0)
}

/// Order-unit norm `inf { a > 0 : -a u <= x <= a u } = max_i |x_i| / u_i`.
pub fn u_norm(u: &ConeVector, x: &[f64]) -> Result<f64> {
    u.require_interior()?;
    if u.dim() != x.len() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: x.len() });
    }
    Ok(u_norm_unchecked(u.coords(), x))
}

pub(crate) fn u_norm_unchecked(u: &[f64], x: &[f64]) -> f64 {
    x.iter().zip(u).map(|(&xi, &ui)| xi.abs() / ui).fold(0.0, f64::max)
}

pub fn sup_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Normalizing functional `q` defining the slice `{x : q(x) = 1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gauge {
    /// `q = ||.||_u` with the slice's unit `u`.
    Unorm,
    /// `q(x) = <psi, x>` for nonnegative weights `psi`.
    Functional { weights: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceConfig {
    gauge: Gauge,
    unit: ConeVector,
}

impl SliceConfig {
    pub fn new(gauge: Gauge, unit: ConeVector) -> Result<Self> {
        unit.require_interior()?;
        if let Gauge::Functional { weights } = &gauge {
            if weights.len() != unit.dim() {
                return Err(Error::DimensionMismatch { expected: unit.dim(), found: weights.len() });
            }
            if let Some(index) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
                return Err(Error::NotInCone { index, value: weights[index] });
            }
            if weights.iter().all(|&w| w == 0.0) {
                return Err(Error::DegenerateGauge);
            }
        }
        Ok(Self { gauge, unit })
    }

    /// Sup-norm gauge (`u = 1`).
    pub fn sup_norm(n: usize) -> Self {
        Self { gauge: Gauge::Unorm, unit: ConeVector::ones(n) }
    }

    pub fn gauge(&self) -> &Gauge {
        &self.gauge
    }

    pub fn unit(&self) -> &ConeVector {
        &self.unit
    }

    pub fn dim(&self) -> usize {
        self.unit.dim()
    }

    /// Evaluates `q` on a cone point.
    pub fn q(&self, x: &[f64]) -> f64 {
        match &self.gauge {
            Gauge::Unorm => u_norm_unchecked(self.unit.coords(), x),
            Gauge::Functional { weights } => weights.iter().zip(x).map(|(w, v)| w * v).sum(),
        }
    }

    /// Rescales `x` so that `q(x) = 1`.
    pub fn project(&self, x: &ConeVector) -> Result<ConeVector> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let q = self.q(x.coords());
        if !(q > 0.0) {
            return Err(Error::DegenerateGauge);
        }
        x.scaled(1.0 / q)
    }
}

pub fn project_to_slice(cfg: &SliceConfig, x: &ConeVector) -> Result<ConeVector> {
    cfg.project(x)
}

/// Componentwise maximum, the least upper bound in the orthant order.
pub fn lattice_join(x: &ConeVector, y: &ConeVector) -> Result<ConeVector> {
    check_dims(x, y)?;
    ConeVector::new(x.coords.iter().zip(&y.coords).map(|(a, b)| a.max(*b)).collect())
}

/// Componentwise minimum.
pub fn lattice_meet(x: &ConeVector, y: &ConeVector) -> Result<ConeVector> {
    check_dims(x, y)?;
    ConeVector::new(x.coords.iter().zip(&y.coords).map(|(a, b)| a.min(*b)).collect())
}

/// Lattice decomposition `x = x+ - x-` with `x+, x-` in the cone.
pub fn positive_negative_parts(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pos = x.iter().map(|&v| v.max(0.0)).collect();
    let neg = x.iter().map(|&v| (-v).max(0.0)).collect();
    (pos, neg)
}
