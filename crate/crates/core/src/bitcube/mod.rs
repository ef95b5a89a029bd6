//! Dense functions on the boolean cube {0,1}^n and their Fourier spectra.
//!
//! Normalization: `ĥ(v) = 2^{-n} Σ_x h(x)(−1)^{x·v}` with inverse
//! `h(x) = Σ_v ĥ(v)(−1)^{x·v}`. For an indicator of a nonempty set `A` the
//! tilde spectrum is `h̃(v) = (2^n/|A|)·ĥ(v) = E_{x∈A}[(−1)^{x·v}]`.
//!
//! Coordinate `i` (0-based) of a point is bit `i` of its integer index.

mod kkl;
mod levels;
mod transform;

pub use kkl::{kkl_level_check, kkl_profile, KklProfile, KklReport};
pub use levels::{
    check_bounded, level_l1, level_l2sq, ln_bound, odd_weight_l1, weight_l1, weight_l2sq, weight_profile,
    BoundednessReport, LevelCheck,
};
pub use transform::{
    convolve_spectra, fwht_in_place, tilde_normalize, tilde_spectrum, wht_forward, wht_forward_capped, wht_inverse,
};

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

/// Largest dimension accepted by the dense transforms unless overridden.
pub const DEFAULT_DENSE_CAP: u32 = 22;

/// Hard ceiling on table dimensions (2^30 entries).
const TABLE_LIMIT: u32 = 30;

/// A point of {0,1}^n, n ≤ 64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BitVector {
    n: u32,
    value: u64,
}

impl BitVector {
    pub fn new(n: u32, value: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::Capacity { n, cap: 64 });
        }
        if n < 64 && value >> n != 0 {
            return Err(Error::Domain(format!("index {value} outside {{0,1}}^{n}")));
        }
        Ok(Self { n, value })
    }

    pub fn zero(n: u32) -> Self {
        Self { n, value: 0 }
    }

    /// The point whose set coordinates are `ones`.
    pub fn from_ones(n: u32, ones: &[u32]) -> Result<Self> {
        let mut value = 0u64;
        for &i in ones {
            if i >= n {
                return Err(Error::Domain(format!("coordinate {i} outside [0, {n})")));
            }
            value |= 1 << i;
        }
        Self::new(n, value)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn weight(&self) -> u32 {
        self.value.count_ones()
    }

    pub fn get(&self, i: u32) -> bool {
        i < self.n && (self.value >> i) & 1 == 1
    }

    /// Parity of the inner product `x·v`.
    pub fn dot(&self, other: &BitVector) -> bool {
        (self.value & other.value).count_ones() & 1 == 1
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        BitVector { n: self.n.max(other.n), value: self.value ^ other.value }
    }

    pub fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.n).filter(move |&i| self.get(i))
    }
}

impl fmt::Display for BitVector {
    /// Coordinates left to right, coordinate 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A real-valued table on {0,1}^n.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeFunction {
    n: u32,
    values: Vec<f64>,
}

impl CubeFunction {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self> {
        if n > TABLE_LIMIT {
            return Err(Error::Capacity { n, cap: TABLE_LIMIT });
        }
        if values.len() != 1usize << n {
            return Err(Error::Length { n, len: values.len() });
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: u32, f: impl FnMut(u64) -> f64) -> Result<Self> {
        if n > TABLE_LIMIT {
            return Err(Error::Capacity { n, cap: TABLE_LIMIT });
        }
        Self::new(n, (0..1u64 << n).map(f).collect())
    }

    /// Indicator of the set of points with the given indices.
    pub fn indicator(n: u32, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n > TABLE_LIMIT {
            return Err(Error::Capacity { n, cap: TABLE_LIMIT });
        }
        let mut values = vec![0.0; 1usize << n];
        for x in members {
            let slot = values
                .get_mut(x as usize)
                .ok_or_else(|| Error::Domain(format!("index {x} outside {{0,1}}^{n}")))?;
            *slot = 1.0;
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: u64) -> f64 {
        self.values[x as usize]
    }

    pub fn is_indicator(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// Number of points with value 1 (meaningful for indicators).
    pub fn support_size(&self) -> u64 {
        self.values.iter().filter(|&&v| v == 1.0).count() as u64
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.values.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(x, _)| x as u64)
    }

    pub fn pointwise_product(&self, other: &CubeFunction) -> Result<CubeFunction> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(CubeFunction { n: self.n, values })
    }
}

/// Normalization tag of a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Normalization {
    Hat,
    Tilde { set_size: u64 },
}

/// Fourier coefficients indexed by `v ∈ {0,1}^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    n: u32,
    coeffs: Vec<f64>,
    normalization: Normalization,
}

impl Spectrum {
    pub fn new(n: u32, coeffs: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if n > TABLE_LIMIT {
            return Err(Error::Capacity { n, cap: TABLE_LIMIT });
        }
        if coeffs.len() != 1usize << n {
            return Err(Error::Length { n, len: coeffs.len() });
        }
        Ok(Self { n, coeffs, normalization })
    }

    /// Spectrum with a single unit coefficient at `v`.
    pub fn delta(n: u32, v: u64) -> Result<Self> {
        let mut coeffs = vec![0.0; 1usize << n.min(TABLE_LIMIT)];
        *coeffs
            .get_mut(v as usize)
            .ok_or_else(|| Error::Domain(format!("index {v} outside {{0,1}}^{n}")))? = 1.0;
        Self::new(n, coeffs, Normalization::Hat)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get(&self, v: u64) -> f64 {
        self.coeffs[v as usize]
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn is_tilde(&self) -> bool {
        matches!(self.normalization, Normalization::Tilde { .. })
    }

    pub fn set_size(&self) -> Option<u64> {
        match self.normalization {
            Normalization::Tilde { set_size } => Some(set_size),
            Normalization::Hat => None,
        }
    }

    /// Total squared mass `Σ_v coeff(v)²`.
    pub fn l2sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Indices whose coefficient exceeds `tol` in magnitude.
    pub fn support(&self, tol: f64) -> Vec<u64> {
        self.coeffs.iter().enumerate().filter(|(_, c)| c.abs() > tol).map(|(v, _)| v as u64).collect()
    }
}
