use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{self, Rat};
use crate::error::{check_dim, Error, Result};

/// A point or vector of `Q^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RVec(Vec<Rat>);

impl RVec {
    pub fn new(coords: Vec<Rat>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("vectors need dimension >= 1".into()));
        }
        Ok(RVec(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        RVec(vec![Rat::zero(); dim.max(1)])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = rat::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        assert!(!coords.is_empty(), "vectors need dimension >= 1");
        RVec(coords.iter().map(|&c| rat::int(c)).collect())
    }

    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| rat::from_f64(c)).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Rat::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn checked_dot(&self, other: &RVec) -> Result<Rat> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.dot(other))
    }

    pub fn norm_sq(&self) -> Rat {
        self.dot(self)
    }

    pub fn scale(&self, s: &Rat) -> RVec {
        RVec(self.0.iter().map(|c| c * s).collect())
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: &Rat, other: &RVec) -> RVec {
        RVec(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rat::to_f64).collect()
    }

    pub fn centroid(points: &[RVec]) -> Option<RVec> {
        let first = points.first()?;
        let mut acc = RVec::zeros(first.dim());
        for p in points {
            acc = &acc + p;
        }
        Some(acc.scale(&Rat::new(1.into(), points.len().into())))
    }
}

impl Index<usize> for RVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl IndexMut<usize> for RVec {
    fn index_mut(&mut self, i: usize) -> &mut Rat {
        &mut self.0[i]
    }
}

impl Add for &RVec {
    type Output = RVec;
    fn add(self, rhs: &RVec) -> RVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        RVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RVec {
    type Output = RVec;
    fn sub(self, rhs: &RVec) -> RVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        RVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RVec {
    type Output = RVec;
    fn neg(self) -> RVec {
        RVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for RVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for RVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.0.iter().map(rat::format).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coords = strs
            .iter()
            .map(|s| rat::parse(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RVec::new(coords).map_err(D::Error::custom)
    }
}
