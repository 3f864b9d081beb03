//! Truncated Laurent series with generic coefficients (scalars, module states
//! or tensor states). Arithmetic never claims coefficients beyond the stated
//! truncation order.

use std::fmt;

use crate::cycfield::scalar::CycScalar;

/// Where a series was expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionPoint {
    Finite(CycScalar),
    Infinity,
}

impl fmt::Display for ExpansionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionPoint::Finite(p) => write!(f, "{p}"),
            ExpansionPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Coefficient ring of a Laurent series.
pub trait Coefficient: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn scale(&self, s: &CycScalar) -> Self;
}

impl Coefficient for CycScalar {
    fn zero() -> Self {
        CycScalar::zero()
    }
    fn is_zero(&self) -> bool {
        CycScalar::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn scale(&self, s: &CycScalar) -> Self {
        self.mul(s)
    }
}

/// sum over n in [min_order, truncation] of coeff[n - min_order] * s^n,
/// where s is the local coordinate at `anchor`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C> {
    pub anchor: ExpansionPoint,
    pub min_order: i64,
    pub coeffs: Vec<C>,
    /// Orders beyond this are unknown, not zero.
    pub truncation: i64,
}

impl<C: Coefficient> LaurentSeries<C> {
    pub fn zero(anchor: ExpansionPoint, truncation: i64) -> Self {
        LaurentSeries { anchor, min_order: truncation + 1, coeffs: vec![], truncation }
    }

    pub fn from_coeffs(anchor: ExpansionPoint, min_order: i64, coeffs: Vec<C>, truncation: i64) -> Self {
        let mut s = LaurentSeries { anchor, min_order, coeffs, truncation };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while self.coeffs.first().is_some_and(|c| c.is_zero()) {
            self.coeffs.remove(0);
            self.min_order += 1;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let max = self.min_order + self.coeffs.len() as i64 - 1;
        if max > self.truncation {
            self.coeffs.truncate((self.truncation - self.min_order + 1).max(0) as usize);
        }
        if self.coeffs.is_empty() {
            self.min_order = self.truncation + 1;
        }
    }

    /// Coefficient at order n; known-zero below min_order, None above the
    /// truncation.
    pub fn coeff(&self, n: i64) -> Option<C> {
        if n > self.truncation {
            return None;
        }
        let idx = n - self.min_order;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Some(C::zero())
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Orders with nonzero coefficients.
    pub fn support(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.min_order + i as i64)
            .collect()
    }

    pub fn truncate(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.truncation = out.truncation.min(k);
        out.normalize();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.anchor, other.anchor, "mixed expansion points");
        let truncation = self.truncation.min(other.truncation);
        let min_order = self.min_order.min(other.min_order).min(truncation + 1);
        let len = (truncation - min_order + 1).max(0) as usize;
        let mut coeffs = vec![C::zero(); len];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            let n = min_order + i as i64;
            if let Some(a) = self.coeff(n) {
                *slot = slot.add_ref(&a);
            }
            if let Some(b) = other.coeff(n) {
                *slot = slot.add_ref(&b);
            }
        }
        Self::from_coeffs(self.anchor.clone(), min_order, coeffs, truncation)
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        Self::from_coeffs(
            self.anchor.clone(),
            self.min_order,
            self.coeffs.iter().map(|c| c.scale(s)).collect(),
            self.truncation,
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&CycScalar::from_int(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Shift all orders by k (multiply by s^k).
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            anchor: self.anchor.clone(),
            min_order: self.min_order + k,
            coeffs: self.coeffs.clone(),
            truncation: self.truncation + k,
        }
    }
}

impl LaurentSeries<CycScalar> {
    /// Product of scalar series; the truncation of the result is the best
    /// order supported by the factors' truncations.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.anchor, other.anchor, "mixed expansion points");
        let truncation = (self.truncation + other.min_order).min(other.truncation + self.min_order);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.anchor.clone(), truncation);
        }
        let min_order = self.min_order + other.min_order;
        let len = (truncation - min_order + 1).max(0) as usize;
        let mut coeffs = vec![CycScalar::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let n = self.min_order + i as i64 + other.min_order + j as i64;
                if n > truncation {
                    break;
                }
                let idx = (n - min_order) as usize;
                coeffs[idx] = coeffs[idx].add(&a.mul(b));
            }
        }
        Self::from_coeffs(self.anchor.clone(), min_order, coeffs, truncation)
    }
}

impl fmt::Display for LaurentSeries<CycScalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let n = self.min_order + i as i64;
            write!(f, "({c})*s^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(s^{})", self.truncation + 1)
    }
}
