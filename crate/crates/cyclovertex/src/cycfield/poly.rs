//! Dense univariate polynomials over Q(w_T), low degree first.

use std::fmt;

use crate::cycfield::scalar::CycScalar;
use crate::{EngineError, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    /// Coefficients low degree first, trailing zeros trimmed.
    coeffs: Vec<CycScalar>,
}

impl Poly {
    pub fn new(coeffs: Vec<CycScalar>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(CycScalar::one())
    }

    pub fn constant(c: CycScalar) -> Self {
        Poly::new(vec![c])
    }

    /// c * x^k
    pub fn monomial(c: CycScalar, k: usize) -> Self {
        let mut v = vec![CycScalar::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn x() -> Self {
        Poly::monomial(CycScalar::one(), 1)
    }

    pub fn coeffs(&self) -> &[CycScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CycScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(CycScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&CycScalar> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![CycScalar::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i].add(c);
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = out[i].add(c);
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![CycScalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divrem(&self, den: &Self) -> Result<(Poly, Poly)> {
        if den.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        let dd = den.degree().unwrap();
        let lead_inv = den.leading().unwrap().inv()?;
        let mut rem = self.clone();
        let mut quot = vec![CycScalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap().mul(&lead_inv);
            let k = rd - dd;
            quot[k] = c.clone();
            let mut next = rem.coeffs.clone();
            for (i, d) in den.coeffs.iter().enumerate() {
                next[k + i] = next[k + i].sub(&d.mul(&c));
            }
            rem = Poly::new(next);
        }
        Ok((Poly::new(quot), rem))
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Result<Poly> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        let lead_inv = a.leading().unwrap().inv()?;
        Ok(a.scale(&lead_inv))
    }

    pub fn eval(&self, x: &CycScalar) -> CycScalar {
        let mut acc = CycScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// p(a*x + b), used for recentring expansions and for u -> alpha*u.
    pub fn compose_linear(&self, a: &CycScalar, b: &CycScalar) -> Self {
        let mut acc = Poly::zero();
        let lin = Poly::new(vec![b.clone(), a.clone()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&crate::cycfield::scalar::rat_int(i as i64 + 1)))
                .collect(),
        )
    }

    /// Coefficient polynomial reversed to full length `deg`, i.e.
    /// x^deg * p(1/x). Requires deg >= degree(p).
    pub fn reversed(&self, deg: usize) -> Self {
        let mut v = vec![CycScalar::zero(); deg + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[deg - i] = c.clone();
        }
        Poly::new(v)
    }
}

impl Poly {
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                out.push_str(" + ");
            }
            first = false;
            if i == 0 {
                out.push_str(&c.to_string());
            } else if c.is_one() {
                out.push_str(&format!("{var}^{i}"));
            } else {
                out.push_str(&format!("{c}*{var}^{i}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::scalar::rat_int;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| CycScalar::from_int(c)).collect())
    }

    #[test]
    fn divrem_roundtrip() {
        let a = p(&[1, 0, -3, 2, 5]);
        let b = p(&[2, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_common_factor() {
        let common = p(&[-1, 1]); // x - 1
        let a = common.mul(&p(&[3, 1]));
        let b = common.mul(&p(&[0, 0, 7]));
        assert_eq!(a.gcd(&b).unwrap(), common);
    }

    #[test]
    fn compose_linear_shifts() {
        // p(x) = x^2 at x + 1 gives x^2 + 2x + 1
        let sq = p(&[0, 0, 1]);
        let shifted = sq.compose_linear(&CycScalar::one(), &CycScalar::one());
        assert_eq!(shifted, p(&[1, 2, 1]));
        assert_eq!(sq.derivative(), p(&[0, 2]));
        assert_eq!(sq.eval(&CycScalar::from_int(5)), CycScalar::from_rat(rat_int(25)));
    }
}
