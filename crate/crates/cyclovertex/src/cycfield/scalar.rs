//! Elements of Q(w_T) in the power basis 1, w, ..., w^(phi(T)-1) modulo the
//! T-th cyclotomic polynomial, with exact rational coefficients.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Zero};
use once_cell::sync::Lazy;
use std::sync::Mutex;

use crate::{EngineError, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= BigInt::from(i);
    }
    Rat::from(acc)
}

/// Generalized binomial coefficient C(m, k) for m of either sign.
pub fn binomial(m: i64, k: u32) -> Rat {
    let mut num = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(m - i);
    }
    Rat::new(num, BigInt::one()) / factorial(k)
}

/// Falling factorial m (m-1) ... (m-j+1).
pub fn falling(m: i64, j: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j as i64 {
        acc *= BigInt::from(m - i);
    }
    acc
}

pub fn euler_phi(t: u32) -> u32 {
    let mut n = t;
    let mut result = t;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Monic coefficients (low degree first) of the T-th cyclotomic polynomial,
/// computed by the recursive quotient of x^T - 1 by the Phi_d for d | T, d < T.
pub fn cyclotomic_polynomial(t: u32) -> Arc<Vec<Rat>> {
    static CACHE: Lazy<Mutex<HashMap<u32, Arc<Vec<Rat>>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(hit) = CACHE.lock().unwrap().get(&t) {
        return hit.clone();
    }
    let phi = if t == 1 {
        vec![-Rat::one(), Rat::one()]
    } else {
        // x^T - 1
        let mut num = vec![Rat::zero(); t as usize + 1];
        num[0] = -Rat::one();
        num[t as usize] = Rat::one();
        let mut den = vec![Rat::one()];
        for d in 1..t {
            if t % d == 0 {
                den = poly_mul_rat(&den, &cyclotomic_polynomial(d));
            }
        }
        let (q, r) = poly_divrem_rat(&num, &den);
        debug_assert!(r.iter().all(|c| c.is_zero()));
        q
    };
    let arc = Arc::new(phi);
    CACHE.lock().unwrap().insert(t, arc.clone());
    arc
}

fn poly_mul_rat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_trim_rat(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_divrem_rat(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let den = poly_trim_rat(den.to_vec());
    assert!(!den.is_empty(), "division by the zero polynomial");
    let mut rem = poly_trim_rat(num.to_vec());
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = &rem[rem.len() - 1] / &lead;
        quot[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            let v = d * &c;
            rem[k + i] -= v;
        }
        rem = poly_trim_rat(rem);
    }
    (quot, rem)
}

/// An exact element of Q(w_T). Purely rational values normalize to order 1 so
/// that embeddings Q -> Q(w_T) compare equal across ambient fields.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycScalar {
    order: u32,
    /// Power-basis coefficients, trailing zeros trimmed, degree < phi(order).
    coeffs: Vec<Rat>,
}

impl Default for CycScalar {
    fn default() -> Self {
        CycScalar::zero()
    }
}

impl CycScalar {
    fn normalized(order: u32, coeffs: Vec<Rat>) -> Self {
        let coeffs = poly_trim_rat(coeffs);
        if coeffs.len() <= 1 {
            CycScalar { order: 1, coeffs }
        } else {
            CycScalar { order, coeffs }
        }
    }

    /// Reduce an arbitrary-degree coefficient vector modulo Phi_T.
    fn reduce(order: u32, coeffs: Vec<Rat>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let coeffs = poly_trim_rat(coeffs);
        if coeffs.len() <= deg {
            return Self::normalized(order, coeffs);
        }
        let (_, r) = poly_divrem_rat(&coeffs, &phi);
        Self::normalized(order, r)
    }

    pub fn zero() -> Self {
        CycScalar { order: 1, coeffs: vec![] }
    }

    pub fn one() -> Self {
        CycScalar { order: 1, coeffs: vec![Rat::one()] }
    }

    pub fn from_rat(q: Rat) -> Self {
        Self::normalized(1, vec![q])
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    /// The primitive T-th root of unity w_T.
    pub fn omega(t: u32) -> Self {
        match t {
            0 => panic!("group order must be positive"),
            1 => Self::one(),
            2 => Self::from_int(-1),
            _ => Self::reduce(t, vec![Rat::zero(), Rat::one()]),
        }
    }

    /// w_T^k for any integer k.
    pub fn omega_pow(t: u32, k: i64) -> Self {
        let k = k.rem_euclid(t as i64) as u32;
        let mut acc = Self::one();
        let w = Self::omega(t);
        for _ in 0..k {
            acc = acc.mul(&w);
        }
        acc
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        if self.order == 1 {
            self.coeffs.first()
        } else {
            None
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Lift both operands into a common field. Mixing two distinct
    /// non-rational orders is an engine bug.
    fn common_order(&self, other: &Self) -> u32 {
        match (self.order, other.order) {
            (1, b) => b,
            (a, 1) => a,
            (a, b) if a == b => a,
            (a, b) => panic!("mixed cyclotomic orders {a} and {b}"),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.common_order(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Self::normalized(order, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let order = self.common_order(other);
        Self::reduce(order, poly_mul_rat(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self::normalized(self.order, self.coeffs.iter().map(|c| c * q).collect())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// Phi_T over Q[x].
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rat(q.recip()));
        }
        let phi = cyclotomic_polynomial(self.order);
        // Invariants: r0 = s0 * a mod Phi, r1 = s1 * a mod Phi.
        let mut r0: Vec<Rat> = (*phi).clone();
        let mut r1 = self.coeffs.clone();
        let mut s0: Vec<Rat> = vec![];
        let mut s1 = vec![Rat::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divrem_rat(&r0, &r1);
            let qs1 = poly_mul_rat(&q, &s1);
            let mut s_next = s0.clone();
            s_next.resize(s_next.len().max(qs1.len()), Rat::zero());
            for (i, c) in qs1.iter().enumerate() {
                s_next[i] -= c;
            }
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = poly_trim_rat(s_next);
        }
        // r0 = gcd, a unit since Phi_T is irreducible over Q.
        debug_assert_eq!(r0.len(), 1);
        let unit_inv = r0[0].recip();
        let inv_coeffs: Vec<Rat> = s0.iter().map(|c| c * &unit_inv).collect();
        Ok(Self::reduce(self.order, inv_coeffs))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Parse "p/q" (a rational) or "[p/q, p/q, ...]" (power-basis coordinates
    /// in Q(w_T)).
    pub fn parse(t: u32, text: &str) -> Result<Self> {
        let s = text.trim();
        let parse_rat = |piece: &str| -> Result<Rat> {
            let piece = piece.trim();
            piece.parse::<Rat>().map_err(|_| EngineError::Parse {
                pos: 0,
                msg: format!("invalid rational '{piece}'"),
            })
        };
        if let Some(inner) = s.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let mut coeffs = vec![];
            if !inner.trim().is_empty() {
                for piece in inner.split(',') {
                    coeffs.push(parse_rat(piece)?);
                }
            }
            if coeffs.len() > euler_phi(t) as usize {
                return Err(EngineError::Parse {
                    pos: 0,
                    msg: format!("more than phi({t}) coordinates"),
                });
            }
            Ok(Self::reduce(t.max(2), coeffs))
        } else {
            Ok(Self::from_rat(parse_rat(s)?))
        }
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        write!(f, "[")?;
        let phi = euler_phi(self.order) as usize;
        for i in 0..phi.min(self.coeffs.len()) {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.coeffs[i])?;
        }
        write!(f, "]")
    }
}

/// True iff x/y is a power of w_T; used for the disjoint-orbit check.
pub fn same_gamma_orbit(t: u32, x: &CycScalar, y: &CycScalar) -> Result<bool> {
    let q = x.div(y)?;
    for k in 0..t as i64 {
        if q == CycScalar::omega_pow(t, k) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_1 = x - 1, Phi_2 = x + 1, Phi_3 = x^2 + x + 1, Phi_4 = x^2 + 1,
        // Phi_6 = x^2 - x + 1.
        let as_i64 = |t: u32| -> Vec<i64> {
            cyclotomic_polynomial(t)
                .iter()
                .map(|c| {
                    assert!(c.is_integer());
                    i64::try_from(c.to_integer()).unwrap()
                })
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn omega_cubed_is_one() {
        let w = CycScalar::omega(3);
        assert_eq!(w.mul(&w).mul(&w), CycScalar::one());
    }

    #[test]
    fn geometric_sum_vanishes() {
        for t in 2..=8 {
            let mut acc = CycScalar::zero();
            for k in 0..t {
                acc = acc.add(&CycScalar::omega_pow(t, k as i64));
            }
            assert!(acc.is_zero(), "sum of all {t}-th roots of unity");
        }
    }

    #[test]
    fn inverse_of_one_plus_omega() {
        // T = 3: (1 + w)^{-1} = -w, since (1 + w)(-w) = -w - w^2 = 1.
        let w = CycScalar::omega(3);
        let x = CycScalar::one().add(&w);
        assert_eq!(x.inv().unwrap(), w.neg());
        assert_eq!(x.mul(&x.inv().unwrap()), CycScalar::one());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(CycScalar::zero().inv(), Err(EngineError::DivisionByZero));
    }

    #[test]
    fn root_of_unity_difference_sum() {
        // sum over alpha != 1 of 1/(alpha - 1) = -(T-1)/2, used by Example
        // need0 in closed form.
        for t in 2..=6u32 {
            let mut acc = CycScalar::zero();
            for k in 1..t {
                let a = CycScalar::omega_pow(t, k as i64);
                acc = acc.add(&a.sub(&CycScalar::one()).inv().unwrap());
            }
            assert_eq!(acc, CycScalar::from_rat(rat(-((t as i64) - 1), 2)));
        }
    }

    #[test]
    fn rational_normalization_and_display() {
        let x = CycScalar::omega(4);
        let y = x.mul(&x); // w_4^2 = -1, rational again
        assert_eq!(y, CycScalar::from_int(-1));
        assert_eq!(y.order(), 1);
        assert_eq!(format!("{}", CycScalar::parse(3, "[1/2, -1/3]").unwrap()), "[1/2, -1/3]");
    }

    #[test]
    fn orbit_detection() {
        let t = 4;
        let z = CycScalar::from_int(2);
        let wz = CycScalar::omega(t).mul(&z);
        assert!(same_gamma_orbit(t, &z, &wz).unwrap());
        assert!(!same_gamma_orbit(t, &z, &CycScalar::from_int(3)).unwrap());
    }
}
