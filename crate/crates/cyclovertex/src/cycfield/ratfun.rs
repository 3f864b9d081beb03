//! Rational functions of one symbol over Q(w_T): normalized fractions with
//! Laurent expansion at any point (or infinity), residues and partial
//! fractions.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::cycfield::poly::Poly;
use crate::cycfield::scalar::CycScalar;
pub use crate::cycfield::series::ExpansionPoint;
use crate::cycfield::series::LaurentSeries;
use crate::{EngineError, Result};

/// num/den with den monic and gcd(num, den) = 1. Equality is literal on the
/// normal form, which is canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        let g = num.gcd(&den)?;
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.divrem(&g)?.0, den.divrem(&g)?.0)
        } else {
            (num, den)
        };
        let lead_inv = den.leading().unwrap().inv()?;
        Ok(RatFun {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        })
    }

    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// c / (t - p)^k
    pub fn polar_term(c: CycScalar, p: &CycScalar, k: u32) -> Self {
        let lin = Poly::new(vec![p.neg(), CycScalar::one()]);
        RatFun { num: Poly::constant(c), den: lin.pow(k) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree().unwrap_or(0) == 0
    }

    pub fn as_constant(&self) -> Option<CycScalar> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatFun::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        RatFun::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<Self> {
        RatFun::one().div(self)
    }

    /// Substitute t -> a*t + b.
    pub fn subst_linear(&self, a: &CycScalar, b: &CycScalar) -> Self {
        RatFun::new(self.num.compose_linear(a, b), self.den.compose_linear(a, b))
            .expect("linear substitution keeps den nonzero")
    }

    pub fn eval(&self, x: &CycScalar) -> Result<CycScalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        Ok(self.num.eval(x).mul(&d.inv()?))
    }

    /// Order of the pole at p (0 if regular there).
    pub fn pole_order(&self, p: &CycScalar) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let lin = Poly::new(vec![p.neg(), CycScalar::one()]);
        let mut k = 0u32;
        let mut den = self.den.clone();
        loop {
            let (q, r) = den.divrem(&lin).expect("linear divisor");
            if r.is_zero() {
                k += 1;
                den = q;
            } else {
                return k;
            }
        }
    }

    /// deg num < deg den, i.e. a zero at infinity.
    pub fn vanishes_at_infinity(&self) -> bool {
        self.is_zero()
            || self.num.degree().unwrap() < self.den.degree().unwrap_or(0)
    }

    /// Order of vanishing at infinity (negative for a pole there).
    pub fn order_at_infinity(&self) -> Option<i64> {
        let nd = self.num.degree()? as i64;
        Some(self.den.degree().unwrap_or(0) as i64 - nd)
    }

    /// Formal Laurent expansion at a finite point or at infinity, with
    /// coefficients up to local order `k_max` inclusive. At infinity the
    /// local coordinate is 1/t, so order n holds the coefficient of t^{-n}.
    pub fn laurent_expand(&self, at: &ExpansionPoint, k_max: i64) -> LaurentSeries<CycScalar> {
        if self.is_zero() {
            return LaurentSeries::zero(at.clone(), k_max);
        }
        let (num, den) = match at {
            ExpansionPoint::Finite(p) => (
                self.num.compose_linear(&CycScalar::one(), p),
                self.den.compose_linear(&CycScalar::one(), p),
            ),
            ExpansionPoint::Infinity => {
                let d = self.num.degree().unwrap().max(self.den.degree().unwrap());
                (self.num.reversed(d), self.den.reversed(d))
            }
        };
        // num / den around s = 0: strip s^v from den, invert the unit part as
        // a power series, multiply.
        let v = den.valuation().expect("den nonzero") as i64;
        let unit: Vec<CycScalar> = den.coeffs()[v as usize..].to_vec();
        let nv = num.valuation().unwrap() as i64;
        let min_order = nv - v;
        let need = (k_max - min_order + 1).max(0) as usize;
        if need == 0 {
            return LaurentSeries::zero(at.clone(), k_max);
        }
        // Power-series inverse of the unit part to `need` terms.
        let u0_inv = unit[0].inv().expect("unit part has nonzero constant term");
        let mut inv = vec![CycScalar::zero(); need];
        inv[0] = u0_inv.clone();
        for n in 1..need {
            let mut acc = CycScalar::zero();
            for k in 1..=n.min(unit.len() - 1) {
                acc = acc.add(&unit[k].mul(&inv[n - k]));
            }
            inv[n] = acc.neg().mul(&u0_inv);
        }
        let numer: Vec<CycScalar> = num.coeffs()[nv as usize..].to_vec();
        let mut coeffs = vec![CycScalar::zero(); need];
        for (i, a) in numer.iter().enumerate() {
            if a.is_zero() || i >= need {
                continue;
            }
            for (j, b) in inv.iter().enumerate() {
                if i + j >= need {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        LaurentSeries::from_coeffs(at.clone(), min_order, coeffs, k_max)
    }

    /// Coefficient of (t-p)^{-1} at a finite point; at infinity, minus the
    /// coefficient of t^{-1}.
    pub fn residue(&self, at: &ExpansionPoint) -> CycScalar {
        match at {
            ExpansionPoint::Finite(_) => self
                .laurent_expand(at, -1)
                .coeff(-1)
                .unwrap_or_else(CycScalar::zero),
            ExpansionPoint::Infinity => self
                .laurent_expand(at, 1)
                .coeff(1)
                .unwrap_or_else(CycScalar::zero)
                .neg(),
        }
    }

    /// Split into polar parts at the given poles plus a polynomial part.
    /// The polar part at p is returned as coefficients c_1..c_m of
    /// (t-p)^{-1}..(t-p)^{-m}. Fails if den has a factor not accounted for by
    /// the pole set.
    pub fn partial_fractions(
        &self,
        poles: &[CycScalar],
    ) -> Result<(Vec<(CycScalar, Vec<CycScalar>)>, Poly)> {
        // Check the pole set covers the denominator.
        let mut rest = self.den.clone();
        for p in poles {
            let lin = Poly::new(vec![p.neg(), CycScalar::one()]);
            loop {
                let (q, r) = rest.divrem(&lin)?;
                if r.is_zero() {
                    rest = q;
                } else {
                    break;
                }
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            return Err(EngineError::PoleSetIncomplete(rest.to_string()));
        }
        let (poly_part, _) = self.num.divrem(&self.den)?;
        let mut parts = vec![];
        for p in poles {
            let m = self.pole_order(p);
            if m == 0 {
                continue;
            }
            let exp = self.laurent_expand(&ExpansionPoint::Finite(p.clone()), -1);
            let cs: Vec<CycScalar> = (1..=m as i64)
                .map(|j| exp.coeff(-j).unwrap_or_else(CycScalar::zero))
                .collect();
            parts.push((p.clone(), cs));
        }
        Ok((parts, poly_part))
    }

    /// Rebuild a rational function from partial-fraction data.
    pub fn from_partial_fractions(parts: &[(CycScalar, Vec<CycScalar>)], poly_part: &Poly) -> Self {
        let mut acc = RatFun::from_poly(poly_part.clone());
        for (p, cs) in parts {
            for (j, c) in cs.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&RatFun::polar_term(c.clone(), p, j as u32 + 1));
                }
            }
        }
        acc
    }
}

impl RatFun {
    pub fn display_with(&self, var: &str) -> String {
        if self.den == Poly::one() {
            self.num.display_with(var)
        } else {
            format!("({}) / ({})", self.num.display_with(var), self.den.display_with(var))
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("t"))
    }
}

impl Serialize for RatFun {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RatFun", 2)?;
        let num: Vec<String> = self.num.coeffs().iter().map(|c| c.to_string()).collect();
        let den: Vec<String> = self.den.coeffs().iter().map(|c| c.to_string()).collect();
        s.serialize_field("num", &num)?;
        s.serialize_field("den", &den)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::scalar::rat;

    fn t_minus(p: i64) -> Poly {
        Poly::new(vec![CycScalar::from_int(-p), CycScalar::one()])
    }

    fn int(c: i64) -> CycScalar {
        CycScalar::from_int(c)
    }

    #[test]
    fn expand_one_over_t_at_one() {
        // 1/t at p=1, K=2: 1 - (t-1) + (t-1)^2
        let f = RatFun::new(Poly::one(), Poly::x()).unwrap();
        let s = f.laurent_expand(&ExpansionPoint::Finite(int(1)), 2);
        assert_eq!(s.coeff(0).unwrap(), int(1));
        assert_eq!(s.coeff(1).unwrap(), int(-1));
        assert_eq!(s.coeff(2).unwrap(), int(1));
        assert_eq!(s.min_order, 0);
    }

    #[test]
    fn expand_pole_at_z_around_zero() {
        // 1/(t-2) at p=0, K=2: -1/2 - t/4 - t^2/8
        let f = RatFun::new(Poly::one(), t_minus(2)).unwrap();
        let s = f.laurent_expand(&ExpansionPoint::Finite(int(0)), 2);
        assert_eq!(s.coeff(0).unwrap(), CycScalar::from_rat(rat(-1, 2)));
        assert_eq!(s.coeff(1).unwrap(), CycScalar::from_rat(rat(-1, 4)));
        assert_eq!(s.coeff(2).unwrap(), CycScalar::from_rat(rat(-1, 8)));
    }

    #[test]
    fn expand_with_pole_part() {
        // 1/(t(t-1)) at p=0, K=0: -1/t - 1 (then O(t))
        let f = RatFun::new(Poly::one(), Poly::x().mul(&t_minus(1))).unwrap();
        let s = f.laurent_expand(&ExpansionPoint::Finite(int(0)), 0);
        assert_eq!(s.min_order, -1);
        assert_eq!(s.coeff(-1).unwrap(), int(-1));
        assert_eq!(s.coeff(0).unwrap(), int(-1));
    }

    #[test]
    fn truncation_consistency() {
        let f = RatFun::new(Poly::new(vec![int(3), int(1)]), Poly::x().mul(&t_minus(1)).mul(&t_minus(2))).unwrap();
        let p = ExpansionPoint::Finite(int(0));
        let long = f.laurent_expand(&p, 7);
        let short = f.laurent_expand(&p, 3);
        assert_eq!(long.truncate(3), short);
    }

    #[test]
    fn residues() {
        // 1/(t-2) at 2 -> 1
        let f = RatFun::new(Poly::one(), t_minus(2)).unwrap();
        assert_eq!(f.residue(&ExpansionPoint::Finite(int(2))), int(1));
        // 1/(t-1)^3 at 1 -> 0
        let g = RatFun::new(Poly::one(), t_minus(1).pow(3)).unwrap();
        assert_eq!(g.residue(&ExpansionPoint::Finite(int(1))), int(0));
        // residue theorem for 1/(t(t-1)) over {0, 1, inf}
        let h = RatFun::new(Poly::one(), Poly::x().mul(&t_minus(1))).unwrap();
        let total = h
            .residue(&ExpansionPoint::Finite(int(0)))
            .add(&h.residue(&ExpansionPoint::Finite(int(1))))
            .add(&h.residue(&ExpansionPoint::Infinity));
        assert!(total.is_zero());
    }

    #[test]
    fn partial_fraction_examples() {
        // 1/(t(t-1)) = -1/t + 1/(t-1)
        let f = RatFun::new(Poly::one(), Poly::x().mul(&t_minus(1))).unwrap();
        let (parts, poly) = f.partial_fractions(&[int(0), int(1)]).unwrap();
        assert!(poly.is_zero());
        assert_eq!(parts[0], (int(0), vec![int(-1)]));
        assert_eq!(parts[1], (int(1), vec![int(1)]));
        assert_eq!(RatFun::from_partial_fractions(&parts, &poly), f);

        // 1/(t-5) over {5}
        let g = RatFun::new(Poly::one(), t_minus(5)).unwrap();
        let (parts, _) = g.partial_fractions(&[int(5)]).unwrap();
        assert_eq!(parts, vec![(int(5), vec![int(1)])]);

        // 1/(t^2-1) = (1/2)/(t-1) + (-1/2)/(t+1)
        let h = RatFun::new(Poly::one(), t_minus(1).mul(&t_minus(-1))).unwrap();
        let (parts, poly) = h.partial_fractions(&[int(1), int(-1)]).unwrap();
        assert!(poly.is_zero());
        assert_eq!(parts[0], (int(1), vec![CycScalar::from_rat(rat(1, 2))]));
        assert_eq!(parts[1], (int(-1), vec![CycScalar::from_rat(rat(-1, 2))]));
        assert_eq!(RatFun::from_partial_fractions(&parts, &poly), h);
    }

    #[test]
    fn incomplete_pole_set_is_detected() {
        let f = RatFun::new(Poly::one(), t_minus(1).mul(&t_minus(2))).unwrap();
        assert!(matches!(
            f.partial_fractions(&[int(1)]),
            Err(EngineError::PoleSetIncomplete(_))
        ));
    }

    #[test]
    fn substitution_scales_poles() {
        // f(t) = 1/(t - 2); f(3t) = 1/(3t - 2) has pole at 2/3.
        let f = RatFun::new(Poly::one(), t_minus(2)).unwrap();
        let g = f.subst_linear(&int(3), &int(0));
        assert_eq!(g.pole_order(&CycScalar::from_rat(rat(2, 3))), 1);
        assert!(g.eval(&int(1)).unwrap() == CycScalar::one());
    }
}
