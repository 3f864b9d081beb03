//! The mode Lie algebra L(L) spanned by a(n) modulo (Da)(n) = -n a(n-1),
//! its bracket and polar decomposition, and the Gamma-invariant subalgebra
//! spanned by the projected modes a^G(n).

use std::collections::BTreeMap;

use crate::cycfield::scalar::{binomial, falling, CycScalar, Rat};
use crate::vla::{VlaElem, VlaPresentation};

/// Element of L(L) in normal form: generator modes only (all D-powers
/// rewritten away on construction) plus a coefficient of c(-1). c(n) vanishes
/// for n != -1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct LoopElem {
    /// (generator, mode) -> coefficient.
    terms: BTreeMap<(usize, i64), CycScalar>,
    /// Coefficient of c(-1).
    pub central: CycScalar,
}

impl LoopElem {
    pub fn zero() -> Self {
        LoopElem::default()
    }

    pub fn mode(g: usize, n: i64) -> Self {
        let mut e = LoopElem::zero();
        e.insert(g, n, CycScalar::one());
        e
    }

    pub fn central_mode(c: CycScalar) -> Self {
        LoopElem { terms: BTreeMap::new(), central: c }
    }

    pub fn insert(&mut self, g: usize, n: i64, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((g, n)).or_insert_with(CycScalar::zero);
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.terms.remove(&(g, n));
        }
    }

    /// The class of x (x) t^n: (D^j g)(n) normalizes to
    /// (-1)^j n(n-1)...(n-j+1) g(n-j), and the central part survives only at
    /// mode -1.
    pub fn from_vla_at_mode(x: &VlaElem, n: i64) -> Self {
        let mut out = LoopElem::zero();
        for (&(g, j), c) in x.terms() {
            let f = falling(n, j);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let coef = c.scale(&(Rat::from(f) * crate::cycfield::scalar::rat_int(sign)));
            out.insert(g, n - j as i64, coef);
        }
        if n == -1 {
            out.central = out.central.add(&x.central);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, i64), &CycScalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(g, n), c) in &other.terms {
            out.insert(g, n, c.clone());
        }
        out.central = out.central.add(&other.central);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        if s.is_zero() {
            return LoopElem::zero();
        }
        LoopElem {
            terms: self.terms.iter().map(|(k, c)| (*k, c.mul(s))).collect(),
            central: self.central.mul(s),
        }
    }

    /// [a(m), b(n)] = sum_k C(m,k) (a_(k) b)(m+n-k), extended bilinearly.
    /// Central modes are central.
    pub fn bracket(alg: &VlaPresentation, x: &Self, y: &Self) -> Self {
        let mut out = LoopElem::zero();
        for (&(a, m), ca) in &x.terms {
            for (&(b, n), cb) in &y.terms {
                let c = ca.mul(cb);
                for k in 0..=alg.max_product_order() {
                    let prod = alg.table(a, b, k);
                    if prod.is_zero() {
                        continue;
                    }
                    let lifted = LoopElem::from_vla_at_mode(&prod, m + n - k as i64);
                    out = out.add(&lifted.scale(&c.scale(&binomial(m, k))));
                }
            }
        }
        out
    }

    /// Split into (modes <= -1) and (modes >= 0 together with c(-1)).
    pub fn polar_split(&self) -> (Self, Self) {
        let mut minus = LoopElem::zero();
        let mut plus = LoopElem::central_mode(self.central.clone());
        for (&(g, n), c) in &self.terms {
            if n <= -1 {
                minus.insert(g, n, c.clone());
            } else {
                plus.insert(g, n, c.clone());
            }
        }
        (minus, plus)
    }

    /// Z-grading deg a(n) = deg a - n - 1; None for zero, error if mixed.
    pub fn degree(&self, alg: &VlaPresentation) -> crate::Result<Option<i64>> {
        let mut deg: Option<i64> = None;
        let mut merge = |d: i64| -> crate::Result<()> {
            match deg {
                None => {
                    deg = Some(d);
                    Ok(())
                }
                Some(e) if e == d => Ok(()),
                _ => Err(crate::EngineError::NonHomogeneous),
            }
        };
        for (&(g, n), _) in &self.terms {
            merge(alg.gen_degree(g) as i64 - n - 1)?;
        }
        if !self.central.is_zero() {
            merge(0)?;
        }
        Ok(deg)
    }

    pub fn display(&self, alg: &VlaPresentation, square: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut pieces = vec![];
        for (&(g, n), c) in &self.terms {
            let name = &alg.generators[g].name;
            let mode = if square {
                format!("{name}[{}]", n - alg.gen_degree(g) as i64 + 1)
            } else {
                format!("{name}({n})")
            };
            if c.is_one() {
                pieces.push(mode);
            } else {
                pieces.push(format!("{c}*{mode}"));
            }
        }
        if !self.central.is_zero() {
            if self.central.is_one() {
                pieces.push(format!("{}(-1)", alg.central_name));
            } else {
                pieces.push(format!("{}*{}(-1)", self.central, alg.central_name));
            }
        }
        pieces.join(" + ")
    }
}

/// True iff the projected mode a^G(n) = sum_alpha alpha^{-n-1} (R_alpha a)(n)
/// survives, i.e. deg a + s_a = n + 1 (mod T).
pub fn survives(alg: &VlaPresentation, g: usize, n: i64) -> bool {
    let t = alg.order as i64;
    let d = alg.gen_degree(g) as i64 + alg.sigma_exponent(g) as i64;
    (d - n - 1).rem_euclid(t) == 0
}

/// gamma_project: a^G(n) in the surviving normal form T a(n), or zero.
pub fn gamma_project(alg: &VlaPresentation, g: usize, n: i64) -> LoopElem {
    if survives(alg, g, n) {
        LoopElem::mode(g, n).scale(&CycScalar::from_int(alg.order as i64))
    } else {
        LoopElem::zero()
    }
}

/// Element of the Gamma-invariant subalgebra L(L)^G in the basis of surviving
/// projected modes g^G(n). The central coordinate is the coefficient of the
/// untwisted c(-1), so c^G(-1) contributes T there.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct TwistedElem {
    /// (generator, mode) -> coefficient of g^G(mode); only surviving keys.
    terms: BTreeMap<(usize, i64), CycScalar>,
    /// Coefficient of c(-1).
    pub central: CycScalar,
}

impl TwistedElem {
    pub fn zero() -> Self {
        TwistedElem::default()
    }

    /// The basis mode a^G(n); zero when the congruence fails.
    pub fn mode(alg: &VlaPresentation, g: usize, n: i64) -> Self {
        let mut e = TwistedElem::zero();
        if survives(alg, g, n) {
            e.terms.insert((g, n), CycScalar::one());
        }
        e
    }

    pub fn insert(&mut self, alg: &VlaPresentation, g: usize, n: i64, c: CycScalar) {
        if c.is_zero() || !survives(alg, g, n) {
            return;
        }
        let slot = self.terms.entry((g, n)).or_insert_with(CycScalar::zero);
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.terms.remove(&(g, n));
        }
    }

    /// Projection L(L) -> L(L)^G sending g(n) to g^G(n) (dropped when the
    /// congruence fails) and c(-1) to c^G(-1) = T c(-1).
    pub fn project(alg: &VlaPresentation, x: &LoopElem) -> Self {
        let mut out = TwistedElem::zero();
        for (&(g, n), c) in x.terms() {
            out.insert(alg, g, n, c.clone());
        }
        out.central = x.central.scale(&crate::cycfield::scalar::rat_int(alg.order as i64));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, i64), &CycScalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(g, n), c) in &other.terms {
            let slot = out.terms.entry((g, n)).or_insert_with(CycScalar::zero);
            *slot = slot.add(c);
            if slot.is_zero() {
                out.terms.remove(&(g, n));
            }
        }
        out.central = out.central.add(&other.central);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        if s.is_zero() {
            return TwistedElem::zero();
        }
        TwistedElem {
            terms: self.terms.iter().map(|(k, c)| (*k, c.mul(s))).collect(),
            central: self.central.mul(s),
        }
    }

    /// [A^G(m), B^G(n)] = sum_alpha sum_k C(m,k) alpha^{-n-1}
    /// (A_(k)(R_alpha B))^G(m+n-k), Gamma-projected term by term.
    pub fn bracket(alg: &VlaPresentation, x: &Self, y: &Self) -> Self {
        let t = alg.order;
        let mut out = TwistedElem::zero();
        for (&(a, m), ca) in &x.terms {
            for (&(b, n), cb) in &y.terms {
                let c = ca.mul(cb);
                for k_alpha in 0..t {
                    let rb = alg.gamma_act(k_alpha, &VlaElem::generator(b));
                    let phase = CycScalar::omega_pow(t, -(k_alpha as i64) * (n + 1));
                    for k in 0..=alg.max_product_order() {
                        let prod = alg.nth_product(&VlaElem::generator(a), &rb, k as i64).unwrap();
                        if prod.is_zero() {
                            continue;
                        }
                        let lifted = LoopElem::from_vla_at_mode(&prod, m + n - k as i64);
                        let projected = TwistedElem::project(alg, &lifted);
                        out = out.add(&projected.scale(&c.mul(&phase).scale(&binomial(m, k))));
                    }
                }
            }
        }
        out
    }

    pub fn display(&self, alg: &VlaPresentation) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut pieces = vec![];
        for (&(g, n), c) in &self.terms {
            let name = &alg.generators[g].name;
            if c.is_one() {
                pieces.push(format!("{name}^G({n})"));
            } else {
                pieces.push(format!("{c}*{name}^G({n})"));
            }
        }
        if !self.central.is_zero() {
            pieces.push(format!("{}*{}(-1)", self.central, alg.central_name));
        }
        pieces.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::scalar::rat;
    use crate::vla::{affine_sl2, heisenberg_sl2, preset, virasoro, PRESET_NAMES};

    #[test]
    fn virasoro_bracket_relation() {
        // [w[2], w[-2]] = 4 w[0] + (1/2) c(-1); w[n] = w(n+1).
        let vir = virasoro(1, None).unwrap();
        let x = LoopElem::mode(0, 3);
        let y = LoopElem::mode(0, -1);
        let got = LoopElem::bracket(&vir, &x, &y);
        let mut want = LoopElem::mode(0, 1).scale(&CycScalar::from_int(4));
        want.central = CycScalar::from_rat(rat(1, 2));
        assert_eq!(got, want);
    }

    #[test]
    fn heisenberg_bracket_relation() {
        // [e[1], e*[-1]] = 1(-1): with deg e = 0, deg e* = 1 this is
        // [e(0), e*(-1)].
        let heis = heisenberg_sl2(1, None).unwrap();
        let x = LoopElem::mode(0, 0);
        let y = LoopElem::mode(1, -1);
        let got = LoopElem::bracket(&heis, &x, &y);
        assert_eq!(got, LoopElem::central_mode(CycScalar::one()));
    }

    #[test]
    fn central_modes_are_central() {
        let vir = virasoro(1, None).unwrap();
        let c = LoopElem::central_mode(CycScalar::one());
        let x = LoopElem::mode(0, 2);
        assert!(LoopElem::bracket(&vir, &c, &x).is_zero());
        assert!(LoopElem::bracket(&vir, &x, &c).is_zero());
    }

    #[test]
    fn d_relation_normal_form() {
        // (Dw)(n) = -n w(n-1)
        let dw = VlaElem::generator(0).d_apply();
        let e = LoopElem::from_vla_at_mode(&dw, 3);
        assert_eq!(e, LoopElem::mode(0, 2).scale(&CycScalar::from_int(-3)));
        // c(n) = 0 unless n = -1
        let c = VlaElem::central(CycScalar::one());
        assert!(LoopElem::from_vla_at_mode(&c, 0).is_zero());
        assert!(LoopElem::from_vla_at_mode(&c, -2).is_zero());
        assert_eq!(
            LoopElem::from_vla_at_mode(&c, -1),
            LoopElem::central_mode(CycScalar::one())
        );
    }

    #[test]
    fn antisymmetry_and_jacobi() {
        for name in PRESET_NAMES {
            let alg = preset(name, 2, None).unwrap();
            let gens = alg.generators.len();
            let modes: Vec<i64> = (-3..=3).collect();
            let sample: Vec<LoopElem> = (0..gens)
                .flat_map(|g| modes.iter().map(move |&n| LoopElem::mode(g, n)))
                .collect();
            for x in &sample {
                for y in &sample {
                    let xy = LoopElem::bracket(&alg, x, y);
                    let yx = LoopElem::bracket(&alg, y, x);
                    assert!(xy.add(&yx).is_zero(), "{name}: antisymmetry");
                }
            }
            // Jacobi on a sparser triple sample.
            for (i, x) in sample.iter().enumerate().step_by(3) {
                for (j, y) in sample.iter().enumerate().step_by(3) {
                    for (k, z) in sample.iter().enumerate().step_by(3) {
                        let _ = (i, j, k);
                        let a = LoopElem::bracket(&alg, x, &LoopElem::bracket(&alg, y, z));
                        let b = LoopElem::bracket(&alg, y, &LoopElem::bracket(&alg, x, z));
                        let c = LoopElem::bracket(&alg, &LoopElem::bracket(&alg, x, y), z);
                        assert!(a.sub(&b).sub(&c).is_zero(), "{name}: Jacobi");
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_grading_is_additive() {
        let vir = virasoro(1, None).unwrap();
        let x = LoopElem::mode(0, 3);
        let y = LoopElem::mode(0, -2);
        let b = LoopElem::bracket(&vir, &x, &y);
        let dx = x.degree(&vir).unwrap().unwrap();
        let dy = y.degree(&vir).unwrap().unwrap();
        assert_eq!(b.degree(&vir).unwrap(), Some(dx + dy));
    }

    #[test]
    fn polar_split_parts() {
        let mut x = LoopElem::mode(0, -3);
        x.insert(0, 2, CycScalar::one());
        x.central = CycScalar::one();
        let (minus, plus) = x.polar_split();
        assert_eq!(minus, LoopElem::mode(0, -3));
        let mut want_plus = LoopElem::mode(0, 2);
        want_plus.central = CycScalar::one();
        assert_eq!(plus, want_plus);
        assert_eq!(minus.add(&plus), x);
        // Both parts are closed under the bracket.
        let vir = virasoro(1, None).unwrap();
        let a = LoopElem::mode(0, -1);
        let b = LoopElem::mode(0, -2);
        let (m, p) = LoopElem::bracket(&vir, &a, &b).polar_split();
        assert!(p.is_zero() || p.terms.is_empty());
        let _ = m;
        let c = LoopElem::mode(0, 1);
        let d = LoopElem::mode(0, 2);
        let (m2, _) = LoopElem::bracket(&vir, &c, &d).polar_split();
        assert!(m2.is_zero());
    }

    #[test]
    fn projection_congruence() {
        // T=1: a^G(n) = a(n).
        let aff1 = affine_sl2(1, None).unwrap();
        assert_eq!(gamma_project(&aff1, 0, -5), LoopElem::mode(0, -5));
        // affine_sl2, sigma = id, deg a = 1, T=2: a^G(0) = 2 a(0), a^G(1) = 0.
        let aff2 = affine_sl2(2, None).unwrap();
        assert_eq!(gamma_project(&aff2, 0, 0), LoopElem::mode(0, 0).scale(&CycScalar::from_int(2)));
        assert!(gamma_project(&aff2, 0, 1).is_zero());
        // virasoro, T=3, deg w = 2: w^G(n) nonzero iff n = 1 mod 3.
        let vir3 = virasoro(3, None).unwrap();
        for n in -6..=6 {
            assert_eq!(!gamma_project(&vir3, 0, n).is_zero(), n.rem_euclid(3) == 1);
        }
    }

    /// Brute-force oracle: expand both projected modes as explicit Gamma-sums
    /// of untwisted modes and bracket them in L(L); the result must be the
    /// untwisted realization of the twisted bracket.
    #[test]
    fn twisted_bracket_matches_symmetrized_oracle() {
        for t in [1u32, 2, 3] {
            for name in PRESET_NAMES {
                let alg = preset(name, t, None).unwrap();
                for a in 0..alg.generators.len() {
                    for b in 0..alg.generators.len() {
                        for m in -3..=3i64 {
                            for n in -3..=3i64 {
                                if !survives(&alg, a, m) || !survives(&alg, b, n) {
                                    continue;
                                }
                                let tw = TwistedElem::bracket(
                                    &alg,
                                    &TwistedElem::mode(&alg, a, m),
                                    &TwistedElem::mode(&alg, b, n),
                                );
                                // Untwisted realization of the twisted answer.
                                let mut got = LoopElem::central_mode(tw.central.clone());
                                for (&(g, q), c) in tw.terms() {
                                    got = got.add(&gamma_project(&alg, g, q).scale(c));
                                }
                                // Oracle: bracket of the symmetrized sums.
                                let oracle = LoopElem::bracket(
                                    &alg,
                                    &gamma_project(&alg, a, m),
                                    &gamma_project(&alg, b, n),
                                );
                                assert_eq!(got, oracle, "{name} T={t} [{a}^G({m}), {b}^G({n})]");
                            }
                        }
                    }
                }
            }
        }
    }
}
