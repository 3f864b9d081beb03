//! Vertex Lie algebra presentations: generators with degrees and a diagonal
//! automorphism sigma, an n-th product table on the generators, bilinear
//! extension to all of C[D]L^o + C.c, the Gamma-action R_alpha and the axiom
//! checkers.

use std::collections::BTreeMap;
use std::fmt;

use crate::cycfield::scalar::{factorial, falling, rat_int, CycScalar, Rat};
use crate::{EngineError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// sigma g = w^sigma_exponent g.
    pub sigma_exponent: u32,
}

/// Element of the vertex Lie algebra: a finite combination of D^k g plus a
/// multiple of the central element. D c = 0 is structural: there are no
/// D-decorated central terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct VlaElem {
    /// (generator index, D-power) -> coefficient; zero coefficients dropped.
    terms: BTreeMap<(usize, u32), CycScalar>,
    pub central: CycScalar,
}

impl VlaElem {
    pub fn zero() -> Self {
        VlaElem { terms: BTreeMap::new(), central: CycScalar::zero() }
    }

    pub fn generator(g: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((g, 0), CycScalar::one());
        VlaElem { terms, central: CycScalar::zero() }
    }

    pub fn central(c: CycScalar) -> Self {
        VlaElem { terms: BTreeMap::new(), central: c }
    }

    pub fn term(g: usize, dpow: u32, coeff: CycScalar) -> Self {
        let mut e = VlaElem::zero();
        e.insert(g, dpow, coeff);
        e
    }

    pub fn insert(&mut self, g: usize, dpow: u32, coeff: CycScalar) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry((g, dpow)).or_insert_with(CycScalar::zero);
        *slot = slot.add(&coeff);
        if slot.is_zero() {
            self.terms.remove(&(g, dpow));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, u32), &CycScalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(g, k), c) in &other.terms {
            out.insert(g, k, c.clone());
        }
        out.central = out.central.add(&other.central);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        if s.is_zero() {
            return VlaElem::zero();
        }
        VlaElem {
            terms: self.terms.iter().map(|(k, c)| (*k, c.mul(s))).collect(),
            central: self.central.mul(s),
        }
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        self.scale(&CycScalar::from_rat(q.clone()))
    }

    /// Apply the translation operator D (kills the central part).
    pub fn d_apply(&self) -> Self {
        VlaElem {
            terms: self.terms.iter().map(|(&(g, k), c)| ((g, k + 1), c.clone())).collect(),
            central: CycScalar::zero(),
        }
    }

    pub fn d_pow(&self, k: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.d_apply();
        }
        out
    }
}

/// A finitely generated vertex Lie algebra presentation with validated
/// product table and diagonal sigma.
#[derive(Clone, Debug)]
pub struct VlaPresentation {
    pub name: String,
    /// Group order T of Gamma.
    pub order: u32,
    pub generators: Vec<Generator>,
    pub central_name: String,
    /// (a, b, n) -> a_(n) b for generators a, b; missing entries are zero.
    products: BTreeMap<(usize, usize, u32), VlaElem>,
    max_product_order: u32,
}

impl VlaPresentation {
    pub fn new(
        name: impl Into<String>,
        order: u32,
        generators: Vec<Generator>,
        central_name: impl Into<String>,
        products: BTreeMap<(usize, usize, u32), VlaElem>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(EngineError::InvalidAlgebra("group order T must be >= 1".into()));
        }
        let max_product_order = products
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&(_, _, n), _)| n)
            .max()
            .unwrap_or(0);
        let alg = VlaPresentation {
            name: name.into(),
            order,
            generators,
            central_name: central_name.into(),
            products,
            max_product_order,
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn gen_degree(&self, g: usize) -> u32 {
        self.generators[g].degree
    }

    pub fn sigma_exponent(&self, g: usize) -> u32 {
        self.generators[g].sigma_exponent
    }

    pub fn max_product_order(&self) -> u32 {
        self.max_product_order
    }

    pub fn product_entries(&self) -> impl Iterator<Item = (&(usize, usize, u32), &VlaElem)> {
        self.products.iter()
    }

    /// Table lookup a_(n) b on generators.
    pub fn table(&self, a: usize, b: usize, n: u32) -> VlaElem {
        self.products.get(&(a, b, n)).cloned().unwrap_or_else(VlaElem::zero)
    }

    /// Degree of a homogeneous element; None for zero.
    pub fn degree_of(&self, x: &VlaElem) -> Result<Option<i64>> {
        let mut deg: Option<i64> = None;
        let mut merge = |d: i64| -> Result<()> {
            match deg {
                None => {
                    deg = Some(d);
                    Ok(())
                }
                Some(existing) if existing == d => Ok(()),
                _ => Err(EngineError::NonHomogeneous),
            }
        };
        for (&(g, k), _) in &x.terms {
            merge(self.gen_degree(g) as i64 + k as i64)?;
        }
        if !x.central.is_zero() {
            merge(0)?;
        }
        Ok(deg)
    }

    /// Bilinear n-th product on the whole algebra. The left D-rule is axiom
    /// (i); the right rule a_(n)(Db) = D(a_(n)b) + n a_(n-1)b is the rewrite
    /// derived from axioms (i) and (ii).
    pub fn nth_product(&self, x: &VlaElem, y: &VlaElem, n: i64) -> Result<VlaElem> {
        if n < 0 {
            return Err(EngineError::NegativeProduct(n));
        }
        let mut out = VlaElem::zero();
        // Central terms are annihilated on either side.
        for (&(a, j), ca) in &x.terms {
            for (&(b, k), cb) in &y.terms {
                let c = ca.mul(cb);
                let v = self.dpow_product(a, j, b, k, n as u32)?;
                out = out.add(&v.scale(&c));
            }
        }
        Ok(out)
    }

    /// (D^j a)_(n) (D^k b) for generators a, b.
    fn dpow_product(&self, a: usize, j: u32, b: usize, k: u32, n: u32) -> Result<VlaElem> {
        // Left rule first: (D^j a)_(n) y = (-1)^j n(n-1)...(n-j+1) a_(n-j) y.
        if j > 0 {
            if n < j {
                return Ok(VlaElem::zero());
            }
            let f = falling(n as i64, j);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let base = self.dpow_product(a, 0, b, k, n - j)?;
            return Ok(base.scale_rat(&(Rat::from(f) * rat_int(sign))));
        }
        // Right rule by induction on k.
        if k > 0 {
            let inner = self.dpow_product(a, 0, b, k - 1, n)?;
            let mut out = inner.d_apply();
            if n > 0 {
                let lower = self.dpow_product(a, 0, b, k - 1, n - 1)?;
                out = out.add(&lower.scale_rat(&rat_int(n as i64)));
            }
            return Ok(out);
        }
        Ok(self.table(a, b, n))
    }

    /// R_alpha = alpha^{L(0)} sigma-check on the algebra, with alpha = w^k.
    /// On a basis term D^j g it multiplies by w^{k (j + deg g + s_g)}; the
    /// central element is fixed.
    pub fn gamma_act(&self, k: u32, x: &VlaElem) -> VlaElem {
        let t = self.order;
        let mut out = VlaElem::central(x.central.clone());
        for (&(g, j), c) in &x.terms {
            let e = (k as i64) * (j as i64 + self.gen_degree(g) as i64 + self.sigma_exponent(g) as i64);
            out.insert(g, j, c.mul(&CycScalar::omega_pow(t, e)));
        }
        out
    }

    /// sigma-check alone (no degree twist).
    pub fn sigma_act(&self, x: &VlaElem) -> VlaElem {
        let t = self.order;
        let mut out = VlaElem::central(x.central.clone());
        for (&(g, j), c) in &x.terms {
            out.insert(g, j, c.mul(&CycScalar::omega_pow(t, self.sigma_exponent(g) as i64)));
        }
        out
    }

    /// Structural validation: grading of the table, sigma preserving the
    /// table, closure (structural by the VlaElem type), finite products.
    fn validate(&self) -> Result<()> {
        let t = self.order;
        for (&(a, b, n), v) in &self.products {
            if a >= self.generators.len() || b >= self.generators.len() {
                return Err(EngineError::InvalidAlgebra("product entry references unknown generator".into()));
            }
            if v.is_zero() {
                continue;
            }
            let want = self.gen_degree(a) as i64 + self.gen_degree(b) as i64 - n as i64 - 1;
            for (&(g, k), _) in &v.terms {
                let got = self.gen_degree(g) as i64 + k as i64;
                if got != want {
                    return Err(EngineError::InvalidAlgebra(format!(
                        "grading violated: deg({}_({}){}) should be {}, found term of degree {}",
                        self.generators[a].name, n, self.generators[b].name, want, got
                    )));
                }
            }
            if !v.central.is_zero() && want != 0 {
                return Err(EngineError::InvalidAlgebra(format!(
                    "grading violated: central term in {}_({}){} of degree {}",
                    self.generators[a].name, n, self.generators[b].name, want
                )));
            }
            // sigma(a_(n)b) = (sigma a)_(n)(sigma b), diagonal form.
            let lhs = self.sigma_act(v);
            let phase = CycScalar::omega_pow(
                t,
                self.sigma_exponent(a) as i64 + self.sigma_exponent(b) as i64,
            );
            let rhs = v.scale(&phase);
            if lhs != rhs {
                return Err(EngineError::InvalidAlgebra(format!(
                    "sigma does not preserve the product table at {}_({}){}",
                    self.generators[a].name, n, self.generators[b].name
                )));
            }
        }
        Ok(())
    }

    /// Exhaustive axiom verification up to product order n_max: skew-symmetry,
    /// the commutator axiom, Gamma-equivariance of R, and the derived right-D
    /// rewrite cross-checked through skew-symmetry.
    pub fn check_axioms(&self, n_max: u32) -> AxiomReport {
        let mut report = AxiomReport::default();
        let gens: Vec<usize> = (0..self.generators.len()).collect();
        let kmax = self.max_product_order;

        for &a in &gens {
            for &b in &gens {
                for n in 0..=n_max {
                    report.cases += 1;
                    let lhs = self.nth_product(&VlaElem::generator(a), &VlaElem::generator(b), n as i64).unwrap();
                    let rhs = self.skew_rhs(a, b, n, kmax);
                    if lhs != rhs {
                        report.fail(format!(
                            "skew-symmetry fails for {}_({}){}: lhs = {:?}, rhs = {:?}",
                            self.generators[a].name, n, self.generators[b].name, lhs, rhs
                        ));
                    }
                }
            }
        }

        for &a in &gens {
            for &b in &gens {
                for &c in &gens {
                    for m in 0..=n_max {
                        for n in 0..=n_max {
                            report.cases += 1;
                            let ge = VlaElem::generator;
                            let bc = self.nth_product(&ge(b), &ge(c), n as i64).unwrap();
                            let ac = self.nth_product(&ge(a), &ge(c), m as i64).unwrap();
                            let lhs = self
                                .nth_product(&ge(a), &bc, m as i64)
                                .unwrap()
                                .sub(&self.nth_product(&ge(b), &ac, n as i64).unwrap());
                            let mut rhs = VlaElem::zero();
                            for k in 0..=m {
                                let ab = self.nth_product(&ge(a), &ge(b), k as i64).unwrap();
                                let v = self.nth_product(&ab, &ge(c), (m + n - k) as i64).unwrap();
                                rhs = rhs.add(&v.scale_rat(&crate::cycfield::scalar::binomial(m as i64, k)));
                            }
                            if lhs != rhs {
                                report.fail(format!(
                                    "commutator axiom fails for ({},{},{}) m={} n={}: lhs = {:?}, rhs = {:?}",
                                    self.generators[a].name, self.generators[b].name,
                                    self.generators[c].name, m, n, lhs, rhs
                                ));
                            }
                        }
                    }
                }
            }
        }

        // R_alpha(a_(n)b) = alpha^{-n-1} (R_alpha a)_(n) (R_alpha b).
        for k in 0..self.order {
            for &a in &gens {
                for &b in &gens {
                    for n in 0..=n_max {
                        report.cases += 1;
                        let prod = self.nth_product(&VlaElem::generator(a), &VlaElem::generator(b), n as i64).unwrap();
                        let lhs = self.gamma_act(k, &prod);
                        let ra = self.gamma_act(k, &VlaElem::generator(a));
                        let rb = self.gamma_act(k, &VlaElem::generator(b));
                        let rhs = self
                            .nth_product(&ra, &rb, n as i64)
                            .unwrap()
                            .scale(&CycScalar::omega_pow(self.order, -(k as i64) * (n as i64 + 1)));
                        if lhs != rhs {
                            report.fail(format!(
                                "Gamma-equivariance fails for alpha=w^{} at {}_({}){}",
                                k, self.generators[a].name, n, self.generators[b].name
                            ));
                        }
                    }
                }
            }
        }

        // Right-D rewrite against the skew-symmetry route.
        for &a in &gens {
            for &b in &gens {
                for n in 0..=n_max {
                    report.cases += 1;
                    let db = VlaElem::generator(b).d_apply();
                    let lhs = self.nth_product(&VlaElem::generator(a), &db, n as i64).unwrap();
                    let mut rhs = VlaElem::zero();
                    for k in 0..=(kmax + 1) {
                        let inner = self.nth_product(&db, &VlaElem::generator(a), (n + k) as i64).unwrap();
                        let sign = if (n + k) % 2 == 0 { 1 } else { -1 };
                        let coef = rat_int(-sign) / factorial(k);
                        rhs = rhs.add(&inner.d_pow(k).scale_rat(&coef));
                    }
                    if lhs != rhs {
                        report.fail(format!(
                            "right-D rewrite disagrees with skew-symmetry for {}_({})(D {})",
                            self.generators[a].name, n, self.generators[b].name
                        ));
                    }
                }
            }
        }

        report
    }

    fn skew_rhs(&self, a: usize, b: usize, n: u32, kmax: u32) -> VlaElem {
        // -sum_k (-1)^{n+k}/k! D^k (b_(n+k) a)
        let mut rhs = VlaElem::zero();
        for k in 0..=kmax.saturating_sub(n).max(0) + 1 {
            let inner = self
                .nth_product(&VlaElem::generator(b), &VlaElem::generator(a), (n + k) as i64)
                .unwrap();
            if inner.is_zero() {
                continue;
            }
            let sign = if (n + k) % 2 == 0 { 1 } else { -1 };
            let coef = rat_int(-sign) / factorial(k);
            rhs = rhs.add(&inner.d_pow(k).scale_rat(&coef));
        }
        rhs
    }

    pub fn display_elem(&self, x: &VlaElem) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut pieces = vec![];
        for (&(g, k), c) in &x.terms {
            let mut s = String::new();
            if !c.is_one() {
                s.push_str(&format!("{c}*"));
            }
            for _ in 0..k {
                s.push_str("D ");
            }
            s.push_str(&self.generators[g].name);
            pieces.push(s);
        }
        if !x.central.is_zero() {
            if x.central.is_one() {
                pieces.push(self.central_name.clone());
            } else {
                pieces.push(format!("{}*{}", x.central, self.central_name));
            }
        }
        pieces.join(" + ")
    }
}

#[derive(Default, Debug, Clone)]
pub struct AxiomReport {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "all {} axiom cases pass", self.cases)
        } else {
            writeln!(f, "{} of {} axiom cases fail:", self.failures.len(), self.cases)?;
            for failure in &self.failures {
                writeln!(f, "  {failure}")?;
            }
            Ok(())
        }
    }
}

/// Names of the builtin presets.
pub const PRESET_NAMES: [&str; 3] = ["affine_sl2", "heisenberg_sl2", "virasoro"];

/// Diagonal sigma exponents per generator; must be compatible with the
/// product table.
pub fn preset(name: &str, t: u32, sigma: Option<Vec<u32>>) -> Result<VlaPresentation> {
    match name {
        "affine_sl2" => affine_sl2(t, sigma),
        "heisenberg_sl2" => heisenberg_sl2(t, sigma),
        "virasoro" => virasoro(t, sigma),
        other => Err(EngineError::InvalidAlgebra(format!("unknown preset '{other}'"))),
    }
}

/// The affine vertex Lie algebra of sl2: a_(0)b = [a,b], a_(1)b = <a,b> K
/// with <e,f> = 1, <h,h> = 2. Generators e, f, h of degree 1; K central of
/// degree 0. Valid diagonal sigmas are (s, -s, 0) on (e, f, h).
pub fn affine_sl2(t: u32, sigma: Option<Vec<u32>>) -> Result<VlaPresentation> {
    let sig = sigma.unwrap_or_else(|| vec![0, 0, 0]);
    if sig.len() != 3 {
        return Err(EngineError::InvalidAlgebra("affine_sl2 takes three sigma exponents".into()));
    }
    let generators = vec![
        Generator { name: "e".into(), degree: 1, sigma_exponent: sig[0] % t },
        Generator { name: "f".into(), degree: 1, sigma_exponent: sig[1] % t },
        Generator { name: "h".into(), degree: 1, sigma_exponent: sig[2] % t },
    ];
    let (e, f, h) = (0usize, 1usize, 2usize);
    let mut products = BTreeMap::new();
    let one = CycScalar::one;
    // 0-th products: the sl2 bracket.
    products.insert((e, f, 0), VlaElem::term(h, 0, one()));
    products.insert((f, e, 0), VlaElem::term(h, 0, one().neg()));
    products.insert((h, e, 0), VlaElem::term(e, 0, CycScalar::from_int(2)));
    products.insert((e, h, 0), VlaElem::term(e, 0, CycScalar::from_int(-2)));
    products.insert((h, f, 0), VlaElem::term(f, 0, CycScalar::from_int(-2)));
    products.insert((f, h, 0), VlaElem::term(f, 0, CycScalar::from_int(2)));
    // 1st products: the invariant form times K.
    products.insert((e, f, 1), VlaElem::central(one()));
    products.insert((f, e, 1), VlaElem::central(one()));
    products.insert((h, h, 1), VlaElem::central(CycScalar::from_int(2)));
    VlaPresentation::new("affine_sl2", t, generators, "K", products)
}

/// The Heisenberg vertex Lie algebra from the Borel of sl2: generators e
/// (degree 0), e* (degree 1), h (degree 1); only nonzero products
/// e_(0)e* = 1 = -(e*_(0)e). The degree-0 copy of the pair is the one swept
/// out first by coinvariant reduction, matching the closed form of the
/// vacuum example.
pub fn heisenberg_sl2(t: u32, sigma: Option<Vec<u32>>) -> Result<VlaPresentation> {
    let sig = sigma.unwrap_or_else(|| vec![0, 0, 0]);
    if sig.len() != 3 {
        return Err(EngineError::InvalidAlgebra("heisenberg_sl2 takes three sigma exponents".into()));
    }
    let generators = vec![
        Generator { name: "e".into(), degree: 0, sigma_exponent: sig[0] % t },
        Generator { name: "e*".into(), degree: 1, sigma_exponent: sig[1] % t },
        Generator { name: "h".into(), degree: 1, sigma_exponent: sig[2] % t },
    ];
    let (e, es) = (0usize, 1usize);
    let mut products = BTreeMap::new();
    products.insert((e, es, 0), VlaElem::central(CycScalar::one()));
    products.insert((es, e, 0), VlaElem::central(CycScalar::from_int(-1)));
    VlaPresentation::new("heisenberg_sl2", t, generators, "1", products)
}

/// The Virasoro vertex Lie algebra: one generator w of degree 2 with
/// w_(0)w = Dw, w_(1)w = 2w, w_(3)w = c/2.
pub fn virasoro(t: u32, sigma: Option<Vec<u32>>) -> Result<VlaPresentation> {
    let sig = sigma.unwrap_or_else(|| vec![0]);
    if sig.len() != 1 {
        return Err(EngineError::InvalidAlgebra("virasoro takes one sigma exponent".into()));
    }
    let generators = vec![Generator { name: "w".into(), degree: 2, sigma_exponent: sig[0] % t }];
    let w = 0usize;
    let mut products = BTreeMap::new();
    products.insert((w, w, 0), VlaElem::term(w, 1, CycScalar::one()));
    products.insert((w, w, 1), VlaElem::term(w, 0, CycScalar::from_int(2)));
    products.insert((w, w, 3), VlaElem::central(CycScalar::from_rat(crate::cycfield::scalar::rat(1, 2))));
    VlaPresentation::new("virasoro", t, generators, "c", products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::scalar::rat;

    #[test]
    fn preset_tables_match_the_relations() {
        let aff = affine_sl2(1, None).unwrap();
        let (e, f) = (0, 1);
        // e_(1) f = K
        assert_eq!(aff.table(e, f, 1), VlaElem::central(CycScalar::one()));

        let vir = virasoro(1, None).unwrap();
        // w_(3) w = c/2
        assert_eq!(
            vir.table(0, 0, 3),
            VlaElem::central(CycScalar::from_rat(rat(1, 2)))
        );

        let heis = heisenberg_sl2(2, None).unwrap();
        // e_(0) e* = 1
        assert_eq!(heis.table(0, 1, 0), VlaElem::central(CycScalar::one()));
    }

    #[test]
    fn axioms_pass_for_all_presets() {
        for t in [1u32, 2, 3, 4] {
            for name in PRESET_NAMES {
                let alg = preset(name, t, None).unwrap();
                let report = alg.check_axioms(6);
                assert!(report.passed(), "{name} T={t}: {report}");
            }
        }
        // Nontrivial sigma on affine_sl2: s_e = 1, s_f = T-1, s_h = 0.
        for t in [2u32, 3, 4] {
            let alg = affine_sl2(t, Some(vec![1, t - 1, 0])).unwrap();
            assert!(alg.check_axioms(6).passed());
        }
    }

    #[test]
    fn corrupted_table_fails_skew_symmetry() {
        // Set w_(1)w = 3w. The grading still holds, but skew-symmetry breaks.
        let generators = vec![Generator { name: "w".into(), degree: 2, sigma_exponent: 0 }];
        let mut products = BTreeMap::new();
        products.insert((0, 0, 0), VlaElem::term(0, 1, CycScalar::one()));
        products.insert((0, 0, 1), VlaElem::term(0, 0, CycScalar::from_int(3)));
        products.insert((0, 0, 3), VlaElem::central(CycScalar::from_rat(rat(1, 2))));
        let alg = VlaPresentation::new("broken", 1, generators, "c", products).unwrap();
        let report = alg.check_axioms(6);
        assert!(!report.passed());
        assert!(report.failures.iter().any(|f| f.contains("skew-symmetry")));
    }

    #[test]
    fn left_d_rule() {
        // (Dw)_(2) w = -2 w_(1) w = -4w.
        let vir = virasoro(1, None).unwrap();
        let dw = VlaElem::generator(0).d_apply();
        let got = vir.nth_product(&dw, &VlaElem::generator(0), 2).unwrap();
        assert_eq!(got, VlaElem::term(0, 0, CycScalar::from_int(-4)));
    }

    #[test]
    fn right_d_rule() {
        // w_(1)(Dw) = D(2w) + Dw = 3 Dw.
        let vir = virasoro(1, None).unwrap();
        let dw = VlaElem::generator(0).d_apply();
        let got = vir.nth_product(&VlaElem::generator(0), &dw, 1).unwrap();
        assert_eq!(got, VlaElem::term(0, 1, CycScalar::from_int(3)));
    }

    #[test]
    fn central_is_annihilated() {
        let vir = virasoro(1, None).unwrap();
        let c = VlaElem::central(CycScalar::one());
        let w = VlaElem::generator(0);
        for n in 0..5 {
            assert!(vir.nth_product(&c, &w, n).unwrap().is_zero());
            assert!(vir.nth_product(&w, &c, n).unwrap().is_zero());
        }
    }

    #[test]
    fn negative_products_are_rejected() {
        let vir = virasoro(1, None).unwrap();
        let w = VlaElem::generator(0);
        assert!(matches!(
            vir.nth_product(&w, &w, -1),
            Err(EngineError::NegativeProduct(-1))
        ));
    }

    #[test]
    fn gamma_action_degree_twist() {
        // affine_sl2, sigma = id, deg a = 1, T = 2: R_w a = -a.
        let aff = affine_sl2(2, None).unwrap();
        let e = VlaElem::generator(0);
        assert_eq!(aff.gamma_act(1, &e), e.scale(&CycScalar::from_int(-1)));
        // R_alpha fixes the central element.
        let c = VlaElem::central(CycScalar::one());
        assert_eq!(aff.gamma_act(1, &c), c);
        // Group homomorphism.
        let vir = virasoro(3, None).unwrap();
        let x = VlaElem::generator(0).d_apply();
        let ab = vir.gamma_act(1, &vir.gamma_act(2, &x));
        assert_eq!(ab, vir.gamma_act(0, &x));
    }

    #[test]
    fn grading_of_products() {
        let vir = virasoro(1, None).unwrap();
        for n in 0..=3u32 {
            let v = vir.table(0, 0, n);
            if !v.is_zero() {
                let deg = vir.degree_of(&v).unwrap().unwrap();
                assert_eq!(deg, 2 + 2 - n as i64 - 1);
            }
        }
    }

    #[test]
    fn products_vanish_beyond_table_order() {
        for name in PRESET_NAMES {
            let alg = preset(name, 2, None).unwrap();
            let kmax = alg.max_product_order();
            for a in 0..alg.generators.len() {
                for b in 0..alg.generators.len() {
                    for n in (kmax + 1)..(kmax + 4) {
                        assert!(alg
                            .nth_product(&VlaElem::generator(a), &VlaElem::generator(b), n as i64)
                            .unwrap()
                            .is_zero());
                    }
                }
            }
        }
    }
}
