//! Marked-point configurations, Gamma-equivariant swap functions, the
//! coinvariant reduction that removes a V(L) factor at the auxiliary point u,
//! rationality and residue verification, the bounded little-image membership
//! test, and the big-versus-little comparison machinery.

use std::collections::{BTreeMap, BTreeSet};

use crate::cycfield::poly::Poly;
use crate::cycfield::ratfun::{ExpansionPoint, RatFun};
use crate::cycfield::scalar::{binomial, factorial, rat_int, same_gamma_orbit, CycScalar};
use crate::fields::{y_apply, Witness};
use crate::modes::{survives, LoopElem, TwistedElem};
use crate::quasi::yw_mode;
use crate::verma::{
    apply_mode, apply_twisted_mode, gamma_act_state, ModuleKind, Monomial, State,
};
use crate::vla::{VlaElem, VlaPresentation};
use crate::{EngineError, Result};

/// Marked points z_1..z_N (nonzero, pairwise disjoint Gamma-orbits) plus an
/// optional module at the origin. The auxiliary point stays symbolic as u.
#[derive(Clone, Debug)]
pub struct MarkedConfig {
    pub points: Vec<CycScalar>,
    pub origin: bool,
}

impl MarkedConfig {
    pub fn new(alg: &VlaPresentation, points: Vec<CycScalar>, origin: bool) -> Result<Self> {
        let t = alg.order;
        for (i, z) in points.iter().enumerate() {
            if z.is_zero() {
                return Err(EngineError::ConfigInvariant(format!("marked point {i} is zero")));
            }
            for (j, y) in points.iter().enumerate().take(i) {
                if same_gamma_orbit(t, z, y)? {
                    return Err(EngineError::ConfigInvariant(format!(
                        "points {j} and {i} lie in the same Gamma-orbit"
                    )));
                }
            }
        }
        Ok(MarkedConfig { points, origin })
    }
}

/// A basis tensor: one PBW monomial per marked point, and one twisted
/// monomial at the origin when present.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TensorMono {
    pub factors: Vec<Monomial>,
    pub origin: Option<Monomial>,
}

impl TensorMono {
    pub fn vacuum(cfg: &MarkedConfig) -> Self {
        TensorMono {
            factors: vec![Monomial::vacuum(); cfg.points.len()],
            origin: cfg.origin.then(Monomial::vacuum),
        }
    }

    pub fn total_depth(&self) -> usize {
        self.factors.iter().map(|m| m.depth()).sum::<usize>()
            + self.origin.as_ref().map_or(0, |m| m.depth())
    }
}

/// Linear combination of basis tensors with coefficients rational in u.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorState {
    terms: BTreeMap<TensorMono, RatFun>,
}

impl TensorState {
    pub fn zero() -> Self {
        TensorState { terms: BTreeMap::new() }
    }

    pub fn vacuum(cfg: &MarkedConfig) -> Self {
        Self::monomial(TensorMono::vacuum(cfg), RatFun::one())
    }

    pub fn monomial(m: TensorMono, c: RatFun) -> Self {
        let mut s = TensorState::zero();
        s.insert(m, c);
        s
    }

    pub fn insert(&mut self, m: TensorMono, c: RatFun) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorMono, &RatFun)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_scalar(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, f: &RatFun) -> Self {
        if f.is_zero() {
            return TensorState::zero();
        }
        TensorState {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(f))).collect(),
        }
    }

    pub fn scale_scalar(&self, s: &CycScalar) -> Self {
        self.scale(&RatFun::constant(s.clone()))
    }

    /// True when no coefficient depends on u.
    pub fn is_u_free(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    /// Substitute u -> alpha u in every coefficient.
    pub fn subst_u(&self, alpha: &CycScalar) -> Self {
        TensorState {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.subst_linear(alpha, &CycScalar::zero())))
                .collect(),
        }
    }

    /// Evaluate every coefficient at a numeric u.
    pub fn eval_u(&self, u0: &CycScalar) -> Result<Self> {
        let mut out = TensorState::zero();
        for (m, c) in &self.terms {
            out.insert(m.clone(), RatFun::constant(c.eval(u0)?));
        }
        Ok(out)
    }

    /// Act with a loop element on factor i, redistributing the resulting
    /// monomials.
    pub fn apply_at_point(&self, alg: &VlaPresentation, i: usize, x: &LoopElem) -> Self {
        let mut out = TensorState::zero();
        for (m, c) in &self.terms {
            let factor = State::from_monomial(ModuleKind::Untwisted, m.factors[i].clone(), CycScalar::one());
            let moved = apply_mode(alg, x, &factor);
            for (mono, coeff) in moved.terms() {
                let mut nm = m.clone();
                nm.factors[i] = mono.clone();
                out.insert(nm, c.scale(coeff));
            }
        }
        out
    }

    /// Act with a twisted element on the origin factor.
    pub fn apply_at_origin(&self, alg: &VlaPresentation, x: &TwistedElem) -> Self {
        let mut out = TensorState::zero();
        for (m, c) in &self.terms {
            let origin = m.origin.as_ref().expect("origin factor present");
            let factor = State::from_monomial(ModuleKind::Twisted, origin.clone(), CycScalar::one());
            let moved = apply_twisted_mode(alg, x, &factor);
            for (mono, coeff) in moved.terms() {
                let mut nm = m.clone();
                nm.origin = Some(mono.clone());
                out.insert(nm, c.scale(coeff));
            }
        }
        out
    }

    /// Largest grade of the factor at slot i across the terms.
    fn factor_grade_max(&self, alg: &VlaPresentation, i: usize) -> i64 {
        self.terms.keys().map(|m| m.factors[i].grade(alg)).max().unwrap_or(0)
    }

    fn origin_grade_max(&self, alg: &VlaPresentation) -> i64 {
        self.terms
            .keys()
            .filter_map(|m| m.origin.as_ref().map(|o| o.grade(alg)))
            .max()
            .unwrap_or(0)
    }

    pub fn display(&self, alg: &VlaPresentation) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut pieces = vec![];
        for (m, c) in &self.terms {
            let mut s = format!("({}) * [", c.display_with("u"));
            for (i, f) in m.factors.iter().enumerate() {
                if i > 0 {
                    s.push_str(" (x) ");
                }
                s.push_str(&State::from_monomial(ModuleKind::Untwisted, f.clone(), CycScalar::one()).display(alg));
            }
            if let Some(o) = &m.origin {
                if !m.factors.is_empty() {
                    s.push_str(" (x) ");
                }
                s.push_str("at0:");
                s.push_str(&State::from_monomial(ModuleKind::Twisted, o.clone(), CycScalar::one()).display(alg));
            }
            s.push(']');
            pieces.push(s);
        }
        pieces.join(" + ")
    }
}

/// The swap identity at the auxiliary point, used recursively: for
/// A = b(-1)B attached at u,
///   [A (x) m] = sum_{alpha != 1} sum_{n>=0} ((alpha-1)u)^{-n-1}
///                 [((R_alpha b)(n) B) (x) m]
///             + sum_i sum_alpha sum_{n>=0} (alpha u - z_i)^{-n-1}
///                 [B (x) (R_alpha b)(n)_{z_i} m]
///             + sum_{n>=0} u^{-n-1} [B (x) b^G(n) m_0],
/// and the vacuum factor at u is dropped.
pub fn swap_reduce(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    a: &State,
    tensor: &TensorState,
) -> Result<TensorState> {
    debug_assert_eq!(a.kind, ModuleKind::Untwisted);
    let mut out = TensorState::zero();
    for (mono, c) in a.terms() {
        out = out.add(&reduce_mono(alg, cfg, &mono.0, tensor)?.scale_scalar(c));
    }
    Ok(out)
}

fn reduce_state(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    a: &State,
    tensor: &TensorState,
) -> Result<TensorState> {
    let mut out = TensorState::zero();
    for (mono, c) in a.terms() {
        out = out.add(&reduce_mono(alg, cfg, &mono.0, tensor)?.scale_scalar(c));
    }
    Ok(out)
}

fn reduce_mono(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    factors: &[(usize, i64)],
    tensor: &TensorState,
) -> Result<TensorState> {
    if factors.is_empty() {
        return Ok(tensor.clone());
    }
    if tensor.is_zero() {
        return Ok(TensorState::zero());
    }
    let t = alg.order;
    let (g, m) = factors[0];
    let p = (-m - 1) as u32;
    let lead = VlaElem::generator(g).d_pow(p).scale_rat(&(rat_int(1) / factorial(p)));
    let lead_degree = alg.gen_degree(g) as i64 + p as i64;
    let rest: Vec<(usize, i64)> = factors[1..].to_vec();
    let rest_state = State::from_monomial(ModuleKind::Untwisted, Monomial(rest.clone()), CycScalar::one());
    let grade_rest: i64 = rest.iter().map(|&(h, q)| alg.gen_degree(h) as i64 - q - 1).sum();
    let mut out = TensorState::zero();

    // Corrections at u itself (alpha != 1), reducing the depth at u.
    for k_alpha in 1..t {
        let alpha = CycScalar::omega_pow(t, k_alpha as i64);
        let denom = alpha.sub(&CycScalar::one());
        let r_lead = alg.gamma_act(k_alpha, &lead);
        for n in 0..=(lead_degree + grade_rest - 1).max(-1) {
            let moved = apply_mode(alg, &LoopElem::from_vla_at_mode(&r_lead, n), &rest_state);
            if moved.is_zero() {
                continue;
            }
            // 1 / ((alpha-1) u)^{n+1}
            let coef = RatFun::new(
                Poly::constant(denom.inv()?.pow(n + 1)?),
                Poly::monomial(CycScalar::one(), (n + 1) as usize),
            )?;
            out = out.add(&reduce_state(alg, cfg, &moved, tensor)?.scale(&coef));
        }
    }

    // Annihilation tails transferred onto the marked points.
    for (i, z) in cfg.points.iter().enumerate() {
        let g_hi = lead_degree + tensor.factor_grade_max(alg, i) - 1;
        for k_alpha in 0..t {
            let alpha = CycScalar::omega_pow(t, k_alpha as i64);
            let r_lead = alg.gamma_act(k_alpha, &lead);
            for n in 0..=g_hi.max(-1) {
                let moved = tensor.apply_at_point(alg, i, &LoopElem::from_vla_at_mode(&r_lead, n));
                if moved.is_zero() {
                    continue;
                }
                // 1 / (alpha u - z_i)^{n+1}
                let den = Poly::new(vec![z.neg(), alpha.clone()]).pow((n + 1) as u32);
                let coef = RatFun::new(Poly::one(), den)?;
                out = out.add(&reduce_mono(alg, cfg, &rest, &moved)?.scale(&coef));
            }
        }
    }

    // Tail onto the origin through the twisted modes.
    if cfg.origin {
        let g_hi = lead_degree + tensor.origin_grade_max(alg) - 1;
        for n in 0..=g_hi.max(-1) {
            let te = TwistedElem::project(alg, &LoopElem::from_vla_at_mode(&lead, n));
            if te.is_zero() {
                continue;
            }
            let moved = tensor.apply_at_origin(alg, &te);
            if moved.is_zero() {
                continue;
            }
            let coef = RatFun::new(Poly::one(), Poly::monomial(CycScalar::one(), (n + 1) as usize))?;
            out = out.add(&reduce_mono(alg, cfg, &rest, &moved)?.scale(&coef));
        }
    }

    Ok(out)
}

/// Every coefficient denominator must factor into u and (u - alpha^{-1} z_i)
/// powers.
pub fn rationality_check(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    result: &TensorState,
) -> std::result::Result<(), Witness> {
    let t = alg.order;
    let mut roots = vec![CycScalar::zero()];
    for z in &cfg.points {
        for k in 0..t {
            let alpha_inv = CycScalar::omega_pow(t, -(k as i64));
            roots.push(alpha_inv.mul(z));
        }
    }
    for (m, c) in result.terms() {
        let mut den = c.den().clone();
        'strip: while den.degree().unwrap_or(0) > 0 {
            for r in &roots {
                if den.eval(r).is_zero() {
                    let lin = Poly::new(vec![r.neg(), CycScalar::one()]);
                    den = den.divrem(&lin).expect("linear divisor").0;
                    continue 'strip;
                }
            }
            return Err(Witness {
                location: "rationality".into(),
                lhs: format!("unexpected denominator factor {den}"),
                rhs: format!("tensor {m:?}"),
            });
        }
    }
    Ok(())
}

/// For admissible f (poles in Gamma z and 0, zero at infinity), the residues
/// of f times the reduced class sum to zero over all finite poles.
pub fn residue_sum_check(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    result: &TensorState,
    f: &RatFun,
) -> std::result::Result<(), Witness> {
    if !f.vanishes_at_infinity() {
        return Err(Witness {
            location: "residue sum".into(),
            lhs: "f does not vanish at infinity".into(),
            rhs: f.to_string(),
        });
    }
    let t = alg.order;
    let mut poles = vec![CycScalar::zero()];
    for z in &cfg.points {
        for k in 0..t {
            poles.push(CycScalar::omega_pow(t, k as i64).mul(z));
            poles.push(CycScalar::omega_pow(t, -(k as i64)).mul(z));
        }
    }
    poles.sort();
    poles.dedup();
    let mut residual = vec![];
    for (m, c) in result.terms() {
        let h = f.mul(c);
        let mut acc = CycScalar::zero();
        for p in &poles {
            acc = acc.add(&h.residue(&ExpansionPoint::Finite(p.clone())));
        }
        if !acc.is_zero() {
            residual.push(format!("{m:?}: {acc}"));
        }
    }
    if residual.is_empty() {
        Ok(())
    } else {
        Err(Witness {
            location: "residue sum".into(),
            lhs: residual.join("; "),
            rhs: "0".into(),
        })
    }
}

/// A Gamma-symmetrized single-pole function
/// F(t) = sum_alpha alpha.(a (t - p)^{-n-1}) with p a marked point or the
/// origin.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SwapFunction {
    pub gen: usize,
    /// Index into cfg.points, or None for the origin.
    pub pole: Option<usize>,
    /// Pole order is n + 1.
    pub n: i64,
}

impl SwapFunction {
    /// Formal Laurent expansion at the marked point z_j, as a loop element
    /// with Taylor modes up to m_hi (plus the exact polar part when j is the
    /// pole).
    pub fn expansion_at_point(
        &self,
        alg: &VlaPresentation,
        cfg: &MarkedConfig,
        j: usize,
        m_hi: i64,
    ) -> LoopElem {
        let t = alg.order;
        let zj = &cfg.points[j];
        let pole_value = match self.pole {
            Some(i) => cfg.points[i].clone(),
            None => CycScalar::zero(),
        };
        let mut out = LoopElem::zero();
        for k_alpha in 0..t {
            let alpha_inv = CycScalar::omega_pow(t, -(k_alpha as i64));
            if k_alpha == 0 && self.pole == Some(j) {
                // Exact polar part a(-n-1) at its own point.
                out.insert(self.gen, -self.n - 1, CycScalar::one());
                continue;
            }
            let q = alpha_inv.mul(zj).sub(&pole_value);
            debug_assert!(!q.is_zero(), "disjoint orbits force q != 0");
            let phase = CycScalar::omega_pow(
                t,
                (k_alpha as i64)
                    * (alg.gen_degree(self.gen) as i64 + alg.sigma_exponent(self.gen) as i64),
            );
            let q_inv = q.inv().expect("q != 0");
            for m in 0..=m_hi.max(-1) {
                // alpha^{-m-1} C(-n-1, m) q^{-n-1-m}
                let c = CycScalar::omega_pow(t, -(k_alpha as i64) * (m + 1))
                    .mul(&CycScalar::from_rat(binomial(-self.n - 1, m as u32)))
                    .mul(&q_inv.pow(self.n + 1 + m).expect("q != 0"))
                    .mul(&phase);
                out.insert(self.gen, m, c);
            }
        }
        out
    }

    /// Expansion at the origin in the twisted-mode basis.
    pub fn expansion_at_origin(
        &self,
        alg: &VlaPresentation,
        cfg: &MarkedConfig,
        m_hi: i64,
    ) -> TwistedElem {
        let mut out = TwistedElem::zero();
        match self.pole {
            None => {
                // Polar a^G(-n-1); the symmetrized function vanishes unless
                // the mode survives.
                if survives(alg, self.gen, -self.n - 1) {
                    out = TwistedElem::mode(alg, self.gen, -self.n - 1);
                }
            }
            Some(i) => {
                let p = &cfg.points[i];
                let p_inv_neg = p.neg().inv().expect("marked point nonzero");
                for m in 0..=m_hi.max(-1) {
                    if !survives(alg, self.gen, m) {
                        continue;
                    }
                    // C(-n-1, m) (-p)^{-n-1-m}
                    let c = CycScalar::from_rat(binomial(-self.n - 1, m as u32))
                        .mul(&p_inv_neg.pow(self.n + 1 + m).expect("nonzero"));
                    out.insert(alg, self.gen, m, c);
                }
            }
        }
        out
    }

    /// The action of F on a u-free tensor: expansions applied at every marked
    /// point and at the origin.
    pub fn act(&self, alg: &VlaPresentation, cfg: &MarkedConfig, w: &TensorState) -> TensorState {
        let mut out = TensorState::zero();
        for j in 0..cfg.points.len() {
            let m_hi = alg.gen_degree(self.gen) as i64 + w.factor_grade_max(alg, j) - 1;
            let le = self.expansion_at_point(alg, cfg, j, m_hi);
            out = out.add(&w.apply_at_point(alg, j, &le));
        }
        if cfg.origin {
            let m_hi = alg.gen_degree(self.gen) as i64 + w.origin_grade_max(alg) - 1;
            let te = self.expansion_at_origin(alg, cfg, m_hi);
            if !te.is_zero() {
                out = out.add(&w.apply_at_origin(alg, &te));
            }
        }
        out
    }
}

/// Exact vectors over the basis tensors.
type Vect = BTreeMap<TensorMono, CycScalar>;

fn tensor_to_vect(v: &TensorState) -> Result<Vect> {
    let mut out = Vect::new();
    for (m, c) in v.terms() {
        match c.as_constant() {
            Some(s) => {
                if !s.is_zero() {
                    out.insert(m.clone(), s);
                }
            }
            None => {
                return Err(EngineError::ConfigInvariant(
                    "membership input depends on u; evaluate or expand first".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// Forward Gaussian elimination with pivots on minimal basis tensors. Rows
/// have pairwise distinct minimal monomials, so reduction to zero decides
/// membership in the span of the inserted columns exactly.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<TensorMono, Vect>,
}

impl Echelon {
    fn reduce(&self, v: &Vect) -> Vect {
        let mut v = v.clone();
        loop {
            let Some((pivot, coeff)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
                return v;
            };
            let Some(row) = self.rows.get(&pivot) else {
                // Try deeper pivots: subtract matching rows at any position.
                let mut changed = false;
                let keys: Vec<TensorMono> = v.keys().cloned().collect();
                for k in keys {
                    if let Some(row) = self.rows.get(&k) {
                        let c = v[&k].clone();
                        sub_scaled(&mut v, row, &c);
                        changed = true;
                        break;
                    }
                }
                if !changed {
                    return v;
                }
                continue;
            };
            sub_scaled(&mut v, &row.clone(), &coeff);
        }
    }

    fn insert(&mut self, v: &Vect) {
        let r = self.reduce(v);
        if let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            let inv = lead.inv().expect("nonzero leading coefficient");
            let normalized: Vect = r.iter().map(|(k, c)| (k.clone(), c.mul(&inv))).collect();
            self.rows.insert(pivot, normalized);
        }
    }
}

fn sub_scaled(v: &mut Vect, row: &Vect, c: &CycScalar) {
    for (k, rc) in row {
        let delta = rc.mul(c);
        match v.entry(k.clone()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !delta.is_zero() {
                    e.insert(delta.neg());
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().sub(&delta);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes,
    Unknown,
}

#[derive(Clone, Copy, Debug)]
pub struct MembershipOpts {
    pub depth_bound: usize,
    pub mode_bound: i64,
    /// Cap on the exhaustive basis-tensor enumeration before switching to
    /// the closure strategy.
    pub max_exhaustive: usize,
    /// Closure rounds when enumeration is too large.
    pub rounds: u32,
}

impl MembershipOpts {
    /// Spec defaults: depth(v) + 2 and grade(v) + 4.
    pub fn for_vector(alg: &VlaPresentation, v: &TensorState) -> Self {
        let depth = v.terms().map(|(m, _)| m.total_depth()).max().unwrap_or(0);
        let grade: i64 = v
            .terms()
            .map(|(m, _)| {
                m.factors.iter().map(|f| f.grade(alg)).sum::<i64>()
                    + m.origin.as_ref().map_or(0, |o| o.grade(alg))
            })
            .max()
            .unwrap_or(0);
        MembershipOpts {
            depth_bound: depth + 2,
            mode_bound: grade + 4,
            max_exhaustive: 2500,
            rounds: 2,
        }
    }
}

/// Sound, bounded membership of the u-free vector v in the span of
/// { g . w } with g over swap functions of pole order <= mode_bound + 1 and w
/// over basis tensors within the bounds. Answers Yes only on exact linear
/// membership; anything else is Unknown.
pub fn little_image_membership(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    v: &TensorState,
    opts: &MembershipOpts,
) -> Result<Membership> {
    let target = tensor_to_vect(v)?;
    if target.is_empty() {
        return Ok(Membership::Yes);
    }
    let swaps = enumerate_swaps(alg, cfg, opts);
    let mut echelon = Echelon::default();
    let mut seen: BTreeSet<TensorMono> = BTreeSet::new();

    let mut candidates: Vec<TensorMono> = match enumerate_tensors(alg, cfg, opts) {
        Some(all) => all,
        None => {
            // Closure seeding: the target monomials and their sub-monomials.
            let mut w = BTreeSet::new();
            for m in target.keys() {
                sub_closure(m, opts.depth_bound, &mut w);
            }
            w.into_iter().collect()
        }
    };

    for round in 0..=opts.rounds {
        let mut new_monos: BTreeSet<TensorMono> = BTreeSet::new();
        for w in &candidates {
            if seen.contains(w) {
                continue;
            }
            seen.insert(w.clone());
            let wt = TensorState::monomial(w.clone(), RatFun::one());
            for g in &swaps {
                let col = g.act(alg, cfg, &wt);
                if col.is_zero() {
                    continue;
                }
                let vect = tensor_to_vect(&col)?;
                for k in vect.keys() {
                    new_monos.insert(k.clone());
                }
                echelon.insert(&vect);
            }
        }
        if echelon.reduce(&target).is_empty() {
            return Ok(Membership::Yes);
        }
        if round == opts.rounds {
            break;
        }
        let mut extended = BTreeSet::new();
        for m in new_monos {
            sub_closure(&m, opts.depth_bound, &mut extended);
        }
        candidates = extended.into_iter().filter(|m| !seen.contains(m)).collect();
        if candidates.is_empty() {
            break;
        }
    }
    Ok(Membership::Unknown)
}

fn enumerate_swaps(alg: &VlaPresentation, cfg: &MarkedConfig, opts: &MembershipOpts) -> Vec<SwapFunction> {
    let mut out = vec![];
    for g in 0..alg.generators.len() {
        for n in 0..=opts.mode_bound.max(0) {
            for i in 0..cfg.points.len() {
                out.push(SwapFunction { gen: g, pole: Some(i), n });
            }
            if cfg.origin && survives(alg, g, -n - 1) {
                out.push(SwapFunction { gen: g, pole: None, n });
            }
        }
    }
    out
}

/// Exhaustive basis tensors with total depth and per-mode bounds; None when
/// the count would exceed the cap.
fn enumerate_tensors(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    opts: &MembershipOpts,
) -> Option<Vec<TensorMono>> {
    let slots = cfg.points.len() + usize::from(cfg.origin);
    let per_slot: Vec<Vec<Vec<(usize, i64)>>> = (0..slots)
        .map(|s| {
            let twisted = cfg.origin && s == slots - 1;
            monomials_up_to(alg, opts.depth_bound, opts.mode_bound, twisted)
        })
        .collect();
    // Count tensors with total depth <= depth_bound.
    let mut count: usize = 0;
    let mut stack = vec![(0usize, 0usize, Vec::<Vec<(usize, i64)>>::new())];
    let mut out = vec![];
    while let Some((slot, used, acc)) = stack.pop() {
        if slot == slots {
            count += 1;
            if count > opts.max_exhaustive {
                return None;
            }
            let factors: Vec<Monomial> = acc[..cfg.points.len()].iter().cloned().map(Monomial).collect();
            let origin = cfg.origin.then(|| Monomial(acc[cfg.points.len()].clone()));
            out.push(TensorMono { factors, origin });
            continue;
        }
        for mono in &per_slot[slot] {
            if used + mono.len() > opts.depth_bound {
                continue;
            }
            let mut next = acc.clone();
            next.push(mono.clone());
            stack.push((slot + 1, used + mono.len(), next));
        }
    }
    Some(out)
}

/// Canonical monomials of depth <= depth with modes in [-mode_bound, -1]
/// (surviving ones when twisted), in nondecreasing key order.
fn monomials_up_to(
    alg: &VlaPresentation,
    depth: usize,
    mode_bound: i64,
    twisted: bool,
) -> Vec<Vec<(usize, i64)>> {
    let mut pairs: Vec<(usize, i64)> = vec![];
    for g in 0..alg.generators.len() {
        for n in (-mode_bound.max(1))..=-1 {
            if !twisted || survives(alg, g, n) {
                pairs.push((g, n));
            }
        }
    }
    pairs.sort_by_key(|&(g, n)| (n, g));
    let mut out: Vec<Vec<(usize, i64)>> = vec![vec![]];
    let mut layer: Vec<(usize, Vec<(usize, i64)>)> = vec![(0, vec![])];
    for _ in 0..depth {
        let mut next = vec![];
        for (start, mono) in &layer {
            for (i, &p) in pairs.iter().enumerate().skip(*start) {
                let mut m = mono.clone();
                m.push(p);
                out.push(m.clone());
                next.push((i, m));
            }
        }
        layer = next;
    }
    out
}

/// All tensors obtained from m by deleting factor subsets, capped by the
/// depth bound on the way back up (deletions only shrink, so the cap is for
/// the caller's seed set semantics).
fn sub_closure(m: &TensorMono, _depth_bound: usize, acc: &mut BTreeSet<TensorMono>) {
    if !acc.insert(m.clone()) {
        return;
    }
    for i in 0..m.factors.len() {
        for j in 0..m.factors[i].0.len() {
            let mut next = m.clone();
            next.factors[i].0.remove(j);
            sub_closure(&next, _depth_bound, acc);
        }
    }
    if let Some(o) = &m.origin {
        for j in 0..o.0.len() {
            let mut next = m.clone();
            next.origin.as_mut().unwrap().0.remove(j);
            sub_closure(&next, _depth_bound, acc);
        }
    }
}

/// The big Lie-algebra action of sum_alpha alpha.(A f) on a u-free tensor:
/// the residues of the twisted expansions of f against Y_M at each marked
/// point plus Y_W at the origin.
pub fn big_action(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    a: &State,
    f: &RatFun,
    tensor: &TensorState,
) -> Result<TensorState> {
    let t = alg.order;
    let mut out = TensorState::zero();
    for (mono, coeff) in tensor.terms() {
        let base = coeff
            .as_constant()
            .ok_or_else(|| EngineError::ConfigInvariant("big action needs a u-free tensor".into()))?;
        // Marked points.
        for (i, z) in cfg.points.iter().enumerate() {
            for k_alpha in 0..t {
                let alpha_inv = CycScalar::omega_pow(t, -(k_alpha as i64));
                // alpha^{-1} f(alpha^{-1} t), expanded at z_i.
                let g_fun = f.subst_linear(&alpha_inv, &CycScalar::zero()).scale(&alpha_inv);
                let ra = gamma_act_state(alg, k_alpha, a);
                let factor = State::from_monomial(ModuleKind::Untwisted, mono.factors[i].clone(), CycScalar::one());
                let n_hi = ra.grade_max(alg) + factor.grade_max(alg) - 1;
                let pole_ord = g_fun.pole_order(z) as i64;
                let exp = g_fun.laurent_expand(&ExpansionPoint::Finite(z.clone()), n_hi.max(0));
                for n in -pole_ord..=n_hi.max(-pole_ord) {
                    let Some(cn) = exp.coeff(n) else { continue };
                    if cn.is_zero() {
                        continue;
                    }
                    let acted = y_apply(alg, &ra, &factor, n);
                    if acted.is_zero() {
                        continue;
                    }
                    for (fm, fc) in acted.terms() {
                        let mut nm = mono.clone();
                        nm.factors[i] = fm.clone();
                        out.insert(nm, RatFun::constant(base.mul(&cn).mul(fc)));
                    }
                }
            }
        }
        // Origin through Y_W.
        if cfg.origin {
            let origin = mono.origin.as_ref().expect("origin factor");
            let factor = State::from_monomial(ModuleKind::Twisted, origin.clone(), CycScalar::one());
            let n_hi = a.grade_max(alg) + factor.grade_max(alg) - 1;
            let pole_ord = f.pole_order(&CycScalar::zero()) as i64;
            let exp = f.laurent_expand(&ExpansionPoint::Finite(CycScalar::zero()), n_hi.max(0));
            for n in -pole_ord..=n_hi.max(-pole_ord) {
                let Some(cn) = exp.coeff(n) else { continue };
                if cn.is_zero() {
                    continue;
                }
                let acted = yw_mode(alg, a, &factor, n);
                if acted.is_zero() {
                    continue;
                }
                for (fm, fc) in acted.terms() {
                    let mut nm = mono.clone();
                    nm.origin = Some(fm.clone());
                    out.insert(nm, RatFun::constant(base.mul(&cn).mul(fc)));
                }
            }
        }
    }
    Ok(out)
}

/// big = little: the big action vector must lie in the little image.
pub fn big_little_check(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    a: &State,
    f: &RatFun,
    tensor: &TensorState,
    opts: Option<MembershipOpts>,
) -> Result<std::result::Result<(), Witness>> {
    if !cfg.origin {
        return Err(EngineError::ConfigInvariant(
            "big_little_check requires the origin module".into(),
        ));
    }
    let v = big_action(alg, cfg, a, f, tensor)?;
    let opts = opts.unwrap_or_else(|| MembershipOpts::for_vector(alg, &v));
    match little_image_membership(alg, cfg, &v, &opts)? {
        Membership::Yes => Ok(Ok(())),
        Membership::Unknown => Ok(Err(Witness {
            location: "big action not recognized in the little image".into(),
            lhs: v.display(alg),
            rhs: format!("bounds {:?}", opts),
        })),
    }
}

/// Expand the reduced class at u = z_i to order K and compare against the
/// Y_M series at factor i; every order's difference must be in the little
/// image.
pub fn ym_consistency(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    a: &State,
    tensor: &TensorState,
    i: usize,
    k: i64,
) -> Result<std::result::Result<(), Witness>> {
    let reduced = swap_reduce(alg, cfg, a, tensor)?;
    let zi = &cfg.points[i];
    let at = ExpansionPoint::Finite(zi.clone());
    // Lower order: the Y_M series pole is bounded by grade, and so are the
    // reduced coefficients' poles at z_i.
    let mut j_lo = -(a.grade_max(alg) + tensor.factor_grade_max(alg, i)).min(0);
    for (_, c) in reduced.terms() {
        j_lo = j_lo.min(-(c.pole_order(zi) as i64));
    }
    for j in j_lo..=k {
        // Reduced side coefficient.
        let mut red_j = TensorState::zero();
        for (m, c) in reduced.terms() {
            let coeff = c
                .laurent_expand(&at, j)
                .coeff(j)
                .unwrap_or_else(CycScalar::zero);
            red_j.insert(m.clone(), RatFun::constant(coeff));
        }
        // Y_M side at factor i.
        let mut ym_j = TensorState::zero();
        for (m, c) in tensor.terms() {
            let base = c.as_constant().ok_or_else(|| {
                EngineError::ConfigInvariant("ym_consistency needs a u-free tensor".into())
            })?;
            let factor =
                State::from_monomial(ModuleKind::Untwisted, m.factors[i].clone(), CycScalar::one());
            let acted = y_apply(alg, a, &factor, -j - 1);
            for (fm, fc) in acted.terms() {
                let mut nm = m.clone();
                nm.factors[i] = fm.clone();
                ym_j.insert(nm, RatFun::constant(base.mul(fc)));
            }
        }
        let diff = red_j.sub(&ym_j);
        if diff.is_zero() {
            continue;
        }
        let opts = MembershipOpts::for_vector(alg, &diff);
        if little_image_membership(alg, cfg, &diff, &opts)? == Membership::Unknown {
            return Ok(Err(Witness {
                location: format!("Y_M consistency at order (u - z_{i})^{j}"),
                lhs: diff.display(alg),
                rhs: "a little-image vector".into(),
            }));
        }
    }
    Ok(Ok(()))
}

/// Same comparison at u = 0 against the Y_W series on the origin factor.
pub fn yw_consistency(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    a: &State,
    tensor: &TensorState,
    k: i64,
) -> Result<std::result::Result<(), Witness>> {
    if !cfg.origin {
        return Err(EngineError::ConfigInvariant("yw_consistency requires the origin".into()));
    }
    let reduced = swap_reduce(alg, cfg, a, tensor)?;
    let zero = CycScalar::zero();
    let at = ExpansionPoint::Finite(zero.clone());
    let mut j_lo = crate::quasi::pole_floor(alg, a, &State::vacuum(ModuleKind::Twisted))
        - tensor.origin_grade_max(alg);
    for (_, c) in reduced.terms() {
        j_lo = j_lo.min(-(c.pole_order(&zero) as i64));
    }
    for j in j_lo..=k {
        let mut red_j = TensorState::zero();
        for (m, c) in reduced.terms() {
            let coeff = c.laurent_expand(&at, j).coeff(j).unwrap_or_else(CycScalar::zero);
            red_j.insert(m.clone(), RatFun::constant(coeff));
        }
        let mut yw_j = TensorState::zero();
        for (m, c) in tensor.terms() {
            let base = c.as_constant().ok_or_else(|| {
                EngineError::ConfigInvariant("yw_consistency needs a u-free tensor".into())
            })?;
            let origin = m.origin.as_ref().expect("origin factor");
            let factor = State::from_monomial(ModuleKind::Twisted, origin.clone(), CycScalar::one());
            let acted = yw_mode(alg, a, &factor, -j - 1);
            for (fm, fc) in acted.terms() {
                let mut nm = m.clone();
                nm.origin = Some(fm.clone());
                yw_j.insert(nm, RatFun::constant(base.mul(fc)));
            }
        }
        let diff = red_j.sub(&yw_j);
        if diff.is_zero() {
            continue;
        }
        let opts = MembershipOpts::for_vector(alg, &diff);
        if little_image_membership(alg, cfg, &diff, &opts)? == Membership::Unknown {
            return Ok(Err(Witness {
                location: format!("Y_W consistency at order u^{j}"),
                lhs: diff.display(alg),
                rhs: "a little-image vector".into(),
            }));
        }
    }
    Ok(Ok(()))
}

/// swap_reduce(A)(u) = swap_reduce(R_alpha A)(alpha u) as exact rational
/// tensors.
pub fn alpha_u_check(
    alg: &VlaPresentation,
    cfg: &MarkedConfig,
    a: &State,
    tensor: &TensorState,
    k_alpha: u32,
) -> Result<std::result::Result<(), Witness>> {
    let lhs = swap_reduce(alg, cfg, a, tensor)?;
    let ra = gamma_act_state(alg, k_alpha, a);
    let alpha = CycScalar::omega_pow(alg.order, k_alpha as i64);
    let rhs = swap_reduce(alg, cfg, &ra, tensor)?.subst_u(&alpha);
    if lhs == rhs {
        Ok(Ok(()))
    } else {
        Ok(Err(Witness {
            location: format!("alpha-u relation at alpha = w^{k_alpha}"),
            lhs: lhs.display(alg),
            rhs: rhs.display(alg),
        }))
    }
}

/// The closed-form coefficient of the vacuum reproduction example:
/// the reduction of e(-1)e*(-1)|0> with no other marked points is
/// -(T-1)/(2u) times the empty tensor (zero when T = 1).
pub fn need0_expected(t: u32) -> RatFun {
    if t == 1 {
        return RatFun::zero();
    }
    let num = Poly::constant(CycScalar::from_rat(crate::cycfield::scalar::rat(
        -((t as i64) - 1),
        2,
    )));
    RatFun::new(num, Poly::x()).expect("u != 0")
}

/// Outcome of the vacuum-example kernel demonstration.
#[derive(Debug, Clone)]
pub struct KernelDemo {
    /// The reduced coefficient of the empty tensor.
    pub little_coefficient: RatFun,
    /// Whether the big swap annihilated the class of A outright.
    pub big_class_vanishes: bool,
}

/// Without a module at the origin, big swapping kills the class of |0>:
/// swapping the composite state A = e(-1)e*(-1)|0> with the big algebra
/// annihilates [A] exactly (all corrections (R_alpha A)(n)|0> vanish by the
/// creation axiom), while the little reduction leaves -(T-1)/(2u) |0>.
pub fn need0_kernel_demo(alg: &VlaPresentation) -> Result<KernelDemo> {
    let t = alg.order;
    let e = alg.gen_index("e").ok_or_else(|| EngineError::InvalidAlgebra("expected generator e".into()))?;
    let es = alg.gen_index("e*").ok_or_else(|| EngineError::InvalidAlgebra("expected generator e*".into()))?;
    let a = crate::verma::from_mode_list(alg, ModuleKind::Untwisted, &[(e, -1), (es, -1)])?;
    let cfg = MarkedConfig::new(alg, vec![], false)?;
    let reduced = swap_reduce(alg, &cfg, &a, &TensorState::monomial(
        TensorMono { factors: vec![], origin: None },
        RatFun::one(),
    ))?;
    let little_coefficient = reduced
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(RatFun::zero);
    // Big swap of A at u against the vacuum: every correction term
    // (R_alpha A)(n) |0> for n >= 0 vanishes, so [A]_big = 0.
    let vacuum = State::vacuum(ModuleKind::Untwisted);
    let mut corrections_vanish = true;
    for k_alpha in 1..t {
        let ra = gamma_act_state(alg, k_alpha, &a);
        for n in 0..=(a.grade_max(alg)).max(0) {
            if !y_apply(alg, &ra, &vacuum, n).is_zero() {
                corrections_vanish = false;
            }
        }
    }
    Ok(KernelDemo {
        little_coefficient,
        big_class_vanishes: corrections_vanish,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::scalar::rat;
    use crate::verma::from_mode_list;
    use crate::vla::{heisenberg_sl2, preset, virasoro};

    fn ust(alg: &VlaPresentation, modes: &[(usize, i64)]) -> State {
        from_mode_list(alg, ModuleKind::Untwisted, modes).unwrap()
    }

    #[test]
    fn config_validation() {
        let aff = preset("affine_sl2", 4, None).unwrap();
        assert!(MarkedConfig::new(&aff, vec![CycScalar::from_int(2)], true).is_ok());
        assert!(MarkedConfig::new(&aff, vec![CycScalar::zero()], false).is_err());
        // 2 and 2 w_4 share an orbit.
        let w2 = CycScalar::omega(4).mul(&CycScalar::from_int(2));
        assert!(MarkedConfig::new(&aff, vec![CycScalar::from_int(2), w2], false).is_err());
        assert!(MarkedConfig::new(&aff, vec![CycScalar::from_int(2), CycScalar::from_int(3)], false).is_ok());
    }

    #[test]
    fn vacuum_reduction_is_identity() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let cfg = MarkedConfig::new(&heis, vec![CycScalar::from_int(2)], true).unwrap();
        let tensor = TensorState::vacuum(&cfg);
        let got = swap_reduce(&heis, &cfg, &State::vacuum(ModuleKind::Untwisted), &tensor).unwrap();
        assert_eq!(got, tensor);
    }

    #[test]
    fn need0_closed_form() {
        for t in [2u32, 3, 4] {
            let heis = heisenberg_sl2(t, None).unwrap();
            let demo = need0_kernel_demo(&heis).unwrap();
            assert_eq!(demo.little_coefficient, need0_expected(t), "T = {t}");
            assert!(demo.big_class_vanishes, "T = {t}");
        }
        // T = 1: the class vanishes entirely.
        let heis = heisenberg_sl2(1, None).unwrap();
        let demo = need0_kernel_demo(&heis).unwrap();
        assert!(demo.little_coefficient.is_zero());
    }

    #[test]
    fn single_orbit_tail_expansion() {
        // T=1, one point z, A = a(-1)|0>: the reduction transfers the whole
        // field onto the marked point with coefficients (u-z)^{-n-1}.
        let heis = heisenberg_sl2(1, None).unwrap();
        let z = CycScalar::from_int(2);
        let cfg = MarkedConfig::new(&heis, vec![z.clone()], false).unwrap();
        let m = TensorMono { factors: vec![Monomial(vec![(1, -1)])], origin: None };
        let tensor = TensorState::monomial(m, RatFun::one());
        let a = ust(&heis, &[(0, -1)]);
        let got = swap_reduce(&heis, &cfg, &a, &tensor).unwrap();
        // e(0) e*(-1)|0> = |0>, higher modes vanish: expect 1/(u-z) * vacuum.
        let want = TensorState::monomial(
            TensorMono { factors: vec![Monomial::vacuum()], origin: None },
            RatFun::polar_term(CycScalar::one(), &z, 1),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn rationality_of_reductions() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let cfg = MarkedConfig::new(&heis, vec![CycScalar::from_int(2)], true).unwrap();
        let tensor = TensorState::vacuum(&cfg);
        let a = ust(&heis, &[(0, -1), (1, -2)]);
        let red = swap_reduce(&heis, &cfg, &a, &tensor).unwrap();
        rationality_check(&heis, &cfg, &red).unwrap_or_else(|w| panic!("{w}"));
    }

    #[test]
    fn residue_sums_vanish() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let z = CycScalar::from_int(2);
        let cfg = MarkedConfig::new(&heis, vec![z.clone()], true).unwrap();
        let tensor = TensorState::vacuum(&cfg);
        let a = ust(&heis, &[(0, -1), (1, -1)]);
        let red = swap_reduce(&heis, &cfg, &a, &tensor).unwrap();
        // f = 1/u^2.
        let f1 = RatFun::new(Poly::one(), Poly::monomial(CycScalar::one(), 2)).unwrap();
        residue_sum_check(&heis, &cfg, &red, &f1).unwrap_or_else(|w| panic!("{w}"));
        // The ideal generator sum_alpha 1/(u - alpha z) - T/u.
        let mut f2 = RatFun::zero();
        for k in 0..2 {
            let az = CycScalar::omega_pow(2, k).mul(&z);
            f2 = f2.add(&RatFun::polar_term(CycScalar::one(), &az, 1));
        }
        f2 = f2.sub(&RatFun::new(Poly::constant(CycScalar::from_int(2)), Poly::x()).unwrap());
        residue_sum_check(&heis, &cfg, &red, &f2).unwrap_or_else(|w| panic!("{w}"));
        // Constant A = |0>.
        let red0 = swap_reduce(&heis, &cfg, &State::vacuum(ModuleKind::Untwisted), &tensor).unwrap();
        residue_sum_check(&heis, &cfg, &red0, &f1).unwrap_or_else(|w| panic!("{w}"));
    }

    #[test]
    fn swap_columns_are_members() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let cfg = MarkedConfig::new(&heis, vec![CycScalar::from_int(2)], true).unwrap();
        let w = TensorMono {
            factors: vec![Monomial(vec![(1, -1)])],
            origin: Some(Monomial(vec![(0, -1)])),
        };
        let g = SwapFunction { gen: 0, pole: Some(0), n: 0 };
        let col = g.act(&heis, &cfg, &TensorState::monomial(w, RatFun::one()));
        assert!(!col.is_zero());
        let opts = MembershipOpts::for_vector(&heis, &col);
        assert_eq!(
            little_image_membership(&heis, &cfg, &col, &opts).unwrap(),
            Membership::Yes
        );
        // Zero is always a member.
        assert_eq!(
            little_image_membership(&heis, &cfg, &TensorState::zero(), &opts).unwrap(),
            Membership::Yes
        );
    }

    #[test]
    fn vacuum_class_is_not_recognized_without_origin() {
        // In the vacuum-example configuration the class of |0> is genuinely
        // nonzero, so membership must stay Unknown at every tested bound.
        let heis = heisenberg_sl2(2, None).unwrap();
        let cfg = MarkedConfig::new(&heis, vec![CycScalar::from_int(2)], false).unwrap();
        let v = TensorState::vacuum(&cfg);
        let opts = MembershipOpts::for_vector(&heis, &v);
        assert_eq!(
            little_image_membership(&heis, &cfg, &v, &opts).unwrap(),
            Membership::Unknown
        );
    }

    #[test]
    fn little_relation_from_reduction_is_member() {
        // [A at z] + (T-1)/(2z) [vacuum at z] is a little-image vector in the
        // one-point vacuum-example configuration.
        let heis = heisenberg_sl2(2, None).unwrap();
        let z = CycScalar::from_int(2);
        let cfg = MarkedConfig::new(&heis, vec![z.clone()], false).unwrap();
        let a_mono = TensorMono {
            factors: vec![Monomial(vec![(0, -1), (1, -1)])],
            origin: None,
        };
        let vac = TensorMono { factors: vec![Monomial::vacuum()], origin: None };
        let mut v = TensorState::monomial(a_mono, RatFun::one());
        // + (T-1)/(2z) vacuum
        let c = CycScalar::from_rat(rat(1, 2)).mul(&z.inv().unwrap());
        v.insert(vac, RatFun::constant(c));
        let opts = MembershipOpts::for_vector(&heis, &v);
        assert_eq!(
            little_image_membership(&heis, &cfg, &v, &opts).unwrap(),
            Membership::Yes
        );
    }

    #[test]
    fn alpha_u_examples() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let cfg = MarkedConfig::new(&heis, vec![], false).unwrap();
        let tensor = TensorState::monomial(TensorMono { factors: vec![], origin: None }, RatFun::one());
        let a = ust(&heis, &[(0, -1), (1, -1)]);
        for k_alpha in 0..2 {
            alpha_u_check(&heis, &cfg, &a, &tensor, k_alpha)
                .unwrap()
                .unwrap_or_else(|w| panic!("{w}"));
        }
        // With a marked point and origin.
        let vir = virasoro(3, None).unwrap();
        let cfg = MarkedConfig::new(&vir, vec![CycScalar::from_int(2)], true).unwrap();
        let tensor = TensorState::vacuum(&cfg);
        let a = ust(&vir, &[(0, -1)]);
        for k_alpha in 0..3 {
            alpha_u_check(&vir, &cfg, &a, &tensor, k_alpha)
                .unwrap()
                .unwrap_or_else(|w| panic!("{w}"));
        }
    }

    #[test]
    fn ym_consistency_exact_at_t1() {
        // T=1, single point: the expansion equals the Y_M series exactly.
        let heis = heisenberg_sl2(1, None).unwrap();
        let cfg = MarkedConfig::new(&heis, vec![CycScalar::from_int(2)], false).unwrap();
        let m = TensorMono { factors: vec![Monomial(vec![(1, -1)])], origin: None };
        let tensor = TensorState::monomial(m, RatFun::one());
        let a = ust(&heis, &[(0, -1)]);
        ym_consistency(&heis, &cfg, &a, &tensor, 0, 4)
            .unwrap()
            .unwrap_or_else(|w| panic!("{w}"));
    }

    #[test]
    fn ym_consistency_with_quotient() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let cfg = MarkedConfig::new(&heis, vec![CycScalar::from_int(2)], true).unwrap();
        let tensor = TensorState::vacuum(&cfg);
        let a = ust(&heis, &[(0, -1), (1, -1)]);
        ym_consistency(&heis, &cfg, &a, &tensor, 0, 3)
            .unwrap()
            .unwrap_or_else(|w| panic!("{w}"));
    }

    #[test]
    fn yw_consistency_base_case() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let cfg = MarkedConfig::new(&heis, vec![CycScalar::from_int(2)], true).unwrap();
        let tensor = TensorState::vacuum(&cfg);
        let a = ust(&heis, &[(0, -1)]);
        yw_consistency(&heis, &cfg, &a, &tensor, 3)
            .unwrap()
            .unwrap_or_else(|w| panic!("{w}"));
    }

    #[test]
    fn yw_consistency_depth_two() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let cfg = MarkedConfig::new(&heis, vec![CycScalar::from_int(2)], true).unwrap();
        let tensor = TensorState::vacuum(&cfg);
        let a = ust(&heis, &[(0, -1), (1, -1)]);
        yw_consistency(&heis, &cfg, &a, &tensor, 3)
            .unwrap()
            .unwrap_or_else(|w| panic!("{w}"));
    }

    #[test]
    fn big_little_simple_swap() {
        // A = a(-1)|0>: the big action coincides with a little swap.
        let heis = heisenberg_sl2(2, None).unwrap();
        let z = CycScalar::from_int(2);
        let cfg = MarkedConfig::new(&heis, vec![z.clone()], true).unwrap();
        let tensor = TensorState::vacuum(&cfg);
        let a = ust(&heis, &[(0, -1)]);
        // f with poles in Gamma z and 0 and zero at infinity.
        let f = RatFun::polar_term(CycScalar::one(), &z, 1);
        big_little_check(&heis, &cfg, &a, &f, &tensor, None)
            .unwrap()
            .unwrap_or_else(|w| panic!("{w}"));
    }

    #[test]
    fn big_little_composite_state() {
        // The vacuum example with the origin module present: the composite
        // state's big action is recognized in the little image.
        let heis = heisenberg_sl2(2, None).unwrap();
        let z = CycScalar::from_int(2);
        let cfg = MarkedConfig::new(&heis, vec![z.clone()], true).unwrap();
        let tensor = TensorState::vacuum(&cfg);
        let a = ust(&heis, &[(0, -1), (1, -1)]);
        let f = RatFun::new(Poly::one(), Poly::x()).unwrap();
        big_little_check(&heis, &cfg, &a, &f, &tensor, None)
            .unwrap()
            .unwrap_or_else(|w| panic!("{w}"));
    }
}
