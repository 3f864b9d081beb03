//! The state-field correspondence Y on V(L): modes A_(n) computed through the
//! normal-ordered recursion, together with exact checkers for the Borcherds
//! identity, the mode commutator formula, locality, skew-symmetry,
//! translation compatibility and Gamma-equivariance.

use std::collections::BTreeMap;

use crate::cycfield::scalar::{binomial, factorial, rat_int, CycScalar};
use crate::modes::LoopElem;
use crate::verma::{apply_mode, gamma_act_state, translate, ModuleKind, State};
use crate::vla::{VlaElem, VlaPresentation};
use crate::{EngineError, Result};

/// A_(n) B for A, B in V(L) and any integer n.
///
/// A is peeled as b(-1) A' with b = (1/p!) D^p a in the algebra, and
/// (b(-1)A')_(n) C = sum_{k<0} b(k) (A'_(n-k-1) C)
///                 + sum_{k>=0} A'_(n-k-1) (b(k) C),
/// both sums truncated by the grading bounds.
pub fn y_apply(alg: &VlaPresentation, a: &State, b: &State, n: i64) -> State {
    debug_assert_eq!(a.kind, ModuleKind::Untwisted);
    debug_assert_eq!(b.kind, ModuleKind::Untwisted);
    let mut out = State::zero(ModuleKind::Untwisted);
    if b.is_zero() {
        return out;
    }
    for (mono, c) in a.terms() {
        out = out.add(&y_mono(alg, &mono.0, b, n).scale(c));
    }
    out
}

fn y_mono(alg: &VlaPresentation, factors: &[(usize, i64)], b: &State, n: i64) -> State {
    if factors.is_empty() {
        return if n == -1 { b.clone() } else { State::zero(ModuleKind::Untwisted) };
    }
    if b.is_zero() {
        return State::zero(ModuleKind::Untwisted);
    }
    let (g, m) = factors[0];
    let p = (-m - 1) as u32;
    let lead = VlaElem::generator(g)
        .d_pow(p)
        .scale_rat(&(rat_int(1) / factorial(p)));
    let lead_degree = alg.gen_degree(g) as i64 + p as i64;
    let rest = &factors[1..];
    let rest_grade: i64 = rest
        .iter()
        .map(|&(h, q)| alg.gen_degree(h) as i64 - q - 1)
        .sum();
    let gb = b.grade_max(alg);
    let mut out = State::zero(ModuleKind::Untwisted);
    // Creation part of the leading field.
    let k_lo = n - rest_grade - gb;
    for k in k_lo..=-1 {
        let inner = y_mono(alg, rest, b, n - k - 1);
        if inner.is_zero() {
            continue;
        }
        out = out.add(&apply_mode(alg, &LoopElem::from_vla_at_mode(&lead, k), &inner));
    }
    // Annihilation part, bounded by smoothness of b(k) on the argument.
    for k in 0..=(lead_degree + gb - 1).max(-1) {
        let moved = apply_mode(alg, &LoopElem::from_vla_at_mode(&lead, k), b);
        if moved.is_zero() {
            continue;
        }
        out = out.add(&y_mono(alg, rest, &moved, n - k - 1));
    }
    out
}

/// All modes A_(n) B for n in [lo, hi].
pub fn y_window(alg: &VlaPresentation, a: &State, b: &State, lo: i64, hi: i64) -> Vec<State> {
    (lo..=hi).map(|n| y_apply(alg, a, b, n)).collect()
}

/// A witness for a failed identity: which coefficient differs and both sides.
#[derive(Debug, Clone)]
pub struct Witness {
    pub location: String,
    pub lhs: String,
    pub rhs: String,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: lhs = {}, rhs = {}", self.location, self.lhs, self.rhs)
    }
}

pub type Check = std::result::Result<(), Witness>;

/// [A_(m), B_(n)] C = sum_k C(m,k) (A_(k) B)_(m+n-k) C, exact.
pub fn check_commutator(
    alg: &VlaPresentation,
    a: &State,
    b: &State,
    m: i64,
    n: i64,
    c: &State,
) -> Check {
    let lhs = y_apply(alg, a, &y_apply(alg, b, c, n), m)
        .sub(&y_apply(alg, b, &y_apply(alg, a, c, m), n));
    let kmax = (a.grade_max(alg) + b.grade_max(alg) - 1).max(-1);
    let mut rhs = State::zero(ModuleKind::Untwisted);
    for k in 0..=kmax {
        let ab = y_apply(alg, a, b, k);
        if ab.is_zero() {
            continue;
        }
        rhs = rhs.add(
            &y_apply(alg, &ab, c, m + n - k).scale(&CycScalar::from_rat(binomial(m, k as u32))),
        );
    }
    if lhs == rhs {
        Ok(())
    } else {
        Err(Witness {
            location: format!("[A_({m}), B_({n})]"),
            lhs: lhs.display(alg),
            rhs: rhs.display(alg),
        })
    }
}

/// Skew-symmetry A_(n) B = -sum_k (-1)^{n+k}/k! D^k (B_(n+k) A) for n >= 0.
pub fn check_skew(alg: &VlaPresentation, a: &State, b: &State, n: i64) -> Check {
    debug_assert!(n >= 0);
    let lhs = y_apply(alg, a, b, n);
    let kmax = (a.grade_max(alg) + b.grade_max(alg) - 1 - n).max(0);
    let mut rhs = State::zero(ModuleKind::Untwisted);
    for k in 0..=kmax {
        let mut inner = y_apply(alg, b, a, n + k);
        if inner.is_zero() {
            continue;
        }
        for _ in 0..k {
            inner = translate(alg, &inner);
        }
        let sign = if (n + k) % 2 == 0 { 1 } else { -1 };
        rhs = rhs.add(&inner.scale(&CycScalar::from_rat(rat_int(-sign) / factorial(k as u32))));
    }
    if lhs == rhs {
        Ok(())
    } else {
        Err(Witness {
            location: format!("skew at n = {n}"),
            lhs: lhs.display(alg),
            rhs: rhs.display(alg),
        })
    }
}

/// (D A)_(n) = -n A_(n-1) as operators on the test state.
pub fn check_translation_compat(alg: &VlaPresentation, a: &State, b: &State, n: i64) -> Check {
    let lhs = y_apply(alg, &translate(alg, a), b, n);
    let rhs = y_apply(alg, a, b, n - 1).scale(&CycScalar::from_int(-n));
    if lhs == rhs {
        Ok(())
    } else {
        Err(Witness {
            location: format!("(DA)_({n})"),
            lhs: lhs.display(alg),
            rhs: rhs.display(alg),
        })
    }
}

/// grade(A_(n) B) = grade A + grade B - n - 1 on homogeneous inputs.
pub fn check_grading(alg: &VlaPresentation, a: &State, b: &State, n: i64) -> Check {
    let res = y_apply(alg, a, b, n);
    if res.is_zero() {
        return Ok(());
    }
    let want = a.grade(alg).unwrap_or(0) + b.grade(alg).unwrap_or(0) - n - 1;
    match res.grade(alg) {
        Ok(g) if g == want => Ok(()),
        got => Err(Witness {
            location: format!("grading of A_({n})B"),
            lhs: format!("{got:?}"),
            rhs: want.to_string(),
        }),
    }
}

/// R_alpha(A_(n) B) = alpha^{-n-1} (R_alpha A)_(n) (R_alpha B).
pub fn check_gamma_equivariance(
    alg: &VlaPresentation,
    k_alpha: u32,
    a: &State,
    b: &State,
    n: i64,
) -> Check {
    let t = alg.order;
    let lhs = gamma_act_state(alg, k_alpha, &y_apply(alg, a, b, n));
    let ra = gamma_act_state(alg, k_alpha, a);
    let rb = gamma_act_state(alg, k_alpha, b);
    let rhs =
        y_apply(alg, &ra, &rb, n).scale(&CycScalar::omega_pow(t, -(k_alpha as i64) * (n + 1)));
    if lhs == rhs {
        Ok(())
    } else {
        Err(Witness {
            location: format!("Gamma-equivariance at alpha = w^{k_alpha}, n = {n}"),
            lhs: lhs.display(alg),
            rhs: rhs.display(alg),
        })
    }
}

/// Smallest r >= 0 with (x-y)^r [Y(A,x), Y(B,y)] test = 0 over the
/// grading-bounded coefficient window. Errors past 2(gA+gB)+4, which would
/// signal an engine bug.
pub fn find_locality_order(
    alg: &VlaPresentation,
    a: &State,
    b: &State,
    test: &State,
) -> Result<u32> {
    let ga = a.grade_max(alg);
    let gb = b.grade_max(alg);
    let gc = test.grade_max(alg);
    let bound = (2 * (ga + gb) + 4).max(4) as u32;
    let cap = ga + gb + gc + 4;
    // Cache of [A_(s), B_(t)] test.
    let mut comm: BTreeMap<(i64, i64), State> = BTreeMap::new();
    let mut commutator = |s: i64, t: i64| -> State {
        comm.entry((s, t))
            .or_insert_with(|| {
                y_apply(alg, a, &y_apply(alg, b, test, t), s)
                    .sub(&y_apply(alg, b, &y_apply(alg, a, test, s), t))
            })
            .clone()
    };
    'outer: for r in 0..=bound {
        // Coefficient of x^{-m-1} y^{-n-1} in (x-y)^r [Y(A,x),Y(B,y)] test is
        // sum_j C(r,j) (-1)^j [A_(m+r-j), B_(n+j)] test. By the grading it
        // vanishes identically once m+n+r exceeds gA+gB+gC-2.
        for m in -cap..=cap {
            for n in -cap..=cap {
                if m + n + (r as i64) > ga + gb + gc - 2 {
                    continue;
                }
                let mut acc = State::zero(ModuleKind::Untwisted);
                for j in 0..=r {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    let coef = CycScalar::from_rat(binomial(r as i64, j) * rat_int(sign));
                    acc = acc.add(&commutator(m + r as i64 - j as i64, n + j as i64).scale(&coef));
                }
                if !acc.is_zero() {
                    continue 'outer;
                }
            }
        }
        return Ok(r);
    }
    Err(EngineError::LocalityBoundExceeded(bound))
}

/// Exact Borcherds identity check for f = x^p y^q (x-y)^r, compared
/// coefficientwise in y over `window` orders starting at the grading bound.
pub fn check_borcherds(
    alg: &VlaPresentation,
    a: &State,
    b: &State,
    c: &State,
    (p, q, r): (i64, i64, i64),
    window: u32,
) -> Check {
    let ga = a.grade_max(alg);
    let gb = b.grade_max(alg);
    let gc = c.grade_max(alg);
    let m_min = p + q + r + 1 - (ga + gb + gc);
    // Caches reused across the window.
    let mut ab_cache: BTreeMap<i64, State> = BTreeMap::new(); // k -> A_(k) B
    let mut bc_cache: BTreeMap<i64, State> = BTreeMap::new(); // t -> B_(t) C
    let mut ac_cache: BTreeMap<i64, State> = BTreeMap::new(); // s -> A_(s) C
    let mut a_bc: BTreeMap<(i64, i64), State> = BTreeMap::new(); // (s, t) -> A_(s) B_(t) C
    let mut b_ac: BTreeMap<(i64, i64), State> = BTreeMap::new(); // (t, s) -> B_(t) A_(s) C
    for m in m_min..m_min + window as i64 {
        // Left side: sum_i C(p,i) (A_(r+i) B)_(p+q-i-M-1) C.
        let mut lhs = State::zero(ModuleKind::Untwisted);
        for i in 0..=(ga + gb - 1 - r).max(-1) {
            let coef = binomial(p, i as u32);
            if coef == rat_int(0) {
                continue;
            }
            let abi = ab_cache
                .entry(r + i)
                .or_insert_with(|| y_apply(alg, a, b, r + i))
                .clone();
            if abi.is_zero() {
                continue;
            }
            lhs = lhs
                .add(&y_apply(alg, &abi, c, p + q - i - m - 1).scale(&CycScalar::from_rat(coef)));
        }
        // First right term: sum_j C(r,j) (-1)^j A_(p+r-j) B_(q+j-M-1) C.
        let mut rhs = State::zero(ModuleKind::Untwisted);
        let j_hi = {
            // B_(q+j-M-1) C = 0 once q+j-M-1 > gB+gC-1.
            let by_smooth = gb + gc + m - q;
            if r >= 0 {
                by_smooth.min(r)
            } else {
                by_smooth
            }
        };
        for j in 0..=j_hi.max(-1) {
            let coef = binomial(r, j as u32);
            if coef == rat_int(0) {
                continue;
            }
            let t = q + j - m - 1;
            let btc = bc_cache.entry(t).or_insert_with(|| y_apply(alg, b, c, t)).clone();
            if btc.is_zero() {
                continue;
            }
            let s = p + r - j;
            let full = a_bc.entry((s, t)).or_insert_with(|| y_apply(alg, a, &btc, s)).clone();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            rhs = rhs.add(&full.scale(&CycScalar::from_rat(coef * rat_int(sign))));
        }
        // Second right term: sum_j C(r,j) (-1)^{r-j} B_(q+r-j-M-1) A_(p+j) C.
        let j_hi2 = {
            let by_smooth = ga + gc - 1 - p;
            if r >= 0 {
                by_smooth.min(r)
            } else {
                by_smooth
            }
        };
        for j in 0..=j_hi2.max(-1) {
            let coef = binomial(r, j as u32);
            if coef == rat_int(0) {
                continue;
            }
            let s = p + j;
            let asc = ac_cache.entry(s).or_insert_with(|| y_apply(alg, a, c, s)).clone();
            if asc.is_zero() {
                continue;
            }
            let t = q + r - j - m - 1;
            let full = b_ac.entry((t, s)).or_insert_with(|| y_apply(alg, b, &asc, t)).clone();
            let sign = if (r - j).rem_euclid(2) == 0 { 1 } else { -1 };
            rhs = rhs.sub(&full.scale(&CycScalar::from_rat(coef * rat_int(sign))));
        }
        if lhs != rhs {
            return Err(Witness {
                location: format!("Borcherds f = x^{p} y^{q} (x-y)^{r} at y-order {m}"),
                lhs: lhs.display(alg),
                rhs: rhs.display(alg),
            });
        }
    }
    Ok(())
}

/// Support of the field Y(A,.)B as a map n -> A_(n)B over the grading-bounded
/// window [-(gA + gB + extra), gA + gB - 1].
pub fn ope_table(alg: &VlaPresentation, a: &State, b: &State, extra: u32) -> Vec<(i64, State)> {
    let ga = a.grade_max(alg);
    let gb = b.grade_max(alg);
    let hi = ga + gb - 1;
    let lo = -(ga + gb + extra as i64);
    let mut out = vec![];
    for n in lo..=hi.max(lo) {
        let v = y_apply(alg, a, b, n);
        if !v.is_zero() {
            out.push((n, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verma::from_mode_list;
    use crate::vla::{heisenberg_sl2, preset, virasoro, PRESET_NAMES};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn st(alg: &VlaPresentation, modes: &[(usize, i64)]) -> State {
        from_mode_list(alg, ModuleKind::Untwisted, modes).unwrap()
    }

    fn vac() -> State {
        State::vacuum(ModuleKind::Untwisted)
    }

    fn random_state(alg: &VlaPresentation, rng: &mut StdRng, max_depth: usize) -> State {
        let gens = alg.generators.len();
        let depth = rng.gen_range(0..=max_depth);
        let modes: Vec<(usize, i64)> = (0..depth)
            .map(|_| (rng.gen_range(0..gens), rng.gen_range(-3..=-1)))
            .collect();
        st(alg, &modes)
    }

    #[test]
    fn vacuum_axiom() {
        let vir = virasoro(1, None).unwrap();
        let b = st(&vir, &[(0, -2), (0, -1)]);
        for n in -4..=3 {
            let got = y_apply(&vir, &vac(), &b, n);
            if n == -1 {
                assert_eq!(got, b);
            } else {
                assert!(got.is_zero());
            }
        }
    }

    #[test]
    fn creation_axiom() {
        let mut rng = StdRng::seed_from_u64(3);
        for name in PRESET_NAMES {
            let alg = preset(name, 1, None).unwrap();
            for _ in 0..10 {
                let a = random_state(&alg, &mut rng, 3);
                assert_eq!(y_apply(&alg, &a, &vac(), -1), a, "{name}");
                for n in 0..3 {
                    assert!(y_apply(&alg, &a, &vac(), n).is_zero(), "{name}");
                }
            }
        }
    }

    #[test]
    fn generator_field_is_the_mode_action() {
        let mut rng = StdRng::seed_from_u64(5);
        for name in PRESET_NAMES {
            let alg = preset(name, 1, None).unwrap();
            let gens = alg.generators.len();
            for _ in 0..10 {
                let g = rng.gen_range(0..gens);
                let a = st(&alg, &[(g, -1)]);
                let b = random_state(&alg, &mut rng, 3);
                for n in -4..=4 {
                    assert_eq!(
                        y_apply(&alg, &a, &b, n),
                        apply_mode(&alg, &LoopElem::mode(g, n), &b),
                        "{name}"
                    );
                }
            }
        }
    }

    #[test]
    fn ope_affine_example() {
        // e(-1)|0> against f(-1)|0>: n=0 gives h(-1)|0>, n=1 gives |0>.
        let aff = preset("affine_sl2", 1, None).unwrap();
        let e = st(&aff, &[(0, -1)]);
        let f = st(&aff, &[(1, -1)]);
        assert_eq!(y_apply(&aff, &e, &f, 0), st(&aff, &[(2, -1)]));
        assert_eq!(y_apply(&aff, &e, &f, 1), vac());
        assert!(y_apply(&aff, &e, &f, 2).is_zero());
    }

    #[test]
    fn commutator_examples() {
        let vir = virasoro(1, None).unwrap();
        let w = st(&vir, &[(0, -1)]);
        assert!(check_commutator(&vir, &w, &w, 2, -2, &vac()).is_ok());
        // A = |0> makes both sides vanish.
        assert!(check_commutator(&vir, &vac(), &w, 1, 1, &w).is_ok());
        // On |0> the commutator [w(3), w(-1)] leaves only the central part of
        // [w[2], w[-2]], namely (1/2)|0>.
        let lhs = y_apply(&vir, &w, &y_apply(&vir, &w, &vac(), -1), 3);
        assert_eq!(
            lhs,
            vac().scale(&CycScalar::from_rat(crate::cycfield::scalar::rat(1, 2)))
        );
    }

    #[test]
    fn commutator_random_battery() {
        let mut rng = StdRng::seed_from_u64(7);
        for name in PRESET_NAMES {
            let alg = preset(name, 1, None).unwrap();
            for _ in 0..12 {
                let a = random_state(&alg, &mut rng, 2);
                let b = random_state(&alg, &mut rng, 2);
                let c = random_state(&alg, &mut rng, 2);
                let m = rng.gen_range(-4..=4);
                let n = rng.gen_range(-4..=4);
                check_commutator(&alg, &a, &b, m, n, &c).unwrap_or_else(|w| panic!("{name}: {w}"));
            }
        }
    }

    #[test]
    fn skew_symmetry_examples() {
        let vir = virasoro(1, None).unwrap();
        let w = st(&vir, &[(0, -1)]);
        // n = 1: both sides are 2 w(-1)|0>.
        assert_eq!(y_apply(&vir, &w, &w, 1), w.scale(&CycScalar::from_int(2)));
        assert!(check_skew(&vir, &w, &w, 1).is_ok());
        // B = |0>: both sides vanish for n >= 0.
        assert!(check_skew(&vir, &w, &vac(), 0).is_ok());
        let aff = preset("affine_sl2", 1, None).unwrap();
        let e = st(&aff, &[(0, -1)]);
        let f = st(&aff, &[(1, -1)]);
        assert!(check_skew(&aff, &e, &f, 0).is_ok());
    }

    #[test]
    fn skew_random_battery() {
        let mut rng = StdRng::seed_from_u64(9);
        for name in PRESET_NAMES {
            let alg = preset(name, 1, None).unwrap();
            for _ in 0..12 {
                let a = random_state(&alg, &mut rng, 2);
                let b = random_state(&alg, &mut rng, 2);
                let n = rng.gen_range(0..=4);
                check_skew(&alg, &a, &b, n).unwrap_or_else(|w| panic!("{name}: {w}"));
            }
        }
    }

    #[test]
    fn locality_orders() {
        let heis = heisenberg_sl2(1, None).unwrap();
        let e = st(&heis, &[(0, -1)]);
        let es = st(&heis, &[(1, -1)]);
        let test = st(&heis, &[(0, -1)]);
        assert_eq!(find_locality_order(&heis, &e, &es, &test).unwrap(), 1);
        let vir = virasoro(1, None).unwrap();
        let w = st(&vir, &[(0, -1)]);
        assert_eq!(find_locality_order(&vir, &w, &w, &w).unwrap(), 4);
        assert_eq!(find_locality_order(&vir, &vac(), &w, &w).unwrap(), 0);
    }

    #[test]
    fn translation_compatibility() {
        let mut rng = StdRng::seed_from_u64(13);
        for name in PRESET_NAMES {
            let alg = preset(name, 1, None).unwrap();
            for _ in 0..10 {
                let a = random_state(&alg, &mut rng, 2);
                let b = random_state(&alg, &mut rng, 2);
                let n = rng.gen_range(-4..=4);
                check_translation_compat(&alg, &a, &b, n).unwrap_or_else(|w| panic!("{name}: {w}"));
            }
        }
    }

    #[test]
    fn grading_relation() {
        let mut rng = StdRng::seed_from_u64(17);
        for name in PRESET_NAMES {
            let alg = preset(name, 1, None).unwrap();
            for _ in 0..10 {
                let a = random_state(&alg, &mut rng, 2);
                let b = random_state(&alg, &mut rng, 2);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                if a.grade(&alg).is_err() || b.grade(&alg).is_err() {
                    continue;
                }
                let n = rng.gen_range(-4..=4);
                check_grading(&alg, &a, &b, n).unwrap_or_else(|w| panic!("{name}: {w}"));
            }
        }
    }

    #[test]
    fn gamma_equivariance_battery() {
        let mut rng = StdRng::seed_from_u64(19);
        for t in [2u32, 3, 4] {
            for name in PRESET_NAMES {
                let alg = preset(name, t, None).unwrap();
                for _ in 0..8 {
                    let a = random_state(&alg, &mut rng, 2);
                    let b = random_state(&alg, &mut rng, 2);
                    let n = rng.gen_range(-3..=3);
                    for k_alpha in 0..t {
                        check_gamma_equivariance(&alg, k_alpha, &a, &b, n)
                            .unwrap_or_else(|w| panic!("{name} T={t}: {w}"));
                    }
                }
            }
        }
    }

    #[test]
    fn borcherds_normal_product_case() {
        // f = (x-y)^{-1} reduces to the normal-ordered product identity.
        let vir = virasoro(1, None).unwrap();
        let w = st(&vir, &[(0, -1)]);
        check_borcherds(&vir, &w, &w, &vac(), (0, 0, -1), 8).unwrap_or_else(|w| panic!("{w}"));
    }

    #[test]
    fn borcherds_commutator_case() {
        // f = x^m reduces to the mode-field commutator.
        let aff = preset("affine_sl2", 1, None).unwrap();
        let e = st(&aff, &[(0, -1)]);
        let f = st(&aff, &[(1, -1)]);
        for m in -2..=2 {
            check_borcherds(&aff, &e, &f, &e, (m, 0, 0), 8).unwrap_or_else(|w| panic!("{w}"));
        }
    }

    #[test]
    fn borcherds_plain_case() {
        let heis = heisenberg_sl2(1, None).unwrap();
        let e = st(&heis, &[(0, -1)]);
        let es = st(&heis, &[(1, -1)]);
        check_borcherds(&heis, &e, &es, &es, (0, 0, 0), 8).unwrap_or_else(|w| panic!("{w}"));
    }

    #[test]
    fn borcherds_random_battery() {
        let mut rng = StdRng::seed_from_u64(29);
        for name in PRESET_NAMES {
            let alg = preset(name, 1, None).unwrap();
            for _ in 0..6 {
                let a = random_state(&alg, &mut rng, 2);
                let b = random_state(&alg, &mut rng, 2);
                let c = random_state(&alg, &mut rng, 2);
                let p = rng.gen_range(-3..=3);
                let q = rng.gen_range(-3..=3);
                let r = rng.gen_range(-3..=0);
                check_borcherds(&alg, &a, &b, &c, (p, q, r), 6)
                    .unwrap_or_else(|w| panic!("{name}: {w}"));
            }
        }
    }

    #[test]
    fn iterate_consistency_with_depth_two() {
        // A = w(-2)w(-1)|0> acting on |0> at mode -1 recreates A.
        let vir = virasoro(1, None).unwrap();
        let a = st(&vir, &[(0, -2), (0, -1)]);
        assert_eq!(y_apply(&vir, &a, &vac(), -1), a);
    }
}
