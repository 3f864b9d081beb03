//! Verification suite batteries behind `verify --suite <name>`: seeded,
//! deterministic, exact. Each suite returns a RunReport with one entry per
//! case and witnesses for any failure.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cycfield::poly::Poly;
use crate::cycfield::ratfun::RatFun;
use crate::cycfield::scalar::{rat, CycScalar};
use crate::coinv::{
    alpha_u_check, big_little_check, little_image_membership, need0_expected, need0_kernel_demo,
    rationality_check, residue_sum_check, swap_reduce, ym_consistency, yw_consistency,
    MarkedConfig, Membership, MembershipOpts, TensorMono, TensorState,
};
use crate::fields::{
    check_borcherds, check_commutator, check_gamma_equivariance, check_grading, check_skew,
    check_translation_compat, find_locality_order, y_apply,
};
use crate::modes::{gamma_project, survives, LoopElem, TwistedElem};
use crate::quasi::{check_quasi_borcherds, check_wcom, check_yw_periodicity, pole_floor, yw_window};
use crate::report::{ReportBuilder, RunReport};
use crate::verma::{from_mode_list, ModuleKind, Monomial, State};
use crate::vla::{heisenberg_sl2, preset, virasoro, Generator, VlaElem, VlaPresentation, PRESET_NAMES};
use crate::{EngineError, Result};

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    /// Maximum depth of sampled states.
    pub depth: usize,
    /// Mode window half-width for sampled mode indices.
    pub modes: i64,
    /// Laurent truncation order for series comparisons.
    pub order: i64,
    /// Restrict to one group order, when set.
    pub t: Option<u32>,
    pub seed: u64,
    /// Minimum number of sampled cases for the randomized batteries.
    pub cases: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { depth: 3, modes: 4, order: 5, t: None, seed: 20260809, cases: 0 }
    }
}

pub const SUITE_NAMES: [&str; 15] = [
    "axioms",
    "borcherds",
    "commutator",
    "skew",
    "locality",
    "translation",
    "grading",
    "gamma",
    "wcom",
    "quasi-borcherds",
    "need0",
    "rationality",
    "ymyw",
    "biglittle",
    "alpha-u",
];

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<RunReport> {
    match name {
        "axioms" => Ok(suite_axioms(opts)),
        "borcherds" => Ok(suite_borcherds(opts)),
        "commutator" => Ok(suite_commutator(opts)),
        "skew" => Ok(suite_skew(opts)),
        "locality" => Ok(suite_locality(opts)),
        "translation" => Ok(suite_translation(opts)),
        "grading" => Ok(suite_grading(opts)),
        "gamma" => Ok(suite_gamma(opts)),
        "wcom" => Ok(suite_wcom(opts)),
        "quasi-borcherds" => Ok(suite_quasi_borcherds(opts)),
        "need0" => Ok(suite_need0(opts)),
        "rationality" => Ok(suite_rationality(opts)),
        "ymyw" => Ok(suite_ymyw(opts)),
        "biglittle" => Ok(suite_biglittle(opts)),
        "alpha-u" => Ok(suite_alpha_u(opts)),
        "t1" => Ok(suite_t1(opts)),
        other => Err(EngineError::Other(format!(
            "unknown suite '{other}'; expected one of {:?} or t1",
            SUITE_NAMES
        ))),
    }
}

fn orders(opts: &SuiteOptions, default: &[u32]) -> Vec<u32> {
    match opts.t {
        Some(t) => vec![t],
        None => default.to_vec(),
    }
}

fn random_untwisted(alg: &VlaPresentation, rng: &mut ChaCha8Rng, max_depth: usize, modes: i64) -> State {
    let gens = alg.generators.len();
    let depth = rng.gen_range(0..=max_depth);
    let picked: Vec<(usize, i64)> = (0..depth)
        .map(|_| (rng.gen_range(0..gens), -(rng.gen_range(1..=modes.max(1)))))
        .collect();
    from_mode_list(alg, ModuleKind::Untwisted, &picked).expect("untwisted build")
}

fn random_twisted(alg: &VlaPresentation, rng: &mut ChaCha8Rng, max_depth: usize) -> State {
    let gens = alg.generators.len();
    let t = alg.order as i64;
    let depth = rng.gen_range(0..=max_depth);
    let mut picked = vec![];
    for _ in 0..depth {
        let g = rng.gen_range(0..gens);
        let d = alg.gen_degree(g) as i64 + alg.sigma_exponent(g) as i64;
        // The largest surviving creation mode for g, then lower by multiples
        // of T.
        let mut n = d - 1;
        while n > -1 {
            n -= t;
        }
        n -= t * rng.gen_range(0..2);
        picked.push((g, n));
    }
    from_mode_list(alg, ModuleKind::Twisted, &picked).expect("twisted build")
}

/// Criterion: the axiom suite over all presets and group orders, plus the
/// corrupted-table negative control.
pub fn suite_axioms(opts: &SuiteOptions) -> RunReport {
    let mut rb = ReportBuilder::new("axioms", opts.seed).param("n_max", 6);
    for t in orders(opts, &[1, 2, 3, 4]) {
        for name in PRESET_NAMES {
            let alg = preset(name, t, None).expect("preset");
            let report = alg.check_axioms(6);
            rb.case(
                format!("{name} T={t}"),
                if report.passed() { Ok(()) } else { Err(report.to_string()) },
            );
        }
    }
    // Negative control: set w_(1)w = 3w in the Virasoro table.
    let generators = vec![Generator { name: "w".into(), degree: 2, sigma_exponent: 0 }];
    let mut products = std::collections::BTreeMap::new();
    products.insert((0, 0, 0), VlaElem::term(0, 1, CycScalar::one()));
    products.insert((0, 0, 1), VlaElem::term(0, 0, CycScalar::from_int(3)));
    products.insert((0, 0, 3), VlaElem::central(CycScalar::from_rat(rat(1, 2))));
    let broken = VlaPresentation::new("broken", 1, generators, "c", products).expect("builds");
    rb.case(
        "corrupted table rejected",
        if broken.check_axioms(6).passed() {
            Err("corrupted table passed the axiom check".into())
        } else {
            Ok(())
        },
    );
    rb.finish()
}

/// Criterion: the Borcherds identity on sampled states and exponents.
pub fn suite_borcherds(opts: &SuiteOptions) -> RunReport {
    let cases = if opts.cases > 0 { opts.cases } else { 210 };
    let mut rb = ReportBuilder::new("borcherds", opts.seed)
        .param("cases", cases)
        .param("depth", opts.depth)
        .param("exponents", "p,q in [-3,3], r in [-3,0]");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let per = cases.div_ceil(PRESET_NAMES.len());
    for name in PRESET_NAMES {
        let alg = preset(name, 1, None).expect("preset");
        for i in 0..per {
            let a = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let b = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let c = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let p = rng.gen_range(-3..=3);
            let q = rng.gen_range(-3..=3);
            let r = rng.gen_range(-3..=0);
            rb.case(
                format!("{name} case {i} f=x^{p}y^{q}(x-y)^{r}"),
                check_borcherds(&alg, &a, &b, &c, (p, q, r), 6).map_err(|w| w.to_string()),
            );
        }
    }
    rb.finish()
}

pub fn suite_commutator(opts: &SuiteOptions) -> RunReport {
    let cases = if opts.cases > 0 { opts.cases } else { 60 };
    let mut rb = ReportBuilder::new("commutator", opts.seed).param("cases", cases);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let per = cases.div_ceil(PRESET_NAMES.len());
    for name in PRESET_NAMES {
        let alg = preset(name, 1, None).expect("preset");
        for i in 0..per {
            let a = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let b = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let c = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let m = rng.gen_range(-opts.modes..=opts.modes);
            let n = rng.gen_range(-opts.modes..=opts.modes);
            rb.case(
                format!("{name} case {i} m={m} n={n}"),
                check_commutator(&alg, &a, &b, m, n, &c).map_err(|w| w.to_string()),
            );
        }
    }
    rb.finish()
}

pub fn suite_skew(opts: &SuiteOptions) -> RunReport {
    let cases = if opts.cases > 0 { opts.cases } else { 60 };
    let mut rb = ReportBuilder::new("skew", opts.seed).param("cases", cases);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let per = cases.div_ceil(PRESET_NAMES.len());
    for name in PRESET_NAMES {
        let alg = preset(name, 1, None).expect("preset");
        for i in 0..per {
            let a = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let b = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let n = rng.gen_range(0..=opts.modes);
            rb.case(
                format!("{name} case {i} n={n}"),
                check_skew(&alg, &a, &b, n).map_err(|w| w.to_string()),
            );
        }
    }
    rb.finish()
}

pub fn suite_locality(opts: &SuiteOptions) -> RunReport {
    let mut rb = ReportBuilder::new("locality", opts.seed);
    let heis = heisenberg_sl2(1, None).expect("preset");
    let e = from_mode_list(&heis, ModuleKind::Untwisted, &[(0, -1)]).unwrap();
    let es = from_mode_list(&heis, ModuleKind::Untwisted, &[(1, -1)]).unwrap();
    let test = from_mode_list(&heis, ModuleKind::Untwisted, &[(0, -1), (1, -2)]).unwrap();
    rb.case(
        "heisenberg primaries r=1",
        match find_locality_order(&heis, &e, &es, &test) {
            Ok(1) => Ok(()),
            other => Err(format!("expected 1, got {other:?}")),
        },
    );
    let vir = virasoro(1, None).expect("preset");
    let w = from_mode_list(&vir, ModuleKind::Untwisted, &[(0, -1)]).unwrap();
    rb.case(
        "virasoro self r=4",
        match find_locality_order(&vir, &w, &w, &w) {
            Ok(4) => Ok(()),
            other => Err(format!("expected 4, got {other:?}")),
        },
    );
    rb.case(
        "vacuum r=0",
        match find_locality_order(&vir, &State::vacuum(ModuleKind::Untwisted), &w, &w) {
            Ok(0) => Ok(()),
            other => Err(format!("expected 0, got {other:?}")),
        },
    );
    // Sampled pairs stay within the engine bound.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for name in PRESET_NAMES {
        let alg = preset(name, 1, None).expect("preset");
        for i in 0..3 {
            let a = random_untwisted(&alg, &mut rng, 2, 2);
            let b = random_untwisted(&alg, &mut rng, 2, 2);
            let c = random_untwisted(&alg, &mut rng, 1, 2);
            rb.case(
                format!("{name} sampled {i}"),
                find_locality_order(&alg, &a, &b, &c).map(|_| ()).map_err(|e| e.to_string()),
            );
        }
    }
    rb.finish()
}

pub fn suite_translation(opts: &SuiteOptions) -> RunReport {
    let cases = if opts.cases > 0 { opts.cases } else { 45 };
    let mut rb = ReportBuilder::new("translation", opts.seed).param("cases", cases);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let per = cases.div_ceil(PRESET_NAMES.len());
    for name in PRESET_NAMES {
        let alg = preset(name, 1, None).expect("preset");
        for i in 0..per {
            let a = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let b = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let n = rng.gen_range(-opts.modes..=opts.modes);
            rb.case(
                format!("{name} case {i} n={n}"),
                check_translation_compat(&alg, &a, &b, n).map_err(|w| w.to_string()),
            );
        }
    }
    rb.finish()
}

pub fn suite_grading(opts: &SuiteOptions) -> RunReport {
    let cases = if opts.cases > 0 { opts.cases } else { 45 };
    let mut rb = ReportBuilder::new("grading", opts.seed).param("cases", cases);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let per = cases.div_ceil(PRESET_NAMES.len());
    for name in PRESET_NAMES {
        let alg = preset(name, 1, None).expect("preset");
        for i in 0..per {
            let a = random_untwisted(&alg, &mut rng, opts.depth, 3);
            let b = random_untwisted(&alg, &mut rng, opts.depth, 3);
            if a.is_zero() || b.is_zero() || a.grade(&alg).is_err() || b.grade(&alg).is_err() {
                // Only homogeneous inputs are in scope.
                continue;
            }
            let n = rng.gen_range(-opts.modes..=opts.modes);
            rb.case(
                format!("{name} case {i} n={n}"),
                check_grading(&alg, &a, &b, n).map_err(|w| w.to_string()),
            );
        }
    }
    rb.finish()
}

pub fn suite_gamma(opts: &SuiteOptions) -> RunReport {
    let mut rb = ReportBuilder::new("gamma", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for t in orders(opts, &[1, 2, 3, 4]) {
        for name in PRESET_NAMES {
            let alg = preset(name, t, None).expect("preset");
            for i in 0..4 {
                let a = random_untwisted(&alg, &mut rng, opts.depth.min(3), 3);
                let b = random_untwisted(&alg, &mut rng, opts.depth.min(3), 3);
                let n = rng.gen_range(-opts.modes..=opts.modes);
                for k_alpha in 0..t {
                    rb.case(
                        format!("{name} T={t} case {i} alpha=w^{k_alpha} n={n}"),
                        check_gamma_equivariance(&alg, k_alpha, &a, &b, n).map_err(|w| w.to_string()),
                    );
                }
            }
        }
    }
    rb.finish()
}

/// Criterion: twisted-mode commutators through Y_W.
pub fn suite_wcom(opts: &SuiteOptions) -> RunReport {
    let mut rb = ReportBuilder::new("wcom", opts.seed).param("modes", opts.modes);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for t in orders(opts, &[1, 2, 3]) {
        for name in PRESET_NAMES {
            let alg = preset(name, t, None).expect("preset");
            for i in 0..6 {
                let a = random_untwisted(&alg, &mut rng, opts.depth.min(2), 3);
                let b = random_untwisted(&alg, &mut rng, opts.depth.min(2), 3);
                let w = random_twisted(&alg, &mut rng, 1);
                let m = rng.gen_range(-opts.modes..=opts.modes);
                let n = rng.gen_range(-opts.modes..=opts.modes);
                rb.case(
                    format!("{name} T={t} case {i} m={m} n={n}"),
                    check_wcom(&alg, &a, &b, m, n, &w).map_err(|wit| wit.to_string()),
                );
            }
        }
    }
    rb.finish()
}

/// Criterion: quasi-Borcherds with the clearing polynomial; k = 0 when T = 1
/// and k <= depth(A) + depth(B) + 2 in general.
pub fn suite_quasi_borcherds(opts: &SuiteOptions) -> RunReport {
    let cases = if opts.cases > 0 { opts.cases } else { 54 };
    let mut rb = ReportBuilder::new("quasi-borcherds", opts.seed).param("cases", cases);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ts = orders(opts, &[1, 2, 3]);
    let per = cases.div_ceil(ts.len() * PRESET_NAMES.len());
    let mut max_k_seen = 0u32;
    for &t in &ts {
        for name in PRESET_NAMES {
            let alg = preset(name, t, None).expect("preset");
            for i in 0..per {
                let a = random_untwisted(&alg, &mut rng, 2, 2);
                let b = random_untwisted(&alg, &mut rng, 2, 2);
                let w = random_twisted(&alg, &mut rng, 1);
                let p = rng.gen_range(-2..=2);
                let q = rng.gen_range(-2..=2);
                let r = rng.gen_range(-2..=0);
                let k_max = (a.depth() + b.depth() + 2) as u32;
                match check_quasi_borcherds(&alg, &a, &b, &w, (p, q, r), k_max, 5) {
                    Ok(k) => {
                        max_k_seen = max_k_seen.max(k);
                        if t == 1 && k != 0 {
                            rb.fail(
                                format!("{name} T=1 case {i}"),
                                format!("expected k = 0 at T = 1, found {k}"),
                            );
                        } else {
                            rb.pass();
                        }
                    }
                    Err(wit) => rb.fail(format!("{name} T={t} case {i}"), wit.to_string()),
                }
            }
        }
    }
    rb.note(format!("largest clearing power observed: k = {max_k_seen}"));
    rb.finish()
}

/// Criterion: the vacuum-example reproduction. The reduced coefficient is
/// -(T-1)/(2u) for T in {2,3,4}, zero at T = 1, and the big swap kills the
/// class of the vacuum without an origin module.
pub fn suite_need0(opts: &SuiteOptions) -> RunReport {
    let mut rb = ReportBuilder::new("need0", opts.seed);
    for t in orders(opts, &[1, 2, 3, 4]) {
        let alg = heisenberg_sl2(t, None).expect("preset");
        match need0_kernel_demo(&alg) {
            Ok(demo) => {
                let want = need0_expected(t);
                rb.case(
                    format!("T={t} reduced coefficient"),
                    if demo.little_coefficient == want {
                        Ok(())
                    } else {
                        Err(format!(
                            "expected {want}, found {}",
                            demo.little_coefficient
                        ))
                    },
                );
                if t > 1 {
                    rb.case(
                        format!("T={t} big swap kills the vacuum class"),
                        if demo.big_class_vanishes {
                            Ok(())
                        } else {
                            Err("a big correction term failed to vanish".into())
                        },
                    );
                }
            }
            Err(e) => rb.fail(format!("T={t}"), e.to_string()),
        }
    }
    rb.finish()
}

fn sample_points(rng: &mut ChaCha8Rng, alg: &VlaPresentation, count: usize) -> Option<Vec<CycScalar>> {
    let pool: [i64; 6] = [1, 2, 3, 5, -3, 7];
    for _ in 0..20 {
        let mut pts = vec![];
        for _ in 0..count {
            let v = pool[rng.gen_range(0..pool.len())];
            pts.push(CycScalar::from_int(v));
        }
        if MarkedConfig::new(alg, pts.clone(), false).is_ok() {
            return Some(pts);
        }
    }
    None
}

fn first_monomial(s: &State) -> Option<Monomial> {
    s.terms().next().map(|(m, _)| m.clone())
}

/// Criterion: rationality of every reduction plus exact residue-theorem sums
/// for a battery of admissible f per configuration.
pub fn suite_rationality(opts: &SuiteOptions) -> RunReport {
    let configs = if opts.cases > 0 { opts.cases } else { 54 };
    let mut rb = ReportBuilder::new("rationality", opts.seed)
        .param("configurations", configs)
        .param("f per configuration", 5);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ts = orders(opts, &[1, 2, 3]);
    let mut built = 0usize;
    'outer: loop {
        for &t in &ts {
            for name in PRESET_NAMES {
                if built >= configs {
                    break 'outer;
                }
                let alg = preset(name, t, None).expect("preset");
                let n_points = rng.gen_range(1..=2usize);
                let Some(points) = sample_points(&mut rng, &alg, n_points) else {
                    continue;
                };
                let origin = rng.gen_bool(0.5);
                let cfg = MarkedConfig::new(&alg, points.clone(), origin).expect("sampled valid");
                // Tensor of random small factors.
                let mut mono = TensorMono::vacuum(&cfg);
                for f in &mut mono.factors {
                    if let Some(m) = first_monomial(&random_untwisted(&alg, &mut rng, 1, 2)) {
                        *f = m;
                    }
                }
                if origin {
                    if let Some(m) = first_monomial(&random_twisted(&alg, &mut rng, 1)) {
                        mono.origin = Some(m);
                    }
                }
                let tensor = TensorState::monomial(mono, RatFun::one());
                let a = random_untwisted(&alg, &mut rng, opts.depth.min(3), 2);
                let reduced = match swap_reduce(&alg, &cfg, &a, &tensor) {
                    Ok(r) => r,
                    Err(e) => {
                        rb.fail(format!("{name} T={t} config {built}"), e.to_string());
                        built += 1;
                        continue;
                    }
                };
                rb.case(
                    format!("{name} T={t} config {built} rationality"),
                    rationality_check(&alg, &cfg, &reduced).map_err(|w| w.to_string()),
                );
                // Admissible f battery: poles in Gamma z and 0, zero at infinity.
                let mut fs: Vec<RatFun> = vec![
                    RatFun::new(Poly::one(), Poly::x()).unwrap(),
                    RatFun::new(Poly::one(), Poly::monomial(CycScalar::one(), 2)).unwrap(),
                ];
                for z in &points {
                    fs.push(RatFun::polar_term(CycScalar::one(), z, 1));
                }
                // The central ideal generator for the first point.
                let z0 = &points[0];
                let mut ideal = RatFun::zero();
                for k in 0..t {
                    let az = CycScalar::omega_pow(t, k as i64).mul(z0);
                    ideal = ideal.add(&RatFun::polar_term(CycScalar::one(), &az, 1));
                }
                ideal = ideal.sub(&RatFun::new(
                    Poly::constant(CycScalar::from_int(t as i64)),
                    Poly::x(),
                ).unwrap());
                fs.push(ideal);
                fs.push(RatFun::polar_term(CycScalar::one(), z0, 2));
                for (fi, f) in fs.iter().take(5.max(fs.len())).enumerate() {
                    rb.case(
                        format!("{name} T={t} config {built} residue f#{fi}"),
                        residue_sum_check(&alg, &cfg, &reduced, f).map_err(|w| w.to_string()),
                    );
                }
                built += 1;
            }
        }
    }
    rb.finish()
}

/// Criterion: expansion of the reduced class at a marked point and at the
/// origin agrees with Y_M and Y_W up to little swaps, to the configured
/// Laurent order.
pub fn suite_ymyw(opts: &SuiteOptions) -> RunReport {
    let mut rb = ReportBuilder::new("ymyw", opts.seed).param("order", opts.order);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ts = orders(opts, &[1, 2]);
    for &t in &ts {
        let algs = [heisenberg_sl2(t, None).unwrap(), virasoro(t, None).unwrap()];
        for alg in &algs {
            for i in 0..4 {
                let z = CycScalar::from_int([2, 3, 5, 7][i % 4]);
                let with_origin = t > 1 && i % 2 == 1;
                let cfg = MarkedConfig::new(alg, vec![z], with_origin).expect("valid");
                let mut mono = TensorMono::vacuum(&cfg);
                if i % 2 == 0 {
                    if let Some(m) = first_monomial(&random_untwisted(alg, &mut rng, 1, 2)) {
                        mono.factors[0] = m;
                    }
                }
                let tensor = TensorState::monomial(mono, RatFun::one());
                let a = random_untwisted(alg, &mut rng, 2, 2);
                rb.case(
                    format!("{} T={t} Y_M case {i}", alg.name),
                    match ym_consistency(alg, &cfg, &a, &tensor, 0, opts.order) {
                        Ok(check) => check.map_err(|w| w.to_string()),
                        Err(e) => Err(e.to_string()),
                    },
                );
                if with_origin {
                    rb.case(
                        format!("{} T={t} Y_W case {i}", alg.name),
                        match yw_consistency(alg, &cfg, &a, &tensor, opts.order) {
                            Ok(check) => check.map_err(|w| w.to_string()),
                            Err(e) => Err(e.to_string()),
                        },
                    );
                }
            }
        }
    }
    rb.finish()
}

/// Criterion: the big action of sampled global elements is always recognized
/// inside the little image when the origin module is present.
pub fn suite_biglittle(opts: &SuiteOptions) -> RunReport {
    let cases = if opts.cases > 0 { opts.cases } else { 20 };
    let mut rb = ReportBuilder::new("biglittle", opts.seed)
        .param("cases", cases)
        .param("membership bounds", "depth(v)+2 / grade(v)+4");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ts = orders(opts, &[2, 3]);
    let mut built = 0usize;
    'outer: while built < cases {
        for &t in &ts {
            for name in ["heisenberg_sl2", "virasoro"] {
                if built >= cases {
                    break 'outer;
                }
                let alg = preset(name, t, None).expect("preset");
                let z = CycScalar::from_int([2, 3, 5][built % 3]);
                let cfg = MarkedConfig::new(&alg, vec![z.clone()], true).expect("valid");
                let mut mono = TensorMono::vacuum(&cfg);
                if built % 2 == 0 {
                    if let Some(m) = first_monomial(&random_untwisted(&alg, &mut rng, 1, 2)) {
                        mono.factors[0] = m;
                    }
                }
                let tensor = TensorState::monomial(mono, RatFun::one());
                let a = random_untwisted(&alg, &mut rng, 2, 2);
                // f with poles in Gamma z u {0}, zero at infinity.
                let f = match built % 3 {
                    0 => RatFun::new(Poly::one(), Poly::x()).unwrap(),
                    1 => RatFun::polar_term(CycScalar::one(), &z, 1),
                    _ => RatFun::polar_term(CycScalar::one(), &z, 2),
                };
                rb.case(
                    format!("{name} T={t} case {built}"),
                    match big_little_check(&alg, &cfg, &a, &f, &tensor, None) {
                        Ok(check) => check.map_err(|w| w.to_string()),
                        Err(e) => Err(e.to_string()),
                    },
                );
                built += 1;
            }
        }
    }
    rb.finish()
}

/// Criterion: the alpha-u relation for the reduced classes and the
/// Gamma-periodicity of Y_W, for all alpha in Gamma.
pub fn suite_alpha_u(opts: &SuiteOptions) -> RunReport {
    let mut rb = ReportBuilder::new("alpha-u", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for t in orders(opts, &[2, 3, 4]) {
        for name in ["heisenberg_sl2", "virasoro"] {
            let alg = preset(name, t, None).expect("preset");
            for i in 0..4 {
                let with_origin = i % 2 == 1;
                let (points, tensor) = if i % 4 == 3 {
                    (vec![], TensorState::monomial(TensorMono { factors: vec![], origin: with_origin.then(Monomial::vacuum) }, RatFun::one()))
                } else {
                    let z = CycScalar::from_int([2, 3, 5][i % 3]);
                    let cfg_probe = MarkedConfig::new(&alg, vec![z.clone()], with_origin).expect("valid");
                    (vec![z], TensorState::vacuum(&cfg_probe))
                };
                let cfg = MarkedConfig::new(&alg, points, with_origin).expect("valid");
                let a = random_untwisted(&alg, &mut rng, 2, 2);
                for k_alpha in 0..t {
                    rb.case(
                        format!("{name} T={t} case {i} alpha=w^{k_alpha}"),
                        match alpha_u_check(&alg, &cfg, &a, &tensor, k_alpha) {
                            Ok(check) => check.map_err(|w| w.to_string()),
                            Err(e) => Err(e.to_string()),
                        },
                    );
                }
                // Y_W periodicity on the origin module.
                let aw = random_untwisted(&alg, &mut rng, 2, 2);
                let w = random_twisted(&alg, &mut rng, 1);
                let floor = pole_floor(&alg, &aw, &w);
                for k_alpha in 0..t {
                    rb.case(
                        format!("{name} T={t} periodicity case {i} alpha=w^{k_alpha}"),
                        check_yw_periodicity(&alg, &aw, &w, k_alpha, floor, 3)
                            .map_err(|wit| wit.to_string()),
                    );
                }
            }
        }
    }
    rb.finish()
}

/// Criterion: the whole Gamma apparatus collapses at T = 1.
pub fn suite_t1(opts: &SuiteOptions) -> RunReport {
    let mut rb = ReportBuilder::new("t1", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for name in PRESET_NAMES {
        let alg = preset(name, 1, None).expect("preset");
        let gens = alg.generators.len();
        // Projected modes coincide with plain modes.
        for g in 0..gens {
            for n in -3..=3 {
                rb.case(
                    format!("{name} projection {g}({n})"),
                    if gamma_project(&alg, g, n) == LoopElem::mode(g, n) {
                        Ok(())
                    } else {
                        Err("projection differs from the plain mode at T=1".into())
                    },
                );
            }
        }
        // Twisted brackets coincide with untwisted ones.
        for _ in 0..6 {
            let (g1, n1) = (rng.gen_range(0..gens), rng.gen_range(-3..=3));
            let (g2, n2) = (rng.gen_range(0..gens), rng.gen_range(-3..=3));
            let tw = TwistedElem::bracket(
                &alg,
                &TwistedElem::mode(&alg, g1, n1),
                &TwistedElem::mode(&alg, g2, n2),
            );
            let un = LoopElem::bracket(&alg, &LoopElem::mode(g1, n1), &LoopElem::mode(g2, n2));
            let mut realized = LoopElem::central_mode(tw.central.clone());
            for (&(g, q), c) in tw.terms() {
                realized = realized.add(&LoopElem::mode(g, q).scale(c));
            }
            rb.case(
                format!("{name} twisted bracket [{g1}({n1}),{g2}({n2})]"),
                if realized == un { Ok(()) } else { Err("bracket mismatch at T=1".into()) },
            );
        }
        // Y_W coincides with the Y series.
        for i in 0..4 {
            let a = random_untwisted(&alg, &mut rng, 2, 2);
            let wu = random_untwisted(&alg, &mut rng, 2, 2);
            let mut wt = State::zero(ModuleKind::Twisted);
            for (m, c) in wu.terms() {
                wt.insert(m.clone(), c.clone());
            }
            let floor = pole_floor(&alg, &a, &wt);
            let tw = yw_window(&alg, &a, &wt, floor, opts.order);
            let mut ok = Ok(());
            for (idx, coeff) in tw.iter().enumerate() {
                let j = floor + idx as i64;
                let un = y_apply(&alg, &a, &wu, -j - 1);
                let tw_terms: Vec<_> = coeff.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
                let un_terms: Vec<_> = un.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
                if tw_terms != un_terms {
                    ok = Err(format!("Y_W coefficient at order {j} differs from Y"));
                    break;
                }
            }
            rb.case(format!("{name} Y_W = Y series case {i}"), ok);
        }
        // Gamma sums collapse: R_alpha is the identity, and survives() holds
        // for every mode.
        for g in 0..gens {
            rb.case(
                format!("{name} survives all modes for gen {g}"),
                if (-4..=4).all(|n| survives(&alg, g, n)) {
                    Ok(())
                } else {
                    Err("a mode failed the T=1 congruence".into())
                },
            );
        }
        // Membership with an auxiliary reduction: swap_reduce of a(-1)|0> on
        // one marked point matches the direct tail (the T=1 collapse of the
        // swap function).
        let z = CycScalar::from_int(2);
        let cfg = MarkedConfig::new(&alg, vec![z.clone()], false).expect("valid");
        let tensor = TensorState::vacuum(&cfg);
        for g in 0..gens {
            let a = from_mode_list(&alg, ModuleKind::Untwisted, &[(g, -1)]).unwrap();
            let reduced = swap_reduce(&alg, &cfg, &a, &tensor).expect("reduce");
            // Oracle: sum_n (u-z)^{-n-1} a(n) acting at the point.
            let mut want = TensorState::zero();
            let bound = alg.gen_degree(g) as i64 - 1;
            for n in 0..=bound.max(-1) {
                let acted = tensor.apply_at_point(&alg, 0, &LoopElem::mode(g, n));
                if acted.is_zero() {
                    continue;
                }
                want = want.add(&acted.scale(&RatFun::polar_term(CycScalar::one(), &z, n as u32 + 1)));
            }
            rb.case(
                format!("{name} single-point reduction of gen {g}"),
                if reduced == want { Ok(()) } else { Err("reduction differs from the direct expansion".into()) },
            );
        }
    }
    // Membership sanity at T = 1: a swapped vector is recognized.
    let heis = heisenberg_sl2(1, None).expect("preset");
    let cfg = MarkedConfig::new(&heis, vec![CycScalar::from_int(2)], false).expect("valid");
    let v = {
        let g = crate::coinv::SwapFunction { gen: 0, pole: Some(0), n: 0 };
        let w = TensorState::monomial(
            TensorMono { factors: vec![Monomial(vec![(1, -1)])], origin: None },
            RatFun::one(),
        );
        g.act(&heis, &cfg, &w)
    };
    let opts_m = MembershipOpts::for_vector(&heis, &v);
    rb.case(
        "membership of a swapped vector at T=1",
        match little_image_membership(&heis, &cfg, &v, &opts_m) {
            Ok(Membership::Yes) => Ok(()),
            other => Err(format!("{other:?}")),
        },
    );
    rb.finish()
}
