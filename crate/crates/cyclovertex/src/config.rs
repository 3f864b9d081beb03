//! Structured-text configuration: custom algebra files and reduction
//! configurations, plus JSON forms of states and tensors for the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coinv::{MarkedConfig, TensorState};
use crate::cycfield::scalar::CycScalar;
use crate::verma::{ModuleKind, State};
use crate::vla::{preset, Generator, VlaElem, VlaPresentation, PRESET_NAMES};
use crate::{EngineError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub order: u32,
    pub generators: Vec<GeneratorConfig>,
    pub central: String,
    pub products: Vec<ProductConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub name: String,
    pub degree: u32,
    #[serde(default)]
    pub sigma_exponent: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductConfig {
    pub a: String,
    pub b: String,
    pub n: u32,
    pub value: Vec<ValueTerm>,
}

/// One summand of a product-table entry: a D-power of a generator or a
/// central multiple. Coefficients use the scalar text form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueTerm {
    Gen {
        gen: String,
        #[serde(default)]
        dpow: u32,
        coeff: String,
    },
    Central { central: String },
}

impl AlgebraConfig {
    pub fn build(&self, name: impl Into<String>) -> Result<VlaPresentation> {
        let generators: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                degree: g.degree,
                sigma_exponent: g.sigma_exponent % self.order.max(1),
            })
            .collect();
        let index = |name: &str| -> Result<usize> {
            generators
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| EngineError::InvalidAlgebra(format!("unknown generator '{name}'")))
        };
        let mut products = BTreeMap::new();
        for p in &self.products {
            let a = index(&p.a)?;
            let b = index(&p.b)?;
            let mut elem = VlaElem::zero();
            for term in &p.value {
                match term {
                    ValueTerm::Gen { gen, dpow, coeff } => {
                        elem.insert(index(gen)?, *dpow, CycScalar::parse(self.order, coeff)?);
                    }
                    ValueTerm::Central { central } => {
                        elem = elem.add(&VlaElem::central(CycScalar::parse(self.order, central)?));
                    }
                }
            }
            products.insert((a, b, p.n), elem);
        }
        VlaPresentation::new(name, self.order, generators, self.central.clone(), products)
    }
}

/// Load an algebra by preset name or from a JSON config file. Custom
/// algebras are axiom-checked on load.
pub fn load_algebra(spec: &str, t: u32, sigma: Option<Vec<u32>>) -> Result<VlaPresentation> {
    if PRESET_NAMES.contains(&spec) {
        return preset(spec, t, sigma);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| EngineError::InvalidAlgebra(format!("cannot read '{spec}': {e}")))?;
    let cfg: AlgebraConfig = serde_json::from_str(&text)
        .map_err(|e| EngineError::InvalidAlgebra(format!("bad algebra config: {e}")))?;
    let alg = cfg.build(spec)?;
    let report = alg.check_axioms(6);
    if !report.passed() {
        return Err(EngineError::InvalidAlgebra(format!(
            "axiom check failed on load:\n{report}"
        )));
    }
    Ok(alg)
}

/// Reduction configuration: algebra, group order, marked points, origin flag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReduceConfig {
    pub algebra: String,
    #[serde(rename = "T")]
    pub t: u32,
    #[serde(default)]
    pub sigma: Option<Vec<u32>>,
    /// Scalar text forms: "p/q" or "[p/q, ...]".
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub origin: bool,
}

impl ReduceConfig {
    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EngineError::ConfigInvariant(format!("cannot read '{path}': {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| EngineError::ConfigInvariant(format!("bad reduce config: {e}")))
    }

    pub fn build(&self) -> Result<(VlaPresentation, MarkedConfig)> {
        let alg = load_algebra(&self.algebra, self.t, self.sigma.clone())?;
        let points = self
            .points
            .iter()
            .map(|s| CycScalar::parse(self.t, s))
            .collect::<Result<Vec<_>>>()?;
        let cfg = MarkedConfig::new(&alg, points, self.origin)?;
        Ok((alg, cfg))
    }
}

/// JSON form of a state: a list of {monomial, coeff} records.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub twisted: bool,
    pub terms: Vec<StateTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateTermJson {
    pub monomial: Vec<ModeJson>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeJson {
    pub gen: String,
    pub mode: i64,
}

pub fn state_to_json(alg: &VlaPresentation, v: &State) -> StateJson {
    StateJson {
        twisted: v.kind == ModuleKind::Twisted,
        terms: v
            .terms()
            .map(|(m, c)| StateTermJson {
                monomial: m
                    .0
                    .iter()
                    .map(|&(g, n)| ModeJson { gen: alg.generators[g].name.clone(), mode: n })
                    .collect(),
                coeff: c.to_string(),
            })
            .collect(),
    }
}

/// JSON form of a reduced tensor: factor monomials per point, the optional
/// origin monomial, and the rational coefficient in u.
#[derive(Debug, Clone, Serialize)]
pub struct TensorJson {
    pub terms: Vec<TensorTermJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorTermJson {
    pub factors: Vec<Vec<ModeJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<ModeJson>>,
    pub coeff: crate::cycfield::ratfun::RatFun,
}

pub fn tensor_to_json(alg: &VlaPresentation, v: &TensorState) -> TensorJson {
    let modes = |m: &crate::verma::Monomial| -> Vec<ModeJson> {
        m.0.iter()
            .map(|&(g, n)| ModeJson { gen: alg.generators[g].name.clone(), mode: n })
            .collect()
    };
    TensorJson {
        terms: v
            .terms()
            .map(|(m, c)| TensorTermJson {
                factors: m.factors.iter().map(&modes).collect(),
                origin: m.origin.as_ref().map(&modes),
                coeff: c.clone(),
            })
            .collect(),
    }
}
