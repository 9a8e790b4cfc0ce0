//! TOML job configuration.

use std::collections::BTreeMap;

use aglsm::algebra::{Poly, Rational};
use aglsm::engines::{TargetSpec, ToricSpec};
use aglsm::glsm::{GlsmModel, Matter, Variant};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub insertion: Option<String>,
    #[serde(default = "default_cutoff")]
    pub cutoff: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub roots: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fi_vector: Option<Vec<String>>,
    pub target: TargetConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matter: Vec<MatterConfig>,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

fn default_cutoff() -> u32 {
    3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Projective,
    ProjectiveCi,
    Concave,
    Toric,
    Hirzebruch,
    Grassmannian,
    GrassmannianCi,
    TstarGrassmannian,
    /// A raw model given by `gauge`, `matter`, `roots` and `fi_vector`.
    Glsm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Hypersurface or bundle degrees for `projective-ci` and `concave`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calabi_yau: Option<bool>,
    /// Toric charges, one row per homogeneous coordinate.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charges: Vec<Vec<i64>>,
    /// Bundle weights for `toric` and `grassmannian-ci`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bundle: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_insertion: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cone: Option<Vec<Vec<i64>>>,
    /// Hirzebruch twist.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeConfig {
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatterConfig {
    pub weight: Vec<i64>,
    #[serde(default)]
    pub r_charge: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<String>,
}

/// Exact parameters as `"p/q"` strings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
}

impl Params {
    fn is_empty(&self) -> bool {
        self.lambda.is_empty() && self.mu.is_none() && self.z.is_none()
    }
}

/// Validation failure, tagged with the config key it concerns.
#[derive(Debug)]
pub struct ConfigError {
    pub key: &'static str,
    pub message: String,
}

impl ConfigError {
    fn new(key: &'static str, message: impl Into<String>) -> Self {
        ConfigError { key, message: message.into() }
    }

    /// Prefixes the message with the line where `key` is set, when found.
    pub fn anchored(&self, text: &str) -> String {
        let leaf = self.key.rsplit('.').next().unwrap_or(self.key);
        let line = text.lines().position(|l| {
            let l = l.trim_start();
            l.starts_with(&format!("{leaf} ")) || l.starts_with(&format!("{leaf}=")) || l.starts_with(&format!("[{}]", self.key))
        });
        match line {
            Some(i) => format!("line {}: {}: {}", i + 1, self.key, self.message),
            None => format!("{}: {}", self.key, self.message),
        }
    }
}

type Res<T> = std::result::Result<T, ConfigError>;

pub enum Job {
    Target(TargetSpec),
    Raw(GlsmModel),
}

impl Job {
    pub fn insertion_vars(&self) -> Vec<String> {
        match self {
            Job::Target(t) => t.insertion_vars(),
            Job::Raw(m) => m.vars(),
        }
    }
}

pub struct Loaded {
    pub config: JobConfig,
    pub job: Job,
    pub params: BTreeMap<String, Rational>,
    pub variant: Variant,
}

fn rational(key: &'static str, s: &str) -> Res<Rational> {
    s.parse().map_err(|e| ConfigError::new(key, format!("{e}")))
}

fn need<T: Clone>(key: &'static str, v: &Option<T>) -> Res<T> {
    v.clone().ok_or_else(|| ConfigError::new(key, "required for this target kind"))
}

pub fn parse(text: &str) -> std::result::Result<JobConfig, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}

impl JobConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(self) -> Res<Loaded> {
        let mut params = BTreeMap::new();
        for (j, l) in self.params.lambda.iter().enumerate() {
            params.insert(format!("lambda{}", j + 1), rational("params.lambda", l)?);
        }
        if let Some(mu) = &self.params.mu {
            params.insert("mu".into(), rational("params.mu", mu)?);
        }
        if let Some(z) = &self.params.z {
            params.insert("z".into(), rational("params.z", z)?);
        }
        let job = self.job(&params)?;
        if let Job::Target(t) = &job {
            t.validate().map_err(|e| ConfigError::new("target", e.to_string()))?;
        }
        Ok(Loaded { variant: self.variant.unwrap_or(Variant::Plain), job, params, config: self })
    }

    fn job(&self, params: &BTreeMap<String, Rational>) -> Res<Job> {
        let t = &self.target;
        let eta = |default: usize| -> Res<Vec<Rational>> {
            match &t.eta {
                Some(v) => v.iter().map(|s| rational("target.eta", s)).collect(),
                None => Ok(vec![Rational::from(1); default]),
            }
        };
        let spec = match t.kind {
            Kind::Projective => TargetSpec::Projective { n: need("target.n", &t.n)? },
            Kind::ProjectiveCi => TargetSpec::ProjectiveCi {
                n: need("target.n", &t.n)?,
                degrees: t.degrees.clone(),
                calabi_yau: t.calabi_yau.unwrap_or(false),
            },
            Kind::Concave => TargetSpec::Concave { n: need("target.n", &t.n)?, degrees: t.degrees.clone() },
            Kind::Toric | Kind::Hirzebruch => {
                let mut spec = if t.kind == Kind::Hirzebruch {
                    ToricSpec::hirzebruch(need("target.a", &t.a)?)
                } else {
                    let rank = t.charges.first().map_or(0, |c| c.len());
                    ToricSpec::new(t.charges.clone(), eta(rank)?)
                }
                .map_err(|e| ConfigError::new("target.charges", e.to_string()))?;
                if t.kind == Kind::Hirzebruch && t.eta.is_some() {
                    spec.eta = eta(2)?;
                }
                if !t.bundle.is_empty() {
                    spec = spec
                        .with_bundle(t.bundle.clone(), t.euler_insertion.unwrap_or(false))
                        .map_err(|e| ConfigError::new("target.bundle", e.to_string()))?;
                }
                if let Some(cone) = &t.degree_cone {
                    spec = spec
                        .with_degree_cone(cone.clone())
                        .map_err(|e| ConfigError::new("target.degree_cone", e.to_string()))?;
                }
                TargetSpec::Toric(spec)
            }
            Kind::Grassmannian => TargetSpec::Grassmannian { r: need("target.r", &t.r)?, n: need("target.n", &t.n)? },
            Kind::GrassmannianCi => TargetSpec::GrassmannianCi {
                r: need("target.r", &t.r)?,
                n: need("target.n", &t.n)?,
                bundle: t.bundle.clone(),
            },
            Kind::TstarGrassmannian => {
                let n = need("target.n", &t.n)?;
                let lambda: Vec<Rational> = (1..=n)
                    .map(|j| params.get(&format!("lambda{j}")).cloned())
                    .collect::<Option<_>>()
                    .ok_or_else(|| ConfigError::new("params.lambda", format!("need {n} values")))?;
                let mu = params.get("mu").cloned().ok_or_else(|| ConfigError::new("params.mu", "required"))?;
                TargetSpec::TstarGrassmannian { r: need("target.r", &t.r)?, n, lambda, mu }
            }
            Kind::Glsm => return self.raw_model(params).map(Job::Raw),
        };
        Ok(Job::Target(spec))
    }

    fn raw_model(&self, params: &BTreeMap<String, Rational>) -> Res<GlsmModel> {
        let rank = self.gauge.as_ref().ok_or_else(|| ConfigError::new("gauge.rank", "required for kind = \"glsm\""))?.rank;
        let names: Vec<&String> = params.keys().collect();
        let mut matter = Vec::new();
        for m in &self.matter {
            let mut field = Matter::new(m.weight.clone(), m.r_charge);
            if let Some(text) = &m.mass {
                let mass = Poly::parse(text, &names).map_err(|e| ConfigError::new("matter.mass", e.to_string()))?;
                field = field.with_mass(mass);
            }
            matter.push(field);
        }
        let eta = match &self.fi_vector {
            Some(v) => v.iter().map(|s| rational("fi_vector", s)).collect::<Res<_>>()?,
            None => return Err(ConfigError::new("fi_vector", "required for kind = \"glsm\"")),
        };
        let mut model = GlsmModel::new(rank, matter, self.roots.clone(), eta)
            .map_err(|e| ConfigError::new("matter", e.to_string()))?
            .with_params(params.clone());
        if let Some(cone) = &self.target.degree_cone {
            model = model.with_degree_cone(cone.clone()).map_err(|e| ConfigError::new("target.degree_cone", e.to_string()))?;
        }
        Ok(model)
    }
}

impl Loaded {
    pub fn insertion(&self) -> Res<Poly> {
        let text = self.config.insertion.as_deref().unwrap_or("").trim();
        if text.is_empty() {
            return Err(ConfigError::new("insertion", "insertion required"));
        }
        Poly::parse(text, &self.job.insertion_vars()).map_err(|e| ConfigError::new("insertion", e.to_string()))
    }
}
