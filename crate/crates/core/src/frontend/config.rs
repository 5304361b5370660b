//! JSON problem configuration.

use serde::{Deserialize, Serialize};

use super::parse::{parse_expr, parse_form, parse_jet_coordinate};
use super::render::Format;
use crate::brackets::poisson_multivector;
use crate::error::{Error, Result};
use crate::exterior::Metric;
use crate::hamiltonian::HamiltonianProblem;
use crate::jet::{JetContext, MultiIndex, DEFAULT_ORDER_CAP};
use crate::scalar::{parse_ratio, Rational, Scalar};

pub const CONFIG_SCHEMA_ID: &str = "jetbracket/config/v1";

/// A rational written either as a JSON integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn value(&self) -> Result<Rational> {
        match self {
            Number::Int(v) => Ok(Rational::from_i64(*v)),
            Number::Text(t) => parse_ratio(t).ok_or_else(|| Error::Config(format!("`{t}` is not a rational number"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberEntryConfig {
    /// Jet coordinate, e.g. `"u[1;1]"`.
    pub a: String,
    pub b: String,
    pub value: Number,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    /// Full `n × n` base block; identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<Vec<Number>>>,
    /// Explicit fiber entries; identity elsewhere.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fiber: Vec<FiberEntryConfig>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_indefinite_fiber: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaOrderConfig {
    /// Repeated 1-based base indices; `[]` is the empty multiindex.
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub value: Number,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub n: usize,
    pub m: usize,
    #[serde(default = "default_cap")]
    pub order_cap: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub opaque: Vec<String>,
    #[serde(default)]
    pub metric: MetricConfig,
    /// `m × m`; identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_fields: Option<Vec<Vec<Number>>>,
    /// First-order default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_orders: Option<Vec<EtaOrderConfig>>,
    pub chi: String,
    pub phi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

fn default_cap() -> usize {
    DEFAULT_ORDER_CAP
}

fn matrix(rows: &[Vec<Number>], size: usize, what: &str) -> Result<Vec<Vec<Rational>>> {
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(Error::Config(format!("{what} must be a {size}×{size} matrix")));
    }
    rows.iter().map(|r| r.iter().map(Number::value).collect()).collect()
}

fn identity(size: usize) -> Vec<Vec<Rational>> {
    (0..size).map(|i| (0..size).map(|j| Rational::from_i64((i == j) as i64)).collect()).collect()
}

fn multiindex(ctx: &JetContext, idx: &[usize]) -> Result<MultiIndex> {
    if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > ctx.n()) {
        return Err(Error::Range(format!("base index {bad} not in 1..={}", ctx.n())));
    }
    let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
    let index = MultiIndex::from_indices(ctx.n(), &zero_based)?;
    ctx.check_index(&index)?;
    Ok(index)
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(s) = &cfg.schema {
            if s != CONFIG_SCHEMA_ID {
                return Err(Error::Config(format!("unsupported schema `{s}` (expected `{CONFIG_SCHEMA_ID}`)")));
            }
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn output_format(&self) -> Result<Option<Format>> {
        self.format.as_deref().map(str::parse).transpose()
    }

    pub fn context(&self) -> Result<JetContext> {
        JetContext::with_cap(self.n, self.m, self.order_cap)?.with_opaque(&self.opaque)
    }

    pub fn metric(&self, ctx: &JetContext) -> Result<Metric<Rational>> {
        let base = match &self.metric.base {
            Some(rows) => matrix(rows, ctx.n(), "metric.base")?,
            None => identity(ctx.n()),
        };
        let mut fiber = Vec::new();
        for e in &self.metric.fiber {
            fiber.push((parse_jet_coordinate(&e.a, ctx)?, parse_jet_coordinate(&e.b, ctx)?, e.value.value()?));
        }
        Metric::new(base, fiber, self.metric.allow_indefinite_fiber)
    }

    pub fn to_problem(&self) -> Result<HamiltonianProblem<Rational>> {
        let ctx = self.context()?;
        let g = self.metric(&ctx)?;
        let fields = match &self.eta_fields {
            Some(rows) => matrix(rows, ctx.m(), "eta_fields")?,
            None => identity(ctx.m()),
        };
        let orders = match &self.eta_orders {
            None => None,
            Some(entries) => Some(
                entries
                    .iter()
                    .map(|e| Ok((multiindex(&ctx, &e.i)?, multiindex(&ctx, &e.j)?, e.value.value()?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let p = poisson_multivector(&fields, orders.as_deref(), &ctx)?;
        let chi = parse_expr(&self.chi, &ctx)?;
        let phi = parse_form(&self.phi, &ctx)?;
        HamiltonianProblem::new(ctx, chi, phi, p, g)
    }

    fn diagonal_metric(diag: &[i64]) -> MetricConfig {
        let n = diag.len();
        let base = (0..n).map(|i| (0..n).map(|j| Number::Int(if i == j { diag[i] } else { 0 })).collect()).collect();
        MetricConfig { base: Some(base), fiber: Vec::new(), allow_indefinite_fiber: false }
    }

    /// Configuration equivalent to [`HamiltonianProblem::oscillator`].
    pub fn oscillator() -> Self {
        Self {
            schema: Some(CONFIG_SCHEMA_ID.into()),
            n: 1,
            m: 1,
            order_cap: DEFAULT_ORDER_CAP,
            opaque: Vec::new(),
            metric: Self::diagonal_metric(&[-1]),
            eta_fields: Some(vec![vec![Number::Int(1)]]),
            eta_orders: None,
            chi: "1/2*u[1]^2".into(),
            phi: "u[1;1]".into(),
            format: Some("text".into()),
        }
    }

    /// Configuration equivalent to [`HamiltonianProblem::maxwell`], with the
    /// observable written out term by term.
    pub fn maxwell() -> Self {
        let preset = HamiltonianProblem::<Rational>::maxwell();
        let eta = [1, 1, 1, -1];
        let fields = (0..4).map(|i| (0..4).map(|j| Number::Int(if i == j { eta[i] } else { 0 })).collect()).collect();
        Self {
            schema: Some(CONFIG_SCHEMA_ID.into()),
            n: 4,
            m: 4,
            order_cap: DEFAULT_ORDER_CAP,
            opaque: ["j1", "j2", "j3", "j4"].map(String::from).to_vec(),
            metric: Self::diagonal_metric(&eta),
            eta_fields: Some(fields),
            eta_orders: None,
            chi: preset.chi().to_string(),
            phi: preset.phi().to_string(),
            format: Some("text".into()),
        }
    }
}
