//! Experiment configuration.
//!
//! A config is one JSON object (schema in `schema/config.schema.json`).
//! Command-line flags override file fields section by section; grid flags
//! override single grids.

use std::path::{Path, PathBuf};

use aiprod_core::dynamics::SkillChain;
use aiprod_core::effort::ReliabilityModel;
use aiprod_core::functions::{CostFunction, Family, ProductionFunction, ProductionSpec};
use aiprod_core::literacy::LiteracyModel;
use aiprod_core::optim::linspace;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl ToString) -> Self {
        Self {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

/// Explicit points, or `n` evenly spaced points on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridDef {
    Points(Vec<f64>),
    Range { lo: f64, hi: f64, n: usize },
}

impl GridDef {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridDef::Points(v) => v.clone(),
            GridDef::Range { lo, hi, n } => linspace(*lo, *hi, *n),
        }
    }

    /// `lo:hi:n` or a comma-separated list.
    pub fn parse(text: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            [lo, hi, n] => Ok(GridDef::Range {
                lo: num(lo)?,
                hi: num(hi)?,
                n: n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?,
            }),
            [_] => text
                .split(',')
                .map(num)
                .collect::<Result<_, _>>()
                .map(GridDef::Points),
            _ => Err(format!("expected lo:hi:n or a comma list, got `{text}`")),
        }
    }

    fn validate(&self, path: &str) -> Result<(), ConfigError> {
        match self {
            GridDef::Points(v) => {
                if v.is_empty() {
                    return Err(ConfigError::new(path, "grid is empty"));
                }
                if let Some(i) = v.iter().position(|x| !x.is_finite()) {
                    return Err(ConfigError::new(
                        format!("{path}[{i}]"),
                        "not a finite number",
                    ));
                }
                if v.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(ConfigError::new(path, "points must increase strictly"));
                }
            }
            GridDef::Range { lo, hi, n } => {
                if *n == 0 {
                    return Err(ConfigError::new(format!("{path}.n"), "grid is empty"));
                }
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(ConfigError::new(path, "need finite lo <= hi"));
                }
                if *n > 1 && lo == hi {
                    return Err(ConfigError::new(path, "repeated points"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    /// Assistance levels (`a`, or `a_bar` under unreliability).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<GridDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<GridDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<GridDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<GridDef>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub production: Option<ProductionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<SkillChain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reliability: Option<ReliabilityModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literacy: Option<LiteracyModel>,
    #[serde(default)]
    pub grids: Grids,
    /// Add brute-force reference columns where a verb supports them.
    #[serde(default)]
    pub oracle: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Deserializes `text`, reporting the path of the first offending field
/// under `prefix`.
pub fn parse_json<T: DeserializeOwned>(text: &str, prefix: &str) -> Result<T, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner.as_str()) {
            (true, _) => inner,
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{inner}"),
        };
        ConfigError::new(path, e.into_inner())
    })
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(path.display().to_string(), e))?;
        parse_json(&text, "")
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(mut self, over: ExperimentConfig) -> Self {
        macro_rules! take {
            ($($f:ident).+) => {
                if over.$($f).+.is_some() {
                    self.$($f).+ = over.$($f).+;
                }
            };
        }
        take!(production);
        take!(cost);
        take!(chain);
        take!(reliability);
        take!(literacy);
        take!(grids.a);
        take!(grids.s);
        take!(grids.q);
        take!(grids.mu);
        take!(output_dir);
        take!(seed);
        self.oracle |= over.oracle;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = self
            .production
            .as_ref()
            .map(|s| s.build().map_err(|e| ConfigError::new("production", e)))
            .transpose()?;
        if let Some(c) = &self.cost {
            c.validate().map_err(|e| ConfigError::new("cost", e))?;
        }
        if let Some(ch) = &self.chain {
            ch.validate().map_err(|e| ConfigError::new("chain", e))?;
        }
        if let Some(r) = &self.reliability {
            ReliabilityModel::new(r.a_bar, r.q).map_err(|e| ConfigError::new("reliability", e))?;
        }
        if let Some(m) = &self.literacy {
            m.validate().map_err(|e| ConfigError::new("literacy", e))?;
            if let Some(p) = &p {
                match p.family() {
                    Family::PiecewiseLinearCapped { beta } if *beta == m.beta => {}
                    Family::PiecewiseLinearCapped { .. } => {
                        return Err(ConfigError::new(
                            "production.params.beta",
                            "must equal literacy.beta",
                        ))
                    }
                    _ => {
                        return Err(ConfigError::new(
                            "production.family",
                            "literacy requires piecewise_linear_capped production",
                        ))
                    }
                }
            }
        }
        for (name, g) in [
            ("a", &self.grids.a),
            ("s", &self.grids.s),
            ("q", &self.grids.q),
            ("mu", &self.grids.mu),
        ] {
            if let Some(g) = g {
                g.validate(&format!("grids.{name}"))?;
            }
        }
        Ok(())
    }

    pub fn production(&self, verb: &str) -> Result<ProductionFunction, ConfigError> {
        require(&self.production, "production", verb)?
            .build()
            .map_err(|e| ConfigError::new("production", e))
    }

    pub fn cost(&self, verb: &str) -> Result<CostFunction, ConfigError> {
        require(&self.cost, "cost", verb).copied()
    }

    pub fn chain(&self, verb: &str) -> Result<SkillChain, ConfigError> {
        require(&self.chain, "chain", verb).cloned()
    }

    pub fn literacy(&self, verb: &str) -> Result<LiteracyModel, ConfigError> {
        require(&self.literacy, "literacy", verb).copied()
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Model sections as canonical JSON; the production spec is normalized
    /// so equivalent inputs hash alike.
    pub fn model_value(&self) -> Value {
        let mut m = Map::new();
        if let Some(p) = self.production.as_ref().and_then(|s| s.build().ok()) {
            m.insert("production".into(), to_value(&p.to_spec()));
        }
        if let Some(c) = &self.cost {
            m.insert("cost".into(), to_value(c));
        }
        if let Some(c) = &self.chain {
            m.insert("chain".into(), to_value(c));
        }
        if let Some(r) = &self.reliability {
            m.insert("reliability".into(), to_value(r));
        }
        if let Some(l) = &self.literacy {
            m.insert("literacy".into(), to_value(l));
        }
        Value::Object(m)
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("model types serialize")
}

fn require<'a, T>(v: &'a Option<T>, name: &str, verb: &str) -> Result<&'a T, ConfigError> {
    v.as_ref()
        .ok_or_else(|| ConfigError::new(name, format!("section required by `{verb}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_text_forms() {
        assert_eq!(
            GridDef::parse("0:1:3").unwrap().values(),
            vec![0.0, 0.5, 1.0]
        );
        assert_eq!(
            GridDef::parse("0.1, 0.2").unwrap(),
            GridDef::Points(vec![0.1, 0.2])
        );
        assert!(GridDef::parse("0:1").is_err());
        assert!(GridDef::parse("a,b").is_err());
    }

    #[test]
    fn error_path_points_at_field() {
        let err = parse_json::<ExperimentConfig>(
            r#"{"chain": {"states": [0, 1], "lambda": {"lambda0": 1, "lambda1": "x"}, "mu": 1}}"#,
            "",
        )
        .unwrap_err();
        assert_eq!(err.path, "chain.lambda.lambda1");
        // tagged sections report the section itself
        let err =
            parse_json::<ExperimentConfig>(r#"{"cost": {"kind": "linear", "gamma": "x"}}"#, "")
                .unwrap_err();
        assert_eq!(err.path, "cost");
        let err = parse_json::<ExperimentConfig>(r#"{"grids": {"b": [1]}}"#, "").unwrap_err();
        assert_eq!(err.path, "grids.b");
    }

    #[test]
    fn semantic_errors_carry_paths() {
        let mut cfg: ExperimentConfig =
            parse_json(r#"{"grids": {"a": {"lo": 0, "hi": 1, "n": 0}}}"#, "").unwrap();
        assert_eq!(cfg.validate().unwrap_err().path, "grids.a.n");
        cfg = parse_json(
            r#"{"production": {"family": "fractional"},
                "literacy": {"verification": {"family": "saturating-affine", "kappa": 2},
                             "beta": 2, "gamma": 1, "q": 0.6}}"#,
            "",
        )
        .unwrap();
        assert_eq!(cfg.validate().unwrap_err().path, "production.family");
    }

    #[test]
    fn overrides_replace_sections() {
        let base: ExperimentConfig =
            parse_json(r#"{"seed": 1, "grids": {"a": [0, 1], "s": [0]}}"#, "").unwrap();
        let over = ExperimentConfig {
            seed: Some(2),
            grids: Grids {
                a: Some(GridDef::Points(vec![0.5])),
                ..Grids::default()
            },
            ..ExperimentConfig::default()
        };
        let m = base.merge(over);
        assert_eq!(m.seed, Some(2));
        assert_eq!(m.grids.a, Some(GridDef::Points(vec![0.5])));
        assert_eq!(m.grids.s, Some(GridDef::Points(vec![0.0])));
    }
}
