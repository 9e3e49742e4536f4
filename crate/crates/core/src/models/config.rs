use super::{build_model, Family, StaticModel};
use crate::error::{GeomError, Result};
use serde::{Deserialize, Serialize};

/// JSON form of a model: `{"family", "n", "params", "section_volume"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub family: String,
    pub n: usize,
    #[serde(default)]
    pub params: ModelParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section_volume: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i32>,
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GeomError::InvalidInput(format!("model JSON: {e}")))
    }

    pub fn family(&self) -> Result<Family> {
        let p = &self.params;
        let need_m = || p.m.ok_or_else(|| GeomError::InvalidInput(format!("{} needs params.m", self.family)));
        let reject = |name: &str, present: bool| {
            if present {
                Err(GeomError::InvalidInput(format!("{} does not take params.{name}", self.family)))
            } else {
                Ok(())
            }
        };
        match self.family.as_str() {
            "space_form" => {
                reject("m", p.m.is_some())?;
                reject("k", p.k.is_some())?;
                let epsilon =
                    p.epsilon.ok_or_else(|| GeomError::InvalidInput("space_form needs params.epsilon".into()))?;
                Ok(Family::SpaceForm { epsilon })
            }
            "schwarzschild" => {
                reject("epsilon", p.epsilon.is_some())?;
                reject("k", p.k.is_some())?;
                Ok(Family::Schwarzschild { m: need_m()? })
            }
            "de_sitter_schwarzschild" | "dss" => {
                reject("epsilon", p.epsilon.is_some())?;
                reject("k", p.k.is_some())?;
                Ok(Family::DeSitterSchwarzschild { m: need_m()? })
            }
            "kottler" => {
                reject("epsilon", p.epsilon.is_some())?;
                let k = p.k.ok_or_else(|| GeomError::InvalidInput("kottler needs params.k".into()))?;
                Ok(Family::Kottler { k, m: need_m()? })
            }
            other => Err(GeomError::InvalidInput(format!("unknown family '{other}'"))),
        }
    }

    pub fn build(&self) -> Result<StaticModel> {
        build_model(self.family()?, self.n, self.section_volume)
    }

    /// Canonical configuration reproducing `model`.
    pub fn from_model(model: &StaticModel) -> Self {
        let params = match model.family {
            Family::SpaceForm { epsilon } => ModelParams { epsilon: Some(epsilon), ..Default::default() },
            Family::Schwarzschild { m } | Family::DeSitterSchwarzschild { m } => {
                ModelParams { m: Some(m), ..Default::default() }
            }
            Family::Kottler { k, m } => ModelParams { m: Some(m), k: Some(k), ..Default::default() },
        };
        Self { family: model.family.name().to_string(), n: model.n, params, section_volume: Some(model.section_volume) }
    }
}
