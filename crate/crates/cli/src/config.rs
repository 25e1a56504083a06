//! Scenario config file schema and its conversion into core types.

use anyhow::{bail, Context};
use iwafitt::group::PGroup;
use iwafitt::ring::RingContext;
use iwafitt::scenario::{FrobeniusLift, PlaceDatum, ScenarioConfig};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrobeniusSpec {
    #[serde(default)]
    pub group_element: Vec<u64>,
    #[serde(default)]
    pub n_v: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaceSpec {
    pub label: String,
    #[serde(default)]
    pub inertia_generators: Vec<Vec<u64>>,
    pub frobenius: FrobeniusSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(default = "default_p")]
    pub p: u64,
    #[serde(default = "default_coeff_precision")]
    pub coeff_precision: u32,
    #[serde(default = "default_t_precision")]
    pub t_precision: u32,
    #[serde(default)]
    pub group_orders: Vec<u64>,
    #[serde(default)]
    pub places: Vec<PlaceSpec>,
    pub tasks: Vec<crate::tasks::TaskSpec>,
    #[serde(default)]
    pub allow_even_p: bool,
}

fn default_p() -> u64 {
    3
}
fn default_coeff_precision() -> u32 {
    4
}
fn default_t_precision() -> u32 {
    8
}

/// Command-line overrides applied on top of the file values.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub p: Option<u64>,
    pub coeff_precision: Option<u32>,
    pub t_precision: Option<u32>,
    pub group: Option<Vec<u64>>,
    pub allow_even_p: bool,
}

impl ConfigFile {
    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(p) = o.p {
            self.p = p;
        }
        if let Some(n) = o.coeff_precision {
            self.coeff_precision = n;
        }
        if let Some(m) = o.t_precision {
            self.t_precision = m;
        }
        if let Some(g) = &o.group {
            self.group_orders = g.clone();
        }
        self.allow_even_p |= o.allow_even_p;
    }

    pub fn base_context(&self) -> anyhow::Result<Arc<RingContext>> {
        let group = if self.allow_even_p {
            PGroup::new_with_even_override(self.p, self.group_orders.clone())
        } else {
            PGroup::new(self.p, self.group_orders.clone())
        }
        .context("invalid group data")?;
        RingContext::new(group, self.coeff_precision, self.t_precision)
            .context("invalid ring precisions")
    }

    pub fn scenario_config(&self) -> anyhow::Result<ScenarioConfig> {
        let ctx = self.base_context()?;
        if self.places.is_empty() {
            bail!("the configuration declares no places");
        }
        let places = self
            .places
            .iter()
            .map(|ps| self.convert_place(ps))
            .collect::<anyhow::Result<Vec<_>>>()?;
        ScenarioConfig::new(ctx, places).map_err(Into::into)
    }

    pub fn convert_place(&self, ps: &PlaceSpec) -> anyhow::Result<PlaceDatum> {
        let ctx = self.base_context()?;
        let group = ctx.group().clone();
        let inertia_generators = ps
            .inertia_generators
            .iter()
            .map(|e| {
                group
                    .element(e.clone())
                    .with_context(|| format!("place {}: bad inertia generator", ps.label))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let group_part = if ps.frobenius.group_element.is_empty() {
            group.identity()
        } else {
            group
                .element(ps.frobenius.group_element.clone())
                .with_context(|| format!("place {}: bad Frobenius group element", ps.label))?
        };
        Ok(PlaceDatum {
            label: ps.label.clone(),
            inertia_generators,
            frobenius: FrobeniusLift {
                group_part,
                n_v: ps.frobenius.n_v,
            },
        })
    }

    /// One-line deterministic echo of the effective parameters.
    pub fn echo(&self) -> String {
        let orders: Vec<String> = self.group_orders.iter().map(|o| o.to_string()).collect();
        let places: Vec<String> = self
            .places
            .iter()
            .map(|p| {
                format!(
                    "{}(t={:?},frob={:?}@{})",
                    p.label, p.inertia_generators, p.frobenius.group_element, p.frobenius.n_v
                )
            })
            .collect();
        format!(
            "p={} N={} M={} group=[{}] places=[{}] tasks={}",
            self.p,
            self.coeff_precision,
            self.t_precision,
            orders.join(","),
            places.join(" "),
            self.tasks.len()
        )
    }
}
