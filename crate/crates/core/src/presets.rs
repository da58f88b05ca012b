//! Built-in experiment presets.
//!
//! Each preset is a versioned JSON document under `presets/` that fixes
//! every constant of an experiment: the sampling spec with its seed and
//! noise, the mesh and where it starts, the fitting schedule, and pruning.

use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::fitting::FitConfig;
use crate::meshgen::{Mesh, MeshSpec, Placement};
use crate::pruning::PruneConfig;
use crate::sampling::{sample, SampleSpec};

/// Schema version understood by this build.
pub const PRESET_VERSION: u32 = 1;

const BUILTIN: &[(&str, &str)] = &[
    ("fig1", include_str!("../presets/fig1.json")),
    ("fig2", include_str!("../presets/fig2.json")),
    ("fig3", include_str!("../presets/fig3.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig5", include_str!("../presets/fig5.json")),
    ("fig6", include_str!("../presets/fig6.json")),
    ("fig7", include_str!("../presets/fig7.json")),
    ("fig8", include_str!("../presets/fig8.json")),
    ("fig9", include_str!("../presets/fig9.json")),
    ("fig10", include_str!("../presets/fig10.json")),
];

/// 2-D view used when drawing a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    #[default]
    Xy,
    Xz,
    Yz,
    Pca2,
}

impl std::str::FromStr for Projection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidConfig(format!("unknown projection {s:?}")))
    }
}

/// Places a canonical mesh over the cloud's bounding box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitToCloud {
    #[serde(default)]
    pub axes: Option<Vec<usize>>,
    #[serde(default)]
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub label: String,
    pub mesh: MeshSpec,
    /// Used when the mesh spec carries no placement of its own.
    #[serde(default)]
    pub fit_to_cloud: Option<FitToCloud>,
    pub fit: FitConfig,
    #[serde(default)]
    pub prune: Option<PruneConfig>,
    /// Iterations at which the demo saves a picture.
    #[serde(default)]
    pub snapshots: Vec<usize>,
    #[serde(default)]
    pub projection: Projection,
}

impl RunSpec {
    /// The starting mesh for this run on `cloud`.
    pub fn initial_mesh(&self, cloud: &PointCloud) -> Result<Mesh> {
        let mesh = self.mesh.build()?;
        let mesh = match &self.fit_to_cloud {
            Some(f) => {
                let placement = Placement::fit_to_cloud(cloud, mesh.map.dim(), f.axes.clone(), f.margin)?;
                mesh.place(&placement)?
            }
            None => mesh,
        };
        if mesh.map.dim() != cloud.dim() {
            return Err(Error::DimensionMismatch {
                expected: cloud.dim(),
                found: mesh.map.dim(),
            });
        }
        Ok(mesh)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub version: u32,
    pub name: String,
    pub description: String,
    pub sample: SampleSpec,
    pub runs: Vec<RunSpec>,
}

impl Preset {
    pub fn from_json(text: &str) -> Result<Self> {
        let preset: Preset = serde_json::from_str(text)?;
        if preset.version != PRESET_VERSION {
            return Err(Error::InvalidConfig(format!(
                "preset version {} is not supported (expected {PRESET_VERSION})",
                preset.version
            )));
        }
        if preset.runs.is_empty() {
            return Err(Error::InvalidConfig(format!("preset {} has no runs", preset.name)));
        }
        for run in &preset.runs {
            run.fit.validate()?;
            if let Some(p) = &run.prune {
                p.validate()?;
            }
        }
        Ok(preset)
    }

    pub fn names() -> impl Iterator<Item = &'static str> {
        BUILTIN.iter().map(|(n, _)| *n)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let (_, text) = BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown preset {name:?}")))?;
        Self::from_json(text)
    }

    /// The built-in preset's source text.
    pub fn builtin_source(name: &str) -> Option<&'static str> {
        BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
    }

    /// Samples the cloud, with `seed` replacing the preset's own if given.
    pub fn cloud(&self, seed: Option<u64>) -> Result<PointCloud> {
        let mut spec = self.sample.clone();
        if let Some(s) = seed {
            spec.seed = s;
        }
        sample(&spec)
    }

    pub fn run(&self, label: &str) -> Option<&RunSpec> {
        self.runs.iter().find(|r| r.label == label)
    }
}
