//! Seeded synthetic point clouds.
//!
//! Every generator draws from ChaCha8 seeded with `seed` through
//! `SeedableRng::seed_from_u64`, so a spec reproduces the same cloud on
//! every platform. Noise is isotropic Gaussian, added after sampling.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};

/// Roll angle range is `[SWISS_ROLL_T_MIN, SWISS_ROLL_T_MAX]`; all three
/// coordinates are divided by `SWISS_ROLL_T_MAX` so the roll fits in the
/// unit cube. The height is uniform on `[0, 1]`.
pub const SWISS_ROLL_T_MIN: f64 = 1.5 * PI;
pub const SWISS_ROLL_T_MAX: f64 = 4.5 * PI;

/// Domain of the surface generator is `[0, 1]^2`.
pub fn surface_height(x: f64, y: f64) -> f64 {
    (5.0 * x).cos() * (5.0 * y).sin() / 3.0 + (x - y) / 5.0
}

/// Largest cloud a spec may request.
pub const MAX_SAMPLE_COUNT: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    SwissRoll,
    Circle,
    CirclePlusLine,
    Sphere2,
    Sphere2PlusLine,
    SurfaceFn,
    Sphere3,
}

impl FromStr for SampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidConfig(format!("unknown sample kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub kind: SampleKind,
    pub count: usize,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: u64,
    /// Swiss roll only: drop the height axis and sample the planar spiral.
    #[serde(default)]
    pub planar: bool,
    /// Share of points on the line segment for the `*-plus-line` kinds.
    #[serde(default)]
    pub line_fraction: Option<f64>,
    /// Segment endpoints for the `*-plus-line` kinds.
    #[serde(default)]
    pub line_from: Option<Vec<f64>>,
    #[serde(default)]
    pub line_to: Option<Vec<f64>>,
    /// Added to every sampled point after noise.
    #[serde(default)]
    pub offset: Option<Vec<f64>>,
}

impl SampleSpec {
    pub fn new(kind: SampleKind, count: usize, noise_sigma: f64, seed: u64) -> Self {
        Self {
            kind,
            count,
            noise_sigma,
            seed,
            planar: false,
            line_fraction: None,
            line_from: None,
            line_to: None,
            offset: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            SampleKind::SwissRoll if self.planar => 2,
            SampleKind::Circle | SampleKind::CirclePlusLine => 2,
            SampleKind::SwissRoll | SampleKind::Sphere2 | SampleKind::Sphere2PlusLine | SampleKind::SurfaceFn => 3,
            SampleKind::Sphere3 => 4,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count < 1 || self.count > MAX_SAMPLE_COUNT {
            return Err(Error::InvalidConfig(format!(
                "count must lie in 1..={MAX_SAMPLE_COUNT}, got {}",
                self.count
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!("noise_sigma must be >= 0, got {}", self.noise_sigma)));
        }
        if let Some(f) = self.line_fraction {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidConfig(format!("line_fraction must lie in [0, 1], got {f}")));
            }
        }
        let m = self.ambient_dim();
        for v in [&self.line_from, &self.line_to, &self.offset].into_iter().flatten() {
            if v.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("sample spec vector".into()));
            }
        }
        Ok(())
    }

    fn line(&self) -> (f64, Vec<f64>, Vec<f64>) {
        let m = self.ambient_dim();
        let mut from = vec![0.0; m];
        let mut to = vec![0.0; m];
        // default: a segment through the center along the last axis
        from[m - 1] = -1.5;
        to[m - 1] = 1.5;
        (
            self.line_fraction.unwrap_or(1.0 / 3.0),
            self.line_from.clone().unwrap_or(from),
            self.line_to.clone().unwrap_or(to),
        )
    }
}

fn unit_sphere(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn sample(spec: &SampleSpec) -> Result<PointCloud> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let m = spec.ambient_dim();
    let mut data = Vec::with_capacity(spec.count * m);
    let (line_fraction, from, to) = spec.line();
    let with_line = matches!(spec.kind, SampleKind::CirclePlusLine | SampleKind::Sphere2PlusLine);
    let on_line = if with_line {
        (line_fraction * spec.count as f64).round() as usize
    } else {
        0
    };

    for i in 0..spec.count {
        if i >= spec.count - on_line {
            let u: f64 = rng.random();
            data.extend(from.iter().zip(&to).map(|(a, b)| a + u * (b - a)));
            continue;
        }
        match spec.kind {
            SampleKind::SwissRoll => {
                let t = SWISS_ROLL_T_MIN + (SWISS_ROLL_T_MAX - SWISS_ROLL_T_MIN) * rng.random::<f64>();
                let h: f64 = rng.random();
                let (x, z) = (t * t.cos() / SWISS_ROLL_T_MAX, t * t.sin() / SWISS_ROLL_T_MAX);
                if spec.planar {
                    data.extend([x, z]);
                } else {
                    data.extend([x, h, z]);
                }
            }
            SampleKind::Circle | SampleKind::CirclePlusLine => data.extend(unit_sphere(&mut rng, 2)),
            SampleKind::Sphere2 | SampleKind::Sphere2PlusLine => data.extend(unit_sphere(&mut rng, 3)),
            SampleKind::Sphere3 => data.extend(unit_sphere(&mut rng, 4)),
            SampleKind::SurfaceFn => {
                let (x, y): (f64, f64) = (rng.random(), rng.random());
                data.extend([x, y, surface_height(x, y)]);
            }
        }
    }

    if spec.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        for x in &mut data {
            *x += normal.sample(&mut rng);
        }
    }
    if let Some(offset) = &spec.offset {
        for p in data.chunks_exact_mut(m) {
            for (x, o) in p.iter_mut().zip(offset) {
                *x += o;
            }
        }
    }
    PointCloud::new(m, data)
}
