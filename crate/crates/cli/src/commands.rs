use std::fs;
use std::path::{Path, PathBuf};

use simplicial_means::io::{trace_csv, Checkpoint, FitFile, LoadedFit, PruneFile};
use simplicial_means::metrics::{self, MetricsReport};
use simplicial_means::presets::{Preset, Projection, RunSpec};
use simplicial_means::pruning::{reduced_representation, CodeRecord};
use simplicial_means::{
    fitting, nearest_on_complex, prune as prune_fit, sample, FitConfig, FitResult, LinearMap, MeshSpec, Neighborhood,
    PointCloud, PruneConfig, PruneMode, PruneResult, SampleSpec, SimplicialComplex,
};

use crate::failure::Failure;
use crate::{render as draw, DemoArgs, FitArgs, GenComplex, GenData, MetricsArgs, ModeArg, PruneArgs, PruneModeArg, RenderArgs};

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))
}

fn create_dir(path: &Path) -> Result<(), Failure> {
    fs::create_dir_all(path).map_err(|e| Failure::Data(format!("cannot create {}: {e}", path.display())))
}

fn load_cloud(path: &Path) -> Result<PointCloud, Failure> {
    PointCloud::from_csv(&read(path)?).map_err(Failure::in_file(path))
}

fn load_fit(path: &Path) -> Result<LoadedFit, Failure> {
    FitFile::from_json(&read(path)?).map_err(Failure::in_file(path))
}

fn usage_if(bad: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if bad {
        Err(Failure::Usage(msg()))
    } else {
        Ok(())
    }
}

pub fn gen_data(a: GenData) -> Result<(), Failure> {
    let mut spec = match (&a.source.preset, &a.source.spec) {
        (Some(name), _) => Preset::builtin(name)?.sample,
        (None, Some(path)) => SampleSpec::from_json(&read(path)?).map_err(Failure::in_file(path))?,
        (None, None) => return Err(Failure::Usage("one of --preset or --spec is required".into())),
    };
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    let cloud = sample(&spec)?;
    write(&a.out, &cloud.to_csv())
}

pub fn gen_complex(a: GenComplex) -> Result<(), Failure> {
    let spec = MeshSpec::from_json(&read(&a.spec)?).map_err(Failure::in_file(&a.spec))?;
    let mesh = spec.build().map_err(Failure::in_file(&a.spec))?;
    write(&a.out, &mesh.complex.to_json())?;
    write(&a.positions, &mesh.map.to_json())
}

pub fn fit(a: FitArgs) -> Result<(), Failure> {
    usage_if(!(a.s >= 0.0 && a.s.is_finite()), || format!("--s must be a finite value >= 0, got {}", a.s))?;
    usage_if(a.iters < 1, || "--iters must be at least 1".into())?;
    usage_if(a.tol.is_some_and(|t| t.is_nan() || t <= 0.0), || "--tol must be > 0".into())?;
    usage_if(a.every < 1, || "--every must be at least 1".into())?;

    let cloud = load_cloud(&a.cloud)?;
    let k = SimplicialComplex::from_json(&read(&a.complex)?).map_err(Failure::in_file(&a.complex))?;
    let f0 = LinearMap::from_json(&read(&a.positions)?).map_err(Failure::in_file(&a.positions))?;
    let cfg = FitConfig {
        learning_rate: a.s,
        neighborhood: match a.mode {
            ModeArg::Interior => Neighborhood::Interior,
            ModeArg::Closed => Neighborhood::Closed,
        },
        stop_tol: a.tol,
        max_iters: a.iters,
        ..FitConfig::default()
    };

    if let Some(dir) = &a.snapshots {
        create_dir(dir)?;
    }
    let checkpoint_path = |dir: &Path, iter: usize| dir.join(format!("iter_{iter:05}.json"));
    let mut write_error = None;
    let result = fitting::fit_with(&k, &f0, &cloud, &cfg, |iter, map| {
        if let Some(dir) = &a.snapshots {
            if iter % a.every == 0 && write_error.is_none() {
                let json = serde_json::to_string(&Checkpoint::new(iter, map)).expect("checkpoint serializes");
                write_error = write(&checkpoint_path(dir, iter), &json).err();
            }
        }
    })?;
    if let Some(e) = write_error {
        return Err(e);
    }
    if let Some(dir) = &a.snapshots {
        if result.iterations_run % a.every != 0 {
            let json = serde_json::to_string(&Checkpoint::new(result.iterations_run, &result.map)).expect("checkpoint serializes");
            write(&checkpoint_path(dir, result.iterations_run), &json)?;
        }
    }

    write(&a.out, &FitFile::new(&k, &cloud, &cfg, &result).to_json())?;
    if let Some(path) = &a.trace {
        write(path, &trace_csv(&result))?;
    }
    log::info!(
        "{} iterations, mean SSD {:.6} -> {:.6}",
        result.iterations_run,
        result.ssd_trace[0],
        result.ssd_trace[result.iterations_run]
    );
    Ok(())
}

fn write_prune(result: &PruneResult, fit: &FitResult, cloud: &PointCloud, out: &Path, codes: Option<&Path>) -> Result<(), Failure> {
    write(out, &PruneFile::new(result, &fit.map).to_json())?;
    if let Some(path) = codes {
        let mut lines = String::new();
        for i in 0..result.points.len() {
            let record = CodeRecord::new(i, reduced_representation(result, &fit.map, i)?, cloud.point(i));
            lines.push_str(&serde_json::to_string(&record).expect("code record serializes"));
            lines.push('\n');
        }
        write(path, &lines)?;
    }
    Ok(())
}

pub fn prune(a: PruneArgs) -> Result<(), Failure> {
    let mode = match a.mode {
        PruneModeArg::Euclidean => PruneMode::Euclidean,
        PruneModeArg::BaryMin => PruneMode::BarycentricMin,
    };
    let cfg = PruneConfig {
        decay: a.decay,
        ..PruneConfig::new(a.alpha, mode)
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let loaded = load_fit(&a.fit)?;
    let result = prune_fit(&loaded.result, &loaded.complex, &cfg)?;
    log::info!(
        "facets {} -> {}",
        loaded.complex.facet_count(),
        result.complex.facet_count()
    );
    write_prune(&result, &loaded.result, &loaded.cloud, &a.out, a.codes.as_deref())
}

fn measure(cloud: &PointCloud, k: &SimplicialComplex, map: &LinearMap, density: usize) -> Result<MetricsReport, Failure> {
    let assignments = nearest_on_complex(k, map, cloud, None)?;
    let report = MetricsReport {
        mean_ssd: metrics::mean_ssd(cloud, k, map, &assignments)?,
        hausdorff: metrics::hausdorff(cloud, k, map, density)?,
        sample_density: density,
    };
    if !(report.mean_ssd.is_finite() && report.hausdorff.is_finite()) {
        return Err(Failure::Numeric(format!("metrics are not finite: {report:?}")));
    }
    Ok(report)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("value serializes")
}

pub fn metrics(a: MetricsArgs) -> Result<(), Failure> {
    usage_if(a.density < 1, || "--density must be at least 1".into())?;
    let cloud = load_cloud(&a.cloud)?;
    let loaded = load_fit(&a.fit)?;
    let report = measure(&cloud, &loaded.complex, &loaded.result.map, a.density)?;
    write(&a.out, &to_json(&report))
}

pub fn render(a: RenderArgs) -> Result<(), Failure> {
    let cloud = load_cloud(&a.cloud)?;
    let loaded = load_fit(&a.fit)?;
    let title = format!("{} after {} iterations", a.fit.display(), loaded.result.iterations_run);
    let svg = draw::svg(&cloud, &loaded.complex, &loaded.result.map, a.proj, &title)?;
    write(&a.out, &svg)
}

/// Writes one preset run into `dir`.
fn demo_run(preset: &Preset, run: &RunSpec, cloud: &PointCloud, dir: &Path) -> Result<(), Failure> {
    create_dir(dir)?;
    let mesh = run.initial_mesh(cloud)?;
    write(&dir.join("complex.json"), &mesh.complex.to_json())?;
    write(&dir.join("initial_positions.json"), &mesh.map.to_json())?;

    let mut snapshots: Vec<(usize, LinearMap)> = Vec::new();
    let result = fitting::fit_with(&mesh.complex, &mesh.map, cloud, &run.fit, |iter, map| {
        if run.snapshots.contains(&iter) {
            snapshots.push((iter, map.clone()));
        }
    })?;
    // A run that stops early keeps its final map for every later snapshot.
    for &iter in &run.snapshots {
        if iter > result.iterations_run {
            snapshots.push((iter, result.map.clone()));
        }
    }
    write(&dir.join("fit.json"), &FitFile::new(&mesh.complex, cloud, &run.fit, &result).to_json())?;
    write(&dir.join("trace.csv"), &trace_csv(&result))?;

    let proj: Projection = run.projection;
    for (iter, map) in &snapshots {
        let title = format!("{} {}: {iter} iterations", preset.name, run.label);
        let svg = draw::svg(cloud, &mesh.complex, map, proj, &title)?;
        write(&dir.join(format!("snapshot_{iter:04}.svg")), &svg)?;
    }
    let title = format!("{} {}: fitted", preset.name, run.label);
    write(&dir.join("fit.svg"), &draw::svg(cloud, &mesh.complex, &result.map, proj, &title)?)?;

    let mut summary = format!(
        "{}/{}: {} iterations, mean SSD {:.6} -> {:.6}",
        preset.name,
        run.label,
        result.iterations_run,
        result.ssd_trace[0],
        result.ssd_trace[result.iterations_run]
    );
    if let Some(cfg) = &run.prune {
        let pruned = prune_fit(&result, &mesh.complex, cfg)?;
        write_prune(&pruned, &result, cloud, &dir.join("prune.json"), Some(&dir.join("codes.jsonl")))?;
        let title = format!("{} {}: pruned", preset.name, run.label);
        write(&dir.join("pruned.svg"), &draw::svg(cloud, &pruned.complex, &result.map, proj, &title)?)?;
        summary.push_str(&format!(
            ", facets {} -> {}",
            mesh.complex.facet_count(),
            pruned.complex.facet_count()
        ));
    }
    let report = measure(cloud, &mesh.complex, &result.map, metrics::DEFAULT_SAMPLE_DENSITY)?;
    write(&dir.join("metrics.json"), &to_json(&report))?;
    println!("{summary}");
    Ok(())
}

pub fn demo(a: DemoArgs) -> Result<(), Failure> {
    let preset = Preset::builtin(&format!("fig{}", a.figure))?;
    create_dir(&a.outdir)?;
    let cloud = preset.cloud(a.seed)?;
    write(&a.outdir.join("cloud.csv"), &cloud.to_csv())?;
    for run in &preset.runs {
        let dir: PathBuf = a.outdir.join(&run.label);
        demo_run(&preset, run, &cloud, &dir)?;
    }
    Ok(())
}
