mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simplicial_means::fitting::{build_neighborhoods, fit_with, vertex_update};
use simplicial_means::meshgen::grid1d_complex;
use simplicial_means::metrics;
use simplicial_means::{
    fit, nearest_on_complex, sample, FitConfig, LinearMap, Neighborhood, Placement, PointCloud, SampleKind,
    SampleSpec, SimplicialComplex,
};

#[test]
fn planar_swiss_roll_grid_fit_reduces_ssd_twentyfold() {
    let mut spec = SampleSpec::new(SampleKind::SwissRoll, 200, 0.0, 42);
    spec.planar = true;
    let cloud = sample(&spec).unwrap();
    // unit-square 5x5 grid centered on the roll's axis
    let placement = Placement {
        ambient_dim: 2,
        scale: vec![1.0],
        offset: vec![-0.5, -0.5],
        axes: None,
    };
    let mesh = grid1d_complex(5, 5).unwrap().place(&placement).unwrap();
    let cfg = FitConfig {
        learning_rate: 0.1,
        max_iters: 150,
        stop_tol: Some(f64::MIN_POSITIVE),
        ..FitConfig::default()
    };
    let r = fit(&mesh.complex, &mesh.map, &cloud, &cfg).unwrap();
    assert_eq!(r.iterations_run, 150);
    let ratio = r.ssd_trace[150] / r.ssd_trace[0];
    assert!(ratio < 0.05, "mean SSD ratio {ratio}");
}

fn small_problem(seed: u64) -> (SimplicialComplex, LinearMap, PointCloud) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = SimplicialComplex::build(vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4], vec![5]]).unwrap();
    let f0: Vec<Vec<f64>> = (0..6).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let pts: Vec<Vec<f64>> = (0..80).map(|_| (0..3).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
    (k, LinearMap::from_rows(&f0).unwrap(), PointCloud::from_rows(&pts).unwrap())
}

#[test]
fn identical_runs_give_identical_results() {
    let (k, f0, cloud) = small_problem(9);
    for mode in [Neighborhood::Interior, Neighborhood::Closed] {
        let cfg = FitConfig {
            neighborhood: mode,
            max_iters: 30,
            ..FitConfig::default()
        };
        let a = fit(&k, &f0, &cloud, &cfg).unwrap();
        let b = fit(&k, &f0, &cloud, &cfg).unwrap();
        assert_eq!(a.map, b.map);
        assert_eq!(a.ssd_trace, b.ssd_trace);
        assert_eq!(a.displacement_trace, b.displacement_trace);
        assert_eq!(a.assignments, b.assignments);
    }
}

#[test]
fn final_assignments_match_a_fresh_projection() {
    let (k, f0, cloud) = small_problem(3);
    let r = fit(&k, &f0, &cloud, &FitConfig { max_iters: 12, ..FitConfig::default() }).unwrap();
    let fresh = nearest_on_complex(&k, &r.map, &cloud, None).unwrap();
    for (a, b) in r.assignments.iter().zip(&fresh) {
        assert!((a.distance - b.distance).abs() <= 1e-9);
    }
    let last = *r.ssd_trace.last().unwrap();
    let mean = metrics::mean_ssd(&cloud, &k, &r.map, &r.assignments).unwrap();
    assert!((last - mean).abs() <= 1e-12);
}

#[test]
fn vertex_complex_neighborhoods_are_voronoi_cells() {
    let k = SimplicialComplex::build(vec![vec![0], vec![1], vec![2]]).unwrap();
    let centers = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let map = LinearMap::from_rows(&centers).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pts: Vec<[f64; 2]> = (0..60).map(|_| [rng.random_range(-1.0..2.0), rng.random_range(-1.0..2.0)]).collect();
    let cloud = PointCloud::from_rows(&pts).unwrap();
    let assignments = nearest_on_complex(&k, &map, &cloud, None).unwrap();
    for mode in [Neighborhood::Interior, Neighborhood::Closed] {
        let pulls = build_neighborhoods(&assignments, 3, mode);
        for (j, list) in pulls.iter().enumerate() {
            let mut expect: Vec<usize> = (0..pts.len())
                .filter(|&i| {
                    let d: Vec<f64> = centers.iter().map(|c| common::dist(&pts[i], c)).collect();
                    (0..3).all(|o| d[j] < d[o] || (d[j] == d[o] && j <= o))
                })
                .collect();
            let mut got: Vec<usize> = list.iter().map(|&(_, i)| i).collect();
            expect.sort_unstable();
            got.sort_unstable();
            assert_eq!(got, expect, "vertex {j}");
            assert!(list.iter().all(|&(l, _)| l == 1.0));
        }
    }
}

#[test]
fn maps_stay_inside_the_box_of_start_and_data() {
    let (k, f0, cloud) = small_problem(21);
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in f0.rows().chain(cloud.iter()) {
        for r in 0..3 {
            lo[r] = lo[r].min(p[r]);
            hi[r] = hi[r].max(p[r]);
        }
    }
    let cfg = FitConfig { max_iters: 40, ..FitConfig::default() };
    fit_with(&k, &f0, &cloud, &cfg, |_, map| {
        for p in map.rows() {
            for r in 0..3 {
                assert!(p[r] >= lo[r] - 1e-12 && p[r] <= hi[r] + 1e-12);
            }
        }
    })
    .unwrap();
}

type PullCase = (Vec<f64>, Vec<(f64, Vec<f64>)>, f64);

fn pulls_strategy() -> impl Strategy<Value = PullCase> {
    (1usize..=4).prop_flat_map(|m| {
        (
            prop::collection::vec(-3.0f64..3.0, m),
            prop::collection::vec((0.0f64..=1.0, prop::collection::vec(-3.0f64..3.0, m)), 0..8),
            0.0f64..2.0,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn update_is_a_convex_combination((current, pulls, s) in pulls_strategy(), dirs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 4), 6)) {
        let next = vertex_update(&current, pulls.iter().map(|(l, y)| (*l, y.as_slice())), s);
        // every supporting half-space of the hull contains the result
        for u in &dirs {
            let dot = |p: &[f64]| p.iter().zip(u).map(|(a, b)| a * b).sum::<f64>();
            let max = pulls.iter().map(|(_, y)| dot(y)).fold(dot(&current), f64::max);
            let scale = 1.0 + max.abs();
            prop_assert!(dot(&next) <= max + 1e-12 * scale);
        }
    }

    #[test]
    fn zero_rate_update_is_the_plain_weighted_average((current, pulls, _s) in pulls_strategy()) {
        let next = vertex_update(&current, pulls.iter().map(|(l, y)| (*l, y.as_slice())), 0.0);
        let n = pulls.len() as f64;
        for (r, x) in next.iter().enumerate() {
            let expect = if pulls.is_empty() {
                current[r]
            } else {
                pulls.iter().map(|(l, y)| (1.0 - l) * current[r] + l * y[r]).sum::<f64>() / n
            };
            prop_assert!((x - expect).abs() <= 1e-12 * (1.0 + expect.abs()), "{x} vs {expect}");
        }
    }

    #[test]
    fn zero_weight_pulls_leave_a_vertex_alone_without_rate(current in prop::collection::vec(-3.0f64..3.0, 3), ys in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..5)) {
        let next = vertex_update(&current, ys.iter().map(|y| (0.0, y.as_slice())), 0.0);
        for (a, b) in next.iter().zip(&current) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn unpulled_vertex_stays_put() {
    // vertex 2 is far from every point, so nothing lands on its edge
    let k = SimplicialComplex::build(vec![vec![0, 1], vec![2]]).unwrap();
    let f0 = LinearMap::from_rows(&[[0.0, 0.0], [1.0, 0.0], [50.0, 50.0]]).unwrap();
    let cloud = PointCloud::from_rows(&[[0.2, 0.3], [0.8, -0.1], [0.5, 0.5]]).unwrap();
    for s in [0.0, 0.1, 1.0] {
        let r = fit(&k, &f0, &cloud, &FitConfig { learning_rate: s, max_iters: 10, ..FitConfig::default() }).unwrap();
        assert_eq!(r.map.position(2), &[50.0, 50.0]);
    }
}
