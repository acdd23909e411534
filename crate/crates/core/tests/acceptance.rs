// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS or FAIL line.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypercen::adapt::{
    delta_update, delta_update_in_place, punish, punish_in_place, Challenge, LearningConfig, LinearContraction,
};
use hypercen::centrality::{
    general_centrality_graph, general_centrality_hyper, GraphCentralityParams, HyperCentralityParams, Method,
};
use hypercen::netgen::{self, GenConfig, GrowthEvent, Preference, Target};
use hypercen::propagation::{exact_path_count, simulate_graph, truncated_series, PropagationConfig};
use hypercen::{cli, spectral, Error, Hypergraph, Network};

type Outcome = Result<String, String>;

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(0.5) {
                let w = rng.gen_range(0.05..=1.0);
                a[(i, j)] = w;
                a[(j, i)] = w;
            }
        }
    }
    a
}

fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Hypergraph {
    let w = DMatrix::from_fn(n, m, |_, _| {
        if rng.gen_bool(0.4) {
            rng.gen_range(0.05..=1.0)
        } else {
            0.0
        }
    });
    Hypergraph::new(w).unwrap()
}

fn ones(n: usize) -> DVector<f64> {
    DVector::from_element(n, 1.0)
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.amax()
}

fn within(limit: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    }
}

fn degree_identity() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(1..=50);
        let a = random_graph(&mut rng, n);
        let alpha = rng.gen_range(-3.0..3.0);
        let c = general_centrality_graph(&a, GraphCentralityParams { alpha, beta: 0.0 }, Method::Solve)
            .map_err(|e| e.to_string())?;
        worst = worst.max(inf_norm(&(c.node_scores - (&a * ones(n)) * alpha)));
    }
    let took = within(Duration::from_secs(1), started)?;
    if worst <= 1e-12 {
        Ok(format!("max error {worst:e} in {took:.2?}"))
    } else {
        Err(format!("max error {worst:e}"))
    }
}

fn series_matches_solve() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let n = rng.gen_range(2..=40);
        let a = random_graph(&mut rng, n);
        let lmax = spectral::spectral_radius(&a).map_err(|e| e.to_string())?;
        if lmax == 0.0 {
            continue;
        }
        let rho = [0.1, 0.5, 0.9][k % 3];
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let params = GraphCentralityParams {
            alpha: 1.0,
            beta: sign * rho / lmax,
        };
        let solve = general_centrality_graph(&a, params, Method::Solve).map_err(|e| e.to_string())?;
        let series = general_centrality_graph(&a, params, Method::Series).map_err(|e| e.to_string())?;
        let gap =
            inf_norm(&(&series.node_scores - &solve.node_scores)) / inf_norm(&solve.node_scores).max(f64::MIN_POSITIVE);
        worst = worst.max(gap);
    }
    let took = within(Duration::from_secs(10), started)?;
    if worst <= 1e-8 {
        Ok(format!("max relative gap {worst:e} in {took:.2?}"))
    } else {
        Err(format!("max relative gap {worst:e}"))
    }
}

fn pole_detection() -> Outcome {
    let a = DMatrix::from_element(2, 2, 1.0);
    let at = |beta| general_centrality_graph(&a, GraphCentralityParams { alpha: 1.0, beta }, Method::Solve);
    match at(0.5) {
        Err(Error::Pole { lambda, .. }) if (lambda - 2.0).abs() < 1e-12 => {}
        other => return Err(format!("beta = 0.5 gave {other:?}")),
    }
    for beta in [0.5 - 1e-3, 0.5 + 1e-3] {
        at(beta).map_err(|e| format!("beta = {beta}: {e}"))?;
    }
    Ok("0.5 rejected with lambda = 2, 0.5 ± 1e-3 solved".into())
}

fn hyper_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (n, m) = (rng.gen_range(2..=15), rng.gen_range(1..=12));
        let h = random_hypergraph(&mut rng, n, m);
        let a = h.project().adjacency;
        let lmax = spectral::lambda_max(&a).map_err(|e| e.to_string())?;
        let beta2 = if lmax > 0.0 {
            rng.gen_range(0.05..0.95) / lmax
        } else {
            0.3
        };
        let x = general_centrality_hyper(
            &h,
            HyperCentralityParams {
                alpha1: 0.0,
                alpha2: 1.0,
                beta1: 1.0,
                beta2,
            },
            Method::Solve,
        )
        .map_err(|e| e.to_string())?;
        let c = general_centrality_graph(
            &a,
            GraphCentralityParams {
                alpha: 1.0,
                beta: beta2,
            },
            Method::Solve,
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(inf_norm(&(x.node_scores - c.node_scores)));
    }
    if worst <= 1e-10 {
        Ok(format!("max elementwise gap {worst:e}"))
    } else {
        Err(format!("max elementwise gap {worst:e}"))
    }
}

fn communication_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_z = 0.0f64;
    for _ in 0..10 {
        let n = rng.gen_range(2..=10);
        let a = random_graph(&mut rng, n);
        let lmax = spectral::lambda_max(&a).map_err(|e| e.to_string())?;
        // Capping β at 1 keeps it a probability and only lowers βλmax.
        let beta = if lmax > 0.0 {
            (rng.gen_range(0.1..=0.8) / lmax).min(1.0)
        } else {
            0.5
        };
        let exact = general_centrality_graph(&a, GraphCentralityParams { alpha: 1.0, beta }, Method::Solve)
            .map_err(|e| e.to_string())?;
        let config = PropagationConfig {
            pass_probability_node: beta,
            walks_per_node: 1_000_000,
            rng_seed: 0,
            max_hops: 400,
            ..Default::default()
        };
        let stats = simulate_graph(&a, &config).map_err(|e| e.to_string())?;
        for (s, c) in stats.nodes.iter().zip(exact.node_scores.iter()) {
            let diff = (s.estimate.mean - c).abs();
            if diff == 0.0 {
                continue;
            }
            let z = diff / s.estimate.stderr;
            worst_z = worst_z.max(z);
            if z > 3.0 {
                return Err(format!(
                    "estimate {} vs exact {c}: {z:.2} standard errors",
                    s.estimate.mean
                ));
            }
        }
    }
    let mut worst_enum = 0.0f64;
    for _ in 0..10 {
        let n = rng.gen_range(1..=6);
        let a = random_graph(&mut rng, n);
        let beta = rng.gen_range(-1.0..1.0);
        for hops in 0..=8 {
            let paths = exact_path_count(&a, beta, hops).map_err(|e| e.to_string())?;
            let series = truncated_series(&a, beta, hops);
            worst_enum = worst_enum.max(inf_norm(&(paths - series)));
        }
    }
    let took = within(Duration::from_secs(60), started)?;
    if worst_enum <= 1e-12 {
        Ok(format!(
            "worst |z| {worst_z:.2}, enumerator gap {worst_enum:e}, {took:.2?}"
        ))
    } else {
        Err(format!("enumerator gap {worst_enum:e}"))
    }
}

fn chain_length() -> Outcome {
    let a = DMatrix::from_element(1, 1, 1.0);
    let mut parts = Vec::new();
    for (beta, expected, tol) in [(0.5, 2.0, 0.01), (0.9, 10.0, 0.02)] {
        let config = PropagationConfig {
            pass_probability_node: beta,
            walks_per_node: 1_000_000,
            rng_seed: 0,
            max_hops: 10_000,
            ..Default::default()
        };
        let stats = simulate_graph(&a, &config).map_err(|e| e.to_string())?;
        let mean = stats.nodes[0].mean_chain_length;
        if (mean - expected).abs() > tol * expected {
            return Err(format!("beta = {beta}: mean chain length {mean}"));
        }
        parts.push(format!("beta {beta}: {mean:.4}"));
    }
    Ok(parts.join(", "))
}

fn eigenvalue_scaling() -> Outcome {
    let grown = |edge_weight| {
        netgen::grow(&GenConfig {
            iterations: 300,
            seed: 7,
            edge_weight,
            ..Default::default()
        })
        .map(|g| g.network)
        .map_err(|e| e.to_string())
    };
    let (unit, scaled) = (grown(1.0)?, grown(0.1)?);
    let l1 = netgen::network_lambda_max(&unit).map_err(|e| e.to_string())?;
    let l01 = netgen::network_lambda_max(&scaled).map_err(|e| e.to_string())?;
    let rel = (l01 - 0.1 * l1).abs() / (0.1 * l1);
    if rel > 1e-9 {
        return Err(format!("lambda {l01} vs 0.1 * {l1}: relative error {rel:e}"));
    }
    let a = scaled.adjacency();
    let at = |beta| general_centrality_graph(&a, GraphCentralityParams { alpha: 1.0, beta }, Method::Solve);
    at(0.9 * 10.0 / l1).map_err(|e| format!("beta = 0.9 * 10/L failed: {e}"))?;
    match at(10.0 / l1) {
        Err(Error::Pole { .. } | Error::SeriesDivergence { .. }) => {}
        other => return Err(format!("beta = 10/L gave {other:?}")),
    }
    Ok(format!("L = {l1:.6}, relative error {rel:e}"))
}

fn generator_arithmetic() -> Outcome {
    for (iterations, nodes) in [(1000, 1003), (100, 103)] {
        let config = GenConfig {
            iterations,
            ..Default::default()
        };
        let first = netgen::grow(&config).map_err(|e| e.to_string())?;
        let again = netgen::grow(&config).map_err(|e| e.to_string())?;
        if first.network.node_count() != nodes {
            return Err(format!(
                "{iterations} iterations gave {} nodes",
                first.network.node_count()
            ));
        }
        if first != again {
            return Err(format!("{iterations} iterations are not reproducible"));
        }
    }
    Ok("1003 and 103 nodes, identical reruns".into())
}

fn heavy_tail() -> Outcome {
    let started = Instant::now();
    let (mut slope, mut r2, mut ratio) = (0.0, 0.0, 0.0);
    let seeds = [0u64, 1, 2, 3, 4];
    for &seed in &seeds {
        let g = netgen::grow(&GenConfig {
            iterations: 1000,
            seed,
            ..Default::default()
        })
        .map_err(|e| e.to_string())?;
        let degrees = netgen::degrees(&g.network);
        let fit = netgen::power_law_fit(&degrees).ok_or("no fit")?;
        slope += fit.slope;
        r2 += fit.r_squared;
        ratio += *degrees.iter().max().unwrap() as f64 / netgen::median(&degrees);
    }
    let k = seeds.len() as f64;
    let (slope, r2, ratio) = (slope / k, r2 / k, ratio / k);
    let took = within(Duration::from_secs(120), started)?;
    if slope < -1.0 && r2 >= 0.8 && ratio >= 10.0 {
        Ok(format!(
            "mean slope {slope:.3}, mean R² {r2:.3}, max/median {ratio:.1}, {took:.2?}"
        ))
    } else {
        Err(format!("mean slope {slope:.3}, mean R² {r2:.3}, max/median {ratio:.1}"))
    }
}

fn cluster_pathology() -> Outcome {
    let iterations = 200;
    let g = netgen::grow(&GenConfig {
        iterations,
        preference: Preference::ClusterCoefficient,
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    if let Some(a) = g
        .attachments
        .iter()
        .find(|a| !matches!(a.target, Target::Node(t) if t < 3))
    {
        return Err(format!("attachment outside the seed: {a:?}"));
    }
    let cc = netgen::cluster_coefficient(&g.network);
    let positive: Vec<usize> = (0..cc.len()).filter(|&i| cc[i] > 0.0).collect();
    if positive != [0, 1, 2] {
        return Err(format!("nodes with positive cluster coefficient: {positive:?}"));
    }
    let logged = g
        .events
        .iter()
        .filter(|e| {
            matches!(
                e,
                GrowthEvent::ZeroPreference { .. } | GrowthEvent::UniformFallback { .. }
            )
        })
        .count();
    // Every step after the first has zero-score newcomers among the candidates.
    if logged != iterations - 1 {
        return Err(format!(
            "{logged} zero-score events logged, expected {}",
            iterations - 1
        ));
    }
    Ok(format!(
        "{} attachments, all to seed nodes; {logged} zero-score events",
        g.attachments.len()
    ))
}

fn learning_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut h = random_hypergraph(&mut rng, 12, 8);
    let processor = LinearContraction::default();
    let mut done = 0;
    while done < 100_000 {
        let (i, j) = (rng.gen_range(0..12), rng.gen_range(0..8));
        if !h.contains(i, j) {
            // Punishment can empty the matrix; refill to keep updates flowing.
            let w = rng.gen_range(0.05..=1.0);
            h = Hypergraph::new({
                let mut m = h.weights().clone();
                m[(i, j)] = w;
                m
            })
            .unwrap();
        }
        let config = LearningConfig {
            rate: rng.gen_range(0.0..2.0),
            punishment: rng.gen_range(0.0..0.5),
        };
        if rng.gen_bool(0.5) {
            let c = Challenge::new((0..4).map(|_| rng.gen_range(-5.0..5.0)).collect());
            delta_update_in_place(&mut h, i, j, &c, &processor, &config).map_err(|e| e.to_string())?;
        } else {
            punish_in_place(&mut h, i, j, &config).map_err(|e| e.to_string())?;
        }
        if let Some(w) = h.weights().iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(format!("weight {w} after {done} updates"));
        }
        done += 1;
    }
    let base = Hypergraph::from_rows(&[&[0.3, 0.9], &[0.7, 0.0]]).unwrap();
    let still = LearningConfig {
        rate: 0.0,
        punishment: 0.0,
    };
    let c = Challenge::new(vec![1.0, -2.0, 0.5]);
    for (i, j) in [(0, 0), (0, 1), (1, 0)] {
        let (same, _) = delta_update(&base, i, j, &c, &processor, &still).map_err(|e| e.to_string())?;
        let (kept, _) = punish(&base, i, j, &still).map_err(|e| e.to_string())?;
        if same != base || kept != base {
            return Err("zero rate or zero punishment changed a weight".into());
        }
    }
    Ok(format!("{done} updates within [0, 1]; r = 0 and p = 0 are identities"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let hyper = Network::Hyper(Hypergraph::from_rows(&[&[1.0, 0.2, 0.0], &[0.5, 1.0, 0.3], &[0.0, 0.4, 0.8]]).unwrap());
    std::fs::write(p("h.json"), hypercen::io::to_json_string(&hyper)).map_err(|e| e.to_string())?;

    let runs: Vec<Vec<String>> = vec![
        vec![
            "gen",
            "--iters",
            "150",
            "--seed",
            "3",
            "--output",
            &p("g.json"),
            "--report",
            &p("g.csv"),
            "--events",
            &p("ev.csv"),
        ],
        vec![
            "gen",
            "--mode",
            "hyper",
            "--iters",
            "40",
            "--pref",
            "centrality",
            "--output",
            &p("gh.json"),
        ],
        vec!["centrality", "--input", &p("h.json"), "--output", &p("c.csv")],
        vec![
            "spectrum",
            "--input",
            &p("h.json"),
            "--full",
            "--beta",
            "0.5",
            "--output",
            &p("s.json"),
        ],
        vec![
            "simulate",
            "--input",
            &p("h.json"),
            "--beta2",
            "0.2",
            "--walks",
            "2000",
            "--seed",
            "4",
            "--output",
            &p("sim.csv"),
        ],
        vec![
            "learn",
            "--input",
            &p("h.json"),
            "--steps",
            "50",
            "--seed",
            "5",
            "--output",
            &p("l.json"),
            "--fitness",
            &p("f.csv"),
        ],
        vec![
            "analyze",
            "--input",
            &p("g.json"),
            "--output",
            &p("a.csv"),
            "--summary",
            &p("a.json"),
            "--sweep",
            &p("sw.csv"),
        ],
        vec!["project", "--input", &p("h.json"), "--output", &p("p.csv")],
        vec!["convert", "--input", &p("h.json"), "--output", &p("h.csv")],
    ]
    .into_iter()
    .map(|r| r.into_iter().map(String::from).collect())
    .collect();

    let mut checked = 0;
    for args in &runs {
        let argv = std::iter::once("hypercen".to_string()).chain(args.iter().cloned());
        if cli::run(argv) != 0 {
            return Err(format!("{} failed", args[0]));
        }
        let output = args
            .iter()
            .skip_while(|a| *a != "--output")
            .nth(1)
            .expect("every run has --output");
        let manifest = format!("{output}.manifest.json");
        let before = std::fs::read(&manifest).map_err(|e| e.to_string())?;
        // Wipe the outputs so the replay has to regenerate them.
        let recorded: cli::RunManifest = serde_json::from_slice(&before).map_err(|e| e.to_string())?;
        for out in &recorded.outputs {
            std::fs::remove_file(&out.path).map_err(|e| e.to_string())?;
        }
        if cli::run(["hypercen", "replay", "--manifest", &manifest]) != 0 {
            return Err(format!("replay of {} did not reproduce its outputs", args[0]));
        }
        for out in &recorded.outputs {
            if !Path::new(&out.path).exists() {
                return Err(format!("replay of {} did not write {}", args[0], out.path));
            }
        }
        checked += recorded.outputs.len();
    }
    Ok(format!(
        "{} runs, {checked} outputs byte-identical on replay",
        runs.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("degree identity at beta = 0", degree_identity),
        ("series and solve agree", series_matches_solve),
        ("pole detection", pole_detection),
        ("hypergraph reduces to projected graph", hyper_reduction),
        ("communication counts and path enumerator", communication_oracle),
        ("expected chain length", chain_length),
        ("eigenvalue scaling with edge weight", eigenvalue_scaling),
        ("generator node arithmetic", generator_arithmetic),
        ("heavy-tailed degrees", heavy_tail),
        ("cluster preference feeds seed nodes only", cluster_pathology),
        ("learning keeps weights in bounds", learning_bounds),
        ("replay reproduces outputs", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
