//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use subspec::graph::{analyze, iterate_subdivide, Graph, DEFAULT_VERTEX_CAP};
use subspec::invariants::{
    kemeny_closed_form, kemeny_montecarlo, kemeny_oracle, kemeny_spectral, kirchhoff_closed_form, kirchhoff_oracle,
    kirchhoff_spectral, round_count, spanning_trees_closed_form, spanning_trees_oracle, spanning_trees_spectral,
};
use subspec::linalg::{jacobi_eigenvalues, normalized_laplacian};
use subspec::spectrum::{compare, spectrum_at, ExactValue};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn k4() -> Graph {
    Graph::complete(4).unwrap()
}

/// Kf*(s^n(K4)) = 27, 276, 2328 by spectral sum, closed form and resistance oracle.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = k4();
    let meta = analyze(&g);
    let kf0 = kirchhoff_oracle::<f64>(&g).map_err(|e| e.to_string())?;
    for (n, want) in [(0u32, 27.0), (1, 276.0), (2, 2328.0)] {
        let sg = iterate_subdivide(&g, n, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())?;
        let spec = spectrum_at::<f64>(&g, n).map_err(|e| e.to_string())?;
        let spectral = kirchhoff_spectral(&spec, sg.edge_count() as u64);
        let closed = kirchhoff_closed_form(kf0, meta.circuit_rank, g.edge_count() as u64, n);
        let oracle = kirchhoff_oracle::<f64>(&sg).map_err(|e| e.to_string())?;
        for (route, v) in [("spectral", spectral), ("closed form", closed), ("oracle", oracle)] {
            ensure(rel(v, want) <= 1e-8, || format!("n={n} {route}: {v} vs {want}"))?;
        }
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("Kf* = 27, 276, 2328 on all three routes ({took:.2?})"))
}

/// N_st(s^n(K4)) = 16 * 8^n for n = 0..=4.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let g = k4();
    let r = analyze(&g).circuit_rank;
    let nst0 = spanning_trees_oracle(&g).map_err(|e| e.to_string())?;
    for n in 0..=4u32 {
        let want = BigUint::from(16u64 << (3 * n));
        let closed = spanning_trees_closed_form(&nst0, r, n);
        ensure(closed == want, || format!("n={n} closed form {closed} vs {want}"))?;
        let sg = iterate_subdivide(&g, n, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())?;
        let spec = spectrum_at::<f64>(&g, n).map_err(|e| e.to_string())?;
        let spectral = spanning_trees_spectral(&spec, &sg.degrees()).map_err(|e| e.to_string())?;
        ensure(round_count(spectral).as_ref() == Some(&want), || format!("n={n} spectral {spectral} vs {want}"))?;
        if n <= 2 {
            let oracle = spanning_trees_oracle(&sg).map_err(|e| e.to_string())?;
            ensure(oracle == want, || format!("n={n} Bareiss {oracle} vs {want}"))?;
        }
    }
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("trees = 16*8^n for n<=4, Bareiss exact for n<=2 ({took:.2?})"))
}

fn ones_in_oracle(g: &Graph, n: u32) -> Result<usize, String> {
    let sg = iterate_subdivide(g, n, 2000).map_err(|e| e.to_string())?;
    let eig = jacobi_eigenvalues(&normalized_laplacian::<f64>(&sg)).map_err(|e| e.to_string())?;
    Ok(eig.eigenvalues.iter().filter(|&&x| (x - 1.0).abs() <= 1e-7).count())
}

/// Multiplicity of eigenvalue 1: r-1 / r+1 at n=1, r+1 at n=2,3.
fn criterion_3() -> Outcome {
    let mut rng = common::rng(3);
    let mut graphs = Vec::new();
    for i in 0..5 {
        graphs.push(common::random_non_bipartite(5 + i % 4, 0.4, &mut rng));
    }
    for i in 0..5 {
        graphs.push(common::random_bipartite(4 + i % 5, 0.5, &mut rng));
    }
    let mut checked = 0;
    for g in &graphs {
        let meta = analyze(g);
        let r = meta.circuit_rank as usize;
        for n in 1..=3u32 {
            let want = if n == 1 && meta.has_odd_cycle { r - 1 } else { r + 1 };
            let got = ones_in_oracle(g, n)?;
            ensure(got == want, || format!("{g:?} n={n}: {got} eigenvalues at 1, expected {want}"))?;
            let analytic = spectrum_at::<f64>(g, n).map_err(|e| e.to_string())?.one_mult();
            ensure(analytic as usize == want, || format!("analytic multiplicity {analytic} vs {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (graph, level) pairs, 5 non-bipartite + 5 bipartite seeds, zero failures"))
}

/// Analytic sigma_n matches Jacobi on the explicit L_n for 20 random graphs.
fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(4);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let g = common::random_connected(3 + i % 6, 0.35, &mut rng);
        for n in [1u32, 2] {
            let spec = spectrum_at::<f64>(&g, n).map_err(|e| e.to_string())?;
            let sg = iterate_subdivide(&g, n, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())?;
            let eig = jacobi_eigenvalues(&normalized_laplacian::<f64>(&sg)).map_err(|e| e.to_string())?;
            let m = compare(&spec, &eig, 1e-7).map_err(|e| e.to_string())?;
            ensure(m.success, || format!("graph {i} n={n}: deviation {:e}", m.max_deviation))?;
            worst = worst.max(m.max_deviation);
        }
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!("40 spectra matched, worst deviation {worst:.2e} ({took:.2?})"))
}

/// Spectral Kemeny = closed form (1e-9) for n=0..=4; Kf* = 2 E_n K (1e-10).
fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    let corpus = common::corpus();
    for (name, g) in &corpus {
        let meta = analyze(g);
        let k0 = kemeny_oracle::<f64>(g, 0).map_err(|e| e.to_string())?;
        let kf0 = kirchhoff_oracle::<f64>(g).map_err(|e| e.to_string())?;
        for n in 0..=4u32 {
            let spec = spectrum_at::<f64>(g, n).map_err(|e| e.to_string())?;
            let e_n = (g.edge_count() as u64) << n;
            let k_spec = kemeny_spectral(&spec);
            let k_closed = kemeny_closed_form(k0, meta.circuit_rank, n);
            let d = rel(k_spec, k_closed);
            worst = worst.max(d);
            ensure(d <= 1e-9, || format!("{name} n={n}: Kemeny {k_spec} vs {k_closed}"))?;

            let kf_spec = kirchhoff_spectral(&spec, e_n);
            let kf_closed = kirchhoff_closed_form(kf0, meta.circuit_rank, g.edge_count() as u64, n);
            for (route, kf, k) in [("spectral", kf_spec, k_spec), ("closed form", kf_closed, k_closed)] {
                let two_e_k = 2.0 * e_n as f64 * k;
                ensure(rel(kf, two_e_k) <= 1e-10, || format!("{name} n={n} {route}: Kf* {kf} vs 2EK {two_e_k}"))?;
            }
        }
    }
    Ok(format!("{} corpus graphs x 5 levels, worst Kemeny deviation {worst:.2e}", corpus.len()))
}

/// K4 at n=15 via the analytic route only: count, trace, symmetry, 0 and 2.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let n = 15;
    let spec = spectrum_at::<f64>(&k4(), n).map_err(|e| e.to_string())?;
    let vertices: u64 = 4 + ((1u64 << n) - 1) * 6;
    ensure(vertices == 196_606, || format!("N_15 = {vertices}"))?;
    ensure(spec.total_multiplicity() == vertices, || format!("|sigma| = {}", spec.total_multiplicity()))?;
    let trace = spec.trace();
    ensure(rel(trace, vertices as f64) <= 1e-8, || format!("trace {trace}"))?;
    let values = spec.expanded();
    let asym = values
        .iter()
        .zip(values.iter().rev())
        .map(|(a, b)| (a + b - 2.0).abs())
        .fold(0.0f64, f64::max);
    ensure(asym <= 1e-10, || format!("asymmetry {asym:e}"))?;
    ensure(spec.zero_mult() == 1 && spec.two_mult() == 1, || format!("0 x{}, 2 x{}", spec.zero_mult(), spec.two_mult()))?;
    let zeros = values.iter().filter(|&&x| x == 0.0).count();
    let twos = values.iter().filter(|&&x| x == 2.0).count();
    ensure(zeros == 1 && twos == 1, || format!("{zeros} zeros, {twos} twos in expanded list"))?;
    ensure(values.iter().all(|&x| (0.0..=2.0).contains(&x)), || "value outside [0, 2]".into())?;
    ensure(
        spec.entries().iter().all(|e| e.value.exact_value() != Some(ExactValue::One) || e.multiplicity == 4),
        || "exceptional multiplicity is not r+1 = 4".into(),
    )?;
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!(
        "N={vertices}, {} distinct, trace dev {:.1e}, asymmetry {asym:.1e} ({took:.2?})",
        spec.distinct_count(),
        rel(trace, vertices as f64)
    ))
}

/// Monte Carlo K(s(K4)) within 3 standard errors of 11.5, bit-identical reruns.
fn criterion_7() -> Outcome {
    let g = iterate_subdivide(&k4(), 1, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())?;
    let a = kemeny_montecarlo::<f64>(&g, 100_000, 42);
    let b = kemeny_montecarlo::<f64>(&g, 100_000, 42);
    ensure(a.mean.to_bits() == b.mean.to_bits() && a.standard_error.to_bits() == b.standard_error.to_bits(), || {
        format!("runs differ: {a:?} vs {b:?}")
    })?;
    let z = a.z_score(11.5);
    ensure(z <= 3.0, || format!("estimate {} +/- {} is {z:.2} SE from 11.5", a.mean, a.standard_error))?;
    Ok(format!("estimate {:.4} +/- {:.4}, z = {z:.2}, reruns bit-identical", a.mean, a.standard_error))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 K4 Kirchhoff, three routes", criterion_1),
        ("2 spanning trees 16*8^n", criterion_2),
        ("3 exceptional multiplicity", criterion_3),
        ("4 oracle spectrum equivalence", criterion_4),
        ("5 closed-form identities", criterion_5),
        ("6 structural invariants at n=15", criterion_6),
        ("7 Monte Carlo Kemeny", criterion_7),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
