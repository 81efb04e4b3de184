//! End-to-end acceptance gate. Each criterion prints one PASS/FAIL line.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use mfgl::boolfn::{vertex_coords, FourierExpansion};
use mfgl::complexity::{complexity_params, gaussian_width_mc, GradientCloud};
use mfgl::gibbs::{gibbs_measure, ProductMeasure};
use mfgl::hamiltonians::{build_hamiltonian, delta_prime, HamiltonianSpec, ScalarShape};
use mfgl::meanfield::{
    curie_weiss_constant_roots, curie_weiss_roots, default_starts, mean_field_gradient, mf_iterate,
    solve_fixed_points, IterOptions,
};
use mfgl::verify::{
    audit_appendix_misc, audit_large_deviations, audit_product_approx, audit_tanh_lemma, random_expansion,
    random_product_means, sample_box_thetas, tightness_demo,
};
use mfgl::{CubePoint, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const CAP: usize = 20;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cw(beta: f64, n: usize) -> FourierExpansion {
    build_hamiltonian(&HamiltonianSpec::CurieWeiss { beta, n }, CAP).unwrap().expansion
}

/// Product-law probability of vertex `v`, computed coordinate by coordinate.
fn product_prob(mean: &[f64], v: usize) -> f64 {
    vertex_coords(mean.len(), v)
        .iter()
        .zip(mean)
        .map(|(x, m)| 0.5 * (1.0 + x * m))
        .product()
}

/// `E g(Y)` for `Y` with independent coordinates of the given mean.
fn product_expectation(mean: &[f64], g: impl Fn(usize) -> f64) -> f64 {
    (0..1usize << mean.len()).map(|v| product_prob(mean, v) * g(v)).sum()
}

/// `max_{v,i} |f(v with x_i=+1) - f(v with x_i=-1)| / 2` from vertex evaluations.
fn brute_lipschitz(f: &FourierExpansion) -> f64 {
    let n = f.n();
    let mut best = 0.0f64;
    for v in 0..1usize << n {
        for i in 0..n {
            best = best.max(0.5 * (f.eval_vertex(v | 1 << i) - f.eval_vertex(v & !(1 << i))).abs());
        }
    }
    best
}

fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) == (g(lo) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn product_law_exactness() -> Outcome {
    let n = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let theta: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let nu = gibbs_measure(&FourierExpansion::linear(&theta).unwrap(), CAP).unwrap();
        let mean: Vec<f64> = theta.iter().map(|t| t.tanh()).collect();
        let lib = ProductMeasure::new(mean.clone()).unwrap().densify(CAP).unwrap();
        for v in 0..1usize << n {
            worst = worst.max((nu.prob(v) - product_prob(&mean, v)).abs());
            worst = worst.max((nu.prob(v) - lib.prob(v)).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn harmonic_expectation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let n = rng.random_range(3..=10usize);
        let f = random_expansion(n, 3, 2 * n, 2000 + k).unwrap();
        let z: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let exhaustive = product_expectation(&z, |v| f.eval_vertex(v));
        let ext = f.eval_extension(&CubePoint::new(z).unwrap()).unwrap();
        worst = worst.max((exhaustive - ext).abs());
    }
    ensure(worst <= 1e-10, || format!("max |E f(Y) - f(EY)| = {worst:e}"))?;
    Ok(format!("max |E f(Y) - f(EY)| = {worst:.1e}"))
}

fn product_approximation() -> Outcome {
    let mut rows = 0;
    let mut worst: f64 = 0.0;
    for k in 0..50u64 {
        let n = 2 + (k as usize % 7);
        let f = if k % 5 == 0 {
            cw(0.5 + 0.1 * k as f64, n)
        } else {
            random_expansion(n, 3.min(n), n + 2, 3000 + k).unwrap()
        };
        let thetas = sample_box_thetas(n, 20, 4000 + k);
        for r in audit_product_approx(&f, &thetas, &format!("instance#{k}"), CAP, 8).unwrap() {
            ensure(r.note.is_none(), || format!("{}: uncertified transport", r.instance))?;
            ensure(r.pass, || format!("{}: W1 {} > bound {}", r.instance, r.measured, r.bound))?;
            worst = worst.max(r.ratio.unwrap_or(0.0));
            rows += 1;
        }
    }
    ensure(rows == 50 * 21, || format!("{rows} rows"))?;
    Ok(format!("{rows} rows, worst W1/bound {worst:.3}"))
}

fn gaussian_width() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst_z = 0.0f64;
    for k in 0..20 {
        let n = rng.random_range(1..=10usize);
        let mu: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let cloud = GradientCloud::from_points(n, &[mu.clone()]).unwrap();
        let w = gaussian_width_mc(&cloud, 100_000, 500 + k).unwrap();
        let exact = mu.iter().map(|x| x * x).sum::<f64>().sqrt() / (2.0 * std::f64::consts::PI).sqrt();
        let z = (w.estimate - exact).abs() / w.stderr;
        ensure(z <= 3.0, || format!("mu #{k}: estimate {} vs {exact} ({z:.2} se)", w.estimate))?;
        worst_z = worst_z.max(z);
    }
    let mut cw_notes = Vec::new();
    for (beta, n) in [(0.5, 10), (1.0, 12), (2.0, 12)] {
        let p = complexity_params(&cw(beta, n), 100_000, 9, CAP).unwrap();
        let bound = beta * (n as f64).sqrt();
        let se = p.d_stderr.unwrap();
        ensure(p.d <= bound + 3.0 * se, || format!("CW beta={beta}: D {} > {bound}", p.d))?;
        cw_notes.push(format!("{:.2}/{bound:.2}", p.d));
    }
    Ok(format!("worst {worst_z:.2} se; CW D/bound {}", cw_notes.join(", ")))
}

fn curie_weiss_fixed_points() -> Outcome {
    ensure(curie_weiss_roots(0.5, 1e-12).unwrap() == vec![0.0], || "beta=0.5 has nonzero roots".into())?;
    let oracle = bisect(|x| (2.0 * x).tanh() - x, 0.5, 1.0);
    let r2 = curie_weiss_roots(2.0, 1e-12).unwrap();
    ensure(r2.len() == 3 && (r2[2] - oracle).abs() <= 1e-4 && (oracle - 0.9575).abs() <= 1e-4, || {
        format!("beta=2 roots {r2:?}, bisection {oracle}")
    })?;
    let r5 = curie_weiss_roots(5.0, 1e-12).unwrap();
    ensure(r5[2] > 0.9999, || format!("beta=5 root {}", r5[2]))?;

    let f = cw(0.5, 12);
    let starts = default_starts(12, 97, 55);
    let mut worst = 0.0f64;
    for (id, x0) in &starts {
        let s = mf_iterate(&f, &CubePoint::new(x0.clone()).unwrap(), 1.0, IterOptions::default(), id).unwrap();
        ensure(s.converged, || format!("start {id} did not converge"))?;
        worst = worst.max(s.point.iter().map(|x| x.abs()).sum());
    }
    ensure(worst <= 1e-8, || format!("max ||X||_1 = {worst:e}"))?;
    Ok(format!("x*(2) = {:.6}, x*(5) = {:.6}, {} starts, max ||X||_1 {worst:.1e}", r2[2], r5[2], starts.len()))
}

fn fixed_point_consistency() -> Outcome {
    let n = 12;
    let f = cw(2.0, n);
    let opts = IterOptions { tol: 1e-13, ..IterOptions::default() };
    let sols = solve_fixed_points(&f, 1.0, &default_starts(n, 30, 66), opts).unwrap();
    let roots = curie_weiss_constant_roots(2.0, n, 1e-14).unwrap();
    for r in &roots {
        ensure(sols.iter().any(|s| s.point.iter().all(|x| (x - r).abs() < 1e-8)), || {
            format!("constant root {r} not found")
        })?;
    }
    let mut worst = 0.0f64;
    for s in &sols {
        let g = mean_field_gradient(&f, &s.cube_point().unwrap()).unwrap();
        worst = worst.max(g.iter().map(|x| x.abs()).sum());
    }
    ensure(worst <= 1e-8, || format!("max functional gradient {worst:e}"))?;
    Ok(format!("{} solutions, max functional gradient {worst:.1e}", sols.len()))
}

fn large_deviations() -> Outcome {
    let (n, beta, delta) = (10usize, 1.5, 0.05);
    let f = cw(beta, n);
    let f_max = (0..1usize << n).map(|v| f.eval_vertex(v)).fold(f64::NEG_INFINITY, f64::max);
    let t = 0.5 * f_max / n as f64;
    let rows = audit_large_deviations(&f, t, delta, "cw", CAP).unwrap();
    let get = |id: &str| rows.iter().find(|r| r.check_id == id).unwrap();

    // independent enumeration of ν ∝ exp(ψ(f)) and σ ∝ φ
    let psi = ScalarShape::cutoff_potential(n, t, delta);
    let lo = (t - delta_prime(delta)) * n as f64;
    let hi = t * n as f64;
    let fv: Vec<f64> = (0..1usize << n).map(|v| f.eval_vertex(v)).collect();
    let w: Vec<f64> = fv.iter().map(|&y| psi.value(y).exp()).collect();
    let phi: Vec<f64> =
        fv.iter().zip(&w).map(|(&y, &wy)| if y < lo { 0.0 } else if y >= hi { 1.0 } else { wy }).collect();
    let (zw, zp) = (w.iter().sum::<f64>(), phi.iter().sum::<f64>());
    let bad: f64 = fv.iter().zip(&w).filter(|(y, _)| **y <= lo).map(|(_, wy)| wy / zw).sum();
    let tv: f64 = 0.5 * w.iter().zip(&phi).map(|(a, b)| (a / zw - b / zp).abs()).sum::<f64>();
    let two_n = 0.5f64.powi(n as i32);

    ensure(bad <= two_n && tv <= 2.0 * two_n, || format!("oracle nu(B) {bad:e}, TV {tv:e}"))?;
    let (b, d) = (get("large_deviation.bad_set_mass"), get("large_deviation.tv"));
    ensure(b.pass && d.pass, || format!("rows nu(B) {:e}, TV {:e}", b.measured, d.measured))?;
    ensure((b.measured - bad).abs() <= 1e-15 && (d.measured - tv).abs() <= 1e-15, || {
        format!("library ({:e}, {:e}) vs oracle ({bad:e}, {tv:e})", b.measured, d.measured)
    })?;
    Ok(format!("t = {t:.4}, nu(B) = {bad:.2e}, TV = {tv:.2e} (2^-n = {two_n:.2e})"))
}

fn tanh_lemma() -> Outcome {
    let row = audit_tanh_lemma(10_000, (1.0, 5.0), 808).unwrap();
    ensure(row.pass, || format!("max ratio {}", row.measured))?;
    Ok(format!("max ratio {:.4}", row.measured))
}

fn chain_rule() -> Outcome {
    let n = 8;
    let h = ScalarShape::CutoffH;
    let (_, b) = h.derivative_bounds();
    let mut worst: f64 = 0.0;
    for k in 0..20u64 {
        let f = random_expansion(n, 3, 10, 9000 + k).unwrap();
        let lip = brute_lipschitz(&f);
        // vertex defects straight from the definition
        for v in 0..1usize << n {
            let d = h.eval(f.eval_vertex(v)).d1;
            let mut s = 0.0;
            for i in 0..n {
                let (p, m) = (v | 1 << i, v & !(1 << i));
                let dh = 0.5 * (h.value(f.eval_vertex(p)) - h.value(f.eval_vertex(m)));
                let df = 0.5 * (f.eval_vertex(p) - f.eval_vertex(m));
                s += (dh - d * df).abs();
            }
            let bound = b * lip * lip * n as f64;
            ensure(s <= bound + 1e-9, || format!("pair {k} vertex {v}: {s} > {bound}"))?;
            worst = worst.max(s / bound);
        }
        let means = random_product_means(n, 20, 9100 + k);
        let rows = audit_appendix_misc(&f, &h, &means, &format!("pair#{k}"), CAP).unwrap();
        let ext: Vec<_> = rows.iter().filter(|r| r.check_id.starts_with("chain_rule.")).collect();
        ensure(ext.len() == 22, || format!("pair {k}: {} chain-rule rows", ext.len()))?;
        for r in ext {
            ensure(r.pass, || format!("{} {}: {} > {}", r.check_id, r.instance, r.measured, r.bound))?;
        }
    }
    Ok(format!("worst vertex defect/bound {worst:.3}"))
}

fn product_concentration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst = 0.0f64;
    for k in 0..50u64 {
        let n = rng.random_range(2..=10usize);
        let f = random_expansion(n, 3.min(n), n + 3, 11_000 + k).unwrap();
        let z: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let fz = f.eval_extension(&CubePoint::new(z.clone()).unwrap()).unwrap();
        let spread = product_expectation(&z, |v| (f.eval_vertex(v) - fz).abs());
        let bound = (n as f64).sqrt() * brute_lipschitz(&f);
        ensure(spread <= bound + 1e-9, || format!("pair {k}: {spread} > {bound}"))?;
        worst = worst.max(spread / bound);
    }
    Ok(format!("worst spread/bound {worst:.3}"))
}

fn tightness() -> Outcome {
    let report = tightness_demo(&[16, 64, 256, 1024]).unwrap();
    // cross-check n = 16 through the transform of h∘f
    let f = FourierExpansion::linear(&[1.0; 16]).unwrap();
    let hf = ScalarShape::TightnessH.compose(&f, CAP).unwrap();
    let g = hf.gradient_extension(&CubePoint::constant(16, 0.0).unwrap()).unwrap();
    let direct: f64 = g.iter().map(|x| x.abs()).sum();
    ensure((direct - report.values[0]).abs() <= 1e-9 * direct, || {
        format!("n=16: binomial {} vs transform {direct}", report.values[0])
    })?;
    ensure((1.4..=1.6).contains(&report.slope), || format!("slope {}", report.slope))?;
    Ok(format!("slope {:.4}", report.slope))
}

fn lipschitz_l2_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    for k in 0..30u64 {
        let n = rng.random_range(1..=6usize);
        let f = random_expansion(n, n.min(3), n + 2, 12_000 + k).unwrap();
        let table = f.truth_table(CAP).unwrap();
        let grad = |v: usize| -> Vec<f64> {
            (0..n).map(|i| 0.5 * (table[v | 1 << i] - table[v & !(1 << i)])).collect()
        };
        let mut brute = 0.0f64;
        for x in 0..1usize << n {
            for y in 0..1usize << n {
                if x == y {
                    continue;
                }
                let num: f64 = grad(x).iter().zip(grad(y)).map(|(a, b)| (a - b).abs()).sum();
                let dist = 2.0 * (x ^ y).count_ones() as f64;
                brute = brute.max(num / dist);
            }
        }
        let fast = f.lipschitz_l2(CAP).unwrap();
        ensure(fast == brute, || format!("instance {k} (n={n}): {fast} vs {brute}"))?;
    }
    Ok("30 instances, exact agreement".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str, args: &[&str]| -> Result<Vec<u8>, String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_mfgl"))
            .args(args)
            .arg("--out")
            .arg(&out)
            .args(["--seed", "31", "--samples", "20000"])
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.code() == Some(0), || format!("{args:?} exited with {status}"))?;
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    let spec = r#"{"type":"curie_weiss","beta":2.0,"n":8}"#;
    for (tag, args) in [
        ("report", vec!["report", "--spec", spec]),
        ("audit", vec!["audit", "--suite", "all", "--format", "csv"]),
    ] {
        let a = run(&format!("{tag}_a"), &args)?;
        let b = run(&format!("{tag}_b"), &args)?;
        ensure(!a.is_empty() && a == b, || format!("{tag}: reports differ"))?;
    }
    Ok("report (json) and audit (csv) byte-identical".into())
}

#[test]
fn acceptance() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check, Duration); 13] = [
        ("product-law exactness", product_law_exactness, Duration::from_secs(1)),
        ("harmonic expectation identity", harmonic_expectation, Duration::from_secs(30)),
        ("product approximation by trace", product_approximation, Duration::from_secs(300)),
        ("gaussian width", gaussian_width, Duration::from_secs(60)),
        ("curie-weiss roots and iteration", curie_weiss_fixed_points, Duration::MAX),
        ("fixed points are critical points", fixed_point_consistency, Duration::MAX),
        ("large deviations", large_deviations, Duration::from_secs(10)),
        ("tanh concentration lemma", tanh_lemma, Duration::from_secs(10)),
        ("chain rule defects", chain_rule, Duration::MAX),
        ("product concentration", product_concentration, Duration::MAX),
        ("tightness slope", tightness, Duration::from_secs(10)),
        ("lipschitz_l2 all-pairs oracle", lipschitz_l2_equivalence, Duration::MAX),
        ("deterministic reports", determinism, Duration::MAX),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            ensure(elapsed <= *budget, || format!("took {elapsed:?}, budget {budget:?}")).map(|_| msg)
        });
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        let _ = writeln!(err, "{tag} {:>2} {name}: {msg} [{:.2}s]", k + 1, elapsed.as_secs_f64());
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn missing_witness_is_an_error() {
    let f = cw(1.5, 6);
    let r = audit_large_deviations(&f, 10.0, 0.05, "cw", CAP);
    assert!(matches!(r, Err(Error::WitnessMissing { .. })));
}
