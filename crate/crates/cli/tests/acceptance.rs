//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so every line is printed even
//! when an earlier criterion fails; exits nonzero if any criterion fails.

use std::time::Instant;

use jsr_cli::commands::{cmd_converge, cmd_growth, BoundOptions, GrowthOptions};
use jsr_cli::random::{random_connected_set, random_matrix, random_set};
use jsr_cli::{parse_input, InputDocument, LoadedInput, OutputFormat};
use jsr_core::{
    all_intervals, best_bounds, build_graph, main_bounds, norm_table, pm_table, scc, set_constants, spectral_radius,
    EnumOptions, JsrError, Matrix, MatrixSet, Method, Scalar,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENDPOINT_TOL: f64 = 1e-9;
const PERRON_TOL: f64 = 1e-9;
const LN8_TOL: f64 = 0.05;
const GROWTH_WIDTH_TOL: f64 = 1e-6;
const DRIFT_SLOPE: f64 = -0.8;
const RATE_FACTOR: f64 = 1.5;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn load(s: &MatrixSet) -> LoadedInput {
    parse_input(InputDocument::from_set(s).to_json().as_bytes()).unwrap()
}

fn unipotent() -> MatrixSet {
    MatrixSet::singleton(Matrix::from_ints(&[&[1, 1], &[0, 1]]).unwrap())
}

fn skewed() -> MatrixSet {
    MatrixSet::singleton(Matrix::from_ratios(&[&[(1, 1), (1, 10)], &[(10, 1), (1, 1)]]).unwrap())
}

fn fail<T>(msg: String) -> Result<T, String> {
    Err(msg)
}

/// Sets with D ≤ 5 and |Σ| ≤ 3.
fn desk_sets(seed: u64, count: usize, connected: bool) -> Vec<MatrixSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=5);
            let k = rng.gen_range(1..=3);
            if connected {
                random_connected_set(&mut rng, d, k, 0.5)
            } else {
                random_set(&mut rng, d, k, 0.4)
            }
        })
        .collect()
}

fn criterion_1() -> Verdict {
    let s = unipotent();
    let iv = all_intervals(
        &s,
        12,
        &[Method::Main, Method::Traditional],
        PERRON_TOL,
        EnumOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for b in &iv {
        let n = b.n as f64;
        let (lr, ur, lo, hi) = match b.method {
            Method::Main => (
                Scalar::ratio(1, 4),
                Scalar::from(2),
                0.25f64.powf(1.0 / n),
                2f64.powf(1.0 / n),
            ),
            _ => (
                Scalar::one(),
                Scalar::from(2 * b.n as u64),
                1.0,
                (2.0 * n).powf(1.0 / n),
            ),
        };
        if b.method == Method::Main && (b.lower_radicand != lr || b.upper_radicand != ur) {
            return fail(format!(
                "main n={} radicands {} / {}",
                b.n, b.lower_radicand, b.upper_radicand
            ));
        }
        let err = (b.lower - lo).abs().max((b.upper - hi).abs());
        worst = worst.max(err);
        if err > ENDPOINT_TOL {
            return fail(format!(
                "{} n={}: [{}, {}] vs [{lo}, {hi}]",
                b.method, b.n, b.lower, b.upper
            ));
        }
    }
    let pm = pm_table(&s, 12, PERRON_TOL, EnumOptions::default()).map_err(|e| e.to_string())?;
    for m in 1..=12 {
        let e = pm.pm(m).unwrap();
        let (lo, hi) = e.to_f64_outward();
        if !e.contains(&Scalar::one()) || (lo - 1.0).abs() > ENDPOINT_TOL || (hi - 1.0).abs() > ENDPOINT_TOL {
            return fail(format!("P_{m} enclosure [{lo}, {hi}]"));
        }
    }
    Ok(format!("24 intervals, max endpoint error {worst:.1e}"))
}

fn criterion_2() -> Verdict {
    let s = skewed();
    let t = norm_table(&s, 10, EnumOptions::default()).map_err(|e| e.to_string())?;
    for n in 1..=10 {
        let expect = Scalar::from(5u64 << n);
        if t.sigma(n).unwrap() != &expect {
            return fail(format!("‖Σ^{n}‖ = {} ≠ {expect}", t.sigma(n).unwrap()));
        }
    }
    let iv = all_intervals(&s, 10, &Method::ALL, PERRON_TOL, EnumOptions::default()).map_err(|e| e.to_string())?;
    for b in &iv {
        if !b.contains(2.0) {
            return fail(format!("{} n={} = [{}, {}] misses 2", b.method, b.n, b.lower, b.upper));
        }
    }
    Ok(format!("{} intervals contain 2; norms 5·2ⁿ for n ≤ 10", iv.len()))
}

fn converge_csv(s: &MatrixSet, methods: &[Method]) -> Result<Vec<Vec<String>>, String> {
    let o = BoundOptions {
        n_max: 12,
        methods: methods.to_vec(),
        ..Default::default()
    };
    let out = cmd_converge(&load(s), &o, OutputFormat::Csv).map_err(|e| e.to_string())?;
    Ok(out
        .text
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect())
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let at = rows[0]
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows[1..].iter().map(|r| r[at].clone()).collect()
}

fn criterion_3() -> Verdict {
    let s = unipotent();
    let both = converge_csv(&s, &[Method::Main, Method::Traditional])?;
    let main_ratio = column(&both, "ratio_main");
    let trad_ratio = column(&both, "ratio_traditional");
    let mut problems = Vec::new();
    for n in 4..=12 {
        let a: Scalar = main_ratio[n - 1].parse().unwrap();
        let b: Scalar = trad_ratio[n - 1].parse().unwrap();
        if a >= b {
            problems.push(format!(
                "n={n}: ratio_main {} not below ratio_traditional {}",
                main_ratio[n - 1],
                trad_ratio[n - 1]
            ));
        }
    }
    let main_only = converge_csv(&s, &[Method::Main])?;
    let gap_n: f64 = column(&main_only, "gap_times_n")[11].parse().unwrap();
    let ln8 = 8f64.ln();
    if (gap_n - ln8).abs() > LN8_TOL {
        problems.push(format!(
            "gap·n at n=12 is {gap_n:.5}, |{gap_n:.5} − ln 8| = {:.5} > {LN8_TOL}",
            (gap_n - ln8).abs()
        ));
    }
    if problems.is_empty() {
        Ok(format!(
            "ratios strictly ordered for n ∈ [4,12]; gap·n(12) = {gap_n:.5}"
        ))
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0004);
    let mut failures = Vec::new();
    for case in 0..30 {
        let d = rng.gen_range(1..=4);
        let a = random_matrix(&mut rng, d, 0.3);
        let rho = spectral_radius(&a, PERRON_TOL).enclosure;
        let s = MatrixSet::singleton(a);
        let t = norm_table(&s, 10, EnumOptions::default()).map_err(|e| e.to_string())?;
        let b = main_bounds(&s, &t, 10).map_err(|e| e.to_string())?;
        if !b.contains_enclosure(&rho) {
            failures.push(format!(
                "case {case}: [{}, {}] vs [{}, {}]",
                b.lower,
                b.upper,
                rho.lo.to_f64(),
                rho.hi.to_f64()
            ));
        }
    }
    if failures.is_empty() {
        Ok("30 singletons, zero failures".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_5() -> Verdict {
    let mut checks = 0;
    for (case, s) in desk_sets(0xacce_0005, 20, false).iter().enumerate() {
        let t = norm_table(s, 8, EnumOptions::default()).map_err(|e| e.to_string())?;
        let d = Scalar::from(s.dim() as u64);
        for m in 1..8 {
            for n in 1..=8 - m {
                let rhs = &(&d * t.sigma(m).unwrap()) * t.sigma(n).unwrap();
                if *t.sigma(m + n).unwrap() > rhs {
                    return fail(format!("case {case}: ‖Σ^{}‖ > D‖Σ^{m}‖‖Σ^{n}‖", m + n));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} exact comparisons on 20 sets"))
}

fn criterion_6(sets: &[MatrixSet]) -> Verdict {
    let mut checks = 0;
    for (case, s) in sets.iter().enumerate() {
        if !scc(&build_graph(s)).is_strongly_connected() {
            return fail(format!("case {case}: generator produced a non-strongly-connected set"));
        }
        let t = norm_table(s, 8, EnumOptions::default()).map_err(|e| e.to_string())?;
        let c = set_constants(s).map_err(|e| e.to_string())?;
        let d = Scalar::from(s.dim() as u64);
        let factor = (&(&c.u * &d) / &c.v).pow(s.dim() as u32);
        for m in 1..8 {
            for n in 1..=8 - m {
                if t.sigma(m).unwrap() * t.sigma(n).unwrap() > &factor * t.sigma(m + n).unwrap() {
                    return fail(format!("case {case}: ‖Σ^{m}‖‖Σ^{n}‖ > (UD/V)^D ‖Σ^{}‖", m + n));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} exact comparisons on 20 strongly connected sets"))
}

fn criterion_7(sets: &[MatrixSet]) -> Verdict {
    let mut entries = 0usize;
    for (case, s) in sets.iter().enumerate() {
        let c = set_constants(s).map_err(|e| e.to_string())?;
        let d = Scalar::from(s.dim() as u64);
        // every product, no dedup
        let mut products: Vec<Matrix> = s.matrices().to_vec();
        for n in 1..=6 {
            if n > 1 {
                products = products
                    .iter()
                    .flat_map(|p| s.matrices().iter().map(move |a| p.multiply(a).unwrap()))
                    .collect();
            }
            let lo = c.v.pow(n as u32);
            let hi = d.pow(n as u32 - 1) * c.u.pow(n as u32);
            for x in products.iter().flat_map(|p| p.entries()).filter(|x| x.is_positive()) {
                if *x < lo || *x > hi {
                    return fail(format!("case {case}, n={n}: entry {x} outside [{lo}, {hi}]"));
                }
                entries += 1;
            }
        }
    }
    Ok(format!("{entries} positive entries checked"))
}

fn criterion_8() -> Verdict {
    for (case, s) in desk_sets(0xacce_0008, 20, false).iter().enumerate() {
        let a = norm_table(s, 8, EnumOptions::default()).map_err(|e| e.to_string())?;
        let b = norm_table(s, 8, EnumOptions::exhaustive()).map_err(|e| e.to_string())?;
        for n in 1..=8 {
            if a.sigma(n) != b.sigma(n) || a.component_row(n) != b.component_row(n) {
                return fail(format!("case {case}: norm tables differ at n = {n}"));
            }
        }
        let pa = pm_table(s, 8, PERRON_TOL, EnumOptions::default()).map_err(|e| e.to_string())?;
        let pb = pm_table(s, 8, PERRON_TOL, EnumOptions::exhaustive()).map_err(|e| e.to_string())?;
        for m in 1..=8 {
            if pa.pm(m).unwrap() != pb.pm(m).unwrap() {
                return fail(format!("case {case}: P_{m} enclosures differ"));
            }
        }
    }
    Ok("20 instances, n ≤ 8: norms and P_m identical".into())
}

fn criterion_9() -> Verdict {
    let grow = |s: MatrixSet, r_offset: usize| {
        let o = GrowthOptions {
            n_max: 12,
            r_offset,
            ..Default::default()
        };
        cmd_growth(&load(&s), &o, OutputFormat::Json)
            .map_err(|e| e.to_string())
            .map(|o| o.report.growth.unwrap())
    };
    let g = grow(unipotent(), 0)?;
    if g.r != 1 {
        return fail(format!("unipotent r = {}", g.r));
    }
    for p in g.q.iter().filter(|p| (2..=12).contains(&p.n)) {
        if p.norm != Scalar::from(p.n as u64) || p.q != 1.0 {
            return fail(format!("unipotent q_{} = {}", p.n, p.q));
        }
    }
    let g = grow(MatrixSet::singleton(Matrix::<Scalar>::identity(2)), 0)?;
    if g.r != 0 {
        return fail(format!("I₂ r = {}", g.r));
    }
    let g = grow(MatrixSet::singleton(Matrix::from_ints(&[&[2, 0], &[0, 1]]).unwrap()), 0)?;
    if g.r != 0 || !g.lambda.contains(&Scalar::from(2)) || g.lambda.rel_width() > GROWTH_WIDTH_TOL {
        return fail(format!("diag(2,1): r = {}, λ = {:?}", g.r, g.lambda));
    }
    let off = grow(unipotent(), 1)?;
    if off.slope > DRIFT_SLOPE {
        return fail(format!("forced r+1 slope {} above {DRIFT_SLOPE}", off.slope));
    }
    Ok(format!("r = 1, 0, 0; forced r+1 slope {:.3}", off.slope))
}

fn criterion_10(sets: &[MatrixSet]) -> Verdict {
    let mut worst = 0.0f64;
    for (case, s) in sets.iter().enumerate() {
        let t = norm_table(s, 10, EnumOptions::default()).map_err(|e| e.to_string())?;
        let pm = pm_table(s, 10, PERRON_TOL, EnumOptions::default()).map_err(|e| e.to_string())?;
        let d = s.dim() as f64;
        let (mut lower, mut upper) = (0.0f64, f64::INFINITY);
        let mut gaps = Vec::new();
        for m in 1..=10 {
            lower = lower.max(pm.pm(m).unwrap().lo.to_f64().powf(1.0 / m as f64));
            upper = upper.min((d * t.sigma(m).unwrap().to_f64()).powf(1.0 / m as f64));
            gaps.push((upper - lower) * m as f64);
        }
        let base = gaps[3] * RATE_FACTOR;
        for n in 4..=10 {
            let g = gaps[n - 1];
            if g > base + 1e-12 {
                return fail(format!(
                    "case {case}: gap·n at n={n} is {g:.4} > 1.5·gap(4)·4 = {base:.4}"
                ));
            }
            if gaps[3] > 0.0 {
                worst = worst.max(g / gaps[3]);
            }
        }
    }
    Ok(format!("10 sets; max gap(n)·n / gap(4)·4 = {worst:.3}"))
}

fn criterion_11(instances: &[MatrixSet]) -> Verdict {
    for (i, s) in instances.iter().enumerate() {
        match best_bounds(s, 6, &Method::ALL, PERRON_TOL, EnumOptions::default()) {
            Err(JsrError::Inconsistent(e)) => return fail(format!("instance {i}: {e}")),
            Err(e) => return fail(format!("instance {i}: {e}")),
            Ok(b) if b.lower > b.upper => return fail(format!("instance {i}: empty")),
            Ok(_) => {}
        }
    }
    Ok(format!("{} instances, no empty intersection", instances.len()))
}

fn main() {
    let connected = desk_sets(0xacce_0006, 20, true);
    let rate_sets = {
        let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0010);
        (0..10)
            .map(|_| {
                let d = rng.gen_range(1..=4);
                let k = rng.gen_range(1..=3);
                random_set(&mut rng, d, k, 0.25)
            })
            .collect::<Vec<_>>()
    };
    let mut all_instances = vec![
        unipotent(),
        skewed(),
        MatrixSet::singleton(Matrix::<Scalar>::identity(2)),
        MatrixSet::singleton(Matrix::from_ints(&[&[2, 0], &[0, 1]]).unwrap()),
    ];
    all_instances.extend(desk_sets(0xacce_0005, 20, false));
    all_instances.extend(connected.iter().cloned());
    all_instances.extend(desk_sets(0xacce_0008, 20, false));
    all_instances.extend(rate_sets.iter().cloned());
    {
        let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0004);
        for _ in 0..30 {
            let d = rng.gen_range(1..=4);
            all_instances.push(MatrixSet::singleton(random_matrix(&mut rng, d, 0.3)));
        }
    }

    let criteria: Vec<Criterion> = vec![
        (
            "1  unipotent example: main and traditional endpoints",
            Box::new(criterion_1),
        ),
        (
            "2  skewed example: intervals contain 2, norms 5·2ⁿ",
            Box::new(criterion_2),
        ),
        (
            "3  ratio columns ordered, main gap·n → ln 8 ± 0.05",
            Box::new(criterion_3),
        ),
        ("4  main bounds contain Perron enclosures", Box::new(criterion_4)),
        ("5  ‖Σ^(m+n)‖ ≤ D‖Σᵐ‖‖Σⁿ‖", Box::new(criterion_5)),
        ("6  ‖Σᵐ‖‖Σⁿ‖ ≤ (UD/V)^D ‖Σ^(m+n)‖", Box::new(|| criterion_6(&connected))),
        (
            "7  product entries within [Vⁿ, Dⁿ⁻¹Uⁿ]",
            Box::new(|| criterion_7(&connected)),
        ),
        ("8  pruned and exhaustive enumeration agree", Box::new(criterion_8)),
        ("9  growth order examples and negative control", Box::new(criterion_9)),
        (
            "10 gap(n)·n stays within 1.5·gap(4)·4",
            Box::new(|| criterion_10(&rate_sets)),
        ),
        ("11 best bounds never empty", Box::new(|| criterion_11(&all_instances))),
    ];

    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
