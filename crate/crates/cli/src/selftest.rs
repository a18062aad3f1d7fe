//! Embedded regressions and reduced property suites behind `jsr selftest`.

use std::fmt::Write as _;

use jsr_core::{
    all_intervals, build_graph, entry_range_check, norm_table, pm_table, scc, set_constants, spectral_radius,
    EnumOptions, Matrix, MatrixSet, Method, PruneMode, Scalar, DEFAULT_BUDGET,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commands::{cmd_bound, cmd_growth, BoundOptions, GrowthOptions};
use crate::input::{parse_input, InputDocument, LoadedInput};
use crate::random::{random_connected_set, random_matrix, random_set};
use crate::report::{OutputFormat, RunReport};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Hooks {
    /// Replace dominance pruning with a deliberately unsound rule.
    pub break_pruning: bool,
    /// Add this to every computed growth exponent.
    pub r_offset: usize,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

#[derive(Clone, Debug)]
pub struct Summary {
    pub results: Vec<CheckResult>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.outcome.is_ok())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            match &r.outcome {
                Ok(()) => {
                    let _ = writeln!(out, "PASS {}", r.name);
                }
                Err(e) => {
                    let _ = writeln!(out, "FAIL {}: {e}", r.name);
                }
            }
        }
        let failed = self.results.iter().filter(|r| r.outcome.is_err()).count();
        let _ = writeln!(out, "{} checks, {} failed", self.results.len(), failed);
        out
    }
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(s: &MatrixSet) -> LoadedInput {
    parse_input(InputDocument::from_set(s).to_json().as_bytes()).expect("generated document parses")
}

pub fn unipotent() -> MatrixSet {
    MatrixSet::singleton(Matrix::from_ints(&[&[1, 1], &[0, 1]]).expect("square"))
}

pub fn skewed() -> MatrixSet {
    MatrixSet::singleton(Matrix::from_ratios(&[&[(1, 1), (1, 10)], &[(10, 1), (1, 1)]]).expect("square"))
}

fn unipotent_regression() -> Check {
    let s = unipotent();
    let iv = all_intervals(
        &s,
        12,
        &[Method::Main, Method::Traditional],
        1e-9,
        EnumOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    for b in iv {
        let n = b.n as f64;
        let (lo, hi, lr, ur) = match b.method {
            Method::Main => (
                (0.25f64).powf(1.0 / n),
                2f64.powf(1.0 / n),
                Scalar::ratio(1, 4),
                Scalar::from(2),
            ),
            _ => (
                1.0,
                (2.0 * n).powf(1.0 / n),
                Scalar::one(),
                Scalar::from(2 * b.n as u64),
            ),
        };
        ensure(b.lower_radicand == lr && b.upper_radicand == ur, || {
            format!("{} n={} radicands", b.method, b.n)
        })?;
        ensure((b.lower - lo).abs() < 1e-9 && (b.upper - hi).abs() < 1e-9, || {
            format!("{} n={}: [{}, {}]", b.method, b.n, b.lower, b.upper)
        })?;
    }
    Ok(())
}

fn skewed_regression() -> Check {
    let s = skewed();
    let t = norm_table(&s, 10, EnumOptions::default()).map_err(|e| e.to_string())?;
    for n in 1..=10 {
        let expect = Scalar::from(5 * (1u64 << n));
        ensure(t.sigma(n).ok() == Some(&expect), || format!("‖Σ^{n}‖ ≠ {expect}"))?;
    }
    for b in all_intervals(&s, 10, &Method::ALL, 1e-9, EnumOptions::default()).map_err(|e| e.to_string())? {
        ensure(b.contains(2.0), || {
            format!("{} n={} misses 2: [{}, {}]", b.method, b.n, b.lower, b.upper)
        })?;
    }
    Ok(())
}

fn zero_regression() -> Check {
    let s = MatrixSet::singleton(Matrix::<Scalar>::zeros(3));
    let out = cmd_bound(
        &load(&s),
        &BoundOptions {
            n_max: 3,
            ..Default::default()
        },
        OutputFormat::Json,
    )
    .map_err(|e| e.to_string())?;
    let best = out.report.best.ok_or("no best bounds")?;
    ensure(best.lower == "0" && best.upper == "0", || {
        format!("[{}, {}]", best.lower, best.upper)
    })
}

fn pruning_equivalence(hooks: Hooks) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let pruned = EnumOptions {
        prune: if hooks.break_pruning {
            PruneMode::BrokenForTesting
        } else {
            PruneMode::Dominance
        },
        budget: DEFAULT_BUDGET,
    };
    for case in 0..8 {
        let s = random_set(&mut rng, 2 + case % 3, 1 + case % 3, 0.3);
        let a = norm_table(&s, 6, pruned).map_err(|e| e.to_string())?;
        let b = norm_table(&s, 6, EnumOptions::exhaustive()).map_err(|e| e.to_string())?;
        for n in 1..=6 {
            ensure(
                a.sigma(n) == b.sigma(n) && a.component_row(n) == b.component_row(n),
                || format!("case {case}: pruned and exhaustive norms differ at n = {n}"),
            )?;
        }
        let pa = pm_table(&s, 4, 1e-9, pruned).map_err(|e| e.to_string())?;
        let pb = pm_table(&s, 4, 1e-9, EnumOptions::exhaustive()).map_err(|e| e.to_string())?;
        for m in 1..=4 {
            ensure(pa.pm(m).ok() == pb.pm(m).ok(), || format!("case {case}: P_{m} differs"))?;
        }
    }
    Ok(())
}

fn norm_inequalities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for case in 0..6 {
        let s = random_connected_set(&mut rng, 1 + case % 3, 1 + case % 2, 0.4);
        let t = norm_table(&s, 6, EnumOptions::default()).map_err(|e| e.to_string())?;
        let c = set_constants(&s).map_err(|e| e.to_string())?;
        let d = Scalar::from(s.dim() as u64);
        let factor = (&(&c.u * &d) / &c.v).pow(s.dim() as u32);
        for m in 1..6 {
            for n in 1..=6 - m {
                let (a, b, ab) = (t.sigma(m).unwrap(), t.sigma(n).unwrap(), t.sigma(m + n).unwrap());
                ensure(*ab <= &(&d * a) * b, || {
                    format!("case {case}: submultiplicativity at ({m},{n})")
                })?;
                ensure(a * b <= &factor * ab, || {
                    format!("case {case}: supermultiplicativity at ({m},{n})")
                })?;
            }
        }
        entry_range_check(&s, 4, DEFAULT_BUDGET).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(())
}

fn perron_sandwich() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for case in 0..10 {
        let a = random_matrix(&mut rng, 1 + case % 4, 0.3);
        let rho = spectral_radius(&a, 1e-9).enclosure;
        let s = MatrixSet::singleton(a);
        let iv = all_intervals(&s, 8, &[Method::Main], 1e-9, EnumOptions::default()).map_err(|e| e.to_string())?;
        let b = iv.last().expect("n = 8 present");
        ensure(b.contains_enclosure(&rho), || {
            format!("case {case}: [{}, {}] misses {rho:?}", b.lower, b.upper)
        })?;
    }
    Ok(())
}

fn growth_regression(hooks: Hooks) -> Check {
    let opts = GrowthOptions {
        n_max: 12,
        r_offset: hooks.r_offset,
        ..Default::default()
    };
    let cases: [(MatrixSet, usize); 3] = [
        (unipotent(), 1),
        (MatrixSet::singleton(Matrix::<Scalar>::identity(2)), 0),
        (
            MatrixSet::singleton(Matrix::from_ints(&[&[2, 0], &[0, 1]]).expect("square")),
            0,
        ),
    ];
    for (s, r) in cases {
        let out = cmd_growth(&load(&s), &opts, OutputFormat::Json).map_err(|e| e.to_string())?;
        let g = out.report.growth.ok_or("no growth section")?;
        ensure(g.r == r, || format!("r = {} expected {r}", g.r))?;
        ensure(!g.drift_detected, || {
            format!("q_n drifts: slope {} with r = {}", g.slope, g.r_used)
        })?;
    }
    Ok(())
}

fn report_round_trip() -> Check {
    let s = MatrixSet::new(vec![
        Matrix::from_ratios(&[&[(1, 3), (2, 7)], &[(0, 1), (5, 4)]]).expect("square"),
        Matrix::from_ratios(&[&[(0, 1), (1, 1)], &[(3, 2), (0, 1)]]).expect("square"),
    ])
    .expect("same dimension");
    let out = cmd_bound(
        &load(&s),
        &BoundOptions {
            n_max: 5,
            ..Default::default()
        },
        OutputFormat::Json,
    )
    .map_err(|e| e.to_string())?;
    let back: RunReport = serde_json::from_str(&out.text).map_err(|e| e.to_string())?;
    ensure(back == out.report, || {
        "JSON report does not parse back to the same values".into()
    })?;
    ensure(scc(&build_graph(&s)).is_strongly_connected(), || {
        "fixture should be strongly connected".into()
    })
}

type CheckFn = Box<dyn Fn() -> Check>;

pub fn run(hooks: Hooks) -> Summary {
    let checks: Vec<(&'static str, CheckFn)> = vec![
        (
            "unipotent example radicands and endpoints",
            Box::new(unipotent_regression),
        ),
        ("skewed example norms and containment of 2", Box::new(skewed_regression)),
        ("zero matrix gives [0, 0]", Box::new(zero_regression)),
        (
            "pruned and exhaustive enumeration agree",
            Box::new(move || pruning_equivalence(hooks)),
        ),
        ("norm inequalities and entry range", Box::new(norm_inequalities)),
        ("main bounds contain Perron enclosures", Box::new(perron_sandwich)),
        (
            "growth exponent and q_n stability",
            Box::new(move || growth_regression(hooks)),
        ),
        ("JSON report round trip", Box::new(report_round_trip)),
    ];
    Summary {
        results: checks
            .into_iter()
            .map(|(name, f)| CheckResult { name, outcome: f() })
            .collect(),
    }
}
