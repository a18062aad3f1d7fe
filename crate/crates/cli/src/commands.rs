//! `bound`, `growth` and `converge`.

use std::time::Instant;

use jsr_core::{
    best_bounds, blondel_nesterov_bounds, build_graph, classify, connected_bounds, growth_exponent,
    intersect_intervals, main_bounds, norm_table, norm_table_partial, pm_table, refine_lambda, scc, traditional_bounds,
    verify_growth, BoundInterval, Entry, EnumOptions, JsrError, MatrixSet, Method, Rounding, Scalar,
    DEFAULT_MAX_REL_WIDTH, DEFAULT_REL_TOL,
};

use crate::error::{CliError, EXIT_BUDGET};
use crate::input::LoadedInput;
use crate::report::{
    exact_decimal, exact_endpoints, Arithmetic, BestRow, CondensationReport, ConstantsReport, ConvergeReport,
    ConvergeRow, GrowthSection, IntervalRow, LambdaRow, OutputFormat, PartialMarker, RunReport,
};

/// |slope| of ln q_n against ln n at which the growth exponent is flagged.
pub const DRIFT_THRESHOLD: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundOptions {
    pub n_max: usize,
    pub methods: Vec<Method>,
    pub arithmetic: Arithmetic,
    pub rel_tol: f64,
    pub enumeration: EnumOptions,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            n_max: 8,
            methods: Method::ALL.to_vec(),
            arithmetic: Arithmetic::Exact,
            rel_tol: DEFAULT_REL_TOL,
            enumeration: EnumOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthOptions {
    pub n_cls: Option<usize>,
    pub n_max: usize,
    pub rel_tol: f64,
    pub max_rel_width: f64,
    pub enumeration: EnumOptions,
    /// Added to the computed exponent before normalizing; a negative control.
    pub r_offset: usize,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            n_cls: None,
            n_max: 12,
            rel_tol: DEFAULT_REL_TOL,
            max_rel_width: DEFAULT_MAX_REL_WIDTH,
            enumeration: EnumOptions::default(),
            r_offset: 0,
        }
    }
}

/// Rendered output plus the exit status it warrants.
#[derive(Clone, Debug)]
pub struct Outcome<R> {
    pub report: R,
    pub text: String,
    pub exit_code: i32,
}

struct Computed {
    intervals: Vec<BoundInterval>,
    reached: usize,
    overflow: Option<JsrError>,
    notes: Vec<String>,
}

fn compute<T: Entry>(s: &MatrixSet<T>, o: &BoundOptions) -> Result<Computed, CliError> {
    if o.n_max == 0 {
        return Err(JsrError::OutOfRange { n: 0, max: usize::MAX }.into());
    }
    let (table, overflow) = norm_table_partial(s, o.n_max, o.enumeration);
    let reached = table.n_max;
    if reached == 0 {
        return Err(overflow.unwrap_or(JsrError::EmptySet).into());
    }
    let strongly_connected = s.all_zero() || scc(&build_graph(s)).is_strongly_connected();
    let pm = if o.methods.contains(&Method::Traditional) {
        Some(pm_table(s, reached, o.rel_tol, o.enumeration)?)
    } else {
        None
    };
    let mut notes = Vec::new();
    let mut intervals = Vec::new();
    for &method in &o.methods {
        match method {
            Method::Blondel => {
                intervals.push(blondel_nesterov_bounds(s, o.rel_tol));
                notes.push(format!("blondel: lower bound is rho(S)/m with m = |Σ| = {}", s.len()));
            }
            Method::Connected if !strongly_connected => {
                notes.push("connected: dependency graph is not strongly connected; skipped".into());
            }
            _ => {
                for n in 1..=reached {
                    intervals.push(match method {
                        Method::Main => main_bounds(s, &table, n)?,
                        Method::Connected => connected_bounds(s, &table, n)?,
                        _ => traditional_bounds(s, &table, pm.as_ref().expect("computed above"), n)?,
                    });
                }
            }
        }
    }
    if pm.as_ref().is_some_and(|p| p.loose) {
        notes.push("traditional: some Perron enclosures hit the iteration cap and are wider than --rel-tol".into());
    }
    Ok(Computed {
        intervals,
        reached,
        overflow,
        notes,
    })
}

fn compute_for(input: &LoadedInput, o: &BoundOptions) -> Result<Computed, CliError> {
    match o.arithmetic {
        Arithmetic::Exact => compute(&input.set, o),
        Arithmetic::Float => compute(&input.set.to_f64(), o),
    }
}

fn partial_marker(c: &Computed) -> Option<PartialMarker> {
    c.overflow.as_ref().map(|e| PartialMarker {
        reason: e.to_string(),
        completed_n: c.reached,
    })
}

fn skeleton(command: &str, input: &LoadedInput, arithmetic: Arithmetic) -> RunReport {
    RunReport {
        command: command.into(),
        input_sha256: input.digest.clone(),
        arithmetic,
        constants: ConstantsReport::new(&input.set),
        condensation: CondensationReport::new(&scc(&build_graph(&input.set))),
        intervals: Vec::new(),
        best: None,
        growth: None,
        partial: None,
        notes: Vec::new(),
    }
}

pub fn cmd_bound(input: &LoadedInput, o: &BoundOptions, format: OutputFormat) -> Result<Outcome<RunReport>, CliError> {
    let start = Instant::now();
    let c = compute_for(input, o)?;
    let best = intersect_intervals(&c.intervals)?;
    let mut report = skeleton("bound", input, o.arithmetic);
    report.intervals = c.intervals.iter().map(IntervalRow::new).collect();
    report.best = Some(BestRow::new(&best, &report.intervals));
    report.partial = partial_marker(&c);
    report.notes = c.notes;
    let text = match format {
        OutputFormat::Table => {
            let mut t = report.bound_table();
            t.push_str(&format!("time: {:.1} ms\n", start.elapsed().as_secs_f64() * 1e3));
            t
        }
        OutputFormat::Csv => report.bound_csv(),
        OutputFormat::Json => report.to_json(),
    };
    let exit_code = if report.partial.is_some() { EXIT_BUDGET } else { 0 };
    Ok(Outcome {
        report,
        text,
        exit_code,
    })
}

pub fn cmd_growth(
    input: &LoadedInput,
    o: &GrowthOptions,
    format: OutputFormat,
) -> Result<Outcome<RunReport>, CliError> {
    let start = Instant::now();
    let s = &input.set;
    if s.all_zero() {
        return Err(JsrError::ConstantsUndefined.into());
    }
    let cond = scc(&build_graph(s));
    let cls = classify(s, &cond, o.n_cls, o.enumeration)?;
    let g = growth_exponent(&cond, &cls)?;
    let best = best_bounds(s, o.n_max, &Method::ALL, o.rel_tol, o.enumeration)?;
    let g = refine_lambda(&g, &best)?;
    let table = norm_table(s, o.n_max, o.enumeration)?;
    let used = jsr_core::GrowthOrder {
        r: g.r + o.r_offset,
        ..g.clone()
    };
    let verified = verify_growth(&table, &used, 1, o.n_max, o.max_rel_width).map_err(|e| match e {
        JsrError::LambdaTooWide { .. } => CliError::LambdaTooWide {
            error: e,
            depth: cls.depth,
        },
        other => other.into(),
    })?;

    let mut report = skeleton("growth", input, Arithmetic::Exact);
    report.best = Some(BestRow::new(&best, &[]));
    report.growth = Some(GrowthSection {
        depth: cls.depth,
        components: cls
            .lambda
            .iter()
            .zip(&cls.critical)
            .enumerate()
            .map(|(c, (l, &critical))| LambdaRow {
                component: c + 1,
                lo: l.lo.clone(),
                hi: l.hi.clone(),
                critical,
            })
            .collect(),
        lambda: g.lambda.clone(),
        r: g.r,
        path: g.path.iter().map(|c| c + 1).collect(),
        witness_chain: g.witness_chain.iter().map(|c| c + 1).collect(),
        r_used: used.r,
        q: GrowthSection::q_rows(&verified),
        alpha: verified.alpha,
        beta: verified.beta,
        slope: verified.slope,
        drift_detected: verified.drift_detected(DRIFT_THRESHOLD),
    });
    let text = match format {
        OutputFormat::Table => {
            let mut t = report.growth_table();
            t.push_str(&format!("time: {:.1} ms\n", start.elapsed().as_secs_f64() * 1e3));
            t
        }
        OutputFormat::Csv => report.growth_csv(),
        OutputFormat::Json => report.to_json(),
    };
    Ok(Outcome {
        report,
        text,
        exit_code: 0,
    })
}

pub fn cmd_converge(
    input: &LoadedInput,
    o: &BoundOptions,
    format: OutputFormat,
) -> Result<Outcome<ConvergeReport>, CliError> {
    let c = compute_for(input, o)?;
    let endpoints: Vec<(Scalar, Scalar)> = c.intervals.iter().map(exact_endpoints).collect();
    let mut rows = Vec::with_capacity(c.reached);
    let mut lower = Scalar::zero();
    let mut upper: Option<Scalar> = None;
    for n in 1..=c.reached {
        // row n folds in every interval of length ≤ n; blondel has length 1
        for (_, (lo, hi)) in c.intervals.iter().zip(&endpoints).filter(|(b, _)| b.n == n) {
            if *lo > lower {
                lower = lo.clone();
            }
            if upper.as_ref().is_none_or(|u| hi < u) {
                upper = Some(hi.clone());
            }
        }
        let Some(up) = upper.as_ref() else {
            return Err(JsrError::Inconsistent(format!("no upper bound available at n = {n}")).into());
        };
        let gap = up.checked_sub(&lower).ok_or_else(|| {
            JsrError::Inconsistent(format!(
                "running bounds cross at n = {n}: {} > {}",
                lower.to_f64(),
                up.to_f64()
            ))
        })?;
        let ratios = o
            .methods
            .iter()
            .map(|&m| {
                let len = if m == Method::Blondel { 1 } else { n };
                let r = c
                    .intervals
                    .iter()
                    .find(|b| b.method == m && b.n == len)
                    .and_then(BoundInterval::ratio)
                    .map(|e| exact_decimal(&e.hi, Rounding::Up));
                (m, r)
            })
            .collect();
        rows.push(ConvergeRow {
            n,
            best_lower: exact_decimal(&lower, Rounding::Down),
            best_upper: exact_decimal(up, Rounding::Up),
            gap: exact_decimal(&gap, Rounding::Up),
            gap_times_n: exact_decimal(&(&gap * &Scalar::from(n as u64)), Rounding::Up),
            ratios,
        });
    }
    let report = ConvergeReport {
        input_sha256: input.digest.clone(),
        methods: o.methods.clone(),
        rows,
        partial: partial_marker(&c),
        notes: c.notes,
    };
    let text = match format {
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Table => report.to_table(),
        OutputFormat::Json => report.to_json(),
    };
    let exit_code = if report.partial.is_some() { EXIT_BUDGET } else { 0 };
    Ok(Outcome {
        report,
        text,
        exit_code,
    })
}

/// Parses a comma list of methods; `all` expands to every method.
pub fn parse_methods(list: &str) -> Result<Vec<Method>, String> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "all" {
            out.extend(Method::ALL);
        } else {
            out.push(item.parse::<Method>().map_err(|e| e.to_string())?);
        }
    }
    if out.is_empty() {
        return Err("no methods given".into());
    }
    out.sort();
    out.dedup();
    Ok(out)
}
