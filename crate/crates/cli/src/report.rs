//! Run reports and their table / CSV / JSON renderings.
//!
//! Decimal endpoints carry 15 significant digits, rounded away from the
//! enclosed value (lower ends down, upper ends up). Exact radicands travel as
//! `p/q` strings, so a JSON report parses back to the same rationals.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use jsr_core::{
    nth_root_enclosure, set_constants, BestBounds, BoundInterval, Condensation, Enclosure, GrowthReport, MatrixSet,
    Method, Rounding, Scalar,
};
use serde::{Deserialize, Serialize};

pub const SIG_DIGITS: usize = 15;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Exact,
    Float,
}

impl FromStr for Arithmetic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Arithmetic::Exact),
            "float" => Ok(Arithmetic::Float),
            _ => Err(format!("unknown arithmetic {s:?} (exact|float)")),
        }
    }
}

impl fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arithmetic::Exact => "exact",
            Arithmetic::Float => "float",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(OutputFormat::Table),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("unknown output format {s:?} (table|csv|json)")),
        }
    }
}

/// `x` with [`SIG_DIGITS`] digits, rounded in direction `dir`; `inf` for infinity.
pub fn decimal(x: f64, dir: Rounding) -> String {
    if x.is_infinite() {
        return "inf".into();
    }
    match Scalar::from_f64(x) {
        Ok(s) => s.to_sig_string(SIG_DIGITS, dir),
        Err(_) => format!("{x}"),
    }
}

pub fn exact_decimal(x: &Scalar, dir: Rounding) -> String {
    x.to_sig_string(SIG_DIGITS, dir)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub dimension: usize,
    pub set_size: usize,
    pub all_zero: bool,
    /// Largest entry; absent for the all-zero set.
    pub u: Option<Scalar>,
    /// Smallest positive entry.
    pub v: Option<Scalar>,
    pub k: Option<Scalar>,
}

impl ConstantsReport {
    pub fn new(s: &MatrixSet) -> Self {
        let c = set_constants(s).ok();
        ConstantsReport {
            dimension: s.dim(),
            set_size: s.len(),
            all_zero: s.all_zero(),
            u: c.as_ref().map(|c| c.u.clone()),
            v: c.as_ref().map(|c| c.v.clone()),
            k: c.map(|c| c.k),
        }
    }
}

/// Components and vertices are numbered from 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub index: usize,
    pub vertices: Vec<usize>,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondensationReport {
    pub strongly_connected: bool,
    pub components: Vec<ComponentRow>,
    pub dag_edges: Vec<[usize; 2]>,
}

impl CondensationReport {
    pub fn new(cond: &Condensation) -> Self {
        CondensationReport {
            strongly_connected: cond.is_strongly_connected(),
            components: cond
                .components
                .iter()
                .enumerate()
                .map(|(c, vs)| ComponentRow {
                    index: c + 1,
                    vertices: vs.iter().map(|v| v + 1).collect(),
                    trivial: cond.trivial[c],
                })
                .collect(),
            dag_edges: cond.dag_edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalRow {
    pub method: Method,
    pub n: usize,
    pub lower_radicand: Scalar,
    pub upper_radicand: Scalar,
    /// Rounded down.
    pub lower: String,
    /// Rounded up.
    pub upper: String,
    pub certified: bool,
}

/// Exact outer endpoints of an interval: the n-th root enclosures of its radicands.
pub fn exact_endpoints(b: &BoundInterval) -> (Scalar, Scalar) {
    let n = b.n as u32;
    (
        nth_root_enclosure(&b.lower_radicand, n).lo,
        nth_root_enclosure(&b.upper_radicand, n).hi,
    )
}

impl IntervalRow {
    pub fn new(b: &BoundInterval) -> Self {
        let (lo, hi) = exact_endpoints(b);
        IntervalRow {
            method: b.method,
            n: b.n,
            lower_radicand: b.lower_radicand.clone(),
            upper_radicand: b.upper_radicand.clone(),
            lower: exact_decimal(&lo, Rounding::Down),
            upper: exact_decimal(&hi, Rounding::Up),
            certified: b.certified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Source {
    pub method: Method,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestRow {
    pub lower: String,
    pub upper: String,
    pub lower_source: Source,
    pub upper_source: Source,
    pub certified: bool,
}

impl BestRow {
    /// Endpoints are copied from the rows the best bounds came from.
    pub fn new(b: &BestBounds, rows: &[IntervalRow]) -> Self {
        let find = |(m, n): (Method, usize)| rows.iter().find(|r| r.method == m && r.n == n);
        BestRow {
            lower: find(b.lower_source).map_or_else(|| decimal(b.lower, Rounding::Down), |r| r.lower.clone()),
            upper: find(b.upper_source).map_or_else(|| decimal(b.upper, Rounding::Up), |r| r.upper.clone()),
            lower_source: Source {
                method: b.lower_source.0,
                n: b.lower_source.1,
            },
            upper_source: Source {
                method: b.upper_source.0,
                n: b.upper_source.1,
            },
            certified: b.certified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub component: usize,
    pub lo: Scalar,
    pub hi: Scalar,
    pub critical: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QRow {
    pub n: usize,
    pub norm: Scalar,
    pub q: f64,
    pub q_at_lambda_lo: f64,
    pub q_at_lambda_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSection {
    pub depth: usize,
    pub components: Vec<LambdaRow>,
    pub lambda: Enclosure,
    pub r: usize,
    /// Components of the heaviest chain, numbered from 1.
    pub path: Vec<usize>,
    pub witness_chain: Vec<usize>,
    /// Exponent actually used to normalize `q_n` (differs from `r` only under a test hook).
    pub r_used: usize,
    pub q: Vec<QRow>,
    pub alpha: f64,
    pub beta: f64,
    pub slope: f64,
    pub drift_detected: bool,
}

impl GrowthSection {
    pub fn q_rows(report: &GrowthReport) -> Vec<QRow> {
        report
            .points
            .iter()
            .map(|p| QRow {
                n: p.n,
                norm: p.norm.clone(),
                q: p.q,
                q_at_lambda_lo: p.q_at_lo,
                q_at_lambda_hi: p.q_at_hi,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialMarker {
    pub reason: String,
    /// Largest product length fully processed.
    pub completed_n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub input_sha256: String,
    pub arithmetic: Arithmetic,
    pub constants: ConstantsReport,
    pub condensation: CondensationReport,
    pub intervals: Vec<IntervalRow>,
    pub best: Option<BestRow>,
    pub growth: Option<GrowthSection>,
    pub partial: Option<PartialMarker>,
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn bound_csv(&self) -> String {
        let mut out = String::from(
            "method,n,lower,lower_rounding,upper,upper_rounding,width_times_n,lower_radicand,upper_radicand,certified\n",
        );
        for r in &self.intervals {
            let _ = writeln!(
                out,
                "{},{},{},down,{},up,{},{},{},{}",
                r.method,
                r.n,
                r.lower,
                r.upper,
                width_times_n(&r.lower, &r.upper, r.n),
                r.lower_radicand,
                r.upper_radicand,
                r.certified
            );
        }
        if let Some(b) = &self.best {
            let _ = writeln!(out, "best,,{},down,{},up,,,,{}", b.lower, b.upper, b.certified);
        }
        if let Some(p) = &self.partial {
            let _ = writeln!(out, "# partial: {} (completed n = {})", p.reason, p.completed_n);
        }
        out
    }

    pub fn bound_table(&self) -> String {
        let mut out = self.header_table();
        let _ = writeln!(
            out,
            "{:<12} {:>4} {:>22} {:>22} {:>20}",
            "method", "n", "lower", "upper", "width·n"
        );
        for r in &self.intervals {
            let _ = writeln!(
                out,
                "{:<12} {:>4} {:>22} {:>22} {:>20}",
                r.method.as_str(),
                r.n,
                r.lower,
                r.upper,
                width_times_n(&r.lower, &r.upper, r.n)
            );
        }
        if let Some(b) = &self.best {
            let _ = writeln!(
                out,
                "best: [{}, {}]  (lower from {} n={}, upper from {} n={}){}",
                b.lower,
                b.upper,
                b.lower_source.method,
                b.lower_source.n,
                b.upper_source.method,
                b.upper_source.n,
                if b.certified { "" } else { "  [float, not certified]" }
            );
        }
        self.footer_table(&mut out);
        out
    }

    pub fn growth_csv(&self) -> String {
        let mut out = String::new();
        if let Some(g) = &self.growth {
            let _ = writeln!(
                out,
                "# r = {}; witness chain = {:?}; depth = {}",
                g.r, g.witness_chain, g.depth
            );
            let _ = writeln!(
                out,
                "# lambda in [{}, {}]; slope = {}; drift = {}",
                exact_decimal(&g.lambda.lo, Rounding::Down),
                exact_decimal(&g.lambda.hi, Rounding::Up),
                g.slope,
                g.drift_detected
            );
            for c in &g.components {
                let _ = writeln!(
                    out,
                    "# component {}: lambda in [{}, {}] critical = {}",
                    c.component,
                    exact_decimal(&c.lo, Rounding::Down),
                    exact_decimal(&c.hi, Rounding::Up),
                    c.critical
                );
            }
            out.push_str("n,norm,q,q_at_lambda_lo,q_at_lambda_hi\n");
            for p in &g.q {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    p.n, p.norm, p.q, p.q_at_lambda_lo, p.q_at_lambda_hi
                );
            }
        }
        out
    }

    pub fn growth_table(&self) -> String {
        let mut out = self.header_table();
        if let Some(g) = &self.growth {
            let _ = writeln!(out, "classification depth: {}", g.depth);
            let _ = writeln!(
                out,
                "{:>9}  {:>22} {:>22}  critical",
                "component", "lambda lo", "lambda hi"
            );
            for c in &g.components {
                let _ = writeln!(
                    out,
                    "{:>9}  {:>22} {:>22}  {}",
                    c.component,
                    exact_decimal(&c.lo, Rounding::Down),
                    exact_decimal(&c.hi, Rounding::Up),
                    if c.critical { "yes" } else { "no" }
                );
            }
            let _ = writeln!(
                out,
                "lambda in [{}, {}]",
                exact_decimal(&g.lambda.lo, Rounding::Down),
                exact_decimal(&g.lambda.hi, Rounding::Up)
            );
            let _ = writeln!(
                out,
                "r = {}  witness chain {:?}  path {:?}",
                g.r, g.witness_chain, g.path
            );
            if g.r_used != g.r {
                let _ = writeln!(out, "normalizing with r = {} (test hook)", g.r_used);
            }
            let _ = writeln!(out, "{:>4} {:>24} {:>22}", "n", "‖Σⁿ‖", "q_n");
            for p in &g.q {
                let _ = writeln!(
                    out,
                    "{:>4} {:>24} {:>22}",
                    p.n,
                    p.norm.to_sig_string(SIG_DIGITS, Rounding::Down),
                    p.q
                );
            }
            let _ = writeln!(
                out,
                "alpha = {}  beta = {}  log-log slope = {}",
                g.alpha, g.beta, g.slope
            );
            if g.drift_detected {
                out.push_str("WARNING: q_n drifts polynomially; r is likely wrong\n");
            }
        }
        self.footer_table(&mut out);
        out
    }

    fn header_table(&self) -> String {
        let mut out = String::new();
        let c = &self.constants;
        let _ = writeln!(out, "input sha256 {}", self.input_sha256);
        let show = |x: &Option<Scalar>| x.as_ref().map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(
            out,
            "D = {}  |Σ| = {}  U = {}  V = {}  K = {}  arithmetic = {}",
            c.dimension,
            c.set_size,
            show(&c.u),
            show(&c.v),
            show(&c.k),
            self.arithmetic
        );
        let comps: Vec<String> = self
            .condensation
            .components
            .iter()
            .map(|c| {
                let vs: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
                format!("{{{}}}{}", vs.join(","), if c.trivial { "*" } else { "" })
            })
            .collect();
        let _ = writeln!(out, "components: {}  (* = trivial)", comps.join(" "));
        out
    }

    fn footer_table(&self, out: &mut String) {
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(p) = &self.partial {
            let _ = writeln!(out, "PARTIAL: {} (completed n = {})", p.reason, p.completed_n);
        }
    }
}

/// `(upper − lower)·n` from the printed endpoints, rounded up.
fn width_times_n(lower: &str, upper: &str, n: usize) -> String {
    if upper == "inf" {
        return "inf".into();
    }
    let (Ok(lo), Ok(hi)) = (lower.parse::<Scalar>(), upper.parse::<Scalar>()) else {
        return String::new();
    };
    let w = hi.checked_sub(&lo).unwrap_or_else(Scalar::zero);
    exact_decimal(&(&w * &Scalar::from(n as u64)), Rounding::Up)
}

/// One row of the convergence table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergeRow {
    pub n: usize,
    pub best_lower: String,
    pub best_upper: String,
    pub gap: String,
    pub gap_times_n: String,
    /// Per requested method: upper-to-lower ratio, rounded up; `None` where undefined.
    pub ratios: Vec<(Method, Option<String>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergeReport {
    pub input_sha256: String,
    pub methods: Vec<Method>,
    pub rows: Vec<ConvergeRow>,
    pub partial: Option<PartialMarker>,
    pub notes: Vec<String>,
}

pub const CONVERGE_COLUMNS: &str = "n,best_lower,lower_rounding,best_upper,upper_rounding,gap,gap_times_n";

impl ConvergeReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CONVERGE_COLUMNS);
        for m in &self.methods {
            let _ = write!(out, ",ratio_{m}");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},down,{},up,{},{}",
                r.n, r.best_lower, r.best_upper, r.gap, r.gap_times_n
            );
            for (_, v) in &r.ratios {
                let _ = write!(out, ",{}", v.as_deref().unwrap_or(""));
            }
            out.push('\n');
        }
        if let Some(p) = &self.partial {
            let _ = writeln!(out, "# partial: {} (completed n = {})", p.reason, p.completed_n);
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:>4} {:>20} {:>20} {:>20} {:>20}",
            "n", "best lower", "best upper", "gap", "gap·n"
        );
        for m in &self.methods {
            let _ = write!(out, " {:>20}", format!("ratio {m}"));
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{:>4} {:>20} {:>20} {:>20} {:>20}",
                r.n, r.best_lower, r.best_upper, r.gap, r.gap_times_n
            );
            for (_, v) in &r.ratios {
                let _ = write!(out, " {:>20}", v.as_deref().unwrap_or("-"));
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(p) = &self.partial {
            let _ = writeln!(out, "PARTIAL: {} (completed n = {})", p.reason, p.completed_n);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_decimals() {
        assert_eq!(decimal(0.5, Rounding::Down), "0.5");
        assert_eq!(decimal(std::f64::consts::SQRT_2, Rounding::Down), "1.41421356237309");
        assert_eq!(decimal(std::f64::consts::SQRT_2, Rounding::Up), "1.4142135623731");
        assert_eq!(decimal(f64::INFINITY, Rounding::Up), "inf");
    }

    #[test]
    fn width_uses_printed_endpoints() {
        assert_eq!(width_times_n("1", "1.5", 4), "2");
        assert_eq!(width_times_n("0", "inf", 4), "inf");
    }
}
