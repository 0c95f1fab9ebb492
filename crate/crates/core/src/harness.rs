//! Command implementations behind the `ribbon` binary.
//!
//! Every command returns an [`Outcome`] holding the text to emit and the
//! violations found; library errors map to exit codes through
//! [`exit_code_for`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::RankStrategy;
use crate::koszul::{betti_table_with, blowup_lemma_report, BettiTable, ExactConfirmation, TableOptions, TableRun};
use crate::ribbon::{construct_geometric, max_clifford, PointOnLine, Ribbon};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest genus accepted by any command.
pub const MAX_GENUS: u32 = 13;

pub const DEFAULT_GENUS_MAX: u32 = 9;

/// Overrides the size cutoff between exact and modular ranks.
pub const RANK_THRESHOLD_ENV: &str = "RIBBON_RANK_THRESHOLD";

/// Exit code for a library error: bad input is a usage error, anything
/// else means an internal invariant broke.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_)
        | Error::InvalidClifford { .. }
        | Error::GenusTooSmall(_)
        | Error::HyperellipticInput
        | Error::SingularMatrix
        | Error::InvalidModulus(_) => EXIT_USAGE,
        Error::NotAUnit
        | Error::BadPrime(_)
        | Error::ConstructionFailed { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotInSpan => EXIT_VIOLATION,
    }
}

/// Rank strategy with the threshold taken from the environment if set.
pub fn strategy_from_env() -> Result<RankStrategy> {
    let mut strategy = RankStrategy::default();
    if let Ok(raw) = std::env::var(RANK_THRESHOLD_ENV) {
        strategy.exact_threshold = raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{RANK_THRESHOLD_ENV}={raw:?} is not a size")))?;
    }
    Ok(strategy)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Self::Table),
            "json" => Ok(Self::Json),
            _ => Err(Error::InvalidInput(format!("unknown format {s:?}, expected table or json"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Table => "table",
            Self::Json => "json",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum CliffordSelection {
    /// Every `1 <= c <= floor((g-1)/2)`.
    #[default]
    All,
    Only(Vec<u32>),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub genus_min: u32,
    pub genus_max: u32,
    pub clifford: CliffordSelection,
    pub seed: u64,
    pub strategy: RankStrategy,
    /// Every rank computed over `Q`.
    pub exact_only: bool,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            genus_min: 3,
            genus_max: DEFAULT_GENUS_MAX,
            clifford: CliffordSelection::All,
            seed: 0,
            strategy: RankStrategy::default(),
            exact_only: false,
            format: OutputFormat::Json,
            out: None,
        }
    }
}

impl RunConfig {
    /// The `(g, c)` pairs of the sweep, sorted.
    pub fn pairs(&self) -> Result<Vec<(u32, u32)>> {
        if self.genus_min < 3 || self.genus_max < self.genus_min || self.genus_max > MAX_GENUS {
            return Err(Error::InvalidInput(format!(
                "genus range {}..={} must lie in 3..={MAX_GENUS}",
                self.genus_min, self.genus_max
            )));
        }
        if let CliffordSelection::Only(list) = &self.clifford {
            let top = max_clifford(self.genus_max);
            if let Some(&c) = list.iter().find(|&&c| c == 0 || c > top) {
                return Err(Error::InvalidClifford {
                    genus: self.genus_max,
                    clifford: c,
                });
            }
        }
        let mut out = Vec::new();
        for g in self.genus_min..=self.genus_max {
            for c in 1..=max_clifford(g) {
                let wanted = match &self.clifford {
                    CliffordSelection::All => true,
                    CliffordSelection::Only(list) => list.contains(&c),
                };
                if wanted {
                    out.push((g, c));
                }
            }
        }
        Ok(out)
    }

    pub fn table_options(&self) -> TableOptions {
        if self.exact_only {
            TableOptions {
                strategy: RankStrategy::exact_only(),
                confirm_exact: false,
                ..TableOptions::default()
            }
        } else {
            TableOptions {
                strategy: self.strategy.clone(),
                ..TableOptions::default()
            }
        }
    }
}

/// Text produced by a command and the violations it found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub violations: Vec<String>,
}

impl Outcome {
    fn clean(output: String) -> Self {
        Self {
            output,
            violations: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        }
    }
}

fn parse_ribbon(json: &str) -> Result<Ribbon> {
    Ribbon::from_json(json.trim())
}

/// `ribbon clifford`: the Clifford index of a ribbon given as JSON.
pub fn cmd_clifford(json: &str) -> Result<Outcome> {
    let r = parse_ribbon(json)?;
    Ok(Outcome::clean(format!("{}\n", r.clifford_index())))
}

/// `ribbon blowup`: the blow-up of a ribbon at a point, as JSON.
pub fn cmd_blowup(json: &str, point: &str) -> Result<Outcome> {
    let r = parse_ribbon(json)?;
    let x: PointOnLine = point.parse()?;
    let blown = r.blow_up(&x)?;
    Ok(Outcome::clean(format!("{}\n", blown.to_json())))
}

#[derive(Clone, Debug)]
pub enum BettiSource {
    Construct { genus: u32, clifford: u32, seed: u64 },
    Ribbon(Ribbon),
}

impl BettiSource {
    pub fn ribbon(&self) -> Result<Ribbon> {
        match self {
            Self::Construct { genus, clifford, seed } => {
                let (g, c) = (*genus, *clifford);
                if !(3..=MAX_GENUS).contains(&g) {
                    return Err(Error::InvalidInput(format!("genus {g} outside 3..={MAX_GENUS}")));
                }
                if c == 0 || c > max_clifford(g) {
                    return Err(Error::InvalidClifford { genus: g, clifford: c });
                }
                construct_geometric(g, c, *seed).map(|b| b.ribbon)
            }
            Self::Ribbon(r) => {
                if r.genus() > MAX_GENUS {
                    return Err(Error::InvalidInput(format!("genus {} above {MAX_GENUS}", r.genus())));
                }
                Ok(r.clone())
            }
        }
    }
}

/// Violations of the invariants every table must satisfy regardless of
/// the Clifford index.
pub fn table_violations(run: &TableRun) -> Vec<String> {
    let t = &run.table;
    let g = t.genus as usize;
    let mut out = Vec::new();
    for (p, q) in t.duality_violations() {
        out.push(format!(
            "duality: K_({p},{q}) = {} but K_({},{}) = {}",
            t.get(p, q),
            g - 2 - p,
            3 - q,
            t.get(g - 2 - p, 3 - q)
        ));
    }
    for (p, q) in t.row_bound_violations() {
        out.push(format!("K_({p},{q}) = {} should vanish", t.get(p, q)));
    }
    for (p, q) in &run.composition_failures {
        out.push(format!("composite of differentials into ({p},{q}) is nonzero"));
    }
    if let Some(c) = &run.confirmation {
        if !c.agrees() {
            out.push(format!(
                "K_({},{}): modular rank gives {}, exact gives {}",
                c.p, c.q, c.modular, c.exact
            ));
        }
    }
    out
}

/// `ribbon betti`: the Betti table of a constructed or given ribbon.
pub fn cmd_betti(source: &BettiSource, format: OutputFormat, opts: &TableOptions) -> Result<Outcome> {
    let r = source.ribbon()?;
    let run = betti_table_with(&r, opts)?;
    let violations = table_violations(&run);
    let output = match format {
        OutputFormat::Table => run.table.diagram(),
        OutputFormat::Json => format!("{}\n", run.table.to_json()),
    };
    Ok(Outcome { output, violations })
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub seed: u64,
    pub ribbon: Ribbon,
    pub table: BettiTable,
    pub exact_check: Option<ExactConfirmation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupInstance {
    pub point: String,
    pub holds: bool,
    /// `dim K_(k,1)` before and after the blow-up.
    pub original: Vec<usize>,
    pub blown_up: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub genus: u32,
    pub clifford: u32,
    pub passed: bool,
    pub samples: Vec<SampleReport>,
    pub carpet_equal: bool,
    /// Row `q = 2` cells at `p >= g-2` as `(p, dim)`.
    pub boundary_cells: Vec<(usize, usize)>,
    pub blowup: Option<BlowupInstance>,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub genus_min: u32,
    pub genus_max: u32,
    pub seed: u64,
    pub exact_only: bool,
    pub passed: bool,
    pub pairs: Vec<PairReport>,
}

impl SweepReport {
    pub fn violations(&self) -> Vec<String> {
        self.pairs
            .iter()
            .flat_map(|pr| {
                pr.violations
                    .iter()
                    .map(move |v| format!("g={} c={}: {v}", pr.genus, pr.clifford))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        for pr in &self.pairs {
            let status = if pr.passed { "ok" } else { "FAIL" };
            out.push_str(&format!("g = {}, c = {}: {status}\n", pr.genus, pr.clifford));
            if let Some(s) = pr.samples.first() {
                out.push_str(&s.table.diagram());
            }
            for v in &pr.violations {
                out.push_str(&format!("  {v}\n"));
            }
        }
        let verdict = if self.passed { "all passed" } else { "violations found" };
        out.push_str(&format!("{} pairs, {verdict}\n", self.pairs.len()));
        out
    }
}

/// Seeds of the two samples drawn for one `(g, c)`.
pub fn sample_seeds(seed: u64) -> [u64; 2] {
    [seed, seed ^ 0x9e37_79b9_7f4a_7c15]
}

fn green_violations(t: &BettiTable) -> Vec<String> {
    let c = t.clifford as usize;
    let g = t.genus as usize;
    let mut out: Vec<String> = (0..c)
        .filter(|&p| t.get(p, 2) != 0)
        .map(|p| format!("K_({p},2) = {} but p < c", t.get(p, 2)))
        .collect();
    if c + 3 <= g && t.get(c, 2) == 0 {
        out.push(format!("K_({c},2) = 0 but c <= g-3"));
    }
    out
}

fn check_pair(genus: u32, clifford: u32, seed: u64, opts: &TableOptions) -> PairReport {
    let mut violations = Vec::new();
    let mut samples = Vec::new();
    let mut first_construction = None;
    for s in sample_seeds(seed) {
        let built = match construct_geometric(genus, clifford, s) {
            Ok(b) => b,
            Err(e) => {
                violations.push(format!("seed {s}: {e}"));
                continue;
            }
        };
        match betti_table_with(&built.ribbon, opts) {
            Ok(run) => {
                violations.extend(table_violations(&run).into_iter().map(|v| format!("seed {s}: {v}")));
                violations.extend(green_violations(&run.table).into_iter().map(|v| format!("seed {s}: {v}")));
                samples.push(SampleReport {
                    seed: s,
                    ribbon: built.ribbon.clone(),
                    table: run.table,
                    exact_check: run.confirmation,
                });
            }
            Err(e) => violations.push(format!("seed {s}: {e}")),
        }
        first_construction.get_or_insert(built);
    }

    let carpet_equal = samples.len() == 2 && samples[0].table == samples[1].table;
    if samples.len() == 2 && !carpet_equal {
        let (a, b) = (&samples[0].table, &samples[1].table);
        for q in 0..a.rows.len() {
            for p in 0..genus as usize {
                if a.get(p, q) != b.get(p, q) {
                    violations.push(format!("carpet: K_({p},{q}) is {} and {}", a.get(p, q), b.get(p, q)));
                }
            }
        }
    }

    let blowup = match &first_construction {
        Some(built) if genus >= 4 => {
            let x = built
                .points()
                .into_iter()
                .next()
                .unwrap_or(PointOnLine::Infinity);
            match blowup_lemma_report(&built.ribbon, &x, &opts.strategy) {
                Ok(rep) => {
                    for (k, (a, b)) in rep.blown_up.iter().zip(&rep.original).enumerate() {
                        if a > b {
                            violations.push(format!("blow-up at {x}: K_({k},1) grows from {b} to {a}"));
                        }
                    }
                    Some(BlowupInstance {
                        point: x.to_string(),
                        holds: rep.holds,
                        original: rep.original,
                        blown_up: rep.blown_up,
                    })
                }
                Err(e) => {
                    violations.push(format!("blow-up at {x}: {e}"));
                    None
                }
            }
        }
        _ => None,
    };

    let boundary_cells = samples
        .first()
        .map(|s| {
            let g = genus as usize;
            (g.saturating_sub(2)..g).map(|p| (p, s.table.get(p, 2))).collect()
        })
        .unwrap_or_default();
    PairReport {
        genus,
        clifford,
        passed: violations.is_empty(),
        samples,
        carpet_equal,
        boundary_cells,
        blowup,
        violations,
    }
}

/// The sweep over all configured `(g, c)`: Green's predicate on two samples,
/// equality of their tables, duality, vanishing composites and one
/// blow-up instance per pair.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepReport> {
    let pairs = cfg.pairs()?;
    let opts = cfg.table_options();
    let mut reports: Vec<PairReport> = pairs
        .par_iter()
        .map(|&(g, c)| check_pair(g, c, cfg.seed, &opts))
        .collect();
    reports.sort_by_key(|r| (r.genus, r.clifford));
    Ok(SweepReport {
        genus_min: cfg.genus_min,
        genus_max: cfg.genus_max,
        seed: cfg.seed,
        exact_only: cfg.exact_only,
        passed: reports.iter().all(|r| r.passed),
        pairs: reports,
    })
}

/// `ribbon verify-green`
pub fn cmd_verify_green(cfg: &RunConfig) -> Result<Outcome> {
    let report = run_sweep(cfg)?;
    let output = match cfg.format {
        OutputFormat::Json => format!("{}\n", report.to_json()),
        OutputFormat::Table => report.summary_text(),
    };
    Ok(Outcome {
        output,
        violations: report.violations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_command_examples() {
        let out = cmd_clifford(r#"{"genus":5,"coefficients":["1","1","1"]}"#).unwrap();
        assert_eq!(out.output, "1\n");
        let out = cmd_clifford(r#"{"genus":7,"coefficients":["0","0","0","0","0"]}"#).unwrap();
        assert_eq!(out.output, "0\n");
        let out = cmd_clifford(r#"{"genus":5,"coefficients":["1","0","1"]}"#).unwrap();
        assert_eq!(out.output, "2\n");
    }

    #[test]
    fn malformed_input_is_a_usage_error() {
        for bad in ["", "{", r#"{"genus":5}"#, r#"{"genus":5,"coefficients":["1","x","1"]}"#] {
            let e = cmd_clifford(bad).unwrap_err();
            assert_eq!(exit_code_for(&e), EXIT_USAGE, "{bad}");
        }
        let e = cmd_blowup(r#"{"genus":5,"coefficients":["1","1","1"]}"#, "1/0").unwrap_err();
        assert_eq!(exit_code_for(&e), EXIT_USAGE);
    }

    #[test]
    fn blowup_of_genus_two_is_rejected() {
        let e = cmd_blowup(r#"{"genus":2,"coefficients":[]}"#, "0").unwrap_err();
        assert_eq!(exit_code_for(&e), EXIT_USAGE);
    }

    #[test]
    fn out_of_range_clifford_is_rejected() {
        let src = BettiSource::Construct {
            genus: 6,
            clifford: 3,
            seed: 0,
        };
        let e = cmd_betti(&src, OutputFormat::Table, &TableOptions::default()).unwrap_err();
        assert_eq!(exit_code_for(&e), EXIT_USAGE);
    }

    #[test]
    fn config_genus_range() {
        let cfg = RunConfig {
            genus_max: 2,
            ..RunConfig::default()
        };
        assert_eq!(exit_code_for(&cfg.pairs().unwrap_err()), EXIT_USAGE);
        let cfg = RunConfig {
            genus_max: 6,
            ..RunConfig::default()
        };
        assert_eq!(
            cfg.pairs().unwrap(),
            vec![(3, 1), (4, 1), (5, 1), (5, 2), (6, 1), (6, 2)]
        );
        let cfg = RunConfig {
            genus_max: 7,
            clifford: CliffordSelection::Only(vec![3]),
            ..RunConfig::default()
        };
        assert_eq!(cfg.pairs().unwrap(), vec![(7, 3)]);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
