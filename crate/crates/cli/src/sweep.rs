//! Random sweeps over a grid of ensemble settings.
//!
//! Config file:
//!
//! ```json
//! { "seed": 7, "dims": [2, 3, 4], "rs": [2, 3, 4, 5],
//!   "purities": ["pure", "mixed", "commuting"], "priors": ["uniform", "random"],
//!   "per_cell": 14, "output": "sweep.jsonl" }
//! ```
//!
//! `output` is resolved against the config file's directory. The results file
//! holds one `"kind": "row"` object per ensemble, in grid order, then a single
//! `"kind": "summary"` object.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use qsd_core::bounds::{self, bounds_report, BoundsReport, CheckStatus, ExactMethod};
use qsd_core::optimality::{check_holevo_with_tol, commuting_optimum};
use qsd_core::povm::{
    averaged_representation, construct_helstrom_povm, construct_mj, jth_representation,
    success_probability,
};
use qsd_core::random::{random_ensemble, random_povm, PriorMode, Purity, RandomSpec, SplitMix64};
use qsd_core::{Ensemble, Error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::format::{read_text, Real};
use crate::report::{status_str, BracketJson, ExactJson, FlagJson, Lower, Upper};

/// Slack for every identity checked per row.
pub const IDENTITY_TOL: f64 = 1e-9;

pub const CHECK_MJ_VALID: &str = "M_j is a valid POVM for every j";
pub const CHECK_MJ_SUCCESS: &str =
    "M_j success = q_j + sum_i ||(q_i rho_i - q_j rho_j)^(+)||_1 / (r - 1)";
pub const CHECK_MJ_MAX: &str = "max_j M_j success = L1_new";
pub const CHECK_R2_COLLAPSE: &str = "r = 2: L1_new = L2_new = Q4 = Q_new = Helstrom";
pub const CHECK_HELSTROM_POVM: &str =
    "r = 2: Helstrom measurement attains the bound and is certified";
pub const CHECK_REPRESENTATIONS: &str = "j-th and averaged representations = success probability";
pub const CHECK_COMMUTING_CERTIFIED: &str = "commuting optimum passes the Holevo conditions";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PuritySpec {
    Pure,
    Mixed,
    Commuting,
}

impl From<PuritySpec> for Purity {
    fn from(p: PuritySpec) -> Self {
        match p {
            PuritySpec::Pure => Purity::Pure,
            PuritySpec::Mixed => Purity::Mixed,
            PuritySpec::Commuting => Purity::Commuting,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorSpec {
    Uniform,
    Random,
    /// Only applies to cells whose `r` matches the list length.
    Fixed(Vec<Real>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub rs: Vec<usize>,
    pub purities: Vec<PuritySpec>,
    pub priors: Vec<PriorSpec>,
    pub per_cell: usize,
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowSpec {
    pub seed: u64,
    pub dim: usize,
    pub r: usize,
    pub purity: PuritySpec,
    pub priors: PriorSpec,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        let invalid = |m: &str| Err(CliError::Invalid(format!("sweep config: {m}")));
        if self.dims.is_empty()
            || self.rs.is_empty()
            || self.purities.is_empty()
            || self.priors.is_empty()
        {
            return invalid("dims, rs, purities and priors must be non-empty");
        }
        if self.dims.contains(&0) {
            return invalid("every dim must be at least 1");
        }
        if self.rs.iter().any(|&r| r < 2) {
            return invalid("every r must be at least 2");
        }
        if self.per_cell == 0 {
            return invalid("per_cell must be positive");
        }
        for p in &self.priors {
            if let PriorSpec::Fixed(values) = p {
                if !self.rs.contains(&values.len()) {
                    return invalid("fixed priors match none of the listed r");
                }
                for v in values {
                    v.value()?;
                }
            }
        }
        Ok(())
    }

    /// Row settings in grid order: dim, r, purity, priors, repetition.
    pub fn rows(&self) -> Vec<RowSpec> {
        let mut rows = Vec::new();
        for &dim in &self.dims {
            for &r in &self.rs {
                for &purity in &self.purities {
                    for priors in &self.priors {
                        if let PriorSpec::Fixed(values) = priors {
                            if values.len() != r {
                                continue;
                            }
                        }
                        for _ in 0..self.per_cell {
                            let index = rows.len() as u64;
                            rows.push(RowSpec {
                                seed: SplitMix64::stream(self.seed, index).next_u64(),
                                dim,
                                r,
                                purity,
                                priors: priors.clone(),
                            });
                        }
                    }
                }
            }
        }
        rows
    }
}

impl RowSpec {
    pub fn random_spec(&self) -> Result<RandomSpec> {
        let priors = match &self.priors {
            PriorSpec::Uniform => PriorMode::Uniform,
            PriorSpec::Random => PriorMode::RandomSimplex,
            PriorSpec::Fixed(values) => {
                PriorMode::Fixed(values.iter().map(Real::value).collect::<Result<_>>()?)
            }
        };
        Ok(RandomSpec {
            seed: self.seed,
            dim: self.dim,
            r: self.r,
            purity: self.purity.into(),
            priors,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub status: String,
    /// Largest deviation seen by the check.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub kind: String,
    pub index: usize,
    pub spec: RowSpec,
    pub priors: Vec<f64>,
    pub equiprobable: bool,
    pub pair_sum: f64,
    pub lower: Lower,
    pub upper: Upper,
    pub bracket: BracketJson,
    pub exact: Option<ExactJson>,
    pub flags: Vec<FlagJson>,
    pub checks: Vec<CheckJson>,
    pub violations: Vec<String>,
}

fn check(name: &str, applies: bool, deviation: f64, tol: f64) -> CheckJson {
    let status = if !applies {
        CheckStatus::NotApplicable
    } else if deviation <= tol {
        CheckStatus::Holds
    } else {
        CheckStatus::Violated
    };
    CheckJson {
        name: name.into(),
        status: status_str(status).into(),
        deviation: if applies { deviation } else { 0.0 },
    }
}

fn constructive_checks(ensemble: &Ensemble, report: &BoundsReport) -> Result<Vec<CheckJson>> {
    let r = ensemble.len();
    let share = 1.0 / (r - 1) as f64;
    let mut valid = true;
    let mut deviation: f64 = 0.0;
    let mut best = f64::NEG_INFINITY;
    for j in 0..r {
        let povm = match construct_mj(ensemble, j) {
            Ok(p) => p,
            Err(Error::NumericalFailure) => {
                return Err(CliError::Numerical(Error::NumericalFailure))
            }
            Err(_) => {
                valid = false;
                continue;
            }
        };
        let achieved = success_probability(ensemble, &povm)?;
        let positive: f64 = (0..r).map(|i| report.table.positive_parts[i][j]).sum();
        let expected = ensemble.priors()[j] + share * positive;
        deviation = deviation.max((achieved - expected).abs());
        best = best.max(achieved);
    }
    Ok(vec![
        check(CHECK_MJ_VALID, true, if valid { 0.0 } else { 1.0 }, 0.0),
        check(CHECK_MJ_SUCCESS, valid, deviation, IDENTITY_TOL),
        check(
            CHECK_MJ_MAX,
            valid,
            (best - report.lower.l1_new).abs(),
            IDENTITY_TOL,
        ),
    ])
}

fn binary_checks(
    ensemble: &Ensemble,
    report: &BoundsReport,
    cert_tol: f64,
) -> Result<Vec<CheckJson>> {
    if ensemble.len() != 2 {
        return Ok(vec![
            check(CHECK_R2_COLLAPSE, false, 0.0, IDENTITY_TOL),
            check(CHECK_HELSTROM_POVM, false, 0.0, IDENTITY_TOL),
        ]);
    }
    let h = bounds::helstrom(ensemble)?;
    let collapse = [
        report.lower.l1_new,
        report.lower.l2_new,
        report.upper.q4,
        report.upper.q_new,
    ]
    .iter()
    .map(|b| (b - h).abs())
    .fold(0.0, f64::max);
    let povm = construct_helstrom_povm(ensemble)?;
    let cert = check_holevo_with_tol(ensemble, &povm, cert_tol)?;
    let mut attained = (success_probability(ensemble, &povm)? - h).abs();
    if !cert.passed() {
        attained = attained.max(1.0);
    }
    Ok(vec![
        check(CHECK_R2_COLLAPSE, true, collapse, IDENTITY_TOL),
        check(CHECK_HELSTROM_POVM, true, attained, IDENTITY_TOL),
    ])
}

fn representation_check(ensemble: &Ensemble, spec: &RandomSpec) -> Result<CheckJson> {
    let povm = random_povm(spec, ensemble.len())?;
    let p = success_probability(ensemble, &povm)?;
    let mut deviation = (averaged_representation(ensemble, &povm)? - p).abs();
    for j in 0..ensemble.len() {
        deviation = deviation.max((jth_representation(ensemble, &povm, j)? - p).abs());
    }
    Ok(check(CHECK_REPRESENTATIONS, true, deviation, IDENTITY_TOL))
}

fn commuting_check(ensemble: &Ensemble, report: &BoundsReport, cert_tol: f64) -> Result<CheckJson> {
    let commuting = matches!(
        report.exact,
        Some(x) if x.method == ExactMethod::Commuting
    );
    if !commuting {
        return Ok(check(CHECK_COMMUTING_CERTIFIED, false, 0.0, 0.0));
    }
    let (_, povm) = commuting_optimum(ensemble)?;
    let cert = check_holevo_with_tol(ensemble, &povm, cert_tol)?;
    let worst = cert
        .orthogonality_residuals
        .iter()
        .copied()
        .chain(cert.domination_residuals.iter().map(|d| -d))
        .fold(0.0, f64::max);
    Ok(check(CHECK_COMMUTING_CERTIFIED, true, worst, cert_tol))
}

pub fn compute_row(index: usize, spec: &RowSpec, cert_tol: f64) -> Result<Row> {
    let random = spec.random_spec()?;
    let ensemble = random_ensemble(&random)?;
    let report = bounds_report(&ensemble)?;

    let mut checks = constructive_checks(&ensemble, &report)?;
    checks.extend(binary_checks(&ensemble, &report, cert_tol)?);
    checks.push(representation_check(&ensemble, &random)?);
    checks.push(commuting_check(&ensemble, &report, cert_tol)?);

    let violations = report
        .violations()
        .map(|f| f.relation.to_string())
        .chain(
            checks
                .iter()
                .filter(|c| c.status == status_str(CheckStatus::Violated))
                .map(|c| c.name.clone()),
        )
        .collect();
    Ok(Row {
        kind: "row".into(),
        index,
        spec: spec.clone(),
        priors: report.priors.clone(),
        equiprobable: report.equiprobable,
        pair_sum: report.pair_sum,
        lower: (&report.lower).into(),
        upper: (&report.upper).into(),
        bracket: report.bracket.into(),
        exact: report.exact.map(Into::into),
        flags: report.flags.iter().map(Into::into).collect(),
        checks,
        violations,
    })
}

/// Rows in grid order, computed in parallel.
pub fn compute_rows(config: &SweepConfig, cert_tol: f64) -> Result<Vec<Row>> {
    let specs = config.rows();
    specs
        .par_iter()
        .enumerate()
        .map(|(index, spec)| compute_row(index, spec, cert_tol))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self::default();
        }
        Self {
            count: values.len(),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Outcomes {
    pub holds: usize,
    pub violated: usize,
    #[serde(rename = "n/a")]
    pub not_applicable: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub kind: String,
    pub rows: usize,
    pub seed: u64,
    pub total_violations: usize,
    /// Violation count for every asserted relation and per-row check.
    pub violations: BTreeMap<String, usize>,
    /// Outcome tally of every relation and check, asserted or not.
    pub outcomes: BTreeMap<String, Outcomes>,
    pub tightness: BTreeMap<String, Stats>,
}

fn tally(outcomes: &mut BTreeMap<String, Outcomes>, name: &str, status: &str) {
    let entry = outcomes.entry(name.to_string()).or_default();
    match status {
        "holds" => entry.holds += 1,
        "violated" => entry.violated += 1,
        _ => entry.not_applicable += 1,
    }
}

pub fn summarize(config: &SweepConfig, rows: &[Row]) -> Summary {
    let mut violations = BTreeMap::new();
    let mut outcomes = BTreeMap::new();
    for row in rows {
        for flag in &row.flags {
            if flag.asserted {
                violations.entry(flag.relation.clone()).or_insert(0);
            }
            tally(&mut outcomes, &flag.relation, &flag.status);
        }
        for c in &row.checks {
            violations.entry(c.name.clone()).or_insert(0);
            tally(&mut outcomes, &c.name, &c.status);
        }
        for v in &row.violations {
            *violations.entry(v.clone()).or_insert(0) += 1;
        }
    }

    let collect =
        |f: &dyn Fn(&Row) -> Option<f64>| -> Vec<f64> { rows.iter().filter_map(f).collect() };
    let mut tightness = BTreeMap::new();
    tightness.insert(
        "bracket width".into(),
        Stats::of(&collect(&|r| Some(r.bracket.width))),
    );
    tightness.insert(
        "Q_new - Q4".into(),
        Stats::of(&collect(&|r| Some(r.upper.q_new - r.upper.q4))),
    );
    tightness.insert(
        "L1_new - L2_new".into(),
        Stats::of(&collect(&|r| Some(r.lower.l1_new - r.lower.l2_new))),
    );
    tightness.insert(
        "min(Q2, Q3, Q5) - Q_new".into(),
        Stats::of(&collect(&|r| {
            Some(r.upper.q2.min(r.upper.q3).min(r.upper.q5) - r.upper.q_new)
        })),
    );
    tightness.insert(
        "L1_new - max(L1, L2, L3)".into(),
        Stats::of(&collect(&|r| {
            Some(r.lower.l1_new - r.lower.l1.max(r.lower.l2_clamped).max(r.lower.l3))
        })),
    );
    tightness.insert(
        "exact - L1_new".into(),
        Stats::of(&collect(&|r| {
            r.exact.as_ref().map(|x| x.value - r.lower.l1_new)
        })),
    );
    tightness.insert(
        "Q4 - exact".into(),
        Stats::of(&collect(&|r| {
            r.exact.as_ref().map(|x| r.upper.q4 - x.value)
        })),
    );

    Summary {
        kind: "summary".into(),
        rows: rows.len(),
        seed: config.seed,
        total_violations: rows.iter().map(|r| r.violations.len()).sum(),
        violations,
        outcomes,
        tightness,
    }
}

pub fn render_jsonl(rows: &[Row], summary: &Summary) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("row serializes"));
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(summary).expect("summary serializes"));
    out.push('\n');
    out
}

/// Write `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let write_err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(write_err)?;
    tmp.write_all(contents).map_err(write_err)?;
    tmp.as_file().sync_all().map_err(write_err)?;
    tmp.persist(path).map_err(|e| write_err(e.error))?;
    Ok(())
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub output: PathBuf,
    pub summary: Summary,
}

pub fn run_sweep(config_path: &Path, cert_tol: f64) -> Result<SweepOutcome> {
    let config = SweepConfig::parse(&read_text(config_path)?)?;
    let base = config_path.parent().unwrap_or_else(|| Path::new(""));
    let output = base.join(&config.output);
    let rows = compute_rows(&config, cert_tol)?;
    let summary = summarize(&config, &rows);
    write_atomic(&output, render_jsonl(&rows, &summary).as_bytes())?;
    Ok(SweepOutcome { output, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig::parse(
            r#"{"seed": 11, "dims": [2, 3], "rs": [2, 3], "purities": ["pure", "commuting"],
                "priors": ["uniform", "random"], "per_cell": 2, "output": "out.jsonl"}"#,
        )
        .unwrap()
    }

    #[test]
    fn grid_order_and_seeds() {
        let rows = small().rows();
        assert_eq!(rows.len(), 2 * 2 * 2 * 2 * 2);
        assert_eq!((rows[0].dim, rows[0].r), (2, 2));
        assert_eq!(rows[0].seed, SplitMix64::stream(11, 0).next_u64());
        assert_ne!(rows[0].seed, rows[1].seed);
        assert_eq!(rows.last().unwrap().dim, 3);
    }

    #[test]
    fn small_sweep_has_no_violations() {
        let config = small();
        let rows = compute_rows(&config, 1e-7).unwrap();
        let summary = summarize(&config, &rows);
        assert_eq!(summary.total_violations, 0, "{:?}", summary.violations);
        assert!(summary.violations.contains_key(CHECK_MJ_SUCCESS));
    }

    #[test]
    fn config_errors() {
        assert!(matches!(SweepConfig::parse("[]"), Err(CliError::Parse(_))));
        let bad_r = r#"{"seed": 1, "dims": [2], "rs": [1], "purities": ["pure"],
            "priors": ["uniform"], "per_cell": 1, "output": "x"}"#;
        assert!(matches!(
            SweepConfig::parse(bad_r),
            Err(CliError::Invalid(_))
        ));
    }

    #[test]
    fn fixed_priors_only_for_matching_r() {
        let config = SweepConfig::parse(
            r#"{"seed": 3, "dims": [2], "rs": [2, 3], "purities": ["mixed"],
                "priors": [{"fixed": ["1/4", "3/4"]}], "per_cell": 3, "output": "x"}"#,
        )
        .unwrap();
        let rows = compute_rows(&config, 1e-7).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].priors, vec![0.25, 0.75]);
    }
}
