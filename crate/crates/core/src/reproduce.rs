//! Reproduction targets: each one recomputes a published property of `r` or
//! a search bound and reports the measured values with a pass flag.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::eertree::first_non_rich_prefix;
use crate::exact::{compare_to_surd, Exponent, SurdThreshold};
use crate::generators::{verify_all, word_r, RMethod};
use crate::numeration::{is_high_power_period, PellRep};
use crate::repetitions::{
    critexp_bound_check, critical_exponent, high_power_periods, highest_power_exponent, limit_gap_below,
    longest_repetition, maximal_repetitions, predicted_highest_powers, RepetitionError,
};
use crate::search::{run_search_with, RunOptions, SearchConfig, SearchError, SearchResult, Threshold};
use crate::render_symbols;

pub const TOOL_NAME: &str = "richwords";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EQUIVALENCE_LENGTH: usize = 100_000;
pub const IDENTITY_MAX_INDEX: usize = 12;
pub const RICHNESS_LENGTH: usize = 50_000;
pub const ANALYSIS_LENGTH: usize = 20_000;
pub const RT2_BUDGET: u64 = 1_000_000_000;
pub const RT4_BUDGET: u64 = 1_000_000;
pub const RT4_MIN_DEPTH: usize = 1000;
pub const MONOTONE_MAX_M: usize = 20;
/// Largest `m` for which the bound check fits in 128-bit arithmetic.
pub const BOUND_CHECK_MAX_M: usize = 17;

/// Wraps any command output with tool metadata.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    pub payload: Value,
}

impl ReportEnvelope {
    pub fn new(command: impl Into<String>, config: Value, pass: Option<bool>, payload: Value) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        ReportEnvelope { tool: TOOL_NAME, version: TOOL_VERSION, command: command.into(), config, timestamp, pass, payload }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Equivalence,
    Richness,
    Periods,
    HighestPowers,
    Critexp,
    Rt2,
    Rt3,
    Rt4Smoke,
    Squares,
}

impl Target {
    pub const ALL: [Target; 9] = [
        Target::Equivalence,
        Target::Richness,
        Target::Periods,
        Target::HighestPowers,
        Target::Critexp,
        Target::Rt2,
        Target::Rt3,
        Target::Rt4Smoke,
        Target::Squares,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Equivalence => "equivalence",
            Target::Richness => "richness",
            Target::Periods => "periods",
            Target::HighestPowers => "highestpowers",
            Target::Critexp => "critexp",
            Target::Rt2 => "rt2",
            Target::Rt3 => "rt3",
            Target::Rt4Smoke => "rt4-smoke",
            Target::Squares => "squares",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| {
            let names: Vec<_> = Target::ALL.iter().map(|t| t.name()).collect();
            format!("unknown target {s:?} (expected one of {})", names.join(", "))
        })
    }
}

/// Scale-down knobs. `None` means the full published setting.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ReproduceOptions {
    pub max_length: Option<usize>,
    pub node_budget: Option<u64>,
    pub workers: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub target: &'static str,
    pub pass: bool,
    pub config: Value,
    pub payload: Value,
}

#[derive(Debug, thiserror::Error)]
pub enum ReproduceError {
    #[error(transparent)]
    Repetition(#[from] RepetitionError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

pub fn reproduce(target: Target, options: &ReproduceOptions) -> Result<Report, ReproduceError> {
    match target {
        Target::Equivalence => Ok(equivalence(options.max_length.unwrap_or(EQUIVALENCE_LENGTH))),
        Target::Richness => Ok(richness(options.max_length.unwrap_or(RICHNESS_LENGTH))),
        Target::Periods => Ok(periods(options.max_length.unwrap_or(ANALYSIS_LENGTH))),
        Target::HighestPowers => Ok(highest_powers(options.max_length.unwrap_or(ANALYSIS_LENGTH))?),
        Target::Critexp => Ok(critexp(options.max_length.unwrap_or(ANALYSIS_LENGTH))?),
        Target::Rt2 => search_target(
            target,
            SearchConfig::exhaustive(2, rational(27, 10)).with_node_budget(options.node_budget.unwrap_or(RT2_BUDGET)),
            options.workers,
            |r| r.exhausted && r.longest_length == 1339,
        ),
        Target::Rt3 => {
            let mut config = SearchConfig::exhaustive(3, rational(9, 4));
            config.node_budget = options.node_budget;
            search_target(target, config, options.workers, |r| r.exhausted && r.longest_length == 114)
        }
        Target::Rt4Smoke => search_target(
            target,
            SearchConfig::exhaustive(4, rational(11, 5)).with_node_budget(options.node_budget.unwrap_or(RT4_BUDGET)),
            options.workers,
            |r| !r.exhausted && r.longest_length >= RT4_MIN_DEPTH,
        ),
        Target::Squares => squares(options),
    }
}

fn rational(n: u64, d: u64) -> Threshold {
    Threshold::Rational(Exponent::new(n, d).expect("nonzero denominator"))
}

fn equivalence(len: usize) -> Report {
    let words: Vec<_> = RMethod::ALL.iter().map(|&m| word_r(m, len)).collect();
    let agree = words.windows(2).all(|w| w[0] == w[1]);
    let prefix = render_symbols(&words[0][..len.min(15)]);
    let prefix_ok = len < 15 || prefix == "001001100100110";
    let identities = verify_all(IDENTITY_MAX_INDEX);
    let failures: Vec<_> = identities.failures().map(|c| json!({"identity": c.identity, "index": c.index})).collect();
    Report {
        target: Target::Equivalence.name(),
        pass: agree && prefix_ok && identities.all_hold(),
        config: json!({"length": len, "max_index": IDENTITY_MAX_INDEX}),
        payload: json!({
            "methods": RMethod::ALL.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "prefixes_agree": agree,
            "prefix15": prefix,
            "identity_checks": identities.checks.len(),
            "identity_failures": failures,
        }),
    }
}

fn richness(len: usize) -> Report {
    let r = word_r(RMethod::PhiTau, len);
    let first_failure = first_non_rich_prefix(&r);
    Report {
        target: Target::Richness.name(),
        pass: first_failure.is_none(),
        config: json!({"length": len}),
        payload: json!({"prefix_length_checked": len, "first_non_rich_prefix": first_failure}),
    }
}

fn five_halves() -> Exponent {
    Exponent::new(5, 2).expect("nonzero denominator")
}

fn periods(len: usize) -> Report {
    let r = word_r(RMethod::PhiTau, len);
    let found = high_power_periods(&r, five_halves());
    let outside: Vec<_> = found.iter().filter(|&&p| !is_high_power_period(p as u64)).copied().collect();
    let required = [7usize, 17, 41];
    let missing: Vec<_> = required.iter().filter(|p| !found.contains(p)).copied().collect();
    let listed: Vec<_> = found.iter().map(|&p| json!({"period": p, "pell": PellRep::encode(p as u64).to_string()})).collect();
    Report {
        target: Target::Periods.name(),
        pass: outside.is_empty() && missing.is_empty(),
        config: json!({"length": len, "min_exponent": five_halves()}),
        payload: json!({"periods": listed, "outside_family": outside, "missing_required": missing}),
    }
}

/// One period of interest in an analysed prefix of `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodRow {
    pub period: usize,
    pub pell: String,
    /// Longest extension `n` of any repetition with this period in the prefix.
    pub max_extension: usize,
    pub exponent: Exponent,
    /// Start of the first repetition attaining `max_extension`.
    pub first_occurrence: usize,
    /// That repetition runs into the end of the prefix.
    pub truncated: bool,
    pub m: Option<usize>,
    pub predicted_extension: Option<usize>,
    /// Some repetition with this period, clear of the prefix end, has
    /// exponent at least 7/3 (the smallest predicted exponent).
    pub observable: bool,
    /// The longest such repetition has the predicted extension.
    pub matches: Option<bool>,
    /// No repetition of this period exceeds the prediction.
    pub within_prediction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RAnalysis {
    pub length: usize,
    pub critical_exponent: Exponent,
    pub high_power_periods: Vec<usize>,
    pub rows: Vec<PeriodRow>,
}

impl RAnalysis {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "period,pell,max_extension,exponent,first_occurrence,truncated,m,predicted_extension,observable,matches,within_prediction\n",
        );
        let opt = |v: Option<String>| v.unwrap_or_default();
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                r.period,
                r.pell,
                r.max_extension,
                r.exponent,
                r.first_occurrence,
                r.truncated,
                opt(r.m.map(|m| m.to_string())),
                opt(r.predicted_extension.map(|n| n.to_string())),
                r.observable,
                opt(r.matches.map(|b| b.to_string())),
                r.within_prediction,
            ));
        }
        out
    }

    /// Every observable predicted period has exactly the predicted extension,
    /// and no period exceeds its prediction.
    pub fn predictions_hold(&self) -> bool {
        self.rows.iter().all(|r| r.matches != Some(false) && r.within_prediction)
    }
}

/// Table of high-power periods and predicted highest powers in the first
/// `len` symbols of `r`.
pub fn analyze_r(len: usize) -> Result<RAnalysis, RepetitionError> {
    let r = word_r(RMethod::PhiTau, len.max(1));
    let high = high_power_periods(&r, five_halves());
    let predicted: Vec<_> = predicted_highest_powers(30)?.into_iter().filter(|p| p.period as usize <= len).collect();
    let mut periods: BTreeSet<usize> = high.clone();
    periods.extend(predicted.iter().map(|p| p.period as usize));

    let floor = highest_power_exponent(1)?;
    let complete: Vec<_> = maximal_repetitions(&r, floor).into_iter().filter(|m| m.start + m.len() < r.len()).collect();
    let mut rows = Vec::new();
    for &p in &periods {
        let best = longest_repetition(&r, p);
        let (max_extension, first_occurrence) = best.map_or((0, 0), |m| (m.extension, m.start));
        let longest_complete = complete.iter().filter(|m| m.period == p).map(|m| m.extension).max();
        let prediction = predicted.iter().find(|q| q.period as usize == p);
        rows.push(PeriodRow {
            period: p,
            pell: PellRep::encode(p as u64).to_string(),
            max_extension,
            exponent: Exponent::new((max_extension + p) as u64, p as u64).expect("p >= 1"),
            first_occurrence,
            truncated: first_occurrence + max_extension + p >= r.len(),
            m: prediction.map(|q| q.m),
            predicted_extension: prediction.map(|q| q.extension as usize),
            observable: longest_complete.is_some(),
            matches: prediction.zip(longest_complete).map(|(q, n)| q.extension as usize == n),
            within_prediction: prediction.is_none_or(|q| max_extension <= q.extension as usize),
        });
    }
    Ok(RAnalysis {
        length: len,
        critical_exponent: critical_exponent(&r)?,
        high_power_periods: high.into_iter().collect(),
        rows,
    })
}

fn highest_powers(len: usize) -> Result<Report, RepetitionError> {
    let analysis = analyze_r(len)?;
    let required = [(7usize, 11usize), (17, 28), (41, 69)];
    let required_seen = required.iter().all(|&(p, n)| {
        analysis.rows.iter().any(|r| r.period == p && r.observable && r.max_extension == n)
    });
    let observed: Vec<_> = analysis
        .rows
        .iter()
        .filter(|r| r.m.is_some())
        .map(|r| {
            json!({
                "m": r.m, "period": r.period, "pell": r.pell, "max_extension": r.max_extension,
                "predicted_extension": r.predicted_extension, "exponent": r.exponent,
                "truncated": r.truncated, "observable": r.observable, "matches": r.matches,
                "within_prediction": r.within_prediction,
                "first_occurrence": r.first_occurrence,
            })
        })
        .collect();
    Ok(Report {
        target: Target::HighestPowers.name(),
        pass: analysis.predictions_hold() && (len < ANALYSIS_LENGTH || required_seen),
        config: json!({"length": len}),
        payload: json!({"predicted": observed}),
    })
}

fn critexp(len: usize) -> Result<Report, RepetitionError> {
    let r = word_r(RMethod::PhiTau, len.max(1));
    let limit = SurdThreshold::rich_binary();
    let measured = critical_exponent(&r)?;
    let below_limit = compare_to_surd(measured, limit)? == std::cmp::Ordering::Less;

    let seq: Vec<Exponent> = (1..=MONOTONE_MAX_M).map(highest_power_exponent).collect::<Result<_, _>>()?;
    let increasing = seq.windows(2).all(|w| w[0] < w[1]);
    let all_below = seq.iter().map(|&e| compare_to_surd(e, limit)).collect::<Result<Vec<_>, _>>()?;
    let all_below = all_below.iter().all(|&o| o == std::cmp::Ordering::Less);

    let largest_m = predicted_highest_powers(30)?
        .into_iter()
        .filter(|p| p.period as usize <= ANALYSIS_LENGTH)
        .map(|p| p.m)
        .max()
        .unwrap_or(1);
    let eps = Exponent::new(1, 1000).expect("nonzero denominator");
    let gap_ok = limit_gap_below(largest_m, eps)?;
    let bounds: Vec<bool> = (4..=BOUND_CHECK_MAX_M).map(critexp_bound_check).collect::<Result<_, _>>()?;
    let bounds_ok = bounds.iter().all(|&b| b);
    Ok(Report {
        target: Target::Critexp.name(),
        pass: below_limit && increasing && all_below && gap_ok && bounds_ok,
        config: json!({"length": len, "limit": limit.to_string(), "max_m": MONOTONE_MAX_M}),
        payload: json!({
            "critical_exponent": measured,
            "critical_exponent_approx": measured.to_f64(),
            "below_limit": below_limit,
            "e_m": seq,
            "e_m_increasing": increasing,
            "e_m_below_limit": all_below,
            "largest_m": largest_m,
            "limit_gap_below_1e-3": gap_ok,
            "bound_checked_m": [4, BOUND_CHECK_MAX_M],
            "bound_checks_hold": bounds_ok,
        }),
    })
}

fn search_payload(result: &SearchResult) -> Value {
    let mut v = serde_json::to_value(result).expect("search result serializes");
    v.as_object_mut().expect("object").remove("wall_time_ms");
    v
}

fn search_target(
    target: Target,
    config: SearchConfig,
    workers: usize,
    pass: impl Fn(&SearchResult) -> bool,
) -> Result<Report, ReproduceError> {
    let options = RunOptions { workers, ..Default::default() };
    let result = run_search_with(&config, &options)?;
    Ok(Report {
        target: target.name(),
        pass: pass(&result),
        config: serde_json::to_value(&config).expect("config serializes"),
        payload: json!({"result": search_payload(&result), "wall_time_ms": result.wall_time_ms}),
    })
}

fn squares(options: &ReproduceOptions) -> Result<Report, ReproduceError> {
    let mut runs = Vec::new();
    let mut pass = true;
    for k in [2u8, 3] {
        let mut config = SearchConfig::exhaustive(k, rational(2, 1));
        config.node_budget = options.node_budget;
        let result = run_search_with(&config, &RunOptions { workers: options.workers, ..Default::default() })?;
        pass &= result.exhausted;
        runs.push(json!({"alphabet_size": k, "result": search_payload(&result)}));
    }
    Ok(Report { target: Target::Squares.name(), pass, config: json!({"threshold": "2"}), payload: json!({"runs": runs}) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>(), Ok(t));
        }
        assert!("rt5".parse::<Target>().is_err());
    }

    #[test]
    fn short_analysis_of_r() {
        let a = analyze_r(200).unwrap();
        let row = a.rows.iter().find(|r| r.period == 7).unwrap();
        assert_eq!((row.max_extension, row.matches), (11, Some(true)));
        assert_eq!(row.pell, "110");
        assert!(a.predictions_hold());
        assert!(a.to_csv().lines().count() > a.rows.len());
    }

    #[test]
    fn scaled_down_targets_pass() {
        let small = ReproduceOptions { max_length: Some(2000), ..Default::default() };
        for t in [Target::Equivalence, Target::Richness, Target::Critexp, Target::Squares, Target::Rt3] {
            let report = reproduce(t, &small).unwrap();
            assert!(report.pass, "{t}: {}", report.payload);
        }
    }

    #[test]
    fn payload_is_deterministic() {
        let opts = ReproduceOptions { max_length: Some(500), ..Default::default() };
        let a = reproduce(Target::HighestPowers, &opts).unwrap();
        let b = reproduce(Target::HighestPowers, &opts).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
