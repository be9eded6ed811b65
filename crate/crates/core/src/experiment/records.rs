use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::attack::{AttackResult, Verdict};
use crate::error::Result;

/// Wall time per phase, in microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub query_us: u64,
    pub respond_us: u64,
    pub recover_us: u64,
    pub attack_us: u64,
}

impl PhaseTiming {
    pub fn total_us(&self) -> u64 {
        self.query_us + self.respond_us + self.recover_us + self.attack_us
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialKind {
    Roundtrip,
    Attack,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    /// Round trip returned the planted file.
    Recovered,
    /// Round trip returned some other file.
    WrongFile,
    /// Some file entries had several candidates.
    AmbiguousFile { coordinates: usize },
    NoSolution,
    /// The attack pinned a single index.
    Unique { d: usize },
    /// The attack left several indices, or none.
    Ambiguous { set: Vec<usize> },
    Empty,
    /// Query generation or recovery failed outright.
    Error { message: String },
}

impl Outcome {
    pub fn from_verdict(v: &Verdict) -> Self {
        match v {
            Verdict::Unique(d) => Outcome::Unique { d: *d },
            Verdict::Ambiguous(set) => Outcome::Ambiguous { set: set.clone() },
            Verdict::Empty => Outcome::Empty,
        }
    }
}

/// One seeded trial. Everything but `timing` is a function of the config
/// and `(seed, trial)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub kind: TrialKind,
    pub trial: usize,
    pub seed: u64,
    pub d_planted: usize,
    pub outcome: Outcome,
    /// Per prime, `dim_p(Z[j])` for `j = 1..=t`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<Vec<usize>>,
    /// Per prime, whether the argmin set was exactly `{d}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prime_hits: Vec<bool>,
    /// `λ` of each retrieval entry.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambdas: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<PhaseTiming>,
}

impl TrialRecord {
    pub fn success(&self) -> bool {
        match self.outcome {
            Outcome::Recovered => true,
            Outcome::Unique { d } => d == self.d_planted,
            _ => false,
        }
    }

    pub fn attach_attack(&mut self, res: &AttackResult) {
        self.dims = res.per_prime.iter().map(|p| p.dims.clone()).collect();
        self.prime_hits = res.per_prime.iter().map(|p| p.argmin == [self.d_planted]).collect();
        self.outcome = Outcome::from_verdict(&res.verdict);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Percentiles {
    pub p50_us: u64,
    pub p90_us: u64,
    pub p99_us: u64,
}

impl Percentiles {
    fn of(mut xs: Vec<u64>) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        xs.sort_unstable();
        let at = |q: f64| xs[((xs.len() - 1) as f64 * q).round() as usize];
        Some(Self {
            p50_us: at(0.5),
            p90_us: at(0.9),
            p99_us: at(0.99),
        })
    }
}

fn timings(records: &[TrialRecord]) -> Option<Percentiles> {
    Percentiles::of(records.iter().filter_map(|r| r.timing.map(|t| t.total_us())).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundtripSummary {
    pub trials: usize,
    pub recovered: usize,
    pub success_fraction: f64,
    pub ambiguous: usize,
    pub wrong: usize,
    pub errors: usize,
    pub mean_lambda: Option<f64>,
    pub timing: Option<Percentiles>,
}

impl RoundtripSummary {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let count = |f: fn(&Outcome) -> bool| records.iter().filter(|r| f(&r.outcome)).count();
        let lambdas: Vec<u64> = records.iter().flat_map(|r| r.lambdas.iter().copied()).collect();
        let recovered = count(|o| matches!(o, Outcome::Recovered));
        Self {
            trials: records.len(),
            recovered,
            success_fraction: fraction(recovered, records.len()),
            ambiguous: count(|o| matches!(o, Outcome::AmbiguousFile { .. })),
            wrong: count(|o| matches!(o, Outcome::WrongFile | Outcome::NoSolution)),
            errors: count(|o| matches!(o, Outcome::Error { .. })),
            mean_lambda: (!lambdas.is_empty())
                .then(|| lambdas.iter().sum::<u64>() as f64 / lambdas.len() as f64),
            timing: timings(records),
        }
    }

    pub fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("trials".to_string(), self.trials.to_string()),
            ("recovered".into(), self.recovered.to_string()),
            ("success_fraction".into(), format!("{:.4}", self.success_fraction)),
            ("ambiguous".into(), self.ambiguous.to_string()),
            ("wrong".into(), self.wrong.to_string()),
            ("errors".into(), self.errors.to_string()),
        ];
        if let Some(l) = self.mean_lambda {
            rows.push(("mean_lambda".into(), format!("{l:.3}")));
        }
        push_timing(&mut rows, self.timing);
        rows
    }
}

/// Wall time of the attack alone at one `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: usize,
    pub median_us: u64,
    /// Time relative to the first sweep point.
    pub ratio: f64,
    /// `(t / t_0)^4`.
    pub quartic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSummary {
    pub trials: usize,
    pub unique_correct: usize,
    pub intersected_success: f64,
    pub per_prime_success: Vec<f64>,
    pub ambiguous: usize,
    pub empty: usize,
    pub wrong: usize,
    pub errors: usize,
    /// Per prime, how often each dimension was seen at `j = d`.
    pub dims_at_d: Vec<BTreeMap<usize, usize>>,
    /// Per prime, how often each dimension was seen at `j ≠ d`.
    pub dims_elsewhere: Vec<BTreeMap<usize, usize>>,
    pub timing: Option<Percentiles>,
    #[serde(default)]
    pub sweep: Vec<SweepRow>,
}

impl AttackSummary {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let primes = records.iter().map(|r| r.dims.len()).max().unwrap_or(0);
        let unique_correct = records.iter().filter(|r| r.success()).count();
        let per_prime_success = (0..primes)
            .map(|i| {
                let hits = records.iter().filter(|r| r.prime_hits.get(i) == Some(&true)).count();
                fraction(hits, records.len())
            })
            .collect();
        let mut dims_at_d = vec![BTreeMap::new(); primes];
        let mut dims_elsewhere = vec![BTreeMap::new(); primes];
        for r in records {
            for (i, dims) in r.dims.iter().enumerate() {
                for (j, &dim) in dims.iter().enumerate() {
                    let hist = if j + 1 == r.d_planted { &mut dims_at_d[i] } else { &mut dims_elsewhere[i] };
                    *hist.entry(dim).or_insert(0) += 1;
                }
            }
        }
        let count = |f: fn(&Outcome) -> bool| records.iter().filter(|r| f(&r.outcome)).count();
        Self {
            trials: records.len(),
            unique_correct,
            intersected_success: fraction(unique_correct, records.len()),
            per_prime_success,
            ambiguous: count(|o| matches!(o, Outcome::Ambiguous { .. })),
            empty: count(|o| matches!(o, Outcome::Empty)),
            wrong: records
                .iter()
                .filter(|r| matches!(r.outcome, Outcome::Unique { d } if d != r.d_planted))
                .count(),
            errors: count(|o| matches!(o, Outcome::Error { .. })),
            dims_at_d,
            dims_elsewhere,
            timing: timings(records),
            sweep: Vec::new(),
        }
    }

    pub fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("trials".to_string(), self.trials.to_string()),
            ("unique_correct".into(), self.unique_correct.to_string()),
            ("intersected_success".into(), format!("{:.4}", self.intersected_success)),
        ];
        for (i, s) in self.per_prime_success.iter().enumerate() {
            rows.push((format!("prime{}_success", i + 1), format!("{s:.4}")));
        }
        rows.push(("ambiguous".into(), self.ambiguous.to_string()));
        rows.push(("empty".into(), self.empty.to_string()));
        rows.push(("wrong".into(), self.wrong.to_string()));
        rows.push(("errors".into(), self.errors.to_string()));
        let hist = |h: &BTreeMap<usize, usize>| h.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ");
        for i in 0..self.dims_at_d.len() {
            rows.push((format!("prime{}_dims_at_d", i + 1), hist(&self.dims_at_d[i])));
            rows.push((format!("prime{}_dims_elsewhere", i + 1), hist(&self.dims_elsewhere[i])));
        }
        push_timing(&mut rows, self.timing);
        for row in &self.sweep {
            rows.push((
                format!("sweep_t{}", row.t),
                format!("{}us ratio={:.2} quartic={:.2}", row.median_us, row.ratio, row.quartic),
            ));
        }
        rows
    }
}

fn push_timing(rows: &mut Vec<(String, String)>, timing: Option<Percentiles>) {
    if let Some(p) = timing {
        rows.push(("time_p50_us".into(), p.p50_us.to_string()));
        rows.push(("time_p90_us".into(), p.p90_us.to_string()));
        rows.push(("time_p99_us".into(), p.p99_us.to_string()));
    }
}

fn fraction(k: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        k as f64 / n as f64
    }
}

pub fn write_json_lines<W: Write>(mut w: W, records: &[TrialRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_json_lines(text: &str) -> Result<Vec<TrialRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

pub fn write_csv<W: Write>(w: W, rows: &[(String, String)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["metric", "value"])?;
    for (k, v) in rows {
        out.write_record([k, v])?;
    }
    out.flush()?;
    Ok(())
}

/// Aligned two-column table.
pub fn human_table(title: &str, rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = format!("{title}\n");
    for (k, v) in rows {
        out.push_str(&format!("  {k:<width$}  {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(d: usize, outcome: Outcome) -> TrialRecord {
        TrialRecord {
            kind: TrialKind::Attack,
            trial: 0,
            seed: 1,
            d_planted: d,
            outcome,
            dims: vec![vec![1, 0, 1]],
            prime_hits: vec![d == 2],
            lambdas: vec![],
            timing: None,
        }
    }

    #[test]
    fn json_lines_round_trip() {
        let recs = vec![record(2, Outcome::Unique { d: 2 }), record(1, Outcome::Ambiguous { set: vec![1, 3] })];
        let mut buf = Vec::new();
        write_json_lines(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(!text.contains("timing"));
        assert_eq!(read_json_lines(&text).unwrap(), recs);
    }

    #[test]
    fn attack_summary_counts() {
        let recs = vec![
            record(2, Outcome::Unique { d: 2 }),
            record(3, Outcome::Unique { d: 2 }),
            record(1, Outcome::Empty),
        ];
        let s = AttackSummary::from_records(&recs);
        assert_eq!((s.unique_correct, s.wrong, s.empty), (1, 1, 1));
        assert_eq!(s.dims_at_d[0][&0], 1);
        assert_eq!(s.dims_elsewhere[0][&1], 4);
    }

    #[test]
    fn csv_has_header() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[("trials".into(), "3".into())]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "metric,value\ntrials,3\n");
    }

    #[test]
    fn percentiles() {
        let p = Percentiles::of((1..=100).collect()).unwrap();
        assert_eq!((p.p50_us, p.p90_us, p.p99_us), (51, 90, 99));
        assert!(Percentiles::of(vec![]).is_none());
    }
}
