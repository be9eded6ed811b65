use std::fs::File;
use std::io::BufWriter;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attack::{attack, bounds, empirical_free_density, AttackResult, Bounds};
use crate::error::{Candidates, Error, Result};
use crate::experiment::config::{ExperimentConfig, OutputFormat};
use crate::experiment::records::{
    write_csv, write_json_lines, AttackSummary, Outcome, PhaseTiming, RoundtripSummary, SweepRow, TrialKind,
    TrialRecord,
};
use crate::pir::fixture::{paper_params, paper_secrets, paper_suite, PAPER_D};
use crate::pir::{
    assemble_query, enforce_repair, final_systems, lambda_check, query_gen, recover, server_respond, CodeSuite,
    Database, FinalSystem, QueryOptions, SchemeParams, ValidationReport,
};
use crate::zm::NfConvention;

/// The generator for trial `k`: the base seed picks the key, the trial
/// index picks an independent stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn micros(start: Instant) -> u64 {
    start.elapsed().as_micros() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepairReport {
    /// `λ` of each fixture retrieval entry.
    pub lambdas: Vec<u64>,
    /// Entries with `λ < m'`.
    pub failing: usize,
    /// Entries replaced, or why no replacement was found.
    pub result: std::result::Result<usize, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperReport {
    pub validation: ValidationReport,
    pub systems: Vec<FinalSystem>,
    pub ambiguity: Vec<Candidates>,
    pub attack: AttackResult,
    pub repair: Option<RepairReport>,
}

impl PaperReport {
    pub fn render(&self) -> String {
        let mut out = String::from("worked example over Z_36 (n=5, s=3, r=2, t=3, L=3, d=2)\n");
        let v = &self.validation;
        out.push_str(&format!(
            "  conditions: nested={} inner={} dual-outside-inner={} no-hensel-lifts={} det(M)={}\n",
            v.nested,
            v.meets_inner,
            v.meets_dual_outside_inner,
            v.no_hensel_lifts,
            v.det_m.map_or("-".into(), |d| d.to_string())
        ));
        for sys in &self.systems {
            out.push_str(&format!("  b{} = x * {:?}\n", sys.column + 1, sys.z));
            for row in sys.lhs.row_vectors() {
                out.push_str(&format!("      {row:?}\n"));
            }
        }
        for c in &self.ambiguity {
            out.push_str(&format!("  x{}{} in {:?}\n", c.row + 1, c.col + 1, c.values));
        }
        out.push_str(&format!(
            "  golden systems: PASS\n  attack verdict: {:?} (planted d = {PAPER_D})\n",
            self.attack.verdict
        ));
        for p in &self.attack.per_prime {
            out.push_str(&format!("    p={} dims={:?} argmin={:?}\n", p.p, p.dims, p.argmin));
        }
        if let Some(rep) = &self.repair {
            out.push_str(&format!("  repair: lambdas={:?}, {} below m'\n", rep.lambdas, rep.failing));
            match &rep.result {
                Ok(k) => out.push_str(&format!("  repair: replaced {k} entries\n")),
                Err(e) => out.push_str(&format!("  repair: resampling engaged, {e}\n")),
            }
        }
        out
    }
}

fn golden(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::GoldenMismatch(what.into()))
    }
}

fn check_systems(systems: &[FinalSystem]) -> Result<()> {
    golden(systems.len() == 2, "expected two final systems")?;
    golden(systems[0].z == [9, 9, 0, 0, 0], "first coefficient row")?;
    golden(systems[0].lhs.is_zero(), "first left-hand side")?;
    golden(systems[1].z == [27, 27, 0, 0, 0], "second coefficient row")?;
    let lhs = vec![vec![18, 18, 0, 0, 0], vec![27, 27, 0, 0, 0], vec![27, 27, 0, 0, 0]];
    golden(systems[1].lhs.row_vectors() == lhs, "second left-hand side")
}

fn check_ambiguity(c: &[Candidates]) -> Result<()> {
    let at = |row, col| c.iter().find(|x| x.row == row && x.col == col).map(|x| x.values.as_slice());
    golden(at(0, 0) == Some(&[0, 4]), "candidates for x11")?;
    golden(at(1, 1) == Some(&[1, 5]), "candidates for x22")
}

/// Runs the worked example against `db` and checks every printed value.
pub fn paper_example_with(db: &Database, repair: bool, seed: u64) -> Result<PaperReport> {
    let params = paper_params();
    let suite = paper_suite();
    let secrets = paper_secrets();
    let query = assemble_query(&params, &suite, &secrets)?;
    let resp = server_respond(db, &query)?;
    let systems = final_systems(&resp, &suite, &secrets, &params)?;
    check_systems(&systems)?;
    let ambiguity = match recover(&resp, &suite, &secrets, &params) {
        Err(Error::AmbiguousSolution(c)) => c,
        Ok(_) => return Err(Error::GoldenMismatch("recovery was unique".into())),
        Err(e) => return Err(Error::GoldenMismatch(format!("recovery failed: {e}"))),
    };
    check_ambiguity(&ambiguity)?;
    let attack = attack(&query.q, &params, NfConvention::Alternative)?;

    let repair = repair.then(|| {
        let lambdas: Vec<u64> = secrets
            .u_diag
            .iter()
            .map(|u| lambda_check(u, &suite.h_in, &suite.modulus).map_or(0, |c| c.lambda))
            .collect();
        let failing = lambdas.iter().filter(|&&l| l < params.m_prime()).count();
        let mut fixed = secrets.clone();
        let mut rng = trial_rng(seed, 0);
        let result = enforce_repair(&mut fixed, &suite, NfConvention::Alternative, &mut rng).map_err(|e| e.to_string());
        RepairReport { lambdas, failing, result }
    });

    Ok(PaperReport {
        validation: suite.validate(),
        systems,
        ambiguity,
        attack,
        repair,
    })
}

pub fn cmd_paper_example(repair: bool, seed: u64) -> Result<PaperReport> {
    paper_example_with(&crate::pir::fixture::paper_database(), repair, seed)
}

struct Setup {
    params: SchemeParams,
    suite: CodeSuite,
    opts: QueryOptions,
}

impl Setup {
    fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            params: cfg.params()?,
            suite: cfg.suite()?,
            opts: QueryOptions {
                convention: cfg.nf_convention,
                repair: cfg.repair,
            },
        })
    }
}

fn record(kind: TrialKind, cfg: &ExperimentConfig, trial: usize, d: usize) -> TrialRecord {
    TrialRecord {
        kind,
        trial,
        seed: cfg.seed,
        d_planted: d,
        outcome: Outcome::Empty,
        dims: Vec::new(),
        prime_hits: Vec::new(),
        lambdas: Vec::new(),
        timing: None,
    }
}

fn roundtrip_trial(setup: &Setup, cfg: &ExperimentConfig, trial: usize) -> TrialRecord {
    let Setup { params, suite, opts } = setup;
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let db = Database::random(params, &mut rng);
    let d = rng.gen_range(1..=params.t);
    let mut rec = record(TrialKind::Roundtrip, cfg, trial, d);
    let mut timing = PhaseTiming::default();

    let start = Instant::now();
    let generated = query_gen(params, suite, d, *opts, &mut rng);
    timing.query_us = micros(start);
    let (query, secrets) = match generated {
        Ok(x) => x,
        Err(e) => {
            rec.outcome = Outcome::Error { message: e.to_string() };
            return rec;
        }
    };
    rec.lambdas = secrets
        .u_diag
        .iter()
        .map(|u| lambda_check(u, &suite.h_in, &suite.modulus).map_or(0, |c| c.lambda))
        .collect();

    let start = Instant::now();
    let resp = server_respond(&db, &query);
    timing.respond_us = micros(start);
    let start = Instant::now();
    let recovered = resp.and_then(|r| recover(&r, suite, &secrets, params));
    timing.recover_us = micros(start);

    rec.outcome = match recovered {
        Ok(file) if db.file(d).is_ok_and(|f| f == file) => Outcome::Recovered,
        Ok(_) => Outcome::WrongFile,
        Err(Error::AmbiguousSolution(c)) => Outcome::AmbiguousFile { coordinates: c.len() },
        Err(Error::NoSolution { .. }) => Outcome::NoSolution,
        Err(e) => Outcome::Error { message: e.to_string() },
    };
    rec.timing = cfg.timing.then_some(timing);
    rec
}

/// Seeded plant-query-respond-recover trials.
pub fn cmd_roundtrip(cfg: &ExperimentConfig) -> Result<(Vec<TrialRecord>, RoundtripSummary)> {
    let setup = Setup::new(cfg)?;
    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| roundtrip_trial(&setup, cfg, k))
        .collect();
    let summary = RoundtripSummary::from_records(&records);
    Ok((records, summary))
}

fn attack_trial(setup: &Setup, cfg: &ExperimentConfig, trial: usize) -> TrialRecord {
    let Setup { params, suite, opts } = setup;
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let d = rng.gen_range(1..=params.t);
    let mut rec = record(TrialKind::Attack, cfg, trial, d);
    let mut timing = PhaseTiming::default();

    let start = Instant::now();
    let query = match query_gen(params, suite, d, *opts, &mut rng) {
        Ok((q, _)) => q,
        Err(e) => {
            rec.outcome = Outcome::Error { message: e.to_string() };
            return rec;
        }
    };
    timing.query_us = micros(start);
    let start = Instant::now();
    match attack(&query.q, params, opts.convention) {
        Ok(res) => rec.attach_attack(&res),
        Err(e) => rec.outcome = Outcome::Error { message: e.to_string() },
    }
    timing.attack_us = micros(start);
    rec.timing = cfg.timing.then_some(timing);
    rec
}

/// Median attack time at each `t` of the sweep, on fresh queries.
pub fn attack_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let mut rows: Vec<SweepRow> = Vec::new();
    for &t in &cfg.t_sweep {
        let setup = Setup::new(&cfg.with_t(t))?;
        let mut times = Vec::with_capacity(cfg.sweep_reps.max(1));
        for rep in 0..cfg.sweep_reps.max(1) {
            let mut rng = trial_rng(cfg.seed ^ t as u64, rep as u64);
            let d = rng.gen_range(1..=t);
            let (query, _) = query_gen(&setup.params, &setup.suite, d, setup.opts, &mut rng)?;
            let start = Instant::now();
            attack(&query.q, &setup.params, setup.opts.convention)?;
            times.push(micros(start).max(1));
        }
        times.sort_unstable();
        let median_us = times[times.len() / 2];
        let (t0, base) = rows.first().map_or((t, median_us), |r| (r.t, r.median_us));
        rows.push(SweepRow {
            t,
            median_us,
            ratio: median_us as f64 / base as f64,
            quartic: (t as f64 / t0 as f64).powi(4),
        });
    }
    Ok(rows)
}

/// Seeded attack trials with a random planted index, plus the timing
/// sweep when one is configured.
pub fn cmd_attack(cfg: &ExperimentConfig) -> Result<(Vec<TrialRecord>, AttackSummary)> {
    let setup = Setup::new(cfg)?;
    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| attack_trial(&setup, cfg, k))
        .collect();
    let mut summary = AttackSummary::from_records(&records);
    summary.sweep = attack_sweep(cfg)?;
    Ok((records, summary))
}

/// The published `(n, s, r)` rows, each listed once.
pub const TABLE_ONE: [(usize, usize, usize); 4] = [(91, 5, 4), (91, 5, 5), (91, 6, 6), (91, 10, 10)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub n: usize,
    pub s: usize,
    pub r: usize,
    #[serde(flatten)]
    pub bounds: Bounds,
}

/// Bounds for each `(n, s, r)`, with `t_dim` at its worst case `K = ns`.
pub fn cmd_bounds(rows: &[(usize, usize, usize)]) -> Result<Vec<BoundsRow>> {
    rows.iter()
        .map(|&(n, s, r)| {
            if n == 0 || s == 0 || r == 0 {
                return Err(Error::InvalidParams("n, s and r must be positive".into()));
            }
            Ok(BoundsRow {
                n,
                s,
                r,
                bounds: bounds(n, s, r, Some(n * s)),
            })
        })
        .collect()
}

pub fn render_bounds(rows: &[BoundsRow]) -> String {
    let mut out = format!("{:>5} {:>4} {:>4} {:>6} {:>6} {:>9}\n", "n", "s", "r", "t_zj", "t_dim", "t_general");
    for row in rows {
        let b = row.bounds;
        out.push_str(&format!(
            "{:>5} {:>4} {:>4} {:>6} {:>6} {:>9}\n",
            row.n,
            row.s,
            row.r,
            b.t_zj,
            b.t_dim.map_or("-".into(), |t| t.to_string()),
            b.t_general
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub p: u64,
    pub e: u32,
    pub rank: usize,
    pub length: usize,
    pub trials: usize,
    pub seed: u64,
    pub fraction: f64,
}

pub fn cmd_free_density(p: u64, e: u32, rank: usize, length: usize, trials: usize, seed: u64) -> Result<DensityReport> {
    crate::ring::Modulus::new(p.pow(e))?;
    let mut rng = trial_rng(seed, 0);
    Ok(DensityReport {
        p,
        e,
        rank,
        length,
        trials,
        seed,
        fraction: empirical_free_density(p, e, length, rank, trials, &mut rng),
    })
}

/// Writes records (JSON-lines) or summary rows (CSV) to `cfg.out`.
pub fn write_output(cfg: &ExperimentConfig, records: &[TrialRecord], rows: &[(String, String)]) -> Result<()> {
    let Some(path) = &cfg.out else { return Ok(()) };
    let w = BufWriter::new(File::create(path)?);
    match cfg.format {
        OutputFormat::Json => write_json_lines(w, records),
        OutputFormat::Csv => write_csv(w, rows),
    }
}

/// Sizes the global thread pool from `RINGPIR_THREADS`, if set.
pub fn init_thread_pool() -> Result<()> {
    let Ok(value) = std::env::var("RINGPIR_THREADS") else { return Ok(()) };
    let threads: usize = value
        .parse()
        .map_err(|_| Error::Config(format!("RINGPIR_THREADS={value} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}
