//! Seeded generation of matrices with prescribed Jordan structure and mass
//! verification of the perturbation bounds.
//!
//! # Reproducibility
//!
//! Trial `t` of a campaign with seed `s` draws everything from
//! `ChaCha8Rng::seed_from_u64(trial_seed(s, t))`, where
//!
//! ```text
//! splitmix64(z) = let z = z + 0x9E3779B97F4A7C15;
//!                 let z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//!                 let z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//!                 z ^ (z >> 31)                       (wrapping u64)
//! trial_seed(s, t) = splitmix64(s ^ splitmix64(t))
//! ```
//!
//! so a trial's matrices depend only on `(s, t)`, never on which thread ran
//! it or in what order.
//!
//! # Generator policy
//!
//! Eigenvalues come from the integers in `[−4, 4]` plus `i`, `1+i`, `−i`.
//! `A = P·J·P⁻¹` with `P` a product of elementary integer row operations,
//! and `B = U·V` with integer `U` (n×r), `V` (r×n). These distributions are
//! a choice of this crate, not part of any theorem being checked.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{bound_report, corollary41_check, corollary43_from_report, BoundReport};
use crate::error::{Error, Result, Violation, ViolationKind};
use crate::exactpoly::{GaussianRational, Poly};
use crate::matfile::format_matrix;
use crate::matrix::ExactMatrix;

pub const GENERATOR_POLICY: &str =
    "jordan-pool[-4..4,i,1+i,-i] conjugated by unimodular row ops in [-3,3]; B = U*V with integer entries";

const LOW_RANK_RETRIES: usize = 32;

/// Jordan structure: distinct eigenvalues, each with its block sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanSpec {
    blocks: Vec<(GaussianRational, Vec<usize>)>,
}

impl JordanSpec {
    pub fn new(blocks: Vec<(GaussianRational, Vec<usize>)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidInput("Jordan spec has no eigenvalues".into()));
        }
        for (i, (lambda, sizes)) in blocks.iter().enumerate() {
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(Error::InvalidInput(format!(
                    "eigenvalue {lambda} needs block sizes >= 1"
                )));
            }
            if blocks[..i].iter().any(|(other, _)| other == lambda) {
                return Err(Error::InvalidInput(format!(
                    "eigenvalue {lambda} listed twice"
                )));
            }
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[(GaussianRational, Vec<usize>)] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().flat_map(|(_, s)| s).sum()
    }

    pub fn num_distinct(&self) -> usize {
        self.blocks.len()
    }

    /// Off-diagonal ones in the Jordan form.
    pub fn defectivity(&self) -> usize {
        self.blocks.iter().flat_map(|(_, s)| s).map(|s| s - 1).sum()
    }

    pub fn derogatory_index(&self) -> usize {
        self.blocks.iter().map(|(_, s)| s.len() - 1).sum()
    }

    pub fn char_poly(&self) -> Poly {
        self.blocks.iter().fold(Poly::one(), |acc, (l, s)| {
            &acc * &Poly::linear_power(l, s.iter().sum())
        })
    }

    pub fn min_poly(&self) -> Poly {
        self.blocks.iter().fold(Poly::one(), |acc, (l, s)| {
            &acc * &Poly::linear_power(l, *s.iter().max().expect("nonempty"))
        })
    }
}

/// Block-diagonal Jordan matrix, blocks in spec order.
pub fn build_jordan(spec: &JordanSpec) -> ExactMatrix {
    let n = spec.n();
    let mut m = ExactMatrix::zeros(n, n);
    let mut at = 0;
    for (lambda, sizes) in spec.blocks() {
        for &size in sizes {
            for k in 0..size {
                m.set(at + k, at + k, lambda.clone());
                if k + 1 < size {
                    m.set(at + k, at + k + 1, GaussianRational::one());
                }
            }
            at += size;
        }
    }
    m
}

/// An integer matrix of determinant ±1 together with its exact inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unimodular {
    pub matrix: ExactMatrix,
    pub inverse: ExactMatrix,
}

impl Unimodular {
    /// `P·M·P⁻¹`.
    pub fn conjugate(&self, m: &ExactMatrix) -> ExactMatrix {
        &(&self.matrix * m) * &self.inverse
    }
}

/// Applies `ops` random elementary row operations to the identity: either a
/// swap, or adding `k ∈ [−3, 3]` times one row to another. The inverse is
/// built alongside by applying the inverse column operations.
pub fn random_unimodular<R: Rng + ?Sized>(n: usize, ops: usize, rng: &mut R) -> Unimodular {
    let mut p = ExactMatrix::identity(n);
    let mut inv = ExactMatrix::identity(n);
    if n < 2 {
        return Unimodular {
            matrix: p,
            inverse: inv,
        };
    }
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        if rng.gen_bool(0.25) {
            for c in 0..n {
                let (a, b) = (p.get(i, c).clone(), p.get(j, c).clone());
                p.set(i, c, b);
                p.set(j, c, a);
                let (a, b) = (inv.get(c, i).clone(), inv.get(c, j).clone());
                inv.set(c, i, b);
                inv.set(c, j, a);
            }
        } else {
            let k = GaussianRational::from_int(rng.gen_range(-3..=3));
            for c in 0..n {
                // row_i += k·row_j on P; col_j −= k·col_i on P⁻¹.
                let v = p.get(i, c) + &(&k * p.get(j, c));
                p.set(i, c, v);
                let w = inv.get(c, j) - &(&k * inv.get(c, i));
                inv.set(c, j, w);
            }
        }
    }
    Unimodular {
        matrix: p,
        inverse: inv,
    }
}

/// `B = U·V` with entries of `U`, `V` uniform in `[−bound, bound]`,
/// redrawn until `rank(B) = r`.
pub fn random_low_rank<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    bound: i64,
    rng: &mut R,
) -> Result<ExactMatrix> {
    if r == 0 || r > n {
        return Err(Error::InvalidInput(format!(
            "perturbation rank must lie in 1..={n}, got {r}"
        )));
    }
    if bound < 1 {
        return Err(Error::InvalidInput(format!(
            "entry bound must be >= 1, got {bound}"
        )));
    }
    for _ in 0..LOW_RANK_RETRIES {
        let mut draw = || GaussianRational::from_int(rng.gen_range(-bound..=bound));
        let u = ExactMatrix::from_fn(n, r, |_, _| draw());
        let v = ExactMatrix::from_fn(r, n, |_, _| draw());
        let b = &u * &v;
        if b.rank() == r {
            return Ok(b);
        }
    }
    Err(Error::Internal(format!(
        "no rank-{r} draw in {LOW_RANK_RETRIES} attempts"
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzConfig {
    pub n: usize,
    pub rank: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_entry: i64,
    pub unimodular_ops: usize,
    /// Replace every drawn `B` by the zero matrix.
    pub zero_perturbation: bool,
}

impl FuzzConfig {
    /// Defaults: entries in `[−3, 3]`, `3n` unimodular operations.
    pub fn new(n: usize, rank: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            rank,
            trials,
            seed,
            max_entry: 3,
            unimodular_ops: 3 * n,
            zero_perturbation: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("n must be >= 1".into()));
        }
        if self.rank == 0 || self.rank > self.n {
            return Err(Error::InvalidInput(format!(
                "rank must lie in 1..={}, got {}",
                self.n, self.rank
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be >= 1".into()));
        }
        if self.max_entry < 1 {
            return Err(Error::InvalidInput("max entry must be >= 1".into()));
        }
        Ok(())
    }
}

pub fn splitmix64(z: u64) -> u64 {
    let z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    splitmix64(seed ^ splitmix64(trial as u64))
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, trial))
}

fn eigenvalue_pool() -> Vec<GaussianRational> {
    let mut pool: Vec<GaussianRational> = (-4..=4).map(GaussianRational::from_int).collect();
    pool.extend([
        GaussianRational::i(),
        GaussianRational::from_integers(1, 1),
        GaussianRational::from_integers(0, -1),
    ]);
    pool
}

/// Random composition of `total` into `parts` positive integers.
fn composition<R: Rng + ?Sized>(total: usize, parts: usize, rng: &mut R) -> Vec<usize> {
    let mut cuts: Vec<usize> = index::sample(rng, total - 1, parts - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    cuts.push(total);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let part = c - prev;
            prev = c;
            part
        })
        .collect()
}

pub fn random_jordan_spec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> JordanSpec {
    let pool = eigenvalue_pool();
    let k = rng.gen_range(1..=n.min(pool.len()));
    let eigenvalues: Vec<GaussianRational> = pool.choose_multiple(rng, k).cloned().collect();
    let multiplicities = composition(n, k, rng);
    let blocks = eigenvalues
        .into_iter()
        .zip(multiplicities)
        .map(|(lambda, m)| {
            let count = rng.gen_range(1..=m);
            let mut sizes = composition(m, count, rng);
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            (lambda, sizes)
        })
        .collect();
    JordanSpec::new(blocks).expect("generated spec is valid")
}

/// Everything drawn for one trial.
#[derive(Clone, Debug)]
pub struct TrialInstance {
    pub spec: JordanSpec,
    pub conjugator: Unimodular,
    pub a: ExactMatrix,
    pub b: ExactMatrix,
}

pub fn generate_trial(config: &FuzzConfig, trial: usize) -> Result<TrialInstance> {
    let mut rng = trial_rng(config.seed, trial);
    let spec = random_jordan_spec(config.n, &mut rng);
    let conjugator = random_unimodular(config.n, config.unimodular_ops, &mut rng);
    let a = conjugator.conjugate(&build_jordan(&spec));
    let b = if config.zero_perturbation {
        ExactMatrix::zeros(config.n, config.n)
    } else {
        random_low_rank(config.n, config.rank, config.max_entry, &mut rng)?
    };
    Ok(TrialInstance {
        spec,
        conjugator,
        a,
        b,
    })
}

/// Everything needed to replay a failing trial.
#[derive(Clone, Debug)]
pub struct ReproBundle {
    pub seed: u64,
    pub trial: usize,
    pub a: ExactMatrix,
    pub b: ExactMatrix,
    pub violation: Violation,
}

impl ReproBundle {
    /// Writes `A.mat`, `B.mat` and `violation.txt` into `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("A.mat"), format_matrix(&self.a))?;
        fs::write(dir.join("B.mat"), format_matrix(&self.b))?;
        fs::write(
            dir.join("violation.txt"),
            format!(
                "seed {}\ntrial {}\n{}\n",
                self.seed, self.trial, self.violation
            ),
        )?;
        Ok(dir.to_path_buf())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub slack: i64,
    pub c_defective: bool,
    pub report: BoundReport,
}

fn check_trial(inst: &TrialInstance) -> Result<BoundReport> {
    let report = bound_report(&inst.a, &inst.b)?;
    let sa = &report.summary_a;
    let spec = &inst.spec;
    let truth = (
        spec.num_distinct(),
        spec.defectivity(),
        spec.derogatory_index(),
    );
    if (sa.num_distinct, sa.defectivity, sa.derogatory_index) != truth
        || sa.char_poly != spec.char_poly()
        || sa.min_poly != spec.min_poly()
    {
        return Err(Violation::new(
            ViolationKind::GroundTruth,
            format!(
                "computed (|Λ|, d, I) = ({}, {}, {}) but spec has {truth:?}",
                sa.num_distinct, sa.defectivity, sa.derogatory_index
            ),
        )
        .into());
    }
    let cor = corollary41_check(&report);
    if !cor.holds {
        return Err(Violation::new(
            ViolationKind::DerogatoryIndexLowerBound,
            format!("I(C) = {} < {}", cor.lhs, cor.rhs),
        )
        .into());
    }
    if report.summary_c.is_nonderogatory() {
        corollary43_from_report(&report)?;
    }
    if !report.remark32_holds() {
        return Err(Violation::new(
            ViolationKind::FarrellComparison,
            format!(
                "d(C) = {}, improved {} vs Farrell {}",
                report.summary_c.defectivity, report.improved_bound, report.farrell_bound
            ),
        )
        .into());
    }
    Ok(report)
}

/// Generates and verifies one trial. A failed inequality comes back as
/// [`Error::Reproduction`].
pub fn run_trial(config: &FuzzConfig, trial: usize) -> Result<TrialOutcome> {
    let inst = generate_trial(config, trial)?;
    match check_trial(&inst) {
        Ok(report) => Ok(TrialOutcome {
            slack: report.slack,
            c_defective: report.summary_c.defectivity >= 1,
            report,
        }),
        Err(Error::Violation(violation)) => Err(Error::Reproduction(Box::new(ReproBundle {
            seed: config.seed,
            trial,
            a: inst.a,
            b: inst.b,
            violation,
        }))),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub generator: &'static str,
    pub trials_run: usize,
    pub violations: usize,
    pub tight_count: usize,
    /// Trials with `d(C) ≥ 1`, where the improved bound is strictly smaller.
    pub defective_c_count: usize,
    pub slack_histogram: BTreeMap<i64, usize>,
    pub min_slack: Option<i64>,
    pub max_slack: Option<i64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Default for FuzzReport {
    fn default() -> Self {
        Self {
            generator: GENERATOR_POLICY,
            trials_run: 0,
            violations: 0,
            tight_count: 0,
            defective_c_count: 0,
            slack_histogram: BTreeMap::new(),
            min_slack: None,
            max_slack: None,
            elapsed: Duration::ZERO,
        }
    }
}

impl FuzzReport {
    pub fn record(&mut self, outcome: &TrialOutcome) {
        self.trials_run += 1;
        self.tight_count += usize::from(outcome.slack == 0);
        self.defective_c_count += usize::from(outcome.c_defective);
        *self.slack_histogram.entry(outcome.slack).or_default() += 1;
        self.min_slack = Some(
            self.min_slack
                .map_or(outcome.slack, |m| m.min(outcome.slack)),
        );
        self.max_slack = Some(
            self.max_slack
                .map_or(outcome.slack, |m| m.max(outcome.slack)),
        );
    }

    /// Commutative merge of two campaign reports.
    pub fn merge(&mut self, other: &FuzzReport) {
        self.trials_run += other.trials_run;
        self.violations += other.violations;
        self.tight_count += other.tight_count;
        self.defective_c_count += other.defective_c_count;
        for (&slack, &count) in &other.slack_histogram {
            *self.slack_histogram.entry(slack).or_default() += count;
        }
        self.min_slack = match (self.min_slack, other.min_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max_slack = match (self.max_slack, other.max_slack) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.elapsed += other.elapsed;
    }
}

/// Runs all trials in parallel. The first failing trial (lowest index)
/// aborts the campaign.
pub fn run_fuzz(config: &FuzzConfig) -> Result<FuzzReport> {
    config.validate()?;
    let start = Instant::now();
    let outcomes: Vec<Result<TrialOutcome>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();
    let mut report = FuzzReport::default();
    for outcome in outcomes {
        report.record(&outcome?);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Runs each configuration in turn and merges the reports. Stops at the
/// first failing configuration.
pub fn run_campaign(configs: &[FuzzConfig]) -> Result<FuzzReport> {
    let mut total = FuzzReport::default();
    for config in configs {
        total.merge(&run_fuzz(config)?);
    }
    Ok(total)
}

/// Splits `trials` as evenly as possible over every `(n, rank)` pair with
/// `rank ≤ n`, all sharing `seed`.
pub fn grid_configs(ns: &[usize], ranks: &[usize], trials: usize, seed: u64) -> Vec<FuzzConfig> {
    let pairs: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| ranks.iter().filter(move |&&r| r <= n).map(move |&r| (n, r)))
        .collect();
    if pairs.is_empty() {
        return Vec::new();
    }
    let (base, extra) = (trials / pairs.len(), trials % pairs.len());
    pairs
        .into_iter()
        .enumerate()
        .map(|(k, (n, r))| FuzzConfig::new(n, r, base + usize::from(k < extra), seed))
        .filter(|c| c.trials > 0)
        .collect()
}

/// The 5×5 pair `(A, B)` from the second worked example: a Jordan
/// structure `{1: [3, 1, 1]}` and a rank-one update.
pub fn example_two_matrices() -> (ExactMatrix, ExactMatrix) {
    let a = ExactMatrix::from_int_rows(&[
        &[1, 1, 0, 0, 0],
        &[0, 1, 1, 0, 0],
        &[0, 0, 1, 0, 0],
        &[0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 1],
    ]);
    let b = ExactMatrix::from_int_rows(&[
        &[1, 1, 1, 1, 1],
        &[1, 1, 1, 1, 1],
        &[0, 0, 0, 0, 0],
        &[1, 1, 1, 1, 1],
        &[0, 0, 0, 0, 0],
    ]);
    (a, b)
}

/// `n×n` Jordan block with eigenvalue `lambda`.
pub fn jordan_block(lambda: &GaussianRational, n: usize) -> ExactMatrix {
    build_jordan(&JordanSpec::new(vec![(lambda.clone(), vec![n])]).expect("single block"))
}

/// The rank-`r` perturbation whose top-left `r×(r+1)` block has `1..=r` on
/// the diagonal and `−1` on the superdiagonal.
pub fn staircase_perturbation(n: usize, r: usize) -> Result<ExactMatrix> {
    if r == 0 || r >= n {
        return Err(Error::InvalidInput(format!(
            "staircase rank must lie in 1..{n}, got {r}"
        )));
    }
    Ok(ExactMatrix::from_fn(n, n, |i, j| {
        if i < r && j == i {
            GaussianRational::from_int(i as i64 + 1)
        } else if i < r && j == i + 1 {
            GaussianRational::from_int(-1)
        } else {
            GaussianRational::zero()
        }
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub r: usize,
    pub farrell_bound: usize,
    pub improved_bound: i64,
    pub defectivity_c: usize,
    pub actual_distinct: usize,
}

#[derive(Clone, Debug)]
pub struct ExampleSuite {
    pub n: usize,
    pub family: Vec<FamilyRow>,
    pub example_two: BoundReport,
}

fn golden(what: &str, got: impl std::fmt::Debug, want: impl std::fmt::Debug) -> Error {
    Violation::new(
        ViolationKind::Golden,
        format!("{what}: got {got:?}, expected {want:?}"),
    )
    .into()
}

/// Reproduces both worked examples: the Jordan block perturbed by the
/// staircase family for every `r ∈ 1..n`, and the explicit 5×5 pair.
pub fn paper_example_suite(n: usize) -> Result<ExampleSuite> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "the perturbation family needs n >= 2, got {n}"
        )));
    }
    let a = jordan_block(&GaussianRational::zero(), n);
    let mut family = Vec::with_capacity(n - 1);
    for r in 1..n {
        let report = bound_report(&a, &staircase_perturbation(n, r)?)?;
        let row = FamilyRow {
            r,
            farrell_bound: report.farrell_bound,
            improved_bound: report.improved_bound,
            defectivity_c: report.summary_c.defectivity,
            actual_distinct: report.actual_distinct_c,
        };
        if row.farrell_bound != n + r {
            return Err(golden(
                &format!("Farrell bound at r = {r}"),
                row.farrell_bound,
                n + r,
            ));
        }
        if row.improved_bound != (2 * r + 1) as i64 {
            return Err(golden(
                &format!("improved bound at r = {r}"),
                row.improved_bound,
                2 * r + 1,
            ));
        }
        if row.defectivity_c != n - 1 - r {
            return Err(golden(
                &format!("d(C) at r = {r}"),
                row.defectivity_c,
                n - 1 - r,
            ));
        }
        let cap = (n as i64).min(row.improved_bound);
        if row.actual_distinct as i64 > cap {
            return Err(golden(
                &format!("|Λ(C)| at r = {r}"),
                row.actual_distinct,
                format!("<= {cap}"),
            ));
        }
        family.push(row);
    }

    let (a2, b2) = example_two_matrices();
    let r = bound_report(&a2, &b2)?;
    let got = (
        r.summary_a.num_distinct,
        r.summary_a.defectivity,
        r.rank_b,
        r.summary_c.defectivity,
        r.actual_distinct_c,
        r.farrell_bound,
        r.improved_bound,
    );
    let want = (1, 2, 1, 1, 3, 4, 3);
    if got != want {
        return Err(golden(
            "(|Λ(A)|, d(A), rank(B), d(C), |Λ(C)|, Farrell, improved)",
            got,
            want,
        ));
    }
    Ok(ExampleSuite {
        n,
        family,
        example_two: r,
    })
}
