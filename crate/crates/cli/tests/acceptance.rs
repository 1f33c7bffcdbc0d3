//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use eigperturb::bounds::{split_bounds, ShiftParameter};
use eigperturb::eigenstructure::{char_poly, summarize};
use eigperturb::exactpoly::{GaussianRational, Poly};
use eigperturb::fuzz::{
    build_jordan, grid_configs, random_jordan_spec, random_unimodular, run_campaign, run_trial,
    trial_rng,
};
use eigperturb::matrix::ExactMatrix;
use rand::Rng;
use serde_json::Value;

const AC1_LIMIT: Duration = Duration::from_secs(1);
const AC2_LIMIT: Duration = Duration::from_secs(10);
const AC3_LIMIT: Duration = Duration::from_secs(60);
const CAMPAIGN_SEED: u64 = 20_240_531;
const CAMPAIGN_TRIALS: usize = 500;
const CAMPAIGN_NS: [usize; 6] = [3, 4, 5, 6, 7, 8];
const CAMPAIGN_RANKS: [usize; 3] = [1, 2, 3];
const AC4_INSTANCES: usize = 240;
const AC5_SCALAR_SAMPLES: usize = 40;
const AC5_COMPANIONS: usize = 60;
const AC6_MATRICES: usize = 100;
const AC6_ALPHA_SAMPLES: usize = 200;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("eigperturb").chain(args.iter().copied());
    let code = eigperturb_cli::dispatch(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!(
            "took {:.3} s, limit {} s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        )
    })
}

fn field(doc: &Value, key: &str) -> i64 {
    doc[key]
        .as_i64()
        .unwrap_or_else(|| panic!("missing integer field {key}"))
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let (code, out, err) = cli(&[
        "bound",
        "--a",
        &fixture("paper_A.mat"),
        "--b",
        &fixture("paper_B.mat"),
        "--format",
        "json",
    ]);
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    let doc: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let got: Vec<i64> = [
        "distinct_a",
        "defectivity_a",
        "rank_b",
        "defectivity_c",
        "actual_distinct",
        "farrell_bound",
        "improved_bound",
        "slack",
    ]
    .iter()
    .map(|k| field(&doc, k))
    .collect();
    let want = vec![1, 2, 1, 1, 3, 4, 3, 0];
    ensure(got == want, || format!("got {got:?}, expected {want:?}"))?;
    within(elapsed, AC1_LIMIT)?;
    Ok(format!(
        "|Λ(A)|=1 d(A)=2 rank(B)=1 d(C)=1 |Λ(C)|=3 farrell=4 improved=3 slack=0 in {:.3} s",
        elapsed.as_secs_f64()
    ))
}

fn ac2() -> Outcome {
    let n = 10i64;
    let start = Instant::now();
    let (code, out, err) = cli(&["examples", "--n", "10", "--format", "json"]);
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    let doc: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let rows = doc["family"].as_array().ok_or("no family array")?;
    ensure(rows.len() == 9, || format!("{} rows", rows.len()))?;
    let mut observed = Vec::new();
    for row in rows {
        let r = field(row, "r");
        let (farrell, improved, d, actual) = (
            field(row, "farrell_bound"),
            field(row, "improved_bound"),
            field(row, "defectivity_c"),
            field(row, "actual_distinct"),
        );
        ensure(
            farrell == n + r && improved == 2 * r + 1 && d == n - 1 - r && actual <= improved,
            || format!("r={r}: farrell {farrell}, improved {improved}, d(C) {d}, actual {actual}"),
        )?;
        observed.push(actual);
    }
    within(elapsed, AC2_LIMIT)?;
    Ok(format!(
        "r=1..9 all match; observed |Λ(C_r)| = {observed:?} in {:.3} s",
        elapsed.as_secs_f64()
    ))
}

fn ac3() -> Outcome {
    let grid = grid_configs(
        &CAMPAIGN_NS,
        &CAMPAIGN_RANKS,
        CAMPAIGN_TRIALS,
        CAMPAIGN_SEED,
    );
    let start = Instant::now();
    let report = run_campaign(&grid).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(report.trials_run == CAMPAIGN_TRIALS, || {
        format!("ran {} trials", report.trials_run)
    })?;
    ensure(report.violations == 0, || {
        format!("{} violations", report.violations)
    })?;
    ensure(
        report.slack_histogram.values().sum::<usize>() == report.trials_run,
        || "histogram does not sum".into(),
    )?;
    ensure(report.tight_count >= 1, || "no tight trial observed".into())?;
    within(elapsed, AC3_LIMIT)?;
    Ok(format!(
        "{} trials, 0 violations, {} tight, {} with d(C)≥1 (improved < farrell exactly there), slack {}..{} in {:.1} s",
        report.trials_run,
        report.tight_count,
        report.defective_c_count,
        report.min_slack.unwrap_or(0),
        report.max_slack.unwrap_or(0),
        elapsed.as_secs_f64()
    ))
}

fn check_identities(m: &ExactMatrix) -> Result<(), String> {
    let s = summarize(m).map_err(|e| e.to_string())?;
    let f = &s.invariant_factors;
    ensure(
        f.is_divisibility_chain().map_err(|e| e.to_string())?,
        || "not a divisibility chain".into(),
    )?;
    let chi = char_poly(m).map_err(|e| e.to_string())?;
    ensure(f.product() == chi, || {
        format!("Π fᵢ = {} but char = {chi}", f.product())
    })?;
    ensure(
        m.eval_poly(f.minimal_polynomial())
            .map_err(|e| e.to_string())?
            .is_zero(),
        || "f_n(M) ≠ 0".into(),
    )?;
    ensure(
        s.num_distinct + s.defectivity + s.derogatory_index == s.n,
        || "|Λ|+d+I ≠ n".into(),
    )?;
    let sq = |p: &Poly| {
        p.squarefree_part()
            .map(|q| q.deg())
            .map_err(|e| e.to_string())
    };
    ensure(sq(f.minimal_polynomial())? == sq(&chi)?, || {
        "deg sqfree(f_n) ≠ deg sqfree(char)".into()
    })?;
    Ok(())
}

fn ac4() -> Outcome {
    for k in 0..AC4_INSTANCES {
        let mut rng = trial_rng(CAMPAIGN_SEED ^ 0x4ac4, k);
        let n = rng.gen_range(2..=8);
        let spec = random_jordan_spec(n, &mut rng);
        let a = random_unimodular(n, 3 * n, &mut rng).conjugate(&build_jordan(&spec));
        check_identities(&a).map_err(|e| format!("instance {k}: {e}"))?;
    }
    Ok(format!(
        "{AC4_INSTANCES} Jordan-spec instances satisfy all five identities"
    ))
}

fn random_gaussian<R: Rng>(rng: &mut R, span: i64, max_den: i64) -> GaussianRational {
    let re = GaussianRational::from_ratio(rng.gen_range(-span..=span), rng.gen_range(1..=max_den));
    let im = GaussianRational::from_ratio(rng.gen_range(-span..=span), rng.gen_range(1..=max_den));
    &re + &(&GaussianRational::i() * &im)
}

fn random_monic<R: Rng>(rng: &mut R, deg: usize) -> Poly {
    let mut c: Vec<GaussianRational> = (0..deg).map(|_| random_gaussian(rng, 4, 3)).collect();
    c.push(GaussianRational::from_int(1));
    Poly::new(c)
}

fn ac5() -> Outcome {
    let mut rng = trial_rng(CAMPAIGN_SEED ^ 0x4ac5, 0);
    for k in 0..AC5_SCALAR_SAMPLES {
        let n = 1 + k % 8;
        let c = random_gaussian(&mut rng, 9, 5);
        let s = summarize(&ExactMatrix::scalar(n, &c)).map_err(|e| e.to_string())?;
        ensure(s.derogatory_index == n - 1, || {
            format!("I({c}·I_{n}) = {}", s.derogatory_index)
        })?;
    }
    for k in 0..AC5_COMPANIONS {
        let deg = 1 + k % 8;
        // Every third polynomial gets a double root so defective companions occur.
        let p = if k % 3 == 0 && deg >= 2 {
            let root = GaussianRational::from_int(rng.gen_range(-2..=2));
            &Poly::linear_power(&root, 2) * &random_monic(&mut rng, deg - 2)
        } else {
            random_monic(&mut rng, deg)
        };
        let s = summarize(&ExactMatrix::companion(&p).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(s.derogatory_index == 0, || {
            format!("I(companion({p})) = {}", s.derogatory_index)
        })?;
        ensure(s.min_poly == p, || {
            format!("min poly of companion({p}) is {}", s.min_poly)
        })?;
    }
    let grid = grid_configs(
        &CAMPAIGN_NS,
        &CAMPAIGN_RANKS,
        CAMPAIGN_TRIALS,
        CAMPAIGN_SEED,
    );
    let mut checked = 0;
    let mut defective = 0;
    for config in &grid {
        for t in 0..config.trials {
            let outcome = run_trial(config, t).map_err(|e| e.to_string())?;
            for s in [&outcome.report.summary_a, &outcome.report.summary_c] {
                let squarefree = s.min_poly.is_squarefree().map_err(|e| e.to_string())?;
                ensure((s.defectivity == 0) == squarefree, || {
                    format!(
                        "n={} trial {t}: d = {} but min poly squarefree = {squarefree}",
                        config.n, s.defectivity
                    )
                })?;
                checked += 1;
                defective += usize::from(s.defectivity > 0);
            }
        }
    }
    Ok(format!(
        "I(cI)=n−1 on {AC5_SCALAR_SAMPLES} samples; I(companion)=0 on {AC5_COMPANIONS} polynomials; d=0 ⇔ squarefree min poly on {checked} corpus matrices ({defective} defective)"
    ))
}

fn ac6_matrix(k: usize) -> ExactMatrix {
    let mut rng = trial_rng(CAMPAIGN_SEED ^ 0x4ac6, k);
    let n = 4 + k % 3;
    match k % 4 {
        0 => ExactMatrix::from_fn(n, n, |_, _| random_gaussian(&mut rng, 3, 3)),
        1 => {
            // Repeated Hermitian and skew-Hermitian eigenvalues.
            let u: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            let (c, d) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            ExactMatrix::from_fn(n, n, |i, j| {
                let diag = i64::from(i == j);
                GaussianRational::from_integers(c * diag + u[i] * u[j], d * diag + v[i] * v[j])
            })
        }
        2 => {
            let spec = random_jordan_spec(n, &mut rng);
            random_unimodular(n, n, &mut rng).conjugate(&build_jordan(&spec))
        }
        _ => {
            let pool: Vec<GaussianRational> =
                (0..2).map(|_| random_gaussian(&mut rng, 2, 2)).collect();
            let diag: Vec<GaussianRational> = (0..n)
                .map(|_| pool[rng.gen_range(0..pool.len())].clone())
                .collect();
            ExactMatrix::diag(&diag)
        }
    }
}

fn ac6() -> Outcome {
    let mut samples = 0;
    let mut nontrivial = 0;
    for k in 0..AC6_MATRICES {
        let a = ac6_matrix(k);
        let r = split_bounds(&a).map_err(|e| format!("matrix {k}: {e}"))?;
        let la = r.distinct_a as i64;
        ensure(
            la <= r.rem46_min_bound
                && r.rem46_min_bound <= r.cor44_bound
                && r.cor44_bound <= r.rem45_bound,
            || {
                format!(
                    "matrix {k}: min chain {la} {} {} {}",
                    r.rem46_min_bound, r.cor44_bound, r.rem45_bound
                )
            },
        )?;
        ensure(
            la <= r.rem46_product_bound && r.rem46_product_bound <= r.rem45_bound,
            || {
                format!(
                    "matrix {k}: product chain {la} {} {}",
                    r.rem46_product_bound, r.rem45_bound
                )
            },
        )?;
        nontrivial +=
            usize::from(r.rem46_min_bound < r.cor44_bound || r.rem46_product_bound < r.rem45_bound);

        for c in &r.alpha_candidates {
            if let ShiftParameter::Exact(alpha) = &c.alpha {
                let e = r.evaluate_shift(alpha).map_err(|e| e.to_string())?;
                ensure(
                    (e.rank_h, e.rank_s, e.min_value, e.product_value)
                        == (c.rank_h, c.rank_s, c.min_value, c.product_value),
                    || {
                        format!(
                            "matrix {k}: candidate α = {alpha} disagrees with direct evaluation"
                        )
                    },
                )?;
            }
        }

        let mut rng = trial_rng(CAMPAIGN_SEED ^ 0xa1fa, k);
        for _ in 0..AC6_ALPHA_SAMPLES {
            let mut alpha = random_gaussian(&mut rng, 8, 3);
            match rng.gen_range(0..3) {
                0 => alpha = GaussianRational::from_real(alpha.re().clone()),
                1 => {
                    alpha =
                        &GaussianRational::i() * &GaussianRational::from_real(alpha.im().clone())
                }
                _ => {}
            }
            let e = r.evaluate_shift(&alpha).map_err(|e| e.to_string())?;
            ensure(
                e.min_value >= r.rem46_min_bound && e.product_value >= r.rem46_product_bound,
                || {
                    format!("matrix {k}: α = {alpha} gives ({}, {}) below the candidate minimum ({}, {})", e.min_value, e.product_value, r.rem46_min_bound, r.rem46_product_bound)
                },
            )?;
            samples += 1;
        }
    }
    Ok(format!(
        "{AC6_MATRICES} matrices ordered exactly ({nontrivial} with a strict shift improvement); {samples} random α never beat the candidate minimum"
    ))
}

fn ac7() -> Outcome {
    let args = [
        "fuzz", "--n", "6", "--rank", "2", "--trials", "40", "--seed", "12345", "--format", "json",
    ];
    let (c1, out1, err1) = cli(&args);
    let (c2, out2, _) = cli(&args);
    ensure(c1 == 0 && c2 == 0, || {
        format!("exit codes {c1}, {c2}: {err1}")
    })?;
    ensure(out1 == out2, || "json bodies differ".into())?;
    ensure(!out1.contains("elapsed"), || {
        "elapsed time leaked into the json body".into()
    })?;
    let (_, out3, _) = cli(&[
        "fuzz", "--n", "6", "--rank", "2", "--trials", "40", "--seed", "12346", "--format", "json",
    ]);
    ensure(out3 != out1, || {
        "a different seed produced the same report".into()
    })?;
    Ok(format!(
        "two runs with seed 12345 produced byte-identical json ({} bytes)",
        out1.len()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("AC1 worked 5x5 example reproduced exactly", ac1),
        ("AC2 staircase family n=10", ac2),
        ("AC3 fuzz campaign 500 trials", ac3),
        ("AC4 eigenstructure self-consistency", ac4),
        ("AC5 characterizations", ac5),
        ("AC6 splitting bounds", ac6),
        ("AC7 deterministic fuzz json", ac7),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.2} s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail} [{secs:.2} s]");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 7 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
