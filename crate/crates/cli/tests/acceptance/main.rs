//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod oracle;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use microrisk::synthetic::SyntheticWorkload;
use microrisk::*;
use microrisk_cli::commands::ComputeArgs;
use microrisk_cli::config_file::ConfigFile;
use microrisk_cli::report_json::ReportDocument;
use microrisk_cli::{cmd_compute, input::load_dataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($fmt)+));
        }
    };
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn table1() -> (Dataset, RiskConfig) {
    let ds = load_dataset(&data_dir().join("table1.csv")).unwrap();
    let cfg = microrisk_cli::config_file::load_config(&data_dir().join("table2.json")).unwrap();
    (ds, cfg)
}

fn relative_error(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
    }
}

fn exact_options() -> AssessOptions {
    AssessOptions {
        top_contributions: 0,
        ..Default::default()
    }
}

/// Worked example: likelihood 0.084 and consequence 1.63 for the fourth record.
fn worked_example() -> Check {
    let start = Instant::now();
    let (ds, cfg) = table1();
    validate_config(&ds, &cfg).map_err(|e| e.to_string())?;
    let ks = KnownSet::from_indices(&[0, 1, 2], &cfg.public_probs());
    let table = build_count_table(&ds, &ks);
    let r4 = ds.record(3);
    let l = likelihood(&r4, &ks, &table).map_err(|e| e.to_string())?;
    let c = consequence(&r4, &ks, &cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!((l - 0.084).abs() <= 1e-12, "likelihood {l} != 0.084");
    ensure!((c - 1.63).abs() <= 1e-12, "consequence {c} != 1.63");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("L = {l}, C = {c}, {elapsed:?}"))
}

/// Pruned enumeration equals the brute-force filter on random instances.
fn pruning_oracle() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let cases = 400;
    for case in 0..cases {
        let m = rng.random_range(1..=12);
        let probs: Vec<f64> = (0..m)
            .map(|_| match rng.random_range(0..8) {
                0 => 1.0,
                1 => 0.0,
                2 => rng.random_range(0.9..=1.0),
                _ => rng.random_range(0.0..=1.0),
            })
            .collect();
        let epsilon = match rng.random_range(0..6) {
            0 => 0.0,
            1 => rng.random_range(0.0..1e-3),
            _ => rng.random_range(0.0..0.6),
        };
        let cfg = RiskConfig::new(
            probs
                .iter()
                .enumerate()
                .map(|(j, &p)| AttributeConfig::new(format!("A{j}"), p, 0.0))
                .collect(),
            2.0,
            epsilon,
        );
        let pruned: Vec<u64> = enumerate_known_sets(&cfg).iter().map(|s| s.mask()).collect();
        let brute: Vec<u64> = brute_force_known_sets(&cfg)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|s| s.mask())
            .collect();
        ensure!(
            pruned == brute,
            "case {case}: m={m} eps={epsilon}: {} pruned vs {} brute-force sets",
            pruned.len(),
            brute.len()
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("{cases} instances identical, {elapsed:?}"))
}

fn random_instances() -> Vec<oracle::Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    (0..60)
        .map(|_| oracle::random_instance(&mut rng, 8, 200))
        .collect()
}

/// With no pruning the engine matches the straight-line oracle.
fn exact_mode_oracle(instances: &[oracle::Instance]) -> Check {
    let mut worst = 0.0f64;
    let mut records = 0;
    for (k, inst) in instances.iter().enumerate() {
        let ds = inst.dataset();
        let got = assess_dataset(&ds, &inst.config(0.0), &exact_options())
            .map_err(|e| format!("instance {k}: {e}"))?;
        let want = inst.risks(0.0);
        for (r, &w) in got.records.iter().zip(&want) {
            let err = relative_error(r.risk, w);
            ensure!(
                err <= 1e-9,
                "instance {k} record {}: {} vs oracle {w}",
                r.record_index,
                r.risk
            );
            worst = worst.max(err);
            records += 1;
        }
    }
    Ok(format!(
        "{} instances, {records} records, max relative error {worst:e}",
        instances.len()
    ))
}

/// Pruning only ever removes non-negative terms, each below epsilon * alpha * m.
fn pruning_error_bound(instances: &[oracle::Instance]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut checked = 0;
    for (k, inst) in instances.iter().enumerate() {
        let epsilon = rng.random_range(0.0..0.5);
        let ds = inst.dataset();
        let exact = assess_dataset(&ds, &inst.config(0.0), &exact_options())
            .map_err(|e| e.to_string())?;
        let pruned = assess_dataset(&ds, &inst.config(epsilon), &exact_options())
            .map_err(|e| e.to_string())?;
        let m = inst.m();
        let dropped = (1usize << m) - pruned.known_sets.len();
        let bound = dropped as f64 * epsilon * inst.alpha * m as f64;
        // the pruned engine also agrees with the oracle at the same epsilon
        let oracle_pruned = inst.risks(epsilon);
        for ((e, p), &o) in exact.records.iter().zip(&pruned.records).zip(&oracle_pruned) {
            let gap = e.risk - p.risk;
            ensure!(gap >= 0.0, "instance {k} record {}: gap {gap} < 0", e.record_index);
            ensure!(
                gap <= bound,
                "instance {k} record {}: gap {gap} > bound {bound}",
                e.record_index
            );
            ensure!(relative_error(p.risk, o) <= 1e-9, "instance {k}: pruned risk {} vs oracle {o}", p.risk);
            checked += 1;
        }
    }
    Ok(format!("{checked} records within bound"))
}

/// Structural invariants of counts, likelihood, probabilities and scaling.
fn invariant_suite(instances: &[oracle::Instance]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for (k, inst) in instances.iter().enumerate().take(30) {
        let ds = inst.dataset();
        let cfg = inst.config(0.0);
        let sets = enumerate_known_sets(&cfg);
        let tables = build_all_count_tables(&ds, &sets, Execution::Sequential)
            .map_err(|e| e.to_string())?;
        for t in &tables {
            ensure!(t.total() == ds.n_records(), "instance {k}: table sums to {}", t.total());
            ensure!(t.min_count() >= Some(1), "instance {k}: empty class");
            for r in ds.records() {
                let l = likelihood(&r, t.known_set(), t).map_err(|e| e.to_string())?;
                ensure!((0.0..=1.0).contains(&l), "instance {k}: likelihood {l}");
            }
        }
        for small in &tables {
            for large in tables
                .iter()
                .filter(|t| small.known_set().is_subset_of(t.known_set()))
            {
                ensure!(
                    small.known_set().pk() >= large.known_set().pk(),
                    "instance {k}: pk not monotone"
                );
                for r in ds.records() {
                    let (cs, cl) = (small.count_for(&r).unwrap(), large.count_for(&r).unwrap());
                    ensure!(cl <= cs, "instance {k}: refinement grew a class {cs} -> {cl}");
                }
            }
        }

        // alpha linearity: powers of two scale every term exactly
        let base = assess_dataset(&ds, &cfg, &exact_options()).map_err(|e| e.to_string())?;
        let factor = 2f64.powi(rng.random_range(1..8));
        let mut scaled_cfg = cfg.clone();
        scaled_cfg.alpha *= factor;
        let scaled = assess_dataset(&ds, &scaled_cfg, &exact_options()).map_err(|e| e.to_string())?;
        for (a, b) in base.records.iter().zip(&scaled.records) {
            ensure!(a.risk * factor == b.risk, "instance {k}: alpha x{factor} not exact");
        }
        let factor = rng.random_range(0.5..50.0);
        scaled_cfg.alpha = cfg.alpha * factor;
        if scaled_cfg.alpha > 1.0 {
            let scaled =
                assess_dataset(&ds, &scaled_cfg, &exact_options()).map_err(|e| e.to_string())?;
            for (a, b) in base.records.iter().zip(&scaled.records) {
                ensure!(
                    relative_error(b.risk, a.risk * factor) <= 1e-12,
                    "instance {k}: alpha x{factor} off by more than rounding"
                );
            }
        }

        // duplicating a row never raises that row's likelihood
        let i = rng.random_range(0..inst.rows.len());
        let mut dup = inst.clone();
        dup.rows.push(inst.rows[i].clone());
        let ds2 = dup.dataset();
        for ks in &sets {
            let before = likelihood(&ds.record(i), ks, &build_count_table(&ds, ks)).unwrap();
            let after = likelihood(&ds2.record(i), ks, &build_count_table(&ds2, ks)).unwrap();
            ensure!(after <= before, "instance {k}: duplicate raised likelihood");
        }
    }
    Ok("counts, likelihood range, refinement, pk monotonicity, alpha linearity, duplicates".into())
}

fn write_workload(dir: &Path, workload: &SyntheticWorkload) -> (PathBuf, PathBuf) {
    let data = dir.join("data.csv");
    let mut w = std::io::BufWriter::new(fs::File::create(&data).unwrap());
    writeln!(w, "{}", workload.header().join(",")).unwrap();
    for row in workload.rows() {
        writeln!(w, "{}", row.join(",")).unwrap();
    }
    w.flush().unwrap();
    let config = dir.join("config.json");
    fs::write(
        &config,
        serde_json::to_string_pretty(&ConfigFile::from(&workload.config())).unwrap(),
    )
    .unwrap();
    (data, config)
}

fn compute_args(data: &Path, config: &Path, out: PathBuf, jobs: usize) -> ComputeArgs {
    ComputeArgs {
        data: data.to_path_buf(),
        config: config.to_path_buf(),
        out,
        epsilon: None,
        alpha: None,
        threshold: None,
        scores: None,
        brute_force: false,
        jobs: Some(jobs),
        top_contributions: 10,
    }
}

/// Full-width synthetic run: 1,000,000 records x 27 attributes.
fn scale_check() -> Check {
    let workload = SyntheticWorkload::table3_pattern(1_000_000, 27);
    let config = workload.config();

    let start = Instant::now();
    let sets = enumerate_known_sets(&config);
    let enum_time = start.elapsed();
    let probs = config.public_probs();
    let public: Vec<usize> = (0..probs.len()).filter(|&j| probs[j] > config.epsilon).collect();
    ensure!(
        probs.iter().all(|&p| p > config.epsilon || p <= 0.005),
        "unexpected probability layout"
    );
    // every set containing a rare attribute has pk <= 0.005 < epsilon, so the
    // retained sets are exactly the qualifying subsets of the public ones
    let analytic = (0u64..1 << public.len())
        .filter(|bits| {
            let pk: f64 = public
                .iter()
                .enumerate()
                .filter(|(b, _)| bits >> b & 1 == 1)
                .fold(1.0, |acc, (_, &j)| acc * probs[j]);
            pk > config.epsilon
        })
        .count();
    ensure!(sets.len() == analytic, "{} retained vs analytic {analytic}", sets.len());
    let mut truncated = config.clone();
    truncated.attributes.truncate(14);
    let t_pruned = enumerate_known_sets(&truncated);
    let t_brute = brute_force_known_sets(&truncated).map_err(|e| e.to_string())?;
    ensure!(t_pruned == t_brute, "14-attribute truncation disagrees with brute force");
    ensure!(t_pruned.len() == sets.len(), "truncation changed the retained count");
    ensure!(enum_time < Duration::from_millis(100), "enumeration took {enum_time:?}");

    let dir = tempfile::tempdir().unwrap();
    let (data, config_path) = write_workload(dir.path(), &workload);
    let mut args = compute_args(&data, &config_path, dir.path().join("report.json"), 8);
    let scores = dir.path().join("scores.csv");
    args.scores = Some(scores.clone());
    let start = Instant::now();
    let summary = cmd_compute(&args, &mut std::io::sink()).map_err(|e| e.to_string())?;
    let run_time = start.elapsed();
    ensure!(run_time < Duration::from_secs(600), "end-to-end took {run_time:?}");
    ensure!(summary.n_records == 1_000_000, "read {} records", summary.n_records);

    let report = ReportDocument::from_json(&fs::read_to_string(&args.out).unwrap())
        .map_err(|e| e.to_string())?;
    let threshold = report.high_risk_threshold.0;
    let mut n = 0usize;
    let mut above = 0usize;
    for line in fs::read_to_string(&scores).unwrap().lines().skip(1) {
        let (_, risk) = line.split_once(',').ok_or("malformed scores line")?;
        let risk: f64 = risk.parse().map_err(|_| format!("bad risk {risk}"))?;
        n += 1;
        if risk > threshold {
            above += 1;
        }
    }
    let recount_percent = 100.0 * above as f64 / n as f64;
    ensure!(n == report.n_records, "scores has {n} rows");
    ensure!(above == report.high_risk_count, "recount {above} vs report {}", report.high_risk_count);
    ensure!(
        recount_percent == report.high_risk_percent.0,
        "recount {recount_percent}% vs report {}%",
        report.high_risk_percent.0
    );
    Ok(format!(
        "{} retained sets (enumerated in {enum_time:?}), end-to-end {run_time:.1?}, high risk {above} = {recount_percent:.2}%",
        sets.len()
    ))
}

/// `--jobs 1` and `--jobs 8` write byte-identical reports.
fn determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let workload = SyntheticWorkload::many_public(20_000, 99);
    let sub = dir.path().join("synthetic");
    fs::create_dir(&sub).unwrap();
    let (data, config) = write_workload(&sub, &workload);
    let inputs = [
        (data_dir().join("table1.csv"), data_dir().join("table2.json")),
        (data, config),
    ];
    for (i, (data, config)) in inputs.iter().enumerate() {
        let mut outputs = Vec::new();
        for jobs in [1, 8] {
            let out = dir.path().join(format!("report-{i}-{jobs}.json"));
            let mut args = compute_args(data, config, out.clone(), jobs);
            args.scores = Some(dir.path().join(format!("scores-{i}-{jobs}.csv")));
            cmd_compute(&args, &mut std::io::sink()).map_err(|e| e.to_string())?;
            outputs.push((fs::read(&out).unwrap(), fs::read(args.scores.unwrap()).unwrap()));
        }
        ensure!(outputs[0].0 == outputs[1].0, "input {i}: report JSON differs");
        ensure!(outputs[0].1 == outputs[1].1, "input {i}: scores CSV differs");
    }
    Ok("table 1 and 20,000-row synthetic inputs byte-identical".into())
}

fn main() -> ExitCode {
    let instances = random_instances();
    let criteria: Vec<Criterion> = vec![
        ("1 worked example", Box::new(worked_example)),
        ("2 pruning oracle equivalence", Box::new(pruning_oracle)),
        ("3 exact-mode oracle", Box::new(|| exact_mode_oracle(&instances))),
        ("4 pruning error bound", Box::new(|| pruning_error_bound(&instances))),
        ("5 invariant suite", Box::new(|| invariant_suite(&instances))),
        ("6 scale check", Box::new(scale_check)),
        ("7 determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
