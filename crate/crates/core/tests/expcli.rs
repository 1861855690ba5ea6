use std::fs;
use std::path::Path;

use gridkrig::expcli::cli::run_cli;
use gridkrig::expcli::{
    emit_results, load_config, parse_results_csv, run_preset, Empirical, ExperimentConfig, Preset, ResultRow,
    ResultSet, CSV_HEADER,
};
use gridkrig::spectral::{Family, Profile};
use gridkrig::Error;
use proptest::prelude::*;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(
        std::iter::once("gridkrig").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

const SMALL_TABLE: &str = "\
# a small misspecification table
preset = MisspecTable
theta = 1
theta_prime = 0.5, 1, 4
sample_sizes = 11, 21
replicates = 6
seed = 42
";

#[test]
fn table_config_parses() {
    let c =
        ExperimentConfig::parse("preset=misspec_table\ntheta=0.1\ntheta_prime=0.1,1,10\nsample_sizes=101,251,401\n")
            .unwrap();
    assert_eq!(c.preset, Preset::MisspecTable);
    assert_eq!(c.theta_prime, vec![0.1, 1.0, 10.0]);
    assert_eq!(c.sample_sizes, vec![101, 251, 401]);
    assert_eq!((c.replicates, c.seed, c.profile), (20, 0, Profile::Consistent));
    assert_eq!(c.output_dir, Path::new("results"));
}

#[test]
fn config_errors_name_the_problem() {
    let e = ExperimentConfig::parse("preset=misspec_table\nsample_sizes=101\n").unwrap_err();
    assert!(matches!(&e, Error::Validation { field, .. } if field == "theta"), "{e}");
    let e = ExperimentConfig::parse("preset=misspec_table\ntheta=1\ntheta=2\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 3, .. }));
    let e = ExperimentConfig::parse("preset=theory_curve\ntheta=1,x\nsample_sizes=11\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 2, .. }));
    let e = ExperimentConfig::parse("preset=theory_curve\ntheta=-1\nsample_sizes=11\n").unwrap_err();
    assert!(matches!(&e, Error::Validation { field, .. } if field == "theta"));
    let e = ExperimentConfig::parse("preset=matched_sweep\ntheta=1\nsample_sizes=11\nreplicates=0\n").unwrap_err();
    assert!(matches!(&e, Error::Validation { field, .. } if field == "replicates"));
    let e = ExperimentConfig::parse("preset=matched_sweep\ntheta=1\nsample_sizes=1\n").unwrap_err();
    assert!(matches!(&e, Error::Validation { field, .. } if field == "sample_sizes"));
    let missing = load_config(Path::new("/nonexistent/exp.cfg")).unwrap_err();
    assert!(matches!(missing, Error::Io { .. }));
}

#[test]
fn empty_result_set_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let c = ExperimentConfig::parse("preset=theory_curve\ntheta=1\nsample_sizes=11\n").unwrap();
    emit_results(&ResultSet::empty(&c), dir.path()).unwrap();
    let csv = fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(csv, format!("{CSV_HEADER}\n"));
    let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert!(manifest.contains(&c.hash()));
    assert!(manifest.contains("artifact=results.csv"));
}

#[test]
fn table_run_is_complete_and_deterministic() {
    let c = ExperimentConfig::parse(SMALL_TABLE).unwrap();
    let first = run_preset(&c).unwrap();
    assert_eq!(first.rows.len(), 6);
    for r in &first.rows {
        let e = r.empirical.unwrap();
        assert!(e.mean > 0.0 && e.ci_low <= e.mean && e.mean <= e.ci_high);
        assert!(r.theory_error.unwrap() > 0.0);
        assert_eq!(r.replicates, 6);
        assert_eq!(r.p_value.is_none(), r.theta_prime == r.theta);
    }
    // Empirical means fall as the grid is refined.
    for tp in [0.5, 1.0, 4.0] {
        let m: Vec<f64> = first
            .rows
            .iter()
            .filter(|r| r.theta_prime == tp)
            .map(|r| r.empirical.unwrap().mean)
            .collect();
        assert!(m[1] < m[0]);
    }
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    emit_results(&first, a.path()).unwrap();
    emit_results(&run_preset(&c).unwrap(), b.path()).unwrap();
    assert_eq!(tree(a.path()), tree(b.path()));
    let csv = fs::read_to_string(a.path().join("results.csv")).unwrap();
    assert_eq!(parse_results_csv(&csv).unwrap(), first.rows);
    let curve = fs::read_to_string(a.path().join("curve_exponential_theta1_exponential_thetap4_theory.dat")).unwrap();
    assert!(curve.starts_with("# S theory_error\n11 "));
    assert_eq!(curve.lines().count(), 3);
}

#[test]
fn wrong_family_rows_have_no_theory() {
    let c = ExperimentConfig::parse("preset=wrong_family\nsample_sizes=11\nreplicates=5\n").unwrap();
    let set = run_preset(&c).unwrap();
    let used: Vec<Family> = set.rows.iter().map(|r| r.family_used).collect();
    assert_eq!(used, vec![Family::Matern32, Family::Matern52, Family::Exponential]);
    for r in &set.rows {
        assert_eq!(r.theory_error.is_some(), r.family_used == Family::Matern32);
        assert!(r.empirical.unwrap().mean > 0.0);
    }
}

#[test]
fn theory_curve_skips_simulation() {
    let c = ExperimentConfig::parse("preset=theory_curve\ntheta=1\nsample_sizes=11,21,41\n").unwrap();
    let set = run_preset(&c).unwrap();
    assert_eq!(set.rows.len(), 3);
    assert!(set
        .rows
        .iter()
        .all(|r| r.empirical.is_none() && r.replicates == 0 && r.p_value.is_none()));
    assert_eq!(set.curves.len(), 1);
}

#[test]
fn cli_commands_and_exit_codes() {
    let (code, out, _) = cli(&["presets"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);

    let (code, out, _) = cli(&[
        "theory",
        "--family",
        "exp",
        "--theta",
        "1",
        "--theta-prime",
        "1",
        "--h",
        "0.1",
    ]);
    assert_eq!(code, 0);
    let v: f64 = out.trim().parse().unwrap();
    assert!(v > 0.0);

    let (code, _, err) = cli(&["theory", "--family", "cauchy", "--theta", "1", "--h", "0.1"]);
    assert_eq!(code, 1, "{err}");
    let (code, _, _) = cli(&["theory", "--family", "exp", "--theta", "-1", "--h", "0.1"]);
    assert_eq!(code, 1);
    let (code, _, _) = cli(&["frobnicate"]);
    assert_eq!(code, 1);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    fs::write(&cfg, "preset=matched_sweep\ntheta=1\nsample_sizes=11\nreplicates=50\n").unwrap();
    let out_dir = dir.path().join("out");
    let (code, _, err) = cli(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--replicates",
        "3",
        "--seed",
        "9",
    ]);
    assert_eq!(code, 0, "{err}");
    let rows = parse_results_csv(&fs::read_to_string(out_dir.join("results.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].replicates, 3);
    assert!(fs::read_to_string(out_dir.join("manifest.txt"))
        .unwrap()
        .contains("seed=9"));

    fs::write(&cfg, "preset=matched_sweep\nsample_sizes=11\n").unwrap();
    let (code, _, err) = cli(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("theta"), "{err}");
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), 1e-300f64..1e300]
}

prop_compose! {
    fn arb_row()(
        ft in 0usize..4, fu in 0usize..4,
        theta in finite(), theta_prime in finite(), step in finite(),
        size in 2usize..100_000, replicates in 0usize..1000,
        emp in prop::option::of((finite(), finite(), finite(), finite())),
        theory in prop::option::of(finite()),
        verbatim in any::<bool>(),
        p in prop::option::of(0.0f64..=1.0),
    ) -> ResultRow {
        ResultRow {
            family_true: Family::ALL[ft],
            theta,
            family_used: Family::ALL[fu],
            theta_prime,
            size,
            step,
            replicates,
            empirical: emp.map(|(mean, std, ci_low, ci_high)| Empirical { mean, std, ci_low, ci_high }),
            theory_error: theory,
            theory_profile: if verbatim { Profile::PaperVerbatim } else { Profile::Consistent },
            p_value: p,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn csv_round_trip_is_lossless(rows in prop::collection::vec(arb_row(), 0..8)) {
        let dir = tempfile::tempdir().unwrap();
        let c = ExperimentConfig::parse("preset=theory_curve\ntheta=1\nsample_sizes=11\n").unwrap();
        let mut set = ResultSet::empty(&c);
        set.rows = rows.clone();
        emit_results(&set, dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join("results.csv")).unwrap();
        prop_assert!(text.lines().all(|l| l.split(',').count() == 14));
        prop_assert_eq!(parse_results_csv(&text).unwrap(), rows);
    }
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut presets = Vec::new();
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        presets.push(
            load_config(&path)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
                .preset,
        );
    }
    presets.sort_by_key(|p| p.name());
    assert_eq!(
        presets,
        vec![
            Preset::KernelFamilies,
            Preset::MatchedSweep,
            Preset::MisspecTable,
            Preset::WrongFamily
        ]
    );
}
