use std::path::Path;
use std::process::{Command, Output};

fn prdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prdm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

/// Every CSV column except the trailing wall time.
fn data_columns(csv: &str) -> Vec<String> {
    csv.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
}

#[test]
fn selftest_passes_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = prdm(&["selftest", "--seed", "5", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap(),
    );
    assert_eq!(data_columns(&ta), data_columns(&tb));
    assert!(ta.starts_with("experiment,seed,config,invariant,metric,value,std_error,wall_time_s"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.with_extension("json")).unwrap()).unwrap();
    assert_eq!(summary["all_checks_passed"], true);
}

#[test]
fn seed_override_changes_sampled_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "noise.toml",
        "schema_version = 1\nexperiment = \"noise-robustness\"\nseed = 1\n[parameters]\nn = 2\nm = [0]\np = [0.2]\ntrials = 200\n",
    );
    let run = |seed: &str| {
        let o = prdm(&["noise-robustness", "--config", &cfg, "--seed", seed]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        data_columns(&String::from_utf8(o.stdout).unwrap())
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn unknown_parameter_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "schema_version = 1\nexperiment = \"ghse-moments\"\n[parameters]\nn = [1]\nmixedness = [2]\n",
    );
    let o = prdm(&["ghse-moments", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mixedness"));
}

#[test]
fn semantic_and_schema_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("version.toml", "schema_version = 2\nexperiment = \"efi\"\n"),
        ("wrong.toml", "schema_version = 1\nexperiment = \"money\"\n"),
        (
            "range.toml",
            "schema_version = 1\nexperiment = \"efi\"\n[parameters]\nc = 2.0\n",
        ),
        ("syntax.toml", "schema_version = = 1\n"),
    ];
    for (name, text) in cases {
        let cfg = write(dir.path(), name, text);
        let o = prdm(&["efi", "--config", &cfg]);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = prdm(&["efi", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn money_key_and_policy_names_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "money.toml",
        "schema_version = 1\nexperiment = \"money\"\n[parameters]\nmaster_key = \"zz\"\n",
    );
    let o = prdm(&["money", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("master_key"));
    let cfg = write(
        dir.path(),
        "mem.toml",
        "schema_version = 1\nexperiment = \"memoryless\"\n[parameters]\npolicies = [\"oracle\"]\n",
    );
    let o = prdm(&["memoryless", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle"));
}

#[test]
fn violated_completeness_assumption_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "money.toml",
        "schema_version = 1\nexperiment = \"money\"\n[parameters]\n\
         completeness_p = 0.5\ncompleteness_notes = [16]\ncompleteness_trials = 20\n\
         attack_notes = 8\nvictims = 8\nattack_trials = 5\nclone_trials = 5\n",
    );
    let out = dir.path().join("money.csv");
    let o = prdm(&["money", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.exists() && out.with_extension("json").exists());
}

#[test]
fn config_output_path_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("moments.csv");
    let cfg = write(
        dir.path(),
        "g.toml",
        &format!(
            "schema_version = 1\nexperiment = \"ghse-moments\"\noutput = {:?}\n[parameters]\nn = [1]\nm = [1, 2]\nt = [2]\n",
            out.to_str().unwrap()
        ),
    );
    let o = prdm(&["ghse-moments", "--config", &cfg]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
    assert!(o.stdout.is_empty());
}

#[test]
fn shipped_configs_match_the_defaults() {
    use prdm_cli::config::{load, Parameters, DEFAULT_SEED};
    use prdm_cli::experiments::{efi, ghse, memoryless, money, noise, resources, selftest};

    fn same<P: Parameters>(name: &str) {
        let path = Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../configs")
            .join(format!("{name}.toml"));
        let cfg = load::<P>(Some(&path), name).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(
            serde_json::to_value(&cfg.parameters).unwrap(),
            serde_json::to_value(P::default()).unwrap(),
            "{name}"
        );
    }
    same::<ghse::GhseMomentsParams>("ghse-moments");
    same::<resources::ResourcesParams>("resources");
    same::<noise::NoiseParams>("noise-robustness");
    same::<efi::EfiParams>("efi");
    same::<money::MoneyParams>("money");
    same::<memoryless::MemorylessParams>("memoryless");
    same::<selftest::SelftestParams>("selftest");
}
