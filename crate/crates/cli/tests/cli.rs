use std::path::PathBuf;
use std::process::{Command, Output};

fn beambroad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beambroad"))
        .args(args)
        .env_remove("BEAM_SEED")
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    root.join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("beambroad-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn info_reports_solution_space() {
    let o = beambroad(&["info", "--config", &config("array40.cfg")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("groups: 9"), "{text}");
    assert!(text.contains("free dimensions: 8, space: 64^8"), "{text}");
    assert!(text.contains("grid size: 256"), "{text}");
    assert!(text.contains("beta: "), "{text}");

    let text = stdout(&beambroad(&["info", "--config", &config("array80.cfg")]));
    assert!(text.contains("free dimensions: 31, space: 64^31"), "{text}");

    let text = stdout(&beambroad(&["info", "--config", &config("toy.cfg")]));
    assert!(text.contains("free dimensions: 0"), "{text}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(beambroad(&["run", "--algo", "bogus"]).status.code(), Some(2));
    assert_eq!(beambroad(&["run", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(beambroad(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let o = beambroad(&["info", "--config", "/nonexistent/beam.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn run_all_prints_three_rows() {
    let out = scratch("all");
    let o = beambroad(&["run", "--config", &config("toy.cfg"), "--algo", "all", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for algo in ["sa ", "ga ", "pso "] {
        assert!(text.lines().any(|l| l.starts_with(algo)), "{text}");
    }
    assert!(out.join("summary.csv").exists());
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn single_execution_gives_one_record() {
    let out = scratch("one");
    let o = beambroad(&[
        "run", "--config", &config("toy.cfg"), "--algo", "sa", "--executions", "1", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("records: 1"));
    let curves = std::fs::read_to_string(out.join("curves.csv")).unwrap();
    // no free groups: one evaluation of the all-zero solution
    assert_eq!(curves.lines().count(), 2);
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn seed_override_from_environment() {
    let out = scratch("seed");
    let o = Command::new(env!("CARGO_BIN_EXE_beambroad"))
        .args(["run", "--config", &config("toy.cfg"), "--algo", "sa", "--executions", "1", "--out"])
        .arg(&out)
        .env("BEAM_SEED", "41")
        .output()
        .unwrap();
    assert!(o.status.success());
    let curves = std::fs::read_to_string(out.join("curves.csv")).unwrap();
    assert!(curves.lines().nth(1).unwrap().starts_with("sa,0,41,"), "{curves}");
    let _ = std::fs::remove_dir_all(&out);

    let o = Command::new(env!("CARGO_BIN_EXE_beambroad"))
        .args(["info"])
        .env("BEAM_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
