use std::path::PathBuf;
use std::process::{Command, Output};

use arlab::spec::ClassSpec;
use arlab::{cot_trace, BitString};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn arlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arlab")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Writes a sample labeled by class member `target` to a scratch file.
fn sample_file(spec: &str, target: usize, prompts: &[&str], t: usize, tag: &str) -> PathBuf {
    let spec = ClassSpec::parse(&std::fs::read_to_string(data(spec)).unwrap()).unwrap();
    let class = spec.build().unwrap();
    let g = class.get(target).unwrap();
    let mut text = String::from("prompt,trace\n");
    for p in prompts {
        let x: BitString = p.parse().unwrap();
        let tr = cot_trace(g, &x, t).unwrap();
        text.push_str(&format!("\"{x}\",{tr}\n"));
    }
    let path = std::env::temp_dir().join(format!("arlab-cli-{tag}-{}.csv", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn dims_vc_e2e_row() {
    let o = arlab(&["dims", &data("shifted.json"), "--domain", "chain:8", "--T", "4", "--which", "vc_e2e"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("dimension,value,wall_time_ms"));
    assert!(lines.next().unwrap().starts_with("vc_e2e,3,"));
    assert_eq!(lines.next(), None);
}

#[test]
fn dims_all_on_constant_class_is_zero() {
    let o = arlab(&["dims", &data("constant.json"), "--domain", "chain:4", "--T", "2", "--which", "all"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    for r in rows {
        assert_eq!(r.split(',').nth(1), Some("0"), "{r}");
    }
}

#[test]
fn dims_explicit_domain_and_sorted_rows() {
    let o = arlab(&["dims", &data("shifted.json"), "--domain", "0,00,000", "--which", "vc_e2e,vc_base"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let names: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(',').next().unwrap().to_string()).collect();
    assert_eq!(names, ["vc_base", "vc_e2e"]);
}

#[test]
fn dims_exit_codes() {
    let o = arlab(&["dims", &data("malformed.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("smax") || stderr(&o).contains("s_max"), "{}", stderr(&o));
    let o = arlab(&["dims", &data("capped.json")]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = arlab(&["dims", &data("shifted.json"), "--domain", "chain:x"]);
    assert_eq!(o.status.code(), Some(2));
    let o = arlab(&["dims", &data("shifted.json"), "--which", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn taxonomy_sandwich() {
    let o = arlab(&["taxonomy", "--rate", "1,2,2,3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("T,r_T,vc_e2e_restricted,lower_ok,upper_ok"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with(",true,true")), "{out}");
}

#[test]
fn taxonomy_constant_rate() {
    let o = arlab(&["taxonomy", "--rate", "1,1,1,1,1,1"]);
    assert!(o.status.success());
    for r in stdout(&o).lines().skip(1) {
        assert_eq!(r.split(',').nth(2), Some("1"), "{r}");
    }
}

#[test]
fn taxonomy_invalid_rate() {
    assert_eq!(arlab(&["taxonomy", "--rate", "2,1"]).status.code(), Some(4));
    assert_eq!(arlab(&["taxonomy", "--rate", "1,3"]).status.code(), Some(4));
    assert_eq!(arlab(&["taxonomy", "--rate", "1,x"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let o = arlab(&["verify", "--suite", "sauer", "--seed", "7"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("1000 trees"));
    assert_eq!(arlab(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let a = arlab(&["verify", "--suite", "compression", "--seed", "3"]);
    let b = arlab(&["--jobs", "2", "verify", "--suite", "compression", "--seed", "3"]);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn learn_linear_stable_kernel_report() {
    let path = sample_file("linear.json", 17, &["", "0", "1", "01", "10", "11", "0110", "111"], 3, "lin");
    let o = arlab(&["learn", &data("linear.json"), "--sample", path.to_str().unwrap(), "--learner", "linear_stable"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    let kernel: usize = err
        .split_whitespace()
        .find_map(|w| w.strip_prefix("kernel="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(kernel <= 3, "{err}");
    let out = stdout(&o);
    assert!(out.starts_with("prompt,trace,predicted,correct\n"));
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")), "{out}");
}

#[test]
fn learn_cot_compress_and_erm() {
    let prompts = ["0", "00", "000", "0000", "00000", "000000"];
    let path = sample_file("shifted.json", 45, &prompts, 4, "fn");
    for learner in ["cot_compress", "erm_e2e", "erm_cot"] {
        let o = arlab(&["learn", &data("shifted.json"), "--sample", path.to_str().unwrap(), "--learner", learner, "--seed", "5"]);
        assert!(o.status.success(), "{learner}: {}", stderr(&o));
        assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",true")), "{learner}");
    }
}

#[test]
fn learn_not_realizable() {
    for learner in ["cot_compress", "erm_e2e", "linear_stable"] {
        let spec = if learner == "linear_stable" { "linear.json" } else { "shifted.json" };
        let o = arlab(&["learn", &data(spec), "--sample", &data("contradictory.csv"), "--learner", learner]);
        assert_eq!(o.status.code(), Some(5), "{learner}: {}", stderr(&o));
    }
}

#[test]
fn sweep_rows_and_svg() {
    let svg = std::env::temp_dir().join(format!("arlab-cli-sweep-{}.svg", std::process::id()));
    let o = arlab(&[
        "sweep",
        &data("shifted.json"),
        "--domain",
        "chain:8",
        "--Ts",
        "1,2,4,8",
        "--learners",
        "cot",
        "--trials",
        "20",
        "--eps",
        "0.2",
        "--delta",
        "0.2",
        "--seed",
        "1",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("T,mode,learner,m_hat,failure_rate"));
    let ts: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ts, ["1", "2", "4", "8"]);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
}

#[test]
fn sweep_parity_even_ts_need_no_data() {
    let spec = std::env::temp_dir().join(format!("arlab-cli-parity-{}.json", std::process::id()));
    std::fs::write(&spec, r#"{"type": "parity", "k_max": 6, "horizon": 20}"#).unwrap();
    let domain = (1..=6).map(|k| arlab::classes::parity::q_prompt(k).to_string()).collect::<Vec<_>>().join(",");
    let o = arlab(&[
        "sweep",
        spec.to_str().unwrap(),
        "--domain",
        &domain,
        "--Ts",
        "2,4",
        "--learners",
        "e2e",
        "--trials",
        "20",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for l in stdout(&o).lines().skip(1) {
        assert_eq!(l.split(',').nth(3), Some("0"), "{l}");
    }
}
