use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecs-teleport"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_after(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no line starting with {key:?} in\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn fidelity_report() {
    let o = run(&[
        "fidelity", "--alpha-sq", "1", "--theta", "1.5707963267948966", "--phi",
        "3.141592653589793", "--omega", "0", "--xi", "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!((value_after(&text, "sum P") - 1.0).abs() < 1e-12);
    assert!((value_after(&text, "concurrence") - 1.0).abs() < 1e-12);
    let f = value_after(&text, "F_av ");
    assert!((0.0..=1.0).contains(&f));
}

#[test]
fn fidelity_json_parses() {
    let o = run(&[
        "fidelity", "--alpha-sq", "0.7", "--theta", "1", "--phi", "2", "--omega", "0.3",
        "--xi", "4", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let _: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
}

#[test]
fn usage_and_domain_errors_exit_2() {
    let missing = run(&["fidelity", "--alpha-sq", "1"]);
    assert_eq!(missing.status.code(), Some(2));

    let negative = run(&["concurrence", "--alpha-sq", "-1", "--theta", "1", "--phi", "0"]);
    assert_eq!(negative.status.code(), Some(2));

    let theta = run(&["concurrence", "--alpha-sq", "1", "--theta", "4", "--phi", "0"]);
    assert_eq!(theta.status.code(), Some(2));
}

#[test]
fn gap_panel_has_expected_peak() {
    let o = run(&["fig2", "--panel", "d"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha_sq,f1,f2,d"));
    let (a, d) = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], v[3])
        })
        .fold((0.0, f64::MIN), |best, p| if p.1 > best.1 { p } else { best });
    assert!((d - 0.176).abs() < 0.003, "peak {d}");
    assert!((a - 0.6).abs() < 0.05, "at {a}");
}

#[test]
fn surface_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("s{i}.csv"))).collect();
    for p in &paths {
        let o = run(&[
            "sweep", "--alpha-sq", "0.5", "--grid-theta", "7", "--grid-phi", "9", "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("alpha_sq,theta,phi,f_min,omega_star,xi_star,concurrence\n"));
    assert_eq!(text.lines().count(), 1 + 7 * 9);
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("gap.csv");
    let o = run(&["gap", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_passes_and_is_reproducible() {
    let args = ["verify", "--seed", "7", "--count", "20"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn verify_reports_small_cutoff() {
    let o = run(&["verify", "--count", "5", "--alpha-sq", "2", "--cutoff", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let all = format!("{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(all.contains("cutoff"), "{all}");
}
