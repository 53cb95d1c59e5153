use std::fs;
use std::process::{Command, Output};

fn mhmw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhmw")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const DECOUPLED: &[&str] = &["--mode", "decoupled", "--varpi", "2", "--phi-over-2pi", "0.3"];

fn with(extra: &[&'static str]) -> Vec<&'static str> {
    DECOUPLED.iter().chain(extra).copied().collect()
}

#[test]
fn landau_spectrum_csv_has_header_and_rows() {
    let mut args = vec!["landau-spectrum"];
    args.extend(with(&["--l-min", "1", "--l-max", "1", "--n-max", "0", "--s", "+1"]));
    let o = mhmw(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# phi-over-2pi = 0.3\n"));
    assert!(text.contains("# command = landau-spectrum\n"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["s,l,n,gamma,energy,method,y0", "1,1,0,0.7,1.4,asymptotic,0.0"]);
}

#[test]
fn output_is_deterministic_across_jobs() {
    let base = with(&["--R", "1.3", "--system", "ring", "--sweep-var", "phi", "--from", "-1", "--to", "1", "--steps", "41"]);
    let run = |jobs: &'static str| {
        let mut a = vec!["sweep"];
        a.extend(base.iter().copied());
        a.extend(["--jobs", jobs]);
        let text = stdout(&mhmw(&a));
        text.lines().filter(|l| !l.starts_with("# jobs")).collect::<Vec<_>>().join("\n")
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert!(one.contains("\nphi,1.0,"));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("levels.csv");
    fs::write(&cfg, "# ring setup\nmode = decoupled\nvarpi = 2\nphi_over_2pi = 0.25  # quarter flux\nR = 1\ns = +1\nl-min = -1\nl-max = -1\n").unwrap();
    let o = mhmw(&[
        "ring-spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--phi-over-2pi",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("# phi-over-2pi = 0.0\n"));
    assert!(text.ends_with("1,-1,-0.5,-0.5,-0.25,-1.0\n"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(mhmw(&["landau-spectrum", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(mhmw(&["landau-spectrum", "--mode", "decoupled", "--varpi", "2"]).status.code(), Some(2));
    assert_eq!(mhmw(&["landau-spectrum", "--m", "1", "--d", "1", "--rho-m", "2", "--r0", "0.1", "--varpi", "3"]).status.code(), Some(2));
    assert_eq!(mhmw(&["landau-spectrum", "--m", "-1", "--d", "1", "--rho-m", "2", "--r0", "0.1"]).status.code(), Some(2));
    assert_eq!(mhmw(&["ring-spectrum", "--m", "1", "--d", "1", "--rho-m", "2", "--r0", "0.1"]).status.code(), Some(2));
    assert_eq!(mhmw(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mhmw(&["--help"]).status.code(), Some(0));
}

#[test]
fn crossing_exits_4() {
    let o = mhmw(&["currents", "--mode", "decoupled", "--varpi", "2", "--phi-over-2pi", "0", "--occupation", "0:0:+1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn currents_rows_agree() {
    let mut args = vec!["currents"];
    args.extend(with(&["--occupation", "0:1:+1;1:-2:+1", "--verbatim", "--format", "csv"]));
    let o = mhmw(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let closed: f64 = rows[0][4].parse().unwrap();
    let fd: f64 = rows[1][4].parse().unwrap();
    assert_eq!(rows[0][5], "closed_form");
    assert_eq!(rows[1][5], "byers_yang_fd");
    assert!((closed - fd).abs() < 1e-6);
}

#[test]
fn specfun_eval_prints_value() {
    let o = mhmw(&["specfun-eval", "--function", "kummer-m", "--a", "2.5", "--b", "2.5", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("kummer-m,2.5,2.5,1.0,2.718281828459045"), "{last}");
}

#[test]
fn txt_format_round_trips_header() {
    let mut args = vec!["ring-spectrum"];
    args.extend(with(&["--R", "1", "--l-min", "0", "--l-max", "0", "--s", "-1", "--format", "txt"]));
    let text = stdout(&mhmw(&args));
    assert!(text.contains("# format = txt\n"));
    assert!(text.contains("[[row]]\n"));
}

#[test]
fn quick_verify_runs() {
    let o = mhmw(&["verify", "quick"]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion ")).count(), 9);
    assert!(text.contains("criterion 9 PASS"));
}
