use std::process::{Command, Output};

fn pbverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbverify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const SMALL_RUN: [&str; 10] = [
    "verify", "main", "--case", "iii", "--dims", "2,4", "--trials", "200", "--seed", "42",
];

#[test]
fn zero_trials_is_a_usage_error() {
    let o = pbverify(&["verify", "main", "--case", "iii", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_of_regime_parameters_quote_the_table() {
    let o = pbverify(&["verify", "main", "--case", "v", "--q", "2.5", "--r", "3", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("iii: 1<q<=2"), "{err}");
    assert!(err.contains("v: q>=2, r<=q"), "{err}");
}

#[test]
fn passing_run_writes_header_and_one_line_per_trial() {
    let o = pbverify(&SMALL_RUN);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 201);
    assert!(lines[0].starts_with("{\"header\":"));
    for (t, line) in lines[1..].iter().enumerate() {
        assert!(line.contains(&format!("\"trial\":{t},")), "{line}");
        assert!(line.contains("\"holds\":true"));
    }
    assert!(stderr(&o).contains("PASS"));
}

#[test]
fn replays_differ_only_in_the_header() {
    let a = stdout(&pbverify(&SMALL_RUN));
    let b = stdout(&pbverify(&SMALL_RUN));
    assert!(a.lines().skip(1).eq(b.lines().skip(1)));
}

#[test]
fn jobs_do_not_change_results() {
    let mut one = SMALL_RUN.to_vec();
    one.extend(["--jobs", "1"]);
    let a = stdout(&pbverify(&one));
    let b = stdout(&pbverify(&SMALL_RUN));
    assert!(a.lines().skip(1).eq(b.lines().skip(1)));
}

#[test]
fn csv_output_has_fixed_header() {
    let o = pbverify(&["verify", "entropy", "--suite", "bound", "--trials", "8", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().next().unwrap(),
        "name,case,q,r,dim,seed,trial,lhs,rhs,slack,holds,tol"
    );
    assert_eq!(out.lines().count(), 9);
}

#[test]
fn report_goes_to_file_with_out() {
    let path = std::env::temp_dir().join(format!("pbverify-cli-{}.jsonl", std::process::id()));
    let o = pbverify(&[
        "verify", "variant", "--direction", "convex", "--trials", "10", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 11);
    let _ = std::fs::remove_file(path);
}

#[test]
fn print_grids_lists_every_suite() {
    let o = pbverify(&["--print-grids"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for suite in ["main-i", "main-v", "variant-convex", "convexity-F", "entropy-bound", "frechet-both"] {
        assert!(out.contains(suite), "missing {suite}");
    }
}

#[test]
fn matrix_literals_run_a_single_check() {
    let dir = std::env::temp_dir();
    let pa = dir.join(format!("pbverify-a-{}.json", std::process::id()));
    let pb = dir.join(format!("pbverify-b-{}.json", std::process::id()));
    std::fs::write(&pa, r#"{"dim":2,"re":[[1.0,0.2],[0.2,0.5]],"im":[[0.0,0.1],[-0.1,0.0]]}"#).unwrap();
    std::fs::write(&pb, r#"{"dim":2,"re":[[0.3,-0.1],[-0.1,0.2]]}"#).unwrap();
    let o = pbverify(&[
        "verify", "main", "--case", "iii", "--q", "1.5", "--r", "2",
        "--matrix-a", pa.to_str().unwrap(), "--matrix-b", pb.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains("\"holds\":true"));
    let _ = std::fs::remove_file(pa);
    let _ = std::fs::remove_file(pb);
}

#[test]
fn malformed_matrix_literal_is_a_usage_error() {
    let pa = std::env::temp_dir().join(format!("pbverify-bad-{}.json", std::process::id()));
    std::fs::write(&pa, r#"{"dim":2,"re":[[1.0,2.0],[3.0,4.0]]}"#).unwrap();
    let p = pa.to_str().unwrap();
    let o = pbverify(&["verify", "main", "--case", "iii", "--matrix-a", p, "--matrix-b", p]);
    assert_eq!(o.status.code(), Some(2));
    let _ = std::fs::remove_file(pa);
}

#[test]
fn unknown_format_and_missing_flags_exit_two() {
    assert_eq!(pbverify(&["verify", "main", "--case", "iii", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(pbverify(&["verify", "main"]).status.code(), Some(2));
    assert_eq!(pbverify(&["verify", "convexity", "--target", "H"]).status.code(), Some(2));
    assert_eq!(pbverify(&[]).status.code(), Some(2));
}

#[test]
fn unknown_grid_name_exits_two() {
    let o = pbverify(&["verify", "main", "--case", "i", "--grid", "r-equals-q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("r-equals-q"));
}

#[test]
fn frechet_check_passes_on_small_run() {
    let o = pbverify(&["frechet", "check", "--method", "quad", "--trials", "24", "--dims", "2,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn violations_exit_one() {
    let o = pbverify(&[
        "frechet", "check", "--method", "dd", "--trials", "12", "--dims", "3", "--tol", "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("replay: --seed 42 trial"));
}
