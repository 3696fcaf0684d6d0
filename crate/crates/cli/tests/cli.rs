use std::io::Write;
use std::process::{Command, Output};

fn tilepar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilepar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn grid_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn counts_and_parities() {
    for (args, want) in [
        (vec!["count", "--gen", "rect:2,3"], "3\n"),
        (vec!["count", "--gen", "holey:1,2"], "2\n"),
        (vec!["parity", "--gen", "rect:5,6"], "1\n"),
        (
            vec!["count", "--gen", "rect:4,4", "--method", "enumerate"],
            "36\n",
        ),
        (
            vec!["count", "--gen", "rect:4,4", "--method", "matching"],
            "36\n",
        ),
    ] {
        let out = tilepar(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&out), want, "{args:?}");
    }
}

#[test]
fn file_input_matches_builder() {
    let f = grid_file("###\n###\n");
    let out = tilepar(&["count", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&out), "3\n");
}

#[test]
fn json_output_is_one_object_per_line() {
    let out = tilepar(&["--format", "json", "count", "--gen", "rect:2,3"]);
    assert_eq!(stdout(&out), "{\"count\":\"3\"}\n");
    let out = tilepar(&["corners", "--gen", "rect:2,2", "--format", "json"]);
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["walled"], "both");
    }
}

#[test]
fn usage_and_guard_errors_exit_two() {
    let empty = grid_file("");
    assert_eq!(
        tilepar(&["corners", empty.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let bad = grid_file("#x\n");
    let out = tilepar(&["count", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 2"));
    assert_eq!(tilepar(&["count"]).status.code(), Some(2));
    assert_eq!(
        tilepar(&["count", "--gen", "rect:30,30", "--w-max", "8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tilepar(&["count", "--gen", "blob:1,2"]).status.code(),
        Some(2)
    );
    let f = grid_file("##\n");
    let path = f.path().to_str().unwrap();
    assert_eq!(
        tilepar(&["count", path, "--gen", "rect:1,2"]).status.code(),
        Some(2)
    );
}

#[test]
fn rectangle_corners_are_complete_and_walled() {
    let out = tilepar(&["corners", "--gen", "rect:3,5"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text
        .lines()
        .all(|l| l.ends_with("complete_up_to=3 walled=both")));
}

#[test]
fn staircase_corner_is_found() {
    let text = stdout(&tilepar(&["corners", "--gen", "t:2,5,4"]));
    assert!(text.lines().any(|l| l.contains(";4)")));
}

#[test]
fn reduce_then_verify_round_trip() {
    let out = tilepar(&["reduce", "--gen", "hprime:1,3", "--strategy", "wall-greedy"]);
    let trace = stdout(&out);
    assert!(trace.starts_with("start hprime:1,3\n"));
    assert!(trace.ends_with("parity 1\n"));
    let f = grid_file(&trace);
    let out = tilepar(&["verify-trace", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| l.contains(" PASS ")));

    let tampered = trace.replacen("(0,4)]", "(1,4)]", 1);
    assert_ne!(tampered, trace);
    let f = grid_file(&tampered);
    let out = tilepar(&["verify-trace", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains(" FAIL "));
}

#[test]
fn schedule_script_ends_at_smaller_rectangle() {
    let out = tilepar(&["reduce", "--gen", "rect:4,6", "--script", "cor42"]);
    let trace = stdout(&out);
    assert_eq!(trace.lines().filter(|l| l.starts_with("step ")).count(), 4);
    assert!(trace.contains("\nterminal ###/###\n"));
    assert!(trace.ends_with("parity 1\n"));
    let out = tilepar(&["reduce", "--gen", "rect:3,5", "--script", "schedule"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_and_exit_status() {
    let out = tilepar(&["verify", "holey", "--max-n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text
        .lines()
        .last()
        .unwrap()
        .starts_with("SUMMARY total=6 passed=6"));
    assert!(text
        .lines()
        .next()
        .unwrap()
        .starts_with("CASE holey m=0,n=1 "));

    let out = tilepar(&["verify", "theorem", "--trials", "40", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));

    // The p = 1 rows of the table include rectangles with an odd count.
    let out = tilepar(&["verify", "tfamily", "--max-k", "2", "--max-p", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("item=4,k=2,j=3,p=1 expected=0 got=1 FAIL"));
}

#[test]
fn verify_is_deterministic() {
    let a = stdout(&tilepar(&[
        "verify", "theorem", "--trials", "30", "--seed", "3",
    ]));
    let b = stdout(&tilepar(&[
        "verify", "theorem", "--trials", "30", "--seed", "3",
    ]));
    assert_eq!(a, b);
}

#[test]
fn renders() {
    assert_eq!(stdout(&tilepar(&["render", "--gen", "rect:1,2"])), "##\n");
    let holey = stdout(&tilepar(&["render", "--gen", "holey:2,5"]));
    let rows: Vec<&str> = holey.lines().collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.len() == 10));
    assert_eq!(holey.matches('.').count(), 16);
    assert_eq!(rows[3], "###....###");
    let marked = stdout(&tilepar(&["render", "--gen", "rect:3,4", "--step", "1"]));
    assert_eq!(marked.matches('o').count(), 6);
}
