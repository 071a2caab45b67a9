use std::fs;

use aoi_sched::cli::{run, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_OK};
use aoi_sched::{check_feasibility, ConstraintMode, ProblemInstance, Schedule};

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("aoi-sched").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn solve_table_shows_schedule() {
    let (code, out, _) = call(&[
        "solve", "--mode", "constant", "--T", "10", "--N", "3", "--c", "1",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("y =      2.25 2.25 2.25 3.25"), "{out}");

    let (code, out, _) = call(&[
        "solve",
        "--mode",
        "proportional",
        "--T",
        "12",
        "--N",
        "3",
        "--c",
        "1",
        "--alpha",
        "0.4",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("3 3 3 3") && out.contains("D ("), "{out}");
}

#[test]
fn infeasible_names_the_bound() {
    let (code, _, err) = call(&[
        "solve", "--mode", "constant", "--T", "10", "--N", "3", "--c", "4",
    ]);
    assert_eq!(code, EXIT_INFEASIBLE);
    assert!(err.contains("T < N·c"), "{err}");
}

#[test]
fn invalid_input_exits_one() {
    for args in [
        vec!["solve", "--mode", "inverse", "--T", "10", "--N", "3"],
        vec![
            "solve", "--mode", "constant", "--T", "-1", "--N", "3", "--c", "1",
        ],
        vec![
            "solve", "--mode", "constant", "--T", "10", "--N", "3", "--c", "1", "--format", "svg",
        ],
        vec!["solve", "--bogus"],
        vec!["verify", "--trials", "0"],
        vec![
            "sweep",
            "--T",
            "10",
            "--N",
            "3",
            "--beta-min",
            "5",
            "--beta-max",
            "1",
        ],
        vec!["trajectory", "--input", "/nonexistent/instance.json"],
    ] {
        let (code, _, _) = call(&args);
        assert_eq!(code, EXIT_INVALID, "{args:?}");
    }
}

#[test]
fn json_lines_round_trip_is_feasible() {
    for args in [
        vec!["--mode", "constant", "--T", "10", "--N", "3", "--c", "2.5"],
        vec![
            "--mode", "inverse", "--T", "7", "--N", "5", "--alpha", "2.2",
        ],
        vec![
            "--mode",
            "proportional",
            "--T",
            "3",
            "--N",
            "3",
            "--c",
            "1",
            "--alpha",
            "0.4",
        ],
    ] {
        let mut full = vec!["solve", "--format", "json-lines"];
        full.extend(args);
        let (code, out, _) = call(&full);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        let inst: ProblemInstance = serde_json::from_value(v["instance"].clone()).unwrap();
        let y: Vec<f64> = serde_json::from_value(v["y"].clone()).unwrap();
        let c: Vec<f64> = serde_json::from_value(v["c"].clone()).unwrap();
        let schedule = Schedule::new(y, c).unwrap();
        assert!(check_feasibility(&inst, &schedule, 1e-9)
            .unwrap()
            .is_feasible());
    }
}

#[test]
fn instance_file_with_distortion_budget() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    fs::write(
        &path,
        r#"{"T": 10, "N": 3, "mode": {"type": "constant", "beta": 0.0,
            "distortion": {"kind": "exponential", "a": 1.5819767068693265, "b": 0.25,
                           "d": 0.36787944117144233, "c_max": 4}}}"#,
    )
    .unwrap();
    // zero budget forces c = 4 > T/N
    let (code, _, err) = call(&["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INFEASIBLE, "{err}");

    let inst = ProblemInstance::new(10.0, 3, ConstraintMode::Constant { c_min: 1.0 }).unwrap();
    fs::write(
        &path,
        r#"{"T": 10, "N": 3, "mode": {"type": "constant", "c": 1}}"#,
    )
    .unwrap();
    let (code, out, _) = call(&[
        "solve",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "json-lines",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(
        serde_json::from_value::<ProblemInstance>(v["instance"].clone()).unwrap(),
        inst
    );

    let (code, _, _) = call(&["solve", "--input", path.to_str().unwrap(), "--T", "3"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn trajectory_csv_integrates_to_total_age() {
    let (code, out, err) = call(&[
        "trajectory",
        "--mode",
        "constant",
        "--T",
        "10",
        "--N",
        "3",
        "--c",
        "1",
        "--step",
        "0.3",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("A_T = 19.625"));
    let rows: Vec<(f64, f64)> = out
        .lines()
        .skip(1)
        .map(|l| {
            let (t, a) = l.split_once(',').unwrap();
            (t.parse().unwrap(), a.parse().unwrap())
        })
        .collect();
    let area: f64 = rows
        .windows(2)
        .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
        .sum();
    assert!((area - 19.625).abs() < 1e-9, "{area}");
}

#[test]
fn trajectory_inverse_age_drops_to_one() {
    let (code, out, _) = call(&[
        "trajectory",
        "--mode",
        "inverse",
        "--T",
        "10",
        "--N",
        "3",
        "--alpha",
        "0.5",
    ]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    let drops: Vec<&[&str]> = lines
        .windows(2)
        .filter(|w| w[0].split(',').next() == w[1].split(',').next())
        .collect();
    assert_eq!(drops.len(), 3);
    assert!(drops.iter().all(|w| w[1].ends_with(",1")), "{out}");
}

#[test]
fn trajectory_svg_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("age.svg");
    let (code, out, _) = call(&[
        "trajectory",
        "--mode",
        "constant",
        "--T",
        "10",
        "--N",
        "3",
        "--c",
        "1",
        "--format",
        "svg",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("A_T = 19.625"));
    let svg = fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert_eq!(svg.matches('<').count(), svg.matches('>').count());
    assert!(!svg.contains("href"));
}

#[test]
fn csv_output_is_deterministic() {
    let args = ["sweep", "--T", "10", "--N", "3", "--steps", "25"];
    let (code, first, _) = call(&args);
    assert_eq!(code, EXIT_OK);
    assert!(first.starts_with("beta,c_min,total_age,avg_age,regime\n"));
    assert_eq!(first.lines().count(), 26);
    assert_eq!(call(&args).1, first);

    let verify = [
        "verify",
        "--trials",
        "3",
        "--seed",
        "7",
        "--mode",
        "inverse",
        "--restarts",
        "4",
        "--verbose",
    ];
    let (code, a, _) = call(&verify);
    assert_eq!(code, EXIT_OK, "{a}");
    assert_eq!(call(&verify).1, a);
}

#[test]
fn sweep_flags_infeasible_budgets() {
    let (code, out, _) = call(&[
        "sweep",
        "--preset",
        "unit-exponential",
        "--T",
        "10",
        "--N",
        "3",
        "--steps",
        "3",
        "--beta-min",
        "0",
        "--beta-max",
        "1",
    ]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out.lines().collect();
    assert!(rows[1].ends_with(",infeasible"), "{out}");
    assert_eq!(rows[3], "1,0,12.5,1.25,A");
}

#[test]
fn verify_single_instance() {
    let (code, out, _) = call(&[
        "verify", "--trials", "1", "--seed", "7", "--mode", "constant",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1);
    assert!(
        out.starts_with("constant") && out.contains("max_gap="),
        "{out}"
    );
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("solve") && out.contains("trajectory"));
}
