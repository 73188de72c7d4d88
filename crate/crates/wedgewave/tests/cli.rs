//! The command-line front end, exercised through the built binary.

use std::process::{Command, Output};
use wedgewave::cli::{coeffs_record, parse_grid, MaterialArgs, PATH_TOLERANCE};
use wedgewave::report::Json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wedgewave")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn rayleigh_reports_speed_and_residuals() {
    let out = run(&["rayleigh", "--poisson", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value"]["c_r_over_c_t"].as_f64().unwrap() - 0.9194).abs() < 1e-4);
    assert!(v["value"]["rayleigh_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["provenance"], "closed-form");
    for key in ["inputs", "value", "provenance", "tolerances", "paper_anchor"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    // λ = μ is σ = 1/4
    let lame = json(&run(&["rayleigh", "--lame", "1", "1"]));
    assert_eq!(lame["value"]["c_r"], v["value"]["c_r"]);
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let text = String::from_utf8(run(&["rayleigh", "--poisson", "0.25"]).stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"c_r\"")).unwrap();
    let num = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = num.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{num}");
}

#[test]
fn coeffs_paths_agree() {
    let v = json(&run(&["coeffs", "--poisson", "0.25", "--k", "2"]));
    assert!(v["value"]["relative_disagreement"].as_f64().unwrap() < PATH_TOLERANCE);
    assert_eq!(v["value"]["quadrature"]["provenance"], "quadrature");
    assert!(v["value"]["closed_form"]["cv_plus"].as_f64().unwrap() < 0.0);
    for s in parse_grid("-0.98:0.49:40").unwrap() {
        let rec = coeffs_record(&MaterialArgs { poisson: Some(s), lame: None }, 1.0).unwrap();
        let Json::Obj(fields) = rec.value else { panic!("object expected") };
        let dis = fields.iter().find(|(k, _)| k == "relative_disagreement").unwrap();
        assert!(matches!(dis.1, Json::Num(x) if x < PATH_TOLERANCE), "sigma {s}");
    }
}

#[test]
fn theta_table_csv_has_header_and_positive_theta() {
    let out = run(&["theta-table", "--sigma-grid", "-0.9:0.49:50", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let col = rdr.headers().unwrap().iter().position(|h| h == "value.theta").unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r[col].parse::<f64>().unwrap() > 0.0));
    let again = run(&["theta-table", "--sigma-grid", "-0.9:0.49:50", "--format", "csv"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let out = run(&["rayleigh", "--poison", "0.25"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--poison"));
    let both = run(&["coeffs", "--poisson", "0.2", "--lame", "1", "1"]);
    assert_eq!(both.status.code(), Some(2));
    assert_eq!(run(&["wedge-solve", "--poisson", "0.25"]).status.code(), Some(2));
    assert_eq!(run(&["wedge-solve", "--poisson", "0.25", "--eps", "0.2", "--order", "3"]).status.code(), Some(2));
    assert_eq!(run(&["theta-table", "--sigma-grid", "0:1:3", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1_with_the_error_name() {
    let cases: [(&[&str], &str); 5] = [
        (&["rayleigh", "--poisson", "0.7"], "ConstraintViolation"),
        (&["theta-table", "--sigma-grid", "0.3:0.1:4"], "ConstraintViolation"),
        (&["wedge-solve", "--poisson", "0.25", "--eps", "0"], "ConstraintViolation"),
        // tan(0.5) > 0.3 once the angle is read in radians
        (&["wedge-solve", "--poisson", "0.25", "--eps", "0.5", "--angle-mode", "radians"], "ConstraintViolation"),
        (&["sweep", "--poisson", "0.25", "--eps-list", "0.1,0.2"], "ConstraintViolation"),
    ];
    for (args, name) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr(&out).starts_with(name), "{args:?}: {}", stderr(&out));
    }
    let scan = run(&["pencil-scan", "--poisson", "0.25", "--xmax", "10", "--grid", "50"]);
    assert_eq!(scan.status.code(), Some(1));
    assert!(stderr(&scan).starts_with("GridTooCoarse"));
}

#[test]
fn grid_parsing() {
    assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
    assert_eq!(parse_grid("-0.5:-0.5:1").unwrap(), vec![-0.5]);
    assert!(parse_grid("0:1").is_err() && parse_grid("0:1:0").is_err() && parse_grid("a:1:2").is_err());
}
