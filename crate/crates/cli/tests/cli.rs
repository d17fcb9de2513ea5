use std::process::{Command, Output};

fn hypiso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypiso")).args(args).output().expect("spawn hypiso")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn bounds_sweep_is_monotone() {
    let o = hypiso(&["bounds", "--thm", "1.2", "--n", "6", "--range", "0.1:3:30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("theorem,n,k,param,value,feasible,guard_margin\n"));
    let v: Vec<f64> = column(&text, "value").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(v.len(), 30);
    assert!(v.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn area_guard_flips_once_along_a_sweep() {
    let o = hypiso(&["bounds", "--thm", "1.9", "--n", "4", "--k", "2", "--range", "0.1:12.5:40"]);
    assert_eq!(o.status.code(), Some(0));
    let f = column(&stdout(&o), "feasible");
    let flips = f.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(flips, 1);
    assert_eq!(f[0], "false");
    assert_eq!(f.last().unwrap(), "true");
}

#[test]
fn cor1_rows_carry_the_discrepancy() {
    let o = hypiso(&["bounds", "--thm", "cor1", "--n", "4", "--range", "0.1:3:5"]);
    let text = stdout(&o);
    let ids = column(&text, "theorem");
    assert_eq!(ids.iter().filter(|t| *t == "cor1_ref").count(), 5);
    assert_eq!(ids.iter().filter(|t| *t == "cor1_diff").count(), 5);
    let ref0: f64 = column(&text, "value")[1].parse().unwrap();
    let want = ((std::f64::consts::PI / 4.0).cos() * 0.1f64.tanh()).atanh();
    assert!((ref0 - want).abs() <= 1e-12 * want);
}

#[test]
fn bounds_json_has_schema_version() {
    let o = hypiso(&["bounds", "--thm", "1.1", "--param", "0.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["rows"][0]["theorem"], "1.1");
}

#[test]
fn exit_codes() {
    assert_eq!(hypiso(&["bounds", "--thm", "7.7", "--param", "1"]).status.code(), Some(2));
    assert_eq!(hypiso(&["bounds", "--thm", "1.1"]).status.code(), Some(2));
    assert_eq!(hypiso(&["bounds", "--thm", "1.1", "--n", "2", "--param", "1"]).status.code(), Some(2));
    assert_eq!(hypiso(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hypiso(&["verify", "--thm", "1.2", "--trials", "200"]).status.code(), Some(0));
    assert_eq!(hypiso(&["verify", "--thm", "1.4", "--trials", "50"]).status.code(), Some(1));
    let e = hypiso(&["sample", "--thetas", "3.5,1,1.78", "--radius", "1"]);
    assert_eq!(e.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&e.stderr).starts_with("error: "));
}

#[test]
fn verify_output_is_deterministic() {
    let args = ["verify", "--thm", "1.6", "--k", "3", "--trials", "100", "--seed", "0x2a"];
    let a = hypiso(&args);
    let b = hypiso(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    assert_eq!(v["passed"], true);
}

#[test]
fn sample_records_round_trip() {
    let o = hypiso(&["sample", "--kind", "tangential", "--n", "5", "--trials", "4", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let rec: hypiso::polygon::PolygonRecord = serde_json::from_value(v["polygon"].clone()).unwrap();
        let p = hypiso::polygon::Polygon::try_from(rec).unwrap();
        assert_eq!(p.n(), 5);
        assert!(v["max_perimeter_error"].as_f64().unwrap() <= 1e-9);
        assert!(v["max_area_error"].as_f64().unwrap() <= 1e-8);
    }
}

#[test]
fn degrees_flag_converts_thetas() {
    let d = hypiso(&["sample", "--thetas", "90,90,90,90", "--radius", "1", "--degrees"]);
    let r = hypiso(&["sample", "--thetas", &format!("{0},{0},{0},{0}", std::f64::consts::FRAC_PI_2), "--radius", "1"]);
    assert_eq!(d.stdout, r.stdout);
    let v: serde_json::Value = serde_json::from_slice(&d.stdout).unwrap();
    assert_eq!(v["regular"], true);
}

#[test]
fn optimize_reaches_the_uniform_point() {
    let o = hypiso(&["optimize", "--thm", "1.1", "--n", "6", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["report"];
    assert_eq!(r["certified"], true);
    assert_eq!(r["oracle_agreement"], true);
    assert!(r["max_deviation_from_uniform"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn optimize_flags_the_nonconvex_objective() {
    let o = hypiso(&["optimize", "--objective", "angle_from_circumradius", "--n", "4", "--k", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["certified"], false);
    assert_eq!(o.status.code(), Some(0));
}
