//! End-to-end tests of the `wps` binary: values, formats, exit codes.

use std::process::{Command, Output};

fn wps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wps"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn count_basic() {
    let out = wps(&["count", "--weights", "1,2,3,5", "--q", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("41"), "{text}");
    assert!(text.contains("subset"));
}

#[test]
fn count_all_methods_match() {
    let out = wps(&["count", "--weights", "2,4,6,10", "--q", "7", "--method", "all"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("804"));
    assert!(text.contains("verdict: MATCH"));
}

#[test]
fn count_bruteforce() {
    let out = wps(&["count", "--weights", "1,1", "--q", "4", "--method", "bruteforce"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains('5'));
}

#[test]
fn count_p_a_form() {
    let out = wps(&["count", "--weights", "1,2,3,5", "--p", "3", "--a", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("538089"));
}

#[test]
fn tower_csv_matches_reference_block() {
    let out = wps(&[
        "tower", "--weights", "1,2,3,5", "--p", "3", "--max-exp", "5", "--format", "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "a,q,singular,smooth,total\n\
         1,3,4,37,41\n\
         2,9,4,817,821\n\
         3,27,4,20437,20441\n\
         4,81,8,538081,538089\n\
         5,243,4,14408197,14408201\n"
    );
}

#[test]
fn tower_handles_values_beyond_u64() {
    // 11^25 is far beyond 64 bits; counts must stay exact
    let out = wps(&["tower", "--weights", "1,1", "--p", "11", "--max-exp", "25", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    // q = 11^25, singular 0, smooth = total = 11^25 + 1
    assert_eq!(
        last,
        "25,108347059433883722041830251,0,108347059433883722041830252,108347059433883722041830252"
    );
}

#[test]
fn zeta_worked_example() {
    let out = wps(&[
        "zeta", "--weights", "1,1,1", "--q", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let factors = v["factorization"]["factors"].as_array().unwrap();
    let got: Vec<(i64, i64, i64)> = factors
        .iter()
        .map(|f| {
            (
                f["j"].as_i64().unwrap(),
                f["o"].as_i64().unwrap(),
                f["E"].as_i64().unwrap(),
            )
        })
        .collect();
    assert_eq!(got, vec![(0, 1, -1), (1, 1, -1), (2, 1, -1)]);
    assert_eq!(v["factorization"]["stratum"], "total");
    assert_eq!(v["degree"].as_i64().unwrap(), -3);
    assert!(v["recovery"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["pass"].as_bool().unwrap()));
}

#[test]
fn zeta_degree_note_in_characteristic_dividing_weights() {
    let out = wps(&["zeta", "--weights", "1,2,3,5", "--q", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("degree computed = -9"));
    assert!(text.contains("-sum(w_i) = -11"));
    assert!(text.contains("NOTE"));
}

#[test]
fn json_round_trips_byte_identically() {
    for args in [
        vec!["count", "--weights", "2,4,6,10", "--q", "9", "--method", "all"],
        vec!["tower", "--weights", "1,6,14,21", "--p", "5", "--max-exp", "4"],
        vec!["zeta", "--weights", "1,2,3,5", "--q", "3", "--stratum", "singular"],
        vec!["normalize", "--weights", "2,4,6,10", "--q", "5", "--series", "4"],
        vec!["scale", "--weights", "1,2,3,5", "--gamma", "2", "--q", "11"],
        vec!["hypersurface", "--weights", "1,2", "--poly", "y - x^2", "--q", "5"],
        vec!["verify", "--nmax", "1", "--wmax", "2", "--qs", "2,3"],
    ] {
        let mut full = args.clone();
        full.extend(["--format", "json"]);
        let out = wps(&full);
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
        let text = stdout(&out);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let rendered = serde_json::to_string_pretty(&value).unwrap();
        assert_eq!(text.trim_end(), rendered, "round trip for {args:?}");
    }
}

#[test]
fn normalize_examples() {
    let out = wps(&["normalize", "--weights", "7,14,21,35", "--q", "11", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["d"].as_i64().unwrap(), 7);
    assert_eq!(v["d_prime"].as_i64().unwrap(), 1);
    assert_eq!(v["count"], v["count_normalized"]);
    assert_eq!(v["relation_holds"], true);

    let out = wps(&["normalize", "--weights", "3,6", "--q", "4", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["d"].as_i64().unwrap(), 3);
    assert_eq!(v["d_prime"].as_i64().unwrap(), 3);
}

#[test]
fn scale_zero_difference_when_gamma_coprime_to_group_order() {
    let out = wps(&["scale", "--weights", "1,2,3,5", "--gamma", "3", "--q", "5", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["difference"].as_i64().unwrap(), 0);
    assert_eq!(v["agree"], true);
}

#[test]
fn hypersurface_count_and_pch1() {
    let out = wps(&["hypersurface", "--weights", "1,2", "--poly", "y - x^2", "--q", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: MATCH"));

    let out = wps(&[
        "hypersurface", "--weights", "2,4", "--poly", "y - x^2", "--q", "5", "--check-pch1",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pch1"]["holds"], true);
}

#[test]
fn exit_code_2_on_bad_input() {
    for args in [
        vec!["count", "--weights", "1,0", "--q", "3"],
        vec!["count", "--weights", "1,2", "--q", "6"],
        vec!["count", "--weights", "1,2"],
        vec!["scale", "--weights", "2,3", "--gamma", "2", "--q", "5"],
        vec!["hypersurface", "--weights", "1,2", "--poly", "x + y", "--q", "3"],
        vec!["hypersurface", "--weights", "1,2", "--poly", "3*x^2", "--q", "3"],
        vec!["count", "--weights", "1,2", "--q", "4", "--p", "2", "--a", "2"],
    ] {
        let out = wps(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
    // clap usage errors share the contract
    let out = wps(&["count", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn syntax_errors_carry_positions() {
    let out = wps(&["hypersurface", "--weights", "1,2", "--poly", "y - $", "--q", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("byte 4"), "{}", stderr(&out));
}

#[test]
fn enumeration_limit_env_var() {
    let out = Command::new(env!("CARGO_BIN_EXE_wps"))
        .args(["count", "--weights", "1,2,3", "--q", "9", "--method", "bruteforce"])
        .env("WPS_ENUM_LIMIT", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("enumeration limit"), "{}", stderr(&out));
    // the flag overrides the environment
    let out = Command::new(env!("CARGO_BIN_EXE_wps"))
        .args(["count", "--weights", "1,2,3", "--q", "9", "--method", "bruteforce", "--limit", "1000"])
        .env("WPS_ENUM_LIMIT", "100")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("wps-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tower.csv");
    let out = wps(&[
        "tower", "--weights", "1,1", "--p", "2", "--max-exp", "3", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let contents = std::fs::read_to_string(&path).unwrap();
    assert_eq!(contents, "a,q,singular,smooth,total\n1,2,0,3,3\n2,4,0,5,5\n3,8,0,9,9\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_small_sweep_passes() {
    let out = wps(&["verify", "--nmax", "1", "--wmax", "3", "--qs", "2,3,4", "--rmax", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("result: PASS"));
}

#[test]
fn verify_extended_recovery_depth() {
    let out = wps(&["verify", "--nmax", "2", "--wmax", "3", "--qs", "3,5", "--rmax", "8"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("result: PASS"));
}
