//! End-to-end tests driving the `geopack` binary as a subprocess.

use std::path::Path;
use std::process::{Command, Output};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn geopack(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geopack"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("the geopack binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("stdout is a JSON document: {e}\n{text}"))
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "command failed (status {:?}): {}",
        out.status.code(),
        stderr_text(out)
    );
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exits normally")
}

const SIX: &str = "1,2,3,-1,-2,-3";
const EIGHTEEN: &str = "1,2,3,-1,-2,-3,4,5,6,-4,-5,-6,7,8,9,-7,-8,-9";

#[test]
fn encode_reports_the_worked_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let out = geopack(&["codec", "encode", "--mode", "exact", SIX], dir.path());
    assert_ok(&out);
    let doc = stdout_json(&out);
    assert_eq!(doc["kind"], "encoded-six");
    assert_eq!(doc["mode"], "strict");
    assert_eq!(doc["s"], "0/1");
    assert_eq!(doc["b1"], "-1/1");
    assert_eq!(doc["b2"], "-2/1");
    assert_eq!(doc["r"], "3/1");
    assert!(stderr_text(&out).contains("transversal slope s = 0/1"));
}

#[test]
fn encode_then_decode_roundtrips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("rec.json");
    let rec_s = rec.to_str().unwrap();
    assert_ok(&geopack(
        &["codec", "encode", SIX, "--output", rec_s],
        dir.path(),
    ));
    let out = geopack(&["codec", "decode", "--input", rec_s], dir.path());
    assert_ok(&out);
    let doc = stdout_json(&out);
    assert_eq!(doc["record"], "strict");
    assert_eq!(doc["verified"], true);
    let slopes: Vec<&str> = doc["slopes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(slopes, ["1/1", "2/1", "3/1", "-1/1", "-2/1", "-3/1"]);

    // literal record: decoding needs the hypothesis and stays unverified
    let lit = dir.path().join("lit.json");
    let lit_s = lit.to_str().unwrap();
    assert_ok(&geopack(
        &["codec", "encode", SIX, "--literal", "--output", lit_s],
        dir.path(),
    ));
    let out = geopack(
        &["codec", "decode", "--input", lit_s, "--s-hypothesis", "0"],
        dir.path(),
    );
    assert_ok(&out);
    let doc = stdout_json(&out);
    assert_eq!(doc["record"], "literal");
    assert_eq!(doc["verified"], false);
    assert_eq!(doc["slopes"][0], "1/1");
}

#[test]
fn pack_then_unpack_restores_all_eighteen() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("bundle.json");
    let b_s = b.to_str().unwrap();
    let out = geopack(
        &["pack", EIGHTEEN, "--pack-mode", "strict", "--output", b_s],
        dir.path(),
    );
    assert_ok(&out);
    assert!(stderr_text(&out).contains("20 stored values"));
    let out = geopack(&["unpack", "--input", b_s], dir.path());
    assert_ok(&out);
    let doc = stdout_json(&out);
    assert_eq!(doc["verified"], true);
    let values = doc["values"].as_array().unwrap();
    assert_eq!(values.len(), 18);
    assert_eq!(values[0], "1/1");
    assert_eq!(values[17], "-9/1");
}

#[test]
fn hier_stats_reports_seventeen_root_values_for_one_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = geopack(
        &[
            "hier",
            "stats",
            "--n",
            "18",
            "--seed",
            "5",
            "--pack-mode",
            "literal",
        ],
        dir.path(),
    );
    assert_ok(&out);
    assert!(
        stderr_text(&out).contains("17 stored values"),
        "stats summary names the 18-to-17 shrink: {}",
        stderr_text(&out)
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["kind"], "hier-stats");
    assert_eq!(doc["stats"]["root_values"], 17);
}

#[test]
fn hier_fetch_returns_the_generated_element() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("hier.json");
    let h_s = h.to_str().unwrap();
    assert_ok(&geopack(
        &[
            "hier",
            "pack",
            "--n",
            "40",
            "--seed",
            "11",
            "--pack-mode",
            "strict",
            "--output",
            h_s,
        ],
        dir.path(),
    ));
    // independent regeneration of the same seeded array
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let expected: Vec<String> = (0..40)
        .map(|_| {
            let num: i64 = rng.random_range(-999..=999);
            let den: i64 = rng.random_range(1..=999);
            geopack_core::scalar::format_rat(&geopack_core::scalar::Rat::new(
                BigInt::from(num),
                BigInt::from(den),
            ))
        })
        .collect();
    for idx in [0usize, 17, 25, 39] {
        let out = geopack(
            &["hier", "fetch", "--input", h_s, "--index", &idx.to_string()],
            dir.path(),
        );
        assert_ok(&out);
        let doc = stdout_json(&out);
        assert_eq!(doc["value"], expected[idx].as_str(), "element {idx}");
        assert_eq!(doc["verified"], true, "strict fetches are verified");
    }
}

fn square_doc(dir: &Path) -> String {
    let sub = dir.join("sub.json");
    std::fs::write(
        &sub,
        r#"{
  "vertices": [["0","0"],["4","0"],["4","4"],["0","4"]],
  "edges": [[0,1],[1,2],[2,3],[3,0],[0,2]],
  "faces": ["lower","upper"]
}
"#,
    )
    .unwrap();
    sub.to_str().unwrap().to_owned()
}

#[test]
fn pointloc_build_and_query_name_faces() {
    let dir = tempfile::tempdir().unwrap();
    let sub = square_doc(dir.path());
    let loc = dir.path().join("loc.json");
    let loc_s = loc.to_str().unwrap();
    assert_ok(&geopack(
        &[
            "pointloc", "build", "--input", &sub, "--backend", "flat", "--output", loc_s,
        ],
        dir.path(),
    ));
    for (x, y, want) in [("3", "1", "lower"), ("1", "3", "upper"), ("9", "9", "OUTER")] {
        let out = geopack(
            &["pointloc", "query", "--input", loc_s, "--x", x, "--y", y],
            dir.path(),
        );
        assert_ok(&out);
        let doc = stdout_json(&out);
        assert_eq!(doc["label"], want, "query ({x}, {y})");
    }
}

#[test]
fn pointloc_verify_agrees_on_both_backends() {
    let dir = tempfile::tempdir().unwrap();
    let sub = square_doc(dir.path());
    for backend in ["flat", "packed-strict"] {
        let out = geopack(
            &[
                "pointloc", "verify", "--input", &sub, "--backend", backend, "--queries", "200",
                "--seed", "3",
            ],
            dir.path(),
        );
        assert_ok(&out);
        let doc = stdout_json(&out);
        assert_eq!(doc["agreements"], 200, "{backend} disagrees with the oracle");
        assert!(stderr_text(&out).contains("100% agreement"));
    }
}

#[test]
fn reports_rerun_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        assert_ok(&geopack(
            &[
                "codec",
                "collide",
                "--seed",
                "7",
                "--trials",
                "25",
                "--output",
                out.to_str().unwrap(),
            ],
            dir.path(),
        ));
    }
    let ta = std::fs::read(&a).unwrap();
    let tb = std::fs::read(&b).unwrap();
    assert_eq!(ta, tb, "collision reports differ across reruns");

    for out in [&a, &b] {
        assert_ok(&geopack(
            &[
                "experiment",
                "depth",
                "--seed",
                "4",
                "--sizes",
                "60",
                "--output",
                out.to_str().unwrap(),
            ],
            dir.path(),
        ));
    }
    let ta = std::fs::read(&a).unwrap();
    let tb = std::fs::read(&b).unwrap();
    assert_eq!(ta, tb, "depth reports differ across reruns");
}

#[test]
fn exit_codes_separate_validation_from_degeneracy() {
    let dir = tempfile::tempdir().unwrap();
    // repeated slope: geometry rejects it
    let out = geopack(&["codec", "encode", "1,1,3,-1,-2,-3"], dir.path());
    assert_eq!(code(&out), 3, "degenerate pencil: {}", stderr_text(&out));
    // wrong arity, unknown flag, missing file, missing seed: usage problems
    let out = geopack(&["codec", "encode", "1,2,3"], dir.path());
    assert_eq!(code(&out), 2);
    let out = geopack(&["codec", "encode", SIX, "--frobnicate"], dir.path());
    assert_eq!(code(&out), 2);
    let out = geopack(&["hier", "fetch", "--input", "nope.json", "--index", "0"], dir.path());
    assert_eq!(code(&out), 2);
    let sub = square_doc(dir.path());
    let out = geopack(
        &["pointloc", "verify", "--input", &sub, "--backend", "flat"],
        dir.path(),
    );
    assert_eq!(code(&out), 2, "randomized commands demand an explicit seed");
    // refusing to overwrite an input
    let rec = dir.path().join("rec.json");
    let rec_s = rec.to_str().unwrap();
    assert_ok(&geopack(&["codec", "encode", SIX, "--output", rec_s], dir.path()));
    let out = geopack(
        &["codec", "decode", "--input", rec_s, "--output", rec_s],
        dir.path(),
    );
    assert_eq!(code(&out), 2, "commands never mutate their inputs");
    // help is a success
    let out = geopack(&["--help"], dir.path());
    assert_eq!(code(&out), 0);
}

#[test]
fn precision_mode_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("rec.json");
    let rec_s = rec.to_str().unwrap();
    let out = geopack(
        &[
            "codec", "encode", SIX, "--mode", "p=192", "--output", rec_s,
        ],
        dir.path(),
    );
    assert_ok(&out);
    let out = geopack(&["codec", "decode", "--input", rec_s], dir.path());
    assert_ok(&out);
    let doc = stdout_json(&out);
    assert_eq!(doc["scalar"], "p=192");
    assert_eq!(doc["verified"], true);
    // six recovered slopes, each carrying its own precision tag
    let slopes = doc["slopes"].as_array().unwrap();
    assert_eq!(slopes.len(), 6);
    for s in slopes {
        assert!(s.as_str().unwrap().contains('@'));
    }
}
