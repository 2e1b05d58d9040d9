use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn chebias(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chebias")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect()
}

#[test]
fn bad_flag_value_names_the_key() {
    let o = chebias(&["dirichlet-bias", "--q", "4", "--grid-ratio", "0.5", "--limit", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`grid-ratio`"), "{}", stderr(&o));
}

#[test]
fn config_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");

    fs::write(&cfg, "q = 4\nlimit 1000\n").unwrap();
    let o = chebias(&["dirichlet-bias", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    fs::write(&cfg, "q = 4\nmodulus = 1,1\n").unwrap();
    let o = chebias(&["dirichlet-bias", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key `modulus`"), "{}", stderr(&o));

    fs::write(&cfg, "q = 4\nx_min = 8\n").unwrap();
    let o = chebias(&["dirichlet-bias", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`x-min`"), "{}", stderr(&o));

    let o = chebias(&[
        "dirichlet-bias",
        "--config",
        dir.path().join("missing").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`config`"), "{}", stderr(&o));
}

#[test]
fn central_zero_exits_with_explanation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ff");
    let o = chebias(&[
        "ff-bias",
        "--q",
        "5",
        "--modulus",
        "0,0,1",
        "--n-max",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("central"), "{}", stderr(&o));
    assert!(!out.join("manifest.json").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["dirichlet-bias", "--q", "60", "--limit", "300000"],
        &["split-bias", "--d", "-23", "--limit", "200000"],
        &["ff-bias", "--q", "2", "--modulus", "0,0,1", "--n-max", "12"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut previous = None;
        for threads in ["1", "4", "1"] {
            let out = dir.path().join(format!("run{i}-{threads}"));
            let mut full = args.to_vec();
            full.extend([
                "--threads",
                threads,
                "--segment-size",
                "32768",
                "--out",
                out.to_str().unwrap(),
            ]);
            let o = chebias(&full);
            assert!(o.status.success(), "{}", stderr(&o));
            let files = csv_files(&out);
            assert!(!files.is_empty());
            if let Some(p) = &previous {
                assert_eq!(p, &files, "{args:?}");
            }
            previous = Some(files);
        }
    }
}

#[test]
fn manifest_lists_outputs_with_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let o = chebias(&[
        "class-bias",
        "--d",
        "-20",
        "--limit",
        "100000",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["schema"], 1);
    assert_eq!(m["spec"]["kind"], "class-bias");
    let outputs = m["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 1);
    let file = outputs[0]["file"].as_str().unwrap();
    let bytes = fs::read(dir.path().join(file)).unwrap();
    let digest = format!("{:x}", <sha2::Sha256 as sha2::Digest>::digest(&bytes));
    assert_eq!(outputs[0]["sha256"], digest.as_str());
    assert!(!dir.path().join("run-state.json").exists());
}

#[test]
fn verify_prints_json_lines() {
    let o = chebias(&["verify", "class-group-20", "tau-congruence"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<serde_json::Value> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l["pass"] == true));

    let o = chebias(&["verify", "no-such-check"]);
    assert_eq!(o.status.code(), Some(2));
}
