use std::process::Command as Proc;

use parcohom_cli::{cache_key, run, to_json, Command, JobSpec, Payload, ResultEnvelope, Suite};

fn bin() -> Proc {
    let mut c = Proc::new(env!("CARGO_BIN_EXE_parcohom"));
    c.env_remove("PARCOHOM_CACHE");
    c
}

fn output(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn cohomology_of_level_11() {
    let (code, text) = output(&["cohomology", "--level", "11", "--prime", "5"]);
    assert_eq!(code, 0);
    let env: ResultEnvelope = serde_json::from_str(&text).unwrap();
    match env.payload {
        Payload::Cohomology { dim_h1, dim_par, .. } => assert_eq!((dim_h1, dim_par), (11, 2)),
        other => panic!("unexpected payload {other:?}"),
    }
}

#[test]
fn exit_codes() {
    assert_eq!(output(&["weight-one", "--level", "10", "--prime", "5"]).0, 2);
    assert_eq!(output(&["cohomology", "--level", "11", "--prime", "6"]).0, 2);
    assert_eq!(output(&["cohomology", "--level", "3", "--prime", "5"]).0, 2);
    assert_eq!(
        output(&["weight-one", "--level", "23", "--prime", "5", "--character", "trivial"]).0,
        2
    );
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.json");
    let (code, _) = output(&["cohomology", "--level", "11", "--prime", "5", "--out", missing.to_str().unwrap()]);
    assert_eq!(code, 4);
}

#[test]
fn shapiro_suite_passes() {
    let (code, text) = output(&["verify", "--suite", "shapiro", "--level", "4", "--modulus", "5", "--prime", "7"]);
    assert_eq!(code, 0);
    let env: ResultEnvelope = serde_json::from_str(&text).unwrap();
    assert_eq!(env.payload.verification(), Some(true));
}

#[test]
fn weight_one_at_level_23() {
    let (code, text) = output(&[
        "weight-one", "--level", "23", "--prime", "5", "--character", "quadratic", "--output-bound", "13",
    ]);
    assert_eq!(code, 0);
    let env: ResultEnvelope = serde_json::from_str(&text).unwrap();
    let Payload::WeightOne(res) = env.payload else { panic!() };
    assert_eq!(res.dim_t1, 1);
    let f = &res.eigenforms[0];
    assert_eq!(f.value_fp(2), Some(4));
    assert_eq!(f.value_fp(13), Some(4));
}

#[test]
fn deterministic_output() {
    let args = ["hecke-matrix", "--level", "13", "--prime", "7", "--op", "2..5", "--stable"];
    let (_, a) = output(&args);
    let (_, b) = output(&args);
    assert_eq!(a, b);
    let args = ["eigen-systems", "--level", "11", "--prime", "7", "--bound", "6", "--stable", "--seed", "3"];
    assert_eq!(output(&args).1, output(&args).1);
}

#[test]
fn envelope_round_trip() {
    let mut job = JobSpec::new(Command::Verify, 13, 2, 5);
    job.suite = Some(Suite::Euler);
    let env = run(&job).unwrap();
    let text = to_json(&env, false).unwrap();
    let back: ResultEnvelope = serde_json::from_str(&text).unwrap();
    assert_eq!(back, env);
    assert_eq!(env.cache_key, cache_key(&job));
}

#[test]
fn cache_hits_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let mut job = JobSpec::new(Command::HeckeMatrix, 11, 3, 7);
    job.ops = vec![2, 3];
    job.cache = Some(dir.path().to_path_buf());
    let first = run(&job).unwrap();
    assert!(!first.from_cache);
    let mut other = job.clone();
    other.out = Some(dir.path().join("elsewhere.json"));
    let second = run(&other).unwrap();
    assert!(second.from_cache);
    assert_eq!(second.payload, first.payload);

    let file = dir.path().join(format!("{}.json", first.cache_key));
    let mut text = std::fs::read_to_string(&file).unwrap();
    text.push(' ');
    std::fs::write(&file, text).unwrap();
    let third = run(&job).unwrap();
    assert!(!third.from_cache);
    assert_eq!(third.payload, first.payload);
    assert!(run(&job).unwrap().from_cache);
}

#[test]
fn cache_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cohomology", "--level", "13", "--prime", "5"];
    let go = || {
        let out = bin().args(args).env("PARCOHOM_CACHE", dir.path()).output().unwrap();
        serde_json::from_slice::<ResultEnvelope>(&out.stdout).unwrap()
    };
    assert!(!go().from_cache);
    assert!(go().from_cache);
    assert!(dir.path().join("index.json").exists());
}
