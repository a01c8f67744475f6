use std::path::Path;
use std::process::Command;

fn hhh(args: &[&str], dir: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hhh")).args(args).current_dir(dir).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn only_file(dir: &Path, suffix: &str) -> Vec<u8> {
    let mut hits: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(suffix))
        .collect();
    assert_eq!(hits.len(), 1, "{suffix} in {dir:?}");
    std::fs::read(hits.pop().unwrap()).unwrap()
}

#[test]
fn reruns_are_byte_identical_and_hit_the_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = tmp.path().join("cache");
    let base = ["-n", "2", "-b", "1 1 1", "--support", "--cutoff", "6", "--cache-dir", cache.to_str().unwrap()];
    let run = |out: &str| {
        let mut a = base.to_vec();
        a.extend(["--out-dir", out]);
        let (code, _, err) = hhh(&a, tmp.path());
        assert_eq!(code, 0, "{err}");
    };
    run("o1");
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    run("o2");
    for s in [".hhh.json", ".support.json"] {
        assert_eq!(only_file(&tmp.path().join("o1"), s), only_file(&tmp.path().join("o2"), s));
    }
}

#[test]
fn unsimplified_run_emits_the_same_json() {
    let tmp = tempfile::tempdir().unwrap();
    let (c1, ..) = hhh(&["-n", "3", "-b", "1 -2 1", "--cutoff", "4", "--out-dir", "a"], tmp.path());
    let (c2, ..) = hhh(&["-n", "3", "-b", "1 -2 1", "--cutoff", "4", "--out-dir", "b", "--no-simplify"], tmp.path());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(only_file(&tmp.path().join("a"), ".hhh.json"), only_file(&tmp.path().join("b"), ".hhh.json"));
}

#[test]
fn parse_errors_exit_one_with_position() {
    let tmp = tempfile::tempdir().unwrap();
    for (word, needle) in [("1 0", "token 2"), ("1 1 3", "token 3"), ("a", "token 1")] {
        let (code, _, err) = hhh(&["-n", "3", "-b", word], tmp.path());
        assert_eq!(code, 1);
        assert!(err.contains(needle) && err.contains("error[parse]"), "{err}");
    }
}

#[test]
fn table_format_and_renders() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, out, _) =
        hhh(&["-n", "1", "--cutoff", "q=2", "--render", "qat", "--render", "tilde", "--format", "table"], tmp.path());
    assert_eq!(code, 0);
    assert!(out.contains("qat (a,q2,*t2)") && out.contains("tilde"), "{out}");
    let json: serde_json::Value = serde_json::from_slice(&only_file(tmp.path(), ".hhh.json")).unwrap();
    let renders = json["hhh"]["renders"].as_object().unwrap();
    assert_eq!(renders.len(), 2);
}

#[test]
fn bad_configuration_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(hhh(&["-n", "2", "--cutoff", "q=-1"], tmp.path()).0, 1);
    assert_eq!(hhh(&["-n", "2", "--bogus"], tmp.path()).0, 1);
    assert_eq!(hhh(&["-n", "2", "--jobs", "0"], tmp.path()).0, 1);
    assert_eq!(hhh(&["-n", "2", "--positive-shift", "1,2"], tmp.path()).0, 1);
}
