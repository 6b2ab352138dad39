use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermionant")).args(args).env_remove("FERMIONANT_CAP").env_remove("FERMIONANT_JOBS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fermionant-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn matrix_file() -> String {
    scratch("m.txt", "2\n1 2\n3 4\n").to_string_lossy().into_owned()
}

#[test]
fn eval_values() {
    let m = matrix_file();
    let cases: [(&[&str], &str); 5] = [
        (&["eval", "ferm", "--k", "2", "--convention", "plain"], "4"),
        (&["eval", "ferm", "--k", "1", "--convention", "signed"], "-2"),
        (&["eval", "det"], "-2"),
        (&["eval", "per"], "10"),
        (&["eval", "imm", "--diagram", "1,1"], "-2"),
    ];
    for (args, want) in cases {
        let mut a = vec!["--format", "machine"];
        a.extend_from_slice(args);
        a.extend_from_slice(&["--matrix", &m]);
        let o = run(&a);
        assert!(o.status.success(), "{args:?}");
        assert_eq!(stdout(&o).trim(), want, "{args:?}");
    }
}

#[test]
fn convention_is_required() {
    let o = run(&["eval", "ferm", "--k", "2", "--matrix", &matrix_file()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["--seed", "7", "verify", "lemma3", "--n", "3", "--trials", "5"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("summary\tpass="));
}

#[test]
fn unknown_suite_is_usage_error() {
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn degenerate_k_refused() {
    let o = run(&["reduce", "ham", "--matrix", &matrix_file(), "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

#[test]
fn loop_gadget_round_trip() {
    let out = scratch("loop.json", "");
    let out = out.to_string_lossy();
    let o = run(&["gadget", "search", "--kind", "loop", "--k", "3", "--out", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["--format", "machine", "gadget", "check", "--cert", &out]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("fail=0"));
}

#[test]
fn modular_chain_passes() {
    let ones = scratch("ones.txt", "2\n1 1\n1 1\n");
    let o = run(&["--format", "machine", "reduce", "sharp-p", "--matrix", &ones.to_string_lossy(), "--k", "2"]);
    assert!(o.status.success(), "{}", stdout(&o));
}
