//! End-to-end runs of the `paradox` binary.

use std::path::Path;
use std::process::{Command, Output};

fn paradox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paradox")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn search_writes_hits_and_census() {
    let dir = tempfile::tempdir().unwrap();
    let (hits, census) = (dir.path().join("hits.csv"), dir.path().join("census.csv"));
    let o = paradox(&["search", "--range", "3..5000", "--out", path(&hits), "--census", path(&census), "--no-timestamp"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert!(text.contains("593 hits, 20 near-cycles, 550 distinct starts"), "{text}");
    let table = std::fs::read_to_string(&hits).unwrap();
    assert!(table.lines().any(|l| l == "n,j,q,C_num,C_den,E_num,E_den,d,start_odd,end_odd,formalism"));
    assert_eq!(table.lines().filter(|l| !l.starts_with('#')).count(), 594);
    assert!(!table.contains("unix time"));
    let rows = std::fs::read_to_string(&census).unwrap();
    assert!(rows.lines().any(|l| l.starts_with("27,17,")), "{rows}");

    let o = paradox(&["check", "--hits", path(&hits)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("593 hits read, 593 verified"));
}

#[test]
fn identical_invocations_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = [("a", "1"), ("b", "3")]
        .iter()
        .map(|(name, threads)| {
            let p = dir.path().join(format!("{name}.csv"));
            let o = paradox(&[
                "search", "--range", "3..20000", "--formalism", "classic", "--threads", threads, "--block", "777",
                "--no-timestamp", "--out", path(&p),
            ]);
            assert!(o.status.success());
            std::fs::read(p).unwrap()
        })
        .collect();
    assert_eq!(files[0], files[1]);
}

#[test]
fn tampered_hit_tables_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let hits = dir.path().join("hits.csv");
    assert!(paradox(&["search", "--range", "7..7", "--out", path(&hits)]).status.success());
    let text = std::fs::read_to_string(&hits).unwrap();
    // same linear form, wrong length: parses, but re-walking disagrees
    std::fs::write(&hits, text.replace("7,8,5,", "7,9,5,")).unwrap();
    let o = paradox(&["check", "--hits", path(&hits)]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    // inconsistent linear form: rejected while parsing
    std::fs::write(&hits, text.replace("7,8,5,243,256,347", "7,8,5,243,256,348")).unwrap();
    assert_eq!(paradox(&["check", "--hits", path(&hits)]).status.code(), Some(2));
}

#[test]
fn stop_and_resume_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let (ckpt, a, b) = (dir.path().join("s.ckpt"), dir.path().join("a.csv"), dir.path().join("b.csv"));
    let common = ["search", "--range", "3..30000", "--block", "1000", "--no-timestamp"];
    let o = paradox(&[&common[..], &["--checkpoint", path(&ckpt), "--stop-after-blocks", "4", "--out", path(&a)]].concat());
    assert!(o.status.success());
    assert!(stdout(&o).contains("stopped after block 4 of 30"), "{}", stdout(&o));
    assert!(!a.exists());
    let o = paradox(&[&common[..], &["--checkpoint", path(&ckpt), "--out", path(&a)]].concat());
    assert!(o.status.success());
    assert!(paradox(&[&common[..], &["--out", path(&b)]].concat()).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    // a checkpoint for one search cannot resume another
    let o = paradox(&["search", "--range", "3..40000", "--block", "1000", "--checkpoint", path(&ckpt)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("different search"));
}

#[test]
fn cst_poset_and_bounds() {
    let o = paradox(&["cst", "--range", "2..250000"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("249999 starts in 2..250000: 0 counterexamples, max t - tau = 0"), "{}", stdout(&o));

    let o = paradox(&["poset", "4", "2"]);
    assert!(stdout(&o).contains("6 nodes"));
    assert!(stdout(&o).starts_with("digraph hasse_4_2 {"));
    let dot = tempfile::NamedTempFile::new().unwrap();
    let o = paradox(&["poset", "3", "1", "--out", path(dot.path())]);
    assert!(stdout(&o).contains("3 nodes, 2 edges"));
    assert_eq!(std::fs::read_to_string(dot.path()).unwrap().matches(" -> ").count(), 2);
    assert_eq!(paradox(&["poset", "40", "20"]).status.code(), Some(2));

    let o = paradox(&["bounds", "heuristic", "42", "3"]);
    assert!(stdout(&o).contains("cap = 17396 (j < 17397)"));
    let o = paradox(&["bounds", "convergents", "7"]);
    assert!(stdout(&o).contains("41/65"));
    let o = paradox(&["bounds", "classify", "11"]);
    assert!(stdout(&o).contains("{1}"));
    let o = paradox(&["bounds", "rhin", "65", "41"]);
    assert!(o.status.success() && stdout(&o).contains("true"));
    let o = paradox(&["bounds", "pairs", "--count", "2"]);
    assert!(stdout(&o).starts_with("(5, 8)\n(41, 65)"), "{}", stdout(&o));
}

#[test]
fn bound_chain_from_bundled_and_substituted_tables() {
    let o = paradox(&["bounds", "chain"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    for line in ["m0 = 113383", "j0 = 1539", "q0 = 971", "j0 + q0 = 2510", "m1 = 23035537407", "j1 = 301994"] {
        assert!(text.contains(line), "{line} missing from\n{text}");
    }
    // a delay record at or above j0 + q0 breaks the chain
    let dir = tempfile::tempdir().unwrap();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::copy(data.join("max_excursion_t.txt"), dir.path().join("max_excursion_t.txt")).unwrap();
    let delays = std::fs::read_to_string(data.join("delay_col.txt")).unwrap();
    std::fs::write(dir.path().join("delay_col.txt"), delays.replace("#! record-above 2456 ", "#! record-above 2510 ")).unwrap();
    let o = paradox(&["--refs", path(dir.path()), "bounds", "chain"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2510"));
}

#[test]
fn records_match_the_bundled_tables() {
    let o = paradox(&["records", "--kind", "max-excursion-t", "--upto", "1e5"]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("matches the reference table prefix"));
    let o = paradox(&["records", "--kind", "delay-col", "--upto", "10^5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("27 111\n"));
}

#[test]
fn invalid_input_is_rejected() {
    for args in [
        &["search", "--range", "1..100"][..],
        &["search", "--range", "100..3"],
        &["search", "--range", "3..100", "--formalism", "other"],
        &["cst", "--range", "1..10"],
        &["bounds", "classify", "1"],
        &[],
    ] {
        let code = paradox(args).status.code();
        assert!(code == Some(2) || code == Some(1), "{args:?} gave {code:?}");
        assert_ne!(code, Some(0));
    }
}
