//! End-to-end checks of the command-line surface and its exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn jasso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jasso"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const EXAMPLE_WORD: &str = "zc+ mr+ sn+ tg+ ba ca tg- sn- tc+ ba ln+ sn+ sn- tc+ sn+ ba \
                            sn- ch ca tc- ln- sn+ ln+ cu ch ln- ca sn- ch tc- cu ch mr- zc-";

#[test]
fn encode_prints_the_word() {
    let out = jasso(&["encode", data("example11.map").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), EXAMPLE_WORD);
}

#[test]
fn encode_report_sections() {
    let out = jasso(&["encode", data("example11.map").to_str().unwrap(), "--report"]);
    let text = stdout(&out);
    assert!(text.contains("visit-order a b c k d g j i h e f"));
    assert!(text.contains("sigma 2: c g f ch"));
    assert!(text.contains("sigma 2#: ba ca"));
    assert!(text.contains("color g c3"));
    assert!(text.contains("color h c2"));
}

#[test]
fn encode_rejects_bad_input() {
    let dir = tempdir();
    let bad = dir.join("bad.map");
    std::fs::write(&bad, "faces x y\nborder x: y y\nborder y: x x\nroot x y\n").unwrap();
    let out = jasso(&["encode", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.join("missing.map");
    let out = jasso(&["encode", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_verdicts() {
    let out = jasso(&["validate", data("example.word").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("valid: pairs 11, monomials 12, length 34"));

    let dir = tempdir();
    let mutated = dir.join("mutated.word");
    std::fs::write(&mutated, EXAMPLE_WORD.replace("tg+ ba ca tg-", "tg+ tg-")).unwrap();
    let out = jasso(&["validate", mutated.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("rule 4"));

    let garbage = dir.join("garbage.word");
    std::fs::write(&garbage, "zc+ xx").unwrap();
    let out = jasso(&["validate", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decode_emits_map_svg_geometry() {
    let dir = tempdir();
    let svg = dir.join("out.svg");
    let geom = dir.join("geom.txt");
    let out = jasso(&[
        "decode",
        data("example.word").to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--color",
        "--geometry",
        geom.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let map_text = stdout(&out);
    assert!(map_text.starts_with("faces w0 w1 w2"));
    assert!(map_text.contains("root w0 w1"));
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("<text").count(), 11);
    let geom_text = std::fs::read_to_string(&geom).unwrap();
    assert!(geom_text.contains("curve 2 (1,1) (1,13) (24,13) (24,1) (1,1)"));
    assert!(geom_text.contains("root-edge (23,13) (24,13) (24,1) (1,1) (1,13) (2,13)"));

    let bad = dir.join("bad.word");
    std::fs::write(&bad, "zc+ mr+ sn+ sn- mr- zc-").unwrap();
    let out = jasso(&["decode", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn equiv_and_oracle() {
    let dir = tempdir();
    // A relabeled copy of the example map (a->p, b->q, ...).
    let relabeled = dir.join("relabeled.map");
    std::fs::write(
        &relabeled,
        "faces p q r s t u v w x y z\n\
         border p: q u y v r\n\
         border q: p r s t u\n\
         border r: p v z v s q\n\
         border s: r v t q\n\
         border t: v u q s\n\
         border u: p q t v x y\n\
         border v: r p y w x u t s r z\n\
         border w: v y x\n\
         border x: u v w y\n\
         border y: x w v p u\n\
         border z: r v\n\
         root p q\n",
    )
    .unwrap();
    let out = jasso(&[
        "equiv",
        data("example11.map").to_str().unwrap(),
        relabeled.to_str().unwrap(),
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("equivalent"));
    assert!(stdout(&out).contains("oracle equivalent"));

    let out = jasso(&[
        "equiv",
        data("example11.map").to_str().unwrap(),
        data("theta.map").to_str().unwrap(),
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("distinct"));
}

#[test]
fn color_output() {
    let out = jasso(&["color", data("example11.map").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines.contains(&"a c0"));
    assert!(lines.contains(&"b c1"));
    assert!(lines.contains(&"e c2"));
    assert!(lines.contains(&"c c3"));
}

#[test]
fn roundtrip_both_modes() {
    let out = jasso(&[
        "roundtrip",
        "--mode",
        "word",
        data("example.word").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("identical (34 tokens)"));

    let out = jasso(&[
        "roundtrip",
        "--mode",
        "map",
        data("example11.map").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("equivalent after round-trip"));
}

#[test]
fn enumerate_counts_and_bound() {
    let out = jasso(&["enumerate", "4", "--check-injective"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("pairs 1 count 0"));
    assert!(text.contains("pairs 2 count 0"));
    assert!(text.contains("pairs 3 count 1"));
    assert!(text.contains("pairs 4 count 4"));
    assert!(text.contains("injective ok 5"));

    let out = jasso(&["enumerate", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "jasso-cli-test-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
