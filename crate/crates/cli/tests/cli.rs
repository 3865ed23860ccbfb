//! End-to-end CLI behavior: output shapes and the 0/1/2 exit-status
//! contract.

use std::io::Write;

use stringlink_cli::run;

fn sld(args: &[&str]) -> (u8, String) {
    let mut argv = vec!["sld".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let status = run(&argv, &mut out);
    (status, String::from_utf8(out).unwrap())
}

fn write_temp(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("sld-test-{}-{name}", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path.to_string_lossy().into_owned()
}

const SINGLE_CHORD: &str = "strands 2\nstrand 1: a\nstrand 2: a\n";
const CROSSING: &str = "strands 2\nstrand 1: a b\nstrand 2: b a\n";
const KNOT: &str = "strands 1\nstrand 1: a b a b\n";

#[test]
fn conway_prints_bit() {
    let file = write_temp("conway.sld", SINGLE_CHORD);
    let (status, out) = sld(&["conway", &file]);
    assert_eq!(status, 0);
    assert_eq!(out.trim(), "1");

    let file = write_temp("conway0.sld", CROSSING);
    let (_, out) = sld(&["conway", &file]);
    assert_eq!(out.trim(), "0");
}

#[test]
fn homfly_prints_monomial() {
    let file = write_temp("homfly.sld", CROSSING);
    let (status, out) = sld(&["homfly", &file]);
    assert_eq!(status, 0);
    assert_eq!(out.trim(), "a^2 b^1");
}

#[test]
fn adj_prints_matrix_rank_det() {
    let file = write_temp("adj.sld", KNOT);
    let (status, out) = sld(&["adj", &file]);
    assert_eq!(status, 0);
    assert_eq!(out, "01\n10\nrank=2\ndet=1\n");
}

#[test]
fn graph_text_and_dot() {
    let file = write_temp("graph.sld", KNOT);
    let (status, out) = sld(&["graph", &file]);
    assert_eq!(status, 0);
    assert_eq!(out, "vertex c1 {1,1}\nvertex c2 {1,1}\nedge c1 c2 both\n");
    let (status, dot) = sld(&["graph", "--dot", &file]);
    assert_eq!(status, 0);
    assert!(dot.starts_with("digraph G {"));
    assert!(dot.contains("[dir=none]"));
}

#[test]
fn validate_reports_shape_and_rejects_bad_input() {
    let file = write_temp("ok.sld", CROSSING);
    let (status, out) = sld(&["validate", &file]);
    assert_eq!(status, 0);
    assert!(out.contains("strands=2 chords=2"));
    assert!(out.contains("components=1"));
    assert!(out.trim_end().ends_with("ok"));

    let bad = write_temp("bad.sld", "strands 1\nstrand 1: a b a\n");
    let (status, out) = sld(&["validate", &bad]);
    assert_eq!(status, 2);
    assert!(out.contains("appears 1 time"));
}

#[test]
fn unreadable_file_is_input_error() {
    let (status, out) = sld(&["conway", "/nonexistent/diagram.sld"]);
    assert_eq!(status, 2);
    assert!(out.contains("error:"));
}

#[test]
fn unknown_subcommand_is_input_error() {
    let (status, _) = sld(&["frobnicate"]);
    assert_eq!(status, 2);
}

#[test]
fn normal_form_prints_summary_and_trace() {
    let file = write_temp("nf.sld", CROSSING);
    let (status, out) = sld(&["normal-form", "--trace", &file]);
    assert_eq!(status, 0);
    assert!(out.contains("strands 2\nstrand 1: c1 c1 c2\nstrand 2: c2"));
    assert!(out.contains("path=1,2 bridges=1 m1=1 m2=0"));
    assert!(out.lines().any(|l| l.starts_with("slide s")));

    let (status, quiet) = sld(&["normal-form", &file]);
    assert_eq!(status, 0);
    assert!(!quiet.lines().any(|l| l.starts_with("slide s")));
}

#[test]
fn product_and_coproduct() {
    let f1 = write_temp("p1.sld", SINGLE_CHORD);
    let f2 = write_temp("p2.sld", "strands 2\nstrand 1: z z\n");
    let (status, out) = sld(&["product", &f1, &f2]);
    assert_eq!(status, 0);
    assert_eq!(out.trim(), "strands 2\nstrand 1: c1 c2 c2\nstrand 2: c1");

    let (status, out) = sld(&["coproduct", &f1]);
    assert_eq!(status, 0);
    let lines: Vec<&str> = out.trim_end().lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.starts_with("+1·")));
    assert!(out.contains(" ⊗ "));
}

#[test]
fn enumerate_lists_canonical_keys() {
    let (status, out) = sld(&["enumerate", "--strands", "2", "--chords", "1"]);
    assert_eq!(status, 0);
    let lines: Vec<&str> = out.trim_end().lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.contains(&"strands 2; strand 1: c1; strand 2: c1"));

    let (_, connected) = sld(&["enumerate", "--strands", "2", "--chords", "1", "--connected"]);
    assert_eq!(connected.trim_end().lines().count(), 1);
}

#[test]
fn verify_exit_status_tracks_result() {
    let (status, out) = sld(&[
        "verify",
        "--suite",
        "conway2",
        "--strands",
        "2",
        "--max-chords",
        "2",
    ]);
    assert_eq!(status, 0);
    assert!(out.contains("cases=18 failures=0"));

    let (status, out) = sld(&["verify", "--suite", "bogus"]);
    assert_eq!(status, 2);
    assert!(out.contains("unknown suite"));
}

#[test]
fn collide_without_target_passes_on_two_strands() {
    let (status, out) = sld(&["collide", "--strands", "2", "--chords", "3"]);
    assert_eq!(status, 0);
    assert!(out.contains("collision classes=0"));
}

#[test]
fn collide_with_unmatched_target_misses() {
    // No 2-strand diagram of degree <= 2 has the zero 2x2 adjacency matrix
    // with a Conway-1 member, so the expectation is missed.
    let matrix = write_temp("target.mat", "01\n00\n");
    let (status, out) = sld(&[
        "collide", "--strands", "2", "--chords", "2", "--matrix", &matrix,
    ]);
    assert_eq!(status, 1);
    assert!(out.contains("collision=no"));
}

#[test]
fn help_is_success() {
    let (status, out) = sld(&["--help"]);
    assert_eq!(status, 0);
    assert!(out.contains("Usage"));
}
