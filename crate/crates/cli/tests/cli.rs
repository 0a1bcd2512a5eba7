use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn obbkit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obbkit")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hull_lists_vertices() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("pts.txt"), "0 0\n4 0\n4 3\n0 3\n2 1\n").unwrap();
    let out = stdout(&obbkit(&["hull", "pts.txt"], dir.path()));
    assert_eq!(out, "x,y\n0,0\n4,0\n4,3\n0,3\n");
}

#[test]
fn fit_seed_7_converges() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&obbkit(&["fit", "--seed", "7"], dir.path()));
    let last = out.lines().last().unwrap();
    let ciou: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!(ciou >= 0.99, "{last}");
    assert!(out.starts_with("step,ciou,x0,y0"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("fit.cfg"), "steps = 3\nstop_ciou = 1.0\nseed = 7\n").unwrap();
    let out = stdout(&obbkit(&["fit", "--config", "fit.cfg"], dir.path()));
    assert_eq!(out.lines().count(), 1 + 4);
    let out = stdout(&obbkit(&["fit", "--config", "fit.cfg", "--steps", "5"], dir.path()));
    assert_eq!(out.lines().count(), 1 + 6);
    fs::write(dir.path().join("bad.cfg"), "step = 3\n").unwrap();
    let o = obbkit(&["fit", "--config", "bad.cfg"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.cfg:1"));
}

#[test]
fn eval_of_perfect_synthetic_detections() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&obbkit(&["gen", "--seed", "5", "--images", "4", "--out", "g"], dir.path()));
    let out = stdout(&obbkit(
        &["eval", "--gts", "g/annotations", "--dets", "g/detections.txt", "--out", "m.csv"],
        dir.path(),
    ));
    assert!(out.is_empty());
    let table = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert!(table.starts_with("category,ap07,ap12\n"));
    assert_eq!(table.lines().last().unwrap(), "mAP,1,1");
}

#[test]
fn gen_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        stdout(&obbkit(&["gen", "--seed", "9", "--detections", "jitter", "--per-gt", "3", "--out", name], dir.path()));
    }
    let read = |n: &str, f: &str| fs::read(dir.path().join(n).join(f)).unwrap();
    assert_eq!(read("a", "detections.txt"), read("b", "detections.txt"));
    for e in fs::read_dir(dir.path().join("a/annotations")).unwrap() {
        let f = format!("annotations/{}", e.unwrap().file_name().to_string_lossy());
        assert_eq!(read("a", &f), read("b", &f));
    }
    stdout(&obbkit(&["gen", "--seed", "10", "--out", "c"], dir.path()));
    assert_ne!(read("a", "annotations/img0000.txt"), read("c", "annotations/img0000.txt"));
}

#[test]
fn epoch_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&obbkit(
        &["gen", "--seed", "2", "--images", "20", "--category-freq", "0.95,0.05", "--out", "g"],
        dir.path(),
    ));
    let a = stdout(&obbkit(&["epoch", "g/annotations", "--seed", "4"], dir.path()));
    let b = stdout(&obbkit(&["epoch", "g/annotations", "--seed", "4"], dir.path()));
    assert_eq!(a, b);
    assert!(a.lines().count() > 20);
}

#[test]
fn malformed_annotation_reports_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("P1.txt"), "0 0 4 0 4 2 0 2 car 0\n0 0 4 0 4 2 0 car 0\n").unwrap();
    fs::write(dir.path().join("d.txt"), "").unwrap();
    let o = obbkit(&["eval", "--gts", "P1.txt", "--dets", "d.txt"], dir.path());
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("P1.txt:2"), "{err}");
}

#[test]
fn nms_and_recall_tables() {
    let dir = tempfile::tempdir().unwrap();
    let gen = [
        "gen",
        "--seed",
        "1",
        "--images",
        "2",
        "--detections",
        "jitter",
        "--per-gt",
        "20",
        "--jitter-px",
        "4",
        "--out",
        "g",
    ];
    stdout(&obbkit(&gen, dir.path()));
    stdout(&obbkit(&["nms", "g/detections.txt", "--out", "kept.txt"], dir.path()));
    let kept = fs::read_to_string(dir.path().join("kept.txt")).unwrap();
    let all = fs::read_to_string(dir.path().join("g/detections.txt")).unwrap();
    assert!(kept.lines().count() < all.lines().count());
    let out = stdout(&obbkit(
        &["recall", "--gts", "g/annotations", "--proposals", "g/detections.txt", "--ks", "1,10,100"],
        dir.path(),
    ));
    let r: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(r.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(r[2], 1.0);
}

#[test]
fn remaining_subcommands_run() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("pts.txt"), "0 0\n4 0\n4 3\n0 3\n2 1\n").unwrap();
    fs::write(dir.path().join("box.txt"), "1 1\n5 1\n5 4\n1 4\n").unwrap();
    assert_eq!(stdout(&obbkit(&["minrect", "pts.txt"], dir.path())).lines().count(), 5);
    let c = stdout(&obbkit(&["ciou", "--pred", "pts.txt", "--target", "box.txt"], dir.path()));
    assert!(c.starts_with("ciou,hull_iou,loss\n"));
    let g = stdout(&obbkit(&["gradcheck", "--draws", "10", "--seed", "3"], dir.path()));
    assert_eq!(g.lines().count(), 11);
    let b = stdout(&obbkit(&["boundary-demo", "--steps", "36"], dir.path()));
    assert_eq!(b.lines().count(), 37);
    stdout(&obbkit(&["gen", "--seed", "1", "--images", "2", "--out", "g"], dir.path()));
    assert!(stdout(&obbkit(&["repeat-factors", "g/annotations"], dir.path())).starts_with("category,fraction,factor\n"));
    assert!(stdout(&obbkit(&["assign", "--gts", "g/annotations"], dir.path())).lines().count() > 1);
    let r = stdout(&obbkit(
        &["assign", "--gts", "g/annotations", "--proposals", "g/detections.txt", "--stage", "rcnn"],
        dir.path(),
    ));
    assert!(r.lines().skip(1).all(|l| !l.ends_with("background")));
}

#[test]
fn thread_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_obbkit"))
        .args(["gradcheck", "--draws", "4"])
        .env("OBBKIT_THREADS", "many")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(!o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_obbkit"))
        .args(["gradcheck", "--draws", "4"])
        .env("OBBKIT_THREADS", "1")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
}
